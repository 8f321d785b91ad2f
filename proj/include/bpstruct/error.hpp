#pragma once

#include <stdexcept>
#include <string>

namespace bpstruct {

// Malformed input document (JSON syntax, unknown fields, bad format tag).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally invalid model or net; the message names the violated invariant.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configurable size guard tripped (state explosion, event cap, poset cap).
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal contract violation: a precondition of a pipeline stage did not hold.
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace bpstruct
