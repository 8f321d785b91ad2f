#pragma once

#include <map>
#include <string>
#include <vector>

#include "bpstruct/mdt.hpp"
#include "bpstruct/model.hpp"
#include "bpstruct/net.hpp"
#include "bpstruct/org.hpp"
#include "bpstruct/synthesis.hpp"

namespace bpstruct {

struct StructuringOptions {
    std::size_t max_states = kDefaultMaxStates;
    std::size_t max_events = 100'000;
    SynthesisOptions synthesis;
};

enum class RigidOutcome { fully_structured, maximally_structured_with_synthesis };

std::string_view to_string(RigidOutcome o);

// Census of module classes; primitives are split by concurrency.
struct ModuleCensus {
    std::size_t trivial = 0, linear = 0, xor_complete = 0, and_complete = 0;
    std::size_t sequential_primitive = 0, concurrent_primitive = 0;

    void add(const MdtNode& root);
    ModuleCensus& operator+=(const ModuleCensus& o);
    bool operator==(const ModuleCensus&) const = default;
};

struct RigidReport {
    std::string entry, exit;
    RigidOutcome outcome = RigidOutcome::fully_structured;
    ModuleCensus census;
};

struct StructuringReport {
    std::vector<RigidReport> rigids;
    ModuleCensus census;
    std::size_t rigids_before = 0;
    std::size_t rigids_after = 0;
};

struct StructuringResult {
    ProcessModel model;
    StructuringReport report;
};

// Validates m, gates on soundness, and replaces every rigid component by its
// maximally structured counterpart.
StructuringResult structure_model(const ProcessModel& m, const StructuringOptions& opts = {});

struct RigidAnalysis {
    OrderingRelationsGraph org;
    MdtNode mdt;
};

// `component` is a lifted rigid: source task "@i", sink task "@o". The result
// has the same frame.
ProcessModel structure_rigid(const ProcessModel& component, const StructuringOptions& opts = {},
                             RigidAnalysis* analysis = nullptr);

// Well-structured model over the vertices of a concurrency-free graph whose
// runs are the maximal histories of the graph. Framed by "@i"/"@o".
ProcessModel restructure_sequential_primitive(const OrderingRelationsGraph& sub);

std::string report_to_json(const StructuringReport& r);

}  // namespace bpstruct
