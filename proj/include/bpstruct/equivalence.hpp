#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bpstruct/model.hpp"
#include "bpstruct/net.hpp"
#include "bpstruct/occurrence.hpp"

namespace bpstruct {

// Observable part of one maximal run: labelled elements under a strict,
// transitively closed order (order[x][y] means x precedes y).
struct PomsetRun {
    std::vector<std::string> labels;
    std::vector<Bitset> order;

    // Isomorphism-invariant encoding; equal iff the runs are isomorphic.
    std::string canonical() const;
};

struct RunLimits {
    std::size_t max_events = 100'000;
    std::size_t max_runs = 100'000;
};

// Runs of the full unfolding, one per isomorphism class, sorted by canonical form.
std::vector<PomsetRun> enumerate_runs(const NetSystem& sys, const RunLimits& limits = {});
std::vector<PomsetRun> enumerate_runs(const ProcessModel& m, const RunLimits& limits = {});

// Canonical forms of the runs of an occurrence net taken as a net system
// whose initial conditions carry one token each.
std::vector<std::string> occurrence_net_runs(const OccurrenceNet& net, const RunLimits& limits = {});

std::vector<std::string> canonical_run_set(const NetSystem& sys, const RunLimits& limits = {});

std::string format_run(const PomsetRun& run);

// Pomset run set equality. On failure `witness` (if given) describes a run
// found on exactly one side.
bool equivalent(const ProcessModel& a, const ProcessModel& b, std::string* witness = nullptr,
                const RunLimits& limits = {});

}  // namespace bpstruct
