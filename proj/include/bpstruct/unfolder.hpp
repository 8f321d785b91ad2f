#pragma once

#include <cstddef>
#include <compare>
#include <string>
#include <vector>

#include "bpstruct/net.hpp"
#include "bpstruct/occurrence.hpp"

namespace bpstruct {

// Adequate-order key of a local configuration: size, then the Parikh vector
// (occurrence count per transition, compared at the first differing
// transition), then the Foata normal form level by level.
struct ConfigKey {
    int event = -1;
    std::size_t size = 0;
    std::vector<int> parikh;
    std::vector<std::vector<int>> foata;

    // Orders by configuration only; the event id is not part of the order.
    std::weak_ordering operator<=>(const ConfigKey& other) const;
    bool operator==(const ConfigKey& other) const { return (*this <=> other) == 0; }
};

// A branching process of a net system: conditions map to places and events
// to transitions through `origin`. Cutoff events carry their corresponding
// event in `corr`; `healthy` flags cutoffs that truncate the prefix.
struct Prefix {
    OccurrenceNet net;
    std::size_t place_count = 0;
    std::vector<int> corr;
    std::vector<bool> healthy;
    std::vector<ConfigKey> keys;
    std::vector<std::vector<int>> local_configs;

    bool is_cutoff(int e) const { return corr[e] >= 0; }
    bool is_healthy_cutoff(int e) const { return corr[e] >= 0 && healthy[e]; }
    std::size_t cutoff_count() const;
};

struct UnfoldOptions {
    std::size_t max_events = 100'000;
    // When false, no event is treated as a cutoff (full unfolding of an
    // acyclic system).
    bool truncate = true;
};

Prefix unfold_proper_prefix(const NetSystem& sys, const UnfoldOptions& opts = {});
Prefix unfold_full(const NetSystem& sys, std::size_t max_events = 100'000);

// Ordering relation between two prefix nodes (see OccurrenceNet node ids).
Relation ordering_relation(const Prefix& prefix, const OrderingRelations& rel, int x, int y, bool reflexive = false);

// Cut(C) and Mark(C); throw ContractError "not a configuration" otherwise.
std::vector<int> prefix_cut(const Prefix& prefix, const std::vector<int>& config);
Marking mark_of(const Prefix& prefix, const std::vector<int>& config);

std::string export_prefix_dot(const Prefix& prefix, const WfNet& net);

}  // namespace bpstruct
