#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bpstruct/model.hpp"
#include "bpstruct/net.hpp"
#include "bpstruct/occurrence.hpp"
#include "bpstruct/org.hpp"

namespace bpstruct {

inline constexpr std::size_t kDefaultMaxPoset = std::size_t{1} << 20;
inline constexpr std::size_t kDefaultFoldBudget = 100'000;

// Histories over a vertex universe, ordered by inclusion. Elements are kept
// sorted by size, then by bit pattern.
struct Poset {
    std::size_t universe = 0;
    std::vector<Bitset> elements;
    std::vector<std::string> labels;  // per universe vertex
    int in = -1, out = -1;            // fresh vertices of an augmented poset

    int index_of(const Bitset& x) const;  // -1 when absent
    std::vector<int> maximal() const;
    // Elements with exactly one lower cover.
    std::vector<int> primes() const;
    std::vector<int> lower_covers(int x) const;
};

Poset build_poset(const OrderingRelationsGraph& g, std::size_t max_elements = kDefaultMaxPoset);
Poset augment_poset(const Poset& p);

bool is_coherent(const Poset& p);
bool is_prime_algebraic(const Poset& p);

struct EventStructure {
    std::vector<std::string> labels;
    std::vector<Bitset> before;    // before[e][f]: e < f
    std::vector<Bitset> conflict;  // symmetric, irreflexive

    std::size_t size() const { return labels.size(); }
    bool operator==(const EventStructure&) const = default;
};

// Events are the primes of p in element order; i and o primes carry the
// boundary labels.
EventStructure poset_to_event_structure(const Poset& p);

// Throws ContractError unless causality is a strict partial order and
// conflict is symmetric, irreflexive and hereditary.
void check_event_structure(const EventStructure& es);

// Causality and conflict among the events of an occurrence net, labels from the events.
EventStructure net_event_structure(const OccurrenceNet& net);

enum class ConditionRole { required, redundant, subsumed, transitive };

std::string_view to_string(ConditionRole r);

struct SynthNet {
    OccurrenceNet net;  // event e corresponds to event e of the source structure
    std::vector<ConditionRole> roles;
};

SynthNet es_to_occurrence_net(const EventStructure& es, std::size_t max_conditions = 200'000);

bool is_redundant(const OccurrenceNet& net, int b);
bool is_subsumed(const OccurrenceNet& net, int b);
// For two or more post-events: some post-event e'' of b follows an event of a
// sibling condition that shares another post-event e' with b, or a condition
// with a later pre-event holds all post-events of b, or every conflict among
// the post-events of b is inherited from earlier events or held by another
// condition. In every case,
// removing b leaves causality and conflict between all events unchanged and
// every event with a pre-condition.
bool is_transitive_conflict(const OccurrenceNet& net, int b);

// Drops redundant, subsumed and multi-post transitive conditions. Single-post
// transitive conditions stay, marked ConditionRole::transitive.
SynthNet simplify(const SynthNet& onet);

// Copy of `net` keeping the conditions flagged in `keep`; events are unchanged.
OccurrenceNet keep_conditions(const OccurrenceNet& net, const std::vector<bool>& keep);

struct FoldedNet {
    NetSystem system;
    std::vector<int> condition_class;  // -1 for dropped transitive conditions
    std::vector<int> event_class;
    ProcessModel model;
    std::size_t expansions = 0;
    bool budget_exceeded = false;
};

FoldedNet fold(const SynthNet& onet, std::size_t budget = kDefaultFoldBudget);

struct SynthesisOptions {
    std::size_t max_poset = kDefaultMaxPoset;
    std::size_t fold_budget = kDefaultFoldBudget;
};

struct SynthesisTrace {
    Poset poset;
    Poset augmented;
    EventStructure es;
    SynthNet onet;
    SynthNet simplified;
    FoldedNet folded;
};

// Model with source task "@i" and sink task "@o" whose other tasks carry the
// vertex labels of g.
ProcessModel synthesize_component(const OrderingRelationsGraph& g, const SynthesisOptions& opts = {},
                                  SynthesisTrace* trace = nullptr);

std::string format_poset(const Poset& p);
std::string export_es_dot(const EventStructure& es);
std::string export_synth_net_dot(const SynthNet& s);

}  // namespace bpstruct
