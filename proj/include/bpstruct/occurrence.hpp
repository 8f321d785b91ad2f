#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace bpstruct {

using Bitset = boost::dynamic_bitset<>;

// Acyclic net of conditions and events. Each condition has at most one
// pre-event. `origin` carries the homomorphism image (place/transition index)
// where one exists, -1 otherwise.
struct OccurrenceNet {
    struct Condition {
        int origin = -1;
        int pre = -1;
        std::vector<int> post;
    };
    struct Event {
        int origin = -1;
        std::string label;
        std::vector<int> pre;
        std::vector<int> post;
    };

    std::vector<Condition> conditions;
    std::vector<Event> events;

    int add_condition(int origin, int pre_event);
    int add_event(int origin, std::string label, const std::vector<int>& pre_conditions);
    void remove_flow(int condition, int event);

    std::size_t node_count() const { return conditions.size() + events.size(); }
    int condition_node(int c) const { return c; }
    int event_node(int e) const { return static_cast<int>(conditions.size()) + e; }
    bool node_is_event(int n) const { return n >= static_cast<int>(conditions.size()); }
    int node_index(int n) const { return node_is_event(n) ? n - static_cast<int>(conditions.size()) : n; }

    std::vector<int> initial_conditions() const;
    // Events in an order where every event follows its causal predecessors.
    std::vector<int> topological_events() const;
};

enum class Relation { causal, inverse_causal, conflict, concurrent };

std::string_view to_string(Relation r);

// The four ordering relations of an occurrence net, over all node pairs.
// Computed once; the net must not change afterwards.
class OrderingRelations {
public:
    explicit OrderingRelations(const OccurrenceNet& net);

    // Distinct-node query; `x == y` answers causal only when reflexive is set.
    Relation between(int x, int y, bool reflexive = false) const;
    Relation between_events(int e1, int e2) const;

    bool causal(int x, int y) const { return after_[x][y]; }  // (x,y) in F+
    bool conflict(int x, int y) const { return conflict_[x][y]; }
    const Bitset& after(int x) const { return after_[x]; }
    const Bitset& conflicts(int x) const { return conflict_[x]; }

    bool has_self_conflict() const;

private:
    const OccurrenceNet* net_;
    std::vector<Bitset> after_;
    std::vector<Bitset> conflict_;
};

// Throws ContractError when the net breaks an occurrence-net law.
void check_occurrence_net(const OccurrenceNet& net);

// Event sets that are causally closed and conflict-free.
bool is_configuration(const OccurrenceNet& net, const OrderingRelations& rel, const std::vector<int>& events,
                      std::string* why = nullptr);

// (Min ∪ C•) \ •C, sorted condition indices.
std::vector<int> cut_of(const OccurrenceNet& net, const std::vector<int>& config);

std::vector<std::vector<int>> all_configurations(const OccurrenceNet& net, const OrderingRelations& rel,
                                                 std::size_t max_count);
std::vector<std::vector<int>> maximal_configurations(const OccurrenceNet& net, const OrderingRelations& rel,
                                                     std::size_t max_count);

std::string export_occurrence_dot(const OccurrenceNet& net, const std::vector<int>& corr = {},
                                  const std::vector<std::string>& condition_names = {});

}  // namespace bpstruct
