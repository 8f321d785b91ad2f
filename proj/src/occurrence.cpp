#include "bpstruct/occurrence.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

#include "bpstruct/error.hpp"

namespace bpstruct {

int OccurrenceNet::add_condition(int origin, int pre_event) {
    conditions.push_back({origin, pre_event, {}});
    int c = static_cast<int>(conditions.size()) - 1;
    if (pre_event >= 0) events[pre_event].post.push_back(c);
    return c;
}

int OccurrenceNet::add_event(int origin, std::string label, const std::vector<int>& pre_conditions) {
    events.push_back({origin, std::move(label), pre_conditions, {}});
    int e = static_cast<int>(events.size()) - 1;
    for (int c : pre_conditions) conditions[c].post.push_back(e);
    return e;
}

void OccurrenceNet::remove_flow(int condition, int event) {
    auto& post = conditions[condition].post;
    post.erase(std::remove(post.begin(), post.end(), event), post.end());
    auto& pre = events[event].pre;
    pre.erase(std::remove(pre.begin(), pre.end(), condition), pre.end());
}

std::vector<int> OccurrenceNet::initial_conditions() const {
    std::vector<int> out;
    for (std::size_t c = 0; c < conditions.size(); ++c)
        if (conditions[c].pre < 0) out.push_back(static_cast<int>(c));
    return out;
}

std::vector<int> OccurrenceNet::topological_events() const {
    std::vector<int> indeg(events.size(), 0), order;
    for (std::size_t e = 0; e < events.size(); ++e)
        for (int c : events[e].pre)
            if (conditions[c].pre >= 0) ++indeg[e];
    std::deque<int> q;
    for (std::size_t e = 0; e < events.size(); ++e)
        if (indeg[e] == 0) q.push_back(static_cast<int>(e));
    while (!q.empty()) {
        int e = q.front();
        q.pop_front();
        order.push_back(e);
        for (int c : events[e].post)
            for (int f : conditions[c].post)
                if (--indeg[f] == 0) q.push_back(f);
    }
    if (order.size() != events.size()) throw ContractError("occurrence net is cyclic");
    return order;
}

std::string_view to_string(Relation r) {
    switch (r) {
        case Relation::causal: return "causal";
        case Relation::inverse_causal: return "inverse-causal";
        case Relation::conflict: return "conflict";
        case Relation::concurrent: return "concurrent";
    }
    return "?";
}

OrderingRelations::OrderingRelations(const OccurrenceNet& net) : net_(&net) {
    const std::size_t n = net.node_count();
    after_.assign(n, Bitset(n));
    conflict_.assign(n, Bitset(n));

    // Reverse topological sweep over events; conditions follow their post-events.
    auto order = net.topological_events();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int e = *it;
        int en = net.event_node(e);
        for (int c : net.events[e].post) {
            int cn = net.condition_node(c);
            after_[cn].reset();
            for (int f : net.conditions[c].post) {
                after_[cn].set(net.event_node(f));
                after_[cn] |= after_[net.event_node(f)];
            }
            after_[en].set(cn);
            after_[en] |= after_[cn];
        }
    }
    for (std::size_t c = 0; c < net.conditions.size(); ++c) {
        if (net.conditions[c].pre >= 0) continue;
        int cn = net.condition_node(static_cast<int>(c));
        for (int f : net.conditions[c].post) {
            after_[cn].set(net.event_node(f));
            after_[cn] |= after_[net.event_node(f)];
        }
    }

    // x # y iff distinct t1, t2 share a pre-condition with t1 <= x, t2 <= y.
    for (std::size_t c = 0; c < net.conditions.size(); ++c) {
        const auto& post = net.conditions[c].post;
        for (std::size_t i = 0; i < post.size(); ++i) {
            for (std::size_t j = 0; j < post.size(); ++j) {
                if (i == j) continue;
                int a = net.event_node(post[i]), b = net.event_node(post[j]);
                Bitset down_b = after_[b];
                down_b.set(b);
                for (auto x = after_[a].find_first();; x = after_[a].find_next(x)) {
                    std::size_t xi = (x == Bitset::npos) ? static_cast<std::size_t>(a) : x;
                    conflict_[xi] |= down_b;
                    if (x == Bitset::npos) break;
                }
            }
        }
    }
}

Relation OrderingRelations::between(int x, int y, bool reflexive) const {
    if (x == y && reflexive) return Relation::causal;
    if (after_[x][y]) return Relation::causal;
    if (after_[y][x]) return Relation::inverse_causal;
    if (conflict_[x][y]) return Relation::conflict;
    return Relation::concurrent;
}

Relation OrderingRelations::between_events(int e1, int e2) const {
    return between(net_->event_node(e1), net_->event_node(e2));
}

bool OrderingRelations::has_self_conflict() const {
    for (std::size_t x = 0; x < conflict_.size(); ++x)
        if (conflict_[x][x]) return true;
    return false;
}

void check_occurrence_net(const OccurrenceNet& net) {
    for (std::size_t c = 0; c < net.conditions.size(); ++c) {
        int pre = net.conditions[c].pre;
        if (pre >= 0) {
            const auto& post = net.events[pre].post;
            if (std::find(post.begin(), post.end(), static_cast<int>(c)) == post.end())
                throw ContractError("inconsistent flow at condition " + std::to_string(c));
        }
    }
    OrderingRelations rel(net);  // throws on cycles
    if (rel.has_self_conflict()) throw ContractError("occurrence net has an event in self-conflict");
}

bool is_configuration(const OccurrenceNet& net, const OrderingRelations& rel, const std::vector<int>& events,
                      std::string* why) {
    std::set<int> in(events.begin(), events.end());
    for (int e : events) {
        for (int c : net.events[e].pre) {
            int p = net.conditions[c].pre;
            if (p >= 0 && !in.count(p)) {
                if (why) *why = "not causally closed: e" + std::to_string(p) + " < e" + std::to_string(e);
                return false;
            }
        }
        for (int f : events) {
            if (rel.conflict(net.event_node(e), net.event_node(f))) {
                if (why) *why = "conflict between e" + std::to_string(e) + " and e" + std::to_string(f);
                return false;
            }
        }
    }
    return true;
}

std::vector<int> cut_of(const OccurrenceNet& net, const std::vector<int>& config) {
    std::set<int> cut;
    for (int c : net.initial_conditions()) cut.insert(c);
    for (int e : config)
        for (int c : net.events[e].post) cut.insert(c);
    for (int e : config)
        for (int c : net.events[e].pre) cut.erase(c);
    return {cut.begin(), cut.end()};
}

namespace {

// Include/exclude search over events in topological order.
void configurations(const OccurrenceNet& net, const OrderingRelations& rel, bool maximal_only, std::size_t max_count,
                    std::vector<std::vector<int>>& out) {
    auto order = net.topological_events();
    const std::size_t n = net.node_count();
    Bitset included(n);
    std::vector<int> chosen;

    auto includable = [&](int e) {
        for (int c : net.events[e].pre) {
            int p = net.conditions[c].pre;
            if (p >= 0 && !included[net.event_node(p)]) return false;
        }
        return !(rel.conflicts(net.event_node(e)) & included).any();
    };

    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == order.size()) {
            if (maximal_only) {
                for (int e : order)
                    if (!included[net.event_node(e)] && includable(e)) return;
            }
            if (out.size() >= max_count)
                throw GuardError("configuration count exceeds " + std::to_string(max_count));
            auto c = chosen;
            std::sort(c.begin(), c.end());
            out.push_back(std::move(c));
            return;
        }
        int e = order[i];
        int en = net.event_node(e);
        if (!includable(e)) {
            rec(i + 1);
            return;
        }
        included.set(en);
        chosen.push_back(e);
        rec(i + 1);
        chosen.pop_back();
        included.reset(en);
        // A conflict-free event can only be dropped by non-maximal configurations.
        if (!maximal_only || rel.conflicts(en).any()) rec(i + 1);
    };
    rec(0);
    std::sort(out.begin(), out.end());
}

}  // namespace

std::vector<std::vector<int>> all_configurations(const OccurrenceNet& net, const OrderingRelations& rel,
                                                 std::size_t max_count) {
    std::vector<std::vector<int>> out;
    configurations(net, rel, false, max_count, out);
    return out;
}

std::vector<std::vector<int>> maximal_configurations(const OccurrenceNet& net, const OrderingRelations& rel,
                                                     std::size_t max_count) {
    std::vector<std::vector<int>> out;
    configurations(net, rel, true, max_count, out);
    return out;
}

std::string export_occurrence_dot(const OccurrenceNet& net, const std::vector<int>& corr,
                                  const std::vector<std::string>& condition_names) {
    std::ostringstream os;
    os << "digraph occurrence {\n  rankdir=LR;\n";
    for (std::size_t c = 0; c < net.conditions.size(); ++c) {
        os << "  \"b" << c << "\" [shape=circle, label=\"";
        if (c < condition_names.size())
            os << condition_names[c];
        else
            os << "b" << c;
        os << "\"];\n";
    }
    for (std::size_t e = 0; e < net.events.size(); ++e)
        os << "  \"e" << e << "\" [shape=box, label=\"e" << e << ":"
           << (net.events[e].label.empty() ? std::string("tau") : net.events[e].label) << "\"];\n";
    for (std::size_t e = 0; e < net.events.size(); ++e) {
        for (int c : net.events[e].pre) os << "  \"b" << c << "\" -> \"e" << e << "\";\n";
        for (int c : net.events[e].post) os << "  \"e" << e << "\" -> \"b" << c << "\";\n";
    }
    for (std::size_t e = 0; e < corr.size(); ++e)
        if (corr[e] >= 0) os << "  \"e" << e << "\" -> \"e" << corr[e] << "\" [style=dotted];\n";
    os << "}\n";
    return os.str();
}

}  // namespace bpstruct
