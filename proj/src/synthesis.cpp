#include "bpstruct/synthesis.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "bpstruct/equivalence.hpp"
#include "bpstruct/error.hpp"

namespace bpstruct {

std::string_view to_string(ConditionRole r) {
    switch (r) {
        case ConditionRole::required: return "required";
        case ConditionRole::redundant: return "redundant";
        case ConditionRole::subsumed: return "subsumed";
        case ConditionRole::transitive: return "transitive";
    }
    return "?";
}

SynthNet es_to_occurrence_net(const EventStructure& es, std::size_t max_conditions) {
    const std::size_t m = es.size();
    if (m == 0) throw ContractError("event structure is empty");
    SynthNet out;
    auto& net = out.net;
    for (std::size_t e = 0; e < m; ++e) net.add_event(static_cast<int>(e), es.labels[e], {});

    auto add = [&](int pre, const Bitset& x) {
        if (net.conditions.size() >= max_conditions) throw GuardError("condition count exceeds " + std::to_string(max_conditions));
        int c = net.add_condition(-1, pre);
        for (auto e = x.find_first(); e != Bitset::npos; e = x.find_next(e)) {
            net.conditions[c].post.push_back(static_cast<int>(e));
            net.events[e].pre.push_back(c);
        }
    };
    Bitset all(m);
    all.set();
    Bitset none(m);
    // One condition per conflict clique of `cand`; the empty clique only below an event.
    std::function<void(const Bitset&, int)> run = [&](const Bitset& cand, int pre) {
        if (pre >= 0) add(pre, none);
        for (auto v = cand.find_first(); v != Bitset::npos; v = cand.find_next(v)) {
            Bitset cur = none;
            cur.set(v);
            Bitset rest = cand & es.conflict[v];
            std::function<void(const Bitset&, const Bitset&, std::size_t)> grow = [&](const Bitset& c, const Bitset& x,
                                                                                   std::size_t after) {
                add(pre, x);
                for (auto w = c.find_next(after); w != Bitset::npos; w = c.find_next(w)) {
                    Bitset y = x;
                    y.set(w);
                    grow(c & es.conflict[w], y, w);
                }
            };
            grow(rest, cur, v);
        }
    };
    run(all, -1);
    for (std::size_t e = 0; e < m; ++e) run(es.before[e], static_cast<int>(e));
    out.roles.assign(net.conditions.size(), ConditionRole::required);
    return out;
}

OccurrenceNet keep_conditions(const OccurrenceNet& net, const std::vector<bool>& keep) {
    OccurrenceNet out;
    std::vector<int> map(net.conditions.size(), -1);
    for (const auto& e : net.events) out.events.push_back({e.origin, e.label, {}, {}});
    for (std::size_t c = 0; c < net.conditions.size(); ++c) {
        if (!keep[c]) continue;
        map[c] = out.add_condition(net.conditions[c].origin, net.conditions[c].pre);
    }
    for (std::size_t c = 0; c < net.conditions.size(); ++c) {
        if (!keep[c]) continue;
        for (int e : net.conditions[c].post) {
            out.conditions[map[c]].post.push_back(e);
            out.events[e].pre.push_back(map[c]);
        }
    }
    return out;
}

namespace {

std::vector<int> sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

bool redundant_in(const OccurrenceNet& net, const std::vector<bool>& keep, int b) {
    const auto& cb = net.conditions[b];
    if (cb.post.empty() && cb.pre >= 0) {
        for (int other : net.events[cb.pre].post)
            if (other != b && keep[other]) return true;
    }
    if (cb.pre < 0) {
        auto post = sorted(cb.post);
        for (std::size_t o = 0; o < net.conditions.size(); ++o) {
            if (static_cast<int>(o) == b || !keep[o]) continue;
            if (net.conditions[o].pre >= 0 && sorted(net.conditions[o].post) == post) return true;
        }
    }
    return false;
}

bool subsumed_in(const OccurrenceNet& net, const std::vector<bool>& keep, int b) {
    const auto& cb = net.conditions[b];
    auto post = sorted(cb.post);
    for (std::size_t o = 0; o < net.conditions.size(); ++o) {
        if (static_cast<int>(o) == b || !keep[o] || net.conditions[o].pre != cb.pre) continue;
        auto other = sorted(net.conditions[o].post);
        if (std::includes(other.begin(), other.end(), post.begin(), post.end())) return true;
    }
    return false;
}

bool same_relations(const EventStructure& a, const EventStructure& b) {
    return a.before == b.before && a.conflict == b.conflict;
}

// A sibling b' (same pre-event) shares e' with b and holds an event e that
// causally precedes another post-event e'' of b, so e'' # e' is inherited.
bool inherited_in(const OccurrenceNet& net, const std::vector<bool>& keep, const OrderingRelations& rel, int b) {
    const auto& cb = net.conditions[b];
    for (std::size_t o = 0; o < net.conditions.size(); ++o) {
        const auto& co = net.conditions[o];
        if (static_cast<int>(o) == b || !keep[o] || co.pre != cb.pre) continue;
        for (int shared : cb.post) {
            if (std::find(co.post.begin(), co.post.end(), shared) == co.post.end()) continue;
            for (int later : cb.post) {
                if (later == shared) continue;
                for (int e : co.post)
                    if (e != shared && e != later && rel.causal(net.event_node(e), net.event_node(later))) return true;
            }
        }
    }
    return false;
}

// Every conflict among the post-events of b follows from a conflict between
// causal predecessors or is held by another condition.
bool conflicts_covered(const EventStructure& es, const OccurrenceNet& net, const std::vector<bool>& keep, int b,
                       bool allow_shared = true) {
    const auto& post = net.conditions[b].post;
    auto shared = [&](int x, int y) {
        if (!allow_shared) return false;
        for (std::size_t o = 0; o < net.conditions.size(); ++o) {
            if (static_cast<int>(o) == b || !keep[o]) continue;
            const auto& q = net.conditions[o].post;
            if (std::find(q.begin(), q.end(), x) != q.end() && std::find(q.begin(), q.end(), y) != q.end()) return true;
        }
        return false;
    };
    const std::size_t m = es.size();
    for (std::size_t i = 0; i < post.size(); ++i)
        for (std::size_t j = i + 1; j < post.size(); ++j) {
            int x = post[i], y = post[j];
            bool inherited = shared(x, y);
            for (std::size_t u = 0; u < m && !inherited; ++u) {
                if (static_cast<int>(u) != x && !es.before[u][x]) continue;
                for (std::size_t v = 0; v < m && !inherited; ++v) {
                    if (static_cast<int>(v) != y && !es.before[v][y]) continue;
                    inherited = (static_cast<int>(u) != x || static_cast<int>(v) != y) && es.conflict[u][v];
                }
            }
            if (!inherited) return false;
        }
    return true;
}

// A condition with a later pre-event already holds every post-event of b.
bool dominated_in(const OccurrenceNet& net, const std::vector<bool>& keep, const OrderingRelations& rel, int b) {
    const auto& cb = net.conditions[b];
    auto post = sorted(cb.post);
    for (std::size_t o = 0; o < net.conditions.size(); ++o) {
        const auto& co = net.conditions[o];
        if (static_cast<int>(o) == b || !keep[o] || co.pre < 0) continue;
        if (cb.pre >= 0 && !rel.causal(net.event_node(cb.pre), net.event_node(co.pre))) continue;
        auto other = sorted(co.post);
        if (std::includes(other.begin(), other.end(), post.begin(), post.end())) return true;
    }
    return false;
}

bool transitive_in(const OccurrenceNet& net, std::vector<bool> keep, int b, const EventStructure& target) {
    keep[b] = false;
    auto rest = keep_conditions(net, keep);
    // An event without pre-conditions could fire repeatedly.
    for (const auto& e : rest.events)
        if (e.pre.empty()) return false;
    return same_relations(net_event_structure(rest), target);
}

}  // namespace

bool is_redundant(const OccurrenceNet& net, int b) {
    return redundant_in(net, std::vector<bool>(net.conditions.size(), true), b);
}

bool is_subsumed(const OccurrenceNet& net, int b) {
    return subsumed_in(net, std::vector<bool>(net.conditions.size(), true), b);
}

bool is_transitive_conflict(const OccurrenceNet& net, int b) {
    std::vector<bool> keep(net.conditions.size(), true);
    if (net.conditions[b].post.size() >= 2) {
        OrderingRelations rel(net);
        if (!inherited_in(net, keep, rel, b) && !dominated_in(net, keep, rel, b) &&
            !conflicts_covered(net_event_structure(net), net, keep, b))
            return false;
    }
    return transitive_in(net, keep, b, net_event_structure(net));
}

SynthNet simplify(const SynthNet& onet) {
    const auto& net = onet.net;
    const std::size_t nb = net.conditions.size();
    const auto target = net_event_structure(net);
    std::vector<bool> keep(nb, true);

    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t b = 0; b < nb; ++b) {
            if (keep[b] && (redundant_in(net, keep, static_cast<int>(b)) || subsumed_in(net, keep, static_cast<int>(b)))) {
                keep[b] = false;
                changed = true;
            }
        }
    }
    // Inherited conflicts go first; conflicts held by other conditions only
    // after that, so a choice condition is not dropped for its late copies.
    const OrderingRelations rel(net);
    for (bool allow_shared : {false, true}) {
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t b = 0; b < nb; ++b) {
                int c = static_cast<int>(b);
                if (keep[b] && net.conditions[b].post.size() >= 2 &&
                    (inherited_in(net, keep, rel, c) || dominated_in(net, keep, rel, c) ||
                     conflicts_covered(target, net, keep, c, allow_shared)) &&
                    transitive_in(net, keep, c, target)) {
                    keep[b] = false;
                    changed = true;
                }
            }
        }
    }

    // Single-post conditions that carry no ordering information of their own
    // stay as optional material for folding.
    std::vector<bool> required = keep;
    std::vector<bool> optional(nb, false);
    for (std::size_t b = 0; b < nb; ++b) {
        if (required[b] && net.conditions[b].post.size() == 1 && transitive_in(net, required, static_cast<int>(b), target)) {
            required[b] = false;
            optional[b] = true;
        }
    }

    SynthNet out;
    out.net = keep_conditions(net, keep);
    for (std::size_t b = 0; b < nb; ++b)
        if (keep[b]) out.roles.push_back(optional[b] ? ConditionRole::transitive : ConditionRole::required);
    return out;
}

namespace {

class Folder {
public:
    Folder(const SynthNet& s, std::size_t budget) : s_(s), net_(s.net), rel_(s.net), budget_(budget) {
        nb_ = net_.conditions.size();
        ne_ = net_.events.size();
        std::vector<bool> req(nb_);
        for (std::size_t b = 0; b < nb_; ++b) req[b] = !optional(static_cast<int>(b));
        target_runs_ = occurrence_net_runs(keep_conditions(net_, req));
        order_nodes();
        class_of_.assign(nb_ + ne_, -1);
    }

    FoldedNet run() {
        dfs(0);
        if (!best_) {
            if (exceeded_) throw GuardError("folding budget exhausted without a valid quotient");
            throw ContractError("folding found no valid quotient");
        }
        best_->expansions = expansions_;
        best_->budget_exceeded = exceeded_;
        return std::move(*best_);
    }

private:
    struct Cls {
        bool event;
        std::string label;
        std::vector<int> post_sig;
        std::vector<int> members;
        int solid = 0;  // members that are not optional conditions
    };

    bool optional(int b) const { return s_.roles[b] == ConditionRole::transitive; }
    bool is_event(int node) const { return node >= static_cast<int>(nb_); }
    int node_of_event(int e) const { return static_cast<int>(nb_) + e; }
    // The occurrence-net relation index of a node.
    int rel_node(int node) const { return is_event(node) ? net_.event_node(node - static_cast<int>(nb_)) : node; }

    void order_nodes() {
        const std::size_t n = nb_ + ne_;
        std::vector<int> height(n, -1);
        std::function<int(int)> h = [&](int x) -> int {
            if (height[x] >= 0) return height[x];
            int best = 0;
            if (is_event(x)) {
                for (int c : net_.events[x - nb_].post) best = std::max(best, h(c) + 1);
            } else {
                for (int e : net_.conditions[x].post) best = std::max(best, h(node_of_event(e)) + 1);
            }
            return height[x] = best;
        };
        for (std::size_t x = 0; x < n; ++x) {
            h(static_cast<int>(x));
            order_.push_back(static_cast<int>(x));
        }
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) { return height[a] < height[b]; });
    }

    std::vector<int> post_sig(int x) const {
        std::vector<int> sig;
        if (is_event(x)) {
            for (int c : net_.events[x - nb_].post)
                if (!optional(c)) sig.push_back(class_of_[c]);
        } else {
            for (int e : net_.conditions[x].post) sig.push_back(class_of_[node_of_event(e)]);
        }
        std::sort(sig.begin(), sig.end());
        return sig;
    }

    std::string label(int x) const { return is_event(x) ? net_.events[x - nb_].label : std::string(); }

    bool compatible(int x, const Cls& k, const std::vector<int>& sig) const {
        if (k.event != is_event(x) || k.label != label(x) || k.post_sig != sig) return false;
        for (int y : k.members)
            if (rel_.between(rel_node(x), rel_node(y)) == Relation::concurrent) return false;
        return true;
    }

    std::size_t solid_classes() const {
        return std::count_if(classes_.begin(), classes_.end(), [](const Cls& k) { return k.solid > 0; });
    }

    void assign(int x, int k) {
        if (k == static_cast<int>(classes_.size())) classes_.push_back({is_event(x), label(x), post_sig(x), {}, 0});
        classes_[k].members.push_back(x);
        if (is_event(x) || !optional(x)) ++classes_[k].solid;
        class_of_[x] = k;
    }

    void unassign(int x) {
        int k = class_of_[x];
        classes_[k].members.pop_back();
        if (is_event(x) || !optional(x)) --classes_[k].solid;
        if (classes_[k].members.empty()) classes_.pop_back();
        class_of_[x] = -1;
    }

    void dfs(std::size_t i) {
        if (exceeded_) return;
        if (++expansions_ > budget_) {
            exceeded_ = true;
            return;
        }
        if (best_ && solid_classes() >= best_count_) return;
        if (i == order_.size()) {
            evaluate();
            return;
        }
        int x = order_[i];
        auto sig = post_sig(x);
        std::vector<int> options;
        for (std::size_t k = 0; k < classes_.size(); ++k)
            if (compatible(x, classes_[k], sig)) options.push_back(static_cast<int>(k));
        if (!is_event(x)) {
            // Conditions with the same postset fold together.
            auto post = sorted(net_.conditions[x].post);
            for (int k : options) {
                bool same = std::any_of(classes_[k].members.begin(), classes_[k].members.end(), [&](int y) {
                    return !is_event(y) && sorted(net_.conditions[y].post) == post;
                });
                if (same) {
                    options = {k};
                    break;
                }
            }
        }
        for (int k : options) {
            assign(x, k);
            dfs(i + 1);
            unassign(x);
        }
        if (options.empty() || !best_) {
            assign(x, static_cast<int>(classes_.size()));
            dfs(i + 1);
            unassign(x);
        }
    }

    void evaluate() {
        // Match presets inside every event class, padding with optional conditions.
        std::vector<bool> alive(nb_);
        for (std::size_t b = 0; b < nb_; ++b) alive[b] = !optional(static_cast<int>(b));
        for (const auto& k : classes_) {
            if (!k.event || k.members.size() < 2) continue;
            std::vector<std::vector<int>> req;
            std::size_t widest = 0;
            for (int x : k.members) {
                std::vector<int> r;
                for (int c : net_.events[x - nb_].pre)
                    if (!optional(c)) r.push_back(class_of_[c]);
                std::sort(r.begin(), r.end());
                req.push_back(std::move(r));
                if (req.back().size() > req[widest].size()) widest = req.size() - 1;
            }
            const auto& target = req[widest];
            for (std::size_t m = 0; m < k.members.size(); ++m) {
                std::vector<int> missing;
                if (!std::includes(target.begin(), target.end(), req[m].begin(), req[m].end())) return;
                std::set_difference(target.begin(), target.end(), req[m].begin(), req[m].end(), std::back_inserter(missing));
                for (int cls : missing) {
                    bool found = false;
                    for (int c : net_.events[k.members[m] - nb_].pre) {
                        if (optional(c) && !alive[c] && class_of_[c] == cls) {
                            alive[c] = true;
                            found = true;
                            break;
                        }
                    }
                    if (!found) return;
                }
            }
        }

        std::map<int, int> place_of, trans_of;
        NetSystem sys;
        for (std::size_t b = 0; b < nb_; ++b) {
            if (!alive[b]) continue;
            int k = class_of_[b];
            if (!place_of.count(k)) place_of[k] = sys.net.add_place("p" + std::to_string(place_of.size()));
        }
        for (std::size_t e = 0; e < ne_; ++e) {
            int k = class_of_[node_of_event(static_cast<int>(e))];
            if (!trans_of.count(k)) trans_of[k] = sys.net.add_transition("t" + std::to_string(trans_of.size()), net_.events[e].label);
        }
        std::set<std::pair<int, int>> pt, tp;
        sys.initial.assign(sys.net.place_count(), 0);
        for (std::size_t b = 0; b < nb_; ++b) {
            if (!alive[b]) continue;
            int p = place_of[class_of_[b]];
            const auto& cb = net_.conditions[b];
            if (cb.pre >= 0)
                tp.insert({trans_of[class_of_[node_of_event(cb.pre)]], p});
            else
                ++sys.initial[p];
            for (int e : cb.post) pt.insert({p, trans_of[class_of_[node_of_event(e)]]});
        }
        for (auto [p, t] : pt) sys.net.add_flow_pt(p, t);
        for (auto [t, p] : tp) sys.net.add_flow_tp(t, p);
        if (std::any_of(sys.initial.begin(), sys.initial.end(), [](int k) { return k > 1; })) return;
        std::size_t count = sys.net.place_count() + sys.net.transition_count();
        if (best_ && count >= best_count_) return;

        FoldedNet candidate;
        try {
            if (source_place(sys.net) < 0 || sink_place(sys.net) < 0) return;
            candidate.model = net_to_model(sys);
            auto msys = model_to_wfnet(candidate.model);
            if (!check_soundness(msys, 100'000).sound) return;
            RunLimits limits;
            limits.max_events = 20'000;
            if (canonical_run_set(msys, limits) != target_runs_) return;
        } catch (const std::exception&) {
            return;
        }
        candidate.system = std::move(sys);
        candidate.condition_class.assign(nb_, -1);
        candidate.event_class.assign(ne_, -1);
        for (std::size_t b = 0; b < nb_; ++b)
            if (alive[b]) candidate.condition_class[b] = place_of[class_of_[b]];
        for (std::size_t e = 0; e < ne_; ++e) candidate.event_class[e] = trans_of[class_of_[node_of_event(static_cast<int>(e))]];
        best_ = std::move(candidate);
        best_count_ = count;
    }

    const SynthNet& s_;
    const OccurrenceNet& net_;
    OrderingRelations rel_;
    std::size_t budget_;
    std::size_t nb_ = 0, ne_ = 0;
    std::vector<std::string> target_runs_;
    std::vector<int> order_;
    std::vector<int> class_of_;
    std::vector<Cls> classes_;
    std::optional<FoldedNet> best_;
    std::size_t best_count_ = 0;
    std::size_t expansions_ = 0;
    bool exceeded_ = false;
};

}  // namespace

FoldedNet fold(const SynthNet& onet, std::size_t budget) { return Folder(onet, budget).run(); }

ProcessModel synthesize_component(const OrderingRelationsGraph& g, const SynthesisOptions& opts, SynthesisTrace* trace) {
    SynthesisTrace local;
    auto& t = trace ? *trace : local;
    t.poset = build_poset(g, opts.max_poset);
    t.augmented = augment_poset(t.poset);
    t.es = poset_to_event_structure(t.augmented);
    t.onet = es_to_occurrence_net(t.es);
    t.simplified = simplify(t.onet);
    t.folded = fold(t.simplified, opts.fold_budget);
    return t.folded.model;
}

std::string export_synth_net_dot(const SynthNet& s) {
    std::vector<std::string> names;
    for (std::size_t b = 0; b < s.net.conditions.size(); ++b)
        names.push_back("b" + std::to_string(b) + (s.roles[b] == ConditionRole::transitive ? "?" : ""));
    return export_occurrence_dot(s.net, {}, names);
}

}  // namespace bpstruct
