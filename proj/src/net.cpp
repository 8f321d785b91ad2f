#include "bpstruct/net.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bpstruct/error.hpp"
#include "bpstruct/rpst.hpp"

namespace bpstruct {

bool is_observable(std::string_view label) { return !label.empty() && !is_boundary_label(label); }

int WfNet::add_place(std::string id) {
    place_ids.push_back(std::move(id));
    p_pre.emplace_back();
    p_post.emplace_back();
    return static_cast<int>(place_ids.size()) - 1;
}

int WfNet::add_transition(std::string id, std::string label) {
    transition_ids.push_back(std::move(id));
    labels.push_back(std::move(label));
    t_pre.emplace_back();
    t_post.emplace_back();
    return static_cast<int>(transition_ids.size()) - 1;
}

void WfNet::add_flow_pt(int p, int t) {
    if (std::find(p_post[p].begin(), p_post[p].end(), t) != p_post[p].end()) return;
    p_post[p].push_back(t);
    t_pre[t].push_back(p);
}

void WfNet::add_flow_tp(int t, int p) {
    if (std::find(t_post[t].begin(), t_post[t].end(), p) != t_post[t].end()) return;
    t_post[t].push_back(p);
    p_pre[p].push_back(t);
}

int WfNet::place_index(const std::string& id) const {
    auto it = std::find(place_ids.begin(), place_ids.end(), id);
    return it == place_ids.end() ? -1 : static_cast<int>(it - place_ids.begin());
}

int WfNet::transition_index(const std::string& id) const {
    auto it = std::find(transition_ids.begin(), transition_ids.end(), id);
    return it == transition_ids.end() ? -1 : static_cast<int>(it - transition_ids.begin());
}

NetSystem model_to_wfnet(const ProcessModel& m) {
    validate(m);
    NetSystem sys;
    auto& net = sys.net;
    std::map<std::string, int> trans, place;
    for (const auto& [id, n] : m.nodes()) {
        if (n.kind == NodeKind::xor_gateway)
            place[id] = net.add_place(id);
        else
            trans[id] = net.add_transition(id, n.is_task() ? n.name : std::string(kTau));
    }
    int in = net.add_place("p:in");
    int out = net.add_place("p:out");
    net.add_flow_pt(in, trans.at(m.source()));
    net.add_flow_tp(trans.at(m.sink()), out);

    for (const auto& [s, d] : m.arcs()) {
        const auto& sk = m.node(s).kind;
        const auto& dk = m.node(d).kind;
        bool s_place = sk == NodeKind::xor_gateway;
        bool d_place = dk == NodeKind::xor_gateway;
        std::string tag = s + "->" + d;
        if (!s_place && !d_place) {
            int p = net.add_place("p:" + tag);
            net.add_flow_tp(trans.at(s), p);
            net.add_flow_pt(p, trans.at(d));
        } else if (!s_place && d_place) {
            net.add_flow_tp(trans.at(s), place.at(d));
        } else if (s_place && dk == NodeKind::task) {
            net.add_flow_pt(place.at(s), trans.at(d));
        } else if (s_place && dk == NodeKind::and_gateway) {
            int t = net.add_transition("t:" + tag, std::string(kTau));
            int p = net.add_place("p:" + tag);
            net.add_flow_pt(place.at(s), t);
            net.add_flow_tp(t, p);
            net.add_flow_pt(p, trans.at(d));
        } else {
            int t = net.add_transition("t:" + tag, std::string(kTau));
            net.add_flow_pt(place.at(s), t);
            net.add_flow_tp(t, place.at(d));
        }
    }
    sys.initial.assign(net.place_count(), 0);
    sys.initial[in] = 1;
    return sys;
}

bool is_free_choice(const WfNet& net) {
    for (std::size_t p = 0; p < net.place_count(); ++p) {
        if (net.p_post[p].size() <= 1) continue;
        for (int t : net.p_post[p])
            if (net.t_pre[t].size() != 1) return false;
    }
    return true;
}

int source_place(const WfNet& net) {
    int found = -1;
    for (std::size_t p = 0; p < net.place_count(); ++p) {
        if (!net.p_pre[p].empty()) continue;
        if (found >= 0) return -1;
        found = static_cast<int>(p);
    }
    return found;
}

int sink_place(const WfNet& net) {
    int found = -1;
    for (std::size_t p = 0; p < net.place_count(); ++p) {
        if (!net.p_post[p].empty()) continue;
        if (found >= 0) return -1;
        found = static_cast<int>(p);
    }
    return found;
}

namespace {

bool enabled(const WfNet& net, const Marking& m, int t) {
    for (int p : net.t_pre[t])
        if (m[p] < 1) return false;
    return true;
}

Marking fire(const WfNet& net, Marking m, int t) {
    for (int p : net.t_pre[t]) --m[p];
    for (int p : net.t_post[t]) ++m[p];
    return m;
}

struct StateSpace {
    std::vector<Marking> states;
    std::map<Marking, std::size_t> index;
    std::vector<std::vector<std::pair<int, std::size_t>>> edges;  // (transition, target)
};

StateSpace explore(const NetSystem& sys, std::size_t max_states) {
    StateSpace ss;
    ss.states.push_back(sys.initial);
    ss.index[sys.initial] = 0;
    ss.edges.emplace_back();
    for (std::size_t i = 0; i < ss.states.size(); ++i) {
        for (std::size_t t = 0; t < sys.net.transition_count(); ++t) {
            if (!enabled(sys.net, ss.states[i], static_cast<int>(t))) continue;
            auto next = fire(sys.net, ss.states[i], static_cast<int>(t));
            auto [it, inserted] = ss.index.try_emplace(next, ss.states.size());
            if (inserted) {
                if (ss.states.size() >= max_states)
                    throw GuardError("state explosion: more than " + std::to_string(max_states) + " markings");
                ss.states.push_back(next);
                ss.edges.emplace_back();
            }
            ss.edges[i].push_back({static_cast<int>(t), it->second});
        }
    }
    return ss;
}

}  // namespace

std::vector<Marking> reachable_markings(const NetSystem& sys, std::size_t max_states) {
    auto ss = explore(sys, max_states);
    auto states = std::move(ss.states);
    std::sort(states.begin(), states.end());
    return states;
}

SoundnessResult check_soundness(const NetSystem& sys, std::size_t max_states) {
    SoundnessResult r;
    const auto& net = sys.net;
    int sink = sink_place(net);
    if (sink < 0 || source_place(net) < 0) {
        r.diagnostic = "not a WF-net (source/sink place not unique)";
        return r;
    }
    Marking final_marking(net.place_count(), 0);
    final_marking[sink] = 1;

    auto ss = explore(sys, max_states);
    // (b) proper completion
    for (const auto& m : ss.states) {
        if (m[sink] >= 1 && m != final_marking) {
            r.diagnostic = "improper completion";
            r.witness = m;
            return r;
        }
    }
    // (a) option to complete
    std::vector<std::vector<std::size_t>> rev(ss.states.size());
    for (std::size_t i = 0; i < ss.states.size(); ++i)
        for (const auto& [t, j] : ss.edges[i]) rev[j].push_back(i);
    std::vector<bool> good(ss.states.size(), false);
    std::deque<std::size_t> q;
    if (auto it = ss.index.find(final_marking); it != ss.index.end()) {
        good[it->second] = true;
        q.push_back(it->second);
    }
    while (!q.empty()) {
        auto j = q.front();
        q.pop_front();
        for (auto i : rev[j])
            if (!good[i]) {
                good[i] = true;
                q.push_back(i);
            }
    }
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < ss.states.size(); ++i)
        if (!good[i]) bad.push_back(i);
    if (!bad.empty()) {
        auto dead = std::find_if(bad.begin(), bad.end(), [&](auto i) { return ss.edges[i].empty(); });
        auto pick = dead != bad.end() ? *dead : bad.front();
        r.diagnostic = dead != bad.end() ? "deadlock marking" : "no option to complete";
        r.witness = ss.states[pick];
        return r;
    }
    // (c) no dead transitions
    std::vector<bool> fired(net.transition_count(), false);
    for (const auto& es : ss.edges)
        for (const auto& [t, j] : es) fired[t] = true;
    for (std::size_t t = 0; t < net.transition_count(); ++t) {
        if (!fired[t]) {
            r.diagnostic = "dead transition";
            r.dead_transition = net.transition_ids[t];
            return r;
        }
    }
    r.sound = true;
    return r;
}

ProcessModel net_to_model(const NetSystem& sys) {
    const auto& net = sys.net;
    int src = source_place(net), snk = sink_place(net);
    if (src < 0 || snk < 0) throw ValidationError("net not mappable: source/sink place not unique");
    for (std::size_t p = 0; p < net.place_count(); ++p)
        if (sys.initial[p] != (static_cast<int>(p) == src ? 1 : 0))
            throw ValidationError("net not mappable: initial marking is not one token on the source place");

    ProcessModel m;
    IdAllocator ids;
    for (const auto& id : net.transition_ids) ids.reserve(id);

    // In/out ports: the model node that receives incoming flow and the node
    // that emits outgoing flow.
    std::vector<std::string> p_in(net.place_count()), p_out(net.place_count());

    auto gateway = [&](NodeKind kind) {
        auto id = ids.fresh();
        m.add_node(id, kind);
        return id;
    };

    auto sorted = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        return v;
    };

    // Conflict clusters: places and transitions connected by place-to-transition arcs.
    const std::size_t np = net.place_count(), nt = net.transition_count();
    std::vector<int> parent(np + nt);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (std::size_t t = 0; t < nt; ++t)
        for (int p : net.t_pre[t]) parent[find(p)] = find(static_cast<int>(np + t));
    std::map<int, std::vector<int>> cluster_places, cluster_transitions;
    for (std::size_t p = 0; p < np; ++p) cluster_places[find(static_cast<int>(p))].push_back(static_cast<int>(p));
    for (std::size_t t = 0; t < nt; ++t) cluster_transitions[find(static_cast<int>(np + t))].push_back(static_cast<int>(t));

    // A cluster whose places share one postset synchronizes first and then
    // chooses (one AND join, one XOR split). A cluster whose places share one
    // preset is marked at once and maps to a choice between the transitions
    // consuming all of it and a parallel split into its connected parts.
    std::vector<int> t_cluster(nt, -1), p_cluster(np, -1), p_marked(np, -1);
    std::vector<std::string> cluster_join, cluster_choice, marked_entry;
    std::function<std::string(const std::vector<int>&, const std::vector<int>&)> split_marked;
    std::vector<std::string> t_in(nt), t_out(nt);
    split_marked = [&](const std::vector<int>& places, const std::vector<int>& ts) -> std::string {
        std::vector<std::string> alts;
        std::vector<int> partial;
        for (int t : ts) {
            if (sorted(net.t_pre[t]) == places)
                alts.push_back(t_in[t]);
            else
                partial.push_back(t);
        }
        if (!partial.empty()) {
            // connected parts of the partial transitions' presets
            std::map<int, int> part;
            for (int p : places) part[p] = p;
            std::function<int(int)> root = [&](int x) { return part[x] == x ? x : part[x] = root(part[x]); };
            std::set<int> covered;
            for (int t : partial)
                for (int p : net.t_pre[t]) {
                    part[root(p)] = root(net.t_pre[t].front());
                    covered.insert(p);
                }
            if (covered.size() != places.size()) throw ValidationError("net not mappable: not free-choice");
            std::map<int, std::vector<int>> groups;
            for (int p : places) groups[root(p)].push_back(p);
            if (groups.size() < 2) throw ValidationError("net not mappable: not free-choice");
            auto and_split = gateway(NodeKind::and_gateway);
            for (const auto& [r, ps] : groups) {
                std::vector<int> sub;
                for (int t : partial)
                    if (std::includes(ps.begin(), ps.end(), net.t_pre[t].begin(), net.t_pre[t].end())) sub.push_back(t);
                m.add_arc(and_split, split_marked(ps, sub));
            }
            alts.push_back(and_split);
        }
        if (alts.size() == 1) return alts.front();
        auto choice = gateway(NodeKind::xor_gateway);
        for (const auto& a : alts) m.add_arc(choice, a);
        return choice;
    };

    std::vector<std::pair<std::vector<int>, std::vector<int>>> marked_clusters;
    for (const auto& [root, places] : cluster_places) {
        const auto& ts = cluster_transitions[root];
        bool joins = std::any_of(ts.begin(), ts.end(), [&](int t) { return net.t_pre[t].size() >= 2; });
        bool choices = std::any_of(places.begin(), places.end(), [&](int p) { return net.p_post[p].size() >= 2; });
        if (!joins || !choices) continue;
        bool same_post = std::all_of(places.begin(), places.end(),
                                     [&](int p) { return sorted(net.p_post[p]) == sorted(net.p_post[places.front()]); });
        if (same_post) {
            cluster_join.push_back(gateway(NodeKind::and_gateway));
            cluster_choice.push_back(gateway(NodeKind::xor_gateway));
            m.add_arc(cluster_join.back(), cluster_choice.back());
            for (int t : ts) t_cluster[t] = static_cast<int>(cluster_join.size()) - 1;
            for (int p : places) p_cluster[p] = static_cast<int>(cluster_join.size()) - 1;
            continue;
        }
        bool same_pre = std::all_of(places.begin(), places.end(),
                                    [&](int p) { return sorted(net.p_pre[p]) == sorted(net.p_pre[places.front()]); });
        if (!same_pre || net.p_pre[places.front()].empty()) throw ValidationError("net not mappable: not free-choice");
        for (int p : places) p_marked[p] = static_cast<int>(marked_clusters.size());
        for (int t : ts) t_cluster[t] = -2;
        marked_clusters.push_back({places, ts});
    }

    for (std::size_t t = 0; t < net.transition_count(); ++t) {
        std::size_t in = net.t_pre[t].size(), out = net.t_post[t].size();
        if (in == 0 || out == 0) throw ValidationError("net not mappable: transition without pre/postset");
        if (t_cluster[t] != -1) in = 1;
        std::set<int> marked_targets;
        for (int p : net.t_post[t])
            if (p_marked[p] >= 0) marked_targets.insert(p_marked[p]);
        for (int c : marked_targets)
            out -= std::count_if(net.t_post[t].begin(), net.t_post[t].end(), [&](int p) { return p_marked[p] == c; }) - 1;
        if (!net.labels[t].empty()) {
            auto id = net.transition_ids[t];
            m.add_node(id, NodeKind::task, net.labels[t]);
            t_in[t] = t_out[t] = id;
            if (in >= 2) {
                t_in[t] = gateway(NodeKind::and_gateway);
                m.add_arc(t_in[t], id);
            }
            if (out >= 2) {
                t_out[t] = gateway(NodeKind::and_gateway);
                m.add_arc(id, t_out[t]);
            }
        } else if (in == 1 && out == 1) {
            // erased into a plain arc by normalization
            t_in[t] = t_out[t] = gateway(NodeKind::xor_gateway);
        } else {
            t_in[t] = gateway(NodeKind::and_gateway);
            t_out[t] = t_in[t];
            if (in >= 2 && out >= 2) {
                t_out[t] = gateway(NodeKind::and_gateway);
                m.add_arc(t_in[t], t_out[t]);
            }
        }
    }

    std::string source_task, sink_task;
    for (std::size_t p = 0; p < net.place_count(); ++p) {
        std::size_t in = net.p_pre[p].size(), out = net.p_post[p].size();
        if (static_cast<int>(p) == src && out == 1 && net.t_pre[net.p_post[p][0]].size() == 1 &&
            !net.labels[net.p_post[p][0]].empty()) {
            source_task = net.transition_ids[net.p_post[p][0]];
            continue;
        }
        if (static_cast<int>(p) == snk && in == 1 && net.t_post[net.p_pre[p][0]].size() == 1 &&
            !net.labels[net.p_pre[p][0]].empty()) {
            sink_task = net.transition_ids[net.p_pre[p][0]];
            continue;
        }
        if (p_marked[p] >= 0) continue;
        if (p_cluster[p] >= 0) out = 1;
        if (in >= 2 && out >= 2) {
            p_in[p] = gateway(NodeKind::xor_gateway);
            p_out[p] = gateway(NodeKind::xor_gateway);
            m.add_arc(p_in[p], p_out[p]);
        } else {
            p_in[p] = p_out[p] = gateway(NodeKind::xor_gateway);
        }
        if (static_cast<int>(p) == src) {
            auto id = ids.fresh();
            m.add_node(id, NodeKind::task, std::string(kBoundaryIn));
            m.add_arc(id, p_in[p]);
        }
        if (static_cast<int>(p) == snk) {
            auto id = ids.fresh();
            m.add_node(id, NodeKind::task, std::string(kBoundaryOut));
            m.add_arc(p_out[p], id);
        }
    }

    for (const auto& [places, ts] : marked_clusters) {
        // one XOR join receives all producers of the cluster
        marked_entry.push_back(gateway(NodeKind::xor_gateway));
        m.add_arc(marked_entry.back(), split_marked(places, sorted(ts)));
    }
    for (std::size_t p = 0; p < net.place_count(); ++p)
        if (p_cluster[p] >= 0) m.add_arc(p_out[p], cluster_join[p_cluster[p]]);
    for (std::size_t t = 0; t < net.transition_count(); ++t) {
        if (t_cluster[t] >= 0)
            m.add_arc(cluster_choice[t_cluster[t]], t_in[t]);
        else if (t_cluster[t] == -1)
            for (int p : net.t_pre[t])
                if (!p_out[p].empty()) m.add_arc(p_out[p], t_in[t]);
        for (int p : net.t_post[t]) {
            if (p_marked[p] >= 0) {
                if (!m.has_arc(t_out[t], marked_entry[p_marked[p]])) m.add_arc(t_out[t], marked_entry[p_marked[p]]);
            } else if (!p_in[p].empty()) {
                m.add_arc(t_out[t], p_in[p]);
            }
        }
    }
    normalize_gateways(m);
    validate(m);
    return m;
}

std::string format_marking(const WfNet& net, const Marking& m) {
    std::string out = "{";
    bool first = true;
    for (std::size_t p = 0; p < m.size(); ++p) {
        if (m[p] == 0) continue;
        if (!first) out += ", ";
        first = false;
        out += net.place_ids[p];
        if (m[p] > 1) out += "*" + std::to_string(m[p]);
    }
    return out + "}";
}

std::string export_net_dot(const WfNet& net, const Marking& initial) {
    std::ostringstream os;
    os << "digraph net {\n  rankdir=LR;\n";
    for (std::size_t p = 0; p < net.place_count(); ++p)
        os << "  \"p" << p << "\" [shape=circle, label=\"" << net.place_ids[p]
           << (initial.size() > p && initial[p] ? " *" : "") << "\"];\n";
    for (std::size_t t = 0; t < net.transition_count(); ++t)
        os << "  \"t" << t << "\" [shape=box, label=\""
           << (net.labels[t].empty() ? std::string("tau") : net.labels[t]) << "\"];\n";
    for (std::size_t t = 0; t < net.transition_count(); ++t) {
        for (int p : net.t_pre[t]) os << "  \"p" << p << "\" -> \"t" << t << "\";\n";
        for (int p : net.t_post[t]) os << "  \"t" << t << "\" -> \"p" << p << "\";\n";
    }
    os << "}\n";
    return os.str();
}

std::string export_net_json(const WfNet& net, const Marking& initial) {
    nlohmann::ordered_json j;
    j["format"] = "bpstruct/1";
    j["places"] = nlohmann::ordered_json::array();
    for (std::size_t p = 0; p < net.place_count(); ++p)
        j["places"].push_back({{"id", net.place_ids[p]}, {"tokens", initial.size() > p ? initial[p] : 0}});
    j["transitions"] = nlohmann::ordered_json::array();
    for (std::size_t t = 0; t < net.transition_count(); ++t)
        j["transitions"].push_back({{"id", net.transition_ids[t]}, {"label", net.labels[t]}});
    j["flow"] = nlohmann::ordered_json::array();
    for (std::size_t t = 0; t < net.transition_count(); ++t) {
        for (int p : net.t_pre[t]) j["flow"].push_back({net.place_ids[p], net.transition_ids[t]});
        for (int p : net.t_post[t]) j["flow"].push_back({net.transition_ids[t], net.place_ids[p]});
    }
    return j.dump(2) + "\n";
}

}  // namespace bpstruct
