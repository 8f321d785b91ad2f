#include "bpstruct/restructure.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include <json.hpp>

#include "bpstruct/error.hpp"
#include "bpstruct/rpst.hpp"
#include "bpstruct/unfolder.hpp"

namespace bpstruct {

std::string_view to_string(RigidOutcome o) {
    switch (o) {
        case RigidOutcome::fully_structured: return "fully-structured";
        case RigidOutcome::maximally_structured_with_synthesis: return "maximally-structured-with-synthesis";
    }
    return "?";
}

void ModuleCensus::add(const MdtNode& root) {
    switch (root.cls) {
        case ModuleClass::trivial: ++trivial; break;
        case ModuleClass::linear: ++linear; break;
        case ModuleClass::xor_complete: ++xor_complete; break;
        case ModuleClass::and_complete: ++and_complete; break;
        case ModuleClass::primitive: ++(root.concurrent ? concurrent_primitive : sequential_primitive); break;
    }
    for (const auto& c : root.children) add(c);
}

ModuleCensus& ModuleCensus::operator+=(const ModuleCensus& o) {
    trivial += o.trivial;
    linear += o.linear;
    xor_complete += o.xor_complete;
    and_complete += o.and_complete;
    sequential_primitive += o.sequential_primitive;
    concurrent_primitive += o.concurrent_primitive;
    return *this;
}

namespace {

struct Frag {
    std::string entry, exit;
};

class Builder {
public:
    Builder() {
        ids_.reserve(kLiftSourceId);
        ids_.reserve(kLiftSinkId);
    }

    std::string task(const std::string& label, const std::string& preferred = {}) {
        auto id = preferred.empty() ? ids_.fresh() : ids_.claim(preferred);
        model_.add_node(id, NodeKind::task, label);
        return id;
    }
    std::string gateway(NodeKind kind) {
        auto id = ids_.fresh();
        model_.add_node(id, kind);
        return id;
    }
    void arc(const std::string& a, const std::string& b) {
        if (!model_.has_arc(a, b)) model_.add_arc(a, b);
    }
    Frag chain(const Frag& a, const Frag& b) {
        arc(a.exit, b.entry);
        return {a.entry, b.exit};
    }
    Frag bond(NodeKind kind, const std::vector<std::function<Frag()>>& branches) {
        auto split = gateway(kind);
        auto join = gateway(kind);
        for (const auto& make : branches) {
            auto f = make();
            arc(split, f.entry);
            arc(f.exit, join);
        }
        return {split, join};
    }

    // Frames the fragment with the lifted source and sink tasks.
    ProcessModel finish(const std::optional<Frag>& body) {
        model_.add_node(kLiftSourceId, NodeKind::task, std::string(kBoundaryIn));
        model_.add_node(kLiftSinkId, NodeKind::task, std::string(kBoundaryOut));
        if (body) {
            arc(kLiftSourceId, body->entry);
            arc(body->exit, kLiftSinkId);
        } else {
            arc(kLiftSourceId, kLiftSinkId);
        }
        normalize_gateways(model_);
        validate(model_);
        return std::move(model_);
    }

private:
    ProcessModel model_;
    IdAllocator ids_;
};

// Maximal histories of a concurrency-free graph as vertex sequences.
std::vector<std::vector<int>> sequential_runs(const OrderingRelationsGraph& q) {
    for (std::size_t u = 0; u < q.size(); ++u)
        for (std::size_t v = u + 1; v < q.size(); ++v)
            if (q.relation(static_cast<int>(u), static_cast<int>(v)) == OrgRelation::concurrent)
                throw ContractError("sequential primitive has a concurrent pair");
    auto poset = build_poset(q);
    std::vector<std::vector<int>> runs;
    for (int x : poset.maximal()) {
        std::vector<int> run;
        const auto& h = poset.elements[x];
        for (auto v = h.find_first(); v != Bitset::npos; v = h.find_next(v)) run.push_back(static_cast<int>(v));
        auto rank = [&](int v) {
            return std::count_if(run.begin(), run.end(), [&](int u) { return q.has_arc(u, v) && !q.has_arc(v, u); });
        };
        std::stable_sort(run.begin(), run.end(), [&](int a, int b) { return rank(a) < rank(b); });
        runs.push_back(std::move(run));
    }
    std::sort(runs.begin(), runs.end());
    return runs;
}

// Prefix tree of the runs with an XOR bond wherever runs diverge.
Frag emit_runs(Builder& b, const std::vector<std::vector<int>>& runs, std::size_t depth,
               const std::function<Frag(int)>& child) {
    std::vector<std::pair<int, std::vector<std::vector<int>>>> groups;
    for (const auto& r : runs) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == r[depth]; });
        if (it == groups.end()) {
            groups.push_back({r[depth], {}});
            it = groups.end() - 1;
        }
        it->second.push_back(r);
    }
    auto branch = [&, depth](const std::pair<int, std::vector<std::vector<int>>>& g) {
        Frag f = child(g.first);
        std::vector<std::vector<int>> rest;
        for (const auto& r : g.second)
            if (r.size() > depth + 1) rest.push_back(r);
        if (rest.empty()) return f;
        if (rest.size() != g.second.size()) throw ContractError("a maximal run is a prefix of another");
        return b.chain(f, emit_runs(b, rest, depth + 1, child));
    };
    if (groups.size() == 1) return branch(groups.front());
    std::vector<std::function<Frag()>> makers;
    for (const auto& g : groups) makers.push_back([&, g] { return branch(g); });
    return b.bond(NodeKind::xor_gateway, makers);
}

class Emitter {
public:
    Emitter(Builder& b, const OrderingRelationsGraph& g, std::vector<std::string> preferred, const SynthesisOptions& opts)
        : b_(b), g_(g), preferred_(std::move(preferred)), opts_(opts) {}

    Frag emit(const MdtNode& node) {
        switch (node.cls) {
            case ModuleClass::trivial: {
                int v = node.members.front();
                auto id = b_.task(g_.label(v), preferred_[v]);
                return {id, id};
            }
            case ModuleClass::linear: {
                Frag f = emit(node.children.front());
                for (std::size_t i = 1; i < node.children.size(); ++i) f = b_.chain(f, emit(node.children[i]));
                return f;
            }
            case ModuleClass::xor_complete:
            case ModuleClass::and_complete: {
                std::vector<std::function<Frag()>> makers;
                for (const auto& c : node.children) makers.push_back([this, &c] { return emit(c); });
                return b_.bond(node.cls == ModuleClass::xor_complete ? NodeKind::xor_gateway : NodeKind::and_gateway,
                               makers);
            }
            case ModuleClass::primitive: break;
        }
        std::vector<int> reps;
        for (const auto& c : node.children) reps.push_back(c.members.front());
        auto induced = g_.induced(reps);
        auto child = [&](int k) { return emit(node.children[k]); };
        if (!node.concurrent) return emit_runs(b_, sequential_runs(induced), 0, child);
        return emit_synthesized(induced, child);
    }

private:
    Frag emit_synthesized(const OrderingRelationsGraph& induced, const std::function<Frag(int)>& child) {
        OrderingRelationsGraph q;
        std::map<std::string, int> index;
        for (std::size_t k = 0; k < induced.size(); ++k) {
            std::string label = "@q" + std::to_string(k);
            index[label] = static_cast<int>(k);
            q.add_vertex(label);
        }
        for (auto [u, v] : induced.arcs()) q.add_arc(u, v);
        auto synth = synthesize_component(q, opts_);

        std::map<std::string, Frag> frag;
        Frag result;
        for (const auto& [id, node] : synth.nodes()) {
            if (node.is_gateway()) {
                auto gid = b_.gateway(node.kind);
                frag[id] = {gid, gid};
            } else if (node.name == kBoundaryIn) {
                result.entry = b_.gateway(NodeKind::xor_gateway);
                frag[id] = {result.entry, result.entry};
            } else if (node.name == kBoundaryOut) {
                result.exit = b_.gateway(NodeKind::xor_gateway);
                frag[id] = {result.exit, result.exit};
            } else {
                frag[id] = child(index.at(node.name));
            }
        }
        for (const auto& [a, c] : synth.arcs()) b_.arc(frag[a].exit, frag[c].entry);
        return result;
    }

    Builder& b_;
    const OrderingRelationsGraph& g_;
    std::vector<std::string> preferred_;
    const SynthesisOptions& opts_;
};

// Replaces the frame of `part` (its source and sink tasks) by `from` and `to` in host.
void splice(ProcessModel& host, IdAllocator& ids, const std::string& from, const std::string& to,
            const ProcessModel& part, bool reuse_ids) {
    const auto src = part.source(), snk = part.sink();
    std::map<std::string, std::string> map{{src, from}, {snk, to}};
    for (const auto& [id, node] : part.nodes()) {
        if (id == src || id == snk) continue;
        auto nid = reuse_ids ? ids.claim(id) : ids.fresh();
        host.add_node(nid, node.kind, node.name);
        map[id] = nid;
    }
    for (const auto& [a, b] : part.arcs())
        if (!host.has_arc(map[a], map[b])) host.add_arc(map[a], map[b]);
}

void topmost_rigids(const RpstNode& node, std::vector<const RpstNode*>& out) {
    if (node.kind == RpstKind::rigid) {
        out.push_back(&node);
        return;
    }
    for (const auto& c : node.children) topmost_rigids(c, out);
}

std::string placeholder_label(std::size_t k) { return "@ph" + std::to_string(k); }

ProcessModel structure_inner(const ProcessModel& m, const StructuringOptions& opts, StructuringReport& report) {
    auto rpst = compute_rpst(m);
    std::vector<const RpstNode*> rigids;
    topmost_rigids(rpst, rigids);
    if (rigids.empty()) return m;

    ProcessModel host = m;
    for (const RpstNode* r : rigids) {
        // Abstract every non-trivial child into a placeholder task and structure it separately.
        std::vector<ProcessModel> parts;
        std::set<Arc> arcs;
        std::map<std::string, std::string> placeholder;  // id -> label
        for (const auto& c : r->children) {
            if (c.kind == RpstKind::trivial) {
                arcs.insert(c.arcs.begin(), c.arcs.end());
                continue;
            }
            parts.push_back(structure_inner(lift_fragment(m, c.arcs, c.entry, c.exit), opts, report));
            std::string id = "__ph" + std::to_string(parts.size() - 1);
            placeholder[id] = placeholder_label(parts.size() - 1);
            arcs.insert({c.entry, id});
            arcs.insert({id, c.exit});
        }
        ProcessModel component;
        for (const auto& [a, b] : arcs) {
            for (const auto& id : {a, b}) {
                if (component.has_node(id)) continue;
                if (placeholder.count(id))
                    component.add_node(id, NodeKind::task, placeholder[id]);
                else
                    component.add_node(id, m.node(id).kind, m.node(id).name);
            }
        }
        for (const auto& [a, b] : arcs) component.add_arc(a, b);
        component.add_node(kLiftSourceId, NodeKind::task, std::string(kBoundaryIn));
        component.add_node(kLiftSinkId, NodeKind::task, std::string(kBoundaryOut));
        component.add_arc(kLiftSourceId, r->entry);
        component.add_arc(r->exit, kLiftSinkId);
        normalize_gateways(component);

        RigidAnalysis analysis;
        auto result = structure_rigid(component, opts, &analysis);
        RigidReport rr{r->entry, r->exit, RigidOutcome::fully_structured, {}};
        rr.census.add(analysis.mdt);
        if (rr.census.concurrent_primitive > 0) rr.outcome = RigidOutcome::maximally_structured_with_synthesis;
        report.census += rr.census;
        report.rigids.push_back(rr);

        // Put the structured children back, one copy per placeholder occurrence.
        IdAllocator rids(result);
        std::vector<bool> used(parts.size(), false);
        std::vector<std::pair<std::string, std::size_t>> holes;
        for (const auto& [id, node] : result.nodes())
            for (std::size_t k = 0; k < parts.size(); ++k)
                if (node.is_task() && node.name == placeholder_label(k)) holes.push_back({id, k});
        for (const auto& [id, k] : holes) {
            auto from = *result.predecessors(id).begin();
            auto to = *result.successors(id).begin();
            result.remove_node(id);
            splice(result, rids, from, to, parts[k], !used[k]);
            used[k] = true;
        }

        std::set<std::string> interior;
        for (const auto& [a, b] : r->arcs) {
            host.remove_arc(a, b);
            for (const auto& id : {a, b})
                if (id != r->entry && id != r->exit) interior.insert(id);
        }
        for (const auto& id : interior) host.remove_node(id);
        IdAllocator hids(host);
        splice(host, hids, r->entry, r->exit, result, true);
    }
    normalize_gateways(host);
    validate(host);
    return host;
}

}  // namespace

ProcessModel structure_rigid(const ProcessModel& component, const StructuringOptions& opts, RigidAnalysis* analysis) {
    auto sys = model_to_wfnet(component);
    UnfoldOptions uopts;
    uopts.max_events = opts.max_events;
    auto prefix = unfold_proper_prefix(sys, uopts);
    auto g = build_org(prefix);
    std::vector<std::string> preferred;
    for (std::size_t v = 0; v < g.size(); ++v)
        preferred.push_back(sys.net.transition_ids[prefix.net.events[g.event(static_cast<int>(v))].origin]);

    Builder b;
    if (g.size() == 0) {
        if (analysis) analysis->org = g;
        return b.finish(std::nullopt);
    }
    auto tree = modular_decomposition(g);
    Emitter emitter(b, g, preferred, opts.synthesis);
    auto body = emitter.emit(tree);
    if (analysis) {
        analysis->org = g;
        analysis->mdt = tree;
    }
    return b.finish(body);
}

ProcessModel restructure_sequential_primitive(const OrderingRelationsGraph& sub) {
    Builder b;
    if (sub.size() == 0) return b.finish(std::nullopt);
    auto runs = sequential_runs(sub);
    auto body = emit_runs(b, runs, 0, [&](int v) {
        auto id = b.task(sub.label(v));
        return Frag{id, id};
    });
    return b.finish(body);
}

StructuringResult structure_model(const ProcessModel& m, const StructuringOptions& opts) {
    validate(m);
    auto sound = check_soundness(model_to_wfnet(m), opts.max_states);
    if (!sound.sound) throw ValidationError("unsound input: " + sound.diagnostic);
    StructuringResult out;
    out.report.rigids_before = count_kind(compute_rpst(m), RpstKind::rigid);
    if (out.report.rigids_before == 0) {
        out.model = m;
        return out;
    }
    out.model = structure_inner(m, opts, out.report);
    out.report.rigids_after = count_kind(compute_rpst(out.model), RpstKind::rigid);
    return out;
}

std::string report_to_json(const StructuringReport& r) {
    using nlohmann::ordered_json;
    auto census = [](const ModuleCensus& c) {
        ordered_json j;
        j["trivial"] = c.trivial;
        j["linear"] = c.linear;
        j["xor-complete"] = c.xor_complete;
        j["and-complete"] = c.and_complete;
        j["primitive-sequential"] = c.sequential_primitive;
        j["primitive-concurrent"] = c.concurrent_primitive;
        return j;
    };
    ordered_json j;
    j["rigids_before"] = r.rigids_before;
    j["rigids_after"] = r.rigids_after;
    j["modules"] = census(r.census);
    j["rigids"] = ordered_json::array();
    for (const auto& rr : r.rigids) {
        ordered_json x;
        x["entry"] = rr.entry;
        x["exit"] = rr.exit;
        x["outcome"] = std::string(to_string(rr.outcome));
        x["modules"] = census(rr.census);
        j["rigids"].push_back(x);
    }
    return j.dump(2);
}

}  // namespace bpstruct
