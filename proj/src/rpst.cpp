#include "bpstruct/rpst.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

#include "bpstruct/error.hpp"

namespace bpstruct {

namespace {

struct Region {
    std::set<std::string> nodes;
    std::map<std::string, std::vector<std::string>> out, in;

    explicit Region(const std::set<Arc>& arcs) {
        for (const auto& [s, d] : arcs) {
            nodes.insert(s);
            nodes.insert(d);
            out[s].push_back(d);
            in[d].push_back(s);
        }
    }

    std::set<std::string> reach(const std::string& from, bool forward, const std::string& avoid = {}) const {
        std::set<std::string> seen{from};
        std::deque<std::string> q{from};
        const auto& adj = forward ? out : in;
        while (!q.empty()) {
            auto x = q.front();
            q.pop_front();
            auto it = adj.find(x);
            if (it == adj.end()) continue;
            for (const auto& y : it->second)
                if (y != avoid && seen.insert(y).second) q.push_back(y);
        }
        return seen;
    }
};

// Groups arcs into branches: connected components once entry and exit are
// removed. A direct entry->exit arc forms its own branch.
std::vector<std::set<Arc>> branches(const std::set<Arc>& arcs, const std::string& entry, const std::string& exit) {
    std::map<std::string, std::string> parent;
    std::function<std::string(const std::string&)> find = [&](const std::string& x) -> std::string {
        auto it = parent.find(x);
        if (it == parent.end() || it->second == x) return x;
        return it->second = find(it->second);
    };
    auto inner = [&](const std::string& x) { return x != entry && x != exit; };
    for (const auto& [s, d] : arcs) {
        if (inner(s)) parent.try_emplace(s, s);
        if (inner(d)) parent.try_emplace(d, d);
        if (inner(s) && inner(d)) {
            auto a = find(s), b = find(d);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::map<std::string, std::set<Arc>> groups;
    std::vector<std::set<Arc>> direct;
    for (const auto& arc : arcs) {
        const auto& [s, d] = arc;
        if (inner(s))
            groups[find(s)].insert(arc);
        else if (inner(d))
            groups[find(d)].insert(arc);
        else
            direct.push_back({arc});
    }
    std::vector<std::set<Arc>> result;
    for (auto& [k, g] : groups) result.push_back(std::move(g));
    for (auto& g : direct) result.push_back(std::move(g));
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
    return result;
}

// Arcs of `arcs` lying on some u->v path.
std::set<Arc> path_arcs(const Region& r, const std::set<Arc>& arcs, const std::string& u, const std::string& v) {
    auto fwd = r.reach(u, true);
    if (!fwd.count(v)) return {};
    auto bwd = r.reach(v, false);
    std::set<Arc> result;
    for (const auto& arc : arcs)
        if (fwd.count(arc.first) && bwd.count(arc.second) && arc.first != v && arc.second != u) result.insert(arc);
    return result;
}

bool overlap(const std::set<Arc>& a, const std::set<Arc>& b) {
    bool inter = false, a_only = false, b_only = false;
    for (const auto& x : a) (b.count(x) ? inter : a_only) = true;
    for (const auto& x : b)
        if (!a.count(x)) b_only = true;
    return inter && a_only && b_only;
}

bool subset(const std::set<Arc>& a, const std::set<Arc>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

class Decomposer {
public:
    explicit Decomposer(const ProcessModel& m) : m_(m) {}

    RpstNode decompose(const std::set<Arc>& arcs, const std::string& entry, const std::string& exit) {
        RpstNode node;
        node.entry = entry;
        node.exit = exit;
        node.arcs = arcs;
        if (arcs.size() == 1) {
            node.kind = RpstKind::trivial;
            return node;
        }

        auto bs = branches(arcs, entry, exit);
        if (bs.size() >= 2) {
            node.kind = RpstKind::bond;
            for (const auto& b : bs) node.children.push_back(decompose(b, entry, exit));
            return node;
        }

        Region r(arcs);
        std::vector<std::string> cuts;
        for (const auto& x : r.nodes) {
            if (x == entry || x == exit) continue;
            if (!r.reach(entry, true, x).count(exit)) cuts.push_back(x);
        }
        if (!cuts.empty()) {
            node.kind = RpstKind::polygon;
            auto from_entry = [&](const std::string& x) { return r.reach(x, true).size(); };
            std::sort(cuts.begin(), cuts.end(),
                      [&](const auto& a, const auto& b) { return from_entry(a) > from_entry(b); });
            std::vector<std::string> points{entry};
            points.insert(points.end(), cuts.begin(), cuts.end());
            points.push_back(exit);
            for (std::size_t k = 0; k + 1 < points.size(); ++k) {
                auto seg = path_arcs(r, arcs, points[k], points[k + 1]);
                node.children.push_back(decompose(seg, points[k], points[k + 1]));
            }
            return node;
        }

        node.kind = RpstKind::rigid;
        rigid_children(node, r);
        return node;
    }

private:
    // A node is clean inside a candidate when every model arc touching it lies
    // inside the candidate.
    bool clean(const std::set<Arc>& cand, const std::string& x) const {
        for (const auto& s : m_.successors(x))
            if (!cand.count({x, s})) return false;
        for (const auto& p : m_.predecessors(x))
            if (!cand.count({p, x})) return false;
        return true;
    }

    void rigid_children(RpstNode& node, const Region& r) {
        std::vector<std::pair<std::pair<std::string, std::string>, std::set<Arc>>> cands;
        for (const auto& u : r.nodes) {
            for (const auto& v : r.nodes) {
                if (u == v) continue;
                auto paths = path_arcs(r, node.arcs, u, v);
                if (paths.size() < 2) continue;
                std::set<Arc> frag;
                for (const auto& b : branches(paths, u, v)) {
                    bool ok = true;
                    for (const auto& [s, d] : b) {
                        if (s != u && s != v && !clean(b, s)) ok = false;
                        if (d != u && d != v && !clean(b, d)) ok = false;
                    }
                    if (ok) frag.insert(b.begin(), b.end());
                }
                if (frag.size() >= 2 && frag != node.arcs) cands.push_back({{u, v}, std::move(frag)});
            }
        }
        std::vector<bool> canonical(cands.size(), true);
        for (std::size_t i = 0; i < cands.size(); ++i)
            for (std::size_t j = i + 1; j < cands.size(); ++j)
                if (overlap(cands[i].second, cands[j].second)) canonical[i] = canonical[j] = false;

        std::vector<std::size_t> maximal;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (!canonical[i]) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < cands.size() && !dominated; ++j) {
                if (i == j || !canonical[j]) continue;
                if (cands[i].second == cands[j].second) {
                    dominated = j < i;
                } else if (subset(cands[i].second, cands[j].second)) {
                    dominated = true;
                }
            }
            if (!dominated) maximal.push_back(i);
        }

        std::set<Arc> covered;
        for (auto i : maximal) {
            const auto& [uv, frag] = cands[i];
            covered.insert(frag.begin(), frag.end());
            node.children.push_back(decompose(frag, uv.first, uv.second));
        }
        for (const auto& arc : node.arcs)
            if (!covered.count(arc)) node.children.push_back(decompose({arc}, arc.first, arc.second));
        std::sort(node.children.begin(), node.children.end(),
                  [](const RpstNode& a, const RpstNode& b) { return *a.arcs.begin() < *b.arcs.begin(); });
    }

    const ProcessModel& m_;
};

void format_into(std::ostringstream& os, const RpstNode& n, int depth) {
    os << std::string(depth * 2, ' ') << to_string(n.kind) << " [" << n.entry << " -> " << n.exit << "]";
    if (n.kind == RpstKind::trivial) os << " (" << n.arcs.begin()->first << "," << n.arcs.begin()->second << ")";
    os << "\n";
    for (const auto& c : n.children) format_into(os, c, depth + 1);
}

}  // namespace

std::string_view to_string(RpstKind kind) {
    switch (kind) {
        case RpstKind::trivial: return "trivial";
        case RpstKind::polygon: return "polygon";
        case RpstKind::bond: return "bond";
        case RpstKind::rigid: return "rigid";
    }
    return "?";
}

RpstNode compute_rpst(const ProcessModel& m) {
    validate(m);
    return Decomposer(m).decompose(m.arcs(), m.source(), m.sink());
}

bool is_well_structured(const RpstNode& root) { return count_kind(root, RpstKind::rigid) == 0; }

std::size_t count_kind(const RpstNode& root, RpstKind kind) {
    std::size_t n = root.kind == kind ? 1 : 0;
    for (const auto& c : root.children) n += count_kind(c, kind);
    return n;
}

std::string format_rpst(const RpstNode& root) {
    std::ostringstream os;
    format_into(os, root, 0);
    return os.str();
}

bool is_boundary_label(std::string_view name) { return name == kBoundaryIn || name == kBoundaryOut; }

ProcessModel lift_fragment(const ProcessModel& m, const std::set<Arc>& arcs, const std::string& entry,
                           const std::string& exit) {
    ProcessModel out;
    std::set<std::string> nodes;
    for (const auto& [s, d] : arcs) {
        nodes.insert(s);
        nodes.insert(d);
    }
    if (!nodes.count(entry) || !nodes.count(exit)) throw ContractError("fragment boundary not in fragment");
    for (const auto& id : nodes) {
        const auto& n = m.node(id);
        out.add_node(id, n.kind, n.name);
    }
    out.add_node(kLiftSourceId, NodeKind::task, std::string(kBoundaryIn));
    out.add_node(kLiftSinkId, NodeKind::task, std::string(kBoundaryOut));
    for (const auto& [s, d] : arcs) out.add_arc(s, d);
    out.add_arc(kLiftSourceId, entry);
    out.add_arc(exit, kLiftSinkId);
    normalize_gateways(out);
    return out;
}

}  // namespace bpstruct
