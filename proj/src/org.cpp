#include "bpstruct/org.hpp"

#include <deque>
#include <sstream>

#include "bpstruct/error.hpp"
#include "bpstruct/net.hpp"

namespace bpstruct {

std::string_view to_string(OrgRelation r) {
    switch (r) {
        case OrgRelation::causal: return "causal";
        case OrgRelation::inverse: return "inverse";
        case OrgRelation::conflict: return "conflict";
        case OrgRelation::concurrent: return "concurrent";
    }
    return "?";
}

int OrderingRelationsGraph::add_vertex(std::string label, int event) {
    labels_.push_back(std::move(label));
    events_.push_back(event);
    return static_cast<int>(labels_.size()) - 1;
}

void OrderingRelationsGraph::add_arc(int u, int v) {
    auto n = static_cast<int>(size());
    if (u < 0 || v < 0 || u >= n || v >= n) throw ContractError("arc endpoint out of range");
    if (u == v) throw ContractError("self-arc in ordering relations graph");
    arcs_.insert({u, v});
}

OrgRelation OrderingRelationsGraph::relation(int u, int v) const {
    bool f = has_arc(u, v), b = has_arc(v, u);
    if (f && b) return OrgRelation::conflict;
    if (f) return OrgRelation::causal;
    if (b) return OrgRelation::inverse;
    return OrgRelation::concurrent;
}

OrderingRelationsGraph OrderingRelationsGraph::induced(const std::vector<int>& vertices) const {
    OrderingRelationsGraph g;
    for (int v : vertices) g.add_vertex(labels_[v], events_[v]);
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = 0; j < vertices.size(); ++j)
            if (i != j && has_arc(vertices[i], vertices[j])) g.add_arc(static_cast<int>(i), static_cast<int>(j));
    return g;
}

bool proper_causal(const Prefix& prefix, const OrderingRelations& rel, int x, int y) {
    const auto& net = prefix.net;
    const int xn = net.event_node(x), yn = net.event_node(y);
    if (rel.causal(xn, yn)) return true;

    auto reaches_reflexive = [&](int from_event, int to_event) {
        return from_event == to_event || rel.causal(net.event_node(from_event), net.event_node(to_event));
    };
    std::vector<bool> seen(net.events.size(), false);
    std::deque<int> queue;
    for (std::size_t e = 0; e < net.events.size(); ++e) {
        if (prefix.is_healthy_cutoff(static_cast<int>(e)) && reaches_reflexive(x, static_cast<int>(e))) {
            seen[e] = true;
            queue.push_back(static_cast<int>(e));
        }
    }
    while (!queue.empty()) {
        int e = queue.front();
        queue.pop_front();
        int c = prefix.corr[e];
        if (rel.causal(net.event_node(c), yn)) return true;
        for (std::size_t f = 0; f < net.events.size(); ++f) {
            if (seen[f] || !prefix.is_healthy_cutoff(static_cast<int>(f))) continue;
            if (reaches_reflexive(c, static_cast<int>(f))) {
                seen[f] = true;
                queue.push_back(static_cast<int>(f));
            }
        }
    }
    return false;
}

OrderingRelationsGraph build_org(const Prefix& prefix) {
    OrderingRelations rel(prefix.net);
    return build_org(prefix, rel);
}

OrderingRelationsGraph build_org(const Prefix& prefix, const OrderingRelations& rel) {
    const auto& net = prefix.net;
    OrderingRelationsGraph g;
    std::vector<int> events;
    for (std::size_t e = 0; e < net.events.size(); ++e) {
        if (!is_observable(net.events[e].label)) continue;
        events.push_back(static_cast<int>(e));
        g.add_vertex(net.events[e].label, static_cast<int>(e));
    }
    const std::size_t n = events.size();
    std::vector<std::vector<bool>> causal(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) causal[i][j] = proper_causal(prefix, rel, events[i], events[j]);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            bool conflict = rel.conflict(net.event_node(events[i]), net.event_node(events[j])) && !causal[i][j] &&
                            !causal[j][i];
            if (causal[i][j] || conflict) g.add_arc(static_cast<int>(i), static_cast<int>(j));
        }
    }
    return g;
}

void check_org(const OrderingRelationsGraph& g) {
    const std::size_t n = g.size();
    std::vector<int> indeg(n, 0);
    for (auto [u, v] : g.arcs()) {
        if (u == v) throw ContractError("self-arc in ordering relations graph");
        if (!g.has_arc(v, u)) ++indeg[v];
    }
    std::deque<int> q;
    for (std::size_t v = 0; v < n; ++v)
        if (indeg[v] == 0) q.push_back(static_cast<int>(v));
    std::size_t done = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        ++done;
        for (std::size_t v = 0; v < n; ++v)
            if (g.relation(u, static_cast<int>(v)) == OrgRelation::causal && --indeg[v] == 0)
                q.push_back(static_cast<int>(v));
    }
    if (done != n) throw ContractError("proper causality is cyclic");
}

std::string format_org(const OrderingRelationsGraph& g) {
    std::ostringstream os;
    for (std::size_t v = 0; v < g.size(); ++v) os << "v" << v << " " << g.label(static_cast<int>(v)) << "\n";
    for (std::size_t u = 0; u < g.size(); ++u) {
        for (std::size_t v = u + 1; v < g.size(); ++v) {
            auto r = g.relation(static_cast<int>(u), static_cast<int>(v));
            const char* sym = r == OrgRelation::causal    ? "->"
                              : r == OrgRelation::inverse ? "<-"
                              : r == OrgRelation::conflict ? "#"
                                                           : "||";
            os << g.label(static_cast<int>(u)) << " " << sym << " " << g.label(static_cast<int>(v)) << "\n";
        }
    }
    return os.str();
}

std::string export_org_dot(const OrderingRelationsGraph& g) {
    std::ostringstream os;
    os << "digraph org {\n";
    for (std::size_t v = 0; v < g.size(); ++v)
        os << "  v" << v << " [label=\"" << g.label(static_cast<int>(v)) << "\"];\n";
    for (auto [u, v] : g.arcs()) {
        if (!g.has_arc(v, u))
            os << "  v" << u << " -> v" << v << ";\n";
        else if (u < v)
            os << "  v" << u << " -> v" << v << " [dir=both, style=dashed];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace bpstruct
