#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bpstruct/unfolder.hpp"

namespace bpstruct {

enum class OrgRelation { causal, inverse, conflict, concurrent };

std::string_view to_string(OrgRelation r);

// Vertices are indexed 0..n-1. Only the arc set is stored; the four-way
// relation between two vertices is read off the arcs in both directions.
class OrderingRelationsGraph {
public:
    int add_vertex(std::string label, int event = -1);
    void add_arc(int u, int v);

    std::size_t size() const { return labels_.size(); }
    const std::string& label(int v) const { return labels_[v]; }
    const std::vector<std::string>& labels() const { return labels_; }
    int event(int v) const { return events_[v]; }
    const std::set<std::pair<int, int>>& arcs() const { return arcs_; }
    bool has_arc(int u, int v) const { return arcs_.count({u, v}) > 0; }
    OrgRelation relation(int u, int v) const;

    // Subgraph induced by `vertices`, in the given order.
    OrderingRelationsGraph induced(const std::vector<int>& vertices) const;

    bool operator==(const OrderingRelationsGraph&) const = default;

private:
    std::vector<std::string> labels_;
    std::vector<int> events_;
    std::set<std::pair<int, int>> arcs_;
};

// x and y are prefix events. True when y follows x in the flow relation, or
// when a chain of healthy cutoffs e1..en leads from x to y: x reaches e1
// (reflexively), each corr(ei) reaches e(i+1) (reflexively), and corr(en)
// strictly precedes y.
bool proper_causal(const Prefix& prefix, const OrderingRelations& rel, int x, int y);

OrderingRelationsGraph build_org(const Prefix& prefix);
OrderingRelationsGraph build_org(const Prefix& prefix, const OrderingRelations& rel);

// Checks the graph laws: no self-arcs, acyclic one-way arcs. Throws ContractError.
void check_org(const OrderingRelationsGraph& g);

std::string format_org(const OrderingRelationsGraph& g);
std::string export_org_dot(const OrderingRelationsGraph& g);

}  // namespace bpstruct
