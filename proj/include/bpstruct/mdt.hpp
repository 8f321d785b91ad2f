#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bpstruct/occurrence.hpp"
#include "bpstruct/org.hpp"

namespace bpstruct {

// Plain digraph on vertices 0..n-1 as adjacency bit rows.
struct Digraph {
    std::vector<Bitset> out;

    explicit Digraph(std::size_t n = 0) : out(n, Bitset(n)) {}
    explicit Digraph(const OrderingRelationsGraph& g);

    std::size_t size() const { return out.size(); }
    bool arc(int u, int v) const { return out[u][v]; }
    void add_arc(int u, int v) { out[u].set(v); }
};

enum class ModuleClass { trivial, linear, xor_complete, and_complete, primitive };

std::string_view to_string(ModuleClass c);

struct MdtNode {
    std::vector<int> members;  // sorted
    ModuleClass cls = ModuleClass::trivial;
    bool concurrent = false;  // primitive only
    std::vector<MdtNode> children;

    bool operator==(const MdtNode&) const = default;
};

bool is_module(const Digraph& g, const std::vector<int>& members);

MdtNode modular_decomposition(const Digraph& g);
inline MdtNode modular_decomposition(const OrderingRelationsGraph& g) { return modular_decomposition(Digraph(g)); }

// Classifies on the quotient over the node's children and puts linear
// children in their induced order. Sets `cls` and `concurrent` of `node`.
void classify_module(const Digraph& g, MdtNode& node);

// Quotient digraph over the children, one representative each.
Digraph quotient(const Digraph& g, const MdtNode& node);

std::size_t count_class(const MdtNode& root, ModuleClass c, bool concurrent_only = false);

std::string format_mdt(const MdtNode& root, const std::vector<std::string>& labels = {});
std::string export_mdt_dot(const MdtNode& root, const std::vector<std::string>& labels = {});

}  // namespace bpstruct
