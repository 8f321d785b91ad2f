#include "bpstruct/mdt.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "bpstruct/error.hpp"

namespace bpstruct {

Digraph::Digraph(const OrderingRelationsGraph& g) : Digraph(g.size()) {
    for (auto [u, v] : g.arcs()) add_arc(u, v);
}

std::string_view to_string(ModuleClass c) {
    switch (c) {
        case ModuleClass::trivial: return "trivial";
        case ModuleClass::linear: return "linear";
        case ModuleClass::xor_complete: return "xor-complete";
        case ModuleClass::and_complete: return "and-complete";
        case ModuleClass::primitive: return "primitive";
    }
    return "?";
}

namespace {

std::vector<Bitset> in_rows(const Digraph& g) {
    const std::size_t n = g.size();
    std::vector<Bitset> in(n, Bitset(n));
    for (std::size_t u = 0; u < n; ++u)
        for (auto v = g.out[u].find_first(); v != Bitset::npos; v = g.out[u].find_next(v)) in[v].set(u);
    return in;
}

bool uniform(const Bitset& row, const Bitset& set) {
    auto hit = row & set;
    return hit.none() || hit == set;
}

// Smallest module containing `seed`.
Bitset module_closure(const Digraph& g, const std::vector<Bitset>& in, Bitset seed) {
    const std::size_t n = g.size();
    for (bool grown = true; grown;) {
        grown = false;
        for (std::size_t v = 0; v < n; ++v) {
            if (seed[v]) continue;
            if (!uniform(g.out[v], seed) || !uniform(in[v], seed)) {
                seed.set(v);
                grown = true;
            }
        }
    }
    return seed;
}

bool overlap(const Bitset& a, const Bitset& b) { return a.intersects(b) && !a.is_subset_of(b) && !b.is_subset_of(a); }

std::vector<int> to_vector(const Bitset& b) {
    std::vector<int> out;
    for (auto i = b.find_first(); i != Bitset::npos; i = b.find_next(i)) out.push_back(static_cast<int>(i));
    return out;
}

}  // namespace

bool is_module(const Digraph& g, const std::vector<int>& members) {
    const std::size_t n = g.size();
    if (members.empty()) throw ContractError("module candidate is empty");
    Bitset set(n);
    for (int v : members) set.set(v);
    auto in = in_rows(g);
    for (std::size_t v = 0; v < n; ++v)
        if (!set[v] && (!uniform(g.out[v], set) || !uniform(in[v], set))) return false;
    return true;
}

Digraph quotient(const Digraph& g, const MdtNode& node) {
    const std::size_t k = node.children.size();
    Digraph q(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (i != j && g.arc(node.children[i].members.front(), node.children[j].members.front()))
                q.add_arc(static_cast<int>(i), static_cast<int>(j));
    return q;
}

void classify_module(const Digraph& g, MdtNode& node) {
    node.concurrent = false;
    if (node.children.empty()) {
        node.cls = ModuleClass::trivial;
        return;
    }
    std::sort(node.children.begin(), node.children.end(),
              [](const MdtNode& a, const MdtNode& b) { return a.members.front() < b.members.front(); });
    auto q = quotient(g, node);
    const std::size_t k = q.size();
    bool all_both = true, none = true, all_one_way = true, any_unrelated = false;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            bool f = q.arc(static_cast<int>(i), static_cast<int>(j)), b = q.arc(static_cast<int>(j), static_cast<int>(i));
            all_both = all_both && f && b;
            none = none && !f && !b;
            all_one_way = all_one_way && (f != b);
            any_unrelated = any_unrelated || (!f && !b);
        }
    }
    if (all_both) {
        node.cls = ModuleClass::xor_complete;
        return;
    }
    if (none) {
        node.cls = ModuleClass::and_complete;
        return;
    }
    if (all_one_way) {
        // A tournament is transitive iff its out-degrees are pairwise distinct.
        std::vector<std::pair<std::size_t, std::size_t>> degree;
        for (std::size_t i = 0; i < k; ++i) degree.push_back({q.out[i].count(), i});
        std::sort(degree.rbegin(), degree.rend());
        bool transitive = true;
        for (std::size_t r = 0; r < k; ++r) transitive = transitive && degree[r].first == k - 1 - r;
        if (transitive) {
            std::vector<MdtNode> ordered;
            for (auto [d, i] : degree) ordered.push_back(std::move(node.children[i]));
            node.children = std::move(ordered);
            node.cls = ModuleClass::linear;
            return;
        }
    }
    node.cls = ModuleClass::primitive;
    node.concurrent = any_unrelated;
}

MdtNode modular_decomposition(const Digraph& g) {
    const std::size_t n = g.size();
    if (n == 0) throw ContractError("modular decomposition of an empty graph");
    auto in = in_rows(g);

    std::set<Bitset> pair_modules;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            Bitset seed(n);
            seed.set(u);
            seed.set(v);
            pair_modules.insert(module_closure(g, in, seed));
        }
    }
    std::vector<Bitset> family(pair_modules.begin(), pair_modules.end());

    // Complete and edgeless nodes with three or more children are not the
    // closure of any pair; they are unions of overlap-connected pair modules.
    std::set<Bitset> candidates(family.begin(), family.end());
    {
        std::vector<int> comp(family.size(), -1);
        int next = 0;
        for (std::size_t i = 0; i < family.size(); ++i) {
            if (comp[i] >= 0) continue;
            Bitset uni = family[i];
            std::vector<std::size_t> stack{i};
            comp[i] = next;
            while (!stack.empty()) {
                auto a = stack.back();
                stack.pop_back();
                for (std::size_t b = 0; b < family.size(); ++b) {
                    if (comp[b] < 0 && overlap(family[a], family[b])) {
                        comp[b] = next;
                        uni |= family[b];
                        stack.push_back(b);
                    }
                }
            }
            candidates.insert(uni);
            ++next;
        }
    }
    Bitset all(n);
    all.set();
    candidates.insert(all);
    for (std::size_t v = 0; v < n; ++v) {
        Bitset s(n);
        s.set(v);
        candidates.insert(s);
    }

    std::vector<Bitset> strong;
    for (const auto& c : candidates) {
        bool ok = std::none_of(family.begin(), family.end(), [&](const Bitset& m) { return overlap(c, m); });
        if (ok) strong.push_back(c);
    }
    // Larger modules first so every parent precedes its children.
    std::sort(strong.begin(), strong.end(), [](const Bitset& a, const Bitset& b) {
        if (a.count() != b.count()) return a.count() > b.count();
        return a < b;
    });

    std::vector<MdtNode> nodes(strong.size());
    std::vector<int> parent(strong.size(), -1);
    for (std::size_t i = 0; i < strong.size(); ++i) {
        nodes[i].members = to_vector(strong[i]);
        for (std::size_t j = i; j-- > 0;) {
            if (strong[i].is_subset_of(strong[j])) {
                parent[i] = static_cast<int>(j);
                break;
            }
        }
    }
    for (std::size_t i = strong.size(); i-- > 1;) {
        if (parent[i] < 0) throw ContractError("module tree is not rooted");
        nodes[parent[i]].children.push_back(std::move(nodes[i]));
    }
    std::function<void(MdtNode&)> classify = [&](MdtNode& node) {
        for (auto& c : node.children) classify(c);
        classify_module(g, node);
    };
    classify(nodes[0]);
    return std::move(nodes[0]);
}

std::size_t count_class(const MdtNode& root, ModuleClass c, bool concurrent_only) {
    std::size_t k = (root.cls == c && (!concurrent_only || root.concurrent)) ? 1 : 0;
    for (const auto& ch : root.children) k += count_class(ch, c, concurrent_only);
    return k;
}

namespace {

std::string member_text(const MdtNode& node, const std::vector<std::string>& labels) {
    std::string s = "{";
    for (std::size_t i = 0; i < node.members.size(); ++i) {
        if (i) s += ",";
        int v = node.members[i];
        s += static_cast<std::size_t>(v) < labels.size() ? labels[v] : std::to_string(v);
    }
    return s + "}";
}

std::string class_text(const MdtNode& node) {
    std::string s(to_string(node.cls));
    if (node.cls == ModuleClass::primitive) s += node.concurrent ? " (concurrent)" : " (sequential)";
    return s;
}

}  // namespace

std::string format_mdt(const MdtNode& root, const std::vector<std::string>& labels) {
    std::ostringstream os;
    std::function<void(const MdtNode&, int)> rec = [&](const MdtNode& node, int depth) {
        os << std::string(2 * depth, ' ') << class_text(node) << " " << member_text(node, labels) << "\n";
        for (const auto& c : node.children) rec(c, depth + 1);
    };
    rec(root, 0);
    return os.str();
}

std::string export_mdt_dot(const MdtNode& root, const std::vector<std::string>& labels) {
    std::ostringstream os;
    os << "digraph mdt {\n";
    int next = 0;
    std::function<int(const MdtNode&)> rec = [&](const MdtNode& node) {
        int id = next++;
        os << "  m" << id << " [label=\"" << class_text(node) << "\\n" << member_text(node, labels) << "\"];\n";
        for (const auto& c : node.children) {
            int cid = rec(c);
            os << "  m" << id << " -> m" << cid << ";\n";
        }
        return id;
    };
    rec(root);
    os << "}\n";
    return os.str();
}

}  // namespace bpstruct
