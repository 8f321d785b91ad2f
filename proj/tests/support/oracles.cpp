#include "support/oracles.hpp"

#include <algorithm>

namespace bpstruct::oracle {

namespace {

Bitset subset_bits(std::size_t n, unsigned mask) {
    Bitset b(n);
    for (std::size_t v = 0; v < n; ++v)
        if (mask >> v & 1u) b.set(v);
    return b;
}

bool module_mask(const Digraph& g, const Bitset& m) {
    const std::size_t n = g.size();
    for (std::size_t x = 0; x < n; ++x) {
        if (m[x]) continue;
        int out = -1, in = -1;
        for (auto v = m.find_first(); v != Bitset::npos; v = m.find_next(v)) {
            int o = g.arc(static_cast<int>(x), static_cast<int>(v)), i = g.arc(static_cast<int>(v), static_cast<int>(x));
            if ((out >= 0 && o != out) || (in >= 0 && i != in)) return false;
            out = o;
            in = i;
        }
    }
    return true;
}

bool overlap(const Bitset& a, const Bitset& b) {
    return a.intersects(b) && !a.is_subset_of(b) && !b.is_subset_of(a);
}

MdtNode build(const Digraph& g, const Bitset& node, const std::vector<Bitset>& strong) {
    MdtNode out;
    for (auto v = node.find_first(); v != Bitset::npos; v = node.find_next(v)) out.members.push_back(static_cast<int>(v));
    if (node.count() == 1) return out;
    for (const auto& s : strong) {
        if (!s.is_proper_subset_of(node)) continue;
        bool maximal = std::none_of(strong.begin(), strong.end(), [&](const Bitset& t) {
            return s.is_proper_subset_of(t) && t.is_proper_subset_of(node);
        });
        if (maximal) out.children.push_back(build(g, s, strong));
    }
    std::sort(out.children.begin(), out.children.end(),
              [](const MdtNode& a, const MdtNode& b) { return a.members.front() < b.members.front(); });

    const std::size_t k = out.children.size();
    auto rel = [&](std::size_t i, std::size_t j) { return g.arc(out.children[i].members.front(), out.children[j].members.front()); };
    bool all_both = true, none = true, tournament = true, unrelated = false;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            bool f = rel(i, j), b = rel(j, i);
            all_both &= f && b;
            none &= !f && !b;
            tournament &= f != b;
            unrelated |= !f && !b;
        }
    bool transitive = tournament;
    for (std::size_t i = 0; i < k && transitive; ++i)
        for (std::size_t j = 0; j < k && transitive; ++j)
            for (std::size_t l = 0; l < k && transitive; ++l)
                if (i != j && j != l && i != l && rel(i, j) && rel(j, l)) transitive = rel(i, l);
    if (all_both) {
        out.cls = ModuleClass::xor_complete;
    } else if (none) {
        out.cls = ModuleClass::and_complete;
    } else if (transitive) {
        out.cls = ModuleClass::linear;
        // children listed from the first to the last in the order
        std::stable_sort(out.children.begin(), out.children.end(), [&](const MdtNode& a, const MdtNode& b) {
            return g.arc(a.members.front(), b.members.front());
        });
    } else {
        out.cls = ModuleClass::primitive;
        out.concurrent = unrelated;
    }
    return out;
}

}  // namespace

MdtNode brute_force_mdt(const Digraph& g) {
    const std::size_t n = g.size();
    std::vector<Bitset> modules;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        Bitset m = subset_bits(n, mask);
        if (module_mask(g, m)) modules.push_back(m);
    }
    std::vector<Bitset> strong;
    for (const auto& m : modules)
        if (std::none_of(modules.begin(), modules.end(), [&](const Bitset& o) { return overlap(m, o); }))
            strong.push_back(m);
    return build(g, Bitset(n).set(), strong);
}

std::vector<Bitset> brute_force_poset(const OrderingRelationsGraph& g) {
    const std::size_t n = g.size();
    std::vector<Bitset> out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        Bitset w = subset_bits(n, mask);
        bool ok = true;
        for (auto a = w.find_first(); a != Bitset::npos && ok; a = w.find_next(a))
            for (auto b = w.find_first(); b != Bitset::npos && ok; b = w.find_next(b))
                ok = !(g.has_arc(static_cast<int>(a), static_cast<int>(b)) && g.has_arc(static_cast<int>(b), static_cast<int>(a)));
        for (auto v = w.find_first(); v != Bitset::npos && ok; v = w.find_next(v)) {
            for (std::size_t c = 0; c < n && ok; ++c) {
                if (w[c] || !g.has_arc(static_cast<int>(c), static_cast<int>(v)) || g.has_arc(static_cast<int>(v), static_cast<int>(c)))
                    continue;
                bool excused = false;
                for (auto d = w.find_first(); d != Bitset::npos && !excused; d = w.find_next(d))
                    excused = g.has_arc(static_cast<int>(c), static_cast<int>(d)) && g.has_arc(static_cast<int>(d), static_cast<int>(c));
                ok = excused;
            }
        }
        if (ok) out.push_back(w);
    }
    std::sort(out.begin(), out.end(), [](const Bitset& a, const Bitset& b) {
        if (a.count() != b.count()) return a.count() < b.count();
        return a < b;
    });
    return out;
}

std::vector<int> join_prime_elements(const Poset& p) {
    const std::size_t k = p.elements.size();
    const auto& e = p.elements;
    auto lub = [&](std::size_t x, std::size_t y) -> int {
        int best = -1;
        for (std::size_t z = 0; z < k; ++z) {
            if (!e[x].is_subset_of(e[z]) || !e[y].is_subset_of(e[z])) continue;
            if (best < 0 || e[z].is_subset_of(e[best])) best = static_cast<int>(z);
        }
        return best;
    };
    std::vector<int> out;
    for (std::size_t q = 0; q < k; ++q) {
        if (e[q].none()) continue;
        bool prime = true;
        for (std::size_t x = 0; x < k && prime; ++x)
            for (std::size_t y = x; y < k && prime; ++y) {
                int z = lub(x, y);
                if (z >= 0 && e[q].is_subset_of(e[z])) prime = e[q].is_subset_of(e[x]) || e[q].is_subset_of(e[y]);
            }
        if (prime) out.push_back(static_cast<int>(q));
    }
    return out;
}

std::set<Marking> prefix_markings(const Prefix& prefix) {
    OrderingRelations rel(prefix.net);
    std::set<Marking> out;
    for (const auto& c : all_configurations(prefix.net, rel, 1'000'000)) out.insert(mark_of(prefix, c));
    return out;
}

std::size_t cutoff_law_violations(const Prefix& prefix) {
    auto rest = [&](int e) {
        auto cut = prefix_cut(prefix, prefix.local_configs[e]);
        std::set<int> s(cut.begin(), cut.end());
        for (int c : prefix.net.events[e].post) s.erase(c);
        return s;
    };
    std::size_t bad = 0;
    for (std::size_t e = 0; e < prefix.corr.size(); ++e)
        if (prefix.corr[e] >= 0 && rest(static_cast<int>(e)) != rest(prefix.corr[e])) ++bad;
    return bad;
}

}  // namespace bpstruct::oracle
