#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "bpstruct/error.hpp"
#include "bpstruct/rpst.hpp"
#include "bpstruct/synthesis.hpp"

namespace bpstruct {

namespace {

bool size_order(const Bitset& a, const Bitset& b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return a < b;
}

std::string set_text(const Poset& p, const Bitset& x) {
    std::string s = "{";
    bool first = true;
    for (auto v = x.find_first(); v != Bitset::npos; v = x.find_next(v)) {
        if (!first) s += ",";
        s += p.labels[v];
        first = false;
    }
    return s + "}";
}

// Smallest upper bound of `xs` when it exists, -1 otherwise.
int least_upper_bound(const Poset& p, const std::vector<int>& xs) {
    std::vector<int> ub;
    for (std::size_t k = 0; k < p.elements.size(); ++k) {
        bool above = std::all_of(xs.begin(), xs.end(), [&](int x) { return p.elements[x].is_subset_of(p.elements[k]); });
        if (above) ub.push_back(static_cast<int>(k));
    }
    for (int u : ub) {
        bool least = std::all_of(ub.begin(), ub.end(), [&](int w) { return p.elements[u].is_subset_of(p.elements[w]); });
        if (least) return u;
    }
    return -1;
}

}  // namespace

int Poset::index_of(const Bitset& x) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), x, size_order);
    if (it == elements.end() || *it != x) return -1;
    return static_cast<int>(it - elements.begin());
}

std::vector<int> Poset::maximal() const {
    std::vector<int> out;
    for (std::size_t a = 0; a < elements.size(); ++a) {
        bool dominated = false;
        for (std::size_t b = a + 1; b < elements.size() && !dominated; ++b)
            dominated = elements[b].count() > elements[a].count() && elements[a].is_subset_of(elements[b]);
        if (!dominated) out.push_back(static_cast<int>(a));
    }
    return out;
}

std::vector<int> Poset::lower_covers(int x) const {
    const auto& ex = elements[x];
    std::vector<int> below;
    for (std::size_t y = 0; y < elements.size(); ++y)
        if (elements[y].count() < ex.count() && elements[y].is_subset_of(ex)) below.push_back(static_cast<int>(y));
    std::vector<int> covers;
    for (int y : below) {
        bool covered = std::any_of(below.begin(), below.end(), [&](int z) {
            return z != y && elements[y].is_proper_subset_of(elements[z]);
        });
        if (!covered) covers.push_back(y);
    }
    return covers;
}

std::vector<int> Poset::primes() const {
    std::vector<int> out;
    for (std::size_t x = 0; x < elements.size(); ++x)
        if (lower_covers(static_cast<int>(x)).size() == 1) out.push_back(static_cast<int>(x));
    return out;
}

Poset build_poset(const OrderingRelationsGraph& g, std::size_t max_elements) {
    const std::size_t n = g.size();
    std::vector<Bitset> out(n, Bitset(n)), conf(n, Bitset(n)), pred(n, Bitset(n));
    for (auto [u, v] : g.arcs()) {
        out[u].set(v);
        if (g.has_arc(v, u))
            conf[u].set(v);
        else
            pred[v].set(u);
    }
    auto extends = [&](const Bitset& h, std::size_t v) {
        if (h.any() && !(h - out[v]).any()) return false;
        if ((h & conf[v]).any()) return false;
        Bitset missing = pred[v] - h;
        for (auto c = missing.find_first(); c != Bitset::npos; c = missing.find_next(c))
            if (!(conf[c] & h).any()) return false;
        return true;
    };

    Poset p;
    p.universe = n;
    p.labels = g.labels();
    std::set<Bitset> seen{Bitset(n)};
    std::vector<Bitset> level{Bitset(n)};
    while (!level.empty()) {
        std::set<Bitset> next;
        for (const auto& h : level) {
            for (std::size_t v = 0; v < n; ++v) {
                if (h[v] || !extends(h, v)) continue;
                Bitset h2 = h;
                h2.set(v);
                if (seen.insert(h2).second) {
                    next.insert(h2);
                    if (seen.size() > max_elements) throw GuardError("poset explosion");
                }
            }
        }
        level.assign(next.begin(), next.end());
    }
    p.elements.assign(seen.begin(), seen.end());
    std::sort(p.elements.begin(), p.elements.end(), size_order);
    return p;
}

Poset augment_poset(const Poset& p) {
    const std::size_t n = p.universe;
    Poset a;
    a.universe = n + 2;
    a.labels = p.labels;
    a.labels.emplace_back(kBoundaryIn);
    a.labels.emplace_back(kBoundaryOut);
    a.in = static_cast<int>(n);
    a.out = static_cast<int>(n + 1);
    a.elements.emplace_back(n + 2);
    for (const auto& h : p.elements) {
        Bitset x = h;
        x.resize(n + 2);
        x.set(n);
        a.elements.push_back(x);
    }
    for (int m : p.maximal()) {
        Bitset x = p.elements[m];
        x.resize(n + 2);
        x.set(n);
        x.set(n + 1);
        a.elements.push_back(x);
    }
    std::sort(a.elements.begin(), a.elements.end(), size_order);
    return a;
}

bool is_coherent(const Poset& p) {
    const std::size_t k = p.elements.size();
    std::vector<Bitset> consistent(k, Bitset(k));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            consistent[a][b] = std::any_of(p.elements.begin(), p.elements.end(), [&](const Bitset& z) {
                                   return p.elements[a].is_subset_of(z) && p.elements[b].is_subset_of(z);
                               });
    // Every pairwise consistent family (a clique of the consistency graph) needs a lub.
    std::vector<int> chosen;
    std::function<bool(std::size_t)> rec = [&](std::size_t from) {
        if (!chosen.empty() && least_upper_bound(p, chosen) < 0) return false;
        for (std::size_t x = from; x < k; ++x) {
            bool ok = std::all_of(chosen.begin(), chosen.end(), [&](int c) { return consistent[c][x]; });
            if (!ok) continue;
            chosen.push_back(static_cast<int>(x));
            bool good = rec(x + 1);
            chosen.pop_back();
            if (!good) return false;
        }
        return true;
    };
    return rec(0);
}

bool is_prime_algebraic(const Poset& p) {
    auto primes = p.primes();
    for (std::size_t x = 0; x < p.elements.size(); ++x) {
        std::vector<int> below;
        for (int q : primes)
            if (p.elements[q].is_subset_of(p.elements[x])) below.push_back(q);
        int lub = below.empty() ? p.index_of(Bitset(p.universe)) : least_upper_bound(p, below);
        if (lub != static_cast<int>(x)) return false;
    }
    return true;
}

EventStructure poset_to_event_structure(const Poset& p) {
    auto primes = p.primes();
    const std::size_t m = primes.size();
    EventStructure es;
    es.before.assign(m, Bitset(m));
    es.conflict.assign(m, Bitset(m));
    for (int q : primes) {
        auto covers = p.lower_covers(q);
        Bitset fresh = p.elements[q] - p.elements[covers.front()];
        if (fresh.count() != 1) throw ContractError("prime adds more than one vertex");
        es.labels.push_back(p.labels[fresh.find_first()]);
    }
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            if (a == b) continue;
            const auto &x = p.elements[primes[a]], &y = p.elements[primes[b]];
            if (x.is_proper_subset_of(y)) es.before[a].set(b);
            bool bounded = std::any_of(p.elements.begin(), p.elements.end(),
                                       [&](const Bitset& z) { return x.is_subset_of(z) && y.is_subset_of(z); });
            if (!bounded) es.conflict[a].set(b);
        }
    }
    return es;
}

void check_event_structure(const EventStructure& es) {
    const std::size_t m = es.size();
    for (std::size_t a = 0; a < m; ++a) {
        if (es.before[a][a]) throw ContractError("causality is not irreflexive");
        if (es.conflict[a][a]) throw ContractError("conflict is not irreflexive");
        for (std::size_t b = 0; b < m; ++b) {
            if (es.before[a][b] && es.before[b][a]) throw ContractError("causality is not antisymmetric");
            if (es.conflict[a][b] != es.conflict[b][a]) throw ContractError("conflict is not symmetric");
            for (std::size_t c = 0; c < m; ++c) {
                if (es.before[a][b] && es.before[b][c] && !es.before[a][c])
                    throw ContractError("causality is not transitive");
                // a <= b and a # c imply b # c
                if (es.before[a][b] && es.conflict[a][c] && !es.conflict[b][c])
                    throw ContractError("conflict is not hereditary");
            }
        }
    }
}

EventStructure net_event_structure(const OccurrenceNet& net) {
    OrderingRelations rel(net);
    const std::size_t m = net.events.size();
    EventStructure es;
    es.before.assign(m, Bitset(m));
    es.conflict.assign(m, Bitset(m));
    for (std::size_t a = 0; a < m; ++a) {
        es.labels.push_back(net.events[a].label);
        for (std::size_t b = 0; b < m; ++b) {
            if (a == b) continue;
            int x = net.event_node(static_cast<int>(a)), y = net.event_node(static_cast<int>(b));
            if (rel.causal(x, y)) es.before[a].set(b);
            if (rel.conflict(x, y)) es.conflict[a].set(b);
        }
    }
    return es;
}

std::string format_poset(const Poset& p) {
    std::ostringstream os;
    auto primes = p.primes();
    std::set<int> prime_set(primes.begin(), primes.end());
    for (std::size_t x = 0; x < p.elements.size(); ++x)
        os << (prime_set.count(static_cast<int>(x)) ? "* " : "  ") << set_text(p, p.elements[x]) << "\n";
    return os.str();
}

std::string export_es_dot(const EventStructure& es) {
    std::ostringstream os;
    os << "digraph es {\n";
    const std::size_t m = es.size();
    for (std::size_t e = 0; e < m; ++e) os << "  e" << e << " [label=\"e" << e << ":" << es.labels[e] << "\"];\n";
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            if (!es.before[a][b]) continue;
            bool direct = true;
            for (std::size_t c = 0; c < m && direct; ++c) direct = !(es.before[a][c] && es.before[c][b]);
            if (direct) os << "  e" << a << " -> e" << b << ";\n";
        }
    }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            if (es.conflict[a][b]) os << "  e" << a << " -> e" << b << " [dir=none, style=dashed, label=\"#\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace bpstruct
