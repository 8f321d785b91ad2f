#include "support/generators.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace bpstruct::testgen {

namespace {

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Digraph plain_digraph(Rng& rng, std::size_t n) {
    Digraph g(n);
    double p = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            if (u != v && coin(rng, p)) g.add_arc(static_cast<int>(u), static_cast<int>(v));
    return g;
}

// Writes a graph on `verts` into g.
void substituted(Rng& rng, Digraph& g, const std::vector<int>& verts) {
    const std::size_t n = verts.size();
    if (n <= 1) return;
    std::size_t k = 2 + pick(rng, n - 1);  // parts, 2..n
    std::vector<std::vector<int>> parts(k);
    std::vector<int> shuffled = verts;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t i = 0; i < n; ++i) parts[i < k ? i : pick(rng, k)].push_back(shuffled[i]);

    Digraph q(k);
    switch (pick(rng, 4)) {
        case 0:  // complete both ways
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b)
                    if (a != b) q.add_arc(static_cast<int>(a), static_cast<int>(b));
            break;
        case 1:  // edgeless
            break;
        case 2:  // linear order
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = a + 1; b < k; ++b) q.add_arc(static_cast<int>(a), static_cast<int>(b));
            break;
        default:
            q = plain_digraph(rng, k);
    }
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            if (a != b && q.arc(static_cast<int>(a), static_cast<int>(b)))
                for (int u : parts[a])
                    for (int v : parts[b]) g.add_arc(u, v);
    for (const auto& part : parts) substituted(rng, g, part);
}

}  // namespace

Digraph random_digraph(Rng& rng, std::size_t n) {
    if (coin(rng, 0.5)) return plain_digraph(rng, n);
    Digraph g(n);
    std::vector<int> all(n);
    for (std::size_t v = 0; v < n; ++v) all[v] = static_cast<int>(v);
    substituted(rng, g, all);
    return g;
}

EventStructure random_event_structure(Rng& rng, std::size_t max_events) {
    const std::size_t m = 1 + pick(rng, max_events);
    EventStructure es;
    es.before.assign(m, Bitset(m));
    es.conflict.assign(m, Bitset(m));
    static const char* names[] = {"a", "b", "c", "d", "e", "f", "g"};
    for (std::size_t e = 0; e < m; ++e) es.labels.push_back(coin(rng, 0.2) ? "a" : names[e % 7]);

    double p = std::uniform_real_distribution<double>(0.1, 0.5)(rng);
    for (std::size_t b = 0; b < m; ++b)
        for (std::size_t a = 0; a < b; ++a)
            if (coin(rng, p)) es.before[a].set(b);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t a = 0; a < m; ++a)
            if (es.before[a][k]) es.before[a] |= es.before[k];

    auto above = [&](std::size_t e) {
        Bitset s = es.before[e];
        s.set(e);
        return s;
    };
    std::size_t tries = pick(rng, m * 2 + 1);
    for (std::size_t t = 0; t < tries; ++t) {
        std::size_t a = pick(rng, m), b = pick(rng, m);
        if (a == b || es.before[a][b] || es.before[b][a] || es.conflict[a][b]) continue;
        Bitset xa = above(a), xb = above(b);
        // Heredity adds x # y for all x >= a, y >= b; none may be causally related.
        bool ok = true;
        for (auto x = xa.find_first(); x != Bitset::npos && ok; x = xa.find_next(x))
            for (auto y = xb.find_first(); y != Bitset::npos && ok; y = xb.find_next(y))
                ok = x != y && !es.before[x][y] && !es.before[y][x];
        if (!ok) continue;
        for (auto x = xa.find_first(); x != Bitset::npos; x = xa.find_next(x))
            for (auto y = xb.find_first(); y != Bitset::npos; y = xb.find_next(y)) {
                es.conflict[x].set(y);
                es.conflict[y].set(x);
            }
    }
    return es;
}

namespace {

struct Skeleton {
    std::size_t places = 0;
    std::vector<std::set<int>> pre, post;  // per transition

    NetSystem build() const {
        NetSystem sys;
        for (std::size_t p = 0; p < places; ++p) sys.net.add_place("p" + std::to_string(p));
        for (std::size_t t = 0; t < pre.size(); ++t) {
            sys.net.add_transition("t" + std::to_string(t), "t" + std::to_string(t));
            for (int p : pre[t]) sys.net.add_flow_pt(p, static_cast<int>(t));
            for (int p : post[t]) sys.net.add_flow_tp(static_cast<int>(t), p);
        }
        sys.initial.assign(places, 0);
        sys.initial[0] = 1;
        return sys;
    }

    std::vector<int> consumers(int p) const {
        std::vector<int> out;
        for (std::size_t t = 0; t < pre.size(); ++t)
            if (pre[t].count(p)) out.push_back(static_cast<int>(t));
        return out;
    }

    bool acyclic() const {
        const std::size_t n = pre.size();
        std::vector<int> state(n, 0);
        std::function<bool(std::size_t)> dfs = [&](std::size_t t) {
            state[t] = 1;
            for (int p : post[t])
                for (int u : consumers(p)) {
                    if (state[u] == 1) return false;
                    if (state[u] == 0 && !dfs(u)) return false;
                }
            state[t] = 2;
            return true;
        };
        for (std::size_t t = 0; t < n; ++t)
            if (state[t] == 0 && !dfs(t)) return false;
        return true;
    }
};

}  // namespace

NetSystem random_sound_net(Rng& rng, std::size_t max_transitions) {
    // p0 -> t0 -> p2 -> t1 -> p1; t0 and t1 are never refined.
    Skeleton s;
    s.places = 3;
    s.pre = {{0}, {2}};
    s.post = {{2}, {1}};
    const std::size_t target = std::max<std::size_t>(2, 2 + pick(rng, max_transitions - 1));
    auto internal_place = [&]() { return static_cast<int>(2 + pick(rng, s.places - 2)); };

    for (int attempt = 0; attempt < 200 && s.pre.size() < target; ++attempt) {
        Skeleton before = s;
        bool check = false;
        switch (pick(rng, 6)) {
            case 0: {  // p  =>  p -> t -> p'
                int p = internal_place();
                int q = static_cast<int>(s.places++);
                for (auto& pre : s.pre)
                    if (pre.erase(p)) pre.insert(q);
                s.pre.push_back({p});
                s.post.push_back({q});
                break;
            }
            case 1: {  // alternative copy of an inner transition
                if (s.pre.size() < 3) continue;
                std::size_t t = 2 + pick(rng, s.pre.size() - 2);
                if (s.pre[t].size() != 1) continue;
                s.pre.push_back(s.pre[t]);
                s.post.push_back(s.post[t]);
                break;
            }
            case 2: {  // parallel copy of an inner place
                int p = internal_place();
                if (s.consumers(p).size() != 1) continue;
                int q = static_cast<int>(s.places++);
                for (std::size_t t = 0; t < s.pre.size(); ++t) {
                    if (s.pre[t].count(p)) s.pre[t].insert(q);
                    if (s.post[t].count(p)) s.post[t].insert(q);
                }
                break;
            }
            case 3: {  // t  =>  t -> p -> t'
                std::size_t t = pick(rng, s.pre.size() - 1);
                if (t == 1) continue;
                int q = static_cast<int>(s.places++);
                s.pre.push_back({q});
                s.post.push_back(s.post[t]);
                s.post[t] = {q};
                break;
            }
            case 4: {  // shortcut transition between two places
                int p = internal_place(), q = internal_place();
                if (p == q) continue;
                auto cons = s.consumers(p);
                bool fc = std::all_of(cons.begin(), cons.end(), [&](int u) { return s.pre[u].size() == 1; });
                if (!fc) continue;
                s.pre.push_back({p});
                s.post.push_back({q});
                check = true;
                break;
            }
            default: {  // shortcut place between two transitions
                int t = static_cast<int>(pick(rng, s.pre.size())), u = static_cast<int>(pick(rng, s.pre.size()));
                if (t == u || t == 1 || u == 0) continue;
                bool fc = std::all_of(s.pre[u].begin(), s.pre[u].end(), [&](int p) {
                    auto c = s.consumers(p);
                    return c.size() == 1;
                });
                if (!fc) continue;
                int q = static_cast<int>(s.places++);
                s.post[t].insert(q);
                s.pre[u].insert(q);
                check = true;
            }
        }
        if (check && !(s.acyclic() && check_soundness(s.build(), 100'000).sound)) s = before;
    }
    return s.build();
}

namespace {

struct Composer {
    Rng& rng;
    ProcessModel m;
    std::size_t budget;
    int next = 0;

    std::string node(NodeKind kind) {
        std::string id = (kind == NodeKind::task ? "t" : "g") + std::to_string(next++);
        m.add_node(id, kind, kind == NodeKind::task ? "l" + std::to_string(pick(rng, 6)) : "");
        return id;
    }

    // Returns entry and exit node of a fresh fragment.
    std::pair<std::string, std::string> fragment(int depth) {
        std::size_t choice = budget < 2 || depth > 3 ? 0 : pick(rng, 4);
        if (choice == 0) {
            if (budget > 0) --budget;
            auto t = node(NodeKind::task);
            return {t, t};
        }
        std::size_t k = 2 + pick(rng, 2);
        if (choice == 1) {
            auto first = fragment(depth + 1);
            auto last = first;
            for (std::size_t i = 1; i < k; ++i) {
                auto f = fragment(depth + 1);
                m.add_arc(last.second, f.first);
                last = f;
            }
            return {first.first, last.second};
        }
        NodeKind kind = choice == 2 ? NodeKind::xor_gateway : NodeKind::and_gateway;
        auto split = node(kind), join = node(kind);
        for (std::size_t i = 0; i < k; ++i) {
            auto f = fragment(depth + 1);
            m.add_arc(split, f.first);
            m.add_arc(f.second, join);
        }
        return {split, join};
    }
};

}  // namespace

ProcessModel random_structured_model(Rng& rng, std::size_t max_tasks) {
    Composer c{rng, {}, max_tasks};
    c.m.add_node("i", NodeKind::task, "i");
    c.m.add_node("o", NodeKind::task, "o");
    auto body = c.fragment(0);
    c.m.add_arc("i", body.first);
    c.m.add_arc(body.second, "o");
    validate(c.m);
    return c.m;
}

ProcessModel random_model(Rng& rng, std::size_t max_tasks) { return net_to_model(random_sound_net(rng, max_tasks)); }

}  // namespace bpstruct::testgen
