#include "bpstruct/equivalence.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "bpstruct/unfolder.hpp"

namespace bpstruct {

namespace {

std::vector<int> refine(const PomsetRun& run, std::vector<int> colors) {
    const std::size_t n = colors.size();
    for (;;) {
        using Sig = std::tuple<int, std::vector<int>, std::vector<int>>;
        std::vector<Sig> sigs(n);
        for (std::size_t v = 0; v < n; ++v) {
            std::vector<int> pred, succ;
            for (std::size_t u = 0; u < n; ++u) {
                if (run.order[u][v]) pred.push_back(colors[u]);
                if (run.order[v][u]) succ.push_back(colors[u]);
            }
            std::sort(pred.begin(), pred.end());
            std::sort(succ.begin(), succ.end());
            sigs[v] = {colors[v], std::move(pred), std::move(succ)};
        }
        auto sorted = sigs;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<int> next(n);
        for (std::size_t v = 0; v < n; ++v)
            next[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sigs[v]) - sorted.begin());
        std::set<int> before(colors.begin(), colors.end());
        if (sorted.size() == before.size()) return next;
        colors = std::move(next);
    }
}

std::string encode(const PomsetRun& run, const std::vector<int>& perm) {
    std::string s;
    for (int v : perm) {
        s += run.labels[v];
        s += '\x1f';
    }
    s += '|';
    for (int u : perm)
        for (int v : perm) s += run.order[u][v] ? '1' : '0';
    return s;
}

void search(const PomsetRun& run, std::vector<int> colors, std::string& best) {
    colors = refine(run, colors);
    const std::size_t n = colors.size();
    std::map<int, std::vector<int>> classes;
    for (std::size_t v = 0; v < n; ++v) classes[colors[v]].push_back(static_cast<int>(v));
    auto split = std::find_if(classes.begin(), classes.end(), [](const auto& kv) { return kv.second.size() > 1; });
    if (split == classes.end()) {
        std::vector<int> perm(n);
        for (std::size_t v = 0; v < n; ++v) perm[colors[v]] = static_cast<int>(v);
        auto code = encode(run, perm);
        if (best.empty() || code < best) best = std::move(code);
        return;
    }
    for (int v : split->second) {
        std::vector<int> next(n);
        for (std::size_t u = 0; u < n; ++u) next[u] = 2 * colors[u] + ((colors[u] == split->first && static_cast<int>(u) != v) ? 1 : 0);
        search(run, next, best);
    }
}

PomsetRun project(const OccurrenceNet& net, const OrderingRelations& rel, const std::vector<int>& config) {
    PomsetRun run;
    std::vector<int> elems;
    for (int e : config)
        if (is_observable(net.events[e].label)) elems.push_back(e);
    for (int e : elems) run.labels.push_back(net.events[e].label);
    run.order.assign(elems.size(), Bitset(elems.size()));
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = 0; j < elems.size(); ++j)
            if (i != j && rel.causal(net.event_node(elems[i]), net.event_node(elems[j]))) run.order[i].set(j);
    return run;
}

std::vector<PomsetRun> runs_of(const OccurrenceNet& net, const RunLimits& limits) {
    OrderingRelations rel(net);
    std::map<std::string, PomsetRun> unique;
    for (const auto& config : maximal_configurations(net, rel, limits.max_runs)) {
        auto run = project(net, rel, config);
        unique.emplace(run.canonical(), std::move(run));
    }
    std::vector<PomsetRun> out;
    for (auto& [k, r] : unique) out.push_back(std::move(r));
    return out;
}

}  // namespace

std::string PomsetRun::canonical() const {
    const std::size_t n = labels.size();
    if (n == 0) return "|";
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> colors(n);
    for (std::size_t v = 0; v < n; ++v)
        colors[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), labels[v]) - sorted.begin());
    std::string best;
    search(*this, colors, best);
    return best;
}

std::vector<PomsetRun> enumerate_runs(const NetSystem& sys, const RunLimits& limits) {
    auto prefix = unfold_full(sys, limits.max_events);
    return runs_of(prefix.net, limits);
}

std::vector<PomsetRun> enumerate_runs(const ProcessModel& m, const RunLimits& limits) {
    return enumerate_runs(model_to_wfnet(m), limits);
}

std::vector<std::string> occurrence_net_runs(const OccurrenceNet& net, const RunLimits& limits) {
    std::vector<std::string> out;
    for (const auto& r : runs_of(net, limits)) out.push_back(r.canonical());
    return out;
}

std::vector<std::string> canonical_run_set(const NetSystem& sys, const RunLimits& limits) {
    std::vector<std::string> out;
    for (const auto& r : enumerate_runs(sys, limits)) out.push_back(r.canonical());
    return out;
}

std::string format_run(const PomsetRun& run) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < run.labels.size(); ++i) os << (i ? ", " : "") << run.labels[i];
    os << "}";
    bool first = true;
    for (std::size_t i = 0; i < run.labels.size(); ++i) {
        for (std::size_t j = 0; j < run.labels.size(); ++j) {
            if (!run.order[i][j]) continue;
            bool covered = false;
            for (std::size_t k = 0; k < run.labels.size() && !covered; ++k) covered = run.order[i][k] && run.order[k][j];
            if (covered) continue;
            os << (first ? " with " : ", ") << run.labels[i] << " < " << run.labels[j];
            first = false;
        }
    }
    return os.str();
}

bool equivalent(const ProcessModel& a, const ProcessModel& b, std::string* witness, const RunLimits& limits) {
    auto ra = enumerate_runs(a, limits), rb = enumerate_runs(b, limits);
    std::map<std::string, const PomsetRun*> ka, kb;
    for (const auto& r : ra) ka[r.canonical()] = &r;
    for (const auto& r : rb) kb[r.canonical()] = &r;
    for (const auto& [k, r] : ka) {
        if (!kb.count(k)) {
            if (witness) *witness = "only in first: " + format_run(*r);
            return false;
        }
    }
    for (const auto& [k, r] : kb) {
        if (!ka.count(k)) {
            if (witness) *witness = "only in second: " + format_run(*r);
            return false;
        }
    }
    return true;
}

}  // namespace bpstruct
