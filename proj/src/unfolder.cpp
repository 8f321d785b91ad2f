#include "bpstruct/unfolder.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "bpstruct/error.hpp"

namespace bpstruct {

namespace {

std::weak_ordering compare_counts(const std::vector<int>& a, const std::vector<int>& b) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? std::weak_ordering::less : std::weak_ordering::greater;
    return a.size() <=> b.size();
}

}  // namespace

std::weak_ordering ConfigKey::operator<=>(const ConfigKey& other) const {
    if (size != other.size) return size <=> other.size;
    if (auto c = compare_counts(parikh, other.parikh); c != 0) return c;
    for (std::size_t i = 0; i < std::min(foata.size(), other.foata.size()); ++i)
        if (auto c = compare_counts(foata[i], other.foata[i]); c != 0) return c;
    return foata.size() <=> other.foata.size();
}

std::size_t Prefix::cutoff_count() const {
    return std::count_if(corr.begin(), corr.end(), [](int c) { return c >= 0; });
}

namespace {

struct Candidate {
    int transition;
    std::vector<int> preset;  // conditions
    std::vector<int> local;   // events of the local configuration, without the new event
    ConfigKey key;
};

class Unfolder {
public:
    Unfolder(const NetSystem& sys, const UnfoldOptions& opts) : sys_(sys), opts_(opts) {}

    Prefix run() {
        const auto& net = sys_.net;
        prefix_.place_count = net.place_count();
        for (std::size_t p = 0; p < net.place_count(); ++p) {
            if (sys_.initial[p] > 1) throw ContractError("unfolding requires a safe initial marking");
            if (sys_.initial[p] == 1) add_condition(static_cast<int>(p), -1, {});
        }
        auto& init = prefix_.net.conditions;
        for (std::size_t a = 0; a < init.size(); ++a)
            for (std::size_t b = 0; b < init.size(); ++b)
                if (a != b) co_[a].set(b);

        for (;;) {
            extend_queue();
            if (queue_.empty()) break;
            auto best = std::min_element(queue_.begin(), queue_.end(), [](const auto& x, const auto& y) {
                if (auto c = x.key <=> y.key; c != 0) return c < 0;
                return std::tie(x.transition, x.preset) < std::tie(y.transition, y.preset);
            });
            for (const auto& other : queue_)
                if (&other != &*best && other.key == best->key)
                    throw ContractError("adequate order is not total on this system");
            Candidate cand = std::move(*best);
            queue_.erase(best);
            add_event(std::move(cand));
            if (prefix_.net.events.size() > opts_.max_events)
                throw GuardError("event count exceeds " + std::to_string(opts_.max_events));
        }
        return std::move(prefix_);
    }

private:
    int add_condition(int place, int pre_event, const std::vector<int>& siblings) {
        int c = prefix_.net.add_condition(place, pre_event);
        for (auto& bits : co_) bits.resize(c + 1);
        co_.emplace_back(c + 1);
        blocked_.push_back(false);
        (void)siblings;
        return c;
    }

    void extend_queue() {
        const auto& net = sys_.net;
        for (std::size_t t = 0; t < net.transition_count(); ++t) {
            auto places = net.t_pre[t];
            std::sort(places.begin(), places.end());
            std::vector<std::vector<int>> options(places.size());
            for (std::size_t k = 0; k < places.size(); ++k)
                for (std::size_t c = 0; c < prefix_.net.conditions.size(); ++c)
                    if (prefix_.net.conditions[c].origin == places[k] && !blocked_[c])
                        options[k].push_back(static_cast<int>(c));
            std::vector<int> chosen;
            std::function<void(std::size_t)> rec = [&](std::size_t k) {
                if (k == places.size()) {
                    if (seen_.insert({static_cast<int>(t), chosen}).second) push_candidate(static_cast<int>(t), chosen);
                    return;
                }
                for (int c : options[k]) {
                    bool ok = true;
                    for (int d : chosen) ok = ok && co_[c][d];
                    if (!ok) continue;
                    chosen.push_back(c);
                    rec(k + 1);
                    chosen.pop_back();
                }
            };
            rec(0);
        }
    }

    void push_candidate(int t, const std::vector<int>& preset) {
        std::set<int> local;
        for (int c : preset) {
            int p = prefix_.net.conditions[c].pre;
            if (p >= 0) local.insert(prefix_.local_configs[p].begin(), prefix_.local_configs[p].end());
        }
        Candidate cand{t, preset, {local.begin(), local.end()}, {}};
        const std::size_t tc = sys_.net.transition_count();
        cand.key.size = cand.local.size() + 1;
        cand.key.parikh.assign(tc, 0);
        int depth = 1;
        for (int c : preset) {
            int p = prefix_.net.conditions[c].pre;
            if (p >= 0) depth = std::max(depth, depth_[p] + 1);
        }
        cand.key.foata.assign(depth, std::vector<int>(tc, 0));
        for (int e : cand.local) {
            ++cand.key.parikh[prefix_.net.events[e].origin];
            ++cand.key.foata[depth_[e] - 1][prefix_.net.events[e].origin];
        }
        ++cand.key.parikh[t];
        ++cand.key.foata[depth - 1][t];
        pending_depth_[{t, preset}] = depth;
        queue_.push_back(std::move(cand));
    }

    void add_event(Candidate cand) {
        auto& on = prefix_.net;
        const auto& net = sys_.net;
        int e = on.add_event(cand.transition, net.labels[cand.transition], cand.preset);
        depth_.push_back(pending_depth_.at({cand.transition, cand.preset}));

        // co(new) = (intersection of co over the preset) minus the preset, plus siblings.
        Bitset common(on.conditions.size());
        common.set();
        for (int c : cand.preset) common &= co_[c];
        for (int c : cand.preset) common.reset(c);
        std::vector<int> fresh;
        auto posts = net.t_post[cand.transition];
        std::sort(posts.begin(), posts.end());
        for (int p : posts) fresh.push_back(add_condition(p, e, {}));
        for (int c : fresh) {
            Bitset bits = common;
            bits.resize(on.conditions.size());
            for (int d : fresh)
                if (d != c) bits.set(d);
            co_[c] = bits;
            for (auto x = bits.find_first(); x != Bitset::npos; x = bits.find_next(x)) co_[x].set(c);
        }

        auto local = cand.local;
        local.push_back(e);
        std::sort(local.begin(), local.end());
        prefix_.local_configs.push_back(local);
        cand.key.event = e;
        prefix_.keys.push_back(cand.key);
        prefix_.corr.push_back(-1);
        prefix_.healthy.push_back(false);

        auto cut = cut_of(on, local);
        std::vector<int> mark;
        for (int c : cut) mark.push_back(on.conditions[c].origin);
        std::sort(mark.begin(), mark.end());
        auto rest = minus_post(cut, e);
        cuts_.push_back(cut);
        marks_.push_back(mark);

        if (!opts_.truncate) return;
        for (int f = 0; f < e; ++f) {
            if (marks_[f] != mark) continue;
            if (!(prefix_.keys[f] < prefix_.keys[e])) continue;
            bool healthy = minus_post(cuts_[f], f) == rest;
            if (prefix_.corr[e] < 0 || (healthy && !prefix_.healthy[e])) {
                prefix_.corr[e] = f;
                prefix_.healthy[e] = healthy;
            }
            if (healthy) break;
        }
        if (prefix_.is_healthy_cutoff(e))
            for (int c : on.events[e].post) blocked_[c] = true;
    }

    std::vector<int> minus_post(const std::vector<int>& cut, int e) const {
        std::vector<int> out;
        const auto& post = prefix_.net.events[e].post;
        for (int c : cut)
            if (std::find(post.begin(), post.end(), c) == post.end()) out.push_back(c);
        return out;
    }

    const NetSystem& sys_;
    UnfoldOptions opts_;
    Prefix prefix_;
    std::vector<Bitset> co_;
    std::vector<bool> blocked_;
    std::vector<int> depth_;
    std::vector<std::vector<int>> cuts_, marks_;
    std::set<std::pair<int, std::vector<int>>> seen_;
    std::map<std::pair<int, std::vector<int>>, int> pending_depth_;
    std::vector<Candidate> queue_;
};

}  // namespace

Prefix unfold_proper_prefix(const NetSystem& sys, const UnfoldOptions& opts) { return Unfolder(sys, opts).run(); }

Prefix unfold_full(const NetSystem& sys, std::size_t max_events) {
    UnfoldOptions opts;
    opts.max_events = max_events;
    opts.truncate = false;
    return Unfolder(sys, opts).run();
}

Relation ordering_relation(const Prefix& prefix, const OrderingRelations& rel, int x, int y, bool reflexive) {
    auto n = static_cast<int>(prefix.net.node_count());
    if (x < 0 || y < 0 || x >= n || y >= n) throw ContractError("unknown prefix node");
    return rel.between(x, y, reflexive);
}

std::vector<int> prefix_cut(const Prefix& prefix, const std::vector<int>& config) {
    OrderingRelations rel(prefix.net);
    std::string why;
    if (!is_configuration(prefix.net, rel, config, &why)) throw ContractError("not a configuration: " + why);
    return cut_of(prefix.net, config);
}

Marking mark_of(const Prefix& prefix, const std::vector<int>& config) {
    Marking m(prefix.place_count, 0);
    for (int c : prefix_cut(prefix, config)) ++m[prefix.net.conditions[c].origin];
    return m;
}

std::string export_prefix_dot(const Prefix& prefix, const WfNet& net) {
    std::vector<std::string> names;
    for (const auto& c : prefix.net.conditions) names.push_back(net.place_ids[c.origin]);
    return export_occurrence_dot(prefix.net, prefix.corr, names);
}

}  // namespace bpstruct
