#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bpstruct/model.hpp"

namespace bpstruct {

// Transitions with an empty label are silent (tau).
inline constexpr std::string_view kTau = "";

// Observable labels exclude tau and the reserved boundary labels.
bool is_observable(std::string_view label);

struct WfNet {
    std::vector<std::string> place_ids;
    std::vector<std::string> transition_ids;
    std::vector<std::string> labels;  // per transition
    std::vector<std::vector<int>> t_pre, t_post;
    std::vector<std::vector<int>> p_pre, p_post;

    int add_place(std::string id);
    int add_transition(std::string id, std::string label);
    void add_flow_pt(int p, int t);
    void add_flow_tp(int t, int p);

    std::size_t place_count() const { return place_ids.size(); }
    std::size_t transition_count() const { return transition_ids.size(); }
    int place_index(const std::string& id) const;
    int transition_index(const std::string& id) const;
};

// Token count per place, indexed like WfNet::place_ids.
using Marking = std::vector<int>;

struct NetSystem {
    WfNet net;
    Marking initial;
};

inline constexpr std::size_t kDefaultMaxStates = 1'000'000;

// Tasks become labeled transitions, AND gateways silent transitions, XOR
// gateways places. Places are added on arcs between transition-like nodes;
// arcs between XOR gateways, and arcs from an XOR gateway into an AND
// gateway, get a silent transition so the result stays free-choice.
NetSystem model_to_wfnet(const ProcessModel& m);

bool is_free_choice(const WfNet& net);

// The unique place with an empty preset (postset); -1 when not unique.
int source_place(const WfNet& net);
int sink_place(const WfNet& net);

std::vector<Marking> reachable_markings(const NetSystem& sys, std::size_t max_states = kDefaultMaxStates);

struct SoundnessResult {
    bool sound = false;
    std::string diagnostic;  // "improper completion", "deadlock marking", "no option to complete", "dead transition"
    Marking witness;
    std::string dead_transition;
};

SoundnessResult check_soundness(const NetSystem& sys, std::size_t max_states = kDefaultMaxStates);

// Inverse mapping for safe acyclic nets: transitions with a non-empty label
// become tasks, multi-place pre/postsets of transitions become AND gateways
// next to the task, multi-transition pre/postsets of places become XOR
// gateways, and 1-in/1-out silent transitions become plain arcs.
ProcessModel net_to_model(const NetSystem& sys);

std::string format_marking(const WfNet& net, const Marking& m);
std::string export_net_dot(const WfNet& net, const Marking& initial);
std::string export_net_json(const WfNet& net, const Marking& initial);

}  // namespace bpstruct
