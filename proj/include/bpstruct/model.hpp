#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bpstruct {

enum class NodeKind { task, xor_gateway, and_gateway };

std::string_view to_string(NodeKind kind);

struct Node {
    NodeKind kind = NodeKind::task;
    std::string name;  // task label; empty for gateways

    bool is_task() const { return kind == NodeKind::task; }
    bool is_gateway() const { return kind != NodeKind::task; }
};

inline bool operator==(const Node& a, const Node& b) {
    return a.kind == b.kind && a.name == b.name;
}

using Arc = std::pair<std::string, std::string>;

// Labels starting with kReservedPrefix are reserved for internal tasks.
// Generated node ids start with kGeneratedIdPrefix.
inline constexpr std::string_view kReservedPrefix = "@";
inline constexpr std::string_view kGeneratedIdPrefix = "__";

// Task/gateway graph with a single source and sink task. Adjacency is kept
// ordered so every traversal is deterministic.
class ProcessModel {
public:
    void add_node(const std::string& id, NodeKind kind, std::string name = {});
    void remove_node(const std::string& id);
    void add_arc(const std::string& src, const std::string& dst);
    void remove_arc(const std::string& src, const std::string& dst);

    bool has_node(const std::string& id) const { return nodes_.count(id) != 0; }
    bool has_arc(const std::string& src, const std::string& dst) const;
    const Node& node(const std::string& id) const;
    Node& node(const std::string& id);

    const std::map<std::string, Node>& nodes() const { return nodes_; }
    const std::set<Arc>& arcs() const { return arcs_; }
    const std::set<std::string>& successors(const std::string& id) const;
    const std::set<std::string>& predecessors(const std::string& id) const;

    // First node without predecessors / successors; empty when none.
    std::string source() const;
    std::string sink() const;

    std::size_t task_count() const;
    std::size_t gateway_count() const;

    friend bool operator==(const ProcessModel& a, const ProcessModel& b) {
        return a.nodes_ == b.nodes_ && a.arcs_ == b.arcs_;
    }

private:
    std::map<std::string, Node> nodes_;
    std::set<Arc> arcs_;
    std::map<std::string, std::set<std::string>> succ_;
    std::map<std::string, std::set<std::string>> pred_;
};

// Throws ValidationError naming the first violated invariant.
void validate(const ProcessModel& m);

// Parses the "bpstruct/1" JSON document and validates the result.
ProcessModel parse_model(std::string_view doc);
// Same as parse_model but skips validation; used by the CLI validator.
ProcessModel parse_model_unchecked(std::string_view doc);
std::string serialize_model(const ProcessModel& m);

std::string export_dot(const ProcessModel& m);

// Removes gateways with one incoming and one outgoing arc and merges
// directly chained splits (joins) of the same type. Behavior-preserving.
void normalize_gateways(ProcessModel& m);

// Issues fresh node ids ("__n<k>") and hands out preferred ids while unused.
class IdAllocator {
public:
    IdAllocator() = default;
    explicit IdAllocator(const ProcessModel& reserve);

    std::string claim(const std::string& preferred);
    std::string fresh();
    void reserve(const std::string& id) { used_.insert(id); }
    void release(const std::string& id) { used_.erase(id); }
    bool used(const std::string& id) const { return used_.count(id) != 0; }

private:
    std::set<std::string> used_;
    unsigned long counter_ = 0;
};

}  // namespace bpstruct
