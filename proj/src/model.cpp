#include "bpstruct/model.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include <json.hpp>

#include "bpstruct/error.hpp"

namespace bpstruct {

namespace {

const std::set<std::string> kEmpty;

std::string count_word(std::size_t n) {
    switch (n) {
        case 0: return "no";
        case 1: return "one";
        case 2: return "two";
        case 3: return "three";
        default: return std::to_string(n);
    }
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::string_view to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::task: return "task";
        case NodeKind::xor_gateway: return "xor";
        case NodeKind::and_gateway: return "and";
    }
    return "?";
}

void ProcessModel::add_node(const std::string& id, NodeKind kind, std::string name) {
    if (nodes_.count(id)) throw ValidationError("duplicate node id '" + id + "'");
    nodes_.emplace(id, Node{kind, std::move(name)});
    succ_[id];
    pred_[id];
}

void ProcessModel::remove_node(const std::string& id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) return;
    for (const auto& s : std::set<std::string>(succ_[id])) remove_arc(id, s);
    for (const auto& p : std::set<std::string>(pred_[id])) remove_arc(p, id);
    succ_.erase(id);
    pred_.erase(id);
    nodes_.erase(it);
}

void ProcessModel::add_arc(const std::string& src, const std::string& dst) {
    if (!nodes_.count(src) || !nodes_.count(dst))
        throw ValidationError("arc references unknown node (" + src + "," + dst + ")");
    if (src == dst) throw ValidationError("self-loop on '" + src + "'");
    arcs_.emplace(src, dst);
    succ_[src].insert(dst);
    pred_[dst].insert(src);
}

void ProcessModel::remove_arc(const std::string& src, const std::string& dst) {
    arcs_.erase({src, dst});
    if (auto it = succ_.find(src); it != succ_.end()) it->second.erase(dst);
    if (auto it = pred_.find(dst); it != pred_.end()) it->second.erase(src);
}

bool ProcessModel::has_arc(const std::string& src, const std::string& dst) const {
    return arcs_.count({src, dst}) != 0;
}

const Node& ProcessModel::node(const std::string& id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw ValidationError("unknown node '" + id + "'");
    return it->second;
}

Node& ProcessModel::node(const std::string& id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw ValidationError("unknown node '" + id + "'");
    return it->second;
}

const std::set<std::string>& ProcessModel::successors(const std::string& id) const {
    auto it = succ_.find(id);
    return it == succ_.end() ? kEmpty : it->second;
}

const std::set<std::string>& ProcessModel::predecessors(const std::string& id) const {
    auto it = pred_.find(id);
    return it == pred_.end() ? kEmpty : it->second;
}

std::string ProcessModel::source() const {
    for (const auto& [id, n] : nodes_)
        if (predecessors(id).empty()) return id;
    return {};
}

std::string ProcessModel::sink() const {
    for (const auto& [id, n] : nodes_)
        if (successors(id).empty()) return id;
    return {};
}

std::size_t ProcessModel::task_count() const {
    return std::count_if(nodes_.begin(), nodes_.end(), [](const auto& kv) { return kv.second.is_task(); });
}

std::size_t ProcessModel::gateway_count() const { return nodes_.size() - task_count(); }

void validate(const ProcessModel& m) {
    if (m.nodes().empty()) throw ValidationError("empty model");
    if (m.task_count() == 0) throw ValidationError("model has no tasks");

    std::vector<std::string> sources, sinks;
    for (const auto& [id, n] : m.nodes()) {
        if (m.predecessors(id).empty()) sources.push_back(id);
        if (m.successors(id).empty()) sinks.push_back(id);
    }
    if (sources.size() != 1) throw ValidationError(count_word(sources.size()) + " sources");
    if (sinks.size() != 1) throw ValidationError(count_word(sinks.size()) + " sinks");
    if (!m.node(sources.front()).is_task()) throw ValidationError("source '" + sources.front() + "' is not a task");
    if (!m.node(sinks.front()).is_task()) throw ValidationError("sink '" + sinks.front() + "' is not a task");

    for (const auto& [id, n] : m.nodes()) {
        std::size_t in = m.predecessors(id).size(), out = m.successors(id).size();
        if (n.is_task()) {
            if (in > 1) throw ValidationError("task with " + std::to_string(in) + " incoming arcs ('" + id + "')");
            if (out > 1) throw ValidationError("task with " + std::to_string(out) + " outgoing arcs ('" + id + "')");
        } else {
            bool split = in == 1 && out > 1;
            bool join = in > 1 && out == 1;
            if (!split && !join) throw ValidationError("gateway is neither split nor join ('" + id + "')");
        }
    }

    // Kahn's algorithm doubles as the cycle check.
    std::map<std::string, std::size_t> indeg;
    std::deque<std::string> queue;
    for (const auto& [id, n] : m.nodes()) {
        indeg[id] = m.predecessors(id).size();
        if (indeg[id] == 0) queue.push_back(id);
    }
    std::size_t seen = 0;
    while (!queue.empty()) {
        auto id = queue.front();
        queue.pop_front();
        ++seen;
        for (const auto& s : m.successors(id))
            if (--indeg[s] == 0) queue.push_back(s);
    }
    if (seen != m.nodes().size()) throw ValidationError("cyclic");

    // With one source and one sink in an acyclic graph every node is on a
    // source-sink path; the explicit check guards against future relaxations.
    std::set<std::string> fwd{sources.front()}, bwd{sinks.front()};
    std::deque<std::string> q{sources.front()};
    while (!q.empty()) {
        auto id = q.front();
        q.pop_front();
        for (const auto& s : m.successors(id))
            if (fwd.insert(s).second) q.push_back(s);
    }
    q = {sinks.front()};
    while (!q.empty()) {
        auto id = q.front();
        q.pop_front();
        for (const auto& p : m.predecessors(id))
            if (bwd.insert(p).second) q.push_back(p);
    }
    for (const auto& [id, n] : m.nodes())
        if (!fwd.count(id) || !bwd.count(id))
            throw ValidationError("node '" + id + "' is not on a source-sink path");
}

ProcessModel parse_model_unchecked(std::string_view doc) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(doc.begin(), doc.end());
    } catch (const json::parse_error& e) {
        throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError("document must be a JSON object");
    if (!j.contains("format") || j["format"] != "bpstruct/1")
        throw ParseError("missing or unsupported \"format\" (expected \"bpstruct/1\")");
    if (!j.contains("nodes") || !j["nodes"].is_array()) throw ParseError("missing \"nodes\" array");
    if (!j.contains("arcs") || !j["arcs"].is_array()) throw ParseError("missing \"arcs\" array");

    for (const auto& [key, value] : j.items())
        if (key != "format" && key != "nodes" && key != "arcs") throw ParseError("unknown field '" + key + "'");

    ProcessModel m;
    for (const auto& n : j["nodes"]) {
        if (!n.is_object() || !n.contains("id") || !n["id"].is_string() || !n.contains("kind") ||
            !n["kind"].is_string())
            throw ParseError("node entries need string \"id\" and \"kind\"");
        auto id = n["id"].get<std::string>();
        auto kind = n["kind"].get<std::string>();
        for (const auto& [key, value] : n.items())
            if (key != "id" && key != "kind" && !(key == "name" && kind == "task"))
                throw ParseError("unknown field '" + key + "' in node '" + id + "'");
        if (id.empty()) throw ParseError("empty node id");
        if (kind == "task") {
            std::string name = id;
            if (n.contains("name")) {
                if (!n["name"].is_string()) throw ParseError("task name must be a string");
                name = n["name"].get<std::string>();
            }
            if (name.empty()) throw ParseError("task '" + id + "' has an empty name");
            if (name.rfind(kReservedPrefix, 0) == 0)
                throw ParseError("task name '" + name + "' uses the reserved prefix \"@\"");
            m.add_node(id, NodeKind::task, name);
        } else if (kind == "xor") {
            m.add_node(id, NodeKind::xor_gateway);
        } else if (kind == "and") {
            m.add_node(id, NodeKind::and_gateway);
        } else {
            throw ParseError("unknown node kind '" + kind + "'");
        }
    }
    for (const auto& a : j["arcs"]) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_string() || !a[1].is_string())
            throw ParseError("arcs must be [\"src\",\"dst\"] pairs");
        m.add_arc(a[0].get<std::string>(), a[1].get<std::string>());
    }
    return m;
}

ProcessModel parse_model(std::string_view doc) {
    auto m = parse_model_unchecked(doc);
    validate(m);
    return m;
}

std::string serialize_model(const ProcessModel& m) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["format"] = "bpstruct/1";
    j["nodes"] = ordered_json::array();
    for (const auto& [id, n] : m.nodes()) {
        ordered_json o;
        o["id"] = id;
        o["kind"] = std::string(to_string(n.kind));
        if (n.is_task()) o["name"] = n.name;
        j["nodes"].push_back(o);
    }
    j["arcs"] = ordered_json::array();
    for (const auto& [s, d] : m.arcs()) j["arcs"].push_back({s, d});
    return j.dump(2) + "\n";
}

std::string export_dot(const ProcessModel& m) {
    std::ostringstream os;
    os << "digraph model {\n  rankdir=LR;\n";
    for (const auto& [id, n] : m.nodes()) {
        os << "  \"" << dot_escape(id) << "\" [";
        if (n.is_task())
            os << "shape=box, label=\"" << dot_escape(n.name) << "\"";
        else
            os << "shape=diamond, label=\"" << (n.kind == NodeKind::xor_gateway ? "X" : "+") << "\"";
        os << "];\n";
    }
    for (const auto& [s, d] : m.arcs()) os << "  \"" << dot_escape(s) << "\" -> \"" << dot_escape(d) << "\";\n";
    os << "}\n";
    return os.str();
}

void normalize_gateways(ProcessModel& m) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [id, n] : m.nodes()) {
            if (!n.is_gateway()) continue;
            const auto& in = m.predecessors(id);
            const auto& out = m.successors(id);
            if (in.size() == 1 && out.size() == 1) {
                auto p = *in.begin(), s = *out.begin();
                m.remove_node(id);
                m.add_arc(p, s);
                changed = true;
                break;
            }
            // split fed by a split of the same type
            if (in.size() == 1 && out.size() > 1) {
                const auto& p = *in.begin();
                const auto& pn = m.node(p);
                if (pn.kind == n.kind && m.successors(p).size() > 1 && m.predecessors(p).size() == 1) {
                    auto outs = out;
                    auto pid = p;
                    m.remove_node(id);
                    for (const auto& s : outs) m.add_arc(pid, s);
                    changed = true;
                    break;
                }
            }
            // join feeding a join of the same type
            if (in.size() > 1 && out.size() == 1) {
                const auto& s = *out.begin();
                const auto& sn = m.node(s);
                if (sn.kind == n.kind && m.predecessors(s).size() > 1 && m.successors(s).size() == 1) {
                    auto ins = in;
                    auto sid = s;
                    m.remove_node(id);
                    for (const auto& p : ins) m.add_arc(p, sid);
                    changed = true;
                    break;
                }
            }
        }
    }
}

IdAllocator::IdAllocator(const ProcessModel& reserve) {
    for (const auto& [id, n] : reserve.nodes()) used_.insert(id);
}

std::string IdAllocator::claim(const std::string& preferred) {
    if (!preferred.empty() && !used_.count(preferred)) {
        used_.insert(preferred);
        return preferred;
    }
    return fresh();
}

std::string IdAllocator::fresh() {
    std::string id;
    do {
        id = std::string(kGeneratedIdPrefix) + "n" + std::to_string(++counter_);
    } while (used_.count(id));
    used_.insert(id);
    return id;
}

}  // namespace bpstruct
