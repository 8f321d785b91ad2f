#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "bpstruct/equivalence.hpp"
#include "bpstruct/error.hpp"
#include "bpstruct/mdt.hpp"
#include "bpstruct/model.hpp"
#include "bpstruct/net.hpp"
#include "bpstruct/org.hpp"
#include "bpstruct/restructure.hpp"
#include "bpstruct/rpst.hpp"
#include "bpstruct/synthesis.hpp"
#include "bpstruct/unfolder.hpp"

namespace {

using namespace bpstruct;
using nlohmann::ordered_json;

enum class Format { json, dot };

struct Invocation {
    std::vector<std::string> inputs;
    std::string output;
    Format format = Format::json;
    std::string report;
    std::string dump_prefix, dump_org, dump_mdt, dump_es, dump_onet, dump_folded;
    std::size_t max_states = kDefaultMaxStates;
    std::size_t max_events = 100'000;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

void emit(const Invocation& inv, const std::string& text) {
    if (inv.output.empty())
        std::cout << text;
    else
        write_file(inv.output, text);
}

void dump(const std::string& path, const std::string& text) {
    if (path.empty()) return;
    spdlog::debug("writing {}", path);
    write_file(path, text);
}

std::string with_newline(std::string s) {
    if (s.empty() || s.back() != '\n') s += '\n';
    return s;
}

ProcessModel load(const std::string& path) {
    spdlog::info("reading {}", path);
    return parse_model(read_file(path));
}

void require_sound(const ProcessModel& m, const Invocation& inv) {
    auto res = check_soundness(model_to_wfnet(m), inv.max_states);
    if (!res.sound) throw ValidationError("unsound input: " + res.diagnostic);
}

std::string model_text(const ProcessModel& m, Format f) {
    return with_newline(f == Format::json ? serialize_model(m) : export_dot(m));
}

ordered_json rpst_json(const RpstNode& n, const ProcessModel& m) {
    ordered_json j;
    j["kind"] = std::string(to_string(n.kind));
    j["entry"] = n.entry;
    j["exit"] = n.exit;
    j["arcs"] = n.arcs.size();
    if (n.kind == RpstKind::rigid) {
        auto part = lift_fragment(m, n.arcs, n.entry, n.exit);
        auto prefix = unfold_proper_prefix(model_to_wfnet(part));
        auto g = build_org(prefix);
        if (g.size() > 0) {
            auto tree = modular_decomposition(g);
            j["mdt_root"] = std::string(to_string(tree.cls));
            if (tree.cls == ModuleClass::primitive) j["concurrent"] = tree.concurrent;
        }
    }
    if (!n.children.empty()) {
        j["children"] = ordered_json::array();
        for (const auto& c : n.children) j["children"].push_back(rpst_json(c, m));
    }
    return j;
}

void rpst_dot(const RpstNode& n, std::ostringstream& os, int& next) {
    int id = next++;
    os << "  r" << id << " [label=\"" << to_string(n.kind) << "\\n" << n.entry << " .. " << n.exit << "\"];\n";
    for (const auto& c : n.children) {
        int cid = next;
        rpst_dot(c, os, next);
        os << "  r" << id << " -> r" << cid << ";\n";
    }
}

ordered_json mdt_json(const MdtNode& n, const OrderingRelationsGraph& g) {
    ordered_json j;
    j["class"] = std::string(to_string(n.cls));
    if (n.cls == ModuleClass::primitive) j["concurrent"] = n.concurrent;
    j["members"] = ordered_json::array();
    for (int v : n.members) j["members"].push_back(g.label(v));
    if (!n.children.empty()) {
        j["children"] = ordered_json::array();
        for (const auto& c : n.children) j["children"].push_back(mdt_json(c, g));
    }
    return j;
}

std::string org_json(const OrderingRelationsGraph& g) {
    ordered_json j;
    j["vertices"] = g.labels();
    j["arcs"] = ordered_json::array();
    for (auto [u, v] : g.arcs()) j["arcs"].push_back({u, v});
    return j.dump(2) + "\n";
}

std::string prefix_json(const Prefix& p, const WfNet& net) {
    ordered_json j;
    j["conditions"] = ordered_json::array();
    for (const auto& c : p.net.conditions) {
        ordered_json x;
        x["place"] = net.place_ids[c.origin];
        x["pre"] = c.pre;
        x["post"] = c.post;
        j["conditions"].push_back(x);
    }
    j["events"] = ordered_json::array();
    for (std::size_t e = 0; e < p.net.events.size(); ++e) {
        const auto& ev = p.net.events[e];
        ordered_json x;
        x["transition"] = net.transition_ids[ev.origin];
        x["label"] = ev.label;
        x["pre"] = ev.pre;
        x["post"] = ev.post;
        if (p.is_cutoff(static_cast<int>(e))) {
            x["corr"] = p.corr[e];
            x["healthy"] = static_cast<bool>(p.healthy[e]);
        }
        j["events"].push_back(x);
    }
    return j.dump(2) + "\n";
}

struct Pipeline {
    NetSystem sys;
    Prefix prefix;
    OrderingRelationsGraph org;
};

// Prefix and ORG of the whole model, with the prefix/org/mdt dumps applied.
Pipeline analyze_model(const ProcessModel& m, const Invocation& inv) {
    require_sound(m, inv);
    Pipeline p;
    p.sys = model_to_wfnet(m);
    UnfoldOptions opts;
    opts.max_events = inv.max_events;
    p.prefix = unfold_proper_prefix(p.sys, opts);
    spdlog::info("prefix: {} events, {} cutoffs", p.prefix.net.events.size(), p.prefix.cutoff_count());
    p.org = build_org(p.prefix);
    dump(inv.dump_prefix, export_prefix_dot(p.prefix, p.sys.net));
    dump(inv.dump_org, export_org_dot(p.org));
    if (!inv.dump_mdt.empty() && p.org.size() > 0)
        dump(inv.dump_mdt, export_mdt_dot(modular_decomposition(p.org), p.org.labels()));
    return p;
}

int cmd_structure(const Invocation& inv) {
    auto m = load(inv.inputs.at(0));
    if (!inv.dump_prefix.empty() || !inv.dump_org.empty() || !inv.dump_mdt.empty()) analyze_model(m, inv);
    StructuringOptions opts;
    opts.max_states = inv.max_states;
    opts.max_events = inv.max_events;
    auto res = structure_model(m, opts);
    spdlog::info("rigids: {} before, {} after", res.report.rigids_before, res.report.rigids_after);
    emit(inv, model_text(res.model, inv.format));
    if (!inv.report.empty()) write_file(inv.report, report_to_json(res.report) + "\n");
    return 0;
}

int cmd_analyze(const Invocation& inv) {
    auto m = load(inv.inputs.at(0));
    require_sound(m, inv);
    auto root = compute_rpst(m);
    if (inv.format == Format::json) {
        ordered_json j;
        j["well_structured"] = is_well_structured(root);
        j["rigids"] = count_kind(root, RpstKind::rigid);
        j["rpst"] = rpst_json(root, m);
        emit(inv, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "digraph rpst {\n";
        int next = 0;
        rpst_dot(root, os, next);
        os << "}\n";
        emit(inv, os.str());
    }
    return 0;
}

int cmd_unfold(const Invocation& inv) {
    auto p = analyze_model(load(inv.inputs.at(0)), inv);
    emit(inv, inv.format == Format::json ? prefix_json(p.prefix, p.sys.net)
                                         : export_prefix_dot(p.prefix, p.sys.net));
    return 0;
}

int cmd_org(const Invocation& inv) {
    auto p = analyze_model(load(inv.inputs.at(0)), inv);
    emit(inv, inv.format == Format::json ? org_json(p.org) : export_org_dot(p.org));
    return 0;
}

int cmd_mdt(const Invocation& inv) {
    auto p = analyze_model(load(inv.inputs.at(0)), inv);
    if (p.org.size() == 0) throw ValidationError("model has no observable tasks");
    auto tree = modular_decomposition(p.org);
    emit(inv, inv.format == Format::json ? mdt_json(tree, p.org).dump(2) + "\n"
                                         : export_mdt_dot(tree, p.org.labels()));
    return 0;
}

int cmd_synth(const Invocation& inv) {
    auto p = analyze_model(load(inv.inputs.at(0)), inv);
    SynthesisTrace trace;
    auto out = synthesize_component(p.org, {}, &trace);
    dump(inv.dump_es, export_es_dot(trace.es));
    dump(inv.dump_onet, export_synth_net_dot(trace.simplified));
    dump(inv.dump_folded, export_net_dot(trace.folded.system.net, trace.folded.system.initial));
    emit(inv, model_text(out, inv.format));
    return 0;
}

int cmd_check_eq(const Invocation& inv) {
    if (inv.inputs.size() != 2) throw ParseError("check-eq needs two input models");
    auto a = load(inv.inputs[0]);
    auto b = load(inv.inputs[1]);
    require_sound(a, inv);
    require_sound(b, inv);
    RunLimits limits;
    limits.max_events = inv.max_events;
    std::string witness;
    if (equivalent(a, b, &witness, limits)) {
        emit(inv, "equivalent\n");
        return 0;
    }
    emit(inv, "not equivalent\n" + witness + "\n");
    return 1;
}

int cmd_validate(const Invocation& inv) {
    auto m = parse_model_unchecked(read_file(inv.inputs.at(0)));
    validate(m);
    require_sound(m, inv);
    emit(inv, "valid\n");
    return 0;
}

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("bpstruct");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("%l: %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("BPSTRUCT_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    Invocation inv;
    CLI::App app{"bpstruct: maximal structuring of acyclic process models"};
    app.require_subcommand(1, 1);
    std::map<std::string, Format> formats{{"json", Format::json}, {"dot", Format::dot}};

    auto add_common = [&](CLI::App* sub, std::size_t inputs) {
        sub->add_option("input", inv.inputs, "model file(s)")->required()->expected(static_cast<int>(inputs));
        sub->add_option("-o,--output", inv.output, "output file (default stdout)");
        sub->add_option("--format", inv.format, "json or dot")->transform(CLI::CheckedTransformer(formats));
        sub->add_option("--max-states", inv.max_states, "state space guard");
        sub->add_option("--max-events", inv.max_events, "unfolding event guard");
        sub->add_option("--dump-prefix", inv.dump_prefix, "write the unfolding prefix (DOT)");
        sub->add_option("--dump-org", inv.dump_org, "write the ordering relations graph (DOT)");
        sub->add_option("--dump-mdt", inv.dump_mdt, "write the modular decomposition tree (DOT)");
    };
    auto add_synth_dumps = [&](CLI::App* sub) {
        sub->add_option("--dump-es", inv.dump_es, "write the event structure (DOT)");
        sub->add_option("--dump-onet", inv.dump_onet, "write the simplified occurrence net (DOT)");
        sub->add_option("--dump-folded", inv.dump_folded, "write the folded net (DOT)");
    };

    std::map<std::string, int (*)(const Invocation&)> handlers{
        {"structure", cmd_structure}, {"analyze", cmd_analyze}, {"unfold", cmd_unfold},
        {"org", cmd_org},             {"mdt", cmd_mdt},         {"synth", cmd_synth},
        {"check-eq", cmd_check_eq},   {"validate", cmd_validate}};

    auto* structure = app.add_subcommand("structure", "write the maximally structured model");
    add_common(structure, 1);
    structure->add_option("--report", inv.report, "write the structuring report (JSON)");
    add_common(app.add_subcommand("analyze", "print the RPST with classifications"), 1);
    add_common(app.add_subcommand("unfold", "print the complete prefix unfolding"), 1);
    add_common(app.add_subcommand("org", "print the ordering relations graph"), 1);
    add_common(app.add_subcommand("mdt", "print the modular decomposition tree"), 1);
    auto* synth = app.add_subcommand("synth", "synthesize a model from the ordering relations graph");
    add_common(synth, 1);
    add_synth_dumps(synth);
    add_common(app.add_subcommand("check-eq", "compare the behavior of two models"), 2);
    add_common(app.add_subcommand("validate", "check model invariants and soundness"), 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        return handlers.at(app.get_subcommands().front()->get_name())(inv);
    } catch (const ParseError& e) {
        spdlog::error("parse error: {}", e.what());
        return 2;
    } catch (const ValidationError& e) {
        spdlog::error("invalid model: {}", e.what());
        return 2;
    } catch (const GuardError& e) {
        spdlog::error("guard exceeded: {}", e.what());
        return 3;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 4;
    }
}
