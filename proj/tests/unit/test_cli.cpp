#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "support/corpus.hpp"
#include "support/process.hpp"

using namespace bpstruct;

namespace {

namespace fs = std::filesystem;

const std::string cli = BPSTRUCT_CLI;

proc::Output bp(const std::string& args) { return proc::run(proc::quote(cli) + " " + args + " 2>/dev/null"); }

std::string corpus_file(const std::string& name) { return proc::quote(corpus::path_of(name)); }

fs::path scratch() {
    auto dir = fs::temp_directory_path() / ("bpstruct_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("validate") {
    auto ok = bp("validate " + corpus_file("sequence.json"));
    CHECK(ok.code == 0);
    CHECK(ok.out == "valid\n");
    auto bad = proc::run(proc::quote(cli) + " validate " + corpus_file("two_sinks.json") + " 2>&1");
    CHECK(bad.code == 2);
    CHECK(bad.out.find("sink") != std::string::npos);
    auto unsound = bp("validate " + corpus_file("unsound_and_xor.json"));
    CHECK(unsound.code == 2);
}

TEST_CASE("usage errors") {
    CHECK(bp("").code == 2);
    CHECK(bp("frobnicate").code == 2);
    CHECK(bp("structure").code == 2);
    CHECK(bp("structure /nonexistent/model.json").code == 2);
    CHECK(bp("unfold --format yaml " + corpus_file("sequence.json")).code == 2);
}

TEST_CASE("structure then check-eq") {
    auto dir = scratch();
    for (auto name : {"xor_and_rigid.json", "unmatched_split.json", "and_primitive_duplicate.json"}) {
        CAPTURE(name);
        auto out = dir / (std::string("out_") + name);
        auto report = dir / (std::string("report_") + name);
        auto s = bp("structure " + corpus_file(name) + " -o " + proc::quote(out.string()) + " --report " +
                    proc::quote(report.string()));
        REQUIRE(s.code == 0);
        CHECK(slurp(report).find("rigids") != std::string::npos);
        auto eq = bp("check-eq " + corpus_file(name) + " " + proc::quote(out.string()));
        CHECK(eq.code == 0);
        CHECK(eq.out == "equivalent\n");
        // structured output parses again
        CHECK(bp("validate " + proc::quote(out.string())).code == 0);
    }
    fs::remove_all(dir);
}

TEST_CASE("check-eq reports a witness") {
    auto r = bp("check-eq " + corpus_file("and_bond.json") + " " + corpus_file("xor_bond.json"));
    CHECK(r.code == 1);
    CHECK(r.out.rfind("not equivalent\n", 0) == 0);
    CHECK(r.out.size() > std::string("not equivalent\n").size());
}

TEST_CASE("analysis commands") {
    auto f = corpus_file("xor_and_rigid.json");
    for (auto cmd : {"analyze", "unfold", "org", "mdt", "synth"}) {
        CAPTURE(cmd);
        auto j = bp(std::string(cmd) + " " + f);
        CHECK(j.code == 0);
        CHECK_FALSE(j.out.empty());
        auto d = bp(std::string(cmd) + " --format dot " + f);
        CHECK(d.code == 0);
        CHECK(d.out.find("digraph") != std::string::npos);
    }
}

TEST_CASE("dump files") {
    auto dir = scratch();
    auto p = dir / "prefix.dot", o = dir / "org.dot", m = dir / "mdt.dot";
    auto r = bp("mdt " + corpus_file("unmatched_split.json") + " --dump-prefix " + proc::quote(p.string()) +
                " --dump-org " + proc::quote(o.string()) + " --dump-mdt " + proc::quote(m.string()));
    CHECK(r.code == 0);
    for (const auto& f : {p, o, m}) CHECK(slurp(f).find("digraph") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("guards exit with code 3") {
    CHECK(bp("unfold --max-events 2 " + corpus_file("nested_bonds.json")).code == 3);
    CHECK(bp("structure --max-states 2 " + corpus_file("xor_and_rigid.json")).code == 3);
}
