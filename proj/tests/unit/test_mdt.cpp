#include <doctest.h>

#include <algorithm>

#include "bpstruct/mdt.hpp"
#include "bpstruct/unfolder.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace bpstruct;

namespace {

Digraph both_ways(std::size_t n) {
    Digraph g(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            if (u != v) g.add_arc(static_cast<int>(u), static_cast<int>(v));
    return g;
}

std::vector<int> all_of(std::size_t n) {
    std::vector<int> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(static_cast<int>(i));
    return v;
}

}  // namespace

TEST_CASE("singletons and the whole vertex set are modules") {
    testgen::Rng rng(11);
    for (int round = 0; round < 20; ++round) {
        auto g = testgen::random_digraph(rng, 6);
        for (int v = 0; v < 6; ++v) CHECK(is_module(g, {v}));
        CHECK(is_module(g, all_of(6)));
    }
}

TEST_CASE("edgeless graph is and-complete") {
    auto t = modular_decomposition(Digraph(3));
    CHECK(t.cls == ModuleClass::and_complete);
    REQUIRE(t.children.size() == 3);
    for (const auto& c : t.children) CHECK(c.cls == ModuleClass::trivial);
}

TEST_CASE("complete bidirected graph is xor-complete") {
    auto t = modular_decomposition(both_ways(3));
    CHECK(t.cls == ModuleClass::xor_complete);
    CHECK(t.children.size() == 3);
    auto two = modular_decomposition(both_ways(2));
    CHECK(two.cls == ModuleClass::xor_complete);
    CHECK(two.children.size() == 2);
}

TEST_CASE("transitive chain is linear in its induced order") {
    Digraph g(3);
    g.add_arc(2, 0);
    g.add_arc(0, 1);
    g.add_arc(2, 1);
    auto t = modular_decomposition(g);
    CHECK(t.cls == ModuleClass::linear);
    REQUIRE(t.children.size() == 3);
    CHECK(t.children[0].members == std::vector<int>{2});
    CHECK(t.children[1].members == std::vector<int>{0});
    CHECK(t.children[2].members == std::vector<int>{1});
}

TEST_CASE("path with a missing shortcut is primitive") {
    // a -> b -> c -> d with no other arcs has no non-trivial module
    Digraph g(4);
    g.add_arc(0, 1);
    g.add_arc(1, 2);
    g.add_arc(2, 3);
    auto t = modular_decomposition(g);
    CHECK(t.cls == ModuleClass::primitive);
    CHECK(t.concurrent);
    CHECK(t.children.size() == 4);
    CHECK(count_class(t, ModuleClass::primitive, true) == 1);
}

TEST_CASE("decomposition of the rigid fixture") {
    auto m = parse_model(corpus::read_text(corpus::path_of("xor_and_rigid.json")));
    auto g = build_org(unfold_proper_prefix(model_to_wfnet(m)));
    auto t = modular_decomposition(g);
    std::vector<std::string> labels;
    for (std::size_t v = 0; v < g.size(); ++v) labels.push_back(g.label(static_cast<int>(v)));
    CAPTURE(format_mdt(t, labels));
    REQUIRE(t.cls == ModuleClass::linear);
    REQUIRE(t.children.size() == 4);
    auto names = [&](const MdtNode& n) {
        std::vector<std::string> s;
        for (int v : n.members) s.push_back(labels[v]);
        std::sort(s.begin(), s.end());
        return s;
    };
    CHECK(names(t.children[0]) == std::vector<std::string>{"i"});
    CHECK(names(t.children[1]) == std::vector<std::string>{"a", "b", "c", "d"});
    CHECK(t.children[1].cls == ModuleClass::primitive);
    CHECK_FALSE(t.children[1].concurrent);
    CHECK(names(t.children[2]) == std::vector<std::string>{"e", "f"});
    CHECK(t.children[2].cls == ModuleClass::and_complete);
    CHECK(names(t.children[3]) == std::vector<std::string>{"o"});
}

TEST_CASE("random digraphs match exhaustive decomposition") {
    testgen::Rng rng(2024);
    for (int round = 0; round < 200; ++round) {
        std::size_t n = 1 + rng() % 8;
        auto g = testgen::random_digraph(rng, n);
        auto t = modular_decomposition(g);
        CAPTURE(round);
        CHECK(t == oracle::brute_force_mdt(g));
        // every tree node is a module
        std::vector<const MdtNode*> stack{&t};
        while (!stack.empty()) {
            const MdtNode* node = stack.back();
            stack.pop_back();
            CHECK(is_module(g, node->members));
            for (const auto& c : node->children) stack.push_back(&c);
        }
    }
}

TEST_CASE("decomposition output is deterministic") {
    testgen::Rng rng(5);
    auto g = testgen::random_digraph(rng, 7);
    auto a = modular_decomposition(g), b = modular_decomposition(g);
    CHECK(format_mdt(a) == format_mdt(b));
    CHECK(export_mdt_dot(a) == export_mdt_dot(b));
    auto q = quotient(g, a);
    CHECK(q.size() == a.children.size());
}
