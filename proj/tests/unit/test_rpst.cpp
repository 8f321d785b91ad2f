#include <doctest.h>

#include <functional>

#include "bpstruct/rpst.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"

using namespace bpstruct;
using corpus::make_model;

namespace {

void check_tree(const RpstNode& n) {
    if (n.kind == RpstKind::trivial) {
        CHECK(n.arcs.size() == 1);
        CHECK(n.children.empty());
        return;
    }
    std::set<Arc> covered;
    for (const auto& c : n.children) {
        for (const auto& a : c.arcs) {
            CHECK(n.arcs.count(a) == 1);
            CHECK(covered.insert(a).second);
        }
        check_tree(c);
    }
    CHECK(covered == n.arcs);
    if (n.kind == RpstKind::polygon)
        for (std::size_t k = 0; k + 1 < n.children.size(); ++k) CHECK(n.children[k].exit == n.children[k + 1].entry);
    if (n.kind == RpstKind::bond)
        for (const auto& c : n.children) {
            CHECK(c.entry == n.entry);
            CHECK(c.exit == n.exit);
        }
}

}  // namespace

TEST_CASE("sequence is a polygon of trivials") {
    auto root = compute_rpst(make_model({"i", "a", "b", "o"}, {"i>a", "a>b", "b>o"}));
    CHECK(root.kind == RpstKind::polygon);
    REQUIRE(root.children.size() == 3);
    for (const auto& c : root.children) CHECK(c.kind == RpstKind::trivial);
    CHECK(is_well_structured(root));
}

TEST_CASE("and bond inside the root polygon") {
    auto root = compute_rpst(make_model({"i", "s:and", "a", "b", "j:and", "o"}, {"i>s", "s>a", "s>b", "a>j", "b>j", "j>o"}));
    CHECK(root.kind == RpstKind::polygon);
    CHECK(count_kind(root, RpstKind::bond) == 1);
    const RpstNode* bond = nullptr;
    for (const auto& c : root.children)
        if (c.kind == RpstKind::bond) bond = &c;
    REQUIRE(bond != nullptr);
    CHECK(bond->entry == "s");
    CHECK(bond->exit == "j");
    REQUIRE(bond->children.size() == 2);
    for (const auto& c : bond->children) CHECK(c.kind == RpstKind::polygon);
}

TEST_CASE("rigid between s and z") {
    auto m = parse_model(corpus::read_text(corpus::path_of("xor_and_rigid.json")));
    auto root = compute_rpst(m);
    CHECK(root.kind == RpstKind::polygon);
    CHECK(count_kind(root, RpstKind::rigid) == 1);
    CHECK_FALSE(is_well_structured(root));
    bool found = false;
    for (const auto& c : root.children) {
        if (c.kind != RpstKind::rigid) continue;
        found = true;
        CHECK(c.entry == "s");
        CHECK(c.exit == "w");
    }
    CHECK(found);
    CHECK(root.children.front().kind == RpstKind::trivial);
    CHECK(*root.children.front().arcs.begin() == Arc{"i", "s"});
}

TEST_CASE("corpus trees are canonical") {
    for (const auto& e : corpus::models()) {
        CAPTURE(e.file);
        auto root = compute_rpst(e.model);
        CHECK(root.arcs == e.model.arcs());
        check_tree(root);
        CHECK(is_well_structured(root) == (e.category == "structured"));
    }
}

TEST_CASE("random structured models have no rigids") {
    for (unsigned seed = 0; seed < 200; ++seed) {
        testgen::Rng rng(seed);
        auto m = testgen::random_structured_model(rng, 12);
        CAPTURE(seed);
        auto root = compute_rpst(m);
        check_tree(root);
        CHECK(count_kind(root, RpstKind::rigid) == 0);
    }
}

TEST_CASE("random models decompose canonically") {
    for (unsigned seed = 0; seed < 200; ++seed) {
        testgen::Rng rng(seed);
        auto m = testgen::random_model(rng, 10);
        CAPTURE(seed);
        auto root = compute_rpst(m);
        CHECK(root.arcs == m.arcs());
        check_tree(root);
    }
}

TEST_CASE("lifted fragment is framed by boundary tasks") {
    auto m = parse_model(corpus::read_text(corpus::path_of("xor_and_rigid.json")));
    auto root = compute_rpst(m);
    for (const auto& c : root.children) {
        if (c.kind != RpstKind::rigid) continue;
        auto part = lift_fragment(m, c.arcs, c.entry, c.exit);
        CHECK(part.node(part.source()).name == kBoundaryIn);
        CHECK(part.node(part.sink()).name == kBoundaryOut);
        CHECK(is_boundary_label("@i"));
        CHECK_FALSE(is_boundary_label("@ph1"));
    }
}

TEST_CASE("dot export is deterministic") {
    auto m = make_model({"i", "a", "o"}, {"i>a", "a>o"});
    auto dot = export_dot(m);
    CHECK(dot == export_dot(m));
    CHECK(dot.find("digraph") == 0);
    CHECK(dot.find("shape=box") != std::string::npos);
}
