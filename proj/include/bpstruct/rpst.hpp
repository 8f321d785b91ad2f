#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bpstruct/model.hpp"

namespace bpstruct {

enum class RpstKind { trivial, polygon, bond, rigid };

std::string_view to_string(RpstKind kind);

struct RpstNode {
    RpstKind kind = RpstKind::trivial;
    std::string entry;
    std::string exit;
    std::set<Arc> arcs;
    std::vector<RpstNode> children;
};

// Canonical SESE decomposition. Trivial components and two-arc polygons are
// kept in the tree.
RpstNode compute_rpst(const ProcessModel& m);

bool is_well_structured(const RpstNode& root);
std::size_t count_kind(const RpstNode& root, RpstKind kind);
std::string format_rpst(const RpstNode& root);

// Labels of the silent boundary tasks used when a fragment is lifted into a
// standalone model. model_to_wfnet maps them to silent transitions.
inline constexpr std::string_view kBoundaryIn = "@i";
inline constexpr std::string_view kBoundaryOut = "@o";
inline const std::string kLiftSourceId = "__src";
inline const std::string kLiftSinkId = "__snk";

bool is_boundary_label(std::string_view name);

// Copies the fragment (arcs, entry, exit) into a standalone model framed by
// silent source/sink tasks. Gateways left with one in and one out arc are
// dissolved.
ProcessModel lift_fragment(const ProcessModel& m, const std::set<Arc>& arcs, const std::string& entry,
                           const std::string& exit);

}  // namespace bpstruct
