#pragma once

#include <set>
#include <vector>

#include "bpstruct/mdt.hpp"
#include "bpstruct/org.hpp"
#include "bpstruct/synthesis.hpp"
#include "bpstruct/unfolder.hpp"

namespace bpstruct::oracle {

// Strong modules by exhaustive subset search; children are the maximal
// strong modules strictly inside a node; classes from the quotient.
MdtNode brute_force_mdt(const Digraph& g);

// Every conflict-free subset whose one-way predecessors outside the subset
// each conflict with a member, sorted like Poset::elements.
std::vector<Bitset> brute_force_poset(const OrderingRelationsGraph& g);

// Elements p != bottom such that p <= lub(x, y) implies p <= x or p <= y
// for every consistent pair.
std::vector<int> join_prime_elements(const Poset& p);

// Mark(C) over every configuration C of the prefix.
std::set<Marking> prefix_markings(const Prefix& prefix);

// Recorded cutoffs e with Cut([e]) \ e* != Cut([corr(e)]) \ corr(e)*.
std::size_t cutoff_law_violations(const Prefix& prefix);

}  // namespace bpstruct::oracle
