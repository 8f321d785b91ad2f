#pragma once

#include <cstdint>
#include <random>

#include "bpstruct/mdt.hpp"
#include "bpstruct/model.hpp"
#include "bpstruct/net.hpp"
#include "bpstruct/org.hpp"
#include "bpstruct/synthesis.hpp"

namespace bpstruct::testgen {

using Rng = std::mt19937_64;

// Half plain random digraphs, half built by substituting random graphs into
// the vertices of a random quotient, so that non-trivial modules are common.
Digraph random_digraph(Rng& rng, std::size_t n);

// Valid event structure with 1..max_events events; labels may repeat.
EventStructure random_event_structure(Rng& rng, std::size_t max_events);

// Sound, safe, acyclic, free-choice WF-system with at most max_transitions
// transitions, all labeled. Grown by soundness-preserving refinements plus
// random shortcut places and transitions kept only when the result stays
// sound.
NetSystem random_sound_net(Rng& rng, std::size_t max_transitions);

// Well-structured model composed recursively from sequences and XOR/AND
// bonds; max_tasks bounds the nesting effort, not the exact task count.
ProcessModel random_structured_model(Rng& rng, std::size_t max_tasks);

// net_to_model of random_sound_net.
ProcessModel random_model(Rng& rng, std::size_t max_tasks);

}  // namespace bpstruct::testgen
