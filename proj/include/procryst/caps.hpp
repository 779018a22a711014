#pragma once

#include <cstdint>
#include <cstddef>

namespace procryst {

// Resource guardrails.  Hitting one raises cap_exceeded; nothing is
// truncated silently.
struct Caps {
    std::size_t group_closure = 10000;        // elements in an integer matrix group
    std::int64_t candidate_enumeration = 1 << 20; // mod-m conjugator candidates
    std::size_t orbit_states = 1 << 20;       // Schreier orbit BFS states
    std::size_t mod_group_closure = 1 << 20;  // elements of a mod-e matrix group
    std::int64_t h2_elements = 1 << 16;       // elements of H^2 enumerated for orbits
    std::int64_t bar_budget = 2000000;        // rows*cols of the bar-cochain system
};

} // namespace procryst
