#pragma once

#include "procryst/caps.hpp"
#include "procryst/cohomology.hpp"
#include "procryst/mod.hpp"
#include "procryst/point_group.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace procryst {

struct ModGroupGenSet {
    std::int64_t modulus = 0;
    std::vector<ModMatrix> generators; // all invertible mod modulus
    std::optional<Int> order;          // |<generators>| when known
};

// Order of GL(d, Z/mZ).
Int gl_order(int d, std::int64_t m);

// Generating set of GL(d, Z/mZ): elementary transvections, diagonal unit
// matrices for generators of (Z/mZ)^x, and an adjacent transposition.
ModGroupGenSet gl_generators(int d, std::int64_t m);

// Full element list of <gens> mod m, sorted by entry key.  Throws
// cap_exceeded past the cap.
std::vector<ModMatrix> close_mod_group(const std::vector<ModMatrix>& gens, std::size_t cap);

// Normalizer of the image of G in GL(d, Z/eZ), via Schreier orbit-stabilizer
// on the conjugation action on the subgroup's canonical form.
ModGroupGenSet normalizer_mod(const PointGroup& g, std::int64_t e, const Caps& caps = Caps{});

// Brute-force filter over all of GL(d, Z/eZ); tiny cases and cross-checks.
ModGroupGenSet normalizer_mod_bruteforce(const PointGroup& g, std::int64_t e,
                                         const Caps& caps = Caps{});

struct OrbitReport {
    std::string acting;
    int orbit_count = 0;
    std::vector<std::vector<std::int64_t>> representatives; // cocycle per orbit
    std::vector<Int> orbit_sizes;
};

// Orbits of the action of <N> on the elements of H (as cocycle classes).
OrbitReport orbit_count(const ModGroupGenSet& n, const CohomologyGroup& h, const PointGroup& g,
                        const Caps& caps = Caps{});

// Elements of <N> that lift to GL(d, Z[pi]) matrices normalizing G with the
// same conjugation effect and the same reduction mod e.
ModGroupGenSet liftable_subgroup(const ModGroupGenSet& n, const PointGroup& g, std::int64_t e,
                                 const std::vector<std::int64_t>& pi, const Caps& caps = Caps{});

} // namespace procryst
