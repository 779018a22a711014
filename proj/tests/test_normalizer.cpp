#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "procryst/catalog.hpp"
#include "procryst/errors.hpp"
#include "procryst/normalizer.hpp"

#include <set>

using namespace procryst;

namespace {

IntMatrix m2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    return IntMatrix::from_rows_i64({{a, b}, {c, d}});
}

Word word(std::initializer_list<std::pair<int, int>> ls) {
    Word w;
    for (auto p : ls) w.letters.push_back(p);
    return w;
}

std::set<std::string> element_keys(const ModGroupGenSet& s, std::size_t cap = 1 << 20) {
    std::set<std::string> keys;
    for (const ModMatrix& g : close_mod_group(s.generators, cap)) keys.insert(g.key());
    return keys;
}

} // namespace

TEST_CASE("gl_order formula") {
    CHECK(gl_order(1, 4) == 2);
    CHECK(gl_order(2, 2) == 6);
    CHECK(gl_order(2, 3) == 48);
    CHECK(gl_order(2, 4) == 96);
    CHECK(gl_order(3, 2) == 168);
    CHECK(gl_order(2, 6) == 288); // GL2(Z/2) x GL2(Z/3)
}

TEST_CASE("gl_generators close to the full group") {
    for (auto [d, m] : std::vector<std::pair<int, std::int64_t>>{{1, 4}, {2, 2}, {2, 3}, {2, 4}, {2, 6}, {3, 2}}) {
        ModGroupGenSet g = gl_generators(d, m);
        std::vector<ModMatrix> all = close_mod_group(g.generators, 1 << 20);
        CHECK(Int(all.size()) == gl_order(d, m));
        for (const ModMatrix& x : all) CHECK(x.invertible());
    }
}

TEST_CASE("normalizer of a central subgroup is the whole GL") {
    PointGroup pm1 = PointGroup::build(2, {m2(-1, 0, 0, -1)}, {word({{0, 1}, {0, 1}})});
    ModGroupGenSet n = normalizer_mod(pm1, 4);
    CHECK(*n.order == 96);

    PointGroup triv = PointGroup::build(2, {}, {});
    ModGroupGenSet nt = normalizer_mod(triv, 4);
    CHECK(*nt.order == 96);
}

TEST_CASE("normalizer of the diagonal reflection mod 4") {
    PointGroup g = PointGroup::build(2, {m2(1, 0, 0, -1)}, {word({{0, 1}, {0, 1}})});
    ModGroupGenSet n = normalizer_mod(g, 4);
    CHECK(*n.order == 16);
    // exactly the matrices with unit diagonal and even off-diagonal entries
    for (const ModMatrix& x : close_mod_group(n.generators, 1000)) {
        CHECK(x.at(0, 1) % 2 == 0);
        CHECK(x.at(1, 0) % 2 == 0);
        CHECK(x.at(0, 0) % 2 == 1);
        CHECK(x.at(1, 1) % 2 == 1);
    }
}

TEST_CASE("schreier normalizer agrees with brute force") {
    std::vector<PointGroup> groups;
    groups.push_back(PointGroup::build(2, {m2(1, 0, 0, -1)}, {word({{0, 1}, {0, 1}})}));
    groups.push_back(PointGroup::build(2, {m2(0, 1, 1, 0)}, {word({{0, 1}, {0, 1}})}));
    groups.push_back(PointGroup::build(2, {m2(0, -1, 1, 0)}, {word({{0, 1}, {0, 1}, {0, 1}, {0, 1}})}));
    groups.push_back(PointGroup::build(
        2, {m2(1, 0, 0, -1), m2(-1, 0, 0, 1)},
        {word({{0, 1}, {0, 1}}), word({{1, 1}, {1, 1}}), word({{0, 1}, {1, 1}, {0, 1}, {1, 1}})}));
    for (const PointGroup& g : groups) {
        for (std::int64_t e : {3, 4}) {
            if (!g.reduction_injective(e)) continue;
            ModGroupGenSet fast = normalizer_mod(g, e);
            ModGroupGenSet brute = normalizer_mod_bruteforce(g, e);
            CHECK(*fast.order == *brute.order);
            CHECK(element_keys(fast) == element_keys(brute));
        }
    }
    // d = 3, e = 2 is fine for an odd-order group
    PointGroup c3d3 = PointGroup::build(
        3, {IntMatrix::from_rows_i64({{0, -1, 0}, {1, -1, 0}, {0, 0, 1}})},
        {word({{0, 1}, {0, 1}, {0, 1}})});
    REQUIRE(c3d3.reduction_injective(2));
    ModGroupGenSet fast = normalizer_mod(c3d3, 2);
    ModGroupGenSet brute = normalizer_mod_bruteforce(c3d3, 2);
    CHECK(*fast.order == *brute.order);
    CHECK(element_keys(fast) == element_keys(brute));
}

TEST_CASE("|N| divides |GL| and N really normalizes") {
    PointGroup g = PointGroup::build(
        2, {m2(1, 0, 0, -1), m2(-1, 0, 0, 1)},
        {word({{0, 1}, {0, 1}}), word({{1, 1}, {1, 1}}), word({{0, 1}, {1, 1}, {0, 1}, {1, 1}})});
    ModGroupGenSet n = normalizer_mod(g, 4);
    CHECK(gl_order(2, 4) % *n.order == 0);
    std::set<std::string> img;
    for (int i = 0; i < g.order(); ++i) img.insert(ModMatrix::reduce(g.element(i), 4).key());
    for (const ModMatrix& x : n.generators) {
        ModMatrix xi = x.inverse();
        for (int i = 0; i < g.order(); ++i)
            CHECK(img.count((xi * ModMatrix::reduce(g.element(i), 4) * x).key()) == 1);
    }
}

TEST_CASE("orbit_count basics") {
    PointGroup g = PointGroup::build(2, {m2(1, 0, 0, -1)}, {word({{0, 1}, {0, 1}})});
    CohomologyGroup h = h2_lattice(g, 4);
    REQUIRE(h.order == 2);

    // N acting trivially (identity only): every class is its own orbit
    ModGroupGenSet idonly{4, {ModMatrix::identity(2, 4)}, Int(1)};
    OrbitReport triv = orbit_count(idonly, h, g);
    CHECK(triv.orbit_count == 2);

    // the full mod-4 normalizer: zero and nonzero class stay separate
    ModGroupGenSet n = normalizer_mod(g, 4);
    OrbitReport rep = orbit_count(n, h, g);
    CHECK(rep.orbit_count == 2);
    Int total = 0;
    for (const Int& s : rep.orbit_sizes) total += s;
    CHECK(total == h.order);

    // trivial H: one orbit
    PointGroup swap = PointGroup::build(2, {m2(0, 1, 1, 0)}, {word({{0, 1}, {0, 1}})});
    CohomologyGroup hs = h2_lattice(swap, 4);
    REQUIRE(hs.trivial());
    CHECK(orbit_count(normalizer_mod(swap, 4), hs, swap).orbit_count == 1);
}

TEST_CASE("liftable subgroup of the diagonal reflection") {
    PointGroup g = PointGroup::build(2, {m2(1, 0, 0, -1)}, {word({{0, 1}, {0, 1}})});
    ModGroupGenSet n = normalizer_mod(g, 4);
    REQUIRE(*n.order == 16);
    ModGroupGenSet lift = liftable_subgroup(n, g, 4, {2});
    CHECK(*lift.order == 4);
    // exactly the diagonal matrices diag(a,d), a,d odd
    for (const ModMatrix& x : close_mod_group(lift.generators, 100)) {
        CHECK(x.at(0, 1) == 0);
        CHECK(x.at(1, 0) == 0);
    }
    // contains the image of G
    std::set<std::string> keys = element_keys(lift, 100);
    for (const IntMatrix& gen : g.generators())
        CHECK(keys.count(ModMatrix::reduce(gen, 4).key()) == 1);
    // closed under multiplication and inverse
    std::vector<ModMatrix> elems = close_mod_group(lift.generators, 100);
    for (const ModMatrix& a : elems) {
        CHECK(keys.count(a.inverse().key()) == 1);
        for (const ModMatrix& b : elems) CHECK(keys.count((a * b).key()) == 1);
    }
}

TEST_CASE("orbit monotonicity: liftable subgroup cannot have fewer orbits than N") {
    PointGroup g = PointGroup::build(2, {m2(1, 0, 0, -1)}, {word({{0, 1}, {0, 1}})});
    CohomologyGroup h = h2_lattice(g, 4);
    ModGroupGenSet n = normalizer_mod(g, 4);
    ModGroupGenSet lift = liftable_subgroup(n, g, 4, {2});
    OrbitReport under_n = orbit_count(n, h, g);
    OrbitReport under_lift = orbit_count(lift, h, g);
    CHECK(under_lift.orbit_count >= under_n.orbit_count);
    CHECK(under_lift.orbit_count == 2); // = number of space-group types (pm, pg)
}

TEST_CASE("profinite_orbit_count on catalog-style entries") {
    ZClassEntry pm;
    pm.dimension = 2;
    pm.qclass = 3;
    pm.zclass = 1;
    pm.label = "pm";
    pm.spacegroups = 2;
    pm.generators = {m2(1, 0, 0, -1)};
    pm.relators = {word({{0, 1}, {0, 1}})};
    CHECK(profinite_orbit_count(pm) == 2);

    ZClassEntry cm = pm;
    cm.zclass = 2;
    cm.label = "cm";
    cm.spacegroups = 1;
    cm.generators = {m2(0, 1, 1, 0)};
    CHECK(profinite_orbit_count(cm) == 1); // trivial H^2
}
