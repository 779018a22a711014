#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "procryst/errors.hpp"
#include "procryst/point_group.hpp"

#include <algorithm>
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

} // namespace

TEST_CASE("close_group basics") {
    Closure c = close_group({m2(-1, 0, 0, -1)}, 100);
    CHECK(c.elements.size() == 2);
    CHECK(c.elements[0].is_identity());
    CHECK(c.words[0].letters.empty());

    Closure c3 = close_group({m2(0, -1, 1, -1)}, 100);
    CHECK(c3.elements.size() == 3);

    CHECK_THROWS_AS(close_group({m2(1, 1, 0, 1)}, 100), cap_exceeded);
}

TEST_CASE("closure is stable under generator permutation") {
    std::vector<IntMatrix> gens = {m2(0, -1, 1, 0), m2(1, 0, 0, -1)};
    Closure a = close_group(gens, 100);
    Closure b = close_group({gens[1], gens[0]}, 100);
    std::set<IntMatrix> sa(a.elements.begin(), a.elements.end());
    std::set<IntMatrix> sb(b.elements.begin(), b.elements.end());
    CHECK(sa == sb);
    CHECK(sa.size() == 8); // D4
}

TEST_CASE("words evaluate to their elements") {
    std::vector<IntMatrix> gens = {m2(0, -1, 1, -1), m2(0, 1, 1, 0)};
    std::vector<IntMatrix> invs;
    for (const auto& g : gens) invs.push_back(g.unimodular_inverse());
    Closure c = close_group(gens, 100);
    CHECK(c.elements.size() == 6);
    for (std::size_t i = 0; i < c.elements.size(); ++i)
        CHECK(evaluate_word(c.words[i], gens, invs) == c.elements[i]);
}

TEST_CASE("check_relators") {
    CHECK(check_relators({m2(-1, 0, 0, -1)}, {word({{0, 1}, {0, 1}})}));
    CHECK_FALSE(check_relators({m2(-1, 0, 0, -1)}, {word({{0, 1}, {0, 1}, {0, 1}})}));
    // dihedral pair r, s with r^3, s^2, (rs)^2
    std::vector<IntMatrix> d3 = {m2(0, -1, 1, -1), m2(0, 1, 1, 0)};
    std::vector<Word> rel = {word({{0, 1}, {0, 1}, {0, 1}}), word({{1, 1}, {1, 1}}),
                             word({{0, 1}, {1, 1}, {0, 1}, {1, 1}})};
    CHECK(check_relators(d3, rel));
}

TEST_CASE("element_to_word") {
    PointGroup g = PointGroup::build(2, {m2(0, -1, 1, -1)}, {word({{0, 1}, {0, 1}, {0, 1}})});
    CHECK(element_to_word(g, IntMatrix::identity(2)).letters.empty());
    Word w1 = element_to_word(g, m2(0, -1, 1, -1));
    CHECK(w1.letters.size() == 1);
    Word w2 = element_to_word(g, m2(0, -1, 1, -1) * m2(0, -1, 1, -1));
    CHECK(w2.letters.size() == 2);
    CHECK_THROWS_AS(element_to_word(g, m2(1, 1, 0, 1)), std::invalid_argument);
}

TEST_CASE("automorphism_images of C2 and C3") {
    PointGroup c2 = PointGroup::build(2, {m2(-1, 0, 0, -1)}, {word({{0, 1}, {0, 1}})});
    auto im2 = automorphism_images(c2);
    REQUIRE(im2.size() == 1);
    CHECK(im2[0][0] == m2(-1, 0, 0, -1));

    PointGroup c3 = PointGroup::build(2, {m2(0, -1, 1, -1)}, {word({{0, 1}, {0, 1}, {0, 1}})});
    auto im3 = automorphism_images(c3);
    REQUIRE(im3.size() == 2);
    std::set<IntMatrix> targets;
    targets.insert(im3[0][0]);
    targets.insert(im3[1][0]);
    CHECK(targets.count(m2(0, -1, 1, -1)) == 1);
    CHECK(targets.count(m2(0, -1, 1, -1) * m2(0, -1, 1, -1)) == 1);
}

TEST_CASE("automorphism_images of C2xC2 has 6 tuples") {
    PointGroup v4 = PointGroup::build(
        2, {m2(-1, 0, 0, 1), m2(1, 0, 0, -1)},
        {word({{0, 1}, {0, 1}}), word({{1, 1}, {1, 1}}), word({{0, 1}, {1, 1}, {0, 1}, {1, 1}})});
    CHECK(v4.order() == 4);
    CHECK(automorphism_images(v4).size() == 6);
}

TEST_CASE("every automorphism image extends to a bijective homomorphism") {
    // D4 with r^4, s^2, (rs)^2
    PointGroup d4 = PointGroup::build(
        2, {m2(0, -1, 1, 0), m2(1, 0, 0, -1)},
        {word({{0, 1}, {0, 1}, {0, 1}, {0, 1}}), word({{1, 1}, {1, 1}}),
         word({{0, 1}, {1, 1}, {0, 1}, {1, 1}})});
    CHECK(d4.order() == 8);
    auto images = isomorphism_images(d4, d4);
    CHECK(images.size() == 8); // |Aut(D4)| = 8
    for (const auto& im : images) {
        std::vector<int> f(static_cast<std::size_t>(d4.order()));
        for (int i = 0; i < d4.order(); ++i) {
            int acc = 0;
            for (auto [idx, exp] : d4.word_of(i).letters) {
                int target = im[static_cast<std::size_t>(idx)];
                acc = d4.product_index(acc, exp > 0 ? target : d4.inverse_index(target));
            }
            f[static_cast<std::size_t>(i)] = acc;
        }
        std::set<int> image_set(f.begin(), f.end());
        CHECK(image_set.size() == static_cast<std::size_t>(d4.order()));
        for (int i = 0; i < d4.order(); ++i)
            for (int j = 0; j < d4.order(); ++j)
                CHECK(f[static_cast<std::size_t>(d4.product_index(i, j))] ==
                      d4.product_index(f[static_cast<std::size_t>(i)],
                                       f[static_cast<std::size_t>(j)]));
    }
}

TEST_CASE("automorphism count agrees with known values for small groups") {
    struct Case {
        std::vector<IntMatrix> gens;
        std::vector<Word> rel;
        std::size_t aut;
    };
    std::vector<Case> cases;
    // C4: Aut = C2
    cases.push_back({{m2(0, -1, 1, 0)}, {word({{0, 1}, {0, 1}, {0, 1}, {0, 1}})}, 2});
    // C6: Aut = C2
    cases.push_back(
        {{m2(1, -1, 1, 0)}, {word({{0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}})}, 2});
    // S3 = D3: Aut = Inn = S3
    cases.push_back({{m2(0, -1, 1, -1), m2(0, 1, 1, 0)},
                     {word({{0, 1}, {0, 1}, {0, 1}}), word({{1, 1}, {1, 1}}),
                      word({{0, 1}, {1, 1}, {0, 1}, {1, 1}})},
                     6});
    for (const Case& c : cases) {
        PointGroup g = PointGroup::build(2, c.gens, c.rel);
        CHECK(automorphism_images(g).size() == c.aut);
    }
}

TEST_CASE("isomorphism_images between different representations") {
    // the two reflection Z-classes are abstractly C2, so one isomorphism each way
    PointGroup a = PointGroup::build(2, {m2(1, 0, 0, -1)}, {word({{0, 1}, {0, 1}})});
    PointGroup b = PointGroup::build(2, {m2(0, 1, 1, 0)}, {word({{0, 1}, {0, 1}})});
    auto im = isomorphism_images(a, b);
    REQUIRE(im.size() == 1);
    CHECK(b.element(im[0][0]) == m2(0, 1, 1, 0));

    // different orders: no isomorphisms
    PointGroup c3 = PointGroup::build(2, {m2(0, -1, 1, -1)}, {word({{0, 1}, {0, 1}, {0, 1}})});
    CHECK(isomorphism_images(a, c3).empty());
}

TEST_CASE("negative exponents in words") {
    std::vector<IntMatrix> gens = {m2(0, -1, 1, 0)};
    std::vector<IntMatrix> invs = {gens[0].unimodular_inverse()};
    Word w;
    w.letters = {{0, -1}};
    CHECK(evaluate_word(w, gens, invs) == invs[0]);
    Word cancel;
    cancel.letters = {{0, 1}, {0, 1}, {0, -1}, {0, -1}};
    CHECK(check_relators(gens, {cancel}));
}
