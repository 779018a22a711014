#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "procryst/conjugacy.hpp"
#include "procryst/errors.hpp"
#include "procryst/normalizer.hpp"

#include <random>
#include <set>

using namespace procryst;

namespace {

IntMatrix m2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    return IntMatrix::from_rows_i64({{a, b}, {c, d}});
}

const IntMatrix kSwap = m2(0, 1, 1, 0);
const IntMatrix kDiag = m2(1, 0, 0, -1);
const IntMatrix kR3 = m2(0, -1, 1, -1);

// exhaustive conjugacy check over GL(2, Z/m)
bool brute_conjugate_mod(const std::vector<IntMatrix>& a, const std::vector<IntMatrix>& b,
                         std::int64_t m) {
    std::vector<ModMatrix> all = close_mod_group(gl_generators(2, m).generators, 1 << 20);
    for (const ModMatrix& x : all) {
        bool ok = true;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!(ModMatrix::reduce(a[i], m) * x == x * ModMatrix::reduce(b[i], m))) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

} // namespace

TEST_CASE("build_t_matrix") {
    // k=1, d=1
    IntMatrix t = build_t_matrix({IntMatrix::from_rows_i64({{5}})}, {IntMatrix::from_rows_i64({{2}})});
    CHECK(t.rows() == 1);
    CHECK(t.cols() == 1);
    CHECK(t.at(0, 0) == 3);

    // A=B=I: zero map
    CHECK(build_t_matrix({IntMatrix::identity(3)}, {IntMatrix::identity(3)}).is_zero());

    // A=B=diag(1,-1): kernel rank 2 (diagonal matrices commute)
    IntMatrix t2 = build_t_matrix({kDiag}, {kDiag});
    SnfResult f = snf(t2);
    CHECK(t2.cols() - f.rank == 2);
}

TEST_CASE("solutions_mod spec examples") {
    // A=B=(-I), m=2: every invertible matrix commutes, |GL(2,F2)| = 6
    ConjugacyProblem p1{{-IntMatrix::identity(2)}, {-IntMatrix::identity(2)}, {2}, std::nullopt};
    CHECK(solutions_mod(p1, 2).size() == 6);

    // swap vs diag mod 2: no invertible solutions
    ConjugacyProblem p2{{kSwap}, {kDiag}, {2}, std::nullopt};
    CHECK(solutions_mod(p2, 2).empty());

    // constrained: the target [[1,2],[2,1]] commutes with diag(1,-1) mod 4
    ModMatrix target(2, 2, 4);
    target.at(0, 0) = 1;
    target.at(0, 1) = 2;
    target.at(1, 0) = 2;
    target.at(1, 1) = 1;
    ConjugacyProblem p3{{kDiag}, {kDiag}, {2}, CongruenceConstraint{4, target}};
    auto sols = solutions_mod(p3, 4);
    CHECK(!sols.empty());
    for (const ModMatrix& s : sols) CHECK(s == target); // the congruence pins everything mod 4
}

TEST_CASE("lift_solution") {
    // X0 = I always lifts when A = B
    ConjugacyProblem p{{kDiag}, {kDiag}, {2}, std::nullopt};
    auto cert = lift_solution(p, IntMatrix::identity(2), 2);
    REQUIRE(cert.has_value());
    CHECK(cert->x0.is_identity());

    // A=B=[[1,1],[0,1]] is outside the finite-order world but lifting X0=A works
    IntMatrix u = m2(1, 1, 0, 1);
    ConjugacyProblem pu{{u}, {u}, {2}, std::nullopt};
    auto certu = lift_solution(pu, u, 2);
    CHECK(certu.has_value());

    // the spec's congruence-blocked case: X0 = [[1,2],[2,1]] for diag(1,-1), m=4
    ModMatrix target(2, 2, 4);
    target.at(0, 0) = 1;
    target.at(0, 1) = 2;
    target.at(1, 0) = 2;
    target.at(1, 1) = 1;
    ConjugacyProblem pc{{kDiag}, {kDiag}, {2}, CongruenceConstraint{4, target}};
    CHECK_FALSE(lift_solution(pc, target.lift(), 4).has_value());
}

TEST_CASE("conjugate_over_zpi spec examples") {
    // A = B: conjugate with witness I
    ConjugacyProblem same{{kR3, kSwap}, {kR3, kSwap}, {2, 3}, std::nullopt};
    ConjugacyVerdict v = conjugate_over_zpi(same);
    REQUIRE(v.conjugate());
    CHECK(v.certificate->x0.is_identity());
    CHECK(v.verify(same));

    // swap vs diag at pi={2}: fails already mod 2
    ConjugacyProblem p2{{kSwap}, {kDiag}, {2}, std::nullopt};
    ConjugacyVerdict v2 = conjugate_over_zpi(p2);
    CHECK(v2.outcome == ConjugacyVerdict::Outcome::NotConjugateMod);
    CHECK(v2.refuted_modulus == 2);
    CHECK(v2.verify(p2));

    // swap vs diag at pi={3}: conjugate, witness with determinant a 3-adic unit
    ConjugacyProblem p3{{kSwap}, {kDiag}, {3}, std::nullopt};
    ConjugacyVerdict v3 = conjugate_over_zpi(p3);
    REQUIRE(v3.conjugate());
    CHECK(v3.verify(p3));
    REQUIRE(v3.certificate->exact_witness.has_value());
    const IntMatrix& w = *v3.certificate->exact_witness;
    CHECK((kSwap * w) == (w * kDiag));
    CHECK(w.det() % 3 != 0);
}

TEST_CASE("q_conjugacy_precheck") {
    CHECK(q_conjugacy_precheck({kR3, kSwap}, {kR3, kSwap}));
    CHECK_FALSE(q_conjugacy_precheck({IntMatrix::from_rows_i64({{2}})},
                                     {IntMatrix::from_rows_i64({{3}})}));
    CHECK(q_conjugacy_precheck({kSwap}, {kDiag}));
    // different trace: never conjugate
    CHECK_FALSE(q_conjugacy_precheck({kDiag}, {-IntMatrix::identity(2)}));
}

TEST_CASE("conjugacy_certificate") {
    // A = B = diag(1,-1): witness I, no exceptional primes
    CertificateResult c = conjugacy_certificate({kDiag}, {kDiag});
    REQUIRE(c.conjugate);
    CHECK(c.witness->is_identity());
    CHECK(c.exceptional_primes.empty());

    // not Q-conjugate input is rejected
    CHECK_THROWS_AS(conjugacy_certificate({IntMatrix::from_rows_i64({{2}})},
                                          {IntMatrix::from_rows_i64({{3}})}),
                    std::invalid_argument);

    // swap vs diag: refuted at p = 2
    CertificateResult c2 = conjugacy_certificate({kSwap}, {kDiag});
    CHECK_FALSE(c2.conjugate);
    REQUIRE(c2.refutation.has_value());
    CHECK(c2.refutation->outcome == ConjugacyVerdict::Outcome::NotConjugateMod);

    // R vs R^2: conjugate in GL(2,Z)
    IntMatrix r2 = kR3 * kR3;
    CertificateResult c3 = conjugacy_certificate({kR3}, {r2});
    REQUIRE(c3.conjugate);
    CHECK((kR3 * *c3.witness) == (*c3.witness * r2));
    CHECK(c3.witness_det != 0);
    for (const auto& [p, verdict] : c3.residual_checks) CHECK(verdict.conjugate());
    // oracle: an integer witness with entries in [-2,2] exists
    bool found = false;
    for (int a = -2; a <= 2 && !found; ++a)
        for (int b = -2; b <= 2 && !found; ++b)
            for (int cc = -2; cc <= 2 && !found; ++cc)
                for (int d = -2; d <= 2 && !found; ++d) {
                    IntMatrix x = m2(a, b, cc, d);
                    if (x.det() != 0 && (kR3 * x) == (x * r2)) found = true;
                }
    CHECK(found);
}

TEST_CASE("verdicts agree with exhaustive GL(2, Z/m) search on small tuples") {
    std::vector<std::pair<std::vector<IntMatrix>, std::vector<IntMatrix>>> pairs = {
        {{kSwap}, {kDiag}},
        {{kR3}, {kR3 * kR3}},
        {{kDiag, -IntMatrix::identity(2)}, {kSwap, -IntMatrix::identity(2)}},
        {{m2(-1, 0, 0, -1)}, {m2(1, 0, 0, 1)}},
    };
    for (const auto& [a, b] : pairs) {
        for (std::int64_t m : {2, 3, 4, 6}) {
            std::vector<std::int64_t> pi = prime_factors(m);
            ConjugacyProblem pr{a, b, pi, std::nullopt};
            bool has = !solutions_mod(pr, m).empty();
            CHECK(has == brute_conjugate_mod(a, b, m));
        }
    }
}

TEST_CASE("conjugacy over Z[pi] is an equivalence relation on small instances") {
    std::vector<std::vector<IntMatrix>> tuples = {
        {kSwap}, {kDiag}, {kR3}, {kR3 * kR3}, {-IntMatrix::identity(2)}};
    const std::vector<std::int64_t> pi{2, 3};
    for (const auto& t : tuples)
        CHECK(conjugate_over_zpi({t, t, pi, std::nullopt}).conjugate());
    for (const auto& a : tuples)
        for (const auto& b : tuples) {
            bool ab = conjugate_over_zpi({a, b, pi, std::nullopt}).conjugate();
            bool ba = conjugate_over_zpi({b, a, pi, std::nullopt}).conjugate();
            CHECK(ab == ba);
        }
    for (const auto& a : tuples)
        for (const auto& b : tuples)
            for (const auto& c : tuples) {
                bool ab = conjugate_over_zpi({a, b, pi, std::nullopt}).conjugate();
                bool bc = conjugate_over_zpi({b, c, pi, std::nullopt}).conjugate();
                bool ac = conjugate_over_zpi({a, c, pi, std::nullopt}).conjugate();
                if (ab && bc) CHECK(ac);
            }
}

TEST_CASE("conjugate over Z[pi] implies solutions at every supported modulus") {
    ConjugacyProblem pr{{kR3}, {kR3 * kR3}, {2}, std::nullopt};
    REQUIRE(conjugate_over_zpi(pr).conjugate());
    for (std::int64_t m : {2, 4}) CHECK(!solutions_mod(pr, m).empty());

    ConjugacyProblem p3{{kSwap}, {kDiag}, {3}, std::nullopt};
    REQUIRE(conjugate_over_zpi(p3).conjugate());
    for (std::int64_t m : {3, 9}) CHECK(!solutions_mod(p3, m).empty());
}

TEST_CASE("q-precheck failure forbids Conjugate verdicts on random pairs") {
    std::mt19937_64 rng(424242);
    int checked = 0;
    while (checked < 60) {
        IntMatrix a = oracles::random_matrix(rng, 2, 2, -2, 2);
        IntMatrix b = oracles::random_matrix(rng, 2, 2, -2, 2);
        Int da = a.det(), db = b.det();
        if (da == 0 || db == 0) continue;
        ++checked;
        if (q_conjugacy_precheck({a}, {b})) continue;
        ConjugacyProblem p{{a}, {b}, {2, 3}, std::nullopt};
        CHECK_FALSE(conjugate_over_zpi(p).conjugate());
    }
}

TEST_CASE("zclass pair decision: reflection classes") {
    Word sq;
    sq.letters = {{0, 1}, {0, 1}};
    PointGroup g_swap = PointGroup::build(2, {kSwap}, {sq});
    PointGroup g_diag = PointGroup::build(2, {kDiag}, {sq});

    CHECK(zclass_pair_profinite_conjugate(g_swap, g_swap, {2}).conjugate);

    // separated at p=2 by the mod-2 test
    PairEvidence e2 = zclass_pair_profinite_conjugate(g_swap, g_diag, {2});
    CHECK_FALSE(e2.conjugate);
    CHECK(e2.separated_by == SeparationMethod::Mod2);

    // conjugate over Z[{3}] alone: p=2 must come first in the pipeline
    PairEvidence e3 = zclass_pair_profinite_conjugate(g_swap, g_diag, {3});
    CHECK(e3.conjugate);
    REQUIRE(e3.witness_verdict.has_value());
    ConjugacyProblem check_problem{g_swap.generators(), g_diag.generators(), {3}, std::nullopt};
    CHECK(e3.witness_verdict->verify(check_problem));
}

TEST_CASE("solutions cap raises loudly") {
    // A=B=I at modulus 6: kernel is everything, 6^4 candidates
    ConjugacyProblem p{{IntMatrix::identity(2)}, {IntMatrix::identity(2)}, {2, 3}, std::nullopt};
    CHECK_THROWS_AS(solutions_mod(p, 6, 100), cap_exceeded);
}
