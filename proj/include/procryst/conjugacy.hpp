#pragma once

#include "procryst/caps.hpp"
#include "procryst/int_matrix.hpp"
#include "procryst/mod.hpp"
#include "procryst/point_group.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace procryst {

// Additional congruence a conjugator must satisfy: X = target (mod modulus).
struct CongruenceConstraint {
    std::int64_t modulus = 1;
    ModMatrix target;
};

// Decide whether some X in GL(d, Z[pi]) conjugates the tuple a onto the
// tuple b, i.e. a_i X = X b_i for all i.
struct ConjugacyProblem {
    std::vector<IntMatrix> a, b;
    std::vector<std::int64_t> primes; // pi, sorted distinct primes
    std::optional<CongruenceConstraint> constraint;

    int dim() const { return a.empty() ? 0 : a[0].rows(); }
    void validate() const;
};

struct LiftCertificate {
    IntMatrix x0;                      // integer lift of the mod-m conjugator
    std::int64_t modulus = 0;          // the m the lift was performed from
    std::vector<Int> membership_witness; // y with (P * S-bar) y = -stacked E
    std::optional<IntMatrix> exact_witness; // integer X with a_i X = X b_i, when S-bar = S
};

struct ConjugacyVerdict {
    enum class Outcome { NotConjugateMod, NotConjugateOver, Conjugate };

    Outcome outcome = Outcome::NotConjugateMod;
    std::int64_t refuted_modulus = 0;    // set for NotConjugateMod
    std::vector<std::int64_t> primes;    // the pi of the decision
    std::optional<LiftCertificate> certificate; // set for Conjugate

    bool conjugate() const { return outcome == Outcome::Conjugate; }
    // Recheck the verdict from the stored data by independent exact arithmetic.
    bool verify(const ConjugacyProblem& problem) const;
    std::string describe() const;
};

// kd^2 x d^2 matrix of X -> (a_i X - X b_i), row-major flattening.
IntMatrix build_t_matrix(const std::vector<IntMatrix>& a, const std::vector<IntMatrix>& b);

// All invertible X mod m with a_i X = X b_i (mod m), satisfying the problem's
// congruence constraint if present.  Throws cap_exceeded when the raw
// solution count exceeds the cap.
std::vector<ModMatrix> solutions_mod(const ConjugacyProblem& problem, std::int64_t m,
                                     std::int64_t cap = Caps{}.candidate_enumeration);

// Attempt to lift the mod-m conjugator x0 to Z[pi]; x0 must satisfy
// a_i x0 = x0 b_i (mod m) with det coprime to m.
std::optional<LiftCertificate> lift_solution(const ConjugacyProblem& problem, const IntMatrix& x0,
                                             std::int64_t m);

ConjugacyVerdict conjugate_over_zpi(const ConjugacyProblem& problem,
                                    const Caps& caps = Caps{});

// Simultaneous conjugacy over Q, decided exactly via the symbolic determinant
// polynomial on the rational kernel of T.
bool q_conjugacy_precheck(const std::vector<IntMatrix>& a, const std::vector<IntMatrix>& b);

// The closing-remark certificate: an integer witness conjugating a to b,
// valid over Z[p] for every p outside the listed exceptional primes; each
// exceptional prime is then checked separately.
struct CertificateResult {
    bool conjugate = false;
    std::optional<IntMatrix> witness;
    Int witness_det = 0;
    std::vector<std::int64_t> base_primes;        // pi from the SNF of T
    std::vector<std::int64_t> exceptional_primes; // primes dividing det(witness)
    std::vector<std::pair<std::int64_t, ConjugacyVerdict>> residual_checks;
    std::optional<ConjugacyVerdict> refutation;
};

CertificateResult conjugacy_certificate(const std::vector<IntMatrix>& a,
                                        const std::vector<IntMatrix>& b,
                                        const Caps& caps = Caps{});

// Stage-attributed pair decision used for Table 1 style reporting.
enum class SeparationMethod {
    None,
    CohomologySize,
    Mod2,
    Zp2,
    Mod3,
    Zp3,
    Mod5,
    Zp5,
    CombinedPi,
};

std::string method_name(SeparationMethod m);

struct PairEvidence {
    bool conjugate = false;            // over Z[pi], for some isomorphism image
    SeparationMethod separated_by = SeparationMethod::None;
    std::optional<ConjugacyVerdict> witness_verdict; // set when conjugate
};

// True (with witness) iff some isomorphism-image tuple of g2's generators is
// conjugate to g1's generator tuple over Z[pi].  Evidence records which of
// the sequential tests (mod 2, Z_2, mod 3, Z_3, mod 5, Z_5, combined pi)
// separated the pair when not conjugate.
PairEvidence zclass_pair_profinite_conjugate(const PointGroup& g1, const PointGroup& g2,
                                             const std::vector<std::int64_t>& primes,
                                             const Caps& caps = Caps{});

} // namespace procryst
