#pragma once

#include "procryst/caps.hpp"
#include "procryst/int_matrix.hpp"
#include "procryst/mod.hpp"
#include "procryst/point_group.hpp"
#include "procryst/snf.hpp"

#include <cstdint>
#include <vector>

namespace procryst {

// A G-lattice: Z^rank with the generators of G acting by the given integer
// matrices.  For the defining lattice these are just the generators of the
// point group; shifted (coinduced-quotient) modules supply their own.
struct GAction {
    int rank = 0;
    std::vector<IntMatrix> gen_mats;
    std::vector<IntMatrix> gen_invs;

    static GAction of(const PointGroup& g);
};

// The relator-derived linear system whose kernel is Z^1: block row per
// relator, built by free-differential expansion with zeta(g^-1) = -g^-1 zeta(g).
IntMatrix relator_system(const GAction& action, const std::vector<Word>& relators);

struct CocycleSpace {
    std::int64_t modulus = 0;
    int degree = 1;
    int ambient = 0;                               // k * rank
    std::vector<std::vector<std::int64_t>> basis;  // generating vectors mod modulus
    std::vector<std::int64_t> basis_orders;        // additive orders (degree-1 spaces)
};

CocycleSpace z1_mod(const PointGroup& g, std::int64_t q);
CocycleSpace b1_mod(const PointGroup& g, std::int64_t q);
CocycleSpace z1_integral_reduced(const PointGroup& g, std::int64_t q);

// Finite quotient L_num / L_den of two full-rank sublattices of Z^dim, both
// containing q Z^dim.  Carries enough structure to put arbitrary lattice
// points into canonical coordinates modulo the denominator.
class LatticeQuotient {
public:
    static LatticeQuotient build(const std::vector<std::vector<Int>>& num_gens,
                                 const std::vector<std::vector<Int>>& den_gens, int dim,
                                 std::int64_t q);

    int dim() const { return dim_; }
    const std::vector<Int>& factors() const { return factors_; } // all dim, divisibility order
    Int order() const;
    Int exponent() const;

    // generator of the i-th cyclic factor as a lattice point of L_num
    std::vector<Int> generator(int i) const;

    // canonical coordinates (t_i mod factors_i, kept only where factor > 1)
    std::vector<std::int64_t> coords(const std::vector<Int>& z) const;
    bool in_denominator(const std::vector<Int>& z) const;
    std::vector<Int> from_coords(const std::vector<std::int64_t>& c) const;

private:
    int dim_ = 0;
    IntMatrix basis_change_;       // columns generate L_num; i-th column has order factors_[i]
    SnfResult basis_snf_;          // SNF of basis_change_ for coordinate solves
    std::vector<Int> factors_;
    std::vector<int> free_idx_;    // indices with factor > 1
};

struct CohomologyGroup {
    std::vector<Int> invariant_factors; // the factors > 1, divisibility order
    Int order = 1;
    Int exponent = 1;
    std::int64_t modulus = 0;  // working modulus of the representatives
    int degree = 0;
    int ambient = 0;
    std::vector<std::vector<std::int64_t>> representatives; // one cocycle per factor
    LatticeQuotient structure;

    bool trivial() const { return order == 1; }
    Int element_count() const { return order; }
};

CohomologyGroup h1_mod(const PointGroup& g, std::int64_t q);

std::int64_t h2_default_modulus(const PointGroup& g); // |G|, or 4 when |G| = 2

// H^2(G, M) = Z^1(G, M/qM) / (Z^1(G, M) + B^1(G, M/qM)); representatives are
// 1-cocycles mod q.
CohomologyGroup h2_lattice(const PointGroup& g, std::int64_t q);
CohomologyGroup h2_lattice(const PointGroup& g);

// H^2(G, M/qM) through normalized bar cochains (degree-2 representatives).
CohomologyGroup h2_finite_coeffs(const PointGroup& g, std::int64_t q,
                                 std::int64_t budget = Caps{}.bar_budget);

// |H^1(G, M)| over the lattice itself (Z^1(G,M)/B^1(G,M)).
Int h1_lattice_order(const PointGroup& g);

// The coinduced-quotient module C/M with C = Maps(G, M); its cohomology is
// that of M shifted one degree up.
GAction dimension_shift_action(const PointGroup& g);

// |H^3(G, M)|, computed as |H^2(G, M1)| on the shifted module.
Int h3_lattice_order(const PointGroup& g);

// |H^2(G, M/qM)| for q = |G| (or 4 when small), via the exactness of
// 0 -> H^2(G,M) -> H^2(G,M/qM) -> H^3(G,M) -> 0 when q kills both sides.
Int h2_finite_size(const PointGroup& g);

std::int64_t exponent_modulus(const CohomologyGroup& h); // exponent, with 2 -> 4

// Action of a normalizing phi on a degree-1 cocycle given by generator values
// mod e: (phi . zeta)(g) = phi( zeta~(phi^-1 g phi) ).
class CocycleActionContext {
public:
    CocycleActionContext(const PointGroup& g, std::int64_t e);

    const PointGroup& group() const { return g_; }
    std::int64_t modulus() const { return e_; }

    bool normalizes(const ModMatrix& phi) const;
    int element_index(const ModMatrix& m) const; // -1 when no element reduces to m
    std::vector<std::int64_t> act(const ModMatrix& phi,
                                  const std::vector<std::int64_t>& zeta) const;

    // zeta~ evaluated at element index i via its stored word
    std::vector<std::int64_t> evaluate(const std::vector<std::int64_t>& zeta, int index) const;

private:
    const PointGroup& g_;
    std::int64_t e_;
    std::vector<ModMatrix> elements_mod_;
    std::vector<ModMatrix> gens_mod_;
    std::map<std::string, int> index_;
};

std::vector<std::int64_t> cocycle_action(const ModMatrix& phi,
                                         const std::vector<std::int64_t>& zeta,
                                         const PointGroup& g);

} // namespace procryst
