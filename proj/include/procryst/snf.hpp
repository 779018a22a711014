#pragma once

#include "procryst/int_matrix.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace procryst {

// Smith decomposition M = P * S * Q with P, Q unimodular and S diagonal,
// diagonal entries positive and each dividing the next.  Pinv and Qinv are
// maintained during the reduction so later solves need no matrix inversion.
struct SnfResult {
    IntMatrix P, S, Q;
    IntMatrix Pinv, Qinv;
    int rank = 0;

    std::vector<Int> diagonal() const; // the nonzero d_1 | d_2 | ... | d_r
};

// track_p=false skips P/Pinv bookkeeping (kernel-only use; P, Pinv come back
// empty) — relevant when the system has far more rows than columns.
// track_q=false additionally skips Q/Qinv (diagonal-only use).
SnfResult snf(const IntMatrix& m, bool track_p = true, bool track_q = true);

// Invariant factors only; no transform bookkeeping.
std::vector<Int> snf_diagonal(const IntMatrix& m);

// Largest divisor of n supported on the prime set pi.
Int pi_part(const Int& n, const std::vector<std::int64_t>& pi);

// P * S-bar, whose integer column span is exactly the set of integer points
// of the image of M acting on Z[pi]-vectors (S-bar replaces each diagonal
// entry of S by its pi-part).
IntMatrix integral_image_basis(const IntMatrix& m, const std::vector<std::int64_t>& pi);

struct MembershipWitness {
    bool member = false;
    std::vector<Int> preimage; // y with (P * S-bar) y = x when member
};

MembershipWitness integral_membership(const IntMatrix& m, const std::vector<Int>& x,
                                      const std::vector<std::int64_t>& pi);

// Basis of { v : M v = 0 } over Z (columns of the returned matrix).
IntMatrix integer_kernel_basis(const IntMatrix& m);

// One exact integer solution of M y = b, if any.
std::optional<std::vector<Int>> solve_integer(const IntMatrix& m, const std::vector<Int>& b);

} // namespace procryst
