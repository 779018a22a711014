#pragma once

#include "procryst/int_matrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace procryst {

// Matrix over Z/mZ.  Entries are kept reduced into [0, m); the modulus
// travels with the value and mixed-modulus arithmetic is rejected.
class ModMatrix {
public:
    ModMatrix() = default;
    ModMatrix(int rows, int cols, std::int64_t modulus);

    static ModMatrix reduce(const IntMatrix& m, std::int64_t modulus);
    static ModMatrix identity(int n, std::int64_t modulus);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::int64_t modulus() const { return modulus_; }

    std::int64_t& at(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
    std::int64_t at(int i, int j) const { return e_[static_cast<std::size_t>(i) * cols_ + j]; }

    ModMatrix operator*(const ModMatrix& o) const;
    ModMatrix operator+(const ModMatrix& o) const;
    ModMatrix operator-(const ModMatrix& o) const;

    std::int64_t det_mod() const;   // cofactor expansion; matrices here are small
    bool invertible() const;        // det a unit mod m
    ModMatrix inverse() const;      // adjugate / det

    std::vector<std::int64_t> mul_vec(const std::vector<std::int64_t>& v) const;

    IntMatrix lift() const; // entries as integers in [0, m)

    bool is_identity() const;
    bool operator==(const ModMatrix& o) const;
    bool operator!=(const ModMatrix& o) const { return !(*this == o); }
    bool operator<(const ModMatrix& o) const;

    // Compact byte key (entries only; caller fixes modulus and shape).
    std::string key() const;

    std::string str() const;

private:
    int rows_ = 0, cols_ = 0;
    std::int64_t modulus_ = 0;
    std::vector<std::int64_t> e_;
};

std::int64_t mod_reduce(const Int& v, std::int64_t m);
std::int64_t mod_inverse(std::int64_t a, std::int64_t m); // throws if not a unit

// Solution set of M x = b (mod m), described as one particular solution plus
// kernel generators.  Every solution is particular + sum c_i * kernel[i] with
// c_i in [0, order[i]), each choice giving a distinct solution vector.
struct ModSolveResult {
    bool solvable = false;
    std::int64_t modulus = 0;
    std::vector<std::int64_t> particular;
    std::vector<std::vector<std::int64_t>> kernel;
    std::vector<std::int64_t> kernel_orders;

    Int solution_count() const;
};

ModSolveResult solve_mod(const IntMatrix& m, const std::vector<Int>& b, std::int64_t modulus);

// Entrywise Chinese remainder combination; moduli must be pairwise coprime.
ModMatrix crt_combine(const std::vector<ModMatrix>& parts);

std::vector<std::int64_t> prime_factors(std::int64_t n);
std::vector<std::int64_t> prime_factors_int(const Int& n);

} // namespace procryst
