#pragma once

// Test-only oracles, kept independent of the library code paths they check.

#include "procryst/int_matrix.hpp"
#include "procryst/point_group.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace procryst::oracles {

// determinantal divisors: D_k = gcd of all k x k minors; the SNF diagonal is
// D_k / D_{k-1}
inline Int minor_det(const IntMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    IntMatrix sub(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            sub.at(static_cast<int>(i), static_cast<int>(j)) = m.at(rows[i], cols[j]);
    return sub.det();
}

inline void subsets(int n, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(static_cast<std::size_t>(k));
    auto rec = [&](auto&& self, int start, int depth) -> void {
        if (depth == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur[static_cast<std::size_t>(depth)] = i;
            self(self, i + 1, depth + 1);
        }
    };
    rec(rec, 0, 0);
}

inline std::vector<Int> snf_diagonal_by_minor_gcds(const IntMatrix& m) {
    int lim = std::min(m.rows(), m.cols());
    std::vector<Int> divisors; // D_1, D_2, ...
    for (int k = 1; k <= lim; ++k) {
        std::vector<std::vector<int>> rsets, csets;
        subsets(m.rows(), k, rsets);
        subsets(m.cols(), k, csets);
        Int g = 0;
        for (const auto& r : rsets)
            for (const auto& c : csets) g = boost::multiprecision::gcd(g, minor_det(m, r, c));
        if (g == 0) break;
        divisors.push_back(g);
    }
    std::vector<Int> diag;
    Int prev = 1;
    for (const Int& d : divisors) {
        diag.push_back(d / prev);
        prev = d;
    }
    return diag;
}

// all solutions of M x = b (mod m) by exhaustive enumeration
inline std::vector<std::vector<std::int64_t>> brute_solve_mod(const IntMatrix& m,
                                                              const std::vector<Int>& b,
                                                              std::int64_t modulus) {
    int n = m.cols();
    std::vector<std::vector<std::int64_t>> sols;
    std::vector<std::int64_t> x(static_cast<std::size_t>(n), 0);
    while (true) {
        bool ok = true;
        for (int i = 0; i < m.rows() && ok; ++i) {
            Int acc = 0;
            for (int j = 0; j < n; ++j) acc += m.at(i, j) * x[static_cast<std::size_t>(j)];
            acc -= b[static_cast<std::size_t>(i)];
            if (acc % modulus != 0) ok = false;
        }
        if (ok) sols.push_back(x);
        int pos = 0;
        while (pos < n) {
            if (++x[static_cast<std::size_t>(pos)] < modulus) break;
            x[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == n) break;
    }
    return sols;
}

// p-adic valuation
inline int valuation(Int v, std::int64_t p) {
    if (v == 0) return 1 << 20;
    int k = 0;
    while (v % p == 0) {
        v /= p;
        ++k;
    }
    return k;
}

inline IntMatrix random_matrix(std::mt19937_64& rng, int rows, int cols, int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    IntMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = dist(rng);
    return m;
}

// H^{2i}(C_n, A) = A^sigma / N A and H^{2i+1}(C_n, A) = ker N / (sigma-1) A
// for the cyclic group generated by sigma acting on the finite module
// A = (Z/q)^d; counts by exhaustive enumeration.
struct CyclicCohomologyOracle {
    std::int64_t even_order; // |A^sigma| / |N A|
    std::int64_t odd_order;  // |ker N| / |(sigma-1) A|
};

inline CyclicCohomologyOracle cyclic_cohomology_mod(const IntMatrix& sigma, int order,
                                                    std::int64_t q) {
    int d = sigma.rows();
    IntMatrix norm(d, d);
    IntMatrix power = IntMatrix::identity(d);
    for (int i = 0; i < order; ++i) {
        norm = norm + power;
        power = power * sigma;
    }
    IntMatrix sm1 = sigma - IntMatrix::identity(d);

    std::int64_t fixed = 0, kerN = 0;
    std::set<std::vector<std::int64_t>> imN, imSm1;
    std::vector<std::int64_t> v(static_cast<std::size_t>(d), 0);
    auto apply = [&](const IntMatrix& m) {
        std::vector<std::int64_t> out(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            Int acc = 0;
            for (int j = 0; j < d; ++j) acc += m.at(i, j) * v[static_cast<std::size_t>(j)];
            Int r = acc % q;
            if (r < 0) r += q;
            out[static_cast<std::size_t>(i)] = r.convert_to<std::int64_t>();
        }
        return out;
    };
    while (true) {
        std::vector<std::int64_t> sv = apply(sigma);
        if (sv == v) ++fixed;
        std::vector<std::int64_t> nv = apply(norm);
        if (std::all_of(nv.begin(), nv.end(), [](std::int64_t x) { return x == 0; })) ++kerN;
        imN.insert(nv);
        imSm1.insert(apply(sm1));
        int pos = 0;
        while (pos < d) {
            if (++v[static_cast<std::size_t>(pos)] < q) break;
            v[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == d) break;
    }
    return {fixed / static_cast<std::int64_t>(imN.size()),
            kerN / static_cast<std::int64_t>(imSm1.size())};
}

// H^2(C_n, Z^d) = M^G / N M for the integral lattice, by 2x2-scale integer
// reasoning: rank of fixed lattice and index of the norm image inside it.
// Implemented for d <= 2 with hand-rolled integer kernels, independent of the
// library SNF.
inline std::optional<std::int64_t> cyclic_h2_lattice_small(const IntMatrix& sigma, int order) {
    int d = sigma.rows();
    if (d > 2) return std::nullopt;
    IntMatrix norm(d, d);
    IntMatrix power = IntMatrix::identity(d);
    for (int i = 0; i < order; ++i) {
        norm = norm + power;
        power = power * sigma;
    }
    IntMatrix sm1 = sigma - IntMatrix::identity(d);
    // fixed lattice = ker(sigma - 1): for d <= 2 solve directly
    std::vector<std::vector<Int>> kernel;
    if (d == 1) {
        if (sm1.at(0, 0) == 0) kernel.push_back({1});
    } else {
        // rows r1, r2; kernel of the 2x2 integer matrix
        Int a = sm1.at(0, 0), b = sm1.at(0, 1), c = sm1.at(1, 0), e = sm1.at(1, 1);
        Int det = a * e - b * c;
        if (det != 0) {
            // trivial kernel
        } else if (a == 0 && b == 0 && c == 0 && e == 0) {
            kernel.push_back({1, 0});
            kernel.push_back({0, 1});
        } else {
            // rank one: kernel generated by (-b, a) or (-e, c), primitive
            Int x = -b, y = a;
            if (x == 0 && y == 0) {
                x = -e;
                y = c;
            }
            Int g = boost::multiprecision::gcd(x, y);
            kernel.push_back({x / g, y / g});
        }
    }
    // norm image inside the fixed lattice: index by exhaustive small search
    // (entries of norm are bounded by order * max entry)
    if (kernel.empty()) return 1; // M^G = 0 forces H^2 = 0
    // columns of norm lie in M^G; express them in the kernel basis by solving
    // small linear systems over Q and verify integrality
    std::vector<std::vector<Int>> cols;
    for (int j = 0; j < d; ++j) {
        std::vector<Int> col;
        for (int i = 0; i < d; ++i) col.push_back(norm.at(i, j));
        cols.push_back(std::move(col));
    }
    auto coords_in_kernel = [&](const std::vector<Int>& v) -> std::optional<std::vector<Int>> {
        // least squares free: kernel has 1 or 2 generators of length d<=2
        if (kernel.size() == 1) {
            const std::vector<Int>& k0 = kernel[0];
            for (int i = 0; i < d; ++i)
                if (k0[static_cast<std::size_t>(i)] != 0) {
                    Int q = v[static_cast<std::size_t>(i)] / k0[static_cast<std::size_t>(i)];
                    for (int j = 0; j < d; ++j)
                        if (v[static_cast<std::size_t>(j)] != q * k0[static_cast<std::size_t>(j)])
                            return std::nullopt;
                    return std::vector<Int>{q};
                }
            return std::nullopt;
        }
        return std::vector<Int>(v.begin(), v.end()); // kernel is the standard basis
    };
    std::vector<std::vector<Int>> w;
    for (const auto& col : cols) {
        auto c = coords_in_kernel(col);
        if (!c) return std::nullopt; // norm image not inside fixed lattice: not cyclic data
        w.push_back(*c);
    }
    // index = |det| of the lattice spanned by w inside Z^rank (rank 1 or 2)
    if (kernel.size() == 1) {
        Int g = 0;
        for (const auto& c : w) g = boost::multiprecision::gcd(g, c[0]);
        if (g == 0) return std::nullopt; // infinite quotient; not expected
        return g.convert_to<std::int64_t>();
    }
    // rank 2: gcd of 2x2 minors of the w matrix = index factor composition;
    // index = D_2 (product of invariant factors)
    Int d2 = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = i + 1; j < w.size(); ++j)
            d2 = boost::multiprecision::gcd(d2, w[i][0] * w[j][1] - w[i][1] * w[j][0]);
    if (d2 == 0) return std::nullopt;
    return d2.convert_to<std::int64_t>();
}

} // namespace procryst::oracles
