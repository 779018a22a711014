#include "procryst/snf.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>

namespace procryst {

namespace {

using boost::multiprecision::abs;

// Elementary operations on S, mirrored on P/Pinv (rows) and Q/Qinv (columns)
// so that P * S * Q stays equal to the input matrix throughout.
struct Reducer {
    IntMatrix S, P, Pinv, Q, Qinv;
    bool track_p, track_q;

    Reducer(const IntMatrix& m, bool tp, bool tq) : S(m), track_p(tp), track_q(tq) {
        if (track_p) {
            P = IntMatrix::identity(m.rows());
            Pinv = IntMatrix::identity(m.rows());
        }
        if (track_q) {
            Q = IntMatrix::identity(m.cols());
            Qinv = IntMatrix::identity(m.cols());
        }
    }

    void swap_rows(int a, int b) {
        if (a == b) return;
        for (int j = 0; j < S.cols(); ++j) std::swap(S.at(a, j), S.at(b, j));
        if (!track_p) return;
        for (int i = 0; i < P.rows(); ++i) std::swap(P.at(i, a), P.at(i, b));
        for (int j = 0; j < Pinv.cols(); ++j) std::swap(Pinv.at(a, j), Pinv.at(b, j));
    }

    void swap_cols(int a, int b) {
        if (a == b) return;
        for (int i = 0; i < S.rows(); ++i) std::swap(S.at(i, a), S.at(i, b));
        if (!track_q) return;
        for (int j = 0; j < Q.cols(); ++j) std::swap(Q.at(a, j), Q.at(b, j));
        for (int i = 0; i < Qinv.rows(); ++i) std::swap(Qinv.at(i, a), Qinv.at(i, b));
    }

    // row b += c * row a  (so P gets col a -= c * col b, Pinv row b += c * row a)
    void add_row(int b, int a, const Int& c) {
        if (c == 0) return;
        for (int j = 0; j < S.cols(); ++j) S.at(b, j) += c * S.at(a, j);
        if (!track_p) return;
        for (int i = 0; i < P.rows(); ++i) P.at(i, a) -= c * P.at(i, b);
        for (int j = 0; j < Pinv.cols(); ++j) Pinv.at(b, j) += c * Pinv.at(a, j);
    }

    // col b += c * col a  (so Q gets row a -= c * row b, Qinv col b += c * col a)
    void add_col(int b, int a, const Int& c) {
        if (c == 0) return;
        for (int i = 0; i < S.rows(); ++i) S.at(i, b) += c * S.at(i, a);
        if (!track_q) return;
        for (int j = 0; j < Q.cols(); ++j) Q.at(a, j) -= c * Q.at(b, j);
        for (int i = 0; i < Qinv.rows(); ++i) Qinv.at(i, b) += c * Qinv.at(i, a);
    }

    void negate_row(int a) {
        for (int j = 0; j < S.cols(); ++j) S.at(a, j) = -S.at(a, j);
        if (!track_p) return;
        for (int i = 0; i < P.rows(); ++i) P.at(i, a) = -P.at(i, a);
        for (int j = 0; j < Pinv.cols(); ++j) Pinv.at(a, j) = -Pinv.at(a, j);
    }
};

} // namespace

SnfResult snf(const IntMatrix& m, bool track_p, bool track_q) {
    Reducer r(m, track_p, track_q);
    const int n = m.rows(), c = m.cols();
    const int lim = std::min(n, c);

    int t = 0;
    while (t < lim) {
        // pick smallest-|entry| pivot in the trailing submatrix
        int pi = -1, pj = -1;
        Int best = 0;
        for (int i = t; i < n; ++i)
            for (int j = t; j < c; ++j) {
                const Int& v = r.S.at(i, j);
                if (v == 0) continue;
                Int a = abs(v);
                if (pi < 0 || a < best) {
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break; // trailing submatrix is zero
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            // clear column t under the pivot by Euclidean steps
            for (int i = t + 1; i < n; ++i) {
                while (r.S.at(i, t) != 0) {
                    Int q = r.S.at(i, t) / r.S.at(t, t);
                    r.add_row(i, t, -q);
                    if (r.S.at(i, t) != 0) {
                        r.swap_rows(t, i); // remainder becomes the smaller pivot
                    }
                }
            }
            // clear row t right of the pivot
            for (int j = t + 1; j < c; ++j) {
                while (r.S.at(t, j) != 0) {
                    Int q = r.S.at(t, j) / r.S.at(t, t);
                    r.add_col(j, t, -q);
                    if (r.S.at(t, j) != 0) {
                        r.swap_cols(t, j);
                        clean = false; // column t may be dirty again
                    }
                }
            }
            if (!clean) continue;
            for (int i = t + 1; i < n; ++i)
                if (r.S.at(i, t) != 0) { clean = false; break; }
        }

        // pivot must divide everything in the trailing submatrix; if not,
        // fold the offending row in and redo this pivot
        bool divides = true;
        for (int i = t + 1; i < n && divides; ++i)
            for (int j = t + 1; j < c; ++j)
                if (r.S.at(i, j) % r.S.at(t, t) != 0) {
                    r.add_row(t, i, 1);
                    divides = false;
                    break;
                }
        if (divides) ++t;
    }

    for (int i = 0; i < lim; ++i)
        if (r.S.at(i, i) < 0) r.negate_row(i);

    SnfResult out;
    out.P = std::move(r.P);
    out.S = std::move(r.S);
    out.Q = std::move(r.Q);
    out.Pinv = std::move(r.Pinv);
    out.Qinv = std::move(r.Qinv);
    out.rank = 0;
    for (int i = 0; i < lim; ++i)
        if (out.S.at(i, i) != 0) ++out.rank;
    return out;
}

std::vector<Int> snf_diagonal(const IntMatrix& m) {
    return snf(m, /*track_p=*/false, /*track_q=*/false).diagonal();
}

std::vector<Int> SnfResult::diagonal() const {
    std::vector<Int> d;
    for (int i = 0; i < rank; ++i) d.push_back(S.at(i, i));
    return d;
}

Int pi_part(const Int& n, const std::vector<std::int64_t>& pi) {
    if (n < 1) throw std::invalid_argument("pi_part: n must be positive");
    Int rest = n, part = 1;
    for (std::int64_t p : pi) {
        while (rest % p == 0) {
            rest /= p;
            part *= p;
        }
    }
    return part;
}

IntMatrix integral_image_basis(const IntMatrix& m, const std::vector<std::int64_t>& pi) {
    SnfResult f = snf(m);
    IntMatrix sbar = f.S;
    for (int i = 0; i < f.rank; ++i) sbar.at(i, i) = pi_part(sbar.at(i, i), pi);
    return f.P * sbar;
}

MembershipWitness integral_membership(const IntMatrix& m, const std::vector<Int>& x,
                                      const std::vector<std::int64_t>& pi) {
    if (static_cast<int>(x.size()) != m.rows())
        throw std::invalid_argument("integral_membership: vector length mismatch");
    SnfResult f = snf(m);
    std::vector<Int> cvec = f.Pinv.mul_vec(x);
    MembershipWitness w;
    w.preimage.assign(m.cols(), 0);
    for (int i = 0; i < m.rows(); ++i) {
        if (i < f.rank) {
            Int dbar = pi_part(f.S.at(i, i), pi);
            if (cvec[i] % dbar != 0) return MembershipWitness{};
            w.preimage[i] = cvec[i] / dbar;
        } else if (cvec[i] != 0) {
            return MembershipWitness{};
        }
    }
    w.member = true;
    return w;
}

IntMatrix integer_kernel_basis(const IntMatrix& m) {
    SnfResult f = snf(m, /*track_p=*/false);
    int dim = m.cols();
    int k = dim - f.rank;
    IntMatrix basis(dim, k);
    // kernel = Qinv * span(e_j : j >= rank)
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < dim; ++i) basis.at(i, j) = f.Qinv.at(i, f.rank + j);
    return basis;
}

std::optional<std::vector<Int>> solve_integer(const IntMatrix& m, const std::vector<Int>& b) {
    if (static_cast<int>(b.size()) != m.rows())
        throw std::invalid_argument("solve_integer: vector length mismatch");
    SnfResult f = snf(m);
    std::vector<Int> cvec = f.Pinv.mul_vec(b);
    std::vector<Int> y(m.cols(), 0);
    for (int i = 0; i < m.rows(); ++i) {
        if (i < f.rank) {
            if (cvec[i] % f.S.at(i, i) != 0) return std::nullopt;
            y[i] = cvec[i] / f.S.at(i, i);
        } else if (cvec[i] != 0) {
            return std::nullopt;
        }
    }
    return f.Qinv.mul_vec(y);
}

} // namespace procryst
