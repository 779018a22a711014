#include "procryst/mod.hpp"

#include "procryst/snf.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace procryst {

std::int64_t mod_reduce(const Int& v, std::int64_t m) {
    Int r = v % m;
    if (r < 0) r += m;
    return static_cast<std::int64_t>(r);
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    std::int64_t t = 0, newt = 1, r = m, newr = ((a % m) + m) % m;
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::int64_t tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1) throw std::invalid_argument("mod_inverse: not a unit");
    return ((t % m) + m) % m;
}

ModMatrix::ModMatrix(int rows, int cols, std::int64_t modulus)
    : rows_(rows), cols_(cols), modulus_(modulus), e_(static_cast<std::size_t>(rows) * cols) {
    if (modulus < 2) throw std::invalid_argument("ModMatrix: modulus must be >= 2");
}

ModMatrix ModMatrix::reduce(const IntMatrix& m, std::int64_t modulus) {
    ModMatrix r(m.rows(), m.cols(), modulus);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = mod_reduce(m.at(i, j), modulus);
    return r;
}

ModMatrix ModMatrix::identity(int n, std::int64_t modulus) {
    ModMatrix r(n, n, modulus);
    for (int i = 0; i < n; ++i) r.at(i, i) = 1 % modulus;
    return r;
}

ModMatrix ModMatrix::operator*(const ModMatrix& o) const {
    if (modulus_ != o.modulus_) throw std::invalid_argument("ModMatrix: mixed moduli");
    if (cols_ != o.rows_) throw std::invalid_argument("ModMatrix: shape mismatch");
    ModMatrix r(rows_, o.cols_, modulus_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            std::int64_t a = at(i, k);
            if (!a) continue;
            for (int j = 0; j < o.cols_; ++j)
                r.at(i, j) = (r.at(i, j) + a * o.at(k, j)) % modulus_;
        }
    return r;
}

ModMatrix ModMatrix::operator+(const ModMatrix& o) const {
    if (modulus_ != o.modulus_) throw std::invalid_argument("ModMatrix: mixed moduli");
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("ModMatrix: shape mismatch");
    ModMatrix r(rows_, cols_, modulus_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = (e_[i] + o.e_[i]) % modulus_;
    return r;
}

ModMatrix ModMatrix::operator-(const ModMatrix& o) const {
    if (modulus_ != o.modulus_) throw std::invalid_argument("ModMatrix: mixed moduli");
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("ModMatrix: shape mismatch");
    ModMatrix r(rows_, cols_, modulus_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = ((e_[i] - o.e_[i]) % modulus_ + modulus_) % modulus_;
    return r;
}

namespace {
std::int64_t det_mod_rec(const ModMatrix& m, std::vector<int>& cols, int row) {
    if (row == m.rows()) return 1 % m.modulus();
    std::int64_t acc = 0;
    int sign = 1;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        int j = cols[k];
        std::int64_t a = m.at(row, j);
        if (a) {
            cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(k));
            std::int64_t sub = det_mod_rec(m, cols, row + 1);
            cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(k), j);
            std::int64_t term = a * sub % m.modulus();
            if (sign < 0) term = (m.modulus() - term) % m.modulus();
            acc = (acc + term) % m.modulus();
        }
        sign = -sign;
    }
    return acc;
}
} // namespace

std::int64_t ModMatrix::det_mod() const {
    if (rows_ != cols_) throw std::invalid_argument("ModMatrix::det_mod: not square");
    std::vector<int> cols(static_cast<std::size_t>(cols_));
    std::iota(cols.begin(), cols.end(), 0);
    return det_mod_rec(*this, cols, 0);
}

bool ModMatrix::invertible() const {
    return std::gcd(det_mod(), modulus_) == 1;
}

ModMatrix ModMatrix::inverse() const {
    std::int64_t d = det_mod();
    std::int64_t dinv = mod_inverse(d, modulus_);
    int n = rows_;
    ModMatrix inv(n, n, modulus_);
    std::vector<int> cols;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // cofactor C_{i,j} placed at (j,i)
            ModMatrix minor(n - 1 > 0 ? n - 1 : 1, n - 1 > 0 ? n - 1 : 1, modulus_);
            if (n == 1) {
                inv.at(0, 0) = dinv;
                return inv;
            }
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor.at(rr, cc) = at(r, c);
                    ++cc;
                }
                ++rr;
            }
            std::int64_t cof = minor.det_mod();
            if ((i + j) % 2) cof = (modulus_ - cof) % modulus_;
            inv.at(j, i) = cof * dinv % modulus_;
        }
    return inv;
}

std::vector<std::int64_t> ModMatrix::mul_vec(const std::vector<std::int64_t>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("ModMatrix: vector length mismatch");
    std::vector<std::int64_t> r(static_cast<std::size_t>(rows_), 0);
    for (int i = 0; i < rows_; ++i) {
        std::int64_t s = 0;
        for (int j = 0; j < cols_; ++j) s = (s + at(i, j) * v[j]) % modulus_;
        r[i] = s;
    }
    return r;
}

IntMatrix ModMatrix::lift() const {
    IntMatrix m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j);
    return m;
}

bool ModMatrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (at(i, j) != (i == j ? 1 % modulus_ : 0)) return false;
    return true;
}

bool ModMatrix::operator==(const ModMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && modulus_ == o.modulus_ && e_ == o.e_;
}

bool ModMatrix::operator<(const ModMatrix& o) const {
    if (modulus_ != o.modulus_) return modulus_ < o.modulus_;
    if (rows_ != o.rows_) return rows_ < o.rows_;
    if (cols_ != o.cols_) return cols_ < o.cols_;
    return e_ < o.e_;
}

std::string ModMatrix::key() const {
    std::string k;
    if (modulus_ <= 0xff) {
        k.reserve(e_.size());
        for (std::int64_t v : e_) k.push_back(static_cast<char>(v));
    } else {
        k.reserve(e_.size() * 4);
        for (std::int64_t v : e_)
            for (int b = 0; b < 4; ++b) k.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
    }
    return k;
}

std::string ModMatrix::str() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        if (i) os << " / ";
        for (int j = 0; j < cols_; ++j) {
            if (j) os << ' ';
            os << at(i, j);
        }
    }
    os << " (mod " << modulus_ << ")";
    return os.str();
}

Int ModSolveResult::solution_count() const {
    if (!solvable) return 0;
    Int n = 1;
    for (std::int64_t o : kernel_orders) n *= o;
    return n;
}

ModSolveResult solve_mod(const IntMatrix& m, const std::vector<Int>& b, std::int64_t modulus) {
    if (modulus < 2) throw std::invalid_argument("solve_mod: modulus must be >= 2");
    if (static_cast<int>(b.size()) != m.rows())
        throw std::invalid_argument("solve_mod: vector length mismatch");
    bool homogeneous = std::all_of(b.begin(), b.end(), [](const Int& v) { return v == 0; });
    SnfResult f = snf(m, /*track_p=*/!homogeneous);
    std::vector<Int> cvec = homogeneous ? std::vector<Int>(static_cast<std::size_t>(m.rows()), 0)
                                        : f.Pinv.mul_vec(b);

    ModSolveResult out;
    out.modulus = modulus;
    std::vector<std::int64_t> y(static_cast<std::size_t>(m.cols()), 0);
    std::vector<std::vector<std::int64_t>> ykernel;
    std::vector<std::int64_t> orders;

    for (int i = 0; i < m.rows(); ++i) {
        std::int64_t ci = mod_reduce(cvec[i], modulus);
        if (i < f.rank) {
            std::int64_t di = mod_reduce(f.S.at(i, i), modulus);
            std::int64_t g = std::gcd(di == 0 ? modulus : di, modulus);
            // d_i y_i = c_i (mod modulus) solvable iff gcd | c_i
            if (ci % g != 0) return out;
            if (i < m.cols()) {
                std::int64_t mg = modulus / g;
                if (mg > 1) {
                    std::int64_t inv = mod_inverse((di / g) % mg, mg);
                    y[i] = (ci / g) % mg * inv % mg;
                } else {
                    y[i] = 0;
                }
                if (g > 1) {
                    std::vector<std::int64_t> k(static_cast<std::size_t>(m.cols()), 0);
                    k[i] = mg % modulus;
                    ykernel.push_back(std::move(k));
                    orders.push_back(g);
                }
            }
        } else if (ci != 0) {
            return out;
        }
    }
    for (int j = f.rank; j < m.cols(); ++j) {
        std::vector<std::int64_t> k(static_cast<std::size_t>(m.cols()), 0);
        k[j] = 1;
        ykernel.push_back(std::move(k));
        orders.push_back(modulus);
    }

    ModMatrix qinv = ModMatrix::reduce(f.Qinv, modulus);
    out.solvable = true;
    out.particular = qinv.mul_vec(y);
    for (const auto& k : ykernel) out.kernel.push_back(qinv.mul_vec(k));
    out.kernel_orders = std::move(orders);
    return out;
}

ModMatrix crt_combine(const std::vector<ModMatrix>& parts) {
    if (parts.empty()) throw std::invalid_argument("crt_combine: no inputs");
    const ModMatrix& first = parts[0];
    std::int64_t prod = 1;
    for (const ModMatrix& p : parts) {
        if (p.rows() != first.rows() || p.cols() != first.cols())
            throw std::invalid_argument("crt_combine: shape mismatch");
        for (const ModMatrix& q : parts) {
            if (&p != &q && std::gcd(p.modulus(), q.modulus()) != 1)
                throw std::invalid_argument("crt_combine: moduli not pairwise coprime");
        }
        if (p.modulus() > (std::int64_t(1) << 31) / prod)
            throw std::invalid_argument("crt_combine: combined modulus too large");
        prod *= p.modulus();
    }
    ModMatrix out(first.rows(), first.cols(), prod);
    for (const ModMatrix& p : parts) {
        std::int64_t m = p.modulus();
        std::int64_t rest = prod / m;
        std::int64_t coef = rest * mod_inverse(rest % m, m) % prod;
        for (int i = 0; i < out.rows(); ++i)
            for (int j = 0; j < out.cols(); ++j)
                out.at(i, j) = (out.at(i, j) + coef * p.at(i, j)) % prod;
    }
    return out;
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> ps;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

std::vector<std::int64_t> prime_factors_int(const Int& n) {
    std::vector<std::int64_t> ps;
    Int rest = n < 0 ? Int(-n) : n;
    for (std::int64_t p = 2; Int(p) * p <= rest; ++p) {
        if (rest % p == 0) {
            ps.push_back(p);
            while (rest % p == 0) rest /= p;
        }
    }
    if (rest > 1) {
        if (rest > std::numeric_limits<std::int64_t>::max())
            throw std::overflow_error("prime_factors_int: prime factor exceeds 64 bits");
        ps.push_back(rest.convert_to<std::int64_t>());
    }
    return ps;
}

} // namespace procryst
