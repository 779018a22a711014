#include "procryst/int_matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace procryst {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Int>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    IntMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c)
            throw std::invalid_argument("IntMatrix::from_rows: ragged rows");
        for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::from_rows_i64(const std::vector<std::vector<std::int64_t>>& rows) {
    std::vector<std::vector<Int>> conv(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        conv[i].assign(rows[i].begin(), rows[i].end());
    return from_rows(conv);
}

IntMatrix IntMatrix::diagonal(const std::vector<Int>& d) {
    int n = static_cast<int>(d.size());
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = d[i];
    return m;
}

IntMatrix IntMatrix::column(const std::vector<Int>& v) {
    IntMatrix m(static_cast<int>(v.size()), 1);
    for (int i = 0; i < m.rows(); ++i) m.at(i, 0) = v[i];
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("IntMatrix: shape mismatch in product");
    IntMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Int& a = at(i, k);
            if (a == 0) continue;
            for (int j = 0; j < o.cols_; ++j) r.at(i, j) += a * o.at(k, j);
        }
    return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("IntMatrix: shape mismatch in sum");
    IntMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
    return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("IntMatrix: shape mismatch in difference");
    IntMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
    return r;
}

IntMatrix IntMatrix::operator-() const {
    IntMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = -e_[i];
    return r;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

IntMatrix IntMatrix::scaled(const Int& c) const {
    IntMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] * c;
    return r;
}

std::vector<Int> IntMatrix::mul_vec(const std::vector<Int>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("IntMatrix: vector length mismatch");
    std::vector<Int> r(rows_);
    for (int i = 0; i < rows_; ++i) {
        Int s = 0;
        for (int j = 0; j < cols_; ++j) s += at(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

bool IntMatrix::operator<(const IntMatrix& o) const {
    if (rows_ != o.rows_) return rows_ < o.rows_;
    if (cols_ != o.cols_) return cols_ < o.cols_;
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (e_[i] != o.e_[i]) return e_[i] < o.e_[i];
    return false;
}

bool IntMatrix::is_zero() const {
    for (const Int& v : e_)
        if (v != 0) return false;
    return true;
}

bool IntMatrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

Int IntMatrix::det() const {
    if (rows_ != cols_) throw std::invalid_argument("IntMatrix::det: not square");
    int n = rows_;
    if (n == 0) return 1;
    // Bareiss fraction-free elimination.
    IntMatrix a = *this;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (a.at(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                Int v = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                a.at(i, j) = v / prev; // exact by Bareiss
            }
        prev = a.at(k, k);
    }
    return sign > 0 ? a.at(n - 1, n - 1) : -a.at(n - 1, n - 1);
}

IntMatrix IntMatrix::unimodular_inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("unimodular_inverse: not square");
    int n = rows_;
    Int d = det();
    if (d != 1 && d != -1) throw std::invalid_argument("unimodular_inverse: determinant not +-1");
    // Adjugate: entry (j,i) is the (i,j) cofactor.  Matrices passing through
    // here are small; the SNF keeps its own running inverses instead.
    IntMatrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IntMatrix minor(n - 1, n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor.at(rr, cc) = at(r, c);
                    ++cc;
                }
                ++rr;
            }
            Int cof = minor.det();
            if ((i + j) % 2) cof = -cof;
            inv.at(j, i) = cof;
        }
    if (d == -1) inv = -inv;
    return inv;
}

std::string IntMatrix::str() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        if (i) os << " / ";
        for (int j = 0; j < cols_; ++j) {
            if (j) os << ' ';
            os << at(i, j);
        }
    }
    return os.str();
}

std::vector<Int> flatten_row_major(const IntMatrix& m) {
    std::vector<Int> v;
    v.reserve(static_cast<std::size_t>(m.rows()) * m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) v.push_back(m.at(i, j));
    return v;
}

IntMatrix unflatten_row_major(const std::vector<Int>& v, int rows, int cols) {
    if (static_cast<int>(v.size()) != rows * cols)
        throw std::invalid_argument("unflatten_row_major: size mismatch");
    IntMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = v[static_cast<std::size_t>(i) * cols + j];
    return m;
}

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row mismatch");
    IntMatrix r(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols(); ++j) r.at(i, a.cols() + j) = b.at(i, j);
    }
    return r;
}

} // namespace procryst
