#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace procryst {

using Int = boost::multiprecision::cpp_int;

// Dense integer matrix with arbitrary-precision entries, row-major storage.
// No floating point anywhere in this library.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols) {}

    static IntMatrix identity(int n);
    static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows);
    static IntMatrix from_rows_i64(const std::vector<std::vector<std::int64_t>>& rows);
    static IntMatrix diagonal(const std::vector<Int>& d);
    static IntMatrix column(const std::vector<Int>& v);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& at(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
    const Int& at(int i, int j) const { return e_[static_cast<std::size_t>(i) * cols_ + j]; }

    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix operator+(const IntMatrix& o) const;
    IntMatrix operator-(const IntMatrix& o) const;
    IntMatrix operator-() const;
    IntMatrix transpose() const;
    IntMatrix scaled(const Int& c) const;

    std::vector<Int> mul_vec(const std::vector<Int>& v) const;

    bool operator==(const IntMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_; }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }
    bool operator<(const IntMatrix& o) const; // lexicographic; used as map key

    bool is_zero() const;
    bool is_identity() const;
    bool is_square() const { return rows_ == cols_; }

    // Exact determinant (fraction-free Gaussian elimination).
    Int det() const;

    // Exact inverse of a unimodular matrix (det must be +-1).
    IntMatrix unimodular_inverse() const;

    std::string str() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Int> e_;
};

std::vector<Int> flatten_row_major(const IntMatrix& m);
IntMatrix unflatten_row_major(const std::vector<Int>& v, int rows, int cols);

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);

} // namespace procryst
