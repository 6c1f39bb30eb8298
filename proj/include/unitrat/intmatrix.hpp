#ifndef UNITRAT_INTMATRIX_HPP
#define UNITRAT_INTMATRIX_HPP

#include <optional>

#include "unitrat/basics.hpp"

namespace unitrat {

/// Dense matrix of arbitrary-precision integers, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Int(0)) {}
    IntMatrix(size_t rows, size_t cols, std::vector<Int> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != rows * cols) throw std::invalid_argument("entry count mismatch");
    }

    static IntMatrix identity(size_t n) {
        IntMatrix m(n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    static IntMatrix from_rows(const std::vector<Vec>& rows, size_t cols) {
        IntMatrix m(rows.size(), cols);
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
        return m;
    }
    static IntMatrix from_cols(const std::vector<Vec>& cols, size_t rows) {
        IntMatrix m(rows, cols.size());
        for (size_t j = 0; j < cols.size(); ++j)
            for (size_t i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    Int& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const Int& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    IntMatrix transposed() const {
        IntMatrix t(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    std::vector<Int> mul_vec(const std::vector<Int>& x) const;

private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

struct HnfResult {
    IntMatrix h;                    // row Hermite normal form, U*A = H
    IntMatrix u;                    // unimodular transform
    std::vector<std::vector<Int>> kernel; // basis of { x : A x = 0 } over Z
};

/// Row Hermite normal form with unimodular transform and integer kernel.
/// Pivots are positive, entries above a pivot are reduced into [0, pivot).
HnfResult hnf(const IntMatrix& a);

/// Rank over Q.
size_t rank(const IntMatrix& a);

/// One integer solution of A x = b, if any.
std::optional<std::vector<Int>> solve_integer(const IntMatrix& a, const std::vector<Int>& b);

/// Unique rational solution of A x = b when the columns of A are linearly
/// independent; nullopt when the system is inconsistent.
std::optional<std::vector<Rat>> solve_rational_unique(const IntMatrix& a,
                                                      const std::vector<Rat>& b);

/// Does A x = b admit any rational solution?
bool solvable_rational(const IntMatrix& a, const std::vector<Rat>& b);

} // namespace unitrat

#endif
