#pragma once

#include "kzu/rational.hpp"

#include <map>
#include <utility>
#include <vector>

namespace kzu {

using SparseEntry = std::pair<int, Rational>;
using SparseColumn = std::vector<SparseEntry>;  // sorted by row

/// Exact sparse linear operator stored by columns.
class SparseOp {
public:
    SparseOp() = default;
    SparseOp(int rows, int cols) : rows_(rows), cols_(cols), cols_data_(cols) {}

    static SparseOp identity(int n);
    static SparseOp from_dense(const RatMatrix& m);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const SparseColumn& column(int c) const { return cols_data_[c]; }

    void add(int r, int c, const Rational& v);
    void set_column(int c, SparseColumn col);

    bool is_zero() const;
    bool is_scalar(const Rational& s) const;
    RatMatrix dense() const;
    RatVector apply(const RatVector& v) const;

    SparseOp operator*(const SparseOp& o) const;
    SparseOp operator+(const SparseOp& o) const;
    SparseOp operator-(const SparseOp& o) const;
    SparseOp operator*(const Rational& s) const;
    bool operator==(const SparseOp& o) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<SparseColumn> cols_data_;
};

SparseOp commutator(const SparseOp& a, const SparseOp& b);

/// Returns s with a == s * b if such a scalar exists (b nonzero).
bool proportional(const SparseOp& a, const SparseOp& b, Rational& s);

/// Exact sparse reduced row echelon form, built one row at a time.
class SparseEchelon {
public:
    explicit SparseEchelon(int cols) : cols_(cols) {}

    /// Reduces the row against the pivots held; keeps it if nonzero. Returns true if kept.
    bool add(SparseColumn row);
    int rank() const { return static_cast<int>(rows_.size()); }
    /// Basis of the null space, one vector per free column in increasing column order.
    std::vector<RatVector> nullspace() const;

private:
    int cols_;
    std::map<int, SparseColumn> rows_;  // keyed by pivot column, pivot entry 1
};

}  // namespace kzu
