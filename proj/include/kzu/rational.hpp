#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kzu {

using Rational = mpq_class;
using RatVector = std::vector<Rational>;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

/// p/q in canonical form (mpq_class(p, q) alone is not canonicalized).
inline Rational ratio(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Dense row-major matrix over exact rationals.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RatMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool is_zero() const;
    RatMatrix transpose() const;

    RatMatrix operator+(const RatMatrix& o) const;
    RatMatrix operator-(const RatMatrix& o) const;
    RatMatrix operator*(const RatMatrix& o) const;
    RatMatrix operator*(const Rational& s) const;
    RatVector operator*(const RatVector& v) const;
    RatMatrix& operator+=(const RatMatrix& o);
    bool operator==(const RatMatrix& o) const;
    bool operator!=(const RatMatrix& o) const { return !(*this == o); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

RatMatrix commutator(const RatMatrix& a, const RatMatrix& b);

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& m);

std::size_t rank(RatMatrix m);

/// Basis of {x : m x = 0}, one vector per free column, in column order.
std::vector<RatVector> nullspace(const RatMatrix& m);

/// Inverse of a square nonsingular matrix; throws on singular input.
RatMatrix inverse(const RatMatrix& m);

/// Coefficients x with sum_j x_j basis[j] == v, or nullopt when v is outside the span.
/// Basis vectors must be linearly independent.
std::optional<RatVector> solve_in_span(const std::vector<RatVector>& basis, const RatVector& v);

/// Incremental independence test used by greedy basis selection.
class SpanBuilder {
public:
    explicit SpanBuilder(std::size_t dim) : dim_(dim) {}

    /// Adds v if independent of what is already held; returns true if added.
    bool add(const RatVector& v);
    std::size_t size() const { return rows_.size(); }

private:
    RatVector reduce(RatVector v) const;

    std::size_t dim_;
    std::vector<RatVector> rows_;
    std::vector<std::size_t> pivots_;
};

Rational dot(const RatVector& a, const RatVector& b);

}  // namespace kzu
