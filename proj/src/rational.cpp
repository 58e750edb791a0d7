#include "kzu/rational.hpp"

#include <utility>

namespace kzu {

Rational parse_rational(const std::string& text) {
    Rational q;
    std::string s = text;
    // accept decimal shorthand such as "0.25"
    if (auto dot_pos = s.find('.'); dot_pos != std::string::npos && s.find('/') == std::string::npos) {
        std::string digits = s.substr(0, dot_pos) + s.substr(dot_pos + 1);
        std::string den = "1" + std::string(s.size() - dot_pos - 1, '0');
        s = digits + "/" + den;
    }
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("not a rational number: '" + text + "'");
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

bool RatMatrix::is_zero() const {
    for (const auto& x : data_)
        if (sgn(x) != 0) return false;
    return true;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

RatMatrix RatMatrix::operator+(const RatMatrix& o) const {
    RatMatrix r = *this;
    r += o;
    return r;
}

RatMatrix& RatMatrix::operator+=(const RatMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

RatMatrix RatMatrix::operator-(const RatMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
    RatMatrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
    return r;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch");
    RatMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(i, k);
            if (sgn(a) == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                if (sgn(o(k, j)) != 0) r(i, j) += a * o(k, j);
        }
    return r;
}

RatMatrix RatMatrix::operator*(const Rational& s) const {
    RatMatrix r = *this;
    for (auto& x : r.data_) x *= s;
    return r;
}

RatVector RatMatrix::operator*(const RatVector& v) const {
    if (cols_ != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
    RatVector r(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k)
            if (sgn(v[k]) != 0 && sgn((*this)(i, k)) != 0) r[i] += (*this)(i, k) * v[k];
    return r;
}

bool RatMatrix::operator==(const RatMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

RatMatrix commutator(const RatMatrix& a, const RatMatrix& b) { return a * b - b * a; }

std::vector<std::size_t> rref(RatMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && sgn(m(p, col)) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(p, c), m(row, c));
        Rational inv = 1 / m(row, col);
        for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || sgn(m(r, col)) == 0) continue;
            Rational f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c)
                if (sgn(m(row, c)) != 0) m(r, c) -= f * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::size_t rank(RatMatrix m) { return rref(m).size(); }

std::vector<RatVector> nullspace(const RatMatrix& m) {
    RatMatrix a = m;
    auto pivots = rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<RatVector> basis;
    for (std::size_t free = 0; free < a.cols(); ++free) {
        if (is_pivot[free]) continue;
        RatVector x(a.cols());
        x[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -a(r, free);
        basis.push_back(std::move(x));
    }
    return basis;
}

RatMatrix inverse(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
    const std::size_t n = m.rows();
    RatMatrix aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
        aug(r, n + r) = 1;
    }
    auto pivots = rref(aug);
    if (pivots.size() < n || pivots[n - 1] != n - 1) throw std::domain_error("singular matrix");
    RatMatrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv(r, c) = aug(r, n + c);
    return inv;
}

std::optional<RatVector> solve_in_span(const std::vector<RatVector>& basis, const RatVector& v) {
    const std::size_t k = basis.size();
    const std::size_t n = v.size();
    RatMatrix aug(n, k + 1);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) aug(i, j) = basis[j][i];
    for (std::size_t i = 0; i < n; ++i) aug(i, k) = v[i];
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == k) return std::nullopt;
    if (pivots.size() != k) throw std::invalid_argument("solve_in_span: dependent basis");
    RatVector x(k);
    for (std::size_t r = 0; r < k; ++r) x[pivots[r]] = aug(r, k);
    return x;
}

RatVector SpanBuilder::reduce(RatVector v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const std::size_t p = pivots_[r];
        if (sgn(v[p]) == 0) continue;
        Rational f = v[p];
        for (std::size_t c = 0; c < dim_; ++c)
            if (sgn(rows_[r][c]) != 0) v[c] -= f * rows_[r][c];
    }
    return v;
}

bool SpanBuilder::add(const RatVector& v) {
    RatVector w = reduce(v);
    std::size_t p = 0;
    while (p < dim_ && sgn(w[p]) == 0) ++p;
    if (p == dim_) return false;
    Rational inv = 1 / w[p];
    for (auto& x : w) x *= inv;
    // keep rows fully reduced against the new pivot
    for (auto& row : rows_) {
        if (sgn(row[p]) == 0) continue;
        Rational f = row[p];
        for (std::size_t c = 0; c < dim_; ++c)
            if (sgn(w[c]) != 0) row[c] -= f * w[c];
    }
    rows_.push_back(std::move(w));
    pivots_.push_back(p);
    return true;
}

Rational dot(const RatVector& a, const RatVector& b) {
    Rational s;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
    return s;
}

}  // namespace kzu
