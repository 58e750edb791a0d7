#include "kzu/sparse.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace kzu {

namespace {

SparseColumn merge(const SparseColumn& a, const SparseColumn& b, int sign) {
    SparseColumn out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, sign > 0 ? b[j].second : Rational(-b[j].second));
            ++j;
        } else {
            Rational v = a[i].second;
            if (sign > 0) v += b[j].second;
            else v -= b[j].second;
            if (sgn(v) != 0) out.emplace_back(a[i].first, v);
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

SparseOp SparseOp::identity(int n) {
    SparseOp m(n, n);
    for (int i = 0; i < n; ++i) m.cols_data_[i].emplace_back(i, Rational(1));
    return m;
}

SparseOp SparseOp::from_dense(const RatMatrix& d) {
    SparseOp m(static_cast<int>(d.rows()), static_cast<int>(d.cols()));
    for (std::size_t c = 0; c < d.cols(); ++c)
        for (std::size_t r = 0; r < d.rows(); ++r)
            if (sgn(d(r, c)) != 0) m.cols_data_[c].emplace_back(static_cast<int>(r), d(r, c));
    return m;
}

void SparseOp::add(int r, int c, const Rational& v) {
    if (sgn(v) == 0) return;
    auto& col = cols_data_.at(c);
    auto it = std::lower_bound(col.begin(), col.end(), r, [](const SparseEntry& e, int row) { return e.first < row; });
    if (it != col.end() && it->first == r) {
        it->second += v;
        if (sgn(it->second) == 0) col.erase(it);
    } else {
        col.insert(it, SparseEntry(r, v));
    }
}

void SparseOp::set_column(int c, SparseColumn col) {
    std::sort(col.begin(), col.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.first < b.first; });
    cols_data_.at(c) = std::move(col);
}

bool SparseOp::is_zero() const {
    for (const auto& c : cols_data_)
        if (!c.empty()) return false;
    return true;
}

bool SparseOp::is_scalar(const Rational& s) const {
    if (rows_ != cols_) return false;
    for (int c = 0; c < cols_; ++c) {
        const auto& col = cols_data_[c];
        if (sgn(s) == 0) {
            if (!col.empty()) return false;
            continue;
        }
        if (col.size() != 1 || col[0].first != c || col[0].second != s) return false;
    }
    return true;
}

RatMatrix SparseOp::dense() const {
    RatMatrix d(rows_, cols_);
    for (int c = 0; c < cols_; ++c)
        for (const auto& [r, v] : cols_data_[c]) d(r, c) = v;
    return d;
}

RatVector SparseOp::apply(const RatVector& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("SparseOp::apply shape mismatch");
    RatVector out(rows_);
    for (int c = 0; c < cols_; ++c) {
        if (sgn(v[c]) == 0) continue;
        for (const auto& [r, x] : cols_data_[c]) out[r] += x * v[c];
    }
    return out;
}

SparseOp SparseOp::operator*(const SparseOp& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("SparseOp product shape mismatch");
    SparseOp out(rows_, o.cols_);
    for (int c = 0; c < o.cols_; ++c) {
        std::map<int, Rational> acc;
        for (const auto& [k, y] : o.cols_data_[c])
            for (const auto& [r, x] : cols_data_[k]) acc[r] += x * y;
        SparseColumn col;
        for (auto& [r, v] : acc)
            if (sgn(v) != 0) col.emplace_back(r, v);
        out.cols_data_[c] = std::move(col);
    }
    return out;
}

SparseOp SparseOp::operator+(const SparseOp& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("SparseOp sum shape mismatch");
    SparseOp out(rows_, cols_);
    for (int c = 0; c < cols_; ++c) out.cols_data_[c] = merge(cols_data_[c], o.cols_data_[c], +1);
    return out;
}

SparseOp SparseOp::operator-(const SparseOp& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("SparseOp difference shape mismatch");
    SparseOp out(rows_, cols_);
    for (int c = 0; c < cols_; ++c) out.cols_data_[c] = merge(cols_data_[c], o.cols_data_[c], -1);
    return out;
}

SparseOp SparseOp::operator*(const Rational& s) const {
    if (sgn(s) == 0) return SparseOp(rows_, cols_);
    SparseOp out = *this;
    for (auto& col : out.cols_data_)
        for (auto& e : col) e.second *= s;
    return out;
}

bool SparseOp::operator==(const SparseOp& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && cols_data_ == o.cols_data_;
}

SparseOp commutator(const SparseOp& a, const SparseOp& b) { return a * b - b * a; }

bool proportional(const SparseOp& a, const SparseOp& b, Rational& s) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    bool found = false;
    for (int c = 0; c < b.cols() && !found; ++c)
        if (!b.column(c).empty()) {
            const auto& [r, v] = b.column(c).front();
            s = 0;
            for (const auto& [ra, va] : a.column(c))
                if (ra == r) s = va / v;
            found = true;
        }
    if (!found) return a.is_zero();
    return a == b * s;
}

namespace {

/// a + s * b
SparseColumn axpy(const SparseColumn& a, const Rational& s, const SparseColumn& b) {
    SparseColumn out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, s * b[j].second);
            ++j;
        } else {
            Rational v = a[i].second + s * b[j].second;
            if (sgn(v) != 0) out.emplace_back(a[i].first, v);
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

bool SparseEchelon::add(SparseColumn row) {
    std::sort(row.begin(), row.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.first < b.first; });
    // pivot rows carry no other pivot columns, so one pass clears every pivot column
    std::vector<std::pair<int, Rational>> hits;
    for (const auto& [c, v] : row)
        if (rows_.count(c)) hits.emplace_back(c, v);
    for (const auto& [c, v] : hits) row = axpy(row, Rational(-v), rows_.at(c));
    if (row.empty()) return false;

    const int p = row.front().first;
    const Rational inv = 1 / row.front().second;
    for (auto& e : row) e.second *= inv;
    for (auto& [q, r] : rows_) {
        auto it = std::lower_bound(r.begin(), r.end(), p, [](const SparseEntry& e, int c) { return e.first < c; });
        if (it != r.end() && it->first == p) {
            Rational v = it->second;
            r = axpy(r, Rational(-v), row);
        }
    }
    rows_.emplace(p, std::move(row));
    return true;
}

std::vector<RatVector> SparseEchelon::nullspace() const {
    std::vector<RatVector> out;
    for (int f = 0; f < cols_; ++f) {
        if (rows_.count(f)) continue;
        RatVector x(cols_);
        x[f] = 1;
        for (const auto& [p, r] : rows_)
            for (const auto& [c, v] : r)
                if (c == f) x[p] = -v;
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace kzu
