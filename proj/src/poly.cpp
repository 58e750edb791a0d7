#include "kzu/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace kzu {

MPoly MPoly::constant(int nvars, const Rational& c) {
    MPoly p(nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
}

void MPoly::add_term(const Monomial& m, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

MPoly MPoly::operator+(const MPoly& o) const {
    MPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

MPoly MPoly::operator-(const MPoly& o) const {
    MPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

MPoly MPoly::operator*(const Rational& c) const {
    MPoly r(nvars_);
    if (sgn(c) == 0) return r;
    for (const auto& [m, x] : terms_) r.terms_.emplace(m, x * c);
    return r;
}

MPoly MPoly::operator*(const MPoly& o) const {
    MPoly r(nvars_);
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) {
            Monomial m(nvars_);
            for (int i = 0; i < nvars_; ++i) m[i] = m1[i] + m2[i];
            r.add_term(m, c1 * c2);
        }
    return r;
}

MPoly MPoly::times_difference(int p, int q) const {
    MPoly r(nvars_);
    for (const auto& [m, c] : terms_) {
        Monomial a = m;
        ++a[p];
        r.add_term(a, c);
        Monomial b = m;
        ++b[q];
        r.add_term(b, -c);
    }
    return r;
}

MPoly MPoly::identify(int p, int q) const {
    MPoly r(nvars_);
    for (const auto& [m, c] : terms_) {
        Monomial a = m;
        a[q] += a[p];
        a[p] = 0;
        r.add_term(a, c);
    }
    return r;
}

MPoly MPoly::substitute(int p, const Rational& value) const {
    MPoly r(nvars_);
    for (const auto& [m, c] : terms_) {
        Monomial a = m;
        Rational x = c;
        for (int k = 0; k < m[p]; ++k) x *= value;
        a[p] = 0;
        r.add_term(a, x);
    }
    return r;
}

int MPoly::degree_in(int p) const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m[p]);
    return d;
}

Laurent Laurent::monomial(const Rational& c, int power) {
    Laurent l;
    if (sgn(c) != 0) l.coeffs_[power] = c;
    return l;
}

int Laurent::order() const {
    if (coeffs_.empty()) throw std::domain_error("order of the zero Laurent polynomial");
    return coeffs_.begin()->first;
}

Rational Laurent::leading() const {
    if (coeffs_.empty()) throw std::domain_error("leading coefficient of the zero Laurent polynomial");
    return coeffs_.begin()->second;
}

Laurent Laurent::operator+(const Laurent& o) const {
    Laurent r = *this;
    for (const auto& [k, c] : o.coeffs_) {
        auto& slot = r.coeffs_[k];
        slot += c;
        if (sgn(slot) == 0) r.coeffs_.erase(k);
    }
    return r;
}

Laurent Laurent::operator-(const Laurent& o) const { return *this + o * Rational(-1); }

Laurent Laurent::operator*(const Laurent& o) const {
    Laurent r;
    for (const auto& [a, x] : coeffs_)
        for (const auto& [b, y] : o.coeffs_) r.coeffs_[a + b] += x * y;
    for (auto it = r.coeffs_.begin(); it != r.coeffs_.end();)
        it = sgn(it->second) == 0 ? r.coeffs_.erase(it) : std::next(it);
    return r;
}

Laurent Laurent::operator*(const Rational& c) const {
    Laurent r;
    if (sgn(c) == 0) return r;
    for (const auto& [k, x] : coeffs_) r.coeffs_[k] = x * c;
    return r;
}

}  // namespace kzu
