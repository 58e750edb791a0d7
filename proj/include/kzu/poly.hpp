#pragma once

#include "kzu/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace kzu {

/// Sparse multivariate polynomial over Q in a fixed number of variables.
class MPoly {
public:
    using Monomial = std::vector<int>;

    explicit MPoly(int nvars = 0) : nvars_(nvars) {}
    static MPoly constant(int nvars, const Rational& c);

    int nvars() const { return nvars_; }
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Monomial& m, const Rational& c);
    MPoly operator+(const MPoly& o) const;
    MPoly operator-(const MPoly& o) const;
    MPoly operator*(const Rational& c) const;
    MPoly operator*(const MPoly& o) const;
    bool operator==(const MPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    /// this * (x_p - x_q)
    MPoly times_difference(int p, int q) const;
    /// Substitute x_p := x_q.
    MPoly identify(int p, int q) const;
    /// Substitute x_p := value.
    MPoly substitute(int p, const Rational& value) const;
    /// Degree in x_p, or -1 for the zero polynomial.
    int degree_in(int p) const;

private:
    int nvars_;
    std::map<Monomial, Rational> terms_;
};

/// Laurent polynomial in one variable s with rational coefficients.
class Laurent {
public:
    Laurent() = default;
    static Laurent monomial(const Rational& c, int power);
    static Laurent constant(const Rational& c) { return monomial(c, 0); }

    bool is_zero() const { return coeffs_.empty(); }
    /// Lowest power with a nonzero coefficient; throws on zero.
    int order() const;
    Rational leading() const;
    const std::map<int, Rational>& coeffs() const { return coeffs_; }

    Laurent operator+(const Laurent& o) const;
    Laurent operator-(const Laurent& o) const;
    Laurent operator*(const Laurent& o) const;
    Laurent operator*(const Rational& c) const;

private:
    std::map<int, Rational> coeffs_;
};

}  // namespace kzu
