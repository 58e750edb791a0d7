#pragma once

#include "kzu/blocks.hpp"
#include "kzu/poly.hpp"

#include <complex>
#include <random>
#include <vector>

namespace kzu {

using Complex = std::complex<double>;

// Variables are numbered t_1..t_M as 0..M-1 and z_1..z_N as M..M+N-1.

/// beta : [M] -> positive roots, stored as indices into positive_roots().
struct BetaMap {
    int M = 0;
    std::vector<int> beta;
    /// multiplicity n_p of each simple root in mu = sum lambda_i
    std::vector<int> n;
    /// every beta(a) simple and M = sum n_p
    bool is_simple_case = false;
};

/// Lexicographically smallest simple-root map with multiset matching mu; throws when mu
/// is not a nonnegative element of the root lattice.
BetaMap default_beta(const RootSystem& rs, const std::vector<Weight>& weights);
BetaMap make_beta(const RootSystem& rs, const std::vector<Weight>& weights, std::vector<int> roots);

/// x_p - x_q with p < q.
struct LinearFactor {
    int p = 0;
    int q = 0;
    bool operator<(const LinearFactor& o) const { return p != o.p ? p < o.p : q < o.q; }
    bool operator==(const LinearFactor& o) const { return p == o.p && q == o.q; }
};

/// Schechtman-Varchenko master function as a table of exponents on the factors x_p - x_q.
class MasterFunction {
public:
    MasterFunction(const RootSystem& rs, const std::vector<Weight>& weights, const BetaMap& beta, int level);

    int M() const { return M_; }
    int N() const { return N_; }
    const Rational& kappa() const { return kappa_; }
    struct Entry {
        LinearFactor factor;
        Rational exponent;
    };
    const std::vector<Entry>& exponents() const { return table_; }
    Rational exponent(int p, int q) const;

    /// exp(sum e log(x_p - x_q)) with principal logarithms.
    Complex eval(const std::vector<Complex>& x) const;
    /// sum e log|x_p - x_q|
    double log_modulus(const std::vector<Complex>& x) const;

private:
    int M_, N_;
    Rational kappa_;
    std::vector<Entry> table_;
};

/// Follows one branch of the master function along a path by unwrapping each argument.
class BranchTracker {
public:
    BranchTracker(const MasterFunction& mf, const std::vector<Complex>& start);
    /// Move to a nearby configuration; every argument may change by less than pi.
    void advance(const std::vector<Complex>& x);
    Complex value() const;
    /// Sum of exponent * log on the current branch.
    Complex log_value() const;

private:
    const MasterFunction* mf_;
    std::vector<Complex> logs_;
};

/// One summand c / prod(factors) * vec of the vector-valued form w(t, z).
struct FormTerm {
    std::vector<LinearFactor> factors;  // canonical (p < q), sorted, distinct
    TensorState vec;
};

/// Closed formula: sum over assignments of [M] to the points and orderings within each part.
std::vector<FormTerm> closed_formula_terms(const TensorProduct& tp, const BetaMap& beta);

/// Independent evaluator eliminating t_M, t_{M-1}, ... with the gauge identity.
std::vector<FormTerm> gauge_reduction_terms(const TensorProduct& tp, const BetaMap& beta);

/// Scalar coefficient g(t, z) = sum_k coeff_k / prod factors_k of Omega(phi) for a family of functionals.
struct ScalarForm {
    int M = 0;
    int N = 0;
    std::vector<std::vector<LinearFactor>> factors;
    /// coeffs[k][b] for term k and functional b
    std::vector<RatVector> coeffs;
    int count() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs[0].size()); }
};

ScalarForm pair_terms(const std::vector<FormTerm>& terms, const TensorProduct& tp,
                      const std::vector<InvariantFunctional>& phis, int M);

/// Exact value at a rational point (one entry per functional).
RatVector evaluate_exact(const ScalarForm& g, const std::vector<Rational>& x);
std::vector<Complex> evaluate(const ScalarForm& g, const std::vector<Complex>& x);

/// Common divisor D = prod_{a<b}(t_a - t_b) prod_{a,i}(t_a - z_i) and numerator g * D for functional b.
std::vector<LinearFactor> divisor_factors(int M, int N);
MPoly numerator(const ScalarForm& g, int b);

struct PoleReport {
    /// pole order along each component of D, in divisor_factors order
    std::vector<int> orders;
    /// deg_{t_a} g for each a
    std::vector<int> degree_at_infinity;
    bool simple_poles = true;
    bool regular_at_infinity = true;
    /// no pole on t_a = t_b whenever beta(a) + beta(b) is not a root
    bool non_root_diagonals_regular = true;
    bool pass = true;
};

PoleReport pole_report(const ScalarForm& g, int b, const RootSystem& rs, const BetaMap& beta);

enum class StratumKind { S1, S2, S3 };
const char* stratum_name(StratumKind k);

struct StratumSpec {
    StratumKind kind = StratumKind::S1;
    /// indices of the colliding t's
    std::vector<int> subset;
    /// z index for S2, unused otherwise
    int target = -1;
    int L() const { return static_cast<int>(subset.size()); }
    std::string target_name() const;
};

/// Every stratum: S1 for subsets of size >= 2, S2 for nonempty subsets and every z_i, S3 for nonempty subsets.
std::vector<StratumSpec> all_strata(int M, int N);

struct StratumResult {
    StratumSpec spec;
    int codim = 0;
    /// vanishing order in s of the pulled-back coefficient (Jacobian included)
    int order = 0;
    Rational d_omega;
    Rational master_term;
    Rational d_romega;
    bool form_vanishes = false;
    bool generic_agreement = true;
    bool pass = false;
};

/// Logarithmic degree of R * Omega(phi_b) along the blowup of the stratum, from exact expansion in s
/// along `samples` random rational charts that must agree.
StratumResult stratum_log_degree(const ScalarForm& g, int b, const MasterFunction& mf, const StratumSpec& spec,
                                 const std::vector<Rational>& z, std::mt19937_64& rng, int samples = 3);

struct InjectivityReport {
    int rank = 0;
    int exact_rank = 0;
    std::vector<double> singular_values;
    double gap = 0;  // smallest kept over largest discarded (inf when nothing discarded)
    bool pass = false;
};

/// Rank of [g_b(t^(s))] over random sample configurations, numerically and in exact arithmetic.
InjectivityReport injectivity_rank(const ScalarForm& g, const std::vector<Rational>& z, std::mt19937_64& rng,
                                   int extra_samples = 3);

/// Random rational in [lo, hi] with the given denominator.
Rational random_rational(std::mt19937_64& rng, int lo, int hi, int den = 97);

}  // namespace kzu
