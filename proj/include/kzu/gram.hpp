#pragma once

#include "kzu/kzflow.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace kzu {

// Power of the proposal kernel used near one stratum: the integrand of |R Omega|^2 behaves like
// rho^(2d - 1) in the radial blowup coordinate, and the proposal copies that profile.
struct StratumExponent {
    StratumSpec spec;
    Rational exact;  // min over the functionals of d^S(R Omega)
    double d = 1;    // exponent used by the sampler (exact value capped at 1)
};

struct ProposalPlan {
    int M = 0;
    int N = 0;
    std::vector<double> point_d;       // single t approaching z_i
    double infinity_d = 1;             // single t going to infinity
    std::vector<StratumExponent> multi;  // strata with two or more colliding t's
    std::vector<StratumExponent> all;
    double cap = 1;
};

// Exact log-degrees of every stratum for every functional of g at the rational point z.
// Throws std::domain_error naming the stratum when some d^S(R Omega) <= 0 (not square integrable).
ProposalPlan make_proposal_plan(const ScalarForm& g, const MasterFunction& mf, const std::vector<Rational>& z,
                                std::uint64_t seed, double cap = 1);

struct MonteCarloOptions {
    long samples = 200000;
    int batches = 64;
    std::uint64_t seed = 1;
    bool parallel = true;
};

struct GramEstimate {
    CMatrix G;
    Eigen::MatrixXd stderr_re;
    Eigen::MatrixXd stderr_im;
    long samples = 0;
    double max_weight_share = 0;  // largest single contribution over the total trace
    double hermitian_deviation = 0;  // max |G_ab - conj G_ba| / sigma
    double min_eigenvalue = 0;
    bool positive_definite = false;
    // per-batch means, in batch order (same seeds give the same batches across estimates)
    std::vector<CMatrix> batch_means;

    double error_norm() const;  // Frobenius norm of the per-entry standard errors
};

// Standard error of the Frobenius norm of a linear statistic of one or more estimates, from the
// spread of the statistic over batches: sqrt(sum over entries of var(batch value) / batches).
double batch_error(const std::function<CMatrix(std::size_t batch)>& statistic, std::size_t batches);

// G_ab = int |R|^2 g_a conj(g_b) dA over C^M, estimated by importance sampling from the plan's mixture.
GramEstimate gram_metric(const ScalarForm& g, const MasterFunction& mf, const ProposalPlan& plan, const Config& z,
                         const MonteCarloOptions& opt);

// (G(z + h dz) - G(z - h dz)) / 2h with common random numbers.
GramEstimate gram_derivative(const ScalarForm& g, const MasterFunction& mf, const ProposalPlan& plan, const Config& z,
                             const Config& dz, double h, const MonteCarloOptions& opt);

// Density of the mixture proposal at t (exposed for tests of normalization).
double proposal_density(const ProposalPlan& plan, const Config& z, const std::vector<Complex>& t);
std::vector<Complex> proposal_sample(const ProposalPlan& plan, const Config& z, const std::vector<double>& uniforms);
int uniforms_per_sample(const ProposalPlan& plan);

struct ConvergenceReport {
    double error_small = 0;
    double error_large = 0;
    double ratio = 0;             // error_small / error_large, ideally sqrt(2)
    double max_discrepancy = 0;   // entrywise |G_small - G_large| in combined sigmas
    bool pass = false;
};

// Doubling test: the standard error must shrink by sqrt(2) (within a factor 1.5) and the two
// estimates from independent seeds must agree within 3 sigma.
ConvergenceReport gram_convergence(const ScalarForm& g, const MasterFunction& mf, const ProposalPlan& plan,
                                   const Config& z, const MonteCarloOptions& opt);

enum class CheckStatus { Pass, Fail, Inconclusive };
std::string status_name(CheckStatus s);

struct CheckValue {
    std::string check;
    double value = 0;
    double uncertainty = 0;
    double tolerance = 0;
    CheckStatus status = CheckStatus::Fail;
};

// Pass when value < tol and uncertainty < tol, fail when value >= tol and uncertainty < tol,
// inconclusive when the Monte-Carlo uncertainty alone exceeds the budget.
CheckValue classify(std::string name, double value, double uncertainty, double tol);

struct UnitarityReport {
    std::vector<CheckValue> compatibility;  // one per path point
    std::vector<CheckValue> monodromy;      // one per generator loop
    std::vector<double> fitted_c;
    GramEstimate base_gram;
    CheckStatus status = CheckStatus::Fail;
};

struct UnitarityOptions {
    MonteCarloOptions mc;
    TransportOptions transport;
    double tol = 1e-2;
    double step = 0.02;  // finite-difference step along the path
    int path_points = 3;
    std::vector<std::pair<int, int>> loops;  // pure braid generators (z_j around z_i)
};

// Metric compatibility dG/ds + A^T G + G conj(A) = 0 along the path, where dc/ds = A c for flat
// sections, and m^T G conj(m) = c G for monodromies of the listed loops at path.front().
// The functionals of g and of sys must coincide.
UnitarityReport verify_unitary_flatness(const KZSystem& sys, const ScalarForm& g, const MasterFunction& mf,
                                        const ProposalPlan& plan, const std::vector<Config>& path,
                                        const UnitarityOptions& opt);

// Worst status: any fail -> fail, else any inconclusive -> inconclusive, else pass.
CheckStatus combine(const std::vector<CheckValue>& checks);

}  // namespace kzu
