#include "kzu/gram.hpp"
#include "kzu/pairing.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace kzu {

ProposalPlan make_proposal_plan(const ScalarForm& g, const MasterFunction& mf, const std::vector<Rational>& z,
                                std::uint64_t seed, double cap) {
    if (g.count() == 0) throw std::invalid_argument("no functionals to integrate");
    ProposalPlan plan;
    plan.M = g.M;
    plan.N = g.N;
    plan.cap = cap;
    plan.point_d.assign(g.N, cap);
    plan.infinity_d = cap;
    std::mt19937_64 rng(seed);
    for (const auto& spec : all_strata(g.M, g.N)) {
        StratumExponent se{spec, Rational(0), cap};
        bool seen = false;
        for (int b = 0; b < g.count(); ++b) {
            auto r = stratum_log_degree(g, b, mf, spec, z, rng);
            if (r.form_vanishes) continue;
            if (!seen || r.d_romega < se.exact) se.exact = r.d_romega;
            seen = true;
        }
        if (!seen) continue;
        if (sgn(se.exact) <= 0)
            throw std::domain_error(std::string("not square integrable along stratum ") + stratum_name(spec.kind) +
                                    " L=" + std::to_string(spec.L()) + " target " + spec.target_name());
        se.d = std::min(cap, to_double(se.exact));
        plan.all.push_back(se);
        if (spec.L() >= 2) {
            plan.multi.push_back(se);
        } else if (spec.kind == StratumKind::S2) {
            plan.point_d[spec.target] = std::min(plan.point_d[spec.target], se.d);
        } else if (spec.kind == StratumKind::S3) {
            plan.infinity_d = std::min(plan.infinity_d, se.d);
        }
    }
    return plan;
}

namespace {

constexpr double kPi = std::numbers::pi;

double sphere_area(int n) { return 2 * std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0); }

struct Geometry {
    Complex center;
    double base_scale = 1;
    double point_radius = 0.5;
    double infinity_radius = 0.25;  // in u = 1 / (t - center)
};

Geometry geometry(const Config& z) {
    Geometry geo;
    for (const auto& x : z) geo.center += x;
    geo.center /= static_cast<double>(z.size());
    double spread = 0;
    for (const auto& x : z) spread = std::max(spread, std::abs(x - geo.center));
    geo.base_scale = std::max(1.0, spread);
    geo.point_radius = 0.5 * min_separation(z);
    geo.infinity_radius = 1 / (2 * spread + 2);
    return geo;
}

// Radial density in R^n, rho in (0, r), proportional to rho^(2d - 1); value per unit volume.
double radial_density(double rho, double d, double r, int n) {
    if (rho >= r) return 0;
    return 2 * d * std::pow(rho, 2 * d - 1) / std::pow(r, 2 * d) / (std::pow(rho, n - 1) * sphere_area(n));
}

double kernel_2d(double rho, double d, double r) { return radial_density(rho, d, r, 2); }

class Sampler {
public:
    Sampler(const ProposalPlan& plan, const Config& z) : plan_(plan), z_(z), geo_(geometry(z)) {
        if (static_cast<int>(z.size()) != plan.N) throw std::invalid_argument("configuration has the wrong size");
        product_weight_ = plan.multi.empty() ? 1.0 : 0.5;
    }

    double q1(Complex t) const {
        const double s = geo_.base_scale;
        const double r2 = std::norm(t - geo_.center) / (s * s);
        double q = 0.25 / (kPi * s * s) / ((1 + r2) * (1 + r2));
        double kern = 0;
        for (int i = 0; i < plan_.N; ++i) kern += kernel_2d(std::abs(t - z_[i]), plan_.point_d[i], geo_.point_radius);
        const Complex w = t - geo_.center;
        const double u = 1 / std::abs(w);
        kern += kernel_2d(u, plan_.infinity_d, geo_.infinity_radius) / std::pow(std::abs(w), 4);
        return q + 0.75 / (plan_.N + 1) * kern;
    }

    Complex sample_q1(const double* v) const {
        const double theta = 2 * kPi * v[2];
        if (v[0] < 0.25) {
            const double x = std::min(v[1], 1 - 1e-16);
            return geo_.center + std::polar(geo_.base_scale * std::sqrt(x / (1 - x)), theta);
        }
        int j = static_cast<int>((v[0] - 0.25) / 0.75 * (plan_.N + 1));
        j = std::clamp(j, 0, plan_.N);
        if (j < plan_.N)
            return z_[j] + std::polar(geo_.point_radius * std::pow(v[1], 1 / (2 * plan_.point_d[j])), theta);
        const double rho = geo_.infinity_radius * std::pow(v[1], 1 / (2 * plan_.infinity_d));
        return geo_.center + 1.0 / std::polar(rho, theta);
    }

    double stratum_density(const StratumExponent& se, const std::vector<Complex>& t) const {
        const auto& A = se.spec.subset;
        const int L = static_cast<int>(A.size());
        double rest = 1;
        std::vector<bool> in(plan_.M, false);
        for (int a : A) in[a] = true;
        for (int a = 0; a < plan_.M; ++a)
            if (!in[a]) rest *= q1(t[a]);
        if (rest == 0) return 0;
        switch (se.spec.kind) {
        case StratumKind::S1: {
            Complex tau = 0;
            for (int a : A) tau += t[a];
            tau /= static_cast<double>(L);
            double rho2 = 0;
            for (int a : A) rho2 += std::norm(t[a] - tau);
            return rest * q1(tau) * radial_density(std::sqrt(rho2), se.d, geo_.point_radius, 2 * (L - 1)) / L;
        }
        case StratumKind::S2: {
            double rho2 = 0;
            for (int a : A) rho2 += std::norm(t[a] - z_[se.spec.target]);
            return rest * radial_density(std::sqrt(rho2), se.d, geo_.point_radius, 2 * L);
        }
        case StratumKind::S3: {
            double rho2 = 0, jac = 1;
            for (int a : A) {
                const double m = std::abs(t[a] - geo_.center);
                rho2 += 1 / (m * m);
                jac /= std::pow(m, 4);
            }
            return rest * jac * radial_density(std::sqrt(rho2), se.d, geo_.infinity_radius, 2 * L);
        }
        }
        return 0;
    }

    double density(const std::vector<Complex>& t) const {
        double prod = 1;
        for (int a = 0; a < plan_.M; ++a) prod *= q1(t[a]);
        double q = product_weight_ * prod;
        if (!plan_.multi.empty()) {
            double s = 0;
            for (const auto& se : plan_.multi) s += stratum_density(se, t);
            q += (1 - product_weight_) * s / static_cast<double>(plan_.multi.size());
        }
        return q;
    }

    static int uniforms(int M) { return 6 + 5 * M; }

    std::vector<Complex> sample(const std::vector<double>& u) const {
        const int M = plan_.M;
        std::vector<Complex> t(M);
        for (int a = 0; a < M; ++a) t[a] = sample_q1(&u[2 + 3 * a]);
        if (u[0] < product_weight_) return t;

        int k = static_cast<int>(u[1] * plan_.multi.size());
        k = std::clamp(k, 0, static_cast<int>(plan_.multi.size()) - 1);
        const auto& se = plan_.multi[k];
        const auto& A = se.spec.subset;
        const int L = static_cast<int>(A.size());
        const int off = 2 + 3 * M;
        // isotropic direction in C^L from Box-Muller pairs
        std::vector<Complex> dir(L);
        for (int l = 0; l < L; ++l) {
            const double r = std::sqrt(-2 * std::log(u[off + 1 + 2 * l]));
            dir[l] = std::polar(r, 2 * kPi * u[off + 2 + 2 * l]);
        }
        auto normalize = [](std::vector<Complex>& v) {
            double n = 0;
            for (const auto& x : v) n += std::norm(x);
            n = std::sqrt(n);
            for (auto& x : v) x /= n;
        };
        switch (se.spec.kind) {
        case StratumKind::S1: {
            Complex mean = 0;
            for (const auto& x : dir) mean += x;
            mean /= static_cast<double>(L);
            for (auto& x : dir) x -= mean;
            normalize(dir);
            const Complex tau = sample_q1(&u[off + 1 + 2 * M]);
            const double rho = geo_.point_radius * std::pow(u[off], 1 / (2 * se.d));
            for (int l = 0; l < L; ++l) t[A[l]] = tau + rho * dir[l];
            break;
        }
        case StratumKind::S2: {
            normalize(dir);
            const double rho = geo_.point_radius * std::pow(u[off], 1 / (2 * se.d));
            for (int l = 0; l < L; ++l) t[A[l]] = z_[se.spec.target] + rho * dir[l];
            break;
        }
        case StratumKind::S3: {
            normalize(dir);
            const double rho = geo_.infinity_radius * std::pow(u[off], 1 / (2 * se.d));
            for (int l = 0; l < L; ++l) t[A[l]] = geo_.center + 1.0 / (rho * dir[l]);
            break;
        }
        }
        return t;
    }

private:
    const ProposalPlan& plan_;
    Config z_;
    Geometry geo_;
    double product_weight_;
};

}  // namespace

double proposal_density(const ProposalPlan& plan, const Config& z, const std::vector<Complex>& t) {
    return Sampler(plan, z).density(t);
}

std::vector<Complex> proposal_sample(const ProposalPlan& plan, const Config& z, const std::vector<double>& uniforms) {
    if (static_cast<int>(uniforms.size()) < uniforms_per_sample(plan)) throw std::invalid_argument("too few uniforms");
    return Sampler(plan, z).sample(uniforms);
}

int uniforms_per_sample(const ProposalPlan& plan) { return Sampler::uniforms(plan.M); }

namespace {

struct Moments {
    long n = 0;
    std::vector<CMatrix> batch_means;
    CMatrix sum;
    Eigen::MatrixXd sq_re, sq_im;
    double max_trace = 0;

    explicit Moments(int d) : sum(CMatrix::Zero(d, d)), sq_re(Eigen::MatrixXd::Zero(d, d)), sq_im(Eigen::MatrixXd::Zero(d, d)) {}

    void add(const CMatrix& x) {
        ++n;
        sum += x;
        sq_re += x.real().cwiseAbs2();
        sq_im += x.imag().cwiseAbs2();
        max_trace = std::max(max_trace, std::abs(x.trace()));
    }
    void merge(const Moments& o) {
        if (o.n > 0) batch_means.push_back(o.sum / static_cast<double>(o.n));
        n += o.n;
        sum += o.sum;
        sq_re += o.sq_re;
        sq_im += o.sq_im;
        max_trace = std::max(max_trace, o.max_trace);
    }
};

std::mt19937_64 batch_rng(std::uint64_t seed, int batch) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(batch), 0x6b7a75u};
    return std::mt19937_64(seq);
}

// Per-sample contribution X(u) for uniforms u in (0, 1].
using SampleFn = std::function<CMatrix(const std::vector<double>&)>;

Moments run_batches(int d, int nu, const MonteCarloOptions& opt, const SampleFn& fn) {
    if (opt.batches < 1 || opt.samples < opt.batches) throw std::invalid_argument("need at least one sample per batch");
    std::vector<Moments> parts(opt.batches, Moments(d));
    auto run = [&](int b) {
        auto rng = batch_rng(opt.seed, b);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const long count = opt.samples / opt.batches + (b < opt.samples % opt.batches ? 1 : 0);
        std::vector<double> u(nu);
        for (long s = 0; s < count; ++s) {
            for (auto& x : u) x = 1 - unif(rng);
            parts[b].add(fn(u));
        }
    };
    if (opt.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int b = 0; b < opt.batches; ++b) run(b);
    } else {
        for (int b = 0; b < opt.batches; ++b) run(b);
    }
    Moments total(d);
    for (const auto& p : parts) total.merge(p);
    return total;
}

GramEstimate finish(const Moments& m) {
    GramEstimate est;
    const double n = static_cast<double>(m.n);
    est.samples = m.n;
    est.G = m.sum / n;
    est.batch_means = m.batch_means;
    const Eigen::MatrixXd var_re = (m.sq_re / n - est.G.real().cwiseAbs2()).cwiseMax(0.0);
    const Eigen::MatrixXd var_im = (m.sq_im / n - est.G.imag().cwiseAbs2()).cwiseMax(0.0);
    est.stderr_re = (var_re / n).cwiseSqrt();
    est.stderr_im = (var_im / n).cwiseSqrt();
    const double tr = std::abs(m.sum.trace());
    est.max_weight_share = tr > 0 ? m.max_trace / tr : 0;
    const int d = static_cast<int>(est.G.rows());
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const Complex diff = est.G(a, b) - std::conj(est.G(b, a));
            const double sig = std::hypot(est.stderr_re(a, b), est.stderr_im(a, b)) * std::sqrt(2.0);
            const double dev = std::abs(diff);
            est.hermitian_deviation = std::max(est.hermitian_deviation, sig > 0 ? dev / sig : (dev > 0 ? HUGE_VAL : 0));
        }
    if (d > 0) {
        CMatrix herm = (est.G + est.G.adjoint()) / 2.0;
        est.min_eigenvalue = Eigen::SelfAdjointEigenSolver<CMatrix>(herm).eigenvalues().minCoeff();
        est.positive_definite = est.min_eigenvalue > 0;
    }
    return est;
}

CMatrix outer(const std::vector<Complex>& v, double w) {
    const int d = static_cast<int>(v.size());
    CMatrix x(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) x(a, b) = w * v[a] * std::conj(v[b]);
    return x;
}

CMatrix contribution(const ScalarForm& g, const MasterFunction& mf, const Sampler& sampler, const Config& z,
                     const std::vector<double>& u) {
    const auto t = sampler.sample(u);
    std::vector<Complex> x(t);
    x.insert(x.end(), z.begin(), z.end());
    const double q = sampler.density(t);
    const double w = std::exp(2 * mf.log_modulus(x)) / q;
    return outer(evaluate(g, x), w);
}

}  // namespace

double batch_error(const std::function<CMatrix(std::size_t batch)>& statistic, std::size_t batches) {
    if (batches < 2) return HUGE_VAL;
    std::vector<CMatrix> v;
    for (std::size_t b = 0; b < batches; ++b) v.push_back(statistic(b));
    CMatrix mean = CMatrix::Zero(v[0].rows(), v[0].cols());
    for (const auto& x : v) mean += x;
    mean /= static_cast<double>(batches);
    double ss = 0;
    for (const auto& x : v) ss += (x - mean).squaredNorm();
    const double nb = static_cast<double>(batches);
    return std::sqrt(ss / (nb - 1) / nb);
}

double GramEstimate::error_norm() const { return std::sqrt(stderr_re.squaredNorm() + stderr_im.squaredNorm()); }

GramEstimate gram_metric(const ScalarForm& g, const MasterFunction& mf, const ProposalPlan& plan, const Config& z,
                         const MonteCarloOptions& opt) {
    Sampler sampler(plan, z);
    auto m = run_batches(g.count(), Sampler::uniforms(plan.M), opt,
                         [&](const std::vector<double>& u) { return contribution(g, mf, sampler, z, u); });
    return finish(m);
}

namespace {

// t -> t + sum_i phi_i(t) shift_i, where phi_i is 1 on a disc around z_i and 0 beyond a larger one,
// so a neighbourhood of each marked point moves rigidly with it. Returns the real Jacobian determinant.
struct Warp {
    Config z;
    Config shift;
    double inner = 0, outer = 0;

    Warp(const Config& z0, const Config& dz, double h) : z(z0), shift(dz) {
        for (auto& x : shift) x *= h;
        inner = 0.15 * min_separation(z0);
        outer = 0.45 * min_separation(z0);
    }

    Complex apply(Complex t, double& jac) const {
        Complex out = t;
        Complex gx = 0, gy = 0;  // derivatives of the displacement along x and y
        for (std::size_t i = 0; i < z.size(); ++i) {
            const Complex d = t - z[i];
            const double r = std::abs(d);
            if (r >= outer) continue;
            double phi = 1, dphi = 0;
            if (r > inner) {
                const double x = (outer - r) / (outer - inner);
                phi = x * x * (3 - 2 * x);
                dphi = -6 * x * (1 - x) / (outer - inner);
            }
            out += phi * shift[i];
            if (dphi != 0) {
                gx += dphi * (d.real() / r) * shift[i];
                gy += dphi * (d.imag() / r) * shift[i];
            }
        }
        jac = (1 + gx.real()) * (1 + gy.imag()) - gy.real() * gx.imag();
        return out;
    }
};

}  // namespace

GramEstimate gram_derivative(const ScalarForm& g, const MasterFunction& mf, const ProposalPlan& plan, const Config& z,
                             const Config& dz, double h, const MonteCarloOptions& opt) {
    if (h <= 0) throw std::invalid_argument("finite-difference step must be positive");
    Config zp = z, zm = z;
    for (std::size_t i = 0; i < z.size(); ++i) {
        zp[i] += h * dz[i];
        zm[i] -= h * dz[i];
    }
    const Warp wp(z, dz, h), wm(z, dz, -h);
    for (const auto& x : dz)
        if (std::abs(x) * h * 1.5 / (wp.outer - wp.inner) > 0.5) throw std::invalid_argument("finite-difference step too large");
    Sampler sampler(plan, z);
    auto evaluate_at = [&](const std::vector<Complex>& t, const Warp& warp, const Config& zz, double q) {
        std::vector<Complex> x(t.size());
        double jac = 1;
        for (std::size_t a = 0; a < t.size(); ++a) {
            double j = 1;
            x[a] = warp.apply(t[a], j);
            jac *= j;
        }
        x.insert(x.end(), zz.begin(), zz.end());
        return outer(evaluate(g, x), std::exp(2 * mf.log_modulus(x)) * jac / q);
    };
    auto m = run_batches(g.count(), Sampler::uniforms(plan.M), opt, [&](const std::vector<double>& u) {
        const auto t = sampler.sample(u);
        const double q = sampler.density(t);
        return CMatrix((evaluate_at(t, wp, zp, q) - evaluate_at(t, wm, zm, q)) / (2 * h));
    });
    return finish(m);
}

ConvergenceReport gram_convergence(const ScalarForm& g, const MasterFunction& mf, const ProposalPlan& plan,
                                   const Config& z, const MonteCarloOptions& opt) {
    MonteCarloOptions big = opt;
    big.samples = 2 * opt.samples;
    big.seed = opt.seed + 0x9e3779b97f4a7c15ULL;
    const auto a = gram_metric(g, mf, plan, z, opt);
    const auto b = gram_metric(g, mf, plan, z, big);
    ConvergenceReport rep;
    rep.error_small = a.error_norm();
    rep.error_large = b.error_norm();
    rep.ratio = rep.error_large > 0 ? rep.error_small / rep.error_large : 0;
    for (int i = 0; i < a.G.rows(); ++i)
        for (int j = 0; j < a.G.cols(); ++j) {
            const double sr = std::hypot(a.stderr_re(i, j), b.stderr_re(i, j));
            const double si = std::hypot(a.stderr_im(i, j), b.stderr_im(i, j));
            const double dr = std::abs(a.G(i, j).real() - b.G(i, j).real());
            const double di = std::abs(a.G(i, j).imag() - b.G(i, j).imag());
            if (sr > 0) rep.max_discrepancy = std::max(rep.max_discrepancy, dr / sr);
            if (si > 0) rep.max_discrepancy = std::max(rep.max_discrepancy, di / si);
        }
    const double r2 = std::sqrt(2.0);
    rep.pass = rep.ratio > r2 / 1.5 && rep.ratio < r2 * 1.5 && rep.max_discrepancy < 3;
    return rep;
}

std::string status_name(CheckStatus s) {
    switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
    }
    return "fail";
}

CheckValue classify(std::string name, double value, double uncertainty, double tol) {
    CheckValue c{std::move(name), value, uncertainty, tol, CheckStatus::Fail};
    if (uncertainty >= tol) c.status = CheckStatus::Inconclusive;
    else c.status = value < tol ? CheckStatus::Pass : CheckStatus::Fail;
    return c;
}

CheckStatus combine(const std::vector<CheckValue>& checks) {
    bool inconclusive = false;
    for (const auto& c : checks) {
        if (c.status == CheckStatus::Fail) return CheckStatus::Fail;
        if (c.status == CheckStatus::Inconclusive) inconclusive = true;
    }
    return inconclusive ? CheckStatus::Inconclusive : CheckStatus::Pass;
}

UnitarityReport verify_unitary_flatness(const KZSystem& sys, const ScalarForm& g, const MasterFunction& mf,
                                        const ProposalPlan& plan, const std::vector<Config>& path,
                                        const UnitarityOptions& opt) {
    if (sys.dim() != g.count()) throw std::invalid_argument("KZ system and form use different functionals");
    if (path.empty()) throw std::invalid_argument("empty path");
    UnitarityReport rep;
    rep.base_gram = gram_metric(g, mf, plan, path.front(), opt.mc);

    // compatibility at evenly spaced points, each with the unit tangent of its polyline piece
    const int pts = std::max(1, opt.path_points);
    std::vector<std::pair<Config, Config>> probes;
    if (path.size() == 1) {
        probes.emplace_back(path.front(), Config(path.front().size()));
    } else {
        const auto pieces = split_path(path, std::max(1, pts - 1));
        for (int p = 0; p < pts; ++p) {
            const auto& piece = pieces[std::min<std::size_t>(p, pieces.size() - 1)];
            const Config& z = p < static_cast<int>(pieces.size()) ? piece.front() : piece.back();
            const Config& a = piece[piece.size() - 2];
            const Config& b = piece.back();
            Config dz(z.size());
            double len = 0;
            for (std::size_t i = 0; i < z.size(); ++i) len += std::norm(b[i] - a[i]);
            len = std::sqrt(len);
            for (std::size_t i = 0; i < z.size(); ++i) dz[i] = len > 0 ? (b[i] - a[i]) / len : Complex(0);
            probes.emplace_back(z, dz);
        }
    }
    for (std::size_t p = 0; p < probes.size(); ++p) {
        const auto& [z, dz] = probes[p];
        const auto G = p == 0 ? rep.base_gram : gram_metric(g, mf, plan, z, opt.mc);
        const double scale = G.G.norm();
        double zero_len = 0;
        for (const auto& x : dz) zero_len += std::norm(x);
        if (zero_len == 0) {
            rep.compatibility.push_back(classify("metric_compatibility", 0, 0, opt.tol));
            continue;
        }
        const auto D = gram_derivative(g, mf, plan, z, dz, opt.step, opt.mc);
        const CMatrix A = sys.along(z, dz);
        const CMatrix residual = D.G + A.transpose() * G.G + G.G * A.conjugate();
        const double value = residual.norm() / scale;
        if (D.batch_means.size() != G.batch_means.size()) throw std::logic_error("batch layouts differ");
        const double unc = batch_error(
                               [&](std::size_t b) {
                                   return CMatrix(D.batch_means[b] + A.transpose() * G.batch_means[b] +
                                                  G.batch_means[b] * A.conjugate());
                               },
                               G.batch_means.size()) /
                           scale;
        rep.compatibility.push_back(classify("metric_compatibility", value, unc, opt.tol));
    }

    const auto& G0 = rep.base_gram;
    const double g0 = G0.G.norm();
    for (const auto& [i, j] : opt.loops) {
        const CMatrix m = monodromy_matrix(sys, braid_loop(path.front(), i, j), opt.transport);
        const CMatrix img = m.transpose() * G0.G * m.conjugate();
        const double c = (G0.G.adjoint() * img).trace().real() / (g0 * g0);
        rep.fitted_c.push_back(c);
        const double value = (img - c * G0.G).norm() / g0;
        const double unc = batch_error(
                               [&](std::size_t b) {
                                   const CMatrix& Gb = G0.batch_means[b];
                                   return CMatrix(m.transpose() * Gb * m.conjugate() - c * Gb);
                               },
                               G0.batch_means.size()) /
                           g0;
        auto cv = classify("monodromy_unitarity_" + std::to_string(i + 1) + "_" + std::to_string(j + 1), value, unc, opt.tol);
        if (c <= 0 && cv.status == CheckStatus::Pass) cv.status = CheckStatus::Fail;
        rep.monodromy.push_back(cv);
    }
    std::vector<CheckValue> all = rep.compatibility;
    all.insert(all.end(), rep.monodromy.begin(), rep.monodromy.end());
    rep.status = combine(all);
    if (!rep.base_gram.positive_definite) rep.status = CheckStatus::Fail;
    return rep;
}

}  // namespace kzu
