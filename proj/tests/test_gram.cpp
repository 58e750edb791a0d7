#include "kzu/gram.hpp"

#include <doctest.h>

#include <numbers>

using namespace kzu;

namespace {

// A1, four spin-1/2 points; block forms at the given level.
struct Four {
    RootSystem rs = build_root_system("A1");
    std::vector<Weight> ws = std::vector<Weight>(4, Weight{{1}});
    std::vector<Irrep> irr;
    std::unique_ptr<TensorProduct> tp;
    BetaMap beta;
    std::vector<Rational> zq{0, 1, 2, 3};
    Config z{0., 1., 2., 3.};
    BlockSpace bs;
    std::unique_ptr<MasterFunction> mf;
    ScalarForm g;

    explicit Four(int k) {
        for (const auto& w : ws) irr.push_back(build_irrep(rs, w));
        std::vector<const Irrep*> p;
        for (const auto& x : irr) p.push_back(&x);
        tp = std::make_unique<TensorProduct>(p);
        beta = default_beta(rs, ws);
        bs = conformal_block_basis(*tp, zq, k);
        mf = std::make_unique<MasterFunction>(rs, ws, beta, k);
        g = pair_terms(closed_formula_terms(*tp, beta), *tp, bs.basis, beta.M);
    }
};

MonteCarloOptions small(long samples, std::uint64_t seed = 1) {
    MonteCarloOptions o;
    o.samples = samples;
    o.seed = seed;
    return o;
}

// new functionals phi'_b = sum_c B(c, b) phi_c
ScalarForm transform(const ScalarForm& g, const RatMatrix& B) {
    ScalarForm out = g;
    for (std::size_t k = 0; k < g.coeffs.size(); ++k) {
        RatVector row(B.cols());
        for (std::size_t b = 0; b < B.cols(); ++b)
            for (std::size_t c = 0; c < B.rows(); ++c) row[b] += g.coeffs[k][c] * B(c, b);
        out.coeffs[k] = row;
    }
    return out;
}

}  // namespace

TEST_SUITE("gram") {
    TEST_CASE("proposal exponents from the stratum degrees") {
        Four f(2);
        const auto plan = make_proposal_plan(f.g, *f.mf, f.zq, 1);
        CHECK(plan.M == 2);
        for (double d : plan.point_d) CHECK(d == doctest::Approx(0.25));  // (alpha, omega)/(k + 2)
        bool saw_pair = false;
        for (const auto& s : plan.multi)
            if (s.spec.kind == StratumKind::S1) {
                CHECK(s.exact == ratio(1, 2));  // 1 - 2/(k + 2)
                saw_pair = true;
            }
        CHECK(saw_pair);
    }

    TEST_CASE("forms that are not square integrable are refused") {
        Four f(1);
        const ScalarForm all = pair_terms(closed_formula_terms(*f.tp, f.beta), *f.tp, f.bs.invariants, 2);
        CHECK_THROWS_AS(make_proposal_plan(all, *f.mf, f.zq, 1), std::domain_error);
        CHECK_NOTHROW(make_proposal_plan(f.g, *f.mf, f.zq, 1));
    }

    TEST_CASE("proposal density integrates to one") {
        // E_q[h/q] = int h = 1 for a normalized Gaussian h on C^2
        Four f(2);
        const auto plan = make_proposal_plan(f.g, *f.mf, f.zq, 1);
        const int nu = uniforms_per_sample(plan);
        std::mt19937_64 rng(123);
        std::uniform_real_distribution<double> unif(0, 1);
        const Complex c(1.5, 0.2);
        const long n = 200000;
        double sum = 0, sq = 0;
        std::vector<double> u(nu);
        for (long s = 0; s < n; ++s) {
            for (auto& x : u) x = 1 - unif(rng);
            const auto t = proposal_sample(plan, f.z, u);
            double h = 1;
            for (const auto& ta : t) h *= std::exp(-std::norm(ta - c)) / std::numbers::pi;
            const double w = h / proposal_density(plan, f.z, t);
            sum += w;
            sq += w * w;
        }
        const double mean = sum / n;
        const double se = std::sqrt((sq / n - mean * mean) / n);
        CHECK(se < 0.05);
        CHECK(std::abs(mean - 1) < 4 * se);
    }

    TEST_CASE("serial and parallel estimates are bitwise identical") {
        Four f(2);
        const auto plan = make_proposal_plan(f.g, *f.mf, f.zq, 1);
        auto o = small(20000, 7);
        const auto par = gram_metric(f.g, *f.mf, plan, f.z, o);
        o.parallel = false;
        const auto ser = gram_metric(f.g, *f.mf, plan, f.z, o);
        CHECK(par.G == ser.G);
        CHECK(par.stderr_re == ser.stderr_re);
    }

    TEST_CASE("Hermitian, positive definite, and sesquilinear in the functionals") {
        Four f(2);
        const auto plan = make_proposal_plan(f.g, *f.mf, f.zq, 1);
        const auto o = small(40000, 3);
        const auto G = gram_metric(f.g, *f.mf, plan, f.z, o);
        CHECK((G.G - G.G.adjoint()).norm() < 1e-12 * G.G.norm());
        CHECK(G.positive_definite);
        CHECK(G.min_eigenvalue > 10 * G.error_norm());

        RatMatrix B(2, 3);
        B(0, 0) = ratio(2, 3);
        B(1, 0) = -1;
        B(0, 1) = 5;
        B(1, 1) = ratio(1, 4);
        // third functional is zero
        const auto Gb = gram_metric(transform(f.g, B), *f.mf, plan, f.z, o);
        const CMatrix Bc = to_complex(B);
        CHECK((Gb.G - Bc.transpose() * G.G * Bc.conjugate()).norm() < 1e-10 * Gb.G.norm());
        CHECK(Gb.G.row(2).norm() == 0);
        CHECK(Gb.G.col(2).norm() == 0);
        CHECK_FALSE(Gb.positive_definite);
    }

    TEST_CASE("level 1: the single block has a positive norm") {
        Four f(1);
        REQUIRE(f.g.count() == 1);
        const auto plan = make_proposal_plan(f.g, *f.mf, f.zq, 1);
        const auto G = gram_metric(f.g, *f.mf, plan, f.z, small(40000));
        CHECK(G.G(0, 0).real() > 5 * G.error_norm());
        CHECK(std::abs(G.G(0, 0).imag()) < 1e-12 * G.G(0, 0).real());
    }

    TEST_CASE("error shrinks by sqrt 2 when the budget doubles") {
        Four f(2);
        const auto plan = make_proposal_plan(f.g, *f.mf, f.zq, 1);
        const auto rep = gram_convergence(f.g, *f.mf, plan, f.z, small(40000, 5));
        CHECK(rep.pass);
        CHECK(rep.ratio > std::sqrt(2.0) / 1.5);
        CHECK(rep.ratio < std::sqrt(2.0) * 1.5);
    }

    TEST_CASE("batch error of a known sequence") {
        // values 0..B-1: sample variance B(B+1)/12, standard error sqrt((B+1)/12)
        const std::size_t B = 64;
        auto stat = [](std::size_t b) { return CMatrix::Constant(1, 1, Complex(static_cast<double>(b), 0)); };
        CHECK(batch_error(stat, B) == doctest::Approx(std::sqrt((B + 1) / 12.0)));
        CHECK(batch_error([](std::size_t) { return CMatrix::Constant(2, 2, 3.0); }, B) == 0);
    }

    TEST_CASE("check classification") {
        CHECK(classify("x", 1e-3, 1e-4, 1e-2).status == CheckStatus::Pass);
        CHECK(classify("x", 5e-2, 1e-4, 1e-2).status == CheckStatus::Fail);
        CHECK(classify("x", 1e-3, 2e-2, 1e-2).status == CheckStatus::Inconclusive);
        std::vector<CheckValue> v{classify("a", 0, 0, 1), classify("b", 0, 5, 1)};
        CHECK(combine(v) == CheckStatus::Inconclusive);
        v.push_back(classify("c", 3, 0, 1));
        CHECK(combine(v) == CheckStatus::Fail);
    }
}
