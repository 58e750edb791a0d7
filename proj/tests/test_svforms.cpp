#include "kzu/svforms.hpp"

#include <doctest.h>

#include <numbers>

using namespace kzu;

namespace {

struct Setup {
    RootSystem rs;
    std::vector<Weight> ws;
    std::vector<Irrep> irr;
    std::unique_ptr<TensorProduct> tp;
    BetaMap beta;

    Setup(const char* name, std::vector<Weight> weights) : rs(build_root_system(name)), ws(std::move(weights)) {
        for (const auto& w : ws) irr.push_back(build_irrep(rs, w));
        std::vector<const Irrep*> p;
        for (const auto& x : irr) p.push_back(&x);
        tp = std::make_unique<TensorProduct>(p);
        beta = default_beta(rs, ws);
    }
};

Weight w1() { return Weight{{1}}; }

}  // namespace

TEST_SUITE("svforms") {
    TEST_CASE("master function exponents for four spin-1/2 points at level 1") {
        Setup s("A1", {w1(), w1(), w1(), w1()});
        MasterFunction mf(s.rs, s.ws, s.beta, 1);
        REQUIRE(mf.M() == 2);
        CHECK(mf.kappa() == 3);
        CHECK(mf.exponent(0, 1) == ratio(-2, 3));  // -(alpha, alpha)/kappa
        CHECK(mf.exponent(0, 2) == ratio(1, 3));   // (alpha, omega)/kappa
        CHECK(mf.exponent(2, 3) == ratio(-1, 6));  // -(omega, omega)/kappa
    }

    TEST_CASE("two points: g is proportional to (z1 - z2)/((t - z1)(t - z2))") {
        Setup s("A1", {w1(), w1()});
        const auto inv = invariants_basis(*s.tp);
        const ScalarForm g = pair_terms(closed_formula_terms(*s.tp, s.beta), *s.tp, inv, 1);
        REQUIRE(g.count() == 1);
        const std::vector<std::vector<Rational>> pts{{ratio(1, 2), 0, 1}, {5, 0, 1}, {ratio(-3, 7), 2, ratio(9, 4)}};
        Rational first;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const auto& x = pts[k];
            const Rational v = evaluate_exact(g, x)[0] * (x[0] - x[1]) * (x[0] - x[2]) / (x[1] - x[2]);
            CHECK(sgn(v) != 0);
            if (k == 0) first = v;
            CHECK(v == first);
        }
        const auto pr = pole_report(g, 0, s.rs, s.beta);
        CHECK(pr.pass);
        CHECK(pr.degree_at_infinity == std::vector<int>{-2});
    }

    TEST_CASE("closed formula equals the gauge reduction as polynomials") {
        Setup a("A1", {Weight{{2}}, w1(), w1()});
        Setup b("B2", {Weight{{0, 1}}, Weight{{0, 1}}});
        Setup c("A2", {Weight{{1, 0}}, Weight{{0, 1}}});
        for (Setup* s : {&a, &b, &c}) {
            CAPTURE(s->rs.name());
            const auto inv = invariants_basis(*s->tp);
            REQUIRE(!inv.empty());
            const int M = s->beta.M;
            const ScalarForm closed = pair_terms(closed_formula_terms(*s->tp, s->beta), *s->tp, inv, M);
            const ScalarForm gauge = pair_terms(gauge_reduction_terms(*s->tp, s->beta), *s->tp, inv, M);
            for (int f = 0; f < closed.count(); ++f) {
                CHECK(numerator(closed, f) == numerator(gauge, f));
                CHECK_FALSE(numerator(closed, f).is_zero());
                CHECK(pole_report(closed, f, s->rs, s->beta).pass);
            }
        }
    }

    TEST_CASE("stratum degrees: single point and the pair collision") {
        Setup s("A1", {w1(), w1(), w1(), w1()});
        const std::vector<Rational> z{0, 1, 3, 7};
        for (int k : {2, 3}) {
            const auto bs = conformal_block_basis(*s.tp, z, k);
            const ScalarForm g = pair_terms(closed_formula_terms(*s.tp, s.beta), *s.tp, bs.basis, 2);
            MasterFunction mf(s.rs, s.ws, s.beta, k);
            std::mt19937_64 rng(3);
            Rational pair_min;
            for (int b = 0; b < g.count(); ++b) {
                StratumSpec single{StratumKind::S2, {0}, 1};
                const auto r = stratum_log_degree(g, b, mf, single, z, rng);
                CHECK(r.d_omega == 0);
                CHECK(r.master_term == ratio(1, k + 2));
                StratumSpec pair{StratumKind::S1, {0, 1}, -1};
                const auto p = stratum_log_degree(g, b, mf, pair, z, rng);
                CHECK(p.master_term == ratio(-2, k + 2));
                if (b == 0 || p.d_romega < pair_min) pair_min = p.d_romega;
            }
            CAPTURE(k);
            CHECK(pair_min == 1 - ratio(2, k + 2));
        }
    }

    TEST_CASE("all strata have positive degree for blocks") {
        Setup s("A1", {w1(), w1(), w1(), w1()});
        const std::vector<Rational> z{0, 1, 3, 7};
        const auto bs = conformal_block_basis(*s.tp, z, 2);
        const ScalarForm g = pair_terms(closed_formula_terms(*s.tp, s.beta), *s.tp, bs.basis, 2);
        MasterFunction mf(s.rs, s.ws, s.beta, 2);
        std::mt19937_64 rng(4);
        const auto strata = all_strata(2, 4);
        CHECK(strata.size() == 1 + 3 * 4 + 3);
        for (const auto& spec : strata)
            for (int b = 0; b < g.count(); ++b) CHECK(stratum_log_degree(g, b, mf, spec, z, rng).pass);
    }

    TEST_CASE("block forms are linearly independent") {
        Setup s("A1", {w1(), w1(), w1(), w1()});
        const std::vector<Rational> z{0, 1, 3, 7};
        const auto bs = conformal_block_basis(*s.tp, z, 2);
        const ScalarForm g = pair_terms(closed_formula_terms(*s.tp, s.beta), *s.tp, bs.basis, 2);
        std::mt19937_64 rng(9);
        const auto rep = injectivity_rank(g, z, rng);
        CHECK(rep.rank == 2);
        CHECK(rep.exact_rank == 2);
        CHECK(rep.gap >= 1e6);
    }

    TEST_CASE("beta needs the weight sum in the root lattice") {
        const RootSystem a1 = build_root_system("A1");
        CHECK_THROWS_AS(default_beta(a1, {w1(), w1(), w1()}), std::invalid_argument);
        const BetaMap b = default_beta(a1, {w1(), w1(), w1(), w1()});
        CHECK(b.M == 2);
        CHECK(b.is_simple_case);
    }

    TEST_CASE("branch tracking around a loop enclosing no singularity") {
        Setup s("A1", {w1(), w1(), w1(), w1()});
        MasterFunction mf(s.rs, s.ws, s.beta, 1);
        auto config = [](double theta) {
            return std::vector<Complex>{Complex(0.5, 1.0) + 0.3 * std::polar(1.0, theta), Complex(2.0, 0.7), 0.0,
                                        1.0, 3.0, 7.0};
        };
        BranchTracker tr(mf, config(0));
        const Complex start = tr.value();
        for (int k = 1; k <= 400; ++k) tr.advance(config(2 * std::numbers::pi * k / 400));
        CHECK(std::abs(tr.value() - start) < 1e-12 * std::abs(start));
        // looping around z_1 instead multiplies by exp(2 pi i (alpha, omega)/kappa)
        auto around = [](double theta) {
            return std::vector<Complex>{0.3 * std::polar(1.0, theta), Complex(2.0, 0.7), 0.0, 1.0, 3.0, 7.0};
        };
        BranchTracker tz(mf, around(0));
        const Complex s0 = tz.value();
        for (int k = 1; k <= 400; ++k) tz.advance(around(2 * std::numbers::pi * k / 400));
        CHECK(std::abs(tz.value() / s0 - std::polar(1.0, 2 * std::numbers::pi / 3)) < 1e-12);
    }
}
