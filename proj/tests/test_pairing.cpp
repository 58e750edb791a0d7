#include "kzu/pairing.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace kzu;

namespace {

struct Points {
    RootSystem rs = build_root_system("A1");
    std::vector<Weight> ws;
    std::vector<Irrep> irr;
    std::unique_ptr<TensorProduct> tp;
    LieStructure lie = lie_structure(rs);
    BetaMap beta;
    std::vector<InvariantFunctional> inv;

    explicit Points(int n) : ws(n, Weight{{1}}) {
        for (const auto& w : ws) irr.push_back(build_irrep(rs, w));
        std::vector<const Irrep*> p;
        for (const auto& x : irr) p.push_back(&x);
        tp = std::make_unique<TensorProduct>(p);
        beta = default_beta(rs, ws);
        inv = invariants_basis(*tp);
    }
};

}  // namespace

TEST_SUITE("pairing") {
    TEST_CASE("two points: the Pochhammer period is a beta integral") {
        // R g dt = c z12^(1 + e_zz) (t - z1)^(a-1) (t - z2)^(a-1) dt; with t = z1 + z12 u the period has
        // modulus |c| |z12|^(e_zz + 2a) |1 - exp(2 pi i a)|^2 B(a, a)
        Points p(2);
        for (int k : {1, 2, 4}) {
            CAPTURE(k);
            MasterFunction mf(p.rs, p.ws, p.beta, k);
            const ScalarForm g = pair_terms(closed_formula_terms(*p.tp, p.beta), *p.tp, p.inv, 1);
            const std::vector<Rational> x{ratio(1, 3), 0, 2};
            const Rational c = evaluate_exact(g, x)[0] * (x[0] - x[1]) * (x[0] - x[2]) / (x[1] - x[2]);
            const double a = to_double(mf.exponent(0, 1));
            REQUIRE(a == doctest::Approx(1.0 / (k + 2)));
            const double ezz = to_double(mf.exponent(1, 2));
            const Config z{0., 2.};
            TwistedPeriod period(g, mf, {{0, 1, Complex(1, 0.5), 0.25}}, z);
            const Complex I = period(z, CVector::Ones(1));
            const double expected = std::abs(to_double(c)) * std::pow(2.0, ezz + 2 * a) *
                                    std::norm(1.0 - std::polar(1.0, 2 * std::numbers::pi * a)) * std::beta(a, a);
            CHECK(std::abs(I) == doctest::Approx(expected).epsilon(1e-8));
        }
    }

    TEST_CASE("loops must not share a vertical strip") {
        Points p(4);
        MasterFunction mf(p.rs, p.ws, p.beta, 1);
        const ScalarForm g = pair_terms(closed_formula_terms(*p.tp, p.beta), *p.tp, p.inv, 2);
        const Config z{0., 1., 2., 3.};
        CHECK_THROWS_AS(TwistedPeriod(g, mf, {{0, 1, Complex(0.5, 0.5)}, {1, 2, Complex(1.5, 0.5)}}, z),
                        std::invalid_argument);
        CHECK_THROWS_AS(TwistedPeriod(g, mf, {{0, 1, Complex(0.5, 0.5)}}, z), std::invalid_argument);
        CHECK_NOTHROW(TwistedPeriod(g, mf, {{0, 1, Complex(0.5, 0.5)}, {2, 3, Complex(2.5, 0.5)}}, z));
    }

    TEST_CASE("split_path: equal arc lengths, corners kept") {
        const std::vector<Config> path{{0., 0.}, {3., 0.}, {3., Complex(0, 1)}};
        const auto pieces = split_path(path, 3);
        REQUIRE(pieces.size() == 3);
        auto len = [](const std::vector<Config>& piece) {
            double s = 0;
            for (std::size_t k = 0; k + 1 < piece.size(); ++k) {
                double d = 0;
                for (std::size_t i = 0; i < piece[k].size(); ++i) d += std::norm(piece[k][i] - piece[k + 1][i]);
                s += std::sqrt(d);
            }
            return s;
        };
        for (const auto& piece : pieces) CHECK(len(piece) == doctest::Approx(4.0 / 3));
        CHECK(pieces[2].size() == 3);  // arc length 8/3..4 holds the corner at 3
        CHECK(pieces[0].size() == 2);
        CHECK(std::abs(pieces.back().back()[1] - Complex(0, 1)) < 1e-15);
        CHECK_THROWS(split_path({}, 2));
    }

    TEST_CASE("flat sections pair to a constant; the flipped connection does not") {
        Points p(4);
        const int k = 1;
        MasterFunction mf(p.rs, p.ws, p.beta, k);
        const ScalarForm g = pair_terms(closed_formula_terms(*p.tp, p.beta), *p.tp, p.inv, 2);
        KZSystem sys(*p.tp, p.lie, p.inv, k);
        const std::vector<PochhammerLoop> cycle{{0, 1, Complex(0.5, 0.5), 0.25}, {2, 3, Complex(2.5, 0.5), 0.25}};
        const Config z0{0., 1., 2., 3.};
        const std::vector<Config> path{z0, {Complex(0.05, 0.02), 1., 2., Complex(3, -0.03)}};
        CVector c0 = CVector::Zero(sys.dim());
        c0(0) = 1;
        c0(1) = Complex(0.3, -0.2);
        TransportOptions topt;
        topt.tol = 1e-10;
        const auto rep = verify_flat_pairing(sys, g, mf, c0, cycle, path, 2, 1e-4, topt);
        CHECK(rep.pass);
        CHECK(rep.drift < 1e-6);
        ConnectionFn flipped = [&](const Config& z, const Config& dz) { return CMatrix(-sys.along(z, dz)); };
        const auto neg = verify_flat_pairing(sys, g, mf, c0, cycle, path, 2, 1e-4, topt, flipped);
        CHECK_FALSE(neg.pass);
        CHECK(neg.drift > 100 * rep.drift);
    }

    TEST_CASE("a path that runs into the cycle is refused") {
        Points p(4);
        MasterFunction mf(p.rs, p.ws, p.beta, 1);
        const ScalarForm g = pair_terms(closed_formula_terms(*p.tp, p.beta), *p.tp, p.inv, 2);
        KZSystem sys(*p.tp, p.lie, p.inv, 1);
        const std::vector<PochhammerLoop> cycle{{0, 1, Complex(0.5, 0.5), 0.25}, {2, 3, Complex(2.5, 0.5), 0.25}};
        const Config z0{0., 1., 2., 3.};
        const std::vector<Config> path{z0, {0., 1., Complex(2, 0.24), 3.}};
        CHECK_THROWS_AS(verify_flat_pairing(sys, g, mf, CVector::Ones(sys.dim()), cycle, path, 4, 1e-4),
                        std::domain_error);
    }
}
