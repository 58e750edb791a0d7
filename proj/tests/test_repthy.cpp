#include "kzu/blocks.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace kzu;

namespace {

std::vector<const Irrep*> pointers(const std::vector<Irrep>& v) {
    std::vector<const Irrep*> p;
    for (const auto& x : v) p.push_back(&x);
    return p;
}

// sl2 Verlinde numbers from the modular S-matrix, independent of the Weyl-character sum in the library.
long sl2_verlinde(const std::vector<int>& labels, int k) {
    const double n = k + 2;
    auto S = [&](int a, int b) { return std::sqrt(2 / n) * std::sin(std::numbers::pi * (a + 1) * (b + 1) / n); };
    double sum = 0;
    for (int j = 0; j <= k; ++j) {
        double term = std::pow(S(0, j), 2.0 - static_cast<double>(labels.size()));
        for (int l : labels) term *= S(l, j);
        sum += term;
    }
    return std::lround(sum);
}

bool same_op(const SparseOp& a, const SparseOp& b) { return (a - b).is_zero(); }

}  // namespace

TEST_SUITE("repthy") {
    TEST_CASE("dimensions against closed forms") {
        const RootSystem a2 = build_root_system("A2");
        for (int a = 0; a <= 3; ++a)
            for (int b = 0; b <= 3; ++b) {
                const Weight w{{a, b}};
                const int expected = (a + 1) * (b + 1) * (a + b + 2) / 2;
                CHECK(weyl_dimension(a2, w) == expected);
                if (a + b <= 2) CHECK(build_irrep(a2, w).dim() == expected);
            }
        const RootSystem g2 = build_root_system("G2");
        CHECK(build_irrep(g2, g2.fundamental_weight(0)).dim() == 7);
        CHECK(build_irrep(g2, g2.fundamental_weight(1)).dim() == 14);
        const RootSystem b2 = build_root_system("B2");
        CHECK(build_irrep(b2, b2.fundamental_weight(0)).dim() == 5);
        CHECK(build_irrep(b2, b2.fundamental_weight(1)).dim() == 4);
        const RootSystem a1 = build_root_system("A1");
        for (int n = 0; n < 6; ++n) CHECK(build_irrep(a1, Weight{{n}}).dim() == n + 1);
    }

    TEST_CASE("Chevalley relations hold exactly") {
        for (const char* name : {"A2", "B2", "G2", "C3"}) {
            const RootSystem rs = build_root_system(name);
            const Irrep v = build_irrep(rs, rs.fundamental_weight(0));
            const int r = rs.rank();
            CAPTURE(name);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) {
                    const SparseOp ef = commutator(v.e(i), v.f(j));
                    CHECK(same_op(ef, i == j ? v.h(i) : SparseOp(v.dim(), v.dim())));
                    CHECK(same_op(commutator(v.h(i), v.e(j)), v.e(j) * Rational(rs.cartan()[j][i])));
                    CHECK(same_op(commutator(v.h(i), v.f(j)), v.f(j) * Rational(-rs.cartan()[j][i])));
                }
        }
    }

    TEST_CASE("Casimir acts by (lambda, lambda + 2 rho)") {
        const RootSystem a1 = build_root_system("A1");
        CHECK(casimir_eigenvalue(a1, a1.fundamental_weight(0)) == ratio(3, 2));
        const RootSystem a2 = build_root_system("A2");
        CHECK(casimir_eigenvalue(a2, Weight{{1, 1}}) == 6);  // adjoint: 2 g*
        CHECK(casimir_eigenvalue(a2, Weight{{1, 0}}) == ratio(8, 3));
        for (const char* name : {"A2", "B2", "G2"}) {
            const RootSystem rs = build_root_system(name);
            const LieStructure lie = lie_structure(rs);
            for (int i = 0; i < rs.rank(); ++i) {
                const Irrep v = build_irrep(rs, rs.fundamental_weight(i));
                CHECK(casimir_operator(v, lie).is_scalar(casimir_eigenvalue(rs, rs.fundamental_weight(i))));
            }
        }
    }

    TEST_CASE("adjoint Casimir is 2 g* for every type up to rank 4") {
        for (auto [t, n] : all_simple_types(4)) {
            const RootSystem rs = build_root_system(t, n);
            const Weight theta = rs.root_to_weight(rs.highest_root().coords);
            CHECK(casimir_eigenvalue(rs, theta) == 2 * rs.dual_coxeter());
        }
    }

    TEST_CASE("rescaling a root vector keeps the Casimir") {
        const RootSystem a2 = build_root_system("A2");
        const LieStructure lie = lie_structure(a2);
        Irrep v = build_irrep(a2, Weight{{1, 1}});
        const int top = static_cast<int>(a2.positive_roots().size()) - 1;
        const SparseOp before = casimir_operator(v, lie);
        v.rescale_root_vector(top, ratio(-7, 3));
        CHECK(casimir_operator(v, lie) == before);
    }

    TEST_CASE("invariants: Catalan numbers for A1 and the epsilon tensor for A2") {
        const RootSystem a1 = build_root_system("A1");
        const long catalan[] = {1, 1, 2, 5};
        for (int n = 1; n <= 3; ++n) {
            std::vector<Irrep> irr(2 * n, build_irrep(a1, a1.fundamental_weight(0)));
            TensorProduct tp(pointers(irr));
            const auto inv = invariants_basis(tp);
            CHECK(static_cast<long>(inv.size()) == catalan[n]);
            for (const auto& phi : inv) CHECK(is_invariant(tp, phi));
        }
        const RootSystem a2 = build_root_system("A2");
        std::vector<Irrep> irr(3, build_irrep(a2, a2.fundamental_weight(0)));
        TensorProduct tp(pointers(irr));
        CHECK(invariants_basis(tp).size() == 1);
    }

    TEST_CASE("sl2 block dimensions agree with the S-matrix formula") {
        const RootSystem a1 = build_root_system("A1");
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 25; ++trial) {
            const int k = 1 + static_cast<int>(rng() % 3);
            const int N = 2 + static_cast<int>(rng() % 4);
            std::vector<int> labels;
            std::vector<Irrep> irr;
            std::vector<Weight> ws;
            std::vector<Rational> z;
            for (int i = 0; i < N; ++i) {
                labels.push_back(static_cast<int>(rng() % (k + 1)));
                ws.push_back(Weight{{labels.back()}});
                irr.push_back(build_irrep(a1, ws.back()));
                z.push_back(ratio(3 * i * i + i + 1, 7));
            }
            TensorProduct tp(pointers(irr));
            const long oracle = sl2_verlinde(labels, k);
            CAPTURE(k);
            CAPTURE(labels);
            CHECK(conformal_block_basis(tp, z, k).dim() == oracle);
            CHECK(verlinde_dimension(a1, ws, k) == oracle);
            CHECK(fusion_path_count_sl2(labels, k) == oracle);
        }
    }

    TEST_CASE("A2 level 1 fusion is the Z3 group") {
        const RootSystem a2 = build_root_system("A2");
        const Weight alcove[] = {Weight{{0, 0}}, Weight{{1, 0}}, Weight{{0, 1}}};
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 12; ++trial) {
            const int N = 2 + static_cast<int>(rng() % 3);
            std::vector<Irrep> irr;
            std::vector<Rational> z;
            int triality = 0;
            for (int i = 0; i < N; ++i) {
                const int c = static_cast<int>(rng() % 3);
                triality += c;
                irr.push_back(build_irrep(a2, alcove[c]));
                z.push_back(ratio(2 * i + 1, i + 2));
            }
            TensorProduct tp(pointers(irr));
            CHECK(conformal_block_basis(tp, z, 1).dim() == (triality % 3 == 0 ? 1 : 0));
        }
    }

    TEST_CASE("blocks: subspace of invariants, everything at large level") {
        const RootSystem a1 = build_root_system("A1");
        std::vector<Irrep> irr(4, build_irrep(a1, a1.fundamental_weight(0)));
        TensorProduct tp(pointers(irr));
        const std::vector<Rational> z{0, 1, 3, 7};
        const auto b1 = conformal_block_basis(tp, z, 1);
        CHECK(b1.dim() == 1);
        CHECK(b1.invariants.size() == 2);
        for (const auto& phi : b1.basis) CHECK(is_invariant(tp, phi));
        CHECK(conformal_block_basis(tp, z, 3).dim() == 2);
    }
}
