#include "kzu/kzflow.hpp"

#include <doctest.h>

#include <numbers>

using namespace kzu;

namespace {

struct Chain {
    RootSystem rs;
    std::vector<Irrep> irr;
    std::unique_ptr<TensorProduct> tp;
    LieStructure lie;
    std::vector<InvariantFunctional> inv;

    Chain(const char* name, const std::vector<Weight>& ws) : rs(build_root_system(name)) {
        for (const auto& w : ws) irr.push_back(build_irrep(rs, w));
        std::vector<const Irrep*> p;
        for (const auto& x : irr) p.push_back(&x);
        tp = std::make_unique<TensorProduct>(p);
        lie = lie_structure(rs);
        inv = invariants_basis(*tp);
    }
};

std::vector<Weight> spins(int n) { return std::vector<Weight>(n, Weight{{1}}); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

const Config kBase{0., 1., 2., 3.};

}  // namespace

TEST_SUITE("kzflow") {
    TEST_CASE("two-point Casimir eigenvalues from the Casimir of each summand") {
        const RootSystem a1 = build_root_system("A1");
        const LieStructure lie = lie_structure(a1);
        const Irrep v = build_irrep(a1, Weight{{1}});
        const RatMatrix om = two_point_casimir(v, v, lie);
        // V x V = V_2 + V_0: (C(2w) - 2 C(w))/2 = 1/2 and (0 - 2 C(w))/2 = -3/2
        const Rational up = (casimir_eigenvalue(a1, Weight{{2}}) - 2 * casimir_eigenvalue(a1, Weight{{1}})) / 2;
        const Rational down = -casimir_eigenvalue(a1, Weight{{1}});
        CHECK(up == ratio(1, 2));
        CHECK(down == ratio(-3, 2));
        const RatMatrix I = RatMatrix::identity(4);
        CHECK(((om - I * up) * (om - I * down)).is_zero());
    }

    TEST_CASE("orthonormal-basis Casimir tensor equals the exact one, in any rotated basis") {
        const RootSystem a2 = build_root_system("A2");
        const LieStructure lie = lie_structure(a2);
        const Irrep v = build_irrep(a2, Weight{{1, 0}});
        const Irrep w = build_irrep(a2, Weight{{1, 1}});
        const CMatrix exact = to_complex(two_point_casimir(v, w, lie));
        for (unsigned seed : {0u, 3u, 99u}) {
            const auto Jv = killing_orthonormal_basis(v, lie, seed);
            const auto Jw = killing_orthonormal_basis(w, lie, seed);
            CMatrix sum = CMatrix::Zero(exact.rows(), exact.cols());
            for (std::size_t a = 0; a < Jv.size(); ++a) sum += kron(Jv[a], Jw[a]);
            CHECK((sum - exact).norm() < 1e-12 * exact.norm());
        }
    }

    TEST_CASE("connection: translation invariance and two-point antisymmetry") {
        Chain c("A1", spins(4));
        KZSystem sys(*c.tp, c.lie, c.inv, 2);
        const Config z{Complex(0.1, 0.2), 1.3, Complex(2.0, -0.4), 3.7};
        CMatrix total = CMatrix::Zero(sys.dim(), sys.dim());
        for (int i = 0; i < 4; ++i) total += sys.connection(i, z);
        CHECK(total.norm() < 1e-14);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) CHECK(sys.residue(i, j) == sys.residue(j, i));

        Chain two("A1", spins(2));
        KZSystem s2(*two.tp, two.lie, two.inv, 1);
        const Config w{0.2, Complex(1.0, 0.5)};
        CHECK((s2.connection(0, w) + s2.connection(1, w)).norm() < 1e-15);
    }

    TEST_CASE("two points: transport matches (z1 - z2)^(K/kappa)") {
        Chain c("A1", spins(2));
        for (int k : {1, 2, 5}) {
            KZSystem sys(*c.tp, c.lie, c.inv, k);
            REQUIRE(sys.dim() == 1);
            const double K = to_double(sys.residue(0, 1)(0, 0));
            CHECK(K == doctest::Approx(-1.5));
            const Config a{0., 1.}, b{Complex(0, 0.3), Complex(1.7, 0.2)};
            const auto tr = parallel_transport(sys, {a, b}, CMatrix::Identity(1, 1));
            const Complex expected = std::exp(K / (k + 2) * (std::log(b[0] - b[1]) - std::log(a[0] - a[1])));
            CHECK(std::abs(tr.matrix(0, 0) - expected) < 1e-9);
        }
    }

    TEST_CASE("transport: there and back, contractible loops and conjugated monodromy") {
        Chain c("A1", spins(4));
        KZSystem sys(*c.tp, c.lie, c.inv, 2);
        const CMatrix I = CMatrix::Identity(sys.dim(), sys.dim());
        const std::vector<Config> p{kBase, Config{Complex(0, 0.1), 1., Complex(2.2, -0.3), 3.1}};
        CHECK((parallel_transport(sys, concat_paths(p, reverse_path(p)), I).matrix - I).norm() < 1e-9);

        CHECK((monodromy_matrix(sys, rectangle_loop(kBase, 1, 0.3, 0.2)) - I).norm() < 1e-9);

        const CMatrix M = monodromy_matrix(sys, braid_loop(kBase, 1, 2));
        CHECK((M - I).norm() > 0.1);
        const CMatrix T = parallel_transport(sys, p, I).matrix;
        const CMatrix Mp = monodromy_matrix(sys, concat_paths(concat_paths(reverse_path(p), braid_loop(kBase, 1, 2)), p));
        CHECK((Mp - T * M * T.inverse()).norm() < 1e-8);
    }

    TEST_CASE("braid relations and block-subspace preservation at level 1") {
        Chain c("A1", spins(4));
        KZSystem sys(*c.tp, c.lie, c.inv, 1);
        CHECK(sys.braid_relations_hold());
        const CMatrix B = block_subspace(*c.tp, c.inv, kBase, 1);
        REQUIRE(B.cols() == 1);
        for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}}) {
            const CMatrix M = monodromy_matrix(sys, braid_loop(kBase, i, j));
            const CMatrix m = B.adjoint() * M * B;
            CHECK((M * B - B * m).norm() < 1e-9);
            CHECK(std::abs(std::abs(m(0, 0)) - 1) < 1e-9);
        }
        // the block subspace also moves with the points by transport
        const std::vector<Config> p{kBase, Config{0., Complex(1.1, 0.2), 2., 3.}};
        const CMatrix T = parallel_transport(sys, p, CMatrix::Identity(2, 2)).matrix;
        const CMatrix B2 = block_subspace(*c.tp, c.inv, p.back(), 1);
        const CMatrix moved = T * B;
        CHECK((moved - B2 * (B2.adjoint() * moved)).norm() < 1e-9 * moved.norm());
    }

    TEST_CASE("residues do not depend on the normalization of root vectors") {
        const RootSystem a2 = build_root_system("A2");
        const LieStructure lie = lie_structure(a2);
        std::vector<Weight> ws{Weight{{1, 0}}, Weight{{0, 1}}, Weight{{1, 0}}, Weight{{0, 1}}};
        std::vector<Irrep> plain, scaled;
        for (const auto& w : ws) {
            plain.push_back(build_irrep(a2, w));
            scaled.push_back(build_irrep(a2, w));
            scaled.back().rescale_root_vector(2, ratio(5, 3));
        }
        std::vector<const Irrep*> pp, ps;
        for (std::size_t i = 0; i < ws.size(); ++i) {
            pp.push_back(&plain[i]);
            ps.push_back(&scaled[i]);
        }
        TensorProduct tp(pp), ts(ps);
        const auto inv = invariants_basis(tp);
        KZSystem a(tp, lie, inv, 1), b(ts, lie, inv, 1);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) CHECK(a.residue(i, j) == b.residue(i, j));
    }

    TEST_CASE("integrator against a matrix exponential") {
        CMatrix X(2, 2);
        X << Complex(0.3, 0.1), 0., 0., Complex(-0.7, 0.4);
        ConnectionFn conn = [&](const Config&, const Config& dz) { return CMatrix(X * dz[0].real()); };
        const std::vector<Config> path{Config{0., 5.}, Config{2.5, 5.}};
        TransportOptions opt;
        opt.tol = 1e-12;
        const auto tr = transport_general(conn, 2, path, CMatrix::Identity(2, 2), opt);
        CHECK(std::abs(tr.matrix(0, 0) - std::exp(2.5 * X(0, 0))) < 1e-10);
        CHECK(std::abs(tr.matrix(1, 1) - std::exp(2.5 * X(1, 1))) < 1e-10);
        CHECK(tr.length == doctest::Approx(2.5));
    }

    TEST_CASE("non-flat control has curvature slope 1") {
        CMatrix X(2, 2), Y(2, 2);
        X << 0, 1, 0, 0;
        Y << 0, 0, 1, 0;
        ConnectionFn conn = [&](const Config&, const Config& dz) {
            return CMatrix(X * dz[0].real() + Y * dz[0].imag());
        };
        const auto rep = rectangle_curvature_general(conn, 2, Config{0., 1.}, 0, 0.2, 3, {});
        CHECK(rep.slope_within);
        CHECK(rep.slope == doctest::Approx(1).epsilon(0.05));
    }

    TEST_CASE("paths must stay off the diagonal") {
        Chain c("A1", spins(2));
        KZSystem sys(*c.tp, c.lie, c.inv, 1);
        const std::vector<Config> bad{Config{0., 1.}, Config{0., Complex(0, 0)}};
        CHECK_THROWS_AS(parallel_transport(sys, bad, CMatrix::Identity(1, 1)), std::domain_error);
        CHECK(min_separation(Config{0., 3., Complex(0, 1)}) == doctest::Approx(1));
    }
}
