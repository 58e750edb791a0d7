#include "kzu/rootsys.hpp"

#include <doctest.h>

#include <map>

using namespace kzu;

namespace {

// Classical tables (Bourbaki numbering), typed in independently of the library.
struct Known {
    int positive_roots;
    int dual_coxeter;
    std::vector<int> highest_root;
};

Known known(CartanType t, int n) {
    switch (t) {
        case CartanType::A: return {n * (n + 1) / 2, n + 1, std::vector<int>(n, 1)};
        case CartanType::B: {
            std::vector<int> th(n, 2);
            th[0] = 1;
            return {n * n, 2 * n - 1, th};
        }
        case CartanType::C: {
            std::vector<int> th(n, 2);
            th[n - 1] = 1;
            return {n * n, n + 1, th};
        }
        case CartanType::D: {
            std::vector<int> th(n, 2);
            th[0] = th[n - 2] = th[n - 1] = 1;
            return {n * (n - 1), 2 * n - 2, th};
        }
        case CartanType::E:
            if (n == 6) return {36, 12, {1, 2, 2, 3, 2, 1}};
            if (n == 7) return {63, 18, {2, 2, 3, 4, 3, 2, 1}};
            return {120, 30, {2, 3, 4, 6, 5, 4, 3, 2}};
        case CartanType::F: return {24, 9, {2, 3, 4, 2}};
        case CartanType::G: return {6, 4, {3, 2}};
    }
    return {};
}

}  // namespace

TEST_SUITE("rootsys") {
    TEST_CASE("type list up to rank 8") {
        std::map<char, int> count;
        for (auto [t, n] : all_simple_types(8)) ++count[type_letter(t)];
        CHECK(count['A'] == 8);
        CHECK(count['B'] == 7);  // B2..B8
        CHECK(count['C'] == 6);  // C3..C8
        CHECK(count['D'] == 5);  // D4..D8
        CHECK(count['E'] == 3);
        CHECK(count['F'] == 1);
        CHECK(count['G'] == 1);
    }

    TEST_CASE("root counts, dual Coxeter numbers and highest roots match the tables") {
        for (auto [t, n] : all_simple_types(8)) {
            const RootSystem rs = build_root_system(t, n);
            const Known k = known(t, n);
            CAPTURE(rs.name());
            CHECK(static_cast<int>(rs.positive_roots().size()) == k.positive_roots);
            CHECK(rs.dual_coxeter() == k.dual_coxeter);
            CHECK(rs.highest_root().coords == k.highest_root);
            CHECK(rs.dimension() == static_cast<std::size_t>(n + 2 * k.positive_roots));
        }
    }

    TEST_CASE("invariant form: (theta, theta) = 2 and Cartan integers recovered") {
        for (auto [t, n] : all_simple_types(8)) {
            const RootSystem rs = build_root_system(t, n);
            CAPTURE(rs.name());
            CHECK(rs.inner(rs.highest_root(), rs.highest_root()) == 2);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    CHECK(Rational(2) * rs.gram()(i, j) / rs.gram()(j, j) == rs.cartan()[i][j]);
        }
    }

    TEST_CASE("hand-written Cartan matrices") {
        CHECK(cartan_matrix(CartanType::A, 2) == std::vector<std::vector<int>>{{2, -1}, {-1, 2}});
        CHECK(cartan_matrix(CartanType::B, 2) == std::vector<std::vector<int>>{{2, -2}, {-1, 2}});
        CHECK(cartan_matrix(CartanType::G, 2) == std::vector<std::vector<int>>{{2, -1}, {-3, 2}});
        // G2 short root has squared length 2/3 when (theta, theta) = 2
        const RootSystem g2 = build_root_system("G2");
        CHECK(g2.gram()(0, 0) == ratio(2, 3));
        CHECK(g2.gram()(1, 1) == 2);
    }

    TEST_CASE("witness orderings: every prefix sum is a positive root") {
        for (const char* name : {"A4", "B3", "C4", "D5", "G2", "F4", "E6"}) {
            const RootSystem rs = build_root_system(name);
            for (const auto& delta : rs.positive_roots()) {
                const auto dec = decompose_positive_root(rs, delta);
                std::vector<int> partial(rs.rank(), 0);
                for (int i : dec.witness) {
                    ++partial[i];
                    CHECK(rs.is_positive_root(partial));
                }
                CHECK(partial == delta.coords);
            }
        }
    }

    TEST_CASE("lemma suite passes for every type up to rank 8") {
        for (auto [t, n] : all_simple_types(8)) {
            const auto rep = check_root_inequalities(build_root_system(t, n));
            CAPTURE(rep.algebra);
            CHECK(rep.pass);
            CHECK(rep.identity_pass);
        }
    }

    TEST_CASE("A2 root alpha1 + alpha2 by hand") {
        // I = (a1, a2) = -1, sum of squares = 4 = 2 g* - 2 < 2 g* = 6
        const auto rep = check_root_inequalities(build_root_system("A2"));
        REQUIRE(rep.records.size() == 1);
        CHECK(rep.records[0].i_delta == -1);
        CHECK(rep.records[0].sum_squares == 4);
        CHECK(rep.records[0].two_gstar == 6);
        CHECK(rep.theta_weighted_squares == 4);
    }

    TEST_CASE("alcove and root lattice") {
        const RootSystem a2 = build_root_system("A2");
        const Weight adj{{1, 1}};
        CHECK(a2.in_alcove(adj, 2));
        CHECK_FALSE(a2.in_alcove(adj, 1));
        CHECK(a2.in_root_lattice(adj));
        CHECK_FALSE(a2.in_root_lattice(a2.fundamental_weight(0)));
        // rho = sum of fundamental weights = half the sum of positive roots
        CHECK(a2.weight_to_root_coords(a2.rho()) == RatVector{1, 1});
    }

    TEST_CASE("bad names are rejected") {
        CHECK_THROWS(build_root_system("A0"));
        CHECK_THROWS(build_root_system("E9"));
        CHECK_THROWS(build_root_system("X3"));
        CHECK_THROWS(build_root_system("D3"));
    }
}
