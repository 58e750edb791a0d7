#include "kzu/affine.hpp"

#include <doctest.h>

#include <algorithm>

using namespace kzu;

namespace {

// Level-1 graded dimensions: lattice theta series times the partition generating function.
std::vector<int> level_one_dims(int label, int max_degree) {
    std::vector<int> p(max_degree + 1, 0);
    p[0] = 1;
    for (int part = 1; part <= max_degree; ++part)
        for (int n = part; n <= max_degree; ++n) p[n] += p[n - part];
    std::vector<int> theta(max_degree + 1, 0);
    for (int n = -10; n <= 10; ++n) {
        const int e = label == 0 ? n * n : n * n + n;
        if (e <= max_degree) ++theta[e];
    }
    std::vector<int> out(max_degree + 1, 0);
    for (int a = 0; a <= max_degree; ++a)
        for (int b = 0; a + b <= max_degree; ++b) out[a + b] += theta[a] * p[b];
    return out;
}

bool word_nonzero(int level, int label, std::vector<int> word) {
    const auto rep = affine_bound_check(level, label, {word}, 4);
    REQUIRE(rep.records.size() == 1);
    return rep.records[0].nonzero;
}

}  // namespace

TEST_SUITE("affine") {
    TEST_CASE("level 1 modules have the lattice graded dimensions") {
        for (int j : {0, 1}) {
            CAPTURE(j);
            AffineSl2Module m(1, j, 6);
            CHECK(m.degree_dimensions() == level_one_dims(j, 6));
        }
        CHECK(level_one_dims(0, 6) == std::vector<int>{1, 3, 4, 7, 13, 19, 29});
    }

    TEST_CASE("low degrees at higher level") {
        for (int k : {2, 3}) {
            AffineSl2Module vac(k, 0, 1);
            CHECK(vac.degree_dimensions() == std::vector<int>{1, 3});  // top, then the adjoint
            AffineSl2Module top(k, k, 0);
            CHECK(top.degree_dimensions() == std::vector<int>{k + 1});
        }
    }

    TEST_CASE("integrability relations") {
        // f(-1)^(k+1) kills the vacuum; f(0)^(j+1) kills the top
        CHECK_FALSE(word_nonzero(1, 0, {-1, -1}));
        CHECK(word_nonzero(2, 0, {-1, -1}));
        CHECK_FALSE(word_nonzero(2, 0, {-1, -1, -1}));
        CHECK(word_nonzero(1, 1, {0}));
        CHECK_FALSE(word_nonzero(1, 1, {0, 0}));
        CHECK(word_nonzero(2, 2, {0, 0}));
        CHECK_FALSE(word_nonzero(2, 0, {0}));
        CHECK_FALSE(word_nonzero(1, 0, {1}));  // positive modes annihilate the top
    }

    TEST_CASE("admissible words respect the degree window") {
        const auto words = admissible_words(3, 4, 6);
        CHECK_FALSE(words.empty());
        for (const auto& w : words) {
            CHECK(w.size() >= 1);
            CHECK(w.size() <= 3);
            int deg = 0;
            for (auto it = w.rbegin(); it != w.rend(); ++it) {
                CHECK(std::abs(*it) <= 4);
                deg -= *it;
                CHECK(deg >= 0);
                CHECK(deg <= 6);
            }
        }
        CHECK(std::find(words.begin(), words.end(), std::vector<int>{-1, -1}) != words.end());
    }

    TEST_CASE("no counterexample to the bound") {
        const auto words = admissible_words(3, 4, 6);
        for (int k : {1, 2})
            for (int j = 0; j <= k; ++j) {
                const auto rep = affine_bound_check(k, j, words, 6);
                CAPTURE(k);
                CAPTURE(j);
                CHECK(rep.counterexamples == 0);
                CHECK(rep.nonzero_words > 0);
                for (const auto& r : rep.records)
                    if (r.nonzero) CHECK(r.lhs <= r.bound);
            }
    }
}
