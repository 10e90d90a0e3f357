#include "doctest.h"

#include <cmath>

#include "toda/bruteforce.hpp"
#include "toda/formula_io.hpp"

using namespace toda;

TEST_CASE("sphere grids") {
    const auto g0 = sphere_grid(0, 17);
    REQUIRE(g0.count() == 2);
    CHECK(g0.points[0][0] == 1.0);
    CHECK(g0.points[1][0] == -1.0);

    const auto g1 = sphere_grid(1, 8);
    REQUIRE(g1.count() == 8);
    for (std::size_t i = 0; i < g1.count(); ++i) {
        double best = 10;
        for (std::size_t j = 0; j < g1.count(); ++j) {
            if (i == j) continue;
            const double dot = g1.points[i][0] * g1.points[j][0] + g1.points[i][1] * g1.points[j][1];
            best = std::min(best, std::acos(std::clamp(dot, -1.0, 1.0)));
        }
        CHECK(best < 1.0);
    }

    for (int dim : {2, 3, 4}) {
        const auto g = sphere_grid(dim, 500);
        CHECK(g.count() >= 500);
        for (const auto& p : g.points) {
            double n = 0;
            for (double c : p) n += c * c;
            CHECK(std::abs(n - 1) < 1e-12);
        }
    }
    CHECK(sphere_grid(2, 500).points == sphere_grid(2, 500).points);
}

TEST_CASE("brute force examples") {
    CHECK(brute_decide(parse_formula("(sentence (prefix (exists Z 1)) (body (atom = (poly (mono 1 (Z.0 1))) 0)))"))
              .truth == Truth::True);
    CHECK(brute_decide(parse_formula("(sentence (prefix (forall Z 1))"
                                     " (body (atom >= (poly (mono 1 (Z.0 2)) (mono 1 (Z.1 2)) (mono -1/2)) 0)))"))
              .truth == Truth::True);
    const auto s0 = brute_decide(parse_formula(
        "(sentence (prefix (forall Y 0) (exists Z 0)) (body (atom >= (poly (mono 1 (Y.0 1) (Z.0 1)) (mono -1/2)) 0)))"));
    CHECK(s0.truth == Truth::True);
    CHECK(s0.exact);
    CHECK(brute_decide(parse_formula("(sentence (prefix (exists Z 2)) (body (atom >= (poly (mono 1 (Z.0 1)) (mono -2)) 0)))"))
              .truth == Truth::False);
}

TEST_CASE("margins produce unknown near the boundary") {
    // the maximum of Z.0 is exactly 1
    const Formula f = parse_formula("(sentence (prefix (exists Z 1)) (body (atom >= (poly (mono 1 (Z.0 1)) (mono -1)) 0)))");
    const auto r = brute_decide(f);
    CHECK(r.truth == Truth::Unknown);
    CHECK(!r.strict);
    CHECK(r.lenient);
}

TEST_CASE("refinement does not flip robust answers") {
    const char* robust[] = {
        "(sentence (prefix (forall Y 1) (exists Z 1))"
        " (body (atom >= (poly (mono 1 (Y.0 1) (Z.0 1)) (mono 1 (Y.1 1) (Z.1 1)) (mono -1/2)) 0)))",
        "(sentence (prefix (exists Y 1) (forall Z 1)) (body (atom >= (poly (mono 1 (Y.0 1) (Z.0 1)) (mono 1/2)) 0)))",
    };
    for (const char* text : robust) {
        const Formula f = parse_formula(text);
        BruteConfig coarse;
        coarse.delta = 0.1;
        coarse.count_s1 = 32;
        BruteConfig fine = coarse;
        fine.count_s1 = 64;
        const Truth a = brute_decide(f, coarse).truth;
        const Truth b = brute_decide(f, fine).truth;
        CHECK(a != Truth::Unknown);
        CHECK((b == a || b == Truth::Unknown));
    }
}

TEST_CASE("free blocks are rejected") {
    CHECK_THROWS_AS(brute_decide(parse_formula("(sentence (free (X 0)) (body (atom = (poly (mono 0)) 0)))")),
                    FormulaError);
}
