#include "doctest.h"

#include <cmath>
#include <random>

#include "toda/chain_complex.hpp"
#include "toda/cubical.hpp"
#include "toda/formula_io.hpp"
#include "toda/rips.hpp"
#include "toda/sampled.hpp"

using namespace toda;

namespace {

std::vector<std::pair<int, int>> cycle(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return e;
}

Box square(double w, int n) {
    return Box{std::vector<double>(n, -w), std::vector<double>(n, w)};
}

CubicalConfig ambient(double w, int n, int res) {
    CubicalConfig c;
    c.ambient = true;
    c.box = square(w, n);
    c.resolution = res;
    return c;
}

}  // namespace

TEST_CASE("graph homology") {
    CHECK(betti_ranks(graph_complex(8, cycle(8))) == std::vector<long long>{1, 1});
    CHECK(betti_ranks(graph_complex(4, {{0, 1}, {2, 3}})) == std::vector<long long>{2, 0});
    CHECK(count_components(4, {{0, 1}, {2, 3}}) == 2);
}

TEST_CASE("filled square has trivial homology") {
    const auto c = flag_complex(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}}, 2);
    CHECK(c.cells == std::vector<int>{4, 5, 2});
    CHECK(betti_ranks(c) == std::vector<long long>{1, 0, 0});
    std::mt19937_64 rng(7);
    CHECK(boundary_squares_to_zero(c, rng));
}

TEST_CASE("hollow tetrahedron over several primes") {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) e.emplace_back(i, j);
    auto c = flag_complex(4, e, 2);
    for (std::uint32_t p : {2u, 3u, 5u}) CHECK(betti_ranks(c, p) == std::vector<long long>{1, 0, 1});
}

TEST_CASE("cubical boundary squares to zero") {
    const Formula f = parse_formula(
        "(sentence (free (X 2)) (body (atom <= (poly (mono 1 (X.0 2)) (mono 1 (X.1 2)) (mono 1 (X.2 2)) (mono -1)) 0)))");
    auto cfg = ambient(1.5, 3, 6);
    const auto c = cubical_complex(cubical_cover(f, cfg));
    std::mt19937_64 rng(3);
    CHECK(boundary_squares_to_zero(c, rng, 4, 3));
    CHECK(betti_ranks(c) == std::vector<long long>{1, 0, 0, 0});
}

TEST_CASE("circle band and sphere band") {
    const Formula band2 = parse_formula(
        "(sentence (free (X 1)) (body (and"
        " (atom <= (poly (mono 1 (X.0 2)) (mono 1 (X.1 2)) (mono -11/10)) 0)"
        " (atom >= (poly (mono 1 (X.0 2)) (mono 1 (X.1 2)) (mono -9/10)) 0))))");
    const auto e2 = poincare_cubical(band2, ambient(2, 2, 64));
    CHECK(e2.converged);
    CHECK(e2.poincare() == PoincarePolynomial({1, 1}));

    const Formula band3 = parse_formula(
        "(sentence (free (X 2)) (body (and"
        " (atom <= (poly (mono 1 (X.0 2)) (mono 1 (X.1 2)) (mono 1 (X.2 2)) (mono -13/10)) 0)"
        " (atom >= (poly (mono 1 (X.0 2)) (mono 1 (X.1 2)) (mono 1 (X.2 2)) (mono -7/10)) 0))))");
    const auto e3 = poincare_cubical(band3, ambient(1.5, 3, 32));
    CHECK(e3.converged);
    CHECK(e3.poincare() == PoincarePolynomial({1, 0, 1}));
}

TEST_CASE("sphere mode covers block spheres") {
    // the whole circle, then two arcs
    const Formula all = parse_formula("(sentence (free (X 1)) (body (atom = (poly (mono 0)) 0)))");
    CubicalConfig cfg;
    cfg.resolution = 32;
    const auto e = poincare_cubical(all, cfg, 3);
    CHECK(e.converged);
    CHECK(e.poincare() == PoincarePolynomial({1, 1}));
    CHECK(e.known_degree == 3);

    const Formula arcs =
        parse_formula("(sentence (free (X 1)) (body (atom >= (poly (mono 1 (X.0 2)) (mono -1/4)) 0)))");
    CHECK(poincare_cubical(arcs, cfg).poincare() == PoincarePolynomial({2}));

    const Formula s2 = parse_formula("(sentence (free (Z 2)) (body (atom = (poly (mono 0)) 0)))");
    cfg.resolution = 16;
    CHECK(poincare_cubical(s2, cfg).poincare() == PoincarePolynomial({1, 0, 1}));

    const Formula torus = parse_formula("(sentence (free (A 1) (B 0)) (body (atom = (poly (mono 0)) 0)))");
    CHECK(poincare_cubical(torus, cfg).poincare() == PoincarePolynomial({2, 2}));
}

TEST_CASE("cubical errors") {
    const Formula big = parse_formula("(sentence (free (X 4)) (body (atom = (poly (mono 0)) 0)))");
    CHECK_THROWS_AS(cubical_cover(big, CubicalConfig{}), FormulaError);
    const Formula f = parse_formula("(sentence (free (X 3)) (body (atom = (poly (mono 0)) 0)))");
    CubicalConfig cfg;
    cfg.resolution = 4096;
    CHECK_THROWS_WITH(cubical_cover(f, cfg), doctest::Contains("resolution overflow"));
}

TEST_CASE("rips invariants of a sampled circle") {
    PointCloud pc;
    pc.dim = 2;
    for (int i = 0; i < 60; ++i) {
        const double t = 2 * M_PI * i / 60;
        const double x[2] = {std::cos(t), std::sin(t)};
        pc.push(x);
    }
    CHECK(rips_components(pc, 0.2) == 1);
    CHECK(rips_components(pc, 0.05) == 60);
    CHECK(rips_h1_window(pc, 0.2, 0.4) == 1);
    // the hole is filled long before scale 2
    CHECK(rips_h1_window(pc, 0.2, 2.0) == 0);
    CHECK(maxmin_landmarks(pc, 4).size() == 4);
}

TEST_CASE("sampled estimates") {
    SampleConfig cfg;
    cfg.samples = 1500;
    cfg.box = Box{{-1.2, -1.2}, {1.2, 1.2}};
    const Formula annulus = parse_formula(
        "(sentence (free (X 1)) (body (and"
        " (atom <= (poly (mono 1 (X.0 2)) (mono 1 (X.1 2)) (mono -1)) 0)"
        " (atom >= (poly (mono 1 (X.0 2)) (mono 1 (X.1 2)) (mono -1/4)) 0))))");
    const auto a = poincare_sampled(annulus, cfg);
    CHECK(a.converged);
    CHECK(a.poincare() == PoincarePolynomial({1, 1}));

    const Formula disks = parse_formula(
        "(sentence (free (X 1)) (body (atom >= (poly (mono 1 (X.0 2)) (mono -1/2)) 0)))");
    cfg.box = Box{{-1.2, -1}, {1.2, 1}};
    const auto d = poincare_sampled(disks, cfg);
    CHECK(d.converged);
    CHECK(d.poincare() == PoincarePolynomial({2}));

    SampleConfig sphere;
    sphere.samples = 800;
    const Formula circle = parse_formula("(sentence (free (X 1)) (body (atom = (poly (mono 0)) 0)))");
    const auto c = poincare_sampled(circle, sphere, 3);
    CHECK(c.converged);
    CHECK(c.known_degree == 3);
    CHECK(c.poincare() == PoincarePolynomial({1, 1}));

    const Formula empty =
        parse_formula("(sentence (free (X 1)) (body (atom <= (poly (mono 1 (X.0 2)) (mono 1)) 0)))");
    sphere.samples = 50;
    const auto e = poincare_sampled(empty, sphere);
    CHECK(e.converged);
    CHECK(e.poincare().is_zero());
    CHECK(e.diagnostics["status"] == "likely empty");
}
