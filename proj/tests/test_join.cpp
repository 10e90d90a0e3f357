#include "doctest.h"

#include <cmath>
#include <random>

#include "toda/formula_io.hpp"
#include "toda/join.hpp"
#include "toda/sampled.hpp"

using namespace toda;

namespace {

int free_coords(const Formula& f) {
    int n = 0;
    for (const auto& b : f.free_blocks()) n += b.coord_count();
    return n;
}

JoinSpec spec_for(const Formula& phi, int p, JoinVariant v) {
    JoinSpec s;
    s.param = phi.free_blocks()[0];
    for (std::size_t i = 1; i < phi.free_blocks().size(); ++i) s.joined.push_back(phi.free_blocks()[i]);
    s.p = p;
    s.variant = v;
    return s;
}

}  // namespace

TEST_CASE("ambient coordinate count") {
    const Formula phi = parse_formula("(sentence (free (X 0) (Z 1)) (body (atom >= (poly (mono 1 (Z.0 1))) 0)))");
    const JoinSpec s = spec_for(phi, 1, JoinVariant::Closed);
    CHECK(join_N(s) == 7);
    const Formula out = build_closed_join(phi, s);
    CHECK(free_coords(out) == 8);
    CHECK(classify_topology(out) == Topology::Closed);
    CHECK(out.free_blocks()[1].radius_sq == join_sphere_constant(s) - 1);

    JoinSpec wide = s;
    wide.p = 3;
    CHECK(join_N(wide) == 1 + 4 * 3);
}

TEST_CASE("open join thickening and strictness") {
    const Formula phi = parse_formula("(sentence (free (X 0) (Z 1)) (body (atom > (poly (mono 1 (Z.0 1))) 0)))");
    const Formula out = build_open_join(phi, spec_for(phi, 1, JoinVariant::Open));
    CHECK(classify_topology(out) == Topology::Open);
    const std::string text = print_formula(out);
    CHECK(text.find("(mono -3/4)") != std::string::npos);
    CHECK(text.find("(mono -5/4)") != std::string::npos);
    CHECK_THROWS_AS(build_closed_join(phi, spec_for(phi, 1, JoinVariant::Closed)), FormulaError);
}

TEST_CASE("unsatisfiable input gives an empty join") {
    const Formula phi = parse_formula("(sentence (free (X 0) (Z 1)) (body (atom >= (poly (mono -1)) 0)))");
    const Formula out = build_closed_join(phi, spec_for(phi, 1, JoinVariant::Closed));
    SampleConfig cfg;
    cfg.samples = 300;
    const auto e = poincare_sampled(restrict_fiber(out, "X", {make_rational(1)}), cfg, 0);
    CHECK(e.converged);
    CHECK(e.poincare().is_zero());

    const Formula never = parse_formula("(sentence (free (X 0) (Z 1)) (body (atom > (poly (mono -1)) 0)))");
    const Formula open = build_open_join(never, spec_for(never, 1, JoinVariant::Open));
    const auto o = poincare_sampled(restrict_fiber(open, "X", {make_rational(1)}), cfg, 0);
    CHECK(o.converged);
    CHECK(o.poincare().is_zero());
}

TEST_CASE("join of S^0 x S^0 has two components") {
    const Formula phi = parse_formula("(sentence (free (Y 0) (Z 0)) (body (atom = (poly (mono 0)) 0)))");
    const Formula out = build_closed_join(phi, spec_for(phi, 1, JoinVariant::Closed));
    CHECK(free_coords(out) == 6);
    SampleConfig cfg;
    cfg.samples = 3000;
    cfg.radius = 0.5;
    const auto e = poincare_sampled(out, cfg, 0);
    CHECK(e.converged);
    CHECK(e.betti.at(0) == 2);
}

TEST_CASE("inner quantifiers are copied per join copy") {
    const Formula psi = parse_formula(
        "(sentence (free (X 0) (Y 1)) (prefix (exists W 1))"
        " (body (atom >= (poly (mono 1 (Y.0 1) (W.0 1))) 0)))");
    const Formula out = pull_quantifiers(psi, spec_for(psi, 1, JoinVariant::Closed));
    REQUIRE(out.prefix().size() == 1);
    CHECK(out.prefix()[0].quantifier == Quantifier::Exists);
    CHECK(out.prefix()[0].blocks.size() == 2);
    CHECK(out.prefix()[0].blocks[1].name == copy_name("W", "1", 1));

    JoinSpec bad = spec_for(psi, -1, JoinVariant::Closed);
    CHECK_THROWS_WITH(pull_quantifiers(psi, bad), doctest::Contains("copy-count"));
}

TEST_CASE("fresh name collisions are rejected") {
    const Formula phi =
        parse_formula("(sentence (free (X 0) (Z 1) (V#1 0)) (body (atom >= (poly (mono 1 (Z.0 1))) 0)))");
    JoinSpec s;
    s.param = phi.free_blocks()[0];
    s.carried = {phi.free_blocks()[2]};
    s.joined = {phi.free_blocks()[1]};
    CHECK_THROWS_AS(build_closed_join(phi, s), FormulaError);
}

TEST_CASE("building commutes with fixing the parameter") {
    const Formula phi = parse_formula(
        "(sentence (free (X 1) (Z 1)) (body (atom >= (poly (mono 1 (X.0 1) (Z.0 1)) (mono 1/3 (X.1 2))) 0)))");
    const std::vector<Rational> x{make_rational(3, 5), make_rational(4, 5)};
    std::map<Var, Polynomial> at;
    at[Var{"X", 0}] = Polynomial(x[0]);
    at[Var{"X", 1}] = Polynomial(x[1]);
    const Formula fixed(phi.free_blocks(), {}, substitute(phi.matrix(), at));
    const JoinSpec s = spec_for(phi, 1, JoinVariant::Closed);
    const Formula a = restrict_fiber(build_closed_join(phi, s), "X", x);
    const Formula b = restrict_fiber(build_closed_join(fixed, s), "X", x);
    CHECK(structurally_equal(a, b));
}

TEST_CASE("shell normalization fast paths") {
    const VarBlock X = VarBlock::sphere("X", 1);
    const Polynomial x0 = Polynomial::variable(Var{"X", 0});
    const Polynomial x1 = Polynomial::variable(Var{"X", 1});
    // even homogeneous atoms are kept as they are
    const Atom even{x0 * x0 - x1 * x1, Sign::Gt};
    CHECK(structurally_equal(shell_normalize(even, {X}), make_atom(even.poly, even.sign)));
    const Atom lin{x0, Sign::Gt};
    CHECK(structurally_equal(shell_normalize(lin, {X}), make_atom(x0, Sign::Gt)));

    // mixed degree: x0 + 1/2 > 0 at x/|x|
    const Atom mixed{x0 + Polynomial(make_rational(1, 2)), Sign::Gt};
    const Expr e = shell_normalize(mixed, {X});
    CHECK(classify_matrix(e) == Topology::Open);
    const Formula f({X}, {}, e);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    int checked = 0;
    while (checked < 300) {
        const double a = u(rng);
        const double b = u(rng);
        const double s = a * a + b * b;
        if (s <= 0.5 || s >= 1.5) continue;
        const double direct = a / std::sqrt(s) + 0.5;
        if (std::abs(direct) < 1e-9) continue;
        CHECK(eval_formula(f, NumericPoint{{"X", {a, b}}}) == (direct > 0));
        ++checked;
    }
}
