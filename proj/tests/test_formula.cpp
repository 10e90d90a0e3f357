#include "doctest.h"

#include <random>

#include "toda/formula_io.hpp"

using namespace toda;

namespace {

Polynomial v(const std::string& part, int i) { return Polynomial::variable(Var{part, i}); }
Polynomial c(long n, long d = 1) { return Polynomial(make_rational(n, d)); }

Formula qf(std::vector<VarBlock> blocks, Expr m) { return Formula(std::move(blocks), {}, std::move(m)); }

}  // namespace

TEST_CASE("parse a one-block existential sentence") {
    const Formula f = parse_formula("(sentence (prefix (exists Z 1)) (body (atom >= (poly (mono 1 (Z.0 1))) 0)))");
    REQUIRE(f.prefix().size() == 1);
    CHECK(f.prefix()[0].quantifier == Quantifier::Exists);
    CHECK(f.prefix()[0].blocks[0].sphere_dim() == 1);
    CHECK(f.free_blocks().empty());
    CHECK(classify_topology(f) == Topology::Closed);
}

TEST_CASE("round trip is structural identity") {
    const char* corpus[] = {
        "(sentence (prefix (exists Z 1)) (body (atom >= (poly (mono 1 (Z.0 1))) 0)))",
        "(sentence (free (X 1) (Y 0)) (prefix (forall A 2) (exists B 0))"
        " (body (or (atom = (poly (mono 2/4 (A.0 2)) (mono -1)) 0) (not (atom < (poly (mono 1 (X.1 1) (B.0 1))) 0)))))",
        "(sentence (free (X 0) (V#1 (radius2 5) (parts (Y 0) (T#1 1) (U#1 0))))"
        " (prefix (exists (Z#1#0 1) (Z#1#1 1))) (body (and (atom != (poly (mono 0)) 0) (atom > (poly (mono 1 (U#1.0 1))) 0))))",
    };
    for (const char* text : corpus) {
        const Formula f = parse_formula(text);
        const std::string printed = print_formula(f);
        const Formula g = parse_formula(printed);
        CHECK(structurally_equal(f, g));
        CHECK(print_formula(g) == printed);
    }
}

TEST_CASE("canonical rationals in printing") {
    const Formula f = parse_formula("(sentence (free (X 0)) (body (atom >= (poly (mono 2/4 (X.0 1))) 0)))");
    CHECK(print_formula(f).find("(mono 1/2 (X.0 1))") != std::string::npos);
}

TEST_CASE("parse errors are distinguished") {
    try {
        parse_formula("(sentence (prefix (exists A 1) (exists B 1)) (body (atom >= (poly (mono 1)) 0)))");
        FAIL("expected alternation error");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ErrorKind::Alternation);
        CHECK(e.line() == 1);
    }
    try {
        parse_formula("(sentence (prefix (exists A 1))\n (body (atom >= (poly (mono 1 (Q.0 1))) 0)))");
        FAIL("expected unknown variable");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ErrorKind::UnknownVariable);
    }
    try {
        parse_formula("(sentence (prefix (exists A 1))\n  (body (atom >= (poly (mono 1 (A.0 1)) 0)))");
        FAIL("expected syntax error");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ErrorKind::Syntax);
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_formula("(sentence (prefix (exists A 1)) (body (atom >= (poly (mono 1 (A.2 1))) 0)))"),
                    ParseError);
    CHECK_THROWS_AS(Formula({VarBlock::sphere("X", 1)}, {}, nullptr), FormulaError);
}

TEST_CASE("eval_formula basic atoms") {
    const VarBlock X = VarBlock::sphere("X", 1);
    CHECK(eval_formula(qf({X}, make_atom(v("X", 0), Sign::Ge)), ExactPoint{{"X", {1, 0}}}));
    const Expr circle = make_atom(v("X", 0).pow(2) + v("X", 1).pow(2) - c(1), Sign::Eq);
    CHECK(eval_formula(qf({X}, circle), ExactPoint{{"X", {make_rational(3, 5), make_rational(4, 5)}}}));
    CHECK(eval_formula(qf({X}, make_not(make_atom(v("X", 0), Sign::Gt))), ExactPoint{{"X", {0, 1}}}));
    CHECK_THROWS_AS(eval_formula(qf({X}, circle), ExactPoint{}), FormulaError);
}

TEST_CASE("nnf complement flips signs and quantifiers") {
    const Formula f = parse_formula(
        "(sentence (free (X 1)) (prefix (forall Z 1))"
        " (body (and (atom >= (poly (mono 1 (Z.0 1))) 0) (atom = (poly (mono 1 (X.0 1) (Z.1 1))) 0))))");
    const Formula g = to_nnf_complement(f);
    CHECK(g.prefix()[0].quantifier == Quantifier::Exists);
    REQUIRE(g.matrix()->kind == NodeKind::Or);
    CHECK(g.matrix()->children[0]->atom.sign == Sign::Lt);
    CHECK(g.matrix()->children[1]->atom.sign == Sign::Ne);
    CHECK(classify_topology(g) == Topology::Open);
    CHECK(classify_topology(to_nnf_complement(g)) == Topology::Closed);
    CHECK(structurally_equal(to_nnf_complement(g), f));
}

TEST_CASE("classification is syntactic") {
    const VarBlock X = VarBlock::sphere("X", 1);
    const Expr p = make_atom(v("X", 0), Sign::Ge);
    const Expr q0 = make_atom(v("X", 1), Sign::Eq);
    const Expr q1 = make_atom(v("X", 1), Sign::Gt);
    CHECK(classify_topology(qf({X}, make_and({p, q0}))) == Topology::Closed);
    CHECK(classify_topology(qf({X}, make_or({q1, make_atom(v("X", 0), Sign::Lt)}))) == Topology::Open);
    CHECK(classify_topology(qf({X}, make_and({p, q1}))) == Topology::Unknown);
    CHECK(classify_topology(qf({X}, make_not(p))) == Topology::Unknown);
}

TEST_CASE("nnf soundness and restriction commute on random points") {
    const VarBlock X = VarBlock::sphere("X", 1);
    const VarBlock Y = VarBlock::sphere("Y", 2);
    const Expr m = make_or({
        make_and({make_atom(v("X", 0) * v("Y", 0) - c(1, 4), Sign::Ge), make_atom(v("Y", 2), Sign::Le)}),
        make_not(make_atom(v("X", 1).pow(2) - v("Y", 1), Sign::Gt)),
        make_atom(v("X", 0) + v("Y", 1) * v("Y", 2), Sign::Eq),
    });
    const Formula f = qf({X, Y}, m);
    const Formula g = to_nnf_complement(f);
    std::mt19937_64 rng(7);
    // Rational points on circles and spheres from Pythagorean parametrisations.
    auto circle = [&](Rational t) {
        const Rational d = 1 + t * t;
        return std::vector<Rational>{(1 - t * t) / d, 2 * t / d};
    };
    std::uniform_int_distribution<int> pick(-12, 12);
    int agree_nnf = 0;
    int agree_restrict = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto x = circle(make_rational(pick(rng), 4));
        const Rational s = make_rational(pick(rng), 3);
        const Rational t = make_rational(pick(rng), 5);
        const Rational d = 1 + s * s + t * t;
        std::vector<Rational> y{(s * s + t * t - 1) / d, 2 * s / d, 2 * t / d};
        if (i % 7 == 0) y = {0, 0, 1};
        if (i % 11 == 0) y = {0, 1, 0};
        const ExactPoint pt{{"X", x}, {"Y", y}};
        REQUIRE(on_spheres(f, pt));
        if (eval_formula(g, pt) == !eval_formula(f, pt)) ++agree_nnf;
        const Formula r = restrict_fiber(f, "X", x);
        if (eval_formula(r, ExactPoint{{"Y", y}}) == eval_formula(f, pt)) ++agree_restrict;
    }
    CHECK(agree_nnf == 1000);
    CHECK(agree_restrict == 1000);
}

TEST_CASE("restrict_fiber simplifies and validates") {
    const VarBlock X = VarBlock::sphere("X", 1);
    const VarBlock Y = VarBlock::sphere("Y", 1);
    const Formula f = qf({X, Y}, make_atom(v("X", 0) * v("Y", 0), Sign::Ge));
    const Formula a = restrict_fiber(f, "X", {1, 0});
    CHECK(a.matrix()->atom.poly == v("Y", 0));
    CHECK(a.free_blocks().size() == 1);
    const Formula b = restrict_fiber(f, "X", {0, 1});
    CHECK(b.matrix()->atom.poly.is_zero());
    CHECK(eval_formula(b, ExactPoint{{"Y", {1, 0}}}));
    CHECK_THROWS_AS(restrict_fiber(f, "X", {1, 0, 0}), FormulaError);
    try {
        restrict_fiber(f, "X", {1, 1});
        FAIL("expected off-sphere error");
    } catch (const FormulaError& e) {
        CHECK(e.kind() == ErrorKind::OffSphere);
    }
}

TEST_CASE("binary64 tolerance semantics are negation consistent") {
    const VarBlock X = VarBlock::sphere("X", 0);
    for (Sign s : {Sign::Eq, Sign::Ge, Sign::Gt, Sign::Le, Sign::Lt, Sign::Ne}) {
        for (double q : {-1.0, -1e-7, 0.0, 1e-7, 1.0}) {
            const Formula f = qf({X}, make_atom(c(1) * v("X", 0), s));
            const Formula g = to_nnf_complement(f);
            const NumericPoint pt{{"X", {q}}};
            CHECK(eval_formula(f, pt, 1e-6) == !eval_formula(g, pt, 1e-6));
        }
    }
}
