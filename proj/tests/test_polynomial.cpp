#include "doctest.h"

#include "toda/polynomial.hpp"

using namespace toda;

namespace {

Polynomial v(const std::string& part, int i) { return Polynomial::variable(Var{part, i}); }

}  // namespace

TEST_CASE("rational literals are canonical") {
    CHECK(to_string(parse_rational("2/4")) == "1/2");
    CHECK(to_string(parse_rational("-0.125")) == "-1/8");
    CHECK(to_string(parse_rational("7")) == "7");
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("arithmetic cancels exactly") {
    const Polynomial x = v("X", 0);
    const Polynomial y = v("X", 1);
    const Polynomial p = (x + y) * (x - y);
    CHECK(p == x.pow(2) - y.pow(2));
    CHECK((p - p).is_zero());
    CHECK(p.total_degree() == 2);
    CHECK(p.term_count() == 2);
    CHECK((x * Rational(0)).is_zero());
}

TEST_CASE("substitution and evaluation commute") {
    const Polynomial x = v("X", 0);
    const Polynomial y = v("Y", 0);
    const Polynomial p = x * y + Polynomial(make_rational(3, 2)) * y.pow(2) - Polynomial(Rational(1));
    const Polynomial q = p.substitute({{Var{"X", 0}, Polynomial(Rational(2))}});
    for (int k = -3; k <= 3; ++k) {
        const Rational yv = make_rational(k, 2);
        auto full = [&](const Var& var) { return var.part == "X" ? Rational(2) : yv; };
        auto part = [&](const Var&) { return yv; };
        CHECK(p.evaluate<Rational>(full) == q.evaluate<Rational>(part));
    }
}

TEST_CASE("homogeneous components split by block") {
    const Polynomial x = v("X", 0);
    const Polynomial y = v("Y", 0);
    const Polynomial p = x.pow(3) + x * y + y + Polynomial(Rational(5));
    auto comps = p.homogeneous_components([](const Var& var) { return var.part == "X"; });
    REQUIRE(comps.size() == 3);
    CHECK(comps[3] == x.pow(3));
    CHECK(comps[1] == x * y);
    CHECK(comps[0] == y + Polynomial(Rational(5)));
}

TEST_CASE("renaming keeps monomials sorted") {
    const Polynomial p = v("A", 0) * v("B", 0).pow(2);
    const Polynomial r = p.rename([](const Var& var) { return Var{var.part == "A" ? "Z" : "C", var.index}; });
    CHECK(r == v("C", 0).pow(2) * v("Z", 0));
}
