#include "doctest.h"

#include "toda/bruteforce.hpp"
#include "toda/formula_io.hpp"
#include "toda/join.hpp"
#include "toda/reducer.hpp"
#include "toda/sampled.hpp"

using namespace toda;

namespace {

AutoOracle fiber_oracle() {
    SampleConfig s;
    s.samples = 10000;
    s.radius = 1.2;
    return AutoOracle({}, s);
}

Truth pipeline(const std::string& text) {
    const auto d = decide_sentence(parse_formula(text), fiber_oracle());
    return d.decision.truth;
}

}  // namespace

TEST_CASE("quantifier-free input is its own reduction") {
    const Formula f = parse_formula("(sentence (free (X 0) (Y 1)) (body (atom >= (poly (mono 1 (Y.0 1))) 0)))");
    const auto a = reduce(f);
    CHECK(structurally_equal(a.theta, f));
    REQUIRE(a.chain.size() == 1);
    CHECK(a.chain[0].kind == StageKind::Identity);
    CHECK(a.fiber_dim == 1);
}

TEST_CASE("one existential step") {
    const Formula f = parse_formula("(sentence (prefix (exists Z 1)) (body (atom = (poly (mono 1 (Z.0 1))) 0)))");
    const auto a = reduce(f);
    CHECK(a.lifted_param);
    CHECK(a.lifted_fiber);
    CHECK(a.theta.is_quantifier_free());
    REQUIRE(a.chain.size() == 2);
    CHECK(to_string(a.chain[1]) == "truncate(0)");
    // Y (1) + two copies of Z with a T coordinate (2 * 3) + U (1)
    CHECK(a.fiber_block.coord_count() == 8);
    CHECK(a.fiber_dim == 7);
    REQUIRE(a.trace.size() == 1);
    CHECK(a.trace[0].p == 1);
    CHECK(a.trace[0].free_coords == 9);
}

TEST_CASE("polarity flips at each universal step") {
    // after the first complement every later level is universal as well
    const Formula f = parse_formula(
        "(sentence (prefix (forall A 0) (exists B 0) (forall C 0))"
        " (body (atom >= (poly (mono 1 (A.0 1) (B.0 1) (C.0 1))) 0)))");
    const auto a = reduce(f);
    REQUIRE(a.trace.size() == 3);
    CHECK(a.trace[1].original == Quantifier::Exists);
    CHECK(a.trace[1].effective == Quantifier::Forall);
    CHECK(a.trace[0].polarity_after == Topology::Open);
    CHECK(a.trace[1].polarity_after == Topology::Closed);
    CHECK(a.trace[2].polarity_after == Topology::Open);
    CHECK(a.polarity == Topology::Open);
    REQUIRE(a.chain.size() == 4);
    for (int i = 1; i <= 3; ++i) CHECK(a.chain[i].kind == StageKind::Duality);
    CHECK(a.chain[1].direction == DualDirection::ClosedK);
    CHECK(a.chain[2].direction == DualDirection::OpenK);
    CHECK(a.chain[3].direction == DualDirection::ClosedK);

    const Formula g = parse_formula(
        "(sentence (prefix (exists A 0) (forall B 0)) (body (atom >= (poly (mono 1 (A.0 1) (B.0 1))) 0)))");
    const auto b = reduce(g);
    CHECK(b.chain[2].kind == StageKind::Truncate);
    CHECK(b.chain[1].kind == StageKind::Duality);
    CHECK(b.polarity == Topology::Open);
}

TEST_CASE("reduction is deterministic") {
    const Formula f = parse_formula(
        "(sentence (prefix (forall A 1) (exists B 0)) (body (atom >= (poly (mono 1 (A.0 1) (B.0 1))) 0)))");
    CHECK(print_formula(reduce(f).theta) == print_formula(reduce(f).theta));
    ReduceOptions lower;
    lower.policy = JoinPolicy::MOnly;
    CHECK(reduce(f, lower).trace[0].p == 0);
}

TEST_CASE("open input is rejected") {
    const Formula f = parse_formula("(sentence (prefix (exists Z 1)) (body (atom > (poly (mono 1 (Z.0 1))) 0)))");
    CHECK_THROWS_AS(reduce(f), FormulaError);
}

TEST_CASE("decisions agree with brute force") {
    const char* cases[] = {
        "(sentence (prefix (exists Z 1)) (body (atom = (poly (mono 1 (Z.0 1))) 0)))",
        "(sentence (prefix (forall Z 1)) (body (atom >= (poly (mono 1 (Z.0 2)) (mono 1 (Z.1 2)) (mono -1/2)) 0)))",
        "(sentence (prefix (exists Z 1)) (body (atom >= (poly (mono 1 (Z.0 1)) (mono -2)) 0)))",
        "(sentence (prefix (forall Y 0) (exists Z 0)) (body (atom >= (poly (mono 1 (Y.0 1) (Z.0 1)) (mono -1)) 0)))",
    };
    const Truth expected[] = {Truth::True, Truth::True, Truth::False, Truth::True};
    for (int i = 0; i < 4; ++i) {
        CAPTURE(cases[i]);
        CHECK(brute_decide(parse_formula(cases[i])).truth == expected[i]);
        CHECK(pipeline(cases[i]) == expected[i]);
    }
}

TEST_CASE("non-converged estimates surface as unknown") {
    SampleConfig tiny;
    tiny.samples = 40;
    tiny.radius = 0.05;
    const SampledOracle o(tiny);
    const auto d = decide_sentence(
        parse_formula("(sentence (prefix (exists Z 1)) (body (atom = (poly (mono 1 (Z.0 1))) 0)))"), o);
    CHECK(d.decision.truth == Truth::Unknown);
    CHECK(!d.decision.reason.empty());
}

TEST_CASE("size report counts variables") {
    const Formula f = parse_formula("(sentence (prefix (exists Z 1)) (body (atom = (poly (mono 1 (Z.0 1))) 0)))");
    const auto r = size_report(reduce(f));
    CHECK(r.variables == 9);
    CHECK(r.join_parameters == std::vector<int>{1});
    CHECK(r.max_degree == 2);
}
