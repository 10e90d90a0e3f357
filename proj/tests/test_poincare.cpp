#include "doctest.h"

#include <stdexcept>

#include "toda/poincare.hpp"

using namespace toda;

using P = PoincarePolynomial;

TEST_CASE("poincare polynomial basics") {
    CHECK(to_string(P({1, 1, 0, 0, 0, 3})) == "1 + T + 3T^5");
    CHECK(to_string(P(std::vector<long long>{})) == "0");
    CHECK(P({2, 0, 0}) == P({2}));
    CHECK_THROWS_AS(P({1, -1}), std::domain_error);
}

TEST_CASE("truncation") {
    CHECK(truncate(P({1, 1, 0, 0, 0, 3}), 2) == P({1, 1}));
    CHECK(truncate(P({2, 1}), 0) == P({2}));
    CHECK(truncate(P({1, 0, 1}), 5) == P({1, 0, 1}));
}

TEST_CASE("duality on S^2 fixtures") {
    // equator, empty set, two points, one point
    CHECK(dual_betti(P({2}), 2, DualDirection::ClosedK) == P({1, 1}));
    CHECK(dual_betti(P({1, 0, 1}), 2, DualDirection::ClosedK) == P(std::vector<long long>{}));
    CHECK(dual_betti(P({1, 1}), 2, DualDirection::ClosedK) == P({2}));
    CHECK(dual_betti(P({1}), 2, DualDirection::ClosedK) == P({1}));
}

TEST_CASE("duality round trip") {
    const std::vector<P> s2{P(std::vector<long long>{}), P({1}), P({1, 1}), P({2}), P({1, 0, 1}), P({3, 1})};
    for (const auto& k : s2) {
        const P comp = dual_betti(k, 2, DualDirection::OpenK);
        CHECK(dual_betti(comp, 2, DualDirection::ClosedK) == k);
    }
    const std::vector<P> s3{P(std::vector<long long>{}), P({1}), P({1, 0, 1}), P({1, 1}), P({1, 0, 0, 1})};
    for (const auto& k : s3) CHECK(dual_betti(dual_betti(k, 3, DualDirection::OpenK), 3, DualDirection::ClosedK) == k);
}

TEST_CASE("low dimensional duality") {
    // subsets of S^0
    CHECK(dual_betti(P(std::vector<long long>{}), 0, DualDirection::ClosedK) == P({2}));
    CHECK(dual_betti(P({1}), 0, DualDirection::ClosedK) == P({1}));
    CHECK(dual_betti(P({2}), 0, DualDirection::ClosedK) == P(std::vector<long long>{}));
    // subsets of S^1: empty, whole circle, two arcs
    CHECK(dual_betti(P({1, 1}), 1, DualDirection::ClosedK) == P(std::vector<long long>{}));
    CHECK(dual_betti(P(std::vector<long long>{}), 1, DualDirection::ClosedK) == P({1, 1}));
    CHECK(dual_betti(P({2}), 1, DualDirection::ClosedK) == P({2}));
    CHECK_THROWS_AS(dual_betti(P({3}), 0, DualDirection::ClosedK), std::domain_error);
}

TEST_CASE("chains") {
    CHECK(apply_chain({CoeffStage::identity()}, P({1, 2})) == P({1, 2}));
    CHECK(apply_chain({CoeffStage::identity(), CoeffStage::truncate(1)}, P({1, 2, 0, 1})) == P({1, 2}));
    CHECK(apply_chain({CoeffStage::identity(), CoeffStage::truncate(2), CoeffStage::duality(2, DualDirection::ClosedK)},
                      P({2})) == P({1, 1}));
    CHECK(to_string(CoeffStage::duality(2, DualDirection::ClosedK)) == "duality(2,closed_K)");
    const auto need = needed_input_degrees(std::vector<CoeffStage>{CoeffStage::identity(), CoeffStage::truncate(0)}, {0});
    CHECK(need == std::set<int>{0});
}
