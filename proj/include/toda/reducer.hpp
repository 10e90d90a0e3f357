// Alternation-by-alternation reduction of a prenex formula to a
// quantifier-free formula plus a chain of coefficient maps.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toda/formula.hpp"
#include "toda/join.hpp"
#include "toda/oracle.hpp"
#include "toda/poincare.hpp"

namespace toda {

enum class JoinPolicy { MPlus1, MOnly };
std::string_view join_policy_name(JoinPolicy p);
std::optional<JoinPolicy> parse_join_policy(std::string_view s);

struct ReduceOptions {
    JoinPolicy policy = JoinPolicy::MPlus1;
};

struct StepTrace {
    int step = 0;
    Quantifier original = Quantifier::Exists;
    Quantifier effective = Quantifier::Exists;
    int p = 0;
    int fiber_dim = 0;  // sphere dimension m of the fiber before the step
    Topology polarity_before = Topology::Closed;
    Topology polarity_after = Topology::Closed;
    int free_coords = 0;
    int bound_coords = 0;
    std::size_t atoms = 0;
};

struct ReductionArtifact {
    Formula theta;
    std::vector<CoeffStage> chain;
    VarBlock param_block;
    VarBlock fiber_block;
    int fiber_dim = 0;
    Topology polarity = Topology::Closed;
    bool lifted_param = false;
    bool lifted_fiber = false;
    std::vector<StepTrace> trace;
};

/// Names of the blocks added when a sentence lacks a parameter or fiber.
inline const std::string kDummyParam = "X#lift";
inline const std::string kDummyFiber = "Y#lift";

/// Adds a dummy S^0 parameter block and/or a dummy S^0 fiber block so that the
/// formula has exactly two free blocks.
Formula lift_sentence(const Formula& f, bool* lifted_param = nullptr, bool* lifted_fiber = nullptr);

/// Requires a closed matrix; lifts missing blocks first.
ReductionArtifact reduce(const Formula& f, const ReduceOptions& options = {});
/// Same recursion starting from an explicitly given polarity (Closed or Open).
ReductionArtifact reduce_with_polarity(const Formula& f, Topology polarity, const ReduceOptions& options = {});

enum class Truth { True, False, Unknown };
std::string_view truth_name(Truth t);

struct Decision {
    Truth truth = Truth::Unknown;
    BettiEstimate fiber_estimate;
    std::optional<PoincarePolynomial> fiber_poincare;
    std::optional<PoincarePolynomial> result;
    std::vector<int> needed_degrees;
    std::string reason;
};

/// Evaluates the chain on the oracle's Betti numbers of theta's fiber over x
/// and reads the constant coefficient (> 0 means true).
Decision decide(const ReductionArtifact& artifact, const std::vector<Rational>& x, const FiberOracle& oracle);

enum class SentenceStrategy { Uniform, PromoteLeading };

struct SentenceDecision {
    Decision decision;
    ReductionArtifact artifact;
    SentenceStrategy strategy = SentenceStrategy::Uniform;
    bool negated = false;
    /// Degree whose Betti number certifies "the fiber is its whole sphere".
    int top_degree = -1;
};

/// Decides a sentence (no free blocks).  Alternation <= 1 uses the uniform
/// reduction with lifted dummies.  For deeper prefixes the leading block
/// becomes the fiber: a leading forall holds iff the reduced fiber set is the
/// whole sphere; a leading exists is decided through the negation.
SentenceDecision decide_sentence(const Formula& f, const FiberOracle& oracle, const ReduceOptions& options = {});

struct SizeReport {
    std::size_t atoms = 0;
    int free_coords = 0;
    int bound_coords = 0;
    int variables = 0;
    int max_degree = 0;
    std::vector<int> join_parameters;
    std::size_t text_bytes = 0;
};

SizeReport size_report(const ReductionArtifact& artifact);

}  // namespace toda
