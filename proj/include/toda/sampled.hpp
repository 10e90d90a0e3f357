// Homology estimates from point samples of a semialgebraic set.

#pragma once

#include <optional>

#include "toda/cubical.hpp"
#include "toda/oracle.hpp"
#include "toda/rips.hpp"

namespace toda {

struct SampleConfig {
    int samples = 2000;
    double radius = 0.3;
    std::uint64_t seed = 42;
    double tol = 1e-6;
    int landmarks = 250;
    int max_iterations = 100;
    /// Strict atoms are pushed this far past their boundary.
    double margin = 1e-4;
    /// Sample in this box and ignore sphere constraints.
    std::optional<Box> box;
    /// Zero accepted samples with the best violation above this reads as empty.
    double empty_threshold = 1e-3;
    int threads = 0;  // 0: hardware concurrency
};

struct SampleSet {
    PointCloud points;
    int attempts = 0;
    double min_violation = 0;
    std::vector<int> accepted_attempt;  // attempt index of each accepted point
};

SampleSet sample_set(const Formula& f, const SampleConfig& cfg);

/// b_0 of the radius graph and the number of H1 classes persisting over
/// [radius, 2 radius] on max-min landmarks.
BettiEstimate poincare_sampled(const Formula& f, const SampleConfig& cfg, int max_degree = 1);

class SampledOracle : public FiberOracle {
public:
    explicit SampledOracle(SampleConfig cfg = {}) : cfg_(std::move(cfg)) {}
    std::string name() const override { return "sampled"; }
    BettiEstimate estimate(const Formula& fiber, int max_degree) const override;

private:
    SampleConfig cfg_;
};

/// Cubical for fibers with at most `cubical_coords` coordinates, sampled otherwise.
class AutoOracle : public FiberOracle {
public:
    AutoOracle(CubicalConfig cubical = {}, SampleConfig sampled = {}, int cubical_coords = 3)
        : cubical_(std::move(cubical)), sampled_(std::move(sampled)), limit_(cubical_coords) {}
    std::string name() const override { return "auto"; }
    BettiEstimate estimate(const Formula& fiber, int max_degree) const override;

private:
    CubicalOracle cubical_;
    SampledOracle sampled_;
    int limit_;
};

}  // namespace toda
