// Cubical approximation of semialgebraic sets and their mod-p homology.

#pragma once

#include <optional>
#include <vector>

#include "toda/chain_complex.hpp"
#include "toda/oracle.hpp"

namespace toda {

struct Box {
    std::vector<double> lo, hi;
};

struct CubicalConfig {
    int resolution = 32;
    /// Ignore the block sphere constraints and cover the set in a box.
    bool ambient = false;
    /// Defaults to [-r, r] on each block coordinate.
    std::optional<Box> box;
    /// Equality slab half-width in units of the cell half-diagonal.
    double inflation = 1.0;
    std::uint32_t prime = 2;
    /// Largest admissible grid (cells of all dimensions).
    std::size_t max_cells = std::size_t(1) << 25;
};

/// Top cells of a uniform grid kept by the cover test.
struct CubicalCover {
    int dim = 0;
    int resolution = 0;
    Box box;
    std::vector<char> top;  // resolution^dim flags, first axis fastest

    std::size_t kept() const;
};

CubicalCover cubical_cover(const Formula& f, const CubicalConfig& cfg);
/// Closure of the kept top cells as a chain complex.
ChainComplex cubical_complex(const CubicalCover& cover);
std::vector<long long> cubical_betti(const CubicalCover& cover, std::uint32_t p = 2);

/// Betti numbers at `resolution` and twice that; converged when both agree.
BettiEstimate poincare_cubical(const Formula& f, const CubicalConfig& cfg, int max_degree = -1);

class CubicalOracle : public FiberOracle {
public:
    explicit CubicalOracle(CubicalConfig cfg = {}) : cfg_(std::move(cfg)) {}
    std::string name() const override { return "cubical"; }
    BettiEstimate estimate(const Formula& fiber, int max_degree) const override;

private:
    CubicalConfig cfg_;
};

}  // namespace toda
