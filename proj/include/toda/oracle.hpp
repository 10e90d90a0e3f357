#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "toda/formula.hpp"
#include "toda/poincare.hpp"

namespace toda {

/// Betti numbers b_0..b_known_degree of a set; higher degrees were not computed.
struct BettiEstimate {
    std::vector<long long> betti;
    int known_degree = -1;
    bool converged = false;
    nlohmann::json diagnostics = nlohmann::json::object();

    PoincarePolynomial poincare() const { return PoincarePolynomial(betti); }
};

/// Computes Betti numbers of the set cut out by a quantifier-free formula on
/// its free blocks' spheres.  Implementations must be safe for concurrent calls.
class FiberOracle {
public:
    virtual ~FiberOracle() = default;
    virtual std::string name() const = 0;
    virtual BettiEstimate estimate(const Formula& f, int max_degree) const = 0;
};

}  // namespace toda
