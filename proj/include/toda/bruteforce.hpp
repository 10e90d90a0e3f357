// Grid evaluation of quantified sentences over sphere blocks; a test oracle
// for sentences that are robustly true or false.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "toda/formula.hpp"
#include "toda/reducer.hpp"

namespace toda {

struct SphereGrid {
    int dim = 0;
    std::vector<std::vector<double>> points;  // unit vectors in R^(dim+1)

    std::size_t count() const { return points.size(); }
};

/// Deterministic quasi-uniform points on S^dim.  S^0 is always {+1, -1};
/// dims above 2 use the normalized boundary of a cube lattice, so the size
/// is the smallest such lattice with at least `count` points.
SphereGrid sphere_grid(int dim, int count);

struct BruteConfig {
    double delta = 0.05;
    /// Grid size per block name; unnamed blocks use the per-dimension default.
    std::map<std::string, int> counts;
    int count_s1 = 96;
    int count_s2 = 600;
    int count_high = 2000;

    int count_for(const VarBlock& b) const;
};

struct BruteResult {
    Truth truth = Truth::Unknown;
    bool strict = false;   // reading with atoms tightened by delta
    bool lenient = false;  // reading with atoms relaxed by delta
    bool exact = false;    // all blocks were S^0 and evaluated exactly
    long long evaluations = 0;
};

/// Free blocks are not allowed; lift the sentence first if needed.
BruteResult brute_decide(const Formula& f, const BruteConfig& cfg = {});

}  // namespace toda
