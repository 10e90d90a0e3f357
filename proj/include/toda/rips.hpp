// Vietoris-Rips invariants of point clouds.

#pragma once

#include <cstddef>
#include <vector>

namespace toda {

struct PointCloud {
    int dim = 0;
    std::vector<double> coords;  // row-major, dim per point

    std::size_t size() const { return dim == 0 ? 0 : coords.size() / static_cast<std::size_t>(dim); }
    const double* at(std::size_t i) const { return coords.data() + i * static_cast<std::size_t>(dim); }
    void push(const double* x) { coords.insert(coords.end(), x, x + dim); }
    PointCloud subset(const std::vector<int>& idx) const;
};

double distance(const PointCloud& pc, std::size_t i, std::size_t j);

/// Components of the graph joining points at distance <= r.
int rips_components(const PointCloud& pc, double r);

/// Greedy max-min landmark selection starting from point `first`.
std::vector<int> maxmin_landmarks(const PointCloud& pc, int count, int first = 0);

/// Rank of H1(Rips_r) -> H1(Rips_r2) over Z/2: classes born by r that are
/// still alive at r2 (r <= r2).
long long rips_h1_window(const PointCloud& pc, double r, double r2);

}  // namespace toda
