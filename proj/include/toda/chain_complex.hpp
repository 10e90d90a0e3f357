#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace toda {

/// Sparse column: (row, integer coefficient) sorted by row.
using SparseColumn = std::vector<std::pair<int, int>>;

/// Finite chain complex.  boundary[d] has one column per d-cell, rows
/// indexing (d-1)-cells; boundary[0] is empty.
struct ChainComplex {
    std::vector<int> cells;
    std::vector<std::vector<SparseColumn>> boundary;

    int top_dim() const { return static_cast<int>(cells.size()) - 1; }
};

/// Ranks of the boundary maps over Z/p; entry d is rank of boundary[d].
std::vector<long long> boundary_ranks(const ChainComplex& c, std::uint32_t p = 2);
/// b_d = dim ker(boundary_d) - rank(boundary_{d+1}) over Z/p.
std::vector<long long> betti_ranks(const ChainComplex& c, std::uint32_t p = 2);

/// Checks boundary_{d} * boundary_{d+1} = 0 on random chains.
bool boundary_squares_to_zero(const ChainComplex& c, std::mt19937_64& rng, int trials = 8, std::uint32_t p = 2);

/// 1-dimensional complex of a graph.
ChainComplex graph_complex(int vertices, const std::vector<std::pair<int, int>>& edges);

/// Clique complex of a graph up to dimension `max_dim` (vertices sorted).
ChainComplex flag_complex(int vertices, const std::vector<std::pair<int, int>>& edges, int max_dim);

/// Connected components by union-find.
int count_components(int vertices, const std::vector<std::pair<int, int>>& edges);

}  // namespace toda
