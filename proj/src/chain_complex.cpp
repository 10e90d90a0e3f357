#include "toda/chain_complex.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace toda {

namespace {

using ModColumn = std::vector<std::pair<int, std::uint32_t>>;

std::uint32_t to_mod(int v, std::uint32_t p) {
    const std::int64_t m = static_cast<std::int64_t>(v) % static_cast<std::int64_t>(p);
    return static_cast<std::uint32_t>(m < 0 ? m + p : m);
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
    std::int64_t t = 0;
    std::int64_t nt = 1;
    std::int64_t r = p;
    std::int64_t nr = a;
    while (nr != 0) {
        const std::int64_t q = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - q * nt);
        std::tie(r, nr) = std::make_pair(nr, r - q * nr);
    }
    return static_cast<std::uint32_t>(t < 0 ? t + p : t);
}

// col += factor * other (mod p)
void axpy(ModColumn& col, const ModColumn& other, std::uint64_t factor, std::uint32_t p) {
    ModColumn out;
    out.reserve(col.size() + other.size());
    auto i = col.begin();
    auto j = other.begin();
    while (i != col.end() || j != other.end()) {
        if (j == other.end() || (i != col.end() && i->first < j->first)) {
            out.push_back(*i++);
        } else if (i == col.end() || j->first < i->first) {
            out.emplace_back(j->first, static_cast<std::uint32_t>((factor * j->second) % p));
            ++j;
        } else {
            const std::uint32_t v = static_cast<std::uint32_t>((i->second + factor * j->second) % p);
            if (v != 0) out.emplace_back(i->first, v);
            ++i;
            ++j;
        }
    }
    col.swap(out);
}

// Reduces the columns of one boundary map; `skip` marks columns known to
// reduce to zero.  Returns the set of pivot rows.
std::vector<int> reduce(const std::vector<SparseColumn>& cols, const std::vector<char>& skip, std::uint32_t p) {
    std::unordered_map<int, ModColumn> by_pivot;
    std::vector<int> pivots;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (!skip.empty() && skip[c]) continue;
        ModColumn col;
        col.reserve(cols[c].size());
        for (const auto& [r, v] : cols[c]) {
            const std::uint32_t m = to_mod(v, p);
            if (m != 0) col.emplace_back(r, m);
        }
        while (!col.empty()) {
            auto it = by_pivot.find(col.back().first);
            if (it == by_pivot.end()) break;
            const ModColumn& other = it->second;
            const std::uint64_t factor = (p - col.back().second) % p * inverse_mod(other.back().second, p) % p;
            axpy(col, other, factor, p);
        }
        if (!col.empty()) {
            pivots.push_back(col.back().first);
            by_pivot.emplace(col.back().first, std::move(col));
        }
    }
    return pivots;
}

}  // namespace

std::vector<long long> boundary_ranks(const ChainComplex& c, std::uint32_t p) {
    if (p < 2) throw std::invalid_argument("field characteristic must be prime >= 2");
    const int top = c.top_dim();
    std::vector<long long> ranks(static_cast<std::size_t>(top) + 2, 0);
    std::vector<char> cleared;
    for (int d = top; d >= 1; --d) {
        const auto pivots = reduce(c.boundary[d], cleared, p);
        ranks[d] = static_cast<long long>(pivots.size());
        cleared.assign(static_cast<std::size_t>(c.cells[d - 1]), 0);
        for (int r : pivots) cleared[r] = 1;
    }
    return ranks;
}

std::vector<long long> betti_ranks(const ChainComplex& c, std::uint32_t p) {
    const auto ranks = boundary_ranks(c, p);
    std::vector<long long> b;
    for (int d = 0; d <= c.top_dim(); ++d) {
        const long long kernel = c.cells[d] - (d >= 1 ? ranks[d] : 0);
        b.push_back(kernel - ranks[d + 1]);
    }
    return b;
}

bool boundary_squares_to_zero(const ChainComplex& c, std::mt19937_64& rng, int trials, std::uint32_t p) {
    std::uniform_int_distribution<std::uint32_t> coef(0, p - 1);
    for (int d = 2; d <= c.top_dim(); ++d) {
        for (int t = 0; t < trials; ++t) {
            std::vector<std::uint64_t> mid(static_cast<std::size_t>(c.cells[d - 1]), 0);
            for (int k = 0; k < c.cells[d]; ++k) {
                const std::uint32_t a = coef(rng);
                if (a == 0) continue;
                for (const auto& [r, v] : c.boundary[d][k]) mid[r] = (mid[r] + std::uint64_t(a) * to_mod(v, p)) % p;
            }
            std::vector<std::uint64_t> low(static_cast<std::size_t>(c.cells[d - 2]), 0);
            for (int k = 0; k < c.cells[d - 1]; ++k) {
                if (mid[k] == 0) continue;
                for (const auto& [r, v] : c.boundary[d - 1][k]) low[r] = (low[r] + mid[k] * to_mod(v, p)) % p;
            }
            for (auto v : low)
                if (v != 0) return false;
        }
    }
    return true;
}

ChainComplex graph_complex(int vertices, const std::vector<std::pair<int, int>>& edges) {
    ChainComplex c;
    c.cells = {vertices, static_cast<int>(edges.size())};
    c.boundary.resize(2);
    for (auto [u, v] : edges) {
        if (u == v) throw std::invalid_argument("self loop");
        SparseColumn col;
        col.emplace_back(std::min(u, v), -1);
        col.emplace_back(std::max(u, v), 1);
        c.boundary[1].push_back(col);
    }
    return c;
}

ChainComplex flag_complex(int vertices, const std::vector<std::pair<int, int>>& edges, int max_dim) {
    std::vector<std::set<int>> adj(static_cast<std::size_t>(vertices));
    for (auto [u, v] : edges) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    std::vector<std::vector<std::vector<int>>> simplices(static_cast<std::size_t>(max_dim) + 1);
    for (int v = 0; v < vertices; ++v) simplices[0].push_back({v});
    for (int d = 1; d <= max_dim; ++d) {
        for (const auto& s : simplices[d - 1]) {
            for (int w : adj[s.back()]) {
                if (w <= s.back()) continue;
                bool ok = true;
                for (int u : s) ok = ok && adj[u].count(w);
                if (!ok) continue;
                auto t = s;
                t.push_back(w);
                simplices[d].push_back(std::move(t));
            }
        }
        std::sort(simplices[d].begin(), simplices[d].end());
    }
    ChainComplex c;
    c.boundary.resize(static_cast<std::size_t>(max_dim) + 1);
    for (int d = 0; d <= max_dim; ++d) c.cells.push_back(static_cast<int>(simplices[d].size()));
    for (int d = 1; d <= max_dim; ++d) {
        std::map<std::vector<int>, int> index;
        for (std::size_t i = 0; i < simplices[d - 1].size(); ++i) index[simplices[d - 1][i]] = static_cast<int>(i);
        for (const auto& s : simplices[d]) {
            SparseColumn col;
            for (std::size_t k = 0; k < s.size(); ++k) {
                auto face = s;
                face.erase(face.begin() + static_cast<long>(k));
                col.emplace_back(index.at(face), k % 2 == 0 ? 1 : -1);
            }
            std::sort(col.begin(), col.end());
            c.boundary[d].push_back(std::move(col));
        }
    }
    return c;
}

int count_components(int vertices, const std::vector<std::pair<int, int>>& edges) {
    std::vector<int> parent(static_cast<std::size_t>(vertices));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int comps = vertices;
    for (auto [u, v] : edges) {
        const int a = find(u);
        const int b = find(v);
        if (a != b) {
            parent[a] = b;
            --comps;
        }
    }
    return comps;
}

}  // namespace toda
