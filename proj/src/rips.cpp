#include "toda/rips.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>
#include <unordered_map>

namespace toda {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

}  // namespace

PointCloud PointCloud::subset(const std::vector<int>& idx) const {
    PointCloud out;
    out.dim = dim;
    for (int i : idx) out.push(at(static_cast<std::size_t>(i)));
    return out;
}

double distance(const PointCloud& pc, std::size_t i, std::size_t j) {
    const double* a = pc.at(i);
    const double* b = pc.at(j);
    double s = 0;
    for (int k = 0; k < pc.dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

int rips_components(const PointCloud& pc, double r) {
    const std::size_t n = pc.size();
    UnionFind uf(n);
    int comps = static_cast<int>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (distance(pc, i, j) <= r && uf.unite(static_cast<int>(i), static_cast<int>(j))) --comps;
    return comps;
}

std::vector<int> maxmin_landmarks(const PointCloud& pc, int count, int first) {
    const std::size_t n = pc.size();
    std::vector<int> out;
    if (n == 0 || count <= 0) return out;
    if (static_cast<std::size_t>(count) >= n) {
        out.resize(n);
        std::iota(out.begin(), out.end(), 0);
        return out;
    }
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    int cur = first;
    for (int k = 0; k < count; ++k) {
        out.push_back(cur);
        int best = -1;
        double far = -1;
        for (std::size_t i = 0; i < n; ++i) {
            dist[i] = std::min(dist[i], distance(pc, i, static_cast<std::size_t>(cur)));
            if (dist[i] > far) {
                far = dist[i];
                best = static_cast<int>(i);
            }
        }
        cur = best;
    }
    return out;
}

long long rips_h1_window(const PointCloud& pc, double r, double r2) {
    const int n = static_cast<int>(pc.size());
    if (n < 3) return 0;
    struct Edge {
        double len;
        int u, v;
    };
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = distance(pc, i, j);
            if (d <= r2) edges.push_back({d, i, j});
        }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.len, a.u, a.v) < std::tie(b.len, b.u, b.v); });
    std::vector<int> index(static_cast<std::size_t>(n) * n, -1);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        index[edges[e].u * n + edges[e].v] = static_cast<int>(e);
        index[edges[e].v * n + edges[e].u] = static_cast<int>(e);
    }

    // spanning-forest edges kill H0 classes and carry no H1 cocycle
    std::vector<char> negative(edges.size(), 0);
    UnionFind uf(static_cast<std::size_t>(n));
    for (std::size_t e = 0; e < edges.size(); ++e) negative[e] = uf.unite(edges[e].u, edges[e].v);

    // triangles are keyed by (diameter edge, opposite vertex), a filtration order
    auto coboundary = [&](int e) {
        std::vector<long long> col;
        const int u = edges[e].u;
        const int v = edges[e].v;
        for (int w = 0; w < n; ++w) {
            if (w == u || w == v) continue;
            const int a = index[u * n + w];
            const int b = index[v * n + w];
            if (a < 0 || b < 0) continue;
            long long key;
            if (e > a && e > b) key = static_cast<long long>(e) * n + w;
            else if (a > b) key = static_cast<long long>(a) * n + v;
            else key = static_cast<long long>(b) * n + u;
            col.push_back(key);
        }
        std::sort(col.begin(), col.end());
        return col;
    };

    std::unordered_map<long long, std::vector<long long>> by_pivot;
    long long alive = 0;
    std::vector<long long> scratch;
    for (int e = static_cast<int>(edges.size()) - 1; e >= 0; --e) {
        if (negative[e]) continue;
        auto col = coboundary(e);
        while (!col.empty()) {
            auto it = by_pivot.find(col.front());
            if (it == by_pivot.end()) break;
            scratch.clear();
            std::set_symmetric_difference(col.begin(), col.end(), it->second.begin(), it->second.end(),
                                          std::back_inserter(scratch));
            col.swap(scratch);
        }
        if (col.empty()) {
            if (edges[e].len <= r) ++alive;
        } else {
            const long long pivot = col.front();
            by_pivot.emplace(pivot, std::move(col));
        }
    }
    return alive;
}

}  // namespace toda
