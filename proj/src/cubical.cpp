#include "toda/cubical.hpp"

#include <algorithm>
#include <cmath>

#include "toda/numeric.hpp"

namespace toda {

namespace {

constexpr int kMaxAmbient = 4;

Box default_box(const std::vector<VarBlock>& blocks, int resolution) {
    Box b;
    for (const auto& blk : blocks) {
        const double r = std::sqrt(blk.radius_sq.get_d());
        // pad so cells straddling the sphere stay inside the grid
        const double w = r * (1.0 + 4.0 / resolution);
        for (int i = 0; i < blk.coord_count(); ++i) {
            b.lo.push_back(-w);
            b.hi.push_back(w);
        }
    }
    return b;
}

std::size_t checked_power(std::size_t base, int exp, std::size_t cap) {
    std::size_t out = 1;
    for (int i = 0; i < exp; ++i) {
        if (out > cap / base) throw FormulaError(ErrorKind::Oracle, "resolution overflow");
        out *= base;
    }
    return out;
}

}  // namespace

std::size_t CubicalCover::kept() const {
    return static_cast<std::size_t>(std::count(top.begin(), top.end(), 1));
}

CubicalCover cubical_cover(const Formula& f, const CubicalConfig& cfg) {
    if (!f.is_quantifier_free()) throw FormulaError(ErrorKind::Oracle, "cubical oracle needs a quantifier-free formula");
    if (cfg.resolution < 1) throw FormulaError(ErrorKind::Oracle, "resolution must be positive");
    const CompiledFormula cf(f, !cfg.ambient);
    const int n = cf.dim();
    if (n < 1) throw FormulaError(ErrorKind::Oracle, "cubical oracle needs at least one coordinate");
    if (n > kMaxAmbient) throw FormulaError(ErrorKind::Oracle, "ambient dimension too high for the cubical oracle");
    const int N = cfg.resolution;
    checked_power(2 * static_cast<std::size_t>(N) + 1, n, cfg.max_cells);

    CubicalCover cover;
    cover.dim = n;
    cover.resolution = N;
    cover.box = cfg.box ? *cfg.box : default_box(cf.blocks(), N);
    if (static_cast<int>(cover.box.lo.size()) != n || static_cast<int>(cover.box.hi.size()) != n)
        throw FormulaError(ErrorKind::Dimension, "box dimension does not match the formula");

    std::vector<double> h(n);
    double diag = 0;
    for (int i = 0; i < n; ++i) {
        h[i] = (cover.box.hi[i] - cover.box.lo[i]) / N;
        diag += h[i] * h[i];
    }
    const double eps = cfg.inflation * 0.5 * std::sqrt(diag);

    const std::size_t total = checked_power(static_cast<std::size_t>(N), n, cfg.max_cells);
    cover.top.assign(total, 0);
    std::vector<int> idx(n, 0);
    std::vector<double> x(n);
    for (std::size_t lin = 0; lin < total; ++lin) {
        for (int i = 0; i < n; ++i) x[i] = cover.box.lo[i] + (idx[i] + 0.5) * h[i];
        cover.top[lin] = cf.holds_inflated(x.data(), eps) ? 1 : 0;
        for (int i = 0; i < n && ++idx[i] == N; ++i) idx[i] = 0;
    }
    return cover;
}

ChainComplex cubical_complex(const CubicalCover& cover) {
    const int n = cover.dim;
    const int N = cover.resolution;
    const std::size_t M = 2 * static_cast<std::size_t>(N) + 1;
    std::vector<std::size_t> stride(n);
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) {
        stride[i] = total;
        total *= M;
    }
    std::vector<char> mark(total, 0);

    // mark the closure of every kept top cell
    std::vector<int> idx(n, 0);
    std::vector<int> off(n);
    int faces = 1;
    for (int i = 0; i < n; ++i) faces *= 3;
    for (std::size_t lin = 0; lin < cover.top.size(); ++lin) {
        if (cover.top[lin]) {
            for (int f = 0; f < faces; ++f) {
                int r = f;
                std::size_t at = 0;
                for (int i = 0; i < n; ++i) {
                    at += static_cast<std::size_t>(2 * idx[i] + r % 3) * stride[i];
                    r /= 3;
                }
                mark[at] = 1;
            }
        }
        for (int i = 0; i < n && ++idx[i] == N; ++i) idx[i] = 0;
    }

    std::vector<std::vector<std::size_t>> cells(static_cast<std::size_t>(n) + 1);
    for (std::size_t at = 0; at < total; ++at) {
        if (!mark[at]) continue;
        std::size_t r = at;
        int d = 0;
        for (int i = 0; i < n; ++i) {
            d += static_cast<int>((r % M) & 1);
            r /= M;
        }
        cells[d].push_back(at);
    }

    ChainComplex c;
    c.boundary.resize(static_cast<std::size_t>(n) + 1);
    for (int d = 0; d <= n; ++d) c.cells.push_back(static_cast<int>(cells[d].size()));
    auto id_of = [&](int d, std::size_t at) {
        const auto& v = cells[d];
        return static_cast<int>(std::lower_bound(v.begin(), v.end(), at) - v.begin());
    };
    for (int d = 1; d <= n; ++d) {
        c.boundary[d].reserve(cells[d].size());
        for (std::size_t at : cells[d]) {
            SparseColumn col;
            std::size_t r = at;
            int k = 0;
            for (int i = 0; i < n; ++i) {
                const bool odd = (r % M) & 1;
                r /= M;
                if (!odd) continue;
                const int s = (k % 2 == 0) ? 1 : -1;
                col.emplace_back(id_of(d - 1, at + stride[i]), s);
                col.emplace_back(id_of(d - 1, at - stride[i]), -s);
                ++k;
            }
            std::sort(col.begin(), col.end());
            c.boundary[d].push_back(std::move(col));
        }
    }
    return c;
}

std::vector<long long> cubical_betti(const CubicalCover& cover, std::uint32_t p) {
    return betti_ranks(cubical_complex(cover), p);
}

BettiEstimate poincare_cubical(const Formula& f, const CubicalConfig& cfg, int max_degree) {
    BettiEstimate est;
    std::vector<std::vector<long long>> runs;
    nlohmann::json runs_json = nlohmann::json::array();
    int dim = 0;
    for (int scale : {1, 2}) {
        CubicalConfig c = cfg;
        c.resolution = cfg.resolution * scale;
        const CubicalCover cover = cubical_cover(f, c);
        dim = cover.dim;
        auto b = cubical_betti(cover, cfg.prime);
        runs_json.push_back({{"resolution", c.resolution}, {"kept_cells", cover.kept()}, {"betti", b}});
        runs.push_back(std::move(b));
    }
    // a compact subset of R^dim has no homology in degree >= dim
    est.known_degree = std::max(dim, max_degree);
    est.betti = runs.back();
    est.betti.resize(static_cast<std::size_t>(est.known_degree) + 1, 0);
    est.converged = runs[0] == runs[1];
    est.diagnostics = {{"oracle", "cubical"},
                       {"ambient", cfg.ambient},
                       {"dimension", dim},
                       {"prime", cfg.prime},
                       {"runs", runs_json}};
    return est;
}

BettiEstimate CubicalOracle::estimate(const Formula& fiber, int max_degree) const {
    return poincare_cubical(fiber, cfg_, max_degree);
}

}  // namespace toda
