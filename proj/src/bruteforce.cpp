#include "toda/bruteforce.hpp"

#include <cmath>
#include <functional>

#include "toda/numeric.hpp"

namespace toda {

namespace {

std::vector<std::vector<double>> cube_surface(int coords, int g) {
    std::vector<std::vector<double>> out;
    std::vector<int> v(coords, -g);
    while (true) {
        int top = 0;
        for (int c : v) top = std::max(top, std::abs(c));
        if (top == g) {
            double n = 0;
            for (int c : v) n += double(c) * c;
            n = std::sqrt(n);
            std::vector<double> p(coords);
            for (int i = 0; i < coords; ++i) p[i] = v[i] / n;
            out.push_back(std::move(p));
        }
        int i = 0;
        while (i < coords && v[i] == g) v[i++] = -g;
        if (i == coords) break;
        ++v[i];
    }
    return out;
}

}  // namespace

SphereGrid sphere_grid(int dim, int count) {
    if (dim < 0) throw FormulaError(ErrorKind::Dimension, "negative sphere dimension");
    SphereGrid g;
    g.dim = dim;
    if (dim == 0) {
        g.points = {{1.0}, {-1.0}};
        return g;
    }
    count = std::max(count, 2);
    if (dim == 1) {
        for (int i = 0; i < count; ++i) {
            const double t = 2 * M_PI * i / count;
            g.points.push_back({std::cos(t), std::sin(t)});
        }
        return g;
    }
    if (dim == 2) {
        const double golden = M_PI * (3 - std::sqrt(5.0));
        for (int i = 0; i < count; ++i) {
            const double z = 1 - (2.0 * i + 1) / count;
            const double r = std::sqrt(std::max(0.0, 1 - z * z));
            const double phi = golden * i;
            std::vector<double> p{r * std::cos(phi), r * std::sin(phi), z};
            const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
            for (double& c : p) c /= n;
            g.points.push_back(std::move(p));
        }
        return g;
    }
    for (int side = 1;; ++side) {
        // surface points of {-side..side}^(dim+1)
        const double all = std::pow(2 * side + 1, dim + 1) - std::pow(2 * side - 1, dim + 1);
        if (all >= count) {
            g.points = cube_surface(dim + 1, side);
            return g;
        }
    }
}

int BruteConfig::count_for(const VarBlock& b) const {
    if (auto it = counts.find(b.name); it != counts.end()) return it->second;
    switch (b.sphere_dim()) {
        case 0: return 2;
        case 1: return count_s1;
        case 2: return count_s2;
        default: return count_high;
    }
}

BruteResult brute_decide(const Formula& f, const BruteConfig& cfg) {
    if (!f.free_blocks().empty()) throw FormulaError(ErrorKind::Dimension, "brute_decide needs a sentence");
    std::vector<VarBlock> all = f.all_blocks();
    const Formula open(all, {}, f.matrix());
    BruteResult res;

    bool exact = true;
    for (const auto& b : all) exact = exact && b.sphere_dim() == 0 && b.radius_sq == 1;
    if (exact) {
        res.exact = true;
        ExactPoint pt;
        std::function<bool(std::size_t)> rec = [&](std::size_t level) -> bool {
            if (level == f.prefix().size()) {
                ++res.evaluations;
                return eval_formula(open, pt);
            }
            const QuantLevel& q = f.prefix()[level];
            const std::size_t nb = q.blocks.size();
            for (int mask = 0; mask < (1 << nb); ++mask) {
                for (std::size_t k = 0; k < nb; ++k) pt[q.blocks[k].name] = {make_rational((mask >> k) & 1 ? -1 : 1)};
                const bool v = rec(level + 1);
                if (q.quantifier == Quantifier::Exists && v) return true;
                if (q.quantifier == Quantifier::Forall && !v) return false;
            }
            return q.quantifier == Quantifier::Forall;
        };
        const bool v = rec(0);
        res.strict = res.lenient = v;
        res.truth = v ? Truth::True : Truth::False;
        return res;
    }

    const CompiledFormula cf(open, false);
    std::map<std::string, int> offset;
    for (std::size_t i = 0; i < all.size(); ++i) offset[all[i].name] = cf.offsets()[i];
    std::map<std::string, std::vector<std::vector<double>>> grids;
    for (const auto& b : all) {
        auto g = sphere_grid(b.sphere_dim(), cfg.count_for(b)).points;
        const double r = std::sqrt(b.radius_sq.get_d());
        for (auto& p : g)
            for (double& c : p) c *= r;
        grids[b.name] = std::move(g);
    }

    std::vector<double> x(static_cast<std::size_t>(cf.dim()), 0.0);
    auto run = [&](bool strict) {
        std::function<bool(std::size_t)> rec = [&](std::size_t level) -> bool {
            if (level == f.prefix().size()) {
                ++res.evaluations;
                return cf.holds_with_margin(x.data(), cfg.delta, strict);
            }
            const QuantLevel& q = f.prefix()[level];
            // odometer over the product grid of this level's blocks
            std::vector<std::size_t> idx(q.blocks.size(), 0);
            while (true) {
                for (std::size_t k = 0; k < q.blocks.size(); ++k) {
                    const auto& p = grids[q.blocks[k].name][idx[k]];
                    std::copy(p.begin(), p.end(), x.begin() + offset[q.blocks[k].name]);
                }
                const bool v = rec(level + 1);
                if (q.quantifier == Quantifier::Exists && v) return true;
                if (q.quantifier == Quantifier::Forall && !v) return false;
                std::size_t k = 0;
                while (k < idx.size() && ++idx[k] == grids[q.blocks[k].name].size()) idx[k++] = 0;
                if (k == idx.size()) break;
            }
            return q.quantifier == Quantifier::Forall;
        };
        return rec(0);
    };
    res.strict = run(true);
    res.lenient = run(false);
    if (res.strict) res.truth = Truth::True;
    else if (!res.lenient) res.truth = Truth::False;
    return res;
}

}  // namespace toda
