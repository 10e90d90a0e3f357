#include "toda/sampled.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "toda/numeric.hpp"

namespace toda {

namespace {

std::vector<double> random_box_point(const Box& box, std::mt19937_64& rng) {
    std::vector<double> x(box.lo.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::uniform_real_distribution<double>(box.lo[i], box.hi[i])(rng);
    return x;
}

bool in_box(const Box& box, const std::vector<double>& x) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < box.lo[i] || x[i] > box.hi[i]) return false;
    return true;
}

struct CloudStats {
    long long b0 = 0;
    long long b1 = 0;
    double cover = 0;  // landmark covering radius
    int landmarks = 0;
};

CloudStats cloud_stats(const PointCloud& pc, const SampleConfig& cfg, bool want_b1) {
    CloudStats s;
    s.b0 = rips_components(pc, cfg.radius);
    if (!want_b1) return s;
    const auto lm = maxmin_landmarks(pc, cfg.landmarks);
    s.landmarks = static_cast<int>(lm.size());
    for (std::size_t i = 0; i < pc.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int l : lm) best = std::min(best, distance(pc, i, static_cast<std::size_t>(l)));
        s.cover = std::max(s.cover, best);
    }
    s.b1 = rips_h1_window(pc.subset(lm), cfg.radius, 2 * cfg.radius);
    return s;
}

}  // namespace

SampleSet sample_set(const Formula& f, const SampleConfig& cfg) {
    if (!f.is_quantifier_free()) throw FormulaError(ErrorKind::Oracle, "sampled oracle needs a quantifier-free formula");
    const CompiledFormula cf(f, !cfg.box.has_value());
    if (cfg.box && static_cast<int>(cfg.box->lo.size()) != cf.dim())
        throw FormulaError(ErrorKind::Dimension, "box dimension does not match the formula");

    struct Hit {
        int attempt;
        std::vector<double> x;
    };
    std::vector<Hit> hits;
    double min_violation = std::numeric_limits<double>::infinity();
    std::mutex mu;
    std::atomic<int> next{0};
    auto work = [&] {
        std::vector<Hit> local;
        double local_min = std::numeric_limits<double>::infinity();
        for (int a = next++; a < cfg.samples; a = next++) {
            std::seed_seq seq{static_cast<std::uint64_t>(cfg.seed), static_cast<std::uint64_t>(a)};
            std::mt19937_64 rng(seq);
            auto x = cfg.box ? random_box_point(*cfg.box, rng) : cf.random_sphere_point(rng);
            const double v = cf.project(x, cfg.margin, cfg.max_iterations);
            local_min = std::min(local_min, v);
            if (cfg.box && !in_box(*cfg.box, x)) continue;
            if (cf.holds(x.data(), cfg.tol, cfg.tol)) local.push_back({a, std::move(x)});
        }
        std::lock_guard<std::mutex> lock(mu);
        for (auto& h : local) hits.push_back(std::move(h));
        min_violation = std::min(min_violation, local_min);
    };
    int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, std::max(1, cfg.samples));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.attempt < b.attempt; });
    SampleSet out;
    out.points.dim = cf.dim();
    out.attempts = cfg.samples;
    out.min_violation = min_violation;
    for (const auto& h : hits) {
        out.points.push(h.x.data());
        out.accepted_attempt.push_back(h.attempt);
    }
    return out;
}

BettiEstimate poincare_sampled(const Formula& f, const SampleConfig& cfg, int max_degree) {
    const SampleSet s = sample_set(f, cfg);
    BettiEstimate est;

    // degrees past the dimension of the ambient manifold carry no homology
    int manifold = 0;
    if (cfg.box) {
        manifold = s.points.dim - 1;
    } else {
        for (const auto& b : f.free_blocks()) manifold += b.sphere_dim();
    }
    const bool want_b1 = max_degree >= 1 || manifold == 1;
    int known = want_b1 ? 1 : 0;
    if (manifold <= known) known = std::max(max_degree, known);

    nlohmann::json diag = {{"oracle", "sampled"},
                           {"attempts", s.attempts},
                           {"accepted", s.points.size()},
                           {"radius", cfg.radius},
                           {"seed", cfg.seed},
                           {"min_violation", s.min_violation}};
    if (s.points.size() == 0) {
        est.known_degree = known;
        if (s.min_violation > cfg.empty_threshold) {
            est.betti.assign(static_cast<std::size_t>(known) + 1, 0);
            est.converged = true;
            diag["status"] = "likely empty";
        } else {
            est.converged = false;
            diag["status"] = "descent failed";
        }
        est.diagnostics = diag;
        return est;
    }

    const CloudStats all = cloud_stats(s.points, cfg, want_b1);
    std::vector<int> first_half;
    for (std::size_t i = 0; i < s.accepted_attempt.size(); ++i)
        if (s.accepted_attempt[i] < cfg.samples / 2) first_half.push_back(static_cast<int>(i));
    const CloudStats half = cloud_stats(s.points.subset(first_half), cfg, want_b1);

    est.known_degree = known;
    est.betti = {all.b0};
    if (want_b1) est.betti.push_back(all.b1);
    est.betti.resize(static_cast<std::size_t>(known) + 1, 0);
    const bool covered = !want_b1 || all.cover <= cfg.radius;
    est.converged = covered && half.b0 == all.b0 && half.b1 == all.b1;
    diag["status"] = est.converged ? "ok" : (covered ? "unstable" : "landmarks too sparse");
    diag["half"] = {{"accepted", first_half.size()}, {"b0", half.b0}};
    if (want_b1) {
        diag["landmarks"] = all.landmarks;
        diag["landmark_cover"] = all.cover;
        diag["half"]["b1"] = half.b1;
    }
    est.diagnostics = diag;
    return est;
}

BettiEstimate SampledOracle::estimate(const Formula& fiber, int max_degree) const {
    return poincare_sampled(fiber, cfg_, max_degree);
}

BettiEstimate AutoOracle::estimate(const Formula& fiber, int max_degree) const {
    int coords = 0;
    for (const auto& b : fiber.free_blocks()) coords += b.coord_count();
    BettiEstimate e = coords <= limit_ ? cubical_.estimate(fiber, max_degree) : sampled_.estimate(fiber, max_degree);
    e.diagnostics["selected_by"] = "auto";
    return e;
}

}  // namespace toda
