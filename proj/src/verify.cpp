#include "toda/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "toda/bruteforce.hpp"
#include "toda/chain_complex.hpp"
#include "toda/cubical.hpp"
#include "toda/fixtures.hpp"
#include "toda/formula_io.hpp"
#include "toda/reducer.hpp"

namespace toda {

bool SuiteResult::pass() const {
    return !cases.empty() && passed() == cases.size();
}

std::size_t SuiteResult::passed() const {
    std::size_t n = 0;
    for (const auto& c : cases) n += c.pass ? 1 : 0;
    return n;
}

nlohmann::json SuiteResult::to_json(bool timings) const {
    nlohmann::json j;
    j["suite"] = suite;
    j["pass"] = pass();
    j["passed"] = passed();
    j["total"] = cases.size();
    if (timings) j["seconds"] = seconds;
    auto& arr = j["cases"] = nlohmann::json::array();
    for (const auto& c : cases) arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return j;
}

namespace {

using Clock = std::chrono::steady_clock;

class Recorder {
public:
    Recorder(std::string name, const SuiteOptions& opt) : opt_(opt), start_(Clock::now()) { res_.suite = std::move(name); }

    void add(CaseResult c) {
        if (opt_.on_case) opt_.on_case(c);
        res_.cases.push_back(std::move(c));
    }

    // Runs `body`; an exception fails the case.
    void run(const std::string& name, const std::function<bool(nlohmann::json&)>& body) {
        CaseResult c;
        c.name = name;
        try {
            c.pass = body(c.detail);
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail["error"] = e.what();
        }
        add(std::move(c));
    }

    SuiteResult finish() {
        res_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
        return std::move(res_);
    }

private:
    const SuiteOptions& opt_;
    Clock::time_point start_;
    SuiteResult res_;
};

std::vector<long long> trimmed(std::vector<long long> b) {
    while (!b.empty() && b.back() == 0) b.pop_back();
    return b;
}

std::vector<long long> head(const std::vector<long long>& b, int n) {
    std::vector<long long> out(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n && i < static_cast<int>(b.size()); ++i) out[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)];
    return out;
}

Formula parse_qf(const std::string& decl, const std::string& body) {
    return parse_formula("(sentence (free " + decl + ") (body " + body + "))");
}

// ---------------------------------------------------------------- duality

std::vector<long long> circle_subset_betti(int n, const std::vector<bool>& in) {
    std::vector<int> id(static_cast<std::size_t>(n), -1);
    int v = 0;
    for (int i = 0; i < n; ++i)
        if (in[static_cast<std::size_t>(i)]) id[static_cast<std::size_t>(i)] = v++;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        if (in[static_cast<std::size_t>(i)] && in[static_cast<std::size_t>(j)])
            edges.emplace_back(std::min(id[static_cast<std::size_t>(i)], id[static_cast<std::size_t>(j)]),
                               std::max(id[static_cast<std::size_t>(i)], id[static_cast<std::size_t>(j)]));
    }
    if (v == 0) return {};
    return trimmed(betti_ranks(graph_complex(v, edges)));
}

}  // namespace

SuiteResult run_duality_suite(const SuiteOptions& opt) {
    Recorder rec("duality", opt);

    // Subsets K of S^2 with a closed deformation retract of the complement.
    struct SphereCase {
        std::string name, k, complement;
    };
    const std::string z = "(poly (mono 1 (X.2 1)))";
    const std::vector<SphereCase> sphere_cases = {
        {"empty", "(atom <= (poly (mono 1)) 0)", "(atom >= (poly (mono 1)) 0)"},
        {"point", "(and (atom = (poly (mono 1 (X.0 1))) 0) (atom = (poly (mono 1 (X.1 1))) 0) (atom >= " + z + " 0))",
         "(atom <= (poly (mono 1 (X.2 1)) (mono -1/2)) 0)"},
        {"equator", "(atom = " + z + " 0)", "(atom >= (poly (mono 1 (X.2 2)) (mono -1/4)) 0)"},
        {"two points", "(and (atom = (poly (mono 1 (X.0 1))) 0) (atom = (poly (mono 1 (X.1 1))) 0))",
         "(atom <= (poly (mono 1 (X.2 2)) (mono -1/4)) 0)"},
    };
    CubicalConfig cc;
    cc.resolution = 16;
    // Both directions of the duality plus dual(dual(b)) = b on each vector.
    auto check = [](const std::vector<long long>& k, const std::vector<long long>& c, int n, nlohmann::json& d) {
        const PoincarePolynomial pk(k);
        const PoincarePolynomial pc(c);
        const auto to_c = dual_betti(pk, n, DualDirection::OpenK);
        const auto to_k = dual_betti(pc, n, DualDirection::ClosedK);
        const bool round = dual_betti(to_c, n, DualDirection::ClosedK) == pk &&
                           dual_betti(to_k, n, DualDirection::OpenK) == pc;
        d["K"] = k;
        d["complement"] = c;
        d["dual_of_K"] = to_c.coeffs();
        d["dual_of_complement"] = to_k.coeffs();
        d["round_trip"] = round;
        return to_c == pc && to_k == pk && round;
    };
    for (const auto& sc : sphere_cases) {
        rec.run("S^2 " + sc.name, [&](nlohmann::json& d) {
            const auto bk = poincare_cubical(parse_qf("(X 2)", sc.k), cc, 2);
            const auto bc = poincare_cubical(parse_qf("(X 2)", sc.complement), cc, 2);
            const bool ok = check(trimmed(bk.betti), trimmed(bc.betti), 2, d);
            d["converged"] = bk.converged && bc.converged;
            return ok && bk.converged && bc.converged;
        });
    }

    // S^0 = {+1, -1}: K empty, one point, both points.
    for (int size = 0; size <= 2; ++size) {
        const std::vector<long long> k = size == 0 ? std::vector<long long>{} : std::vector<long long>{size};
        const std::vector<long long> c = size == 2 ? std::vector<long long>{} : std::vector<long long>{2 - size};
        rec.run("S^0 subset of size " + std::to_string(size), [&](nlohmann::json& d) { return check(k, c, 0, d); });
    }
    // Vertex subsets of a 12-cycle model closed subsets of S^1; the induced
    // subgraph on the other vertices models the open complement.
    const int n = 12;
    auto mask = [&](std::initializer_list<int> v) {
        std::vector<bool> m(n, false);
        for (int i : v) m[static_cast<std::size_t>(i)] = true;
        return m;
    };
    const std::vector<std::pair<std::string, std::vector<bool>>> circle_cases = {
        {"point", mask({0})},
        {"two arcs", mask({0, 1, 2, 6, 7})},
        {"whole circle", std::vector<bool>(n, true)},
    };
    for (const auto& [name, in] : circle_cases) {
        std::vector<bool> comp(n);
        for (int i = 0; i < n; ++i) comp[static_cast<std::size_t>(i)] = !in[static_cast<std::size_t>(i)];
        const auto k = circle_subset_betti(n, in);
        const auto c = circle_subset_betti(n, comp);
        rec.run("S^1 " + name, [&](nlohmann::json& d) { return check(k, c, 1, d); });
    }
    return rec.finish();
}

// ---------------------------------------------------------------- homology

SuiteResult run_homology_suite(const SuiteOptions& opt) {
    Recorder rec("homology", opt);
    for (const auto& fx : homology_fixtures()) {
        CubicalConfig cc;
        cc.ambient = true;
        cc.box = fx.box;
        cc.resolution = fx.resolution;
        const auto cub = poincare_cubical(fx.formula, cc);
        const auto cb = trimmed(cub.betti);
        rec.run(fx.name + ": cubical", [&](nlohmann::json& d) {
            d = {{"betti", cb}, {"expected", fx.expected.coeffs()}, {"converged", cub.converged}};
            return cub.converged && cb == fx.expected.coeffs();
        });
        rec.run(fx.name + ": boundary squares to zero", [&](nlohmann::json& d) {
            const auto cover = cubical_cover(fx.formula, [&] {
                CubicalConfig small = cc;
                small.resolution = std::min(fx.resolution, 16);
                return small;
            }());
            std::mt19937_64 rng(7);
            d["kept"] = cover.kept();
            return boundary_squares_to_zero(cubical_complex(cover), rng);
        });
        for (const auto seed : opt.seeds) {
            SampleConfig s = fx.sampling;
            s.seed = seed;
            const auto est = poincare_sampled(fx.formula, s, 1);
            rec.run(fx.name + ": sampled seed " + std::to_string(seed), [&](nlohmann::json& d) {
                const auto sb = head(est.betti, 2);
                const auto want = head(cub.betti, 2);
                d = {{"sampled", sb}, {"cubical", want}, {"converged", est.converged},
                     {"status", est.diagnostics.value("status", "")}};
                return est.converged && sb == want;
            });
        }
    }
    return rec.finish();
}

// ---------------------------------------------------------------- join

SuiteResult run_join_suite(const SuiteOptions& opt) {
    Recorder rec("join", opt);
    for (const auto& fx : join_fixtures()) {
        const VarBlock& Y = fx.phi.free_blocks()[0];
        const VarBlock& Z = fx.phi.free_blocks()[1];
        JoinSpec spec;
        spec.param = Y;
        spec.joined = {Z};
        spec.p = fx.p;
        const Formula join = build_closed_join(fx.phi, spec);
        // sampled over Y x V as a whole, not fiber by fiber
        CubicalConfig cc;
        cc.resolution = 32;
        const auto proj = poincare_cubical(fx.projection, cc, fx.p - 1);
        for (const auto seed : opt.seeds) {
            SampleConfig s = fx.sampling;
            s.seed = seed;
            const auto est = poincare_sampled(join, s, fx.p - 1);
            const std::string name = fx.name + " p=" + std::to_string(fx.p) + " seed " + std::to_string(seed);
            rec.run(name, [&](nlohmann::json& d) {
                const auto a = head(est.betti, fx.p);
                const auto b = head(proj.betti, fx.p);
                d = {{"join", a}, {"projection", b}, {"join_converged", est.converged},
                     {"projection_converged", proj.converged}, {"status", est.diagnostics.value("status", "")}};
                return est.converged && proj.converged && a == b;
            });
        }
    }
    return rec.finish();
}

// ---------------------------------------------------------------- end to end

SuiteResult run_end2end_suite(const SuiteOptions& opt) {
    Recorder rec("end2end", opt);
    const AutoOracle oracle({}, opt.fiber);
    struct Family {
        SentenceFamily family;
        int count;
        std::uint64_t seed;
        const char* tag;
    };
    const Family families[] = {
        {SentenceFamily::Sigma1, 20, 11, "sigma1"},
        {SentenceFamily::Pi1, 5, 12, "pi1"},
        {SentenceFamily::Omega2, 5, 13, "omega2"},
    };
    for (const auto& fam : families) {
        for (const auto& s : generate_sentences(fam.family, fam.count, fam.seed)) {
            rec.run(std::string(fam.tag) + " " + s.label, [&](nlohmann::json& d) {
                const auto t0 = Clock::now();
                const auto r = decide_sentence(s.formula, oracle, opt.reduce);
                d = {{"formula", print_formula(s.formula)},
                     {"expected", std::string(truth_name(s.expected))},
                     {"got", std::string(truth_name(r.decision.truth))},
                     {"seconds", std::chrono::duration<double>(Clock::now() - t0).count()}};
                if (!r.decision.reason.empty()) d["reason"] = r.decision.reason;
                return r.decision.truth == s.expected;
            });
        }
    }
    return rec.finish();
}

// ---------------------------------------------------------------- fidelity

namespace {

// Comparisons with an ambiguity band just outside the tolerance.
struct Judge {
    double tol;
    double band;
    bool ambiguous = false;

    void check(double v) {
        const double a = std::abs(v);
        if (a > tol && a < band) ambiguous = true;
    }
    bool eq(double v) { check(v); return std::abs(v) <= tol; }
    bool ge(double v) { check(v); return v >= -tol; }
    bool gt(double v) { check(v); return v > tol; }
    bool lt(double v) { return gt(-v); }
    bool le(double v) { return ge(-v); }

    bool sign(Sign s, double v) {
        switch (s) {
            case Sign::Eq: return eq(v);
            case Sign::Ne: return !eq(v);
            case Sign::Ge: return ge(v);
            case Sign::Le: return le(v);
            case Sign::Gt: return gt(v);
            case Sign::Lt: return lt(v);
        }
        return false;
    }
};

using Lookup = std::map<std::string, std::vector<double>>;  // part -> coordinates

bool eval_direct(const Expr& e, const Lookup& values, Judge& j) {
    switch (e->kind) {
        case NodeKind::Atom: {
            const double v = e->atom.poly.evaluate<double>([&](const Var& x) {
                return values.at(x.part).at(static_cast<std::size_t>(x.index));
            });
            return j.sign(e->atom.sign, v);
        }
        case NodeKind::Not: return !eval_direct(e->children[0], values, j);
        case NodeKind::And: {
            bool all = true;
            for (const auto& c : e->children) all = eval_direct(c, values, j) && all;
            return all;
        }
        case NodeKind::Or: {
            bool any = false;
            for (const auto& c : e->children) any = eval_direct(c, values, j) || any;
            return any;
        }
    }
    return false;
}

double sq(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return s;
}

std::vector<double> scaled(std::vector<double> v, double r) {
    const double n = std::sqrt(sq(v));
    for (auto& x : v) x *= r / n;
    return v;
}

void split_parts(const VarBlock& b, const std::vector<double>& coords, Lookup& out) {
    std::size_t k = 0;
    for (const auto& p : b.parts) {
        out[p.name].assign(coords.begin() + static_cast<long>(k), coords.begin() + static_cast<long>(k + p.size()));
        k += p.size();
    }
}

double rho(const VarBlock& b) { return b.radius_sq.get_d(); }

std::vector<double> gaussian_dir(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<double> v(static_cast<std::size_t>(n));
    do {
        for (auto& x : v) x = g(rng);
    } while (sq(v) < 1e-12);
    return scaled(v, 1.0);
}

std::vector<double> with_norm_sq(int n, double r2, std::mt19937_64& rng) {
    return scaled(gaussian_dir(n, rng), std::sqrt(r2));
}

}  // namespace

std::optional<bool> direct_join_membership(const Formula& phi, const JoinSpec& spec, const JoinPoint& pt, double tol) {
    const bool closed = spec.variant == JoinVariant::Closed;
    Judge j{tol, 1e-6};
    const int copies = spec.p + 1;
    const double rx = rho(spec.param);
    double rc = 0;
    for (const auto& b : spec.carried) rc += rho(b);
    double rz = 0;
    for (const auto& b : spec.joined) rz += rho(b);

    double total = sq(pt.param) + pt.u * pt.u;
    for (const auto& c : pt.carried) total += sq(c);
    for (const auto& row : pt.copies)
        for (const auto& z : row) total += sq(z);
    for (double t : pt.t) total += t * t;
    const double tsum = std::accumulate(pt.t.begin(), pt.t.end(), 0.0);

    bool ok = true;
    if (closed) {
        // theta 1
        for (double t : pt.t) ok = j.ge(t) && ok;
        ok = j.eq(tsum - 1) && ok;
        ok = j.eq(sq(pt.param) - rx) && ok;
        for (std::size_t c = 0; c < spec.carried.size(); ++c) ok = j.eq(sq(pt.carried[c]) - rho(spec.carried[c])) && ok;
        // theta 2
        for (int i = 0; i < copies; ++i) {
            const auto& row = pt.copies[static_cast<std::size_t>(i)];
            bool on = true;
            for (std::size_t b = 0; b < spec.joined.size(); ++b) {
                ok = j.le(sq(row[b]) - rho(spec.joined[b])) && ok;
                on = j.eq(sq(row[b]) - rho(spec.joined[b])) && on;
            }
            Lookup v;
            split_parts(spec.param, pt.param, v);
            for (std::size_t c = 0; c < spec.carried.size(); ++c) split_parts(spec.carried[c], pt.carried[c], v);
            for (std::size_t b = 0; b < spec.joined.size(); ++b) split_parts(spec.joined[b], row[b], v);
            const bool inst = eval_direct(phi.matrix(), v, j);
            const bool zero = j.eq(pt.t[static_cast<std::size_t>(i)]);
            ok = (zero || (on && inst)) && ok;
        }
        // theta 3
        const double C = rx + rc + copies * rz + 2;
        ok = j.eq(total - C) && ok;
        ok = j.ge(pt.u) && ok;
    } else {
        const double w = 1.0 / (2.0 * copies);
        for (double t : pt.t) ok = j.gt(t) && ok;
        ok = j.gt(tsum - (1 - w)) && ok;
        ok = j.lt(tsum - (1 + w)) && ok;
        auto in_shell = [&](const std::vector<double>& x, double r) {
            const bool a = j.gt(sq(x) - r / 2);
            return j.lt(sq(x) - 3 * r / 2) && a;
        };
        for (int i = 0; i < copies; ++i) {
            const auto& row = pt.copies[static_cast<std::size_t>(i)];
            for (std::size_t b = 0; b < spec.joined.size(); ++b) ok = j.lt(sq(row[b]) - 1.5 * rho(spec.joined[b])) && ok;
            bool shells = in_shell(pt.param, rx);
            for (std::size_t c = 0; c < spec.carried.size(); ++c)
                shells = in_shell(pt.carried[c], rho(spec.carried[c])) && shells;
            for (std::size_t b = 0; b < spec.joined.size(); ++b) shells = in_shell(row[b], rho(spec.joined[b])) && shells;
            bool inst = false;
            if (shells) {
                // phi at the radial projections
                Lookup v;
                split_parts(spec.param, scaled(pt.param, std::sqrt(rx)), v);
                for (std::size_t c = 0; c < spec.carried.size(); ++c)
                    split_parts(spec.carried[c], scaled(pt.carried[c], std::sqrt(rho(spec.carried[c]))), v);
                for (std::size_t b = 0; b < spec.joined.size(); ++b)
                    split_parts(spec.joined[b], scaled(row[b], std::sqrt(rho(spec.joined[b]))), v);
                inst = eval_direct(phi.matrix(), v, j);
            }
            const bool small = j.lt(pt.t[static_cast<std::size_t>(i)] - w);
            ok = (small || (shells && inst)) && ok;
        }
        // theta 3: u > 0 on the ambient sphere
        const double C = 2 * (rx + rc + copies * rz);
        ok = j.gt(pt.u) && ok;
        ok = std::abs(total - C) <= 1e-9 && std::abs(sq(pt.param) - rx) <= 1e-9 && ok;
    }
    if (j.ambiguous) return std::nullopt;
    return ok;
}

NumericPoint pack_join_point(const Formula& built, const JoinSpec& spec, const JoinPoint& pt) {
    Lookup parts;
    for (std::size_t c = 0; c < spec.carried.size(); ++c) split_parts(spec.carried[c], pt.carried[c], parts);
    for (int i = 0; i <= spec.p; ++i)
        for (std::size_t b = 0; b < spec.joined.size(); ++b) {
            Lookup tmp;
            split_parts(spec.joined[b], pt.copies[static_cast<std::size_t>(i)][b], tmp);
            for (auto& [name, v] : tmp) parts[copy_name(name, spec.tag, i)] = v;
        }
    parts[t_part_name(spec.tag)] = pt.t;
    parts[u_part_name(spec.tag)] = {pt.u};

    NumericPoint out;
    out[spec.param.name] = pt.param;
    const VarBlock& V = built.free_blocks().at(1);
    auto& coords = out[V.name];
    for (const auto& p : V.parts) {
        const auto& v = parts.at(p.name);
        coords.insert(coords.end(), v.begin(), v.end());
    }
    return out;
}

JoinPoint random_join_point(const JoinSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto chance = [&](double p) { return unit(rng) < p; };
    const int copies = spec.p + 1;
    JoinPoint pt;
    const double rx = rho(spec.param);
    pt.t.assign(static_cast<std::size_t>(copies), 0.0);
    pt.copies.resize(static_cast<std::size_t>(copies));

    if (spec.variant == JoinVariant::Closed) {
        pt.param = with_norm_sq(spec.param.coord_count(), rx * (chance(0.05) ? 1.2 : 1.0), rng);
        for (const auto& c : spec.carried)
            pt.carried.push_back(with_norm_sq(c.coord_count(), rho(c) * (chance(0.05) ? 0.8 : 1.0), rng));
        std::vector<bool> active(static_cast<std::size_t>(copies));
        bool any = false;
        for (auto&& a : active) any |= (a = chance(0.6));
        if (!any) active[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, copies - 1)(rng))] = true;
        std::exponential_distribution<double> ex;
        double s = 0;
        for (int i = 0; i < copies; ++i)
            if (active[static_cast<std::size_t>(i)]) s += pt.t[static_cast<std::size_t>(i)] = ex(rng) + 0.05;
        for (auto& t : pt.t) t /= s;
        if (chance(0.05)) pt.t[0] += 0.2;
        if (chance(0.03)) pt.t[static_cast<std::size_t>(copies - 1)] = -0.2;
        for (int i = 0; i < copies; ++i)
            for (const auto& b : spec.joined) {
                const double r = rho(b);
                double f = 1.0;
                if (pt.t[static_cast<std::size_t>(i)] > 0) {
                    if (chance(0.15)) f = unit(rng) * 0.7;
                } else {
                    const double u = unit(rng);
                    f = u < 0.5 ? 1.0 : u < 0.9 ? unit(rng) * 0.9 : 1.3;
                }
                pt.copies[static_cast<std::size_t>(i)].push_back(with_norm_sq(b.coord_count(), r * f, rng));
            }
        double rest = sq(pt.param);
        for (const auto& c : pt.carried) rest += sq(c);
        for (const auto& row : pt.copies)
            for (const auto& z : row) rest += sq(z);
        for (double t : pt.t) rest += t * t;
        const double C = join_sphere_constant(spec).get_d();
        pt.u = C > rest ? std::sqrt(C - rest) : 0.0;
        if (chance(0.05)) pt.u = -pt.u;
        if (chance(0.05)) pt.u += 0.3;
        return pt;
    }

    const double w = 1.0 / (2.0 * copies);
    pt.param = with_norm_sq(spec.param.coord_count(), rx, rng);
    for (const auto& c : spec.carried)
        pt.carried.push_back(with_norm_sq(c.coord_count(), rho(c) * (0.3 + 1.4 * unit(rng)), rng));
    double s = 0;
    for (auto& t : pt.t) s += t = chance(0.4) ? unit(rng) * w : w + unit(rng);
    const double target = 1 - 1.3 * w + 2.6 * w * unit(rng);
    for (auto& t : pt.t) t *= target / s;
    if (chance(0.03)) pt.t[0] = -0.1;
    for (int i = 0; i < copies; ++i)
        for (const auto& b : spec.joined)
            pt.copies[static_cast<std::size_t>(i)].push_back(
                with_norm_sq(b.coord_count(), rho(b) * (0.2 + 1.5 * unit(rng)), rng));
    double rest = sq(pt.param);
    for (const auto& c : pt.carried) rest += sq(c);
    for (const auto& row : pt.copies)
        for (const auto& z : row) rest += sq(z);
    for (double t : pt.t) rest += t * t;
    const double C = join_sphere_constant(spec).get_d();
    pt.u = C > rest ? std::sqrt(C - rest) : 0.0;
    if (chance(0.05)) pt.u = -pt.u;
    return pt;
}

namespace {

struct FidelityFixture {
    std::string name;
    Formula phi;
    JoinSpec spec;
};

std::vector<FidelityFixture> fidelity_fixtures() {
    std::vector<FidelityFixture> out;
    auto add = [&](std::string name, const std::string& decl, const std::string& body, std::vector<std::string> carried,
                   int p, JoinVariant variant) {
        Formula phi = parse_qf(decl, body);
        JoinSpec spec;
        const auto& fb = phi.free_blocks();
        spec.param = fb[0];
        for (std::size_t i = 1; i < fb.size(); ++i) {
            const bool is_carried = std::find(carried.begin(), carried.end(), fb[i].name) != carried.end();
            (is_carried ? spec.carried : spec.joined).push_back(fb[i]);
        }
        spec.p = p;
        spec.variant = variant;
        out.push_back({std::move(name), std::move(phi), std::move(spec)});
    };
    const auto C = JoinVariant::Closed;
    const auto O = JoinVariant::Open;
    add("closed half circle", "(X 0) (Z 1)", "(atom >= (poly (mono 1 (Z.0 1))) 0)", {}, 1, C);
    add("closed cap or band", "(X 1) (Z 1)",
        "(or (atom >= (poly (mono 1 (X.0 1) (Z.0 1)) (mono 1 (X.1 1) (Z.1 1)) (mono -1/2)) 0)"
        " (atom <= (poly (mono 1 (Z.1 2)) (mono -1/4)) 0))",
        {}, 2, C);
    add("closed carried", "(X 0) (Y 1) (Z 2)",
        "(atom <= (poly (mono 1 (Y.0 1) (Z.2 1)) (mono 1 (X.0 1) (Z.0 1)) (mono -1/3)) 0)", {"Y"}, 1, C);
    add("open half circle", "(X 0) (Z 1)", "(atom > (poly (mono 1 (Z.0 1))) 0)", {}, 1, O);
    add("open cap or band", "(X 1) (Z 1)",
        "(or (atom > (poly (mono 1 (X.0 1) (Z.0 1)) (mono 1 (X.1 1) (Z.1 1)) (mono -1/2)) 0)"
        " (atom < (poly (mono 1 (Z.1 2)) (mono -1/4)) 0))",
        {}, 2, O);
    add("open carried", "(X 0) (Y 1) (Z 2)",
        "(and (atom < (poly (mono 1 (Y.0 1) (Z.2 1)) (mono 1 (X.0 1) (Z.0 1)) (mono -1/3)) 0)"
        " (atom != (poly (mono 1 (Z.1 1)) (mono 1/2 (X.0 1))) 0))",
        {"Y"}, 1, O);
    return out;
}

}  // namespace

SuiteResult run_fidelity_suite(const SuiteOptions& opt) {
    Recorder rec("fidelity", opt);
    for (const auto& fx : fidelity_fixtures()) {
        const bool closed = fx.spec.variant == JoinVariant::Closed;
        const Formula built = closed ? build_closed_join(fx.phi, fx.spec) : build_open_join(fx.phi, fx.spec);
        rec.run(fx.name + ": membership", [&](nlohmann::json& d) {
            std::mt19937_64 rng(opt.seeds.empty() ? 1 : opt.seeds.front());
            int agree = 0, disagree = 0, skipped = 0, members = 0;
            const double tol = closed ? 1e-9 : 0.0;
            for (int k = 0; k < opt.points; ++k) {
                const JoinPoint pt = random_join_point(fx.spec, rng);
                const auto want = direct_join_membership(fx.phi, fx.spec, pt, tol);
                if (!want) {
                    ++skipped;
                    continue;
                }
                const NumericPoint np = pack_join_point(built, fx.spec, pt);
                bool got = eval_formula(built, np, tol);
                // the open ambient sphere is a block constraint, not an atom
                if (!closed) got = got && on_spheres(built, np, 1e-9);
                (got == *want ? agree : disagree) += 1;
                members += *want ? 1 : 0;
            }
            d = {{"agree", agree}, {"disagree", disagree}, {"skipped", skipped}, {"members", members}};
            // both outcomes must actually occur
            return disagree == 0 && members > 0 && members < agree && skipped < opt.points / 10;
        });
        rec.run(fx.name + ": variable count", [&](nlohmann::json& d) {
            int k1 = fx.spec.param.coord_count();
            for (const auto& b : fx.spec.carried) k1 += b.coord_count();
            int l1 = 0;
            for (const auto& b : fx.spec.joined) l1 += b.coord_count();
            const int want = k1 + (fx.spec.p + 1) * (l1 + 1) + 1;
            int got = 0;
            for (const auto& b : built.free_blocks()) got += b.coord_count();
            d = {{"expected", want}, {"got", got}};
            return got == want;
        });
    }
    return rec.finish();
}

// ---------------------------------------------------------------- shell

namespace {

Polynomial random_cubic(const std::vector<Var>& vars, std::mt19937_64& rng) {
    static const int num[] = {-3, -2, -1, 1, 2, 3};
    std::uniform_int_distribution<int> nterms(2, 4);
    std::uniform_int_distribution<int> deg(0, 3);
    std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
    std::uniform_int_distribution<int> coeff(0, 5);
    Polynomial p;
    const int t = nterms(rng);
    for (int i = 0; i < t; ++i) {
        Polynomial m(make_rational(num[coeff(rng)], 2));
        const int d = deg(rng);
        for (int k = 0; k < d; ++k) m = m * Polynomial::variable(vars[pick(rng)]);
        p += m;
    }
    return p;
}

}  // namespace

SuiteResult run_shell_suite(const SuiteOptions& opt) {
    Recorder rec("shell", opt);
    const VarBlock X = VarBlock::sphere("X", 1);
    VarBlock Y = VarBlock::sphere("Y", 2);
    Y.radius_sq = 2;
    std::vector<Var> vars = X.coords();
    for (const auto& v : Y.coords()) vars.push_back(v);

    std::vector<std::pair<std::string, Atom>> atoms;
    auto x = [&](int i) { return Polynomial::variable(Var{"X", i}); };
    auto y = [&](int i) { return Polynomial::variable(Var{"Y", i}); };
    atoms.push_back({"mixed parity", Atom{x(0) + y(0) * y(1) - Polynomial(make_rational(1, 4)), Sign::Gt}});
    atoms.push_back({"odd cubic", Atom{x(0) * x(0) * x(0) + x(1) - Polynomial(make_rational(1, 2)), Sign::Le}});
    atoms.push_back({"even homogeneous", Atom{x(0) * x(0) - y(2) * y(2), Sign::Ge}});
    atoms.push_back({"linear", Atom{x(0) + y(1), Sign::Lt}});
    std::mt19937_64 gen(opt.seeds.empty() ? 1 : opt.seeds.front());
    const Sign signs[] = {Sign::Eq, Sign::Ge, Sign::Gt, Sign::Le, Sign::Lt, Sign::Ne};
    // keep random polynomials that change sign on the product of spheres
    auto varies = [&](const Polynomial& q) {
        std::mt19937_64 r(5);
        int pos = 0, neg = 0;
        for (int k = 0; k < 200; ++k) {
            const auto a = with_norm_sq(2, rho(X), r);
            const auto b = with_norm_sq(3, rho(Y), r);
            const double v = q.evaluate<double>(
                [&](const Var& w) { return (w.part == "X" ? a : b)[static_cast<std::size_t>(w.index)]; });
            (v > 0 ? pos : neg) += 1;
        }
        return pos >= 20 && neg >= 20;
    };
    for (int i = 0; i < 12; ++i) {
        Polynomial q = random_cubic(vars, gen);
        while (!varies(q)) q = random_cubic(vars, gen);
        atoms.push_back({"random " + std::to_string(i + 1), Atom{std::move(q), signs[i % 6]}});
    }

    for (const auto& [name, a] : atoms) {
        rec.run(name + " (" + std::string(sign_symbol(a.sign)) + ")", [&](nlohmann::json& d) {
            const Expr e = shell_normalize(a, {X, Y});
            const Formula f({X, Y}, {}, e);
            const Topology want_topology = is_closed_type(a.sign) ? Topology::Closed : Topology::Open;
            const bool topology_ok = a.sign == Sign::Eq || a.sign == Sign::Ne || classify_matrix(e) == want_topology;
            std::mt19937_64 rng(1000 + std::hash<std::string>{}(name) % 1000);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            int agree = 0, disagree = 0, skipped = 0, holds = 0;
            for (int k = 0; k < opt.points; ++k) {
                const auto px = with_norm_sq(2, rho(X) * (0.5 + u(rng) * 0.999 + 0.0005), rng);
                const auto py = with_norm_sq(3, rho(Y) * (0.5 + u(rng) * 0.999 + 0.0005), rng);
                const auto nx = scaled(px, std::sqrt(rho(X)));
                const auto ny = scaled(py, std::sqrt(rho(Y)));
                const double q = a.poly.evaluate<double>([&](const Var& v) {
                    return (v.part == "X" ? nx : ny)[static_cast<std::size_t>(v.index)];
                });
                if (std::abs(q) <= 1e-9) {
                    ++skipped;
                    continue;
                }
                const bool want = sign_holds(a.sign, q > 0 ? 1 : -1);
                const bool got = eval_formula(f, NumericPoint{{"X", px}, {"Y", py}}, 0.0);
                (want == got ? agree : disagree) += 1;
                holds += want ? 1 : 0;
            }
            d = {{"agree", agree}, {"disagree", disagree}, {"skipped", skipped}, {"holds", holds},
                 {"atoms", atom_count(e)}, {"topology_ok", topology_ok}};
            return disagree == 0 && topology_ok;
        });
    }
    return rec.finish();
}

// ---------------------------------------------------------------- sizes

SuiteResult run_sizes_suite(const SuiteOptions& opt) {
    Recorder rec("sizes", opt);
    std::vector<double> lx, latoms, lbytes;
    const std::uint64_t seed = opt.seeds.empty() ? 1 : opt.seeds.front();
    for (int a = 1; a <= 10; ++a) {
        rec.run("atoms " + std::to_string(a), [&](nlohmann::json& d) {
            const Formula f = size_input(a, seed);
            const auto t0 = Clock::now();
            const auto art = reduce(f, opt.reduce);
            const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
            const auto r = size_report(art);

            // Coordinate recurrence: the joined level, its T coordinate per
            // copy, and U are added to the fiber; later levels get copied.
            int x = 1;  // lifted S^0 parameter
            int y = 1;  // lifted S^0 fiber
            std::vector<int> levels;
            for (const auto& l : f.prefix()) {
                int c = 0;
                for (const auto& b : l.blocks) c += b.coord_count();
                levels.push_back(c);
            }
            bool steps_ok = art.trace.size() == levels.size();
            for (std::size_t j = 0; steps_ok && j < levels.size(); ++j) {
                const int p = opt.reduce.policy == JoinPolicy::MPlus1 ? y : std::max(y - 1, 0);
                y += (p + 1) * (levels[j] + 1) + 1;
                int bound = 0;
                for (std::size_t k = j + 1; k < levels.size(); ++k) bound += levels[k] *= (p + 1);
                steps_ok = art.trace[j].free_coords == x + y && art.trace[j].bound_coords == bound;
            }
            lx.push_back(std::log(a));
            latoms.push_back(std::log(static_cast<double>(r.atoms)));
            lbytes.push_back(std::log(static_cast<double>(r.text_bytes)));
            d = {{"variables", r.variables}, {"expected_variables", x + y}, {"atoms", r.atoms},
                 {"text_bytes", r.text_bytes}, {"max_degree", r.max_degree}, {"seconds", secs}};
            return steps_ok && r.variables == x + y;
        });
    }
    auto slope = [&](const std::vector<double>& ys) {
        const double n = static_cast<double>(lx.size());
        const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
        const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ys[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        return sxy / sxx;
    };
    rec.run("log-log slope", [&](nlohmann::json& d) {
        if (lx.size() < 2) return false;
        const double sa = slope(latoms);
        const double sb = slope(lbytes);
        d = {{"atoms_slope", sa}, {"bytes_slope", sb}};
        return sa <= 3.0 && sb <= 3.0;
    });
    return rec.finish();
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"duality", "homology", "join", "end2end", "fidelity", "shell", "sizes"};
    return names;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opt) {
    if (name == "duality") return run_duality_suite(opt);
    if (name == "homology") return run_homology_suite(opt);
    if (name == "join") return run_join_suite(opt);
    if (name == "end2end") return run_end2end_suite(opt);
    if (name == "fidelity") return run_fidelity_suite(opt);
    if (name == "shell") return run_shell_suite(opt);
    if (name == "sizes") return run_sizes_suite(opt);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace toda
