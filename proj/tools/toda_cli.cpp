// Command-line front end.  Every run writes one JSON report (to --out or
// stdout), including failed runs.
//
// Exit codes: 0 success / true, 1 false, 2 unknown or not converged,
// 3 usage or input error, 4 internal error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "toda/bruteforce.hpp"
#include "toda/cubical.hpp"
#include "toda/formula_io.hpp"
#include "toda/reducer.hpp"
#include "toda/sampled.hpp"
#include "toda/verify.hpp"
#include "toda/version.hpp"

using namespace toda;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kFalse = 1, kUnknown = 2, kUsage = 3, kInternal = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string input;
    std::string out;
    std::string oracle = "auto";
    int resolution = 32;
    int samples = 2000;
    double radius = 0;  // 0: per-command default
    std::uint64_t seed = 42;
    double margin = 0.05;
    std::string join_param = "m_plus_1";
    std::string suite;
    double box = 0;  // > 0: betti in the ambient box [-box, box]^n
    int threads = 0;
};

json config_json(const RunConfig& c) {
    return {{"command", c.command},   {"input", c.input},       {"out", c.out},
            {"oracle", c.oracle},     {"resolution", c.resolution}, {"samples", c.samples},
            {"radius", c.radius},     {"seed", c.seed},         {"margin", c.margin},
            {"join_param", c.join_param}, {"suite", c.suite},   {"box", c.box},
            {"threads", c.threads}};
}

Formula read_input(const RunConfig& c) {
    if (c.input.empty()) throw UsageError("--input is required");
    std::ifstream in(c.input);
    if (!in) throw UsageError("cannot read input file '" + c.input + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_formula(ss.str());
    } catch (const FormulaError& e) {
        throw UsageError(std::string("input: ") + e.what());
    }
}

ReduceOptions reduce_options(const RunConfig& c) {
    const auto p = parse_join_policy(c.join_param);
    if (!p) throw UsageError("unknown --join-param '" + c.join_param + "'");
    return ReduceOptions{*p};
}

SampleConfig sample_config(const RunConfig& c) {
    SampleConfig s;
    s.samples = c.samples;
    s.radius = c.radius;
    s.seed = c.seed;
    s.threads = c.threads;
    return s;
}

std::unique_ptr<FiberOracle> make_oracle(const RunConfig& c) {
    CubicalConfig cc;
    cc.resolution = c.resolution;
    if (c.oracle == "cubical") return std::make_unique<CubicalOracle>(cc);
    if (c.oracle == "sampled") return std::make_unique<SampledOracle>(sample_config(c));
    if (c.oracle == "auto") return std::make_unique<AutoOracle>(cc, sample_config(c));
    throw UsageError("unknown --oracle '" + c.oracle + "'");
}

json blocks_json(const std::vector<VarBlock>& blocks) {
    json a = json::array();
    for (const auto& b : blocks) a.push_back({{"name", b.name}, {"coords", b.coord_count()}, {"radius2", to_string(b.radius_sq)}});
    return a;
}

json chain_json(const std::vector<CoeffStage>& chain) {
    json a = json::array();
    for (const auto& s : chain) a.push_back(to_string(s));
    return a;
}

json trace_json(const std::vector<StepTrace>& trace) {
    json a = json::array();
    for (const auto& t : trace)
        a.push_back({{"step", t.step},
                     {"original", std::string(quantifier_name(t.original))},
                     {"effective", std::string(quantifier_name(t.effective))},
                     {"p", t.p},
                     {"fiber_dim", t.fiber_dim},
                     {"polarity_before", std::string(topology_name(t.polarity_before))},
                     {"polarity_after", std::string(topology_name(t.polarity_after))},
                     {"free_coords", t.free_coords},
                     {"bound_coords", t.bound_coords},
                     {"atoms", t.atoms}});
    return a;
}

json estimate_json(const BettiEstimate& e) {
    return {{"betti", e.betti},
            {"known_degree", e.known_degree},
            {"converged", e.converged},
            {"poincare", to_string(e.poincare())},
            {"diagnostics", e.diagnostics}};
}

int truth_exit(Truth t) {
    return t == Truth::True ? kOk : t == Truth::False ? kFalse : kUnknown;
}

int cmd_parse(const RunConfig& c, json& r) {
    const Formula f = read_input(c);
    r["formula"] = print_formula(f);
    r["free_blocks"] = blocks_json(f.free_blocks());
    r["alternation"] = f.alternation();
    r["topology"] = std::string(topology_name(classify_topology(f)));
    r["compact_hierarchy_valid"] = f.is_compact_hierarchy_valid();
    r["atoms"] = atom_count(f.matrix());
    r["max_degree"] = max_degree(f.matrix());
    return kOk;
}

int cmd_reduce(const RunConfig& c, json& r) {
    const Formula f = read_input(c);
    const ReductionArtifact a = [&] {
        try {
            return reduce(f, reduce_options(c));
        } catch (const FormulaError& e) {
            throw UsageError(e.what());
        }
    }();
    const SizeReport s = size_report(a);
    r["theta"] = print_formula(a.theta);
    r["chain"] = chain_json(a.chain);
    r["param_block"] = a.param_block.name;
    r["fiber_block"] = a.fiber_block.name;
    r["fiber_dim"] = a.fiber_dim;
    r["polarity"] = std::string(topology_name(a.polarity));
    r["lifted_param"] = a.lifted_param;
    r["lifted_fiber"] = a.lifted_fiber;
    r["trace"] = trace_json(a.trace);
    r["size"] = {{"atoms", s.atoms},          {"free_coords", s.free_coords},
                 {"bound_coords", s.bound_coords}, {"variables", s.variables},
                 {"max_degree", s.max_degree}, {"join_parameters", s.join_parameters},
                 {"text_bytes", s.text_bytes}};
    return kOk;
}

int cmd_betti(const RunConfig& c, json& r) {
    const Formula f = read_input(c);
    if (!f.is_quantifier_free()) throw UsageError("betti needs a quantifier-free formula");
    BettiEstimate e;
    if (c.box > 0) {
        int n = 0;
        for (const auto& b : f.free_blocks()) n += b.coord_count();
        Box box{std::vector<double>(static_cast<std::size_t>(n), -c.box), std::vector<double>(static_cast<std::size_t>(n), c.box)};
        if (c.oracle == "sampled") {
            SampleConfig s = sample_config(c);
            s.box = box;
            e = poincare_sampled(f, s, 1);
        } else {
            CubicalConfig cc;
            cc.resolution = c.resolution;
            cc.ambient = true;
            cc.box = box;
            e = poincare_cubical(f, cc);
        }
    } else {
        int dim = 0;
        for (const auto& b : f.free_blocks()) dim += b.sphere_dim();
        e = make_oracle(c)->estimate(f, dim);
    }
    r["estimate"] = estimate_json(e);
    return e.converged ? kOk : kUnknown;
}

int cmd_decide(const RunConfig& c, json& r) {
    const Formula f = read_input(c);
    if (!f.free_blocks().empty()) throw UsageError("decide needs a sentence (no free blocks)");
    const auto oracle = make_oracle(c);
    const SentenceDecision d = [&] {
        try {
            return decide_sentence(f, *oracle, reduce_options(c));
        } catch (const FormulaError& e) {
            if (e.kind() == ErrorKind::Oracle) throw;
            throw UsageError(e.what());
        }
    }();
    const Decision& dec = d.decision;
    r["truth"] = std::string(truth_name(dec.truth));
    r["strategy"] = d.strategy == SentenceStrategy::Uniform ? "uniform" : "promote_leading";
    r["negated"] = d.negated;
    r["top_degree"] = d.top_degree;
    r["chain"] = chain_json(d.artifact.chain);
    r["trace"] = trace_json(d.artifact.trace);
    r["needed_degrees"] = dec.needed_degrees;
    r["fiber_estimate"] = estimate_json(dec.fiber_estimate);
    r["fiber_poincare"] = dec.fiber_poincare ? json(to_string(*dec.fiber_poincare)) : json(nullptr);
    r["poincare"] = dec.result ? json(to_string(*dec.result)) : json(nullptr);
    r["oracle"] = oracle->name();
    if (!dec.reason.empty()) r["reason"] = dec.reason;
    return truth_exit(dec.truth);
}

int cmd_brute(const RunConfig& c, json& r) {
    const Formula f = read_input(c);
    if (!f.free_blocks().empty()) throw UsageError("brute needs a sentence (no free blocks)");
    BruteConfig b;
    b.delta = c.margin;
    const BruteResult res = brute_decide(f, b);
    r["truth"] = std::string(truth_name(res.truth));
    r["strict"] = res.strict;
    r["lenient"] = res.lenient;
    r["exact"] = res.exact;
    r["evaluations"] = res.evaluations;
    return truth_exit(res.truth);
}

int cmd_verify(const RunConfig& c, json& r, const CLI::App& sub) {
    if (c.suite.empty()) throw UsageError("--suite is required");
    std::vector<std::string> names;
    if (c.suite == "all") {
        names = suite_names();
    } else {
        const auto& known = suite_names();
        if (std::find(known.begin(), known.end(), c.suite) == known.end())
            throw UsageError("unknown --suite '" + c.suite + "'");
        names = {c.suite};
    }
    SuiteOptions opt;
    opt.reduce = reduce_options(c);
    // only explicit flags replace the suite's fiber settings
    if (sub.count("--samples")) opt.fiber.samples = c.samples;
    if (sub.count("--radius")) opt.fiber.radius = c.radius;
    opt.fiber.threads = c.threads;
    if (sub.count("--seed")) opt.seeds = {c.seed};
    opt.on_case = [](const CaseResult& cr) {
        std::cerr << (cr.pass ? "  pass  " : "  FAIL  ") << cr.name << "\n";
    };
    bool all = true;
    json suites = json::array();
    for (const auto& n : names) {
        std::cerr << n << "\n";
        const SuiteResult s = run_suite(n, opt);
        all = all && s.pass();
        suites.push_back(s.to_json());
    }
    r["suites"] = suites;
    r["pass"] = all;
    return all ? kOk : kFalse;
}

int threads_from_env() {
    const char* v = std::getenv("TODA_REDUCE_THREADS");
    if (!v || !*v) return 0;
    try {
        std::size_t pos = 0;
        const int n = std::stoi(v, &pos);
        if (pos == std::string(v).size() && n > 0) return n;
    } catch (const std::exception&) {
    }
    throw UsageError("TODA_REDUCE_THREADS must be a positive integer");
}

void write_report(const RunConfig& c, const json& report) {
    const std::string text = report.dump(2) + "\n";
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(c.out);
    if (!out) {
        std::cerr << "cannot write '" << c.out << "'\n";
        std::cout << text;
        return;
    }
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduce quantified sphere-block formulas and decide them through Betti numbers"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    RunConfig cfg;
    const char* commands[][2] = {
        {"parse", "Parse and print a formula"},
        {"reduce", "Reduce to a quantifier-free formula plus a coefficient chain"},
        {"betti", "Betti numbers of a quantifier-free formula"},
        {"decide", "Decide a sentence through the reduction"},
        {"brute", "Decide a sentence by grid evaluation"},
        {"verify", "Run verification suites"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        CLI::App* s = app.add_subcommand(name, help);
        s->add_option("--input", cfg.input, "Formula file");
        s->add_option("--out", cfg.out, "Report path (default stdout)");
        s->add_option("--oracle", cfg.oracle, "cubical, sampled or auto");
        s->add_option("--resolution", cfg.resolution, "Cubical grid resolution")->check(CLI::PositiveNumber);
        s->add_option("--samples", cfg.samples, "Sampled oracle point count")->check(CLI::PositiveNumber);
        s->add_option("--radius", cfg.radius, "Sampled oracle scale")->check(CLI::PositiveNumber);
        s->add_option("--seed", cfg.seed, "Random seed");
        s->add_option("--margin", cfg.margin, "Brute-force margin")->check(CLI::PositiveNumber);
        s->add_option("--join-param", cfg.join_param, "m_plus_1 or paper_m");
        s->add_option("--suite", cfg.suite, "duality, homology, join, end2end, fidelity, shell, sizes or all");
        s->add_option("--box", cfg.box, "betti: cover [-box, box]^n ignoring sphere constraints");
        subs.push_back(s);
    }

    json report;
    report["tool"] = "toda";
    report["version"] = kVersion;
    const auto t0 = std::chrono::steady_clock::now();
    int code = kOk;
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        report["config"] = config_json(cfg);
        report["error"] = {{"kind", "usage"}, {"message", e.what()}};
        report["exit_code"] = kUsage;
        write_report(cfg, report);
        return kUsage;
    }

    CLI::App* active = nullptr;
    for (auto* s : subs)
        if (s->parsed()) active = s;
    cfg.command = active->get_name();
    if (cfg.radius == 0) cfg.radius = cfg.command == "decide" ? 1.2 : 0.3;

    try {
        cfg.threads = threads_from_env();
        json result;
        if (cfg.command == "parse") code = cmd_parse(cfg, result);
        else if (cfg.command == "reduce") code = cmd_reduce(cfg, result);
        else if (cfg.command == "betti") code = cmd_betti(cfg, result);
        else if (cfg.command == "decide") code = cmd_decide(cfg, result);
        else if (cfg.command == "brute") code = cmd_brute(cfg, result);
        else code = cmd_verify(cfg, result, *active);
        report["result"] = result;
    } catch (const UsageError& e) {
        code = kUsage;
        report["error"] = {{"kind", "usage"}, {"message", e.what()}};
    } catch (const std::exception& e) {
        code = kInternal;
        report["error"] = {{"kind", "internal"}, {"message", e.what()}};
    }
    report["config"] = config_json(cfg);
    report["exit_code"] = code;
    report["timings"] = {{"total_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
    write_report(cfg, report);
    if (report.contains("error")) std::cerr << "error: " << report["error"]["message"].get<std::string>() << "\n";
    return code;
}
