// Verification suites.  Each case compares library output against a value
// computed independently (direct evaluation, brute force, another oracle).

#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "toda/join.hpp"
#include "toda/reducer.hpp"
#include "toda/sampled.hpp"

namespace toda {

struct CaseResult {
    std::string name;
    bool pass = false;
    nlohmann::json detail = nlohmann::json::object();
};

struct SuiteResult {
    std::string suite;
    std::vector<CaseResult> cases;
    double seconds = 0;

    bool pass() const;
    std::size_t passed() const;
    nlohmann::json to_json(bool timings = true) const;
};

struct SuiteOptions {
    /// Fiber oracle settings for end-to-end decisions.
    SampleConfig fiber = [] {
        SampleConfig s;
        s.samples = 10000;
        s.radius = 1.2;
        return s;
    }();
    std::vector<std::uint64_t> seeds{1, 2, 3};
    int points = 1000;  // random points per fidelity fixture
    ReduceOptions reduce;
    /// Called after each case (progress output).
    std::function<void(const CaseResult&)> on_case;
};

SuiteResult run_duality_suite(const SuiteOptions& opt = {});
SuiteResult run_homology_suite(const SuiteOptions& opt = {});
SuiteResult run_join_suite(const SuiteOptions& opt = {});
SuiteResult run_end2end_suite(const SuiteOptions& opt = {});
SuiteResult run_fidelity_suite(const SuiteOptions& opt = {});
SuiteResult run_shell_suite(const SuiteOptions& opt = {});
SuiteResult run_sizes_suite(const SuiteOptions& opt = {});

const std::vector<std::string>& suite_names();
/// Throws std::invalid_argument for an unknown name.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opt = {});

/// Membership in the join realization computed straight from the template
/// conditions, without the builder.  Points are given per block and copy;
/// nullopt when some quantity is too close to its threshold to call.
struct JoinPoint {
    std::vector<double> param;
    std::vector<std::vector<double>> carried;
    std::vector<std::vector<std::vector<double>>> copies;  // [copy][joined block]
    std::vector<double> t;
    double u = 0;
};

std::optional<bool> direct_join_membership(const Formula& phi, const JoinSpec& spec, const JoinPoint& pt,
                                           double tol = 1e-9);
/// The same point laid out for eval_formula on the builder's output.
NumericPoint pack_join_point(const Formula& built, const JoinSpec& spec, const JoinPoint& pt);
JoinPoint random_join_point(const JoinSpec& spec, std::mt19937_64& rng);

}  // namespace toda
