#pragma once

// Property suites shared by `ivlab verify` and the acceptance tests.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ivlab {

struct VerifyOptions {
    std::string family = "all";  ///< cube | ball | crosspolytope | appendix | all
    double alpha = 2.0;
    double delta = 0.25;
    double nu1 = 1.0;
    double nu2 = 1.0;
    int superconv_n = 40;
    int af_n = 400;
    int lambda_n = 400;
    std::int64_t concatenation_trials = 100000;
    std::int64_t bloat_trials = 10000;
    std::int64_t fit_samples = 1000000;
    std::uint64_t seed = 1;
    int jobs = 1;
};

struct CheckResult {
    std::string suite;
    std::string name;
    bool pass;
    /// Reported but never gating (conjecture evidence).
    bool informational = false;
    nlohmann::json details;
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& options);
std::vector<CheckResult> run_all_suites(const VerifyOptions& options);

void to_json(nlohmann::json& j, const CheckResult& r);

} // namespace ivlab
