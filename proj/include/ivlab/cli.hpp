#pragma once

// Command implementations behind the `ivlab` executable. Argument parsing
// lives in tools/main.cpp; everything here works on a filled RunConfig so the
// commands can be driven from tests.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ivlab {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitInvariant = 1, kExitUsage = 2, kExitNonConvergence = 3 };

struct RunConfig {
    std::string subcommand;  ///< iv | h-theta | verify
    std::string target;      ///< body, density or suite name ("all" for verify --all)

    // bodies
    int n = 2;
    double A = 1.0;
    double r = 1.0;
    std::string oracle = "cube2";
    std::vector<double> t_grid;  ///< empty: Chebyshev default
    std::int64_t samples = 1000000;
    bool verify = false;

    // densities
    double nu = 1.0;
    double b = 1.0;
    double lambda = 1.0;
    std::string table;  ///< CSV with x,phi columns
    double left_slope = 1.0;
    double right_slope = 1.0;
    bool closed_form = false;
    std::vector<double> theta_grid;  ///< empty: 0, 0.05, ..., 1
    std::vector<double> eps_ladder{0.2, 0.1, 0.05, 0.025};
    int n_max = 0;  ///< 0: 400 for closed-form families, 3 otherwise

    // verify
    std::string family = "all";
    double alpha = 2.0;
    double delta = 0.25;
    double nu1 = 1.0;
    double nu2 = 1.0;

    std::uint64_t seed = 1;
    int jobs = 1;
    std::string format;  ///< csv | json; empty picks the command default
    std::string output;  ///< file path; relative paths resolve against $IVLAB_OUTPUT_DIR
};

/// Stable key=value rendering of every result-affecting field (not jobs or output).
std::string canonical_config(const RunConfig& cfg);

int cmd_intrinsic_volumes(const RunConfig& cfg, std::ostream& out);
int cmd_h_theta(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);

/// Dispatches on cfg.subcommand, writes to cfg.output (or stdout) and maps
/// exceptions to exit codes: bad input 2, non-convergence 3.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace ivlab
