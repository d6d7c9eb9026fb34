#include <cmath>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ivlab/cli.hpp"
#include "ivlab/io.hpp"

namespace {

std::int64_t parse_count(const std::string& s) {
    const double v = ivlab::parse_number(s);
    if (!(v >= 1.0) || v != std::floor(v) || v > 9e18) throw CLI::ValidationError("--samples", "expected a positive integer");
    return static_cast<std::int64_t>(v);
}

} // namespace

int main(int argc, char** argv) {
    ivlab::RunConfig cfg;
    CLI::App app{"ivlab: intrinsic volumes, super-convolutive limits and intrinsic entropy curves.\n"
                 "All logarithms are natural logarithms (nats)."};
    app.set_version_flag("--version", std::string("ivlab ") + ivlab::kVersion);
    app.set_config("--config", "", "Key-value config file mirroring the flags ([iv], [h-theta], [verify] sections)");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", cfg.seed, "Random seed (recorded in every output)");
    app.add_option("--jobs", cfg.jobs, "Worker threads for sampling and family construction")->check(CLI::PositiveNumber);
    app.add_option("--format", cfg.format, "Output format: csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("-o,--output", cfg.output, "Output file (relative paths resolve against $IVLAB_OUTPUT_DIR)");

    std::string samples;
    std::string t_grid;
    std::string theta_grid;
    std::string eps_ladder;

    auto* iv = app.add_subcommand("iv", "Intrinsic volumes of a body (closed form) or a Steiner fit of an oracle");
    iv->add_option("body", cfg.target, "cube | ball | crosspolytope | fit")
        ->required()
        ->check(CLI::IsMember({"cube", "ball", "crosspolytope", "fit"}));
    iv->add_option("--n", cfg.n, "Dimension");
    iv->add_option("--A", cfg.A, "Cube side / crosspolytope scale ({x : sum |x_i| <= A n})");
    iv->add_option("--r", cfg.r, "Ball radius");
    iv->add_option("--oracle", cfg.oracle, "Oracle for fit: cube<d>, ball<d>, cross<d>, square, disk");
    iv->add_option("--samples", samples, "Monte-Carlo samples per tube radius (e.g. 1e6)");
    iv->add_option("--t-grid", t_grid, "Tube radii: comma list or lo:step:hi (default: Chebyshev)");
    iv->add_flag("--verify", cfg.verify, "Exit 1 on an Alexandrov-Fenchel violation (fit: on a > 3 SE deviation)");

    auto* ht = app.add_subcommand("h-theta", "Intrinsic entropy curve h_X(theta) as CSV or JSON");
    ht->add_option("density", cfg.target, "gaussian | uniform | laplace | exponential | tabulated")
        ->required()
        ->check(CLI::IsMember({"gaussian", "uniform", "laplace", "exponential", "tabulated"}));
    ht->add_option("--nu", cfg.nu, "Gaussian variance");
    ht->add_option("--A", cfg.A, "Uniform width (support [0, A])");
    ht->add_option("--b", cfg.b, "Laplace scale");
    ht->add_option("--lambda", cfg.lambda, "Exponential rate");
    ht->add_option("--table", cfg.table, "CSV of x,phi pairs for a tabulated potential");
    ht->add_option("--left-slope", cfg.left_slope, "Outward slope of the tabulated potential left of the table");
    ht->add_option("--right-slope", cfg.right_slope, "Outward slope right of the table");
    ht->add_flag("--closed-form", cfg.closed_form, "Exact formula (gaussian, uniform) instead of the pipeline");
    ht->add_option("--theta-grid", theta_grid, "Theta grid: comma list or lo:step:hi (default 0:0.05:1)");
    ht->add_option("--eps-ladder", eps_ladder, "Decreasing eps values (default 0.2,0.1,0.05,0.025)");
    ht->add_option("--n-max", cfg.n_max, "Largest n (default 400 for gaussian/uniform, 3 otherwise)");
    ht->add_option("--samples", samples, "Monte-Carlo samples per tube radius for band curves");

    bool all = false;
    auto* vf = app.add_subcommand("verify", "Run property suites; exit 0 iff every check passes");
    vf->add_option("--suite", cfg.target, "superconv | af | lambda | typical | bloat | loomis-whitney | endpoints | "
                                          "appendix-example | epi");
    vf->add_flag("--all", all, "Run every suite");
    vf->add_option("--family", cfg.family, "cube | ball | crosspolytope | appendix | all");
    vf->add_option("--alpha", cfg.alpha, "Appendix example alpha (> 1)");
    vf->add_option("--delta", cfg.delta, "Appendix example delta (in (0, 1/2))");
    vf->add_option("--nu1", cfg.nu1, "EPI check: variance of X");
    vf->add_option("--nu2", cfg.nu2, "EPI check: variance of Y");
    vf->add_option("--samples", samples, "Monte-Carlo samples per tube radius for Steiner fits");

    try {
        app.parse(argc, argv);
        if (!samples.empty()) cfg.samples = parse_count(samples);
        if (!t_grid.empty()) cfg.t_grid = ivlab::parse_grid(t_grid);
        if (!theta_grid.empty()) cfg.theta_grid = ivlab::sorted_unique(ivlab::parse_grid(theta_grid));
        if (!eps_ladder.empty()) cfg.eps_ladder = ivlab::parse_grid(eps_ladder);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ivlab::kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ivlab::kExitUsage;
    }

    if (iv->parsed()) cfg.subcommand = "iv";
    else if (ht->parsed()) cfg.subcommand = "h-theta";
    else cfg.subcommand = "verify";
    if (cfg.subcommand == "verify") {
        if (all) cfg.target = "all";
        if (cfg.target.empty()) {
            std::cerr << "error: verify needs --suite NAME or --all\n";
            return ivlab::kExitUsage;
        }
    }
    return ivlab::run(cfg, std::cout, std::cerr);
}
