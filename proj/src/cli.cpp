#include "ivlab/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ivlab/convex_bodies.hpp"
#include "ivlab/errors.hpp"
#include "ivlab/intrinsic_entropy.hpp"
#include "ivlab/io.hpp"
#include "ivlab/logconcave.hpp"
#include "ivlab/verify.hpp"

namespace ivlab {

namespace {

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_number(v[i]);
    }
    return s;
}

nlohmann::json meta(const RunConfig& cfg) {
    return {{"tool", "ivlab"},
            {"version", kVersion},
            {"modules",
             {{"convex_bodies", kVersion},
              {"superconv", kVersion},
              {"logconcave", kVersion},
              {"intrinsic_entropy", kVersion},
              {"cli", kVersion}}},
            {"config_hash", hex64(fnv1a64(canonical_config(cfg)))},
            {"seed", cfg.seed}};
}

void csv_preamble(std::ostream& out, const RunConfig& cfg) {
    out << "# ivlab " << kVersion << " config_hash=" << hex64(fnv1a64(canonical_config(cfg)))
        << " seed=" << cfg.seed << '\n';
}

std::string format_of(const RunConfig& cfg, const char* fallback) {
    const std::string f = cfg.format.empty() ? fallback : cfg.format;
    if (f != "csv" && f != "json") throw std::invalid_argument("--format must be csv or json");
    return f;
}

struct NamedOracle {
    Oracle oracle;
    IntrinsicVolumeSequence exact;
};

NamedOracle parse_oracle(const RunConfig& cfg) {
    std::string name = cfg.oracle;
    if (name == "square") name = "cube2";
    if (name == "disk") name = "ball2";
    auto dim_of = [&](std::size_t prefix) {
        const std::string digits = name.substr(prefix);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("oracle names look like cube2, ball3, cross2, square or disk");
        return std::stoi(digits);
    };
    if (name.rfind("cube", 0) == 0) {
        const int d = dim_of(4);
        return {cube_oracle(d, cfg.A), cube_intrinsic_volumes(d, cfg.A)};
    }
    if (name.rfind("ball", 0) == 0) {
        const int d = dim_of(4);
        return {ball_oracle(d, cfg.r), ball_intrinsic_volumes(d, cfg.r)};
    }
    if (name.rfind("cross", 0) == 0) {
        const int d = dim_of(5);
        return {crosspolytope_oracle(d, cfg.A), crosspolytope_intrinsic_volumes(d, cfg.A)};
    }
    throw std::invalid_argument("unknown oracle '" + cfg.oracle + "'");
}

LogConcaveDensity make_density(const RunConfig& cfg) {
    const auto& t = cfg.target;
    if (t == "gaussian") return LogConcaveDensity::gaussian(cfg.nu);
    if (t == "uniform") return LogConcaveDensity::uniform(cfg.A);
    if (t == "laplace") return LogConcaveDensity::laplace(cfg.b);
    if (t == "exponential") return LogConcaveDensity::exponential(cfg.lambda);
    if (t == "tabulated") {
        if (cfg.table.empty()) throw std::invalid_argument("tabulated densities need --table x,phi CSV");
        std::ifstream in(cfg.table);
        if (!in) throw std::invalid_argument("cannot open table '" + cfg.table + "'");
        std::vector<double> xs;
        std::vector<double> ps;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos) throw std::invalid_argument("table rows must be x,phi");
            try {
                xs.push_back(parse_number(line.substr(0, comma)));
                ps.push_back(parse_number(line.substr(comma + 1)));
            } catch (const std::invalid_argument&) {
                if (xs.empty()) continue;  // header row
                throw;
            }
        }
        return LogConcaveDensity::tabulated(xs, ps, cfg.left_slope, cfg.right_slope);
    }
    throw std::invalid_argument("unknown density '" + t + "' (gaussian, uniform, laplace, exponential, tabulated)");
}

bool closed_family(const std::string& t) { return t == "gaussian" || t == "uniform"; }

} // namespace

std::string canonical_config(const RunConfig& c) {
    std::ostringstream os;
    os << "subcommand=" << c.subcommand << "\ntarget=" << c.target << "\nformat=" << c.format;
    if (c.subcommand == "iv") {
        os << "\nn=" << c.n << "\nA=" << format_number(c.A) << "\nr=" << format_number(c.r) << "\nverify=" << c.verify;
        if (c.target == "fit")
            os << "\noracle=" << c.oracle << "\nt_grid=" << join(c.t_grid) << "\nsamples=" << c.samples
               << "\nseed=" << c.seed;
    } else if (c.subcommand == "h-theta") {
        os << "\nnu=" << format_number(c.nu) << "\nA=" << format_number(c.A) << "\nb=" << format_number(c.b)
           << "\nlambda=" << format_number(c.lambda) << "\ntable=" << c.table
           << "\nleft_slope=" << format_number(c.left_slope) << "\nright_slope=" << format_number(c.right_slope)
           << "\nclosed_form=" << c.closed_form << "\ntheta_grid=" << join(c.theta_grid)
           << "\neps_ladder=" << join(c.eps_ladder) << "\nn_max=" << c.n_max << "\nsamples=" << c.samples
           << "\nseed=" << c.seed;
    } else {
        os << "\nfamily=" << c.family << "\nalpha=" << format_number(c.alpha) << "\ndelta=" << format_number(c.delta)
           << "\nnu1=" << format_number(c.nu1) << "\nnu2=" << format_number(c.nu2) << "\nsamples=" << c.samples
           << "\nseed=" << c.seed;
    }
    os << '\n';
    return os.str();
}

int cmd_intrinsic_volumes(const RunConfig& cfg, std::ostream& out) {
    const std::string fmt = format_of(cfg, "json");
    if (cfg.target == "fit") {
        const auto [oracle, exact] = parse_oracle(cfg);
        const auto grid = cfg.t_grid.empty() ? default_t_grid(oracle) : sorted_unique(cfg.t_grid);
        McOptions mc;
        mc.jobs = cfg.jobs;
        const auto rep = steiner_fit(oracle, grid, cfg.samples, cfg.seed, mc);
        std::vector<double> z;
        bool within = true;
        for (int j = 0; j <= exact.dim(); ++j) {
            const double se = rep.stderrs[static_cast<std::size_t>(j)];
            const double diff = rep.estimates.value(j) - exact.value(j);
            z.push_back(se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff)));
            within = within && std::abs(z.back()) <= 3.0;
        }
        if (fmt == "json") {
            nlohmann::json j{{"meta", meta(cfg)},          {"oracle", cfg.oracle}, {"report", rep},
                             {"closed_form", exact},       {"closed_form_v", exact.values()},
                             {"z_scores", z},              {"within_3se", within}};
            out << j.dump(2) << '\n';
        } else {
            csv_preamble(out, cfg);
            out << "j,estimate,stderr,closed_form,z\n";
            for (int j = 0; j <= exact.dim(); ++j)
                out << j << ',' << format_number(rep.estimates.value(j)) << ','
                    << format_number(rep.stderrs[static_cast<std::size_t>(j)]) << ','
                    << format_number(exact.value(j)) << ',' << format_number(z[static_cast<std::size_t>(j)]) << '\n';
        }
        return cfg.verify && !within ? kExitInvariant : kExitOk;
    }

    ConvexBodySpec spec = [&]() -> ConvexBodySpec {
        if (cfg.target == "cube") return Cube{cfg.n, cfg.A};
        if (cfg.target == "ball") return Ball{cfg.n, cfg.r};
        if (cfg.target == "crosspolytope") return Crosspolytope{cfg.n, cfg.A};
        throw std::invalid_argument("unknown body '" + cfg.target + "' (cube, ball, crosspolytope, fit)");
    }();
    const auto seq = closed_form_intrinsic_volumes(spec);
    const auto af = check_alexandrov_fenchel(seq);
    if (fmt == "json") {
        nlohmann::json j{{"meta", meta(cfg)},
                         {"body", spec.describe()},
                         {"sequence", seq},
                         {"v", seq.values()},
                         {"alexandrov_fenchel", af}};
        out << j.dump(2) << '\n';
    } else {
        csv_preamble(out, cfg);
        out << "j,log_v,v\n";
        for (int j = 0; j <= seq.dim(); ++j)
            out << j << ',' << format_number(seq.log_at(j)) << ',' << format_number(seq.value(j)) << '\n';
    }
    return cfg.verify && !af.pass ? kExitInvariant : kExitOk;
}

int cmd_h_theta(const RunConfig& cfg, std::ostream& out) {
    const std::string fmt = format_of(cfg, "csv");
    const auto d = make_density(cfg);
    const auto grid = cfg.theta_grid.empty() ? linspace(0.0, 1.0, 21) : cfg.theta_grid;
    IntrinsicEntropyCurve curve;
    if (cfg.closed_form) {
        curve = closed_form_curve(d, grid);
    } else {
        CurveOptions opt;
        opt.eps_ladder = cfg.eps_ladder;
        opt.n_max = cfg.n_max > 0 ? cfg.n_max : (closed_family(cfg.target) ? 400 : 3);
        opt.samples = cfg.samples;
        opt.seed = cfg.seed;
        opt.jobs = cfg.jobs;
        curve = estimate_curve(d, grid, opt);
    }
    const auto checks = endpoint_checks(curve);
    if (fmt == "json") {
        nlohmann::json j{{"meta", meta(cfg)}, {"curve", curve}, {"endpoint_checks", checks}};
        out << j.dump(2) << '\n';
    } else {
        csv_preamble(out, cfg);
        out << "# density=" << curve.density << " method=" << curve.method << " converged=" << curve.converged
            << " ladder_gaps=" << join(curve.ladder_gaps) << '\n';
        write_curve_csv(out, curve);
    }
    return curve.converged ? kExitOk : kExitNonConvergence;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const std::string fmt = format_of(cfg, "json");
    VerifyOptions o;
    o.family = cfg.family;
    o.alpha = cfg.alpha;
    o.delta = cfg.delta;
    o.nu1 = cfg.nu1;
    o.nu2 = cfg.nu2;
    o.fit_samples = cfg.samples;
    o.seed = cfg.seed;
    o.jobs = cfg.jobs;
    const auto results = cfg.target == "all" ? run_all_suites(o) : run_suite(cfg.target, o);
    bool pass = true;
    for (const auto& r : results)
        if (!r.informational && !r.pass) pass = false;
    if (fmt == "json") {
        nlohmann::json j{{"meta", meta(cfg)}, {"results", results}, {"pass", pass}};
        out << j.dump(2) << '\n';
    } else {
        csv_preamble(out, cfg);
        out << "suite,check,pass\n";
        for (const auto& r : results)
            out << r.suite << ',' << r.name << ',' << (r.informational ? "info" : (r.pass ? "pass" : "fail")) << '\n';
    }
    return pass ? kExitOk : kExitInvariant;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::ostringstream buf;
    int code;
    try {
        if (cfg.jobs < 1) throw std::invalid_argument("--jobs must be at least 1");
        if (cfg.subcommand == "iv") code = cmd_intrinsic_volumes(cfg, buf);
        else if (cfg.subcommand == "h-theta") code = cmd_h_theta(cfg, buf);
        else if (cfg.subcommand == "verify") code = cmd_verify(cfg, buf);
        else throw std::invalid_argument("unknown subcommand '" + cfg.subcommand + "'");
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConvergenceError& e) {
        err << "non-convergence: " << e.what() << '\n';
        return kExitNonConvergence;
    } catch (const QuadratureError& e) {
        err << "non-convergence: " << e.what() << " (achieved error " << e.achieved_error() << ")\n";
        return kExitNonConvergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitNonConvergence;
    }

    namespace fs = std::filesystem;
    const char* dir = std::getenv("IVLAB_OUTPUT_DIR");
    fs::path path = cfg.output;
    if (path.empty() && dir && *dir) {
        const bool json = cfg.format == "json" || (cfg.format.empty() && cfg.subcommand != "h-theta");
        path = cfg.subcommand + "-" + cfg.target + (json ? ".json" : ".csv");
    }
    if (path.empty()) {
        out << buf.str();
        return code;
    }
    if (path.is_relative() && dir && *dir) path = fs::path(dir) / path;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        err << "error: cannot write " << path.string() << '\n';
        return kExitUsage;
    }
    f << buf.str();
    err << "wrote " << path.string() << '\n';
    return code;
}

} // namespace ivlab
