#include "ivlab/verify.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "ivlab/convex_bodies.hpp"
#include "ivlab/intrinsic_entropy.hpp"
#include "ivlab/io.hpp"
#include "ivlab/logconcave.hpp"
#include "ivlab/logmath.hpp"
#include "ivlab/random.hpp"
#include "ivlab/superconv.hpp"

namespace ivlab {

namespace {

// gaussian(1) typical sets at eps = 0.1
constexpr double kBallRho2 = 1.2;

bool wants(const VerifyOptions& o, const std::string& fam) { return o.family == "all" || o.family == fam; }

SuperConvFamily make_family(const std::string& name, int n, const VerifyOptions& o) {
    if (name == "cube") return cube_family(1.0, n, o.jobs);
    if (name == "ball") return ball_family(kBallRho2, n, o.jobs);
    if (name == "crosspolytope") return crosspolytope_family(1.0, n, o.jobs);
    if (name == "appendix") return appendix_example_family(o.alpha, o.delta, n);
    throw std::invalid_argument("unknown family '" + name + "'");
}

void check_family_option(const VerifyOptions& o) {
    static const char* known[] = {"all", "cube", "ball", "crosspolytope", "appendix"};
    for (const char* k : known)
        if (o.family == k) return;
    throw std::invalid_argument("unknown family '" + o.family + "' (cube, ball, crosspolytope, appendix, all)");
}

std::vector<CheckResult> suite_superconv(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    for (const std::string fam : {"cube", "ball", "crosspolytope", "appendix"}) {
        if (!wants(o, fam)) continue;
        const auto f = make_family(fam, o.superconv_n, o);
        const auto rep = check_superconvolutive(f, o.superconv_n, 1e-9);
        out.push_back({"superconv", "superconvolutive:" + fam, rep.pass, false, rep});
        out.back().details["up_to"] = o.superconv_n;
    }
    return out;
}

std::vector<CheckResult> suite_af(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    const std::map<std::string, std::function<IntrinsicVolumeSequence(int)>> makers{
        {"cube", [](int n) { return cube_intrinsic_volumes(n, 1.0); }},
        {"ball", [](int n) { return ball_intrinsic_volumes(n, std::sqrt(n * kBallRho2)); }},
        {"crosspolytope", [](int n) { return crosspolytope_intrinsic_volumes(n, 1.0); }},
    };
    for (const auto& [fam, make] : makers) {
        if (!wants(o, fam)) continue;
        const auto f = materialize_family(make, o.af_n, fam, o.jobs);
        double worst = std::numeric_limits<double>::infinity();
        int worst_n = 0;
        int failures = 0;
        for (int n = 1; n <= o.af_n; ++n) {
            const auto rep = check_alexandrov_fenchel(f.at(n), 1e-9);
            if (!rep.pass) ++failures;
            if (rep.worst_margin < worst) {
                worst = rep.worst_margin;
                worst_n = n;
            }
        }
        out.push_back({"af", "alexandrov-fenchel:" + fam, failures == 0, false,
                       {{"up_to", o.af_n}, {"worst_margin", worst}, {"worst_n", worst_n}, {"failures", failures}}});
    }
    return out;
}

std::vector<CheckResult> suite_lambda(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    const auto tgrid = linspace(-5.0, 5.0, 21);
    for (const std::string fam : {"cube", "ball", "appendix"}) {
        if (!wants(o, fam)) continue;
        const auto f = make_family(fam, o.lambda_n, o);
        const auto b = check_lambda_bounds(f, tgrid);
        out.push_back({"lambda", "lambda-bounds:" + fam, b.pass, false, b});
        const auto s = check_superadditivity(f, tgrid);
        out.push_back({"lambda", "superadditivity:" + fam, s.pass, false, s});

        std::vector<double> lam;
        for (double t : tgrid) lam.push_back(estimate_lambda(f, t).value);
        double worst_d1 = std::numeric_limits<double>::infinity();
        double worst_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k < lam.size(); ++k) worst_d1 = std::min(worst_d1, lam[k] - lam[k - 1]);
        for (std::size_t k = 1; k + 1 < lam.size(); ++k)
            worst_d2 = std::min(worst_d2, lam[k + 1] - 2.0 * lam[k] + lam[k - 1]);
        out.push_back({"lambda", "lambda-convex-increasing:" + fam, worst_d1 >= -1e-9 && worst_d2 >= -1e-9, false,
                       {{"worst_first_difference", worst_d1}, {"worst_second_difference", worst_d2}}});

        const double gamma = estimate_lambda(f, 0.0).value;
        double worst = std::numeric_limits<double>::infinity();
        for (double th : linspace(0.0, 1.0, 11)) worst = std::min(worst, gn_star(f, f.max_n(), th) + gamma);
        out.push_back({"lambda", "conjugate-floor:" + fam, worst >= -1e-9, false,
                       {{"worst_margin", worst}, {"gamma_hat", gamma}}});
    }
    if (wants(o, "cube")) {
        const auto f = cube_family(1.0, o.lambda_n, o.jobs);
        const double mass = interval_mass_bounds(f, 0.4, 0.6, o.lambda_n);
        // -inf of Lambda* over [0.4, 0.6] is attained at 1/2 where -Lambda* = log 2
        const auto rc = rate_curve(f, linspace(0.4, 0.6, 21), RateMode::lambda_star);
        double sup = -std::numeric_limits<double>::infinity();
        for (double v : rc.values) sup = std::max(sup, -v);
        const bool ok = std::abs(mass - std::log(2.0)) <= 0.02 && mass <= sup + 0.05 && mass >= sup - 0.05;
        out.push_back({"lambda", "interval-mass:cube", ok, false,
                       {{"n", o.lambda_n},
                        {"interval", {0.4, 0.6}},
                        {"mass_exponent", mass},
                        {"sup_minus_lambda_star", sup},
                        {"target", std::log(2.0)}}});
    }
    return out;
}

std::vector<CheckResult> suite_typical(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    const std::vector<std::pair<std::string, LogConcaveDensity>> densities{
        {"gaussian", LogConcaveDensity::gaussian(1.0)},
        {"laplace", LogConcaveDensity::laplace(1.0)},
        {"exponential", LogConcaveDensity::exponential(1.0)},
        {"uniform", LogConcaveDensity::uniform(1.0)},
    };
    for (const auto& [name, d] : densities) {
        const auto rep = concatenation_check(d, 0.1, 8, o.concatenation_trials, o.seed);
        out.push_back({"typical", "concatenation:" + name, rep.failures == 0, false, rep});
        const auto nest = nesting_check(d, 0.05, 0.1, 4, o.concatenation_trials / 10, o.seed + 1);
        out.push_back({"typical", "nesting:" + name, nest.failures == 0, false, nest});
    }
    for (const auto& [name, d] : densities) {
        if (name == "uniform") continue;
        const TypicalSetSpec spec(d, 3, 0.1);
        const auto cp = crosspolytope_bound(spec, o.concatenation_trials, o.seed + 2);
        out.push_back({"typical", "crosspolytope-containment:" + name, cp.failures == 0, false, cp});
    }
    for (const auto& [name, d] : densities) {
        if (name != "gaussian" && name != "uniform") continue;
        const TypicalSetSpec spec(d, 3, 0.05);
        const auto oracle = oracle_for(typical_body(spec));
        PhiloxStream rng(o.seed + 3, 0);
        std::int64_t disagreements = 0;
        const std::int64_t trials = o.concatenation_trials;
        std::vector<double> x(3);
        const double half = oracle.bounding_radius * 1.5;
        for (std::int64_t k = 0; k < trials; ++k) {
            for (std::size_t i = 0; i < 3; ++i) x[i] = oracle.center[i] + rng.uniform(-half, half);
            if (typical_membership(spec, x) != oracle.contains(x)) ++disagreements;
        }
        out.push_back({"typical", "closed-form-body:" + name, disagreements == 0, false,
                       {{"trials", trials}, {"disagreements", disagreements}}});
    }
    return out;
}

std::vector<CheckResult> suite_bloat(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    const auto g = bloat_check(LogConcaveDensity::gaussian(1.0), 0.1, 5, o.bloat_trials, o.seed);
    out.push_back({"bloat", "bloat:gaussian", g.failures == 0, false, g});
    const auto l = bloat_check(LogConcaveDensity::laplace(1.0), 0.05, 5, o.bloat_trials, o.seed);
    out.push_back({"bloat", "bloat:laplace", l.failures == 0, false, l});
    bool rejected = false;
    try {
        bloat_check(LogConcaveDensity::uniform(1.0), 0.05, 5, 1, o.seed);
    } catch (const std::invalid_argument&) {
        rejected = true;
    }
    out.push_back({"bloat", "bloat:uniform-rejected", rejected, false, {{"rejected", rejected}}});
    return out;
}

std::vector<CheckResult> suite_loomis_whitney(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    for (const auto& [name, d] : std::vector<std::pair<std::string, LogConcaveDensity>>{
             {"uniform", LogConcaveDensity::uniform(2.0)}, {"gaussian", LogConcaveDensity::gaussian(1.0)}}) {
        const TypicalSetSpec spec(d, 3, 0.1);
        bool ok = true;
        auto reps = nlohmann::json::array();
        for (int m = 0; m <= 3; ++m) {
            const auto r = loomis_whitney_check(spec, m);
            ok = ok && r.pass;
            reps.push_back(r);
        }
        out.push_back({"loomis-whitney", "loomis-whitney:" + name, ok, false, {{"reports", reps}}});
    }
    McOptions mc;
    mc.jobs = o.jobs;
    const auto r = loomis_whitney_check(TypicalSetSpec(LogConcaveDensity::laplace(1.0), 2, 0.1), 1, o.fit_samples,
                                        o.seed, mc);
    out.push_back({"loomis-whitney", "loomis-whitney:laplace", r.pass, false, r});
    return out;
}

std::vector<CheckResult> suite_endpoints(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    CurveOptions co;
    co.jobs = o.jobs;
    co.seed = o.seed;
    const auto grid = linspace(0.0, 1.0, 11);
    for (const auto& [name, d] : std::vector<std::pair<std::string, LogConcaveDensity>>{
             {"uniform", LogConcaveDensity::uniform(1.0)}, {"gaussian", LogConcaveDensity::gaussian(1.0)}}) {
        const auto c = estimate_curve(d, grid, co);
        const auto rep = endpoint_checks(c);
        out.push_back({"endpoints", "endpoints:" + name, rep.pass, false, rep});
        out.back().details["h0"] = c.h0;
        out.back().details["h1"] = c.h1;
        const double d2 = worst_second_difference(c.theta, c.values);
        out.push_back({"endpoints", "concavity:" + name, d2 <= 1e-6, false, {{"worst_second_difference", d2}}});
        double err = 0.0;
        for (std::size_t i = 0; i < c.theta.size(); ++i) {
            const double exact = name == "uniform" ? uniform_h_theta(1.0, c.theta[i]) : gaussian_h_theta(1.0, c.theta[i]);
            err = std::max(err, std::abs(c.values[i] - exact));
        }
        const double tol = name == "uniform" ? 1e-8 : 0.02;
        out.push_back({"endpoints", "closed-form-agreement:" + name, err <= tol && c.converged, false,
                       {{"max_error", err}, {"tolerance", tol}, {"converged", c.converged}}});
    }
    const auto fam = ball_family(kBallRho2, o.af_n, o.jobs);
    const auto conc = concavity_diagnostics(fam, 1e-9);
    out.push_back({"endpoints", "interpolant-concavity:ball", conc.pass, false, conc});
    return out;
}

std::vector<CheckResult> suite_appendix(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    const int N = o.lambda_n;
    const auto f = appendix_example_family(o.alpha, o.delta, N);
    const auto sc = check_superconvolutive(f, std::min(N, o.superconv_n));
    out.push_back({"appendix-example", "appendix:superconvolutive", sc.pass, false, sc});

    double worst = 0.0;
    for (double t : {-1.0, 0.0, 1.0})
        worst = std::max(worst, std::abs(estimate_lambda(f, t).value - std::log1p(o.alpha * std::exp(t))));
    out.push_back({"appendix-example", "appendix:lambda", worst <= 1e-3, false,
                   {{"max_error", worst}, {"t", {-1.0, 0.0, 1.0}}, {"n", N}}});

    const auto rc = rate_curve(f, {1.0}, RateMode::lambda_star);
    const auto& e = rc.endpoints.front();
    const double target = -std::log(o.alpha);
    const double end_rate = f.at(N).log_at(N) / N;
    const bool ok = std::abs(e.conjugate_value - target) <= 1e-3 && std::abs(end_rate) <= 0.01 && e.strict_gap;
    out.push_back({"appendix-example", "appendix:strict-gap", ok, false,
                   {{"lambda_star_1", e.conjugate_value},
                    {"target", target},
                    {"gn_star_1", -end_rate},
                    {"log_mu_n_n_over_n", end_rate},
                    {"strict_gap", e.strict_gap},
                    {"n", N}}});
    return out;
}

std::vector<CheckResult> suite_epi(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    const auto r = epi_conjecture_check(LogConcaveDensity::gaussian(o.nu1), LogConcaveDensity::gaussian(o.nu2),
                                        linspace(0.0, 1.0, 21));
    out.push_back({"epi", "epi:saturation-at-1", r.saturation_error <= 1e-10, false,
                   {{"saturation_error", r.saturation_error}, {"nu1", o.nu1}, {"nu2", o.nu2}}});
    out.push_back({"epi", "epi:conjecture-evidence", true, true, r});
    return out;
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"superconv", "af",        "lambda",           "typical",
                                                "bloat",     "loomis-whitney", "endpoints", "appendix-example",
                                                "epi"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& o) {
    check_family_option(o);
    if (suite == "superconv") return suite_superconv(o);
    if (suite == "af") return suite_af(o);
    if (suite == "lambda") return suite_lambda(o);
    if (suite == "typical") return suite_typical(o);
    if (suite == "bloat") return suite_bloat(o);
    if (suite == "loomis-whitney") return suite_loomis_whitney(o);
    if (suite == "endpoints") return suite_endpoints(o);
    if (suite == "appendix-example") return suite_appendix(o);
    if (suite == "epi") return suite_epi(o);
    throw std::invalid_argument("unknown suite '" + suite + "'");
}

std::vector<CheckResult> run_all_suites(const VerifyOptions& o) {
    std::vector<CheckResult> all;
    for (const auto& s : suite_names()) {
        auto r = run_suite(s, o);
        all.insert(all.end(), r.begin(), r.end());
    }
    return all;
}

void to_json(nlohmann::json& j, const CheckResult& r) {
    j = {{"suite", r.suite}, {"check", r.name}, {"pass", r.pass}, {"details", r.details}};
    if (r.informational) j["informational"] = true;
}

} // namespace ivlab
