#include "ivlab/intrinsic_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ivlab/errors.hpp"
#include "ivlab/io.hpp"
#include "ivlab/logmath.hpp"

namespace ivlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void check_theta(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
}

std::vector<double> prepare_grid(std::vector<double> grid) {
    grid.push_back(0.0);
    grid.push_back(1.0);
    grid = sorted_unique(std::move(grid));
    if (grid.front() < 0.0 || grid.back() > 1.0) throw std::invalid_argument("theta grid must lie inside [0, 1]");
    return grid;
}

std::vector<double> prepare_ladder(std::vector<double> ladder) {
    if (ladder.empty()) throw std::invalid_argument("eps ladder must not be empty");
    for (double e : ladder)
        if (!(e > 0.0) || !std::isfinite(e)) throw std::invalid_argument("eps ladder values must be positive");
    ladder = sorted_unique(std::move(ladder));
    std::reverse(ladder.begin(), ladder.end());
    return ladder;
}

double upper_bound(const LogConcaveDensity& d, double eps, double theta) {
    return binary_entropy(theta) + d.entropy() + eps - (1.0 - theta) * d.eta();
}

std::vector<double> interpolant(const SuperConvFamily& fam, const std::vector<double>& grid) {
    const int N = fam.max_n();
    const auto& s = fam.at(N);
    std::vector<double> out;
    for (double th : grid) {
        const double x = N * th;
        const int j0 = static_cast<int>(std::floor(x));
        const int j1 = std::min(N, j0 + 1);
        const double w = x - j0;
        const double a = w == 0.0 ? s.log_at(j0) : (1.0 - w) * s.log_at(j0) + w * s.log_at(j1);
        out.push_back(a / N);
    }
    return out;
}

// Extrapolates the last two ladder rungs linearly to eps = 0.
void extrapolate(IntrinsicEntropyCurve& c, const LogConcaveDensity& d) {
    const auto& last = c.per_eps.back();
    const std::size_t K = c.theta.size();
    c.values = last.values;
    c.lo = last.values;
    c.hi = last.values;
    for (std::size_t k = 1; k < c.per_eps.size(); ++k) {
        double g = 0.0;
        for (std::size_t i = 0; i < K; ++i)
            g = std::max(g, std::abs(c.per_eps[k].values[i] - c.per_eps[k - 1].values[i]));
        c.ladder_gaps.push_back(g);
    }
    const auto& gaps = c.ladder_gaps;
    c.converged = gaps.size() < 2 || gaps.back() <= gaps[gaps.size() - 2] * (1.0 + 1e-9) + 1e-12;
    if (c.per_eps.size() < 2) return;
    const auto& prev = c.per_eps[c.per_eps.size() - 2];
    const double f = last.eps / (prev.eps - last.eps);
    for (std::size_t i = 0; i < K; ++i) {
        const double th = c.theta[i];
        double v = last.values[i] - f * (prev.values[i] - last.values[i]);
        const double floor_v = th * d.entropy();
        const double ceil_v = binary_entropy(th) + d.entropy() - (1.0 - th) * d.eta();
        if (v < floor_v || v > ceil_v) {
            v = std::clamp(v, floor_v, ceil_v);
            c.clamped.push_back(static_cast<int>(i));
        }
        c.values[i] = v;
        c.lo[i] = std::min(v, last.values[i]);
        c.hi[i] = std::max(v, last.values[i]);
    }
}

void set_endpoints(IntrinsicEntropyCurve& c, const LogConcaveDensity& d) {
    const double eps_min = c.eps_ladder.back();
    const double v0 = c.values.front();
    const double v1 = c.values.back();
    // h(0) is pinched between 0 and the crosspolytope curve, which vanishes at 0
    c.h0 = {0.0, v0, 0.0, c.method == "band" ? std::max(0.0, c.hi.front()) : 0.0, false};
    c.h0.contains_value = v0 >= c.h0.lo - 1e-12 && v0 <= c.h0.hi + 1e-12;
    c.h1 = {1.0, v1, d.entropy() - eps_min, d.entropy() + eps_min, false};
    c.h1.contains_value = v1 >= c.h1.lo && v1 <= c.h1.hi;
}

IntrinsicEntropyCurve closed_family_curve(const LogConcaveDensity& d, const std::vector<double>& grid,
                                          const std::vector<double>& ladder, const CurveOptions& opt) {
    IntrinsicEntropyCurve c;
    c.method = "closed_form_family";
    for (double eps : ladder) {
        const auto fam = d.family() == DensityFamily::gaussian
                             ? ball_family(d.parameter() * (1.0 + 2.0 * eps), opt.n_max, opt.jobs)
                             : cube_family(d.parameter(), opt.n_max, opt.jobs);
        const auto rc = rate_curve(fam, grid, RateMode::gn_star);
        PerEpsCurve p;
        p.eps = eps;
        p.provenance = fam.provenance();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            p.values.push_back(-rc.values[i]);
            p.lower.push_back(grid[i] * (d.entropy() - eps));
            p.upper.push_back(upper_bound(d, eps, grid[i]));
        }
        p.interpolant = interpolant(fam, grid);
        c.per_eps.push_back(std::move(p));
    }
    return c;
}

IntrinsicEntropyCurve band_curve(const LogConcaveDensity& d, const std::vector<double>& grid,
                                 const std::vector<double>& ladder, const CurveOptions& opt) {
    if (opt.n_max < 1 || opt.n_max > 3)
        throw std::invalid_argument("densities without closed-form typical bodies need 1 <= n_max <= 3");
    IntrinsicEntropyCurve c;
    c.method = "band";
    for (std::size_t e = 0; e < ladder.size(); ++e) {
        const double eps = ladder[e];
        const auto cpb = crosspolytope_bound(TypicalSetSpec(d, 1, eps), 2000, opt.seed);
        const auto cp_fam = crosspolytope_family(cpb.body.A, opt.crosspolytope_n, opt.jobs);
        const auto cp = rate_curve(cp_fam, grid, RateMode::lambda_star);

        std::vector<IntrinsicVolumeSequence> seqs;
        for (int n = 1; n <= opt.n_max; ++n) {
            const auto body = typical_body(TypicalSetSpec(d, n, eps));
            const auto oracle = oracle_for(body);
            McOptions mc;
            mc.jobs = opt.jobs;
            mc.stream_base = (static_cast<std::uint64_t>(e) << 48) | (static_cast<std::uint64_t>(n) << 40);
            seqs.push_back(steiner_fit(oracle, default_t_grid(oracle), opt.samples, opt.seed, mc).estimates);
        }
        const SuperConvFamily fit_fam(std::move(seqs), "steiner_fit");

        PerEpsCurve p;
        p.eps = eps;
        p.provenance = "band:" + cp_fam.provenance() + "+" + fit_fam.provenance();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double th = grid[i];
            double lo = th * (d.entropy() - eps);
            try {
                lo = std::max(lo, -gn_star(fit_fam, fit_fam.max_n(), th));
            } catch (const Error&) {
                // an unusable fit leaves the linear bound alone
            }
            const double hi = std::min(-cp.values[i], upper_bound(d, eps, th));
            p.lower.push_back(lo);
            p.upper.push_back(hi);
            p.values.push_back(hi);
        }
        p.interpolant = interpolant(fit_fam, grid);
        c.per_eps.push_back(std::move(p));
    }
    const std::size_t K = grid.size();
    c.values.assign(K, kInf);
    c.lo.resize(K);
    c.hi.resize(K);
    for (std::size_t i = 0; i < K; ++i) {
        for (const auto& p : c.per_eps) c.values[i] = std::min(c.values[i], p.upper[i]);
        c.hi[i] = c.values[i];
        c.lo[i] = std::min(grid[i] * d.entropy(), c.hi[i]);
    }
    for (std::size_t k = 1; k < c.per_eps.size(); ++k) {
        double g = 0.0;
        for (std::size_t i = 0; i < K; ++i)
            g = std::max(g, std::abs(c.per_eps[k].values[i] - c.per_eps[k - 1].values[i]));
        c.ladder_gaps.push_back(g);
    }
    return c;
}

} // namespace

double binary_entropy(double theta) {
    check_theta(theta);
    return -xlogx(theta) - xlogx(1.0 - theta);
}

double gaussian_h_theta(double nu, double theta) {
    if (!(nu > 0.0)) throw std::invalid_argument("gaussian variance must be positive");
    check_theta(theta);
    return binary_entropy(theta) + 0.5 * theta * std::log(2.0 * kPi * std::exp(1.0) * nu) + 0.5 * xlogx(1.0 - theta);
}

double uniform_h_theta(double A, double theta) {
    if (!(A > 0.0)) throw std::invalid_argument("uniform width must be positive");
    check_theta(theta);
    return binary_entropy(theta) + theta * std::log(A);
}

IntrinsicEntropyCurve estimate_curve(const LogConcaveDensity& d, std::vector<double> theta_grid,
                                     const CurveOptions& options) {
    const auto grid = prepare_grid(std::move(theta_grid));
    const auto ladder = prepare_ladder(options.eps_ladder);
    if (options.n_max < 1) throw std::invalid_argument("n_max must be at least 1");
    const bool closed = d.family() == DensityFamily::gaussian || d.family() == DensityFamily::uniform;
    if (closed && options.n_max < 2) throw std::invalid_argument("closed-form families need n_max >= 2");
    auto c = closed ? closed_family_curve(d, grid, ladder, options) : band_curve(d, grid, ladder, options);
    c.density = d.label();
    c.entropy = d.entropy();
    c.eta = d.eta();
    c.theta = grid;
    c.eps_ladder = ladder;
    c.n_max = options.n_max;
    c.seed = options.seed;
    if (closed) extrapolate(c, d);
    set_endpoints(c, d);
    return c;
}

IntrinsicEntropyCurve closed_form_curve(const LogConcaveDensity& d, std::vector<double> theta_grid) {
    const auto grid = prepare_grid(std::move(theta_grid));
    IntrinsicEntropyCurve c;
    c.density = d.label();
    c.method = "closed_form";
    c.entropy = d.entropy();
    c.eta = d.eta();
    c.theta = grid;
    for (double th : grid) {
        double v;
        if (d.family() == DensityFamily::gaussian) v = gaussian_h_theta(d.parameter(), th);
        else if (d.family() == DensityFamily::uniform) v = uniform_h_theta(d.parameter(), th);
        else throw std::invalid_argument("closed-form curves exist for gaussian and uniform densities only");
        c.values.push_back(v);
    }
    c.lo = c.values;
    c.hi = c.values;
    c.h0 = {0.0, c.values.front(), 0.0, 0.0, c.values.front() == 0.0};
    c.h1 = {1.0, c.values.back(), d.entropy(), d.entropy(), std::abs(c.values.back() - d.entropy()) < 1e-12};
    return c;
}

EndpointReport endpoint_checks(const IntrinsicEntropyCurve& c) {
    EndpointReport r{};
    r.h0_ok = c.h0.lo <= 1e-12 && c.h0.hi >= -1e-12 && c.h0.contains_value;
    r.h1_ok = c.h1.lo <= c.entropy + 1e-12 && c.h1.hi >= c.entropy - 1e-12 && c.h1.contains_value;
    r.worst_dominance_margin = kInf;
    for (std::size_t i = 0; i < c.theta.size(); ++i) {
        const double th = c.theta[i];
        const double bound = binary_entropy(th) + c.entropy - (1.0 - th) * c.eta;
        r.worst_dominance_margin = std::min(r.worst_dominance_margin, bound - c.lo[i]);
    }
    r.dominance_ok = r.worst_dominance_margin >= -1e-9;
    r.pass = r.h0_ok && r.h1_ok && r.dominance_ok;
    return r;
}

EpiReport epi_conjecture_check(const LogConcaveDensity& x, const LogConcaveDensity& y, std::vector<double> theta_grid) {
    if (x.family() != DensityFamily::gaussian || y.family() != DensityFamily::gaussian)
        throw std::invalid_argument("unsupported family pair: only gaussian pairs have a closed-form sum");
    const double nx = x.parameter();
    const double ny = y.parameter();
    EpiReport r;
    r.saturation_error = std::numeric_limits<double>::quiet_NaN();
    theta_grid.push_back(1.0);
    for (double th : sorted_unique(std::move(theta_grid))) {
        check_theta(th);
        if (th == 0.0) continue;
        const double a = std::exp(2.0 * gaussian_h_theta(nx, th) / th);
        const double b = std::exp(2.0 * gaussian_h_theta(ny, th) / th);
        const double s = std::exp(2.0 * gaussian_h_theta(nx + ny, th) / th);
        r.theta.push_back(th);
        r.lhs.push_back(a + b);
        r.rhs.push_back(s);
        r.difference.push_back(a + b - s);
        r.sign.push_back(a + b > s ? 1 : (a + b < s ? -1 : 0));
        if (th == 1.0) r.saturation_error = std::abs(a + b - s) / s;
    }
    return r;
}

ConcavityReport concavity_diagnostics(const SuperConvFamily& fam, double tolerance) {
    ConcavityReport r{fam.max_n(), -kInf, 0, 0, true};
    for (int n = 1; n <= fam.max_n(); ++n) {
        const auto& s = fam.at(n);
        if (!check_alexandrov_fenchel(s, tolerance).pass) ++r.af_failures;
        for (int j = 1; j < n; ++j) {
            const double a = s.log_at(j - 1);
            const double b = s.log_at(j);
            const double e = s.log_at(j + 1);
            if (a == kNegInf || e == kNegInf) continue;
            const double d2 = (a - 2.0 * b + e) / n;
            if (d2 > r.worst_second_difference) {
                r.worst_second_difference = d2;
                r.worst_n = n;
            }
        }
    }
    r.pass = r.af_failures == 0 && r.worst_second_difference <= tolerance;
    return r;
}

double worst_second_difference(const std::vector<double>& theta, const std::vector<double>& values) {
    double worst = -kInf;
    for (std::size_t i = 1; i + 1 < theta.size(); ++i) {
        const double hl = theta[i] - theta[i - 1];
        const double hr = theta[i + 1] - theta[i];
        const double d2 = ((values[i + 1] - values[i]) / hr - (values[i] - values[i - 1]) / hl) * 0.5 * (hl + hr);
        worst = std::max(worst, d2);
    }
    return worst;
}

void write_curve_csv(std::ostream& os, const IntrinsicEntropyCurve& c) {
    os << "theta,h,lo,hi\n";
    for (std::size_t i = 0; i < c.theta.size(); ++i)
        os << format_number(c.theta[i]) << ',' << format_number(c.values[i]) << ',' << format_number(c.lo[i]) << ','
           << format_number(c.hi[i]) << '\n';
}

void to_json(nlohmann::json& j, const PerEpsCurve& c) {
    j = {{"eps", c.eps},
         {"values", c.values},
         {"interpolant", c.interpolant},
         {"lower", c.lower},
         {"upper", c.upper},
         {"provenance", c.provenance}};
}

void to_json(nlohmann::json& j, const EndpointBracket& b) {
    j = {{"theta", b.theta}, {"value", b.value}, {"lo", b.lo}, {"hi", b.hi}, {"contains_value", b.contains_value}};
}

void to_json(nlohmann::json& j, const IntrinsicEntropyCurve& c) {
    j = {{"density", c.density},
         {"method", c.method},
         {"entropy", c.entropy},
         {"eta", c.eta},
         {"theta", c.theta},
         {"h", c.values},
         {"lo", c.lo},
         {"hi", c.hi},
         {"eps_ladder", c.eps_ladder},
         {"n_max", c.n_max},
         {"seed", c.seed},
         {"per_eps", c.per_eps},
         {"h0", c.h0},
         {"h1", c.h1},
         {"converged", c.converged},
         {"ladder_gaps", c.ladder_gaps},
         {"clamped", c.clamped}};
}

void to_json(nlohmann::json& j, const EndpointReport& r) {
    j = {{"h0_ok", r.h0_ok},
         {"h1_ok", r.h1_ok},
         {"dominance_ok", r.dominance_ok},
         {"worst_dominance_margin", r.worst_dominance_margin},
         {"pass", r.pass}};
}

void to_json(nlohmann::json& j, const EpiReport& r) {
    j = {{"label", r.label}, {"theta", r.theta},   {"lhs", r.lhs},
         {"rhs", r.rhs},     {"difference", r.difference}, {"sign", r.sign},
         {"saturation_error", r.saturation_error}};
}

void to_json(nlohmann::json& j, const ConcavityReport& r) {
    j = {{"n_checked", r.n_checked},
         {"worst_second_difference", r.worst_second_difference},
         {"worst_n", r.worst_n},
         {"af_failures", r.af_failures},
         {"pass", r.pass}};
}

} // namespace ivlab
