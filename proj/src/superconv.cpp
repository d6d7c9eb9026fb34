#include "ivlab/superconv.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <exception>
#include <thread>

#include <nlohmann/json.hpp>

#include "ivlab/convex_bodies.hpp"
#include "ivlab/errors.hpp"
#include "ivlab/io.hpp"
#include "ivlab/logmath.hpp"

namespace ivlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Golden-section maximisation of a unimodal function on [lo, hi].
std::pair<double, double> golden_max(const std::function<double(double)>& f, double lo, double hi) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - r * (hi - lo);
    double b = lo + r * (hi - lo);
    double fa = f(a);
    double fb = f(b);
    while (hi - lo > 1e-10 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)))) {
        if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        }
    }
    double t = 0.5 * (lo + hi);
    double ft = f(t);
    // the supremum of a concave function on a closed interval may sit at an end
    for (double e : {lo, hi}) {
        const double fe = f(e);
        if (fe > ft) {
            t = e;
            ft = fe;
        }
    }
    return {t, ft};
}

double gamma_hat(const SuperConvFamily& fam) { return lambda_value(fam, 0.0); }

} // namespace

SuperConvFamily::SuperConvFamily(std::vector<IntrinsicVolumeSequence> seqs, std::string provenance)
    : seqs_(std::move(seqs)), provenance_(std::move(provenance)) {
    if (seqs_.empty()) throw std::invalid_argument("family needs at least mu_1");
    for (std::size_t k = 0; k < seqs_.size(); ++k)
        if (seqs_[k].dim() != static_cast<int>(k) + 1)
            throw std::invalid_argument("family member " + std::to_string(k + 1) + " has dimension " +
                                        std::to_string(seqs_[k].dim()));
}

const IntrinsicVolumeSequence& SuperConvFamily::at(int n) const {
    if (n < 1 || n > max_n()) throw std::out_of_range("family index " + std::to_string(n) + " not materialized");
    return seqs_[static_cast<std::size_t>(n) - 1];
}

SuperConvFamily materialize_family(const std::function<IntrinsicVolumeSequence(int)>& make, int max_n,
                                   std::string provenance, int jobs) {
    if (max_n < 1) throw std::invalid_argument("max_n must be at least 1");
    std::vector<IntrinsicVolumeSequence> seqs(static_cast<std::size_t>(max_n));
    jobs = std::clamp(jobs, 1, max_n);
    if (jobs == 1) {
        for (int n = 1; n <= max_n; ++n) seqs[static_cast<std::size_t>(n) - 1] = make(n);
    } else {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
        for (int w = 0; w < jobs; ++w)
            workers.emplace_back([&, w] {
                try {
                    for (int n = w + 1; n <= max_n; n += jobs) seqs[static_cast<std::size_t>(n) - 1] = make(n);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        for (auto& th : workers) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return SuperConvFamily(std::move(seqs), std::move(provenance));
}

SuperConvFamily cube_family(double A, int max_n, int jobs) {
    return materialize_family([A](int n) { return cube_intrinsic_volumes(n, A); }, max_n, "closed_form:cube", jobs);
}

SuperConvFamily ball_family(double rho2, int max_n, int jobs) {
    if (!(rho2 > 0.0)) throw std::invalid_argument("ball family needs rho2 > 0");
    return materialize_family([rho2](int n) { return ball_intrinsic_volumes(n, std::sqrt(n * rho2)); }, max_n,
                              "closed_form:ball", jobs);
}

SuperConvFamily crosspolytope_family(double A, int max_n, int jobs) {
    return materialize_family([A](int n) { return crosspolytope_intrinsic_volumes(n, A); }, max_n,
                              "closed_form:crosspolytope", jobs);
}

SuperConvFamily appendix_example_family(double alpha, double delta, int max_n) {
    if (!(alpha > 1.0) || !std::isfinite(alpha)) throw std::invalid_argument("appendix example needs alpha > 1");
    if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("appendix example needs 0 < delta < 1/2");
    const double la = std::log(alpha);
    const double ld = std::log(delta);
    return materialize_family(
        [=](int n) {
            std::vector<double> logv(static_cast<std::size_t>(n) + 1);
            for (int i = 0; i < n; ++i) logv[static_cast<std::size_t>(i)] = log_binomial(n - 1, i) + i * la;
            logv[static_cast<std::size_t>(n)] = ld;
            return IntrinsicVolumeSequence(std::move(logv));
        },
        max_n, "synthetic:appendix_example");
}

SuperConvReport check_superconvolutive(const SuperConvFamily& fam, int up_to, double tolerance) {
    if (up_to > fam.max_n()) throw std::invalid_argument("up_to exceeds the materialized family");
    SuperConvReport rep{kInf, 0, 0, 0, true};
    for (int m = 1; m < up_to; ++m) {
        for (int n = m; m + n <= up_to; ++n) {
            const auto conv = convolve(fam.at(m), fam.at(n));
            const auto& big = fam.at(m + n);
            for (int i = 0; i <= m + n; ++i) {
                const double c = conv.log_at(i);
                if (c == kNegInf) continue;
                const double margin = big.log_at(i) - c;
                if (margin < rep.worst_margin) rep = {margin, m, n, i, true};
            }
        }
    }
    rep.pass = rep.worst_margin >= -std::log1p(tolerance);
    return rep;
}

PropernessReport properness(const SuperConvFamily& fam) {
    PropernessReport r{true, kNegInf, kNegInf, kNegInf, 0, 0, 0, true};
    for (int n = 1; n <= fam.max_n(); ++n) {
        const auto& s = fam.at(n);
        if (s.log_at(0) == kNegInf || s.log_at(n) == kNegInf) r.endpoints_positive = false;
        r.beta_last = s.log_at(0) / n;
        r.alpha_last = s.log_at(n) / n;
        r.gamma_last = normalized_generating_function(fam, n, 0.0);
        r.beta = std::max(r.beta, r.beta_last);
        r.alpha = std::max(r.alpha, r.alpha_last);
        r.gamma = std::max(r.gamma, r.gamma_last);
    }
    r.finite = std::isfinite(r.beta) && std::isfinite(r.alpha) && std::isfinite(r.gamma);
    return r;
}

double log_generating_function(const SuperConvFamily& fam, int n, double t) {
    const auto lv = fam.at(n).logv();
    double mx = kNegInf;
    for (std::size_t j = 0; j < lv.size(); ++j) mx = std::max(mx, lv[j] + static_cast<double>(j) * t);
    if (mx == kNegInf) return kNegInf;
    double s = 0.0;
    for (std::size_t j = 0; j < lv.size(); ++j) s += std::exp(lv[j] + static_cast<double>(j) * t - mx);
    return mx + std::log(s);
}

double normalized_generating_function(const SuperConvFamily& fam, int n, double t) {
    return log_generating_function(fam, n, t) / n;
}

double lambda_value(const SuperConvFamily& fam, double t) {
    const int N = fam.max_n();
    const double gN = log_generating_function(fam, N, t);
    if (N == 1) return gN;
    return std::max(gN - log_generating_function(fam, N - 1, t), gN / N);
}

LambdaEstimate estimate_lambda(const SuperConvFamily& fam, double t) {
    if (fam.max_n() < 2) throw std::invalid_argument("estimate_lambda needs max_n >= 2");
    double lower = kNegInf;
    for (int n = 1; n <= fam.max_n(); ++n) lower = std::max(lower, normalized_generating_function(fam, n, t));
    const double value = std::max(lambda_value(fam, t), lower);
    double g0 = kNegInf;
    for (int n = 1; n <= fam.max_n(); ++n) g0 = std::max(g0, normalized_generating_function(fam, n, 0.0));
    const double gamma = std::max(lambda_value(fam, 0.0), g0);
    return {value, lower, std::max(gamma, t + gamma), gamma, fam.max_n()};
}

ConjugateResult legendre_conjugate(const std::function<double(double)>& f, double theta, Interval bracket) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
    if (!(bracket.lo < bracket.hi) || !std::isfinite(bracket.lo) || !std::isfinite(bracket.hi))
        throw std::invalid_argument("conjugate bracket must be a finite nonempty interval");
    auto obj = [&](double t) { return theta * t - f(t); };
    double lo = bracket.lo;
    double hi = bracket.hi;
    double prev_edge_value = -kInf;
    for (int widenings = 0;; ++widenings) {
        const auto [t, v] = golden_max(obj, lo, hi);
        const double edge = 1e-7 * (hi - lo);
        const bool at_lo = t - lo <= edge;
        const bool at_hi = hi - t <= edge;
        if (!at_lo && !at_hi) return {v, t, widenings, false};
        if (widenings == 10) {
            if (std::abs(v - prev_edge_value) <= 1e-10 * std::max(1.0, std::abs(v))) return {v, t, widenings, true};
            throw ConvergenceError("legendre_conjugate: maximiser still on the bracket boundary after 10 widenings");
        }
        prev_edge_value = v;
        const double w = hi - lo;
        if (at_lo) lo -= w;
        if (at_hi) hi += w;
    }
}

Interval conjugate_bracket(const SuperConvFamily& fam, double gamma, double theta) {
    const auto& m1 = fam.at(1);
    Interval I{-50.0, 50.0};
    if (theta > 0.0 && std::isfinite(m1.log_at(0))) I.lo = (m1.log_at(0) - gamma) / theta;
    if (theta < 1.0 && std::isfinite(m1.log_at(1))) I.hi = (gamma - m1.log_at(1)) / (1.0 - theta);
    if (!(I.lo < I.hi)) {
        const double mid = 0.5 * (I.lo + I.hi);
        I = {mid - 1.0, mid + 1.0};
    }
    return I;
}

double gn_star(const SuperConvFamily& fam, int n, double theta) {
    const auto& s = fam.at(n);
    if (theta == 0.0) return -s.log_at(0) / n;
    if (theta == 1.0) return -s.log_at(n) / n;
    const double gamma = std::max(gamma_hat(fam), normalized_generating_function(fam, n, 0.0));
    return legendre_conjugate([&](double t) { return normalized_generating_function(fam, n, t); }, theta,
                              conjugate_bracket(fam, gamma, theta))
        .value;
}

namespace {

// The increment estimate is only trusted on |t| <= this window: at finite N a
// single extreme term mu_N(N) e^{Nt} can dominate G_N for very large t even
// when it is negligible in the limit.
constexpr double kEndpointWindow = 50.0;

// Lambda* at an endpoint as the limit of interior conjugates (Lambda* is
// continuous on [0, 1]); returns {value, |last step|}.
std::pair<double, double> endpoint_limit(const SuperConvFamily& fam, double gamma, double theta) {
    auto lam = [&](double t) { return lambda_value(fam, t); };
    double prev = std::numeric_limits<double>::quiet_NaN();
    double step = kInf;
    double val = 0.0;
    for (int k = 1; k <= 9; ++k) {
        const double h = std::pow(10.0, -k);
        const double th = theta == 0.0 ? h : 1.0 - h;
        auto I = conjugate_bracket(fam, gamma, th);
        I.lo = std::clamp(I.lo, -kEndpointWindow, kEndpointWindow - 1.0);
        I.hi = std::clamp(I.hi, I.lo + 1.0, kEndpointWindow);
        val = golden_max([&](double t) { return th * t - lam(t); }, I.lo, I.hi).second;
        if (!std::isnan(prev)) {
            step = std::abs(val - prev);
            if (step < 1e-10) break;
        }
        prev = val;
    }
    return {val, step};
}

} // namespace

RateCurve rate_curve(const SuperConvFamily& fam, std::vector<double> theta_grid, RateMode mode) {
    theta_grid = sorted_unique(std::move(theta_grid));
    if (theta_grid.empty() || theta_grid.front() < 0.0 || theta_grid.back() > 1.0)
        throw std::invalid_argument("theta grid must lie inside [0, 1]");
    const int N = fam.max_n();
    const double gamma = gamma_hat(fam);
    const auto prop = properness(fam);
    auto lam = [&](double t) { return lambda_value(fam, t); };

    RateCurve c;
    c.theta = theta_grid;
    c.n_used = N;
    c.mode = mode;
    for (double th : theta_grid) {
        double lo;
        double hi;
        if (th == 0.0 || th == 1.0) {
            const auto [lim, step] = endpoint_limit(fam, gamma, th);
            lo = lim;
            hi = gn_star(fam, N, th);
            EndpointRecord e;
            e.theta = th;
            e.conjugate_value = mode == RateMode::lambda_star ? lim : hi;
            e.conjugate_bracket = mode == RateMode::lambda_star ? step : 0.0;
            e.sequence_value = th == 0.0 ? -prop.beta : -prop.alpha;
            e.strict_gap = e.sequence_value - e.conjugate_value > 1e-6 + e.conjugate_bracket;
            c.endpoints.push_back(e);
        } else {
            lo = legendre_conjugate(lam, th, conjugate_bracket(fam, gamma, th)).value;
            hi = gn_star(fam, N, th);
        }
        // g_N <= Lambda_hat, so the ordering holds up to round-off
        if (lo > hi) lo = hi;
        c.values.push_back(mode == RateMode::lambda_star ? lo : hi);
        c.bracket_lo.push_back(lo);
        c.bracket_hi.push_back(hi);
    }
    return c;
}

double interval_mass_bounds(const SuperConvFamily& fam, double a, double b, int n) {
    if (a > b || a < 0.0 || b > 1.0) throw std::invalid_argument("interval must satisfy 0 <= a <= b <= 1");
    const auto& s = fam.at(n);
    const auto jlo = static_cast<int>(std::ceil(a * n - 1e-9));
    const auto jhi = static_cast<int>(std::floor(b * n + 1e-9));
    if (jlo > jhi) return kNegInf;
    std::vector<double> terms;
    for (int j = jlo; j <= jhi; ++j) terms.push_back(s.log_at(j));
    return log_sum_exp(terms) / n;
}

GridCheck check_superadditivity(const SuperConvFamily& fam, const std::vector<double>& t_grid, double tolerance) {
    GridCheck r{kInf, 0.0, 0, true};
    for (int n = 1; 2 * n <= fam.max_n(); ++n)
        for (double t : t_grid) {
            const double m = normalized_generating_function(fam, 2 * n, t) - normalized_generating_function(fam, n, t);
            if (m < r.worst_margin) r = {m, t, n, true};
        }
    r.pass = r.worst_margin >= -tolerance;
    return r;
}

GridCheck check_lambda_bounds(const SuperConvFamily& fam, const std::vector<double>& t_grid, double tolerance) {
    GridCheck r{kInf, 0.0, fam.max_n(), true};
    for (double t : t_grid) {
        const auto est = estimate_lambda(fam, t);
        const double m = std::min(est.value - normalized_generating_function(fam, 1, t), est.upper - est.value);
        if (m < r.worst_margin) r = {m, t, fam.max_n(), true};
    }
    r.pass = r.worst_margin >= -tolerance;
    return r;
}

void write_family_jsonl(std::ostream& os, const SuperConvFamily& fam) {
    for (int n = 1; n <= fam.max_n(); ++n) {
        nlohmann::json j = fam.at(n);
        j["provenance"] = fam.provenance();
        os << j.dump() << '\n';
    }
}

SuperConvFamily read_family_jsonl(std::istream& is) {
    std::vector<IntrinsicVolumeSequence> seqs;
    std::string provenance = "imported";
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto j = nlohmann::json::parse(line);
        auto s = j.get<IntrinsicVolumeSequence>();
        if (j.contains("provenance")) provenance = j.at("provenance").get<std::string>();
        seqs.push_back(std::move(s));
    }
    std::sort(seqs.begin(), seqs.end(), [](const auto& a, const auto& b) { return a.dim() < b.dim(); });
    return SuperConvFamily(std::move(seqs), provenance);
}

void write_rate_curve_csv(std::ostream& os, const RateCurve& c) {
    os << "theta,value,bracket_lo,bracket_hi\n";
    for (std::size_t k = 0; k < c.theta.size(); ++k)
        os << format_number(c.theta[k]) << ',' << format_number(c.values[k]) << ',' << format_number(c.bracket_lo[k])
           << ',' << format_number(c.bracket_hi[k]) << '\n';
}

void to_json(nlohmann::json& j, const SuperConvReport& r) {
    j = {{"worst_margin", r.worst_margin}, {"worst_m", r.worst_m}, {"worst_n", r.worst_n},
         {"worst_i", r.worst_i},           {"pass", r.pass}};
}

void to_json(nlohmann::json& j, const PropernessReport& r) {
    j = {{"endpoints_positive", r.endpoints_positive},
         {"beta", r.beta},
         {"alpha", r.alpha},
         {"gamma", r.gamma},
         {"beta_last", r.beta_last},
         {"alpha_last", r.alpha_last},
         {"gamma_last", r.gamma_last},
         {"finite", r.finite}};
}

void to_json(nlohmann::json& j, const LambdaEstimate& r) {
    j = {{"value", r.value}, {"lower", r.lower}, {"upper", r.upper}, {"gamma_hat", r.gamma_hat}, {"n_used", r.n_used}};
}

void to_json(nlohmann::json& j, const EndpointRecord& r) {
    j = {{"theta", r.theta},
         {"conjugate_value", r.conjugate_value},
         {"conjugate_bracket", r.conjugate_bracket},
         {"sequence_value", r.sequence_value},
         {"strict_gap", r.strict_gap}};
}

void to_json(nlohmann::json& j, const RateCurve& r) {
    j = {{"theta", r.theta},
         {"values", r.values},
         {"bracket_lo", r.bracket_lo},
         {"bracket_hi", r.bracket_hi},
         {"n_used", r.n_used},
         {"mode", r.mode == RateMode::gn_star ? "gn_star" : "lambda_star"},
         {"endpoints", r.endpoints}};
}

void to_json(nlohmann::json& j, const GridCheck& r) {
    j = {{"worst_margin", r.worst_margin}, {"worst_t", r.worst_t}, {"worst_n", r.worst_n}, {"pass", r.pass}};
}

} // namespace ivlab
