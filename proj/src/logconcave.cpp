#include "ivlab/logconcave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ivlab/errors.hpp"
#include "ivlab/logmath.hpp"
#include "ivlab/quadrature.hpp"
#include "ivlab/random.hpp"

namespace ivlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - r * (hi - lo);
    double b = lo + r * (hi - lo);
    double fa = f(a);
    double fb = f(b);
    while (hi - lo > tol) {
        if (fa <= fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        }
    }
    double best = 0.5 * (lo + hi);
    for (double e : {lo, hi})
        if (f(e) < f(best)) best = e;
    return best;
}

// Point of the support where Phi exceeds `level`, found by doubling from x0
// in direction dir; the support end if Phi never gets there.
double outward_until(const LogConcaveDensity& d, double x0, double dir, double level) {
    const Support s = d.support();
    const double end = dir > 0 ? s.hi : s.lo;
    double step = d.scale();
    for (int k = 0; k < 200; ++k) {
        const double x = x0 + dir * step;
        if ((dir > 0 && x >= end) || (dir < 0 && x <= end)) return end;
        if (d.phi(x) > level) return x;
        step *= 2.0;
    }
    throw ConvergenceError("potential does not grow; density is not coercive");
}

double integrate_pieces(const LogConcaveDensity& d, const std::function<double(double)>& f) {
    const double lo = outward_until(d, d.argmin(), -1.0, d.eta() + 45.0);
    const double hi = outward_until(d, d.argmin(), 1.0, d.eta() + 45.0);
    std::vector<double> cuts{lo, hi, d.argmin()};
    for (double b : d.breakpoints())
        if (b > lo && b < hi) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    const double merge = 1e-9 * d.scale();
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [merge](double a, double b) { return b - a <= merge; }),
               cuts.end());
    if (cuts.back() < hi) cuts.back() = hi;
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (cuts[k + 1] <= cuts[k]) continue;
        total += integrate(f, cuts[k], cuts[k + 1], 1e-11, 1e-17).value;
    }
    return total;
}

double sum_phi(const LogConcaveDensity& d, std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += d.phi(v);
    return s;
}

double projection_onto_simplex_corner_distance(std::span<const double> x, double s) {
    double sum = 0.0;
    double d2 = 0.0;
    for (double v : x) {
        sum += std::max(v, 0.0);
        if (v < 0.0) d2 += v * v;
    }
    if (sum <= s) return std::sqrt(d2);
    // project onto {y >= 0, sum y = s}
    std::vector<double> a(x.begin(), x.end());
    std::sort(a.begin(), a.end(), std::greater<>());
    double cum = 0.0;
    double tau = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        cum += a[k];
        const double cand = (cum - s) / static_cast<double>(k + 1);
        if (a[k] - cand > 0.0) tau = cand;
    }
    d2 = 0.0;
    for (double v : x) {
        const double g = v - std::max(v - tau, 0.0);
        d2 += g * g;
    }
    return std::sqrt(d2);
}

} // namespace

std::string to_string(DensityFamily f) {
    switch (f) {
    case DensityFamily::gaussian: return "gaussian";
    case DensityFamily::uniform: return "uniform";
    case DensityFamily::laplace: return "laplace";
    case DensityFamily::exponential: return "exponential";
    case DensityFamily::custom: return "custom";
    case DensityFamily::tabulated: return "tabulated";
    }
    return "unknown";
}

LogConcaveDensity LogConcaveDensity::gaussian(double nu) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw std::invalid_argument("gaussian variance must be positive");
    LogConcaveDensity d;
    const double c = 0.5 * std::log(2.0 * kPi * nu);
    d.phi_ = [nu, c](double x) { return x * x / (2.0 * nu) + c; };
    d.support_ = {-kInf, kInf};
    d.argmin_ = 0.0;
    d.eta_ = c;
    d.entropy_ = 0.5 * std::log(2.0 * kPi * std::exp(1.0) * nu);
    d.scale_ = std::sqrt(nu);
    d.param_ = nu;
    d.family_ = DensityFamily::gaussian;
    d.label_ = "gaussian";
    d.finish(true);
    return d;
}

LogConcaveDensity LogConcaveDensity::uniform(double A) {
    if (!(A > 0.0) || !std::isfinite(A)) throw std::invalid_argument("uniform width must be positive");
    LogConcaveDensity d;
    const double la = std::log(A);
    d.phi_ = [A, la](double x) { return x >= 0.0 && x <= A ? la : kInf; };
    d.support_ = {0.0, A};
    d.argmin_ = 0.5 * A;
    d.eta_ = la;
    d.entropy_ = la;
    d.scale_ = A;
    d.param_ = A;
    d.family_ = DensityFamily::uniform;
    d.label_ = "uniform";
    d.finish(true);
    return d;
}

LogConcaveDensity LogConcaveDensity::laplace(double b) {
    if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("laplace scale must be positive");
    LogConcaveDensity d;
    const double c = std::log(2.0 * b);
    d.phi_ = [b, c](double x) { return std::abs(x) / b + c; };
    d.support_ = {-kInf, kInf};
    d.argmin_ = 0.0;
    d.eta_ = c;
    d.entropy_ = 1.0 + c;
    d.scale_ = b;
    d.param_ = b;
    d.family_ = DensityFamily::laplace;
    d.label_ = "laplace";
    d.breaks_ = {0.0};
    d.finish(true);
    return d;
}

LogConcaveDensity LogConcaveDensity::exponential(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("exponential rate must be positive");
    LogConcaveDensity d;
    const double ll = std::log(lambda);
    d.phi_ = [lambda, ll](double x) { return x >= 0.0 ? lambda * x - ll : kInf; };
    d.support_ = {0.0, kInf};
    d.argmin_ = 0.0;
    d.eta_ = -ll;
    d.entropy_ = 1.0 - ll;
    d.scale_ = 1.0 / lambda;
    d.param_ = lambda;
    d.family_ = DensityFamily::exponential;
    d.label_ = "exponential";
    d.finish(true);
    return d;
}

LogConcaveDensity LogConcaveDensity::custom(std::function<double(double)> phi, Support support, std::string label) {
    if (!phi) throw std::invalid_argument("custom density needs a potential");
    if (!(support.lo < support.hi)) throw std::invalid_argument("support must be a nonempty interval");
    LogConcaveDensity d;
    d.support_ = support;
    d.phi_ = [phi = std::move(phi), support](double x) {
        if (x < support.lo || x > support.hi) return kInf;
        return phi(x);
    };
    d.family_ = DensityFamily::custom;
    d.label_ = std::move(label);
    d.param_ = std::numeric_limits<double>::quiet_NaN();
    d.finish(false);
    const double mass = total_mass(d);
    if (std::abs(mass - 1.0) > 1e-8)
        throw std::invalid_argument("custom potential is not normalised: total mass " + std::to_string(mass));
    return d;
}

LogConcaveDensity LogConcaveDensity::tabulated(std::vector<double> x, std::vector<double> phi, double left_slope,
                                               double right_slope) {
    if (x.size() < 2 || x.size() != phi.size()) throw std::invalid_argument("tabulated potential needs >= 2 (x, phi) pairs");
    for (std::size_t k = 0; k + 1 < x.size(); ++k)
        if (!(x[k] < x[k + 1])) throw std::invalid_argument("tabulated x values must be strictly increasing");
    for (double p : phi)
        if (!std::isfinite(p)) throw std::invalid_argument("tabulated phi values must be finite");
    if (!(left_slope > 0.0) || !(right_slope > 0.0))
        throw std::invalid_argument("tail slopes must be positive (the potential must be coercive)");
    const std::size_t K = x.size();
    std::vector<double> slopes(K - 1);
    for (std::size_t k = 0; k + 1 < K; ++k) slopes[k] = (phi[k + 1] - phi[k]) / (x[k + 1] - x[k]);
    double prev = -left_slope;
    for (double s : slopes) {
        if (s < prev - 1e-12 * (1.0 + std::abs(prev))) throw std::invalid_argument("tabulated potential is not convex");
        prev = s;
    }
    if (right_slope < prev - 1e-12 * (1.0 + std::abs(prev)))
        throw std::invalid_argument("tabulated potential is not convex");

    // exact normalising constant of the piecewise-linear potential
    auto seg_mass = [](double p0, double s, double len) {
        if (std::abs(s * len) < 1e-12) return std::exp(-p0) * len;
        return std::exp(-p0) * -std::expm1(-s * len) / s;
    };
    double Z = 0.0;
    if (std::isfinite(left_slope)) Z += std::exp(-phi.front()) / left_slope;
    if (std::isfinite(right_slope)) Z += std::exp(-phi.back()) / right_slope;
    for (std::size_t k = 0; k + 1 < K; ++k) Z += seg_mass(phi[k], slopes[k], x[k + 1] - x[k]);
    const double shift = std::log(Z);
    for (double& p : phi) p += shift;

    LogConcaveDensity d;
    d.support_ = {std::isfinite(left_slope) ? -kInf : x.front(), std::isfinite(right_slope) ? kInf : x.back()};
    d.phi_ = [x, phi, left_slope, right_slope](double v) {
        if (v < x.front()) return std::isfinite(left_slope) ? phi.front() + left_slope * (x.front() - v) : kInf;
        if (v > x.back()) return std::isfinite(right_slope) ? phi.back() + right_slope * (v - x.back()) : kInf;
        auto it = std::upper_bound(x.begin(), x.end(), v);
        std::size_t k = it == x.end() ? x.size() - 2 : static_cast<std::size_t>(it - x.begin()) - 1;
        const double w = (v - x[k]) / (x[k + 1] - x[k]);
        return phi[k] + w * (phi[k + 1] - phi[k]);
    };
    d.breaks_ = x;
    d.family_ = DensityFamily::tabulated;
    d.label_ = "tabulated";
    d.param_ = std::numeric_limits<double>::quiet_NaN();
    d.finish(false);
    return d;
}

void LogConcaveDensity::finish(bool closed_form_entropy) {
    if (!closed_form_entropy) {
        const double x0 = std::clamp(0.0, support_.lo, support_.hi);
        scale_ = 1.0;
        const double f0 = phi_(x0);
        if (!std::isfinite(f0)) throw std::invalid_argument("potential must be finite inside its support");
        double lo = support_.lo;
        double hi = support_.hi;
        if (!std::isfinite(lo)) {
            double step = 1.0;
            lo = x0 - step;
            while (phi_(lo) <= f0 + 1.0) {
                step *= 2.0;
                lo = x0 - step;
                if (step > 1e15) throw std::invalid_argument("potential is not coercive");
            }
        }
        if (!std::isfinite(hi)) {
            double step = 1.0;
            hi = x0 + step;
            while (phi_(hi) <= f0 + 1.0) {
                step *= 2.0;
                hi = x0 + step;
                if (step > 1e15) throw std::invalid_argument("potential is not coercive");
            }
        }
        argmin_ = golden_min(phi_, lo, hi, 1e-12 * std::max(1.0, hi - lo));
        std::vector<double> snaps = breaks_;
        snaps.push_back(support_.lo);
        snaps.push_back(support_.hi);
        for (double b : snaps)
            if (std::isfinite(b) && std::abs(b - argmin_) <= 1e-8 * std::max(1.0, hi - lo) && phi_(b) <= phi_(argmin_))
                argmin_ = b;
        eta_ = phi_(argmin_);
        // half-width of {Phi <= eta + 1}
        auto edge = [&](double dir) {
            double a = argmin_;
            double b = dir > 0 ? hi : lo;
            if (phi_(b) <= eta_ + 1.0) return std::abs(b - argmin_);
            for (int k = 0; k < 200; ++k) {
                const double m = 0.5 * (a + b);
                if (phi_(m) <= eta_ + 1.0) a = m;
                else b = m;
            }
            return std::abs(b - argmin_);
        };
        scale_ = std::max(0.5 * (edge(-1.0) + edge(1.0)), 1e-12);

        PhiloxStream rng(0x5eed, 0);
        int failures = 0;
        const int trials = 2000;
        const double wlo = std::max(support_.lo, argmin_ - 20.0 * scale_);
        const double whi = std::min(support_.hi, argmin_ + 20.0 * scale_);
        for (int k = 0; k < trials; ++k) {
            const double a = rng.uniform(wlo, whi);
            const double b = rng.uniform(wlo, whi);
            const double fm = phi_(0.5 * (a + b));
            const double avg = 0.5 * (phi_(a) + phi_(b));
            if (fm > avg + 1e-10 * (1.0 + std::abs(avg))) ++failures;
        }
        convexity_ = {trials, failures};
        if (failures > 0) throw std::invalid_argument("potential failed the midpoint convexity test");
    }
    if (!closed_form_entropy) entropy_ = entropy_by_quadrature(*this);
}

double LogConcaveDensity::phi(double x) const {
    if (x < support_.lo || x > support_.hi) return kInf;
    return phi_(x);
}

double total_mass(const LogConcaveDensity& d) {
    return integrate_pieces(d, [&](double x) {
        const double p = d.phi(x);
        return std::isfinite(p) ? std::exp(-p) : 0.0;
    });
}

double entropy_by_quadrature(const LogConcaveDensity& d) {
    return integrate_pieces(d, [&](double x) {
        const double p = d.phi(x);
        return std::isfinite(p) ? p * std::exp(-p) : 0.0;
    });
}

double differential_entropy(const LogConcaveDensity& d) {
    return d.entropy();
}

TypicalSetSpec::TypicalSetSpec(LogConcaveDensity density_, int n_, double eps_)
    : density(std::move(density_)), n(n_), eps(eps_) {
    if (n < 1) throw std::invalid_argument("typical set dimension must be at least 1");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be positive");
}

bool typical_membership(const TypicalSetSpec& spec, std::span<const double> x) {
    if (static_cast<int>(x.size()) != spec.n) throw std::invalid_argument("point has the wrong dimension");
    // the set is closed; allow for the rounding of a sum of n terms
    const double t = spec.threshold();
    return sum_phi(spec.density, x) <= t + 1e-12 * (spec.n + std::abs(t));
}

ConvexBodySpec typical_body(const TypicalSetSpec& spec) {
    const auto& d = spec.density;
    const int n = spec.n;
    switch (d.family()) {
    case DensityFamily::gaussian:
        return ConvexBodySpec(Ball{n, std::sqrt(n * d.parameter() * (1.0 + 2.0 * spec.eps))});
    case DensityFamily::uniform:
        return ConvexBodySpec(Cube{n, d.parameter()});
    case DensityFamily::laplace: {
        const double s = n * d.parameter() * (1.0 + spec.eps);
        Oracle o = crosspolytope_oracle(n, s / n);
        o.label = "laplace_typical_set";
        return ConvexBodySpec(std::move(o));
    }
    case DensityFamily::exponential: {
        const double s = n * (1.0 + spec.eps) / d.parameter();
        Oracle o;
        o.dim = n;
        o.label = "exponential_typical_set";
        const double c = s / (n + 1.0);
        o.center.assign(static_cast<std::size_t>(n), c);
        o.bounding_radius = std::sqrt((s - c) * (s - c) + (n - 1.0) * c * c);
        o.contains = [s](std::span<const double> x) {
            double sum = 0.0;
            for (double v : x) {
                if (v < 0.0) return false;
                sum += v;
            }
            return sum <= s;
        };
        o.distance = [s](std::span<const double> x) { return projection_onto_simplex_corner_distance(x, s); };
        return ConvexBodySpec(std::move(o));
    }
    default: {
        const auto lm = linear_minorant(d);
        const double A = (d.entropy() + spec.eps - lm.c2) / lm.c1;
        Oracle o;
        o.dim = n;
        o.label = d.label() + "_typical_set";
        o.center.assign(static_cast<std::size_t>(n), d.argmin());
        o.bounding_radius = n * A + std::abs(d.argmin()) * std::sqrt(static_cast<double>(n));
        o.contains = [spec](std::span<const double> x) { return typical_membership(spec, x); };
        return ConvexBodySpec(std::move(o));
    }
    }
}

LinearMinorant linear_minorant(const LogConcaveDensity& d) {
    const double s = d.scale();
    double c1 = kInf;
    for (double dir : {1.0, -1.0}) {
        const double p1 = d.phi(dir * 10.0 * s);
        const double p2 = d.phi(dir * 100.0 * s);
        if (std::isfinite(p1) && std::isfinite(p2)) {
            const double slope = (p2 - p1) / (90.0 * s);
            if (slope > 0.0) c1 = std::min(c1, slope);
        }
    }
    c1 = std::isfinite(c1) ? 0.5 * c1 : 1.0 / s;

    const Support sup = d.support();
    const double reach = 200.0 * s + std::abs(d.argmin());
    std::vector<double> checks;
    for (int k = 0; k <= 4000; ++k) checks.push_back(d.argmin() + reach * (k / 2000.0 - 1.0));
    PhiloxStream rng(0xc0ffee, 0);
    for (int k = 0; k < 2000; ++k) checks.push_back(d.argmin() + 10.0 * s * std::tan(kPi * (rng.uniform() - 0.5)));
    for (double e : {sup.lo, sup.hi})
        if (std::isfinite(e)) checks.push_back(e);
    checks.push_back(0.0);

    for (int halvings = 0; halvings <= 20; ++halvings) {
        auto g = [&](double x) { return d.phi(x) - c1 * std::abs(x); };
        double c2 = kInf;
        const std::pair<double, double> halves[2] = {{std::max(sup.lo, -reach), std::min(sup.hi, 0.0)},
                                                     {std::max(sup.lo, 0.0), std::min(sup.hi, reach)}};
        for (auto [a, b] : halves) {
            if (a > b) continue;
            if (a == b) {
                c2 = std::min(c2, g(a));
                continue;
            }
            c2 = std::min(c2, g(golden_min(g, a, b, 1e-12 * std::max(1.0, b - a))));
        }
        c2 -= 1e-9 * (1.0 + std::abs(c2));
        int count = 0;
        bool ok = true;
        for (double x : checks) {
            const double p = d.phi(x);
            if (!std::isfinite(p)) continue;
            ++count;
            if (p < c1 * std::abs(x) + c2) {
                ok = false;
                break;
            }
        }
        if (ok) return {c1, c2, halvings, count};
        c1 *= 0.5;
    }
    throw ConvergenceError("linear_minorant: certificate failed after 20 halvings of c1");
}

std::vector<double> sample_level_set(const LogConcaveDensity& d, int n, double level, PhiloxStream& rng,
                                     bool boundary) {
    double x0 = d.argmin();
    if (n * d.eta() >= level) return std::vector<double>(static_cast<std::size_t>(n), x0);
    // rays from a support endpoint miss most of the set; start inside instead
    const Support sup = d.support();
    const double inward = x0 - sup.lo <= 1e-12 * d.scale() ? 1.0 : (sup.hi - x0 <= 1e-12 * d.scale() ? -1.0 : 0.0);
    if (inward != 0.0) {
        const double target = 0.5 * (d.eta() + level / n);
        double a = 0.0;
        double b = d.scale();
        while (d.phi(x0 + inward * b) <= target) b *= 2.0;
        for (int k = 0; k < 200 && b - a > 1e-14 * b; ++k) {
            const double m = 0.5 * (a + b);
            if (d.phi(x0 + inward * m) <= target) a = m;
            else b = m;
        }
        x0 += inward * 0.5 * (a + b);
    }
    std::vector<double> c(static_cast<std::size_t>(n), x0);
    std::vector<double> u(static_cast<std::size_t>(n));
    rng.unit_vector(u);
    std::vector<double> p(static_cast<std::size_t>(n));
    auto at = [&](double r) {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = c[i] + r * u[i];
        return sum_phi(d, p);
    };
    double lo = 0.0;
    double hi = d.scale();
    while (at(hi) <= level) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw ConvergenceError("level set appears unbounded");
    }
    while (hi - lo > 1e-14 * std::max(hi, d.scale())) {
        const double m = 0.5 * (lo + hi);
        if (at(m) <= level) lo = m;
        else hi = m;
    }
    const double r = boundary ? lo : lo * std::pow(rng.uniform(), 1.0 / n);
    at(r);
    return p;
}

CrosspolytopeBound crosspolytope_bound(const TypicalSetSpec& spec, std::int64_t trials, std::uint64_t seed) {
    const auto& d = spec.density;
    const auto lm = linear_minorant(d);
    const double A = (d.entropy() + spec.eps - lm.c2) / lm.c1;
    CrosspolytopeBound out{Crosspolytope{spec.n, A}, lm, trials, 0};
    PhiloxStream rng(seed, 0);
    const double limit = A * spec.n;
    for (std::int64_t k = 0; k < trials; ++k) {
        const auto x = sample_level_set(d, spec.n, spec.threshold(), rng, k % 2 == 0);
        double l1 = 0.0;
        for (double v : x) l1 += std::abs(v);
        if (l1 > limit * (1.0 + 1e-12)) ++out.failures;
    }
    return out;
}

double projection_volume_bound(const TypicalSetSpec& spec, int m) {
    if (m < 0 || m > spec.n) throw std::invalid_argument("projection dimension must satisfy 0 <= m <= n");
    return spec.n * (spec.density.entropy() + spec.eps) - (spec.n - m) * spec.density.eta();
}

LoomisWhitneyReport loomis_whitney_check(const TypicalSetSpec& spec, int m, std::int64_t samples, std::uint64_t seed,
                                         const McOptions& options) {
    const int n = spec.n;
    LoomisWhitneyReport r{};
    r.n = n;
    r.m = m;
    r.log_bound = log_binomial(n, m) + projection_volume_bound(spec, m);
    const auto body = typical_body(spec);
    if (body.has_closed_form()) {
        const auto v = closed_form_intrinsic_volumes(body);
        r.method = "closed_form";
        r.v_m = v.value(m);
        r.sigma = 0.0;
        r.log_margin = r.log_bound - v.log_at(m);
        r.sigma_margin = kInf;
        r.pass = r.log_margin >= -1e-9;
        return r;
    }
    if (n > 3) throw std::invalid_argument("Steiner-fit Loomis-Whitney check is limited to n <= 3");
    const auto oracle = oracle_for(body);
    const auto grid = default_t_grid(oracle);
    const auto fit = steiner_fit(oracle, grid, samples, seed, options);
    r.method = "steiner_fit";
    r.v_m = fit.estimates.value(m);
    r.sigma = fit.stderrs[static_cast<std::size_t>(m)];
    r.log_margin = r.log_bound - std::log(r.v_m);
    const double gap = std::exp(r.log_bound) - r.v_m;
    r.sigma_margin = r.sigma > 0.0 ? gap / r.sigma : (gap >= 0.0 ? kInf : -kInf);
    r.pass = gap >= -3.0 * r.sigma;
    return r;
}

BloatReport bloat_check(const LogConcaveDensity& d, double eps, int n, std::int64_t trials, std::uint64_t seed) {
    if (d.family() == DensityFamily::uniform || d.entropy() - d.eta() < 1e-12)
        throw std::invalid_argument("uniform densities are excluded: the lower typical set is empty");
    if (!(eps > 0.0) || !(eps < d.entropy() - d.eta()))
        throw std::invalid_argument("bloat_check needs 0 < eps < h - eta");
    if (n < 1) throw std::invalid_argument("bloat_check needs n >= 1");
    const double h = d.entropy();
    const double alpha = 2.0 * eps / (h - eps - d.eta());
    BloatReport rep{alpha, trials, 0, kInf};
    PhiloxStream rng(seed, 0);
    const double upper = n * (h + eps);
    const double slack = 1e-9 * (1.0 + std::abs(h) + eps);
    std::vector<double> q(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < trials; ++k) {
        const auto p = sample_level_set(d, n, n * (h - eps), rng, true);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] = d.argmin() + (1.0 + alpha) * (p[i] - d.argmin());
        const double margin = (sum_phi(d, q) - upper) / n;
        rep.worst_margin = std::min(rep.worst_margin, margin);
        if (margin < -slack) ++rep.failures;
    }
    return rep;
}

SamplingReport concatenation_check(const LogConcaveDensity& d, double eps, int max_dim, std::int64_t trials,
                                   std::uint64_t seed) {
    if (max_dim < 1) throw std::invalid_argument("max_dim must be at least 1");
    SamplingReport rep{trials, 0};
    PhiloxStream rng(seed, 0);
    const double per = d.entropy() + eps;
    for (std::int64_t k = 0; k < trials; ++k) {
        const int m = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_dim));
        const int n = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_dim));
        auto x = sample_level_set(d, m, m * per, rng, k % 2 == 0);
        const auto y = sample_level_set(d, n, n * per, rng, k % 3 == 0);
        x.insert(x.end(), y.begin(), y.end());
        if (!typical_membership(TypicalSetSpec(d, m + n, eps), x)) ++rep.failures;
    }
    return rep;
}

SamplingReport nesting_check(const LogConcaveDensity& d, double eps1, double eps2, int n, std::int64_t trials,
                             std::uint64_t seed) {
    if (!(eps1 < eps2)) throw std::invalid_argument("nesting_check needs eps1 < eps2");
    SamplingReport rep{trials, 0};
    PhiloxStream rng(seed, 0);
    const TypicalSetSpec outer(d, n, eps2);
    for (std::int64_t k = 0; k < trials; ++k) {
        const auto x = sample_level_set(d, n, n * (d.entropy() + eps1), rng, k % 2 == 0);
        if (!typical_membership(outer, x)) ++rep.failures;
    }
    return rep;
}

void to_json(nlohmann::json& j, const LinearMinorant& r) {
    j = {{"c1", r.c1}, {"c2", r.c2}, {"halvings", r.halvings}, {"certificate_points", r.certificate_points}};
}

void to_json(nlohmann::json& j, const CrosspolytopeBound& r) {
    j = {{"n", r.body.n}, {"A", r.body.A}, {"minorant", r.minorant}, {"trials", r.trials}, {"failures", r.failures}};
}

void to_json(nlohmann::json& j, const LoomisWhitneyReport& r) {
    j = {{"n", r.n},
         {"m", r.m},
         {"method", r.method},
         {"v_m", r.v_m},
         {"sigma", r.sigma},
         {"log_bound", r.log_bound},
         {"log_margin", r.log_margin},
         {"sigma_margin", r.sigma_margin},
         {"pass", r.pass}};
}

void to_json(nlohmann::json& j, const BloatReport& r) {
    j = {{"alpha", r.alpha}, {"trials", r.trials}, {"failures", r.failures}, {"worst_margin", r.worst_margin}};
}

void to_json(nlohmann::json& j, const SamplingReport& r) {
    j = {{"trials", r.trials}, {"failures", r.failures}};
}

} // namespace ivlab
