#pragma once

// Log-concave densities p = e^{-Phi} on the line, their one-sided typical
// sets {x in R^n : sum Phi(x_i) <= n (h + eps)} and the geometric bounds
// built from them.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ivlab/convex_bodies.hpp"

namespace ivlab {

class PhiloxStream;

enum class DensityFamily { gaussian, uniform, laplace, exponential, custom, tabulated };

std::string to_string(DensityFamily f);

/// Closed interval; either end may be infinite.
struct Support {
    double lo;
    double hi;
};

struct ConvexityCertificate {
    int trials;
    int failures;
};

class LogConcaveDensity {
public:
    static LogConcaveDensity gaussian(double nu);
    static LogConcaveDensity uniform(double A);
    static LogConcaveDensity laplace(double b);
    static LogConcaveDensity exponential(double lambda);
    /// Phi must be convex on `support` and normalised (int e^{-Phi} = 1 to 1e-8);
    /// both are checked, convexity by random midpoint tests.
    static LogConcaveDensity custom(std::function<double(double)> phi, Support support, std::string label = "custom");
    /// Piecewise-linear Phi through (x_k, phi_k), extended by straight lines
    /// with the given outward slopes (+inf closes the support at that end).
    /// The table is shifted by log Z so the density integrates to one.
    static LogConcaveDensity tabulated(std::vector<double> x, std::vector<double> phi, double left_slope,
                                       double right_slope);

    /// +inf outside the support.
    double phi(double x) const;
    Support support() const noexcept { return support_; }
    double eta() const noexcept { return eta_; }
    double argmin() const noexcept { return argmin_; }
    double entropy() const noexcept { return entropy_; }
    /// Characteristic width (sqrt(nu), A, b, 1/lambda, or the half-width of {Phi <= eta + 1}).
    double scale() const noexcept { return scale_; }
    DensityFamily family() const noexcept { return family_; }
    const std::string& label() const noexcept { return label_; }
    /// Family parameter (nu, A, b or lambda); NaN for custom/tabulated.
    double parameter() const noexcept { return param_; }
    /// Kinks of Phi inside the support, used to split quadratures.
    const std::vector<double>& breakpoints() const noexcept { return breaks_; }
    ConvexityCertificate convexity() const noexcept { return convexity_; }

private:
    LogConcaveDensity() = default;
    void finish(bool closed_form_entropy);

    std::function<double(double)> phi_;
    Support support_{};
    double eta_ = 0.0;
    double argmin_ = 0.0;
    double entropy_ = 0.0;
    double scale_ = 1.0;
    double param_ = 0.0;
    DensityFamily family_ = DensityFamily::custom;
    std::string label_;
    std::vector<double> breaks_;
    ConvexityCertificate convexity_{0, 0};
};

/// Closed form for the builtin families, quadrature of Phi e^{-Phi} otherwise.
double differential_entropy(const LogConcaveDensity& d);
/// h(X) = E Phi(X) by adaptive quadrature, with the tails cut where e^{-Phi} < 1e-16.
double entropy_by_quadrature(const LogConcaveDensity& d);
/// int e^{-Phi} over the support.
double total_mass(const LogConcaveDensity& d);

struct TypicalSetSpec {
    /// Throws std::invalid_argument unless n >= 1 and eps > 0.
    TypicalSetSpec(LogConcaveDensity density, int n, double eps);

    LogConcaveDensity density;
    int n;
    double eps;
    double threshold() const { return n * (density.entropy() + eps); }
};

/// sum Phi(x_i) <= n (h + eps), with a 1e-12 relative allowance for rounding.
bool typical_membership(const TypicalSetSpec& spec, std::span<const double> x);

/// Ball / Cube for gaussian / uniform; an Oracle otherwise (exact l1-ball and
/// simplex-corner distances for laplace and exponential).
ConvexBodySpec typical_body(const TypicalSetSpec& spec);

struct LinearMinorant {
    double c1;
    double c2;
    int halvings;
    int certificate_points;
};

/// Phi(x) >= c1 |x| + c2 on the support, certified on a grid and at random points.
LinearMinorant linear_minorant(const LogConcaveDensity& d);

struct CrosspolytopeBound {
    Crosspolytope body;
    LinearMinorant minorant;
    std::int64_t trials;
    std::int64_t failures;  ///< sampled typical points outside the crosspolytope
};

CrosspolytopeBound crosspolytope_bound(const TypicalSetSpec& spec, std::int64_t trials = 100000,
                                       std::uint64_t seed = 1);

/// log of the bound n (h + eps) - (n - m) eta on the volume of the projection onto m coordinates.
double projection_volume_bound(const TypicalSetSpec& spec, int m);

struct LoomisWhitneyReport {
    int n;
    int m;
    std::string method;  ///< "closed_form" or "steiner_fit"
    double v_m;          ///< V_m of the typical set
    double sigma;        ///< standard error of v_m (0 for closed forms)
    double log_bound;    ///< log C(n, m) + projection_volume_bound
    double log_margin;   ///< log_bound - log v_m
    double sigma_margin; ///< (e^{log_bound} - v_m) / sigma, +inf for closed forms
    bool pass;
};

LoomisWhitneyReport loomis_whitney_check(const TypicalSetSpec& spec, int m, std::int64_t samples = 1000000,
                                         std::uint64_t seed = 1, const McOptions& options = {});

struct BloatReport {
    double alpha;
    std::int64_t trials;
    std::int64_t failures;
    double worst_margin;  ///< min over trials of sum Phi(scaled) - n (h + eps), relative to n
};

/// Boundary points of the lower set sum Phi <= n (h - eps), scaled by 1 + alpha
/// about the minimiser, must leave the interior of the typical set.
BloatReport bloat_check(const LogConcaveDensity& d, double eps, int n, std::int64_t trials, std::uint64_t seed = 1);

struct SamplingReport {
    std::int64_t trials;
    std::int64_t failures;
};

/// Random members x of T_m and y of T_n; (x, y) must lie in T_{m+n}.
SamplingReport concatenation_check(const LogConcaveDensity& d, double eps, int max_dim, std::int64_t trials,
                                   std::uint64_t seed = 1);
/// Random members of T^{eps1}_n must lie in T^{eps2}_n for eps1 < eps2.
SamplingReport nesting_check(const LogConcaveDensity& d, double eps1, double eps2, int n, std::int64_t trials,
                             std::uint64_t seed = 1);

/// A point of the set sum Phi <= level, drawn along a random ray from the
/// minimiser; boundary = true returns the boundary point of that ray.
std::vector<double> sample_level_set(const LogConcaveDensity& d, int n, double level, PhiloxStream& rng,
                                     bool boundary);

void to_json(nlohmann::json& j, const LinearMinorant& r);
void to_json(nlohmann::json& j, const CrosspolytopeBound& r);
void to_json(nlohmann::json& j, const LoomisWhitneyReport& r);
void to_json(nlohmann::json& j, const BloatReport& r);
void to_json(nlohmann::json& j, const SamplingReport& r);

} // namespace ivlab
