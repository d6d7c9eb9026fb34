#pragma once

// The intrinsic entropy curve h_X(theta): closed forms, the numeric
// typical-set pipeline with its eps -> 0 limit, and related checks.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ivlab/logconcave.hpp"
#include "ivlab/superconv.hpp"

namespace ivlab {

/// -theta log theta - (1 - theta) log(1 - theta), natural log, H(0) = H(1) = 0.
double binary_entropy(double theta);
double gaussian_h_theta(double nu, double theta);
double uniform_h_theta(double A, double theta);

struct CurveOptions {
    std::vector<double> eps_ladder{0.2, 0.1, 0.05, 0.025};
    int n_max = 400;
    /// Size of the crosspolytope family behind the upper edge of a band.
    int crosspolytope_n = 100;
    std::int64_t samples = 200000;  ///< Monte-Carlo samples per tube radius (band curves)
    std::uint64_t seed = 1;
    int jobs = 1;
};

struct PerEpsCurve {
    double eps;
    std::vector<double> values;       ///< -g_N^*(theta) (closed-form families) or the band's upper edge
    std::vector<double> interpolant;  ///< (1/N) log mu_N at floor/ceil(N theta), linearly interpolated
    std::vector<double> lower;        ///< certified lower edge
    std::vector<double> upper;        ///< certified upper edge
    std::string provenance;
};

struct EndpointBracket {
    double theta;
    double value;
    double lo;
    double hi;
    bool contains_value;
};

struct IntrinsicEntropyCurve {
    std::string density;
    std::string method;  ///< "closed_form_family" or "band"
    double entropy = 0.0;
    double eta = 0.0;
    std::vector<double> theta;
    std::vector<double> values;
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<double> eps_ladder;
    int n_max = 0;
    std::uint64_t seed = 0;
    std::vector<PerEpsCurve> per_eps;
    EndpointBracket h0{};
    EndpointBracket h1{};
    bool converged = true;
    std::vector<double> ladder_gaps;  ///< max over theta of |curve_k - curve_{k-1}| per ladder step
    std::vector<int> clamped;         ///< grid indices where the extrapolation hit a certified bound
};

/// Runs the pipeline. Gaussian and uniform densities use their closed-form
/// typical bodies at every n <= n_max; other densities get a band built from
/// small-n Steiner fits (n_max <= 3), the crosspolytope bound and the
/// linear/upper bounds.
IntrinsicEntropyCurve estimate_curve(const LogConcaveDensity& d, std::vector<double> theta_grid,
                                     const CurveOptions& options = {});

/// Exact curves for gaussian and uniform densities.
IntrinsicEntropyCurve closed_form_curve(const LogConcaveDensity& d, std::vector<double> theta_grid);

struct EndpointReport {
    bool h0_ok;
    bool h1_ok;
    bool dominance_ok;
    double worst_dominance_margin;  ///< min over theta of H + h - (1 - theta) eta - lo
    bool pass;
};

EndpointReport endpoint_checks(const IntrinsicEntropyCurve& curve);

struct EpiReport {
    std::string label = "conjecture evidence";
    std::vector<double> theta;
    std::vector<double> lhs;         ///< e^{2 h_theta(X)/theta} + e^{2 h_theta(Y)/theta}
    std::vector<double> rhs;         ///< e^{2 h_theta(X+Y)/theta}
    std::vector<double> difference;  ///< lhs - rhs
    std::vector<int> sign;
    double saturation_error;         ///< |lhs - rhs| / rhs at theta = 1
};

/// Gaussian pairs only; theta = 0 is skipped (the exponent divides by theta).
EpiReport epi_conjecture_check(const LogConcaveDensity& x, const LogConcaveDensity& y, std::vector<double> theta_grid);

struct ConcavityReport {
    int n_checked;
    double worst_second_difference;  ///< max over n, j of a(j+1) - 2 a(j) + a(j-1), a(j) = (1/n) log mu_n(j)
    int worst_n;
    int af_failures;                 ///< members failing the Alexandrov-Fenchel check
    bool pass;
};

ConcavityReport concavity_diagnostics(const SuperConvFamily& fam, double tolerance = 1e-9);

/// max over interior grid points of the (spacing-normalised) second difference.
double worst_second_difference(const std::vector<double>& theta, const std::vector<double>& values);

/// theta,h,lo,hi
void write_curve_csv(std::ostream& os, const IntrinsicEntropyCurve& c);

void to_json(nlohmann::json& j, const PerEpsCurve& c);
void to_json(nlohmann::json& j, const EndpointBracket& b);
void to_json(nlohmann::json& j, const IntrinsicEntropyCurve& c);
void to_json(nlohmann::json& j, const EndpointReport& r);
void to_json(nlohmann::json& j, const EpiReport& r);
void to_json(nlohmann::json& j, const ConcavityReport& r);

} // namespace ivlab
