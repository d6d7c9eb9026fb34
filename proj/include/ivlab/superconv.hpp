#pragma once

// Super-convolutive families: generating functions, Fekete limits, numerical
// Legendre-Fenchel conjugates and rate curves.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ivlab/sequence.hpp"

namespace ivlab {

/// n -> mu_n for n = 1..max_n; the n-th sequence has dimension n.
class SuperConvFamily {
public:
    SuperConvFamily(std::vector<IntrinsicVolumeSequence> seqs, std::string provenance);

    int max_n() const noexcept { return static_cast<int>(seqs_.size()); }
    const IntrinsicVolumeSequence& at(int n) const;
    const std::string& provenance() const noexcept { return provenance_; }

private:
    std::vector<IntrinsicVolumeSequence> seqs_;
    std::string provenance_;
};

/// Builds mu_1..mu_maxN from `make(n)`; work is spread over `jobs` threads.
SuperConvFamily materialize_family(const std::function<IntrinsicVolumeSequence(int)>& make, int max_n,
                                   std::string provenance, int jobs = 1);

SuperConvFamily cube_family(double A, int max_n, int jobs = 1);
/// Balls of radius sqrt(n * rho2): the typical sets of a gaussian(nu) with rho2 = nu (1 + 2 eps).
SuperConvFamily ball_family(double rho2, int max_n, int jobs = 1);
SuperConvFamily crosspolytope_family(double A, int max_n, int jobs = 1);
/// mu_n(i) = C(n-1, i) alpha^i for i < n and mu_n(n) = delta; alpha > 1, 0 < delta < 1/2.
SuperConvFamily appendix_example_family(double alpha, double delta, int max_n);

struct SuperConvReport {
    double worst_margin;  ///< min over m + n <= up_to, i of log mu_{m+n}(i) - log (mu_m * mu_n)(i)
    int worst_m;
    int worst_n;
    int worst_i;
    bool pass;
};

SuperConvReport check_superconvolutive(const SuperConvFamily& fam, int up_to, double tolerance = 1e-9);

struct PropernessReport {
    bool endpoints_positive;  ///< mu_n(0) > 0 and mu_n(n) > 0 for every n
    double beta;              ///< max_n (1/n) log mu_n(0)
    double alpha;             ///< max_n (1/n) log mu_n(n)
    double gamma;             ///< max_n g_n(0)
    double beta_last;
    double alpha_last;
    double gamma_last;
    bool finite;
};

PropernessReport properness(const SuperConvFamily& fam);

/// G_n(t) = log sum_j mu_n(j) e^{jt}.
double log_generating_function(const SuperConvFamily& fam, int n, double t);
/// g_n(t) = G_n(t) / n.
double normalized_generating_function(const SuperConvFamily& fam, int n, double t);

struct LambdaEstimate {
    double value;  ///< max(G_N - G_{N-1}, g_N) at N = max_n
    double lower;  ///< max_n g_n(t), a certified lower bound
    double upper;  ///< max(gamma_hat, t + gamma_hat)
    double gamma_hat;
    int n_used;
};

LambdaEstimate estimate_lambda(const SuperConvFamily& fam, double t);
/// The point estimate alone, without the O(N^2) certified bracket.
double lambda_value(const SuperConvFamily& fam, double t);

struct Interval {
    double lo;
    double hi;
};

struct ConjugateResult {
    double value;
    double argmax;
    int widenings;
    /// The supremum was approached at the edge of the widened bracket
    /// (maximiser at infinity); `value` is the plateau reached there.
    bool at_infinity;
};

/// sup_t { theta t - f(t) } by golden section on the bracket, refined to 1e-10
/// in t; a maximiser on the boundary widens that side (at most 10 times).
/// Throws ConvergenceError if the objective is still growing after that.
ConjugateResult legendre_conjugate(const std::function<double(double)>& f, double theta, Interval bracket);

/// Maximiser bracket [(log mu_1(0) - gamma)/theta, (gamma - log mu_1(1))/(1 - theta)].
Interval conjugate_bracket(const SuperConvFamily& fam, double gamma, double theta);

enum class RateMode { gn_star, lambda_star };

struct EndpointRecord {
    double theta;
    double conjugate_value;     ///< Lambda* (or g_N*) at the endpoint, as a limit
    double conjugate_bracket;   ///< |last step| of the continuity limit
    double sequence_value;      ///< -beta_hat (theta = 0) or -alpha_hat (theta = 1)
    bool strict_gap;            ///< conjugate_value < sequence_value beyond tolerance
};

struct RateCurve {
    std::vector<double> theta;
    std::vector<double> values;
    std::vector<double> bracket_lo;
    std::vector<double> bracket_hi;
    int n_used = 0;
    RateMode mode = RateMode::gn_star;
    std::vector<EndpointRecord> endpoints;
};

/// Values are Lambda* (lambda_star) or g_N* (gn_star) with N = max_n. The
/// bracket at each theta is [conjugate of the Lambda estimate, g_N*]; since
/// g_N <= Lambda, g_N* is an upper bound for Lambda*.
RateCurve rate_curve(const SuperConvFamily& fam, std::vector<double> theta_grid, RateMode mode);

/// Conjugate g_n* at theta, with the exact endpoint values -(1/n) log mu_n(0|n).
double gn_star(const SuperConvFamily& fam, int n, double theta);

/// (1/n) log sum over j with j/n in [a, b] of mu_n(j); -inf for an empty range.
double interval_mass_bounds(const SuperConvFamily& fam, double a, double b, int n);

struct GridCheck {
    double worst_margin;
    double worst_t;
    int worst_n;
    bool pass;
};

/// min over n <= max_n / 2 and t of g_{2n}(t) - g_n(t).
GridCheck check_superadditivity(const SuperConvFamily& fam, const std::vector<double>& t_grid,
                                double tolerance = 1e-9);
/// min over t of Lambda_hat - g_1 and upper - Lambda_hat.
GridCheck check_lambda_bounds(const SuperConvFamily& fam, const std::vector<double>& t_grid,
                              double tolerance = 1e-9);

/// One JSON object {"n", "log_v", "provenance"} per line.
void write_family_jsonl(std::ostream& os, const SuperConvFamily& fam);
SuperConvFamily read_family_jsonl(std::istream& is);

/// theta,value,bracket_lo,bracket_hi
void write_rate_curve_csv(std::ostream& os, const RateCurve& curve);

void to_json(nlohmann::json& j, const SuperConvReport& r);
void to_json(nlohmann::json& j, const PropernessReport& r);
void to_json(nlohmann::json& j, const LambdaEstimate& r);
void to_json(nlohmann::json& j, const EndpointRecord& r);
void to_json(nlohmann::json& j, const RateCurve& r);
void to_json(nlohmann::json& j, const GridCheck& r);

} // namespace ivlab
