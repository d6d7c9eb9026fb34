#pragma once

// Closed-form and Monte-Carlo intrinsic volumes of convex bodies.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ivlab/sequence.hpp"

namespace ivlab {

class ConvexBodySpec;

/// Euclidean ball of radius r in R^n.
struct Ball {
    int n;
    double r;
};

/// Cube [0, A]^n.
struct Cube {
    int n;
    double A;
};

/// Regular crosspolytope {x : sum |x_i| <= A n}.
struct Crosspolytope {
    int n;
    double A;
};

/// Cartesian product of two bodies.
struct Product {
    std::shared_ptr<const ConvexBodySpec> first;
    std::shared_ptr<const ConvexBodySpec> second;
};

/// Convex body known only through a membership predicate. `center` must be a
/// member and the body must lie inside the ball B(center, bounding_radius).
/// `distance`, when set, returns the exact Euclidean distance to the body.
struct Oracle {
    int dim = 0;
    std::function<bool(std::span<const double>)> contains;
    std::vector<double> center;
    double bounding_radius = 0.0;
    std::function<double(std::span<const double>)> distance;
    std::string label = "oracle";
};

class ConvexBodySpec {
public:
    using Variant = std::variant<Ball, Cube, Crosspolytope, Product, Oracle>;

    /// Validates parameters (r > 0, A > 0, dim >= 1, oracle accepts its center).
    ConvexBodySpec(Variant v);  // NOLINT(google-explicit-constructor)
    template <class Body>
        requires(!std::is_same_v<std::decay_t<Body>, ConvexBodySpec> && !std::is_same_v<std::decay_t<Body>, Variant> &&
                 std::is_constructible_v<Variant, Body>)
    ConvexBodySpec(Body&& body)  // NOLINT(google-explicit-constructor)
        : ConvexBodySpec(Variant(std::forward<Body>(body))) {}

    const Variant& variant() const noexcept { return v_; }
    int dim() const;
    bool has_closed_form() const;
    std::string describe() const;

private:
    Variant v_;
};

ConvexBodySpec product(ConvexBodySpec a, ConvexBodySpec b);

/// log omega_j, the log volume of the unit j-ball.
double unit_ball_volume(int j);

IntrinsicVolumeSequence ball_intrinsic_volumes(int n, double r);
IntrinsicVolumeSequence cube_intrinsic_volumes(int n, double A);
/// Betke-Henk formula; the inner integral is evaluated by adaptive Gauss-Kronrod.
IntrinsicVolumeSequence crosspolytope_intrinsic_volumes(int n, double A);
IntrinsicVolumeSequence product_intrinsic_volumes(const IntrinsicVolumeSequence& a, const IntrinsicVolumeSequence& b);

/// log of int_0^inf e^{-x^2} erf(x / sqrt(i+1))^{n-i-1} dx.
double log_crosspolytope_integral(int n, int i);

/// Throws std::invalid_argument for oracle bodies.
IntrinsicVolumeSequence closed_form_intrinsic_volumes(const ConvexBodySpec& spec);

/// |K + tB| from Steiner's formula.
double steiner_volume(const IntrinsicVolumeSequence& v, double t);
double steiner_volume(const ConvexBodySpec& spec, double t);

// Oracles with exact distance functions.
Oracle cube_oracle(int n, double A);
Oracle ball_oracle(int n, double r);
Oracle crosspolytope_oracle(int n, double A);
/// Oracle for any spec; products combine component distances.
Oracle oracle_for(const ConvexBodySpec& spec);

/// Distance to the body, using `distance` when provided and a radial search otherwise.
double oracle_distance(const Oracle& oracle, std::span<const double> x);
/// Largest s with center + s u in the body (bisection, u a unit vector).
double radial_extent(const Oracle& oracle, std::span<const double> u, double rel_tol = 1e-13);

struct McOptions {
    int jobs = 1;
    std::uint64_t stream_base = 0;
    std::int64_t shard_size = 1 << 16;
};

struct TubeVolumeEstimate {
    double estimate;
    double stderr_;
    std::int64_t samples;
    std::int64_t hits;
    double box_volume;
};

/// Rejection estimate of |K + tB| in the box of half-width R + t around the
/// oracle center. Deterministic for a given (seed, options.stream_base) and
/// independent of options.jobs.
TubeVolumeEstimate mc_tube_volume(const Oracle& oracle, double t, std::int64_t samples, std::uint64_t seed,
                                  const McOptions& options = {});

struct SteinerFitReport {
    IntrinsicVolumeSequence estimates;
    std::vector<double> stderrs;  ///< standard error of each V_j (linear scale)
    std::vector<double> t_grid;
    std::vector<TubeVolumeEstimate> raw_volumes;
    std::vector<double> coefficients;               ///< NNLS coefficients c_j of t^j
    std::vector<double> unconstrained_coefficients; ///< weighted least squares without the sign constraint
    std::vector<int> negative_flags;                ///< j with unconstrained c_j < -3 sd
    double condition_number;
    std::uint64_t seed;
};

/// Chebyshev-spaced radii in [0.1 d, 2 d], d the oracle diameter bound.
std::vector<double> default_t_grid(const Oracle& oracle, int count = 0);

SteinerFitReport steiner_fit(const Oracle& oracle, std::span<const double> t_grid, std::int64_t samples,
                             std::uint64_t seed, const McOptions& options = {});

void to_json(nlohmann::json& j, const TubeVolumeEstimate& e);
void to_json(nlohmann::json& j, const SteinerFitReport& r);

struct AlexandrovFenchelReport {
    /// margins[j - 1] = 2 log v_j - log v_{j-1} - log v_{j+1} - log((j+1)/j), j = 1..n-1.
    std::vector<double> margins;
    double worst_margin;
    int worst_index;
    bool pass;
};

AlexandrovFenchelReport check_alexandrov_fenchel(const IntrinsicVolumeSequence& v, double tolerance = 1e-9);

void to_json(nlohmann::json& j, const AlexandrovFenchelReport& r);

} // namespace ivlab
