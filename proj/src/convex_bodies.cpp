#include "ivlab/convex_bodies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "ivlab/errors.hpp"
#include "ivlab/logmath.hpp"
#include "ivlab/nnls.hpp"
#include "ivlab/quadrature.hpp"
#include "ivlab/random.hpp"

namespace ivlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_dim(int n) {
    if (n < 1) throw std::invalid_argument("dimension must be at least 1");
}

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Euclidean projection of v onto {y : sum |y_i| <= s}; returns the distance.
double l1_ball_distance(std::span<const double> v, double s) {
    double l1 = 0.0;
    for (double x : v) l1 += std::abs(x);
    if (l1 <= s) return 0.0;
    std::vector<double> a(v.size());
    std::transform(v.begin(), v.end(), a.begin(), [](double x) { return std::abs(x); });
    std::sort(a.begin(), a.end(), std::greater<>());
    double cum = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        cum += a[k];
        const double cand = (cum - s) / static_cast<double>(k + 1);
        if (a[k] - cand > 0.0) theta = cand;
    }
    double d2 = 0.0;
    for (double x : v) {
        const double ax = std::abs(x);
        const double shrink = std::min(ax, theta);
        d2 += shrink * shrink;
    }
    return std::sqrt(d2);
}

// Tangent vectors orthonormal to u (Gram-Schmidt on the coordinate axes).
std::vector<std::vector<double>> tangent_basis(std::span<const double> u) {
    const std::size_t d = u.size();
    std::size_t skip = 0;
    for (std::size_t i = 1; i < d; ++i)
        if (std::abs(u[i]) > std::abs(u[skip])) skip = i;
    std::vector<std::vector<double>> basis;
    for (std::size_t i = 0; i < d; ++i) {
        if (i == skip) continue;
        std::vector<double> e(d, 0.0);
        e[i] = 1.0;
        auto project_out = [&](std::span<const double> w) {
            double dot = 0.0;
            for (std::size_t k = 0; k < d; ++k) dot += e[k] * w[k];
            for (std::size_t k = 0; k < d; ++k) e[k] -= dot * w[k];
        };
        project_out(u);
        for (const auto& b : basis) project_out(b);
        const double nr = norm(e);
        for (double& x : e) x /= nr;
        basis.push_back(std::move(e));
    }
    return basis;
}

double generic_distance(const Oracle& o, std::span<const double> x) {
    if (o.contains(x)) return 0.0;
    const std::size_t d = x.size();
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < d; ++i) diff[i] = x[i] - o.center[i];
    const double r = norm(diff);
    if (d == 1) {
        const double plus = radial_extent(o, std::vector<double>{1.0});
        const double minus = radial_extent(o, std::vector<double>{-1.0});
        if (diff[0] > plus) return diff[0] - plus;
        if (diff[0] < -minus) return -minus - diff[0];
        return 0.0;
    }
    std::vector<double> u(d);
    for (std::size_t i = 0; i < d; ++i) u[i] = diff[i] / r;
    auto boundary_gap = [&](std::span<const double> dir) {
        const double s = radial_extent(o, dir, 1e-12);
        double d2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double g = diff[i] - s * dir[i];
            d2 += g * g;
        }
        return std::sqrt(d2);
    };
    double best = boundary_gap(u);
    double step = 0.5;
    std::vector<double> trial(d);
    while (step > 1e-9) {
        bool improved = false;
        for (const auto& e : tangent_basis(u)) {
            for (double sign : {1.0, -1.0}) {
                for (std::size_t i = 0; i < d; ++i) trial[i] = u[i] + sign * step * e[i];
                const double nr = norm(trial);
                for (double& t : trial) t /= nr;
                const double val = boundary_gap(trial);
                if (val < best) {
                    best = val;
                    u = trial;
                    improved = true;
                    break;
                }
            }
            if (improved) break;
        }
        if (!improved) step *= 0.5;
    }
    return best;
}

double log_erf(double z) {
    if (z <= 0.0) return kNegInf;
    if (z > 1.0) return std::log1p(-std::erfc(z));
    return std::log(std::erf(z));
}

} // namespace

ConvexBodySpec::ConvexBodySpec(Variant v) : v_(std::move(v)) {
    std::visit(overloaded{
                   [](const Ball& b) {
                       require_dim(b.n);
                       require_positive(b.r, "ball radius");
                   },
                   [](const Cube& c) {
                       require_dim(c.n);
                       require_positive(c.A, "cube side");
                   },
                   [](const Crosspolytope& c) {
                       require_dim(c.n);
                       require_positive(c.A, "crosspolytope scale");
                   },
                   [](const Product& p) {
                       if (!p.first || !p.second) throw std::invalid_argument("product needs two bodies");
                   },
                   [](const Oracle& o) {
                       require_dim(o.dim);
                       require_positive(o.bounding_radius, "oracle bounding radius");
                       if (!o.contains) throw std::invalid_argument("oracle needs a membership predicate");
                       if (static_cast<int>(o.center.size()) != o.dim)
                           throw std::invalid_argument("oracle center has the wrong dimension");
                       if (!o.contains(o.center)) throw std::invalid_argument("oracle must accept its center");
                   },
               },
               v_);
}

int ConvexBodySpec::dim() const {
    return std::visit(overloaded{
                          [](const Ball& b) { return b.n; },
                          [](const Cube& c) { return c.n; },
                          [](const Crosspolytope& c) { return c.n; },
                          [](const Product& p) { return p.first->dim() + p.second->dim(); },
                          [](const Oracle& o) { return o.dim; },
                      },
                      v_);
}

bool ConvexBodySpec::has_closed_form() const {
    return std::visit(overloaded{
                          [](const Oracle&) { return false; },
                          [](const Product& p) { return p.first->has_closed_form() && p.second->has_closed_form(); },
                          [](const auto&) { return true; },
                      },
                      v_);
}

std::string ConvexBodySpec::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const Ball& b) { os << "ball(n=" << b.n << ", r=" << b.r << ")"; },
                   [&](const Cube& c) { os << "cube(n=" << c.n << ", A=" << c.A << ")"; },
                   [&](const Crosspolytope& c) { os << "crosspolytope(n=" << c.n << ", A=" << c.A << ")"; },
                   [&](const Product& p) { os << p.first->describe() << " x " << p.second->describe(); },
                   [&](const Oracle& o) { os << o.label << "(dim=" << o.dim << ")"; },
               },
               v_);
    return os.str();
}

ConvexBodySpec product(ConvexBodySpec a, ConvexBodySpec b) {
    return ConvexBodySpec(Product{std::make_shared<const ConvexBodySpec>(std::move(a)),
                                  std::make_shared<const ConvexBodySpec>(std::move(b))});
}

double unit_ball_volume(int j) { return log_unit_ball_volume(j); }

IntrinsicVolumeSequence ball_intrinsic_volumes(int n, double r) {
    require_dim(n);
    require_positive(r, "ball radius");
    std::vector<double> logv(static_cast<std::size_t>(n) + 1);
    const double log_r = std::log(r);
    const double log_wn = log_unit_ball_volume(n);
    for (int j = 0; j <= n; ++j)
        logv[static_cast<std::size_t>(j)] = log_binomial(n, j) + log_wn - log_unit_ball_volume(n - j) + j * log_r;
    return IntrinsicVolumeSequence(std::move(logv));
}

IntrinsicVolumeSequence cube_intrinsic_volumes(int n, double A) {
    require_dim(n);
    require_positive(A, "cube side");
    std::vector<double> logv(static_cast<std::size_t>(n) + 1);
    const double log_a = std::log(A);
    // linear values C(n, j) A^j, kept while C(n, j) is an exact double
    std::vector<double> exact(logv.size(), std::nan(""));
    constexpr std::uint64_t kExactLimit = std::uint64_t{1} << 53;
    std::uint64_t c = 1;
    for (int j = 0; j <= n; ++j) {
        logv[static_cast<std::size_t>(j)] = log_binomial(n, j) + j * log_a;
        if (j > 0 && c < kExactLimit) {
            const unsigned __int128 next = static_cast<unsigned __int128>(c) * static_cast<unsigned>(n - j + 1) / static_cast<unsigned>(j);
            c = next < kExactLimit ? static_cast<std::uint64_t>(next) : kExactLimit;
        }
        const double aj = std::pow(A, j);
        if (c < kExactLimit && std::isnormal(aj)) exact[static_cast<std::size_t>(j)] = static_cast<double>(c) * aj;
    }
    return IntrinsicVolumeSequence::with_exact_values(std::move(logv), std::move(exact));
}

double log_crosspolytope_integral(int n, int i) {
    if (i < 0 || i >= n) throw std::invalid_argument("crosspolytope integral needs 0 <= i < n");
    const int k = n - i - 1;
    if (k == 0) return 0.5 * std::log(kPi) - std::log(2.0);
    const double s = std::sqrt(static_cast<double>(i) + 1.0);
    auto log_f = [&](double x) { return -x * x + k * log_erf(x / s); };

    // log f is concave with curvature <= -2: locate the peak, then integrate
    // the rescaled integrand on [peak - 12, peak + 12] (tails below e^-144).
    double lo = 0.0;
    double hi = std::max(12.0, 2.0 * std::sqrt(0.5 * k) + 2.0);
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - golden * (hi - lo);
    double b = lo + golden * (hi - lo);
    double fa = log_f(a);
    double fb = log_f(b);
    while (hi - lo > 1e-10 * std::max(1.0, hi)) {
        if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + golden * (hi - lo);
            fb = log_f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - golden * (hi - lo);
            fa = log_f(a);
        }
    }
    const double peak = 0.5 * (lo + hi);
    const double log_peak = log_f(peak);
    const double left = std::max(0.0, peak - 12.0);
    const double right = peak + 12.0;
    const auto res = integrate([&](double x) { return std::exp(log_f(x) - log_peak); }, left, right, 1e-13);
    return log_peak + std::log(res.value);
}

IntrinsicVolumeSequence crosspolytope_intrinsic_volumes(int n, double A) {
    require_dim(n);
    require_positive(A, "crosspolytope scale");
    std::vector<double> logv(static_cast<std::size_t>(n) + 1);
    const double log_na = std::log(static_cast<double>(n) * A);
    const double log2 = std::log(2.0);
    for (int i = 0; i < n; ++i) {
        logv[static_cast<std::size_t>(i)] = (i + 1) * log2 + log_binomial(n, i + 1) +
                                            0.5 * std::log(static_cast<double>(i) + 1.0) - log_factorial(i) +
                                            i * log_na - 0.5 * std::log(kPi) + log_crosspolytope_integral(n, i);
    }
    logv[static_cast<std::size_t>(n)] = n * log2 + n * log_na - log_factorial(n);
    std::vector<double> exact(logv.size(), std::nan(""));
    exact[0] = 1.0;
    if (n <= 18) {  // n! exact in double; the volume (2An)^n / n! is one rounding away
        double fact = 1.0;
        for (int k = 2; k <= n; ++k) fact *= k;
        const double vol = std::pow(2.0 * A * n, n) / fact;
        if (std::isnormal(vol)) exact[static_cast<std::size_t>(n)] = vol;
    }
    return IntrinsicVolumeSequence::with_exact_values(std::move(logv), std::move(exact));
}

IntrinsicVolumeSequence product_intrinsic_volumes(const IntrinsicVolumeSequence& a, const IntrinsicVolumeSequence& b) {
    return convolve(a, b);
}

IntrinsicVolumeSequence closed_form_intrinsic_volumes(const ConvexBodySpec& spec) {
    return std::visit(overloaded{
                          [](const Ball& b) { return ball_intrinsic_volumes(b.n, b.r); },
                          [](const Cube& c) { return cube_intrinsic_volumes(c.n, c.A); },
                          [](const Crosspolytope& c) { return crosspolytope_intrinsic_volumes(c.n, c.A); },
                          [](const Product& p) {
                              return product_intrinsic_volumes(closed_form_intrinsic_volumes(*p.first),
                                                               closed_form_intrinsic_volumes(*p.second));
                          },
                          [](const Oracle&) -> IntrinsicVolumeSequence {
                              throw std::invalid_argument("oracle bodies have no closed-form intrinsic volumes");
                          },
                      },
                      spec.variant());
}

double steiner_volume(const IntrinsicVolumeSequence& v, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("tube radius must be nonnegative");
    const int n = v.dim();
    if (t == 0.0) return std::exp(v.log_at(n));
    std::vector<double> terms(static_cast<std::size_t>(n) + 1);
    const double log_t = std::log(t);
    for (int j = 0; j <= n; ++j)
        terms[static_cast<std::size_t>(j)] = v.log_at(n - j) + log_unit_ball_volume(j) + j * log_t;
    return std::exp(log_sum_exp(terms));
}

double steiner_volume(const ConvexBodySpec& spec, double t) {
    return steiner_volume(closed_form_intrinsic_volumes(spec), t);
}

Oracle cube_oracle(int n, double A) {
    require_dim(n);
    require_positive(A, "cube side");
    Oracle o;
    o.dim = n;
    o.label = "cube";
    o.center.assign(static_cast<std::size_t>(n), 0.5 * A);
    o.bounding_radius = 0.5 * A * std::sqrt(static_cast<double>(n));
    o.contains = [A](std::span<const double> x) {
        return std::all_of(x.begin(), x.end(), [A](double v) { return v >= 0.0 && v <= A; });
    };
    o.distance = [A](std::span<const double> x) {
        double d2 = 0.0;
        for (double v : x) {
            const double g = v < 0.0 ? -v : (v > A ? v - A : 0.0);
            d2 += g * g;
        }
        return std::sqrt(d2);
    };
    return o;
}

Oracle ball_oracle(int n, double r) {
    require_dim(n);
    require_positive(r, "ball radius");
    Oracle o;
    o.dim = n;
    o.label = "ball";
    o.center.assign(static_cast<std::size_t>(n), 0.0);
    o.bounding_radius = r;
    o.contains = [r](std::span<const double> x) { return norm(x) <= r; };
    o.distance = [r](std::span<const double> x) { return std::max(0.0, norm(x) - r); };
    return o;
}

Oracle crosspolytope_oracle(int n, double A) {
    require_dim(n);
    require_positive(A, "crosspolytope scale");
    const double s = A * n;
    Oracle o;
    o.dim = n;
    o.label = "crosspolytope";
    o.center.assign(static_cast<std::size_t>(n), 0.0);
    o.bounding_radius = s;
    o.contains = [s](std::span<const double> x) {
        double l1 = 0.0;
        for (double v : x) l1 += std::abs(v);
        return l1 <= s;
    };
    o.distance = [s](std::span<const double> x) { return l1_ball_distance(x, s); };
    return o;
}

Oracle oracle_for(const ConvexBodySpec& spec) {
    return std::visit(overloaded{
                          [](const Ball& b) { return ball_oracle(b.n, b.r); },
                          [](const Cube& c) { return cube_oracle(c.n, c.A); },
                          [](const Crosspolytope& c) { return crosspolytope_oracle(c.n, c.A); },
                          [](const Oracle& o) { return o; },
                          [](const Product& p) {
                              Oracle a = oracle_for(*p.first);
                              Oracle b = oracle_for(*p.second);
                              const auto da = static_cast<std::size_t>(a.dim);
                              Oracle o;
                              o.dim = a.dim + b.dim;
                              o.label = "product";
                              o.center = a.center;
                              o.center.insert(o.center.end(), b.center.begin(), b.center.end());
                              o.bounding_radius = std::hypot(a.bounding_radius, b.bounding_radius);
                              o.contains = [a, b, da](std::span<const double> x) {
                                  return a.contains(x.first(da)) && b.contains(x.subspan(da));
                              };
                              o.distance = [a, b, da](std::span<const double> x) {
                                  return std::hypot(oracle_distance(a, x.first(da)), oracle_distance(b, x.subspan(da)));
                              };
                              return o;
                          },
                      },
                      spec.variant());
}

double radial_extent(const Oracle& oracle, std::span<const double> u, double rel_tol) {
    const std::size_t d = u.size();
    std::vector<double> p(d);
    auto inside = [&](double s) {
        for (std::size_t i = 0; i < d; ++i) p[i] = oracle.center[i] + s * u[i];
        return oracle.contains(p);
    };
    double lo = 0.0;
    double hi = oracle.bounding_radius * (1.0 + 1e-9);
    if (inside(hi)) return hi;
    while (hi - lo > rel_tol * oracle.bounding_radius) {
        const double mid = 0.5 * (lo + hi);
        if (inside(mid)) lo = mid;
        else hi = mid;
    }
    return lo;
}

double oracle_distance(const Oracle& oracle, std::span<const double> x) {
    if (oracle.distance) return oracle.distance(x);
    return generic_distance(oracle, x);
}

TubeVolumeEstimate mc_tube_volume(const Oracle& oracle, double t, std::int64_t samples, std::uint64_t seed,
                                  const McOptions& options) {
    if (samples < 1) throw std::invalid_argument("mc_tube_volume needs at least one sample");
    if (!(t >= 0.0)) throw std::invalid_argument("tube radius must be nonnegative");
    const int d = oracle.dim;
    const double half = oracle.bounding_radius + t;
    const double box_volume = std::pow(2.0 * half, d);
    const std::int64_t shard_size = std::max<std::int64_t>(1, options.shard_size);
    const std::int64_t shards = (samples + shard_size - 1) / shard_size;
    std::vector<std::int64_t> hits(static_cast<std::size_t>(shards), 0);

    auto run_shard = [&](std::int64_t k) {
        PhiloxStream rng(seed, options.stream_base + static_cast<std::uint64_t>(k));
        const std::int64_t count = std::min(shard_size, samples - k * shard_size);
        std::vector<double> x(static_cast<std::size_t>(d));
        std::int64_t h = 0;
        for (std::int64_t s = 0; s < count; ++s) {
            double r2 = 0.0;
            for (int i = 0; i < d; ++i) {
                const double off = rng.uniform(-half, half);
                x[static_cast<std::size_t>(i)] = oracle.center[static_cast<std::size_t>(i)] + off;
                r2 += off * off;
            }
            if (r2 > half * half) continue;
            if (oracle_distance(oracle, x) <= t) ++h;
        }
        hits[static_cast<std::size_t>(k)] = h;
    };

    const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(shards)));
    if (jobs == 1) {
        for (std::int64_t k = 0; k < shards; ++k) run_shard(k);
    } else {
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w)
            workers.emplace_back([&, w] {
                for (std::int64_t k = w; k < shards; k += jobs) run_shard(k);
            });
        for (auto& th : workers) th.join();
    }
    const std::int64_t total = std::accumulate(hits.begin(), hits.end(), std::int64_t{0});
    if (total == 0) throw DegenerateEstimate("mc_tube_volume: no sample hit the tube; degenerate estimate");
    const double p = static_cast<double>(total) / static_cast<double>(samples);
    return {p * box_volume, box_volume * std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), samples, total,
            box_volume};
}

std::vector<double> default_t_grid(const Oracle& oracle, int count) {
    if (count <= 0) count = oracle.dim + 3;
    const double diam = 2.0 * oracle.bounding_radius;
    const double lo = 0.1 * diam;
    const double hi = 2.0 * diam;
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        grid[static_cast<std::size_t>(k)] =
            0.5 * (lo + hi) - 0.5 * (hi - lo) * std::cos((2.0 * k + 1.0) * kPi / (2.0 * count));
    return grid;
}

SteinerFitReport steiner_fit(const Oracle& oracle, std::span<const double> t_grid, std::int64_t samples,
                             std::uint64_t seed, const McOptions& options) {
    const int d = oracle.dim;
    const auto m = static_cast<Eigen::Index>(t_grid.size());
    if (m < d + 1) throw std::invalid_argument("steiner_fit needs at least dim + 1 tube radii");
    std::vector<double> sorted(t_grid.begin(), t_grid.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() <= 0.0) throw std::invalid_argument("steiner_fit radii must be positive");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("steiner_fit radii must be distinct");

    SteinerFitReport report;
    report.t_grid.assign(t_grid.begin(), t_grid.end());
    report.seed = seed;
    Eigen::MatrixXd X(m, d + 1);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        McOptions opt = options;
        opt.stream_base = options.stream_base + (static_cast<std::uint64_t>(i + 1) << 32);
        const double t = t_grid[static_cast<std::size_t>(i)];
        auto est = mc_tube_volume(oracle, t, samples, seed, opt);
        report.raw_volumes.push_back(est);
        const double sd = std::max(est.stderr_, est.box_volume / static_cast<double>(samples));
        for (int j = 0; j <= d; ++j) X(i, j) = std::pow(t, j) / sd;
        y(i) = est.estimate / sd;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    report.condition_number = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    if (!(report.condition_number < 1e13)) throw RankDeficient("steiner_fit: design matrix is rank deficient");

    const Eigen::MatrixXd cov = (X.transpose() * X).inverse();
    const Eigen::VectorXd unconstrained = svd.solve(y);
    const auto fit = nnls(X, y);

    std::vector<double> values(static_cast<std::size_t>(d) + 1);
    report.stderrs.assign(static_cast<std::size_t>(d) + 1, 0.0);
    for (int j = 0; j <= d; ++j) {
        const double omega = std::exp(log_unit_ball_volume(j));
        const double sd = std::sqrt(cov(j, j));
        values[static_cast<std::size_t>(d - j)] = fit.x(j) / omega;
        report.stderrs[static_cast<std::size_t>(d - j)] = sd / omega;
        report.coefficients.push_back(fit.x(j));
        report.unconstrained_coefficients.push_back(unconstrained(j));
        if (unconstrained(j) < -3.0 * sd) report.negative_flags.push_back(j);
    }
    report.estimates = IntrinsicVolumeSequence::from_values(values);
    return report;
}

void to_json(nlohmann::json& j, const TubeVolumeEstimate& e) {
    j = nlohmann::json{{"estimate", e.estimate}, {"stderr", e.stderr_}, {"samples", e.samples},
                       {"hits", e.hits},         {"box_volume", e.box_volume}};
}

void to_json(nlohmann::json& j, const SteinerFitReport& r) {
    j = nlohmann::json{{"estimates", r.estimates},
                       {"v", r.estimates.values()},
                       {"stderr", r.stderrs},
                       {"t_grid", r.t_grid},
                       {"raw_volumes", r.raw_volumes},
                       {"coefficients", r.coefficients},
                       {"unconstrained_coefficients", r.unconstrained_coefficients},
                       {"negative_coefficient_flags", r.negative_flags},
                       {"condition_number", r.condition_number},
                       {"seed", r.seed}};
}

AlexandrovFenchelReport check_alexandrov_fenchel(const IntrinsicVolumeSequence& v, double tolerance) {
    AlexandrovFenchelReport rep{{}, std::numeric_limits<double>::infinity(), 0, true};
    const int n = v.dim();
    for (int j = 1; j <= n - 1; ++j) {
        const double lm = v.log_at(j - 1);
        const double l = v.log_at(j);
        const double lp = v.log_at(j + 1);
        double margin;
        if (lm == kNegInf || lp == kNegInf) margin = std::numeric_limits<double>::infinity();
        else if (l == kNegInf) margin = kNegInf;
        else margin = 2.0 * l - lm - lp - std::log((j + 1.0) / j);
        rep.margins.push_back(margin);
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_index = j;
        }
    }
    rep.pass = rep.margins.empty() || rep.worst_margin >= -tolerance;
    return rep;
}

void to_json(nlohmann::json& j, const AlexandrovFenchelReport& r) {
    j = nlohmann::json{{"margins", r.margins},
                       {"worst_margin", r.worst_margin},
                       {"worst_index", r.worst_index},
                       {"pass", r.pass}};
}

} // namespace ivlab
