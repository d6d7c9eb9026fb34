#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "ivlab/errors.hpp"
#include "ivlab/logmath.hpp"
#include "ivlab/superconv.hpp"

using namespace ivlab;

namespace {

double binary_h(double th) {
    if (th <= 0.0 || th >= 1.0) return 0.0;
    return -th * std::log(th) - (1 - th) * std::log1p(-th);
}

} // namespace

TEST_CASE("example family values") {
    const auto fam = appendix_example_family(2.0, 0.25, 5);
    const auto v = fam.at(3).values();
    const std::vector<double> want{1, 4, 4, 0.25};
    REQUIRE(v.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(v[i] == doctest::Approx(want[i]).epsilon(1e-14));
    CHECK(fam.at(1).values()[1] == doctest::Approx(0.25));
    CHECK_THROWS_AS(appendix_example_family(0.5, 0.25, 5), std::invalid_argument);
    CHECK_THROWS_AS(appendix_example_family(2.0, 0.75, 5), std::invalid_argument);
    CHECK_THROWS(fam.at(6));
}

TEST_CASE("cube family: g_n(t) = log(1 + A e^t) for every n") {
    const double A = 1.7;
    const auto fam = cube_family(A, 30);
    for (int n : {1, 7, 30})
        for (double t : {-4.0, -0.5, 0.0, 2.0})
            CHECK(normalized_generating_function(fam, n, t) == doctest::Approx(std::log1p(A * std::exp(t))).epsilon(1e-13));
    const auto p = properness(fam);
    CHECK(p.endpoints_positive);
    CHECK(p.finite);
    CHECK(p.beta == doctest::Approx(0.0));
    CHECK(p.alpha == doctest::Approx(std::log(A)).epsilon(1e-13));
    CHECK(p.gamma == doctest::Approx(std::log1p(A)).epsilon(1e-13));
}

TEST_CASE("closed-form families are super-convolutive") {
    CHECK(check_superconvolutive(cube_family(1.0, 20), 20).pass);
    CHECK(check_superconvolutive(ball_family(1.2, 20), 20).pass);
    CHECK(check_superconvolutive(crosspolytope_family(1.0, 16), 16).pass);
    CHECK(check_superconvolutive(appendix_example_family(2.0, 0.25, 20), 20).pass);
}

TEST_CASE("a shrinking family is flagged") {
    // mu_n(i) = C(n, i) 2^{-n^2}: (mu_m * mu_n)(i) exceeds mu_{m+n}(i) by 2^{2mn}
    auto make = [](int n) {
        std::vector<double> logv(n + 1);
        for (int i = 0; i <= n; ++i) logv[i] = log_binomial(n, i) - n * n * std::log(2.0);
        return IntrinsicVolumeSequence(logv);
    };
    const auto fam = materialize_family(make, 6, "shrinking");
    const auto rep = check_superconvolutive(fam, 6);
    CHECK_FALSE(rep.pass);
    CHECK(rep.worst_margin == doctest::Approx(-2.0 * 3 * 3 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("Legendre-Fenchel conjugates") {
    const auto q = legendre_conjugate([](double t) { return 0.5 * t * t; }, 0.3, {-5, 5});
    CHECK(q.value == doctest::Approx(0.045).epsilon(1e-9));
    CHECK(q.argmax == doctest::Approx(0.3).epsilon(1e-6));
    CHECK_FALSE(q.at_infinity);

    // maximiser outside the bracket: the bracket is widened
    const auto w = legendre_conjugate([](double t) { return 0.5 * t * t; }, 0.9, {-0.1, 0.1});
    CHECK(w.value == doctest::Approx(0.405).epsilon(1e-9));
    CHECK(w.widenings > 0);

    auto softplus = [](double t) { return std::log1p(std::exp(t)); };
    for (double th : {0.1, 0.5, 0.9})
        CHECK(legendre_conjugate(softplus, th, {-20, 20}).value == doctest::Approx(-binary_h(th)).epsilon(1e-9));
    // theta = 1: sup_t t - log(1 + e^t) = 0, approached as t -> infinity
    CHECK(std::abs(legendre_conjugate(softplus, 1.0, {-5, 5}).value) < 1e-8);

    CHECK_THROWS_AS(legendre_conjugate([](double) { return 0.0; }, 0.5, {-1, 1}), ConvergenceError);
}

TEST_CASE("Lambda estimates") {
    const auto cube = cube_family(1.0, 100);
    for (double t : {-2.0, 0.0, 1.5}) {
        const auto e = estimate_lambda(cube, t);
        CHECK(e.value == doctest::Approx(std::log1p(std::exp(t))).epsilon(1e-12));
        CHECK(e.lower <= e.value + 1e-12);
        CHECK(e.value <= e.upper + 1e-12);
    }
    const auto ex = appendix_example_family(2.0, 0.25, 400);
    for (double t : {-1.0, 0.0, 1.0})
        CHECK(std::abs(lambda_value(ex, t) - std::log1p(2.0 * std::exp(t))) < 1e-3);

    const std::vector<double> grid{-5, -2.5, 0, 2.5, 5};
    const auto ball = ball_family(1.2, 200);
    CHECK(check_lambda_bounds(ball, grid).pass);
    CHECK(check_superadditivity(ball, grid).pass);
    CHECK(check_superadditivity(ex, grid).pass);
}

TEST_CASE("rate curve of the cube family is minus the binary entropy") {
    const auto fam = cube_family(1.0, 50);
    const std::vector<double> grid{0.0, 0.2, 0.5, 0.7, 1.0};
    const auto c = rate_curve(fam, grid, RateMode::gn_star);
    REQUIRE(c.values.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(c.values[i] == doctest::Approx(-binary_h(grid[i])).epsilon(1e-8));
        CHECK(c.bracket_lo[i] <= c.values[i] + 1e-8);
        CHECK(c.values[i] <= c.bracket_hi[i] + 1e-8);
    }
    CHECK(gn_star(fam, 50, 0.0) == 0.0);
    CHECK(gn_star(fam, 50, 1.0) == 0.0);
    std::ostringstream os;
    write_rate_curve_csv(os, c);
    CHECK(os.str().rfind("theta,value,bracket_lo,bracket_hi\n", 0) == 0);
}

TEST_CASE("example family has a strict gap at theta = 1") {
    const auto fam = appendix_example_family(2.0, 0.25, 400);
    const auto c = rate_curve(fam, {0.5, 1.0}, RateMode::lambda_star);
    REQUIRE(c.endpoints.size() == 1);
    const auto& e = c.endpoints.front();
    CHECK(e.theta == 1.0);
    CHECK(std::abs(e.conjugate_value + std::log(2.0)) < 1e-3);
    CHECK(std::abs(e.sequence_value) < 0.01);
    CHECK(e.strict_gap);
}

TEST_CASE("interval mass matches a direct binomial sum") {
    const int n = 400;
    const auto fam = cube_family(1.0, n);
    double direct = kNegInf;
    for (int j = 160; j <= 240; ++j) direct = log_add(direct, log_binomial(n, j));
    CHECK(interval_mass_bounds(fam, 0.4, 0.6, n) == doctest::Approx(direct / n).epsilon(1e-12));
    CHECK(std::abs(interval_mass_bounds(fam, 0.4, 0.6, n) - std::log(2.0)) < 0.02);
    CHECK(interval_mass_bounds(fam, 0.501, 0.502, 400) == kNegInf);
}

TEST_CASE("family JSONL round trip") {
    const auto fam = appendix_example_family(3.0, 0.1, 6);
    std::stringstream ss;
    write_family_jsonl(ss, fam);
    const auto back = read_family_jsonl(ss);
    REQUIRE(back.max_n() == 6);
    CHECK(back.provenance() == fam.provenance());
    for (int n = 1; n <= 6; ++n) CHECK(back.at(n) == fam.at(n));
}

TEST_CASE("family builders are independent of the thread count") {
    const auto a = crosspolytope_family(1.0, 12, 1);
    const auto b = crosspolytope_family(1.0, 12, 3);
    for (int n = 1; n <= 12; ++n) CHECK(a.at(n) == b.at(n));
}
