#include <doctest.h>

#include <cmath>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ivlab/logconcave.hpp"
#include "ivlab/logmath.hpp"
#include "ivlab/random.hpp"

using namespace ivlab;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("closed-form entropies agree with quadrature") {
    const double e = std::exp(1.0);
    struct Case {
        LogConcaveDensity d;
        double h;
    };
    const std::vector<Case> cases{
        {LogConcaveDensity::gaussian(1.0), 0.5 * std::log(2 * kPi * e)},
        {LogConcaveDensity::gaussian(3.0), 0.5 * std::log(2 * kPi * e * 3.0)},
        {LogConcaveDensity::uniform(2.0), std::log(2.0)},
        {LogConcaveDensity::laplace(0.5), 1 + std::log(1.0)},
        {LogConcaveDensity::exponential(2.0), 1 - std::log(2.0)},
    };
    for (const auto& c : cases) {
        CHECK(c.d.entropy() == doctest::Approx(c.h).epsilon(1e-14));
        CHECK(entropy_by_quadrature(c.d) == doctest::Approx(c.h).epsilon(1e-9));
        CHECK(total_mass(c.d) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(c.d.eta() <= c.d.entropy());
    }
}

TEST_CASE("density accessors") {
    const auto g = LogConcaveDensity::gaussian(2.0);
    CHECK(g.eta() == doctest::Approx(0.5 * std::log(4 * kPi)).epsilon(1e-12));
    CHECK(g.argmin() == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(g.family() == DensityFamily::gaussian);
    const auto u = LogConcaveDensity::uniform(3.0);
    CHECK(u.phi(4.0) == kInf);
    CHECK(u.phi(1.0) == doctest::Approx(std::log(3.0)));
    CHECK(u.argmin() == doctest::Approx(1.5));
    CHECK(to_string(DensityFamily::exponential) == "exponential");
    CHECK_THROWS_AS(LogConcaveDensity::gaussian(-1.0), std::invalid_argument);
}

TEST_CASE("tabulated and custom potentials") {
    // |x| through three knots, shifted to a normalised Laplace(1)
    const auto t = LogConcaveDensity::tabulated({-1, 0, 1}, {1, 0, 1}, 1.0, 1.0);
    CHECK(t.entropy() == doctest::Approx(1 + std::log(2.0)).epsilon(1e-9));
    CHECK(t.phi(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(t.argmin() == doctest::Approx(0.0).epsilon(1e-7));
    CHECK_THROWS_AS(LogConcaveDensity::tabulated({-1, 0, 1}, {0, 1, 0}, 1.0, 1.0), std::invalid_argument);

    const auto c = LogConcaveDensity::custom([](double x) { return std::abs(x) + std::log(2.0); }, {-kInf, kInf});
    CHECK(c.entropy() == doctest::Approx(1 + std::log(2.0)).epsilon(1e-8));
    CHECK(c.convexity().failures == 0);
    CHECK_THROWS_AS(LogConcaveDensity::custom([](double x) { return std::abs(x); }, {-kInf, kInf}),
                    std::invalid_argument);
    // normalised but bimodal
    auto mixture = [](double x) {
        const double p = 0.5 * (std::exp(-0.5 * (x - 3) * (x - 3)) + std::exp(-0.5 * (x + 3) * (x + 3))) / std::sqrt(2 * kPi);
        return -std::log(p);
    };
    CHECK_THROWS_AS(LogConcaveDensity::custom(mixture, {-kInf, kInf}), std::invalid_argument);
}

TEST_CASE("typical set membership and bodies") {
    const auto g = LogConcaveDensity::gaussian(1.0);
    const TypicalSetSpec spec(g, 2, 0.1);
    CHECK(typical_membership(spec, std::vector<double>{0.0, 0.0}));
    CHECK_FALSE(typical_membership(spec, std::vector<double>{3.0, 0.0}));
    const auto body = typical_body(spec);
    REQUIRE(std::holds_alternative<Ball>(body.variant()));
    CHECK(std::get<Ball>(body.variant()).r == doctest::Approx(std::sqrt(2 * 1.2)).epsilon(1e-12));
    // boundary of the ball is the boundary of the typical set
    const double r = std::get<Ball>(body.variant()).r;
    CHECK(typical_membership(spec, std::vector<double>{r * (1 - 1e-9), 0.0}));
    CHECK_FALSE(typical_membership(spec, std::vector<double>{r * (1 + 1e-9), 0.0}));

    const auto ub = typical_body(TypicalSetSpec(LogConcaveDensity::uniform(2.0), 3, 0.1));
    REQUIRE(std::holds_alternative<Cube>(ub.variant()));
    CHECK(std::get<Cube>(ub.variant()).A == 2.0);

    const auto lb = typical_body(TypicalSetSpec(LogConcaveDensity::laplace(1.0), 2, 0.1));
    REQUIRE(std::holds_alternative<Oracle>(lb.variant()));
    const auto& o = std::get<Oracle>(lb.variant());
    // sum |x_i| <= 2 (h + eps) - 2 log 2 = 2.2
    CHECK(o.contains(std::vector<double>{1.0, 1.19}));
    CHECK_FALSE(o.contains(std::vector<double>{1.0, 1.21}));
    CHECK(o.distance(std::vector<double>{2.2, 2.2}) == doctest::Approx(2.2 / std::sqrt(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(TypicalSetSpec(g, 0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(TypicalSetSpec(g, 2, 0.0), std::invalid_argument);
}

TEST_CASE("linear minorant and crosspolytope bound for Laplace") {
    const auto d = LogConcaveDensity::laplace(1.0);
    const auto m = linear_minorant(d);
    CHECK(m.c1 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(m.c2 == doctest::Approx(std::log(2.0)).epsilon(1e-8));
    CHECK(m.c2 <= std::log(2.0));
    const auto b = crosspolytope_bound(TypicalSetSpec(d, 3, 0.1), 10000);
    CHECK(b.body.A == doctest::Approx(2.2).epsilon(1e-8));
    CHECK(b.failures == 0);
    for (const auto& dd : {LogConcaveDensity::gaussian(1.0), LogConcaveDensity::exponential(1.5),
                           LogConcaveDensity::uniform(2.0)}) {
        const auto mm = linear_minorant(dd);
        CHECK(mm.c1 > 0.0);
        for (double x = -20; x <= 20; x += 0.37)
            if (std::isfinite(dd.phi(x))) CHECK(dd.phi(x) >= mm.c1 * std::abs(x) + mm.c2 - 1e-12);
        CHECK(crosspolytope_bound(TypicalSetSpec(dd, 3, 0.1), 5000).failures == 0);
    }
}

TEST_CASE("projection bound and Loomis-Whitney") {
    const auto u = LogConcaveDensity::uniform(2.0);
    const TypicalSetSpec spec(u, 3, 0.1);
    // n (log A + eps) - (n - m) log A
    CHECK(projection_volume_bound(spec, 1) == doctest::Approx(std::log(2.0) + 0.3).epsilon(1e-13));
    for (int m = 1; m <= 3; ++m) {
        const auto r = loomis_whitney_check(spec, m);
        CHECK(r.method == "closed_form");
        CHECK(r.pass);
        CHECK(r.log_margin >= 0.0);
    }
    const auto g = loomis_whitney_check(TypicalSetSpec(LogConcaveDensity::gaussian(1.0), 3, 0.1), 2);
    CHECK(g.pass);
    const auto l = loomis_whitney_check(TypicalSetSpec(LogConcaveDensity::laplace(1.0), 2, 0.1), 1, 100000);
    CHECK(l.method == "steiner_fit");
    CHECK(l.sigma > 0.0);
    CHECK(l.pass);
    CHECK_THROWS_AS(loomis_whitney_check(TypicalSetSpec(LogConcaveDensity::laplace(1.0), 4, 0.1), 1),
                    std::invalid_argument);
}

TEST_CASE("bloat check") {
    const auto lap = LogConcaveDensity::laplace(1.0);
    const auto r = bloat_check(lap, 0.05, 5, 2000);
    CHECK(r.alpha == doctest::Approx(0.1 / 0.95).epsilon(1e-12));
    CHECK(r.failures == 0);
    // for the Laplace potential the scaled boundary lands exactly on the typical set boundary
    CHECK(std::abs(r.worst_margin) < 1e-9);
    CHECK(bloat_check(LogConcaveDensity::gaussian(1.0), 0.1, 5, 2000).failures == 0);
    CHECK_THROWS_AS(bloat_check(LogConcaveDensity::uniform(1.0), 0.1, 5, 10), std::invalid_argument);
    CHECK_THROWS_AS(bloat_check(lap, 2.0, 5, 10), std::invalid_argument);
}

TEST_CASE("concatenation and nesting") {
    for (const auto& d : {LogConcaveDensity::gaussian(1.0), LogConcaveDensity::laplace(2.0),
                          LogConcaveDensity::exponential(1.0), LogConcaveDensity::uniform(1.0)}) {
        CHECK(concatenation_check(d, 0.1, 6, 3000, 4).failures == 0);
        CHECK(nesting_check(d, 0.05, 0.1, 4, 1000, 4).failures == 0);
    }
}

TEST_CASE("level-set sampling") {
    PhiloxStream rng(3, 0);
    const auto lap = LogConcaveDensity::laplace(1.0);
    const double level = 4 * (lap.entropy() + 0.2);
    for (int k = 0; k < 50; ++k) {
        const auto x = sample_level_set(lap, 4, level, rng, true);
        double s = 0;
        for (double xi : x) s += lap.phi(xi);
        CHECK(s == doctest::Approx(level).epsilon(1e-9));
    }
    // support boundary at 0: rays start inside, points stay in the set
    const auto ex = LogConcaveDensity::exponential(1.0);
    const double elevel = 4 * (ex.entropy() + 0.2);
    for (int k = 0; k < 50; ++k) {
        for (bool boundary : {true, false}) {
            const auto y = sample_level_set(ex, 4, elevel, rng, boundary);
            double t = 0;
            for (double yi : y) t += ex.phi(yi);
            CHECK(t <= elevel * (1 + 1e-12));
        }
    }
}

TEST_CASE("report JSON") {
    const nlohmann::json j = linear_minorant(LogConcaveDensity::laplace(1.0));
    CHECK(j.contains("c1"));
    const nlohmann::json b = bloat_check(LogConcaveDensity::laplace(1.0), 0.05, 3, 10);
    CHECK(b.at("failures") == 0);
}
