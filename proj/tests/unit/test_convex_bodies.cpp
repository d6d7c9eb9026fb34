#include <doctest.h>

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "ivlab/convex_bodies.hpp"
#include "ivlab/errors.hpp"
#include "ivlab/logmath.hpp"
#include "ivlab/random.hpp"

using namespace ivlab;

namespace {

void check_values(const IntrinsicVolumeSequence& s, const std::vector<double>& want, double rel) {
    const auto v = s.values();
    REQUIRE(v.size() == want.size());
    for (std::size_t j = 0; j < want.size(); ++j) CHECK(v[j] == doctest::Approx(want[j]).epsilon(rel));
}

IntrinsicVolumeSequence random_sequence(PhiloxStream& rng, int n) {
    std::vector<double> logv(n + 1);
    for (auto& x : logv) x = rng.uniform(-3.0, 3.0);
    return IntrinsicVolumeSequence(logv);
}

} // namespace

TEST_CASE("cube and ball closed forms") {
    check_values(cube_intrinsic_volumes(3, 2.0), {1, 6, 12, 8}, 1e-15);
    check_values(ball_intrinsic_volumes(2, 1.0), {1, kPi, kPi}, 1e-14);
    // unit 3-ball: V_1 = 4, V_2 = 2 pi (half the surface area), V_3 = 4 pi / 3
    check_values(ball_intrinsic_volumes(3, 1.0), {1, 4, 2 * kPi, 4 * kPi / 3}, 1e-14);
    check_values(ball_intrinsic_volumes(1, 0.5), {1, 1}, 1e-15);
}

TEST_CASE("crosspolytope closed forms against elementary geometry") {
    check_values(crosspolytope_intrinsic_volumes(2, 1.0), {1, 4 * std::sqrt(2.0), 8}, 1e-12);
    // octahedron with vertices at distance a = 3: 12 edges of length a sqrt2 and
    // exterior angle acos(1/3), 8 faces of area (sqrt3/2) a^2
    const double a = 3.0;
    const double v1 = 12 * a * std::sqrt(2.0) * std::acos(1.0 / 3.0) / (2 * kPi);
    const double v2 = 0.5 * 8 * std::sqrt(3.0) / 2 * a * a;
    check_values(crosspolytope_intrinsic_volumes(3, 1.0), {1, v1, v2, 4 * a * a * a / 3}, 1e-10);
    CHECK(std::exp(log_crosspolytope_integral(2, 1)) == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-13));
    // d/dx erf(x)^2 = (4 / sqrt pi) e^{-x^2} erf(x)
    CHECK(std::exp(log_crosspolytope_integral(2, 0)) == doctest::Approx(std::sqrt(kPi) / 4).epsilon(1e-12));
}

TEST_CASE("one-dimensional bodies are segments") {
    check_values(crosspolytope_intrinsic_volumes(1, 1.5), {1, 3}, 1e-13);
    check_values(cube_intrinsic_volumes(1, 1.5), {1, 1.5}, 1e-15);
}

TEST_CASE("Steiner formula examples") {
    CHECK(steiner_volume(cube_intrinsic_volumes(2, 1.0), 1.0) == doctest::Approx(5 + kPi).epsilon(1e-14));
    CHECK(steiner_volume(cube_intrinsic_volumes(2, 1.0), 0.0) == doctest::Approx(1.0));
    const double r = 0.7, t = 0.4;
    CHECK(steiner_volume(ball_intrinsic_volumes(3, r), t) ==
          doctest::Approx(4 * kPi / 3 * std::pow(r + t, 3)).epsilon(1e-13));
    CHECK(steiner_volume(crosspolytope_intrinsic_volumes(2, 1.0), 0.5) ==
          doctest::Approx(8 + 8 * std::sqrt(2.0) * 0.5 + kPi * 0.25).epsilon(1e-12));
    CHECK_THROWS_AS(steiner_volume(cube_intrinsic_volumes(2, 1.0), -1.0), std::invalid_argument);
}

TEST_CASE("products convolve their sequences") {
    const auto sq = closed_form_intrinsic_volumes(product(Cube{1, 2.0}, Cube{1, 2.0}));
    check_values(sq, cube_intrinsic_volumes(2, 2.0).values(), 1e-14);
    const auto cyl = closed_form_intrinsic_volumes(product(Ball{2, 1.0}, Cube{1, 3.0}));
    // cylinder: V_1 = 3 + pi, V_2 = 3 pi + pi, V_3 = 3 pi
    check_values(cyl, {1, 3 + kPi, 4 * kPi, 3 * kPi}, 1e-13);
    CHECK(product(Ball{2, 1.0}, Cube{1, 3.0}).dim() == 3);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(ConvexBodySpec(Ball{2, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ConvexBodySpec(Cube{0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(closed_form_intrinsic_volumes(cube_oracle(2, 1.0)), std::invalid_argument);
    CHECK(ConvexBodySpec(Cube{2, 1.0}).has_closed_form());
    CHECK_FALSE(ConvexBodySpec(cube_oracle(2, 1.0)).has_closed_form());
}

TEST_CASE("oracle distances") {
    const auto cube = cube_oracle(2, 1.0);
    CHECK(oracle_distance(cube, std::vector<double>{2.0, 0.5}) == doctest::Approx(1.0));
    CHECK(oracle_distance(cube, std::vector<double>{0.5, 0.5}) == 0.0);
    const auto cross = crosspolytope_oracle(2, 1.0);
    CHECK(oracle_distance(cross, std::vector<double>{2.0, 2.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(oracle_distance(cross, std::vector<double>{3.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));

    // membership only: the generic search must find the same distances
    auto disk = ball_oracle(2, 1.0);
    disk.distance = nullptr;
    CHECK(oracle_distance(disk, std::vector<double>{3.0, 0.0}) == doctest::Approx(2.0).epsilon(1e-6));
    auto square = cube;
    square.distance = nullptr;
    CHECK(oracle_distance(square, std::vector<double>{2.0, 2.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    const std::vector<double> u{1.0, 0.0};
    CHECK(radial_extent(disk, u) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("product oracles combine distances") {
    const auto o = oracle_for(product(Cube{1, 1.0}, Cube{1, 1.0}));
    CHECK(o.dim == 2);
    CHECK(oracle_distance(o, std::vector<double>{2.0, 2.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("Monte-Carlo tube volume is unbiased and job-count independent") {
    const auto o = cube_oracle(2, 1.0);
    const double t = 0.5;
    const double truth = 1 + 4 * t + kPi * t * t;
    McOptions one, three;
    three.jobs = 3;
    three.shard_size = 5000;
    one.shard_size = 5000;
    const auto a = mc_tube_volume(o, t, 100000, 9, one);
    const auto b = mc_tube_volume(o, t, 100000, 9, three);
    CHECK(a.hits == b.hits);
    CHECK(a.estimate == b.estimate);
    CHECK(std::abs(a.estimate - truth) < 4 * a.stderr_);
    CHECK(a.samples == 100000);
}

TEST_CASE("Steiner fit recovers the square") {
    const auto o = cube_oracle(2, 1.0);
    const std::vector<double> grid{0.25, 0.5, 1.0, 2.0};
    const auto fit = steiner_fit(o, grid, 200000, 5);
    const auto est = fit.estimates.values();
    const std::vector<double> want{1, 2, 1};
    for (int j = 0; j <= 2; ++j) CHECK(std::abs(est[j] - want[j]) < 4 * fit.stderrs[j]);
    CHECK(fit.condition_number < 1e13);
    CHECK(fit.coefficients.size() == 3);
    const nlohmann::json j = fit;
    CHECK(j.contains("estimates"));
    CHECK(j.contains("stderr"));
    CHECK_THROWS_AS(steiner_fit(o, std::vector<double>{0.5, 1.0}, 1000, 1), std::invalid_argument);
    CHECK_THROWS_AS(steiner_fit(o, std::vector<double>{0.5, 0.5, 1.0}, 1000, 1), std::invalid_argument);
}

TEST_CASE("Steiner fit detects an ill-conditioned design") {
    const auto o = cube_oracle(2, 1.0);
    CHECK_THROWS_AS(steiner_fit(o, std::vector<double>{1e-7, 2e-7, 3e-7}, 1000, 1), RankDeficient);
}

TEST_CASE("default radii") {
    const auto grid = default_t_grid(cube_oracle(3, 1.0));
    CHECK(grid.size() == 6);
    for (double t : grid) CHECK(t > 0.0);
}

TEST_CASE("Alexandrov-Fenchel inequalities") {
    for (int n : {2, 10, 100, 400}) {
        CHECK(check_alexandrov_fenchel(ball_intrinsic_volumes(n, 1.3)).pass);
        CHECK(check_alexandrov_fenchel(cube_intrinsic_volumes(n, 0.7)).pass);
    }
    CHECK(check_alexandrov_fenchel(crosspolytope_intrinsic_volumes(30, 1.0)).pass);
    const auto bad = check_alexandrov_fenchel(IntrinsicVolumeSequence::from_values(std::vector<double>{1, 1, 10}));
    CHECK_FALSE(bad.pass);
    CHECK(bad.worst_index == 1);
    CHECK(bad.worst_margin == doctest::Approx(-std::log(20.0)).epsilon(1e-14));
}

TEST_CASE("property: intrinsic volumes are monotone under inclusion") {
    // a cube of side A fits in the ball of radius A sqrt(n) / 2 and in the
    // crosspolytope {sum |x| <= A n} (after centering)
    for (int n = 1; n <= 12; ++n) {
        const double A = 0.8;
        const auto c = cube_intrinsic_volumes(n, A);
        const auto b = ball_intrinsic_volumes(n, A * std::sqrt(static_cast<double>(n)) / 2);
        const auto x = crosspolytope_intrinsic_volumes(n, A);
        for (int j = 0; j <= n; ++j) {
            CHECK(c.log_at(j) <= b.log_at(j) + 1e-12);
            CHECK(c.log_at(j) <= x.log_at(j) + 1e-12);
        }
    }
}

TEST_CASE("property: homogeneity V_j(sK) = s^j V_j(K)") {
    for (int n : {2, 5, 9}) {
        const auto a = crosspolytope_intrinsic_volumes(n, 1.0);
        const auto b = crosspolytope_intrinsic_volumes(n, 2.5);
        for (int j = 0; j <= n; ++j) CHECK(b.log_at(j) == doctest::Approx(a.log_at(j) + j * std::log(2.5)).epsilon(1e-11));
    }
}

TEST_CASE("property: convolution is associative and commutative") {
    PhiloxStream rng(11, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_sequence(rng, 1 + trial % 4);
        const auto b = random_sequence(rng, 1 + trial % 3);
        const auto c = random_sequence(rng, 2);
        const auto l = convolve(convolve(a, b), c);
        const auto r = convolve(a, convolve(b, c));
        const auto ba = convolve(b, a);
        const auto ab = convolve(a, b);
        for (int j = 0; j <= l.dim(); ++j) CHECK(l.log_at(j) == doctest::Approx(r.log_at(j)).epsilon(1e-12));
        for (int j = 0; j <= ab.dim(); ++j) CHECK(ab.log_at(j) == doctest::Approx(ba.log_at(j)).epsilon(1e-12));
    }
}

TEST_CASE("AF report JSON") {
    const nlohmann::json j = check_alexandrov_fenchel(cube_intrinsic_volumes(4, 1.0));
    CHECK(j.at("pass").get<bool>());
    CHECK(j.at("margins").size() == 3);
}
