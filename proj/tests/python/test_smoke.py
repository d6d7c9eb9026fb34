import json
import math

import pytest

import ivlab


def test_cube_volumes_exact():
    assert ivlab.cube_intrinsic_volumes(3, 2.0).values() == [1.0, 6.0, 12.0, 8.0]


def test_ball_and_steiner():
    ball = ivlab.ball_intrinsic_volumes(2, 1.0)
    assert ball.values() == pytest.approx([1.0, math.pi, math.pi], rel=1e-12)
    square = ivlab.cube_intrinsic_volumes(2, 1.0)
    assert ivlab.steiner_volume(square, 1.0) == pytest.approx(5.0 + math.pi, rel=1e-12)


def test_crosspolytope_perimeter():
    cp = ivlab.crosspolytope_intrinsic_volumes(2, 1.0).values()
    assert cp[2] == pytest.approx(8.0, rel=1e-12)
    assert cp[1] == pytest.approx(4.0 * math.sqrt(2.0), rel=1e-7)


def test_alexandrov_fenchel_report():
    rep = ivlab.check_alexandrov_fenchel(ivlab.ball_intrinsic_volumes(6, 1.0))
    assert rep["pass"]
    bad = ivlab.IntrinsicVolumeSequence.from_values([1.0, 1.0, 10.0])
    assert not ivlab.check_alexandrov_fenchel(bad)["pass"]


def test_steiner_fit_square():
    rep = ivlab.steiner_fit(ivlab.cube_oracle(2, 1.0), [0.25, 0.5, 1.0, 2.0], 20000, 3)
    est = rep["estimates"]["log_v"]
    assert math.exp(est[2]) == pytest.approx(1.0, abs=0.3)


def test_cube_family_generating_function():
    fam = ivlab.cube_family(1.0, 20)
    for t in (-1.0, 0.0, 2.0):
        g = ivlab.log_generating_function(fam, 20, t) / 20
        assert g == pytest.approx(math.log1p(math.exp(t)), abs=1e-12)


def test_legendre_conjugate_quadratic():
    r = ivlab.legendre_conjugate(lambda t: 0.5 * t * t, 0.3, -5.0, 5.0)
    assert r["value"] == pytest.approx(0.045, abs=1e-9)


def test_appendix_gap():
    fam = ivlab.appendix_example_family(2.0, 0.25, 60)
    curve = ivlab.rate_curve(fam, [0.5, 1.0], "lambda_star")
    assert "endpoints" in curve


def test_densities_and_curve():
    g = ivlab.LogConcaveDensity.gaussian(1.0)
    assert g.entropy == pytest.approx(0.5 * math.log(2 * math.pi * math.e), rel=1e-12)
    assert ivlab.entropy_by_quadrature(g) == pytest.approx(g.entropy, rel=1e-9)
    u = ivlab.LogConcaveDensity.uniform(2.0)
    grid = [0.0, 0.25, 0.5, 0.75, 1.0]
    c = ivlab.estimate_curve(u, grid, n_max=50)
    for th, v in zip(grid, c["h"]):
        assert v == pytest.approx(ivlab.uniform_h_theta(2.0, th), abs=1e-8)


def test_custom_density_callable():
    d = ivlab.LogConcaveDensity.custom(lambda x: abs(x) + math.log(2.0), -math.inf, math.inf, "laplace1")
    assert d.entropy == pytest.approx(1.0 + math.log(2.0), rel=1e-8)


def test_epi_saturation():
    g = ivlab.LogConcaveDensity.gaussian(1.0)
    rep = ivlab.epi_conjecture_check(g, g, [0.5, 1.0])
    assert rep["label"] == "conjecture evidence"
    assert rep["saturation_error"] < 1e-10


def test_reports_are_json_serialisable():
    rep = ivlab.linear_minorant(ivlab.LogConcaveDensity.laplace(1.0))
    json.dumps(rep)
    assert rep["c1"] > 0
