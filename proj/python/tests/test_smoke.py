import math

import numpy as np
import pytest

import lcpoly

GAUSS1 = {"family": "standard_gaussian", "dim": 1}


def test_canonical_polynomial_round_trip():
    text = lcpoly.canonical_polynomial("3 + x2 + x1^2", 2)
    assert text == "x1^2 + x2 + 3"
    assert lcpoly.canonical_polynomial(text, 2) == text
    assert lcpoly.evaluate(text, 2, [2.0, 1.0]) == 8.0


def test_parse_error_is_value_error():
    with pytest.raises(ValueError):
        lcpoly.canonical_polynomial("x1 +", 1)


def test_sample_shape_and_determinism():
    a = lcpoly.sample({"family": "uniform_ball", "dim": 3, "radius": 1.0}, 500, 7)
    b = lcpoly.sample({"family": "uniform_ball", "dim": 3, "radius": 1.0}, 500, 7)
    assert a.shape == (500, 3)
    assert np.array_equal(a, b)
    assert np.all(np.linalg.norm(a, axis=1) <= 1.0)


def test_tv_of_unit_gaussian_shift():
    x = lcpoly.sample(GAUSS1, 100000, 42)[:, 0]
    tv = lcpoly.tv_histogram(x, x + 1.0)
    assert abs(tv["tv"] - math.erf(0.5 / math.sqrt(2))) < 0.02
    assert tv["bins"] == 47


def test_skorohod_and_density_variance():
    assert abs(lcpoly.skorohod_tv({"family": "standard_gaussian", "dim": 2}, [1.0, 1.0]) - math.sqrt(2 / math.pi)) < 1e-6
    r = lcpoly.density_variance({"family": "uniform_box", "dim": 1, "lower": 0.0, "upper": 1.0})
    assert abs(r["lhs"] - 1 / 12) <= 1e-9
    assert r["pass"] is True


def test_run_config_matches_schema():
    report = lcpoly.run({"suite": "moments", "f": "x1", "n": 20000, "seed": 3})
    assert report["format_version"] == lcpoly.FORMAT_VERSION
    assert report["exit_code"] == 0
    assert report["config"]["f"] == "x1"
    assert report["csv"].startswith("# format_version=1\n")
    with pytest.raises(ValueError):
        lcpoly.run({"suite": "moments", "colour": "red"})
