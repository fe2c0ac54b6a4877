import numpy as np
import pytest

from qmonogamy.envelope import (
    DegenerateHullError,
    fibonacci_sphere,
    lower_envelope,
    spherical_cap,
)


def test_fibonacci_sphere_unit_and_balanced():
    pts = fibonacci_sphere(2000)
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)
    assert np.abs(pts.mean(axis=0)).max() < 1e-3


def test_spherical_cap_radius():
    c = np.array([1.0, 2.0, -0.5])
    c /= np.linalg.norm(c)
    pts = spherical_cap(c, 0.1, 50)
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)
    ang = np.arccos(np.clip(pts @ c, -1, 1))
    assert ang.max() <= 0.1 + 1e-12


def test_envelope_of_linear_function_is_itself():
    pts = fibonacci_sphere(500)
    a = np.array([0.3, -0.2, 0.5])
    r = np.array([0.1, 0.2, -0.3])
    value, idx, w = lower_envelope(pts, pts @ a + 1.0, r)
    assert value == pytest.approx(a @ r + 1.0, abs=1e-9)
    np.testing.assert_allclose(w @ pts[idx], r, atol=1e-9)
    assert len(idx) <= 4 and w.sum() == pytest.approx(1.0)


@pytest.mark.parametrize("method", ["lp", "qhull"])
def test_envelope_of_concave_cap_vanishes(method):
    # 1 - z^2 is concave along z, so the envelope at the axis is 0 (use the poles)
    pts = np.vstack([fibonacci_sphere(800), [[0, 0, 1], [0, 0, -1]]])
    value, _, _ = lower_envelope(pts, 1 - pts[:, 2] ** 2, np.array([0, 0, 0.3]), method=method)
    assert value == pytest.approx(0.0, abs=1e-9)


def test_lp_and_qhull_agree(rng):
    pts = fibonacci_sphere(1500)
    for _ in range(5):
        q = rng.standard_normal((3, 3))
        vals = np.einsum("ki,ij,kj->k", pts, q + q.T, pts) + pts @ rng.standard_normal(3)
        r = rng.standard_normal(3)
        r *= rng.uniform(0, 0.95) / np.linalg.norm(r)
        a = lower_envelope(pts, vals, r, "lp")
        b = lower_envelope(pts, vals, r, "qhull")
        assert a[0] == pytest.approx(b[0], abs=1e-9)


def test_flat_lift_is_degenerate_for_qhull():
    pts = fibonacci_sphere(200)
    with pytest.raises(DegenerateHullError):
        lower_envelope(pts, pts @ np.array([0.3, -0.2, 0.5]), np.zeros(3), method="qhull")


def test_target_outside_ball_is_infeasible():
    pts = fibonacci_sphere(100)
    with pytest.raises(DegenerateHullError):
        lower_envelope(pts, np.zeros(100), np.array([0, 0, 1.5]))
