"""Lower convex envelopes of functions sampled on the unit sphere.

A function ``f`` on the sphere is lifted to the points ``(n, f(n))`` in R^4.
The envelope at an interior point ``r`` is the height of the lower convex
hull of the lifted cloud above ``r``; the vertices of the facet hit give a
convex decomposition ``r = sum_i w_i n_i`` attaining it.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog, nnls
from scipy.spatial import ConvexHull, QhullError

_GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))
# HiGHS defaults (1e-7) would cap the envelope accuracy at that level
_LP_OPTIONS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}


class DegenerateHullError(ArithmeticError):
    """The lifted point cloud gave no usable lower facet above the query point."""


def fibonacci_sphere(n: int) -> np.ndarray:
    """``n`` nearly uniform points on the unit sphere, shape ``(n, 3)``."""
    if n < 4:
        raise ValueError("need at least 4 sphere points")
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    rho = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = _GOLDEN_ANGLE * i
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def spherical_cap(center: np.ndarray, radius: float, n: int) -> np.ndarray:
    """Fibonacci points on the cap of geodesic ``radius`` around the unit vector ``center``."""
    c = np.asarray(center, dtype=float)
    c = c / np.linalg.norm(c)
    i = np.arange(n) + 0.5
    z = 1.0 - (1.0 - np.cos(radius)) * i / n
    rho = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = _GOLDEN_ANGLE * i
    # any orthonormal frame completing c
    a = np.array([1.0, 0.0, 0.0]) if abs(c[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(c, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(c, e1)
    pts = np.outer(rho * np.cos(phi), e1) + np.outer(rho * np.sin(phi), e2) + np.outer(z, c)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def lower_envelope_lp(points: np.ndarray, values: np.ndarray, target: np.ndarray):
    """Envelope height at ``target`` as a linear program over the lifted points.

    Minimizes ``sum w_i values_i`` subject to ``sum w_i points_i = target``,
    ``sum w_i = 1``, ``w >= 0``. A basic optimal solution selects the vertices
    of the lower hull facet above ``target``.

    Returns ``(value, indices, weights)``.
    """
    a_eq = np.vstack([points.T, np.ones(len(points))])
    b_eq = np.append(target, 1.0)
    res = linprog(values, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs-ipm", options=_LP_OPTIONS)
    if res.status != 0:
        raise DegenerateHullError(f"envelope LP failed: {res.message}")
    idx = np.flatnonzero(res.x > 1e-13)
    w = res.x[idx] / res.x[idx].sum()
    return float(w @ values[idx]), idx, w


def lower_envelope_qhull(points: np.ndarray, values: np.ndarray, target: np.ndarray):
    """Envelope height at ``target`` by explicit lower-hull facet location (Qhull).

    The lower hull is the pointwise maximum of its facet hyperplanes, so the
    facet above ``target`` is the one whose hyperplane is highest there. This
    avoids barycentric tests on facets whose projection is nearly flat.
    Same return convention as :func:`lower_envelope_lp`.
    """
    lifted = np.column_stack([points, values])
    try:
        hull = ConvexHull(lifted)
    except QhullError as exc:
        raise DegenerateHullError(str(exc)) from exc
    eq = hull.equations
    lower = eq[:, -2] < -1e-12
    if not lower.any():
        raise DegenerateHullError("lifted cloud has no lower facet")
    eq, simp = eq[lower], hull.simplices[lower]
    # facet plane: normal . (x, t) + offset = 0  ->  t at x = target
    heights = -(eq[:, :-2] @ target + eq[:, -1]) / eq[:, -2]
    k = int(np.argmax(heights))
    a = np.vstack([points[simp[k]].T, np.ones(len(simp[k]))])
    w, resid = nnls(a, np.append(target, 1.0))
    if resid > 1e-8:
        raise DegenerateHullError("target is not covered by the highest lower facet")
    keep = w > 0
    return float(heights[k]), simp[k][keep], w[keep] / w[keep].sum()


def lower_envelope(points, values, target, method: str = "lp"):
    points = np.asarray(points, dtype=float)
    values = np.asarray(values, dtype=float)
    target = np.asarray(target, dtype=float)
    if method == "lp":
        return lower_envelope_lp(points, values, target)
    if method == "qhull":
        return lower_envelope_qhull(points, values, target)
    raise ValueError(f"unknown envelope method {method!r}")
