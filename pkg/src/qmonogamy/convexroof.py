"""Convex roof of the squared concurrence ``C^2_{X(rest)}`` for rank-2 three-qubit states.

Every pure state in the range of a rank-2 ``rho`` is a point on the Bloch
sphere of its two-dimensional support, and ``rho`` itself sits at the
interior point ``r = (0, 0, lambda0 - lambda1)`` in its eigenbasis. The
convex roof is then the lower convex envelope of the pure-state squared
concurrence over that sphere, evaluated at ``r``.

Two independent routes are provided:

* :func:`min_sq_concurrence` samples the sphere, takes the lower hull of the
  lifted samples and refines the sampling around the witness facet;
* :func:`optimizer_oracle` searches directly over decompositions
  ``psi_i = sum_j U_ij sqrt(lambda_j) v_j`` with ``U`` an isometry.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .envelope import DegenerateHullError, fibonacci_sphere, lower_envelope, spherical_cap
from .errors import ContractError, InvariantError, UnsupportedRankError
from .linalg import QUBITS3, RANK_TOL, bipartition, hermitian_eig, partial_trace
from .measures import pure_sq_concurrence, reduced_qubit
from .states import check_density

DEFAULT_SAMPLES = 4000
_CAP_POINTS = 64
_CAP_SHRINK = 4.0
_CAP_STOP = 1e-5
_MIN_GAIN = 1e-14


@dataclass(frozen=True)
class SupportBasis:
    """Orthonormal eigenvectors spanning the range of a rank <= 2 state."""

    v0: np.ndarray
    v1: np.ndarray
    lambda0: float
    lambda1: float

    @property
    def bloch_vector(self) -> np.ndarray:
        """Bloch vector of the state in the ``{v0, v1}`` frame."""
        return np.array([0.0, 0.0, self.lambda0 - self.lambda1])

    def states(self, points: np.ndarray) -> np.ndarray:
        """Pure states ``cos(t/2) v0 + e^{i p} sin(t/2) v1`` for Bloch points of shape ``(k, 3)``."""
        points = np.atleast_2d(points)
        theta = np.arccos(np.clip(points[:, 2], -1.0, 1.0))
        phi = np.arctan2(points[:, 1], points[:, 0])
        c0 = np.cos(theta / 2)
        c1 = np.exp(1j * phi) * np.sin(theta / 2)
        return c0[:, None] * self.v0[None, :] + c1[:, None] * self.v1[None, :]


@dataclass(frozen=True)
class BlochPoint:
    n: np.ndarray
    weight: float


@dataclass(frozen=True)
class RoofResult:
    """Convex-roof value with a decomposition attaining it.

    ``method`` is one of ``"envelope"``, ``"optimizer"``, ``"pure_shortcut"``
    or ``"optimizer_fallback"`` (envelope was degenerate).
    """

    value: float
    decomposition: tuple[BlochPoint, ...]
    method: str
    measure: str = "sq_concurrence"

    @property
    def weights(self) -> np.ndarray:
        return np.array([b.weight for b in self.decomposition])

    @property
    def points(self) -> np.ndarray:
        return np.array([b.n for b in self.decomposition]).reshape(-1, 3)

    def barycenter(self) -> np.ndarray:
        return self.weights @ self.points


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    v = v * (abs(v[k]) / v[k])
    v[k] = abs(v[k])
    return v


def extract_support(rho: np.ndarray) -> SupportBasis:
    """Top-two eigenpairs of a three-qubit state of rank at most two."""
    rho = check_density(rho, QUBITS3)
    w, v = hermitian_eig(rho)
    tr = float(np.sum(w))
    rank = int(np.count_nonzero(w > RANK_TOL * tr))
    if rank > 2:
        raise UnsupportedRankError(rank)
    lam = np.clip(w[:2], 0.0, None)
    lam = lam / lam.sum()
    basis = SupportBasis(_fix_phase(v[:, 0]), _fix_phase(v[:, 1]), float(lam[0]), float(lam[1]))
    recon = lam[0] * np.outer(basis.v0, basis.v0.conj()) + lam[1] * np.outer(basis.v1, basis.v1.conj())
    if np.max(np.abs(recon - rho)) > 10 * RANK_TOL:
        raise InvariantError("rank-2 reconstruction does not reproduce the state")
    return basis


def _single_focus(focus) -> int:
    f, _ = bipartition(focus, 3)
    if len(f) != 1:
        raise ContractError("the convex roof needs a single-qubit focus")
    return f[0]


def roof_values(basis: SupportBasis, points: np.ndarray, focus: int = 0) -> np.ndarray:
    """Pure-state squared concurrence at each Bloch point of the support sphere."""
    psi = basis.states(points).reshape(-1, 2, 2, 2)
    t = np.moveaxis(psi, 1 + focus, 1).reshape(-1, 2, 4)
    rho_f = t @ np.conj(np.swapaxes(t, 1, 2))
    return 4.0 * np.real(rho_f[:, 0, 0] * rho_f[:, 1, 1] - rho_f[:, 0, 1] * rho_f[:, 1, 0])


def roof_function(basis: SupportBasis, theta: float, phi: float, focus: int = 0) -> float:
    psi = np.cos(theta / 2) * basis.v0 + np.exp(1j * phi) * np.sin(theta / 2) * basis.v1
    return pure_sq_concurrence(psi, _single_focus(focus))


def _pure_result(basis: SupportBasis, focus: int) -> RoofResult:
    return RoofResult(
        pure_sq_concurrence(basis.v0, focus), (BlochPoint(np.array([0.0, 0.0, 1.0]), 1.0),), "pure_shortcut"
    )


def _refine(basis, focus, r, pts, vals, radius):
    """Re-solve the envelope on shrinking caps around the current witness points."""
    while radius > _CAP_STOP:
        caps = [spherical_cap(n, radius, _CAP_POINTS) for n in pts]
        cand = np.vstack([pts, *caps])
        fv = np.concatenate([vals, roof_values(basis, np.vstack(caps), focus)])
        value, idx, w = lower_envelope(cand, fv, r)
        pts, vals = cand[idx], fv[idx]
        radius /= _CAP_SHRINK
    return value, pts, vals, w


def min_sq_concurrence(
    rho: np.ndarray,
    focus: int = 0,
    samples: int = DEFAULT_SAMPLES,
    refine: bool = True,
    hull: str = "lp",
    seed: int = 0,
) -> RoofResult:
    """``<C^2_{focus(rest)}>^min`` for a three-qubit state of rank <= 2.

    The sphere is sampled with a Fibonacci lattice of ``samples`` points and
    the lower envelope located with ``hull`` (``"lp"`` or ``"qhull"``). With
    ``refine`` the witness is then polished on shrinking spherical caps,
    which removes the O(spacing^2) lattice bias. ``seed`` only matters if
    the envelope is degenerate and the optimizer takes over.
    """
    focus = _single_focus(focus)
    basis = extract_support(rho)
    if basis.lambda1 <= RANK_TOL:
        return _pure_result(basis, focus)
    r = basis.bloch_vector
    # the poles put the target (on the z axis) inside the sampled hull even for nearly pure states
    lattice = np.vstack([fibonacci_sphere(samples), [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]])
    fvals = roof_values(basis, lattice, focus)
    try:
        value, idx, w = lower_envelope(lattice, fvals, r, method=hull)
        if refine:
            spacing = np.sqrt(4 * np.pi / samples)
            value, pts, _, w = _refine(basis, focus, r, lattice[idx], fvals[idx], 2 * spacing)
        else:
            pts = lattice[idx]
    except DegenerateHullError as exc:
        warnings.warn(f"degenerate envelope ({exc}); using decomposition optimizer", RuntimeWarning)
        res = optimizer_oracle(rho, focus, seed=seed)
        return RoofResult(res.value, res.decomposition, "optimizer_fallback")
    decomp = tuple(BlochPoint(n, float(wi)) for n, wi in zip(pts, w))
    return RoofResult(min(max(value, 0.0), 1.0), decomp, "envelope")


def min_sq_negativity(rho: np.ndarray, focus: int = 0, **kwargs) -> RoofResult:
    """``<N^2_{focus(rest)}>^min``.

    Every pure state has Schmidt rank <= 2 across a single-qubit cut, where
    negativity and concurrence coincide, so both convex roofs are the same.
    """
    res = min_sq_concurrence(rho, focus, **kwargs)
    return RoofResult(res.value, res.decomposition, res.method, measure="sq_negativity")


def _inv_sqrt_2x2(g: np.ndarray):
    """Inverse square root of a batch of 2x2 Hermitian positive matrices, plus a validity mask."""
    det = np.real(g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] * g[..., 1, 0])
    ok = det > 1e-24
    s = np.sqrt(np.where(ok, det, 1.0))
    t = np.sqrt(np.real(g[..., 0, 0] + g[..., 1, 1]) + 2 * s)
    adj = np.empty_like(g)
    adj[..., 0, 0] = g[..., 1, 1] + s
    adj[..., 1, 1] = g[..., 0, 0] + s
    adj[..., 0, 1] = -g[..., 0, 1]
    adj[..., 1, 0] = -g[..., 1, 0]
    return adj / (t * s)[..., None, None], ok


class _DecompositionObjective:
    """Average squared concurrence of the decomposition generated by an ``m x 2`` matrix.

    The matrix is projected onto the nearest isometry (polar factor), so every
    parameter vector describes a valid decomposition of ``rho``.
    """

    def __init__(self, basis: SupportBasis, focus: int, m: int):
        self.m = m
        self.basis = basis
        w = [np.sqrt(basis.lambda0) * basis.v0, np.sqrt(basis.lambda1) * basis.v1]
        # marginal blocks Tr_rest |w_j><w_k|
        self.blocks = np.array(
            [[partial_trace(np.outer(w[j], w[k].conj()), QUBITS3, focus) for k in range(2)] for j in range(2)]
        )

    def isometry(self, x: np.ndarray):
        y = x.reshape(x.shape[:-1] + (self.m, 4))
        a = y[..., :2] + 1j * y[..., 2:]
        g = np.conj(np.swapaxes(a, -1, -2)) @ a
        ginv, ok = _inv_sqrt_2x2(g)
        return a @ ginv, ok

    def reproject(self, x: np.ndarray) -> np.ndarray:
        """Replace parameters by their isometry; same decomposition, fixed scale."""
        u, _ = self.isometry(x)
        return np.concatenate([u.real, u.imag], axis=-1).reshape(x.shape)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        u, ok = self.isometry(x)
        rf = np.einsum("...ij,...ik,jkab->...iab", u, u.conj(), self.blocks)
        p = np.real(rf[..., 0, 0] + rf[..., 1, 1])
        det = np.real(rf[..., 0, 0] * rf[..., 1, 1] - rf[..., 0, 1] * rf[..., 1, 0])
        live = p > 1e-15
        terms = np.where(live, 4.0 * det / np.where(live, p, 1.0), 0.0)
        return np.where(ok, terms.sum(axis=-1), np.inf)

    def decomposition(self, x: np.ndarray) -> tuple[BlochPoint, ...]:
        u, _ = self.isometry(x)
        c = u * np.sqrt([self.basis.lambda0, self.basis.lambda1])
        out = []
        for c0, c1 in c:
            p = abs(c0) ** 2 + abs(c1) ** 2
            if p <= 1e-15:
                continue
            z = np.conj(c0) * c1
            n = np.array([2 * z.real, 2 * z.imag, abs(c0) ** 2 - abs(c1) ** 2]) / p
            out.append(BlochPoint(n / np.linalg.norm(n), float(p)))
        return tuple(out)


def optimizer_oracle(
    rho: np.ndarray,
    focus: int = 0,
    m: int = 4,
    restarts: int = 32,
    seed: int = 0,
    step_tol: float = 1e-10,
    max_iter: int = 5000,
) -> RoofResult:
    """Convex roof by direct search over ``m``-element decompositions.

    Decompositions are ``psi_i = sum_j U_ij sqrt(lambda_j) v_j`` with ``U`` the
    polar projection of a free complex ``m x 2`` matrix, so the barycenter
    constraint holds by construction. Each restart runs a compass search:
    every pass tries ``+-step`` on each real coordinate, takes the best
    improving move, and halves the step when nothing improves. Accepted points
    are reprojected onto the isometries so the step size keeps its meaning.
    All restarts advance together as one batch.
    """
    if m < 2 or restarts < 1:
        raise ContractError("optimizer needs m >= 2 points and at least one restart")
    focus = _single_focus(focus)
    basis = extract_support(rho)
    if basis.lambda1 <= RANK_TOL:
        return _pure_result(basis, focus)
    if np.linalg.norm(basis.bloch_vector) > 1 + 1e-12:
        raise InvariantError("Bloch vector outside the unit ball")

    objective = _DecompositionObjective(basis, focus, m)
    rng = np.random.default_rng(seed)
    dim = 4 * m
    x = objective.reproject(rng.standard_normal((restarts, dim)))
    cur = objective(x)
    step = np.full(restarts, 0.5)
    moves = np.concatenate([np.eye(dim), -np.eye(dim)])
    rows = np.arange(restarts)
    for _ in range(max_iter):
        active = step > step_tol
        if not active.any():
            break
        cand = x[:, None, :] + step[:, None, None] * moves[None]
        vals = objective(cand)
        k = np.argmin(vals, axis=1)
        best = vals[rows, k]
        # improvements at round-off level would stall the step schedule
        better = (best < cur - _MIN_GAIN) & active
        x[better] = objective.reproject(cand[rows, k][better])
        cur[better] = best[better]
        step[~better & active] *= 0.5

    i = int(np.argmin(cur))
    return RoofResult(float(min(max(cur[i], 0.0), 1.0)), objective.decomposition(x[i]), "optimizer")
