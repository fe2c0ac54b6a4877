"""Closed-form bipartite entanglement measures for qubit systems."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .errors import ContractError
from .linalg import QUBITS3, bipartition, hermitian_eig, partial_transpose, trace_norm
from .states import check_density, check_pure

_CLAMP_TOL = 1e-9
# eigenvalues of a unit-trace state below this are treated as exact zeros
_NULL_EIG = 1e-13
_SYSY = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex)


def _clamp(x: float) -> float:
    if x < -_CLAMP_TOL or x > 1 + _CLAMP_TOL:
        raise ContractError(f"measure value {x!r} outside [0, 1]")
    return float(min(max(x, 0.0), 1.0))


def concurrence_2q(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    ``C = max(0, l1 - l2 - l3 - l4)`` with ``l_i`` the decreasing square roots
    of the eigenvalues of ``rho (sy x sy) rho* (sy x sy)``. The ``l_i`` are
    obtained as singular values of ``X^T (sy x sy) X`` where
    ``rho = X X^dag`` over the numerically nonzero spectrum, which avoids
    taking square roots of round-off sized eigenvalues.
    """
    rho = check_density(rho, (2, 2))
    w, v = hermitian_eig(rho)
    keep = w > _NULL_EIG
    x = v[:, keep] * np.sqrt(w[keep])
    lam = np.zeros(4)
    lam[: keep.sum()] = np.linalg.svd(x.T @ _SYSY @ x, compute_uv=False)
    return _clamp(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def negativity(rho: np.ndarray, focus: int | Iterable[int] = 0, dims: Sequence[int] = QUBITS3) -> float:
    """``||rho^{T_focus}||_1 - 1``, equal to 1 for a Bell pair."""
    rho = check_density(rho, dims)
    focus, _ = bipartition(focus, len(dims))
    return _clamp(trace_norm(partial_transpose(rho, dims, focus)) - 1.0)


def linear_entropy(rho_a: np.ndarray) -> float:
    """``2 (1 - tr rho_a^2)`` for a single qubit; 1 for the maximally mixed state."""
    rho_a = check_density(rho_a, (2,))
    return _clamp(2.0 * (1.0 - np.real(np.trace(rho_a @ rho_a))))


def reduced_qubit(psi: np.ndarray, focus: int) -> np.ndarray:
    """Single-qubit marginal of a three-qubit pure state (no normalization check)."""
    t = np.moveaxis(np.asarray(psi).reshape(2, 2, 2), focus, 0).reshape(2, 4)
    return t @ t.conj().T


def pure_sq_concurrence(psi: np.ndarray, focus: int = 0) -> float:
    """Squared concurrence between qubit ``focus`` and the other two, ``4 det rho_focus``."""
    psi = check_pure(psi, QUBITS3)
    (f,), _ = bipartition(focus, 3)
    return _clamp(4.0 * np.linalg.det(reduced_qubit(psi, f)).real)


def pure_negativity_equals_concurrence_check(psi: np.ndarray, focus: int = 0, tol: float = 1e-9) -> bool:
    """Whether negativity and concurrence coincide across ``focus | rest`` for a pure state."""
    psi = check_pure(psi, QUBITS3)
    n = negativity(np.outer(psi, psi.conj()), focus)
    return abs(n - np.sqrt(pure_sq_concurrence(psi, focus))) < tol
