"""Dense linear algebra on small multi-qubit operators.

Subsystems are ordered big-endian: subsystem 0 is the leftmost tensor
factor, so the basis label ``|abc>`` maps to index ``4a + 2b + c``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from functools import reduce

import numpy as np

from .errors import ContractError, PositivityError, ShapeError

HERM_TOL = 1e-10
EIG_RESIDUAL_TOL = 1e-9
RANK_TOL = 1e-8

QUBITS3 = (2, 2, 2)


def kron(*ops: np.ndarray) -> np.ndarray:
    """Tensor product of any number of operators (or vectors), left to right."""
    if not ops:
        raise ShapeError("kron needs at least one operand")
    return reduce(np.kron, (np.asarray(op) for op in ops))


def _check_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return m


def _check_shape(rho: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    rho = _check_square(rho)
    if int(np.prod(dims)) != rho.shape[0]:
        raise ShapeError(f"dims {tuple(dims)} do not match matrix dimension {rho.shape[0]}")
    return rho


def subsystem_set(sys: int | Iterable[int], n: int) -> tuple[int, ...]:
    """Normalize a subsystem selection to a sorted tuple, validating indices."""
    idx = (sys,) if isinstance(sys, (int, np.integer)) else tuple(sys)
    out = tuple(sorted(set(int(i) for i in idx)))
    if len(out) != len(idx):
        raise ShapeError(f"repeated subsystem index in {idx}")
    if any(i < 0 or i >= n for i in out):
        raise ShapeError(f"subsystem index out of range in {idx} for {n} subsystems")
    return out


def bipartition(focus: int | Iterable[int], n: int = 3) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Return ``(focus, complement)`` as disjoint sorted index tuples covering ``range(n)``."""
    f = subsystem_set(focus, n)
    if not f:
        raise ShapeError("focus of a bipartition must be nonempty")
    return f, tuple(i for i in range(n) if i not in f)


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: int | Iterable[int]) -> np.ndarray:
    """Reduced operator on the subsystems in ``keep`` (kept in ascending order).

    Keeping no subsystem returns the 1x1 matrix holding the full trace.
    """
    rho = _check_shape(rho, dims)
    n = len(dims)
    keep = subsystem_set(keep, n)
    t = rho.reshape(tuple(dims) * 2)
    # einsum labels: row index i, column index n+i; traced subsystems share a label
    row = list(range(n))
    col = [i if i not in keep else n + i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    d = int(np.prod([dims[i] for i in keep]))
    return np.einsum(t, row + col, out).reshape(d, d)


def partial_transpose(rho: np.ndarray, dims: Sequence[int], sys: int | Iterable[int]) -> np.ndarray:
    """Transpose the indices belonging to ``sys`` and leave the rest untouched."""
    rho = _check_shape(rho, dims)
    n = len(dims)
    sys = subsystem_set(sys, n)
    t = rho.reshape(tuple(dims) * 2)
    axes = list(range(2 * n))
    for i in sys:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return t.transpose(axes).reshape(rho.shape)


def is_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def hermitian_eig(m: np.ndarray, tol: float = HERM_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues in descending order.

    Returns ``(w, v)`` with ``m @ v[:, k] == w[k] * v[:, k]``. Raises
    ContractError if ``m`` deviates from Hermitian by more than ``tol``
    in any entry.
    """
    m = _check_square(m)
    if not is_hermitian(m, tol):
        raise ContractError(f"matrix is not Hermitian within {tol:g}")
    # symmetrize so LAPACK only sees the part we certified
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return w[::-1], v[:, ::-1]


def trace_norm(m: np.ndarray) -> float:
    m = _check_square(m)
    if is_hermitian(m):
        return float(np.sum(np.abs(hermitian_eig(m)[0])))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def numerical_rank(rho: np.ndarray, tol_fraction: float = RANK_TOL) -> int:
    """Number of eigenvalues above ``tol_fraction * trace(rho)``.

    Raises PositivityError when an eigenvalue lies below ``-tol_fraction * trace``.
    """
    w = hermitian_eig(rho)[0]
    tr = float(np.sum(w))
    if tr <= 0:
        raise PositivityError(f"non-positive trace {tr:g}")
    if w[-1] < -tol_fraction * tr:
        raise PositivityError(f"eigenvalue {w[-1]:g} is significantly negative")
    return int(np.count_nonzero(w > tol_fraction * tr))
