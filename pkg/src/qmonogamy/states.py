"""Pure states, density matrices and their validity checks."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import ContractError, DomainError, PositivityError, ShapeError
from .linalg import HERM_TOL, QUBITS3, hermitian_eig, is_hermitian

NORM_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-8


def normalize(amps: Sequence[complex]) -> np.ndarray:
    psi = np.asarray(amps, dtype=complex).ravel()
    nrm = np.linalg.norm(psi)
    if nrm == 0 or not np.isfinite(nrm):
        raise DomainError("cannot normalize a zero or non-finite amplitude vector")
    return psi / nrm


def basis_state(bits: str) -> np.ndarray:
    """Computational basis ket, e.g. ``basis_state("001")``."""
    psi = np.zeros(2 ** len(bits), dtype=complex)
    psi[int(bits, 2)] = 1.0
    return psi


def ghz(a: complex = 1.0, b: complex = 1.0) -> np.ndarray:
    """Normalized ``a|000> + b|111>``."""
    return normalize(a * basis_state("000") + b * basis_state("111"))


def w_state(alpha: complex = 1.0, beta: complex = 1.0, gamma: complex = 1.0) -> np.ndarray:
    """Normalized ``alpha|001> + beta|010> + gamma|100>``."""
    return normalize(alpha * basis_state("001") + beta * basis_state("010") + gamma * basis_state("100"))


def check_pure(psi: np.ndarray, dims: Sequence[int] = QUBITS3) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or psi.size != int(np.prod(dims)):
        raise ShapeError(f"state vector of size {psi.size} does not match dims {tuple(dims)}")
    if abs(np.vdot(psi, psi).real - 1.0) > NORM_TOL:
        raise ContractError("state vector is not normalized")
    return psi


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def check_density(rho: np.ndarray, dims: Sequence[int] = QUBITS3) -> np.ndarray:
    """Return ``rho`` as a complex array after checking it is a valid density matrix.

    Hermitian to 1e-10, unit trace to 1e-10, eigenvalues >= -1e-8.
    """
    rho = np.asarray(rho, dtype=complex)
    d = int(np.prod(dims))
    if rho.shape != (d, d):
        raise ShapeError(f"density matrix of shape {rho.shape} does not match dims {tuple(dims)}")
    if not np.all(np.isfinite(rho)):
        raise ContractError("density matrix has non-finite entries")
    if not is_hermitian(rho, HERM_TOL):
        raise ContractError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > TRACE_TOL:
        raise ContractError(f"density matrix has trace {np.trace(rho).real!r}")
    if hermitian_eig(rho)[0][-1] < -POSITIVITY_TOL:
        raise PositivityError("density matrix has a negative eigenvalue")
    return rho


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_pure(d: int, rng: np.random.Generator) -> np.ndarray:
    return normalize(rng.standard_normal(d) + 1j * rng.standard_normal(d))


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density matrix ``G G^dag / tr`` with ``G`` a ``d x rank`` Ginibre matrix."""
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real
