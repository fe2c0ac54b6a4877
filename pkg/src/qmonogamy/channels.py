"""Single-qubit Kraus channels acting locally and independently on three qubits."""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DomainError, InvariantError, MonogamyError
from .linalg import QUBITS3, kron, numerical_rank
from .states import check_density, ghz, projector, w_state

COMPLETENESS_TOL = 1e-12

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_P0 = np.diag([1, 0]).astype(complex)
_P1 = np.diag([0, 1]).astype(complex)
_LOWER = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|


@dataclass(frozen=True)
class KrausChannel:
    """Single-qubit channel ``rho -> sum_i E_i rho E_i^dag``."""

    ops: tuple[np.ndarray, ...]
    label: str
    p: float

    def __post_init__(self):
        ops = tuple(np.asarray(e, dtype=complex) for e in self.ops)
        if not ops or any(e.shape != (2, 2) for e in ops):
            raise ContractError("Kraus operators must be a nonempty list of 2x2 matrices")
        object.__setattr__(self, "ops", ops)
        err = np.max(np.abs(self.completeness() - _I))
        if err > COMPLETENESS_TOL:
            raise ContractError(f"{self.label} channel is not trace preserving (error {err:.2e})")

    def completeness(self) -> np.ndarray:
        """``sum_i E_i^dag E_i``; equals the identity for a trace-preserving map."""
        return sum(e.conj().T @ e for e in self.ops)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(e @ rho @ e.conj().T for e in self.ops)


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"damping probability must lie in [0, 1], got {p!r}")
    return p


def amplitude_damping(p: float) -> KrausChannel:
    p = _check_p(p)
    return KrausChannel((_P0 + np.sqrt(1 - p) * _P1, np.sqrt(p) * _LOWER), "ad", p)


def phase_damping(p: float) -> KrausChannel:
    p = _check_p(p)
    return KrausChannel((np.sqrt(1 - p) * _I, np.sqrt(p) * _P0, np.sqrt(p) * _P1), "pd", p)


def depolarizing(p: float) -> KrausChannel:
    """Pauli-twirl form ``(1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z)``; ``p = 3/4`` is fully depolarizing."""
    p = _check_p(p)
    s = np.sqrt(p / 3)
    return KrausChannel((np.sqrt(1 - p) * _I, s * _X, s * _Y, s * _Z), "dep", p)


CHANNELS = {"ad": amplitude_damping, "pd": phase_damping, "dep": depolarizing}


def make_channel(name: str, p: float) -> KrausChannel:
    try:
        factory = CHANNELS[name.lower()]
    except KeyError:
        raise DomainError(f"unknown channel {name!r}; expected one of {sorted(CHANNELS)}") from None
    return factory(p)


def markov_probability(gamma: float, t: float | np.ndarray) -> float | np.ndarray:
    """Damping probability ``1 - exp(-gamma t)`` of a Markovian environment."""
    if gamma < 0:
        raise DomainError("decay rate must be non-negative")
    return -np.expm1(-gamma * np.asarray(t, dtype=float))


def apply_local(channels: Sequence[KrausChannel], rho: np.ndarray) -> np.ndarray:
    """Apply ``channels[k]`` independently to qubit ``k`` of a three-qubit state.

    The full product Kraus sum is evaluated directly on the 8x8 matrix.
    """
    if len(channels) != 3:
        raise ContractError(f"need one channel per qubit (3), got {len(channels)}")
    rho = check_density(rho, QUBITS3)
    out = np.zeros_like(rho)
    for ops in itertools.product(*(ch.ops for ch in channels)):
        k = kron(*ops)
        out += k @ rho @ k.conj().T
    out = 0.5 * (out + out.conj().T)
    try:
        return check_density(out, QUBITS3)
    except MonogamyError as exc:
        raise InvariantError(f"channel output is not a valid state: {exc}") from exc


def rank_table(p_sample: float = 0.5) -> dict[tuple[str, str], int]:
    """Numerical rank of GHZ and W after each channel acts locally on every qubit."""
    if not 0.0 < p_sample < 1.0:
        raise DomainError("sample probability must lie strictly between 0 and 1")
    states = {"ghz": projector(ghz()), "w": projector(w_state())}
    table = {}
    for name in ("dep", "pd", "ad"):
        ch = make_channel(name, p_sample)
        for label, rho in states.items():
            table[name, label] = numerical_rank(apply_local([ch] * 3, rho))
    return table
