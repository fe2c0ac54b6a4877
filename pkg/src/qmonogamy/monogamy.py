"""Monogamy margins and residual (three-way) entanglement of three-qubit states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .convexroof import min_sq_concurrence
from .linalg import QUBITS3, partial_trace
from .measures import concurrence_2q, negativity
from .states import check_density

MARGIN_TOL = 1e-6
FOCI = "ABC"


@dataclass(frozen=True)
class FocusTerms:
    """Monogamy bookkeeping for one focus qubit X with partners Y < Z."""

    focus: int
    partners: tuple[int, int]
    roof: float
    c2: tuple[float, float]
    n2: tuple[float, float]

    @property
    def margin_c(self) -> float:
        return self.roof - sum(self.c2)

    @property
    def margin_n(self) -> float:
        return self.roof - sum(self.n2)

    @property
    def tau_c(self) -> float:
        return _denoise(self.margin_c)

    @property
    def tau_n(self) -> float:
        return _denoise(self.margin_n)


@dataclass(frozen=True)
class MonogamyReport:
    per_focus: tuple[FocusTerms, FocusTerms, FocusTerms]
    p: float | None = None
    state_label: str = ""

    @property
    def tau_c(self) -> float:
        """Concurrence residual averaged over the three foci."""
        return float(np.mean([t.tau_c for t in self.per_focus]))

    @property
    def tau_n(self) -> float:
        """Negativity residual averaged over the three foci."""
        return float(np.mean([t.tau_n for t in self.per_focus]))

    def margins(self) -> np.ndarray:
        """Raw margins ``[c_A, c_B, c_C, n_A, n_B, n_C]``."""
        return np.array([t.margin_c for t in self.per_focus] + [t.margin_n for t in self.per_focus])


def _denoise(margin: float) -> float:
    # small negative slack is eigensolver noise; larger violations stay visible
    return 0.0 if -MARGIN_TOL < margin < 0.0 else float(margin)


def pairwise_squares(rho: np.ndarray) -> dict[tuple[int, int], tuple[float, float]]:
    """``{(i, j): (C_ij^2, N_ij^2)}`` for the three two-qubit marginals."""
    rho = check_density(rho, QUBITS3)
    out = {}
    for pair in ((0, 1), (0, 2), (1, 2)):
        rho2 = partial_trace(rho, QUBITS3, pair)
        out[pair] = (concurrence_2q(rho2) ** 2, negativity(rho2, 0, (2, 2)) ** 2)
    return out


def monogamy_report(rho: np.ndarray, p: float | None = None, state_label: str = "", **roof_kwargs) -> MonogamyReport:
    """Per-focus convex roofs, pairwise squared measures, margins and residuals.

    ``roof_kwargs`` are forwarded to :func:`min_sq_concurrence`. The negativity
    roof is the same number (see :func:`~qmonogamy.convexroof.min_sq_negativity`).
    """
    rho = check_density(rho, QUBITS3)
    pairs = pairwise_squares(rho)
    terms = []
    for x in range(3):
        y, z = (i for i in range(3) if i != x)
        roof = min_sq_concurrence(rho, x, **roof_kwargs).value
        pxy, pxz = pairs[tuple(sorted((x, y)))], pairs[tuple(sorted((x, z)))]
        terms.append(FocusTerms(x, (y, z), roof, (pxy[0], pxz[0]), (pxy[1], pxz[1])))
    return MonogamyReport(tuple(terms), p, state_label)


def residual_c(rho: np.ndarray, **kwargs) -> MonogamyReport:
    """Report whose ``tau_c`` is the focus-averaged concurrence residual."""
    return monogamy_report(rho, **kwargs)


def residual_n(rho: np.ndarray, **kwargs) -> MonogamyReport:
    """Report whose ``tau_n`` is the focus-averaged negativity residual."""
    return monogamy_report(rho, **kwargs)


def inequality_audit(rho: np.ndarray, tol: float = MARGIN_TOL, **kwargs) -> tuple[np.ndarray, bool]:
    """All six monogamy margins and whether none is below ``-tol``."""
    margins = monogamy_report(rho, **kwargs).margins()
    return margins, bool(np.all(margins >= -tol))
