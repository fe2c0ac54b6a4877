"""Decoherence sweeps over the damping probability and their CSV output."""

from __future__ import annotations

import csv
import io
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass

import numpy as np

from .channels import apply_local, make_channel, rank_table
from .convexroof import DEFAULT_SAMPLES
from .errors import DomainError, InvariantError, UsageError
from .linalg import numerical_rank
from .measures import negativity
from .monogamy import monogamy_report, pairwise_squares
from .states import normalize, projector

FAMILY_ARITY = {"ghz": 2, "w": 3, "custom": 8}
# (channel, family) pairs that keep GHZ/W states at rank 2
RANK2_COMBOS = {("pd", "ghz"), ("ad", "w")}
CSV_HEADER = "p,N_A_BC,roof_A,roof_B,roof_C,C2_AB,C2_AC,C2_BC,N2_AB,N2_AC,N2_BC,tau_c,tau_n"


@dataclass(frozen=True)
class StateSpec:
    family: str
    coefficients: tuple[complex, ...]

    @property
    def label(self) -> str:
        return f"{self.family}({','.join(_fmt_coeff(c) for c in self.coefficients)})"


def _fmt_coeff(c: complex) -> str:
    c = complex(c)
    return f"{c.real:g}" if c.imag == 0 else f"{c:g}"


@dataclass(frozen=True)
class SweepConfig:
    state: StateSpec
    channel: str = "pd"
    p_start: float = 0.0
    p_stop: float = 1.0
    p_steps: int = 101
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    output_path: str | None = None
    workers: int = 1

    def __post_init__(self):
        if not 0.0 <= self.p_start < self.p_stop <= 1.0:
            raise DomainError(f"need 0 <= p_start < p_stop <= 1, got {self.p_start}, {self.p_stop}")
        if self.p_steps < 2:
            raise DomainError("a sweep needs at least 2 grid points")
        if self.samples < 4:
            raise DomainError("envelope needs at least 4 sphere samples")

    def grid(self) -> np.ndarray:
        return np.linspace(self.p_start, self.p_stop, self.p_steps)

    @property
    def has_roofs(self) -> bool:
        return (self.channel, self.state.family) in RANK2_COMBOS


@dataclass(frozen=True)
class SweepRow:
    p: float
    N_A_BC: float
    roof_A: float | None
    roof_B: float | None
    roof_C: float | None
    C2_AB: float
    C2_AC: float
    C2_BC: float
    N2_AB: float
    N2_AC: float
    N2_BC: float
    tau_c: float | None
    tau_n: float | None


def make_state(spec: StateSpec) -> np.ndarray:
    """Normalized three-qubit state vector for ``spec``.

    ``ghz``: ``a|000> + b|111>``; ``w``: ``alpha|001> + beta|010> + gamma|100>``;
    ``custom``: all eight amplitudes in big-endian order.
    """
    try:
        arity = FAMILY_ARITY[spec.family]
    except KeyError:
        raise UsageError(f"unknown state family {spec.family!r}") from None
    if len(spec.coefficients) != arity:
        raise UsageError(f"{spec.family} takes {arity} coefficients, got {len(spec.coefficients)}")
    amps = np.zeros(8, dtype=complex)
    if spec.family == "ghz":
        amps[[0b000, 0b111]] = spec.coefficients
    elif spec.family == "w":
        amps[[0b001, 0b010, 0b100]] = spec.coefficients
    else:
        amps[:] = spec.coefficients
    return normalize(amps)


def sweep_point(config: SweepConfig, p: float) -> SweepRow:
    """Evaluate every row quantity at a single damping probability."""
    psi = make_state(config.state)
    rho = apply_local([make_channel(config.channel, p)] * 3, projector(psi))
    n_a = negativity(rho, 0)
    if config.has_roofs:
        rank = numerical_rank(rho)
        if rank > 2:
            raise InvariantError(f"{config.channel} on {config.state.family} produced rank {rank} at p={p}")
        rep = monogamy_report(rho, p, config.state.label, samples=config.samples, seed=config.seed)
        roofs = [t.roof for t in rep.per_focus]
        tau_c, tau_n = rep.tau_c, rep.tau_n
    else:
        roofs, tau_c, tau_n = [None] * 3, None, None
    pw = pairwise_squares(rho)
    c2 = [pw[k][0] for k in ((0, 1), (0, 2), (1, 2))]
    n2 = [pw[k][1] for k in ((0, 1), (0, 2), (1, 2))]
    return SweepRow(float(p), n_a, *roofs, *c2, *n2, tau_c, tau_n)


def _point(args):
    return sweep_point(*args)


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    """Rows for every grid point, ordered by ``p``.

    Grid points are independent; with ``workers > 1`` they are evaluated in a
    process pool and collected back in grid order.
    """
    jobs = [(config, p) for p in config.grid()]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_point, jobs))
    else:
        rows = [_point(j) for j in jobs]
    return sorted(rows, key=lambda r: r.p)


def _cell(x: float | None) -> str:
    return "" if x is None else f"{x:.12g}"


def format_csv(rows: Sequence[SweepRow]) -> str:
    if not rows:
        raise UsageError("no rows to write")
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(_cell(x) for x in astuple(row))
    return buf.getvalue()


def emit_csv(rows: Sequence[SweepRow], path: str) -> None:
    text = format_csv(rows)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc


def table1(p_sample: float = 0.5) -> str:
    """Rank of GHZ and W after local DEP/PD/AD, formatted as a 3x2 table."""
    ranks = rank_table(p_sample)
    lines = [f"{'':<5}{'GHZ':>6}{'W':>6}"]
    for ch in ("dep", "pd", "ad"):
        cells = ["2" if ranks[ch, s] == 2 else ">2" if ranks[ch, s] > 2 else str(ranks[ch, s]) for s in ("ghz", "w")]
        lines.append(f"{ch.upper():<5}{cells[0]:>6}{cells[1]:>6}")
    return "\n".join(lines)

