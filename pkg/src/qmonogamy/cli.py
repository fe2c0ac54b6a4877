"""Command-line interface: ``qmonogamy {sweep,table1,measure}``."""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence

from .channels import apply_local, make_channel
from .errors import ContractError, DomainError, InvariantError, UnsupportedRankError, UsageError
from .linalg import numerical_rank
from .measures import negativity
from .monogamy import FOCI, monogamy_report, pairwise_squares
from .states import projector
from .sweep import FAMILY_ARITY, RANK2_COMBOS, StateSpec, SweepConfig, emit_csv, format_csv, make_state, run_sweep, table1

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_INTERNAL = 0, 2, 3, 4
DEFAULT_CHANNEL = {"ghz": "pd", "w": "ad", "custom": "pd"}


def load_config(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment. Keys use flag spelling."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def parse_coeffs(text: str) -> tuple[complex, ...]:
    try:
        return tuple(complex(tok.strip().replace(" ", "")) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise UsageError(f"cannot parse coefficients {text!r}") from None


def _state_spec(args) -> StateSpec:
    family = args.state
    coeffs = parse_coeffs(args.coeffs) if args.coeffs else (1.0,) * FAMILY_ARITY[family]
    return StateSpec(family, coeffs)


def _channel(args) -> str:
    return args.channel or DEFAULT_CHANNEL[args.state]


def _add_config_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="file of 'key = value' lines supplying any flag of this command")


def _add_state_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", choices=sorted(FAMILY_ARITY), default="ghz", help="state family")
    p.add_argument("--coeffs", help="comma-separated (complex) coefficients, e.g. '1,2,3' or '0.2,1'")
    p.add_argument("--channel", choices=["pd", "ad", "dep"], help="local channel (default: rank-2 partner of the family)")
    p.add_argument("--samples", type=int, default=4000, help="Fibonacci lattice size for the envelope")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmonogamy", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="sweep the damping probability and write CSV")
    _add_state_flags(sw)
    sw.add_argument("--p-start", type=float, default=0.0)
    sw.add_argument("--p-stop", type=float, default=1.0)
    sw.add_argument("--p-steps", type=int, default=101)
    sw.add_argument("--workers", type=int, default=1, help="processes for grid points")
    sw.add_argument("--out", help="CSV path (default: stdout)")
    _add_config_flag(sw)

    t1 = sub.add_parser("table1", help="rank of GHZ/W after local DEP/PD/AD")
    t1.add_argument("--p-sample", type=float, default=0.5)
    _add_config_flag(t1)

    me = sub.add_parser("measure", help="one-shot monogamy report at a single p")
    _add_state_flags(me)
    me.add_argument("--p", type=float, default=0.0)
    _add_config_flag(me)
    return parser


def _parse(argv: Sequence[str] | None) -> argparse.Namespace:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        # config entries act as flags placed before the explicit ones, so the command line wins
        extra = []
        for key, value in load_config(args.config).items():
            if key != "config":
                extra += [f"--{key.replace('_', '-')}", value]
        i = argv.index(args.command)
        args = parser.parse_args(argv[: i + 1] + extra + argv[i + 1 :])
    return args


def _cmd_sweep(args) -> None:
    config = SweepConfig(
        state=_state_spec(args),
        channel=_channel(args),
        p_start=args.p_start,
        p_stop=args.p_stop,
        p_steps=args.p_steps,
        samples=args.samples,
        seed=args.seed,
        output_path=args.out,
        workers=args.workers,
    )
    rows = run_sweep(config)
    if args.out:
        try:
            emit_csv(rows, args.out)
        except OSError as exc:
            raise DomainError(str(exc)) from exc
    else:
        sys.stdout.write(format_csv(rows))


def _cmd_measure(args) -> None:
    spec, channel = _state_spec(args), _channel(args)
    rho = apply_local([make_channel(channel, args.p)] * 3, projector(make_state(spec)))
    rank = numerical_rank(rho)
    print(f"state    {spec.label}")
    print(f"channel  {channel}  p={args.p:g}")
    print(f"rank     {rank}")
    print(f"N_A_BC   {negativity(rho, 0):.12g}")
    pw = pairwise_squares(rho)
    for (i, j), (c2, n2) in pw.items():
        print(f"{FOCI[i]}{FOCI[j]}       C2={c2:.12g}  N2={n2:.12g}")
    if rank > 2:
        print("roof     unavailable (rank > 2)")
        return
    if (channel, spec.family) not in RANK2_COMBOS and spec.family != "custom" and rank == 2:
        print("note     rank-2 output outside the standard channel/family pairs")
    rep = monogamy_report(rho, args.p, spec.label, samples=args.samples, seed=args.seed)
    for t in rep.per_focus:
        print(
            f"focus {FOCI[t.focus]}  roof={t.roof:.12g}  margin_c={t.margin_c:.3e}  margin_n={t.margin_n:.3e}"
        )
    print(f"tau_c    {rep.tau_c:.12g}")
    print(f"tau_n    {rep.tau_n:.12g}")


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = _parse(argv)
        if args.command == "sweep":
            _cmd_sweep(args)
        elif args.command == "table1":
            print(table1(args.p_sample))
        else:
            _cmd_measure(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ContractError, UnsupportedRankError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
