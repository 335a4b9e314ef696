"""Command-line front end.

Subcommands: ``ggm`` (one row), ``sweep`` (CSV over a range of m),
``frustration`` (JSON report), ``verify`` (closed-form cross-checks) and
``state dump|load``.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 resource cap, 4 degenerate frustration denominator.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import models as M
from .errors import DegenerateDenominatorError, DomainError, ResourceCapError
from .frustration import frustration_degree, isingize, load_hamiltonian
from .ggm import DEFAULT_MAX_SITES, ggm
from .state import Pairing, PureState, bitstring, dump_state, load_state
from .verify import run_checks

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAP, EXIT_DEGENERATE = 0, 1, 2, 3, 4
CLI_MODELS = ("ising-gas", "rvb", "plaquette", "mg", "ss", "ising-ring")
CSV_HEADER = ("model", "n", "ggm_numeric", "ggm_analytic", "dominant_cut_size", "wall_time_ms")


@dataclass(frozen=True)
class SweepRow:
    model: str
    n: int
    ggm_numeric: float
    ggm_analytic: float | None
    dominant_cut_size: int
    wall_time_ms: int

    def cells(self) -> list[str]:
        return [
            self.model,
            str(self.n),
            _real(self.ggm_numeric),
            "" if self.ggm_analytic is None else _real(self.ggm_analytic),
            str(self.dominant_cut_size),
            str(self.wall_time_ms),
        ]


def _real(x: float) -> str:
    return f"{float(x):.12g}"


def _parse_pairs(text: str) -> Pairing:
    try:
        pairs = [tuple(int(v) for v in tok.split(":")) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise DomainError(f"cannot parse pairs {text!r}; expected i:j,k:l") from exc
    if any(len(p) != 2 for p in pairs):
        raise DomainError(f"cannot parse pairs {text!r}; expected i:j,k:l")
    return Pairing(pairs)


def _need_m(args) -> int:
    if args.m is None:
        raise DomainError(f"--model {args.model} needs --m")
    return args.m


def _plaquette_layout(args, m: int | None = None) -> M.PlaquetteLayout:
    count = m if m is not None else args.plaquettes
    if count is None:
        if args.m is None:
            raise DomainError("--model plaquette needs --plaquettes or --m")
        side = args.m
        v = args.density_v if args.density_v is not None else (side * side) // 2
        return M.plaquette_square(side, v)
    if count < 1:
        raise DomainError("need at least one plaquette")
    v = args.density_v if args.density_v is not None else (None if count == 1 else count // 2)
    return M.plaquette_chain(count, v)


def build_state(args, m: int | None = None) -> tuple[PureState, float | None, object]:
    """State, closed-form GGM (or None) and a symmetry cut list (or None) for the model flags."""
    model = args.model
    if model == "plaquette":
        layout = _plaquette_layout(args, m)
        return M.plaquette_state(layout), None, lambda: M.plaquette_cuts(layout)
    if model == "ss":
        if m is None and args.pairs:
            pairs = _parse_pairs(args.pairs)
            n = max(pairs.sites()) + 1
        else:
            k = m if m is not None else _need_m(args)
            pairs, n = Pairing((2 * i, 2 * i + 1) for i in range(k)), 2 * k
        return M.ss_ground_state(pairs, n), 0.0, None
    m = m if m is not None else _need_m(args)
    if model == "ising-gas":
        lam = Fraction(args.lam)
        p = M.GasParams(m, lam)
        analytic = float(M.ising_gas_ggm_analytic(m)) if lam == 0 else None
        return M.ising_gas_state(p), analytic, lambda: M.ising_gas_cuts(m)
    if model == "rvb":
        return M.rvb_state(m), None, None
    if model == "mg":
        alpha = complex(args.alpha_re, args.alpha_im)
        analytic = float(M.mg_ggm_analytic(m)) if alpha == 1 else None
        return M.mg_cooled_state(M.MgParams(m, alpha)), analytic, None
    if model == "ising-ring":
        return M.ising_ring_cooled_state(m), M.ising_ring_ggm_analytic(m), None
    raise DomainError(f"unknown model {model!r}")


def compute_row(args, m: int | None = None) -> SweepRow:
    start = time.perf_counter()
    s, analytic, sym_cuts = build_state(args, m)
    cuts = None
    if args.cuts == "symmetric":
        if sym_cuts is None:
            raise DomainError(f"--cuts symmetric is not available for model {args.model}")
        cuts = sym_cuts()
        count = len(cuts)
    else:
        count = (1 << (s.num_sites - 1)) - 1
    if args.max_cuts is not None and count > args.max_cuts:
        raise ResourceCapError(f"{count} cuts exceeds --max-cuts {args.max_cuts}")
    r = ggm(s, cuts, max_sites=args.max_sites)
    elapsed = 0 if args.no_timing else int(round((time.perf_counter() - start) * 1000))
    return SweepRow(args.model, s.num_sites, r.ggm, analytic, r.dominant.size, elapsed)


def _csv_text(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(row.cells())
    return buf.getvalue()


def _parse_range(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError as exc:
        raise DomainError(f"cannot parse range {text!r}; expected lo:hi") from exc
    if hi < lo:
        raise DomainError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _open_output(path: str):
    if path == "-":
        return sys.stdout
    try:
        return open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise DomainError(f"cannot write {path}: {exc.strerror}") from exc


def cmd_ggm(args) -> int:
    sys.stdout.write(_csv_text([compute_row(args)]))
    return EXIT_OK


def cmd_sweep(args) -> int:
    ms = _parse_range(args.m_range)
    out = _open_output(args.output)
    try:
        rows = [compute_row(args, m) for m in ms]
        out.write(_csv_text(rows))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _num(x):
    return float(x)


def _exact(x):
    return str(x) if isinstance(x, Fraction) else None


def _frustration_hamiltonian(args):
    if args.hamiltonian:
        try:
            return load_hamiltonian(args.hamiltonian)
        except OSError as exc:
            raise DomainError(f"cannot read {args.hamiltonian}: {exc.strerror}") from exc
    if not args.model:
        raise DomainError("give a Hamiltonian file or --model")
    tag = args.model
    params: dict = {}
    for key in ("m", "j", "j1", "j2", "j3", "lx", "ly", "rows", "cols"):
        val = getattr(args, key)
        if val is not None:
            params[key] = Fraction(val) if key in ("j", "j1", "j2", "j3") else int(val)
    if tag == "ising-gas":
        params["lam"] = Fraction(args.lam)
    if tag == "plaquette":
        if args.plaquettes is not None and "cols" not in params:
            params["cols"] = args.plaquettes
        params["periodic"] = args.periodic
    return M.model_hamiltonian(tag, **params)


def frustration_report(h) -> dict:
    rep = frustration_degree(isingize(h))
    n = h.num_sites
    return {
        "degree": _num(rep.degree),
        "degree_exact": _exact(rep.degree),
        "ground_energy": _num(rep.ground.energy),
        "ground_energy_exact": _exact(rep.ground.energy),
        "degeneracy": rep.degeneracy,
        "classification_varies": rep.classification_varies,
        "per_ground_state": [
            {"config": bitstring(cfg, n), "positive": _num(p), "negative": _num(q), "ratio": _num(r)}
            for cfg, p, q, r in rep.per_ground_state
        ],
    }


def cmd_frustration(args) -> int:
    report = frustration_report(_frustration_hamiltonian(args))
    text = json.dumps(report, indent=2) + "\n"
    out = _open_output(args.output)
    try:
        out.write(text)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_checks(args.scope, args.max_m, rvb_full=args.rvb_full)
    failed = [c for c in checks if not c.passed]
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  delta={c.delta:.3e}  {c.detail}")
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    if failed:
        print("failed: " + "; ".join(c.name for c in failed))
        return EXIT_VERIFY
    return EXIT_OK


def cmd_state_dump(args) -> int:
    s, _, _ = build_state(args)
    if args.output == "-":
        from .state import format_state

        sys.stdout.write(format_state(s))
        return EXIT_OK
    try:
        dump_state(s, args.output)
    except OSError as exc:
        raise DomainError(f"cannot write {args.output}: {exc.strerror}") from exc
    return EXIT_OK


def cmd_state_load(args) -> int:
    try:
        s = load_state(args.path)
    except OSError as exc:
        raise DomainError(f"cannot read {args.path}: {exc.strerror}") from exc
    info = {"num_sites": s.num_sites, "support": len(s), "norm": s.norm()}
    if args.ggm:
        if s.num_sites > args.max_sites:
            raise ResourceCapError(f"{s.num_sites} sites exceeds --max-sites {args.max_sites}")
        r = ggm(s, max_sites=args.max_sites)
        info["ggm"] = r.ggm
        info["dominant"] = list(r.dominant.part_a)
    sys.stdout.write(json.dumps(info, indent=2) + "\n")
    return EXIT_OK


def _model_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--model", choices=CLI_MODELS, required=required)
    p.add_argument("--m", type=int)
    p.add_argument("--lambda", dest="lam", default="0", help="filling offset, e.g. 1/3")
    p.add_argument("--alpha-re", type=float, default=1.0)
    p.add_argument("--alpha-im", type=float, default=0.0)
    p.add_argument("--plaquettes", type=int, help="number of plaquettes in a 1xP chain")
    p.add_argument("--density-v", type=int, help="number of vertical-singlet plaquettes")
    p.add_argument("--pairs", help="dimer pairs for the ss model, e.g. 0:3,1:2")


def _cut_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cuts", choices=("full", "symmetric"), default="full")
    p.add_argument("--max-sites", type=int, default=DEFAULT_MAX_SITES)
    p.add_argument("--max-cuts", type=int)
    p.add_argument("--no-timing", action="store_true", help="write wall_time_ms as 0 for reproducible output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frustrant", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ggm", help="GGM of one model state")
    _model_flags(p)
    _cut_flags(p)
    p.set_defaults(func=cmd_ggm)

    p = sub.add_parser("sweep", help="GGM over a range of m, written as CSV")
    _model_flags(p)
    _cut_flags(p)
    p.add_argument("--m-range", required=True, help="inclusive range lo:hi")
    p.add_argument("--output", required=True, help="CSV path or - for stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("frustration", help="frustration degree report as JSON")
    p.add_argument("hamiltonian", nargs="?", help="Hamiltonian text file")
    p.add_argument("--model", choices=CLI_MODELS)
    p.add_argument("--m", type=int)
    p.add_argument("--lambda", dest="lam", default="0")
    p.add_argument("--plaquettes", type=int)
    for key in ("j", "j1", "j2", "j3"):
        p.add_argument(f"--{key}")
    for key in ("lx", "ly", "rows", "cols"):
        p.add_argument(f"--{key}", type=int)
    p.add_argument("--periodic", action="store_true")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_frustration)

    p = sub.add_parser("verify", help="numeric versus closed-form checks")
    p.add_argument("--scope", choices=("gas", "mg", "ring", "frustration", "ss", "rvb", "plaquette", "all"), default="all")
    p.add_argument("--max-m", type=int, default=4)
    p.add_argument("--rvb-full", action="store_true", help="include the m=8 RVB point")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("state", help="export or inspect states")
    ssub = p.add_subparsers(dest="state_command", required=True)
    d = ssub.add_parser("dump", help="write a model state to a file")
    _model_flags(d)
    d.add_argument("--output", required=True)
    d.set_defaults(func=cmd_state_dump)
    ld = ssub.add_parser("load", help="read a state file and summarize it")
    ld.add_argument("path")
    ld.add_argument("--ggm", action="store_true")
    ld.add_argument("--max-sites", type=int, default=DEFAULT_MAX_SITES)
    ld.set_defaults(func=cmd_state_load)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DegenerateDenominatorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
