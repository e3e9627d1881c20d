"""Command-line interface: ``zcnoma <subcommand> [flags]``.

Exit codes: 0 success, 2 usage or invalid input, 1 runtime failure.
JSON documents carry ``"schema": 1`` and a ``"kind"`` naming the subcommand.

Complex flags use Python's literal grammar without spaces: ``1``, ``-0.5``,
``2j``, ``3+4j``, ``1-1j``. SNR lists are in dB, either ``a,b,c`` or
``start:step:stop`` with ``stop`` included.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .channel import ChannelError, ComplexZcChannel, RealZcInstance, decompose, sum_constellation
from .distance import DistanceError, min_distance_bruteforce, min_distance_farey
from .farey import FareyError, extended_farey_sequence, farey_intervals, farey_sequence, partition_intervals
from .sim import CSV_HEADER, FadingSpec, SimConfig, run_ber
from .solver import oracle_solve, solve

SCHEMA = 1
CONSTELLATION_HEADER = ("i", "q")


class UsageError(Exception):
    """Flag combination rejected before any computation."""


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def parse_snr(text: str) -> tuple[float, ...]:
    try:
        if ":" in text:
            start, step, stop = (float(v) for v in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            return tuple(round(start + k * step, 12) for k in range(n))
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad SNR grid: {text!r}") from None


def parse_triple(text: str) -> tuple[complex, complex, complex]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated values, got {text!r}")
    return tuple(parse_complex(p) for p in parts)


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps({"schema": SCHEMA, **doc}, indent=2) + "\n"
    _write(text, out)


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _add_channel_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--h11", type=parse_complex)
    p.add_argument("--h21", type=parse_complex)
    p.add_argument("--h22", type=parse_complex)
    p.add_argument("--p1", type=float, help="per-rail power of user 1")
    p.add_argument("--p2", type=float, help="per-rail power of user 2")
    p.add_argument("--P1", type=float, help="complex-symbol power of user 1")
    p.add_argument("--P2", type=float, help="complex-symbol power of user 2")
    p.add_argument("--Mp", type=int, help="quadrature PAM order (defaults to M)")
    p.add_argument("--channel", help="JSON channel document")
    p.add_argument("--M", type=int, help="PAM order")
    p.add_argument("-o", "--out", help="output path (default stdout)")


def _rails(args) -> list[tuple[str, RealZcInstance]]:
    """Resolve channel flags into labelled real instances."""
    if args.channel:
        doc = json.loads(Path(args.channel).read_text(encoding="utf-8"))
        inph, quad = decompose(ComplexZcChannel.from_json(doc))
        return [("inphase", inph), ("quadrature", quad)]
    if None in (args.h11, args.h21, args.h22) or args.M is None:
        raise UsageError("need --h11, --h21, --h22 and --M (or --channel)")
    real_powers = args.p1 is not None or args.p2 is not None
    complex_powers = args.P1 is not None or args.P2 is not None
    if real_powers and complex_powers:
        raise UsageError("give either --p1/--p2 or --P1/--P2, not both")
    if complex_powers:
        if args.P1 is None or args.P2 is None:
            raise UsageError("--P1 and --P2 go together")
        ch = ComplexZcChannel(args.h11, args.h21, args.h22, args.P1, args.P2,
                              args.M, args.Mp if args.Mp is not None else args.M)
        inph, quad = decompose(ch)
        return [("inphase", inph), ("quadrature", quad)]
    if args.Mp is not None:
        raise UsageError("--Mp needs --P1/--P2")
    p1 = 1.0 if args.p1 is None else args.p1
    p2 = 1.0 if args.p2 is None else args.p2
    inst = RealZcInstance(abs(args.h11), abs(args.h21), abs(args.h22), p1, p2, args.M)
    return [("real", inst)]


def _instance_json(inst: RealZcInstance) -> dict:
    return {"g11": inst.g11, "g21": inst.g21, "g22": inst.g22,
            "p1": inst.p1, "p2": inst.p2, "M": inst.M}


def cmd_solve(args) -> int:
    comps = []
    for rail, inst in _rails(args):
        comps.append({"rail": rail, "instance": _instance_json(inst),
                      "solution": solve(inst).to_json(with_trace=args.trace)})
    _emit({"kind": "solve", "components": comps}, args.out)
    return 0


def cmd_farey(args) -> int:
    if args.K < 1:
        raise UsageError("K must be >= 1")
    doc = {"kind": "farey", "K": args.K}
    if args.partition is not None:
        part = partition_intervals(args.K, args.partition)
        doc["partition"] = {
            "L": part.threshold,
            "u_set": [[str(iv.lo), str(iv.hi)] for iv in part.u_set],
            "v_set": [[str(iv.lo), str(iv.hi)] for iv in part.v_set],
        }
    elif args.intervals:
        doc["intervals"] = [[str(iv.lo), str(iv.hi)] for iv in farey_intervals(args.K)]
    else:
        seq = extended_farey_sequence(args.K) if args.extended else farey_sequence(args.K)
        doc["extended"] = bool(args.extended)
        doc["sequence"] = [str(f) for f in seq]
    _emit(doc, args.out)
    return 0


def cmd_mindist(args) -> int:
    if args.w1 is None or args.w2 is None:
        raise UsageError("need --w1 and --w2")
    comps = []
    for rail, inst in _rails(args):
        entry = {"rail": rail, "instance": _instance_json(inst)}
        if args.method in ("brute", "both"):
            entry["bruteforce"] = min_distance_bruteforce(inst, args.w1, args.w2).to_json()
        if args.method in ("farey", "both"):
            entry["farey"] = min_distance_farey(inst, args.w1, args.w2).to_json()
        comps.append(entry)
    _emit({"kind": "mindist", "components": comps}, args.out)
    return 0


def cmd_oracle(args) -> int:
    if args.grid < 1000:
        raise UsageError("--grid must be at least 1000")
    comps = []
    for rail, inst in _rails(args):
        closed = solve(inst)
        orc = oracle_solve(inst, args.grid)
        comps.append({"rail": rail, "instance": _instance_json(inst),
                      "closed_form": closed.to_json(), "oracle": orc.to_json(),
                      "gap": closed.objective - orc.objective})
    _emit({"kind": "oracle", "components": comps}, args.out)
    return 0


def cmd_ber(args) -> int:
    if (args.vars is None) == (args.gains is None):
        raise UsageError("give exactly one of --vars or --gains")
    if args.vars is not None:
        v = args.vars
        if any(x.imag != 0 for x in v):
            raise UsageError("--vars must be real")
        fading = FadingSpec(variances=tuple(x.real for x in v))
    else:
        fading = FadingSpec(gains=args.gains)
    cfg = SimConfig(args.scheme, args.M, args.Mp if args.Mp is not None else args.M,
                    args.snr, args.trials, args.symbols, args.seed, args.P1, args.P2)
    curve = run_ber(cfg, fading, workers=args.workers)
    _write(curve.to_csv(), args.out)
    if args.out not in (None, "-"):
        meta = {**curve.metadata(), "kind": "ber-meta", "seed": cfg.seed,
                "rng": "numpy Philox4x64, key=seed, counter=[0,0,0,trial]",
                "trials": cfg.trials, "symbols_per_trial": cfg.symbols_per_trial,
                "M": cfg.M, "Mp": cfg.Mp}
        _emit(meta, args.out + ".meta.json")
    log = sys.stderr if args.out in (None, "-") else sys.stdout
    for row in curve.rows():
        print(f"{row[0]} snr={row[2]:g}dB ber={row[3]:.3e} ({row[5]}/{row[4]})", file=log)
    return 0


def cmd_constellation(args) -> int:
    rails = _rails(args)
    if len(rails) == 1:
        rails = rails * 2
    axes = []
    for _, inst in rails:
        sol = solve(inst)
        sc = sum_constellation(inst, sol.w1, sol.w2)
        axes.append(sc.d1_points if args.receiver == 1 else sc.d2)
    i, q = np.meshgrid(axes[0], axes[1], indexing="ij")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CONSTELLATION_HEADER)
    for a, b in zip(i.ravel(), q.ravel()):
        w.writerow([repr(float(a)), repr(float(b))])
    _write(buf.getvalue(), args.out)
    return 0


# --check: validate anything the CLI emits

_JSON_KEYS = {
    "solve": ("components",),
    "farey": ("K",),
    "mindist": ("components",),
    "oracle": ("components",),
    "ber-meta": ("seed", "streams", "snr_db"),
}


def check_file(path: str) -> str:
    """Return a description of a valid CLI output file or raise ValueError."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        if doc.get("schema") != SCHEMA:
            raise ValueError("missing or unknown schema version")
        kind = doc.get("kind")
        if kind not in _JSON_KEYS:
            raise ValueError(f"unknown kind {kind!r}")
        missing = [k for k in _JSON_KEYS[kind] if k not in doc]
        if missing:
            raise ValueError(f"{kind} document lacks {missing}")
        return f"json {kind}"
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ValueError("empty file")
    header, body = tuple(rows[0]), rows[1:]
    if header == CSV_HEADER:
        for r in body:
            if len(r) != len(header):
                raise ValueError(f"ragged row {r}")
            rho, snr, ber = (float(x) for x in r[1:4])
            bits, errors = int(r[4]), int(r[5])
            if not (0 <= errors <= bits and bits > 0 and math.isclose(ber, errors / bits)):
                raise ValueError(f"inconsistent row {r}")
        return f"ber csv ({len(body)} rows)"
    if header == CONSTELLATION_HEADER:
        for r in body:
            float(r[0]), float(r[1])
        return f"constellation csv ({len(body)} points)"
    raise ValueError(f"unrecognised header {header}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zcnoma", description=__doc__.splitlines()[0])
    ap.add_argument("--check", metavar="FILE", help="validate a file produced by this tool and exit")
    sub = ap.add_subparsers(dest="command")

    p = sub.add_parser("solve", help="optimal scaling factors")
    _add_channel_flags(p)
    p.add_argument("--trace", action="store_true", help="include solver trace")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("farey", help="Farey sequences, intervals and partitions")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--extended", action="store_true")
    p.add_argument("--intervals", action="store_true")
    p.add_argument("--partition", type=int, metavar="L")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_farey)

    p = sub.add_parser("mindist", help="minimum distances for given scalings")
    _add_channel_flags(p)
    p.add_argument("--w1", type=float)
    p.add_argument("--w2", type=float)
    p.add_argument("--method", choices=("brute", "farey", "both"), default="both")
    p.set_defaults(func=cmd_mindist)

    p = sub.add_parser("oracle", help="compare closed form with a grid search")
    _add_channel_flags(p)
    p.add_argument("--grid", type=int, default=100_000)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("ber", help="Monte Carlo BER sweep, CSV output")
    p.add_argument("--scheme", choices=("noma", "tdma", "fdma", "crnoma"), required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--Mp", type=int)
    p.add_argument("--vars", type=parse_triple, help="Rayleigh variances v11,v21,v22")
    p.add_argument("--gains", type=parse_triple, help="fixed complex gains h11,h21,h22")
    p.add_argument("--snr", type=parse_snr, required=True, help="dB list or start:step:stop")
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--symbols", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--P1", type=float, default=1.0)
    p.add_argument("--P2", type=float, default=1.0)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_ber)

    p = sub.add_parser("constellation", help="noise-free received points as i,q CSV")
    _add_channel_flags(p)
    p.add_argument("--receiver", type=int, choices=(1, 2), default=1)
    p.set_defaults(func=cmd_constellation)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.check:
        if args.command:
            ap.error("--check takes no subcommand")
        try:
            print(f"ok: {check_file(args.check)}")
            return 0
        except (ValueError, OSError) as exc:
            print(f"invalid: {exc}", file=sys.stderr)
            return 1
    if not args.command:
        ap.error("a subcommand is required")
    try:
        return args.func(args)
    except (UsageError, ChannelError, FareyError, DistanceError, ValueError) as exc:
        # the library validates inputs before doing any work
        print(f"{ap.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"{ap.prog} {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
