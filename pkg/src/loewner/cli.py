"""Command-line entry point.

Verbs: drive, trace, energy, reverse, verify, gen, resample. All commands
are deterministic functions of (input files, flags, seed); re-runs write
byte-identical output. Exit codes: 0 pass, 1 check failure, 2 input
error, 3 numerical-step error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import files, generators, verify
from .energy import chord_energy
from .errors import InvalidInputError, LoewnerError, SurgeryStepError
from .surgery import GeodesicSpec, reverse_chord
from .tracer import TraceOptions, trace_curve
from .zipper import Chord, compute_driving

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_ERROR = 3


@dataclass(frozen=True)
class ToleranceProfile:
    """Scales the pass ceilings used by the verify report."""

    name: str
    scale: float


PROFILES = {
    "default": ToleranceProfile("default", 1.0),
    "strict": ToleranceProfile("strict", 0.5),
    "loose": ToleranceProfile("loose", 2.0),
}


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8")


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc


def cmd_drive(args) -> int:
    curve = files.chord_from_json(_read(args.chord))
    res = compute_driving(curve)
    if args.out:
        _write(args.out, files.driving_to_json(res.driving))
    print(f"total_t {files.fmt(res.total_t)}")
    print(f"total_hcap {files.fmt(res.total_hcap)}")
    if res.tail_hcap_bound is not None:
        print(f"tail_hcap_bound {files.fmt(res.tail_hcap_bound)}")
    if res.low_resolution:
        print("low_resolution 1")
    if args.chordal:
        if not isinstance(curve, Chord):
            raise InvalidInputError("--chordal needs a closed chord file")
        rep = chord_energy(curve, validate=False)
        print(f"energy {files.fmt(rep.energy)}")
    return EXIT_OK


def cmd_trace(args) -> int:
    driving = files.driving_from_json(_read(args.driving))
    opts = TraceOptions(
        steps_per_sample=args.steps_per_sample, max_step_t=args.max_step_t
    )
    traced = trace_curve(driving, opts)
    if args.out:
        _write(args.out, files.chord_to_json(traced.as_segment()))
    back = compute_driving(traced.as_segment(), validate=False)
    sup = float(
        np.max(
            np.abs(
                back.driving.lam
                - np.interp(back.driving.t, driving.t, driving.lam)
            )
        )
    )
    print(f"vertices {traced.vertices.size}")
    print(f"total_t {files.fmt(float(traced.t[-1]) if traced.t.size else 0.0)}")
    print(f"roundtrip_sup {files.fmt(sup)}")
    return EXIT_OK


def cmd_energy(args) -> int:
    curve = files.chord_from_json(_read(args.chord))
    if not isinstance(curve, Chord):
        raise InvalidInputError("energy needs a closed chord file")
    rep = chord_energy(curve, r_stop=args.r_stop)
    print(f"energy {files.fmt(rep.energy)}")
    print(f"t_used {files.fmt(rep.t_used)}")
    print(f"tail_hcap_bound {files.fmt(rep.tail_hcap_bound)}")
    print(f"resolution {rep.resolution}")
    return EXIT_OK


def cmd_reverse(args) -> int:
    curve = files.chord_from_json(_read(args.chord))
    if not isinstance(curve, Chord):
        raise InvalidInputError("reverse needs a closed chord file")
    ks = [int(s) for s in args.k.split(",") if s]
    if not ks:
        raise InvalidInputError("--k list must be non-empty")
    spec = GeodesicSpec(args.n_samples)
    zipped = compute_driving(curve)
    out_prefix = args.out or "reversed"

    def run(k):
        return reverse_chord(curve, k, spec, zipped=zipped)

    ledgers = []
    failures = []
    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        results = list(pool.map(lambda k: _try_reverse(run, k), ks))
    print("k,energy_forward,energy_reversed,defect,cara_distance_final")
    for k, outcome in zip(ks, results):
        if isinstance(outcome, SurgeryStepError):
            failures.append(k)
            if outcome.ledger is not None:
                ledgers.append((k, outcome.ledger))
            print(f"{k},error,,,{outcome}")
            continue
        rev, ledger = outcome
        ledgers.append((k, ledger))
        _write(f"{out_prefix}_k{k}.json", files.chord_to_json(rev))
        e_fwd = chord_energy(curve, validate=False).energy
        e_rev = chord_energy(rev, validate=False).energy
        cara = ledger.rows[-1].cara_distance
        print(
            f"{k},{files.fmt(e_fwd)},{files.fmt(e_rev)},"
            f"{files.fmt(abs(e_rev - e_fwd))},{files.fmt(cara)}"
        )
    _write(f"{out_prefix}_ledger.csv", files.ledger_to_csv(ledgers))
    return EXIT_NUMERICAL_ERROR if failures else EXIT_OK


def _try_reverse(run, k):
    try:
        return run(k)
    except SurgeryStepError as exc:
        return exc


def cmd_verify(args) -> int:
    if args.suite != "default":
        raise InvalidInputError("only the default suite is shipped")
    profile = PROFILES[args.tolerance_profile]
    results = verify.run_all(seed=args.seed, only=args.only, tol=profile.scale)
    failures = [r for r in results if not r.passed]
    for r in results:
        status = "pass" if r.passed else "FAIL"
        print(
            f"{status} {r.name} observed={files.fmt(r.observed)} "
            f"bound={files.fmt(r.bound)} [{r.witness}]"
        )
    print(f"checks {len(results)} failures {len(failures)}")
    if args.out:
        _write(args.out, files.checks_to_csv(results))
    return EXIT_CHECK_FAILURE if failures else EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "geodesic":
        chord = generators.geodesic_chord(args.a, args.b, args.n)
    elif args.kind == "from-driving":
        if args.family == "sin":
            driving = generators.sin_driving(
                args.freq, args.T, args.amp, samples=max(64, args.n)
            )
        elif args.family == "poly":
            coeffs = [float(c) for c in args.coeffs.split(",")]
            driving = generators.poly_driving(coeffs, args.T, samples=max(64, args.n))
        else:
            raise InvalidInputError(f"unknown driving family {args.family!r}")
        chord = generators.from_driving_chord(driving, args.n, args.offset)
    elif args.kind == "named":
        chord = generators.named_chord(args.name, args.n)
    else:
        raise InvalidInputError(f"unknown generator kind {args.kind!r}")
    text = files.chord_to_json(chord)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    print(f"vertices {len(chord)} start {files.fmt(chord.start)} "
          f"end {files.fmt(chord.end)}", file=sys.stderr)
    return EXIT_OK


def cmd_resample(args) -> int:
    curve = files.chord_from_json(_read(args.chord))
    if isinstance(curve, Chord):
        out = generators.resample_chord(curve, args.n)
    else:
        out = generators.resample_segment(curve, args.n)
    text = files.chord_to_json(out)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="loewner",
        description="Driving functions, half-plane capacity, Loewner energy, "
        "and incremental chord reversal in the upper half-plane.",
    )
    p.add_argument("--seed", type=int, default=0, help="suite seed")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument(
        "--tolerance-profile", choices=sorted(PROFILES), default="default"
    )
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("drive", help="chord file -> driving file")
    d.add_argument("chord")
    d.add_argument("--chordal", action="store_true", help="also print the energy")
    d.add_argument("--out")
    d.set_defaults(func=cmd_drive)

    t = sub.add_parser("trace", help="driving file -> open curve file")
    t.add_argument("driving")
    t.add_argument("--steps-per-sample", type=int, default=4)
    t.add_argument("--max-step-t", type=float, default=None)
    t.add_argument("--out")
    t.set_defaults(func=cmd_trace)

    e = sub.add_parser("energy", help="chordal Loewner energy of a chord file")
    e.add_argument("chord")
    e.add_argument("--r-stop", type=float, default=1e6)
    e.set_defaults(func=cmd_energy)

    r = sub.add_parser("reverse", help="reverse a chord in capacity increments")
    r.add_argument("chord")
    r.add_argument("--k", required=True, help="comma-separated step counts")
    r.add_argument("--n-samples", type=int, default=16)
    r.add_argument("--out", help="output prefix (default 'reversed')")
    r.set_defaults(func=cmd_reverse)

    v = sub.add_parser("verify", help="run the property-check suite")
    v.add_argument("--suite", default="default")
    v.add_argument("--only", default=None, help="run checks with this name prefix")
    v.add_argument("--out", help="CSV report path")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate test chords")
    g.add_argument("--kind", required=True,
                   choices=("geodesic", "from-driving", "named"))
    g.add_argument("--a", type=float, default=-1.0)
    g.add_argument("--b", type=float, default=1.0)
    g.add_argument("--n", type=int, default=800)
    g.add_argument("--family", default="sin", choices=("sin", "poly"))
    g.add_argument("--amp", type=float, default=1.0)
    g.add_argument("--freq", type=float, default=4.0)
    g.add_argument("--coeffs", default="0,2,-2")
    g.add_argument("--T", type=float, default=1.0)
    g.add_argument("--offset", type=float, default=1.0)
    g.add_argument("--name", default="g1")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("resample", help="arclength-resample a chord file")
    s.add_argument("chord")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_resample)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except LoewnerError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
