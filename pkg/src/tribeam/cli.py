"""Command-line front end.

    tribeam simulate   --spec FILE [--n N] [--seed S] [--format json|csv] [--out PATH]
    tribeam sweep      --spec FILE [--phi-grid START:STOP:COUNT] [--n N] [--seed S]
    tribeam doubleslit --spec FILE [--points N]
    tribeam signal     --spec FILE --bits 0110 [--n N] [--seed S]
    tribeam validate   --spec FILE

Exit codes: 0 success, 2 parse or validation failure, 3 runtime contract
violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import asdict

import numpy as np

from tribeam import __version__
from tribeam.circuitspec import CircuitSpec, ParseError, parse, serialize, validate
from tribeam.errors import ConfigurationError, ContractViolation, DegenerateInputError
from tribeam.measurement import (
    CoherentIncompleteDA2,
    CompleteDA1,
    DoubleSlitScreen,
    causality_audit,
    double_slit_screen,
    model_completeness_deviation,
    model_name,
    outcome_distribution,
    screen_completeness_deviation,
)
from tribeam.montecarlo import GENERATOR, bit_error_rate, phase_sweep, sample_clicks, transmit
from tribeam.optics import PathConfig, build_output_state

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_RUNTIME = 3

_ANGLE = re.compile(r"([+-]?)((?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?)?\*?(pi)?(?:/([0-9]+(?:\.[0-9]*)?))?")


class UsageError(ValueError):
    pass


def parse_angle(text: str) -> float:
    """Float or multiple of pi: ``1.5``, ``pi``, ``2pi``, ``-pi/2``, ``0.5*pi``."""
    m = _ANGLE.fullmatch(text.replace(" ", ""))
    if m is None or (m.group(2) is None and m.group(3) is None):
        raise UsageError(f"cannot read angle {text!r}")
    sign, coef, has_pi, denom = m.groups()
    val = float(coef) if coef is not None else 1.0
    if has_pi:
        val *= math.pi
    if denom is not None:
        if float(denom) == 0.0:
            raise UsageError(f"zero denominator in angle {text!r}")
        val /= float(denom)
    if sign == "-":
        val = -val
    return val


def parse_phi_grid(text: str) -> np.ndarray:
    """``START:STOP:COUNT``, both ends included."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--phi-grid expects START:STOP:COUNT, got {text!r}")
    start, stop = parse_angle(parts[0]), parse_angle(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise UsageError(f"grid count must be an integer, got {parts[2]!r}") from None
    if count < 1:
        raise UsageError("grid count must be at least 1")
    return np.linspace(start, stop, count)


def circuit_phase(spec: CircuitSpec) -> float:
    cfg = PathConfig.from_circuit(spec)
    return cfg.k * (cfg.path_lengths["a"] - cfg.path_lengths["b"]) + cfg.phi


def active_model(spec: CircuitSpec):
    if spec.detectors.alice_placement == "DA1":
        return CompleteDA1()
    return CoherentIncompleteDA2(circuit_phase(spec))


def load_spec(path: str) -> CircuitSpec:
    with open(path, "rb") as fh:
        spec = parse(fh.read())
    problems = validate(spec)
    if problems:
        raise _Invalid(problems)
    return spec


class _Invalid(Exception):
    def __init__(self, problems):
        self.problems = problems
        super().__init__("; ".join(problems))


def _config_echo(spec: CircuitSpec) -> dict:
    return {
        "text": serialize(spec),
        "source": asdict(spec.source),
        "elements": [{"type": type(e).__name__, **asdict(e)} for e in spec.elements],
        "detectors": asdict(spec.detectors),
        "fold_angle": spec.fold_angle,
    }


def _versions() -> dict:
    return {"tribeam": __version__, "numpy": np.__version__, "generator": GENERATOR}


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _dump_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def simulate_report(spec: CircuitSpec, n: int, seed: int) -> dict:
    state = build_output_state(spec)
    model = active_model(spec)
    dist = outcome_distribution(state, model)
    summary = sample_clicks(dist, n, seed)
    rate = spec.source.rate
    audits = {"completeness_deviation": model_completeness_deviation(model)}
    if isinstance(model, CoherentIncompleteDA2):
        audits["causality"] = asdict(causality_audit(state, model.phi, input_rate=rate))
    return {
        "command": "simulate",
        "config": _config_echo(spec),
        "model": {"name": model_name(model), **asdict(model)},
        "analytic": {
            "weights": dist.outcomes,
            "probabilities": dist.probabilities,
            "renorm_beta": dist.renorm_beta,
            "rates": {x: rate * p for x, p in dist.probabilities.items()},
        },
        "monte_carlo": {
            "n": n,
            "seed": seed,
            "counts": summary.counts,
            "frequencies": summary.frequencies(),
        },
        "audits": audits,
        "versions": _versions(),
    }


def cmd_simulate(args) -> str:
    spec = load_spec(args.spec)
    report = simulate_report(spec, args.n, args.seed)
    if args.format == "csv":
        a, mc = report["analytic"], report["monte_carlo"]
        rows = [
            (x, a["weights"][x], a["probabilities"][x], mc["counts"][x], mc["frequencies"][x])
            for x in a["weights"]
        ]
        return _dump_csv(("outcome", "weight", "probability", "count", "frequency"), rows)
    return _dump_json(report)


def cmd_sweep(args) -> str:
    spec = load_spec(args.spec)
    if spec.detectors.alice_placement != "DA2":
        raise _Invalid(["sweep requires detector alice placement=DA2"])
    grid = parse_phi_grid(args.phi_grid) + circuit_phase(spec)
    rows = phase_sweep(grid, args.n, args.seed, state=build_output_state(spec))
    if args.format == "json":
        return _dump_json(
            {"command": "sweep", "n": args.n, "seed": args.seed, "rows": [asdict(r) for r in rows], "versions": _versions()}
        )
    return _dump_csv(
        ("phi", "analytic_bob_rate", "empirical_bob_rate", "stderr"),
        [(r.phi, r.analytic_bob_rate, r.empirical_bob_rate, r.stderr) for r in rows],
    )


def cmd_doubleslit(args) -> str:
    spec = load_spec(args.spec)
    state = build_output_state(spec)
    pattern = double_slit_screen(state, args.points)
    if args.format == "csv":
        return _dump_csv(
            ("index", "phase", "intensity"),
            [(i, float(d), float(v)) for i, (d, v) in enumerate(zip(pattern.phases, pattern.intensities))],
        )
    dist = outcome_distribution(state, DoubleSlitScreen(args.points))
    return _dump_json(
        {
            "command": "doubleslit",
            "config": _config_echo(spec),
            "n_points": args.points,
            "phases": [float(x) for x in pattern.phases],
            "intensities": [float(x) for x in pattern.intensities],
            "integrated_weight": pattern.integrated_weight,
            "probabilities": dist.probabilities,
            "renorm_beta": dist.renorm_beta,
            "screen_completeness_deviation": screen_completeness_deviation(args.points),
            "versions": _versions(),
        }
    )


def cmd_signal(args) -> str:
    if not args.bits:
        raise UsageError("--bits must be a nonempty string of 0 and 1")
    if set(args.bits) - {"0", "1"}:
        raise UsageError(f"--bits must contain only 0 and 1, got {args.bits!r}")
    spec = load_spec(args.spec)
    transcript = transmit(args.bits, args.n, args.seed, state=build_output_state(spec))
    decoded = "".join(str(t.decision.decided_bit) for t in transcript)
    if args.format == "csv":
        return _dump_csv(
            ("index", "sent", "placement", "bob_counts", "n", "decided_bit", "log_likelihood_ratio", "error_bound"),
            [
                (i, t.sent, t.placement, t.bob_counts, t.n, t.decision.decided_bit,
                 t.decision.log_likelihood_ratio, t.decision.error_bound)
                for i, t in enumerate(transcript)
            ],
        )
    return _dump_json(
        {
            "command": "signal",
            "message": args.bits,
            "decoded": decoded,
            "bit_error_rate": bit_error_rate(transcript),
            "n": args.n,
            "seed": args.seed,
            "transcript": [asdict(t) for t in transcript],
            "versions": _versions(),
        }
    )


def cmd_validate(args) -> str:
    with open(args.spec, "rb") as fh:
        spec = parse(fh.read())
    problems = validate(spec)
    if problems:
        raise _Invalid(problems)
    return "ok\n"


def _seed(text: str) -> int:
    val = int(text, 0)
    if not 0 <= val < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return val


def _positive_int(text: str) -> int:
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return val


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tribeam", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, fmt, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--spec", required=True, metavar="PATH")
        p.add_argument("--format", choices=("json", "csv"), default=fmt)
        p.add_argument("--out", metavar="PATH")
        p.set_defaults(func=func)
        return p

    p = add("simulate", cmd_simulate, "json", "analytic distribution, Monte Carlo clicks and audits")
    p.add_argument("--n", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)

    p = add("sweep", cmd_sweep, "csv", "Bob's rate versus the DA2 phase")
    p.add_argument("--phi-grid", default="0:2pi:64", metavar="START:STOP:COUNT")
    p.add_argument("--n", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)

    p = add("doubleslit", cmd_doubleslit, "json", "double-slit screen fringe table")
    p.add_argument("--points", type=int, default=1024)

    p = add("signal", cmd_signal, "json", "send a bit string by Alice's placement choice")
    p.add_argument("--bits", required=True)
    p.add_argument("--n", type=_positive_int, default=10_000)
    p.add_argument("--seed", type=_seed, default=0)

    add("validate", cmd_validate, "json", "check a circuit file")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except ParseError as exc:
        print(f"{args.spec}:{exc.line}:{exc.column}: {exc.message}", file=sys.stderr)
        return EXIT_INVALID
    except _Invalid as exc:
        for problem in exc.problems:
            print(f"{args.spec}: {problem}", file=sys.stderr)
        return EXIT_INVALID
    except UsageError as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"tribeam: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ContractViolation, ConfigurationError, DegenerateInputError) as exc:
        print(f"tribeam: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
