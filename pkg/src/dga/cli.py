"""Command-line interface: validate, h0, cohomology, ext, pd, gd, verify.

Reports are JSON ("dga-report/1"), deterministic for fixed input bytes,
flags and seed: canonical key order, integers and exact scalar strings
only, with wall-clock timing kept in a separate field that comparisons
ignore.  CSV output is available for tabular payloads, and --plot renders
a matplotlib figure next to the delimited output.

Exit codes: 0 success, 1 validation or parse error, 2 internal consistency
abort (the approximation chain and the Ext oracle disagreed).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import __version__
from .core import module_from_presentation, resolve_builtin
from .dimension import ConsistencyError, gd, pd
from .derived import ext_window
from .presentation import (
    ModulePresentation,
    ParseError,
    ValidationError,
    normalize,
    parse,
    parse_builtin,
)
from .verify import RandomSpec, run_check

SCHEMA = "dga-report/1"


def _sha256(data):
    return hashlib.sha256(data).hexdigest()


def _read_algebra(path, field_override=None):
    with open(path, "rb") as fh:
        data = fh.read()
    pres = parse(data.decode("utf-8"))
    if isinstance(pres, ModulePresentation):
        raise ValidationError(f"{path} is a module file, not an algebra presentation")
    if field_override:
        pres.field_spec = field_override
        pres = parse(pres.to_text())
    return pres, normalize(pres), _sha256(data)


def _resolve_module(algebra, designator):
    """A module from a builtin designator or a module presentation file."""
    try:
        builtin = parse_builtin(designator)
    except ParseError:
        builtin = None
    if builtin is not None:
        return resolve_builtin(algebra, builtin)
    with open(designator, "rb") as fh:
        text = fh.read().decode("utf-8")
    pres = parse(text)
    if not isinstance(pres, ModulePresentation):
        raise ValidationError(f"{designator} is not a module presentation")
    return module_from_presentation(algebra, pres)


def _parse_range(text):
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValidationError(f"bad range {text!r}; expected <lo>..<hi>")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise ValidationError(f"bad range {text!r}; expected integers") from None


def build_report(command, payload, input_path=None, input_sha=None, field=None,
                 seed=None, started=None):
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": command,
        "input": {"path": input_path, "sha256": input_sha},
        "field": field,
        "payload": payload,
    }
    if seed is not None:
        report["seed"] = seed
    report["timing_ms"] = int((time.monotonic() - started) * 1000) if started else 0
    return report


def report_json(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def payload_csv(command, payload):
    """Delimited form of the tabular payloads."""
    lines = []
    if command in ("ext", "cohomology"):
        lines.append("n,dim")
        for n in sorted(int(k) for k in payload["dims"]):
            lines.append(f"{n},{payload['dims'][str(n)]}")
    elif command in ("pd", "gd"):
        lines.append("key,value")
        flat = dict(payload)
        flat.pop("witness_layers", None)
        flat.pop("pd_of_simples", None)
        flat.pop("ext_diagnostic", None)
        flat.pop("ext_check", None)
        for k in sorted(flat):
            lines.append(f"{k},{flat[k]}")
    elif command == "verify":
        keys = sorted({k for row in payload["rows"] for k in row})
        lines.append(",".join(keys))
        for row in payload["rows"]:
            lines.append(",".join(_csv_cell(row.get(k)) for k in keys))
    else:
        lines.append("key,value")
        for k in sorted(payload):
            lines.append(f"{k},{payload[k]}")
    return "\n".join(lines) + "\n"


def _csv_cell(value):
    if value is None:
        return ""
    text = str(value)
    if "," in text or '"' in text or "\n" in text:
        text = '"' + text.replace('"', '""') + '"'
    return text


def _emit(args, report):
    rendered = report_json(report)
    wrote_figure = None
    if getattr(args, "plot", None):
        from .plots import figure_for

        wrote_figure = figure_for(report["command"], report["payload"], args.plot)
    if args.out:
        if args.format == "csv":
            with open(args.out, "w") as fh:
                fh.write(payload_csv(report["command"], report["payload"]))
            json_path = args.out + ".json"
            with open(json_path, "w") as fh:
                fh.write(rendered)
        else:
            with open(args.out, "w") as fh:
                fh.write(rendered)
        summary = _summary_line(report)
        if summary:
            print(summary)
        print(f"report written to {args.out}"
              + (f", figure to {wrote_figure}" if wrote_figure else ""))
    else:
        if args.format == "csv":
            sys.stdout.write(payload_csv(report["command"], report["payload"]))
        else:
            sys.stdout.write(rendered)
        if wrote_figure:
            print(f"figure written to {wrote_figure}", file=sys.stderr)


def _summary_line(report):
    payload = report["payload"]
    cmd = report["command"]
    if cmd == "gd":
        if payload["kind"] == "exact":
            return f"gd = {payload['value']} (exact)"
        return f"gd > {payload['cutoff']} not excluded (cutoff {payload['cutoff']})"
    if cmd == "pd":
        if payload["kind"] == "exact":
            return f"pd = {payload['value']} (exact)"
        if payload["kind"] == "minus_infinity":
            return "pd = -infinity (zero object)"
        return f"pd > {payload['cutoff']} not excluded"
    if cmd == "verify":
        return (f"{payload['check']}: {payload['passed']} passed, "
                f"{payload['inconclusive']} inconclusive, "
                f"{len(payload['failures'])} failures over {payload['trials']} trials")
    return None


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args):
    started = time.monotonic()
    pres, algebra, sha = _read_algebra(args.file, args.field)
    algebra.self_check()
    payload = {
        "valid": True,
        "dim": algebra.dim,
        "vertices": len(algebra.vertices),
        "arrows": len(algebra.arrows),
        "amplitude": algebra.amplitude,
        "acyclic": algebra.acyclic,
        "max_path_length": algebra.quiver_path_length,
    }
    report = build_report("validate", payload, args.file, sha, pres.field_spec,
                          started=started)
    _emit(args, report)
    return 0


def cmd_h0(args):
    started = time.monotonic()
    pres, algebra, sha = _read_algebra(args.file, args.field)
    h0 = algebra.h0()
    payload = {
        "dim": h0.dim,
        "radical_dim": len(h0.rad_positions),
        "semisimple_rank": h0.semisimple_rank(),
        "simples": [f"simple({v})" for v in algebra.vertices],
        "basis": [algebra.classes[i].name for i in h0.rep_class],
    }
    report = build_report("h0", payload, args.file, sha, pres.field_spec,
                          started=started)
    _emit(args, report)
    return 0


def cmd_cohomology(args):
    started = time.monotonic()
    pres, algebra, sha = _read_algebra(args.file, args.field)
    if args.module:
        mod = _resolve_module(algebra, args.module)
        label = args.module
    else:
        mod = algebra.regular_module()
        label = "A"
    if args.range:
        lo, hi = _parse_range(args.range)
    else:
        lo, hi = mod.min_degree() - 1, mod.max_degree() + 1
    if lo > hi:
        raise ValidationError(f"window inverted: [{lo}, {hi}]")
    dims = {str(n): mod.h_dim(n) for n in range(lo, hi + 1)}
    payload = {"module": label, "window": [lo, hi], "dims": dims}
    report = build_report("cohomology", payload, args.file, sha, pres.field_spec,
                          started=started)
    _emit(args, report)
    return 0


def cmd_ext(args):
    started = time.monotonic()
    pres, algebra, sha = _read_algebra(args.file, args.field)
    x = _resolve_module(algebra, args.source)
    y = _resolve_module(algebra, args.target)
    lo, hi = _parse_range(args.range)
    table = ext_window(x, y, lo, hi, with_reps=args.reps)
    payload = table.to_payload()
    payload["source"] = args.source
    payload["target"] = args.target
    if args.reps:
        payload["representatives"] = {str(n): r for n, r in table.reps.items()}
    report = build_report("ext", payload, args.file, sha, pres.field_spec,
                          started=started)
    _emit(args, report)
    return 0


def cmd_pd(args):
    started = time.monotonic()
    pres, algebra, sha = _read_algebra(args.file, args.field)
    mod = _resolve_module(algebra, args.module)
    cutoff = args.cutoff
    if cutoff is None:
        if algebra.acyclic:
            amp = (mod.max_degree() - mod.min_degree()) if mod.dim else 0
            cutoff = algebra.quiver_path_length * (algebra.amplitude + 1) + amp + 2
        else:
            cutoff = 32
    res = pd(mod, cutoff)
    payload = res.to_payload()
    payload["module"] = args.module
    payload["cutoff"] = cutoff
    report = build_report("pd", payload, args.file, sha, pres.field_spec,
                          started=started)
    _emit(args, report)
    return 0


def cmd_gd(args):
    started = time.monotonic()
    pres, algebra, sha = _read_algebra(args.file, args.field)
    res = gd(algebra, cutoff=args.cutoff)
    payload = res.to_payload()
    report = build_report("gd", payload, args.file, sha, pres.field_spec,
                          started=started)
    _emit(args, report)
    return 0


def cmd_verify(args):
    started = time.monotonic()
    spec = RandomSpec(
        seed=args.seed,
        max_vertices=args.vertices,
        max_arrows=args.arrows,
        d_max=args.dmax,
        acyclic=not args.allow_cycles,
        trivial_grading=args.trivial_grading,
    )
    if args.check == "classical":
        spec.trivial_grading = True
        spec.acyclic = False
    report_data = run_check(args.check, spec, args.trials, window=args.window)
    payload = report_data.to_payload()
    report = build_report("verify", payload, None, None, "Q", seed=args.seed,
                          started=started)
    _emit(args, report)
    return 0 if report_data.ok() else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="dga",
        description="Exact invariants of finite-dimensional connective dg "
                    "quiver algebras: cohomology, Ext tables, projective and "
                    "global dimension, and property verification.")
    parser.add_argument("--version", action="version", version=f"dga {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_file=True):
        if with_file:
            p.add_argument("file", help="algebra presentation file")
        p.add_argument("--field", help="override the field line (Q or F<p>)")
        p.add_argument("--out", help="write the report to this path")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--plot", help="render a figure of the payload to this path")

    p = sub.add_parser("validate", help="parse and validate a presentation")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("h0", help="H^0(A) with radical and simples")
    common(p)
    p.set_defaults(func=cmd_h0)

    p = sub.add_parser("cohomology", help="cohomology of A or of a module")
    common(p)
    p.add_argument("--module", help="module file or builtin designator")
    p.add_argument("--range", help="degree window lo..hi")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("ext", help="dim Ext^n(x, y) over a window")
    common(p)
    p.add_argument("--from", dest="source", required=True,
                   help="module file or builtin (simple(v), free(v)[k], simples_sum)")
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--range", required=True, help="window lo..hi")
    p.add_argument("--reps", action="store_true",
                   help="include representative cocycles")
    p.set_defaults(func=cmd_ext)

    p = sub.add_parser("pd", help="projective dimension of a module")
    common(p)
    p.add_argument("--module", required=True)
    p.add_argument("--cutoff", type=int)
    p.set_defaults(func=cmd_pd)

    p = sub.add_parser("gd", help="global dimension of the algebra")
    common(p)
    p.add_argument("--cutoff", type=int)
    p.set_defaults(func=cmd_gd)

    p = sub.add_parser("verify", help="run a property check on random instances")
    p.add_argument("check", choices=("triangle", "tensor", "hom", "acyclic",
                                     "classical"))
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vertices", type=int, default=5)
    p.add_argument("--arrows", type=int, default=6)
    p.add_argument("--dmax", type=int, default=3)
    p.add_argument("--window", type=int, default=12)
    p.add_argument("--allow-cycles", action="store_true")
    p.add_argument("--trivial-grading", action="store_true")
    p.add_argument("--out", help="write the report to this path")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--plot", help="render a figure of the payload to this path")
    p.set_defaults(func=cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"consistency abort: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
