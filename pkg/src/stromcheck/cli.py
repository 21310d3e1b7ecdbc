"""Command line entry point: ``stromcheck check|catalog|hesolve``.

Exit codes: 0 pass, 1 residual failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import jsonschema

from . import catalog, report
from .hesolver import DEFAULT_N, GridField, ObstructionError, degree_check, solve_he
from .modelfile import ModelFileError, build, read_json

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

HESOLVE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "N": {"type": "integer", "minimum": 4},
        "constant": {"type": "number"},
        "modes": {"type": "array", "items": {"type": "array", "items": {"type": "number"},
                                             "minItems": 3, "maxItems": 4}},
    },
}


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text + "\n")
    else:
        print(text)


def _render(doc, fmt: str) -> str:
    if fmt == "machine":
        return report.dumps(doc)
    if isinstance(doc, list):
        return "\n".join(report.to_text(d) for d in doc)
    return report.to_text(doc)


def cmd_check(args) -> int:
    model = build(read_json(args.file))
    doc = report.run_model(model, args.tol, args.strict_hym_nabla)
    _emit(_render(doc, args.report), args.output)
    return EXIT_PASS if doc["passed"] else EXIT_FAIL


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in catalog.names():
            print(f"{name:20s} {catalog.describe(name)}")
        return EXIT_PASS
    if args.action == "export":
        if len(args.names) != 1:
            raise ModelFileError("catalog export", "give exactly one entry name")
        _emit(json.dumps(catalog.get(args.names[0]), indent=2), args.output)
        return EXIT_PASS
    names = args.names or catalog.names()
    docs = [report.run_model(build(catalog.get(n)), args.tol, args.strict_hym_nabla) for n in names]
    out = docs[0] if len(docs) == 1 and args.names else docs
    _emit(_render(out, args.report), args.output)
    return EXIT_PASS if all(d["passed"] for d in docs) else EXIT_FAIL


def cmd_hesolve(args) -> int:
    spec = read_json(args.spec)
    try:
        jsonschema.validate(spec, HESOLVE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ModelFileError("$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in exc.absolute_path),
                             exc.message) from None
    N = spec.get("N", DEFAULT_N)
    source = GridField.from_modes(spec.get("modes", []), N, spec.get("constant", 0.0))
    doc = {"schema": "stromcheck-hesolve/1", "N": N, "mean": degree_check(source)}
    try:
        f, residual = solve_he(source)
    except ObstructionError as exc:
        doc.update({"solved": False, "obstruction": str(exc)})
        code = EXIT_FAIL
    else:
        doc.update({"solved": True, "residual": residual, "solution": f.values.tolist()})
        code = EXIT_PASS
    if args.report == "machine":
        text = report.dumps(doc)
    elif doc["solved"]:
        text = f"solved on a {N}x{N} grid: residual {doc['residual']:.3g}, max |f| {abs(f.values).max():.6g}"
    else:
        text = f"no solution: {doc['obstruction']}"
    _emit(text, args.output)
    return code


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stromcheck", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--tol", type=float, default=None, help="pass/fail tolerance (default 1e-9)")
        sp.add_argument("--report", choices=["text", "machine"], default="text")
        sp.add_argument("--strict-hym-nabla", action=argparse.BooleanOptionalAction, default=None,
                        help="require the HYM equations for nabla (default on)")
        sp.add_argument("-o", "--output", help="write the report to a file")

    c = sub.add_parser("check", help="check a model file")
    c.add_argument("file")
    common(c)
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("catalog", help="built-in examples")
    k.add_argument("action", choices=["list", "run", "export"])
    k.add_argument("names", nargs="*")
    common(k)
    k.set_defaults(func=cmd_catalog)

    h = sub.add_parser("hesolve", help="line-bundle Hermite-Einstein solve on the flat 2-torus")
    h.add_argument("spec", help="JSON with N, modes [[kx, ky, amp, phase?], ...] and constant")
    h.add_argument("--report", choices=["text", "machine"], default="text")
    h.add_argument("-o", "--output")
    h.set_defaults(func=cmd_hesolve)
    return p


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    try:
        return args.func(args)
    except ModelFileError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except catalog.UnknownEntryError as exc:
        print(f"input error: {exc.args[0]}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
