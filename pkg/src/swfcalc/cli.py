"""Command-line driver: parse a manifold document, assemble the invariant, print a report."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from . import conley as cy
from .errors import GapError, ParseError, RangeError, SwfError, UnsupportedError
from .manifolds import ManifoldSpec, SeifertGeneral, parse_spec, serialize
from .regression import run_regression
from .seifert import degree_progression, picard_quotient_order, reducibility_check, torsion_class
from .spectral import SpectralGap
from .systems import assemble_swf

EXIT_CODES = ((GapError, 5), (UnsupportedError, 4), (RangeError, 3), (ParseError, 2))
UNSPECIFIED = "unspecified-by-paper"


def exit_code(exc: SwfError) -> int:
    for cls, code in EXIT_CODES:
        if isinstance(exc, cls):
            return code
    return 1


def rat(x: Optional[Fraction]) -> str:
    if x is None:
        return UNSPECIFIED
    return f"{x.numerator}/{x.denominator}"


def parse_rat(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not an exact rational: {text!r}") from None


def load_manifold(arg: str) -> ManifoldSpec:
    if arg.lstrip().startswith("{"):
        return parse_spec(arg)
    path = Path(arg)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {arg}: {exc.strerror}") from None
    return parse_spec(text)


def _seifert_report(spec: SeifertGeneral) -> dict[str, Any]:
    red = reducibility_check(spec.data, spec.N, spec.E0)
    offset, step = degree_progression(spec.data, spec.N, spec.E0)
    cls = torsion_class(spec.data, spec.N, spec.E0)
    return {
        "input": serialize(spec),
        "reducibility": {"all_reducible": red.all_reducible, "kernel_free": red.kernel_free},
        "degree_offset": rat(offset),
        "degree_step": rat(step),
        "picard_quotient_order": picard_quotient_order(spec.data, spec.N),
        "torsion_class": {"b": cls.rep.b, "beta": list(cls.rep.beta), "coords": list(cls.coords)},
    }


def build_report(
    spec: ManifoldSpec, group: str, flavor: str, gap: SpectralGap | None = None, homology_prefix: int = 0
) -> dict[str, Any]:
    if isinstance(spec, SeifertGeneral):
        return _seifert_report(spec)
    res = assemble_swf(spec, group, flavor, gap)
    descriptor = res.family if res.family == "S⁰" else f"{res.family} ({res.direction})"
    report: dict[str, Any] = {
        "input": serialize(spec),
        "group": group,
        "flavor": flavor,
        "system": {"direction": res.direction, "descriptor": descriptor, "connecting_maps": res.maps},
        "suspension": {"m": 0, "n": rat(res.n)},
        "trail": list(res.trail),
    }
    if homology_prefix:
        objs, _ = res.system.prefix(homology_prefix)
        report["homology"] = [
            {
                "stage": i,
                "descriptor": cy.describe(o.descriptor),
                "reduced": cy.descriptor_homology(o.descriptor).table(),
            }
            for i, o in enumerate(objs, start=res.system.start)
        ]
    return report


def _text(report: dict[str, Any], indent: str = "") -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_text(value, indent + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for item in value:
                block = _text(item, indent + "    ").splitlines()
                block[0] = f"{indent}  - " + block[0].lstrip()
                lines.extend(block)
        elif isinstance(value, list) and key == "trail":
            lines.append(f"{indent}{key}:")
            lines.extend(f"{indent}  - {v}" for v in value)
        else:
            lines.append(f"{indent}{key}: {json.dumps(value, ensure_ascii=False)}")
    return "\n".join(lines)


def render(report: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, ensure_ascii=False, indent=2)
    return _text(report)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swf-unfolded", description=__doc__)
    p.add_argument("--manifold", help="JSON document, inline or a file path")
    p.add_argument("--group", choices=("s1", "pin2"), default="s1")
    p.add_argument("--flavor", choices=("a", "r"), default="a")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--homology-prefix", type=int, default=0, metavar="K")
    p.add_argument("--gap", help="spectral gap override as p/q")
    p.add_argument("--regression", action="store_true", help="diff the full registry table")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    out = sys.stdout
    try:
        gap = SpectralGap(parse_rat(args.gap)) if args.gap is not None else None
        if args.homology_prefix < 0:
            raise RangeError("--homology-prefix must be nonnegative")
        if args.regression:
            diffs = run_regression(gap)
            for d in diffs:
                row = d.row
                tag = "PASS" if d.ok else "FAIL"
                out.write(
                    f"{tag} {json.dumps(row.spec, sort_keys=True)} {row.group} {row.flavor}: "
                    f"{d.family} n={rat(d.n)} (expected {row.family} n={rat(row.n)})\n"
                )
            bad = sum(not d.ok for d in diffs)
            out.write(f"{len(diffs) - bad}/{len(diffs)} rows agree\n")
            return 1 if bad else 0
        if args.manifold is None:
            raise ParseError("--manifold is required unless --regression is given")
        spec = load_manifold(args.manifold)
        group = "S1" if args.group == "s1" else "Pin2"
        report = build_report(spec, group, args.flavor.upper(), gap, args.homology_prefix)
        out.write(render(report, args.format) + "\n")
        return 0
    except SwfError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
