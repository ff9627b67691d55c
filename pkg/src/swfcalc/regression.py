"""Published registry values, used by ``--regression`` to diff the pipelines."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from .manifolds import parse_spec
from .systems import assemble_swf


@dataclass(frozen=True)
class Expected:
    spec: dict[str, Any]
    group: str
    flavor: str
    family: str
    n: Optional[Fraction]


def _nil_rows() -> list[Expected]:
    rows = []
    for d in range(1, 9):
        spec = {"family": "nil", "d": d, "q": 0}
        rows.append(Expected(spec, "S1", "A", "⋁^∞ C⁺", Fraction(d - 17, 8)))
        rows.append(Expected(spec, "S1", "R", "(ℂ²)⁺∖⊔^∞S¹", Fraction(d - 1, 8)))
        for lift in (1, 2, 3):
            lifted = dict(spec, spin_lift=lift)
            rows.append(Expected(lifted, "Pin2", "A", "Σ(∐^∞Pin(2))", Fraction(d - 17, 16)))
            rows.append(Expected(lifted, "Pin2", "R", "ℍ⁺∖∐^∞Pin(2)", Fraction(d - 1, 16)))
        lifted = dict(spec, spin_lift=0)
        rows.append(Expected(lifted, "Pin2", "A", "Σ(S(ℍ) ∨_Pin(2) ⋁^∞(Z̃₂×S(ℍ)))", Fraction(d - 9, 16)))
        rows.append(Expected(lifted, "Pin2", "R", "(ℍ²)⁺∖D_∞", Fraction(d + 7, 16)))
    return rows


def _rows() -> list[Expected]:
    rows = []
    for group in ("S1", "Pin2"):
        for flavor in ("A", "R"):
            rows.append(Expected({"family": "s2xs1"}, group, flavor, "S⁰", Fraction(0)))
            rows.append(Expected({"family": "hantzsche_wendt"}, group, flavor, "S⁰", None))
            for order in (3, 4, 6):
                rows.append(Expected({"family": "flat_t2", "order": order}, group, flavor, "S⁰", None))
    for g, d, q, c in ((1, 5, 1, Fraction(1, 10)), (2, 7, 3, Fraction(1, 28))):
        for flavor in ("A", "R"):
            rows.append(Expected({"family": "circle_bundle", "g": g, "d": d, "q": q}, "S1", flavor, "S⁰", c))
    rows += _nil_rows()
    flat = {"family": "flat_t2", "order": 2, "spinc": 0}
    rows.append(Expected(flat, "S1", "A", "⋁^∞ C⁺", Fraction(1, 2)))
    rows.append(Expected(flat, "S1", "R", "(ℂ²)⁺∖⊔^∞S¹", Fraction(3, 2)))
    for lift, a, r, fam_a, fam_r in (
        (0, Fraction(3, 4), Fraction(5, 4), "Σ(S(ℍ) ∨_Pin(2) ⋁^∞(Z̃₂×S(ℍ)))", "(ℍ²)⁺∖D_∞"),
        (1, Fraction(1, 4), Fraction(3, 4), "Σ(∐^∞Pin(2))", "ℍ⁺∖∐^∞Pin(2)"),
    ):
        rows.append(Expected(dict(flat, spin_lift=lift), "Pin2", "A", fam_a, a))
        rows.append(Expected(dict(flat, spin_lift=lift), "Pin2", "R", fam_r, r))
    for spinc in (1, 2, 3):
        rows.append(Expected({"family": "flat_t2", "order": 2, "spinc": spinc}, "S1", "A", "S⁰", Fraction(0)))
    return rows


TABLE: tuple[Expected, ...] = tuple(_rows())


@dataclass(frozen=True)
class Diff:
    row: Expected
    family: str
    n: Optional[Fraction]

    @property
    def ok(self) -> bool:
        return self.family == self.row.family and self.n == self.row.n


def run_regression(gap=None) -> list[Diff]:
    out = []
    for row in TABLE:
        res = assemble_swf(parse_spec(row.spec), row.group, row.flavor, gap)
        out.append(Diff(row, res.family, res.n))
    return out
