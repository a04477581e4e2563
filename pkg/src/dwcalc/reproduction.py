"""Reference table for the Z/2 theory with action <[X], w1^n>.

Each row computes a closed-manifold value or a circle state-space dimension
and compares it with the known closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .action import Theory
from .groups import cyclic
from .scalars import CyclotomicScalar
from .tqft import (
    CIRCLE, ClosedManifoldJob, dim_via_torus, partition_closed, partition_product_formula, state_space,
)
from .topology import models
from .topology.builtins import builtin_complex


@dataclass(frozen=True)
class TableRow:
    label: str
    route: str
    expected: Fraction
    value: CyclotomicScalar

    @property
    def passed(self) -> bool:
        return self.value == CyclotomicScalar.rational(self.expected)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "route": self.route,
            "expected": str(self.expected),
            "value": self.value.to_json(),
            "status": "PASS" if self.passed else "FAIL",
        }


def _closed(n: int, X) -> CyclotomicScalar:
    return partition_closed(ClosedManifoldJob(Theory.w1_power(cyclic(2), n), X))


def _rows() -> list[tuple[str, str, Fraction, Callable[[], CyclotomicScalar]]]:
    Z2 = cyclic(2)
    rows = []
    for g in range(4):
        rows.append((f"Sigma_{g}: 2^(2g-1)", "complex", Fraction(2) ** (2 * g - 1),
                     lambda g=g: _closed(2, builtin_complex(f"sigma({g})"))))
    rows.append(("S^1, n=1", "complex", Fraction(0), lambda: _closed(1, builtin_complex("circle"))))
    rows.append(("RP^2", "complex", Fraction(0), lambda: _closed(2, builtin_complex("rp2"))))
    for n in (3, 4):
        rows.append((f"RP^{n}", "model", Fraction(0), lambda n=n: _closed(n, models.projective_space(n))))
        rows.append((f"RP^{n}", "product formula", Fraction(0),
                     lambda n=n: partition_product_formula(models.projective_space(n), n)))
    for m, l in ((1, 1), (2, 1), (1, 2)):
        M = models.dold(m, l)
        rows.append((f"P({m},{l})", "model", Fraction(1), lambda M=M: _closed(M.dimension, M)))
    rows.append(("Klein bottle", "complex", Fraction(0), lambda: _closed(2, builtin_complex("klein"))))
    rows.append(("Klein bottle", "product formula", Fraction(0),
                 lambda: partition_product_formula(builtin_complex("klein"), 2)))
    T = Theory.w1_power(Z2, 2)
    rows.append(("dim Z(S^1) = 2^beta_1", "transgression", Fraction(2),
                 lambda: CyclotomicScalar.rational(state_space(T, CIRCLE).dimension)))
    rows.append(("dim Z(S^1) = 2^beta_1", "torus state sum", Fraction(2), lambda: dim_via_torus(T, CIRCLE)))
    return rows


def table7() -> list[TableRow]:
    return [TableRow(label, route, expected, compute()) for label, route, expected, compute in _rows()]


def format_table(rows: list[TableRow]) -> str:
    w = max(len(r.label) for r in rows)
    v = max(len(r.route) for r in rows)
    lines = [f"{'case':<{w}}  {'route':<{v}}  {'expected':>8}  {'value':>8}  status"]
    for r in rows:
        lines.append(f"{r.label:<{w}}  {r.route:<{v}}  {str(r.expected):>8}  {str(r.value):>8}  "
                     f"{'PASS' if r.passed else 'FAIL'}")
    return "\n".join(lines)
