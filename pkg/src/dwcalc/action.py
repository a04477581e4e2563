"""Topological actions: untwisted, w1 powers over Z/2, and group-cocycle state sums."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cocycles import GroupCocycle
from .fields import GaugeField, field_class_mod2
from .groups import FiniteGroup
from .scalars import CyclotomicScalar
from .topology.complex import DeltaComplex
from .topology.homology import cup_power_pairing
from .topology.models import AlgebraicModel, tau_from_model

KINDS = ("untwisted", "w1_power", "cocycle")
MAX_STATE_SUM_DIM = 3


class TheoryError(ValueError):
    pass


@dataclass(frozen=True)
class CoefficientEmbedding:
    """Z/N -> nonzero scalars, k -> zeta_N^k."""

    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise TheoryError("modulus must be positive")

    def __call__(self, k: int) -> CyclotomicScalar:
        return CyclotomicScalar.zeta(self.modulus, k % self.modulus)


@dataclass(frozen=True, eq=False)
class Theory:
    kind: str
    group: FiniteGroup
    embedding: CoefficientEmbedding
    power: int | None = None
    cocycle: GroupCocycle | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise TheoryError(f"unknown theory kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "w1_power":
            if self.group.order != 2:
                raise TheoryError("w1_power theories need the gauge group Z/2")
            if self.power is None or self.power < 1:
                raise TheoryError("w1_power needs a positive power")
            if self.embedding.modulus != 2:
                raise TheoryError("w1_power takes values in Z/2")
        if self.kind == "cocycle":
            w = self.cocycle
            if w is None:
                raise TheoryError("cocycle theory needs a cocycle")
            if not np.array_equal(w.group.mul, self.group.mul):
                raise TheoryError("cocycle lives on a different group")
            if w.modulus != self.embedding.modulus:
                raise TheoryError("cocycle modulus and embedding modulus differ")

    @classmethod
    def untwisted(cls, G: FiniteGroup) -> Theory:
        return cls("untwisted", G, CoefficientEmbedding(1))

    @classmethod
    def w1_power(cls, G: FiniteGroup, n: int) -> Theory:
        return cls("w1_power", G, CoefficientEmbedding(2), power=n)

    @classmethod
    def from_cocycle(cls, w: GroupCocycle) -> Theory:
        return cls("cocycle", w.group, CoefficientEmbedding(w.modulus), cocycle=w)

    @property
    def modulus(self) -> int:
        return self.embedding.modulus

    @property
    def degree(self) -> int | None:
        """Manifold dimension the theory is built for; None means any."""
        if self.kind == "w1_power":
            return self.power
        if self.kind == "cocycle":
            return self.cocycle.degree
        return None

    def describe(self) -> str:
        if self.kind == "untwisted":
            return f"untwisted[{self.group.label}]"
        if self.kind == "w1_power":
            return f"w1^{self.power}"
        return f"cocycle[{self.group.label}, deg {self.cocycle.degree}, Z/{self.modulus}]"


@dataclass(frozen=True)
class ActionValue:
    exponent: int
    scalar: CyclotomicScalar


def _value(T: Theory, k: int) -> ActionValue:
    k %= T.modulus
    return ActionValue(k, T.embedding(k))


def cocycle_state_sum(X: DeltaComplex, f: GaugeField, w: GroupCocycle) -> int:
    """Sum over top simplices of sign * w(g_01, g_12, ...) in Z/N.

    Edge holonomies are read along the spine of each simplex in vertex order.
    Signs come from the integral fundamental cycle and only matter for N > 2.
    """
    n = X.dimension
    if w.degree != n:
        raise TheoryError(f"cocycle degree {w.degree} does not match dimension {n}")
    if n > MAX_STATE_SUM_DIM:
        raise TheoryError(f"state sums are supported up to dimension {MAX_STATE_SUM_DIM}")
    if f.kind != "coloring" or len(f) != X.count(1):
        raise TheoryError("cocycle state sums need an edge coloring of the complex")
    X.require_closed()
    if w.modulus > 2:
        signs = X.orientation
        if signs is None:
            raise TheoryError(f"complex {X.name!r} has no coherent orientation; "
                              "Z/N state sums with N > 2 need one")
    else:
        signs = (1,) * X.count(n)
    colors = np.asarray(f.values, dtype=np.int64)
    spines = np.asarray(X.spines, dtype=np.int64).reshape(X.count(n), n)
    vals = w.values[tuple(colors[spines].T)]
    return int(np.dot(np.asarray(signs, dtype=np.int64), vals) % w.modulus)


def model_class(M: AlgebraicModel, f: GaugeField) -> list[int]:
    """Read a Z/2 field on the model's presentation as H^1 coordinates.

    The degree-1 generators of the model are dual to the presentation generators.
    """
    if M.presentation is None:
        raise TheoryError(f"model {M.name!r} has no presentation")
    if M.presentation.n_generators != M.beta1 or len(f) != M.beta1:
        raise TheoryError("model presentation generators must match its degree-1 generators")
    return [v % 2 for v in f.values]


def action_value(T: Theory, X: DeltaComplex | AlgebraicModel, f: GaugeField) -> ActionValue:
    if T.kind == "untwisted":
        return _value(T, 0)
    if T.degree != X.dimension:
        raise TheoryError(f"{T.describe()} needs a manifold of dimension {T.degree}, got {X.dimension}")
    if T.kind == "w1_power":
        if isinstance(X, AlgebraicModel):
            return _value(T, tau_from_model(X, model_class(X, f)))
        return _value(T, cup_power_pairing(X, field_class_mod2(f, X, T.group)))
    if isinstance(X, AlgebraicModel):
        raise TheoryError("cocycle theories are unsupported on algebraic models")
    return _value(T, cocycle_state_sum(X, f, T.cocycle))


def coboundary_shift(T: Theory, eta: Sequence | np.ndarray) -> Theory:
    """The same theory with the cocycle moved by the coboundary of eta."""
    if T.kind != "cocycle":
        raise TheoryError("only cocycle theories can be shifted")
    return Theory.from_cocycle(T.cocycle.shifted(eta))
