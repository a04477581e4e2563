"""Finite groups given by multiplication tables.

Elements are the indices 0..m-1 and index 0 is always the identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

MAX_ORDER = 64


class GroupAxiomError(ValueError):
    """A multiplication table that fails one of the group axioms."""


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    mul: np.ndarray
    names: tuple[str, ...]
    label: str = "G"
    inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        mul = np.asarray(self.mul, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1]:
            raise GroupAxiomError("multiplication table must be square")
        m = mul.shape[0]
        if m < 1 or m > MAX_ORDER:
            raise GroupAxiomError(f"group order {m} outside [1, {MAX_ORDER}]")
        if len(self.names) != m:
            raise GroupAxiomError("need one name per element")
        if mul.min() < 0 or mul.max() >= m:
            raise GroupAxiomError("table entries must be element indices")
        ar = np.arange(m)
        if not (np.array_equal(mul[0], ar) and np.array_equal(mul[:, 0], ar)):
            bad = next(i for i in range(m) if mul[0, i] != i or mul[i, 0] != i)
            raise GroupAxiomError(f"element 0 is not a two-sided identity (fails at element {bad})")
        lhs = mul[mul[:, :, None], ar[None, None, :]]  # (ab)c
        rhs = mul[ar[:, None, None], mul[None, :, :]]  # a(bc)
        if not np.array_equal(lhs, rhs):
            a, b, c = map(int, np.argwhere(lhs != rhs)[0])
            raise GroupAxiomError(f"associativity fails at triple ({a}, {b}, {c})")
        inv = np.full(m, -1, dtype=np.int64)
        for a in range(m):
            hits = np.flatnonzero(mul[a] == 0)
            if len(hits) != 1 or mul[hits[0], a] != 0:
                raise GroupAxiomError(f"element {a} has no two-sided inverse")
            inv[a] = hits[0]
        mul.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "inv", inv)

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label}, order={self.order})"

    def m(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def product(self, elems: Iterable[int]) -> int:
        out = 0
        for g in elems:
            out = int(self.mul[out, g])
        return out

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return int(self.mul[self.mul[g, x], self.inv[g]])

    @cached_property
    def conj_table(self) -> np.ndarray:
        """conj_table[g, x] = g x g^-1."""
        return self.mul[self.mul, self.inv[:, None]]

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = int(self.mul[x, g])
            k += 1
        return k

    def exponent(self) -> int:
        from math import lcm

        return lcm(*(self.element_order(g) for g in range(self.order)))

    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        classes = []
        for x in range(self.order):
            if x in seen:
                continue
            cls = tuple(sorted({self.conj(g, x) for g in range(self.order)}))
            seen.update(cls)
            classes.append(cls)
        return classes

    def centralizer(self, elems: Iterable[int]) -> list[int]:
        s = list(set(elems))
        return [g for g in range(self.order) if all(self.mul[g, x] == self.mul[x, g] for x in s)]

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"{self.label} has no element named {name!r}") from None


def centralizer_order(G: FiniteGroup, S: Iterable[int]) -> int:
    """Number of elements of G commuting with every element of S."""
    s = np.unique(np.fromiter(S, dtype=np.int64))
    if s.size == 0:
        return G.order
    ok = np.all(G.mul[:, s] == G.mul[s, :].T, axis=1)
    return int(ok.sum())


# construction


def cyclic(m: int) -> FiniteGroup:
    ar = np.arange(m)
    return FiniteGroup((ar[:, None] + ar[None, :]) % m, tuple(str(i) for i in range(m)), f"Z/{m}")


def direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    """Elements (a, b) indexed a * |B| + b, lexicographic in (a, b)."""
    ma, mb = A.order, B.order
    if ma * mb > MAX_ORDER:
        raise GroupAxiomError(f"product order {ma * mb} exceeds {MAX_ORDER}")
    idx = np.arange(ma * mb)
    a, b = idx // mb, idx % mb
    mul = A.mul[a[:, None], a[None, :]] * mb + B.mul[b[:, None], b[None, :]]
    names = tuple(f"({A.names[i]},{B.names[j]})" for i in range(ma) for j in range(mb))
    return FiniteGroup(mul, names, f"{A.label}x{B.label}")


def symmetric(k: int) -> FiniteGroup:
    """S_k with permutations in lexicographic order (identity first)."""
    if not 1 <= k <= 4:
        raise GroupAxiomError("symmetric groups are supported for k <= 4")
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    # (p q)(i) = p(q(i)): apply q first
    mul = [[index[tuple(p[q[i]] for i in range(k))] for q in perms] for p in perms]
    names = tuple("".join(str(x + 1) for x in p) for p in perms)
    return FiniteGroup(np.array(mul), names, f"S{k}")


def from_table(table: Sequence[Sequence[int]], names: Sequence[str] | None = None,
               label: str = "G") -> FiniteGroup:
    table = np.asarray(table, dtype=np.int64)
    if names is None:
        names = [str(i) for i in range(len(table))]
    return FiniteGroup(table, tuple(names), label)


def build_group(spec) -> FiniteGroup:
    """Build a group from a literal.

    Accepted forms: ``{"cyclic": m}``, ``{"symmetric": k}``,
    ``{"product": [spec, spec, ...]}`` and ``{"table": [[...]], "names": [...]}``.
    Strings such as ``"Z2"``, ``"S3"``, ``"Z2xZ2"`` are shorthand.
    """
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        parts = spec.replace("×", "x").split("x")
        if len(parts) > 1:
            return build_group({"product": parts})
        s = spec.strip().replace("/", "")
        if s[:1] in "ZC" and s[1:].isdigit():
            return cyclic(int(s[1:]))
        if s[:1] == "S" and s[1:].isdigit():
            return symmetric(int(s[1:]))
        raise GroupAxiomError(f"unrecognised group shorthand {spec!r}")
    if not isinstance(spec, dict) or len({"cyclic", "symmetric", "product", "table"} & spec.keys()) != 1:
        raise GroupAxiomError(f"group literal must have exactly one of cyclic/symmetric/product/table: {spec!r}")
    if "cyclic" in spec:
        m = int(spec["cyclic"])
        if not 1 <= m <= MAX_ORDER:
            raise GroupAxiomError(f"cyclic order {m} outside [1, {MAX_ORDER}]")
        return cyclic(m)
    if "symmetric" in spec:
        return symmetric(int(spec["symmetric"]))
    if "product" in spec:
        factors = [build_group(s) for s in spec["product"]]
        if not factors:
            return cyclic(1)
        out = factors[0]
        for f in factors[1:]:
            out = direct_product(out, f)
        return out
    return from_table(spec["table"], spec.get("names"), spec.get("label", "G"))
