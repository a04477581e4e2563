"""Partition functions, state spaces and bordism matrices by finite path integral.

Closed manifolds: Z = sum over gauge classes of phi(S) / |Aut|, with Aut the
centralizer of the image. Bordisms are encoded at the level of fundamental
groups: presentations of the two ends and of the bordism, plus words giving
the images of boundary generators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .action import Theory, TheoryError, action_value
from .cocycles import GroupCocycle, cup_power_cocycle
from .fields import (
    HOM_BUDGET, FieldOrbit, GaugeField, Presentation, canonical_field,
    complex_presentation, count_homs, disjoint_presentation, enumerate_homs, evaluate_word,
    flat_fields_on_complex, format_word, orbit_decomposition, tietze_reduce, times_circle,
)
from .groups import FiniteGroup
from .scalars import CyclotomicScalar
from .topology.builtins import kuhn_torus
from .topology.complex import DeltaComplex
from .topology.homology import cup_power_pairing, homology_mod2
from .topology.models import AlgebraicModel, tau_from_model

Manifold = Union[DeltaComplex, AlgebraicModel, Presentation]
ROUTES = ("auto", "complex", "presentation", "model")


class ProductFormulaRefused(ValueError):
    """The closed form is only available when beta_1 = 1 or n is a power of 2."""


class BordismError(ValueError):
    pass


# closed manifolds


@dataclass(frozen=True, eq=False)
class ClosedManifoldJob:
    theory: Theory
    manifold: Manifold
    route: str = "auto"
    budget: int = HOM_BUDGET

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(f"unknown route {self.route!r}; expected one of {ROUTES}")


def _orbit_sum(T: Theory, X, orbits: Sequence[FieldOrbit]) -> CyclotomicScalar:
    total = CyclotomicScalar.zero(T.modulus)
    for orb in orbits:
        total = total + action_value(T, X, orb.representative).scalar / orb.stabilizer
    return total


def _closed_complex(T: Theory, K: DeltaComplex, budget: int) -> CyclotomicScalar:
    out = CyclotomicScalar.one(T.modulus)
    for part in K.components():
        fields = flat_fields_on_complex(part, T.group, budget)
        out = out * _orbit_sum(T, part, orbit_decomposition(fields, T.group))
    return out


def _closed_presentation(T: Theory, P: Presentation, budget: int) -> CyclotomicScalar:
    if T.kind != "untwisted":
        raise TheoryError("bare presentations only carry the untwisted theory")
    orbits = orbit_decomposition(enumerate_homs(P, T.group, budget), T.group, P.components)
    return _orbit_sum(T, None, orbits)


def _closed_model(T: Theory, M: AlgebraicModel, budget: int) -> CyclotomicScalar:
    if M.presentation is None:
        raise TheoryError(f"model {M.name!r} needs a presentation to enumerate fields")
    P = M.presentation
    orbits = orbit_decomposition(enumerate_homs(P, T.group, budget), T.group, P.components)
    return _orbit_sum(T, M, orbits)


def partition_closed(job: ClosedManifoldJob) -> CyclotomicScalar:
    """Sum of phi(action) / stabilizer order over gauge classes on a closed manifold."""
    T, X, route = job.theory, job.manifold, job.route
    if isinstance(X, DeltaComplex):
        if route == "presentation":
            return _closed_presentation(T, tietze_reduce(complex_presentation(X))[0], job.budget)
        if route not in ("auto", "complex"):
            raise ValueError(f"route {route!r} does not apply to a complex")
        return _closed_complex(T, X, job.budget)
    if isinstance(X, AlgebraicModel):
        if route not in ("auto", "model", "presentation"):
            raise ValueError(f"route {route!r} does not apply to a model")
        if route == "presentation":
            return _closed_presentation(T, X.presentation, job.budget)
        return _closed_model(T, X, job.budget)
    if route not in ("auto", "presentation"):
        raise ValueError(f"route {route!r} does not apply to a presentation")
    return _closed_presentation(T, X, job.budget)


def untwisted_by_count(P: Presentation, G: FiniteGroup) -> Fraction:
    """#Hom / |G|^(components), the direct count."""
    return Fraction(count_homs(P, G), G.order ** P.n_components)


# the w1 power closed form


def cup_power_form(X: DeltaComplex | AlgebraicModel, n: int) -> list[int]:
    """<[X], v^n> on a basis v_1..v_b of H^1(X; Z/2)."""
    if isinstance(X, AlgebraicModel):
        b = X.beta1
        return [tau_from_model(X, [int(i == k) for i in range(b)]) for k in range(b)]
    if X.dimension != n:
        raise TheoryError(f"power {n} does not match dimension {X.dimension}")
    return [cup_power_pairing(X, v) for v in homology_mod2(X).h1_basis]


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def partition_product_formula(X: DeltaComplex | AlgebraicModel, n: int) -> CyclotomicScalar:
    """(1/2) prod_k (1 + (-1)^tau(v_k)) for a connected X.

    Refuses unless beta_1 = 1 or n is a power of 2; outside those cases tau
    need not be additive and the product says nothing about the sum.
    """
    if isinstance(X, DeltaComplex) and not X.is_connected:
        raise ProductFormulaRefused("the closed form is for connected manifolds")
    if X.dimension != n:
        raise ProductFormulaRefused(f"power {n} does not match dimension {X.dimension}")
    taus = cup_power_form(X, n)
    if len(taus) != 1 and not _is_power_of_two(n):
        raise ProductFormulaRefused(f"beta_1 = {len(taus)} and n = {n} is not a power of 2")
    value = Fraction(1, 2) * math.prod(1 + (-1) ** t for t in taus)
    return CyclotomicScalar.rational(value, 2)


# state spaces


@dataclass(frozen=True)
class StateSpace:
    basis: tuple[FieldOrbit, ...]
    admissible: tuple[bool, ...]

    @property
    def dimension(self) -> int:
        return sum(self.admissible)

    @property
    def stabilizers(self) -> tuple[int, ...]:
        return tuple(o.stabilizer for o in self.basis)


def transgression(w: GroupCocycle, g: int) -> dict[int, int]:
    """The character h -> w(g, h) - w(h, h^-1 g h) on the centralizer of g, in Z/N."""
    G = w.group
    out = {}
    for h in G.centralizer([g]):
        x = G.conj(int(G.inv[h]), g)
        out[h] = (w(g, h) - w(h, x)) % w.modulus
    return out


def _degree_two_cocycle(T: Theory) -> GroupCocycle:
    if T.kind == "w1_power" and T.power == 2:
        return cup_power_cocycle(T.group, 2)
    if T.kind == "cocycle" and T.cocycle.degree == 2:
        return T.cocycle
    raise TheoryError(f"twisted state spaces are only available in dimension 2, not for {T.describe()}")


def _is_circles(Y: Presentation) -> bool:
    return all(len(c) == 1 for c in Y.components) and not any(Y.relators)


def state_space(T: Theory, Y: Presentation, budget: int = HOM_BUDGET) -> StateSpace:
    orbits = tuple(orbit_decomposition(enumerate_homs(Y, T.group, budget), T.group, Y.components))
    if T.kind == "untwisted":
        return StateSpace(orbits, (True,) * len(orbits))
    w = _degree_two_cocycle(T)
    if not _is_circles(Y):
        raise TheoryError("twisted state spaces are only available for disjoint unions of circles")
    ok = []
    for orb in orbits:
        vals = orb.representative.values
        ok.append(all(not any(transgression(w, vals[c[0]]).values()) for c in Y.components))
    return StateSpace(orbits, tuple(ok))


def dim_via_torus(T: Theory, Y: Presentation, budget: int = HOM_BUDGET) -> CyclotomicScalar:
    """Z(Y x S^1). Twisted 2d theories use the state sum on a triangulated torus per circle."""
    if T.kind == "untwisted":
        return partition_closed(ClosedManifoldJob(T, times_circle(Y), budget=budget))
    w = _degree_two_cocycle(T)
    if not _is_circles(Y):
        raise TheoryError("twisted torus dimensions are only available for disjoint unions of circles")
    torus = kuhn_torus(2, 1, "torus")
    per_circle = partition_closed(ClosedManifoldJob(Theory.from_cocycle(w), torus, budget=budget))
    return per_circle ** Y.n_components


# bordisms


Word = tuple[int, ...]


def _words(ws) -> tuple[Word, ...]:
    return tuple(tuple(int(x) for x in w) for w in ws)


@dataclass(frozen=True)
class Bordism:
    """X: Y0 -> Y1 given by presentations and images of boundary generators.

    ``source_map[j]`` is the word in X's generators that generator j of Y0
    maps to (based at the basepoint of the X component it lands in).
    ``source_components[c]`` names that X component for each Y0 component and
    is inferred from the words when omitted.
    """

    source: Presentation
    target: Presentation
    total: Presentation
    source_map: tuple[Word, ...]
    target_map: tuple[Word, ...]
    source_components: tuple[int, ...] | None = None
    target_components: tuple[int, ...] | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "source_map", _words(self.source_map))
        object.__setattr__(self, "target_map", _words(self.target_map))
        for side in ("source", "target"):
            Y: Presentation = getattr(self, side)
            words = getattr(self, f"{side}_map")
            if len(words) != Y.n_generators:
                raise BordismError(f"{side} map needs one word per generator ({Y.n_generators})")
            for w in words:
                if any(x == 0 or abs(x) > self.total.n_generators for x in w):
                    raise BordismError(f"{side} word {w} references a missing generator of X")
            comps = getattr(self, f"{side}_components")
            comps = self._infer(Y, words) if comps is None else tuple(int(c) for c in comps)
            if len(comps) != Y.n_components or any(not 0 <= c < self.total.n_components for c in comps):
                raise BordismError(f"{side} components must map each component into X")
            for k, c in enumerate(Y.components):
                for g in c:
                    if any(self.total.component_of(abs(x) - 1) != comps[k] for x in words[g]):
                        raise BordismError(f"{side} generator {Y.names[g]} leaves its X component")
            object.__setattr__(self, f"{side}_components", comps)

    def _infer(self, Y: Presentation, words) -> tuple[int, ...]:
        out = []
        for c in Y.components:
            hit = {self.total.component_of(abs(x) - 1) for g in c for x in words[g]}
            if len(hit) == 1:
                out.append(hit.pop())
            elif not hit and self.total.n_components == 1:
                out.append(0)
            else:
                raise BordismError("cannot infer which X component a boundary component lies in; "
                                   "pass source_components / target_components")
        return tuple(out)

    def restrict(self, G: FiniteGroup, sigma: Sequence[int], side: str) -> tuple[int, ...]:
        words = self.source_map if side == "source" else self.target_map
        return tuple(evaluate_word(G, w, sigma) for w in words)

    def validate(self, G: FiniteGroup, fields: Sequence[GaugeField] | None = None) -> None:
        """Every X-field must restrict to fields on both ends."""
        if fields is None:
            fields = enumerate_homs(self.total, G)
        for side in ("source", "target"):
            Y: Presentation = getattr(self, side)
            for f in fields:
                r = self.restrict(G, f.values, side)
                for rel in Y.relators:
                    if evaluate_word(G, rel, r) != 0:
                        raise BordismError(f"{side} relator {format_word(rel, Y.names)} is not "
                                           f"killed by the X-field {f.values}")

    def describe(self) -> str:
        return self.name or f"{self.source} -> {self.target}"


@dataclass(frozen=True)
class BordismMatrix:
    """Rows indexed by target orbits, columns by source orbits."""

    rows: tuple[GaugeField, ...]
    cols: tuple[GaugeField, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    def __matmul__(self, other: BordismMatrix) -> BordismMatrix:
        if self.cols != other.rows:
            raise BordismError("inner bases differ")
        k = len(self.cols)
        ent = tuple(tuple(sum((self.entries[i][t] * other.entries[t][j] for t in range(k)), Fraction(0))
                          for j in range(len(other.cols))) for i in range(len(self.rows)))
        return BordismMatrix(self.rows, other.cols, ent)

    def kron(self, other: BordismMatrix) -> BordismMatrix:
        rows = tuple(GaugeField(a.values + b.values) for a in self.rows for b in other.rows)
        cols = tuple(GaugeField(a.values + b.values) for a in self.cols for b in other.cols)
        ent = tuple(tuple(x * y for x in r1 for y in r2) for r1 in self.entries for r2 in other.entries)
        return BordismMatrix(rows, cols, ent)

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise BordismError("trace needs equal row and column bases")
        return sum((self.entries[i][i] for i in range(len(self.rows))), Fraction(0))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def to_json(self) -> dict:
        return {
            "rows": [list(r.values) for r in self.rows],
            "cols": [list(c.values) for c in self.cols],
            "entries": [[str(x) for x in r] for r in self.entries],
        }


def bordism_matrix(T: Theory, B: Bordism, budget: int = HOM_BUDGET) -> BordismMatrix:
    """M[beta, alpha] = |Aut alpha| * sum over X-classes restricting to (alpha, beta) of 1 / |Aut sigma|."""
    if T.kind != "untwisted":
        raise TheoryError("bordism matrices are only provided for the untwisted theory")
    G = T.group
    fields = enumerate_homs(B.total, G, budget)
    B.validate(G, fields)
    src = state_space(T, B.source, budget).basis
    tgt = state_space(T, B.target, budget).basis
    col = {o.representative.values: j for j, o in enumerate(src)}
    row = {o.representative.values: i for i, o in enumerate(tgt)}
    M = [[Fraction(0)] * len(src) for _ in tgt]
    for orb in orbit_decomposition(fields, G, B.total.components):
        sigma = orb.representative.values
        a, stab_a = canonical_field(B.restrict(G, sigma, "source"), G, B.source.components)
        b, _ = canonical_field(B.restrict(G, sigma, "target"), G, B.target.components)
        M[row[b]][col[a]] += Fraction(stab_a, orb.stabilizer)
    return BordismMatrix(tuple(o.representative for o in tgt), tuple(o.representative for o in src),
                         tuple(tuple(r) for r in M))


def compose(second: Bordism, first: Bordism) -> Bordism:
    """second o first, glued along first.target = second.source.

    The glued fundamental group is a graph of groups: one vertex per component
    of either bordism, one edge per component of the middle boundary, and an
    edge letter t with t * i1(y) * t^-1 = i0'(y) for each middle generator y.
    Letters on a spanning forest are set to 1.
    """
    Y = first.target
    if Y.n_generators != second.source.n_generators or Y.components != second.source.components:
        raise BordismError("middle boundaries do not match")
    X1, X2 = first.total, second.total
    n1 = X1.n_generators
    v1, v2 = X1.n_components, X2.n_components
    edges = [(first.target_components[e], v1 + second.source_components[e]) for e in range(Y.n_components)]

    parent = list(range(v1 + v2))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    stable = {}
    for e, (a, b) in enumerate(edges):
        ra, rb = find(a), find(b)
        if ra == rb:
            stable[e] = n1 + X2.n_generators + len(stable)
        else:
            parent[max(ra, rb)] = min(ra, rb)
    n = n1 + X2.n_generators + len(stable)

    def shift(w: Word) -> Word:
        return tuple(x + n1 if x > 0 else x - n1 for x in w)

    rels = list(X1.relators) + [shift(r) for r in X2.relators]
    for e, c in enumerate(Y.components):
        t = stable.get(e)
        for y in c:
            lhs = first.target_map[y]
            if t is not None:
                lhs = (t + 1,) + lhs + (-(t + 1),)
            rhs = shift(second.source_map[y])
            rels.append(lhs + tuple(-x for x in reversed(rhs)))

    vertex_gens = [list(c) for c in X1.components] + [[g + n1 for g in c] for c in X2.components]
    for e, t in stable.items():
        vertex_gens[edges[e][0]].append(t)
    roots = sorted({find(v) for v in range(v1 + v2)})
    comp_index = {r: k for k, r in enumerate(roots)}
    comps: list[list[int]] = [[] for _ in roots]
    for v in range(v1 + v2):
        comps[comp_index[find(v)]] += vertex_gens[v]
    names = X1.names + X2.names + tuple(f"t{e}" for e in stable)
    if len(set(names)) != len(names):
        names = None
    total = Presentation(n, tuple(rels), tuple(tuple(sorted(c)) for c in comps), names)
    total, (src_map, tgt_map) = tietze_reduce(total, first.source_map,
                                              [shift(w) for w in second.target_map])
    return Bordism(
        first.source, second.target, total, src_map, tgt_map,
        tuple(comp_index[find(c)] for c in first.source_components),
        tuple(comp_index[find(v1 + c)] for c in second.target_components),
        f"({second.describe()}) o ({first.describe()})" if first.name and second.name else "",
    )


def disjoint_union(*parts: Bordism) -> Bordism:
    def offset_words(words, k):
        return tuple(tuple(x + k if x > 0 else x - k for x in w) for w in words)

    src_maps, tgt_maps, src_comps, tgt_comps = [], [], [], []
    gen_off = comp_off = 0
    for B in parts:
        src_maps += offset_words(B.source_map, gen_off)
        tgt_maps += offset_words(B.target_map, gen_off)
        src_comps += [c + comp_off for c in B.source_components]
        tgt_comps += [c + comp_off for c in B.target_components]
        gen_off += B.total.n_generators
        comp_off += B.total.n_components
    return Bordism(
        disjoint_presentation(*(B.source for B in parts)),
        disjoint_presentation(*(B.target for B in parts)),
        disjoint_presentation(*(B.total for B in parts)),
        tuple(src_maps), tuple(tgt_maps), tuple(src_comps), tuple(tgt_comps),
        " + ".join(B.describe() for B in parts),
    )


# standard surfaces with boundary

CIRCLE = Presentation.parse(1, [])
EMPTY = Presentation.empty()
POINTLIKE = Presentation(0, (), ((),))  # a simply connected component


def cylinder() -> Bordism:
    return Bordism(CIRCLE, CIRCLE, CIRCLE, ((1,),), ((1,),), name="cylinder")


def disk_in() -> Bordism:
    """The disk as a bordism from nothing to a circle."""
    return Bordism(EMPTY, CIRCLE, POINTLIKE, (), ((),), (), (0,), name="disk_in")


def disk_out() -> Bordism:
    """The disk as a bordism from a circle to nothing."""
    return Bordism(CIRCLE, EMPTY, POINTLIKE, ((),), (), (0,), (), name="disk_out")


def pants() -> Bordism:
    """Two circles merging into one: the free group on a, b; the outgoing loop is ab."""
    two = disjoint_presentation(CIRCLE, CIRCLE)
    free2 = Presentation.parse(2, [])
    return Bordism(two, CIRCLE, free2, ((1,), (2,)), ((1, 2),), name="pants")


def copants() -> Bordism:
    """One circle splitting into two."""
    two = disjoint_presentation(CIRCLE, CIRCLE)
    free2 = Presentation.parse(2, [])
    return Bordism(CIRCLE, two, free2, ((1, 2),), ((1,), (2,)), name="copants")


STANDARD_BORDISMS = {
    "cylinder": cylinder,
    "disk_in": disk_in,
    "disk_out": disk_out,
    "pants": pants,
    "copants": copants,
}


def closed_value(T: Theory, B: Bordism) -> Fraction:
    """Z of a bordism between empty manifolds, read off its 1x1 matrix."""
    if B.source.n_components or B.target.n_components:
        raise BordismError("bordism has nonempty boundary")
    return bordism_matrix(T, B).entries[0][0]
