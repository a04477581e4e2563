"""Finite gauge fields: homomorphisms pi_1(X) -> G and flat G-colorings.

Homotopy classes of maps X -> BG are conjugation orbits of homomorphisms,
taken separately on each connected component; the automorphism group of a
field is the centralizer of its image (product over components).
"""

from __future__ import annotations

import math
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .cocycles import BudgetExceeded
from .groups import FiniteGroup, centralizer_order
from .topology.complex import ComplexError, DeltaComplex
from .topology.homology import CochainMod2

HOM_BUDGET = 10**7


class PresentationError(ValueError):
    pass


def default_names(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(chr(ord("a") + i) for i in range(n))
    return tuple(f"x{i + 1}" for i in range(n))


def parse_word(word: str | Sequence[int], names: Sequence[str]) -> tuple[int, ...]:
    """Letters are generator names; an upper-case first letter means the inverse.

    Returns signed 1-based indices. Lists of signed indices pass through.
    """
    if not isinstance(word, str):
        return tuple(int(x) for x in word)
    lookup = {nm.lower(): i for i, nm in enumerate(names)}
    out = []
    for tok in re.findall(r"[A-Za-z]\d*", word):
        key = tok.lower()
        if key not in lookup:
            raise PresentationError(f"unknown generator {tok!r} in word {word!r}")
        out.append(-(lookup[key] + 1) if tok[0].isupper() else lookup[key] + 1)
    leftover = re.sub(r"[A-Za-z]\d*|[\s*.1]", "", word)
    if leftover:
        raise PresentationError(f"unparsable characters {leftover!r} in word {word!r}")
    return tuple(out)


def format_word(word: Sequence[int], names: Sequence[str]) -> str:
    return "".join(names[abs(x) - 1] if x > 0 else names[abs(x) - 1].upper() for x in word) or "1"


@dataclass(frozen=True)
class Presentation:
    """A group presentation, possibly split into connected components.

    ``components`` lists the generator indices of each component; ``None``
    means a single component holding every generator. An empty tuple is the
    empty manifold.
    """

    n_generators: int
    relators: tuple[tuple[int, ...], ...] = ()
    components: tuple[tuple[int, ...], ...] | None = None
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        n = self.n_generators
        if self.names is None:
            object.__setattr__(self, "names", default_names(n))
        elif len(self.names) != n:
            raise PresentationError("need one name per generator")
        rels = tuple(tuple(int(x) for x in r) for r in self.relators)
        object.__setattr__(self, "relators", rels)
        comps = self.components
        if comps is None:
            comps = (tuple(range(n)),)
        comps = tuple(tuple(int(x) for x in c) for c in comps)
        object.__setattr__(self, "components", comps)
        flat = sorted(x for c in comps for x in c)
        if flat != list(range(n)):
            raise PresentationError("components must partition the generators")
        for r in rels:
            if any(x == 0 or abs(x) > n for x in r):
                raise PresentationError(f"relator {r} references a missing generator")
        for r in rels:
            if r:
                self._relator_component(r)

    def _relator_component(self, r) -> int:
        cs = {self.component_of(abs(x) - 1) for x in r}
        if len(cs) != 1:
            raise PresentationError(f"relator {format_word(r, self.names)} mixes components")
        return cs.pop()

    def component_of(self, gen: int) -> int:
        for k, c in enumerate(self.components):
            if gen in c:
                return k
        raise PresentationError(f"generator {gen} not in any component")

    @classmethod
    def parse(cls, n_generators: int, relators: Iterable = (), components=None, names=None) -> Presentation:
        names = tuple(names) if names else default_names(n_generators)
        return cls(n_generators, tuple(parse_word(r, names) for r in relators),
                   None if components is None else tuple(tuple(c) for c in components), names)

    @classmethod
    def empty(cls) -> Presentation:
        return cls(0, (), ())

    @property
    def n_components(self) -> int:
        return len(self.components)

    def to_json(self) -> dict:
        return {
            "generators": list(self.names),
            "relators": [format_word(r, self.names) for r in self.relators],
            "components": [list(c) for c in self.components],
        }

    def __str__(self) -> str:
        rel = ", ".join(format_word(r, self.names) for r in self.relators)
        return f"<{', '.join(self.names)} | {rel}>"


def disjoint_presentation(*parts: Presentation) -> Presentation:
    offset = 0
    rels, comps, names = [], [], []
    for p in parts:
        rels += [tuple(x + offset if x > 0 else x - offset for x in r) for r in p.relators]
        comps += [tuple(g + offset for g in c) for c in p.components]
        names += list(p.names)
        offset += p.n_generators
    if len(set(names)) != len(names):
        names = list(default_names(offset))
    return Presentation(offset, tuple(rels), tuple(comps), tuple(names))


def times_circle(P: Presentation) -> Presentation:
    """pi_1(Y x S^1): adjoin a central generator to every component."""
    n = P.n_generators
    rels = list(P.relators)
    comps = []
    for k, c in enumerate(P.components):
        t = n + k
        for g in c:
            rels.append((t + 1, g + 1, -(t + 1), -(g + 1)))
        comps.append(c + (t,))
    names = P.names + tuple(f"t{k}" for k in range(len(P.components)))
    return Presentation(n + len(P.components), tuple(rels), tuple(comps), names)


def free_reduce(word: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def tietze_reduce(P: Presentation, *word_lists: Sequence[Sequence[int]]
                  ) -> tuple[Presentation, list[tuple[tuple[int, ...], ...]]]:
    """Remove generators that occur exactly once in some relator.

    Such a relator expresses the generator through the others; it is
    substituted into the remaining relators and into ``word_lists`` (for
    example boundary inclusions), then both are dropped. Shortest relators
    are used first.
    """
    n = P.n_generators
    rels = [free_reduce(r) for r in P.relators]
    lists = [[tuple(w) for w in ws] for ws in word_lists]
    alive = list(range(1, n + 1))
    while True:
        pick = None
        for k in sorted(range(len(rels)), key=lambda k: len(rels[k])):
            r = rels[k]
            for i, x in enumerate(r):
                if sum(1 for y in r if abs(y) == abs(x)) == 1:
                    pick = (k, i)
                    break
            if pick:
                break
        if pick is None:
            break
        k, i = pick
        r = rels.pop(k)
        x = r[i]
        rest = r[i + 1:] + r[:i]  # x * rest = 1 after rotation
        image = tuple(-y for y in reversed(rest)) if x > 0 else rest
        g = abs(x)

        def sub(w):
            out = []
            for y in w:
                if y == g:
                    out += image
                elif y == -g:
                    out += [-z for z in reversed(image)]
                else:
                    out.append(y)
            return free_reduce(out)

        rels = [sub(q) for q in rels]
        lists = [[sub(w) for w in ws] for ws in lists]
        alive.remove(g)
    rels = [r for r in rels if r]
    new = {g: i + 1 for i, g in enumerate(alive)}

    def renum(w):
        return tuple(new[y] if y > 0 else -new[-y] for y in w)

    comps = tuple(tuple(new[g + 1] - 1 for g in c if g + 1 in new) for c in P.components)
    names = tuple(P.names[g - 1] for g in alive)
    Q = Presentation(len(alive), tuple(renum(r) for r in rels), comps, names)
    return Q, [tuple(renum(w) for w in ws) for ws in lists]


def evaluate_word(G: FiniteGroup, word: Sequence[int], images: Sequence[int]) -> int:
    out = 0
    for x in word:
        g = images[x - 1] if x > 0 else int(G.inv[images[-x - 1]])
        out = int(G.mul[out, g])
    return out


@dataclass(frozen=True, order=True)
class GaugeField:
    """A homomorphism (images of generators) or a flat edge coloring."""

    values: tuple[int, ...]
    kind: str = field(default="hom", compare=False)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class FieldOrbit:
    representative: GaugeField
    size: int
    stabilizer: int


def enumerate_homs(P: Presentation, G: FiniteGroup, budget: int = HOM_BUDGET) -> list[GaugeField]:
    """All assignments of generators to G that kill every relator, in lexicographic order."""
    n = P.n_generators
    if G.order**n > budget:
        raise BudgetExceeded(f"|G|^generators = {G.order}^{n} exceeds the budget {budget}")
    # check each relator as soon as its last generator is assigned
    due: list[list[tuple[int, ...]]] = [[] for _ in range(n + 1)]
    for r in P.relators:
        depth = max((abs(x) for x in r), default=0)
        due[depth].append(r)
    if any(evaluate_word(G, r, ()) != 0 for r in due[0]):
        return []
    out: list[GaugeField] = []
    images = [0] * n

    def rec(i: int):
        if i == n:
            out.append(GaugeField(tuple(images)))
            return
        for g in range(G.order):
            images[i] = g
            if all(evaluate_word(G, r, images) == 0 for r in due[i + 1]):
                rec(i + 1)

    rec(0)
    return out


def count_homs(P: Presentation, G: FiniteGroup) -> int:
    return len(enumerate_homs(P, G))


def canonical_field(values: Sequence[int], G: FiniteGroup,
                    components: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], int]:
    """Lexicographically least conjugate (per component) and the stabilizer order."""
    vals = list(values)
    stab = 1
    ct = G.conj_table
    for comp in components:
        if not comp:
            stab *= G.order
            continue
        sub = np.array([values[i] for i in comp], dtype=np.int64)
        cands = ct[:, sub]
        best = min(map(tuple, cands.tolist()))
        for i, x in zip(comp, best):
            vals[i] = x
        stab *= centralizer_order(G, sub.tolist())
    return tuple(vals), stab


def orbit_decomposition(fields: Sequence[GaugeField], G: FiniteGroup,
                        components: Sequence[Sequence[int]] | None = None) -> list[FieldOrbit]:
    """Group fields into conjugation orbits, one conjugating element per component.

    ``components`` lists the field positions acted on together; by default all
    positions form one component.
    """
    if not fields:
        return []
    kind = fields[0].kind
    if components is None:
        components = (tuple(range(len(fields[0]))),)
    counts: Counter = Counter()
    stabs: dict[tuple[int, ...], int] = {}
    for f in fields:
        rep, stab = canonical_field(f.values, G, components)
        counts[rep] += 1
        stabs[rep] = stab
    orbits = []
    for rep in sorted(counts):
        size = counts[rep]
        expected = math.prod(G.order for _ in components) // stabs[rep]
        if size != expected:
            raise ValueError(f"orbit of {rep} has {size} members, expected {expected}; field list incomplete")
        orbits.append(FieldOrbit(GaugeField(rep, kind), size, stabs[rep]))
    return orbits


# Delta-complex route


def spanning_tree(K: DeltaComplex) -> tuple[int, ...]:
    """Edges of a BFS spanning forest of the 1-skeleton, from the lowest vertex of each component."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(K.n_vertices)]
    for e in range(K.count(1)):
        a, b = K.edge_endpoints(e)
        if a != b:
            adj[a].append((e, b))
            adj[b].append((e, a))
    seen = [False] * K.n_vertices
    tree = []
    for root in range(K.n_vertices):
        if seen[root]:
            continue
        seen[root] = True
        q = deque([root])
        while q:
            v = q.popleft()
            for e, w in sorted(adj[v]):
                if not seen[w]:
                    seen[w] = True
                    tree.append(e)
                    q.append(w)
    return tuple(sorted(tree))


def flat_fields_on_complex(K: DeltaComplex, G: FiniteGroup, budget: int = HOM_BUDGET) -> list[GaugeField]:
    """Flat colorings with tree edges gauge-fixed to the identity.

    Flatness on a 2-simplex with vertices 0 < 1 < 2 reads g01 * g12 = g02.
    The search assigns free edges in index order and propagates every
    triangle with two known edges.
    """
    if not K.is_connected:
        raise ComplexError(["complex is disconnected; call flat_fields_on_complex per component "
                            "(DeltaComplex.components())"])
    E = K.count(1)
    tree = set(spanning_tree(K))
    free = [e for e in range(E) if e not in tree]
    if G.order ** len(free) > budget and K.count(2) == 0:
        raise BudgetExceeded(f"|G|^free_edges = {G.order}^{len(free)} exceeds the budget {budget}")
    tris = [(fs[2], fs[0], fs[1]) for fs in K.faces[1]] if K.dimension >= 2 else []  # (e01, e12, e02)
    touching: list[list[int]] = [[] for _ in range(E)]
    for t, (a, b, c) in enumerate(tris):
        for e in {a, b, c}:
            touching[e].append(t)
    mul, inv = G.mul, G.inv
    out: list[GaugeField] = []
    work = [0]

    def propagate(val: list[int], start: list[int]) -> bool:
        queue = deque(start)
        while queue:
            e = queue.popleft()
            for t in touching[e]:
                a, b, c = tris[t]
                va, vb, vc = val[a], val[b], val[c]
                if va >= 0 and vb >= 0:
                    want = int(mul[va, vb])
                    if vc < 0:
                        val[c] = want
                        queue.append(c)
                    elif vc != want:
                        return False
                elif va >= 0 and vc >= 0:
                    if vb < 0:
                        val[b] = int(mul[inv[va], vc])
                        queue.append(b)
                elif vb >= 0 and vc >= 0:
                    if va < 0:
                        val[a] = int(mul[vc, inv[vb]])
                        queue.append(a)
        return True

    def rec(val: list[int]):
        work[0] += 1
        if work[0] > budget:
            raise BudgetExceeded(f"flat field search exceeded {budget} steps")
        nxt = next((e for e in free if val[e] < 0), None)
        if nxt is None:
            out.append(GaugeField(tuple(val), "coloring"))
            return
        for g in range(G.order):
            trial = list(val)
            trial[nxt] = g
            if propagate(trial, [nxt]):
                rec(trial)

    init = [-1] * E
    for e in tree:
        init[e] = 0
    if propagate(init, sorted(tree)):
        rec(init)
    out.sort()
    return out


def complex_presentation(K: DeltaComplex) -> Presentation:
    """Edge-path presentation of pi_1: non-tree edges, one relator per triangle."""
    tree = set(spanning_tree(K))
    free = [e for e in range(K.count(1)) if e not in tree]
    gen = {e: i + 1 for i, e in enumerate(free)}
    rels = []
    if K.dimension >= 2:
        for d0, d1, d2 in K.faces[1]:
            word = []
            for e, s in ((d2, 1), (d0, 1), (d1, -1)):
                if e in gen:
                    word.append(s * gen[e])
            rels.append(tuple(word))
    labels = K.vertex_components
    roots = sorted(set(labels))
    comps = []
    for r in roots:
        comps.append(tuple(gen[e] - 1 for e in free if labels[K.edge_endpoints(e)[0]] == r))
    return Presentation(len(free), tuple(rels), tuple(comps), tuple(f"e{e}" for e in free))


def field_class_mod2(f: GaugeField, K: DeltaComplex, G: FiniteGroup) -> CochainMod2:
    """Read a Z/2 coloring as the 1-cocycle representing f^* w_1."""
    if G.order != 2:
        raise ValueError("field_class_mod2 needs the gauge group Z/2")
    if f.kind != "coloring" or len(f) != K.count(1):
        raise ValueError("expected an edge coloring of this complex")
    return CochainMod2(K, 1, np.array(f.values, dtype=np.uint8))
