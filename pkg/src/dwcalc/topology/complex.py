"""Vertex-ordered Delta-complexes.

A k-simplex (k >= 1) is stored as the tuple of its k+1 faces, face i being
the (k-1)-simplex opposite vertex i. Vertices are just indices. This allows
identifications inside a single simplex, so the torus, Klein bottle and RP^2
each fit in two triangles.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence


class ComplexError(ValueError):
    """Invalid Delta-complex input; ``issues`` lists every problem found."""

    def __init__(self, issues: Sequence[str]):
        self.issues = list(issues)
        super().__init__("; ".join(self.issues[:5]) + (" ..." if len(self.issues) > 5 else ""))


@dataclass(frozen=True, eq=False)
class DeltaComplex:
    n_vertices: int
    faces: tuple[tuple[tuple[int, ...], ...], ...]
    name: str = ""
    orientation_hint: tuple[int, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        faces = tuple(tuple(tuple(int(x) for x in s) for s in level) for level in self.faces)
        object.__setattr__(self, "faces", faces)
        issues = self.validation_issues()
        if issues:
            raise ComplexError(issues)

    # structure
    @property
    def dimension(self) -> int:
        return len(self.faces)

    def count(self, k: int) -> int:
        if k == 0:
            return self.n_vertices
        if 1 <= k <= self.dimension:
            return len(self.faces[k - 1])
        return 0

    def face(self, k: int, s: int, i: int) -> int:
        return self.faces[k - 1][s][i]

    def vertices(self, k: int, s: int) -> tuple[int, ...]:
        """Vertex ids of simplex s of dimension k, in order."""
        if k == 0:
            return (s,)
        last = self.face(k, s, k)  # drops vertex k
        head = self.vertices(k - 1, last)
        tail = self.vertices(k - 1, self.face(k, s, 0))[-1]
        return head + (tail,)

    def subface(self, k: int, s: int, keep: Sequence[int]) -> int:
        """Index of the face spanned by the vertices at positions ``keep``."""
        keep = sorted(keep)
        cur_k, cur = k, s
        for v in sorted(set(range(k + 1)) - set(keep), reverse=True):
            cur = self.face(cur_k, cur, v)
            cur_k -= 1
        return cur

    def edge(self, k: int, s: int, i: int, j: int) -> int:
        return self.subface(k, s, (i, j))

    @cached_property
    def spines(self) -> tuple[tuple[int, ...], ...]:
        """For each top simplex, its consecutive edges (0,1), (1,2), ..., (n-1,n)."""
        n = self.dimension
        return tuple(tuple(self.edge(n, s, i, i + 1) for i in range(n)) for s in range(self.count(n)))

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * self.count(k) for k in range(self.dimension + 1))

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        end, start = self.faces[0][e]
        return start, end

    # checks
    def validation_issues(self) -> list[str]:
        issues = []
        for k, level in enumerate(self.faces, start=1):
            below = self.n_vertices if k == 1 else len(self.faces[k - 2])
            for s, fs in enumerate(level):
                if len(fs) != k + 1:
                    issues.append(f"{k}-simplex {s} has {len(fs)} faces, expected {k + 1}")
                elif any(not 0 <= f < below for f in fs):
                    issues.append(f"{k}-simplex {s} references a missing {k - 1}-simplex")
        if issues:
            return issues
        for k in range(2, self.dimension + 1):
            for s, fs in enumerate(self.faces[k - 1]):
                for i, j in itertools.combinations(range(k + 1), 2):
                    a = self.faces[k - 2][fs[j]][i]
                    b = self.faces[k - 2][fs[i]][j - 1]
                    if a != b:
                        issues.append(f"face identity d{i}d{j} = d{j - 1}d{i} fails on {k}-simplex {s}")
        return issues

    @cached_property
    def cofaces_of_codim1(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """For each (n-1)-simplex, its incidences (top simplex, face position)."""
        n = self.dimension
        inc: list[list[tuple[int, int]]] = [[] for _ in range(self.count(n - 1))]
        for s in range(self.count(n)):
            for i, f in enumerate(self.faces[n - 1][s]):
                inc[f].append((s, i))
        return tuple(tuple(x) for x in inc)

    @cached_property
    def is_closed_pseudomanifold(self) -> bool:
        if self.dimension == 0 or self.count(self.dimension) == 0:
            return False
        return all(len(c) == 2 for c in self.cofaces_of_codim1)

    @cached_property
    def vertex_components(self) -> tuple[int, ...]:
        """Component label (smallest vertex id) for each vertex."""
        parent = list(range(self.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        if self.dimension >= 1:
            for end, start in self.faces[0]:
                a, b = find(start), find(end)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        return tuple(find(v) for v in range(self.n_vertices))

    @property
    def is_connected(self) -> bool:
        return len(set(self.vertex_components)) == 1

    def require_closed(self) -> None:
        if not self.is_closed_pseudomanifold:
            bad = [f for f, c in enumerate(self.cofaces_of_codim1) if len(c) != 2]
            raise ComplexError([f"{self.dimension - 1}-simplex {f} is a face of "
                                f"{len(self.cofaces_of_codim1[f])} top simplices, expected 2" for f in bad]
                               or ["complex has no top-dimensional simplices"])

    @cached_property
    def orientation(self) -> tuple[int, ...] | None:
        """Signs making the sum of top simplices an integral cycle, or None.

        Propagated across codimension-1 faces, first simplex of each component
        positive. A supplied hint is validated instead of recomputed.
        """
        n = self.dimension
        self.require_closed()
        if self.orientation_hint is not None:
            eps = tuple(self.orientation_hint)
            return eps if self._is_integral_cycle(eps) else None
        top = self.count(n)
        eps: list[int | None] = [None] * top
        adj: list[list[tuple[int, int, int]]] = [[] for _ in range(top)]
        for f, inc in enumerate(self.cofaces_of_codim1):
            (s1, i1), (s2, i2) = inc
            c1, c2 = (-1) ** i1, (-1) ** i2
            if s1 == s2:
                if c1 + c2 != 0:
                    return None
                continue
            # eps1*c1 + eps2*c2 = 0
            adj[s1].append((s2, c1, c2))
            adj[s2].append((s1, c2, c1))
        for root in range(top):
            if eps[root] is not None:
                continue
            eps[root] = 1
            queue = deque([root])
            while queue:
                s = queue.popleft()
                for t, cs, ct in adj[s]:
                    want = -eps[s] * cs * ct
                    if eps[t] is None:
                        eps[t] = want
                        queue.append(t)
                    elif eps[t] != want:
                        return None
        return tuple(int(e) for e in eps)

    def _is_integral_cycle(self, eps) -> bool:
        n = self.dimension
        if len(eps) != self.count(n) or any(e not in (1, -1) for e in eps):
            return False
        tot = [0] * self.count(n - 1)
        for s, fs in enumerate(self.faces[n - 1]):
            for i, f in enumerate(fs):
                tot[f] += eps[s] * (-1) ** i
        return not any(tot)

    @property
    def is_orientable(self) -> bool:
        return self.orientation is not None

    # components
    def components(self) -> list[DeltaComplex]:
        """Connected components as separate complexes, ordered by smallest vertex."""
        labels = self.vertex_components
        roots = sorted(set(labels))
        if len(roots) == 1:
            return [self]
        out = []
        for r in roots:
            vmap = {v: i for i, v in enumerate(v for v in range(self.n_vertices) if labels[v] == r)}
            maps = [vmap]
            new_faces = []
            for k in range(1, self.dimension + 1):
                prev = maps[-1]
                keep = [s for s in range(self.count(k)) if labels[self.vertices(k, s)[0]] == r]
                cur = {s: i for i, s in enumerate(keep)}
                new_faces.append(tuple(tuple(prev[f] for f in self.faces[k - 1][s]) for s in keep))
                maps.append(cur)
            hint = None
            if self.orientation_hint is not None:
                hint = tuple(self.orientation_hint[s] for s in sorted(maps[-1], key=maps[-1].get))
            out.append(DeltaComplex(len(vmap), tuple(new_faces), f"{self.name}[{len(out)}]", hint))
        return out

    def to_json(self) -> dict:
        return {
            "vertices": self.n_vertices,
            "faces": {str(k): [list(s) for s in level] for k, level in enumerate(self.faces, start=1)},
        }

    def __repr__(self) -> str:
        counts = ",".join(str(self.count(k)) for k in range(self.dimension + 1))
        return f"DeltaComplex({self.name or 'unnamed'}, f=({counts}))"


def from_top_simplices(tops: Sequence[Sequence[int]], name: str = "",
                       orientation: Sequence[int] | None = None) -> DeltaComplex:
    """Build a complex from top simplices given as ordered vertex tuples.

    Every face is the ordered sub-tuple; the same vertex set must not appear
    with two different orders.
    """
    tops = [tuple(int(v) for v in t) for t in tops]
    if not tops:
        raise ComplexError(["no simplices given"])
    n = len(tops[0]) - 1
    issues = []
    for t in tops:
        if len(t) != n + 1:
            issues.append(f"simplex {t} has the wrong dimension")
        elif len(set(t)) != len(t):
            issues.append(f"simplex {t} repeats a vertex; use the faces form for identifications")
    if issues:
        raise ComplexError(issues)
    verts = sorted({v for t in tops for v in t})
    vid = {v: i for i, v in enumerate(verts)}
    levels: list[dict[frozenset, tuple[int, ...]]] = [dict() for _ in range(n + 1)]
    order: list[list[tuple[int, ...]]] = [[] for _ in range(n + 1)]

    def add(t: tuple[int, ...]):
        k = len(t) - 1
        key = frozenset(t)
        seen = levels[k].get(key)
        if seen is not None:
            if seen != t:
                issues.append(f"vertex set {sorted(key)} appears as {seen} and as {t}")
            return
        levels[k][key] = t
        order[k].append(t)
        if k > 0:
            for i in range(k + 1):
                add(t[:i] + t[i + 1:])

    for t in tops:
        add(tuple(vid[v] for v in t))
    if issues:
        raise ComplexError(issues)
    for k in range(n):
        order[k].sort()
    index = [{t: i for i, t in enumerate(order[k])} for k in range(n + 1)]
    # edges: face 0 is the end vertex, face 1 the start vertex
    faces = [tuple((t[1], t[0]) for t in order[1])]
    for k in range(2, n + 1):
        faces.append(tuple(tuple(index[k - 1][t[:i] + t[i + 1:]] for i in range(k + 1)) for t in order[k]))
    return DeltaComplex(len(verts), tuple(faces), name, tuple(orientation) if orientation else None)


def from_faces(n_vertices: int, faces: Sequence[Sequence[Sequence[int]]], name: str = "",
               orientation: Sequence[int] | None = None) -> DeltaComplex:
    return DeltaComplex(int(n_vertices), tuple(tuple(tuple(s) for s in lv) for lv in faces), name,
                        tuple(orientation) if orientation else None)


def from_json(data: dict, name: str = "") -> DeltaComplex:
    """Parse the explicit complex format.

    Either ``{"simplices": [[v0, v1, ...], ...]}`` (ordered vertex tuples of
    the top simplices) or ``{"vertices": V, "faces": {"1": [[end, start], ...],
    "2": [[d0, d1, d2], ...], ...}}``. An optional ``"orientation"`` lists a
    sign per top simplex.
    """
    orientation = data.get("orientation")
    if "simplices" in data:
        return from_top_simplices(data["simplices"], name, orientation)
    if "faces" not in data or "vertices" not in data:
        raise ComplexError(["complex needs 'simplices' or both 'vertices' and 'faces'"])
    fd = data["faces"]
    dims = sorted(int(k) for k in fd)
    if dims != list(range(1, len(dims) + 1)):
        raise ComplexError([f"face levels must be 1..n, got {dims}"])
    return from_faces(data["vertices"], [fd[str(k)] for k in dims], name, orientation)


def disjoint_union(*parts: DeltaComplex, name: str = "") -> DeltaComplex:
    if not parts:
        raise ComplexError(["disjoint union of nothing"])
    n = parts[0].dimension
    if any(p.dimension != n for p in parts):
        raise ComplexError(["disjoint union needs equal dimensions"])
    faces = [[] for _ in range(n)]
    offsets = [0] * (n + 1)
    hint: list[int] | None = []
    for p in parts:
        for k in range(1, n + 1):
            faces[k - 1].extend(tuple(f + offsets[k - 1] for f in s) for s in p.faces[k - 1])
        for k in range(n + 1):
            offsets[k] += p.count(k)
        if hint is not None:
            o = p.orientation if p.is_closed_pseudomanifold else None
            hint = None if o is None else hint + list(o)
    return DeltaComplex(offsets[0], tuple(tuple(f) for f in faces),
                        name or "+".join(p.name for p in parts), tuple(hint) if hint else None)
