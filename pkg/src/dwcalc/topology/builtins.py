"""Library of small closed manifolds as Delta-complexes."""

from __future__ import annotations

import itertools
import re
from typing import Sequence

from .complex import ComplexError, DeltaComplex, disjoint_union, from_faces, from_top_simplices

Letter = tuple[int, int]  # (generator index, +1 or -1)


def parse_word(word: str | Sequence[Letter]) -> list[Letter]:
    """Surface words such as ``"abAB"`` (capital = inverse) or ``"a1 b1 A1 B1"``."""
    if not isinstance(word, str):
        return [(int(g), int(s)) for g, s in word]
    tokens = re.findall(r"[A-Za-z]\d*", word)
    names: dict[str, int] = {}
    out = []
    for tok in tokens:
        key = tok.lower()
        if key not in names:
            names[key] = len(names)
        out.append((names[key], -1 if tok[0].isupper() else 1))
    return out


def polygon_surface(word: str | Sequence[Letter], name: str = "") -> DeltaComplex:
    """Closed surface from a polygon with paired sides, fan-triangulated from one corner.

    Each generator must occur exactly twice. Generator directions, diagonal orientations and
    the fan corner are searched so that every triangle gets a consistent vertex order.
    """
    letters = parse_word(word)
    L = len(letters)
    gens = sorted({g for g, _ in letters})
    if L < 3 or any(sum(1 for g, _ in letters if g == x) != 2 for x in gens):
        raise ComplexError([f"polygon word {word!r} must have >= 3 sides, each generator twice"])
    # renaming a generator to its inverse, rotating the word and flipping
    # diagonals all give the same surface
    for flips in itertools.product((1, -1), repeat=len(gens)):
        flipped = [(g, s * flips[gens.index(g)]) for g, s in letters]
        for rot in range(L):
            word_r = flipped[rot:] + flipped[:rot]
            for diag_dirs in itertools.product((1, -1), repeat=L - 3):
                built = _try_fan(word_r, gens, diag_dirs, name or str(word))
                if built is not None:
                    return built
    raise ComplexError([f"no consistent vertex ordering found for {word!r}"])


def _try_fan(letters, gens, diag_dirs, name):
    L = len(letters)
    parent = list(range(L))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    def union(a, b):
        a, b = find(a), find(b)
        if a != b:
            parent[max(a, b)] = min(a, b)

    # side i joins P_i and P_{i+1}; record the generator's (start, end) corners
    ends: dict[int, list[tuple[int, int]]] = {g: [] for g in gens}
    for i, (g, s) in enumerate(letters):
        a, b = i, (i + 1) % L
        ends[g].append((a, b) if s > 0 else (b, a))
    for g in gens:
        (s1, e1), (s2, e2) = ends[g]
        union(s1, s2)
        union(e1, e2)
    classes = sorted({find(i) for i in range(L)})
    vid = {c: k for k, c in enumerate(classes)}

    # directed edges between polygon corners: key frozenset -> (edge id, tail corner, head corner)
    edges: dict[frozenset, tuple[int, int, int]] = {}
    edge_faces: list[tuple[int, int]] = []
    for g in gens:
        s, e = ends[g][0]
        edge_faces.append((vid[find(e)], vid[find(s)]))
    for i, (g, sgn) in enumerate(letters):
        a, b = i, (i + 1) % L
        tail, head = (a, b) if sgn > 0 else (b, a)
        edges[frozenset((a, b))] = (gens.index(g), tail, head)
    for k, i in enumerate(range(2, L - 1)):
        eid = len(edge_faces)
        tail, head = (0, i) if diag_dirs[k] > 0 else (i, 0)
        edge_faces.append((vid[find(head)], vid[find(tail)]))
        edges[frozenset((0, i))] = (eid, tail, head)

    tris = []
    for i in range(1, L - 1):
        corners = (0, i, i + 1)
        out_deg = {c: 0 for c in corners}
        for a, b in itertools.combinations(corners, 2):
            _, tail, _ = edges[frozenset((a, b))]
            out_deg[tail] += 1
        if sorted(out_deg.values()) != [0, 1, 2]:
            return None  # directed 3-cycle
        v0, v1, v2 = sorted(corners, key=lambda c: -out_deg[c])
        e = lambda a, b: edges[frozenset((a, b))][0]
        tris.append((e(v1, v2), e(v0, v2), e(v0, v1)))
    try:
        return from_faces(len(classes), [edge_faces, tris], name)
    except ComplexError:
        return None


def kuhn_torus(d: int, L: int = 1, name: str = "") -> DeltaComplex:
    """The d-torus (R/LZ)^d with the Kuhn (Freudenthal) triangulation of each unit cube.

    A k-simplex is a base point plus a strictly increasing chain of nonempty
    coordinate subsets; vertex order runs along the chain. L = 1 gives the
    one-vertex model with d! top simplices.
    """
    if d < 1 or L < 1:
        raise ComplexError(["kuhn_torus needs d >= 1 and L >= 1"])
    points = list(itertools.product(range(L), repeat=d))
    masks = range(1, 2**d)

    def shift(x, m):
        return tuple((x[i] + ((m >> i) & 1)) % L for i in range(d))

    levels: list[dict] = [{(x, ()): i for i, x in enumerate(points)}]
    faces: list[list[tuple[int, ...]]] = []
    for k in range(1, d + 1):
        chains = [c for c in itertools.combinations(masks, k) if all(a & b == a for a, b in zip(c, c[1:]))]
        table = {}
        fl = []
        for x in points:
            for c in chains:
                fs = []
                for i in range(k + 1):
                    if i == 0:
                        nx, nc = shift(x, c[0]), tuple(m ^ c[0] for m in c[1:])
                    else:
                        nx, nc = x, c[: i - 1] + c[i:]
                    fs.append(levels[k - 1][(nx, nc)])
                table[(x, c)] = len(fl)
                fl.append(tuple(fs))
        levels.append(table)
        faces.append(fl)
    return from_faces(len(points), faces, name or f"T{d}_L{L}")


def sigma_word(g: int) -> str:
    return " ".join(f"a{i} b{i} A{i} B{i}" for i in range(1, g + 1))


def sphere(n: int = 2) -> DeltaComplex:
    """Boundary of the (n+1)-simplex."""
    verts = range(n + 2)
    return from_top_simplices([tuple(v for v in verts if v != j) for j in reversed(verts)], f"S{n}")


def circle() -> DeltaComplex:
    return from_top_simplices([(0, 1), (1, 2), (0, 2)], "circle")


def sigma(g: int) -> DeltaComplex:
    if g < 0:
        raise ComplexError(["genus must be non-negative"])
    if g == 0:
        return sphere(2)
    return polygon_surface(sigma_word(g), f"sigma{g}")


def nonorientable(k: int) -> DeltaComplex:
    """Connected sum of k projective planes, word a1 a1 a2 a2 ... ."""
    if k < 1:
        raise ComplexError(["need k >= 1"])
    if k == 1:
        return rp2()
    return polygon_surface(" ".join(f"c{i} c{i}" for i in range(1, k + 1)), f"N{k}")


def rp2() -> DeltaComplex:
    return polygon_surface("abab", "rp2")


def klein() -> DeltaComplex:
    return polygon_surface("abAb", "klein")


BUILTINS = {
    "circle": circle,
    "sphere2": lambda: sphere(2),
    "sphere3": lambda: sphere(3),
    "torus": lambda: kuhn_torus(2, 1, "torus"),
    "torus_grid3": lambda: kuhn_torus(2, 3, "torus_grid3"),
    "torus_word": lambda: polygon_surface("abAB", "torus_word"),
    "torus3": lambda: kuhn_torus(3, 1, "torus3"),
    "klein": klein,
    "klein_word2": lambda: nonorientable(2),
    "rp2": rp2,
    "sigma0": lambda: sigma(0),
    "sigma1": lambda: sigma(1),
    "sigma2": lambda: sigma(2),
    "sigma3": lambda: sigma(3),
    "n3": lambda: nonorientable(3),
}


def builtin_complex(name: str, *parts: DeltaComplex) -> DeltaComplex:
    """Look up a library complex by name.

    ``sigma(g)`` style names (``"sigma(2)"``) and ``"disjoint_union"`` with
    explicit parts are accepted as well.
    """
    if name == "disjoint_union":
        return disjoint_union(*parts)
    m = re.fullmatch(r"sigma\((\d+)\)", name)
    if m:
        g = int(m.group(1))
        if g > 3:
            raise ComplexError([f"sigma(g) is provided for g <= 3, got {g}"])
        return sigma(g)
    try:
        return BUILTINS[name]()
    except KeyError:
        raise ComplexError([f"unknown builtin complex {name!r}; known: {sorted(BUILTINS)}"]) from None


# the standard presentation of pi_1 for each builtin, written independently of the complex
BUILTIN_PRESENTATIONS = {
    "circle": (1, []),
    "sphere2": (0, []),
    "sphere3": (0, []),
    "torus": (2, ["abAB"]),
    "torus_grid3": (2, ["abAB"]),
    "torus_word": (2, ["abAB"]),
    "torus3": (3, ["abAB", "acAC", "bcBC"]),
    "klein": (2, ["abAb"]),
    "klein_word2": (2, ["aabb"]),
    "rp2": (1, ["aa"]),
    "sigma0": (0, []),
    "sigma1": (2, ["abAB"]),
    "sigma2": (4, ["abABcdCD"]),
    "sigma3": (6, ["abABcdCDefEF"]),
    "n3": (3, ["aabbcc"]),
}
