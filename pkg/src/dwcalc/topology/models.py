"""Presented mod-2 cohomology rings for manifolds too large to triangulate.

A model is a commutative graded ring over Z/2 given by generators, rewrite
rules (monomial -> sum of monomials of the same degree; an empty sum is a
truncation) and a table of top-degree monomials that pair to 1 with the
fundamental class. Monomials above the manifold dimension vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..fields import Presentation, disjoint_presentation

Monomial = tuple[int, ...]
REWRITE_BUDGET = 100_000


class ModelError(ValueError):
    pass


def _deg(m: Monomial, degrees: Sequence[int]) -> int:
    return sum(e * d for e, d in zip(m, degrees))


@dataclass(frozen=True)
class AlgebraicModel:
    name: str
    dimension: int
    generators: tuple[tuple[str, int], ...]
    rules: tuple[tuple[Monomial, tuple[Monomial, ...]], ...]
    top: tuple[Monomial, ...]
    presentation: Presentation | None = None
    _nf_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        k = len(self.generators)
        degs = self.degrees
        if any(d < 1 for d in degs):
            raise ModelError("generator degrees must be positive")
        for lhs, rhs in self.rules:
            if len(lhs) != k or any(len(r) != k for r in rhs):
                raise ModelError("monomial length must match the generator count")
            if not any(lhs):
                raise ModelError("rule left side must be a nonconstant monomial")
            if any(_deg(r, degs) != _deg(lhs, degs) for r in rhs):
                raise ModelError(f"rule {lhs} -> {rhs} is not homogeneous")
        for t in self.top:
            if _deg(t, degs) != self.dimension:
                raise ModelError(f"top monomial {t} does not have degree {self.dimension}")

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.generators)

    @property
    def degree_one(self) -> tuple[int, ...]:
        """Indices of the degree-1 generators; they span H^1."""
        return tuple(i for i, (_, d) in enumerate(self.generators) if d == 1)

    @property
    def beta1(self) -> int:
        return len(self.degree_one)

    def _applicable(self, m: Monomial) -> list[int]:
        return [i for i, (lhs, _) in enumerate(self.rules) if all(a >= b for a, b in zip(m, lhs))]

    def _apply(self, m: Monomial, rule: int) -> list[Monomial]:
        lhs, rhs = self.rules[rule]
        base = tuple(a - b for a, b in zip(m, lhs))
        return [tuple(a + b for a, b in zip(base, r)) for r in rhs]

    def normal_form(self, m: Monomial, _state: tuple[list[int], set] | None = None) -> frozenset[Monomial]:
        """Reduce a monomial, always using the first applicable rule.

        A monomial that reappears on its own rewrite path means the rules loop.
        """
        if m in self._nf_cache:
            return self._nf_cache[m]
        steps, path = _state if _state is not None else ([0], set())
        steps[0] += 1
        if steps[0] > REWRITE_BUDGET:
            raise ModelError(f"rewriting did not terminate within {REWRITE_BUDGET} steps")
        if m in path:
            raise ModelError(f"rewriting loops at monomial {m}")
        if _deg(m, self.degrees) > self.dimension:
            result: frozenset = frozenset()
        else:
            rules = self._applicable(m)
            if not rules:
                result = frozenset([m])
            else:
                path.add(m)
                result = frozenset()
                for x in self._apply(m, rules[0]):
                    result = result ^ self.normal_form(x, (steps, path))
                path.discard(m)
        self._nf_cache[m] = result
        return result

    def reduce(self, poly: Iterable[Monomial]) -> frozenset[Monomial]:
        out: frozenset = frozenset()
        for m in poly:
            out = out ^ self.normal_form(m)
        return out

    def check_confluent_at(self, m: Monomial) -> None:
        """Every applicable first step must lead to the same normal form."""
        if _deg(m, self.degrees) > self.dimension:
            return
        forms = {self.reduce(self._apply(m, r)) for r in self._applicable(m)}
        if len(forms) > 1:
            raise ModelError(f"rewrite rules are not confluent at monomial {m}")

    def multiply(self, a: Iterable[Monomial], b: Iterable[Monomial]) -> frozenset[Monomial]:
        out: set[Monomial] = set()
        for x in a:
            for y in b:
                out ^= {tuple(p + q for p, q in zip(x, y))}
        for m in out:
            self.check_confluent_at(m)
        return self.reduce(out)

    def pair(self, poly: Iterable[Monomial]) -> int:
        """<[X], poly> for a reduced top-degree polynomial."""
        top = set(self.top)
        return sum(1 for m in poly if m in top and _deg(m, self.degrees) == self.dimension) % 2

    def linear_class(self, bits: Sequence[int]) -> frozenset[Monomial]:
        """The degree-1 class sum(bits[i] * g_i) over the degree-1 generators."""
        ones = self.degree_one
        if len(bits) != len(ones):
            raise ModelError(f"need {len(ones)} coefficients, one per degree-1 generator")
        k = len(self.generators)
        return frozenset(tuple(1 if j == i else 0 for j in range(k)) for i, b in zip(ones, bits) if b % 2)


def tau_from_model(M: AlgebraicModel, v: Sequence[int]) -> int:
    """<[X], v^n> in the presented ring."""
    base = M.linear_class(v)
    if not base:
        return 0
    k = len(M.generators)
    power: frozenset = frozenset([(0,) * k])
    for _ in range(M.dimension):
        power = M.multiply(power, base)
        if not power:
            return 0
    return M.pair(power)


def projective_space(n: int) -> AlgebraicModel:
    """RP^n: Z/2[a]/(a^{n+1}), <[X], a^n> = 1."""
    if n < 1:
        raise ModelError("dimension must be positive")
    pres = Presentation.parse(1, [] if n == 1 else ["aa"])
    return AlgebraicModel(f"RP{n}", n, (("a", 1),), (((n + 1,), ()),), ((n,),), pres)


def dold(m: int, l: int) -> AlgebraicModel:
    """Dold manifold P(m, l) of dimension m + 2l: Z/2[c, d]/(c^{m+1}, d^{l+1})."""
    if m < 1 or l < 0:
        raise ModelError("Dold manifold needs m >= 1 and l >= 0")
    pres = Presentation.parse(1, [] if m == 1 else ["aa"])
    return AlgebraicModel(
        f"P({m},{l})", m + 2 * l, (("c", 1), ("d", 2)),
        (((m + 1, 0), ()), ((0, l + 1), ())),
        ((m, l),), pres)


def orientable_surface(g: int) -> AlgebraicModel:
    """Sigma_g: a_i b_i = a_1 b_1 is the top class, all other products of two vanish."""
    if g < 1:
        raise ModelError("genus must be at least 1 (use a sphere otherwise)")
    k = 2 * g

    def mono(*idx):
        out = [0] * k
        for i in idx:
            out[i] += 1
        return tuple(out)

    rules = []
    for i in range(k):
        for j in range(i, k):
            if i // 2 == j // 2 and i != j:
                if i // 2 > 0:
                    rules.append((mono(i, j), (mono(0, 1),)))
                continue
            rules.append((mono(i, j), ()))
    gens = tuple((f"{'ab'[i % 2]}{i // 2 + 1}", 1) for i in range(k))
    rels = ["".join(f"a{i}b{i}A{i}B{i}" for i in range(1, g + 1))]
    names = [nm for nm, _ in gens]
    return AlgebraicModel(f"Sigma{g}", 2, gens, tuple(rules), (mono(0, 1),),
                          Presentation.parse(k, rels, names=names))


def klein_bottle() -> AlgebraicModel:
    """K = RP^2 # RP^2: a^2 = b^2 is the top class and ab = 0."""
    return AlgebraicModel("Klein", 2, (("a", 1), ("b", 1)),
                          (((1, 1), ()), ((0, 2), ((2, 0),))), ((2, 0),),
                          Presentation.parse(2, ["aabb"]))


def product(A: AlgebraicModel, B: AlgebraicModel) -> AlgebraicModel:
    """Kunneth product: generators side by side, top classes multiply."""
    ka, kb = len(A.generators), len(B.generators)
    gens = tuple((f"{nm}_1", d) for nm, d in A.generators) + tuple((f"{nm}_2", d) for nm, d in B.generators)
    rules = tuple((l + (0,) * kb, tuple(r + (0,) * kb for r in rhs)) for l, rhs in A.rules) \
        + tuple(((0,) * ka + l, tuple((0,) * ka + r for r in rhs)) for l, rhs in B.rules)
    top = tuple(a + b for a in A.top for b in B.top)
    pres = None
    if A.presentation is not None and B.presentation is not None:
        pres = _product_presentation(A.presentation, B.presentation)
    return AlgebraicModel(f"{A.name}x{B.name}", A.dimension + B.dimension, gens, rules, top, pres)


def _product_presentation(P: Presentation, Q: Presentation) -> Presentation:
    if P.n_components != 1 or Q.n_components != 1:
        raise ModelError("product presentations need connected factors")
    both = disjoint_presentation(P, Q)
    n = P.n_generators
    rels = list(both.relators)
    for a in range(1, n + 1):
        for b in range(n + 1, both.n_generators + 1):
            rels.append((a, b, -a, -b))
    return Presentation(both.n_generators, tuple(rels), None, both.names)


def from_json(data: dict) -> AlgebraicModel:
    """Parse ``{"kind": "rp", "n": 3}``, ``{"kind": "dold", "m": 1, "l": 2}``,
    ``{"kind": "product", "factors": [...]}`` or a fully explicit ring."""
    kind = data.get("kind", "explicit")
    if kind == "rp":
        return projective_space(int(data["n"]))
    if kind == "dold":
        return dold(int(data["m"]), int(data["l"]))
    if kind == "surface":
        return orientable_surface(int(data["g"]))
    if kind == "klein":
        return klein_bottle()
    if kind == "product":
        factors = [from_json(f) for f in data["factors"]]
        out = factors[0]
        for f in factors[1:]:
            out = product(out, f)
        return out
    if kind != "explicit":
        raise ModelError(f"unknown model kind {kind!r}")
    gens = tuple((str(n), int(d)) for n, d in data["generators"])
    rules = tuple((tuple(l), tuple(tuple(r) for r in rhs)) for l, rhs in data["rules"])
    pres = None
    if "presentation" in data:
        p = data["presentation"]
        pres = Presentation.parse(int(p["generators"]) if isinstance(p["generators"], int) else len(p["generators"]),
                                  p.get("relators", []), p.get("components"),
                                  None if isinstance(p["generators"], int) else p["generators"])
    return AlgebraicModel(data.get("name", "model"), int(data["dimension"]), gens, rules,
                          tuple(tuple(t) for t in data["top"]), pres)
