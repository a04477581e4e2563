import itertools
from fractions import Fraction

import pytest

from dwcalc import tqft
from dwcalc.action import Theory, TheoryError
from dwcalc.cocycles import BudgetExceeded, enumerate_classes_small
from dwcalc.fields import Presentation, evaluate_word, times_circle
from dwcalc.groups import build_group
from dwcalc.scalars import CyclotomicScalar
from dwcalc.topology import models
from dwcalc.topology.builtins import BUILTIN_PRESENTATIONS, builtin_complex
from dwcalc.topology.complex import disjoint_union
from dwcalc.tqft import (
    CIRCLE, EMPTY, Bordism, BordismError, ClosedManifoldJob, ProductFormulaRefused, bordism_matrix, compose,
    dim_via_torus, partition_closed, partition_product_formula, state_space, transgression,
)


def z(T, X, route="auto"):
    return partition_closed(ClosedManifoldJob(T, X, route))


def q(x):
    return CyclotomicScalar.rational(Fraction(x))


def brute_homs(P, G):
    return [imgs for imgs in itertools.product(range(G.order), repeat=P.n_generators)
            if all(evaluate_word(G, r, imgs) == 0 for r in P.relators)]


def brute_canonical(G, vals, components):
    """Least conjugate under independent conjugation per component, by trying every element."""
    out = list(vals)
    stab = 1
    for c in components:
        cands = [tuple(G.conj(g, vals[i]) for i in c) for g in range(G.order)]
        best = min(cands)
        stab *= sum(1 for x in cands if x == tuple(vals[i] for i in c))
        for i, x in zip(c, best):
            out[i] = x
    return tuple(out), stab


def brute_bordism_matrix(G, B):
    """Double loop over every X-hom: each contributes stab(alpha) / |G|^components(X)."""
    rows = sorted({brute_canonical(G, h, B.target.components)[0] for h in brute_homs(B.target, G)})
    cols = sorted({brute_canonical(G, h, B.source.components)[0] for h in brute_homs(B.source, G)})
    M = {(b, a): Fraction(0) for b in rows for a in cols}
    weight = Fraction(1, G.order ** B.total.n_components)
    for s in brute_homs(B.total, G):
        a, stab_a = brute_canonical(G, B.restrict(G, s, "source"), B.source.components)
        b, _ = brute_canonical(G, B.restrict(G, s, "target"), B.target.components)
        M[(b, a)] += stab_a * weight
    return [[M[(b, a)] for a in cols] for b in rows]


GROUPS = ["Z2", "Z3", "S3"]


# closed manifolds

def test_untwisted_torus_s3():
    assert z(Theory.untwisted(build_group("S3")), builtin_complex("torus")) == q(3)


@pytest.mark.parametrize("g", range(4))
def test_surfaces(g):
    T = Theory.w1_power(build_group("Z2"), 2)
    assert z(T, builtin_complex(f"sigma({g})")) == q(Fraction(2) ** (2 * g - 1))


def test_rp2_and_klein():
    T = Theory.w1_power(build_group("Z2"), 2)
    assert z(T, builtin_complex("rp2")) == q(0)
    assert z(T, builtin_complex("klein")) == q(0)
    assert partition_product_formula(builtin_complex("klein"), 2) == q(0)


@pytest.mark.parametrize("name", sorted(BUILTIN_PRESENTATIONS))
@pytest.mark.parametrize("spec", ["Z2", "Z3", "S3"])
def test_untwisted_routes_agree(name, spec):
    G = build_group(spec)
    T = Theory.untwisted(G)
    K = builtin_complex(name)
    n, rels = BUILTIN_PRESENTATIONS[name]
    expected = Fraction(len(brute_homs(Presentation.parse(n, rels), G)), G.order)
    assert z(T, K) == q(expected)
    assert z(T, K, "presentation") == q(expected)


def test_disconnected_closed_is_multiplicative():
    G = build_group("S3")
    T = Theory.untwisted(G)
    U = disjoint_union(builtin_complex("torus"), builtin_complex("rp2"))
    assert z(T, U) == z(T, builtin_complex("torus")) * z(T, builtin_complex("rp2"))


@pytest.mark.parametrize("name", ["sphere2", "torus", "torus_word", "torus_grid3", "klein", "klein_word2", "rp2",
                                  "sigma0", "sigma1", "sigma2", "sigma3", "n3"])
def test_product_formula_matches_enumeration_on_surfaces(name):
    K = builtin_complex(name)
    assert partition_product_formula(K, 2) == z(Theory.w1_power(build_group("Z2"), 2), K)


@pytest.mark.parametrize("factors", [
    ((1,), (1,)), ((1,), (3,)), ((2,), (2,)), ("S1", "S1"), ("K", "S1"), ("S1", "S2"), ((1,), "S1x"),
])
def test_product_manifold_values(factors):
    def build(f):
        if f == "S1":
            return models.orientable_surface(1)
        if f == "S2":
            return models.orientable_surface(2)
        if f == "K":
            return models.klein_bottle()
        if f == "S1x":
            return models.product(models.projective_space(1), models.projective_space(2))
        return models.projective_space(f[0])
    A, B = build(factors[0]), build(factors[1])
    X = models.product(A, B)
    n = X.dimension
    assert n in (2, 4)
    expected = q(Fraction(2) ** (A.beta1 + B.beta1 - 1))
    assert z(Theory.w1_power(build_group("Z2"), n), X) == expected
    assert partition_product_formula(X, n) == expected


def test_dold_and_projective_models():
    Z2 = build_group("Z2")
    for n in (2, 3, 4, 5):
        M = models.projective_space(n)
        assert z(Theory.w1_power(Z2, n), M) == q(0)
        assert partition_product_formula(M, n) == q(0)
    for m, l in ((1, 1), (2, 1), (1, 2)):
        M = models.dold(m, l)
        assert z(Theory.w1_power(Z2, M.dimension), M) == q(1)


def test_product_formula_refusals():
    X = models.product(models.projective_space(1), models.projective_space(2))
    assert X.beta1 == 2
    with pytest.raises(ProductFormulaRefused, match="power of 2"):
        partition_product_formula(X, 3)
    with pytest.raises(ProductFormulaRefused):
        partition_product_formula(disjoint_union(builtin_complex("torus"), builtin_complex("torus")), 2)
    with pytest.raises(ProductFormulaRefused):
        partition_product_formula(builtin_complex("torus"), 4)
    # beta_1 = 1 is allowed for any n
    assert partition_product_formula(models.projective_space(3), 3) == q(0)


def test_closed_errors():
    G = build_group("S4")
    with pytest.raises(BudgetExceeded):
        partition_closed(ClosedManifoldJob(Theory.untwisted(G), builtin_complex("torus3"), budget=100))
    with pytest.raises(ValueError):
        ClosedManifoldJob(Theory.untwisted(G), builtin_complex("torus"), "teleport")
    with pytest.raises(TheoryError):
        z(Theory.w1_power(build_group("Z2"), 2), Presentation.parse(2, ["abAB"]))


# state spaces

def test_circle_state_spaces():
    S3 = build_group("S3")
    assert state_space(Theory.untwisted(S3), CIRCLE).dimension == 3
    assert dim_via_torus(Theory.untwisted(S3), CIRCLE) == q(3)
    assert dim_via_torus(Theory.untwisted(build_group("Z2")), CIRCLE) == q(2)
    T = Theory.w1_power(build_group("Z2"), 2)
    assert state_space(T, CIRCLE).dimension == 2
    assert dim_via_torus(T, CIRCLE) == q(2)


def test_torus_object_state_space():
    # 4 = |Hom(Z^2, Z/2)|, every orbit a singleton
    S = state_space(Theory.untwisted(build_group("Z2")), Presentation.parse(2, ["abAB"]))
    assert S.dimension == 4 and S.stabilizers == (2, 2, 2, 2)


@pytest.mark.parametrize("Y", [CIRCLE, Presentation.parse(2, ["abAB"]), Presentation.parse(1, ["aa"]),
                               tqft.disjoint_presentation(CIRCLE, CIRCLE), EMPTY])
@pytest.mark.parametrize("spec", ["Z2", "Z3", "Z2xZ2", "S3"])
def test_untwisted_dim_via_torus_matches_state_space(Y, spec):
    T = Theory.untwisted(build_group(spec))
    assert dim_via_torus(T, Y) == q(state_space(T, Y).dimension)


@pytest.mark.parametrize("spec,N", [("Z2", 2), ("Z3", 3), ("Z4", 4), ("Z2xZ2", 2), ("Z2xZ2", 4), ("S3", 2),
                                    ("Z6", 6)])
def test_twisted_circle_dimension_matches_torus(spec, N):
    G = build_group(spec)
    for w in enumerate_classes_small(G, 2, N, "linear").representatives:
        T = Theory.from_cocycle(w)
        d = state_space(T, CIRCLE).dimension
        assert dim_via_torus(T, CIRCLE) == q(d)
        assert z(T, builtin_complex("torus_grid3")) == q(d)
        two = tqft.disjoint_presentation(CIRCLE, CIRCLE)
        assert state_space(T, two).dimension == d * d == dim_via_torus(T, two).to_fraction()


def test_transgression_is_a_character():
    G = build_group("Z2xZ2")
    for w in enumerate_classes_small(G, 2, 2, "linear").representatives:
        for g in range(4):
            chi = transgression(w, g)
            for a, b in itertools.product(chi, repeat=2):
                assert chi[G.m(a, b)] == (chi[a] + chi[b]) % 2


def test_twisted_state_space_errors():
    T = Theory.w1_power(build_group("Z2"), 2)
    with pytest.raises(TheoryError):
        state_space(T, Presentation.parse(2, ["abAB"]))
    with pytest.raises(TheoryError):
        state_space(Theory.w1_power(build_group("Z2"), 3), CIRCLE)


# bordisms

def test_cylinder_is_identity():
    for spec in GROUPS + ["Z2xZ2", "S4"]:
        G = build_group(spec)
        M = bordism_matrix(Theory.untwisted(G), tqft.cylinder())
        k = len(G.conjugacy_classes())
        assert M.shape == (k, k)
        assert M.entries == tuple(tuple(Fraction(int(i == j)) for j in range(k)) for i in range(k))


def test_disk_column():
    M = bordism_matrix(Theory.untwisted(build_group("Z2")), tqft.disk_in())
    assert M.entries == ((Fraction(1, 2),), (Fraction(0),))


def test_cylinder_trace_is_torus_value():
    G = build_group("S3")
    T = Theory.untwisted(G)
    assert q(bordism_matrix(T, tqft.cylinder()).trace()) == z(T, builtin_complex("torus")) == q(3)


@pytest.mark.parametrize("name", sorted(tqft.STANDARD_BORDISMS))
@pytest.mark.parametrize("spec", GROUPS + ["Z2xZ2"])
def test_matrix_matches_brute_force(name, spec):
    G = build_group(spec)
    B = tqft.STANDARD_BORDISMS[name]()
    M = bordism_matrix(Theory.untwisted(G), B)
    assert [list(r) for r in M.entries] == brute_bordism_matrix(G, B)


# (first, second): compose(second, first) runs first, then second
COMPOSABLE = [
    ("cylinder", "cylinder"), ("disk_in", "cylinder"), ("cylinder", "disk_out"), ("disk_in", "disk_out"),
    ("copants", "pants"), ("pants", "copants"), ("pants", "cylinder"), ("cylinder", "copants"),
    ("pants", "disk_out"), ("disk_in", "copants"),
]


@pytest.mark.parametrize("first,second", COMPOSABLE)
@pytest.mark.parametrize("spec", GROUPS)
def test_functoriality(first, second, spec):
    b = tqft.STANDARD_BORDISMS
    A, B = b[first](), b[second]()
    T = Theory.untwisted(build_group(spec))
    C = compose(B, A)
    assert bordism_matrix(T, C).entries == (bordism_matrix(T, B) @ bordism_matrix(T, A)).entries


@pytest.mark.parametrize("spec", GROUPS)
def test_functoriality_with_disjoint_unions(spec):
    b = tqft.STANDARD_BORDISMS
    T = Theory.untwisted(build_group(spec))
    pairs = [
        (b["copants"](), tqft.disjoint_union(b["cylinder"](), b["disk_out"]())),
        (b["copants"](), tqft.disjoint_union(b["disk_out"](), b["disk_out"]())),
        (tqft.disjoint_union(b["disk_in"](), b["cylinder"]()), b["pants"]()),
    ]
    for A, B in pairs:
        assert bordism_matrix(T, compose(B, A)).entries == (bordism_matrix(T, B) @ bordism_matrix(T, A)).entries


@pytest.mark.parametrize("spec", GROUPS)
def test_handle_and_genus_two(spec):
    G = build_group(spec)
    T = Theory.untwisted(G)
    b = tqft.STANDARD_BORDISMS
    handle = compose(b["pants"](), b["copants"]())
    H = bordism_matrix(T, handle)
    assert H.entries == (bordism_matrix(T, b["pants"]()) @ bordism_matrix(T, b["copants"]())).entries
    torus = compose(b["disk_out"](), compose(handle, b["disk_in"]()))
    assert q(tqft.closed_value(T, torus)) == z(T, builtin_complex("torus"))
    genus2 = compose(b["disk_out"](), compose(handle, compose(handle, b["disk_in"]())))
    assert q(tqft.closed_value(T, genus2)) == z(T, builtin_complex("sigma2"), "presentation")


@pytest.mark.parametrize("spec", GROUPS + ["Z2xZ2"])
def test_sphere_from_two_disks(spec):
    G = build_group(spec)
    T = Theory.untwisted(G)
    S2 = compose(tqft.disk_out(), tqft.disk_in())
    assert tqft.closed_value(T, S2) == Fraction(1, G.order)
    assert q(Fraction(1, G.order)) == z(T, builtin_complex("sphere2"))


@pytest.mark.parametrize("spec", GROUPS)
def test_disjoint_union_is_tensor_product(spec):
    T = Theory.untwisted(build_group(spec))
    b = tqft.STANDARD_BORDISMS
    for x, y in [("cylinder", "pants"), ("disk_in", "copants"), ("pants", "disk_out")]:
        A, B = b[x](), b[y]()
        U = tqft.disjoint_union(A, B)
        assert bordism_matrix(T, U).entries == bordism_matrix(T, A).kron(bordism_matrix(T, B)).entries


def test_bordism_errors():
    with pytest.raises(BordismError):
        Bordism(CIRCLE, CIRCLE, CIRCLE, ((1,), (1,)), ((1,),))
    with pytest.raises(BordismError):
        Bordism(CIRCLE, CIRCLE, CIRCLE, ((2,),), ((1,),))
    bad = Bordism(Presentation.parse(1, ["aa"]), CIRCLE, CIRCLE, ((1,),), ((1,),))
    with pytest.raises(BordismError, match="relator"):
        bordism_matrix(Theory.untwisted(build_group("Z3")), bad)
    with pytest.raises(BordismError, match="middle"):
        compose(tqft.cylinder(), tqft.disk_out())
    with pytest.raises(TheoryError):
        bordism_matrix(Theory.w1_power(build_group("Z2"), 2), tqft.cylinder())
    with pytest.raises(BordismError):
        tqft.closed_value(Theory.untwisted(build_group("Z2")), tqft.cylinder())


def test_matrix_json():
    M = bordism_matrix(Theory.untwisted(build_group("Z2")), tqft.disk_in())
    assert M.to_json() == {"rows": [[0], [1]], "cols": [[]], "entries": [["1/2"], ["0"]]}


def test_times_circle_presentation():
    G = build_group("S3")
    assert len(brute_homs(times_circle(CIRCLE), G)) == 18
