"""Bar-resolution cochains on a finite group with trivial Z/N coefficients.

An n-cochain is an integer array of shape (m,) * n; entry [g1, ..., gn] is
its value in Z/N. The flat form is that array in C order, i.e. lexicographic
in the arguments.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup
from .linalg import ModularSmith

EXHAUSTIVE_BUDGET_BITS = 24


class CocycleError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured size limit."""


def _as_table(G: FiniteGroup, values, degree: int) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    shape = (G.order,) * degree
    if arr.shape != shape:
        if arr.size == G.order**degree:
            arr = arr.reshape(shape)
        else:
            raise CocycleError(f"degree-{degree} cochain on a group of order {G.order} needs {G.order ** degree} values")
    return arr


def coboundary(G: FiniteGroup, eta, modulus: int, degree: int | None = None) -> np.ndarray:
    """delta(eta) for trivial coefficients.

    (d eta)(g1..g_{k+1}) = eta(g2..g_{k+1})
        + sum_i (-1)^i eta(.., g_i g_{i+1}, ..) + (-1)^{k+1} eta(g1..g_k)
    """
    eta = np.asarray(eta, dtype=np.int64)
    k = eta.ndim if degree is None else degree
    m = G.order
    if k == 0:
        return np.zeros((m,), dtype=np.int64)
    idx = np.indices((m,) * (k + 1))
    out = eta[tuple(idx[1:])].copy()
    for i in range(1, k + 1):
        merged = G.mul[idx[i - 1], idx[i]]
        args = tuple(idx[: i - 1]) + (merged,) + tuple(idx[i + 1:])
        out += (-1) ** i * eta[args]
    out += (-1) ** (k + 1) * eta[tuple(idx[:k])]
    return out % modulus


def is_normalized(values) -> bool:
    arr = np.asarray(values)
    for axis in range(arr.ndim):
        if np.any(np.take(arr, 0, axis=axis)):
            return False
    return True


def first_unnormalized(values) -> tuple[int, ...] | None:
    arr = np.asarray(values)
    for axis in range(arr.ndim):
        sl = np.take(arr, 0, axis=axis)
        hits = np.argwhere(sl)
        if hits.size:
            pos = list(map(int, hits[0]))
            pos.insert(axis, 0)
            return tuple(pos)
    return None


def check_cocycle(G: FiniteGroup, values, modulus: int) -> bool:
    """True when delta(omega) vanishes at every (n+1)-tuple.

    Non-normalized input is reported by raising, never silently shifted.
    """
    arr = np.asarray(values, dtype=np.int64)
    bad = first_unnormalized(arr % modulus)
    if bad is not None:
        raise CocycleError(
            f"cochain is not normalized: value at {bad} is nonzero; subtract a coboundary "
            "or zero the identity rows before checking")
    return not np.any(coboundary(G, arr, modulus))


@dataclass(frozen=True, eq=False)
class GroupCocycle:
    group: FiniteGroup
    degree: int
    modulus: int
    values: np.ndarray

    def __post_init__(self):
        if self.degree < 1:
            raise CocycleError("cocycle degree must be at least 1")
        if self.modulus < 1:
            raise CocycleError("modulus must be positive")
        arr = _as_table(self.group, self.values, self.degree) % self.modulus
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        if not check_cocycle(self.group, arr, self.modulus):
            raise CocycleError("cocycle condition fails")

    def __call__(self, *args: int) -> int:
        return int(self.values[args])

    def flat(self) -> list[int]:
        return [int(x) for x in self.values.ravel()]

    def multiply(self, other: GroupCocycle) -> GroupCocycle:
        """Product in mu_N, i.e. sum of exponent tables."""
        if other.group is not self.group or other.degree != self.degree or other.modulus != self.modulus:
            raise CocycleError("cocycles must share group, degree and modulus")
        return GroupCocycle(self.group, self.degree, self.modulus, self.values + other.values)

    def shifted(self, eta) -> GroupCocycle:
        """omega + delta(eta) for a normalized (degree-1)-cochain eta."""
        eta = np.asarray(eta, dtype=np.int64)
        if self.degree == 1:
            return self
        eta = _as_table(self.group, eta, self.degree - 1)
        if not is_normalized(eta % self.modulus):
            raise CocycleError("shift cochain must be normalized")
        return GroupCocycle(self.group, self.degree, self.modulus,
                            self.values + coboundary(self.group, eta, self.modulus))

    def is_coboundary(self) -> bool:
        return bool(coboundary_membership(self.group, self.values, self.degree, self.modulus))

    @classmethod
    def zero(cls, G: FiniteGroup, degree: int, modulus: int) -> GroupCocycle:
        return cls(G, degree, modulus, np.zeros((G.order,) * degree, dtype=np.int64))

    @classmethod
    def from_flat(cls, G: FiniteGroup, degree: int, modulus: int, flat) -> GroupCocycle:
        return cls(G, degree, modulus, np.asarray(flat, dtype=np.int64))


def cup_power_cocycle(G: FiniteGroup, n: int) -> GroupCocycle:
    """The n-th cup power of the generator of H^1(Z/2; Z/2): product of the arguments."""
    if G.order != 2:
        raise CocycleError("w1 powers need the group Z/2")
    idx = np.indices((2,) * n)
    return GroupCocycle(G, n, 2, np.prod(idx, axis=0))


def random_normalized_cochain(G: FiniteGroup, degree: int, modulus: int, rng) -> np.ndarray:
    arr = rng.integers(0, modulus, size=(G.order,) * degree)
    for axis in range(degree):
        idx = [slice(None)] * degree
        idx[axis] = 0
        arr[tuple(idx)] = 0
    return arr


# normalized cochain coordinates

def _normalized_tuples(m: int, n: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(1, m), repeat=n))


def coboundary_matrix(G: FiniteGroup, degree: int, modulus: int) -> np.ndarray:
    """Matrix of delta from normalized (degree)-cochains to normalized (degree+1)-cochains."""
    m = G.order
    cols = _normalized_tuples(m, degree)
    rows = _normalized_tuples(m, degree + 1)
    row_idx = tuple(np.array(rows, dtype=np.int64).reshape(len(rows), degree + 1).T)
    M = np.zeros((len(rows), len(cols)), dtype=np.int64)
    if degree == 0:
        return M
    for j, t in enumerate(cols):
        e = np.zeros((m,) * degree, dtype=np.int64)
        e[t] = 1
        M[:, j] = coboundary(G, e, modulus)[row_idx]
    return M


def _vector_to_table(m: int, n: int, vec) -> np.ndarray:
    table = np.zeros((m,) * n, dtype=np.int64)
    for t, v in zip(_normalized_tuples(m, n), vec):
        table[t] = v
    return table


def _table_to_vector(table) -> np.ndarray:
    table = np.asarray(table)
    m, n = table.shape[0], table.ndim
    return np.array([table[t] for t in _normalized_tuples(m, n)], dtype=np.int64)


def coboundary_membership(G: FiniteGroup, values, degree: int, modulus: int) -> bool:
    """Whether a normalized cochain lies in the image of delta."""
    x = _table_to_vector(np.asarray(values) % modulus)
    B = coboundary_matrix(G, degree - 1, modulus)
    if B.shape[1] == 0:
        return not np.any(x)
    aug = np.hstack([B, x[:, None]])
    return _image_size(B, modulus) == _image_size(aug, modulus)


def _image_size(A, modulus: int) -> int:
    if A.size == 0:
        return 1
    diag = ModularSmith(A, modulus, track=False).diagonal()
    return math.prod(modulus // math.gcd(d, modulus) for d in diag)


@dataclass(frozen=True)
class CohomologyClasses:
    group_label: str
    degree: int
    modulus: int
    invariants: tuple[int, ...]
    representatives: tuple[GroupCocycle, ...]
    mode: str

    def __len__(self) -> int:
        return len(self.representatives)


def enumerate_classes_small(G: FiniteGroup, n: int, modulus: int, mode: str = "auto") -> CohomologyClasses:
    """One normalized representative per class of H^n(G; Z/N), zero class first.

    ``exhaustive`` lists every normalized cochain and is limited to
    |G|^n * log2(N) <= 24; ``linear`` solves delta(omega) = 0 over Z/N and
    quotients by coboundaries. ``auto`` picks exhaustive when it fits.
    """
    if n < 1:
        raise CocycleError("degree must be positive")
    bits = G.order**n * math.log2(modulus) if modulus > 1 else 0.0
    if mode == "auto":
        mode = "exhaustive" if bits <= EXHAUSTIVE_BUDGET_BITS else "linear"
    if mode == "exhaustive":
        if bits > EXHAUSTIVE_BUDGET_BITS:
            raise BudgetExceeded(
                f"|G|^n*log2(N) = {bits:.1f} exceeds {EXHAUSTIVE_BUDGET_BITS}; use mode='linear'")
        return _classes_exhaustive(G, n, modulus)
    if mode == "linear":
        return _classes_linear(G, n, modulus)
    raise ValueError(f"unknown mode {mode!r}")


def _classes_exhaustive(G: FiniteGroup, n: int, N: int) -> CohomologyClasses:
    m = G.order
    L = (m - 1) ** n
    cocycles = []
    for vec in itertools.product(range(N), repeat=L):
        table = _vector_to_table(m, n, vec)
        if not np.any(coboundary(G, table, N)):
            cocycles.append(vec)
    boundaries = set()
    for vec in itertools.product(range(N), repeat=(m - 1) ** (n - 1)):
        if n == 1:
            boundaries.add((0,) * L)
            break
        table = coboundary(G, _vector_to_table(m, n - 1, vec), N)
        boundaries.add(tuple(int(x) for x in _table_to_vector(table)))
    seen: set[tuple[int, ...]] = set()
    reps = []
    for vec in cocycles:  # lexicographic, so the first member seen is the coset minimum
        if vec in seen:
            continue
        coset = {tuple((a + b) % N for a, b in zip(vec, bd)) for bd in boundaries}
        seen |= coset
        reps.append(GroupCocycle(G, n, N, _vector_to_table(m, n, vec)))
    return CohomologyClasses(G.label, n, N, (), tuple(reps), "exhaustive")


def _classes_linear(G: FiniteGroup, n: int, N: int) -> CohomologyClasses:
    m = G.order
    L = (m - 1) ** n
    if N == 1 or L == 0:
        return CohomologyClasses(G.label, n, N, (), (GroupCocycle.zero(G, n, N),), "linear")
    Dn = coboundary_matrix(G, n, N)
    Dp = coboundary_matrix(G, n - 1, N)
    # kernel of Dn as a sum of cyclic groups z_k of order o_k
    sm = ModularSmith(Dn, N)
    diag = sm.diagonal()
    gens, orders, scale, keep = [], [], [], []
    for k in range(L):
        g = math.gcd(diag[k], N) if k < len(diag) else N
        if g == 1:
            continue
        keep.append(k)
        scale.append(N // g)
        orders.append(g)
        gens.append(sm.V[:, k] * (N // g) % N)
    if not gens:
        return CohomologyClasses(G.label, n, N, (), (GroupCocycle.zero(G, n, N),), "linear")
    Z = np.array(gens, dtype=np.int64).T
    # coboundaries in z-coordinates: y = Vinv b, c_k = y_k / (N / o_k)
    Y = (sm.Vinv @ Dp) % N if Dp.shape[1] else np.zeros((L, 0), dtype=np.int64)
    C = np.zeros((len(keep), Y.shape[1]), dtype=np.int64)
    for r, (k, s) in enumerate(zip(keep, scale)):
        if np.any(Y[k] % s):
            raise ArithmeticError("coboundary outside the cocycle lattice")
        C[r] = Y[k] // s
    rel = np.hstack([np.diag(orders).astype(np.int64), C])
    sm2 = ModularSmith(rel, N)
    d2 = sm2.diagonal()
    h = [math.gcd(d2[i], N) if i < len(d2) else N for i in range(len(keep))]
    live = [i for i, x in enumerate(h) if x > 1]
    reps = []
    for w in itertools.product(*(range(h[i]) for i in live)):
        wv = np.zeros(len(keep), dtype=np.int64)
        for i, x in zip(live, w):
            wv[i] = x
        c = (sm2.Uinv @ wv) % N
        vec = (Z @ c) % N
        reps.append(GroupCocycle(G, n, N, _vector_to_table(m, n, vec)))
    return CohomologyClasses(G.label, n, N, tuple(h[i] for i in live), tuple(reps), "linear")
