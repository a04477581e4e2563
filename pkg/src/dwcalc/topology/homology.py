"""Mod-2 chains, cochains and cup powers on Delta-complexes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..linalg import gf2_complement_basis, gf2_nullspace, gf2_rank
from .complex import DeltaComplex


class CochainError(ValueError):
    pass


def boundary_matrix_mod2(K: DeltaComplex, k: int) -> np.ndarray:
    """Matrix of the boundary C_k -> C_{k-1} over Z/2 (rows: (k-1)-simplices)."""
    rows, cols = K.count(k - 1), K.count(k)
    M = np.zeros((rows, cols), dtype=np.uint8)
    if k < 1 or k > K.dimension:
        return M
    for s, fs in enumerate(K.faces[k - 1]):
        for f in fs:
            M[f, s] ^= 1
    return M


def coboundary_matrix_mod2(K: DeltaComplex, k: int) -> np.ndarray:
    """delta: C^k -> C^{k+1}, the transpose of the boundary."""
    return boundary_matrix_mod2(K, k + 1).T.copy()


@dataclass(frozen=True, eq=False)
class CochainMod2:
    complex: DeltaComplex
    degree: int
    bits: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bits, dtype=np.uint8) % 2
        if b.shape != (self.complex.count(self.degree),):
            raise CochainError(f"degree-{self.degree} cochain needs {self.complex.count(self.degree)} bits")
        b.setflags(write=False)
        object.__setattr__(self, "bits", b)

    @classmethod
    def zero(cls, K: DeltaComplex, degree: int) -> CochainMod2:
        return cls(K, degree, np.zeros(K.count(degree), dtype=np.uint8))

    def coboundary(self) -> CochainMod2:
        d = coboundary_matrix_mod2(self.complex, self.degree)
        return CochainMod2(self.complex, self.degree + 1, (d.astype(np.int64) @ self.bits) % 2)

    @property
    def is_cocycle(self) -> bool:
        if self.degree >= self.complex.dimension:
            return True
        return not np.any(self.coboundary().bits)

    def __add__(self, other: CochainMod2) -> CochainMod2:
        if other.complex is not self.complex or other.degree != self.degree:
            raise CochainError("cochains live on different complexes or degrees")
        return CochainMod2(self.complex, self.degree, self.bits ^ other.bits)

    def __eq__(self, other) -> bool:
        return (isinstance(other, CochainMod2) and other.complex is self.complex
                and other.degree == self.degree and np.array_equal(self.bits, other.bits))

    __hash__ = None


@dataclass(frozen=True)
class FundamentalClassMod2:
    """The mod-2 fundamental cycle: every top simplex with coefficient 1."""

    complex: DeltaComplex

    @property
    def chain(self) -> np.ndarray:
        return np.ones(self.complex.count(self.complex.dimension), dtype=np.uint8)

    @property
    def is_cycle(self) -> bool:
        n = self.complex.dimension
        return not np.any((boundary_matrix_mod2(self.complex, n).astype(np.int64) @ self.chain) % 2)

    def pair(self, c: CochainMod2) -> int:
        if c.degree != self.complex.dimension:
            raise CochainError("pairing needs a top-degree cochain")
        return int(c.bits.sum() % 2)


@dataclass(frozen=True)
class HomologyMod2:
    betti: tuple[int, ...]
    h1_basis: tuple[CochainMod2, ...]

    @property
    def beta1(self) -> int:
        return self.betti[1] if len(self.betti) > 1 else 0


def homology_mod2(K: DeltaComplex) -> HomologyMod2:
    """Mod-2 Betti numbers and cocycle representatives of a basis of H^1."""
    n = K.dimension
    ranks = [0] * (n + 2)
    for k in range(1, n + 1):
        ranks[k] = gf2_rank(boundary_matrix_mod2(K, k))
    betti = tuple(K.count(k) - ranks[k] - ranks[k + 1] for k in range(n + 1))
    basis: tuple[CochainMod2, ...] = ()
    if n >= 1:
        if n >= 2:
            z1 = gf2_nullspace(coboundary_matrix_mod2(K, 1))
        else:
            z1 = np.eye(K.count(1), dtype=np.uint8)
        b1 = coboundary_matrix_mod2(K, 0).T  # rows: coboundaries of single vertices
        reps = gf2_complement_basis(b1.reshape(-1, K.count(1)), z1)
        basis = tuple(CochainMod2(K, 1, r) for r in reps)
    if n >= 1 and len(basis) != betti[1]:
        raise ArithmeticError("H^1 representative count disagrees with beta_1")
    return HomologyMod2(betti, basis)


def cohomologous(a: CochainMod2, b: CochainMod2) -> bool:
    """Whether two degree-1 cocycles differ by a coboundary."""
    K = a.complex
    b0 = coboundary_matrix_mod2(K, a.degree - 1).T.reshape(-1, K.count(a.degree))
    diff = a.bits ^ b.bits
    return gf2_rank(np.vstack([b0, diff])) == gf2_rank(b0)


def cup_power_pairing(K: DeltaComplex, v: CochainMod2) -> int:
    """<[K], v^n> for a degree-1 cocycle v, n = dim K.

    Alexander-Whitney: v^n on an ordered n-simplex is the product of v over
    the consecutive edges (i, i+1).
    """
    if v.degree != 1:
        raise CochainError("cup powers are taken of degree-1 cochains")
    if not v.is_cocycle:
        raise CochainError("cochain is not a cocycle")
    K.require_closed()
    spines = np.array(K.spines, dtype=np.int64).reshape(K.count(K.dimension), K.dimension)
    vals = np.prod(v.bits[spines], axis=1)
    return int(vals.sum() % 2)


def all_h1_classes(K: DeltaComplex) -> list[CochainMod2]:
    """Representatives of every element of H^1(K; Z/2), sums of basis vectors in binary order."""
    basis = homology_mod2(K).h1_basis
    out = []
    for mask in range(2 ** len(basis)):
        bits = np.zeros(K.count(1), dtype=np.uint8)
        for i, b in enumerate(basis):
            if (mask >> i) & 1:
                bits ^= b.bits
        out.append(CochainMod2(K, 1, bits))
    return out


def object_condition(Y: DeltaComplex, n: int, spectrum: str = "HZ/2") -> bool:
    """E_n(Y) = 0 for a closed (n-1)-dimensional complex Y.

    For ordinary homology (HZ or HZ/2) this holds because Y has no n-simplices;
    the check is reported rather than assumed.
    """
    if spectrum not in ("HZ", "HZ/2"):
        raise ValueError(f"object condition is only checked for HZ and HZ/2, not {spectrum}")
    if Y.dimension >= n:
        return False
    return Y.count(n) == 0
