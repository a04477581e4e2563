"""Linear algebra over GF(2) and over the rings Z/N.

GF(2) routines work on numpy uint8 arrays with XOR row operations. The Z/N
routines diagonalize integer matrices by unimodular row and column moves,
keeping every entry reduced mod N so nothing grows.
"""

from __future__ import annotations

import numpy as np


def gf2_row_echelon(M):
    """Row-reduce a binary matrix; returns (R, pivot_cols)."""
    R = (np.asarray(M, dtype=np.uint8) % 2).copy()
    if R.ndim != 2:
        raise ValueError("expected a 2-d array")
    m, n = R.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        hits = np.flatnonzero(R[row:, col])
        if hits.size == 0:
            continue
        p = row + hits[0]
        if p != row:
            R[[row, p]] = R[[p, row]]
        below = np.flatnonzero(R[:, col])
        below = below[below != row]
        R[below] ^= R[row]
        pivots.append(col)
        row += 1
    return R, pivots


def gf2_rank(M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(gf2_row_echelon(M)[1])


def gf2_nullspace(M) -> np.ndarray:
    """Basis of {x : M x = 0} over GF(2), one vector per row."""
    M = np.asarray(M, dtype=np.uint8) % 2
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=np.uint8)
    R, pivots = gf2_row_echelon(M)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, p in enumerate(pivots):
            basis[k, p] = R[r, f]
    return basis


def gf2_in_span(rows, v) -> bool:
    rows = np.asarray(rows, dtype=np.uint8).reshape(-1, np.asarray(v).size)
    return gf2_rank(np.vstack([rows, v])) == gf2_rank(rows)


def gf2_complement_basis(sub, ambient) -> np.ndarray:
    """Rows of ``ambient`` extending a basis of span(sub) to span(sub + ambient).

    Used to pick cohomology representatives: cocycles modulo coboundaries.
    """
    sub = np.asarray(sub, dtype=np.uint8)
    ambient = np.asarray(ambient, dtype=np.uint8)
    n = ambient.shape[1] if ambient.ndim == 2 else sub.shape[1]
    cur = sub.reshape(-1, n)
    rank = gf2_rank(cur)
    picked = []
    for v in ambient.reshape(-1, n):
        trial = np.vstack([cur, v])
        r = gf2_rank(trial)
        if r > rank:
            picked.append(v)
            cur, rank = trial, r
    return np.array(picked, dtype=np.uint8).reshape(-1, n)


# Z/N


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


class ModularSmith:
    """Diagonalize an integer matrix over Z/N: ``U @ A @ V == D (mod N)``.

    Tracks U, V and their inverses. The diagonal of D is not forced into
    divisibility order; ``gcd(d_i, N)`` are the invariants that matter.
    """

    def __init__(self, A, modulus: int, track: bool = True):
        N = int(modulus)
        if N < 1:
            raise ValueError("modulus must be positive")
        A = np.asarray(A, dtype=np.int64) % N
        self.modulus = N
        r, c = A.shape
        self.D = A.copy()
        self.track = track
        if track:
            self.U = np.eye(r, dtype=np.int64)
            self.Uinv = np.eye(r, dtype=np.int64)
            self.V = np.eye(c, dtype=np.int64)
            self.Vinv = np.eye(c, dtype=np.int64)
        self.rank = 0
        self._run()

    # elementary moves; each applies T to rows (i, j) of D and keeps U, Uinv consistent
    def _rows(self, i, j, s, t, u, v):
        N, D = self.modulus, self.D
        ri, rj = D[i].copy(), D[j].copy()
        D[i] = (s * ri + t * rj) % N
        D[j] = (u * ri + v * rj) % N
        if self.track:
            U = self.U
            ui, uj = U[i].copy(), U[j].copy()
            U[i] = (s * ui + t * uj) % N
            U[j] = (u * ui + v * uj) % N
            # inverse of [[s,t],[u,v]] (det 1) is [[v,-t],[-u,s]] applied on columns
            W = self.Uinv
            wi, wj = W[:, i].copy(), W[:, j].copy()
            W[:, i] = (wi * v - wj * u) % N
            W[:, j] = (-wi * t + wj * s) % N

    def _cols(self, i, j, s, t, u, v):
        N, D = self.modulus, self.D
        ci, cj = D[:, i].copy(), D[:, j].copy()
        D[:, i] = (s * ci + t * cj) % N
        D[:, j] = (u * ci + v * cj) % N
        if self.track:
            V = self.V
            vi, vj = V[:, i].copy(), V[:, j].copy()
            V[:, i] = (s * vi + t * vj) % N
            V[:, j] = (u * vi + v * vj) % N
            W = self.Vinv
            wi, wj = W[i].copy(), W[j].copy()
            W[i] = (wi * v - wj * u) % N
            W[j] = (-wi * t + wj * s) % N

    def _swap_rows(self, i, j):
        if i == j:
            return
        for M in (self.D, *((self.U,) if self.track else ())):
            M[[i, j]] = M[[j, i]]
        if self.track:
            self.Uinv[:, [i, j]] = self.Uinv[:, [j, i]]

    def _swap_cols(self, i, j):
        if i == j:
            return
        for M in (self.D, *((self.V,) if self.track else ())):
            M[:, [i, j]] = M[:, [j, i]]
        if self.track:
            self.Vinv[[i, j]] = self.Vinv[[j, i]]

    def _eliminate_rows(self, t):
        """Clear column t below the pivot with row moves."""
        N, D = self.modulus, self.D
        while True:
            nz = np.flatnonzero(D[t + 1:, t]) + t + 1
            if nz.size == 0:
                return
            a = int(D[t, t])
            div = nz[D[nz, t] % a == 0] if a else nz[:0]
            if div.size:
                f = (D[div, t] // a) % N
                D[div] = (D[div] - np.outer(f, D[t])) % N
                if self.track:
                    self.U[div] = (self.U[div] - np.outer(f, self.U[t])) % N
                    self.Uinv[:, t] = (self.Uinv[:, t] + self.Uinv[:, div] @ f) % N
                continue
            j = int(nz[0])
            b = int(D[j, t])
            g, s, tt = _egcd(a, b)
            self._rows(t, j, s, tt, -b // g, a // g)

    def _eliminate_cols(self, t):
        N, D = self.modulus, self.D
        while True:
            nz = np.flatnonzero(D[t, t + 1:]) + t + 1
            if nz.size == 0:
                return
            a = int(D[t, t])
            div = nz[D[t, nz] % a == 0] if a else nz[:0]
            if div.size:
                f = (D[t, div] // a) % N
                D[:, div] = (D[:, div] - np.outer(D[:, t], f)) % N
                if self.track:
                    self.V[:, div] = (self.V[:, div] - np.outer(self.V[:, t], f)) % N
                    self.Vinv[t] = (self.Vinv[t] + f @ self.Vinv[div]) % N
                continue
            j = int(nz[0])
            b = int(D[t, j])
            g, s, tt = _egcd(a, b)
            self._cols(t, j, s, tt, -b // g, a // g)

    def _run(self):
        D = self.D
        r, c = D.shape
        t = 0
        while t < min(r, c):
            sub = D[t:, t:]
            nz = np.argwhere(sub)
            if nz.size == 0:
                break
            # smallest gcd with N first keeps the number of gcd steps low
            vals = sub[nz[:, 0], nz[:, 1]]
            k = int(np.argmin(np.gcd(vals, self.modulus) * (self.modulus + 1) + vals))
            i, j = int(nz[k, 0]) + t, int(nz[k, 1]) + t
            self._swap_rows(t, i)
            self._swap_cols(t, j)
            while np.any(D[t + 1:, t]) or np.any(D[t, t + 1:]):
                self._eliminate_rows(t)
                self._eliminate_cols(t)
            t += 1
        self.rank = t

    def diagonal(self) -> list[int]:
        return [int(self.D[i, i]) for i in range(self.rank)]


def kernel_mod(A, modulus: int) -> tuple[np.ndarray, list[int]]:
    """Generators of {x in (Z/N)^c : A x = 0} as a direct sum of cyclic groups.

    Returns (Z, orders): column k of Z generates a cyclic summand of order
    orders[k]; summands of order 1 are dropped.
    """
    N = int(modulus)
    A = np.asarray(A, dtype=np.int64)
    c = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(c, dtype=np.int64), [N] * c
    sm = ModularSmith(A, N)
    gens, orders = [], []
    diag = sm.diagonal()
    for k in range(c):
        g = np.gcd(diag[k], N) if k < len(diag) else N
        if g == 1:
            continue
        gens.append(sm.V[:, k] * (N // g) % N)
        orders.append(int(g))
    Z = np.array(gens, dtype=np.int64).T.reshape(c, len(gens))
    return Z, orders
