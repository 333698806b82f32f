"""Exact linear algebra over F_p: canonical subspaces, kernels, quotient actions.

Matrices are numpy int64 arrays with entries reduced mod p.  Subspaces are
carried in reduced row-echelon form, which is the unique canonical basis: two
subspaces are equal iff their canonical forms are byte-identical, and that byte
string doubles as the dedup key for the submodule enumeration.

Intended for the small p of residual representations (p = 2, 3, ...); entries
must satisfy p**2 < 2**63.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class NotInvariant(ValueError):
    """A matrix does not preserve the given subspace."""


def rref(M: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row-echelon form and pivot columns. Deterministic."""
    R = np.array(M, dtype=np.int64) % p
    if R.ndim != 2:
        raise ValueError("expected a 2-d array")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        col = R[:, c].copy()
        col[r] = 0
        R = (R - np.outer(col, R[r])) % p
        pivots.append(c)
        r += 1
    return R[: len(pivots)], tuple(pivots)


def nullspace(M: np.ndarray, p: int) -> np.ndarray:
    """Canonical (RREF) basis of the right kernel, rows = basis vectors."""
    M = np.atleast_2d(np.array(M, dtype=np.int64)) % p
    n = M.shape[1]
    R, pivots = rref(M, p)
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return np.zeros((0, n), dtype=np.int64)
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, c in enumerate(free):
        basis[k, c] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = (-int(R[row, c])) % p
    B, _ = rref(basis, p)
    return B


@dataclass(frozen=True)
class FpSubspace:
    """A subspace of F_p^n held by its unique RREF basis."""

    ambient: int
    p: int
    basis: np.ndarray = field(compare=False)
    pivots: tuple[int, ...]
    key: bytes = field(init=False, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "key", self.basis.astype(np.int64).tobytes())

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __hash__(self):
        return hash((self.ambient, self.p, self.pivots, self.key))

    def __repr__(self):
        return f"FpSubspace(dim {self.dim} of F_{self.p}^{self.ambient})"

    def contains(self, v: np.ndarray) -> bool:
        return not np.any(self.reduce(v) % self.p)

    def contains_subspace(self, other: "FpSubspace") -> bool:
        return all(self.contains(row) for row in other.basis)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Residue of v after eliminating this subspace's pivot coordinates."""
        v = np.array(v, dtype=np.int64) % self.p
        for row, c in zip(self.basis, self.pivots):
            if v[c]:
                v = (v - v[c] * row) % self.p
        return v


def subspace(vectors, p: int, ambient: int) -> FpSubspace:
    """The span of the given vectors (any iterable of length-`ambient` rows)."""
    arr = np.array(list(vectors), dtype=np.int64).reshape(-1, ambient)
    B, piv = rref(arr, p)
    return FpSubspace(ambient, p, B, piv)


def zero_subspace(p: int, ambient: int) -> FpSubspace:
    return FpSubspace(ambient, p, np.zeros((0, ambient), dtype=np.int64), ())


def full_subspace(p: int, ambient: int) -> FpSubspace:
    return FpSubspace(
        ambient, p, np.eye(ambient, dtype=np.int64), tuple(range(ambient))
    )


def sum_subspaces(a: FpSubspace, b: FpSubspace) -> FpSubspace:
    rows = np.vstack([a.basis, b.basis]) if a.dim or b.dim else a.basis
    return subspace(rows, a.p, a.ambient)


def fixed_subspace(mats, ambient: int, p: int) -> FpSubspace:
    """The joint eigenvalue-1 eigenspace {v : Mv = v for all M}."""
    mats = [np.array(M, dtype=np.int64) % p for M in mats]
    if not mats:
        return full_subspace(p, ambient)
    stacked = np.vstack([(M - np.eye(ambient, dtype=np.int64)) % p for M in mats])
    return subspace(nullspace(stacked, p), p, ambient)


def is_invariant(mats, N: FpSubspace) -> bool:
    for M in mats:
        img = np.array(M, dtype=np.int64) @ N.basis.T % N.p
        for col in img.T:
            if not N.contains(col):
                return False
    return True


def quotient_action(mats, N: FpSubspace):
    """Induced action on ambient/N in non-pivot coordinates of N.

    Returns (quotient dim, induced matrices, section) where section maps a
    quotient coordinate vector to its canonical ambient representative.
    """
    if not is_invariant(mats, N):
        raise NotInvariant("subspace is not preserved by every matrix")
    p = N.p
    n = N.ambient
    free = [c for c in range(n) if c not in N.pivots]
    qdim = len(free)

    def section(w: np.ndarray) -> np.ndarray:
        v = np.zeros(n, dtype=np.int64)
        v[free] = np.array(w, dtype=np.int64) % p
        return v

    def project(v: np.ndarray) -> np.ndarray:
        return N.reduce(v)[free]

    qmats = []
    for M in mats:
        M = np.array(M, dtype=np.int64) % p
        Q = np.zeros((qdim, qdim), dtype=np.int64)
        for j in range(qdim):
            e = np.zeros(qdim, dtype=np.int64)
            e[j] = 1
            Q[:, j] = project(M @ section(e) % p)
        qmats.append(Q)
    return qdim, qmats, section


def is_unipotent(M: np.ndarray, p: int) -> bool:
    M = np.array(M, dtype=np.int64) % p
    n = M.shape[0]
    A = (M - np.eye(n, dtype=np.int64)) % p
    P = A.copy()
    for _ in range(n - 1):
        if not P.any():
            return True
        P = P @ A % p
    return not P.any()
