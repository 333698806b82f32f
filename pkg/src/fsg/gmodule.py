"""Invariant-submodule enumeration for unipotent F_p[G]-modules.

A module is given by the matrices of a generating set of G acting on F_p^d.
Since G is a p-group acting in characteristic p, the action is unipotent and
every invariant line lies in the joint fixed space; submodules of dimension d
containing a fixed N of dimension d-1 are in bijection with the invariant
lines of the quotient.  The census walks dimension by dimension on that
principle, keeping only the current frontier and a set of canonical keys, so
the full lattice is never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .fplinalg import (
    FpSubspace,
    fixed_subspace,
    is_unipotent,
    quotient_action,
    subspace,
    zero_subspace,
)

DEFAULT_NODE_BUDGET = 10**8


class NotUnipotent(ValueError):
    """A generator matrix is not unipotent mod p."""


class BudgetExceeded(RuntimeError):
    """The census frontier outgrew the configured node budget."""


@dataclass
class GModule:
    """F_p^d with a unipotent action given by generator matrices.

    `gens` optionally carries the multiplicative generators (number-field
    elements) whose classes the coordinates refer to; the elimination engine
    maps a coordinate vector (e_1, ..., e_d) to the product of gens[j]**e_j.
    """

    p: int
    dim: int
    mats: list[np.ndarray]
    gens: Optional[list] = None
    label: str = ""

    def __post_init__(self):
        self.mats = [np.array(M, dtype=np.int64) % self.p for M in self.mats]
        for M in self.mats:
            if M.shape != (self.dim, self.dim):
                raise ValueError(f"matrix shape {M.shape} != dim {self.dim}")
            if not is_unipotent(M, self.p):
                raise NotUnipotent("generator matrix is not unipotent")

    def zero_submodule(self) -> FpSubspace:
        return zero_subspace(self.p, self.dim)


def _lines_of_space(S: FpSubspace) -> list[FpSubspace]:
    """All 1-dimensional subspaces of S, as canonical ambient lines."""
    p, f = S.p, S.dim
    lines = []
    # normalized coordinate vectors: first nonzero entry equals 1
    for lead in range(f):
        tail = f - lead - 1
        for idx in range(p**tail):
            coords = np.zeros(f, dtype=np.int64)
            coords[lead] = 1
            rest = idx
            for j in range(tail):
                coords[lead + 1 + j] = rest % p
                rest //= p
            vec = coords @ S.basis % p
            lines.append(subspace([vec], p, S.ambient))
    lines.sort(key=lambda L: L.key)
    return lines


def invariant_lines(M: GModule) -> list[FpSubspace]:
    """All invariant lines: exactly the lines of the joint fixed subspace."""
    return _lines_of_space(fixed_subspace(M.mats, M.dim, M.p))


def extensions_of(M: GModule, N: FpSubspace) -> list[FpSubspace]:
    """All invariant submodules of dimension dim(N)+1 containing N."""
    qdim, qmats, section = quotient_action(M.mats, N)
    if qdim == 0:
        return []
    qfixed = fixed_subspace(qmats, qdim, M.p)
    out = []
    for qline in _lines_of_space(qfixed):
        lift = section(qline.basis[0])
        rows = np.vstack([N.basis, lift[None, :]]) if N.dim else lift[None, :]
        out.append(subspace(rows, M.p, M.dim))
    out.sort(key=lambda S: S.key)
    return out


def census(
    M: GModule,
    max_dim: Optional[int] = None,
    budget: int = DEFAULT_NODE_BUDGET,
) -> dict[int, int]:
    """Submodule counts per dimension 1..max_dim (default: the full dimension).

    Breadth-first incremental extension with canonical-key dedup; only the
    frontier and the key set are retained.
    """
    top = M.dim if max_dim is None else min(max_dim, M.dim)
    counts: dict[int, int] = {}
    frontier = [M.zero_submodule()]
    nodes = 0
    for d in range(1, top + 1):
        seen: set[bytes] = set()
        next_frontier: list[FpSubspace] = []
        for N in frontier:
            for E in extensions_of(M, N):
                if E.key in seen:
                    continue
                seen.add(E.key)
                next_frontier.append(E)
                nodes += 1
                if nodes > budget:
                    raise BudgetExceeded(f"census exceeded {budget} nodes")
        next_frontier.sort(key=lambda S: S.key)
        counts[d] = len(next_frontier)
        frontier = next_frontier
    return counts


def submodules_of_dim(M: GModule, dim: int) -> list[FpSubspace]:
    """All invariant submodules of one dimension, canonical order."""
    frontier = [M.zero_submodule()]
    for d in range(1, dim + 1):
        seen: set[bytes] = set()
        nxt = []
        for N in frontier:
            for E in extensions_of(M, N):
                if E.key not in seen:
                    seen.add(E.key)
                    nxt.append(E)
        nxt.sort(key=lambda S: S.key)
        frontier = nxt
    return frontier


def minimal_sub_in(M: GModule, N: FpSubspace) -> FpSubspace:
    """Some invariant line contained in N (exists by unipotence)."""
    if N.dim < 1:
        raise ValueError("need a nonzero submodule")
    # restrict the action to N in basis coordinates
    restricted = []
    for A in M.mats:
        img = N.basis @ A.T % M.p
        R = np.array([N_coords(N, row) for row in img], dtype=np.int64)
        restricted.append(R.T % M.p)
    fix = fixed_subspace(restricted, N.dim, M.p)
    assert fix.dim >= 1, "unipotent action must fix a line"
    vec = fix.basis[0] @ N.basis % M.p
    return subspace([vec], M.p, M.dim)


def N_coords(N: FpSubspace, v: np.ndarray) -> list[int]:
    """Coordinates of v (assumed in N) w.r.t. N's RREF basis."""
    v = np.array(v, dtype=np.int64) % N.p
    coords = []
    for row, c in zip(N.basis, N.pivots):
        coords.append(int(v[c]))
        v = (v - v[c] * row) % N.p
    if np.any(v):
        raise ValueError("vector not contained in the subspace")
    return coords
