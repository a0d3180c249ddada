"""Mod-2 chain and cochain algebra over a fixed simplicial complex.

All homological computation is symmetric-difference arithmetic on simplex
supports; ranks and solves go through the GF(2) engines.  Homology is
unreduced here; the pro-system layer subtracts component counts where a
reduced group is called for.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional

import numpy as np

from .complexes import SimplicialComplex, SimplicialMap, vertex_key
from .gf2 import BitMatrix, Echelon, ResourceLimitError, SparseGF2

__all__ = [
    "ChainZ2",
    "CochainZ2",
    "HomologySummary",
    "chain",
    "cochain",
    "boundary_matrix",
    "boundary_of_chain",
    "coboundary_of_cochain",
    "homology",
    "is_cycle",
    "is_boundary",
    "solve_bounding_chain",
    "InducedMap",
    "induced_map_on_homology",
    "cup_product",
    "pair",
]


@dataclass(frozen=True)
class ChainZ2:
    """A mod-2 chain: a set of simplices of one dimension in a complex."""

    complex: SimplicialComplex
    dim: int
    support: frozenset

    def __post_init__(self):
        for s in self.support:
            if len(s) != self.dim + 1:
                raise ValueError(f"simplex {s!r} has wrong dimension")

    def __xor__(self, other: "ChainZ2") -> "ChainZ2":
        if other.complex is not self.complex or other.dim != self.dim:
            raise ValueError("chain mismatch")
        return ChainZ2(self.complex, self.dim, self.support ^ other.support)

    def is_zero(self) -> bool:
        return not self.support

    def sorted_support(self) -> list:
        return sorted(self.support, key=lambda s: [vertex_key(v) for v in s])

    def indices(self) -> np.ndarray:
        c = self.complex
        if not self.support:
            return np.empty(0, np.int32)
        rows = np.asarray([c.index_row(s) for s in self.support], np.int32)
        pos = c.locate_rows(self.dim, rows)
        if (pos < 0).any():
            raise ValueError("chain supported outside the complex")
        return np.sort(pos.astype(np.int32))


class CochainZ2(ChainZ2):
    """A mod-2 cochain: the simplices where it evaluates to 1."""


def chain(c: SimplicialComplex, dim: int, simplices: Iterable) -> ChainZ2:
    return ChainZ2(
        c, dim, frozenset(tuple(sorted(s, key=vertex_key)) for s in simplices)
    )


def cochain(c: SimplicialComplex, dim: int, simplices: Iterable) -> CochainZ2:
    return CochainZ2(
        c, dim, frozenset(tuple(sorted(s, key=vertex_key)) for s in simplices)
    )


def _chain_from_indices(c: SimplicialComplex, dim: int, idx: Iterable[int]) -> ChainZ2:
    simps = c.simplices(dim)
    return ChainZ2(c, dim, frozenset(simps[int(i)] for i in idx))


def boundary_matrix(c: SimplicialComplex, j: int) -> BitMatrix:
    """Mod-2 boundary: rows are (j-1)-simplices, columns are j-simplices."""
    if j < 1:
        raise ValueError("j must be >= 1")
    n_rows = c.n_simplices(j - 1)
    n_cols = c.n_simplices(j)
    out = BitMatrix.zeros(n_rows, n_cols)
    if n_cols:
        f = c.facets(j)
        for col in range(n_cols):
            for r in f[col]:
                out.set(int(r), col)
    return out


def boundary_of_chain(z: ChainZ2) -> ChainZ2:
    c = z.complex
    if z.dim == 0:
        raise ValueError("no boundary below dimension 0")
    idx = z.indices()
    f = c.facets(z.dim)[idx] if len(idx) else np.empty((0, z.dim + 1), np.int64)
    counts = np.bincount(f.ravel(), minlength=c.n_simplices(z.dim - 1))
    odd = np.nonzero(counts % 2)[0]
    return _chain_from_indices(c, z.dim - 1, odd)


def coboundary_of_cochain(w: CochainZ2) -> CochainZ2:
    c = w.complex
    d = w.dim
    n_up = c.n_simplices(d + 1)
    if n_up == 0:
        return CochainZ2(c, d + 1, frozenset())
    member = np.zeros(c.n_simplices(d), bool)
    member[w.indices()] = True
    odd = np.nonzero(member[c.facets(d + 1)].sum(axis=1) % 2)[0]
    simps = c.simplices(d + 1)
    return CochainZ2(c, d + 1, frozenset(simps[int(i)] for i in odd))


def is_cycle(z: ChainZ2) -> bool:
    if z.dim == 0:
        return True
    return boundary_of_chain(z).is_zero()


def _reduced_boundary(c: SimplicialComplex, j: int, witnesses=False) -> SparseGF2:
    """Reduced state of the boundary C_j -> C_{j-1} (cached per complex)."""
    key = ("reduced_boundary", j, witnesses)
    got = c._cache.get(key)
    if got is None:
        if c.n_simplices(j) == 0:
            ptr = np.zeros(1, np.int64)
            got = SparseGF2(ptr, np.empty(0, np.int32), c.n_simplices(j - 1), witnesses, witnesses)
        else:
            ptr, rows = c.boundary_csr(j)
            got = SparseGF2(ptr, rows, c.n_simplices(j - 1), witnesses, witnesses)
        c._cache[key] = got
    return got


def is_boundary(z: ChainZ2) -> bool:
    if not is_cycle(z):
        return False
    if z.is_zero():
        return True
    state = _reduced_boundary(z.complex, z.dim + 1)
    return state.in_span(z.indices())


def solve_bounding_chain(z: ChainZ2, lexmin: bool = True) -> Optional[ChainZ2]:
    """A (j+1)-chain with boundary z, or None when z is not a boundary.

    With lexmin (the default contract) the lexicographically least solution
    under the deterministic simplex order is returned; this takes a dense
    kernel computation and is refused above the desk-scale budget.  The
    large pipelines use lexmin=False, which returns the deterministic
    first-found witness of the sparse solver.
    """
    if not is_cycle(z):
        raise ValueError("input chain is not a cycle")
    c = z.complex
    if z.is_zero():
        return ChainZ2(c, z.dim + 1, frozenset())
    if lexmin:
        m = boundary_matrix(c, z.dim + 1)
        sol = m.solve(z.indices().tolist(), lexmin=True)
        if sol is None:
            return None
        return _chain_from_indices(c, z.dim + 1, sol)
    state = _reduced_boundary(c, z.dim + 1, witnesses=True)
    sol = state.solve(z.indices())
    if sol is None:
        return None
    return _chain_from_indices(c, z.dim + 1, sol)


# -- homology -----------------------------------------------------------------


@dataclass(frozen=True)
class HomologySummary:
    complex: SimplicialComplex
    betti: tuple
    cycle_reps: tuple  # per dim: tuple of ChainZ2 homology basis representatives
    boundary_reps: tuple  # per dim: tuple of ChainZ2 spanning the boundary space

    def betti_number(self, d: int) -> int:
        if d < 0 or d >= len(self.betti):
            return 0
        return self.betti[d]

    def lines(self) -> list:
        return [f"b{d}: {b}" for d, b in enumerate(self.betti)]


def _kernel_vectors(c: SimplicialComplex, d: int) -> list:
    """Kernel basis of the boundary in dimension d, as index arrays."""
    n = c.n_simplices(d)
    if d == 0:
        return [np.asarray([i], np.int32) for i in range(n)]
    if n == 0:
        return []
    state = _reduced_boundary(c, d, witnesses=True)
    return state.kernel_vectors()


def homology(c: SimplicialComplex, max_dim: Optional[int] = None) -> HomologySummary:
    """Unreduced mod-2 homology with explicit bases in every dimension."""
    top = c.dim if max_dim is None else min(max_dim, c.dim)
    betti = []
    cycle_reps = []
    boundary_reps = []
    for d in range(top + 1):
        up = _reduced_boundary(c, d + 1)
        kernels = _kernel_vectors(c, d)
        b = len(kernels) - up.rank
        ech = Echelon(c.n_simplices(d), base=up)
        reps = []
        for vec in kernels:
            if len(reps) == b:
                break
            if ech.insert(vec, tag=len(reps)):
                reps.append(_chain_from_indices(c, d, vec))
        betti.append(b)
        cycle_reps.append(tuple(reps))
        bd = []
        for slot in range(up.rank):
            bd.append(_chain_from_indices(c, d, up.pivot_column(slot)))
        boundary_reps.append(tuple(bd))
    return HomologySummary(c, tuple(betti), tuple(cycle_reps), tuple(boundary_reps))


@dataclass(frozen=True)
class InducedMap:
    """Matrix of an inclusion-induced map on homology in one dimension."""

    matrix: np.ndarray  # (b_target, b_source) uint8
    source_reps: tuple
    target_reps: tuple
    rank: int


def induced_map_on_homology(inclusion: SimplicialMap, j: int) -> InducedMap:
    if not inclusion.is_injective_on_vertices():
        raise ValueError("map is not injective on vertices")
    src = inclusion.source
    tgt = inclusion.target
    hs = homology(src, max_dim=j)
    ht = homology(tgt, max_dim=j)
    up = _reduced_boundary(tgt, j + 1)
    ech = Echelon(tgt.n_simplices(j), base=up)
    for i, rep in enumerate(ht.cycle_reps[j]):
        ech.insert(rep.indices(), tag=i)
    bs = len(hs.cycle_reps[j])
    bt = len(ht.cycle_reps[j])
    mat = np.zeros((bt, bs), np.uint8)
    for col, rep in enumerate(hs.cycle_reps[j]):
        image = frozenset(inclusion.apply(s) for s in rep.support)
        zt = ChainZ2(tgt, j, image)
        coords = ech.coords(zt.indices())
        if coords is None:
            raise ValueError("image of a cycle is not a cycle in the target")
        for tag in coords:
            mat[tag, col] = 1
    rank = BitMatrix.from_dense(mat).rank() if mat.size else 0
    return InducedMap(mat, hs.cycle_reps[j], ht.cycle_reps[j], rank)


# -- cochain operations -------------------------------------------------------


def cup_product(a: CochainZ2, b: CochainZ2) -> CochainZ2:
    """Front-face/back-face product with respect to the global vertex order."""
    if a.complex is not b.complex:
        raise ValueError("cochains on different complexes")
    c = a.complex
    p, q = a.dim, b.dim
    n = c.n_simplices(p + q)
    if n == 0:
        return CochainZ2(c, p + q, frozenset())
    arr = c.simplex_array(p + q)
    front = arr[:, : p + 1]
    back = arr[:, p:]
    amask = np.zeros(c.n_simplices(p), bool)
    if a.support:
        amask[a.indices()] = True
    bmask = np.zeros(c.n_simplices(q), bool)
    if b.support:
        bmask[b.indices()] = True
    fpos = c.locate_rows(p, front)
    bpos = c.locate_rows(q, back)
    hit = amask[fpos] & bmask[bpos]
    simps = c.simplices(p + q)
    return CochainZ2(c, p + q, frozenset(simps[i] for i in np.nonzero(hit)[0]))


def pair(w: CochainZ2, z: ChainZ2) -> int:
    """Kronecker pairing: parity of the support overlap."""
    if w.complex is not z.complex:
        raise ValueError("different complexes")
    if w.dim != z.dim:
        raise ValueError("dimension mismatch")
    return len(w.support & z.support) & 1
