"""Simplicial deleted products, diagonal-complement filtrations, and the
Van Kampen-type embedding obstruction decision."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np

from .chains import ChainZ2, CochainZ2, cochain, cup_product, pair, _chain_from_indices
from .complexes import (
    SimplicialComplex,
    SimplicialMap,
    product_triangulation,
    vertex_key,
    _lattice_paths,
)
from .equivariant import Involution, double_cover_class, quotient_complex
from .generators import grid_window
from .gf2 import SparseGF2, csr_from_columns

__all__ = [
    "DeletedProduct",
    "deleted_product",
    "DiagonalFiltration",
    "diagonal_filtration",
    "VanKampenResult",
    "vankampen_obstruction",
    "grid_window_generator",
]


@dataclass
class DeletedProduct:
    """Staircase triangulation of the union of cells sigma x tau, sigma
    disjoint from tau, with the factor-swap involution."""

    complex: SimplicialComplex
    swap: Involution
    base: SimplicialComplex

    def source_pair(self, simplex) -> tuple:
        first = tuple(sorted({v[0] for v in simplex}, key=vertex_key))
        second = tuple(sorted({v[1] for v in simplex}, key=vertex_key))
        return first, second


def deleted_product(k: SimplicialComplex) -> DeletedProduct:
    """All chains of the product order with disjoint spanning projections."""
    simplices = []
    for d in range(k.dim + 1):
        simplices.extend(k.simplices(d))
    rows_by_dim: Dict[int, list] = {}
    for s in simplices:
        ss = set(s)
        for t in simplices:
            if ss & set(t):
                continue
            p, q = len(s) - 1, len(t) - 1
            for path in _lattice_paths(p, q):
                rows_by_dim.setdefault(p + q, []).append(
                    tuple((s[i], t[j]) for i, j in path)
                )
    cells = []
    for d, rows in rows_by_dim.items():
        cells.extend(rows)
    cplx = SimplicialComplex.from_simplices(cells)
    perm = {v: (v[1], v[0]) for v in cplx.vertices}
    swap = Involution(cplx, perm)
    return DeletedProduct(cplx, swap, k)


@dataclass
class DiagonalFiltration:
    """Nested swap-invariant complements of diagonal neighborhoods.

    level_masks[i] selects the simplices of X_{r_i} inside the product
    triangulation ``square``; empty levels are reported, not fatal.
    """

    base: SimplicialComplex
    square: SimplicialComplex
    diagonal_masks: list
    radii: tuple
    level_masks: list
    swap_vertex: Dict
    empty_levels: tuple
    _materialized: dict = field(default_factory=dict)

    def complex_at(self, i: int) -> SimplicialComplex:
        got = self._materialized.get(i)
        if got is None:
            got = self.square.subcomplex_from_masks(self.level_masks[i])
            self._materialized[i] = got
        return got

    def swap_on_level(self, i: int) -> Involution:
        c = self.complex_at(i)
        return Involution(c, {v: (v[1], v[0]) for v in c.vertices})

    def kept_counts(self, i: int) -> list:
        return [int(m.sum()) for m in self.level_masks[i]]


def _neighborhood_masks(square: SimplicialComplex, vmask0: np.ndarray, r: int):
    """Masks of N_r of the subcomplex spanned by a vertex mask's carrier."""
    vmask = vmask0.copy()
    masks = None
    for _ in range(r):
        masks = square.star_masks(vmask)
        vmask = square.vertices_of_masks(masks)
    return masks, vmask


def diagonal_filtration(x: SimplicialComplex, radii) -> DiagonalFiltration:
    radii = tuple(int(r) for r in radii)
    if any(r < 1 for r in radii):
        raise ValueError("radii must be positive")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii not strictly increasing")
    square = product_triangulation(x, x)
    diag_vmask = np.zeros(len(square.vertices), bool)
    for v in x.vertices:
        diag_vmask[square.vertex_index((v, v))] = True
    diag_masks = [np.zeros(square.n_simplices(d), bool) for d in range(square.dim + 1)]
    for d in range(x.dim + 1):
        rows = np.asarray(
            [
                np.sort([square.vertex_index((v, v)) for v in s])
                for s in x.simplices(d)
            ],
            np.int32,
        ).reshape(-1, d + 1)
        pos = square.locate_rows(d, rows)
        if (pos < 0).any():
            raise AssertionError("diagonal is not a subcomplex")
        diag_masks[d][pos] = True
    level_masks = []
    empty = []
    vmask = diag_vmask
    nbr_masks = None
    cur_r = 0
    for idx, r in enumerate(radii):
        step_masks, vmask = _neighborhood_masks(square, vmask, r - cur_r)
        nbr_masks = step_masks
        cur_r = r
        keep = [~m for m in nbr_masks]
        square.close_masks_down(keep)
        level_masks.append(keep)
        if not any(m.any() for m in keep):
            empty.append(r)
    # nesting is monotone by construction; verify cheaply
    for i in range(len(radii) - 1):
        for d in range(square.dim + 1):
            if (level_masks[i + 1][d] & ~level_masks[i][d]).any():
                raise AssertionError("filtration is not nested")
    swap_vertex = {v: (v[1], v[0]) for v in square.vertices}
    return DiagonalFiltration(
        base=x,
        square=square,
        diagonal_masks=diag_masks,
        radii=radii,
        level_masks=level_masks,
        swap_vertex=swap_vertex,
        empty_levels=tuple(empty),
    )


def swap_simplex_permutations(filt: DiagonalFiltration) -> list:
    """Simplex-level swap permutation arrays of the ambient square."""
    sq = filt.square
    got = sq._cache.get("swap_perms")
    if got is not None:
        return got
    arr = np.asarray(
        [sq.vertex_index(filt.swap_vertex[v]) for v in sq.vertices], np.int64
    )
    perms = []
    for d in range(sq.dim + 1):
        rows = np.sort(arr[sq.simplex_array(d)], axis=1).astype(np.int32)
        pos = sq.locate_rows(d, rows)
        if (pos < 0).any():
            raise AssertionError("swap is not simplicial on the square")
        perms.append(pos)
    sq._cache["swap_perms"] = perms
    return perms


# -- Van Kampen obstruction ----------------------------------------------------


@dataclass(frozen=True)
class VanKampenResult:
    value: int
    dim: int
    witness_cycle: Optional[ChainZ2]
    certificate_cochain: Optional[CochainZ2]
    quotient: SimplicialComplex
    deleted: DeletedProduct
    subdivision_rounds: int

    def lines(self) -> list:
        out = [f"obstruction: {self.value}", f"dim: {self.dim}"]
        out.append(f"quotient-simplices: {self.quotient.num_simplices()}")
        out.append(f"subdivision-rounds: {self.subdivision_rounds}")
        if self.witness_cycle is not None:
            out.append(
                "witness-cycle-size: %d" % len(self.witness_cycle.support)
            )
        if self.certificate_cochain is not None:
            out.append(
                "certificate-cochain-size: %d" % len(self.certificate_cochain.support)
            )
        return out


def _coboundary_csr(c: SimplicialComplex, m: int):
    """Columns of delta: C^{m-1} -> C^m (one column per (m-1)-simplex)."""
    n_lo = c.n_simplices(m - 1)
    n_hi = c.n_simplices(m)
    cols = [[] for _ in range(n_lo)]
    if n_hi:
        f = c.facets(m)
        for t in range(n_hi):
            for s in f[t]:
                cols[int(s)].append(t)
    return csr_from_columns([np.asarray(sorted(col), np.int32) for col in cols], n_hi)


def vankampen_obstruction(k: SimplicialComplex, m: int) -> VanKampenResult:
    """1 iff the m-th power of the double-cover class is not a coboundary.

    Returns, with the bit, either an m-cycle pairing to 1 with the class
    power (obstruction present) or a cochain whose coboundary is the power.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    dp = deleted_product(k)
    qp = quotient_complex(dp.swap)
    w1 = double_cover_class(qp)
    q = qp.quotient
    power = w1
    for _ in range(m - 1):
        power = cup_product(power, w1)
    # try to solve  delta c = power
    ptr, rows = _coboundary_csr(q, m)
    state = SparseGF2(ptr, rows, q.n_simplices(m), witnesses=True)
    target = power.indices()
    sol = state.solve(target)
    if sol is not None:
        cert = CochainZ2(
            q, m - 1, frozenset(q.simplices(m - 1)[int(i)] for i in sol)
        )
        return VanKampenResult(
            value=0,
            dim=m,
            witness_cycle=None,
            certificate_cochain=cert,
            quotient=q,
            deleted=dp,
            subdivision_rounds=qp.rounds,
        )
    # not a coboundary: find an m-cycle pairing to one
    from .chains import _kernel_vectors

    wmask = np.zeros(q.n_simplices(m), bool)
    wmask[target] = True
    witness = None
    for vec in _kernel_vectors(q, m):
        if int(wmask[vec].sum()) & 1:
            witness = _chain_from_indices(q, m, vec)
            break
    if witness is None:
        raise AssertionError("class power not a coboundary yet pairs to zero")
    return VanKampenResult(
        value=1,
        dim=m,
        witness_cycle=witness,
        certificate_cochain=None,
        quotient=q,
        deleted=dp,
        subdivision_rounds=qp.rounds,
    )


def grid_window_generator(k: int, halfwidth: int) -> SimplicialComplex:
    """Kuhn-triangulated integer window, the desk-scale contractible base."""
    if halfwidth < 2:
        raise ValueError("halfwidth must be >= 2")
    return grid_window(k, halfwidth)
