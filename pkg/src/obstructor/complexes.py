"""Finite simplicial complexes and simplicial maps.

Vertices are opaque sortable tokens (ints, strings, or nested tuples of
those); a global total order on tokens fixes every staircase triangulation
and every deterministic pivot choice downstream.  Internally a complex
stores, per dimension, a lexicographically sorted int32 index array of its
simplices, which keeps desk-scale objects light and product complexes with
a few million simplices workable.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "vertex_key",
    "Simplex",
    "SimplicialComplex",
    "SimplicialMap",
    "ValidationReport",
    "validate_complex",
    "iterated_star_neighborhood",
    "barycentric_subdivide_simplicial",
    "subdivision_vertex_choice",
    "induced_subdivision_map",
    "product_triangulation",
    "join_complexes",
    "cone",
]


def vertex_key(v):
    """Sort key giving a total order across int, str and tuple tokens."""
    if isinstance(v, bool):
        return (0, int(v))
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(vertex_key(x) for x in v))
    raise TypeError(f"unsupported vertex token: {v!r}")


Simplex = Tuple  # a simplex is a tuple of vertex tokens sorted by vertex_key


def _void(a: np.ndarray) -> np.ndarray:
    """Byte view of int32 rows whose lexicographic order matches numeric."""
    be = np.ascontiguousarray(a, dtype=">i4")
    return be.view(np.dtype((np.void, be.shape[1] * 4))).ravel()


class SimplicialComplex:
    """Downward-closed finite simplicial complex (immutable after build)."""

    __slots__ = ("_verts", "_vindex", "_dims", "_coords", "_facets", "_tuples", "_cache")

    def __init__(self, verts, dims, coords=None):
        self._verts = verts
        self._vindex = {v: i for i, v in enumerate(verts)}
        self._dims = dims
        self._coords = coords
        self._facets: List[Optional[np.ndarray]] = [None] * len(dims)
        self._tuples: List[Optional[list]] = [None] * len(dims)
        self._cache: Dict = {}

    # -- construction ------------------------------------------------------

    @classmethod
    def from_simplices(cls, simplices: Iterable[Sequence], coords=None, vertices=None):
        """Build from an iterable of vertex-token tuples (faces implied)."""
        vset = set(vertices) if vertices else set()
        cleaned = []
        for s in simplices:
            t = tuple(s)
            if not t:
                raise ValueError("empty simplex")
            if len(set(t)) != len(t):
                raise ValueError(f"repeated vertex in simplex {t!r}")
            vset.update(t)
            cleaned.append(t)
        verts = sorted(vset, key=vertex_key)
        vindex = {v: i for i, v in enumerate(verts)}
        by_dim: Dict[int, list] = {}
        for t in cleaned:
            row = sorted(vindex[v] for v in t)
            by_dim.setdefault(len(t) - 1, []).append(row)
        rows = {
            d: np.asarray(r, dtype=np.int32).reshape(len(r), d + 1)
            for d, r in by_dim.items()
        }
        if coords is not None:
            coords = {v: tuple(Fraction(x) for x in pt) for v, pt in coords.items()}
        return cls._from_index_rows(verts, rows, coords)

    @classmethod
    def _from_index_rows(cls, verts, rows: Dict[int, np.ndarray], coords=None):
        """Build from per-dimension index rows; computes the closure."""
        if len(verts) >= 2**31:
            raise ValueError("too many vertices")
        top = max(rows) if rows else 0
        dims: List[Optional[np.ndarray]] = [None] * (top + 1)
        pending = dict(rows)
        nv = len(verts)
        for d in range(top, 0, -1):
            a = pending.get(d)
            if a is None or len(a) == 0:
                dims[d] = np.empty((0, d + 1), np.int32)
                continue
            a = np.unique(np.sort(np.asarray(a, np.int32), axis=1), axis=0)
            dims[d] = a
            n = len(a)
            faces = np.concatenate(
                [np.delete(a, i, axis=1) for i in range(d + 1)], axis=0
            )
            prev = pending.get(d - 1)
            if prev is not None and len(prev):
                prev = np.sort(np.asarray(prev, np.int32), axis=1)
                pending[d - 1] = np.concatenate([faces, prev], axis=0)
            else:
                pending[d - 1] = faces
        zero = pending.get(0)
        base = np.arange(nv, dtype=np.int32).reshape(nv, 1)
        if zero is not None and len(zero):
            zero = np.concatenate([np.asarray(zero, np.int32), base], axis=0)
        else:
            zero = base
        dims[0] = np.unique(zero, axis=0)
        if len(dims[0]) != nv:
            raise ValueError("simplex refers to an undeclared vertex index")
        out = cls(list(verts), [dims[d] for d in range(top + 1)], coords)
        return out

    @classmethod
    def empty(cls):
        return cls([], [np.empty((0, 1), np.int32)], None)

    # -- basic queries -----------------------------------------------------

    @property
    def vertices(self) -> list:
        return list(self._verts)

    @property
    def coords(self):
        return self._coords

    @property
    def dim(self) -> int:
        for d in range(len(self._dims) - 1, -1, -1):
            if len(self._dims[d]):
                return d
        return -1

    def n_simplices(self, d: int) -> int:
        if d < 0 or d >= len(self._dims):
            return 0
        return len(self._dims[d])

    def num_simplices(self) -> int:
        return sum(len(a) for a in self._dims)

    def simplex_array(self, d: int) -> np.ndarray:
        if d < 0 or d >= len(self._dims):
            return np.empty((0, max(d + 1, 1)), np.int32)
        return self._dims[d]

    def simplices(self, d: int) -> list:
        """Simplices of dimension d as tuples of vertex tokens (sorted order)."""
        if d < 0 or d >= len(self._dims):
            return []
        if self._tuples[d] is None:
            vs = self._verts
            self._tuples[d] = [tuple(vs[i] for i in row) for row in self._dims[d]]
        return self._tuples[d]

    def all_simplices(self) -> list:
        out = []
        for d in range(len(self._dims)):
            out.extend(self.simplices(d))
        return out

    def vertex_index(self, v) -> int:
        return self._vindex[v]

    def index_row(self, simplex: Sequence) -> np.ndarray:
        return np.sort(
            np.asarray([self._vindex[v] for v in simplex], np.int32)
        )

    def locate_rows(self, d: int, rows: np.ndarray) -> np.ndarray:
        """Positions of the given sorted index rows in dimension d, -1 if absent."""
        a = self.simplex_array(d)
        rows = np.asarray(rows, np.int32).reshape(-1, d + 1)
        if len(a) == 0:
            return np.full(len(rows), -1, np.int64)
        hv = _void(a)
        qv = _void(rows)
        pos = np.searchsorted(hv, qv)
        ok = pos < len(hv)
        safe = np.where(ok, pos, 0)
        ok &= hv[safe] == qv
        return np.where(ok, pos, -1).astype(np.int64)

    def has_simplex(self, simplex: Sequence) -> bool:
        t = tuple(simplex)
        if any(v not in self._vindex for v in t):
            return False
        row = self.index_row(t)
        return int(self.locate_rows(len(t) - 1, row)[0]) >= 0

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(a) for d, a in enumerate(self._dims))

    def facets(self, d: int) -> np.ndarray:
        """(n_d, d+1) positions of each d-simplex's facets in dimension d-1."""
        if d <= 0 or d >= len(self._dims):
            return np.empty((0, max(d + 1, 1)), np.int64)
        if self._facets[d] is None:
            a = self._dims[d]
            n = len(a)
            if n == 0:
                self._facets[d] = np.empty((0, d + 1), np.int64)
            else:
                faces = np.concatenate(
                    [np.delete(a, i, axis=1) for i in range(d + 1)], axis=0
                )
                pos = self.locate_rows(d - 1, faces)
                if (pos < 0).any():
                    raise AssertionError("closure invariant violated")
                self._facets[d] = pos.reshape(d + 1, n).T.copy()
        return self._facets[d]

    def cofacet_degrees(self, d: int) -> np.ndarray:
        """Number of (d+1)-cofaces of each d-simplex."""
        n = self.n_simplices(d)
        if self.n_simplices(d + 1) == 0:
            return np.zeros(n, np.int64)
        return np.bincount(self.facets(d + 1).ravel(), minlength=n)

    def maximal_masks(self) -> list:
        out = []
        for d in range(len(self._dims)):
            out.append(self.cofacet_degrees(d) == 0)
        return out

    def boundary_csr(self, d: int) -> tuple:
        """CSR columns of the mod-2 boundary map C_d -> C_{d-1}."""
        f = np.sort(self.facets(d), axis=1).astype(np.int32)
        n = len(f)
        ptr = np.arange(n + 1, dtype=np.int64) * (d + 1)
        return ptr, f.ravel()

    # -- subcomplexes ------------------------------------------------------

    def full_masks(self) -> list:
        return [np.ones(len(a), bool) for a in self._dims]

    def close_masks_down(self, masks: list) -> list:
        """Add all faces of marked simplices (in place) and return masks."""
        for d in range(len(self._dims) - 1, 0, -1):
            if d >= len(masks) or not masks[d].any():
                continue
            f = self.facets(d)[masks[d]]
            masks[d - 1][f.ravel()] = True
        return masks

    def masks_from_simplices(self, simplices: Iterable[Sequence]) -> list:
        masks = [np.zeros(len(a), bool) for a in self._dims]
        for s in simplices:
            t = tuple(s)
            d = len(t) - 1
            pos = int(self.locate_rows(d, self.index_row(t))[0])
            if pos < 0:
                raise ValueError(f"simplex {t!r} not in complex")
            masks[d][pos] = True
        return self.close_masks_down(masks)

    def star_masks(self, vmask: np.ndarray) -> list:
        """Closed star of the vertex set: simplices meeting it, closed down."""
        masks = []
        for d in range(len(self._dims)):
            a = self._dims[d]
            masks.append(vmask[a].any(axis=1) if len(a) else np.zeros(0, bool))
        return self.close_masks_down(masks)

    def vertices_of_masks(self, masks: list) -> np.ndarray:
        vmask = np.zeros(len(self._verts), bool)
        for d, m in enumerate(masks):
            if m.any():
                vmask[self._dims[d][m].ravel()] = True
        return vmask

    def subcomplex_from_masks(self, masks: list) -> "SimplicialComplex":
        """Materialize the subcomplex selected by per-dimension masks."""
        vmask = self.vertices_of_masks(masks)
        old2new = np.full(len(self._verts), -1, np.int64)
        keep = np.nonzero(vmask)[0]
        old2new[keep] = np.arange(len(keep))
        verts = [self._verts[i] for i in keep]
        rows = {}
        for d, m in enumerate(masks):
            if m.any():
                rows[d] = old2new[self._dims[d][m]].astype(np.int32)
        coords = None
        if self._coords is not None:
            coords = {v: self._coords[v] for v in verts if v in self._coords}
        return SimplicialComplex._from_index_rows(verts, rows, coords)

    def canonical_bytes(self) -> bytes:
        h = hashlib.sha256()
        for v in self._verts:
            h.update(repr(v).encode())
        for a in self._dims:
            h.update(a.tobytes())
        return h.digest()


# -- simplicial maps --------------------------------------------------------


class SimplicialMap:
    """Vertex assignment whose simplex images span target simplices."""

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex, mapping: Dict, check: bool = True):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)
        if check:
            self._validate()

    def _validate(self):
        for v in self.source.vertices:
            if v not in self.mapping:
                raise ValueError(f"vertex {v!r} unmapped")
            if self.mapping[v] not in self.target._vindex:
                raise ValueError(f"image vertex {self.mapping[v]!r} not in target")
        arr = self.vertex_index_map()
        for d in range(1, self.source.dim + 1):
            rows = arr[self.source.simplex_array(d)]
            rows = np.sort(rows, axis=1)
            dup = (rows[:, 1:] == rows[:, :-1]).any(axis=1)
            plain = rows[~dup]
            if len(plain):
                pos = self.target.locate_rows(d, plain)
                if (pos < 0).any():
                    bad = plain[np.nonzero(pos < 0)[0][0]]
                    raise ValueError(
                        f"image of a simplex does not span a target simplex: {bad}"
                    )
            for row in rows[dup]:
                u = np.unique(row)
                if int(self.target.locate_rows(len(u) - 1, u)[0]) < 0:
                    raise ValueError(
                        "degenerate image does not span a target simplex"
                    )

    def vertex_index_map(self) -> np.ndarray:
        """Array sending source vertex indices to target vertex indices."""
        tind = self.target._vindex
        return np.asarray(
            [tind[self.mapping[v]] for v in self.source.vertices], np.int64
        )

    def apply(self, simplex: Sequence) -> tuple:
        img = sorted({self.mapping[v] for v in simplex}, key=vertex_key)
        return tuple(img)

    def is_injective_on_vertices(self) -> bool:
        vals = list(self.mapping.values())
        return len(set(vals)) == len(vals)

    def is_inclusion(self) -> bool:
        if any(k != v for k, v in self.mapping.items()):
            return False
        for d in range(self.source.dim + 1):
            for s in self.source.simplices(d):
                if not self.target.has_simplex(s):
                    return False
        return True

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """self after other (other.source -> self.target)."""
        if other.target is not self.source:
            raise ValueError("composition target/source mismatch")
        return SimplicialMap(
            other.source,
            self.target,
            {v: self.mapping[w] for v, w in other.mapping.items()},
            check=False,
        )


# -- validation --------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple
    n_vertices: int
    n_simplices: int

    def lines(self) -> list:
        out = [
            f"valid: {'true' if self.valid else 'false'}",
            f"vertices: {self.n_vertices}",
            f"simplices: {self.n_simplices}",
        ]
        for v in self.violations:
            out.append(f"violation: {v}")
        return out


def validate_complex(vertices, simplices, coords=None) -> ValidationReport:
    """Check downward closure and coordinate consistency of raw data."""
    violations = []
    vset = set(vertices)
    sset = {tuple(sorted(s, key=vertex_key)) for s in simplices}
    for s in sset:
        if len(set(s)) != len(s):
            violations.append(f"repeated vertex in simplex {s!r}")
            continue
        for v in s:
            if v not in vset:
                violations.append(f"simplex {s!r} uses undeclared vertex {v!r}")
        if len(s) > 1:
            for f in combinations(s, len(s) - 1):
                if tuple(f) not in sset:
                    violations.append(f"missing face {tuple(f)!r} of {s!r}")
    covered = {v for s in sset for v in s}
    for v in sorted(vset - covered, key=vertex_key):
        if (v,) not in sset:
            violations.append(f"vertex {v!r} belongs to no simplex")
    if coords:
        arity = None
        for v, pt in coords.items():
            if arity is None:
                arity = len(pt)
            if len(pt) != arity:
                violations.append(f"coordinate arity mismatch at {v!r}")
        for v in sorted(vset, key=vertex_key):
            if v not in coords:
                violations.append(f"vertex {v!r} has no coordinates")
    return ValidationReport(
        valid=not violations,
        violations=tuple(violations),
        n_vertices=len(vset),
        n_simplices=len(sset),
    )


# -- neighborhoods -----------------------------------------------------------


def iterated_star_neighborhood(
    c: SimplicialComplex, sub, r: int, as_masks: bool = False
):
    """r-fold iterated closed star of a subcomplex of c."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if isinstance(sub, SimplicialComplex):
        sub_simplices = sub.all_simplices()
    else:
        sub_simplices = list(sub)
    masks = c.masks_from_simplices(sub_simplices)
    vmask = c.vertices_of_masks(masks)
    for _ in range(r):
        masks = c.star_masks(vmask)
        vmask = c.vertices_of_masks(masks)
    if as_masks:
        return masks
    return c.subcomplex_from_masks(masks)


# -- barycentric subdivision -------------------------------------------------


def barycentric_subdivide_simplicial(c: SimplicialComplex) -> SimplicialComplex:
    """Barycentric subdivision: vertices are simplices, simplices are flags."""
    maximal = c.maximal_masks()
    tops = []
    for d in range(len(maximal)):
        arr = c.simplex_array(d)[maximal[d]]
        tops.extend(tuple(row) for row in arr)
    verts = c.vertices
    flags = []
    for top in tops:
        names = tuple(verts[i] for i in top)
        for perm in permutations(range(len(top))):
            chain = []
            acc = []
            for p in perm:
                acc.append(names[p])
                chain.append(tuple(sorted(acc, key=vertex_key)))
            flags.append(tuple(chain))
    return SimplicialComplex.from_simplices(flags)


def subdivision_vertex_choice(c: SimplicialComplex, orbit_of=None) -> Dict:
    """Choice function simplex -> one of its vertices, as used by the
    last-vertex projection Sd(c) -> c.

    With ``orbit_of`` (an involution vertex dict) the choice commutes with
    the involution: the lexicographically smaller simplex of each orbit gets
    its max vertex, its partner gets the image of that vertex.
    """
    choice = {}
    for d in range(c.dim + 1):
        for s in c.simplices(d):
            if s in choice:
                continue
            if orbit_of is None:
                choice[s] = max(s, key=vertex_key)
                continue
            mate = tuple(sorted((orbit_of[v] for v in s), key=vertex_key))
            rep = min((s, mate), key=lambda t: [vertex_key(v) for v in t])
            pick = max(rep, key=vertex_key)
            choice[rep] = pick
            other = tuple(sorted((orbit_of[v] for v in rep), key=vertex_key))
            choice[other] = orbit_of[pick]
    return choice


def last_vertex_map(sd: SimplicialComplex, c: SimplicialComplex, choice=None) -> SimplicialMap:
    """Simplicial projection Sd(c) -> c sending each barycenter into its cell."""
    if choice is None:
        choice = {}
    mapping = {}
    for v in sd.vertices:
        mapping[v] = choice.get(v) or max(v, key=vertex_key)
    return SimplicialMap(sd, c, mapping, check=False)


def induced_subdivision_map(
    f: SimplicialMap, sd_source: SimplicialComplex, sd_target: SimplicialComplex
) -> SimplicialMap:
    """Sd(f): barycenter of s goes to the barycenter of the span of f(s)."""
    mapping = {}
    for v in sd_source.vertices:
        mapping[v] = f.apply(v)
    return SimplicialMap(sd_source, sd_target, mapping)


# -- products, joins, cones --------------------------------------------------


def _lattice_paths(p: int, q: int) -> list:
    """Monotone unit-step paths through the (p+1) x (q+1) grid."""
    out = []
    for ups in combinations(range(p + q), p):
        i = j = 0
        pts = [(0, 0)]
        for step in range(p + q):
            if step in ups:
                i += 1
            else:
                j += 1
            pts.append((i, j))
        out.append(pts)
    return out


def product_triangulation(
    a: SimplicialComplex, b: SimplicialComplex
) -> SimplicialComplex:
    """Staircase triangulation of |a| x |b| over the global vertex order.

    Simplices are the chains of the coordinatewise order on vertex pairs
    whose projections span simplices; each cell sigma x tau is a subcomplex,
    and for a = b the diagonal is a subcomplex.
    """
    na, nb = len(a.vertices), len(b.vertices)
    if na * nb >= 2**31:
        raise ValueError("product too large")
    amax = a.maximal_masks()
    bmax = b.maximal_masks()
    rows_by_dim: Dict[int, list] = {}
    for p in range(len(amax)):
        arr_a = a.simplex_array(p)[amax[p]].astype(np.int64)
        if len(arr_a) == 0:
            continue
        for q in range(len(bmax)):
            arr_b = b.simplex_array(q)[bmax[q]].astype(np.int64)
            if len(arr_b) == 0:
                continue
            for path in _lattice_paths(p, q):
                ii = np.array([pt[0] for pt in path])
                jj = np.array([pt[1] for pt in path])
                block = (
                    arr_a[:, None, ii] * nb + arr_b[None, :, jj]
                ).reshape(-1, p + q + 1)
                rows_by_dim.setdefault(p + q, []).append(block)
    averts = a.vertices
    bverts = b.vertices
    verts = [(u, v) for u in averts for v in bverts]
    rows = {
        d: np.concatenate(blocks, axis=0).astype(np.int32)
        for d, blocks in rows_by_dim.items()
    }
    coords = None
    if a.coords is not None and b.coords is not None:
        coords = {
            (u, v): tuple(a.coords[u]) + tuple(b.coords[v])
            for u in averts
            for v in bverts
        }
    return SimplicialComplex._from_index_rows(verts, rows, coords)


def join_complexes(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    """Simplicial join; identifier spaces are disjointified if they clash."""
    averts, bverts = a.vertices, b.vertices
    clash = set(averts) & set(bverts)
    if clash:
        la = {v: (0, v) for v in averts}
        lb = {v: (1, v) for v in bverts}
    else:
        la = {v: v for v in averts}
        lb = {v: v for v in bverts}
    simplices = []
    amax = a.maximal_masks()
    bmax = b.maximal_masks()
    atops = [
        tuple(la[v] for v in s)
        for d in range(len(amax))
        for s, keep in zip(a.simplices(d), amax[d])
        if keep
    ]
    btops = [
        tuple(lb[v] for v in s)
        for d in range(len(bmax))
        for s, keep in zip(b.simplices(d), bmax[d])
        if keep
    ]
    if not atops:
        simplices = btops
    elif not btops:
        simplices = atops
    else:
        for s in atops:
            for t in btops:
                simplices.append(s + t)
    return SimplicialComplex.from_simplices(simplices)


def cone(c: SimplicialComplex) -> SimplicialComplex:
    """Join with a fresh apex named from a hash of the base complex."""
    apex = ("apex", c.canonical_bytes()[:8].hex())
    point = SimplicialComplex.from_simplices([(apex,)])
    return join_complexes(c, point)
