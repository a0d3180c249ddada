"""Delta complexes: cells glued along order-preserving face maps.

The constructive pipelines assemble complexes cell by cell (one cell per
chain summand, faces identified in pairs) and only later convert to honest
simplicial complexes by barycentric subdivision.  A bundle carries, along
with the cells, any number of cell-payload maps (ordered image tuples into
a fixed simplicial target), an order-preserving cell involution, and tag
masks for tracked subcomplexes; all of these transport through subdivision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .complexes import SimplicialComplex, SimplicialMap, vertex_key

__all__ = [
    "DeltaComplex",
    "DeltaBuilder",
    "DeltaBundle",
    "delta_from_simplicial",
    "boundary_of_delta",
    "barycentric_subdivide",
    "make_equivariant_choice",
    "make_plain_choice",
]


class DeltaComplex:
    """Cells per dimension with codimension-1 face identifications.

    faces[d] is an (n_d, d+1) int32 array; entry (c, i) names the cell of
    dimension d-1 obtained by deleting vertex i (order preserved).
    """

    def __init__(self, counts: List[int], faces: List[Optional[np.ndarray]]):
        self.counts = list(counts)
        self.faces = faces
        self._vt: List[Optional[np.ndarray]] = [None] * len(counts)
        self.validate()

    @property
    def dim(self) -> int:
        for d in range(len(self.counts) - 1, -1, -1):
            if self.counts[d]:
                return d
        return -1

    def n_cells(self, d: int) -> int:
        if d < 0 or d >= len(self.counts):
            return 0
        return self.counts[d]

    def validate(self) -> None:
        for d in range(1, len(self.counts)):
            f = self.faces[d]
            if self.counts[d] == 0:
                continue
            if f is None or f.shape != (self.counts[d], d + 1):
                raise ValueError(f"bad face table in dimension {d}")
            if f.size and (f.min() < 0 or f.max() >= self.counts[d - 1]):
                raise ValueError(f"face index out of range in dimension {d}")
        # simplicial identities d_i d_j = d_{j-1} d_i  (i < j)
        for d in range(2, len(self.counts)):
            if self.counts[d] == 0:
                continue
            f = self.faces[d]
            g = self.faces[d - 1]
            for i in range(d + 1):
                for j in range(i + 1, d + 1):
                    if not np.array_equal(g[f[:, j], i], g[f[:, i], j - 1]):
                        raise ValueError(
                            f"inconsistent identifications at dim {d} ({i},{j})"
                        )

    def vertex_tuples(self, d: int) -> np.ndarray:
        """(n_d, d+1) array of 0-cell indices underlying each cell."""
        if self._vt[d] is None:
            if d == 0:
                self._vt[0] = np.arange(self.counts[0], dtype=np.int32).reshape(-1, 1)
            else:
                prev = self.vertex_tuples(d - 1)
                f = self.faces[d]
                out = np.empty((self.counts[d], d + 1), np.int32)
                if self.counts[d]:
                    out[:, 0] = prev[f[:, d], 0]
                    out[:, 1:] = prev[f[:, 0], :]
                self._vt[d] = out
        return self._vt[d]

    def is_regular(self) -> bool:
        """True when cells embed: distinct vertices, distinct vertex sets."""
        seen = set()
        for d in range(len(self.counts)):
            if self.counts[d] == 0:
                continue
            vt = np.sort(self.vertex_tuples(d), axis=1)
            if d > 0 and (vt[:, 1:] == vt[:, :-1]).any():
                return False
            for row in vt:
                key = row.tobytes()
                if key in seen:
                    return False
                seen.add(key)
        return True


def delta_from_simplicial(c: SimplicialComplex) -> DeltaComplex:
    """View a simplicial complex as a Delta complex (sorted vertex order)."""
    counts = [c.n_simplices(d) for d in range(c.dim + 1)]
    faces: List[Optional[np.ndarray]] = [None]
    for d in range(1, c.dim + 1):
        faces.append(c.facets(d).astype(np.int32))
    return DeltaComplex(counts, faces)


def boundary_of_delta(dc: DeltaComplex, m: int):
    """Subcomplex spanned by m-cells with odd (m+1)-incidence.

    Returns (boundary DeltaComplex, per-dimension index arrays into dc).
    """
    if m + 1 >= len(dc.counts) or dc.counts[m + 1] == 0:
        raise ValueError(f"no cells in dimension {m + 1}")
    inc = np.bincount(dc.faces[m + 1].ravel(), minlength=dc.counts[m])
    marks = [np.zeros(dc.counts[d], bool) for d in range(m + 1)]
    marks[m] = (inc % 2).astype(bool)
    for d in range(m, 0, -1):
        if marks[d].any():
            marks[d - 1][dc.faces[d][marks[d]].ravel()] = True
    keep = [np.nonzero(mk)[0] for mk in marks]
    old2new = [np.full(dc.counts[d], -1, np.int64) for d in range(m + 1)]
    for d in range(m + 1):
        old2new[d][keep[d]] = np.arange(len(keep[d]))
    faces: List[Optional[np.ndarray]] = [None]
    counts = [len(keep[0])]
    for d in range(1, m + 1):
        counts.append(len(keep[d]))
        faces.append(old2new[d - 1][dc.faces[d][keep[d]]].astype(np.int32))
    return DeltaComplex(counts, faces), keep


# -- gluing builder ----------------------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        root = p
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


class DeltaBuilder:
    """Assemble a Delta complex from top cells and face gluings.

    Cells are added with an ordered image tuple (the map payload) and an
    optional tag.  ``glue`` identifies two sub-faces order-preservingly;
    ``finalize`` returns a DeltaBundle.
    """

    def __init__(self, target: SimplicialComplex):
        self.target = target
        self.cells: List[tuple] = []  # (dim, image tuple, tag)
        self.uf = _UnionFind()
        self.face_tags: List[tuple] = []  # (cell, positions, tag)
        self.class_index: Dict[tuple, tuple] = {}

    def add_cell(self, image: Sequence, tag=None) -> int:
        cid = len(self.cells)
        self.cells.append((len(image) - 1, tuple(image), tag))
        return cid

    def tag_face(self, cell: int, positions: Sequence[int], tag) -> None:
        self.face_tags.append((cell, tuple(positions), tag))

    def glue(self, cell_a: int, pos_a: Sequence[int], cell_b: int, pos_b: Sequence[int]):
        """Identify face pos_a of cell_a with face pos_b of cell_b, in order."""
        pa = tuple(pos_a)
        pb = tuple(pos_b)
        if len(pa) != len(pb):
            raise ValueError("face position arity mismatch")
        for r in range(1, len(pa) + 1):
            for sub in combinations(range(len(pa)), r):
                fa = tuple(pa[i] for i in sub)
                fb = tuple(pb[i] for i in sub)
                self.uf.union((cell_a, fa), (cell_b, fb))

    def finalize(self) -> "DeltaBundle":
        # collect every (cell, subset) element
        classes: Dict[tuple, list] = {}
        for cid, (d, img, _tag) in enumerate(self.cells):
            for r in range(1, d + 2):
                for sub in combinations(range(d + 1), r):
                    root = self.uf.find((cid, sub))
                    classes.setdefault(root, []).append((cid, sub))
        # payload consistency and canonical ordering
        reps = sorted(classes, key=lambda root: min(classes[root]))
        index: Dict[tuple, tuple] = {}
        by_dim: Dict[int, list] = {}
        for root in reps:
            members = classes[root]
            d = len(members[0][1]) - 1
            imgs = {
                tuple(self.cells[cid][1][p] for p in sub) for cid, sub in members
            }
            if len(imgs) != 1:
                raise ValueError("glued faces carry different image tuples")
            by_dim.setdefault(d, []).append(root)
        counts = [len(by_dim.get(d, [])) for d in range(max(by_dim) + 1)]
        for d, roots in by_dim.items():
            roots.sort(key=lambda root: min(classes[root]))
            for i, root in enumerate(roots):
                index[root] = (d, i)
        faces: List[Optional[np.ndarray]] = [None]
        for d in range(1, len(counts)):
            f = np.empty((counts[d], d + 1), np.int32)
            for i, root in enumerate(by_dim.get(d, [])):
                cid, sub = min(classes[root])
                for k in range(d + 1):
                    fsub = tuple(p for t, p in enumerate(sub) if t != k)
                    f[i, k] = index[self.uf.find((cid, fsub))][1]
            faces.append(f)
        dc = DeltaComplex(counts, faces)
        payload = [
            [None] * counts[d] for d in range(len(counts))
        ]
        tags = [
            [set() for _ in range(counts[d])] for d in range(len(counts))
        ]
        for d in range(len(counts)):
            for i, root in enumerate(by_dim.get(d, [])):
                cid, sub = min(classes[root])
                payload[d][i] = tuple(self.cells[cid][1][p] for p in sub)
                for c, _ in classes[root]:
                    t = self.cells[c][2]
                    if t is not None:
                        tags[d][i].add(t)
        for cell, positions, tag in self.face_tags:
            for r in range(1, len(positions) + 1):
                for sub in combinations(positions, r):
                    d, i = index[self.uf.find((cell, sub))]
                    tags[d][i].add(tag)
        self.class_index = index_by_member = {}
        for root, members in classes.items():
            for m in members:
                index_by_member[m] = index[root]
        bundle = DeltaBundle(dc, self.target)
        bundle.payloads["map"] = payload
        bundle.tag_sets = [[frozenset(ts) for ts in row] for row in tags]
        return bundle

    def involution_perms(self, cell_map: Dict[int, int], n_dims: int) -> list:
        """Per-dim permutations induced by an order-preserving cell bijection."""
        perms = [np.full(0, -1, np.int64)] * n_dims
        sizes = {}
        for (cid, sub), (d, i) in self.class_index.items():
            sizes[d] = max(sizes.get(d, 0), i + 1)
        perms = [np.full(sizes.get(d, 0), -1, np.int64) for d in range(n_dims)]
        for (cid, sub), (d, i) in self.class_index.items():
            j = self.class_index[(cell_map[cid], sub)][1]
            if perms[d][i] >= 0 and perms[d][i] != j:
                raise ValueError("cell map does not respect gluings")
            perms[d][i] = j
        for d, p in enumerate(perms):
            if (p < 0).any():
                raise ValueError("cell map misses cells")
        return perms


# -- bundles and subdivision --------------------------------------------------


def make_plain_choice() -> Callable:
    return lambda s: max(s, key=vertex_key)


def make_equivariant_choice(involution: Dict) -> Callable:
    """Simplex -> vertex choice commuting with a vertex involution."""
    cache: Dict[tuple, object] = {}

    def choice(s: tuple):
        got = cache.get(s)
        if got is not None:
            return got
        mate = tuple(sorted((involution[v] for v in s), key=vertex_key))
        rep = min((s, mate), key=lambda t: [vertex_key(v) for v in t])
        pick = max(rep, key=vertex_key)
        other = tuple(sorted((involution[v] for v in rep), key=vertex_key))
        cache[rep] = pick
        cache[other] = involution[pick]
        return cache[s]

    return choice


@dataclass
class DeltaBundle:
    """A Delta complex plus transported structure.

    payloads: name -> per-dim list of ordered image tuples (Delta maps into
    ``target`` for "map", or into a sphere complex registered separately).
    involution: per-dim int arrays (order-preserving cell involution).
    tag_sets: per-dim list of frozensets of tags.
    """

    delta: DeltaComplex
    target: SimplicialComplex
    payloads: Dict[str, list] = field(default_factory=dict)
    payload_targets: Dict[str, SimplicialComplex] = field(default_factory=dict)
    involution: Optional[List[np.ndarray]] = None
    tag_sets: Optional[list] = None
    rounds: int = 0

    def payload_target(self, name: str) -> SimplicialComplex:
        if name == "map":
            return self.target
        return self.payload_targets[name]

    def check_involution(self) -> None:
        inv = self.involution
        if inv is None:
            return
        dc = self.delta
        for d in range(len(dc.counts)):
            a = inv[d]
            if len(a) != dc.counts[d]:
                raise ValueError("involution arity mismatch")
            if dc.counts[d] and not np.array_equal(a[a], np.arange(dc.counts[d])):
                raise ValueError("not an involution")
        for d in range(1, len(dc.counts)):
            if dc.counts[d] == 0:
                continue
            f = dc.faces[d]
            for i in range(d + 1):
                if not np.array_equal(inv[d - 1][f[:, i]], f[inv[d]][:, i]):
                    raise ValueError("involution does not respect faces")

    def is_free(self) -> bool:
        if self.involution is None:
            return True
        for d in range(len(self.delta.counts)):
            n = self.delta.counts[d]
            if n and (self.involution[d] == np.arange(n)).any():
                return False
        return True

    # -- subdivision -------------------------------------------------------

    def subdivide(self, choices: Optional[Dict[str, Callable]] = None) -> "DeltaBundle":
        """One barycentric round; payloads composed with last-vertex choices."""
        dc = self.delta
        choices = choices or {}
        chain_lists = _chains_by_dim(dc)
        # canonical cell ordering per new dim: (base_dim, base_cell, chain)
        new_index: Dict[tuple, int] = {}
        new_counts = []
        top = dc.dim
        for k in range(top + 1):
            cells = chain_lists[k]
            for i, key in enumerate(cells):
                new_index[key] = i
            new_counts.append(len(cells))
        faces: List[Optional[np.ndarray]] = [None]
        face_subset_cache: Dict[tuple, tuple] = {}

        def push_down(n, c, chain):
            # chain ends strictly below the full set; move into the face cell
            T = chain[-1]
            key = (n, c, T)
            hit = face_subset_cache.get(key)
            if hit is None:
                cc, dd = c, n
                for p in sorted(set(range(n + 1)) - set(T), reverse=True):
                    cc = dc.faces[dd][cc, p]
                    dd -= 1
                face_subset_cache[key] = (dd, cc)
            else:
                dd, cc = hit
            rank = {x: t for t, x in enumerate(T)}
            new_chain = tuple(tuple(rank[x] for x in S) for S in chain)
            return (dd, cc, new_chain)

        for k in range(1, top + 1):
            cells = chain_lists[k]
            f = np.empty((len(cells), k + 1), np.int32)
            for i, (n, c, chain) in enumerate(cells):
                for drop in range(k + 1):
                    sub = chain[:drop] + chain[drop + 1 :]
                    if drop < k:
                        f[i, drop] = new_index[(n, c, sub)]
                    else:
                        f[i, drop] = new_index[push_down(n, c, sub)]
            faces.append(f)
        new_dc = DeltaComplex(new_counts, faces)
        out = DeltaBundle(new_dc, self.target, rounds=self.rounds + 1)
        out.payload_targets = dict(self.payload_targets)
        for name, payload in self.payloads.items():
            choice = choices.get(name) or make_plain_choice()
            new_payload = []
            for k in range(top + 1):
                lst = []
                for (n, c, chain) in chain_lists[k]:
                    base = payload[n][c]
                    lst.append(
                        tuple(
                            choice(tuple(sorted(set(base[p] for p in S), key=vertex_key)))
                            for S in chain
                        )
                    )
                new_payload.append(lst)
            out.payloads[name] = new_payload
        if self.involution is not None:
            perms = []
            for k in range(top + 1):
                cells = chain_lists[k]
                perm = np.empty(len(cells), np.int64)
                for i, (n, c, chain) in enumerate(cells):
                    perm[i] = new_index[(n, int(self.involution[n][c]), chain)]
                perms.append(perm)
            out.involution = perms
        if self.tag_sets is not None:
            new_tags = []
            for k in range(top + 1):
                new_tags.append(
                    [self.tag_sets[n][c] for (n, c, chain) in chain_lists[k]]
                )
            out.tag_sets = new_tags
        return out

    # -- simplicial conversion ----------------------------------------------

    def to_simplicial(self):
        """Convert a regular bundle to a SimplicialComplex with structure.

        Returns (complex, vertex_maps, involution_dict, tag_masks) where
        vertex_maps[name] sends the new integer vertices into the payload
        target's vertices.
        """
        dc = self.delta
        if not dc.is_regular():
            raise ValueError("Delta complex is not regular; subdivide first")
        rows = {
            d: np.sort(dc.vertex_tuples(d), axis=1)
            for d in range(len(dc.counts))
            if dc.counts[d]
        }
        verts = list(range(dc.counts[0]))
        cplx = SimplicialComplex._from_index_rows(verts, rows, None)
        vertex_maps = {
            name: {v: payload[0][v][0] for v in verts}
            for name, payload in self.payloads.items()
        }
        inv = None
        if self.involution is not None:
            inv = {v: int(self.involution[0][v]) for v in verts}
        tag_masks = None
        if self.tag_sets is not None:
            tag_masks = {}
            all_tags = set()
            for d in range(len(dc.counts)):
                for ts in self.tag_sets[d]:
                    all_tags |= ts
            for tag in all_tags:
                masks = [np.zeros(cplx.n_simplices(d), bool) for d in range(cplx.dim + 1)]
                for d in range(len(dc.counts)):
                    if dc.counts[d] == 0:
                        continue
                    vt = np.sort(dc.vertex_tuples(d), axis=1)
                    pos = cplx.locate_rows(d, vt)
                    sel = np.asarray(
                        [tag in ts for ts in self.tag_sets[d]], bool
                    )
                    masks[d][pos[sel]] = True
                tag_masks[tag] = masks
        return cplx, vertex_maps, inv, tag_masks


def _chains_by_dim(dc: DeltaComplex):
    """Per new dimension, the Sd cells (base_dim, base_cell, chain to full)."""
    top = dc.dim
    out: Dict[int, list] = {k: [] for k in range(top + 1)}
    chain_cache: Dict[int, Dict[int, list]] = {}
    for n in range(top + 1):
        chain_cache[n] = _subset_chains(n)
    for n in range(top + 1):
        for c in range(dc.counts[n]):
            for k, chains in chain_cache[n].items():
                for chain in chains:
                    out[k].append((n, c, chain))
    for k in out:
        out[k].sort()
    return out


_SUBSET_CHAIN_CACHE: Dict[int, Dict[int, list]] = {}


def _subset_chains(n: int) -> Dict[int, list]:
    """Chains of nonempty subsets of {0..n} ending at the full set, by length-1."""
    got = _SUBSET_CHAIN_CACHE.get(n)
    if got is not None:
        return got
    full = tuple(range(n + 1))
    subsets = []
    for r in range(1, n + 2):
        subsets.extend(combinations(range(n + 1), r))
    chains: Dict[int, list] = {0: [(full,)]}
    frontier = [(full,)]
    k = 0
    while frontier:
        k += 1
        nxt = []
        for chain in frontier:
            head = chain[0]
            for r in range(1, len(head)):
                for sub in combinations(head, r):
                    nxt.append((sub,) + chain)
        if not nxt:
            break
        chains[k] = nxt
        frontier = nxt
    _SUBSET_CHAIN_CACHE[n] = chains
    return chains


def barycentric_subdivide(c) -> SimplicialComplex:
    """Barycentric subdivision returning a simplicial complex.

    Simplicial input subdivides once.  Delta input subdivides once and, if
    the result is still not regular, a second time (always sufficient).
    """
    from .complexes import barycentric_subdivide_simplicial

    if isinstance(c, SimplicialComplex):
        return barycentric_subdivide_simplicial(c)
    if isinstance(c, DeltaComplex):
        bundle = DeltaBundle(c, SimplicialComplex.empty())
        bundle = bundle.subdivide()
        if not bundle.delta.is_regular():
            bundle = bundle.subdivide()
        cplx, _, _, _ = bundle.to_simplicial()
        return cplx
    raise TypeError("expected a SimplicialComplex or DeltaComplex")
