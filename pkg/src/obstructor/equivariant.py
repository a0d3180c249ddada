"""Free simplicial Z2-actions: quotients, the double-cover class, mod-2
degree, and verification of essential Z2-cycle certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .chains import CochainZ2, ChainZ2, chain, cochain, coboundary_of_cochain
from .complexes import (
    SimplicialComplex,
    SimplicialMap,
    barycentric_subdivide_simplicial,
    vertex_key,
)

__all__ = [
    "InvolutionError",
    "Involution",
    "check_involution",
    "EquivariantSimplicialMap",
    "QuotientPresentation",
    "quotient_complex",
    "double_cover_class",
    "deg2",
    "EssentialCycleCertificate",
    "VerificationReport",
    "verify_essential_cycle",
    "fundamental_class",
]


class InvolutionError(ValueError):
    """A vertex permutation fails to be a free simplicial involution."""


class Involution:
    """A free simplicial involution, stored as a vertex permutation."""

    def __init__(self, complex: SimplicialComplex, perm: Dict, check: bool = True):
        self.complex = complex
        self.perm = dict(perm)
        if check:
            problems = self.violations()
            if problems:
                raise InvolutionError("; ".join(problems))

    def violations(self) -> List[str]:
        c = self.complex
        out = []
        for v in c.vertices:
            w = self.perm.get(v)
            if w is None:
                out.append(f"vertex {v!r} unmapped")
                return out
            if w not in c._vindex:
                out.append(f"image {w!r} of {v!r} is not a vertex")
                return out
            if self.perm.get(w) != v:
                out.append(f"not an involution at {v!r}")
                return out
        arr = self.vertex_array()
        for d in range(c.dim + 1):
            rows = arr[c.simplex_array(d)]
            rows.sort(axis=1)
            pos = c.locate_rows(d, rows.astype(np.int32))
            bad = np.nonzero(pos < 0)[0]
            if bad.size:
                s = c.simplices(d)[int(bad[0])]
                out.append(f"non-simplicial: image of {s!r} is not a simplex")
                continue
            fixed = np.nonzero(pos == np.arange(len(pos)))[0]
            if fixed.size:
                s = c.simplices(d)[int(fixed[0])]
                out.append(f"fixfail: simplex {s!r} is setwise fixed")
        return out

    def vertex_array(self) -> np.ndarray:
        c = self.complex
        return np.asarray([c.vertex_index(self.perm[v]) for v in c.vertices], np.int64)

    def orbit_rep(self, v):
        w = self.perm[v]
        return min(v, w, key=vertex_key)

    def simplex_image(self, s) -> tuple:
        return tuple(sorted((self.perm[v] for v in s), key=vertex_key))

    def simplex_permutation(self, d: int) -> np.ndarray:
        """Positions of image simplices, dimension d."""
        c = self.complex
        arr = self.vertex_array()
        rows = np.sort(arr[c.simplex_array(d)], axis=1).astype(np.int32)
        pos = c.locate_rows(d, rows)
        if (pos < 0).any():
            raise InvolutionError("non-simplicial involution")
        return pos

    def induced_on_subdivision(self, sd: SimplicialComplex) -> "Involution":
        """The involution on a barycentric subdivision (barycenter transport)."""
        perm = {v: self.simplex_image(v) for v in sd.vertices}
        return Involution(sd, perm)


def check_involution(c: SimplicialComplex, perm: Dict) -> Involution:
    """Validate a vertex permutation as a free simplicial involution."""
    return Involution(c, perm)


@dataclass
class EquivariantSimplicialMap:
    """A simplicial map commuting with involutions on both sides."""

    map: SimplicialMap
    source_involution: Involution
    target_involution: Dict  # vertex involution of the target

    def __post_init__(self):
        f = self.map.mapping
        a = self.source_involution.perm
        b = self.target_involution
        for v in self.map.source.vertices:
            if f[a[v]] != b[f[v]]:
                raise ValueError(f"not equivariant at vertex {v!r}")


# -- quotients ----------------------------------------------------------------


@dataclass
class QuotientPresentation:
    quotient: SimplicialComplex
    projection: SimplicialMap  # cover -> quotient
    section: Dict  # quotient vertex -> chosen sheet vertex in the cover
    involution: Involution  # the (possibly subdivided) cover's involution
    rounds: int  # barycentric rounds applied to reach regularity


def _regularity_violation(inv: Involution) -> Optional[str]:
    c = inv.complex
    orbit = {v: inv.orbit_rep(v) for v in c.vertices}
    ovec = np.asarray([c.vertex_index(orbit[v]) for v in c.vertices], np.int64)
    for d in range(c.dim + 1):
        rows = ovec[c.simplex_array(d)]
        rows = np.sort(rows, axis=1)
        if d > 0 and (rows[:, 1:] == rows[:, :-1]).any():
            return f"a {d}-simplex meets an orbit twice"
        # distinct non-partner simplices may not share an orbit image
        order = np.lexsort(rows.T[::-1])
        srows = rows[order]
        same = np.nonzero((srows[1:] == srows[:-1]).all(axis=1))[0]
        if same.size:
            perm = inv.simplex_permutation(d)
            for i in same:
                x, y = int(order[i]), int(order[i + 1])
                if perm[x] != y:
                    return f"two {d}-simplices share an orbit image"
                if i + 2 < len(srows) and (srows[i + 2] == srows[i]).all():
                    return f"three {d}-simplices share an orbit image"
    return None


def quotient_complex(inv: Involution, max_rounds: int = 2) -> QuotientPresentation:
    """Simplicial quotient by a free involution, subdividing until regular."""
    rounds = 0
    work = inv
    while True:
        problem = _regularity_violation(work)
        if problem is None:
            break
        if rounds >= max_rounds:
            raise InvolutionError(
                f"quotient not regular after {max_rounds} subdivisions: {problem}"
            )
        sd = barycentric_subdivide_simplicial(work.complex)
        work = work.induced_on_subdivision(sd)
        rounds += 1
    c = work.complex
    orbit = {v: work.orbit_rep(v) for v in c.vertices}
    simplices = set()
    for d in range(c.dim + 1):
        for s in c.simplices(d):
            simplices.add(tuple(sorted((orbit[v] for v in s), key=vertex_key)))
    quotient = SimplicialComplex.from_simplices(sorted(simplices, key=lambda t: [vertex_key(v) for v in t]))
    projection = SimplicialMap(c, quotient, orbit, check=False)
    section = {r: r for r in quotient.vertices}
    return QuotientPresentation(quotient, projection, section, work, rounds)


def double_cover_class(qp: QuotientPresentation) -> CochainZ2:
    """The degree-1 class of the covering: 1 on edges whose preferred lift
    leaves the sheet section."""
    cover = qp.involution.complex
    a = qp.involution.perm
    q = qp.projection.mapping
    lifts: Dict = {}
    for v in cover.vertices:
        lifts.setdefault(q[v], []).append(v)
    support = []
    for (x, y) in qp.quotient.simplices(1):
        x0 = qp.section[x]
        stay = None
        for ylift in lifts[y]:
            if cover.has_simplex(tuple(sorted((x0, ylift), key=vertex_key))):
                stay = ylift
                break
        if stay is None:
            raise AssertionError("projection is not simplex-surjective")
        if stay != qp.section[y]:
            support.append((x, y))
    w = cochain(qp.quotient, 1, support)
    if not coboundary_of_cochain(w).is_zero():
        raise AssertionError("double-cover class is not a cocycle")
    return w


# -- degree -------------------------------------------------------------------


def _is_sphere_like(target: SimplicialComplex, m: int) -> bool:
    """Pure m-pseudomanifold with every (m-1)-simplex in exactly two m-cells."""
    if target.dim != m:
        return False
    if m == 0:
        return target.n_simplices(0) == 2
    deg = target.cofacet_degrees(m - 1)
    if not (deg == 2).all():
        return False
    for d in range(m):
        if (target.cofacet_degrees(d) == 0).any():
            return False
    return True


def _even_incidence(c: SimplicialComplex, m: int) -> bool:
    if c.dim != m or c.n_simplices(m) == 0:
        return False
    for d in range(m):
        if (c.cofacet_degrees(d) == 0).any():
            return False  # not pure
    if m == 0:
        return True
    return bool((c.cofacet_degrees(m - 1) % 2 == 0).all())


def deg2(f, target_involution: Optional[Dict] = None) -> int:
    """Mod-2 degree: parity of top simplices mapped onto a fixed target cell.

    Accepts a SimplicialMap or EquivariantSimplicialMap whose source
    satisfies the even-incidence condition and whose target is a
    triangulated sphere (two top cells per ridge).  The parity is
    recomputed at a second target cell and must agree.
    """
    if isinstance(f, EquivariantSimplicialMap):
        f = f.map
    src, tgt = f.source, f.target
    m = tgt.dim
    if not _is_sphere_like(tgt, m):
        raise ValueError("target is not a two-to-one pseudomanifold sphere")
    if not _even_incidence(src, m):
        raise ValueError("source does not satisfy the even-incidence condition")
    arr = f.vertex_index_map()
    rows = arr[src.simplex_array(m)]
    rows_sorted = np.sort(rows, axis=1)
    if m > 0:
        nondeg = ~(rows_sorted[:, 1:] == rows_sorted[:, :-1]).any(axis=1)
    else:
        nondeg = np.ones(len(rows_sorted), bool)
    pos = tgt.locate_rows(m, rows_sorted[nondeg].astype(np.int32))
    n_top = tgt.n_simplices(m)
    counts = np.bincount(pos[pos >= 0], minlength=n_top)
    first = int(counts[0]) & 1
    second = int(counts[-1]) & 1
    if first != second:
        raise ValueError(
            "degree parity differs between target cells; "
            "the source is not a cycle or the map is not simplicial"
        )
    return first


def fundamental_class(c: SimplicialComplex) -> ChainZ2:
    """Sum of all top-dimensional simplices."""
    return chain(c, c.dim, c.simplices(c.dim))


# -- certificates --------------------------------------------------------------


@dataclass
class TargetSubcomplex:
    """A named subcomplex of an ambient complex, as per-dimension masks."""

    ambient: SimplicialComplex
    masks: list
    label: str
    swap: Optional[Dict] = None  # ambient vertex involution, when present

    def contains_row(self, d: int, row: np.ndarray) -> bool:
        pos = int(self.ambient.locate_rows(d, row.reshape(1, -1))[0])
        return pos >= 0 and bool(self.masks[d][pos])


@dataclass
class EssentialCycleCertificate:
    """Data realizing an essential Z2-m-cycle, optionally mapped to a Y_r."""

    complex: SimplicialComplex
    involution: Involution
    sphere_map: SimplicialMap
    sphere_involution: Dict
    target_map: Optional[SimplicialMap] = None
    target: Optional[TargetSubcomplex] = None
    provenance: str = ""
    discretization: Dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return self.complex.dim


@dataclass(frozen=True)
class VerificationReport:
    m: int
    conditions: tuple  # ordered (name, bool) pairs
    deg2_value: Optional[int]
    messages: tuple

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.conditions)

    def lines(self) -> list:
        out = [f"essential: {'true' if self.passed else 'false'}", f"m: {self.m}"]
        if self.deg2_value is not None:
            out.append(f"deg2: {self.deg2_value}")
        for name, ok in self.conditions:
            out.append(f"condition {name}: {'pass' if ok else 'fail'}")
        for msg in self.messages:
            out.append(f"note: {msg}")
        return out


def verify_essential_cycle(cert: EssentialCycleCertificate) -> VerificationReport:
    """Check the three defining conditions and any attached target map."""
    conditions = []
    messages = []
    m = cert.complex.dim
    conditions.append(("even_incidence", _even_incidence(cert.complex, m)))

    free_ok = True
    try:
        probs = cert.involution.violations()
        if probs:
            free_ok = False
            messages.extend(probs)
    except Exception as exc:  # pragma: no cover - defensive
        free_ok = False
        messages.append(str(exc))
    conditions.append(("free_involution", free_ok))

    sphere_ok = True
    try:
        EquivariantSimplicialMap(
            cert.sphere_map, cert.involution, cert.sphere_involution
        )
    except ValueError as exc:
        sphere_ok = False
        messages.append(f"sphere map: {exc}")
    conditions.append(("sphere_equivariant", sphere_ok))

    value = None
    deg_ok = False
    if conditions[0][1] and sphere_ok:
        try:
            value = deg2(cert.sphere_map)
            deg_ok = value == 1
        except ValueError as exc:
            messages.append(f"deg2: {exc}")
    conditions.append(("sphere_degree_odd", deg_ok))

    if cert.target_map is not None:
        tgt_ok = True
        if cert.target is None or cert.target.swap is None:
            tgt_ok = False
            messages.append("target map present without target subcomplex data")
        else:
            try:
                EquivariantSimplicialMap(
                    cert.target_map, cert.involution, cert.target.swap
                )
            except ValueError as exc:
                tgt_ok = False
                messages.append(f"target map: {exc}")
        conditions.append(("target_equivariant", tgt_ok))
        inside = True
        if tgt_ok:
            arr = cert.target_map.vertex_index_map()
            amb = cert.target.ambient
            for d in range(cert.complex.dim + 1):
                rows = arr[cert.complex.simplex_array(d)]
                rows = np.sort(rows, axis=1)
                for row in rows:
                    u = np.unique(row)
                    dd = len(u) - 1
                    pos = int(amb.locate_rows(dd, u.astype(np.int32))[0])
                    if pos < 0 or not cert.target.masks[dd][pos]:
                        inside = False
                        break
                if not inside:
                    break
        else:
            inside = False
        conditions.append(("target_in_subcomplex", inside))
    return VerificationReport(
        m=m, conditions=tuple(conditions), deg2_value=value, messages=tuple(messages)
    )
