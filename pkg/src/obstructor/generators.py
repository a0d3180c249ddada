"""Deterministic fixture generators: spheres, graphs, grids, tori."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product

from .complexes import SimplicialComplex, product_triangulation

__all__ = [
    "path_complex",
    "cycle_complex",
    "complete_graph",
    "complete_bipartite",
    "cross_polytope_sphere",
    "antipode_map",
    "grid_window",
    "staircase_torus",
    "csaszar_torus",
    "tree_complex",
]


def path_complex(n_vertices: int) -> SimplicialComplex:
    if n_vertices < 1:
        raise ValueError("need at least one vertex")
    if n_vertices == 1:
        return SimplicialComplex.from_simplices([(0,)])
    return SimplicialComplex.from_simplices([(i, i + 1) for i in range(n_vertices - 1)])


def cycle_complex(n: int) -> SimplicialComplex:
    if n < 3:
        raise ValueError("a simplicial circle needs at least 3 vertices")
    return SimplicialComplex.from_simplices([(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> SimplicialComplex:
    if n < 2:
        raise ValueError("need at least two vertices")
    return SimplicialComplex.from_simplices(list(combinations(range(n), 2)))


def complete_bipartite(p: int, q: int) -> SimplicialComplex:
    left = [("l", i) for i in range(p)]
    right = [("r", j) for j in range(q)]
    return SimplicialComplex.from_simplices([(u, v) for u in left for v in right])


def cross_polytope_sphere(m: int) -> SimplicialComplex:
    """Boundary of the (m+1)-cross-polytope: the canonical antipodal S^m.

    Vertices are +-1 .. +-(m+1); top simplices pick one sign per axis.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    axes = range(1, m + 2)
    tops = []
    for signs in product((1, -1), repeat=m + 1):
        tops.append(tuple(s * a for s, a in zip(signs, axes)))
    return SimplicialComplex.from_simplices(tops)


def antipode_map(sphere: SimplicialComplex) -> dict:
    """The vertex antipode v -> -v of a cross-polytope sphere."""
    return {v: -v for v in sphere.vertices}


def grid_window(k: int, halfwidth: int) -> SimplicialComplex:
    """Staircase (Kuhn) triangulation of [-halfwidth, halfwidth]^k.

    Vertices are integer tuples carrying themselves as exact coordinates.
    """
    if k not in (2, 3):
        raise ValueError("k must be 2 or 3")
    if halfwidth < 1:
        raise ValueError("halfwidth must be >= 1")
    h = halfwidth
    rng = range(-h, h + 1)
    tops = []
    unit = [tuple(1 if j == i else 0 for j in range(k)) for i in range(k)]
    for corner in product(range(-h, h), repeat=k):
        for perm in permutations(range(k)):
            cell = [corner]
            cur = corner
            for step in perm:
                cur = tuple(a + b for a, b in zip(cur, unit[step]))
                cell.append(cur)
            tops.append(tuple(cell))
    coords = {
        v: tuple(Fraction(x) for x in v) for v in product(rng, repeat=k)
    }
    return SimplicialComplex.from_simplices(tops, coords=coords)


def staircase_torus(n: int = 3) -> SimplicialComplex:
    """Product triangulation of two n-cycles (a torus; 9 vertices for n=3)."""
    a = cycle_complex(n)
    b = cycle_complex(n)
    return product_triangulation(a, b)


def csaszar_torus() -> SimplicialComplex:
    """The 7-vertex torus (embeds in R^3); 1-skeleton is K7."""
    tris = [
        (0, 1, 3), (0, 3, 2), (0, 2, 6), (0, 6, 4), (0, 4, 5), (0, 5, 1),
        (1, 2, 4), (1, 4, 3), (1, 5, 6), (1, 6, 2),
        (2, 3, 5), (2, 5, 4),
        (3, 4, 6), (3, 6, 5),
    ]
    return SimplicialComplex.from_simplices(tris)


def tree_complex(depth: int = 2, branching: int = 2) -> SimplicialComplex:
    """A rooted tree as a 1-complex."""
    edges = []
    frontier = [(0,)]
    counter = 0
    nodes = {(0,): 0}
    for _ in range(depth):
        nxt = []
        for node in frontier:
            for b in range(branching):
                child = node + (b,)
                counter += 1
                nodes[child] = counter
                edges.append((nodes[node], nodes[child]))
                nxt.append(child)
        frontier = nxt
    return SimplicialComplex.from_simplices(edges)
