"""Exact rational predicates for Gauss-map degree counting.

Degree parities are decided by counting simplices whose difference-vector
cone contains a chosen direction; everything runs on Fractions so parity is
bit-exact.  Non-generic directions raise and callers retry along the fixed
perturbation sequence.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

__all__ = [
    "NonGenericDirection",
    "solve_square",
    "cone_contains",
    "simplex_cone_parity",
    "direction_candidates",
]


class NonGenericDirection(ValueError):
    """The test direction meets the boundary of some image cone."""


def solve_square(A: List[List[Fraction]], b: List[Fraction]) -> Optional[List[Fraction]]:
    """Solve a square rational system; None when singular."""
    n = len(A)
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    for c in range(n):
        piv = None
        for r in range(c, n):
            if M[r][c] != 0:
                piv = r
                break
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        inv = Fraction(1, 1) / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[i][n] for i in range(n)]


def _in_span_nonneg(vectors: Sequence[Sequence[Fraction]], u: Sequence[Fraction]) -> bool:
    """u lies in the nonnegative span of an independent set (exact)."""
    k = len(u)
    m = len(vectors)
    # solve the overdetermined system via a maximal invertible row subset
    for rows in combinations(range(k), m):
        A = [[vectors[j][r] for j in range(m)] for r in rows]
        b = [u[r] for r in rows]
        sol = solve_square(A, b)
        if sol is None:
            continue
        # verify on all coordinates
        for r in range(k):
            s = sum(vectors[j][r] * sol[j] for j in range(m))
            if s != u[r]:
                return False
        return all(x >= 0 for x in sol)
    return False


def cone_contains(vectors: Sequence[Sequence[Fraction]], u: Sequence[Fraction]):
    """Classify u against the positive span of k vectors in R^k.

    Returns True (interior), False (outside), or raises NonGenericDirection
    when u meets the cone boundary or a degenerate cone.
    """
    k = len(u)
    if len(vectors) != k:
        raise ValueError("expected k vectors in R^k")
    A = [[vectors[j][i] for j in range(k)] for i in range(k)]
    sol = solve_square(A, list(u))
    if sol is None:
        # degenerate cone: u inside the lower-dimensional cone is non-generic
        for r in range(1, k):
            for sub in combinations(range(k), r):
                subv = [vectors[j] for j in sub]
                if _independent(subv) and _in_span_nonneg(subv, u):
                    raise NonGenericDirection("direction meets a degenerate cone")
        return False
    if any(x == 0 for x in sol):
        raise NonGenericDirection("direction on a cone boundary")
    return all(x > 0 for x in sol)


def _independent(vectors: Sequence[Sequence[Fraction]]) -> bool:
    m = len(vectors)
    k = len(vectors[0])
    rows = [list(v) for v in vectors]
    rank = 0
    for c in range(k):
        piv = None
        for r in range(rank, m):
            if rows[r][c] != 0:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(m):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank == m


def simplex_cone_parity(
    simplex_vectors: Sequence[Sequence[Sequence[Fraction]]],
    u: Sequence[Fraction],
) -> int:
    """Parity of simplices whose difference-vector cone contains u."""
    count = 0
    for vecs in simplex_vectors:
        if any(all(x == 0 for x in v) for v in vecs):
            raise NonGenericDirection("zero difference vector (image meets diagonal)")
        if cone_contains(vecs, u):
            count ^= 1
    return count


def direction_candidates(k: int, attempts: int = 12):
    """Deterministic generic-direction sequence: u0 then perturbations."""
    base = [Fraction(1)] + [Fraction(0)] * (k - 1)
    yield list(base)
    for t in range(1, attempts + 1):
        eps = Fraction(1, 2**t + 3**t)
        u = [Fraction(1)]
        for i in range(1, k):
            u.append(eps ** i)
        yield u
    raise NonGenericDirection("perturbation sequence exhausted")
