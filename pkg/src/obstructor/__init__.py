"""Combinatorial embedding-obstruction toolkit.

Simplicial and Delta complexes, exact mod-2 chain algebra, Z2-equivariant
machinery (quotients, degree, essential-cycle certificates), simplicial
deleted products with Van Kampen-type obstruction decisions, constructive
cycle pipelines, and finite-depth pro-homology of diagonal filtrations.
"""

__version__ = "0.1.0"

from .gf2 import backend_name

__all__ = ["backend_name", "__version__"]
