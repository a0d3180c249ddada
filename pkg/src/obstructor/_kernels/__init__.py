"""Backend selection for the GF(2) elimination kernels.

The hot loops (bit-packed row reduction, sparse column reduction) exist in
two variants: a numba-jitted one and a pure-numpy one.  The numba variant is
used by default; set ``OBSTRUCTOR_NO_NUMBA=1`` to force the numpy path (or
run on a machine without numba).  Both variants implement the identical
algorithm and produce bit-identical results.
"""

import os

_flag = os.environ.get("OBSTRUCTOR_NO_NUMBA", "").strip().lower()
_want_numba = _flag in ("", "0", "false", "no")

if _want_numba:
    try:
        from . import dense_numba as dense
        from . import sparse_numba as sparse

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - exercised only without numba
        from . import dense_numpy as dense
        from . import sparse_numpy as sparse

        BACKEND = "numpy"
else:
    from . import dense_numpy as dense
    from . import sparse_numpy as sparse

    BACKEND = "numpy"


def backend_name() -> str:
    """Name of the kernel backend in use ("numba" or "numpy")."""
    return BACKEND
