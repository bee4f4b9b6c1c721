"""Float screening kernels with a compiled core and a pure-Python fallback.

The compiled extension is used when it imports, unless ``PLFRECHET_PURE`` is
set to a non-empty value other than ``0``. Both back ends return identical
doubles. Nothing computed here is ever reported as a bound; the kernels only
rank candidates during search and provide test oracles.
"""

from __future__ import annotations

import os
from array import array
from typing import Sequence

from .plmap import GridMap, GridSurface
from .scalar import Euclidean, Table

from . import _kernels_py

if os.environ.get("PLFRECHET_PURE", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

COMPILED = _impl is not _kernels_py
BACKEND = "compiled" if COMPILED else "python"


def flatten(values: Sequence[Sequence]) -> array:
    return array("d", [float(c) for v in values for c in v])


class PackedSurface:
    """Float copy of a vector-valued grid surface."""

    def __init__(self, S: GridSurface):
        if isinstance(S.space, Table):
            raise ValueError("float kernels need a vector codomain")
        self.m = S.m
        self.d = S.space.d
        self.euclid = isinstance(S.space, Euclidean)
        self.vals = flatten(S.samples)


def sampled_objective(A: PackedSurface, B: PackedSurface, phi: GridMap, psi: GridMap,
                      n: int, impl=None) -> float:
    """Float max of ``d(A(phi(x)), B(psi(x)))`` over the ``(n+1)^2`` grid points."""
    impl = impl or _impl
    return impl.sampled_objective(A.vals, A.m, B.vals, B.m, A.d, flatten(phi.images), phi.k,
                                  flatten(psi.images), psi.k, n, int(A.euclid))


def discrete_closed_frechet(P, Q, euclid: bool, impl=None) -> float:
    """Discrete Fréchet distance of two closed vertex sequences (free base point)."""
    impl = impl or _impl
    d = len(P[0])
    return impl.discrete_closed_frechet(flatten(P), len(P), flatten(Q), len(Q), d, int(euclid))


def backends():
    """Available implementations keyed by name."""
    out = {"python": _kernels_py}
    if COMPILED:
        out["compiled"] = _impl
    else:
        try:
            from . import _kernels
            out["compiled"] = _kernels
        except ImportError:
            pass
    return out
