"""Kernel selection: the compiled extension when it imports, numpy otherwise.

Set ``PERMREL_PURE=1`` to force the numpy implementations.
"""

from __future__ import annotations

import os

if os.environ.get("PERMREL_PURE", "") not in ("", "0"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        from . import _pykernels as _impl

BACKEND = "compiled" if _impl.__name__.endswith("_ckernels") else "python"

MAX_WORD_DEGREE = _impl.MAX_WORD_DEGREE
mask_images = _impl.mask_images
kset_orbits = _impl.kset_orbits
powerset_orbit_ids = _impl.powerset_orbit_ids
relation_preserved = _impl.relation_preserved
binomial = _impl.binomial

__all__ = [
    "BACKEND",
    "MAX_WORD_DEGREE",
    "binomial",
    "kset_orbits",
    "mask_images",
    "powerset_orbit_ids",
    "relation_preserved",
]
