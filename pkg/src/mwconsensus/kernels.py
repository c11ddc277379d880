"""Backend selection for the bipartition scan.

The compiled extension is used when it imports; setting the environment
variable ``MWCONSENSUS_PURE=1`` forces the numpy fallback.
"""
import os

import numpy as np

from . import _partition_fallback

_compiled = None
if os.environ.get("MWCONSENSUS_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _partition_kernel as _compiled
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "numpy"

BACKENDS = {"numpy": _partition_fallback.candidate_partitions}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled.candidate_partitions


def candidate_partitions(n, eu, ev, eneg, edef, conflicts, backend=None):
    fn = BACKENDS[backend or BACKEND]
    return fn(int(n),
              np.ascontiguousarray(eu, dtype=np.intc),
              np.ascontiguousarray(ev, dtype=np.intc),
              np.ascontiguousarray(eneg, dtype=np.uint8),
              np.ascontiguousarray(edef, dtype=np.uint8),
              np.ascontiguousarray(np.asarray(conflicts).reshape(-1, 2), dtype=np.intc))
