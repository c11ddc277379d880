"""Numpy implementation of the bipartition scan, used when the extension is absent."""
import numpy as np

_CHUNK = 1 << 15


def candidate_partitions(n, eu, ev, eneg, edef, conflicts):
    """Indices of partitions that violate no definite edge and no conflict pair.

    Same contract as the compiled kernel: node 0 is pinned to side 0 and node
    ``j >= 1`` sits on side ``(k >> (n - 1 - j)) & 1``.
    """
    eu = np.asarray(eu, dtype=np.int64)
    ev = np.asarray(ev, dtype=np.int64)
    eneg = np.asarray(eneg, dtype=bool)
    edef = np.asarray(edef, dtype=bool)
    conflicts = np.asarray(conflicts, dtype=np.int64).reshape(-1, 2)
    shifts = np.array([0] + [n - 1 - j for j in range(1, n)], dtype=np.int64)
    node_mask = np.ones(n, dtype=np.int64)
    node_mask[0] = 0
    total = 1 << (n - 1)
    found = []
    for start in range(0, total, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        sides = ((k[:, None] >> shifts) & node_mask).astype(bool)
        viol = (sides[:, eu] ^ sides[:, ev]) ^ eneg
        ok = ~np.any(viol[:, edef], axis=1)
        if len(conflicts):
            ok &= ~np.any(viol[:, conflicts[:, 0]] & viol[:, conflicts[:, 1]], axis=1)
        found.append(k[ok])
    return np.concatenate(found) if found else np.empty(0, dtype=np.int64)
