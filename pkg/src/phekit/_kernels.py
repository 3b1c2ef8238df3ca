"""Hot loops of group-program evaluation, with numba and numpy variants.

Programs are flattened to two arrays: ``idx[L]`` holds the input index
read by each instruction (-1 for constants) and ``mats[L, 2, 3, 3]`` the
matrix chosen when that input is 0 or 1. Matrices are uint8 over F2.
"""

import numpy as np

from ._accel import NUMBA_ENABLED, njit


def eval_batch_numpy(idx, mats, inputs):
    """Evaluate one program on every row of ``inputs`` (shape ``[B, n]``)."""
    batch = inputs.shape[0]
    acc = np.broadcast_to(np.eye(3, dtype=np.uint8), (batch, 3, 3)).copy()
    rows = np.arange(batch)
    for step in range(idx.shape[0]):
        i = idx[step]
        if i < 0:
            acc = (acc @ mats[step, 0]) & 1
        else:
            chosen = mats[step][inputs[rows, i]]  # [B, 3, 3]
            acc = np.einsum("bij,bjk->bik", acc, chosen) & 1
    return acc.astype(np.uint8)


def _eval_batch_loops(idx, mats, inputs):
    batch = inputs.shape[0]
    out = np.zeros((batch, 3, 3), dtype=np.uint8)
    tmp = np.zeros((3, 3), dtype=np.uint8)
    for b in range(batch):
        acc = np.zeros((3, 3), dtype=np.uint8)
        for d in range(3):
            acc[d, d] = 1
        for step in range(idx.shape[0]):
            i = idx[step]
            sel = 0 if i < 0 else inputs[b, i]
            m = mats[step, sel]
            for r in range(3):
                for c in range(3):
                    v = 0
                    for k in range(3):
                        v ^= acc[r, k] & m[k, c]
                    tmp[r, c] = v
            for r in range(3):
                for c in range(3):
                    acc[r, c] = tmp[r, c]
        out[b] = acc
    return out


eval_batch_numba = njit(_eval_batch_loops)


def perm_product_numpy(perms):
    """Left-to-right product of permutations ``perms[L, 7]`` (0-based images).

    The product ``p * q`` applies ``q`` first: ``(p * q)[i] = p[q[i]]``.
    """
    acc = np.arange(7, dtype=np.uint8)
    for step in range(perms.shape[0]):
        acc = acc[perms[step]]
    return acc


def _perm_product_loops(perms):
    acc = np.arange(7).astype(np.uint8)
    nxt = np.empty(7, dtype=np.uint8)
    for step in range(perms.shape[0]):
        for i in range(7):
            nxt[i] = acc[perms[step, i]]
        for i in range(7):
            acc[i] = nxt[i]
    return acc


perm_product_numba = njit(_perm_product_loops)

if NUMBA_ENABLED:
    eval_batch = eval_batch_numba
    perm_product = perm_product_numba
else:
    eval_batch = eval_batch_numpy
    perm_product = perm_product_numpy
