"""Reference (numpy) versions of the hot loops.

Both functions have the same signatures and results as their compiled
counterparts in ``_ckernels.pyx``; the compiled module is preferred when it
was built.
"""

import numpy as np


def _parity(masks, indices):
    v = np.bitwise_and(masks, indices)
    parity = np.zeros_like(v)
    while np.any(v):
        parity ^= v & 1
        v >>= 1
    return parity


def restricted_traces(bras, kets, x_masks, z_masks):
    """Traces of ``R_l P_k`` restricted to the code space.

    ``bras[l, i]`` is the row vector ``<i_L| R_l``, ``kets[i]`` is ``|i_L>``
    and ``(x_masks[k], z_masks[k])`` is a Pauli string. Returns the ``(L, K)``
    complex array ``sum_i <i_L| R_l P_k |i_L>``.
    """
    bras = np.asarray(bras, dtype=np.complex128)
    kets = np.asarray(kets, dtype=np.complex128)
    n_ops, n_code, dim = bras.shape
    idx = np.arange(dim, dtype=np.int64)
    out = np.zeros((n_ops, len(x_masks)), dtype=np.complex128)
    for k, (x, z) in enumerate(zip(x_masks, z_masks)):
        sign = 1.0 - 2.0 * _parity(np.int64(z), idx)
        moved = np.empty_like(kets)
        # P|b> = (-1)^{z.b} |b ^ x>
        moved[:, idx ^ int(x)] = kets * sign
        out[:, k] = np.einsum("lib,ib->l", bras, moved)
    return out


def poly_eval_grid(coeffs, mu, p):
    """Evaluate ``sum c[i, j] mu^i p^j`` pointwise over paired ``mu``/``p`` arrays."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    mu = np.asarray(mu, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    outer = np.zeros_like(mu)
    for row in coeffs[::-1]:
        inner = np.zeros_like(p)
        for c in row[::-1]:
            inner = inner * p + c
        outer = outer * mu + inner
    return outer
