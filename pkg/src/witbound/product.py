from __future__ import annotations

from functools import reduce

import numpy as np
from scipy.optimize import minimize

from .operators import as_operator


def _product_vector(z: np.ndarray, dims) -> np.ndarray:
    vecs = []
    k = 0
    for d in dims:
        v = z[k:k + d] + 1j * z[k + d:k + 2 * d]
        vecs.append(v / np.linalg.norm(v))
        k += 2 * d
    return reduce(np.kron, vecs)


def product_value_range(W, starts: int = 8, seed: int = 0):
    """Seeded estimate of ``[min, max]`` of ``<W>`` over pure product states.

    Returns ``(lo, hi, psi_lo, psi_hi)``. Both ends are attained by the
    returned product vectors, so any ``c`` in ``[lo, hi]`` is matched by a
    mixture of two product states.
    """
    op = as_operator(W)
    w = np.asarray(op.matrix)
    dims = op.dims
    if len(dims) < 2:
        raise ValueError("product states need at least two tensor factors")
    n = 2 * sum(dims)
    rng = np.random.default_rng(seed)
    out = []
    for sign in (1.0, -1.0):
        best, arg = np.inf, None
        for _ in range(starts):
            def f(z):
                psi = _product_vector(z, dims)
                return sign * float(np.vdot(psi, w @ psi).real)
            res = minimize(f, rng.normal(size=n), method="L-BFGS-B")
            if res.fun < best:
                best, arg = res.fun, _product_vector(res.x, dims)
        out.append((sign * best, arg))
    (lo, psi_lo), (hi, psi_hi) = out
    return lo, hi, psi_lo, psi_hi


def separable_match(W, c: float, starts: int = 8, seed: int = 0):
    """A separable decomposition reproducing ``tr[W rho] = c``, if one is found.

    Returns ``(p, psi_a, psi_b)`` with ``p <psi_a|W|psi_a> + (1-p) <psi_b|W|psi_b> = c``
    or None.
    """
    lo, hi, a, b = product_value_range(W, starts, seed)
    if not lo <= c <= hi:
        return None
    p = 1.0 if hi == lo else (hi - c) / (hi - lo)
    return p, a, b
