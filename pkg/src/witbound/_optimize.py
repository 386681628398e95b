"""Small deterministic optimisation helpers shared by the engines."""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np
from scipy.optimize import minimize

INVPHI = (np.sqrt(5.0) - 1) / 2


def golden_section_max(f: Callable[[float], float], a: float, b: float,
                       tol: float = 1e-10, max_iter: int = 200) -> tuple[float, float]:
    """Maximise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def _unpack(z: np.ndarray) -> np.ndarray:
    n = z.size // 2
    psi = z[:n] + 1j * z[n:]
    return psi / np.linalg.norm(psi)


def sphere_multistart(fun: Callable[[np.ndarray], float], dim: int, starts: int = 64,
                      seed: int = 0, init: Iterable[np.ndarray] = (),
                      maxiter: int = 500) -> tuple[float, np.ndarray]:
    """Maximise ``fun(psi)`` over unit vectors in ``C^dim``.

    Coordinates are the real and imaginary parts; each evaluation projects
    back onto the sphere. Starts are the explicit ``init`` vectors followed
    by seeded Gaussian draws; the reduction is max over starts in order.
    """
    rng = np.random.default_rng(seed)

    def neg(z):
        if not np.any(z):
            return np.inf
        return -fun(_unpack(z))

    x0s = [np.concatenate([np.real(v), np.imag(v)]) for v in init]
    x0s += [rng.normal(size=2 * dim) for _ in range(starts)]
    best_val, best_psi = -np.inf, None
    for x0 in x0s:
        res = minimize(neg, x0, method="L-BFGS-B", options={"maxiter": maxiter})
        z = res.x if np.isfinite(res.fun) else x0
        val = fun(_unpack(z))
        if val > best_val:
            best_val, best_psi = val, _unpack(z)
    return float(best_val), best_psi


def nelder_mead_multistart(fun: Callable[[np.ndarray], float], x0s: Iterable[np.ndarray],
                           maxfev: int = 4000, xatol: float = 1e-10,
                           fatol: float = 1e-13) -> tuple[float, np.ndarray]:
    """Maximise ``fun`` from each start; returns the best ``(value, x)``."""
    best_val, best_x = -np.inf, None
    for x0 in x0s:
        res = minimize(lambda x: -fun(x), np.asarray(x0, dtype=float), method="Nelder-Mead",
                       options={"maxfev": maxfev, "xatol": xatol, "fatol": fatol,
                                "adaptive": True})
        val = fun(res.x)
        if val > best_val:
            best_val, best_x = val, res.x
    return float(best_val), best_x
