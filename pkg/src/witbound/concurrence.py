"""Two-qubit concurrence: exact oracle, witness bounds and conjugate function.

Certified bounds in this module rest on one inequality: for every
two-qubit state and every 2x2 matrix ``B`` with ``|det B| <= 1``,

    C(rho) >= -tr[ |B><B|^Gamma rho ],     |B> = (B x I)(|00> + |11>).

A choice of ``B`` (plus a coefficient on the witness) therefore certifies a
lower bound that anyone can recheck with a single eigenvalue computation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ._optimize import nelder_mead_multistart, sphere_multistart
from .catalog import verstraete_vector
from .operators import (
    DimensionError,
    HermitianOperator,
    as_operator,
    normalize,
    partial_transpose_matrix,
)
from .product import separable_match
from .results import BoundResult

_S = 1 / np.sqrt(2.0)
# columns are |Psi_0>, ..., |Psi_3>, phases as in the magic basis definition
MAGIC = np.array([
    [_S, 1j * _S, 0, 0],
    [0, 0, 1j * _S, _S],
    [0, 0, 1j * _S, -_S],
    [_S, -1j * _S, 0, 0],
], dtype=complex)

SIGMA_YY = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex)


def magic_basis() -> list[np.ndarray]:
    return [MAGIC[:, i].copy() for i in range(4)]


@dataclass(frozen=True)
class MagicCoefficients:
    c: np.ndarray

    @classmethod
    def of(cls, psi) -> "MagicCoefficients":
        psi = np.asarray(psi, dtype=complex).ravel()
        if psi.size != 4:
            raise DimensionError("magic-basis expansion needs a two-qubit vector")
        return cls(MAGIC.conj().T @ psi)

    def vector(self) -> np.ndarray:
        return MAGIC @ self.c


def pure_concurrence(psi) -> float:
    """``|sum_i c_i^2|`` with ``c`` the magic-basis coefficients."""
    c = MagicCoefficients.of(normalize(psi)).c
    return float(abs(np.sum(c * c)))


def _check_two_qubit(op):
    op = as_operator(op)
    if op.dim != 4:
        raise DimensionError("two-qubit operator expected")
    return op


def wootters_concurrence(rho) -> float:
    """Mixed-state concurrence ``max(0, l1 - l2 - l3 - l4)``.

    ``l_i`` are the decreasing square roots of the eigenvalues of
    ``rho (Y x Y) rho^* (Y x Y)``, with ``rho^*`` the entrywise conjugate.
    """
    r = np.asarray(_check_two_qubit(rho).matrix)
    rt = SIGMA_YY @ r.conj() @ SIGMA_YY
    ev = np.linalg.eigvals(r @ rt)
    lam = np.sort(np.sqrt(np.clip(ev.real, 0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def _h(x):
    x = np.clip(x, 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(x > 0, -x * np.log2(np.where(x > 0, x, 1)), 0.0)
        u = np.where(x < 1, -(1 - x) * np.log2(np.where(x < 1, 1 - x, 1)), 0.0)
    return t + u


def ef_from_concurrence(C) -> float:
    """Two-qubit entanglement of formation as a function of concurrence."""
    C = float(np.clip(C, 0.0, 1.0))
    return float(_h(0.5 * (1 + np.sqrt(1 - C * C))))


def wootters_ef(rho) -> float:
    return ef_from_concurrence(wootters_concurrence(rho))


# -- certificates -----------------------------------------------------------

def _pt(a):
    return partial_transpose_matrix(a, (2, 2), (0,))


def _lmax_upper(m: np.ndarray) -> float:
    # largest eigenvalue plus a floating-point rounding allowance
    return float(np.linalg.eigvalsh(m)[-1]) + 1e-13 * (1.0 + float(np.linalg.norm(m)))


def b_operator(B) -> np.ndarray:
    """``|B><B|^Gamma`` without any determinant normalisation."""
    v = verstraete_vector(B)
    return _pt(np.outer(v, v.conj()))


def _b_from_params(p: np.ndarray) -> np.ndarray:
    B = (p[:4] + 1j * p[4:8]).reshape(2, 2)
    d = abs(np.linalg.det(B))
    if d > 1:
        B = B / np.sqrt(d)
    return B


def _check_b(B) -> np.ndarray:
    B = np.asarray(B, dtype=complex).reshape(2, 2)
    if abs(np.linalg.det(B)) > 1 + 1e-12:
        raise ValueError("certificate matrix has |det B| > 1")
    return B


def concurrence_dual_value(W, c: float, alpha: float, Bs, weights=None) -> float:
    """Recompute ``alpha*c - lambda_max(alpha*W + sum_k t_k |B_k><B_k|^Gamma)``.

    Weights must be nonnegative and sum to at most one.
    """
    w = np.asarray(_check_two_qubit(W).matrix)
    Bs = [_check_b(B) for B in Bs]
    t = np.ones(len(Bs)) if weights is None else np.asarray(weights, dtype=float)
    if np.any(t < 0) or t.sum() > 1 + 1e-12:
        raise ValueError("weights must be a sub-probability vector")
    m = alpha * w + sum((tk * b_operator(B) for tk, B in zip(t, Bs)), np.zeros((4, 4)))
    return float(alpha * c - _lmax_upper(m))


def _witness_b_starts(w: np.ndarray) -> list[tuple[float, np.ndarray]]:
    """Guesses ``(alpha, B)`` from the extreme eigenvectors of ``W^Gamma``.

    If ``W = kappa |A><A|^Gamma`` exactly, one of these is optimal.
    """
    vals, vecs = np.linalg.eigh(_pt(w))
    out = []
    for k in (0, 3):
        B = vecs[:, k].reshape(2, 2)
        d = abs(np.linalg.det(B))
        if d > 1e-9:
            B = B / np.sqrt(d)
        norm2 = float(np.vdot(B, B).real)
        alpha = -norm2 / vals[k] if abs(vals[k]) > 1e-12 else 0.0
        out.append((alpha, np.concatenate([B.real.ravel(), B.imag.ravel()])))
    return out


def _alpha_scale(w: np.ndarray) -> float:
    return 1.0 / max(1e-12, float(np.max(np.abs(np.linalg.eigvalsh(w)))))


@dataclass(frozen=True)
class ConjugateBracket:
    lower: float
    upper: float
    argmax: np.ndarray | None = None
    certificate: dict | None = None


def concurrence_conjugate(X, starts: int = 128, seed: int = 0,
                          dual_starts: int = 16) -> ConjugateBracket:
    """Bracket ``sup_psi <psi|X|psi> - C(psi)`` over two-qubit pure states.

    ``lower`` comes from seeded multistart ascent over the magic-basis
    coefficients. ``upper`` is ``min_B lambda_max(X + |B><B|^Gamma)`` over
    ``|det B| <= 1`` (``B = 0`` included), which is a valid upper bound for
    every ``B`` tried.
    """
    x = np.asarray(_check_two_qubit(X).matrix)
    m = MAGIC.conj().T @ x @ MAGIC

    def obj(c):
        return float(np.vdot(c, m @ c).real - abs(np.sum(c * c)))

    lower, c_best = sphere_multistart(obj, 4, starts=starts, seed=seed)

    rng = np.random.default_rng(seed + 1)
    x0s = [np.zeros(8)] + [b for _, b in _witness_b_starts(x)]
    x0s += [rng.normal(size=8) for _ in range(dual_starts)]
    _, p = nelder_mead_multistart(
        lambda q: -float(np.linalg.eigvalsh(x + b_operator(_b_from_params(q)))[-1]), x0s)
    B = _b_from_params(p)
    upper = _lmax_upper(x + b_operator(B))
    if _lmax_upper(x) <= upper:
        B = np.zeros((2, 2), dtype=complex)
        upper = _lmax_upper(x)
    return ConjugateBracket(lower, upper, MAGIC @ c_best, {"B": B})


def concurrence_bound_verstraete(A, c: float, sigma: float = 0.0) -> BoundResult:
    """``max(0, -c)`` for ``c`` measured on ``|A><A|^Gamma`` with ``|det A| = 1``."""
    A = np.asarray(A, dtype=complex).reshape(2, 2)
    if abs(abs(np.linalg.det(A)) - 1) > 1e-9:
        raise ValueError("A must have |det A| = 1; normalise via verstraete_witness")
    val = max(0.0, -float(c))
    return BoundResult("concurrence", val, float(sigma) if val > 0 else 0.0,
                       {"method": "verstraete", "A": A, "c": float(c)})


def _joint_starts(w, c, rng, starts):
    a0 = _alpha_scale(w)
    signs = [-1.0, 1.0] if c >= 0 else [-1.0]
    x0s = []
    for alpha, b in _witness_b_starts(w):
        if alpha:
            x0s.append(np.concatenate([[alpha], b]))
    for sgn in signs:
        for b in [np.zeros(8)] + [b for _, b in _witness_b_starts(w)]:
            x0s.append(np.concatenate([[sgn * a0], b]))
    x0s += [np.concatenate([[rng.choice(signs) * a0 * rng.uniform(0.2, 5)], rng.normal(size=8)])
            for _ in range(starts)]
    return x0s


def _polish_alpha(w, c, alpha, B):
    """Re-optimise ``alpha`` for fixed ``B`` (a concave 1-D problem)."""
    wb = b_operator(B)
    width = 2 * abs(alpha) + 1.0
    res = minimize_scalar(lambda a: -(a * c - np.linalg.eigvalsh(a * w + wb)[-1]),
                          bounds=(alpha - width, alpha + width), method="bounded",
                          options={"xatol": 1e-12})
    return float(res.x) if -res.fun > alpha * c - np.linalg.eigvalsh(alpha * w + wb)[-1] else alpha


def concurrence_bound_conjugate(W, c: float, sigma: float = 0.0, starts: int = 4,
                                seed: int = 0, maxfev: int = 4000) -> BoundResult:
    """Best certified bound ``alpha*c - lambda_max(alpha*W + |B><B|^Gamma)``.

    This is ``sup_alpha alpha*c - f*(alpha*W)`` with the conjugate replaced
    by its dual upper bound. Every ``(alpha, B)`` gives a valid bound; the
    search only decides how good it is. If a mixture of product states
    reproduces ``c`` the best possible bound is 0 and no search is run.
    """
    op = _check_two_qubit(W)
    w = np.asarray(op.matrix)
    match = separable_match(HermitianOperator(w, (2, 2)), c, seed=seed)
    if match is not None:
        p, a, b = match
        return BoundResult("concurrence", 0.0, 0.0,
                           {"method": "separable-match", "c": float(c), "p": p,
                            "product_a": a, "product_b": b})
    rng = np.random.default_rng(seed)

    def f(q):
        return float(q[0] * c - np.linalg.eigvalsh(q[0] * w + b_operator(_b_from_params(q[1:])))[-1])

    val, q = nelder_mead_multistart(f, _joint_starts(w, c, rng, starts), maxfev=maxfev)
    alpha, B = float(q[0]), _b_from_params(q[1:])
    alpha = _polish_alpha(w, c, alpha, B)
    val = concurrence_dual_value(w, c, alpha, [B])
    cert = {"method": "two-qubit-dual", "alpha": alpha, "B": [B], "weights": [1.0],
            "c": float(c)}
    if val <= 0:
        return BoundResult("concurrence", 0.0, 0.0, cert)
    return BoundResult("concurrence", min(1.0, val), abs(alpha) * float(sigma), cert)


def ef_bound_two_qubit(W, c: float, sigma: float = 0.0, **kw) -> BoundResult:
    """Certified E_F bound for an arbitrary two-qubit witness.

    For two qubits ``E_F = E(C)`` with ``E`` increasing, so the smallest
    E_F compatible with the data is ``E`` of the smallest compatible
    concurrence; the concurrence certificate carries over unchanged.
    """
    cb = concurrence_bound_conjugate(W, c, sigma, **kw)
    val = ef_from_concurrence(cb.value)
    cert = dict(cb.certificate)
    cert["via"] = "concurrence"
    cert["concurrence_bound"] = cb.value
    return BoundResult("ef", val, propagate_ef_sigma(cb.value, cb.sigma), cert)


def propagate_ef_sigma(C: float, sigma: float) -> float:
    """Uncertainty of ``E(C)`` from that of ``C`` (larger one-sided difference).

    A finite difference is used instead of the derivative because ``E'``
    diverges at ``C = 1``.
    """
    if sigma <= 0:
        return 0.0
    e = ef_from_concurrence(C)
    return max(abs(ef_from_concurrence(C + sigma) - e), abs(e - ef_from_concurrence(C - sigma)))
