"""Lower bounds on the negativity from witness expectation values.

Any real coefficients ``alpha`` with ``-I <= X <= I``, where

    X = sum_i alpha_i W_i^Gamma + alpha_{n+1} I,

certify ``E_N >= sum_i alpha_i c_i + alpha_{n+1} - 1`` for every state with
``tr[W_i rho] = c_i``. The optimal coefficients solve a small semidefinite
program, handled here with a cutting-plane LP that uses the eigensolver as
separation oracle.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .operators import DimensionError, HermitianOperator, as_operator, partial_transpose
from .results import BoundResult

log = logging.getLogger(__name__)

FEAS_TOL = 1e-8
GAP_TOL = 1e-6
EIG_ONE_TOL = 1e-6


class InfeasibleCertificate(ValueError):
    """The supplied coefficients violate ``-I <= X <= I``."""


@dataclass(frozen=True)
class NegativityCertificate:
    alphas: tuple[float, ...]
    feasibility_margin: float
    bound: float


def _pt_basis(witnesses) -> tuple[list[np.ndarray], tuple[int, ...]]:
    ops = [as_operator(w) for w in witnesses]
    if not ops:
        raise ValueError("at least one witness is required")
    dims = ops[0].dims
    for o in ops[1:]:
        if o.dims != dims:
            raise DimensionError(f"witness dims differ: {list(dims)} vs {list(o.dims)}")
    mats = [np.asarray(partial_transpose(o).matrix) for o in ops]
    return mats + [np.eye(mats[0].shape[0], dtype=complex)], dims


def build_x(alphas: Sequence[float], witnesses) -> HermitianOperator:
    """``X = sum_i alpha_i W_i^Gamma + alpha_{n+1} I``."""
    basis, dims = _pt_basis(witnesses)
    if len(alphas) != len(basis):
        raise ValueError(f"expected {len(basis)} coefficients, got {len(alphas)}")
    return HermitianOperator(sum(a * b for a, b in zip(alphas, basis)), dims)


def _x_norm(alphas, basis) -> tuple[float, np.ndarray, np.ndarray]:
    x = sum(a * b for a, b in zip(alphas, basis))
    vals, vecs = np.linalg.eigh(x)
    return float(max(abs(vals[0]), abs(vals[-1]))), vals, vecs


def _sigma(alphas, sigmas) -> float:
    if sigmas is None:
        return 0.0
    return float(np.sqrt(sum((a * s) ** 2 for a, s in zip(alphas, sigmas))))


def _result(alphas, values, sigmas, margin, method, witnesses, extra=None) -> BoundResult:
    raw = float(np.dot(alphas[:-1], values) + alphas[-1] - 1.0)
    cert = {
        "method": method,
        "alphas": [float(a) for a in alphas],
        "values": [float(c) for c in values],
        "feasibility_margin": float(margin),
        "raw_bound": raw,
    }
    if extra:
        cert.update(extra)
    return BoundResult("negativity", max(0.0, raw), _sigma(alphas[:-1], sigmas), cert,
                       notes=consistency_notes(witnesses, values))


def consistency_notes(witnesses, values) -> list[str]:
    """Flag values no state can produce (outside the spectrum of the witness)."""
    notes = []
    for i, (w, c) in enumerate(zip(witnesses, values)):
        ev = np.linalg.eigvalsh(np.asarray(as_operator(w).matrix))
        if not ev[0] - 1e-12 <= c <= ev[-1] + 1e-12:
            notes.append(f"value {c:.6g} of witness {i + 1} lies outside its spectrum "
                         f"[{ev[0]:.6g}, {ev[-1]:.6g}]: no state is consistent with it; "
                         "the bound is the dual value only")
    return notes


def negativity_bound_fixed(alphas: Sequence[float], witnesses, values: Sequence[float],
                           sigmas: Sequence[float] | None = None,
                           feas_tol: float = FEAS_TOL) -> BoundResult:
    basis, _ = _pt_basis(witnesses)
    alphas = [float(a) for a in alphas]
    if len(alphas) != len(basis) or len(values) != len(basis) - 1:
        raise ValueError("need n witnesses, n values and n+1 coefficients")
    norm, _, _ = _x_norm(alphas, basis)
    if norm > 1 + feas_tol:
        raise InfeasibleCertificate(f"||X||_inf = {norm:.6g} exceeds 1")
    return _result(alphas, values, sigmas, 1.0 - norm, "fixed", witnesses)


def certificate_of(result: BoundResult) -> NegativityCertificate:
    c = result.certificate
    return NegativityCertificate(tuple(c["alphas"]), c["feasibility_margin"], c["raw_bound"])


def _alpha_box(basis) -> float:
    # ||X||_F <= sqrt(D) on the feasible set, so ||alpha||_2 <= sqrt(D)/s_min(G)
    g = np.array([b.ravel() for b in basis]).T
    g = np.concatenate([g.real, g.imag])
    s = np.linalg.svd(g, compute_uv=False)
    if s[-1] < 1e-9 * s[0]:
        raise ValueError("witness partial transposes are linearly dependent "
                         "together with the identity; drop redundant witnesses")
    return float(np.sqrt(basis[0].shape[0]) / s[-1]) * 1.01


def negativity_bound_optimal(witnesses, values: Sequence[float],
                             sigmas: Sequence[float] | None = None, *,
                             gap_tol: float = GAP_TOL, max_iter: int = 2000,
                             cut_tol: float = 1e-12) -> BoundResult:
    """Best bound over all feasible coefficient vectors.

    Every iterate is rescaled to ``alpha / max(1, ||X(alpha)||)`` before it
    is scored, so the returned coefficients are feasible no matter where
    the loop stops. The LP value is an upper bound on the optimum; the
    difference is reported as ``gap`` in the certificate.
    """
    basis, dims = _pt_basis(witnesses)
    values = np.asarray(values, dtype=float)
    if values.size != len(basis) - 1:
        raise ValueError(f"expected {len(basis) - 1} values, got {values.size}")
    m = len(basis)
    obj = np.append(values, 1.0)
    box = _alpha_box(basis)

    best_alpha = np.zeros(m)
    best_alpha[-1] = 1.0
    best = 0.0
    cuts: list[np.ndarray] = []
    upper = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        res = linprog(-obj, A_ub=np.array(cuts) if cuts else None,
                      b_ub=np.ones(len(cuts)) if cuts else None,
                      bounds=[(-box, box)] * m, method="highs")
        if res.status != 0:
            raise RuntimeError(f"LP failed: {res.message}")
        alpha = res.x
        upper = float(obj @ alpha - 1.0)
        norm, vals, vecs = _x_norm(alpha, basis)
        scaled = alpha / max(1.0, norm)
        val = float(obj @ scaled - 1.0)
        if val > best:
            best, best_alpha = val, scaled
        if upper - best <= gap_tol:
            break
        added = 0
        for lam, v in zip(vals, vecs.T):
            if abs(lam) > 1 + cut_tol:
                row = np.array([np.vdot(v, b @ v).real for b in basis])
                cuts.append(row if lam > 0 else -row)
                added += 1
        if not added:
            break
    norm, _, _ = _x_norm(best_alpha, basis)
    if norm > 1:
        best_alpha = best_alpha / norm
        norm = 1.0
    log.debug("negativity cutting plane: %d iterations, gap %.2e", it, upper - best)
    return _result(best_alpha, values, sigmas, 1.0 - norm, "cutting-plane", witnesses,
                   {"gap": max(0.0, upper - float(obj @ best_alpha - 1.0)),
                    "iterations": it})


@dataclass(frozen=True)
class TightnessReport:
    s_plus: int
    s_minus: int
    verdict: str


def tightness_report(X, tol: float = EIG_ONE_TOL) -> TightnessReport:
    """Count the +1 / -1 eigenvalues of a certificate operator.

    Advisory only: the bound is tight if some state has at most ``s_plus``
    positive and at most ``s_minus`` negative partial-transpose eigenvalues
    with ``X`` aligned to its sign pattern, which is not checked here.
    """
    vals = np.linalg.eigvalsh(np.asarray(as_operator(X).matrix))
    sp = int(np.sum(np.abs(vals - 1) <= tol))
    sn = int(np.sum(np.abs(vals + 1) <= tol))
    verdict = (f"X has {sp} eigenvalues at +1 and {sn} at -1; the bound is attained "
               f"by any state whose partial transpose has at most {sp} positive and "
               f"{sn} negative eigenvalues on the matching eigenspaces")
    return TightnessReport(sp, sn, verdict)
