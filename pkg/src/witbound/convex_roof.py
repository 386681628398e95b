"""Conjugate-function bounds on convex-roof measures (entanglement of formation).

For a convex-roof measure ``E`` built from a pure-state function ``f`` and a
single witness value ``c = tr[W rho]``,

    E(rho) >= alpha*c - f*(alpha*W)   for every real alpha,

where ``f*(X) = sup_psi <psi|X|psi> - f(psi)``. The bound is only sound if
the conjugate is not under-estimated, so every certified path below uses
either a closed form, an exact reduction, or an upper bound on ``f*``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from ._optimize import golden_section_max, sphere_multistart
from .catalog import schmidt_decompose
from .concurrence import (
    ef_bound_two_qubit,
    pure_concurrence,
    wootters_concurrence,
    wootters_ef,
)
from .operators import (
    DensityMatrix,
    DimensionError,
    HilbertShape,
    as_operator,
    normalize,
    partial_trace_vector,
    partial_transpose_matrix,
)
from .results import BoundResult

log = logging.getLogger(__name__)

LN2 = np.log(2.0)
B_CONCAVE = 2.0 / LN2  # 2.88539...
# absorbs the golden-section shortfall when a maximum feeds an upper bound
SUP_SLACK = 1e-12


def binary_entropy(p) -> float:
    p = float(np.clip(p, 0.0, 1.0))
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def _entropy(probs) -> float:
    probs = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    probs = probs[probs > 1e-300]
    return float(-np.sum(probs * np.log2(probs)))


def _bipartition(dims, split):
    shape = HilbertShape(tuple(dims))
    return shape, shape.resolve_split(split)


def reduced_entropy(psi, dims=(2, 2), split=(0,)) -> float:
    """Von Neumann entropy (bits) of the reduced state on subsystem 1."""
    _, s = _bipartition(dims, split)
    rho1 = partial_trace_vector(normalize(psi), dims, s)
    return _entropy(np.linalg.eigvalsh(rho1))


def renyi_entropy(psi, q: float, dims=(2, 2), split=(0,)) -> float:
    _, s = _bipartition(dims, split)
    lam = np.clip(np.linalg.eigvalsh(partial_trace_vector(normalize(psi), dims, s)), 0, None)
    if q == 1:
        return _entropy(lam)
    return float(np.log2(np.sum(lam ** q)) / (1 - q))


# -- pure-state conjugates ------------------------------------------------------

FUNCTIONALS = ("entropy", "renyi", "concurrence")


@dataclass(frozen=True)
class PureStateObjective:
    X: object
    functional: str = "entropy"
    split: tuple[int, ...] | None = None
    q: float = 2.0

    def __post_init__(self):
        if self.functional not in FUNCTIONALS:
            raise ValueError(f"unknown functional {self.functional!r}")
        op = as_operator(self.X)
        s = op.shape.resolve_split(self.split)
        object.__setattr__(self, "split", s)
        if self.functional == "concurrence" and op.dims != (2, 2):
            raise DimensionError("the concurrence functional needs a 2x2 operator")

    def f(self, psi) -> float:
        dims = as_operator(self.X).dims
        if self.functional == "entropy":
            return reduced_entropy(psi, dims, self.split)
        if self.functional == "renyi":
            return renyi_entropy(psi, self.q, dims, self.split)
        return pure_concurrence(psi)

    def value(self, psi) -> float:
        x = np.asarray(as_operator(self.X).matrix)
        return float(np.vdot(psi, x @ psi).real) - self.f(psi)


@dataclass(frozen=True)
class ConjugateEstimate:
    """Best value found by local search. It is a lower bracket on the
    conjugate, never an upper one, so it must not be subtracted in a bound."""

    value: float
    argmax: np.ndarray
    is_lower_bracket: bool = True


def conjugate_pure(obj: PureStateObjective, starts: int = 64, seed: int = 0,
                   init=()) -> ConjugateEstimate:
    op = as_operator(obj.X)
    x = np.asarray(op.matrix)
    vals, vecs = np.linalg.eigh(x)
    # eigenvectors and a product basis vector are cheap, often optimal starts
    seeds = [vecs[:, -1], vecs[:, 0], np.eye(op.dim)[0]] + list(init)
    val, psi = sphere_multistart(obj.value, op.dim, starts=starts, seed=seed, init=seeds)
    return ConjugateEstimate(val, psi)


def renyi2_conjugate_upper(X, dims=None, split=None, starts: int = 64,
                           seed: int = 0) -> float:
    """``sup_psi <psi|X|psi> - S_2(tr_2 psi)``.

    ``S_2 <= S`` makes this an upper bound on the entropy conjugate, provided
    the supremum itself is found; the search is multistart local ascent.
    """
    op = as_operator(X, dims)
    obj = PureStateObjective(op, "renyi", split, 2.0)
    return conjugate_pure(obj, starts, seed).value


def entropy_dual_conjugate(X, dims=None, split=None, starts: int = 8,
                           seed: int = 0) -> float:
    """Lower bound on the entropy conjugate via its dual form.

    For every Hermitian ``Y`` on subsystem 1,
    ``f*(X) >= lambda_max(X - Y x I) - log2 tr[2^(-Y)]``. The bound is
    maximised over ``Y`` starting from ``Y = -log2 rho_1`` of good pure
    states, which is where the two sides meet.
    """
    op = as_operator(X, dims)
    x = np.asarray(op.matrix)
    shape = op.shape
    s = shape.resolve_split(split)
    d1, d2 = shape.bipartite_dims(s)
    rest = [k for k in range(shape.n_factors) if k not in s]
    # operator on the (subsystem 1, subsystem 2) ordering
    perm = list(s) + rest
    t = x.reshape(shape.local_dims * 2)
    n = shape.n_factors
    xr = t.transpose(perm + [n + k for k in perm]).reshape(shape.dim, shape.dim)
    eye2 = np.eye(d2)
    iu = np.triu_indices(d1, 1)

    def build(p):
        y = np.diag(p[:d1]).astype(complex)
        k = d1
        m = len(iu[0])
        y[iu] = p[k:k + m] + 1j * p[k + m:k + 2 * m]
        return y + np.triu(y, 1).conj().T

    def value(p):
        y = build(p)
        ev = np.linalg.eigvalsh(y)
        g = -np.log2(np.sum(np.exp2(-ev)))
        return float(np.linalg.eigvalsh(xr - np.kron(y, eye2))[-1] + g)

    def params(y):
        return np.concatenate([np.diag(y).real, y[iu].real, y[iu].imag])

    pure = conjugate_pure(PureStateObjective(op, "entropy", s), starts=max(8, starts), seed=seed)
    x0s = []
    for psi in [pure.argmax, np.linalg.eigh(x)[1][:, -1]]:
        r1 = partial_trace_vector(psi, shape.local_dims, s)
        lam, u = np.linalg.eigh(r1)
        y = u @ np.diag(-np.log2(np.clip(lam, 1e-12, None))) @ u.conj().T
        x0s.append(params(y))
    rng = np.random.default_rng(seed)
    x0s += [rng.normal(size=d1 * d1) for _ in range(starts)]
    best = -np.inf
    for x0 in x0s:
        res = minimize(lambda p: -value(p), x0, method="Nelder-Mead",
                       options={"maxfev": 4000, "xatol": 1e-10, "fatol": 1e-13,
                                "adaptive": True})
        best = max(best, value(res.x), value(x0))
    return float(best)


@dataclass(frozen=True)
class ConjugateBracket:
    lower: float
    upper: float
    certified_upper: bool


def entropy_conjugate_bracket(X, dims=None, split=None, starts: int = 32,
                              seed: int = 0) -> ConjugateBracket:
    """Both ends for the entropy conjugate: primal/dual lower, Renyi upper."""
    op = as_operator(X, dims)
    lo_p = conjugate_pure(PureStateObjective(op, "entropy", split), starts, seed).value
    lo_d = entropy_dual_conjugate(op, split=split, seed=seed)
    up = renyi2_conjugate_upper(op, split=split, starts=starts, seed=seed)
    lower = max(lo_p, lo_d)
    return ConjugateBracket(lower, max(up, lower), False)


# -- regime analysis for partially transposed projectors -----------------------

@dataclass(frozen=True)
class RegimeResult:
    b: float
    supremum: float
    regime: str
    p_star: float


def _z(b: float, p: float) -> float:
    return b * np.sqrt(p * (1 - p)) - binary_entropy(p)


def regime_supremum(b: float) -> RegimeResult:
    """``sup_{p in [0,1]} b sqrt(p(1-p)) - h(p)``.

    ``z`` is even about ``p = 1/2``. For ``0 < b < 2/ln 2`` it is concave on
    ``p(1-p) < (b ln2 / 4)^2`` and convex beyond, so the maximum on
    ``[0, 1/2]`` is the concave-part maximum or the value at ``1/2``.
    """
    b = float(b)
    if b <= 0:
        return RegimeResult(b, 0.0, "convex", 0.0)
    if b >= B_CONCAVE:
        return RegimeResult(b, (b - 2) / 2, "concave", 0.5)
    u = (b * LN2 / 4) ** 2
    p_infl = 0.5 * (1 - np.sqrt(max(0.0, 1 - 4 * u)))
    p, zp = golden_section_max(lambda t: _z(b, t), 0.0, p_infl, tol=1e-10)
    best, arg = max((0.0, 0.0), (zp, p), (b / 2 - 1, 0.5))
    return RegimeResult(b, float(best), "transcendental", float(arg))


REGIME_POLY = (0.001876, 0.008239, 0.019733, -0.005649, 0.001430)


def regime_poly_approx(b: float) -> float:
    b = float(b)
    if not -1e-12 <= b <= B_CONCAVE + 1e-9:
        raise ValueError(f"polynomial approximation valid on [0, {B_CONCAVE:.5f}], got {b}")
    return float(sum(k * b ** (i + 1) for i, k in enumerate(REGIME_POLY)))


C0 = regime_supremum(2.0).supremum


def _schmidt_w(phi, dims, split) -> tuple[float, np.ndarray]:
    xi = schmidt_decompose(normalize(phi), dims, split).coefficients
    if xi.size < 2 or xi[1] < 1e-12:
        return 0.0, xi
    return float(xi[0] * xi[1]), xi


def ef_bound_ppt_projector(phi, c: float, sigma: float = 0.0, dims=(2, 2),
                           split=(0,)) -> BoundResult:
    """``|c|/w - c0`` for ``W = |phi><phi|^Gamma`` with ``w = xi_1 xi_2``.

    This is the conjugate bound at ``alpha = -1/w``, where the conjugate
    reduces to ``sup_p 2 sqrt(p(1-p)) - h(p) = c0``.
    """
    w, xi = _schmidt_w(phi, dims, split)
    cert = {"method": "ppt-projector", "w": w, "c0": C0, "c": float(c),
            "schmidt": xi}
    if w == 0:
        return BoundResult("ef", 0.0, 0.0, cert, notes=["phi is a product vector"])
    raw = (-float(c)) / w - C0
    cert["raw_bound"] = raw
    if raw <= 0:
        return BoundResult("ef", 0.0, 0.0, cert)
    return BoundResult("ef", raw, float(sigma) / w, cert)


def _ppt_projector_optimal(kappa: float, w: float, c: float, sigma: float,
                           cert: dict) -> BoundResult:
    """``sup_beta beta*|c'|/w - z*(2 beta)`` for ``W = kappa |phi><phi|^Gamma``.

    ``z*`` is convex in ``b``, so the objective is concave in ``beta``;
    beyond ``b = 2/ln 2`` it is affine with slope ``|c'|/w - 1 <= 0``.
    """
    cp = c / kappa
    cert.update({"method": "ppt-projector-optimal", "kappa": kappa, "w": w, "c": float(c)})
    if cp >= 0 or w == 0:
        cert["beta"] = 0.0
        return BoundResult("ef", 0.0, 0.0, cert)
    if -cp > w * (1 + 1e-9):
        raise ValueError(f"c = {c} is below the witness minimum {-kappa * w}: "
                         "no state is consistent")

    def g(beta):
        return beta * (-cp) / w - regime_supremum(2 * beta).supremum

    beta, _ = golden_section_max(g, 0.0, B_CONCAVE / 2, tol=1e-10)
    val = g(beta) - SUP_SLACK
    cert.update({"beta": beta, "raw_bound": val})
    if val <= 0:
        return BoundResult("ef", 0.0, 0.0, cert)
    return BoundResult("ef", val, beta * sigma / (w * kappa), cert)


# -- witnesses of the form a I - b |phi><phi| ---------------------------------

def _max_schmidt_overlap(s: float, xi: np.ndarray, signed: bool = False,
                         starts: int = 24, seed: int = 0) -> tuple[float, np.ndarray]:
    """``max_mu s (sum xi_i mu_i)^2 - H(mu^2)`` over real unit vectors ``mu``.

    ``signed=False`` keeps ``mu >= 0``. Two coefficients are handled by a
    dense angle grid plus bounded refinement; more by seeded multistart.
    """
    xi = np.asarray(xi, dtype=float)

    def val(mu):
        return s * float(np.dot(xi, mu)) ** 2 - _entropy(mu * mu)

    k = xi.size
    if k == 2:
        hi = 2 * np.pi if signed else np.pi / 2
        grid = np.linspace(0.0, hi, 8001)
        m0, m1 = np.cos(grid), np.sin(grid)
        p0, p1 = m0 * m0, m1 * m1
        with np.errstate(divide="ignore", invalid="ignore"):
            ent = -(np.where(p0 > 0, p0 * np.log2(p0), 0.0) + np.where(p1 > 0, p1 * np.log2(p1), 0.0))
        vals = s * (xi[0] * m0 + xi[1] * m1) ** 2 - ent
        i = int(np.argmax(vals))
        step = grid[1] - grid[0]
        res = minimize_scalar(lambda t: -val(np.array([np.cos(t), np.sin(t)])),
                              bounds=(max(0.0, grid[i] - step), min(hi, grid[i] + step)),
                              method="bounded", options={"xatol": 1e-12})
        t = res.x if -res.fun > vals[i] else grid[i]
        mu = np.array([np.cos(t), np.sin(t)])
        return val(mu), mu
    rng = np.random.default_rng(seed)
    x0s = [xi, np.eye(k)[0], np.eye(k)[-1], np.ones(k) / np.sqrt(k)]
    x0s += [np.abs(rng.normal(size=k)) for _ in range(starts)]
    best, arg = -np.inf, None
    for x0 in x0s:
        def neg(z):
            n = np.linalg.norm(z)
            if n == 0:
                return np.inf
            mu = z / n if signed else np.abs(z) / n
            return -val(mu)
        res = minimize(neg, x0, method="Nelder-Mead",
                       options={"maxfev": 4000, "xatol": 1e-12, "fatol": 1e-14})
        z = res.x / np.linalg.norm(res.x)
        mu = z if signed else np.abs(z)
        if val(mu) > best:
            best, arg = val(mu), mu
    return best, arg


def projector_conjugate(a: float, b: float, xi, alpha: float) -> float:
    """Entropy conjugate of ``alpha (a I - b |phi><phi|)`` with Schmidt data ``xi``.

    With ``s = -alpha b``: if ``s <= 0`` a product state orthogonal to
    ``phi`` attains ``alpha a``; otherwise the overlap is maximised in the
    Schmidt basis of ``phi``, where ``|<phi|psi>| <= sum xi_i mu_i``.
    """
    s = -alpha * b
    if s <= 0:
        return alpha * a
    xi = np.asarray(xi, dtype=float)
    xi = xi[xi > 0]
    if xi.size == 1:
        # phi is a product vector, so is the maximiser
        return alpha * a + s
    return alpha * a + _max_schmidt_overlap(s, xi)[0] + SUP_SLACK


def schmidt_offset(a: float, b: float, xi, alpha: float) -> float:
    """The Schmidt-coefficient maximisation taken literally over signed ``mu``.

    ``alpha a + max_mu [-alpha b (sum xi mu)^2 - H(mu^2)]``. For ``alpha b > 0``
    the true conjugate is ``alpha a`` and this value is smaller, so it is
    reported for reference only and never used in a certified bound.
    """
    xi = np.asarray(xi, dtype=float)
    return alpha * a + _max_schmidt_overlap(-alpha * b, xi, signed=True)[0]


def ef_bound_projector_witness(a: float, b: float, phi, alpha1: float | None, c: float,
                               sigma: float = 0.0, dims=(2, 2), split=(0,)) -> BoundResult:
    """``alpha1 c - f*(alpha1 W)`` for ``W = a I - b |phi><phi|``.

    ``alpha1 = None`` optimises the coefficient (the objective is concave).
    """
    xi = schmidt_decompose(normalize(phi), dims, split).coefficients
    cert = {"method": "projector", "a": float(a), "b": float(b), "schmidt": xi,
            "c": float(c)}
    notes = []

    def g(al):
        return al * c - projector_conjugate(a, b, xi, al)

    if alpha1 is None:
        alpha1 = _best_alpha(g)
    else:
        cert["schmidt_offset"] = schmidt_offset(a, b, xi, alpha1)
        if -alpha1 * b < 0:
            notes.append("alpha1*b > 0: the conjugate is alpha1*a (attained by a product "
                         "state orthogonal to phi); the Schmidt offset is reported only")
    alpha1 = float(alpha1)
    raw = g(alpha1)
    cert.update({"alpha": alpha1, "conjugate": projector_conjugate(a, b, xi, alpha1),
                 "raw_bound": raw})
    if raw <= 0:
        return BoundResult("ef", 0.0, 0.0, cert, notes=notes)
    return BoundResult("ef", raw, abs(alpha1) * float(sigma), cert, notes=notes)


def _best_alpha(g, lo: float = -1e3, hi: float = 1e3) -> float:
    """Maximise a concave ``g`` over ``[lo, hi]`` from a log-spaced scan."""
    mags = np.logspace(-3, 3, 61)
    grid = np.concatenate([-mags[::-1], [0.0], mags])
    grid = grid[(grid >= lo) & (grid <= hi)]
    vals = np.array([g(t) for t in grid])
    i = int(np.argmax(vals))
    a = grid[max(0, i - 1)]
    b = grid[min(grid.size - 1, i + 1)]
    x, fx = golden_section_max(g, a, b, tol=1e-9 * max(1.0, abs(grid[i])))
    return float(x) if fx >= vals[i] else float(grid[i])


# -- dispatch -------------------------------------------------------------------

def _rank_one(m: np.ndarray, tol: float):
    """``(kappa, v)`` if ``m = kappa |v><v|`` with ``kappa > 0``, else None."""
    vals, vecs = np.linalg.eigh(m)
    if vals[-1] > tol and np.all(np.abs(vals[:-1]) <= tol):
        return float(vals[-1]), vecs[:, -1]
    return None


def _projector_form(m: np.ndarray, tol: float):
    """``(a, b, phi)`` if ``m = a I - b |phi><phi|`` (``b`` of either sign)."""
    vals, vecs = np.linalg.eigh(m)
    if np.all(np.abs(vals - vals[-1]) <= tol):
        return float(vals[-1]), 0.0, vecs[:, 0]
    if np.all(np.abs(vals[1:] - vals[-1]) <= tol):
        return float(vals[-1]), float(vals[-1] - vals[0]), vecs[:, 0]
    if np.all(np.abs(vals[:-1] - vals[0]) <= tol):
        return float(vals[0]), float(vals[0] - vals[-1]), vecs[:, -1]
    return None


def ef_bound_general(W, c: float, sigma: float = 0.0, split=None, *,
                     two_qubit_kw: dict | None = None, starts: int = 16,
                     seed: int = 0) -> BoundResult:
    """Best E_F bound ``sup_alpha alpha c - f*(alpha W)`` for one witness value.

    Certified paths: partially transposed rank-one witnesses (regime
    analysis), ``a I - b |phi><phi|`` witnesses (Schmidt reduction), and any
    two-qubit witness (concurrence certificate). Anything else falls back to
    a Renyi-2 relaxation whose supremum is found by local search, and the
    result is marked uncertified.
    """
    op = as_operator(W)
    s = op.shape.resolve_split(split)
    dims = op.dims
    w = np.asarray(op.matrix)
    tol = 1e-9 * max(1.0, float(np.max(np.abs(w))))

    r1 = _rank_one(partial_transpose_matrix(w, dims, s), tol)
    if r1 is not None:
        kappa, phi = r1
        ww, xi = _schmidt_w(phi, dims, s)
        return _ppt_projector_optimal(kappa, ww, float(c), float(sigma),
                                      {"schmidt": xi, "phi": phi, "split": list(s)})

    pf = _projector_form(w, tol)
    if pf is not None:
        a, b, phi = pf
        res = ef_bound_projector_witness(a, b, phi, None, c, sigma, dims, s)
        res.certificate["method"] = "projector-optimal"
        res.certificate["split"] = list(s)
        return res

    if dims == (2, 2):
        return ef_bound_two_qubit(op, c, sigma, **(two_qubit_kw or {}))

    def g_scan(al):
        return al * c - renyi2_conjugate_upper(al * w, dims, s, starts=2, seed=seed)

    mags = np.logspace(-2, 2, 9)
    grid = np.concatenate([-mags[::-1], mags])
    best = grid[int(np.argmax([g_scan(t) for t in grid]))]
    alpha, _ = golden_section_max(g_scan, best / 3, best * 3, tol=1e-3 * abs(best))
    raw = alpha * c - renyi2_conjugate_upper(alpha * w, dims, s, starts=starts, seed=seed)
    cert = {"method": "renyi2-relaxation", "alpha": alpha, "c": float(c), "raw_bound": raw}
    notes = ["conjugate upper bound found by local search; not certified"]
    if raw <= 0:
        return BoundResult("ef", 0.0, 0.0, cert, certified=False, notes=notes)
    return BoundResult("ef", raw, abs(alpha) * sigma, cert, certified=False, notes=notes)


# -- symmetry-reduced bound -----------------------------------------------------

def symmetric_family_state(lam: float) -> DensityMatrix:
    """``lam I/4 + (1 - lam) |psi+><psi+|``, a state for ``lam`` in ``[0, 4/3]``."""
    psi = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)
    m = lam * np.eye(4) / 4 + (1 - lam) * np.outer(psi, psi.conj())
    return DensityMatrix(m, (2, 2), (0,))


@dataclass(frozen=True)
class SymmetricSolution:
    lam: float
    concurrence: float
    ef: float
    notes: list = field(default_factory=list)


def symmetric_ef_bound(a: float, b: float, c: float, sigma: float = 0.0) -> BoundResult:
    """E_F bound for ``W = a I + b |phi-><phi-|^Gamma`` by twirling.

    The twirl leaves ``W`` invariant and does not increase E_F, so the
    minimum is attained on the invariant family, where ``c`` fixes
    ``tr[W rho(lam)] = a + b (3 lam/4 - 1/2)``.
    """
    if b == 0:
        raise ValueError("b = 0: the witness carries no information")
    lam = (4.0 / 3.0) * ((c - a) / b + 0.5)
    if not -1e-12 <= lam <= 4 / 3 + 1e-12:
        raise ValueError(f"c = {c} is not attainable on the symmetric family "
                         f"(lam = {lam:.6g} outside [0, 4/3])")
    lam = float(np.clip(lam, 0.0, 4 / 3))
    rho = symmetric_family_state(lam)
    val = wootters_ef(rho)

    def ef_at(cc):
        ll = float(np.clip((4.0 / 3.0) * ((cc - a) / b + 0.5), 0.0, 4 / 3))
        return wootters_ef(symmetric_family_state(ll))

    sig = 0.0
    if sigma > 0:
        sig = max(abs(ef_at(c + sigma) - val), abs(val - ef_at(c - sigma)))
    cert = {"method": "symmetric", "a": float(a), "b": float(b), "c": float(c),
            "lambda": lam, "concurrence": wootters_concurrence(rho)}
    return BoundResult("ef", val, sig, cert)
