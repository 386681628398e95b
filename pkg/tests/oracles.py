"""Independent reference computations used only by the tests.

Nothing here imports the engines; the SDPs go through cvxpy and the
convex roof is searched by brute force over decompositions.
"""

import cvxpy as cp
import numpy as np
from scipy.optimize import minimize


def pt(a):
    """Partial transpose of a 4x4 matrix on the second qubit."""
    return np.asarray(a).reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def cvx_pt(X):
    return cp.partial_transpose(X, dims=[2, 2], axis=1)


def min_negativity(witnesses, values):
    """min ||rho^Gamma||_1 - 1 over 2x2 states with tr[W_i rho] = c_i."""
    rho = cp.Variable((4, 4), hermitian=True)
    P = cp.Variable((4, 4), hermitian=True)
    N = cp.Variable((4, 4), hermitian=True)
    cons = [rho >> 0, cp.real(cp.trace(rho)) == 1, P >> 0, N >> 0, cvx_pt(rho) == P - N]
    cons += [cp.real(cp.trace(np.asarray(w) @ rho)) == c for w, c in zip(witnesses, values)]
    prob = cp.Problem(cp.Minimize(cp.real(cp.trace(P + N)) - 1), cons)
    prob.solve(solver=cp.CLARABEL)
    return float(prob.value)


def dual_negativity(witnesses, values):
    """max sum a_i c_i + a_0 - 1 subject to -I <= sum a_i W_i^Gamma + a_0 I <= I."""
    a = cp.Variable(len(witnesses) + 1)
    X = sum(a[i] * pt(w) for i, w in enumerate(witnesses)) + a[-1] * np.eye(4)
    X = (X + X.H) / 2
    prob = cp.Problem(cp.Maximize(a[:-1] @ np.asarray(values) + a[-1] - 1),
                      [np.eye(4) - X >> 0, np.eye(4) + X >> 0])
    prob.solve(solver=cp.CLARABEL)
    return float(prob.value)


def generalized_robustness(rho):
    """min tr S over S >= 0 with (rho + S)^Gamma >= 0 (PPT = separable on 2x2)."""
    S = cp.Variable((4, 4), hermitian=True)
    prob = cp.Problem(cp.Minimize(cp.real(cp.trace(S))), [S >> 0, cvx_pt(np.asarray(rho) + S) >> 0])
    prob.solve(solver=cp.CLARABEL)
    return float(prob.value)


def min_robustness(W, c):
    """Smallest generalized robustness over 2x2 states with tr[W rho] = c.

    Mixing with weight s: rho + S = (1 + s) sigma, sigma PPT.
    """
    rho = cp.Variable((4, 4), hermitian=True)
    S = cp.Variable((4, 4), hermitian=True)
    cons = [rho >> 0, cp.real(cp.trace(rho)) == 1, S >> 0, cvx_pt(rho + S) >> 0,
            cp.real(cp.trace(np.asarray(W) @ rho)) == c]
    prob = cp.Problem(cp.Minimize(cp.real(cp.trace(S))), cons)
    prob.solve(solver=cp.CLARABEL)
    return float(prob.value)


SYY = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])


def concurrence_pure(psi):
    psi = np.asarray(psi) / np.linalg.norm(psi)
    return float(abs(psi @ SYY @ psi))


def _h(x):
    x = min(max(x, 0.0), 1.0)
    if x in (0.0, 1.0):
        return 0.0
    return -x * np.log2(x) - (1 - x) * np.log2(1 - x)


def ef_pure(psi):
    lam = np.linalg.eigvalsh(np.asarray(psi).reshape(2, 2) @ np.asarray(psi).reshape(2, 2).conj().T)
    return _h(float(lam[0]) / float(lam.sum()))


def roof_search(rho, fun, n_elems=4, starts=12, seed=0):
    """Brute-force min over decompositions of sum p_k fun(psi_k).

    Decompositions of rho = V V^dag are V U for isometries U (rank x n_elems).
    The result is an upper estimate of the convex roof.
    """
    vals, vecs = np.linalg.eigh(np.asarray(rho))
    keep = vals > 1e-12
    V = vecs[:, keep] * np.sqrt(vals[keep])
    r = V.shape[1]
    rng = np.random.default_rng(seed)

    def unitary(z):
        a = (z[: n_elems * n_elems] + 1j * z[n_elems * n_elems:]).reshape(n_elems, n_elems)
        q, rr = np.linalg.qr(a)
        return q * (np.diag(rr) / np.abs(np.diag(rr)))

    def avg(z):
        U = unitary(z)[:r, :]
        total = 0.0
        for k in range(n_elems):
            v = V @ U[:, k]
            p = float(np.vdot(v, v).real)
            if p > 1e-14:
                total += p * fun(v / np.sqrt(p))
        return total

    best = np.inf
    for _ in range(starts):
        res = minimize(avg, rng.normal(size=2 * n_elems * n_elems), method="Nelder-Mead",
                       options={"maxfev": 6000, "xatol": 1e-9, "fatol": 1e-11})
        best = min(best, res.fun)
    return float(best)


def binary_entropy_mp(p, digits=30):
    import mpmath as mp
    mp.mp.dps = digits
    p = mp.mpf(p)
    return -p * mp.log(p, 2) - (1 - p) * mp.log(1 - p, 2)


def regime_supremum_grid(b, n=2_000_001):
    """Dense-grid maximum of b sqrt(p(1-p)) - h(p) on [0, 1/2]."""
    p = np.linspace(0, 0.5, n)[1:]
    z = b * np.sqrt(p * (1 - p)) + p * np.log2(p) + (1 - p) * np.log2(1 - p)
    i = int(np.argmax(z))
    return max(0.0, float(z[i])), float(p[i])
