"""Acceptance criteria 1-7. Each test carries ``acceptance(n, title)`` and the
session ends with one PASS/FAIL line per criterion."""

import json

import numpy as np
import pytest

import oracles
from witbound.catalog import (
    bell_projector_witness,
    bell_states,
    cluster_witness,
    phi1_state,
    phi2_state,
    ppt_projector_witness,
    projector_witness,
    psi4_witness,
    w3_witness,
)
from witbound.concurrence import concurrence_bound_conjugate, wootters_concurrence, wootters_ef
from witbound.convex_roof import (
    B_CONCAVE,
    PureStateObjective,
    conjugate_pure,
    ef_bound_general,
    ef_bound_ppt_projector,
    ef_bound_projector_witness,
    regime_poly_approx,
    regime_supremum,
)
from witbound.negativity import negativity_bound_fixed, negativity_bound_optimal
from witbound.operators import (
    DensityMatrix,
    HermitianOperator,
    expectation,
    negativity,
    partial_transpose,
    random_density_matrix,
    random_hermitian,
    random_pure_state,
)
from witbound.report import dumps_report, run_report, verify_report
from witbound.robustness import byte_report, generalized_robustness_bound, random_robustness_bound

W1 = bell_projector_witness()
N_STATES = 500
SLACK = 1e-6


def simfam(lam):
    b = bell_states()
    m = lam * np.outer(b["psi+"], b["psi+"].conj()) + (1 - lam) * np.outer(b["psi-"], b["psi-"].conj())
    return DensityMatrix(m, (2, 2))


def random_states(seed, n=N_STATES):
    """Seeded two-qubit states of every rank, a third of them mixed toward psi+."""
    rng = np.random.default_rng(seed)
    psi = bell_states()["psi+"]
    out = []
    for k in range(n):
        rho = random_density_matrix((2, 2), rng, rank=1 + k % 4)
        if k % 3 == 1:
            t = rng.uniform()
            rho = DensityMatrix(t * np.outer(psi, psi.conj()) + (1 - t) * rho.matrix, (2, 2))
        out.append(rho)
    return out, rng


@pytest.mark.acceptance(1, "Bell witness negativity regression")
def test_criterion_1():
    r = negativity_bound_fixed((-2, 1), [W1], [-0.5])
    assert abs(r.value - 1.0) <= 1e-9
    assert negativity_bound_optimal([W1], [-0.5]).value >= 1 - 1e-4


@pytest.mark.acceptance(2, "two-witness negativity regression")
def test_criterion_2():
    w1, w2 = ppt_projector_witness(phi1_state()), ppt_projector_witness(phi2_state())
    assert negativity_bound_optimal([w1], [-1 / 3]).value == pytest.approx(2 / 3, abs=1e-3)
    assert negativity_bound_optimal([w2], [-1 / 6]).value == pytest.approx(1 / 3, abs=1e-3)
    assert negativity_bound_optimal([w1, w2], [-1 / 3, -1 / 6]).value == pytest.approx(0.7375, abs=1e-3)


@pytest.mark.acceptance(3, "regime analysis and E_F tangency")
def test_criterion_3():
    assert regime_supremum(2.0).supremum == pytest.approx(0.14985, abs=1e-3)
    for b in (B_CONCAVE, 3.0, 5.0, 10.0):
        assert regime_supremum(b).supremum == (b - 2) / 2
    grid = np.linspace(0, 2.88539, 1000)
    err = np.mean([abs(regime_poly_approx(b) - regime_supremum(b).supremum) for b in grid])
    assert err <= 5e-4
    phi = bell_states()["phi-"]
    diffs = {}
    for lam in np.arange(0.5, 1.0 + 1e-12, 0.005):
        rho = simfam(lam)
        diffs[round(lam, 3)] = ef_bound_ppt_projector(phi, expectation(W1, rho)).value - wootters_ef(rho)
    assert max(diffs.values()) <= SLACK
    rho = simfam(0.7056)
    gap = ef_bound_ppt_projector(phi, expectation(W1, rho)).value - wootters_ef(rho)
    assert abs(gap) <= 1e-3


@pytest.mark.acceptance(4, "projector witness Schmidt offset")
def test_criterion_4():
    xi = np.sqrt([1 / 3, 2 / 3])
    phi = np.array([xi[0], 0, 0, xi[1]])
    r = ef_bound_projector_witness(1.0, 1.5, phi, 1.0, c=-0.2)
    assert r.certificate["schmidt_offset"] == pytest.approx(0.5550, abs=1e-3)


@pytest.mark.acceptance(5, "robustness regressions")
def test_criterion_5():
    assert generalized_robustness_bound(w3_witness(), -0.197).value == pytest.approx(0.2955, abs=1e-3)
    assert random_robustness_bound(w3_witness(), -0.197).value == pytest.approx(0.360, abs=5e-3)
    assert generalized_robustness_bound(psi4_witness(), -0.151).value == pytest.approx(0.201, abs=1e-3)
    assert random_robustness_bound(psi4_witness(), -0.151).value == pytest.approx(0.220, abs=1e-3)
    assert generalized_robustness_bound(cluster_witness(), -0.299).value == pytest.approx(0.0997, abs=1e-3)
    assert [r.value for r in byte_report()] == [0.532, 0.46, 0.202, 0.271, 0.071, 0.029]
    rep = run_report({"records": [{"witness": "cluster4", "c": -0.299}],
                      "measures": ["robustness-rand"]})
    assert any(f["witness"] == "cluster4" and "0.1120" in f["note"] for f in rep["discrepancies"])


# -- criterion 6: soundness on seeded random states --------------------------------

@pytest.mark.acceptance(6, "soundness suites, >= 500 states each")
def test_criterion_6_negativity():
    states, rng = random_states(601)
    worst = -np.inf
    for k, rho in enumerate(states):
        w = W1 if k % 2 else ppt_projector_witness(random_pure_state(4, rng))
        r = negativity_bound_optimal([w], [expectation(w, rho)])
        worst = max(worst, r.value - negativity(rho))
    assert worst <= SLACK


@pytest.mark.acceptance(6, "soundness suites, >= 500 states each")
def test_criterion_6_ef():
    states, rng = random_states(602)
    worst = -np.inf
    for k, rho in enumerate(states):
        phi = random_pure_state(4, rng)
        w = (W1, ppt_projector_witness(phi), projector_witness(1.0, 1.0, phi, (2, 2)))[k % 3]
        r = ef_bound_general(w, expectation(w, rho))
        assert r.certified
        worst = max(worst, r.value - wootters_ef(rho))
    assert worst <= SLACK


@pytest.mark.acceptance(6, "soundness suites, >= 500 states each")
def test_criterion_6_concurrence():
    # every (alpha, B) gives a valid bound, so a small search budget keeps soundness
    states, rng = random_states(603)
    worst = -np.inf
    for k, rho in enumerate(states):
        w = (W1, ppt_projector_witness(random_pure_state(4, rng)),
             HermitianOperator(random_hermitian(4, rng), (2, 2)))[k % 3]
        r = concurrence_bound_conjugate(w, expectation(w, rho), starts=0, maxfev=600)
        worst = max(worst, r.value - wootters_concurrence(rho))
    assert worst <= SLACK


@pytest.mark.acceptance(6, "soundness suites, >= 500 states each")
def test_criterion_6_robustness():
    states, rng = random_states(604)
    worst = -np.inf
    for k, rho in enumerate(states):
        w = W1 if k % 2 else ppt_projector_witness(random_pure_state(4, rng))
        r = generalized_robustness_bound(w, expectation(w, rho))
        worst = max(worst, r.value - oracles.generalized_robustness(rho.matrix))
    assert worst <= SLACK


# -- criterion 7: structural invariants --------------------------------------------

@pytest.mark.acceptance(7, "structural invariants")
def test_criterion_7_partial_transpose_involution():
    rng = np.random.default_rng(701)
    for dims in ((2, 2), (2, 3), (2, 2, 2)):
        D = int(np.prod(dims))
        for _ in range(20):
            a = HermitianOperator(random_hermitian(D, rng), dims)
            assert np.array_equal(partial_transpose(partial_transpose(a)).matrix, a.matrix)


@pytest.mark.acceptance(7, "structural invariants")
@pytest.mark.parametrize("shift", [-1.0, 0.5, 3.0])
def test_criterion_7_conjugate_shift(shift):
    x = random_hermitian(4, np.random.default_rng(702))
    a = conjugate_pure(PureStateObjective(HermitianOperator(x, (2, 2)), "entropy", (0,)),
                       starts=16, seed=5).value
    b = conjugate_pure(PureStateObjective(HermitianOperator(x + shift * np.eye(4), (2, 2)), "entropy", (0,)),
                       starts=16, seed=5).value
    assert abs(b - (a + shift)) <= 1e-6


REPORT_CFG = {
    "records": [
        {"witness": "bell-ppt", "c": -0.3, "sigma": 0.01, "label": "bell"},
        {"witness": "pt-phi1", "c": -0.05, "sigma": 0.01, "label": "phi1"},
    ],
    "measures": ["negativity", "ef", "concurrence", "robustness-gen", "robustness-rand"],
    "options": {"seed": 7},
}


@pytest.mark.acceptance(7, "structural invariants")
def test_criterion_7_certificate_reverification():
    rows = verify_report(json.loads(dumps_report(run_report(REPORT_CFG))), tol=1e-9)
    assert len(rows) >= 10
    assert all(r["ok"] for r in rows), [r for r in rows if not r["ok"]]


@pytest.mark.acceptance(7, "structural invariants")
def test_criterion_7_report_determinism():
    assert dumps_report(run_report(REPORT_CFG)) == dumps_report(run_report(REPORT_CFG))
