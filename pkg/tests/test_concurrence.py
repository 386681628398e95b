import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from witbound.catalog import bell_projector_witness, bell_states, verstraete_vector, verstraete_witness
from witbound.concurrence import (
    MagicCoefficients,
    b_operator,
    concurrence_bound_conjugate,
    concurrence_bound_verstraete,
    concurrence_conjugate,
    concurrence_dual_value,
    ef_bound_two_qubit,
    ef_from_concurrence,
    magic_basis,
    pure_concurrence,
    wootters_concurrence,
    wootters_ef,
)
from witbound.operators import (
    DensityMatrix,
    HermitianOperator,
    expectation,
    identity,
    random_density_matrix,
    random_hermitian,
    random_pure_state,
)

W1 = bell_projector_witness()
# h(0.9) evaluated with mpmath at 30 digits
H09 = float(oracles.binary_entropy_mp("0.9"))


def bell(name):
    return DensityMatrix.from_vector(bell_states()[name], (2, 2))


def test_magic_basis():
    m = np.array(magic_basis()).T
    assert np.allclose(m.conj().T @ m, np.eye(4))
    assert np.allclose(magic_basis()[0], bell_states()["phi+"])
    assert np.allclose(magic_basis()[3], bell_states()["psi-"])
    # phases pinned: i on the second and third vectors
    assert magic_basis()[1][0] == pytest.approx(1j / np.sqrt(2))
    assert magic_basis()[2][1] == pytest.approx(1j / np.sqrt(2))


def test_magic_coefficients_normalised(rng):
    for _ in range(20):
        mc = MagicCoefficients.of(random_pure_state(4, rng))
        assert np.sum(np.abs(mc.c) ** 2) == pytest.approx(1, abs=1e-10)


def test_pure_concurrence_examples():
    assert pure_concurrence(magic_basis()[0]) == pytest.approx(1)
    assert pure_concurrence([1, 0, 0, 0]) == pytest.approx(0, abs=1e-15)
    assert pure_concurrence(np.array([1, 1, 0, 0]) / np.sqrt(2)) == pytest.approx(0, abs=1e-15)
    c = MagicCoefficients.of([1, 0, 0, 0]).c
    assert np.allclose(c[:2], [1 / np.sqrt(2), -1j / np.sqrt(2)])


def test_pure_matches_wootters_and_sigma_y_form():
    rng = np.random.default_rng(2)
    for _ in range(1000):
        psi = random_pure_state(4, rng)
        c = pure_concurrence(psi)
        # sqrt of rank-deficient spectra limits the mixed formula to ~1e-8
        assert c == pytest.approx(wootters_concurrence(DensityMatrix.from_vector(psi, (2, 2))), abs=1e-6)
        assert c == pytest.approx(oracles.concurrence_pure(psi), abs=1e-12)


def test_wootters_examples():
    assert wootters_concurrence(bell("psi-")) == pytest.approx(1)
    assert wootters_concurrence(DensityMatrix(np.eye(4) / 4, (2, 2))) == pytest.approx(0)
    b = bell_states()
    for lam in np.linspace(0, 1, 11):
        m = lam * np.outer(b["psi+"], b["psi+"].conj()) + (1 - lam) * np.outer(b["psi-"], b["psi-"].conj())
        assert wootters_concurrence(DensityMatrix(m, (2, 2))) == pytest.approx(abs(2 * lam - 1), abs=1e-7)


def test_wootters_against_brute_force_roof():
    rng = np.random.default_rng(9)
    for k in range(3):
        rho = random_density_matrix((2, 2), rng, rank=2)
        ref = oracles.roof_search(rho.matrix, oracles.concurrence_pure, n_elems=3, starts=4, seed=k)
        cw = wootters_concurrence(rho)
        # the search gives an upper estimate that should reach the formula
        assert cw <= ref + 1e-7
        assert ref <= cw + 2e-3


def test_ef_from_concurrence():
    assert ef_from_concurrence(1) == pytest.approx(1)
    assert ef_from_concurrence(0) == pytest.approx(0)
    assert ef_from_concurrence(0.6) == pytest.approx(H09, abs=1e-12)
    assert ef_from_concurrence(0.6) == pytest.approx(0.4690, abs=1e-4)


def test_ef_pure_consistency(rng):
    for _ in range(50):
        psi = random_pure_state(4, rng)
        assert wootters_ef(DensityMatrix.from_vector(psi, (2, 2))) == pytest.approx(oracles.ef_pure(psi), abs=1e-6)


# -- Verstraete bound -------------------------------------------------------------

def test_verstraete_examples():
    A = np.eye(2)
    assert concurrence_bound_verstraete(A, -0.3).value == pytest.approx(0.3)
    assert concurrence_bound_verstraete(A, 0.2).value == 0
    with pytest.raises(ValueError):
        concurrence_bound_verstraete(2 * A, -0.3)


@given(st.integers(0, 100_000))
def test_verstraete_soundness(seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    w = verstraete_witness(A)
    rho = random_density_matrix((2, 2), rng, rank=int(rng.integers(1, 5)))
    c = expectation(w, rho)
    assert max(0.0, -c) <= wootters_concurrence(rho) + 1e-8


# -- conjugate function -----------------------------------------------------------

def test_conjugate_trivial_points():
    b0 = concurrence_conjugate(np.zeros((4, 4)), starts=16)
    assert b0.lower == pytest.approx(0, abs=1e-9)
    assert b0.upper == pytest.approx(0, abs=1e-9)
    b1 = concurrence_conjugate(np.eye(4), starts=16)
    assert b1.lower == pytest.approx(1, abs=1e-9)
    assert b1.upper == pytest.approx(1, abs=1e-9)


def test_conjugate_upper_is_valid():
    rng = np.random.default_rng(4)
    for _ in range(5):
        x = random_hermitian(4, rng)
        br = concurrence_conjugate(x, starts=32)
        assert br.lower <= br.upper + 1e-9
        # any pure state gives a lower bound on the conjugate
        for _ in range(50):
            psi = random_pure_state(4, rng)
            assert np.vdot(psi, x @ psi).real - pure_concurrence(psi) <= br.upper + 1e-9


@pytest.mark.parametrize("shift", [-1.0, 0.5, 3.0])
def test_conjugate_shift_property(shift):
    x = random_hermitian(4, np.random.default_rng(8))
    a = concurrence_conjugate(x, starts=32)
    b = concurrence_conjugate(x + shift * np.eye(4), starts=32)
    assert b.lower == pytest.approx(a.lower + shift, abs=1e-6)
    assert b.upper == pytest.approx(a.upper + shift, abs=1e-6)


def test_conjugate_bound_sound_on_bell_family():
    rng = np.random.default_rng(6)
    for _ in range(3):
        rho = random_density_matrix((2, 2), rng)
        c = expectation(W1, rho)
        best = max(a * c - concurrence_conjugate(a * np.asarray(W1.matrix), starts=8, dual_starts=4).upper
                   for a in (-4.0, -2.0, -1.0))
        assert best <= wootters_concurrence(rho) + 1e-8


# -- conjugate-based bound ------------------------------------------------------

def test_bound_examples():
    r = concurrence_bound_conjugate(W1, -0.5)
    assert 0.9 <= r.value <= 1.0
    r0 = concurrence_bound_conjugate(identity((2, 2)), 1.0)
    assert r0.value == 0
    assert concurrence_bound_conjugate(W1, 0.2).value == 0


def test_bound_beats_verstraete_form():
    rng = np.random.default_rng(10)
    for _ in range(4):
        A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        w = verstraete_witness(A)
        c = -rng.uniform(0.05, 0.8)
        r = concurrence_bound_conjugate(w, c)
        assert r.value >= max(0.0, -c) - 2e-3


def test_certificate_recomputes():
    r = concurrence_bound_conjugate(W1, -0.3, sigma=0.01)
    cert = r.certificate
    val = concurrence_dual_value(W1, -0.3, cert["alpha"], cert["B"], cert["weights"])
    assert min(1.0, val) == pytest.approx(r.value, abs=1e-12)
    assert r.sigma == pytest.approx(abs(cert["alpha"]) * 0.01)


def test_dual_inequality_direct():
    # C(rho) >= -tr[|B><B|^Gamma rho] for |det B| <= 1
    rng = np.random.default_rng(12)
    for _ in range(200):
        B = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        B /= np.sqrt(max(1.0, abs(np.linalg.det(B))))
        rho = random_density_matrix((2, 2), rng, rank=int(rng.integers(1, 5)))
        assert -np.trace(b_operator(B) @ rho.matrix).real <= wootters_concurrence(rho) + 1e-9
    with pytest.raises(ValueError):
        concurrence_dual_value(W1, -0.3, -1.0, [2 * np.eye(2)])
    swap = np.eye(4)[[0, 2, 1, 3]]
    assert np.allclose(b_operator(np.eye(2)), swap)
    assert np.allclose(verstraete_vector(np.eye(2)), [1, 0, 0, 1])


def test_soundness_random_pairs():
    rng = np.random.default_rng(13)
    for k in range(40):
        rho = random_density_matrix((2, 2), rng, rank=int(rng.integers(1, 5)))
        w = HermitianOperator(random_hermitian(4, rng), (2, 2)) if k % 2 else W1
        c = expectation(w, rho)
        r = concurrence_bound_conjugate(w, c, starts=0, maxfev=300)
        assert r.value <= wootters_concurrence(rho) + 1e-6


def test_ef_two_qubit():
    r = ef_bound_two_qubit(W1, -0.2056)
    lam = 0.7056
    ref = oracles._h(0.5 + np.sqrt(lam * (1 - lam)))
    assert r.value == pytest.approx(ref, abs=1e-6)
    assert r.certificate["via"] == "concurrence"


def test_non_two_qubit_rejected():
    with pytest.raises(Exception):
        wootters_concurrence(DensityMatrix(np.eye(8) / 8, (2, 2, 2)))
