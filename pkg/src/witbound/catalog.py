"""Named states and witnesses, Schmidt decomposition, Pauli-string operators."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Callable

import numpy as np

from .operators import (
    DimensionError,
    HermitianOperator,
    identity,
    normalize,
    partial_transpose,
    projector,
)
from .pauli import parse_pauli

SQ2 = np.sqrt(2.0)

BIPARTITE = "bipartite"
GENUINE = "genuine-N-partite"
K_SEPARABILITY = "k-separability"


@dataclass(frozen=True)
class Witness:
    """A Hermitian observable plus user-declared metadata.

    ``class_tag`` is never verified; checking that ``op`` really is a
    witness for the declared class is outside what this library does.
    """

    op: HermitianOperator
    class_tag: str = BIPARTITE
    normalization_note: str = ""
    name: str = ""
    notes: dict = field(default_factory=dict, compare=False)

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    @property
    def dims(self) -> tuple[int, ...]:
        return self.op.dims

    @property
    def split(self):
        return self.op.shape.split


def basis_ket(bits: str, d: int = 2) -> np.ndarray:
    """Computational basis vector, e.g. ``basis_ket("011")``."""
    idx = 0
    for b in bits:
        idx = idx * d + int(b)
    v = np.zeros(d ** len(bits), dtype=complex)
    v[idx] = 1.0
    return v


def bell_states() -> dict[str, np.ndarray]:
    """The four Bell vectors keyed ``phi+``, ``phi-``, ``psi+``, ``psi-``."""
    k = basis_ket
    return {
        "phi+": (k("00") + k("11")) / SQ2,
        "phi-": (k("00") - k("11")) / SQ2,
        "psi+": (k("01") + k("10")) / SQ2,
        "psi-": (k("01") - k("10")) / SQ2,
    }


def bell_projector_witness() -> Witness:
    """``|phi-><phi-|^Gamma`` on two qubits."""
    return ppt_projector_witness(bell_states()["phi-"], name="bell-ppt")


def ppt_projector_witness(phi, dims=(2, 2), split=(0,), name: str = "") -> Witness:
    """Partial transpose of the projector onto ``phi`` (normalised first)."""
    p = projector(phi, dims)
    return Witness(partial_transpose(p, split), BIPARTITE, "", name)


def projector_witness(a: float, b: float, phi, dims=None, name: str = "",
                      class_tag: str = GENUINE) -> Witness:
    """``a*I - b*|phi><phi|`` with ``phi`` normalised."""
    phi = normalize(phi)
    if dims is None:
        n = int(round(np.log2(phi.size)))
        dims = (2,) * n if 2 ** n == phi.size else (phi.size,)
    op = HermitianOperator(a * np.eye(phi.size) - b * np.outer(phi, phi.conj()), dims)
    return Witness(op, class_tag, "", name)


def w_state(n: int) -> np.ndarray:
    """Symmetric one-excitation state on ``n >= 2`` qubits."""
    if n < 2:
        raise ValueError("W state needs at least two qubits")
    v = np.zeros(2 ** n, dtype=complex)
    for j in range(n):
        v[1 << j] = 1.0
    return v / np.sqrt(n)


def psi4_state() -> np.ndarray:
    k = basis_ket
    v = k("0011") + k("1100") - 0.5 * (k("0110") + k("1001") + k("0101") + k("1010"))
    return v / np.sqrt(3.0)


# cluster witness as a Pauli expression (sites are 1-based)
CLUSTER4_EXPR = (
    "3*I - 0.5*(Z1 Z2 + I)(Z2 X3 X4 + I) - 0.5*(X1 X2 Z3 + I)(Z3 Z4 + I)"
)


def cluster_state() -> np.ndarray:
    """Four-qubit cluster state in the form the cluster witness targets.

    It is the joint +1 eigenvector of Z1Z2, Z3Z4, X1X2Z3 and Z2X3X4, i.e.
    (|0000> + |0011> + |1100> - |1111>)/2.
    """
    gens = ["Z1 Z2", "Z3 Z4", "X1 X2 Z3", "Z2 X3 X4"]
    proj = reduce(lambda a, b: a @ b,
                  [(np.eye(16) + parse_pauli(g, 4)) / 2 for g in gens])
    vals, vecs = np.linalg.eigh(proj)
    return normalize(vecs[:, -1])


def pauli_string_parse(expr: str, n_qubits: int | None = None) -> HermitianOperator:
    mat = parse_pauli(expr, n_qubits)
    n = int(round(np.log2(mat.shape[0])))
    return HermitianOperator(mat, (2,) * n)


def w3_witness() -> Witness:
    return projector_witness(2 / 3, 1.0, w_state(3), name="w3-fidelity",
                             class_tag=GENUINE)


def psi4_witness() -> Witness:
    return projector_witness(3 / 4, 1.0, psi4_state(), name="psi4-fidelity",
                             class_tag=GENUINE)


CLUSTER_RANDOM_ROBUSTNESS_NOTE = (
    "literature value E_r >= 0.1120 +/- 0.020 for c = -0.299 implies "
    "tr[W] ~ 42.7, but tr[W] = 32 for the operator as written, giving 0.1495; "
    "both numbers are shown and neither is adopted silently"
)

W3_RANDOM_SIGMA_NOTE = (
    "literature uncertainty +/-0.096 on E_r for c = -0.197 +/- 0.018 does not "
    "follow from linear propagation (+/-0.033), which is what is reported"
)


def cluster_witness() -> Witness:
    op = pauli_string_parse(CLUSTER4_EXPR, 4)
    return Witness(op, GENUINE, "tr[W] = 32 as written", "cluster4",
                   notes={"robustness-rand": CLUSTER_RANDOM_ROBUSTNESS_NOTE})


@dataclass(frozen=True)
class SchmidtData:
    coefficients: np.ndarray
    basis1: np.ndarray  # columns are the local vectors |i>_1
    basis2: np.ndarray

    def vector(self) -> np.ndarray:
        return np.einsum("i,ai,bi->ab", self.coefficients, self.basis1,
                         self.basis2).ravel()


def schmidt_decompose(psi, dims=(2, 2), split=(0,)) -> SchmidtData:
    """Schmidt form with coefficients sorted descending (phases in the bases)."""
    from .operators import HilbertShape

    shape = HilbertShape(tuple(dims))
    s = shape.resolve_split(split)
    rest = [k for k in range(shape.n_factors) if k not in s]
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != shape.dim:
        raise DimensionError(f"vector of length {psi.size} does not match dims {list(dims)}")
    d1, d2 = shape.bipartite_dims(s)
    m = psi.reshape(shape.local_dims).transpose(list(s) + rest).reshape(d1, d2)
    u, sv, vh = np.linalg.svd(m)
    k = min(d1, d2)
    return SchmidtData(sv[:k].copy(), u[:, :k].copy(), vh[:k, :].T.copy())


def verstraete_vector(A) -> np.ndarray:
    """Unnormalised ``|A> = (A x I)(|00> + |11>)``."""
    A = np.asarray(A, dtype=complex).reshape(2, 2)
    return np.kron(A, np.eye(2)) @ np.array([1, 0, 0, 1], dtype=complex)


def verstraete_witness(A, *, normalize_det: bool = True) -> Witness:
    """``|A><A|^Gamma`` with ``A`` rescaled to unit determinant modulus.

    A phase on ``A`` drops out of ``|A><A|``, so only ``|det A|`` matters.
    """
    A = np.asarray(A, dtype=complex).reshape(2, 2)
    det = np.linalg.det(A)
    if abs(det) < 1e-12:
        raise ValueError("A is singular")
    if normalize_det:
        A = A / np.sqrt(abs(det))
    elif abs(abs(det) - 1) > 1e-9:
        raise ValueError(f"|det A| = {abs(det):.6g}, expected 1")
    v = verstraete_vector(A)
    op = HermitianOperator(np.outer(v, v.conj()), (2, 2), (0,))
    return Witness(partial_transpose(op, (0,)), BIPARTITE, "|det A| = 1", "verstraete")


# -- states used in the two-witness negativity scenario ------------------------

def phi1_state() -> np.ndarray:
    return np.array([0.1, 0.1, 0.2, np.sqrt(47 / 50)], dtype=complex)


def phi2_state() -> np.ndarray:
    # last amplitude sqrt(43/50) makes the vector normalised
    return np.array([0.3, 0.1, 0.2, np.sqrt(43 / 50)], dtype=complex)


CATALOG: dict[str, Callable[[], Witness]] = {
    "bell-ppt": bell_projector_witness,
    "pt-phi1": lambda: ppt_projector_witness(phi1_state(), name="pt-phi1"),
    "pt-phi2": lambda: ppt_projector_witness(phi2_state(), name="pt-phi2"),
    "w3-fidelity": w3_witness,
    "psi4-fidelity": psi4_witness,
    "cluster4": cluster_witness,
}

CATALOG_DESCRIPTIONS = {
    "bell-ppt": "|phi-><phi-|^Gamma on 2x2",
    "pt-phi1": "|phi1><phi1|^Gamma, phi1 = (1/10, 1/10, 1/5, sqrt(47/50))",
    "pt-phi2": "|phi2><phi2|^Gamma, phi2 = (3/10, 1/10, 1/5, sqrt(43/50))",
    "w3-fidelity": "(2/3) I - |W><W| on three qubits",
    "psi4-fidelity": "(3/4) I - |Psi4><Psi4| on four qubits",
    "cluster4": "four-qubit linear cluster-state witness (Pauli form)",
}


def get_witness(name: str) -> Witness:
    try:
        factory = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog witness {name!r}; "
                       f"known: {', '.join(sorted(CATALOG))}") from None
    w = factory()
    notes = dict(w.notes)
    if name == "w3-fidelity":
        notes["robustness-rand"] = W3_RANDOM_SIGMA_NOTE
    return Witness(w.op, w.class_tag, w.normalization_note, name, notes)
