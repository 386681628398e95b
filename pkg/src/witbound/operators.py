"""Dense Hermitian operator algebra on multi-qudit Hilbert spaces.

Operators are stored as explicit complex matrices together with the
tensor-factor dimensions of the space they act on. Everything here is a
pure function of its inputs; constructed objects are read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_ATOL = 1e-12
PSD_ATOL = 1e-10
TRACE_ATOL = 1e-10
IMAG_ATOL = 1e-10


class DimensionError(ValueError):
    """Raised when operator shapes or bipartite splits are inconsistent."""


@dataclass(frozen=True)
class HilbertShape:
    """Tensor-factor dimensions plus an optional bipartite split.

    ``split`` holds the (0-based) indices of the factors that form
    subsystem 1; the remaining factors form subsystem 2.
    """

    local_dims: tuple[int, ...]
    split: tuple[int, ...] | None = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.local_dims)
        if not dims:
            raise DimensionError("a Hilbert space needs at least one factor")
        if any(d < 2 for d in dims):
            raise DimensionError(f"factor dimensions must be >= 2, got {list(dims)}")
        object.__setattr__(self, "local_dims", dims)
        if self.split is not None:
            object.__setattr__(self, "split", _check_split(self.split, len(dims)))

    @property
    def dim(self) -> int:
        return int(np.prod(self.local_dims))

    @property
    def n_factors(self) -> int:
        return len(self.local_dims)

    def resolve_split(self, split: Iterable[int] | None = None) -> tuple[int, ...]:
        """Return an explicit split, defaulting to the stored one or to factor 0."""
        if split is not None:
            return _check_split(split, self.n_factors)
        if self.split is not None:
            return self.split
        if self.n_factors < 2:
            raise DimensionError("a bipartite split needs at least two factors")
        return (0,)

    def bipartite_dims(self, split: Iterable[int] | None = None) -> tuple[int, int]:
        s = self.resolve_split(split)
        d1 = int(np.prod([self.local_dims[k] for k in s]))
        return d1, self.dim // d1

    def with_split(self, split: Iterable[int] | None) -> "HilbertShape":
        return HilbertShape(self.local_dims, None if split is None else tuple(split))


def _check_split(split: Iterable[int], n: int) -> tuple[int, ...]:
    s = tuple(sorted(set(int(k) for k in split)))
    if not s or len(s) >= n or s[0] < 0 or s[-1] >= n:
        raise DimensionError(
            f"split {list(s)} must be a nonempty proper subset of factors 0..{n - 1}"
        )
    return s


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


class HermitianOperator:
    """A Hermitian matrix acting on ``C^{d_1} x ... x C^{d_N}``.

    The input is checked for Hermiticity (relative tolerance 1e-12 against
    the largest entry) and then symmetrised as ``(A + A^dagger)/2`` so that
    float noise from files or arithmetic is removed.
    """

    __slots__ = ("matrix", "shape")

    def __init__(self, matrix, dims: Sequence[int] | None = None,
                 split: Iterable[int] | None = None, *, atol: float = HERMITIAN_ATOL):
        a = np.asarray(matrix, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {a.shape}")
        if dims is None:
            dims = (a.shape[0],)
        shape = HilbertShape(tuple(dims), None if split is None else tuple(split))
        if shape.dim != a.shape[0]:
            raise DimensionError(
                f"product of dims {list(shape.local_dims)} is {shape.dim}, "
                f"matrix is {a.shape[0]}x{a.shape[0]}"
            )
        scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
        asym = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
        if asym > atol * scale:
            raise ValueError(f"matrix is not Hermitian (max |A - A^dagger| = {asym:.3e})")
        object.__setattr__(self, "matrix", _frozen((a + a.conj().T) / 2))
        object.__setattr__(self, "shape", shape)

    def __setattr__(self, name, value):
        raise AttributeError("HermitianOperator is immutable")

    @property
    def dims(self) -> tuple[int, ...]:
        return self.shape.local_dims

    @property
    def dim(self) -> int:
        return self.shape.dim

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self):
        return f"HermitianOperator(dims={list(self.dims)}, split={self.shape.split})"

    def __add__(self, other):
        other = as_operator(other, self.dims)
        return HermitianOperator(self.matrix + other.matrix, self.dims, self.shape.split)

    def __sub__(self, other):
        other = as_operator(other, self.dims)
        return HermitianOperator(self.matrix - other.matrix, self.dims, self.shape.split)

    def __mul__(self, t):
        t = float(t)
        return HermitianOperator(t * self.matrix, self.dims, self.shape.split)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


class DensityMatrix(HermitianOperator):
    """Positive semidefinite, unit-trace HermitianOperator."""

    __slots__ = ()

    def __init__(self, matrix, dims: Sequence[int] | None = None,
                 split: Iterable[int] | None = None):
        super().__init__(matrix, dims, split)
        tr = np.trace(self.matrix).real
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValueError(f"density matrix must have unit trace, got {tr:.12g}")
        lmin = float(np.linalg.eigvalsh(self.matrix)[0])
        if lmin < -PSD_ATOL:
            raise ValueError(f"density matrix has negative eigenvalue {lmin:.3e}")

    @classmethod
    def from_vector(cls, psi, dims: Sequence[int] | None = None,
                    split: Iterable[int] | None = None) -> "DensityMatrix":
        psi = normalize(psi)
        return cls(np.outer(psi, psi.conj()), dims, split)


def as_operator(op, dims: Sequence[int] | None = None) -> HermitianOperator:
    """Coerce matrices (and objects exposing ``.op``) to HermitianOperator."""
    if isinstance(op, HermitianOperator):
        return op
    inner = getattr(op, "op", None)
    if isinstance(inner, HermitianOperator):
        return inner
    return HermitianOperator(op, dims)


def normalize(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    n = np.linalg.norm(psi)
    if n == 0:
        raise ValueError("cannot normalise the zero vector")
    return psi / n


def projector(psi, dims: Sequence[int] | None = None) -> HermitianOperator:
    psi = normalize(psi)
    return HermitianOperator(np.outer(psi, psi.conj()), dims)


def identity(dims: Sequence[int]) -> HermitianOperator:
    return HermitianOperator(np.eye(int(np.prod(dims))), dims)


def tensor(ops: Sequence[HermitianOperator]) -> HermitianOperator:
    """Kronecker product in the given order; factor dims are concatenated."""
    ops = [as_operator(o) for o in ops]
    if not ops:
        raise ValueError("tensor() needs at least one operator")
    mat = reduce(np.kron, [o.matrix for o in ops])
    dims = tuple(d for o in ops for d in o.dims)
    return HermitianOperator(mat, dims)


def partial_transpose_matrix(a: np.ndarray, dims: Sequence[int],
                             split: Iterable[int]) -> np.ndarray:
    """Transpose the tensor factors *not* in ``split`` (i.e. subsystem 2)."""
    dims = tuple(dims)
    n = len(dims)
    split = set(split)
    t = np.asarray(a).reshape(dims + dims)
    axes = list(range(2 * n))
    for k in range(n):
        if k not in split:
            axes[k], axes[n + k] = axes[n + k], axes[k]
    D = int(np.prod(dims))
    return t.transpose(axes).reshape(D, D)


def partial_transpose(op, split: Iterable[int] | None = None) -> HermitianOperator:
    op = as_operator(op)
    s = op.shape.resolve_split(split)
    return HermitianOperator(partial_transpose_matrix(op.matrix, op.dims, s), op.dims, s)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eig_hermitian(op) -> Spectrum:
    # LAPACK zheevd: deterministic for a fixed input and build
    vals, vecs = np.linalg.eigh(np.asarray(as_operator(op).matrix))
    return Spectrum(_frozen(vals).real.copy(), _frozen(vecs))


def eigvalsh(op) -> np.ndarray:
    return np.linalg.eigvalsh(np.asarray(as_operator(op).matrix))


def lambda_max(op) -> float:
    return float(eigvalsh(op)[-1])


def lambda_min(op) -> float:
    return float(eigvalsh(op)[0])


def trace_norm(op) -> float:
    return float(np.sum(np.abs(eigvalsh(op))))


def negativity(rho, split: Iterable[int] | None = None) -> float:
    """``||rho^Gamma||_1 - 1`` (raw, not clipped)."""
    return trace_norm(partial_transpose(rho, split)) - 1.0


def expectation(W, rho) -> float:
    """Real part of ``tr[W rho]``; a sizeable imaginary part is an error."""
    w = np.asarray(as_operator(W).matrix)
    r = np.asarray(as_operator(rho).matrix)
    if w.shape != r.shape:
        raise DimensionError(f"dimension mismatch: {w.shape} vs {r.shape}")
    val = np.sum(w * r.T)
    if abs(val.imag) > IMAG_ATOL:
        raise ValueError(f"tr[W rho] has imaginary part {val.imag:.3e}; inputs are corrupted")
    return float(val.real)


def partial_trace_vector(psi, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix of a pure state on the factors in ``keep``."""
    dims = tuple(dims)
    keep = sorted(set(keep))
    rest = [k for k in range(len(dims)) if k not in keep]
    t = np.asarray(psi, dtype=complex).reshape(dims).transpose(keep + rest)
    dk = int(np.prod([dims[k] for k in keep]))
    m = t.reshape(dk, -1)
    return m @ m.conj().T


# -- random sampling (test harnesses, simulators) --------------------------

def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    return normalize(rng.normal(size=dim) + 1j * rng.normal(size=dim))


def random_density_matrix(dims: Sequence[int], rng: np.random.Generator,
                          rank: int | None = None) -> DensityMatrix:
    """Induced-measure random state (Ginibre with ``rank`` columns)."""
    D = int(np.prod(dims))
    k = D if rank is None else int(rank)
    g = rng.normal(size=(D, k)) + 1j * rng.normal(size=(D, k))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real, dims)


def random_product_state(dims: Sequence[int], rng: np.random.Generator) -> DensityMatrix:
    psi = reduce(np.kron, [random_pure_state(d, rng) for d in dims])
    return DensityMatrix.from_vector(psi, dims)


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (a + a.conj().T) / 2
