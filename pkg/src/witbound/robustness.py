"""Closed-form robustness bounds from a single witness value.

    generalized:  E_R >= |c| / lambda_max(W)
    random:       E_r >= D |c| / tr[W]

both for ``c < 0`` and zero otherwise. Uncertainties propagate linearly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import as_operator
from .results import BoundResult

GENERALIZED = "generalized"
RANDOM = "random"


@dataclass(frozen=True)
class RobustnessBound:
    kind: str
    value: float
    sigma: float
    inputs_echo: dict

    def to_result(self, notes=()) -> BoundResult:
        measure = "robustness-gen" if self.kind == GENERALIZED else "robustness-rand"
        cert = {"method": self.kind, **self.inputs_echo}
        return BoundResult(measure, self.value, self.sigma, cert, notes=list(notes))


def generalized_from_echo(c: float, lmax: float) -> float:
    return max(0.0, -c / lmax) if c < 0 else 0.0


def random_from_echo(c: float, trace: float, D: int) -> float:
    return max(0.0, -D * c / trace) if c < 0 else 0.0


def generalized_robustness_bound(W, c: float, sigma: float = 0.0) -> RobustnessBound:
    lmax = float(np.linalg.eigvalsh(np.asarray(as_operator(W).matrix))[-1])
    if lmax <= 0:
        raise ValueError("lambda_max(W) <= 0: W cannot be rescaled to W <= 1")
    val = generalized_from_echo(float(c), lmax)
    sig = float(sigma) / lmax if val > 0 else 0.0
    return RobustnessBound(GENERALIZED, val, sig, {"c": float(c), "lambda_max": lmax})


def random_robustness_bound(W, c: float, sigma: float = 0.0,
                            D: int | None = None, trace: float | None = None) -> RobustnessBound:
    """``D |c| / tr[W]``; ``trace`` overrides ``tr[W]`` for tabulated witnesses."""
    if W is not None:
        op = as_operator(W)
        D = op.dim if D is None else D
        trace = float(np.trace(np.asarray(op.matrix)).real) if trace is None else trace
    if D is None or trace is None:
        raise ValueError("need either W or both D and trace")
    if trace <= 0:
        raise ValueError("tr[W] <= 0")
    val = random_from_echo(float(c), float(trace), int(D))
    sig = D * float(sigma) / trace if val > 0 else 0.0
    return RobustnessBound(RANDOM, val, sig, {"c": float(c), "trace": float(trace), "D": int(D)})


BYTE_TABLE = ((3, -0.532), (4, -0.460), (5, -0.202), (6, -0.271), (7, -0.071), (8, -0.029))


def byte_report(values=BYTE_TABLE) -> list[RobustnessBound]:
    """Random-robustness bounds for normalised witnesses with ``tr[W] = 2^N``."""
    return [random_robustness_bound(None, c, D=2 ** n, trace=2.0 ** n) for n, c in values]
