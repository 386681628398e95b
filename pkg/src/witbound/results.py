from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np


@dataclass
class BoundResult:
    """A certified lower bound on one entanglement measure.

    ``certificate`` carries everything needed to recompute ``value``
    without re-running an optimisation. ``certified`` is False when the
    value rests on a heuristic global optimisation.
    """

    measure: str
    value: float
    sigma: float = 0.0
    certificate: dict = field(default_factory=dict)
    certified: bool = True
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return jsonable(asdict(self))


def jsonable(obj):
    """Recursively convert numpy scalars/arrays and complex numbers for JSON."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj
