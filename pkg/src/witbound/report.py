"""Certification reports: dispatch, aggregation, re-verification, simulation."""

from __future__ import annotations

import hashlib
import json
import logging
from importlib import metadata

import numpy as np

from . import negativity as neg
from .catalog import Witness
from .concurrence import (
    concurrence_bound_conjugate,
    concurrence_dual_value,
    ef_from_concurrence,
)
from .convex_roof import (
    SUP_SLACK,
    ef_bound_general,
    projector_conjugate,
    regime_supremum,
    symmetric_ef_bound,
)
from .io import (
    InputError,
    MeasurementRecord,
    load_state,
    load_witness,
    witness_to_dict,
)
from .operators import DensityMatrix, HermitianOperator, expectation
from .results import BoundResult, jsonable
from .robustness import (
    generalized_from_echo,
    generalized_robustness_bound,
    random_from_echo,
    random_robustness_bound,
)

log = logging.getLogger(__name__)

MEASURES = ("negativity", "ef", "concurrence", "robustness-gen", "robustness-rand")
REPORT_FORMAT = "witbound-report/1"
VERIFY_TOL = 1e-9

DEFAULT_OPTIONS = {
    "feas_tol": neg.FEAS_TOL,
    "gap_tol": neg.GAP_TOL,
    "eig_one_tol": neg.EIG_ONE_TOL,
    "starts": 4,
    "maxfev": 4000,
    "seed": 0,
}


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _canonical(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"))


def _entry(rec: MeasurementRecord, res: BoundResult) -> dict:
    return {"label": rec.label, "witness": rec.witness, "result": res.to_dict()}


def _negativity_section(records, witnesses, opts) -> dict:
    refs = [r.witness for r in records]
    if len(set(refs)) != len(refs):
        raise InputError("a witness appears in several negativity records; "
                         "combine repeated measurements into one record first")
    ws = [witnesses[r] for r in refs]
    cs = [r.c for r in records]
    ss = [r.sigma for r in records]
    joint = neg.negativity_bound_optimal(ws, cs, ss, gap_tol=opts["gap_tol"])
    x = neg.build_x(joint.certificate["alphas"], ws)
    t = neg.tightness_report(x, opts["eig_one_tol"])
    out = {"witnesses": refs, "labels": [r.label for r in records],
           "joint": joint.to_dict(),
           "tightness": {"s_plus": t.s_plus, "s_minus": t.s_minus, "verdict": t.verdict}}
    if len(records) > 1:
        out["single"] = [_entry(r, neg.negativity_bound_optimal([witnesses[r.witness]], [r.c],
                                                                 [r.sigma], gap_tol=opts["gap_tol"]))
                         for r in records]
    return out


def _single(measure: str, rec: MeasurementRecord, w: Witness, opts) -> BoundResult:
    if measure == "ef":
        return ef_bound_general(w, rec.c, rec.sigma, seed=opts["seed"],
                                two_qubit_kw={"starts": opts["starts"], "seed": opts["seed"],
                                              "maxfev": opts["maxfev"]})
    if measure == "concurrence":
        return concurrence_bound_conjugate(w, rec.c, rec.sigma, starts=opts["starts"],
                                           seed=opts["seed"], maxfev=opts["maxfev"])
    if measure == "robustness-gen":
        return generalized_robustness_bound(w, rec.c, rec.sigma).to_result()
    return random_robustness_bound(w, rec.c, rec.sigma).to_result()


def run_report(config: dict) -> dict:
    """Build a certification report.

    ``config`` holds ``records`` (MeasurementRecord or dicts), ``measures``,
    optional ``options`` overriding DEFAULT_OPTIONS, ``base_dir`` for
    relative witness paths and ``extra_witnesses`` (name -> Witness).
    """
    records = [r if isinstance(r, MeasurementRecord) else MeasurementRecord(**r)
               for r in config.get("records") or []]
    if not records:
        raise InputError("no measurement records")
    measures = list(config.get("measures") or [])
    if not measures:
        raise InputError("no measures requested")
    bad = [m for m in measures if m not in MEASURES]
    if bad:
        raise InputError(f"unknown measure(s) {bad}; choose from {list(MEASURES)}")
    opts = {**DEFAULT_OPTIONS, **(config.get("options") or {})}
    extra = config.get("extra_witnesses") or {}

    witnesses: dict[str, Witness] = {}
    for r in records:
        if r.witness not in witnesses:
            witnesses[r.witness] = extra.get(r.witness) or load_witness(r.witness,
                                                                         config.get("base_dir"))

    sections, skipped, flags = {}, [], []
    for m in measures:
        if m == "negativity":
            sections[m] = _negativity_section(records, witnesses, opts)
            continue
        entries = []
        for r in records:
            w = witnesses[r.witness]
            if m == "concurrence" and w.dims != (2, 2):
                skipped.append({"measure": m, "label": r.label, "witness": r.witness,
                                "reason": "concurrence is defined for two qubits only"})
                continue
            if m == "ef" and len(w.dims) < 2:
                skipped.append({"measure": m, "label": r.label, "witness": r.witness,
                                "reason": "a bipartite tensor structure is needed"})
                continue
            entries.append(_entry(r, _single(m, r, w, opts)))
        sections[m] = entries
    for m in measures:
        for ref in dict.fromkeys(r.witness for r in records):
            note = witnesses[ref].notes.get(m)
            if note:
                flags.append({"measure": m, "witness": ref, "note": note})

    table = {ref: witness_to_dict(w) for ref, w in witnesses.items()}
    inputs = {"records": [r.to_dict() for r in records], "measures": measures,
              "witnesses": table}
    return jsonable({
        "format": REPORT_FORMAT,
        "provenance": {
            "input_sha256": hashlib.sha256(_canonical(inputs).encode()).hexdigest(),
            "version": _version(),
            "options": opts,
        },
        "records": inputs["records"],
        "witnesses": table,
        "sections": sections,
        "discrepancies": flags,
        "skipped": skipped,
    })


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


# -- verification ----------------------------------------------------------------

def _cplx(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if a.ndim and a.shape[-1] == 2:
        return a[..., 0] + 1j * a[..., 1]
    return a.astype(complex)


def _witness_matrix(table: dict, ref: str) -> HermitianOperator:
    d = table[ref]
    D = int(np.prod(d["dims"]))
    return HermitianOperator(_cplx(d["matrix"]).reshape(D, D), d["dims"], d.get("split"))


def _recompute(measure: str, res: dict, op: HermitianOperator) -> float | None:
    """Recompute a bound value from certificate data; None if not recomputable."""
    cert = res["certificate"]
    method = cert.get("method")
    c = cert.get("c")
    if measure == "robustness-gen":
        return generalized_from_echo(c, cert["lambda_max"])
    if measure == "robustness-rand":
        return random_from_echo(c, cert["trace"], cert["D"])
    if method == "separable-match":
        w = np.asarray(op.matrix)
        a, b = _cplx(cert["product_a"]), _cplx(cert["product_b"])
        for v in (a, b):
            if np.linalg.matrix_rank(v.reshape(op.dims[0], -1), tol=1e-9) != 1:
                return None
        mix = cert["p"] * np.vdot(a, w @ a).real + (1 - cert["p"]) * np.vdot(b, w @ b).real
        return 0.0 if abs(mix - c) <= 1e-8 else None
    if method == "two-qubit-dual":
        val = concurrence_dual_value(op, c, cert["alpha"], [_cplx(B) for B in cert["B"]],
                                     cert["weights"])
        cb = 0.0 if val <= 0 else min(1.0, val)
        return ef_from_concurrence(cb) if measure == "ef" else cb
    if method == "verstraete":
        return max(0.0, -c)
    if method == "ppt-projector":
        if cert["w"] == 0:
            return 0.0
        return max(0.0, -c / cert["w"] - regime_supremum(2.0).supremum)
    if method == "ppt-projector-optimal":
        if cert["beta"] == 0:
            return 0.0
        beta = cert["beta"]
        val = beta * (-c / cert["kappa"]) / cert["w"] - regime_supremum(2 * beta).supremum
        return max(0.0, val - SUP_SLACK)
    if method in ("projector", "projector-optimal"):
        al = cert["alpha"]
        return max(0.0, al * c - projector_conjugate(cert["a"], cert["b"], cert["schmidt"], al))
    if method == "symmetric":
        return symmetric_ef_bound(cert["a"], cert["b"], c).value
    return None


def verify_report(report: dict, tol: float = VERIFY_TOL) -> list[dict]:
    """Recompute every bound from its certificate; one row per bound."""
    table = report["witnesses"]
    rows = []
    for measure, sec in report["sections"].items():
        if measure == "negativity":
            ws = [_witness_matrix(table, ref) for ref in sec["witnesses"]]
            items = [("joint", sec["joint"], ws)]
            items += [(e["label"] or e["witness"], e["result"], [_witness_matrix(table, e["witness"])])
                      for e in sec.get("single", [])]
            for label, res, wl in items:
                cert = res["certificate"]
                try:
                    r = neg.negativity_bound_fixed(cert["alphas"], wl, cert["values"])
                    val, why = r.value, ""
                except neg.InfeasibleCertificate as e:
                    val, why = None, str(e)
                rows.append(_row(measure, label, res, val, tol, why))
            continue
        for e in sec:
            res = e["result"]
            if not res["certified"]:
                rows.append({"measure": measure, "label": e["label"] or e["witness"],
                             "reported": res["value"], "recomputed": None, "ok": None,
                             "detail": "uncertified heuristic bound; not checked"})
                continue
            val = _recompute(measure, res, _witness_matrix(table, e["witness"]))
            rows.append(_row(measure, e["label"] or e["witness"], res, val, tol,
                             "" if val is not None else "certificate could not be checked"))
    return rows


def _row(measure, label, res, val, tol, why) -> dict:
    ok = val is not None and abs(val - res["value"]) <= tol
    return {"measure": measure, "label": label, "reported": res["value"],
            "recomputed": val, "ok": bool(ok), "detail": why}


# -- simulation -------------------------------------------------------------------

def simulate_measurement(rho, witness_ref, noise_sigma: float = 0.0, seed: int = 0,
                         label: str = "") -> MeasurementRecord:
    """``c = tr[W rho] + N(0, noise_sigma)`` with a seeded generator."""
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be >= 0")
    if not isinstance(rho, DensityMatrix):
        rho = load_state(rho)
    w = load_witness(witness_ref)
    c = expectation(w, rho)
    if noise_sigma > 0:
        c += float(np.random.default_rng(seed).normal(0.0, noise_sigma))
    ref = witness_ref if isinstance(witness_ref, str) else w.name
    return MeasurementRecord(ref, c, float(noise_sigma), label)

