"""Command-line interface: ``witbound bound|verify|simulate|catalog``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import negativity as neg
from .catalog import CATALOG, CATALOG_DESCRIPTIONS, get_witness
from .io import InputError, dump_witness, load_measurements, load_witness, read_json
from .report import DEFAULT_OPTIONS, MEASURES, dumps_report, run_report, simulate_measurement, \
    verify_report

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2


def _human(report: dict) -> str:
    lines = [f"input sha256 {report['provenance']['input_sha256'][:16]}  "
             f"version {report['provenance']['version']}"]
    for m, sec in report["sections"].items():
        lines.append(f"[{m}]")
        if m == "negativity":
            r = sec["joint"]
            lines.append(f"  joint over {', '.join(sec['witnesses'])}: "
                         f"{r['value']:.6f} +/- {r['sigma']:.6f}  (gap {r['certificate']['gap']:.1e})")
            lines.append(f"  tightness: {sec['tightness']['s_plus']} at +1, "
                         f"{sec['tightness']['s_minus']} at -1")
            entries = sec.get("single", [])
        else:
            entries = sec
        for e in entries:
            r = e["result"]
            tag = "" if r["certified"] else "  (uncertified)"
            lines.append(f"  {e['label'] or e['witness']}: {r['value']:.6f} +/- {r['sigma']:.6f}"
                         f"  [{r['certificate'].get('method', '')}]{tag}")
    for s in report["skipped"]:
        lines.append(f"skipped {s['measure']} for {s['label'] or s['witness']}: {s['reason']}")
    for f in report["discrepancies"]:
        lines.append(f"note ({f['measure']}, {f['witness']}): {f['note']}")
    return "\n".join(lines) + "\n"


def cmd_bound(args) -> int:
    data = load_measurements(args.data)
    extra = {}
    for path in args.witness or []:
        w = load_witness(path)
        extra[w.name] = w
        extra[path] = w
    measures = args.measure or data["measures"]
    opts = dict(DEFAULT_OPTIONS)
    opts.update(feas_tol=args.feas_tol, gap_tol=args.gap_tol, eig_one_tol=args.eig_one_tol,
                starts=args.starts, maxfev=args.maxfev, seed=args.seed)
    report = run_report({"records": data["records"], "measures": measures, "options": opts,
                         "base_dir": data["base_dir"], "extra_witnesses": extra})
    text = dumps_report(report) if args.json else _human(report)
    if args.out:
        Path(args.out).write_text(dumps_report(report))
    sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = read_json(args.report)
    if not isinstance(report, dict) or "sections" not in report:
        raise InputError(f"{args.report}: not a certification report")
    rows = verify_report(report, args.tol)
    failed = 0
    for r in rows:
        status = {True: "ok", False: "FAIL", None: "skip"}[r["ok"]]
        failed += r["ok"] is False
        rec = "n/a" if r["recomputed"] is None else f"{r['recomputed']:.12g}"
        line = f"{status:4s} {r['measure']:16s} {r['label']}: reported {r['reported']:.12g} recomputed {rec}"
        if r["detail"]:
            line += f" ({r['detail']})"
        print(line)
    print(f"{len(rows) - failed}/{len(rows)} bounds verified" if not failed
          else f"{failed} of {len(rows)} bounds failed verification")
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def cmd_simulate(args) -> int:
    rec = simulate_measurement(args.state, args.witness, args.noise, args.seed, args.label)
    print(json.dumps(rec.to_dict(), sort_keys=True))
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in CATALOG:
            w = get_witness(name)
            print(f"{name:14s} dims={list(w.dims)}  {CATALOG_DESCRIPTIONS[name]}")
        return EXIT_OK
    if not args.name:
        raise InputError("catalog export needs a witness name")
    w = get_witness(args.name)
    if args.out:
        dump_witness(w, args.out)
    else:
        from .io import witness_to_dict
        print(json.dumps(witness_to_dict(w)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="witbound",
                                description="Certified entanglement bounds from witness data.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="compute bounds for a measurement file")
    b.add_argument("--measure", action="append", choices=MEASURES,
                   help="measure to bound (repeatable; default: the file's 'measures')")
    b.add_argument("--data", required=True, help="measurement file (JSON)")
    b.add_argument("--witness", action="append", metavar="FILE",
                   help="witness file; records may refer to it by its name")
    b.add_argument("--json", action="store_true", help="print the machine-readable report")
    b.add_argument("--out", help="also write the JSON report here")
    b.add_argument("--feas-tol", type=float, default=neg.FEAS_TOL)
    b.add_argument("--gap-tol", type=float, default=neg.GAP_TOL)
    b.add_argument("--eig-one-tol", type=float, default=neg.EIG_ONE_TOL)
    b.add_argument("--starts", type=int, default=DEFAULT_OPTIONS["starts"],
                   help="random starts for the two-qubit certificate search")
    b.add_argument("--maxfev", type=int, default=DEFAULT_OPTIONS["maxfev"])
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(func=cmd_bound)

    v = sub.add_parser("verify", help="recheck every bound in a report from its certificate")
    v.add_argument("--report", required=True)
    v.add_argument("--tol", type=float, default=1e-9)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="simulate a noisy witness measurement")
    s.add_argument("--state", required=True, help="state file (JSON)")
    s.add_argument("--witness", required=True, help="catalog name or witness file")
    s.add_argument("--noise", type=float, default=0.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--label", default="")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("catalog", help="list or export built-in witnesses")
    c.add_argument("action", choices=["list", "export"])
    c.add_argument("name", nargs="?")
    c.add_argument("--out")
    c.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, neg.InfeasibleCertificate, KeyError, ValueError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
