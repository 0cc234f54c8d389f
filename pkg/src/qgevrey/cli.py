"""Command line front end: ``qgevrey {validate,solve,flatness,formal,report}``.

Exit codes: 0 success, 1 validation or criterion failure, 2 unreadable
scenario or bad arguments, 3 an iteration failed to contract, 4 missing
upstream artifacts.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from ._report import to_jsonable
from .asymptotics import formal_coeffs_b, formal_coeffs_q
from .errors import ConfigurationError, DependencyError, NoContractionError, QGevreyError, SchemaError
from .pipelines import cocycle_samples, flatness_reports, run_report, stage_b, stage_q, validate_scenario
from .scenario import Scenario, load_scenario, reference_path

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_NO_CONTRACTION, EXIT_DEPENDENCY = 0, 1, 2, 3, 4
PAIRS = ("q", "same-p", "cross-p")
# wall times of the last in-process report run; kept out of the files so reruns stay byte-identical
LAST_TIMINGS: dict = {}


def _umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


_UMASK = _umask()


def write_atomic(path: Path, text: str) -> None:
    """Write ``text`` to a temporary file beside ``path`` and rename it into place."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o666 & ~_UMASK)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _csv(header: list, rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    wr.writerows(rows)
    return buf.getvalue()


def scenario_digest(sc: Scenario) -> str:
    return hashlib.sha256(json.dumps(sc.raw, sort_keys=True).encode()).hexdigest()


def _load(args) -> Scenario:
    try:
        sc = load_scenario(args.scenario or reference_path())
    except (json.JSONDecodeError, OSError) as exc:
        raise SchemaError(str(exc)) from exc
    run = sc.run
    if args.tol is not None:
        run = dataclasses.replace(run, tol=args.tol)
    if args.jmax is not None:
        run = dataclasses.replace(run, j_max=args.jmax)
    if args.nmax is not None:
        run = dataclasses.replace(run, n_max=args.nmax)
    sc.run = run
    if args.seed is not None:
        sc.seed = args.seed
    return sc


def _require_valid(sc: Scenario) -> None:
    rep = validate_scenario(sc)
    if not rep.ok:
        raise ConfigurationError("validation failed: " + ", ".join(rep.failed()))


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    sc = _load(args)
    rep = validate_scenario(sc)
    text = dump_json(rep.to_dict())
    if args.out:
        write_atomic(Path(args.out) / "validation.json", text)
    for c in rep.checks:
        print(f"{'ok  ' if c.passed else 'FAIL'} {c.name}" + (f"  ({c.detail})" if c.detail and not c.passed else ""))
    return EXIT_OK if rep.ok else EXIT_FAIL


def _norms_rows_q(results: dict) -> list:
    rows = []
    for p, res in results.items():
        s = res["series"]
        for j, (th, dc) in enumerate(zip(s.norms["theta"], s.norms["disc"])):
            rows.append([p, j, repr(float(th)), repr(float(dc))])
    return rows


def cmd_solve(args) -> int:
    sc = _load(args)
    _require_valid(sc)
    out = Path(args.out)
    digest = scenario_digest(sc)
    results = stage_q(sc)
    if args.stage == "q":
        summary = {"stage": "q", "scenario_sha256": digest, "seed": sc.seed, "sectors": []}
        for p, res in results.items():
            s = res["series"]
            write_atomic(out / f"w_p{p}.csv", s.to_csv())
            summary["sectors"].append({"p": p, "eps": complex(s.eps), "terms": len(s), "residual": s.residual,
                                       "ratios": s.ratios, "decay": res["decay"]})
        write_atomic(out / "norms_q.csv", _csv(["sector", "j", "theta_norm", "disc_norm"], _norms_rows_q(results)))
        write_atomic(out / "q_manifest.json", dump_json(summary))
        print(f"stage q: {len(results)} sectors written to {out}")
        return EXIT_OK
    manifest = out / "q_manifest.json"
    if not manifest.exists():
        raise DependencyError(f"{manifest} not found; run the q stage first")
    if json.loads(manifest.read_text()).get("scenario_sha256") != digest:
        raise DependencyError("q artifacts belong to a different scenario")
    from .borel_solver import measure_decay_b

    bres = stage_b(sc, results)
    summary = {"stage": "borel", "scenario_sha256": digest, "seed": sc.seed, "subsectors": []}
    rows = []
    for (p, pp), b in bres.items():
        write_atomic(out / f"v_p{p}_{pp}.csv", b.to_csv())
        try:
            decay = measure_decay_b(b).to_dict()
        except QGevreyError as exc:
            decay = {"error": str(exc)}
        summary["subsectors"].append({"p": p, "p_prime": pp, "direction": float(b.directions[0]),
                                      "residual": b.residual, "picard_ratios": b.picard_ratios,
                                      "iterations": b.iterations, "warnings": b.warnings, "decay": decay})
        for j, (sn, dn) in enumerate(zip(b.norms["sector"], b.norms["disc"])):
            rows.append([p, pp, j, repr(float(sn)), repr(float(dn))])
    write_atomic(out / "norms_b.csv", _csv(["sector", "subsector", "j", "sector_norm", "disc_norm"], rows))
    write_atomic(out / "b_manifest.json", dump_json(summary))
    print(f"stage borel: {len(bres)} subsectors written to {out}")
    return EXIT_OK


def cmd_flatness(args) -> int:
    sc = _load(args)
    _require_valid(sc)
    out = Path(args.out)
    pairs = PAIRS if args.pair == "all" else (args.pair,)
    samples, _ = cocycle_samples(sc, pairs)
    fits = flatness_reports(sc, samples)
    for name in pairs:
        write_atomic(out / f"cocycle_{name}.csv", samples[name].to_csv())
        body = fits[name].to_dict()
        body["max_route_error"] = samples[name].max_route_error
        write_atomic(out / f"flatness_{name}.json", dump_json(body))
        f = fits[name]
        if f.degenerate:
            print(f"{name}: identically zero difference")
        else:
            print(f"{name}: {f.model} wins by {f.margin:.3g}x "
                  f"(kappa={f.q_gevrey['kappa']:.4g}, k={f.gevrey['k']})")
    return EXIT_OK


def cmd_formal(args) -> int:
    sc = _load(args)
    _require_valid(sc)
    out = Path(args.out)
    n = sc.run.n_max
    fq = formal_coeffs_q(sc.spec_q, n, sc.grid)
    fb = formal_coeffs_b(sc.spec_b, sc.spec_q, fq, n)
    header = ["m_index", "t_power", "m", "re", "im"]
    write_atomic(out / "formal_h.csv", _csv(header, fq.to_rows()))
    write_atomic(out / "formal_H.csv", _csv(header, fb.to_rows()))
    summary = {"n_max": n, "h_degrees": [a.shape[0] - 1 for a in fq.coeffs],
               "H_degrees": [a.shape[0] - 1 for a in fb.coeffs]}
    write_atomic(out / "formal.json", dump_json(summary))
    print(f"formal coefficients up to n = {n} written to {out}")
    return EXIT_OK


def cmd_report(args) -> int:
    sc = _load(args)
    _require_valid(sc)
    out = Path(args.out)
    verdict, tables, timings = run_report(sc)
    LAST_TIMINGS.clear()
    LAST_TIMINGS.update(timings)
    verdict["scenario_sha256"] = scenario_digest(sc)
    for name, text in sorted(tables.items()):
        write_atomic(out / name, text)
    write_atomic(out / "verdict.json", dump_json(verdict))
    for c in verdict["criteria"]:
        flag = "n/a " if c["passed"] is None else ("PASS" if c["passed"] else "FAIL")
        print(f"{flag} {c['id']:2d} {c['name']}")
    return EXIT_OK if verdict["all_passed"] else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="scenario JSON (default: shipped reference)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--tol", type=float, help="solver tolerance override")
    common.add_argument("--jmax", type=int, help="largest Neumann index override")
    common.add_argument("--nmax", type=int, help="largest formal coefficient index override")
    common.add_argument("--seed", type=int, help="seed override (recorded in outputs)")
    ap = argparse.ArgumentParser(prog="qgevrey", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"qgevrey {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check a scenario")
    p = sub.add_parser("solve", parents=[common], help="solve the q or Borel stage")
    p.add_argument("--stage", choices=("q", "borel"), required=True)
    p = sub.add_parser("flatness", parents=[common], help="cocycle samples and flatness fits")
    p.add_argument("--pair", choices=PAIRS + ("all",), default="all")
    sub.add_parser("formal", parents=[common], help="formal series coefficient tables")
    sub.add_parser("report", parents=[common], help="evaluate all acceptance criteria")
    return ap


COMMANDS = {"validate": cmd_validate, "solve": cmd_solve, "flatness": cmd_flatness, "formal": cmd_formal,
            "report": cmd_report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command != "validate" and not args.out:
        print("error: --out is required", file=sys.stderr)
        return EXIT_PARSE
    try:
        return COMMANDS[args.command](args)
    except SchemaError as exc:
        print(f"error: cannot read scenario: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NoContractionError as exc:
        print(f"error: no contraction: {exc}", file=sys.stderr)
        return EXIT_NO_CONTRACTION
    except DependencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEPENDENCY
    except QGevreyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
