"""Command-line surface tying the analysis pipeline together.

    solgraph analyze  model.json --driver tf --oracle quasistatic --out report.json
    solgraph analyze  model.json --sweep b=0.1:1.9:19 --oracle quasistatic --csv sweep.csv
    solgraph verify   model.json --driver tf --lambda 1e-3 --tau 500
    solgraph embed    model.json embedding.json --chain-strength 1.0 --out embedded.json
    solgraph eltip    model.json --spin 2 --out reduced.json
    solgraph nqueens  --n 5 --emit queens5.json --triples
    solgraph sqa      queens5.json --targets targets.json --samples 1000 --runs 4 --out tally.json
    solgraph export-dot model.json --driver tf --out graph.dot

Exit codes: 0 success, 2 schema/argument error, 3 numerical failure,
4 capacity exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import nqueens as nq
from .driver import Driver, shorthand
from .errors import ArgumentError, OrderConflictError, SchemaError, SolgraphError
from .groundset import enumerate_ground_states
from .metrics import FairnessReport, predicted_probabilities, tv_distance
from .model import IsingModel
from .oracle import adiabatic, cross_validate, quasistatic
from .perturb import Order, build_first_order, build_second_order, resolve, to_dot
from .sqa import SqaConfig, run_experiment
from .transforms import Embedding, eltip, embed


# --------------------------------------------------------------------- helpers


def _load_model(path: str) -> IsingModel:
    try:
        return IsingModel.load(path)
    except FileNotFoundError as exc:
        raise ArgumentError(f"model file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def _load_driver(spec: str, num_spins: int) -> Driver:
    if spec in ("tf", "tf+pairs"):
        return shorthand(spec, num_spins)
    try:
        drv = Driver.load(spec)
    except FileNotFoundError as exc:
        raise ArgumentError(
            f"--driver must be 'tf', 'tf+pairs', or a driver JSON path; "
            f"no file at {spec}"
        ) from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{spec} is not valid JSON: {exc}") from exc
    if drv.num_spins != num_spins:
        raise SchemaError(
            f"driver acts on {drv.num_spins} spins but the model has {num_spins}"
        )
    return drv


def _parse_bindings(pairs) -> dict[str, float]:
    out: dict[str, float] = {}
    for pair in pairs or ():
        name, eq, value = pair.partition("=")
        if not eq or not name:
            raise ArgumentError(f"--bind expects name=value, got {pair!r}")
        try:
            out[name] = float(value)
        except ValueError as exc:
            raise ArgumentError(f"--bind {name}: {value!r} is not a number") from exc
    return out


def _parse_sweep(text: str) -> tuple[str, np.ndarray]:
    name, eq, rng = text.partition("=")
    parts = rng.split(":")
    if not eq or not name or len(parts) != 3:
        raise ArgumentError(f"--sweep expects name=start:stop:steps, got {text!r}")
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ArgumentError(f"--sweep {text!r}: non-numeric field") from exc
    if steps < 2:
        raise ArgumentError(f"--sweep needs steps >= 2, got {steps}")
    return name, np.linspace(start, stop, steps)


def _build_graph(model: IsingModel, driver: Driver, order: str, tol: float | None):
    manifold = enumerate_ground_states(model, tol=tol)
    if order == "first":
        graph = build_first_order(manifold, driver)
        if not np.any(graph.matrix != 0):
            raise OrderConflictError(
                "first-order matrix vanishes; rerun with --order second or auto"
            )
        return manifold, graph
    if order == "second":
        return manifold, build_second_order(model, manifold, driver)
    return manifold, resolve(model, manifold, driver)


def _settings_snapshot(ns, bindings) -> dict:
    snap = {
        "driver": ns.driver,
        "order": ns.order,
        "tol": ns.tol,
        "bindings": bindings,
        "seed": getattr(ns, "seed", None),
    }
    if getattr(ns, "oracle", None):
        snap["oracle"] = ns.oracle
        snap["lambda"] = ns.lam
        if ns.oracle == "schrodinger":
            snap["tau"] = ns.tau
            snap["dt"] = ns.dt
    return snap


def _attach_oracle(report: FairnessReport, ns, model, driver, manifold) -> None:
    if not getattr(ns, "oracle", None):
        return
    if ns.oracle == "quasistatic":
        res = quasistatic(model, driver, manifold, lam=ns.lam)
    else:
        if ns.tau is None:
            raise ArgumentError("--oracle schrodinger requires --tau")
        res = adiabatic(model, driver, manifold, tau=ns.tau, dt=ns.dt)
    d = res.to_dict()
    d["kind"] = ns.oracle
    d["tv_vs_predicted"] = tv_distance(report.p, res.probs, 0.0, res.residual_mass)
    report.oracle = d


def _print_report(report: FairnessReport, file=None) -> None:
    file = file if file is not None else sys.stdout
    print(f"order: {report.order}", file=file)
    header = f"{'state':>12} {'comp':>4} {'c_eig':>12} {'p':>12}"
    if report.ref is not None:
        header += f" {'ref':>12}"
    print(header, file=file)
    for i, s in enumerate(report.states):
        row = (f"{s:>12} {report.component_ids[i]:>4} "
               f"{report.c_eig[i]:>12.6f} {report.p[i]:>12.6f}")
        if report.ref is not None:
            row += f" {report.ref[i]:>12.6f}"
        print(row, file=file)
    scal = ", ".join(f"{k}={v}" for k, v in sorted(report.scalars.items()))
    print(f"scalars: {scal}", file=file)
    if report.oracle is not None:
        print(f"oracle[{report.oracle['kind']}] "
              f"tv_vs_predicted={report.oracle['tv_vs_predicted']:.3e}", file=file)


def _write_outputs(report: FairnessReport, ns) -> None:
    if getattr(ns, "out", None):
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    if getattr(ns, "csv", None):
        with open(ns.csv, "w", encoding="utf-8") as fh:
            fh.write(report.to_csv())


# -------------------------------------------------------------------- analyze


def _analyze_point(model, ns, bindings):
    bound = model.substitute(bindings)
    driver = _load_driver(ns.driver, bound.num_spins)
    manifold, graph = _build_graph(bound, driver, ns.order, ns.tol)
    report = predicted_probabilities(graph, settings=_settings_snapshot(ns, bindings))
    _attach_oracle(report, ns, bound, driver, manifold)
    return report, graph


def cmd_analyze(ns) -> int:
    model = _load_model(ns.model)
    bindings = _parse_bindings(ns.bind)
    if ns.sweep:
        if getattr(ns, "dot", None):
            raise ArgumentError("--dot is not available with --sweep")
        return _run_sweep(model, ns, bindings)
    report, graph = _analyze_point(model, ns, bindings)
    _print_report(report)
    _write_outputs(report, ns)
    if getattr(ns, "dot", None):
        with open(ns.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(graph))
    return 0


def _run_sweep(model, ns, base_bindings) -> int:
    name, values = _parse_sweep(ns.sweep)
    known = model.parameter_names()
    if name not in known:
        raise ArgumentError(
            f"sweep parameter {name!r} not in model template "
            f"(available: {', '.join(sorted(known)) or 'none'})"
        )

    def point(v: float) -> FairnessReport:
        return _analyze_point(model, ns, {**base_bindings, name: float(v)})[0]

    if ns.workers > 1:
        with ThreadPoolExecutor(max_workers=ns.workers) as pool:
            reports = list(pool.map(point, values))
    else:
        reports = [point(v) for v in values]

    rows = []
    for v, rep in zip(values, reports):
        for i, state in enumerate(rep.states):
            rows.append({
                "param": name,
                "value": repr(float(v)),
                "state": state,
                "component": rep.component_ids[i],
                "ref": repr(float(rep.ref[i])) if rep.ref is not None else "",
                "c_eig": repr(float(rep.c_eig[i])),
                "p": repr(float(rep.p[i])),
                "oracle_p": (repr(float(rep.oracle["probs"][i]))
                             if rep.oracle is not None else ""),
            })
    import csv as _csv
    import io
    import os
    buf = io.StringIO()
    writer = _csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    writer.writerows(rows)
    if ns.csv:
        with open(ns.csv, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    if ns.out:
        os.makedirs(ns.out, exist_ok=True)
        width = len(str(len(values) - 1))
        for idx, (v, rep) in enumerate(zip(values, reports)):
            path = os.path.join(ns.out, f"point_{idx:0{width}d}_{name}={v:g}.json")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(rep.to_json())
    print(f"swept {name} over {len(values)} points", file=sys.stderr)
    return 0


def cmd_verify(ns) -> int:
    model = _load_model(ns.model)
    bindings = _parse_bindings(ns.bind)
    bound = model.substitute(bindings)
    driver = _load_driver(ns.driver, bound.num_spins)
    manifold, graph = _build_graph(bound, driver, ns.order, ns.tol)
    report = predicted_probabilities(graph, settings=_settings_snapshot(ns, bindings))
    table = cross_validate(bound, driver, manifold, report.p,
                           lam=ns.lam, tau=ns.tau, dt=ns.dt)
    _print_report(report)
    print(f"quasistatic(lambda={ns.lam}): "
          f"tv_vs_predicted={table['quasistatic']['tv_vs_predicted']:.3e}")
    if "adiabatic" in table:
        print(f"adiabatic(tau={ns.tau}): "
              f"tv_vs_predicted={table['adiabatic']['tv_vs_predicted']:.3e}")
    if ns.out:
        table["settings"] = _settings_snapshot(ns, bindings)
        with open(ns.out, "w", encoding="utf-8") as fh:
            json.dump(table, fh, indent=2)
    return 0


# ----------------------------------------------------------------- transforms


def cmd_embed(ns) -> int:
    model = _load_model(ns.model).substitute(_parse_bindings(ns.bind))
    try:
        emb = Embedding.load(ns.embedding)
    except FileNotFoundError as exc:
        raise ArgumentError(f"embedding file not found: {ns.embedding}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{ns.embedding} is not valid JSON: {exc}") from exc
    out = embed(model, emb, ns.chain_strength)
    print(f"embedded: {model.num_spins} -> {out.num_spins} spins, "
          f"{len(out.terms)} terms")
    if ns.out:
        out.save(ns.out)
    else:
        print(out.to_json())
    return 0


def cmd_eltip(ns) -> int:
    model = _load_model(ns.model).substitute(_parse_bindings(ns.bind))
    out = eltip(model, ns.spin)
    print(f"eliminated spin {ns.spin}: {model.num_spins} -> {out.num_spins} spins")
    if ns.out:
        out.save(ns.out)
    else:
        print(out.to_json())
    return 0


def cmd_export_dot(ns) -> int:
    model = _load_model(ns.model).substitute(_parse_bindings(ns.bind))
    driver = _load_driver(ns.driver, model.num_spins)
    _, graph = _build_graph(model, driver, ns.order, ns.tol)
    text = to_dot(graph)
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ------------------------------------------------------------- combinatorics


def cmd_nqueens(ns) -> int:
    if ns.emit:
        nq.build(ns.n).model.save(ns.emit)
        print(f"wrote {ns.n}-Queens model ({ns.n * ns.n} spins) to {ns.emit}")
    solutions = nq.enumerate_solutions(ns.n)
    families = nq.group_families(solutions, ns.n)
    print(f"n={ns.n}: {len(solutions)} solutions in {len(families)} families")
    if ns.list_solutions:
        for sol in solutions:
            print(f"  {sol}  value={nq.placement_value(ns.n, sol)}")
    if ns.triples:
        for idx, fam in enumerate(families):
            triple = nq.landscape_triple(ns.n, fam.fundamental)
            print(f"  family {idx}: size {fam.size} fundamental {fam.fundamental} "
                  f"triple {triple}")
    return 0


def cmd_sqa(ns) -> int:
    model = _load_model(ns.model).substitute(_parse_bindings(ns.bind))
    if ns.targets:
        try:
            with open(ns.targets, encoding="utf-8") as fh:
                data = json.load(fh)
        except FileNotFoundError as exc:
            raise ArgumentError(f"targets file not found: {ns.targets}") from exc
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{ns.targets} is not valid JSON: {exc}") from exc
        if isinstance(data, dict):
            data = data.get("targets")
        if not isinstance(data, list) or not all(isinstance(t, int) for t in data):
            raise SchemaError(
                f"{ns.targets} must hold a JSON array of integer states "
                f'(or {{"targets": [...]}})'
            )
        targets = sorted(set(data))
    else:
        targets = [int(v) for v in enumerate_ground_states(model).values]
    cfg = SqaConfig(trotter_slices=ns.slices, beta=ns.beta,
                    gamma_start=ns.gamma_start, gamma_end=ns.gamma_end,
                    sweeps=ns.sweeps, samples=ns.samples, runs=ns.runs,
                    seed=ns.seed)
    tally = run_experiment(model, targets, cfg)
    mean, se = tally.mean_frequency(), tally.stderr()
    print(f"{cfg.runs} runs x {cfg.samples} samples, "
          f"hit rate {tally.hit_rate():.4f}")
    for i, t in enumerate(tally.targets):
        print(f"  state {t:>10}: freq {mean[i]:.5f} +/- {se[i]:.5f}")
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            json.dump(tally.to_dict(), fh, indent=2)
    return 0


# ---------------------------------------------------------------------- main


def _add_analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("model", help="model JSON path")
    p.add_argument("--driver", default="tf",
                   help="'tf', 'tf+pairs', or driver JSON path (default tf)")
    p.add_argument("--order", choices=("auto", "first", "second"), default="auto")
    p.add_argument("--bind", action="append", metavar="NAME=VALUE",
                   help="bind a model parameter (repeatable)")
    p.add_argument("--tol", type=float, default=None,
                   help="ground-manifold energy tolerance")


def _add_oracle_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", type=float, default=1e-3,
                   help="quasistatic driver weight (default 1e-3)")
    p.add_argument("--tau", type=float, default=None,
                   help="anneal duration for the schrodinger oracle")
    p.add_argument("--dt", type=float, default=5e-3,
                   help="integrator step for the schrodinger oracle")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solgraph",
        description="Solution-graph fairness analysis for degenerate Ising models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="predict sampling probabilities")
    _add_analysis_flags(pa)
    pa.add_argument("--oracle", choices=("quasistatic", "schrodinger"), default=None)
    _add_oracle_flags(pa)
    pa.add_argument("--sweep", metavar="NAME=START:STOP:STEPS", default=None)
    pa.add_argument("--workers", type=int, default=1,
                    help="worker threads for sweep points (default 1)")
    pa.add_argument("--seed", type=int, default=0)
    pa.add_argument("--out", help="report JSON path (sweeps: directory)")
    pa.add_argument("--csv", help="CSV path (sweeps: combined table)")
    pa.add_argument("--dot", help="DOT graph path")
    pa.set_defaults(func=cmd_analyze)

    psw = sub.add_parser("sweep", help="analyze across a parameter range")
    _add_analysis_flags(psw)
    psw.add_argument("--oracle", choices=("quasistatic", "schrodinger"), default=None)
    _add_oracle_flags(psw)
    psw.add_argument("--sweep", metavar="NAME=START:STOP:STEPS", required=True)
    psw.add_argument("--workers", type=int, default=1)
    psw.add_argument("--seed", type=int, default=0)
    psw.add_argument("--out", help="directory for per-point reports")
    psw.add_argument("--csv", help="combined CSV path (default stdout)")
    psw.add_argument("--dot", help=argparse.SUPPRESS)
    psw.set_defaults(func=cmd_analyze)

    pv = sub.add_parser("verify", help="cross-validate prediction against oracles")
    _add_analysis_flags(pv)
    _add_oracle_flags(pv)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--out", help="verification JSON path")
    pv.set_defaults(func=cmd_verify)

    pe = sub.add_parser("embed", help="apply a minor embedding")
    pe.add_argument("model")
    pe.add_argument("embedding", help="embedding JSON path")
    pe.add_argument("--chain-strength", type=float, default=None,
                    help="ferromagnetic chain coupling J_F")
    pe.add_argument("--bind", action="append", metavar="NAME=VALUE")
    pe.add_argument("--out", help="embedded model JSON path")
    pe.set_defaults(func=cmd_embed)

    pl = sub.add_parser("eltip", help="eliminate one spin by local transformation")
    pl.add_argument("model")
    pl.add_argument("--spin", type=int, required=True)
    pl.add_argument("--bind", action="append", metavar="NAME=VALUE")
    pl.add_argument("--out", help="reduced model JSON path")
    pl.set_defaults(func=cmd_eltip)

    pq = sub.add_parser("nqueens", help="n-Queens model and solution structure")
    pq.add_argument("--n", type=int, required=True)
    pq.add_argument("--emit", help="write the spin model JSON here")
    pq.add_argument("--list-solutions", action="store_true")
    pq.add_argument("--triples", action="store_true",
                    help="per-family landscape triples")
    pq.set_defaults(func=cmd_nqueens)

    ps = sub.add_parser("sqa", help="path-integral Monte Carlo sampling")
    ps.add_argument("model")
    ps.add_argument("--targets", help="JSON array of target states")
    ps.add_argument("--bind", action="append", metavar="NAME=VALUE")
    ps.add_argument("--slices", type=int, default=32)
    ps.add_argument("--beta", type=float, default=10.0)
    ps.add_argument("--gamma-start", type=float, default=3.0)
    ps.add_argument("--gamma-end", type=float, default=0.01)
    ps.add_argument("--sweeps", type=int, default=1000)
    ps.add_argument("--samples", type=int, default=1000)
    ps.add_argument("--runs", type=int, default=1)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out", help="tally JSON path")
    ps.set_defaults(func=cmd_sqa)

    pd = sub.add_parser("export-dot", help="write the solution graph as DOT")
    _add_analysis_flags(pd)
    pd.add_argument("--out", help="DOT path (default stdout)")
    pd.set_defaults(func=cmd_export_dot)

    return parser


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except SolgraphError as exc:
        print(f"solgraph: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"solgraph: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
