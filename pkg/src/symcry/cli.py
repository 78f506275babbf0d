"""Command-line front end: ``symcry build | crystal-graph | global-basis | verify | quiver | halfq``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import cartan as cartan_mod
from . import crystal, geometry_model, global_basis, half_quantum, quiver, theta_module
from .linalg import det
from .report import Report
from .store import dumps, load_pieces, save_pieces, write_text

log = logging.getLogger("symcry")

SUITES = (
    "relations",
    "highest-weight",
    "crystal",
    "lattice",
    "global",
    "estimates",
    "criterion",
    "balanced",
    "folding-dims",
    "geometry",
)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    cartan: str = "sl3"
    quiver: str = None
    lam: str = "zero"
    depth: int = 4
    out: str = None
    fmt: str = "json"
    dmax: int = None
    jobs: int = 1
    suite: str = "all"

    def validate(self):
        if self.depth < 0:
            raise ConfigError(f"--depth must be nonnegative, got {self.depth}")
        if self.dmax is not None and self.dmax < self.depth:
            raise ConfigError(f"--dmax ({self.dmax}) must be at least --depth ({self.depth})")
        if self.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        return self


# ---------------------------------------------------------------------------
# helpers


def _setup_logging():
    level = os.environ.get("SYMCRY_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    if level not in levels:
        raise ConfigError(f"SYMCRY_LOG must be one of {sorted(levels)}")
    # a fresh handler per invocation so repeated in-process calls follow the current stderr
    for h in list(log.handlers):
        log.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(levels[level])
    log.propagate = False


def _datum(cfg):
    try:
        if cfg.quiver:
            q, _ = quiver.load_quiver(cfg.quiver)
            datum = q.cartan_datum()
        else:
            datum = cartan_mod.load_cartan(cfg.cartan)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read Cartan data: {exc}") from exc
    if cfg.lam and cfg.lam != "zero":
        try:
            with open(cfg.lam) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read lambda file: {exc}") from exc
        by_str = {str(i): i for i in datum.indices}
        datum = datum.with_lambda({by_str[str(k)]: int(v) for k, v in raw.items()})
    rep = cartan_mod.validate(datum)
    if not rep.ok:
        raise ConfigError("invalid Cartan datum:\n" + "\n".join(rep.lines()))
    return datum


def _model(cfg, datum):
    model = theta_module.ThetaModule(datum, cfg.depth)
    if cfg.out:
        load_pieces(model, cfg.out)
    model.build(cfg.depth)
    if cfg.out:
        save_pieces(model, cfg.out, cfg.depth)
    return model


def _emit(cfg, name, text):
    if cfg.out:
        path = Path(cfg.out) / name
        write_text(path, text)
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)


def _dmax(cfg):
    return cfg.dmax if cfg.dmax is not None else cfg.depth + 8


# ---------------------------------------------------------------------------
# commands


def cmd_build(cfg):
    datum = _datum(cfg)
    t = time.perf_counter()
    model = _model(cfg, datum)
    summary = {
        "datum": datum.to_json(),
        "depth": cfg.depth,
        "dims_by_depth": model.dims_by_depth(cfg.depth),
        "dims": {",".join(map(str, sw)): model.dim(sw) for sw in model.all_symweights(cfg.depth)},
    }
    log.info("built to depth %d in %.2fs", cfg.depth, time.perf_counter() - t)
    _emit(cfg, "build.json", dumps(summary))
    return 0


def cmd_crystal_graph(cfg):
    datum = _datum(cfg)
    model = _model(cfg, datum)
    graph = crystal.build_crystal(model, cfg.depth)
    if cfg.fmt == "dot":
        _emit(cfg, "crystal.dot", graph.to_dot())
    else:
        _emit(cfg, "crystal.json", dumps(graph.to_json()))
    return 0 if not graph.anomalies else 1


def cmd_global_basis(cfg):
    datum = _datum(cfg)
    model = _model(cfg, datum)
    graph = crystal.build_crystal(model, cfg.depth)
    try:
        table = global_basis.compute_global_basis(model, graph, cfg.depth, _dmax(cfg))
    except global_basis.GlobalBasisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(cfg, "global_basis.json", dumps(table.to_json()))
    return 0


def _is_sl3_swap(datum):
    return set(datum.indices) == {1, -1} and datum.pair(1, -1) == -1 and datum.th(1) == -1


def _is_finite_type(datum):
    """Positive definite pairing, tested through leading principal minors."""
    idx = datum.indices
    for n in range(1, len(idx) + 1):
        minor = [[datum.pair(i, j) for j in idx[:n]] for i in idx[:n]]
        if det(minor) <= 0:
            return False
    return True


def run_suites(cfg, suites):
    """Run the selected verification suites; returns the aggregated report."""
    datum = _datum(cfg)
    depth = cfg.depth
    total = Report(f"verify {datum.name or cfg.cartan} depth {depth}")
    model = _model(cfg, datum)
    graph = table = None

    def need_graph():
        nonlocal graph
        if graph is None:
            graph = crystal.build_crystal(model, depth)
        return graph

    def need_table():
        nonlocal table
        if table is None:
            table = global_basis.compute_global_basis(model, need_graph(), depth, _dmax(cfg))
        return table

    for s in suites:
        try:
            if s == "relations":
                total.extend(theta_module.verify_relations(model, depth))
                total.extend(theta_module.verify_adjointness(model, depth))
                total.extend(theta_module.verify_divided_powers(model, depth))
            elif s == "highest-weight":
                total.extend(theta_module.highest_weight_check(model, depth))
            elif s == "crystal":
                total.extend(crystal.verify_crystal(model, need_graph()))
            elif s == "lattice":
                rep = crystal.verify_crystal(model, need_graph())
                sub = Report(rep.title + " lattice")
                sub.checks = [c for c in rep.checks if "lattice" in c.name or "L/vL" in c.name]
                total.extend(sub)
            elif s == "global":
                total.extend(global_basis.verify_global(need_table()))
            elif s == "estimates":
                total.extend(global_basis.verify_estimates(need_table()))
                total.extend(global_basis.verify_divided_power_lemma(need_table()))
            elif s == "criterion":
                total.extend(global_basis.run_criterion(need_table()))
            elif s == "balanced":
                total.extend(global_basis.verify_balanced(need_table()))
            elif s == "folding-dims":
                if any(datum.lam[i] for i in datum.indices):
                    log.warning("folding-dims compares against V_theta(0); skipped for nonzero lambda")
                    continue
                if not _is_finite_type(datum):
                    log.warning("folding-dims agreement is only expected in finite type; skipped")
                    continue
                rep = Report("folding quotient dimensions")
                mine = model.dims_by_depth(depth)
                theirs = half_quantum.folding_dims_by_depth(depth, datum)
                rep.add("dim V_theta(0) equals dim of the folded quotient at every depth", mine == theirs, {"V_theta": mine, "quotient": theirs})
                total.extend(rep)
            elif s == "geometry":
                if not _is_sl3_swap(datum):
                    log.warning("geometry suite only applies to sl3 with the swap involution; skipped")
                    continue
                ref = geometry_model.reference_graph(depth)
                total.extend(geometry_model.check_isomorphism(ref, need_graph()))
            else:
                raise ConfigError(f"unknown suite {s!r}")
        except global_basis.GlobalBasisError as exc:
            total.add(f"{s}: global basis computation", False, str(exc))
    return total


def cmd_verify(cfg):
    suites = SUITES if cfg.suite == "all" else tuple(x.strip() for x in cfg.suite.split(","))
    for s in suites:
        if s not in SUITES:
            raise ConfigError(f"unknown suite {s!r}; choose from {', '.join(SUITES)} or all")
    rep = run_suites(cfg, suites)
    print("\n".join(rep.lines()))
    if cfg.out:
        write_text(Path(cfg.out) / "verify.json", dumps(rep.to_json()))
    return 0 if rep.ok else 1


def _load_json_arg(value, what):
    if value is None:
        return None
    try:
        if os.path.exists(value):
            with open(value) as fh:
                return json.load(fh)
        return json.loads(value)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"cannot parse {what}: {exc}") from exc


def cmd_quiver(cfg, action, dims=None, index=None, a=None, flag=None, orientation=None):
    try:
        q, omega = quiver.load_quiver(cfg.quiver or cfg.cartan)
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read quiver: {exc}") from exc
    if orientation is not None:
        omega = [str(h) for h in _load_json_arg(orientation, "orientation")]
    by_str = {str(v): v for v in q.vertices}
    if action == "validate":
        rep = quiver.validate_quiver(q)
        out = {"quiver": rep.to_json()}
        if omega is not None:
            orep = quiver.validate_orientation(q, omega)
            out["orientation"] = orep.to_json()
            ok = rep.ok and orep.ok
        else:
            ok = rep.ok
        print(dumps(out), end="")
        return 0 if ok else 1
    if omega is None:
        raise ConfigError("this action needs an orientation (in the quiver file or via --orientation)")
    if action == "shifts":
        raw = _load_json_arg(dims, "--dims") or {str(v): 1 for v in q.vertices}
        d = {by_str[str(k)]: int(x) for k, x in raw.items()}
        out = {"dims": {str(k): x for k, x in d.items()}, "dim_rep_space": quiver.dim_rep_space(d, omega, q), "per_index": {}}
        for i in q.vertices:
            entry = {"shift_F": quiver.shift_F(d, i, omega, q), "shift_E": quiver.shift_E(d, i, omega, q), "sink": quiver.is_sink(i, omega, q)}
            if a is not None:
                entry["shift_div"] = quiver.shift_div(d, i, a, omega, q)
            out["per_index"][str(i)] = entry
        print(dumps(out), end="")
        return 0
    if action == "restype":
        raw = _load_json_arg(flag, "--type")
        if raw is None or index is None:
            raise ConfigError("restype needs --type and --index")
        ft = quiver.FlagType([by_str[str(x)] for x in raw["i"]], [int(x) for x in raw["a"]])
        problems = ft.check(q.theta_v)
        if problems:
            raise ConfigError("invalid flag type: " + "; ".join(problems))
        i = by_str[str(index)]
        try:
            terms = quiver.res_terms(ft, i, omega, q)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        out = {"terms": [{"i": list(t.i), "a": list(t.a), "shift": s} for t, s in terms]}
        print(dumps(out), end="")
        return 0
    raise ConfigError(f"unknown quiver action {action!r}")


def cmd_halfq(cfg, action):
    try:
        datum = cartan_mod.load_cartan(cfg.cartan)
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read Cartan data: {exc}") from exc
    if action == "dims":
        hq = half_quantum.HalfQuantum(datum)
        out = {",".join(map(str, w)): hq.dim(w) for n in range(cfg.depth + 1) for w in hq.weights(n)}
    elif action == "folding-dims":
        if datum.theta is None:
            raise ConfigError("folding-dims needs a Cartan datum with an involution")
        try:
            dims = half_quantum.quotient_by_folding_ideal(cfg.depth, datum)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        out = {"by_symweight": {",".join(map(str, sw)): d for sw, d in sorted(dims.items())}, "by_depth": half_quantum.folding_dims_by_depth(cfg.depth, datum)}
    else:
        raise ConfigError(f"unknown halfq action {action!r}")
    _emit(cfg, f"halfq_{action}.json", dumps(out))
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _common(p, depth_default=4):
    p.add_argument("--cartan", default="sl3", help="built-in name (sl3, a4_chain, a1_1, a2, a3) or JSON config path")
    p.add_argument("--quiver", default=None, help="derive the Cartan datum from a quiver file or built-in quiver")
    p.add_argument("--lambda", dest="lam", default="zero", help="'zero' or a JSON file mapping index -> (alpha_i, lambda)")
    p.add_argument("--depth", type=int, default=depth_default)
    p.add_argument("--out", default=None, help="output directory (also holds the weight-space cache)")
    p.add_argument("--dmax", type=int, default=None, help="degree ceiling for global-basis solving (default depth+8)")
    p.add_argument("--jobs", type=int, default=1, help="worker cap (results never depend on it)")


def build_parser():
    parser = argparse.ArgumentParser(prog="symcry", description="Exact computations with the module V_theta(lambda) and its crystal and global bases.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build and cache weight spaces")
    _common(p)
    p = sub.add_parser("crystal-graph", help="emit the crystal graph")
    _common(p)
    p.add_argument("--format", dest="fmt", choices=("dot", "json"), default="json")
    p = sub.add_parser("global-basis", help="emit the lower global basis table")
    _common(p)
    p = sub.add_parser("verify", help="run verification suites")
    _common(p)
    p.add_argument("--suite", default="all", help=f"comma-separated subset of {', '.join(SUITES)}, or all")
    p = sub.add_parser("quiver", help="theta-quiver reports")
    p.add_argument("action", choices=("validate", "shifts", "restype"))
    _common(p)
    p.add_argument("--dims", default=None, help="JSON object or file: vertex -> dimension")
    p.add_argument("--index", default=None)
    p.add_argument("--a", type=int, default=None, help="divided power for shift_div")
    p.add_argument("--type", dest="flag", default=None, help='JSON flag type {"i": [...], "a": [...]}')
    p.add_argument("--orientation", default=None, help="JSON list of arrow ids")
    p = sub.add_parser("halfq", help="dimension tables for U_v^-")
    p.add_argument("action", choices=("dims", "folding-dims"))
    _common(p, depth_default=3)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _setup_logging()
        cfg = RunConfig(
            cartan=args.cartan,
            quiver=args.quiver,
            lam=args.lam,
            depth=args.depth,
            out=args.out,
            fmt=getattr(args, "fmt", "json"),
            dmax=args.dmax,
            jobs=args.jobs,
            suite=getattr(args, "suite", "all"),
        ).validate()
        if args.command == "build":
            return cmd_build(cfg)
        if args.command == "crystal-graph":
            return cmd_crystal_graph(cfg)
        if args.command == "global-basis":
            return cmd_global_basis(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "quiver":
            if not cfg.quiver:
                cfg.quiver = cfg.cartan
            return cmd_quiver(cfg, args.action, args.dims, args.index, args.a, args.flag, args.orientation)
        if args.command == "halfq":
            return cmd_halfq(cfg, args.action)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
