"""Command-line front end.

Exit codes: 0 success, 1 validation error, 2 budget exceeded, 3 object
not found, 4 verification failures.  Every output file embeds the full
run configuration; identical configurations give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import reports
from .errors import (BudgetExceeded, NotFound, ParameterError,
                     QuadpressError, SuperstableParameter)
from .maps import QuadraticMap
from .entropy import top_entropy, ENTROPY_DEPTH
from .renorm import (build_tower, cascade_search, detect_restrictive,
                     window_search)
from .markov import markov_model, spectral_components
from .renorm import auto_tower, detect_restrictive
from .pressure import (TRANSFER_DEPTH, bowen_dimension, transitions,
                       verify_inequalities)

EXIT_OK, EXIT_VALIDATION, EXIT_BUDGET, EXIT_NOTFOUND, EXIT_VERIFY = 0, 1, 2, 3, 4


def _parse_range(text):
    lo, _, hi = text.partition(":")
    return float(lo), float(hi)


def _parse_comb(text):
    return tuple(int(v) for v in text.replace(",", " ").split())


def _load_config_file(path, known):
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            key = key.strip()
            if key not in known:
                raise ParameterError(f"unknown config key {key!r}")
            out[key] = val.strip()
    return out


def _config(args, fields):
    """Merge config-file values under explicit flags; reject unknown keys."""
    cfg = {}
    if getattr(args, "config", None):
        cfg.update(_load_config_file(args.config, set(fields)))
    for f in fields:
        v = getattr(args, f.replace("-", "_"), None)
        if v is not None:
            cfg[f] = v
    return {k: cfg[k] for k in sorted(cfg)}


def _write(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def cmd_entropy(args):
    cfg = _config(args, ["a", "depth"])
    m = QuadraticMap(float(cfg["a"]))
    b = top_entropy(m, depth=int(cfg.get("depth", ENTROPY_DEPTH)))
    print(f"h in [{b.lo:.5f}, {b.hi:.5f}]  (depth {b.depth}, width {b.width:.2e})")
    return EXIT_OK


def cmd_renorm(args):
    cfg = _config(args, ["a", "k-max", "out"])
    m = QuadraticMap(float(cfg["a"]))
    ivs = detect_restrictive(m, int(cfg.get("k-max", 8)))
    doc = reports.restrictive_json(ivs, m.a, config=cfg)
    if cfg.get("out"):
        _write(cfg["out"], doc)
    else:
        sys.stdout.write(doc)
    if not ivs:
        return EXIT_NOTFOUND
    return EXIT_OK


def cmd_window(args, search=window_search):
    cfg = _config(args, ["combinatorics", "range", "out", "samples"])
    comb = _parse_comb(cfg["combinatorics"])
    rng = _parse_range(cfg.get("range", "3.5:4.0"))
    kwargs = {}
    if cfg.get("samples"):
        kwargs["samples"] = int(cfg["samples"])
    w = search(comb, rng, **kwargs)
    doc = reports.window_json(w, config=cfg)
    if cfg.get("out"):
        _write(cfg["out"], doc)
    else:
        sys.stdout.write(doc)
    return EXIT_OK


def cmd_cascade(args):
    return cmd_window(args, search=cascade_search)


def cmd_tower(args):
    cfg = _config(args, ["a", "combinatorics", "out"])
    m = QuadraticMap(float(cfg["a"]))
    tower = build_tower(m, _parse_comb(cfg["combinatorics"]))
    doc = reports.tower_json(tower, config=cfg)
    if cfg.get("out"):
        _write(cfg["out"], doc)
    else:
        sys.stdout.write(doc)
    return EXIT_OK if tower.complete else EXIT_NOTFOUND


def cmd_pressure(args):
    cfg = _config(args, ["a", "range", "points", "depth", "out", "plot-script"])
    m = QuadraticMap(float(cfg["a"]))
    rng = _parse_range(cfg.get("range", "-2.0:1.5"))
    scan = transitions(m, t_range=rng,
                       depth=int(cfg.get("depth", TRANSFER_DEPTH)),
                       grid_points=int(cfg.get("points", 121)))
    csv = reports.curves_csv(scan.assembled, cfg)
    out = cfg.get("out", "curve.csv")
    _write(out, csv)
    if cfg.get("plot-script"):
        comps = [c.component_id for c in scan.assembled.components]
        _write(cfg["plot-script"], reports.gnuplot_script(out, comps))
    print(f"wrote {out} ({len(scan.assembled.curve.t_grid)} grid points, "
          f"{len(scan.reports)} transitions)")
    return EXIT_OK


def cmd_transitions(args):
    cfg = _config(args, ["a", "range", "depth", "out"])
    m = QuadraticMap(float(cfg["a"]))
    rng = _parse_range(cfg.get("range", "-2.0:1.5"))
    scan = transitions(m, t_range=rng,
                       depth=int(cfg.get("depth", TRANSFER_DEPTH)))
    dims = []
    for comp in scan.components:
        if comp.kind == "hyperbolic_level" and comp.model is not None \
                and comp.model.size > 0:
            try:
                dims.append(bowen_dimension(comp.model,
                                            component_id=comp.label))
            except QuadpressError:
                pass
    doc = reports.transition_report_json(scan, dims=dims, config=cfg)
    if cfg.get("out"):
        _write(cfg["out"], doc)
    else:
        sys.stdout.write(doc)
    for r in scan.reports:
        print(f"t* = {r.t_star:+.6f}  [{r.left_component} -> "
              f"{r.right_component}]  {r.classification}", file=sys.stderr)
    return EXIT_OK


def cmd_dimension(args):
    cfg = _config(args, ["a", "set", "depth"])
    m = QuadraticMap(float(cfg["a"]))
    which = cfg.get("set", "X0")
    depth = int(cfg.get("depth", 15))
    if which == "full":
        model = markov_model(m, hole=None)
    else:
        ivs = detect_restrictive(m, 8)
        if not ivs:
            raise NotFound(f"no restrictive interval at a={m.a}")
        model = markov_model(m, hole=ivs[0])
    d = bowen_dimension(model, component_id=which, depth=depth)
    print(f"HD({which}) in [{d.d_lo:.6f}, {d.d_hi:.6f}]  (width {d.width:.2e})")
    return EXIT_OK


def cmd_verify(args):
    from .verify import run_suite

    cfg = _config(args, ["suite", "samples", "out"])
    name = cfg["suite"]
    kwargs = {}
    if name == "negt" and cfg.get("samples"):
        kwargs["samples"] = int(cfg["samples"])
    try:
        result = run_suite(name, **kwargs)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    doc = json.dumps({"config": cfg, "result": result}, sort_keys=True,
                     indent=2, default=str) + "\n"
    if cfg.get("out"):
        _write(cfg["out"], doc)
    for c in result["checks"]:
        print(f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}")
    print(("suite %s: " % name)
          + ("all checks passed" if result["passed"] else "FAILURES"))
    if not result["passed"]:
        failing = [c["name"] for c in result["checks"] if not c["passed"]]
        print("failing:", ", ".join(failing), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="quadpress",
        description="Pressure functions, renormalization towers, and "
                    "phase transitions for quadratic interval maps.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, flags):
        sp = sub.add_parser(name)
        sp.set_defaults(func=func)
        sp.add_argument("--config", help="key=value config file")
        for flag, kw in flags:
            sp.add_argument(flag, **kw)
        return sp

    add("entropy", cmd_entropy, [
        ("--a", {"required": True}), ("--depth", {})])
    add("renorm", cmd_renorm, [
        ("--a", {"required": True}), ("--k-max", {}), ("--out", {})])
    add("window", cmd_window, [
        ("--combinatorics", {"required": True}), ("--range", {}),
        ("--samples", {}), ("--out", {})])
    add("cascade", cmd_cascade, [
        ("--combinatorics", {"required": True}), ("--range", {}),
        ("--samples", {}), ("--out", {})])
    add("tower", cmd_tower, [
        ("--a", {"required": True}), ("--combinatorics", {"required": True}),
        ("--out", {})])
    add("pressure", cmd_pressure, [
        ("--a", {"required": True}), ("--range", {}), ("--points", {}),
        ("--depth", {}), ("--out", {}), ("--plot-script", {})])
    add("transitions", cmd_transitions, [
        ("--a", {"required": True}), ("--range", {}), ("--depth", {}),
        ("--out", {})])
    add("dimension", cmd_dimension, [
        ("--a", {"required": True}), ("--set", {}), ("--depth", {})])
    add("verify", cmd_verify, [
        ("--suite", {"required": True}), ("--samples", {}), ("--out", {})])
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (NotFound, SuperstableParameter) as e:
        print(f"not found: {e}", file=sys.stderr)
        return EXIT_NOTFOUND
    except QuadpressError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
