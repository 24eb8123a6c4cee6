"""CSV/JSON/gnuplot output with 17-significant-digit decimals.

Every file embeds the run configuration up front so identical configs
reproduce byte-identical outputs.
"""

from __future__ import annotations

import json


def fmt(x):
    """Decimal string with 17 significant digits."""
    return format(float(x), ".17g")


def config_line(config):
    return json.dumps(config, sort_keys=True, separators=(",", ":"))


def window_json(window, config=None):
    doc = {
        "combinatorics": list(window.combinatorics),
        "interval": [fmt(window.interval[0]), fmt(window.interval[1])],
        "witness": fmt(window.witness),
        "samples_checked": window.samples_checked,
    }
    if config is not None:
        doc = {"config": config, "window": doc}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def tower_json(tower, config=None):
    levels = []
    for lv in tower.levels:
        r = lv.restrictive
        levels.append({
            "kind": lv.kind,
            "interval": [fmt(r.lo), fmt(r.hi)],
            "base_interval": [fmt(lv.base_interval[0]), fmt(lv.base_interval[1])],
            "cumulative_period": lv.cumulative_period,
            "boundary_word": r.boundary_orbit.word,
            "boundary_point": fmt(r.boundary_orbit.point),
            "boundary_multiplier": fmt(r.boundary_orbit.multiplier),
            "parabolic": r.parabolic,
            "trivial": lv.trivial,
        })
    doc = {
        "a": fmt(tower.base.a),
        "requested_types": list(tower.requested),
        "complete": tower.complete,
        "failure_index": tower.failure_index,
        "levels": levels,
    }
    if config is not None:
        doc = {"config": config, "tower": doc}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def restrictive_json(intervals, a, config=None):
    doc = {
        "a": fmt(a),
        "intervals": [{
            "period": r.period,
            "interval": [fmt(r.lo), fmt(r.hi)],
            "boundary_word": r.boundary_orbit.word,
            "boundary_multiplier": fmt(r.boundary_orbit.multiplier),
            "parabolic": r.parabolic,
        } for r in intervals],
    }
    if config is not None:
        doc = {"config": config, "restrictive": doc}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def curves_csv(assembled, config):
    """Rows: t, lo, hi, component, active for every curve and the max."""
    lines = ["# config: " + config_line(config),
             "t,lo,hi,component,active"]
    t_grid = assembled.curve.t_grid
    for i, t in enumerate(t_grid):
        act = set(assembled.active[i])
        for c in assembled.components:
            lines.append(",".join([
                fmt(t), fmt(c.lo[i]), fmt(c.hi[i]), c.component_id,
                "1" if c.component_id in act else "0"]))
        lines.append(",".join([
            fmt(t), fmt(assembled.curve.lo[i]), fmt(assembled.curve.hi[i]),
            "assembled", "1"]))
    return "\n".join(lines) + "\n"


def transition_report_json(scan, dims=None, inequalities=None, config=None):
    doc = {
        "a": fmt(scan.umap.a),
        "tower_types": list(scan.tower.requested),
        "components": [c.label for c in scan.components],
        "transitions": [{
            "t_star": fmt(r.t_star),
            "t_star_lo": fmt(r.t_star_lo),
            "t_star_hi": fmt(r.t_star_hi),
            "left": r.left_component,
            "right": r.right_component,
            "left_slope": [fmt(r.left_slope[0]), fmt(r.left_slope[1])],
            "right_slope": [fmt(r.right_slope[0]), fmt(r.right_slope[1])],
            "pressure": [fmt(r.pressure_lo), fmt(r.pressure_hi)],
            "classification": r.classification,
        } for r in scan.reports],
    }
    if dims is not None:
        doc["dimensions"] = [{
            "component": d.component_id,
            "d_lo": fmt(d.d_lo), "d_hi": fmt(d.d_hi),
        } for d in dims]
    if inequalities is not None:
        doc["inequalities"] = inequalities
    if config is not None:
        doc = {"config": config, "report": doc}
    return json.dumps(doc, sort_keys=True, indent=2, default=fmt) + "\n"


def gnuplot_script(csv_name, components, out_png="pressure.png"):
    """Overlay of the restricted pressure curves from the CSV."""
    lines = [
        "set datafile separator ','",
        f"set output '{out_png}'",
        "set terminal pngcairo size 900,600",
        "set xlabel 't'",
        "set ylabel 'pressure'",
        "set key top right",
        "set grid",
    ]
    plots = []
    for comp in list(components) + ["assembled"]:
        sel = (f"\"< awk -F, '$4==\\\"{comp}\\\"' {csv_name}\"")
        plots.append(f"{sel} using 1:(($2+$3)/2) with lines title '{comp}'")
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"
