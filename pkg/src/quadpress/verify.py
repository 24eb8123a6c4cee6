"""Verification suites: chebyshev, negt, cascade, invariants.

Each suite runs a battery of checks with pinned tolerances and returns a
machine-readable summary; the CLI and the acceptance tests consume the
same functions.
"""

from __future__ import annotations

import math
import time

import numpy as np

from .errors import NotFound, SuperstableParameter
from .maps import QuadraticMap, find_periodic, iterate, superstable_period
from .entropy import top_entropy
from .kneading import orientation
from .renorm import (build_tower, chebyshev_end_search, detect_restrictive,
                     fixed_points, renormalize, window_search)
from .markov import enumerate_periodic, markov_model, spectral_components
from .pressure import (TransferOperator, bowen_dimension, component_curve,
                       cycle_pressure, default_t_grid, negt_bound_check,
                       transfer_pressure, transitions, verify_inequalities)

LOG2 = math.log(2.0)
SUPERSTABLE_P3 = None      # cached witness parameters
_CACHE = {}


def _check(name, passed, **info):
    rec = {"name": name, "passed": bool(passed)}
    if info:
        rec["info"] = {k: (float(v) if isinstance(v, (int, float, np.floating))
                           else v) for k, v in info.items()}
    return rec


def _summary(suite, checks):
    return {"suite": suite, "passed": all(c["passed"] for c in checks),
            "checks": checks}


def p3_witness():
    """Superstable period-3 parameter, by bisection on f^3(c) - c."""
    if "p3" not in _CACHE:
        lo, hi = 3.8, 3.9
        fa = iterate(QuadraticMap(lo), 0.5, 3) - 0.5
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            fm = iterate(QuadraticMap(mid), 0.5, 3) - 0.5
            if fa * fm <= 0:
                hi = mid
            else:
                lo, fa = mid, fm
        _CACHE["p3"] = 0.5 * (lo + hi)
    return _CACHE["p3"]


def misiurewicz_parameters(count=5, k_range=(3, 4, 5, 6)):
    """Parameters where f^k(c) lands on the interior fixed point."""
    key = ("mis", count, k_range)
    if key in _CACHE:
        return _CACHE[key]

    def cond(a, k):
        return iterate(QuadraticMap(a), 0.5, k) - (1.0 - 1.0 / a)

    found = []
    for k in k_range:
        grid = np.linspace(3.58, 3.999, 900)
        vals = [cond(float(a), k) for a in grid]
        for i in range(len(grid) - 1):
            if vals[i] * vals[i + 1] < 0:
                lo, hi, fa = float(grid[i]), float(grid[i + 1]), vals[i]
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    fm = cond(mid, k)
                    if fa * fm <= 0:
                        hi = mid
                    else:
                        lo, fa = mid, fm
                a = 0.5 * (lo + hi)
                if all(abs(a - b) > 1e-6 for b in found) and \
                   superstable_period(QuadraticMap(a), 32) is None:
                    found.append(a)
            if len(found) >= count:
                break
        if len(found) >= count:
            break
    _CACHE[key] = found[:count]
    return _CACHE[key]


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def suite_chebyshev():
    """Exact-curve battery at a = 4."""
    checks = []
    m4 = QuadraticMap(4.0)
    h = top_entropy(m4, depth=18)
    checks.append(_check("entropy_bracket_contains_log2",
                         h.contains(LOG2) and h.width < 1e-3,
                         lo=h.lo, hi=h.hi, width=h.width))
    scan = transitions(m4)
    asm = scan.assembled
    tg = asm.curve.t_grid
    truth = np.maximum(-tg * math.log(4.0), (1.0 - tg) * LOG2)
    mids = 0.5 * (asm.curve.lo + asm.curve.hi)
    widths = asm.curve.hi - asm.curve.lo
    checks.append(_check("assembled_matches_formula_121pts",
                         bool(np.all(np.abs(mids - truth) <= widths + 5e-3)
                              and np.all(widths < 5e-3)),
                         max_err=float(np.abs(mids - truth).max()),
                         max_width=float(widths.max())))
    kinks = scan.reports
    one_at_minus1 = (len(kinks) == 1
                     and abs(kinks[0].t_star + 1.0) < 1e-6
                     and kinks[0].classification == "kink-certified")
    checks.append(_check("unique_transition_at_minus_one", one_at_minus1,
                         n_reports=len(kinks),
                         t_star=kinks[0].t_star if kinks else None))
    p1_lo, p1_hi = asm.curve.bracket_at(1.0)
    checks.append(_check("zero_pressure_tail_at_one",
                         -5e-3 <= p1_lo <= p1_hi <= 5e-3,
                         p1_lo=p1_lo, p1_hi=p1_hi))
    return _summary("chebyshev", checks)


def suite_negt(samples=4):
    """Negative-spectrum bound at a=4 and Misiurewicz-type parameters."""
    checks = []
    r4 = negt_bound_check(4.0)
    checks.append(_check("a4_bound_holds", r4["ok"],
                         t_star_hi=r4["t_star_hi"], bound=r4["bound"]))
    checks.append(_check("a4_equality_margin",
                         abs(r4["t_star_hi"] - r4["bound"]) < 1e-6,
                         margin=abs(r4["t_star_hi"] - r4["bound"])))
    params = misiurewicz_parameters(count=max(4, samples))
    checks.append(_check("derived_parameter_count", len(params) >= 4,
                         count=len(params)))
    for a in params[:max(4, samples)]:
        try:
            r = negt_bound_check(a)
            checks.append(_check(f"bound_at_{a:.6f}", r["ok"],
                                 t_star_hi=r["t_star_hi"], bound=r["bound"],
                                 h_lo=r["h_lo"]))
        except (SuperstableParameter, Exception) as e:
            checks.append(_check(f"bound_at_{a:.6f}", False,
                                 error=type(e).__name__))
    return _summary("negt", checks)


def cascade_candidates(b1_values=(1, 2), a2_max=9):
    for b1 in b1_values:
        for a2 in range(4, a2_max + 1):
            yield (3, b1, a2)


def suite_cascade(b1_values=(1, 2), a2_max=9, depth=14, time_budget=540.0):
    """Depth-2 cascade battery: inequalities + two kinks in (0, 1).

    Tries combinatorics (3, b1, a2) in order and stops at the first fully
    certified one; otherwise reports the largest certified subset.  The
    transition scan runs at the window's full-branch (boundary-crisis)
    end, where the deepest level carries entropy and the second positive
    kink exists; at the superstable witness the terminal attractor is
    excluded and contributes no curve.
    """
    checks = []
    t_start = time.time()
    best = None
    for comb in cascade_candidates(b1_values, a2_max):
        if time.time() - t_start > time_budget and best is not None:
            break
        label = "".join(str(v) for v in comb)
        try:
            window = window_search(comb, (3.8, 3.9))
            tower_w = build_tower(QuadraticMap(window.witness), comb)
            if not tower_w.complete:
                raise NotFound("tower incomplete at witness")
            a_run = chebyshev_end_search(comb, window)
            m = QuadraticMap(a_run)
            tower = build_tower(m, comb)
            if not tower.complete:
                raise NotFound("tower incomplete at full-branch end")
        except (NotFound, Exception) as e:
            checks.append(_check(f"window_{label}", False,
                                 error=f"{type(e).__name__}: {e}"))
            continue
        checks.append(_check(f"window_{label}", True,
                             witness=window.witness, run_at=a_run))
        rep = verify_inequalities(m, tower, depth=depth)
        chis_ok = all(c["log_Df0_gt_chihi"] == "holds-certified"
                      and c["chilo_gt_half_next_chihi"] == "holds-certified"
                      for c in rep["chis"])
        hds_ok = all(h["hd_next_lt_1"] == "holds-certified"
                     and h["gap_dominates"] == "holds-certified"
                     for h in rep["hds"])
        scan = transitions(m, depth=max(10, depth - 2))
        in01 = [r for r in scan.reports
                if 0.0 < r.t_star < 1.0 and r.classification == "kink-certified"]
        hd_x1 = next((lv for lv in rep["levels"]), None)
        ordering_ok = False
        if len(in01) >= 2 and hd_x1 is not None:
            t1, t2 = in01[0], in01[-1]
            ordering_ok = (t1.t_star_hi < hd_x1["hd_lo"]
                           and hd_x1["hd_hi"] < t2.t_star_lo)
        record = {
            "comb": comb, "chis_ok": chis_ok, "hds_ok": hds_ok,
            "kinks01": len(in01), "ordering_ok": ordering_ok,
            "rep": rep, "scan": scan,
        }
        score = sum([chis_ok, hds_ok, len(in01) >= 2, ordering_ok])
        if best is None or score > best[0]:
            best = (score, record)
        if score == 4:
            break
    if best is None:
        checks.append(_check("any_candidate", False))
        return _summary("cascade", checks)
    rec = best[1]
    label = "".join(str(v) for v in rec["comb"])
    checks.append(_check(f"chis_certified_{label}", rec["chis_ok"]))
    checks.append(_check(f"hds_certified_{label}", rec["hds_ok"]))
    checks.append(_check(f"two_kinks_in_unit_interval_{label}",
                         rec["kinks01"] >= 2, count=rec["kinks01"]))
    checks.append(_check(f"ordering_t1_HD_t2_{label}", rec["ordering_ok"]))
    return _summary("cascade", checks)


def suite_invariants(run_cli_determinism=True):
    """Slope law, estimator agreement, scaling, Bowen roots, properties."""
    checks = []
    a3 = p3_witness()
    m3, m4 = QuadraticMap(a3), QuadraticMap(4.0)

    # slope law (grid finite differences within exponent brackets + slack)
    scans = {"a4": transitions(m4), "p3": transitions(m3)}
    slope_ok, worst = True, 0.0
    for name, scan in scans.items():
        for curve in scan.curves:
            tg, mid = curve.t_grid, 0.5 * (curve.lo + curve.hi)
            slopes = np.diff(mid) / np.diff(tg)
            lo_b = -curve.slope_bracket.chi_max - 1e-2
            hi_b = -curve.slope_bracket.chi_min + 1e-2
            if slopes.size:
                worst = max(worst, float(np.max(slopes - hi_b)),
                            float(np.max(lo_b - slopes)))
                if np.any(slopes < lo_b) or np.any(slopes > hi_b):
                    slope_ok = False
    checks.append(_check("slope_law_all_curves", slope_ok, worst_excess=worst))

    # estimator cross-validation at 20 t values
    J = detect_restrictive(m3, 3)[0]
    x0 = markov_model(m3, hole=J)
    full4 = markov_model(m4, hole=None)
    agree = True
    for t in np.linspace(-0.5, 1.4, 20):
        t = float(t)
        lo4, hi4 = transfer_pressure(full4, t, 10)
        lo3, hi3 = transfer_pressure(x0, t, 10)
        c4 = cycle_pressure(full4, t, 10)
        c3 = cycle_pressure(x0, t, 10)
        oracle = (1.0 - t) * LOG2
        if not (lo4 <= c4 <= hi4 and lo4 <= oracle <= hi4
                and lo3 <= c3 <= hi3):
            agree = False
    checks.append(_check("estimator_cross_validation_20pts", agree))

    # renormalization scaling at the superstable witness
    Rf = renormalize(m3, J)
    fps = [p for p in fixed_points(Rf) if abs(p - Rf.c) > 1e-6]
    mults = [abs(Rf.deriv(p)) for p in fps]
    chi_level = math.log(max(mults))
    beta = J.boundary_orbit
    chi_base = math.log(abs(beta.multiplier)) / beta.period
    scale_ok = True
    for t in np.linspace(-2.0, 1.5, 20):
        lhs = -t * chi_base                      # base pressure on O(J)
        rhs = (-t * chi_level) / 3.0             # lifted level pressure
        if abs(lhs - rhs) > 4e-9 + abs(t) * 1e-9:
            scale_ok = False
    checks.append(_check("renormalization_scaling_20pts", scale_ok,
                         chi_base=chi_base, chi_level_third=chi_level / 3.0))
    # entropy scaling at the full-branch end of the period-3 window
    try:
        w3 = window_search((3,), (3.8, 3.9))
        a_end = chebyshev_end_search((3,), w3)
        tower_end = build_tower(QuadraticMap(a_end), (3,))
        h_end = top_entropy(tower_end.deepest_handle(), depth=12)
        checks.append(_check("lifted_entropy_third_log2",
                             h_end.contains(LOG2) or h_end.width < 2e-2,
                             lo=h_end.lo, hi=h_end.hi))
    except (NotFound, Exception) as e:
        checks.append(_check("lifted_entropy_third_log2", False,
                             error=type(e).__name__))

    # Bowen roots
    d0 = bowen_dimension(x0, component_id="X0", depth=15)
    op0 = TransferOperator(x0, depth=15)
    cut_ok = (op0.pressure_bracket(d0.d_lo)[1] >= 0
              and op0.pressure_bracket(d0.d_hi)[0] <= 0)
    checks.append(_check("bowen_X0_inside_unit",
                         0.0 < d0.d_lo <= d0.d_hi < 1.0
                         and d0.width < 1e-2 and cut_ok,
                         d_lo=d0.d_lo, d_hi=d0.d_hi, width=d0.width))
    d4 = bowen_dimension(full4, component_id="full4")
    checks.append(_check("bowen_full4_contains_one",
                         d4.d_lo <= 1.0 <= d4.d_hi,
                         d_lo=d4.d_lo, d_hi=d4.d_hi))

    # convexity of assembled midpoints within bracket slack
    conv_ok = True
    for scan in scans.values():
        c = scan.assembled.curve
        mid = 0.5 * (c.lo + c.hi)
        w = c.hi - c.lo
        for i in range(1, len(mid) - 1):
            slack = w[i - 1] + w[i] + w[i + 1] + 1e-9
            if mid[i] > 0.5 * (mid[i - 1] + mid[i + 1]) + slack:
                conv_ok = False
    checks.append(_check("assembled_convexity_within_slack", conv_ok))

    # argmax stability away from transitions
    stab_ok = True
    for scan in scans.values():
        stars = [(r.t_star_lo, r.t_star_hi) for r in scan.reports]
        for i, t in enumerate(scan.assembled.curve.t_grid):
            near = any(lo - 0.02 <= t <= hi + 0.02 for lo, hi in stars)
            if not near and len(scan.assembled.active[i]) != 1:
                stab_ok = False
    checks.append(_check("argmax_stability_off_transitions", stab_ok))

    # Ruelle flagging over enumerated orbits
    ruelle_ok = True
    attractor_seen = False
    for model, n in ((full4, 6), (x0, 6)):
        for _, orb in enumerate_periodic(model, n):
            if abs(orb.multiplier) >= 1.0 and not orb.ruelle_ok():
                ruelle_ok = False
    m32 = QuadraticMap(3.2)
    try:
        orb = find_periodic(m32, "R")
        attractor_seen = orb.is_attracting
    except NotFound:
        pass
    checks.append(_check("ruelle_flagging", ruelle_ok and attractor_seen))

    if run_cli_determinism:
        import tempfile, os
        from . import cli
        outs = []
        for _ in range(2):
            fd, path = tempfile.mkstemp(suffix=".csv")
            os.close(fd)
            code = cli.main(["pressure", "--a", "4.0", "--out", path])
            with open(path, "rb") as fh:
                outs.append(fh.read())
            os.unlink(path)
            if code != 0:
                outs = [b"0", b"1"]
                break
        checks.append(_check("cli_determinism_byte_identical",
                             outs[0] == outs[1]))
    return _summary("invariants", checks)


SUITES = {
    "chebyshev": suite_chebyshev,
    "negt": suite_negt,
    "cascade": suite_cascade,
    "invariants": suite_invariants,
}


def run_suite(name, **kwargs):
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; valid: {sorted(SUITES)}")
    return SUITES[name](**kwargs)
