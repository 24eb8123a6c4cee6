"""Restricted pressure brackets, phase transitions, Bowen dimension.

Each spectral component yields a bracket-valued curve t -> [lo, hi]
enclosing its restricted pressure sup (h - t*chi).  Hyperbolic components
use weighted transfer matrices on refined Markov partitions; the zero
fixed point and superstable/Chebyshev terminals have exact formulas.  The
full pressure is the pointwise max, and phase transitions are argmax
switches refined by bisection under the bounded-slope kink criterion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import (NoRoot, NoSignChange, NonHyperbolic, ParameterError,
                     SlopesOverlap, SuperstableParameter)
from .maps import QuadraticMap, iterate, superstable_period
from .entropy import top_entropy
from .markov import (MarkovModel, SlopeBracket, SpectralComponent,
                     enumerate_periodic, ensure_hyperbolic, lyapunov_bracket,
                     markov_model, refine_model, spectral_components)
from .renorm import core_interval, auto_tower

T_GRID_MIN, T_GRID_MAX, T_GRID_POINTS = -2.0, 1.5, 121
EXACT_PAD = 1e-9           # padding on exact-formula curves
TRANSFER_DEPTH = 10        # default pullback depth for transfer matrices
CROSSING_WIDTH = 1e-6      # target width for exact-curve crossings
ESTIMATOR_FLOOR = 2.5e-4   # op-level bracket floor: keeps finite-n cycle
                           # sums comparable with exact-width enclosures
LOG2 = math.log(2.0)


def default_t_grid():
    return np.linspace(T_GRID_MIN, T_GRID_MAX, T_GRID_POINTS)


@dataclass(frozen=True)
class PressureCurve:
    """Bracketed pressure samples of one component on a t grid."""

    component_id: str
    t_grid: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    slope_bracket: SlopeBracket        # exponent range of the carrying set
    depth: int
    evaluator: object = field(repr=False, compare=False, default=None)
    certified: bool = True

    def bracket_at(self, t):
        return self.evaluator(t)

    def width_at(self, t):
        lo, hi = self.evaluator(t)
        return hi - lo

    def midpoint(self, t):
        lo, hi = self.evaluator(t)
        return 0.5 * (lo + hi)


@dataclass(frozen=True)
class DimensionBracket:
    """[d_lo, d_hi] around the Bowen root of a component's pressure."""

    d_lo: float
    d_hi: float
    component_id: str

    @property
    def width(self):
        return self.d_hi - self.d_lo


@dataclass(frozen=True)
class PhaseTransitionReport:
    """A located crossing of two restricted-pressure curves."""

    t_star_lo: float
    t_star_hi: float
    left_component: str
    right_component: str
    left_slope: tuple                 # (slope_lo, slope_hi) on the left
    right_slope: tuple
    pressure_lo: float                # bracket of P at the crossing
    pressure_hi: float
    classification: str               # kink-certified | suspected

    @property
    def t_star(self):
        return 0.5 * (self.t_star_lo + self.t_star_hi)

    @property
    def width(self):
        return self.t_star_hi - self.t_star_lo


# ---------------------------------------------------------------------------
# component pressure brackets
# ---------------------------------------------------------------------------

def fixed_point_pressure(a, t):
    """P(t, {0}) = -t log a, exactly."""
    if not 0.0 < a <= 4.0:
        raise ParameterError("a must be in (0, 4]")
    return -t * math.log(a)


class TransferOperator:
    """Weighted transfer matrices over a refined Markov partition.

    Edge weights bracket |Df|^(-t) per source cylinder; the Perron roots
    of the two weightings bracket the restricted pressure.  For t < 0 the
    sup/inf roles swap; taking min/max of the two powered endpoints
    handles both signs uniformly.
    """

    def __init__(self, model, depth=TRANSFER_DEPTH):
        if model.full_shift_smooth:
            self.exact_tent = True
            self.model = model
            return
        self.exact_tent = False
        base = ensure_hyperbolic(model) if not model.hyperbolic else model
        extra = max(0, depth - base.refinement_depth)
        self.model = refine_model(base, extra) if extra else base
        if not self.model.hyperbolic:
            raise NonHyperbolic("transfer operator needs a hyperbolic model")
        trans = self.model.transitions
        rows, cols = np.nonzero(trans)
        self.rows, self.cols = rows, cols
        self.n = self.model.size
        self.d_lo = np.array([max(b[0], 1e-300)
                              for b in self.model.deriv_brackets])[rows]
        self.d_hi = np.array([b[1] for b in self.model.deriv_brackets])[rows]

    def pressure_bracket(self, t):
        """[lo, hi] for the restricted pressure at t."""
        if self.exact_tent:
            v = (1.0 - t) * LOG2
            return v - EXACT_PAD, v + EXACT_PAD
        w1 = self.d_lo ** (-t)
        w2 = self.d_hi ** (-t)
        w_lo = np.minimum(w1, w2)
        w_hi = np.maximum(w1, w2)
        lo = _sparse_perron(self.rows, self.cols, w_lo, self.n, upper=False)
        hi = _sparse_perron(self.rows, self.cols, w_hi, self.n, upper=True)
        lo_v = math.log(lo) if lo > 0 else -math.inf
        hi_v = math.log(hi) if hi > 0 else -math.inf
        return lo_v, hi_v


def _sparse_perron(rows, cols, weights, n, upper, steps=120):
    """One-sided Perron bound of a sparse nonnegative matrix."""
    if n == 0 or weights.size == 0:
        return 0.0
    w = sp.csr_matrix((weights, (rows, cols)), shape=(n, n))
    scale = weights.max()
    if scale <= 0:
        return 0.0
    shift = 0.5 * scale
    v = np.ones(n)
    for _ in range(steps):
        av = w @ v + shift * v
        top = av.max()
        if top <= 0:
            return 0.0
        v = av / top
    av = w @ v
    if upper:
        mask = v > 1e-300
        return float((av[mask] / v[mask]).max()) if np.any(mask) else 0.0
    best = 0.0
    vmax = v.max()
    for frac in (0.0, 1e-9, 1e-6, 1e-3, 1e-1):
        u = np.where(v > frac * vmax, v, 0.0)
        if not np.any(u > 0):
            continue
        au = w @ u
        mask = u > 0
        best = max(best, float((au[mask] / u[mask]).min()))
    return best


_OP_CACHE = {}


def transfer_pressure(model, t, depth=TRANSFER_DEPTH, pad=ESTIMATOR_FLOOR):
    """Certified [lo, hi] for P(t, X) on a hyperbolic Markov model.

    The floor pad widens the enclosure so that finite-n periodic-orbit
    estimators (whose bias is O(2^-n)) can be tested for containment even
    where the matrix brackets collapse to a point; padding never breaks
    enclosure of the true pressure.
    """
    key = (id(model), depth)
    if key not in _OP_CACHE:
        _OP_CACHE[key] = TransferOperator(model, depth=depth)
    lo, hi = _OP_CACHE[key].pressure_bracket(t)
    return lo - pad, hi + pad


_CYCLE_CACHE = {}


def _orbit_data(model, n):
    key = (id(model), n)
    if key not in _CYCLE_CACHE:
        data = []
        skip = _boundary_fixed_points(model)
        for word, orb in enumerate_periodic(model, n):
            if any(abs(orb.point - b) < 1e-9 for b in skip):
                continue
            data.append((orb.period, abs(orb.multiplier)))
        _CYCLE_CACHE[key] = data
    return _CYCLE_CACHE[key]


def _boundary_fixed_points(model):
    """Fixed points sitting on the model domain's boundary.

    Their unit masses form separate spectral components (the zero fixed
    point is delegated to fixed_point_pressure), so cycle sums for the
    model's own component exclude them.
    """
    out = []
    for b in model.domain:
        if abs(float(model.umap(b)) - b) < 1e-9:
            out.append(float(b))
    return out


def cycle_pressure(model, t, n=10):
    """Periodic-orbit estimate (1/n) log Z_n, no certificate.

    Z_n sums |Df^n|^(-t) over the fixed points of f^n in the model's own
    component: each located orbit of primitive period p contributes its p
    points with |Df^n| = the p-multiplier raised to n/p.
    """
    z = 0.0
    for p, mult in _orbit_data(model, n):
        if n % p:
            continue
        z += p * mult ** (-t * n / p)
    if z <= 0:
        raise NoRoot(f"empty cycle sum at n={n}")
    return math.log(z) / n


def lift_pressure(curve, K):
    """Pressure and slopes of the base map on a level's orbit: divide by K."""
    if K < 1:
        raise ParameterError("K must be >= 1")
    if K == 1:
        return curve
    ev = curve.evaluator

    def lifted(t):
        lo, hi = ev(t)
        return lo / K, hi / K

    return PressureCurve(
        component_id=curve.component_id, t_grid=curve.t_grid,
        lo=curve.lo / K, hi=curve.hi / K,
        slope_bracket=SlopeBracket(curve.slope_bracket.chi_min / K,
                                   curve.slope_bracket.chi_max / K),
        depth=curve.depth, evaluator=lifted, certified=curve.certified)


def _line_curve(component_id, chi, t_grid, pad=EXACT_PAD):
    """Exact zero-entropy curve -t*chi for an orbit-supported measure."""
    t_grid = np.asarray(t_grid, dtype=float)

    def ev(t):
        v = -t * chi
        return v - pad, v + pad

    vals = -t_grid * chi
    return PressureCurve(component_id=component_id, t_grid=t_grid,
                         lo=vals - pad, hi=vals + pad,
                         slope_bracket=SlopeBracket(chi, chi),
                         depth=0, evaluator=ev)


def _max_curves(cid, curves, t_grid):
    """Pointwise max of bracket curves (sup over a union of sets)."""
    evs = [c.evaluator for c in curves]

    def ev(t):
        los, his = zip(*(e(t) for e in evs))
        return max(los), max(his)

    lo = np.max([c.lo for c in curves], axis=0)
    hi = np.max([c.hi for c in curves], axis=0)
    chi_min = min(c.slope_bracket.chi_min for c in curves)
    chi_max = max(c.slope_bracket.chi_max for c in curves)
    return PressureCurve(component_id=cid, t_grid=t_grid, lo=lo, hi=hi,
                         slope_bracket=SlopeBracket(chi_min, chi_max),
                         depth=max(c.depth for c in curves), evaluator=ev,
                         certified=all(c.certified for c in curves))


def _transfer_curve(cid, model, t_grid, depth, lyap_n=10):
    op = TransferOperator(model, depth=depth)
    slope = (SlopeBracket(LOG2, LOG2) if op.exact_tent
             else lyapunov_bracket(op.model, lyap_n))

    def ev(t):
        return op.pressure_bracket(t)

    pts = np.array([ev(float(t)) for t in t_grid])
    return PressureCurve(component_id=cid, t_grid=np.asarray(t_grid),
                         lo=pts[:, 0], hi=pts[:, 1], slope_bracket=slope,
                         depth=depth, evaluator=ev)


def _chebyshev_topological_curve(cid, handle, t_grid, depth):
    """Deep Chebyshev-conjugate level: chord upper bound, matrix lower.

    Topological conjugacy pins h = log 2 and P(1) = 0; convexity of the
    pressure gives the chord (1-t) log 2 as an upper bound on [0, 1] and
    the slope bound via sup log|Dg| handles t < 0.  The lower edge uses
    the sup-weighted Perron root of the full-branch model: it stays
    finite on the non-hyperbolic full model and always under-counts, so
    it is a valid lower bound even with the loose endpoint tolerance a
    deep handle needs.
    """
    xs = np.linspace(0.0, 1.0, 2049)
    dmax = float(np.abs(np.asarray(handle.deriv(xs))).max()) * (1 + 1e-6)
    chi_hi = math.log(max(dmax, 1.0 + 1e-9))
    sub = None
    try:
        sub = markov_model(handle, hole=None, endpoint_tol=2e-3)
        sub = refine_model(sub, min(depth, 6))
        rows, cols = np.nonzero(sub.transitions)
        d_lo = np.array([max(b[0], 1e-300) for b in sub.deriv_brackets])[rows]
        d_hi = np.array([b[1] for b in sub.deriv_brackets])[rows]
    except Exception:
        rows = None

    def lo_side(t):
        if rows is None or rows.size == 0:
            return -abs(t) * chi_hi - LOG2
        with np.errstate(over="ignore"):
            w1, w2 = d_lo ** (-t), d_hi ** (-t)
            w = np.minimum(w1, w2)
        if not np.all(np.isfinite(w)):
            return -abs(t) * chi_hi - LOG2
        rho = _sparse_perron(rows, cols, w, sub.size, upper=False)
        return math.log(rho) if rho > 0 else -abs(t) * chi_hi - LOG2

    def ev(t):
        if t <= 0.0:
            hi = LOG2 - t * chi_hi
        elif t <= 1.0:
            hi = (1.0 - t) * LOG2
        else:
            hi = 0.0
        lo = max(lo_side(t), -abs(t) * chi_hi - LOG2)
        return min(lo, hi), hi + EXACT_PAD

    pts = np.array([ev(float(t)) for t in t_grid])
    chi_lo_set = 1e-3
    return PressureCurve(component_id=cid, t_grid=np.asarray(t_grid),
                         lo=pts[:, 0], hi=pts[:, 1],
                         slope_bracket=SlopeBracket(chi_lo_set, chi_hi),
                         depth=depth, evaluator=ev)


def component_curve(comp, t_grid=None, depth=TRANSFER_DEPTH):
    """Bracket curve of one spectral component, lifted to base-map units.

    Returns None for components excluded from the pressure (superstable
    terminal attractors under the Julia-set restriction).
    """
    if t_grid is None:
        t_grid = default_t_grid()
    t_grid = np.asarray(t_grid, dtype=float)
    K = comp.cumulative_period

    if comp.kind == "fixed_point_zero":
        return _line_curve(comp.label, comp.exact_exponent, t_grid)

    if comp.kind == "hyperbolic_level":
        parts = []
        if comp.model is not None and comp.model.size > 0:
            try:
                parts.append(_transfer_curve(comp.label, comp.model,
                                             t_grid, depth))
            except NonHyperbolic:
                pass
        if comp.boundary_orbit is not None:
            chi_b = comp.boundary_orbit.exponent
            if chi_b > 0:
                parts.append(_line_curve(f"{comp.label}|boundary", chi_b,
                                         t_grid))
        if not parts:
            return None
        level = parts[0] if len(parts) == 1 else _max_curves(comp.label,
                                                             parts, t_grid)
        return lift_pressure(level, K)

    # terminal components
    if comp.superstable_excluded:
        return None
    if comp.chebyshev_smooth:
        level = _transfer_curve(comp.label, comp.model, t_grid, depth)
        return lift_pressure(level, K)
    if comp.chebyshev_topological:
        handle = comp.model.umap
        level = _chebyshev_topological_curve(comp.label, handle, t_grid, depth)
        return lift_pressure(level, K)
    # approximate terminal: lower-bound curve only, uncertified
    if comp.model is not None and comp.model.size > 0:
        try:
            level = _transfer_curve(comp.label, comp.model, t_grid,
                                    max(4, depth // 2))
            level = PressureCurve(
                component_id=comp.label, t_grid=level.t_grid, lo=level.lo,
                hi=level.hi, slope_bracket=level.slope_bracket,
                depth=level.depth, evaluator=level.evaluator, certified=False)
            return lift_pressure(level, K)
        except NonHyperbolic:
            return None
    return None


# ---------------------------------------------------------------------------
# assembly, crossings, transitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AssembledPressure:
    """Pointwise max over component curves with the active-component map."""

    curve: PressureCurve
    components: tuple                # the contributing PressureCurves
    active: tuple                    # tuple of active-id tuples per grid t

    def active_at(self, t):
        los, his = {}, {}
        for c in self.components:
            lo, hi = c.bracket_at(t)
            los[c.component_id], his[c.component_id] = lo, hi
        best_lo = max(los.values())
        return tuple(cid for cid, hi in his.items() if hi >= best_lo - 1e-15)


def assemble(curves, t_grid=None):
    """Full pressure bracket: pointwise max of component brackets."""
    curves = [c for c in curves if c is not None]
    if not curves:
        raise ParameterError("no component curves to assemble")
    if t_grid is None:
        t_grid = curves[0].t_grid
    t_grid = np.asarray(t_grid, dtype=float)
    evs = [c.evaluator for c in curves]

    def ev(t):
        los, his = zip(*(e(t) for e in evs))
        return max(los), max(his)

    if not all(c.t_grid.shape == t_grid.shape
               and np.allclose(c.t_grid, t_grid) for c in curves):
        raise ParameterError("component curves must share the t grid")
    lo = np.max([c.lo for c in curves], axis=0)
    hi = np.max([c.hi for c in curves], axis=0)
    chi_min = min(c.slope_bracket.chi_min for c in curves)
    chi_max = max(c.slope_bracket.chi_max for c in curves)
    assembled = PressureCurve(
        component_id="assembled", t_grid=t_grid, lo=lo, hi=hi,
        slope_bracket=SlopeBracket(chi_min, chi_max),
        depth=max(c.depth for c in curves), evaluator=ev,
        certified=all(c.certified for c in curves))
    active = []
    for i in range(t_grid.size):
        ids = tuple(c.component_id for c in curves if c.hi[i] >= lo[i] - 1e-15)
        active.append(ids)
    return AssembledPressure(curve=assembled, components=tuple(curves),
                             active=tuple(active))


def find_crossing(curve_a, curve_b, t_range=None, width_target=None):
    """Crossing of two bracket curves under the bounded-slope criterion.

    curve_a must be the steeper curve (more negative slopes): the kink is
    certified when the slope brackets are disjoint.  Bisection runs on the
    bracket midpoints of the difference.
    """
    sa, sb = curve_a.slope_bracket, curve_b.slope_bracket
    # slopes of the curves are [-chi_max, -chi_min]
    gap = sb.chi_min - sa.chi_max      # should be < 0 when a is steeper
    certified = sa.chi_min > sb.chi_max
    if t_range is None:
        t_lo = max(curve_a.t_grid[0], curve_b.t_grid[0])
        t_hi = min(curve_a.t_grid[-1], curve_b.t_grid[-1])
    else:
        t_lo, t_hi = t_range

    def diff(t):
        return curve_a.midpoint(t) - curve_b.midpoint(t)

    d_lo, d_hi = diff(t_lo), diff(t_hi)
    if d_lo == 0.0 and d_hi == 0.0:
        raise NoSignChange("curves coincide on the range")
    if d_lo * d_hi > 0:
        raise NoSignChange(
            f"no sign change of the midpoint difference on "
            f"[{t_lo}, {t_hi}]: {d_lo:.3e} .. {d_hi:.3e}")
    lo_t, hi_t, fa = t_lo, t_hi, d_lo
    # trisect toward the sign change until the kink bracket target is met
    for _ in range(200):
        m1 = lo_t + (hi_t - lo_t) / 3.0
        m2 = hi_t - (hi_t - lo_t) / 3.0
        v1 = diff(m1)
        if fa * v1 <= 0:
            hi_t = m1
        else:
            v2 = diff(m2)
            if v1 * v2 <= 0:
                lo_t, hi_t, fa = m1, m2, v1
            else:
                lo_t, fa = m2, v2
        slope_gap = max(sa.chi_min - sb.chi_max, 1e-12)
        wa = curve_a.width_at(0.5 * (lo_t + hi_t))
        wb = curve_b.width_at(0.5 * (lo_t + hi_t))
        target = width_target or max(CROSSING_WIDTH, (wa + wb) / slope_gap)
        if hi_t - lo_t <= target:
            break
    t_mid = 0.5 * (lo_t + hi_t)
    gap_eff = sa.chi_min - sb.chi_max
    if not certified:
        local_gap = _local_slope_separation(curve_a, curve_b, t_mid)
        if local_gap is not None:
            certified = True
            gap_eff = local_gap
    wa = curve_a.width_at(t_mid)
    wb = curve_b.width_at(t_mid)
    if gap_eff > 0:
        pad = max(CROSSING_WIDTH, (wa + wb) / gap_eff)
    else:
        pad = hi_t - lo_t + wa + wb   # no slope control: bisection cell only
    t_star_lo = min(lo_t, t_mid - pad)
    t_star_hi = max(hi_t, t_mid + pad)
    pa = curve_a.bracket_at(t_mid)
    pb = curve_b.bracket_at(t_mid)
    if not certified:
        classification = "suspected"
    else:
        classification = "kink-certified"
    return PhaseTransitionReport(
        t_star_lo=t_star_lo, t_star_hi=t_star_hi,
        left_component=curve_a.component_id,
        right_component=curve_b.component_id,
        left_slope=(-sa.chi_max, -sa.chi_min),
        right_slope=(-sb.chi_max, -sb.chi_min),
        pressure_lo=min(pa[0], pb[0]), pressure_hi=max(pa[1], pb[1]),
        classification=classification)


def _local_slope_separation(curve_a, curve_b, t_mid, deltas=(0.02, 0.05, 0.1)):
    """Local kink certificate from convexity; returns the slope gap or None.

    A restricted pressure is convex, so its slope on [t-d, t+d] is capped
    by the bracketed difference quotient over [t+d, t+2d] (and floored by
    the one over [t-2d, t-d]).  Separated local quotients let the
    bounded-slope lemma apply on the window around the crossing.
    """
    best = None
    for d in deltas:
        a2, a1 = curve_a.bracket_at(t_mid + 2 * d), curve_a.bracket_at(t_mid + d)
        slope_a_hi = (a2[1] - a1[0]) / d
        b1, b2 = curve_b.bracket_at(t_mid - 2 * d), curve_b.bracket_at(t_mid - d)
        slope_b_lo = (b2[0] - b1[1]) / d
        gap = slope_b_lo - slope_a_hi
        if gap > 1e-12 and (best is None or gap > best):
            best = gap
    return best


def transitions(umap, t_range=(T_GRID_MIN, T_GRID_MAX), depth=TRANSFER_DEPTH,
                tower=None, grid_points=T_GRID_POINTS):
    """All argmax switches of the assembled pressure over the t range."""
    if tower is None:
        tower = auto_tower(umap)
    comps = spectral_components(umap, tower)
    t_grid = np.linspace(t_range[0], t_range[1], grid_points)
    curves = [component_curve(c, t_grid, depth=depth) for c in comps]
    curves = [c for c in curves if c is not None]
    asm = assemble(curves, t_grid)

    # locate switch cells: the argmax (by midpoint) changes across the cell
    mids = np.stack([0.5 * (c.lo + c.hi) for c in curves], axis=1)
    arg = np.argmax(mids, axis=1)
    reports = []
    for i in range(len(t_grid) - 1):
        if arg[i] == arg[i + 1]:
            continue
        ca, cb = curves[arg[i]], curves[arg[i + 1]]
        try:
            rep = find_crossing(ca, cb, (float(t_grid[i]),
                                         float(t_grid[i + 1])))
        except NoSignChange:
            continue
        reports.append(rep)
    return TransitionScan(umap=umap, tower=tower, components=tuple(comps),
                          curves=tuple(curves), assembled=asm,
                          reports=tuple(sorted(reports,
                                               key=lambda r: r.t_star)))


@dataclass(frozen=True)
class TransitionScan:
    """Everything the transition pipeline produced, for reports and tests."""

    umap: object
    tower: object
    components: tuple
    curves: tuple
    assembled: AssembledPressure
    reports: tuple


def bowen_dimension(model_or_curve, component_id="", depth=TRANSFER_DEPTH,
                    t_max=1.2):
    """Bracket around the root of the restricted pressure in (0, t_max].

    The upper dimension edge is where the upper pressure bracket crosses
    zero, the lower edge where the lower bracket does.
    """
    if isinstance(model_or_curve, PressureCurve):
        ev = model_or_curve.evaluator
        cid = component_id or model_or_curve.component_id
    elif isinstance(model_or_curve, MarkovModel):
        op = TransferOperator(model_or_curve, depth=depth)
        ev = op.pressure_bracket
        cid = component_id or "model"
    else:
        raise ParameterError("need a MarkovModel or PressureCurve")

    lo0, hi0 = ev(1e-9)
    if hi0 <= 0:
        return DimensionBracket(d_lo=0.0, d_hi=0.0, component_id=cid)
    lo_end, hi_end = ev(t_max)
    if lo_end > 0:
        raise NoRoot(f"pressure still positive at t={t_max}")

    def bisect(side):
        a, b = 1e-9, t_max
        fa = ev(a)[side]
        if fa <= 0:
            return 0.0
        for _ in range(60):
            m = 0.5 * (a + b)
            fm = ev(m)[side]
            if fm > 0:
                a = m
            else:
                b = m
        return 0.5 * (a + b)

    d_hi = bisect(1)   # root of the upper bracket: dimension cannot exceed
    d_lo = bisect(0)   # root of the lower bracket
    if d_lo > d_hi:
        d_lo, d_hi = d_hi, d_lo
    return DimensionBracket(d_lo=d_lo, d_hi=d_hi, component_id=cid)


# ---------------------------------------------------------------------------
# negative-spectrum bound and cascade inequalities
# ---------------------------------------------------------------------------

def negt_bound_check(a, entropy_depth=16, slack=1e-3):
    """Locate the negative-spectrum transition and check the paper bound.

    The zero fixed point's line -t log a crosses the core pressure at some
    t* <= -h/(log a - h).  The core curve is bracketed by the Ruelle chord
    h_lo(1 - t) from below and h_hi - t*chi_hi from above, with chi_hi the
    log of the derivative sup on the core (strictly below log a off the
    Chebyshev endpoint).
    """
    m = QuadraticMap(a)
    ss = superstable_period(m, k_max=64)
    if ss is not None:
        raise SuperstableParameter(
            f"a={a} is superstable (period {ss}); pressure as defined is "
            "infinite for t > 0 and the bound check is skipped")
    h = top_entropy(m, depth=entropy_depth)
    if h.lo <= 0:
        raise ParameterError(f"entropy lower bound not positive at a={a}")
    log_a = math.log(a)

    if abs(a - 4.0) < 1e-12:
        # smooth tent conjugacy: core curve is exactly (1-t) log 2
        t_star = -1.0
        bracket = (t_star - 1e-9, t_star + 1e-9)
        chi_hi = LOG2
    else:
        c_lo, c_hi = core_interval(m)
        dmax = max(abs(m.deriv(c_lo)), abs(m.deriv(c_hi)))
        chi_hi = math.log(dmax)
        if chi_hi >= log_a - 1e-9:
            raise ParameterError("no slope gap: derivative sup reaches a")
        # line vs chords: both crossings are exact line intersections
        t_upper = -h.lo / (log_a - h.lo)          # Ruelle chord crossing
        t_lower = -h.hi / (log_a - chi_hi)        # upper-chord crossing
        bracket = (min(t_lower, t_upper), max(t_lower, t_upper))
        t_star = 0.5 * (bracket[0] + bracket[1])
    bound = -h.lo / (log_a - h.lo)
    ok = bracket[1] <= bound + slack
    return {
        "a": a,
        "h_lo": h.lo, "h_hi": h.hi,
        "chi_hi": chi_hi,
        "t_star_lo": bracket[0], "t_star_hi": bracket[1],
        "bound": bound,
        "margin": bound + slack - bracket[1],
        "ok": bool(ok),
    }


def verify_inequalities(umap, tower, depth=TRANSFER_DEPTH, lyap_n=10):
    """Bracket verdicts for the exponent and dimension chains of a tower.

    The exponent chain compares log|Df(0)| with the lifted exponent range
    of each principal level, and consecutive levels via the half factor;
    the dimension chain needs each deeper set within distance (1 - HD) of
    dimension one above its predecessor.
    """
    comps = spectral_components(umap, tower)
    principal = [c for c in comps
                 if c.kind == "hyperbolic_level" and (c.level_type or 0) >= 3]
    if len(principal) < 2:
        raise ParameterError("need a tower with at least two principal levels")
    log_a = math.log(umap.a)
    data = []
    for c in principal:
        model = ensure_hyperbolic(c.model)
        op_model = refine_model(model, max(0, depth - model.refinement_depth))
        lyap = lyapunov_bracket(op_model, lyap_n)
        K = c.cumulative_period
        dim = bowen_dimension(op_model, component_id=c.label, depth=0)
        data.append({
            "label": c.label, "K": K,
            "chi_lo": lyap.chi_min / K, "chi_hi": lyap.chi_max / K,
            "boundary_chi": (c.boundary_orbit.exponent / K
                             if c.boundary_orbit else None),
            "hd_lo": dim.d_lo, "hd_hi": dim.d_hi,
        })

    def verdict(strict_ok, strict_fail):
        if strict_ok:
            return "holds-certified"
        if strict_fail:
            return "fails-certified"
        return "undecided"

    chis = []
    for i in range(len(data) - 1):
        xi, xj = data[i], data[i + 1]
        v1 = verdict(log_a > xi["chi_hi"], log_a < xi["chi_lo"])
        v2 = verdict(xi["chi_lo"] > 0.5 * xj["chi_hi"],
                     (xi["boundary_chi"] is not None
                      and xi["boundary_chi"] < 0.5 * xj["chi_lo"]))
        chis.append({
            "levels": (xi["label"], xj["label"]),
            "log_Df0_gt_chihi": v1,
            "chilo_gt_half_next_chihi": v2,
            "values": {
                "log_a": log_a, "chi_hi_i": xi["chi_hi"],
                "chi_lo_i": xi["chi_lo"], "chi_hi_next": xj["chi_hi"],
            },
        })
    hds = []
    for i in range(len(data) - 1):
        xi, xj = data[i], data[i + 1]
        v1 = verdict(xj["hd_hi"] < 1.0, xj["hd_lo"] >= 1.0)
        v2 = verdict(1.0 + xi["hd_hi"] < 2.0 * xj["hd_lo"],
                     1.0 + xi["hd_lo"] > 2.0 * xj["hd_hi"])
        hds.append({
            "levels": (xi["label"], xj["label"]),
            "hd_next_lt_1": v1,
            "gap_dominates": v2,
            "values": {
                "hd_i": (xi["hd_lo"], xi["hd_hi"]),
                "hd_next": (xj["hd_lo"], xj["hd_hi"]),
            },
        })
    all_checks = [c["log_Df0_gt_chihi"] for c in chis] \
        + [c["chilo_gt_half_next_chihi"] for c in chis] \
        + [h["hd_next_lt_1"] for h in hds] + [h["gap_dominates"] for h in hds]
    return {
        "levels": data,
        "chis": chis,
        "hds": hds,
        "certified": all(v == "holds-certified" for v in all_checks),
        "any_failure": any(v == "fails-certified" for v in all_checks),
    }
