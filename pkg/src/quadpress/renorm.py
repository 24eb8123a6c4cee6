"""Restrictive intervals, renormalization towers, parameter-window search.

A restrictive interval J of period k is detected from the fixed points of
f^k: the boundary of J is a periodic point q together with its symmetric
partner (same image), and the defining conditions are then verified on
interval images.  The return map f^k restricted to J, affinely rescaled to
[0,1], is again unimodal and feeds every map-core algorithm unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguousFixedPoint, NotFound, ParameterError
from .maps import (PAD, POINT_TOLERANCE, PeriodicOrbit, QuadraticMap,
                   branch_preimage, iterate, itinerary_of, superstable_period)
from .entropy import TurningTree

OVERLAP_TOL = 1e-9         # images may share at most a point, up to this
CONTAIN_TOL = 1e-9         # slack for f^k(J) inside J
PARABOLIC_TOL = 1e-3       # |multiplier| within this of 1 is flagged
WINDOW_SAMPLES = 16        # build_tower must succeed at this many samples


def interval_image(umap, lo, hi):
    """Exact hull of f([lo, hi]) for a unimodal handle, padded."""
    vals = [float(umap(lo)), float(umap(hi))]
    if lo < umap.c < hi:
        vals.append(float(umap(umap.c)))
    return min(vals) - PAD, max(vals) + PAD


def orbit_of_interval(umap, lo, hi, n):
    """[J, f(J), ..., f^(n-1)(J)] as hull intervals."""
    out = [(lo, hi)]
    for _ in range(n - 1):
        out.append(interval_image(umap, *out[-1]))
    return out


def core_interval(umap):
    """Hull of the critical value and its image: the dynamical core.

    For the quadratic family this is [f^2(c), f(c)], the smallest interval
    carrying every measure except the one at the fixed boundary point.
    """
    v = float(umap(umap.c))
    w = float(umap(v))
    return (v, w) if v <= w else (w, v)


@dataclass(frozen=True)
class RestrictiveInterval:
    """Interval J around c with period-k return and non-overlapping images."""

    lo: float
    hi: float
    period: int
    boundary_orbit: PeriodicOrbit
    parabolic: bool = False

    @property
    def endpoints(self):
        return (self.lo, self.hi)

    def contains(self, x):
        return self.lo <= x <= self.hi


def _fixed_points_of_iterate(umap, k, budget=1 << 20, per_lap=8):
    """All fixed points of f^k via a sub-lap grid scan plus bisection.

    Laps are subdivided: a monotone increasing lap can cross the identity
    several times (and saddle-node pairs or superstable laps leave the lap
    endpoints signless), so endpoint signs alone are not enough.
    """
    tree = TurningTree(umap, budget=budget)
    while tree.depth < k:
        tree.deepen()
    e = np.unique(np.concatenate([[0.0], tree.points, [1.0]]))
    offs = np.linspace(0.0, 1.0, per_lap + 1)[:-1]
    grid = (e[:-1, None] + np.diff(e)[:, None] * offs[None, :]).ravel()
    grid = np.append(grid, 1.0)
    # geometric probes around c: the boundary fixed point of a restrictive
    # interval sits in a sign dip at the window's scale, which a uniform
    # lap grid can straddle near superstable parameters
    w = min(umap.c, 1.0 - umap.c)
    probes = umap.c + np.concatenate([w * 2.0 ** -np.arange(1, 44),
                                      -w * 2.0 ** -np.arange(1, 44)])
    grid = np.unique(np.concatenate([grid, probes]))
    h = np.asarray(iterate(umap, grid, k), dtype=float) - grid
    roots = [float(grid[i]) for i in np.nonzero(np.abs(h) < 1e-13)[0]]
    sgn = np.sign(h)
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        lo_, hi_, fa = float(grid[i]), float(grid[i + 1]), float(h[i])
        for _ in range(80):
            mid = 0.5 * (lo_ + hi_)
            fm = iterate(umap, mid, k) - mid
            if fa * fm <= 0:
                hi_ = mid
            else:
                lo_, fa = mid, fm
        roots.append(0.5 * (lo_ + hi_))
    out = []
    for r in sorted(roots):
        if not out or r - out[-1] > 1e-11:
            out.append(r)
    return out


def _symmetric_point(umap, q):
    """The point on the other branch of c with the same image as q."""
    other = "R" if q < umap.c else "L"
    y = float(umap(q))
    x, ok = branch_preimage(umap, other, y, tol=1e-12)
    return float(x) if ok else None


def _primitive_period(umap, q, k, tol=POINT_TOLERANCE):
    for d in range(1, k + 1):
        if k % d == 0 and abs(iterate(umap, q, d) - q) <= tol:
            return d
    return k


def detect_restrictive(umap, k_max, parabolic_tol=PARABOLIC_TOL):
    """All restrictive intervals of period <= k_max, minimal period first.

    Candidates are symmetric intervals [q, q_hat] around c built from fixed
    points q of f^k; the three defining conditions (critical point inside,
    pairwise image overlap at most a point, period-k return into J) are
    verified on padded interval hulls.
    """
    if not 2 <= k_max <= 16:
        raise ParameterError("k_max must be in [2, 16]")
    found = []
    for k in range(2, k_max + 1):
        for q in _fixed_points_of_iterate(umap, k):
            if abs(q - umap.c) < 1e-7:
                continue
            qh = _symmetric_point(umap, q)
            if qh is None:
                continue
            lo, hi = (q, qh) if q < qh else (qh, q)
            if not lo + 1e-12 < umap.c < hi - 1e-12:
                continue
            if any(abs(lo - r.lo) < 1e-9 and abs(hi - r.hi) < 1e-9
                   for r in found):
                continue
            images = orbit_of_interval(umap, lo, hi, k)
            ok = True
            for i in range(k):
                for j in range(i + 1, k):
                    over = (min(images[i][1], images[j][1])
                            - max(images[i][0], images[j][0]))
                    if over > OVERLAP_TOL:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            ret_lo, ret_hi = interval_image(umap, *images[-1])
            if ret_lo < lo - CONTAIN_TOL or ret_hi > hi + CONTAIN_TOL:
                continue
            p = _primitive_period(umap, q, k)
            mult = 1.0
            y = q
            for _ in range(p):
                mult *= float(umap.deriv(y))
                y = float(umap(y))
            word = itinerary_of(umap, q, p).symbols
            orbit_rec = PeriodicOrbit(word=word, point=q, period=p,
                                      multiplier=mult)
            kmult = mult ** (k // p)
            found.append(RestrictiveInterval(
                lo=lo, hi=hi, period=k, boundary_orbit=orbit_rec,
                parabolic=abs(abs(kmult) - 1.0) <= parabolic_tol))
    return sorted(found, key=lambda r: r.period)


class RenormalizedMap:
    """Affine rescaling of f^k restricted to J, as a unimodal handle on [0,1].

    Evaluation is lazy composition: one call costs cumulative_period base
    evaluations.  The derivative is the plain chain-rule product (affine
    factors cancel).
    """

    def __init__(self, base, lo, hi, k):
        if not (lo < base.c < hi):
            raise ParameterError("J must contain the critical point")
        self.base = base
        self.lo = float(lo)
        self.hi = float(hi)
        self.k = int(k)
        self.width = self.hi - self.lo
        self.c = (base.c - self.lo) / self.width
        self.depth = getattr(base, "depth", 0) + 1
        self.cumulative_period = k * getattr(base, "cumulative_period", 1)

    def to_base(self, u):
        return self.lo + np.asarray(u, dtype=float) * self.width

    def from_base(self, x):
        return (np.asarray(x, dtype=float) - self.lo) / self.width

    def __call__(self, u):
        x = self.to_base(u)
        for _ in range(self.k):
            x = self.base(x)
        y = (x - self.lo) / self.width
        if np.ndim(u) == 0:
            return float(np.clip(y, 0.0, 1.0))
        return np.clip(y, 0.0, 1.0)

    def deriv(self, u):
        x = self.to_base(u)
        prod = np.ones_like(x)
        for _ in range(self.k):
            prod = prod * self.base.deriv(x)
            x = self.base(x)
        if np.ndim(u) == 0:
            return float(prod)
        return prod


def renormalize(umap, restrictive, k=None):
    """Rescaled return map on a restrictive interval (orientation-preserving)."""
    if isinstance(restrictive, RestrictiveInterval):
        lo, hi, k = restrictive.lo, restrictive.hi, restrictive.period
    else:
        lo, hi = restrictive
        if k is None:
            raise ParameterError("period k required with raw endpoints")
    return RenormalizedMap(umap, lo, hi, k)


def fixed_points(umap, grid_n=4096, point_tol=1e-9, parabolic_tol=1e-6):
    """Fixed points of a unimodal handle on [0,1] by grid + bisection.

    Raises AmbiguousFixedPoint when g - id dips below the parabolic
    tolerance without crossing: a saddle-node contact cannot be counted.
    """
    xs = np.linspace(0.0, 1.0, grid_n + 1)
    hv = np.asarray(umap(xs), dtype=float) - xs
    roots = []
    if abs(hv[0]) <= point_tol:
        roots.append(0.0)
    sgn = np.sign(hv)
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        lo_, hi_ = float(xs[i]), float(xs[i + 1])
        fa = float(hv[i])
        for _ in range(80):
            mid = 0.5 * (lo_ + hi_)
            fm = float(umap(mid)) - mid
            if fa * fm <= 0:
                hi_ = mid
            else:
                lo_, fa = mid, fm
        roots.append(0.5 * (lo_ + hi_))
    if abs(hv[-1]) <= point_tol:
        roots.append(1.0)
    out = []
    for r in sorted(roots):
        if not out or r - out[-1] > 1e-8:
            out.append(r)
    # near-tangency away from every located root: parabolic ambiguity
    k = int(np.argmin(np.abs(hv)))
    if abs(hv[k]) <= parabolic_tol:
        x_dip = float(xs[k])
        if not out or min(abs(x_dip - r) for r in out) > 1e-3:
            raise AmbiguousFixedPoint(
                f"|g(x)-x| dips to {abs(hv[k]):.2e} near x={x_dip:.6f} "
                "without a sign change")
    return out


def is_trivial(umap):
    """True iff the handle has a unique fixed point on [0,1]."""
    return len(fixed_points(umap)) == 1


@dataclass(frozen=True)
class TowerLevel:
    """One renormalization level, in its parent's coordinates."""

    kind: int                       # return period at this level
    restrictive: RestrictiveInterval
    handle: RenormalizedMap         # rescaled return map of this level
    cumulative_period: int          # base-map iterates per handle iterate
    base_interval: tuple            # J mapped back to base coordinates
    trivial: bool


@dataclass(frozen=True)
class RenormalizationTower:
    """Nested simple renormalizations of the base map."""

    base: QuadraticMap
    requested: tuple                # requested level types
    levels: tuple                   # TowerLevel records, shallow to deep
    failure_index: int | None = None

    @property
    def complete(self):
        return self.failure_index is None

    @property
    def depth(self):
        return len(self.levels)

    @property
    def cumulative_periods(self):
        return tuple(lv.cumulative_period for lv in self.levels)

    def deepest_handle(self):
        return self.levels[-1].handle if self.levels else self.base


def parse_combinatorics(combinatorics):
    """(a1, b1, a2, b2, ...) -> flat list of level return periods.

    a_i >= 2 are simple-renormalization types, b_i >= 0 count the
    period-doubling levels inserted after each a_i.
    """
    seq = tuple(int(v) for v in combinatorics)
    if not seq:
        raise ParameterError("combinatorics must be nonempty")
    types = []
    for pos, v in enumerate(seq):
        if pos % 2 == 0:
            if v < 2:
                raise ParameterError(f"type entries must be >= 2, got {v}")
            types.append(v)
        else:
            if v < 0:
                raise ParameterError(f"doubling counts must be >= 0, got {v}")
            types.extend([2] * v)
    return types


def build_tower(umap, combinatorics, depth=None):
    """Tower with prescribed simple combinatorics; partial on failure.

    Each level requires the current handle's minimal restrictive period to
    equal the requested type; the failure index records the first level
    where detection fails.
    """
    types = parse_combinatorics(combinatorics)
    if depth is not None:
        types = types[:depth]
    levels = []
    current = umap
    base_lo, base_w = 0.0, 1.0
    failure = None
    for i, t in enumerate(types):
        try:
            cands = detect_restrictive(current, k_max=max(t, 2))
        except Exception:
            cands = []
        match = next((r for r in cands if r.period == t), None)
        minimal_ok = bool(cands) and cands[0].period >= t
        if match is None or not minimal_ok:
            failure = i
            break
        handle = RenormalizedMap(current, match.lo, match.hi, t)
        lo_b = base_lo + match.lo * base_w
        hi_b = base_lo + match.hi * base_w
        try:
            triv = is_trivial(handle)
        except AmbiguousFixedPoint:
            triv = False
        levels.append(TowerLevel(
            kind=t, restrictive=match, handle=handle,
            cumulative_period=handle.cumulative_period,
            base_interval=(lo_b, hi_b), trivial=triv))
        base_lo, base_w = lo_b, hi_b - lo_b
        current = handle
    return RenormalizationTower(base=umap, requested=tuple(types),
                                levels=tuple(levels), failure_index=failure)


def auto_tower(umap, k_cap=8, max_depth=6):
    """Detect the tower of minimal restrictive periods, level by level."""
    levels = []
    current = umap
    base_lo, base_w = 0.0, 1.0
    for _ in range(max_depth):
        if superstable_period(current, k_max=1) is not None:
            break   # critical point fixed: no further renormalization
        cands = detect_restrictive(current, k_max=k_cap)
        if not cands:
            break
        match = cands[0]
        handle = RenormalizedMap(current, match.lo, match.hi, match.period)
        lo_b = base_lo + match.lo * base_w
        hi_b = base_lo + match.hi * base_w
        try:
            triv = is_trivial(handle)
        except AmbiguousFixedPoint:
            triv = False
        levels.append(TowerLevel(
            kind=match.period, restrictive=match, handle=handle,
            cumulative_period=handle.cumulative_period,
            base_interval=(lo_b, hi_b), trivial=triv))
        base_lo, base_w = lo_b, hi_b - lo_b
        current = handle
    kinds = tuple(lv.kind for lv in levels)
    return RenormalizationTower(base=umap, requested=kinds,
                                levels=tuple(levels), failure_index=None)


@dataclass(frozen=True)
class ParameterWindow:
    """Sampled inner approximation of a simple-renormalization window."""

    combinatorics: tuple
    interval: tuple
    witness: float
    samples_checked: int = WINDOW_SAMPLES


def _pattern_ok(handle, t, tol=1e-10):
    """Simple-window pattern: g(c) on one side, g^i(c) on the other, i<t."""
    if t == 2:
        return True
    c = handle.c
    y = float(handle(c))
    s1 = 1.0 if y > c else -1.0
    for _ in range(2, t):
        y = float(handle(y))
        if (y - c) * s1 > -tol:
            return False
    return True


def _deepest_prefix_handle(base, prefix_types):
    """Build the prefix tower; returns the deepest handle or None."""
    if not prefix_types:
        return base
    tower = build_tower(base, _types_to_comb(prefix_types))
    if not tower.complete or tower.depth < len(prefix_types):
        return None
    return tower.deepest_handle()


def _types_to_comb(types):
    """Flat level types back to an (a, b, a, b, ...) combinatorics tuple."""
    comb = []
    i, n = 0, len(types)
    while i < n:
        comb.append(types[i])     # a type entry
        i += 1
        b = 0
        while i < n and types[i] == 2:
            b += 1
            i += 1
        if i < n:                 # another type follows: b is positional
            comb.append(b)
        elif b:
            comb.append(b)
    return tuple(comb)


def window_search(combinatorics, a_range, samples=48, expand_steps=24):
    """Window of parameters realizing the combinatorics, with a witness.

    Bisects the superstable condition g^t(c) = c of the deepest level over
    the sub-window where the shallower combinatorics already hold, then
    expands around the witness to a maximal sampled interval on which the
    full tower certifies.
    """
    types = parse_combinatorics(combinatorics)
    prefix, t = types[:-1], types[-1]
    a_lo, a_hi = float(a_range[0]), float(a_range[1])
    if not (3.0 <= a_lo < a_hi <= 4.0):
        raise ParameterError("a_range must lie inside [3, 4]")
    if prefix:
        sub = window_search(_types_to_comb(prefix), a_range,
                            samples=samples, expand_steps=expand_steps)
        a_lo, a_hi = sub.interval

    def psi(a):
        handle = _deepest_prefix_handle(QuadraticMap(a), prefix)
        if handle is None:
            return None
        return float(iterate(handle, handle.c, t)) - handle.c

    grid = np.linspace(a_lo, a_hi, samples)
    vals = [psi(float(a)) for a in grid]
    witness = None
    for i in range(samples - 1):
        va, vb = vals[i], vals[i + 1]
        if va is None or vb is None or va * vb > 0:
            continue
        lo_, hi_, fa = float(grid[i]), float(grid[i + 1]), va
        dead = False
        for _ in range(60):
            mid = 0.5 * (lo_ + hi_)
            fm = psi(mid)
            if fm is None:
                dead = True
                break
            if fa * fm <= 0:
                hi_ = mid
            else:
                lo_, fa = mid, fm
        if dead:
            continue
        cand = 0.5 * (lo_ + hi_)
        handle = _deepest_prefix_handle(QuadraticMap(cand), prefix)
        if handle is None or not _pattern_ok(handle, t):
            continue
        if build_tower(QuadraticMap(cand), combinatorics).complete:
            witness = cand
            break
    if witness is None:
        raise NotFound(
            f"no superstable witness for {tuple(combinatorics)} in "
            f"[{a_range[0]}, {a_range[1]}]")

    def tower_ok(a):
        try:
            return build_tower(QuadraticMap(a), combinatorics).complete
        except Exception:
            return False

    # expand to a maximal sampled interval around the witness
    step = (a_hi - a_lo) / 256.0
    w_lo = w_hi = witness
    for sgn in (-1.0, 1.0):
        h = step
        edge = witness
        for _ in range(expand_steps):
            cand = edge + sgn * h
            if a_lo <= cand <= a_hi and tower_ok(cand):
                edge = cand
                h *= 1.6
            else:
                h *= 0.5
                if h < step / 64:
                    break
        if sgn < 0:
            w_lo = edge
        else:
            w_hi = edge
    # final certification on equispaced samples; shrink toward the witness
    # until every sample passes
    for _ in range(10):
        checks = np.linspace(w_lo, w_hi, WINDOW_SAMPLES)
        if all(tower_ok(float(x)) for x in checks):
            break
        w_lo = witness - 0.6 * (witness - w_lo)
        w_hi = witness + 0.6 * (w_hi - witness)
    return ParameterWindow(combinatorics=tuple(combinatorics),
                           interval=(w_lo, w_hi), witness=witness)


def cascade_search(combinatorics, a_range=(3.5, 4.0), samples=64):
    """Window search over a default base range (cascade construction)."""
    return window_search(combinatorics, a_range, samples=samples)


def chebyshev_end_search(combinatorics, window, edge_steps=48, tol=1e-6):
    """Parameter in the window where the deepest level is full-branch.

    The deepest renormalized map sweeps a full family across its window:
    trivial at the saddle-node end, superstable at the witness, and
    Chebyshev-conjugate at the boundary-crisis end where its critical
    value reaches the far fixed endpoint (entropy log 2 at level scale).
    The crisis end coincides with the edge of tower validity, so it is
    located by bisecting tower completeness outward from the witness.
    """
    from .kneading import orientation

    types = parse_combinatorics(combinatorics)
    witness = window.witness
    width = max(window.interval[1] - window.interval[0], 1e-9)

    def deepest(a):
        tower = build_tower(QuadraticMap(a), combinatorics)
        if not tower.complete or tower.depth < len(types):
            return None
        return tower.deepest_handle()

    def gap(a):
        g = deepest(a)
        if g is None:
            return None
        far = 1.0 if orientation(g) > 0 else 0.0
        return float(g(g.c)) - far

    for sgn in (1.0, -1.0):
        inside, outside, h = witness, None, width
        for _ in range(24):
            cand = inside + sgn * h
            if not 3.0 < cand < 4.0 or gap(cand) is None:
                outside = cand
                break
            inside = cand
            h *= 1.7
        if outside is None:
            continue
        for _ in range(edge_steps):
            mid = 0.5 * (inside + outside)
            if gap(mid) is None:
                outside = mid
            else:
                inside = mid
        g_in = gap(inside)
        if g_in is not None and abs(g_in) <= tol:
            return inside
    raise NotFound(
        f"no full-branch deepest level at the window edges of "
        f"{tuple(combinatorics)}")
