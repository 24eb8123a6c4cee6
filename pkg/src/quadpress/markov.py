"""Markov models for hyperbolic sets avoiding a hole, and their spectra.

The model partition is generated by the forward orbit of the hole's
boundary (plus the critical point when there is no hole), restricted to
the dynamical core.  Transitions are exact coverings, so the coded
subshift is the maximal invariant set of the complement.  Per-interval
derivative brackets certify expansion and weight the transfer matrices
used by the pressure module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BudgetExceeded, NonHyperbolic, NonMarkov, NotFound, ParameterError
from .maps import (PAD, PeriodicOrbit, QuadraticMap, branch_preimage,
                   itinerary_of, iterate, superstable_period)
from .renorm import (RenormalizationTower, RestrictiveInterval,
                     core_interval, interval_image, orbit_of_interval)

ORBIT_BUDGET = 64          # boundary-orbit closure budget (points)
ENDPOINT_TOL = 1e-9        # Markov endpoint-matching tolerance
EXPANSION_ITERATES = 16    # certificate tries |Df^n| > 1 for n up to this
BALL_DELTA = 2.0 ** -6     # default hole radius around c (fraction of domain)
WORD_BUDGET = 1 << 18      # n * admissible words cap for enumeration


@dataclass(frozen=True)
class SlopeBracket:
    """[chi_min, chi_max] enclosure of Lyapunov exponents, nats/iterate."""

    chi_min: float
    chi_max: float

    def __post_init__(self):
        if self.chi_min > self.chi_max + 1e-12:
            raise ParameterError("chi_min must not exceed chi_max")


@dataclass(frozen=True)
class MarkovModel:
    """Interval partition + exact transition coverings + |Df| brackets."""

    umap: object
    partition: tuple                 # ((lo, hi), ...) closed intervals
    transitions: np.ndarray          # 0/1, row i -> covered intervals
    deriv_brackets: tuple            # ((inf|Df|, sup|Df|), ...)
    hole: tuple | None               # excluded open interval, or None
    refinement_depth: int
    hyperbolic: bool
    expansion_order: int             # iterate certifying expansion (0 = none)
    domain: tuple                    # dynamical core the model lives in
    hole_perturbation: float = 0.0   # ball-hole Markov enlargement size
    full_shift_smooth: bool = False  # base a=4 full model: exact multipliers

    @property
    def size(self):
        return len(self.partition)

    def endpoints(self):
        e = sorted({x for iv in self.partition for x in iv})
        return np.array(e)

    def spectral_radius(self):
        """Perron root of the unweighted transition matrix."""
        return _perron_bracket(self.transitions.astype(float))[1]

    def to_json_dict(self):
        return {
            "partition": [[f"{lo:.17g}", f"{hi:.17g}"] for lo, hi in self.partition],
            "transitions": self.transitions.astype(int).ravel().tolist(),
            "deriv_brackets": [[f"{a:.17g}", f"{b:.17g}"]
                               for a, b in self.deriv_brackets],
            "hole": None if self.hole is None
                    else [f"{self.hole[0]:.17g}", f"{self.hole[1]:.17g}"],
            "refinement_depth": self.refinement_depth,
            "hyperbolic": self.hyperbolic,
            "expansion_order": self.expansion_order,
            "hole_perturbation": f"{self.hole_perturbation:.17g}",
        }


def _orbit_closure(umap, seeds, absorbing=(), budget=ORBIT_BUDGET, tol=1e-10):
    """Forward orbits of the seeds until they revisit or are absorbed.

    The absorbing intervals (the hole's forward-invariant image orbit)
    swallow an orbit for good, so points inside them need no successors.
    """
    def absorbed(y):
        # boundary-inclusive: the hole's image orbit is forward invariant
        # as a closed set, and orbits on its boundary (critical values at
        # crisis parameters) would otherwise wander off through rounding
        return any(rl - tol <= y <= rh + tol for rl, rh in absorbing)

    pts = []
    for s in seeds:
        y = float(s)
        path = [y]
        for _ in range(budget):
            if absorbed(y):
                break
            y = float(umap(y))
            if any(abs(y - q) <= tol for q in pts) or \
               any(abs(y - q) <= tol for q in path[:-1]):
                break
            path.append(y)
        else:
            raise NonMarkov(
                f"boundary orbit of {s} did not close within {budget} points",
                endpoint=float(s))
        pts.extend(path)
    out = []
    for p in sorted(pts):
        if not out or p - out[-1] > tol:
            out.append(p)
    return out


def _preimage_set(umap, target, depth, budget=4096):
    """Preimages of a finite-orbit point, all branches, to the given depth."""
    frontier = np.array([target], dtype=float)
    out = [float(target)]
    for _ in range(depth):
        nxt = []
        for sym in ("L", "R"):
            x, ok = branch_preimage(umap, sym, frontier)
            x, ok = np.atleast_1d(x), np.atleast_1d(ok)
            if np.any(ok):
                nxt.append(x[ok])
        if not nxt:
            break
        frontier = np.concatenate(nxt)
        out.extend(float(v) for v in frontier)
        if len(out) > budget:
            break
    return np.unique(np.asarray(out))


def _exact_abs_deriv_range(umap, lo, hi, samples=17):
    """[inf, sup] of |Df| over [lo, hi]; exact for the quadratic family.

    Composed handles are sampled; the pad scales with the observed
    variation per sample gap, which is adequate once refinement makes the
    intervals small (the certificate never runs on wide handle pieces).
    """
    if isinstance(umap, QuadraticMap):
        return umap.abs_deriv_range(lo, hi)
    xs = np.linspace(lo, hi, samples)
    d = np.abs(np.asarray(umap.deriv(xs), dtype=float))
    pad = float(np.max(np.abs(np.diff(d)))) if d.size > 1 else 0.0
    return max(0.0, float(d.min()) - pad - 1e-12), float(d.max()) + pad + 1e-12


def _perron_bracket(w, steps=150):
    """[lo, hi] for the spectral radius of a nonnegative matrix.

    Power iteration on (W + s*I) for convergence on periodic structures,
    then Collatz-Wielandt quotients; the lower edge additionally maximizes
    subinvariance bounds over trimmed supports.
    """
    m = w.shape[0]
    if m == 0:
        return 0.0, 0.0
    scale = w.max()
    if scale <= 0:
        return 0.0, 0.0
    shift = 0.5 * scale
    v = np.ones(m)
    for _ in range(steps):
        av = w @ v + shift * v
        top = av.max()
        if top <= 0:
            return 0.0, 0.0
        v = av / top
    av = w @ v
    lo = 0.0
    vmax = v.max()
    for frac in (0.0, 1e-9, 1e-6, 1e-3, 1e-1):
        u = np.where(v > frac * vmax, v, 0.0)
        if not np.any(u > 0):
            continue
        au = w @ u
        mask = u > 0
        lo = max(lo, float((au[mask] / u[mask]).min()))
    mask = v > 1e-300
    hi = float((av[mask] / v[mask]).max()) if np.any(mask) else 0.0
    return lo, hi


def _build_partition(umap, removed, endpoint_set, domain):
    """Closed intervals of domain minus the removed open regions."""
    d_lo, d_hi = domain
    cuts = sorted({d_lo, d_hi}
                  | {float(x) for x in endpoint_set if d_lo < x < d_hi}
                  | {float(b) for r in removed for b in r
                     if d_lo < b < d_hi})
    intervals = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi - lo <= 1e-12:
            continue
        mid = 0.5 * (lo + hi)
        if any(rl < mid < rh for rl, rh in removed):
            continue
        intervals.append((lo, hi))
    return intervals


def _transition_matrix(umap, intervals, endpoint_tol=ENDPOINT_TOL):
    """Exact-covering transitions; verifies the Markov endpoint property."""
    n = len(intervals)
    starts = np.array([iv[0] for iv in intervals])
    ends = np.array([iv[1] for iv in intervals])
    trans = np.zeros((n, n), dtype=np.int8)
    for i, (lo, hi) in enumerate(intervals):
        img_lo, img_hi = interval_image(umap, lo, hi)
        j0 = int(np.searchsorted(starts, img_lo - endpoint_tol, side="left"))
        j1 = int(np.searchsorted(ends, img_hi + endpoint_tol, side="right"))
        if j1 > j0:
            trans[i, j0:j1] = 1
    return trans


def _verify_markov(umap, intervals, endpoint_set, endpoint_tol=ENDPOINT_TOL):
    """No image endpoint may land strictly inside a partition interval.

    Landing on a known endpoint or inside an excluded gap both preserve
    the Markov property (covered intervals stay covered exactly).
    """
    known = np.array(sorted(endpoint_set))
    for lo, hi in intervals:
        for v in (float(umap(lo)), float(umap(hi))):
            if np.min(np.abs(known - v)) <= endpoint_tol:
                continue
            for u, w in intervals:
                if u + endpoint_tol < v < w - endpoint_tol:
                    raise NonMarkov(
                        f"image endpoint {v!r} interior to partition "
                        f"interval [{u}, {w}]", endpoint=v)


def _two_cylinder(umap, src, dst):
    """src ∩ f^{-1}(dst) as a closed interval (src is in one branch)."""
    from .maps import interval_preimage

    lo, hi = src
    sym = "L" if 0.5 * (lo + hi) < umap.c else "R"
    res = interval_preimage(umap, sym, dst[0], dst[1])
    if res is None:
        return None
    u, v = max(res[0], lo), min(res[1], hi)
    if u > v:
        return None
    return u, v


def _expansion_certificate(umap, intervals, trans,
                           max_order=EXPANSION_ITERATES):
    """Smallest n with |Df^n| > 1 on every depth-n cylinder, else 0.

    Path products use two-cylinder edge weights inf |Df| over
    I_i ∩ f^{-1}(I_j): a step that stays next to the hole boundary is
    then priced along its actual continuation, not against the worst
    unrelated branch.
    """
    n = len(intervals)
    if n == 0:
        return 0
    node_w = np.array([math.log(max(_exact_abs_deriv_range(umap, lo, hi)[0],
                                    1e-300))
                       for lo, hi in intervals])
    edges = {}
    for i in range(n):
        for j in np.nonzero(trans[i])[0]:
            cyl = _two_cylinder(umap, intervals[i], intervals[int(j)])
            if cyl is None:
                continue
            w = _exact_abs_deriv_range(umap, cyl[0], cyl[1])[0]
            edges[(i, int(j))] = math.log(max(w, 1e-300))
    if node_w.min() > 1e-12:
        return 1
    best = node_w.copy()
    for order in range(2, max_order + 1):
        nxt = np.full(n, np.inf)
        for (i, j), w in edges.items():
            cand = w + best[j]
            if cand < nxt[i]:
                nxt[i] = cand
        best = nxt
        finite = best[np.isfinite(best)]
        if finite.size == 0:
            return 0
        if finite.min() > 1e-12:
            return order
    return 0


def markov_model(umap, hole=None, refinement_depth=0, ball_delta=None,
                 domain=None, endpoint_tol=ENDPOINT_TOL):
    """Markov model of the maximal invariant set avoiding the hole.

    hole: a RestrictiveInterval (its whole image orbit is excluded), a
    (lo, hi) pair treated as a critical ball, or None (partition split at
    the critical point only).  The partition is generated by the hole
    boundary's forward orbit inside the dynamical core, then refined by
    pullback.  endpoint_tol loosens orbit closure and endpoint matching
    for deep composed handles, whose evaluations near repelling
    boundaries carry amplified rounding noise.
    """
    if domain is None:
        domain = core_interval(umap)
    d_lo, d_hi = domain
    removed = []
    perturbation = 0.0

    if hole is None:
        seeds = [umap.c]
        hole_iv = None
    elif isinstance(hole, RestrictiveInterval):
        k = hole.period
        removed = [tuple(r) for r in orbit_of_interval(umap, hole.lo, hole.hi, k)]
        seeds = [hole.lo, hole.hi, d_lo, d_hi]
        hole_iv = (hole.lo, hole.hi)
    else:
        c = umap.c
        delta = ball_delta if ball_delta is not None else BALL_DELTA
        if isinstance(hole, tuple):
            lo_b, hi_b = hole
        else:
            lo_b, hi_b = c - delta, c + delta
        # enlarge to the nearest endpoints with finite forward orbits:
        # preimages of the orientation-fixed boundary point
        fixed = _interior_fixed_point(umap)
        cand = _preimage_set(umap, fixed, depth=14)
        left = cand[cand <= lo_b + 1e-12]
        right = cand[cand >= hi_b - 1e-12]
        if left.size == 0 or right.size == 0:
            raise NonMarkov("no Markov-compatible ball boundary found",
                            endpoint=c)
        u, v = float(left.max()), float(right.min())
        perturbation = max(lo_b - u, v - hi_b, 0.0)
        removed = [(u, v)]
        seeds = [u, v]
        hole_iv = (u, v)

    absorbers = list(removed) + [(d_lo, d_lo), (d_hi, d_hi)]
    endpoint_set = _orbit_closure(umap, seeds, absorbing=absorbers,
                                  tol=max(1e-10, endpoint_tol * 1e-1))
    endpoint_set = sorted(set(endpoint_set) | {d_lo, d_hi})

    intervals = _build_partition(umap, removed, endpoint_set, domain)
    if refinement_depth:
        intervals = _refine_partition(umap, intervals, refinement_depth)
    if not intervals:
        return MarkovModel(umap=umap, partition=(), hole=hole_iv,
                           transitions=np.zeros((0, 0), dtype=np.int8),
                           deriv_brackets=(), refinement_depth=refinement_depth,
                           hyperbolic=False, expansion_order=0, domain=domain,
                           hole_perturbation=perturbation)
    _verify_markov(umap, intervals,
                   set(endpoint_set) | {x for iv in intervals for x in iv},
                   endpoint_tol=endpoint_tol)
    trans = _transition_matrix(umap, intervals, endpoint_tol=endpoint_tol)
    brackets = tuple(_exact_abs_deriv_range(umap, lo, hi)
                     for lo, hi in intervals)
    order = _expansion_certificate(umap, intervals, trans)
    full_smooth = (isinstance(umap, QuadraticMap)
                   and abs(umap.a - 4.0) < 1e-12 and hole is None)
    return MarkovModel(umap=umap, partition=tuple(intervals),
                       transitions=trans, deriv_brackets=brackets,
                       hole=hole_iv, refinement_depth=refinement_depth,
                       hyperbolic=order > 0, expansion_order=order,
                       domain=domain, hole_perturbation=perturbation,
                       full_shift_smooth=full_smooth)


def _interior_fixed_point(umap):
    """The repelling fixed point inside the core (bisection on each branch)."""
    from .renorm import fixed_points

    d_lo, d_hi = core_interval(umap)
    for p in fixed_points(umap):
        if d_lo - 1e-9 <= p <= d_hi + 1e-9 and abs(p - umap.c) > 1e-6:
            return p
    raise NonMarkov("no interior fixed point available for ball holes",
                    endpoint=umap.c)


def _refine_partition(umap, intervals, depth):
    """Pull endpoint preimages back through the partition, depth times."""
    for _ in range(depth):
        ends = np.array(sorted({x for iv in intervals for x in iv}))
        new_intervals = []
        for lo, hi in intervals:
            img_lo, img_hi = interval_image(umap, lo, hi)
            targets = ends[(ends > img_lo + PAD) & (ends < img_hi - PAD)]
            sym = "L" if 0.5 * (lo + hi) < umap.c else "R"
            cuts = [lo, hi]
            if targets.size:
                x, ok = branch_preimage(umap, sym, targets)
                x, ok = np.atleast_1d(x), np.atleast_1d(ok)
                cuts.extend(float(v) for v in x[ok]
                            if lo + 1e-12 < v < hi - 1e-12)
            cuts = sorted(cuts)
            merged = [cuts[0]]
            for v in cuts[1:]:
                if v - merged[-1] > 1e-12:
                    merged.append(v)
            merged[-1] = hi
            for a, b in zip(merged[:-1], merged[1:]):
                if b - a > 1e-12:
                    new_intervals.append((a, b))
        intervals = new_intervals
    return intervals


def refine_model(model, extra_depth):
    """New model with the partition refined by pullback.

    Refinement does not change the coded invariant set, so the expansion
    certificate is inherited rather than recomputed.
    """
    if extra_depth <= 0:
        return model
    intervals = _refine_partition(model.umap, list(model.partition), extra_depth)
    trans = _transition_matrix(model.umap, intervals)
    brackets = tuple(_exact_abs_deriv_range(model.umap, lo, hi)
                     for lo, hi in intervals)
    return replace(model, partition=tuple(intervals), transitions=trans,
                   deriv_brackets=brackets,
                   refinement_depth=model.refinement_depth + extra_depth)


def ensure_hyperbolic(model, max_extra=12, step=2):
    """Refine by pullback until the expansion certificate passes.

    Wide partition intervals straddle the low-|Df| zone near the hole even
    when the coded invariant set is uniformly expanding; refinement
    tightens the per-cylinder brackets onto the set itself.
    """
    if model.hyperbolic:
        return model
    extra = 0
    current = model
    while extra < max_extra:
        extra += step
        current = refine_model(model, extra)
        order = _expansion_certificate(current.umap, current.partition,
                                       current.transitions)
        if order:
            return replace(current, hyperbolic=True, expansion_order=order)
    raise NonHyperbolic(
        f"expansion certificate failed up to refinement {extra}")


# ---------------------------------------------------------------------------
# periodic words and orbits
# ---------------------------------------------------------------------------

def admissible_cyclic_words(trans, n, budget=WORD_BUDGET):
    """One representative per rotation class of closed admissible words."""
    m = trans.shape[0]
    words = []
    total = 0

    def rotations(w):
        return {w[i:] + w[:i] for i in range(len(w))}

    for start in range(m):
        stack = [(start, (start,))]
        while stack:
            state, path = stack.pop()
            if len(path) == n:
                if trans[state, start]:
                    if min(path) == start and path == min(rotations(path)):
                        words.append(path)
                continue
            for nxt in np.nonzero(trans[state])[0]:
                if nxt < start:
                    continue
                stack.append((int(nxt), path + (int(nxt),)))
                if (len(words) + len(stack)) * n > budget:
                    raise BudgetExceeded(
                        f"cyclic word enumeration exceeded budget at n={n}")
    return words


def _cylinder_descend(umap, intervals_cycle, cycles=None, width_target=1e-14):
    """Backward nested intervals for a cyclic partition-interval word."""
    p = len(intervals_cycle)
    if cycles is None:
        cycles = max(4, int(math.ceil(192 / p)))
    u, v = intervals_cycle[0]
    prev_w = math.inf
    for cyc in range(cycles):
        for k in range(p - 1, -1, -1):
            lo_k, hi_k = intervals_cycle[k]
            sym = "L" if 0.5 * (lo_k + hi_k) < umap.c else "R"
            from .maps import interval_preimage
            res = interval_preimage(umap, sym, u, v)
            if res is None:
                raise NotFound("empty cylinder for interval word")
            u, v = max(res[0], lo_k), min(res[1], hi_k)
            if u > v + PAD:
                raise NotFound("cylinder left its defining interval")
            u, v = min(u, v), max(u, v)
        w = v - u
        if w < width_target or (cyc >= 2 and w > 0.999 * prev_w):
            break
        prev_w = w
    return u, v


def _word_primitive_period(word):
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and all(word[i] == word[i % d] for i in range(n)):
            return d
    return n


def periodic_orbit_for_word(model, word, point_tolerance=1e-9):
    """Locate the periodic orbit of a cyclic partition-interval word.

    The record carries the primitive period: a repeated word locates the
    same orbit as its root, and cycle sums weight by primitive period.
    """
    umap = model.umap
    intervals = [model.partition[i] for i in word]
    u, v = _cylinder_descend(umap, intervals)
    p = _word_primitive_period(tuple(word))

    def h(x):
        return iterate(umap, x, p) - x

    grid = np.linspace(u, v, 33)
    hv = np.array([h(float(x)) for x in grid])
    sgn = np.sign(hv)
    idx = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    if idx.size:
        lo_, hi_, fa = float(grid[idx[0]]), float(grid[idx[0] + 1]), float(hv[idx[0]])
        for _ in range(80):
            mid = 0.5 * (lo_ + hi_)
            fm = h(mid)
            if fa * fm <= 0:
                hi_ = mid
            else:
                lo_, fa = mid, fm
        root = 0.5 * (lo_ + hi_)
    else:
        k = int(np.argmin(np.abs(hv)))
        if abs(hv[k]) > point_tolerance:
            raise NotFound(f"no periodic point for word {word}")
        root = float(grid[k])
    mult = 1.0
    y = root
    for _ in range(p):
        mult *= float(umap.deriv(y))
        y = float(umap(y))
    sym_word = itinerary_of(umap, root, p).symbols
    return PeriodicOrbit(word=sym_word, point=float(root), period=p,
                         multiplier=float(mult))


def enumerate_periodic(model, n, budget=WORD_BUDGET):
    """One periodic orbit per admissible cyclic word of length n."""
    words = admissible_cyclic_words(model.transitions, n, budget=budget)
    out = []
    for w in words:
        try:
            out.append((w, periodic_orbit_for_word(model, w)))
        except NotFound:
            continue
    return out


def lyapunov_bracket(model, n=10):
    """[chi_min, chi_max] over depth-n admissible derivative products."""
    if model.size == 0:
        raise NonHyperbolic("empty model has no exponents")
    logs_lo = np.array([math.log(max(b[0], 1e-300))
                        for b in model.deriv_brackets])
    logs_hi = np.array([math.log(max(b[1], 1e-300))
                        for b in model.deriv_brackets])
    trans = model.transitions.astype(bool)
    lo_best = logs_lo.copy()
    hi_best = logs_hi.copy()
    lo_prev, hi_prev = logs_lo.copy(), logs_hi.copy()
    for _ in range(n - 1):
        lo_nxt = np.full(model.size, np.inf)
        hi_nxt = np.full(model.size, -np.inf)
        for i in range(model.size):
            succ = np.nonzero(trans[i])[0]
            if succ.size:
                lo_nxt[i] = logs_lo[i] + lo_prev[succ].min()
                hi_nxt[i] = logs_hi[i] + hi_prev[succ].max()
        lo_prev, hi_prev = lo_nxt, hi_nxt
    lo_fin = lo_prev[np.isfinite(lo_prev)]
    hi_fin = hi_prev[np.isfinite(hi_prev)]
    if lo_fin.size == 0 or hi_fin.size == 0:
        raise NonHyperbolic("model admits no length-n admissible paths")
    return SlopeBracket(chi_min=float(lo_fin.min()) / n,
                        chi_max=float(hi_fin.max()) / n)


# ---------------------------------------------------------------------------
# spectral components
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralComponent:
    """One forward-invariant piece of the pressure decomposition."""

    kind: str                        # fixed_point_zero | hyperbolic_level |
                                     # terminal_level
    cumulative_period: int           # base iterates per level iterate
    model: MarkovModel | None = None
    level_type: int | None = None    # hole return period at this level
    exact_exponent: float | None = None   # line component: chi per level step
    boundary_orbit: PeriodicOrbit | None = None
    chebyshev_smooth: bool = False   # base a=4: exact (1-t)log2 curve
    chebyshev_topological: bool = False
    superstable_excluded: bool = False
    approximate: bool = False
    label: str = ""


def is_chebyshev_like(umap, tol=1e-6):
    """Critical value hits the far endpoint whose image is a fixed point."""
    from .kneading import orientation

    far = 1.0 if orientation(umap) > 0 else 0.0
    v = float(umap(umap.c))
    if abs(v - far) > tol:
        return False
    w = float(umap(v))
    return abs(float(umap(w)) - w) <= max(tol, 1e-6)


def _boundary_orbit_of_hole(umap, restrictive):
    return restrictive.boundary_orbit


def spectral_components(umap, tower, refinement_depth=0, ball_delta=None):
    """Ordered components: the zero fixed point, one per tower level, and a
    terminal component for the deepest renormalized map."""
    comps = [SpectralComponent(kind="fixed_point_zero", cumulative_period=1,
                               exact_exponent=math.log(umap.a),
                               label="fixed_point_0")]
    parent = umap
    parent_K = 1
    for i, lv in enumerate(tower.levels):
        model = markov_model(parent, hole=lv.restrictive,
                             refinement_depth=refinement_depth)
        comps.append(SpectralComponent(
            kind="hyperbolic_level", cumulative_period=parent_K, model=model,
            level_type=lv.kind,
            boundary_orbit=_boundary_orbit_of_hole(parent, lv.restrictive),
            label=f"X{i + 1}(type{lv.kind})"))
        parent = lv.handle
        parent_K = lv.cumulative_period

    deepest = tower.deepest_handle()
    K_term = tower.levels[-1].cumulative_period if tower.levels else 1
    ss = superstable_period(deepest, k_max=2)
    if ss is not None:
        comps.append(SpectralComponent(
            kind="terminal_level", cumulative_period=K_term,
            superstable_excluded=True,
            label=f"terminal(superstable-{ss})"))
    elif is_chebyshev_like(deepest):
        model = markov_model(deepest, hole=None,
                             refinement_depth=refinement_depth)
        comps.append(SpectralComponent(
            kind="terminal_level", cumulative_period=K_term, model=model,
            chebyshev_smooth=model.full_shift_smooth,
            chebyshev_topological=not model.full_shift_smooth,
            label="terminal(chebyshev)"))
    else:
        try:
            model = markov_model(deepest, hole="ball", ball_delta=ball_delta,
                                 refinement_depth=refinement_depth)
        except NonMarkov:
            model = None
        comps.append(SpectralComponent(
            kind="terminal_level", cumulative_period=K_term, model=model,
            approximate=True, label="terminal(approximate)"))
    return comps
