"""Lap counting and topological entropy brackets.

lap(f^n) = 1 + #turning points of f^n, and the turning points are exactly
the solutions of f^k(x) = c for k < n.  We grow the preimage tree of c
level by level with vectorized monotone-branch bisection.

Bracket logic:
  hi:  log(lap(f^n))/n is an upper bound for every n (log lap is
       subadditive), so the running minimum certifies the upper edge.
  lo:  a covering graph on the laps of f^n (I -> J iff f(I) covers J)
       forces entropy >= log of its spectral radius; Collatz-Wielandt
       quotients around a power iterate bracket that radius from below.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BudgetExceeded
from .maps import EntropyBracket, branch_preimage

NODE_BUDGET = 1 << 22      # preimage-tree node limit
ENTROPY_DEPTH = 18         # default tree depth
DEDUP_TOL = 5e-13          # merge turning points closer than this
COVER_TOL = 1e-9           # endpoint tolerance for interval covering
LOG2 = math.log(2.0)


def _preimage_level(umap, targets):
    """All preimages of the target values, both branches, as one array."""
    out = []
    for sym in ("L", "R"):
        x, ok = branch_preimage(umap, sym, targets)
        if np.any(ok):
            out.append(np.atleast_1d(x)[np.atleast_1d(ok)])
    if not out:
        return np.empty(0)
    return np.concatenate(out)


def _dedup_sorted(pts, tol=DEDUP_TOL):
    if pts.size <= 1:
        return pts
    keep = np.empty(pts.size, dtype=bool)
    keep[0] = True
    keep[1:] = np.diff(pts) > tol
    return pts[keep]


class TurningTree:
    """Incrementally grown set of turning points of the iterates of a map."""

    def __init__(self, umap, budget=NODE_BUDGET):
        self.umap = umap
        self.budget = budget
        self.frontier = np.array([umap.c])
        self.points = np.array([umap.c])     # sorted, deduplicated
        self.nodes = 1
        self.depth = 1                        # laps of f^depth are current
        self.lap_log = [self.lap_count()]

    def lap_count(self):
        """Laps of f^depth: 1 + #turning points interior to (0,1)."""
        interior = np.count_nonzero((self.points > DEDUP_TOL)
                                    & (self.points < 1.0 - DEDUP_TOL))
        return 1 + interior

    def _novel(self, cand):
        """Candidates farther than the dedup tolerance from every known point."""
        if cand.size == 0:
            return cand
        cand = _dedup_sorted(np.sort(cand))
        pos = np.searchsorted(self.points, cand)
        left = np.where(pos > 0, cand - self.points[np.maximum(pos - 1, 0)],
                        np.inf)
        right = np.where(pos < self.points.size,
                         self.points[np.minimum(pos, self.points.size - 1)] - cand,
                         np.inf)
        return cand[np.minimum(left, right) > DEDUP_TOL]

    def deepen(self):
        """Add one preimage level; afterwards laps of f^(depth+1) are known.

        Revisited points are dropped from the frontier (their subtrees are
        already in the set), so finite backward orbits close up and the
        frontier empties.
        """
        nxt = _preimage_level(self.umap, self.frontier)
        self.nodes += nxt.size
        if self.nodes > self.budget:
            raise BudgetExceeded(
                f"preimage tree exceeded {self.budget} nodes at depth {self.depth}"
            )
        fresh = self._novel(nxt)
        if fresh.size:
            self.points = np.sort(np.concatenate([self.points, fresh]))
        self.frontier = fresh
        self.depth += 1
        self.lap_log.append(self.lap_count())

    def covering_lower_bound(self, power_steps=120):
        """Certified-style lower bound for entropy from the covering graph."""
        e = np.concatenate([[0.0], self.points, [1.0]])
        e = _dedup_sorted(e)
        if e.size < 3:
            return 0.0
        y = np.asarray(self.umap(e), dtype=float)
        img_lo = np.minimum(y[:-1], y[1:])
        img_hi = np.maximum(y[:-1], y[1:])
        m = e.size - 1
        # coverage slack per target interval: absolute cap for endpoint
        # noise, but never more than a sliver of the interval itself
        # (deep cylinders can be barely wider than the noise floor)
        w = np.diff(e)
        tol = np.maximum(1e-12, np.minimum(COVER_TOL, 0.02 * w))
        cover_lo = e[:-1] + tol     # j covered needs img_lo <= cover_lo[j]
        cover_hi = e[1:] - tol      # ... and img_hi >= cover_hi[j]
        j_start = np.searchsorted(cover_lo, img_lo, side="left")
        j_end = np.searchsorted(cover_hi, img_hi, side="right") - 1
        j_start = np.clip(j_start, 0, m)
        j_end = np.clip(j_end, -1, m - 1)

        alive = j_end >= j_start
        # trim to the recurrent core: every alive row must cover an alive
        # interval, every alive interval must be covered by an alive row
        for _ in range(m):
            s = np.concatenate([[0], np.cumsum(alive.astype(np.int64))])
            out_deg = np.where(alive, s[np.minimum(j_end + 1, m)]
                               - s[np.minimum(j_start, m)], 0)
            cov = np.zeros(m + 1, dtype=np.int64)
            rows = np.nonzero(alive & (out_deg > 0))[0]
            np.add.at(cov, j_start[rows], 1)
            np.add.at(cov, j_end[rows] + 1, -1)
            in_deg = np.cumsum(cov[:-1])
            new_alive = alive & (out_deg > 0) & (in_deg > 0)
            if np.array_equal(new_alive, alive):
                break
            alive = new_alive
        if not np.any(alive):
            return 0.0

        def matvec(v):
            s = np.concatenate([[0.0], np.cumsum(v)])
            return np.where(alive, s[np.minimum(j_end + 1, m)]
                            - s[np.minimum(j_start, m)], 0.0)

        # iterate on A + I: same Perron vector, but primitive even when the
        # covering graph is periodic (band cycles), so the iterate settles
        v = alive.astype(float)
        for _ in range(power_steps):
            av = matvec(v) + v
            top = av.max()
            if top <= 0:
                return 0.0
            v = av / top

        # subinvariance: for any w >= 0, rho >= min_{w_i > 0} (Aw)_i / w_i.
        # restrict w to the dominant part of the power iterate so quotients
        # from slow communicating classes cannot drag the bound down.
        best = 0.0
        vmax = v.max()
        for frac in (0.0, 1e-9, 1e-6, 1e-3, 1e-1):
            w = np.where(v > frac * vmax, v, 0.0)
            if not np.any(w > 0):
                continue
            aw = matvec(w)
            mask = w > 0
            theta = float((aw[mask] / w[mask]).min())
            best = max(best, theta)
        if best <= 1.0 + 1e-9:
            return 0.0
        return math.log(best)


def lap_count(umap, n, budget=NODE_BUDGET):
    """Number of maximal monotonicity intervals of f^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    tree = TurningTree(umap, budget=budget)
    while tree.depth < n:
        tree.deepen()
    return tree.lap_log[n - 1]


def top_entropy(umap, depth=ENTROPY_DEPTH, budget=NODE_BUDGET,
                cover_depths=None, use_kneading=True):
    """Bracket for the topological entropy lim (1/n) log lap(f^n).

    The bracket narrows as depth grows: the upper edge is the running
    minimum of (1/n) log lap(n), the lower edge the running maximum of
    covering-graph bounds evaluated on a sparse depth schedule.  Deep
    calls stay cheap on maps whose preimage trees are thin (zero-entropy
    regimes), so a large depth is the way to certify a near-zero bracket.

    A tent-slope kneading comparison tightens both edges; it resolves
    periodic-window parameters where the lap prefactor converges slowly.
    """
    if depth < 4:
        raise ValueError("depth must be >= 4")
    if cover_depths is None:
        cover_depths = sorted({4, 6, 8, 10, 12, 14, 16, depth}
                              & set(range(4, depth + 1)) | {min(depth, 18)})
    tree = TurningTree(umap, budget=budget)
    hi = LOG2
    lo = 0.0
    cover_set = set(cover_depths)
    for n in range(1, depth + 1):
        if tree.depth < n:
            tree.deepen()
        hi = min(hi, math.log(tree.lap_log[n - 1]) / n)
        if n in cover_set:
            lo = max(lo, tree.covering_lower_bound())
        if tree.frontier.size == 0 and tree.depth >= n:
            # tree closed up (finite set of turning points): laps stay
            # polynomial from here, finish the hi sweep arithmetically
            final_lap = tree.lap_log[-1]
            for mm in range(n + 1, depth + 1):
                hi = min(hi, math.log(final_lap) / mm)
            break
    if use_kneading:
        from .kneading import kneading_entropy_bracket

        # only the upper edge: domination by a tent kneading is necessary
        # for realization, so it certifies h <= log s; the converse can
        # fail inside attracting windows and is not used.
        _, khi = kneading_entropy_bracket(umap)
        if khi >= lo - 1e-12:
            hi = min(hi, max(khi, lo))
    lo = min(lo, hi)
    return EntropyBracket(lo=max(0.0, lo), hi=min(hi, LOG2), depth=depth)
