"""Kneading-sequence comparison against the tent family.

A unimodal map is semi-conjugate to the tent map whose slope s satisfies
h = log s, and kneading sequences are monotone in entropy under the
parity-signed lexicographic order.  Bisecting the tent slope against the
map's kneading sequence therefore brackets the entropy from both sides.
This is the sharp companion to the lap-count bounds: it resolves window
parameters (where lap prefactors converge slowly) to ~1e-4 in s.
"""

from __future__ import annotations

import math


def orientation(umap):
    """+1 when the critical value is a local max (quadratic-like), else -1."""
    h = 0.25 * min(umap.c, 1.0 - umap.c)
    vc = float(umap(umap.c))
    if vc >= float(umap(umap.c - h)) and vc >= float(umap(umap.c + h)):
        return 1
    return -1


def _map_kneading(umap, depth, tol=1e-12):
    """Symbols of the itinerary of the critical value, flipped to max-type."""
    flip = orientation(umap) < 0
    c = umap.c
    y = float(umap(c))
    out = []
    for _ in range(depth):
        if abs(y - c) <= tol:
            out.append("C")
        elif (y > c) != flip:
            out.append("R")
        else:
            out.append("L")
        y = float(umap(y))
    return out


def _tent_kneading(s, depth, tol=1e-12):
    """Kneading symbols of the tent map with slope s on [0, 1]."""
    y = 0.5 * s
    out = []
    for _ in range(depth):
        if abs(y - 0.5) <= tol:
            out.append("C")
        elif y > 0.5:
            out.append("R")
        else:
            out.append("L")
        y = s * y if y <= 0.5 else s * (1.0 - y)
    return out


_VAL = {"L": 0.0, "C": 0.5, "R": 1.0}


def compare_kneading(k1, k2):
    """Parity-signed lexicographic comparison; 0 means equal to this depth."""
    parity = 1
    for s1, s2 in zip(k1, k2):
        if s1 != s2:
            d = _VAL[s1] - _VAL[s2]
            return parity if d > 0 else -parity
        if s1 == "R":
            parity = -parity
        if s1 == "C":
            return 0   # common superstable closure: sequences coincide
    return 0


def kneading_entropy_bracket(umap, s_tol=1e-4, depth=96):
    """[lo, hi] entropy bracket from tent-slope bisection, in nats."""
    kf = _map_kneading(umap, depth)
    s_lo, s_hi = 1.0, 2.0
    cmp_hi = compare_kneading(kf, _tent_kneading(s_hi, depth))
    if cmp_hi == 0:
        return math.log(2.0 - 2.0 * s_tol), math.log(2.0)  # tie at slope 2
    if cmp_hi > 0:
        return 0.0, math.log(2.0)
    while s_hi - s_lo > s_tol:
        s = 0.5 * (s_lo + s_hi)
        v = compare_kneading(kf, _tent_kneading(s, depth))
        if v > 0:
            s_lo = s
        elif v < 0:
            s_hi = s
        else:
            # identical to this depth: entropy pinned at log s
            pad = 2.0 * s_tol
            return max(0.0, math.log(max(s - pad, 1.0))), math.log(min(s + pad, 2.0))
    return max(0.0, math.log(s_lo)), math.log(s_hi)
