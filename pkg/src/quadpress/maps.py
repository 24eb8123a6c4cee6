"""Quadratic family core: evaluation, orbits, itineraries, periodic points.

The quadratic map f_a(x) = a*x*(1-x) on [0,1] is the base object.  Every
algorithm in this module is written against the small "unimodal handle"
interface (callable, .deriv, .c on domain [0,1]) so that rescaled return
maps from the renorm module can reuse it unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDerivative, NotFound, ParameterError

# package-wide defaults
C_TOLERANCE = 1e-10        # dead zone around c when assigning symbols
POINT_TOLERANCE = 1e-9     # |f^p(x) - x| acceptance for periodic points
PAD = 1e-13                # fixed per-operation bracket padding
DERIV_UNDERFLOW = 1e-12    # single-step |Df| below this is degenerate
SUPERSTABLE_TOL = 1e-8     # |f^k(c) - c| below this flags superstability
BISECT_STEPS = 64          # interval halvings per branch solve


@dataclass(frozen=True)
class QuadraticMap:
    """f_a : x -> a*x*(1-x) on [0,1], 0 < a <= 4. Critical point c = 1/2."""

    a: float
    c: float = field(default=0.5, init=False)

    def __post_init__(self):
        if not 0.0 < self.a <= 4.0:
            raise ParameterError(f"parameter out of range: a={self.a} not in (0, 4]")

    def __call__(self, x):
        return self.a * x * (1.0 - x)

    def deriv(self, x):
        return self.a * (1.0 - 2.0 * x)

    def abs_deriv_range(self, lo, hi):
        """Exact [inf, sup] of |Df| over [lo, hi] (|Df| is piecewise linear)."""
        vlo, vhi = abs(self.deriv(lo)), abs(self.deriv(hi))
        inf = 0.0 if lo <= self.c <= hi else min(vlo, vhi)
        return inf, max(vlo, vhi)


@dataclass(frozen=True)
class Itinerary:
    """Finite symbolic word over {L, C, R} of an orbit against c."""

    symbols: str
    c_tolerance: float = C_TOLERANCE

    def __post_init__(self):
        if len(self.symbols) < 1:
            raise ParameterError("itinerary must have length >= 1")
        bad = set(self.symbols) - set("LCR")
        if bad:
            raise ParameterError(f"invalid symbols: {sorted(bad)}")

    def __str__(self):
        return self.symbols

    def __len__(self):
        return len(self.symbols)

    @property
    def c_free(self):
        return "C" not in self.symbols


@dataclass(frozen=True)
class PeriodicOrbit:
    """A periodic point with its cyclic C-free word and multiplier Df^period."""

    word: str
    point: float
    period: int
    multiplier: float

    @property
    def exponent(self):
        """Lyapunov exponent log|multiplier| / period (nats per iterate)."""
        if self.multiplier == 0.0:
            return -math.inf
        return math.log(abs(self.multiplier)) / self.period

    @property
    def is_attracting(self):
        return abs(self.multiplier) < 1.0

    def ruelle_ok(self):
        """Entropy-zero proxy of Ruelle's bound: 0 <= max(0, exponent)."""
        return 0.0 <= max(0.0, self.exponent)


@dataclass(frozen=True)
class EntropyBracket:
    """[lo, hi] enclosure of topological entropy in nats, with search depth."""

    lo: float
    hi: float
    depth: int

    def __post_init__(self):
        if not (-1e-12 <= self.lo <= self.hi <= math.log(2.0) + 1e-9):
            raise ParameterError(f"invalid entropy bracket [{self.lo}, {self.hi}]")

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, h):
        return self.lo - 1e-15 <= h <= self.hi + 1e-15


def iterate(umap, x, n):
    """n-th iterate of the map at x (x may be an ndarray)."""
    if n < 0:
        raise ParameterError("n must be >= 0")
    y = x
    for _ in range(n):
        y = umap(y)
    return y


def orbit(umap, x, n):
    """[x, f(x), ..., f^n(x)] as a list of floats."""
    pts = [float(x)]
    for _ in range(n):
        pts.append(float(umap(pts[-1])))
    return pts


def derivative_along_orbit(umap, x, n, underflow=DERIV_UNDERFLOW):
    """Df^n(x) as the chain-rule product of single-step derivatives.

    Raises DegenerateDerivative when the orbit passes so close to the
    critical point that a factor drops below the underflow threshold.
    """
    prod = 1.0
    y = float(x)
    for _ in range(n):
        d = umap.deriv(y)
        if abs(d) < underflow:
            raise DegenerateDerivative(
                f"|Df({y})| = {abs(d):.3e} below underflow threshold {underflow:.1e}"
            )
        prod *= d
        y = float(umap(y))
    return prod


def _raw_multiplier(umap, x, n):
    """Df^n(x) without the degeneracy guard (internal use)."""
    prod = 1.0
    y = float(x)
    for _ in range(n):
        prod *= umap.deriv(y)
        y = float(umap(y))
    return prod


def symbol_of(umap, x, c_tolerance=C_TOLERANCE):
    c = umap.c
    if x < c - c_tolerance:
        return "L"
    if x > c + c_tolerance:
        return "R"
    return "C"


def itinerary_of(umap, x, n, c_tolerance=C_TOLERANCE):
    """Length-n word of the orbit of x coded against the critical point."""
    syms = []
    y = float(x)
    for _ in range(n):
        syms.append(symbol_of(umap, y, c_tolerance))
        y = float(umap(y))
    return Itinerary("".join(syms), c_tolerance)


# ---------------------------------------------------------------------------
# monotone-branch machinery
# ---------------------------------------------------------------------------

def branch_interval(umap, symbol):
    """The closed branch domain for a symbol: L -> [0, c], R -> [c, 1]."""
    if symbol == "L":
        return 0.0, umap.c
    if symbol == "R":
        return umap.c, 1.0
    raise ParameterError(f"branch symbol must be L or R, got {symbol!r}")


def branch_preimage(umap, symbol, y, tol=0.0):
    """Preimages of the values y on one monotone branch, by bisection.

    y may be a scalar or ndarray.  Returns (x, ok): ok marks values inside
    the branch image range (expanded by tol); x is valid only where ok.
    """
    lo, hi = branch_interval(umap, symbol)
    ylo, yhi = float(umap(lo)), float(umap(hi))
    increasing = yhi >= ylo
    vmin, vmax = (ylo, yhi) if increasing else (yhi, ylo)

    y = np.asarray(y, dtype=float)
    ok = (y >= vmin - tol) & (y <= vmax + tol)
    yc = np.clip(y, vmin, vmax)

    a = np.full(yc.shape, lo)
    b = np.full(yc.shape, hi)
    for _ in range(BISECT_STEPS):
        m = 0.5 * (a + b)
        fm = umap(m)
        if increasing:
            take_left = fm >= yc
        else:
            take_left = fm <= yc
        b = np.where(take_left, m, b)
        a = np.where(take_left, a, m)
    x = 0.5 * (a + b)
    if x.ndim == 0:
        return float(x), bool(ok)
    return x, ok


def interval_preimage(umap, symbol, u, v):
    """Pull the interval [u, v] back through one monotone branch.

    Returns the closed preimage interval within the branch domain, or None
    when [u, v] misses the branch image entirely.
    """
    lo, hi = branch_interval(umap, symbol)
    ylo, yhi = float(umap(lo)), float(umap(hi))
    vmin, vmax = min(ylo, yhi), max(ylo, yhi)
    cu, cv = max(u, vmin), min(v, vmax)
    if cu > cv + PAD:
        return None
    cu, cv = min(cu, cv), max(cu, cv)
    xa, _ = branch_preimage(umap, symbol, cu)
    xb, _ = branch_preimage(umap, symbol, cv)
    a, b = (xa, xb) if xa <= xb else (xb, xa)
    return max(lo, a - PAD), min(hi, b + PAD)


def cylinder_of_word(umap, symbols, depth_cycles=None, width_target=1e-14):
    """Nested cylinder of the infinite repetition of a C-free word.

    Walks backward through the word, pulling [0,1] through the successive
    branches.  Stops when the cylinder width stalls or drops below the
    width target.  Returns (u, v) or raises NotFound on an empty cylinder.
    """
    p = len(symbols)
    if depth_cycles is None:
        depth_cycles = max(4, int(math.ceil(256 / p)))
    u, v = 0.0, 1.0
    prev_width = math.inf
    for cyc in range(depth_cycles):
        for k in range(p - 1, -1, -1):
            res = interval_preimage(umap, symbols[k], u, v)
            if res is None:
                raise NotFound(f"empty cylinder for word {symbols!r}")
            u, v = res
        w = v - u
        if w < width_target:
            return u, v
        if cyc >= 3 and w > 0.999 * prev_width:
            return u, v   # non-shrinking cylinder (non-expanding word)
        prev_width = w
    return u, v


def find_periodic(umap, word, c_tolerance=C_TOLERANCE,
                  point_tolerance=POINT_TOLERANCE):
    """Locate the periodic point whose cyclic itinerary is the given word.

    The word must be C-free.  The point is pinned down by nested cylinder
    bisection followed by a sign-change bisection of f^p(x) - x inside the
    cylinder.  Raises NotFound when the word is inadmissible.
    """
    symbols = word.symbols if isinstance(word, Itinerary) else str(word)
    if not symbols:
        raise ParameterError("word must be nonempty")
    if "C" in symbols:
        raise ParameterError("word must be C-free")
    p = len(symbols)

    u, v = cylinder_of_word(umap, symbols)

    def h(x):
        return iterate(umap, x, p) - x

    # look for a sign change of f^p - id inside the cylinder
    grid = np.linspace(u, v, 65)
    hv = np.array([h(float(x)) for x in grid])
    root = None
    sgn = np.sign(hv)
    idx = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    if idx.size > 0:
        lo, hi = float(grid[idx[0]]), float(grid[idx[0] + 1])
        flo = h(lo)
        for _ in range(BISECT_STEPS):
            mid = 0.5 * (lo + hi)
            fm = h(mid)
            if flo * fm <= 0:
                hi = mid
            else:
                lo, flo = mid, fm
        root = 0.5 * (lo + hi)
    else:
        k = int(np.argmin(np.abs(hv)))
        if abs(hv[k]) <= point_tolerance:
            root = float(grid[k])
    if root is None:
        raise NotFound(f"no fixed point of f^{p} inside cylinder of {symbols!r}")

    if abs(h(root)) > point_tolerance:
        raise NotFound(
            f"periodic point for {symbols!r} did not converge: "
            f"|f^{p}(x)-x| = {abs(h(root)):.2e}"
        )
    realized = itinerary_of(umap, root, p, c_tolerance).symbols
    if realized != symbols:
        raise NotFound(
            f"located point has itinerary {realized!r}, wanted {symbols!r}"
        )
    mult = _raw_multiplier(umap, root, p)
    return PeriodicOrbit(word=symbols, point=float(root), period=p,
                         multiplier=float(mult))


def superstable_period(umap, k_max=64, tol=SUPERSTABLE_TOL):
    """Smallest k <= k_max with |f^k(c) - c| < tol, or None.

    A hit flags a superstable parameter: the critical point is periodic and
    the map carries a super-attracting cycle.
    """
    y = float(umap.c)
    for k in range(1, k_max + 1):
        y = float(umap(y))
        if abs(y - umap.c) < tol:
            return k
    return None
