"""Independent oracles for the test suite.

Everything here recomputes expected values through routes that share no
code with the package internals: brute-force grid scans, closed-form
algebra, Milnor-Thurston coordinate numbers, dense-grid argmax switches.
"""

import math

import numpy as np

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0
LOG2 = math.log(2.0)


def quad(a, x):
    return a * x * (1.0 - x)


def quad_iter(a, x, n):
    for _ in range(n):
        x = quad(a, x)
    return x


def brute_lap_count(a, n, grid_n=200001):
    """Laps of f^n by counting monotonicity flips on a dense grid."""
    xs = np.linspace(0.0, 1.0, grid_n)
    ys = xs.copy()
    for _ in range(n):
        ys = a * ys * (1.0 - ys)
    d = np.diff(ys)
    sign = np.sign(d)
    sign = sign[sign != 0]
    return 1 + int(np.count_nonzero(sign[:-1] * sign[1:] < 0))


def two_cycle_points(a):
    """The period-2 orbit of f_a in closed form (exists for a > 3)."""
    disc = math.sqrt((a + 1.0) * (a - 3.0))
    x1 = (a + 1.0 + disc) / (2.0 * a)
    x2 = (a + 1.0 - disc) / (2.0 * a)
    return x1, x2


def two_cycle_multiplier(a):
    """Df^2 on the 2-cycle: the classical 4 + 2a - a^2."""
    return 4.0 + 2.0 * a - a * a


def superstable3():
    """Superstable period-3 parameter by plain bisection (independent)."""
    lo, hi = 3.8, 3.9
    flo = quad_iter(lo, 0.5, 3) - 0.5
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        fm = quad_iter(mid, 0.5, 3) - 0.5
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


# --- Milnor-Thurston coordinate numbers (entropy comparison oracle) -------

def _itinerary_theta(values, c, depth):
    """Signed-binary coordinate of an itinerary: orientation-weighted sum."""
    theta = 0.0
    sign = 1.0
    for i, y in enumerate(values[:depth]):
        if y > c:
            digit = 1.0
        elif y < c:
            digit = 0.0
        else:
            digit = 0.5
        theta += sign * digit * 0.5 ** i
        if y > c:
            sign = -sign
        if y == c:
            break
    return theta


def _map_theta(a, depth):
    vals = []
    y = quad(a, 0.5)
    for _ in range(depth):
        vals.append(y)
        y = quad(a, y)
    return _itinerary_theta(vals, 0.5, depth)


def _tent_theta(s, depth):
    vals = []
    y = 0.5 * s
    for _ in range(depth):
        vals.append(y)
        y = s * y if y <= 0.5 else s * (1.0 - y)
    return _itinerary_theta(vals, 0.5, depth)


def entropy_by_theta(a, depth=72, s_tol=2e-4):
    """Entropy of f_a via tent-slope bisection on coordinate numbers.

    Valid as a two-sided estimate for parameters without attracting
    cycles (Misiurewicz, Chebyshev, superstable window plateaus).
    """
    target = _map_theta(a, depth)
    lo, hi = 1.0, 2.0
    for _ in range(64):
        if hi - lo < s_tol:
            break
        s = 0.5 * (lo + hi)
        if _tent_theta(s, depth) < target:
            lo = s
        else:
            hi = s
    return math.log(lo), math.log(hi)


def dense_argmax_switches(curve_fns, t_lo, t_hi, n=4001):
    """Indices where the argmax over callables switches on a dense grid."""
    ts = np.linspace(t_lo, t_hi, n)
    vals = np.array([[f(float(t)) for f in curve_fns] for t in ts])
    arg = np.argmax(vals, axis=1)
    out = []
    for i in range(n - 1):
        if arg[i] != arg[i + 1]:
            out.append((float(ts[i]), int(arg[i]), int(arg[i + 1])))
    return out


def trace_power(matrix, n):
    """Trace of the n-th power of a 0/1 matrix (closed-walk count)."""
    m = np.linalg.matrix_power(np.asarray(matrix, dtype=np.int64), n)
    return int(np.trace(m))


def perron_root_dense(matrix):
    ev = np.linalg.eigvals(np.asarray(matrix, dtype=float))
    return float(np.max(np.abs(ev)))
