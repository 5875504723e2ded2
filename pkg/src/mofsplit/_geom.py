"""Scalar plane-cut kernels on rectangular cells (numba).

Conventions used throughout:

* The fluid side of a plane is ``{x : m . x <= alpha}`` in cell-local
  physical coordinates ``x in [0, dx_i]``.
* Scaling each axis by its edge length turns the cell into the unit box and
  the plane into ``sum_i p_i xi_i <= alpha`` with ``p_i = m_i * dx_i``.
  All kernels work on the ``p`` form; returned centroids are unit-box
  fractions (dx-independent).
* Canonical form: all ``p_i >= 0`` (mirror flips), sorted ascending
  (axis permutation), and ``alpha <= alpha_max / 2`` (complement), with
  ``alpha_max = sum p_i``.  Five cut configurations remain, dispatched on
  alpha against the sorted intercepts.

The per-configuration volume/moment expressions are evaluated in factored
forms chosen so that no catastrophic cancellation occurs even when one or
two ``p_i`` are many orders of magnitude below the others (verified against
50-digit arithmetic).  Components below ``REL_ZERO * max_i p_i`` are treated
as exactly zero and handled by slab/prism branches, which keeps ``1/p_i``
factors bounded.
"""

import numpy as np
from numba import njit

# Relative threshold below which a normal component is treated as zero.
REL_ZERO = 1e-12

# Bound-repair epsilon for volume fractions (shared across the package).
EPS_VOF = 1e-14


# ---------------------------------------------------------------------------
# canonical kernels (p sorted ascending, 0 <= a <= (p1+..)/2, p_i >= 0)
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _cut2_canonical(p1, p2, a):
    """Area fraction and centroid of {p1 x1 + p2 x2 <= a} in the unit square."""
    if a <= 0.0:
        return 0.0, 0.5, 0.5
    if p1 <= 0.0:
        v = a / p2
        return v, 0.5, 0.5 * v
    if a <= p1:
        # corner triangle
        v = a * a / (2.0 * p1 * p2)
        return v, a / (3.0 * p1), a / (3.0 * p2)
    # trapezoid: a in (p1, (p1+p2)/2]
    a2 = p1 * (2.0 * a - p1)
    m1 = p1 * (3.0 * a - 2.0 * p1) / 3.0
    m2 = p1 * (3.0 * a * (a - p1) + p1 * p1) / (3.0 * p2)
    return a2 / (2.0 * p1 * p2), m1 / a2, m2 / a2


@njit(cache=True, inline="always")
def _cut3_canonical(p1, p2, p3, a):
    """Volume fraction and centroid of {p . x <= a} in the unit cube, canonical."""
    if a <= 0.0:
        return 0.0, 0.5, 0.5, 0.5
    if p1 <= 0.0:
        if p2 <= 0.0:
            v = a / p3
            return v, 0.5, 0.5, 0.5 * v
        v, c2, c3 = _cut2_canonical(p2, p3, a)
        return v, 0.5, c2, c3
    d6 = 6.0 * p1 * p2 * p3
    p12 = p1 + p2
    if a <= p1:
        # config 1: corner tetrahedron
        v6 = a * a * a
        return v6 / d6, a / (4.0 * p1), a / (4.0 * p2), a / (4.0 * p3)
    if a <= p2:
        # config 2: one intercept clipped
        v6 = p1 * (3.0 * a * (a - p1) + p1 * p1)
        d4 = p1 * (4.0 * a * a * a - 6.0 * a * a * p1 + 4.0 * a * p1 * p1 - p1 ** 3)
        m1 = 0.25 * p1 * (6.0 * a * a - 8.0 * a * p1 + 3.0 * p1 * p1)
        return v6 / d6, m1 / v6, d4 / (4.0 * p2) / v6, d4 / (4.0 * p3) / v6
    mc = p12 if p12 < p3 else p3
    if a <= mc:
        # config 3: two intercepts clipped.  q2 <= p1 here, so every term is
        # O(p1) and the formulas stay accurate down to p1 -> 0 (prism limit).
        q1 = a - p1
        q2 = a - p2
        v6 = p1 * (3.0 * a * q1 + p1 * p1) - q2 ** 3
        d4_1 = p1 * (4.0 * a * a * a - 6.0 * a * a * p1 + 4.0 * a * p1 * p1 - p1 ** 3)
        m1 = 0.25 * p1 * (6.0 * a * a - 8.0 * a * p1 + 3.0 * p1 * p1) - q2 ** 4 / (4.0 * p1)
        m2 = d4_1 / (4.0 * p2) - q2 ** 3 - q2 ** 4 / (4.0 * p2)
        m3 = (d4_1 - q2 ** 4) / (4.0 * p3)
        return v6 / d6, m1 / v6, m2 / v6, m3 / v6
    if p3 < p12:
        # config 4: hexagonal interface; q2 <= p1 and q3 <= p1/2, same scaling.
        q1 = a - p1
        q2 = a - p2
        q3 = a - p3
        v6 = p1 * (3.0 * a * q1 + p1 * p1) - q2 ** 3 - q3 ** 3
        d4_1 = p1 * (4.0 * a * a * a - 6.0 * a * a * p1 + 4.0 * a * p1 * p1 - p1 ** 3)
        m1 = 0.25 * p1 * (6.0 * a * a - 8.0 * a * p1 + 3.0 * p1 * p1) - (q2 ** 4 + q3 ** 4) / (4.0 * p1)
        m2 = d4_1 / (4.0 * p2) - q2 ** 3 - (q2 ** 4 + q3 ** 4) / (4.0 * p2)
        m3 = (d4_1 - q2 ** 4) / (4.0 * p3) - q3 ** 3 - q3 ** 4 / (4.0 * p3)
        return v6 / d6, m1 / v6, m2 / v6, m3 / v6
    # config 5: oblique slab (p1 + p2 < a, interface misses the x3 faces)
    v6 = 3.0 * p1 * p2 * (2.0 * a - p12)
    m1 = 0.5 * p1 * p2 * (6.0 * a - 4.0 * p1 - 3.0 * p2)
    m2 = 0.5 * p1 * p2 * (6.0 * a - 3.0 * p1 - 4.0 * p2)
    m3 = 0.5 * p1 * p2 * (6.0 * a * a - 6.0 * a * p12
                          + 2.0 * p1 * p1 + 3.0 * p1 * p2 + 2.0 * p2 * p2) / p3
    return v6 / d6, m1 / v6, m2 / v6, m3 / v6


@njit(cache=True, inline="always")
def _vol3_canonical(p1, p2, p3, a):
    """Volume fraction only (canonical); cheaper than the centroid kernel."""
    if a <= 0.0:
        return 0.0
    if p1 <= 0.0:
        if p2 <= 0.0:
            return a / p3
        return _vol2_canonical(p2, p3, a)
    d6 = 6.0 * p1 * p2 * p3
    p12 = p1 + p2
    if a <= p1:
        return a * a * a / d6
    if a <= p2:
        return p1 * (3.0 * a * (a - p1) + p1 * p1) / d6
    mc = p12 if p12 < p3 else p3
    if a <= mc:
        return (p1 * (3.0 * a * (a - p1) + p1 * p1) - (a - p2) ** 3) / d6
    if p3 < p12:
        return (p1 * (3.0 * a * (a - p1) + p1 * p1) - (a - p2) ** 3 - (a - p3) ** 3) / d6
    return (2.0 * a - p12) / (2.0 * p3)


@njit(cache=True, inline="always")
def _vol2_canonical(p1, p2, a):
    if a <= 0.0:
        return 0.0
    if p1 <= 0.0:
        return a / p2
    if a <= p1:
        return a * a / (2.0 * p1 * p2)
    return (2.0 * a - p1) / (2.0 * p2)


# ---------------------------------------------------------------------------
# raw-frame kernels: arbitrary signs / order / side, inline canonicalization
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _prep3(m1, m2, m3, alpha, d1, d2, d3):
    """Scale, mirror and zero-threshold a raw 3D spec.

    Returns (p1, p2, p3, a, f1, f2, f3, amax) with p_i >= 0 (unsorted) and
    f_i = 1.0 where axis i was mirrored.
    """
    p1 = m1 * d1
    p2 = m2 * d2
    p3 = m3 * d3
    a = alpha
    f1 = f2 = f3 = 0.0
    if p1 < 0.0:
        a -= p1
        p1 = -p1
        f1 = 1.0
    if p2 < 0.0:
        a -= p2
        p2 = -p2
        f2 = 1.0
    if p3 < 0.0:
        a -= p3
        p3 = -p3
        f3 = 1.0
    pm = max(p1, max(p2, p3))
    tol = REL_ZERO * pm
    if p1 < tol:
        p1 = 0.0
    if p2 < tol:
        p2 = 0.0
    if p3 < tol:
        p3 = 0.0
    return p1, p2, p3, a, f1, f2, f3, p1 + p2 + p3


@njit(cache=True, inline="always")
def _sort3(p1, p2, p3):
    """Ascending sort of three values plus the inverse-permutation labels."""
    i1, i2, i3 = 0, 1, 2
    if p1 > p2:
        p1, p2 = p2, p1
        i1, i2 = i2, i1
    if p2 > p3:
        p2, p3 = p3, p2
        i2, i3 = i3, i2
    if p1 > p2:
        p1, p2 = p2, p1
        i1, i2 = i2, i1
    return p1, p2, p3, i1, i2, i3


@njit(cache=True)
def cut3(m1, m2, m3, alpha, d1, d2, d3):
    """Volume fraction of {m . x <= alpha} in the box [0,d1]x[0,d2]x[0,d3]."""
    p1, p2, p3, a, f1, f2, f3, amax = _prep3(m1, m2, m3, alpha, d1, d2, d3)
    if amax <= 0.0:
        return np.nan
    if a <= 0.0:
        return 0.0
    if a >= amax:
        return 1.0
    comp = a > 0.5 * amax
    if comp:
        a = amax - a
    s1, s2, s3, _, _, _ = _sort3(p1, p2, p3)
    v = _vol3_canonical(s1, s2, s3, a)
    if comp:
        v = 1.0 - v
    if v < 0.0:
        v = 0.0
    if v > 1.0:
        v = 1.0
    return v


@njit(cache=True)
def cutc3(m1, m2, m3, alpha, d1, d2, d3):
    """Volume fraction and centroid (unit-box fractions) of a raw 3D cut."""
    p1, p2, p3, a, f1, f2, f3, amax = _prep3(m1, m2, m3, alpha, d1, d2, d3)
    if amax <= 0.0:
        return np.nan, 0.5, 0.5, 0.5
    if a <= 0.0:
        return 0.0, 0.5, 0.5, 0.5
    if a >= amax:
        return 1.0, 0.5, 0.5, 0.5
    comp = a > 0.5 * amax
    if comp:
        a = amax - a
    s1, s2, s3, i1, i2, i3 = _sort3(p1, p2, p3)
    v, cs1, cs2, cs3 = _cut3_canonical(s1, s2, s3, a)
    # undo sort
    c = np.empty(3)
    c[i1] = cs1
    c[i2] = cs2
    c[i3] = cs3
    if comp:
        # true region = box minus the mirror image of the canonical cut
        vc = v
        v = 1.0 - vc
        c[0] = (0.5 - vc * (1.0 - c[0])) / v
        c[1] = (0.5 - vc * (1.0 - c[1])) / v
        c[2] = (0.5 - vc * (1.0 - c[2])) / v
    if f1 == 1.0:
        c[0] = 1.0 - c[0]
    if f2 == 1.0:
        c[1] = 1.0 - c[1]
    if f3 == 1.0:
        c[2] = 1.0 - c[2]
    if v < 0.0:
        v = 0.0
    if v > 1.0:
        v = 1.0
    for k in range(3):
        if c[k] < 0.0:
            c[k] = 0.0
        if c[k] > 1.0:
            c[k] = 1.0
    return v, c[0], c[1], c[2]


@njit(cache=True, inline="always")
def _prep2(m1, m2, alpha, d1, d2):
    p1 = m1 * d1
    p2 = m2 * d2
    a = alpha
    f1 = f2 = 0.0
    if p1 < 0.0:
        a -= p1
        p1 = -p1
        f1 = 1.0
    if p2 < 0.0:
        a -= p2
        p2 = -p2
        f2 = 1.0
    pm = max(p1, p2)
    tol = REL_ZERO * pm
    if p1 < tol:
        p1 = 0.0
    if p2 < tol:
        p2 = 0.0
    return p1, p2, a, f1, f2, p1 + p2


@njit(cache=True)
def cut2(m1, m2, alpha, d1, d2):
    """Area fraction of {m . x <= alpha} in the rectangle [0,d1]x[0,d2]."""
    p1, p2, a, f1, f2, amax = _prep2(m1, m2, alpha, d1, d2)
    if amax <= 0.0:
        return np.nan
    if a <= 0.0:
        return 0.0
    if a >= amax:
        return 1.0
    comp = a > 0.5 * amax
    if comp:
        a = amax - a
    if p1 <= p2:
        v = _vol2_canonical(p1, p2, a)
    else:
        v = _vol2_canonical(p2, p1, a)
    if comp:
        v = 1.0 - v
    if v < 0.0:
        v = 0.0
    if v > 1.0:
        v = 1.0
    return v


@njit(cache=True)
def cutc2(m1, m2, alpha, d1, d2):
    """Area fraction and centroid (unit-square fractions) of a raw 2D cut."""
    p1, p2, a, f1, f2, amax = _prep2(m1, m2, alpha, d1, d2)
    if amax <= 0.0:
        return np.nan, 0.5, 0.5
    if a <= 0.0:
        return 0.0, 0.5, 0.5
    if a >= amax:
        return 1.0, 0.5, 0.5
    comp = a > 0.5 * amax
    if comp:
        a = amax - a
    if p1 <= p2:
        v, cs1, cs2 = _cut2_canonical(p1, p2, a)
        c1, c2 = cs1, cs2
    else:
        v, cs1, cs2 = _cut2_canonical(p2, p1, a)
        c1, c2 = cs2, cs1
    if comp:
        vc = v
        v = 1.0 - vc
        c1 = (0.5 - vc * (1.0 - c1)) / v
        c2 = (0.5 - vc * (1.0 - c2)) / v
    if f1 == 1.0:
        c1 = 1.0 - c1
    if f2 == 1.0:
        c2 = 1.0 - c2
    if v < 0.0:
        v = 0.0
    if v > 1.0:
        v = 1.0
    if c1 < 0.0:
        c1 = 0.0
    if c1 > 1.0:
        c1 = 1.0
    if c2 < 0.0:
        c2 = 0.0
    if c2 > 1.0:
        c2 = 1.0
    return v, c1, c2


# ---------------------------------------------------------------------------
# flood: invert the volume map for alpha
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _flood3_canonical(p1, p2, p3, w):
    """alpha with _vol3_canonical(p1,p2,p3,alpha) == w, for w in [0, 1/2]."""
    amax = p1 + p2 + p3
    if w <= 0.0:
        return 0.0
    if w >= 0.5:
        return 0.5 * amax
    if p1 <= 0.0:
        if p2 <= 0.0:
            return w * p3
        return _flood2_canonical(p2, p3, w)
    d6 = 6.0 * p1 * p2 * p3
    w6 = w * d6
    if w6 <= p1 ** 3:
        # config 1
        a = np.cbrt(w6)
    else:
        v6_p2 = p1 * (3.0 * p2 * (p2 - p1) + p1 * p1)
        if w6 <= v6_p2:
            # config 2 closed form
            a = 0.5 * p1 + 0.5 * np.sqrt((4.0 * w6 - p1 ** 3) / (3.0 * p1))
        else:
            p12 = p1 + p2
            if p12 < p3:
                mc = p12
            else:
                mc = p3
            v6_mc = p1 * (3.0 * mc * (mc - p1) + p1 * p1) - (mc - p2) ** 3
            if w6 <= v6_mc:
                # config 3: bracketed Newton on the cubic
                a = _newton3(p1, p2, p3, w6, p2, mc, 3)
            elif p12 < p3:
                # config 5: linear in alpha
                a = 0.5 * (w6 / (3.0 * p1 * p2) + p12)
            else:
                # config 4: bracketed Newton
                a = _newton3(p1, p2, p3, w6, p3, 0.5 * amax, 4)
    # polish on the assembled volume to drive |V(a) - w| to rounding level
    for _ in range(2):
        v = _vol3_canonical(p1, p2, p3, a)
        dv = _area3_canonical(p1, p2, p3, a)
        if dv <= 0.0:
            break
        step = (v - w) / dv
        a -= step
        if a < 0.0:
            a = 0.0
        if a > 0.5 * amax:
            a = 0.5 * amax
        if abs(step) < 1e-17 * amax:
            break
    return a


@njit(cache=True, inline="always")
def _area3_canonical(p1, p2, p3, a):
    """d(V6)/da / d6 = dV/da for the canonical cut (cross-section measure)."""
    s = a * a
    q = a - p1
    if q > 0.0:
        s -= q * q
    q = a - p2
    if q > 0.0:
        s -= q * q
    q = a - p3
    if q > 0.0:
        s -= q * q
    q = a - p1 - p2
    if q > 0.0:
        s += q * q
    return 3.0 * s / (6.0 * p1 * p2 * p3)


@njit(cache=True, inline="always")
def _newton3(p1, p2, p3, w6, lo, hi, config):
    """Solve V6(a) = w6 on [lo, hi] for configs 3/4 (monotone cubic)."""
    v_lo = p1 * (3.0 * lo * (lo - p1) + p1 * p1) - _pos3(lo - p2)
    v_hi = p1 * (3.0 * hi * (hi - p1) + p1 * p1) - _pos3(hi - p2)
    if config == 4:
        v_lo -= _pos3(lo - p3)
        v_hi -= _pos3(hi - p3)
    if v_hi <= v_lo:
        return 0.5 * (lo + hi)
    a = lo + (hi - lo) * (w6 - v_lo) / (v_hi - v_lo)
    for _ in range(30):
        v6 = p1 * (3.0 * a * (a - p1) + p1 * p1) - _pos3(a - p2)
        if config == 4:
            v6 -= _pos3(a - p3)
        g = v6 - w6
        if g > 0.0:
            hi = a
        else:
            lo = a
        dv6 = a * a - _pos2(a - p1) - _pos2(a - p2)
        if config == 4:
            dv6 -= _pos2(a - p3)
        dv6 *= 3.0
        if dv6 > 0.0:
            an = a - g / dv6
        else:
            an = 0.5 * (lo + hi)
        if an <= lo or an >= hi:
            an = 0.5 * (lo + hi)
        if abs(an - a) <= 4e-16 * (p1 + p2 + p3):
            a = an
            break
        a = an
    return a


@njit(cache=True, inline="always")
def _pos3(y):
    return y * y * y if y > 0.0 else 0.0


@njit(cache=True, inline="always")
def _pos2(y):
    return y * y if y > 0.0 else 0.0


@njit(cache=True, inline="always")
def _flood2_canonical(p1, p2, w):
    """alpha with _vol2_canonical(p1,p2,alpha) == w, for w in [0, 1/2], p1<=p2."""
    amax = p1 + p2
    if w <= 0.0:
        return 0.0
    if w >= 0.5:
        return 0.5 * amax
    if p1 <= 0.0:
        return w * p2
    w2 = w * 2.0 * p1 * p2
    if w2 <= p1 * p1:
        a = np.sqrt(w2)
    else:
        a = 0.5 * (w2 / p1 + p1)
    # single Newton polish (area derivative)
    v = _vol2_canonical(p1, p2, a)
    da = a if a <= p1 else p1
    dv = da / (p1 * p2)
    if dv > 0.0:
        a -= (v - w) / dv
        if a < 0.0:
            a = 0.0
        if a > 0.5 * amax:
            a = 0.5 * amax
    return a


@njit(cache=True)
def flood3(m1, m2, m3, d1, d2, d3, target):
    """Raw-frame flood: alpha such that cut3(m, alpha, d) == target."""
    p1, p2, p3, a0, f1, f2, f3, amax = _prep3(m1, m2, m3, 0.0, d1, d2, d3)
    if amax <= 0.0:
        return np.nan
    comp = target > 0.5
    w = 1.0 - target if comp else target
    s1, s2, s3, _, _, _ = _sort3(p1, p2, p3)
    a = _flood3_canonical(s1, s2, s3, w)
    if comp:
        a = amax - a
    # a0 = -sum of negative raw p contributions; invert the mirror shift
    return a - a0


@njit(cache=True)
def flood2(m1, m2, d1, d2, target):
    """Raw-frame flood in 2D."""
    p1, p2, a0, f1, f2, amax = _prep2(m1, m2, 0.0, d1, d2)
    if amax <= 0.0:
        return np.nan
    comp = target > 0.5
    w = 1.0 - target if comp else target
    if p1 <= p2:
        a = _flood2_canonical(p1, p2, w)
    else:
        a = _flood2_canonical(p2, p1, w)
    if comp:
        a = amax - a
    return a - a0
