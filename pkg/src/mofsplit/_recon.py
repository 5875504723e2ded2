"""Gauss-Newton MOF reconstruction kernels (numba).

Minimizes the distance between the reference centroid and the centroid of a
plane cut whose volume fraction is pinned to the reference value by the
flood kernel (the volume constraint is exact at every iterate).  The normal
is parameterized by spherical angles (one angle in 2D) with the chart
permuted so the initial normal sits away from the poles; the Jacobian comes
from centered finite differences.  At most ``MAX_ITER`` iterations; stops on
objective value, objective decrease, or normalized gradient below ``TOL``;
non-convergence returns the best iterate rather than failing.
"""

import numpy as np
from numba import njit

from ._geom import cutc2, cutc3, flood2, flood3

MAX_ITER = 10
TOL = 1e-8
FD_STEP = 1e-6


@njit(cache=True, inline="always")
def _eval3(phi, theta, cref, xr1, xr2, xr3, d1, d2, d3):
    """Residual vector (physical units) for angles (phi, theta)."""
    sp = np.sin(phi)
    n1 = sp * np.cos(theta)
    n2 = sp * np.sin(theta)
    n3 = np.cos(phi)
    alpha = flood3(n1, n2, n3, d1, d2, d3, cref)
    v, c1, c2, c3 = cutc3(n1, n2, n3, alpha, d1, d2, d3)
    return (c1 - xr1) * d1, (c2 - xr2) * d2, (c3 - xr3) * d3, alpha


@njit(cache=True)
def _recon3_chart(cref, xr1, xr2, xr3, d1, d2, d3, g1, g2, g3):
    """Optimize in a fixed chart; g is the (non-pole) initial normal."""
    gn = np.sqrt(g1 * g1 + g2 * g2 + g3 * g3)
    phi = np.arccos(min(1.0, max(-1.0, g3 / gn)))
    theta = np.arctan2(g2, g1)

    f1, f2, f3, _ = _eval3(phi, theta, cref, xr1, xr2, xr3, d1, d2, d3)
    err = np.sqrt(f1 * f1 + f2 * f2 + f3 * f3)
    best_phi, best_theta, best_err = phi, theta, err
    h = FD_STEP
    it = 0
    while it < MAX_ITER and err > TOL:
        it += 1
        a1, a2, a3, _ = _eval3(phi + h, theta, cref, xr1, xr2, xr3, d1, d2, d3)
        b1, b2, b3, _ = _eval3(phi - h, theta, cref, xr1, xr2, xr3, d1, d2, d3)
        j11 = (a1 - b1) / (2.0 * h)
        j21 = (a2 - b2) / (2.0 * h)
        j31 = (a3 - b3) / (2.0 * h)
        a1, a2, a3, _ = _eval3(phi, theta + h, cref, xr1, xr2, xr3, d1, d2, d3)
        b1, b2, b3, _ = _eval3(phi, theta - h, cref, xr1, xr2, xr3, d1, d2, d3)
        j12 = (a1 - b1) / (2.0 * h)
        j22 = (a2 - b2) / (2.0 * h)
        j32 = (a3 - b3) / (2.0 * h)

        s11 = j11 * j11 + j21 * j21 + j31 * j31
        s12 = j11 * j12 + j21 * j22 + j31 * j32
        s22 = j12 * j12 + j22 * j22 + j32 * j32
        gr1 = j11 * f1 + j21 * f2 + j31 * f3
        gr2 = j12 * f1 + j22 * f2 + j32 * f3
        det = s11 * s22 - s12 * s12
        tr = s11 + s22
        if tr <= 0.0:
            break
        # gradient of err itself; scale-free stationarity measure
        if np.sqrt(gr1 * gr1 + gr2 * gr2) / err < TOL:
            break
        if det > 1e-12 * tr * tr:
            dphi = -(s22 * gr1 - s12 * gr2) / det
            dtheta = -(s11 * gr2 - s12 * gr1) / det
        else:
            dphi = -gr1 / tr
            dtheta = -gr2 / tr

        improved = False
        decrease = 0.0
        for attempt in range(2):
            lam = 1.0
            for _ in range(10):
                t1, t2, t3, _ = _eval3(phi + lam * dphi, theta + lam * dtheta,
                                       cref, xr1, xr2, xr3, d1, d2, d3)
                e_new = np.sqrt(t1 * t1 + t2 * t2 + t3 * t3)
                if e_new < err:
                    phi += lam * dphi
                    theta += lam * dtheta
                    f1, f2, f3 = t1, t2, t3
                    decrease = err - e_new
                    err = e_new
                    improved = True
                    break
                lam *= 0.5
            if improved or attempt == 1:
                break
            # Gauss-Newton step rejected (kink or bad curvature): try along
            # the raw gradient before giving up
            gg = np.sqrt(gr1 * gr1 + gr2 * gr2)
            dphi = -gr1 / gg * 0.1
            dtheta = -gr2 / gg * 0.1
        if not improved:
            break
        if err < best_err:
            best_phi, best_theta, best_err = phi, theta, err
        if decrease < TOL:
            break

    sp = np.sin(best_phi)
    return (sp * np.cos(best_theta), sp * np.sin(best_theta),
            np.cos(best_phi), best_err, it)


@njit(cache=True)
def recon3(cref, xr1, xr2, xr3, d1, d2, d3):
    """Best-fit plane for a 3D cell.

    Returns (n1, n2, n3, alpha, err, iters): unit normal, plane constant in
    cell-local physical coordinates, final centroid defect, iterations used.
    """
    g1 = (0.5 - xr1) * d1
    g2 = (0.5 - xr2) * d2
    g3 = (0.5 - xr3) * d3
    gn = np.sqrt(g1 * g1 + g2 * g2 + g3 * g3)
    if gn < 1e-12 * max(d1, max(d2, d3)):
        g1, g2, g3 = 0.0, 0.0, 1.0

    # put the smallest initial component on the chart's polar axis
    a1 = abs(g1)
    a2 = abs(g2)
    a3 = abs(g3)
    if a3 <= a1 and a3 <= a2:
        n1, n2, n3, err, it = _recon3_chart(cref, xr1, xr2, xr3,
                                            d1, d2, d3, g1, g2, g3)
    elif a1 <= a2:
        # cycle axes (2,3,1) -> chart z-slot holds axis 1
        m2, m3, m1, err, it = _recon3_chart(cref, xr2, xr3, xr1,
                                            d2, d3, d1, g2, g3, g1)
        n1, n2, n3 = m1, m2, m3
    else:
        # cycle axes (3,1,2) -> chart z-slot holds axis 2
        m3, m1, m2, err, it = _recon3_chart(cref, xr3, xr1, xr2,
                                            d3, d1, d2, g3, g1, g2)
        n1, n2, n3 = m1, m2, m3
    alpha = flood3(n1, n2, n3, d1, d2, d3, cref)
    return n1, n2, n3, alpha, err, it


@njit(cache=True, inline="always")
def _eval2(theta, cref, xr1, xr2, d1, d2):
    n1 = np.cos(theta)
    n2 = np.sin(theta)
    alpha = flood2(n1, n2, d1, d2, cref)
    v, c1, c2 = cutc2(n1, n2, alpha, d1, d2)
    return (c1 - xr1) * d1, (c2 - xr2) * d2, alpha


@njit(cache=True)
def recon2(cref, xr1, xr2, d1, d2):
    """Best-fit line for a 2D cell; returns (n1, n2, alpha, err, iters)."""
    g1 = (0.5 - xr1) * d1
    g2 = (0.5 - xr2) * d2
    if g1 * g1 + g2 * g2 < (1e-12 * max(d1, d2)) ** 2:
        g1, g2 = 0.0, 1.0
    theta = np.arctan2(g2, g1)

    f1, f2, alpha = _eval2(theta, cref, xr1, xr2, d1, d2)
    err = np.sqrt(f1 * f1 + f2 * f2)
    best_theta, best_err = theta, err
    h = FD_STEP
    it = 0
    while it < MAX_ITER and err > TOL:
        it += 1
        a1, a2, _ = _eval2(theta + h, cref, xr1, xr2, d1, d2)
        b1, b2, _ = _eval2(theta - h, cref, xr1, xr2, d1, d2)
        j1 = (a1 - b1) / (2.0 * h)
        j2 = (a2 - b2) / (2.0 * h)
        jj = j1 * j1 + j2 * j2
        jf = j1 * f1 + j2 * f2
        if jj <= 0.0:
            break
        if abs(jf) / err < TOL:
            break
        dtheta = -jf / jj

        improved = False
        decrease = 0.0
        for attempt in range(2):
            lam = 1.0
            for _ in range(10):
                t1, t2, ta = _eval2(theta + lam * dtheta, cref, xr1, xr2, d1, d2)
                e_new = np.sqrt(t1 * t1 + t2 * t2)
                if e_new < err:
                    theta += lam * dtheta
                    f1, f2, alpha = t1, t2, ta
                    decrease = err - e_new
                    err = e_new
                    improved = True
                    break
                lam *= 0.5
            if improved or attempt == 1:
                break
            dtheta = (-1.0 if jf > 0.0 else 1.0) * 0.1
        if not improved:
            break
        if err < best_err:
            best_theta, best_err = theta, err
        if decrease < TOL:
            break

    n1 = np.cos(best_theta)
    n2 = np.sin(best_theta)
    alpha = flood2(n1, n2, d1, d2, cref)
    return n1, n2, alpha, best_err, it
