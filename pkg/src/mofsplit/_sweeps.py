"""Directional-split sweep kernels (numba).

Layout contract: every kernel sweeps along axis 0 of the arrays it is
handed; callers pass transposed views so one kernel serves all axes.  Cell
arrays are ghost-padded by ``ng`` on every axis; the face-displacement
array ``af`` holds Courant numbers u*dt/dx at faces, indexed so ``af[i]``
is the left face of cell ``i`` (one extra entry along axis 0).

Sweep kinds: 0 = Eulerian implicit, 1 = Lagrangian explicit, 2 = Eulerian
algebraic (middle sweep, volume update only), 3 = Weymouth-Yue (EI fluxes
plus the binary divergence correction).  Kinds 0, 2, 3 flux from upwind
donor slabs of the departure decomposition; kind 1 maps each cell's
material forward and re-intersects the grid.  The centroid always moves by
the EI/LE geometric prescription (for kinds 2/3 the EI map, as in the
scheme definitions).

Every kernel finishes with the bound repair fused in: fractions inside one
repair epsilon of 0/1 snap exactly; genuine violations revalue to eps or
1-eps and count as repairs; pure cells take the cell-center centroid.

Material flags: 0 empty, 1 full, 2 mixed (set by the reconstruction pass).
"""

import numpy as np
from numba import njit

from ._geom import EPS_VOF, cutc2, cutc3
from ._recon import recon2, recon3


@njit(cache=True, inline="always")
def _slab3(flag, qa, qt1, qt2, al, x0, x1):
    """Material of a donor cell inside the local slab [x0, x1] (unit coords).

    Returns (volume, sweep-axis centroid, transverse centroids) donor-local.
    """
    w = x1 - x0
    if w <= 0.0 or flag == 0:
        return 0.0, 0.5 * (x0 + x1), 0.5, 0.5
    if flag == 1:
        return w, 0.5 * (x0 + x1), 0.5, 0.5
    v, cx, c1, c2 = cutc3(qa, qt1, qt2, al - qa * x0, w, 1.0, 1.0)
    return v * w, x0 + w * cx, c1, c2


@njit(cache=True, inline="always")
def _slab2(flag, qa, qt, al, x0, x1):
    w = x1 - x0
    if w <= 0.0 or flag == 0:
        return 0.0, 0.5 * (x0 + x1), 0.5
    if flag == 1:
        return w, 0.5 * (x0 + x1), 0.5
    v, cx, c1 = cutc2(qa, qt, al - qa * x0, w, 1.0)
    return v * w, x0 + w * cx, c1


@njit(cache=True, inline="always")
def _repair_cell(c, eps):
    """Returns (repaired C, pure-flag, counted) applying the revaluation rule.

    Violations beyond one epsilon revalue to eps / 1-eps and count; rounding
    spill inside the epsilon band snaps to the exact bound without counting
    (a counted event there would poison the machine-precision conservation
    diagnostics with float noise).
    """
    counted = 0
    if c < 0.0:
        if c < -eps:
            c = eps
            counted = 1
        else:
            c = 0.0
    elif c > 1.0:
        if c > 1.0 + eps:
            c = 1.0 - eps
            counted = 1
        else:
            c = 1.0
    if c <= eps:
        return c, 0, counted
    if c >= 1.0 - eps:
        return c, 1, counted
    return c, 2, counted


@njit(cache=True, inline="always")
def _clamp_interior(x, eps):
    """Clamp a mixed-cell centroid component into (0,1); count real spills."""
    if x < eps:
        return eps, (1 if x < -eps else 0)
    if x > 1.0 - eps:
        return 1.0 - eps, (1 if x > 1.0 + eps else 0)
    return x, 0


@njit(cache=True)
def sweep3(kind, C, XA, XT1, XT2, QA, QT1, QT2, AL, FLAG,
           Cn, XAn, XT1n, XT2n, af, ctil, fea_num, fea_den, ng):
    """One directional sweep over a 3D state (axis 0 of the passed views).

    fea_num/fea_den: per-cell EA factors (1 - du on the EI axis, 1 + dw on
    the LE axis); ignored unless kind == 2.  ctil: frozen binary correction,
    used only by kind 3.  Writes interior cells of the output arrays and
    returns the repair count.
    """
    n0g, n1g, n2g = C.shape
    eps = EPS_VOF
    F = np.empty(n0g + 1)
    FX = np.empty(n0g + 1)
    FT1 = np.empty(n0g + 1)
    FT2 = np.empty(n0g + 1)
    repairs = 0

    for j in range(ng, n1g - ng):
        for k in range(ng, n2g - ng):
            # translation pencil: the LE map degenerates to the EI picture,
            # so run the EI arithmetic and keep the schemes bit-identical
            kind_p = kind
            if kind == 1 or kind == 3:
                a0 = af[ng - 1, j, k]
                uniform = True
                for i in range(ng, n0g - ng + 2):
                    if af[i, j, k] != a0:
                        uniform = False
                        break
                if uniform:
                    kind_p = 0
            # ---- face fluxes for this pencil -------------------------------
            for i in range(ng, n0g - ng + 1):
                a = af[i, j, k]
                if a == 0.0:
                    F[i] = 0.0
                    FX[i] = 0.0
                    FT1[i] = 0.5
                    FT2[i] = 0.5
                    continue
                if kind_p == 1:
                    if a > 0.0:
                        dn = i - 1
                        ul = af[dn, j, k]
                        g = 1.0 - ul + a
                        x0 = (1.0 - ul) / g
                        x1 = (1.0 + a - ul) / g
                        if x1 > 1.0:
                            x1 = 1.0
                        vol, cx, c1, c2 = _slab3(FLAG[dn, j, k], QA[dn, j, k],
                                                 QT1[dn, j, k], QT2[dn, j, k],
                                                 AL[dn, j, k], x0, x1)
                        F[i] = g * vol
                        FX[i] = g * cx + ul
                    else:
                        dn = i
                        ur = af[i + 1, j, k]
                        g = 1.0 - a + ur
                        x1 = (0.0 - a) / g
                        if x1 > 1.0:
                            x1 = 1.0
                        vol, cx, c1, c2 = _slab3(FLAG[dn, j, k], QA[dn, j, k],
                                                 QT1[dn, j, k], QT2[dn, j, k],
                                                 AL[dn, j, k], 0.0, x1)
                        F[i] = g * vol
                        FX[i] = g * cx + a
                    FT1[i] = c1
                    FT2[i] = c2
                else:
                    if a > 0.0:
                        dn = i - 1
                        vol, cx, c1, c2 = _slab3(FLAG[dn, j, k], QA[dn, j, k],
                                                 QT1[dn, j, k], QT2[dn, j, k],
                                                 AL[dn, j, k], 1.0 - a, 1.0)
                    else:
                        dn = i
                        vol, cx, c1, c2 = _slab3(FLAG[dn, j, k], QA[dn, j, k],
                                                 QT1[dn, j, k], QT2[dn, j, k],
                                                 AL[dn, j, k], 0.0, -a)
                    F[i] = vol
                    FX[i] = cx
                    FT1[i] = c1
                    FT2[i] = c2

            # ---- cell updates ---------------------------------------------
            for i in range(ng, n0g - ng):
                fl_l = FLAG[i - 1, j, k]
                fl_c = FLAG[i, j, k]
                fl_r = FLAG[i + 1, j, k]
                if kind_p != 2 and fl_l == fl_c and fl_c == fl_r and fl_c != 2:
                    # uniform pure neighborhood: exact free-stream fast path
                    Cn[i, j, k] = C[i, j, k]
                    XAn[i, j, k] = 0.5
                    XT1n[i, j, k] = 0.5
                    XT2n[i, j, k] = 0.5
                    continue

                ul = af[i, j, k]
                ur = af[i + 1, j, k]
                fin_l = F[i] if ul > 0.0 else 0.0
                fin_r = F[i + 1] if ur < 0.0 else 0.0

                if kind_p == 1:
                    g = 1.0 - ul + ur
                    x0 = (0.0 if ul <= 0.0 else ul)
                    x1 = (1.0 if ur >= 0.0 else 1.0 + ur)
                    vol, cx, c1, c2 = _slab3(fl_c, QA[i, j, k], QT1[i, j, k],
                                             QT2[i, j, k], AL[i, j, k],
                                             (x0 - ul) / g, (x1 - ul) / g)
                    vc = g * vol
                    xc = g * cx + ul
                    cnew = vc + fin_l + fin_r
                    vs = cnew
                else:
                    x0 = -(ul if ul < 0.0 else 0.0)
                    x1 = 1.0 - (ur if ur > 0.0 else 0.0)
                    vol, cx, c1, c2 = _slab3(fl_c, QA[i, j, k], QT1[i, j, k],
                                             QT2[i, j, k], AL[i, j, k], x0, x1)
                    vc = vol
                    xc = cx
                    g = 1.0 + ul - ur
                    vs = vc + fin_l + fin_r
                    if kind_p == 0:
                        cnew = vs / g
                    elif kind_p == 3:
                        sl = F[i] if ul > 0.0 else -F[i]
                        sr = F[i + 1] if ur > 0.0 else -F[i + 1]
                        cnew = C[i, j, k] + sl - sr + ctil[i, j, k] * (ur - ul)
                    else:
                        sl = F[i] if ul > 0.0 else -F[i]
                        sr = F[i + 1] if ur > 0.0 else -F[i + 1]
                        cnew = (C[i, j, k] * fea_num[i, j, k] + sl - sr) / fea_den[i, j, k]

                cnew, pure, counted = _repair_cell(cnew, eps)
                repairs += counted
                Cn[i, j, k] = cnew
                if pure != 2 or vs <= 0.0:
                    XAn[i, j, k] = 0.5
                    XT1n[i, j, k] = 0.5
                    XT2n[i, j, k] = 0.5
                    continue

                sx = vc * xc
                st1 = vc * c1
                st2 = vc * c2
                if fin_l > 0.0:
                    sx += fin_l * (FX[i] - 1.0)
                    st1 += fin_l * FT1[i]
                    st2 += fin_l * FT2[i]
                if fin_r > 0.0:
                    sx += fin_r * (FX[i + 1] + 1.0)
                    st1 += fin_r * FT1[i + 1]
                    st2 += fin_r * FT2[i + 1]
                vsum = vc + fin_l + fin_r
                if vsum <= 0.0:
                    XAn[i, j, k] = 0.5
                    XT1n[i, j, k] = 0.5
                    XT2n[i, j, k] = 0.5
                    continue
                xbar = sx / vsum
                if kind_p == 1:
                    xnew = xbar
                else:
                    xnew = (xbar + ul) / (1.0 + ul - ur)
                xnew, r1 = _clamp_interior(xnew, eps)
                t1, r2 = _clamp_interior(st1 / vsum, eps)
                t2, r3 = _clamp_interior(st2 / vsum, eps)
                repairs += r1 + r2 + r3
                XAn[i, j, k] = xnew
                XT1n[i, j, k] = t1
                XT2n[i, j, k] = t2

    return repairs


@njit(cache=True)
def sweep2(kind, C, XA, XT1, QA, QT1, AL, FLAG,
           Cn, XAn, XT1n, af, ctil, fea_num, fea_den, ng):
    """2D variant of sweep3; see there."""
    n0g, n1g = C.shape
    eps = EPS_VOF
    F = np.empty(n0g + 1)
    FX = np.empty(n0g + 1)
    FT1 = np.empty(n0g + 1)
    repairs = 0

    for j in range(ng, n1g - ng):
        kind_p = kind
        if kind == 1 or kind == 3:
            a0 = af[ng - 1, j]
            uniform = True
            for i in range(ng, n0g - ng + 2):
                if af[i, j] != a0:
                    uniform = False
                    break
            if uniform:
                kind_p = 0
        for i in range(ng, n0g - ng + 1):
            a = af[i, j]
            if a == 0.0:
                F[i] = 0.0
                FX[i] = 0.0
                FT1[i] = 0.5
                continue
            if kind_p == 1:
                if a > 0.0:
                    dn = i - 1
                    ul = af[dn, j]
                    g = 1.0 - ul + a
                    x0 = (1.0 - ul) / g
                    x1 = (1.0 + a - ul) / g
                    if x1 > 1.0:
                        x1 = 1.0
                    vol, cx, c1 = _slab2(FLAG[dn, j], QA[dn, j], QT1[dn, j],
                                         AL[dn, j], x0, x1)
                    F[i] = g * vol
                    FX[i] = g * cx + ul
                else:
                    dn = i
                    ur = af[i + 1, j]
                    g = 1.0 - a + ur
                    x1 = (0.0 - a) / g
                    if x1 > 1.0:
                        x1 = 1.0
                    vol, cx, c1 = _slab2(FLAG[dn, j], QA[dn, j], QT1[dn, j],
                                         AL[dn, j], 0.0, x1)
                    F[i] = g * vol
                    FX[i] = g * cx + a
                FT1[i] = c1
            else:
                if a > 0.0:
                    dn = i - 1
                    vol, cx, c1 = _slab2(FLAG[dn, j], QA[dn, j], QT1[dn, j],
                                         AL[dn, j], 1.0 - a, 1.0)
                else:
                    dn = i
                    vol, cx, c1 = _slab2(FLAG[dn, j], QA[dn, j], QT1[dn, j],
                                         AL[dn, j], 0.0, -a)
                F[i] = vol
                FX[i] = cx
                FT1[i] = c1

        for i in range(ng, n0g - ng):
            fl_l = FLAG[i - 1, j]
            fl_c = FLAG[i, j]
            fl_r = FLAG[i + 1, j]
            if kind_p != 2 and fl_l == fl_c and fl_c == fl_r and fl_c != 2:
                Cn[i, j] = C[i, j]
                XAn[i, j] = 0.5
                XT1n[i, j] = 0.5
                continue

            ul = af[i, j]
            ur = af[i + 1, j]
            fin_l = F[i] if ul > 0.0 else 0.0
            fin_r = F[i + 1] if ur < 0.0 else 0.0

            if kind_p == 1:
                g = 1.0 - ul + ur
                x0 = (0.0 if ul <= 0.0 else ul)
                x1 = (1.0 if ur >= 0.0 else 1.0 + ur)
                vol, cx, c1 = _slab2(fl_c, QA[i, j], QT1[i, j], AL[i, j],
                                     (x0 - ul) / g, (x1 - ul) / g)
                vc = g * vol
                xc = g * cx + ul
                cnew = vc + fin_l + fin_r
                vs = cnew
            else:
                x0 = -(ul if ul < 0.0 else 0.0)
                x1 = 1.0 - (ur if ur > 0.0 else 0.0)
                vol, cx, c1 = _slab2(fl_c, QA[i, j], QT1[i, j], AL[i, j], x0, x1)
                vc = vol
                xc = cx
                g = 1.0 + ul - ur
                vs = vc + fin_l + fin_r
                if kind_p == 0:
                    cnew = vs / g
                elif kind_p == 3:
                    sl = F[i] if ul > 0.0 else -F[i]
                    sr = F[i + 1] if ur > 0.0 else -F[i + 1]
                    cnew = C[i, j] + sl - sr + ctil[i, j] * (ur - ul)
                else:
                    sl = F[i] if ul > 0.0 else -F[i]
                    sr = F[i + 1] if ur > 0.0 else -F[i + 1]
                    cnew = (C[i, j] * fea_num[i, j] + sl - sr) / fea_den[i, j]

            cnew, pure, counted = _repair_cell(cnew, eps)
            repairs += counted
            Cn[i, j] = cnew
            if pure != 2 or vs <= 0.0:
                XAn[i, j] = 0.5
                XT1n[i, j] = 0.5
                continue

            sx = vc * xc
            st1 = vc * c1
            if fin_l > 0.0:
                sx += fin_l * (FX[i] - 1.0)
                st1 += fin_l * FT1[i]
            if fin_r > 0.0:
                sx += fin_r * (FX[i + 1] + 1.0)
                st1 += fin_r * FT1[i + 1]
            vsum = vc + fin_l + fin_r
            if vsum <= 0.0:
                XAn[i, j] = 0.5
                XT1n[i, j] = 0.5
                continue
            xbar = sx / vsum
            if kind_p == 1:
                xnew = xbar
            else:
                xnew = (xbar + ul) / (1.0 + ul - ur)
            xnew, r1 = _clamp_interior(xnew, eps)
            t1, r2 = _clamp_interior(st1 / vsum, eps)
            repairs += r1 + r2
            XAn[i, j] = xnew
            XT1n[i, j] = t1

    return repairs


@njit(cache=True)
def recon_pass3(C, X0, X1, X2, Q0, Q1, Q2, AL, FLAG, d0, d1, d2, ng):
    """Classify cells and reconstruct the interface plane in mixed ones."""
    n0g, n1g, n2g = C.shape
    eps = EPS_VOF
    for i in range(ng, n0g - ng):
        for j in range(ng, n1g - ng):
            for k in range(ng, n2g - ng):
                c = C[i, j, k]
                if c <= eps:
                    FLAG[i, j, k] = 0
                elif c >= 1.0 - eps:
                    FLAG[i, j, k] = 1
                else:
                    FLAG[i, j, k] = 2
                    n1_, n2_, n3_, al, err, it = recon3(
                        c, X0[i, j, k], X1[i, j, k], X2[i, j, k], d0, d1, d2)
                    Q0[i, j, k] = n1_ * d0
                    Q1[i, j, k] = n2_ * d1
                    Q2[i, j, k] = n3_ * d2
                    AL[i, j, k] = al


@njit(cache=True)
def recon_pass2(C, X0, X1, Q0, Q1, AL, FLAG, d0, d1, ng):
    n0g, n1g = C.shape
    eps = EPS_VOF
    for i in range(ng, n0g - ng):
        for j in range(ng, n1g - ng):
            c = C[i, j]
            if c <= eps:
                FLAG[i, j] = 0
            elif c >= 1.0 - eps:
                FLAG[i, j] = 1
            else:
                FLAG[i, j] = 2
                n1_, n2_, al, err, it = recon2(c, X0[i, j], X1[i, j], d0, d1)
                Q0[i, j] = n1_ * d0
                Q1[i, j] = n2_ * d1
                AL[i, j] = al


@njit(cache=True)
def repair3(C, X0, X1, X2, ng):
    """Standalone bound repair; returns the number of repaired cells."""
    n0g, n1g, n2g = C.shape
    eps = EPS_VOF
    count = 0
    for i in range(ng, n0g - ng):
        for j in range(ng, n1g - ng):
            for k in range(ng, n2g - ng):
                c, pure, counted = _repair_cell(C[i, j, k], eps)
                cell_count = counted
                C[i, j, k] = c
                if pure != 2:
                    X0[i, j, k] = 0.5
                    X1[i, j, k] = 0.5
                    X2[i, j, k] = 0.5
                else:
                    X0[i, j, k], r0 = _clamp_interior(X0[i, j, k], eps)
                    X1[i, j, k], r1 = _clamp_interior(X1[i, j, k], eps)
                    X2[i, j, k], r2 = _clamp_interior(X2[i, j, k], eps)
                    if r0 + r1 + r2 > 0:
                        cell_count = 1
                count += cell_count
    return count


@njit(cache=True)
def repair2(C, X0, X1, ng):
    n0g, n1g = C.shape
    eps = EPS_VOF
    count = 0
    for i in range(ng, n0g - ng):
        for j in range(ng, n1g - ng):
            c, pure, counted = _repair_cell(C[i, j], eps)
            cell_count = counted
            C[i, j] = c
            if pure != 2:
                X0[i, j] = 0.5
                X1[i, j] = 0.5
            else:
                X0[i, j], r0 = _clamp_interior(X0[i, j], eps)
                X1[i, j], r1 = _clamp_interior(X1[i, j], eps)
                if r0 + r1 > 0:
                    cell_count = 1
            count += cell_count
    return count


@njit(cache=True)
def mass3(C, ng, cellvol):
    n0g, n1g, n2g = C.shape
    s = 0.0
    for i in range(ng, n0g - ng):
        for j in range(ng, n1g - ng):
            for k in range(ng, n2g - ng):
                s += C[i, j, k]
    return s * cellvol


@njit(cache=True)
def mass2(C, ng, cellvol):
    n0g, n1g = C.shape
    s = 0.0
    for i in range(ng, n0g - ng):
        for j in range(ng, n1g - ng):
            s += C[i, j]
    return s * cellvol
