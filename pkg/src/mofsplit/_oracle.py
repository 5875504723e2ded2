"""Brute-force half-space clipping oracle (numba inner loops).

Independent reference for the analytic cut kernels: clips the cell box
against ``{m . x <= alpha}`` face by face (Sutherland-Hodgman), closes the
cut with the cap polygon, and integrates volume and first moment by fanning
signed tetrahedra from the mean of the clipped vertices.  No shared code
with ``_geom``; used by tests and by the kernel timing benchmark.
"""

import numpy as np
from numba import njit

# box corner index = ix + 2*iy + 4*iz; faces listed with outward orientation
_FACES = np.array([
    [0, 4, 6, 2],   # x = 0
    [1, 3, 7, 5],   # x = d1
    [0, 1, 5, 4],   # y = 0
    [2, 6, 7, 3],   # y = d2
    [0, 2, 3, 1],   # z = 0
    [4, 5, 7, 6],   # z = d3
], dtype=np.int64)


@njit(cache=True)
def oracle3(m1, m2, m3, alpha, d1, d2, d3):
    """Volume fraction and centroid (unit-box fractions) by polyhedron clipping."""
    corners = np.empty((8, 3))
    for i in range(8):
        corners[i, 0] = d1 if (i & 1) else 0.0
        corners[i, 1] = d2 if (i & 2) else 0.0
        corners[i, 2] = d3 if (i & 4) else 0.0

    # signed distances; <= 0 is the kept side
    dist = np.empty(8)
    nneg = 0
    npos = 0
    for i in range(8):
        dist[i] = m1 * corners[i, 0] + m2 * corners[i, 1] + m3 * corners[i, 2] - alpha
        if dist[i] < 0.0:
            nneg += 1
        elif dist[i] > 0.0:
            npos += 1
    if npos == 0:
        return 1.0, 0.5, 0.5, 0.5
    if nneg == 0:
        return 0.0, 0.5, 0.5, 0.5

    apex = np.zeros(3)
    napex = 0
    clipped = np.empty((6, 8, 3))    # per-face clipped polygons
    nclip = np.zeros(6, dtype=np.int64)
    cap = np.empty((32, 3))
    ncap = 0

    for f in range(6):
        nout = 0
        out = clipped[f]
        for k in range(4):
            ia = _FACES[f, k]
            ib = _FACES[f, (k + 1) % 4]
            da = dist[ia]
            db = dist[ib]
            if da <= 0.0:
                out[nout, 0] = corners[ia, 0]
                out[nout, 1] = corners[ia, 1]
                out[nout, 2] = corners[ia, 2]
                nout += 1
                if da == 0.0:
                    # vertex exactly on the plane: part of the cap loop
                    cap[ncap, 0] = corners[ia, 0]
                    cap[ncap, 1] = corners[ia, 1]
                    cap[ncap, 2] = corners[ia, 2]
                    ncap += 1
            if (da < 0.0 and db > 0.0) or (da > 0.0 and db < 0.0):
                t = da / (da - db)
                for c in range(3):
                    p = corners[ia, c] + t * (corners[ib, c] - corners[ia, c])
                    out[nout, c] = p
                    cap[ncap, c] = p
                nout += 1
                ncap += 1
        nclip[f] = nout
        for k in range(nout):
            apex[0] += out[k, 0]
            apex[1] += out[k, 1]
            apex[2] += out[k, 2]
        napex += nout

    if napex == 0:
        return 0.0, 0.5, 0.5, 0.5
    for c in range(3):
        apex[c] /= napex

    vol6 = 0.0
    mom = np.zeros(3)
    for f in range(6):
        n = nclip[f]
        out = clipped[f]
        for k in range(1, n - 1):
            vol6, mom = _add_tet(apex, out[0], out[k], out[k + 1], vol6, mom)

    # cap polygon: angular sort around the plane normal, oriented along +m
    if ncap >= 3:
        nn = np.sqrt(m1 * m1 + m2 * m2 + m3 * m3)
        nx, ny, nz = m1 / nn, m2 / nn, m3 / nn
        if abs(nx) <= abs(ny) and abs(nx) <= abs(nz):
            tx, ty, tz = 0.0, -nz, ny
        elif abs(ny) <= abs(nz):
            tx, ty, tz = -nz, 0.0, nx
        else:
            tx, ty, tz = -ny, nx, 0.0
        tl = np.sqrt(tx * tx + ty * ty + tz * tz)
        tx, ty, tz = tx / tl, ty / tl, tz / tl
        bx = ny * tz - nz * ty
        by = nz * tx - nx * tz
        bz = nx * ty - ny * tx
        ctr = np.zeros(3)
        for k in range(ncap):
            for c in range(3):
                ctr[c] += cap[k, c]
        for c in range(3):
            ctr[c] /= ncap
        ang = np.empty(ncap)
        for k in range(ncap):
            rx = cap[k, 0] - ctr[0]
            ry = cap[k, 1] - ctr[1]
            rz = cap[k, 2] - ctr[2]
            ang[k] = np.arctan2(rx * bx + ry * by + rz * bz,
                                rx * tx + ry * ty + rz * tz)
        order = np.argsort(ang)
        tol = 1e-12 * max(d1, max(d2, d3))
        base = cap[order[0]]
        prev = base
        first = True
        for k in range(1, ncap):
            cur = cap[order[k]]
            if (abs(cur[0] - prev[0]) + abs(cur[1] - prev[1]) + abs(cur[2] - prev[2])) <= tol:
                continue
            if not first:
                vol6, mom = _add_tet(apex, base, prev, cur, vol6, mom)
            prev = cur
            first = False

    volume = vol6 / 6.0
    box = d1 * d2 * d3
    if volume <= 0.0:
        return 0.0, 0.5, 0.5, 0.5
    cx = mom[0] / vol6 / d1
    cy = mom[1] / vol6 / d2
    cz = mom[2] / vol6 / d3
    return volume / box, cx, cy, cz


@njit(cache=True, inline="always")
def _add_tet(o, a, b, c, vol6, mom):
    ax, ay, az = a[0] - o[0], a[1] - o[1], a[2] - o[2]
    bx, by, bz = b[0] - o[0], b[1] - o[1], b[2] - o[2]
    cx, cy, cz = c[0] - o[0], c[1] - o[1], c[2] - o[2]
    det = (ax * (by * cz - bz * cy)
           - ay * (bx * cz - bz * cx)
           + az * (bx * cy - by * cx))
    vol6 += det
    w = det / 4.0
    mom[0] += w * (o[0] + a[0] + b[0] + c[0])
    mom[1] += w * (o[1] + a[1] + b[1] + c[1])
    mom[2] += w * (o[2] + a[2] + b[2] + c[2])
    return vol6, mom


@njit(cache=True)
def oracle2(m1, m2, alpha, d1, d2):
    """Area fraction and centroid by polygon clipping (shoelace integration)."""
    px = np.empty(8)
    py = np.empty(8)
    qx = np.empty(8)
    qy = np.empty(8)
    px[0], py[0] = 0.0, 0.0
    px[1], py[1] = d1, 0.0
    px[2], py[2] = d1, d2
    px[3], py[3] = 0.0, d2
    n = 4
    nq = 0
    for k in range(n):
        ax, ay = px[k], py[k]
        bx, by = px[(k + 1) % n], py[(k + 1) % n]
        da = m1 * ax + m2 * ay - alpha
        db = m1 * bx + m2 * by - alpha
        if da <= 0.0:
            qx[nq], qy[nq] = ax, ay
            nq += 1
        if (da < 0.0 and db > 0.0) or (da > 0.0 and db < 0.0):
            t = da / (da - db)
            qx[nq] = ax + t * (bx - ax)
            qy[nq] = ay + t * (by - ay)
            nq += 1
    if nq < 3:
        return 0.0, 0.5, 0.5
    # shoelace in vertex-mean-centered coordinates (avoids sliver cancellation)
    ox = 0.0
    oy = 0.0
    for k in range(nq):
        ox += qx[k]
        oy += qy[k]
    ox /= nq
    oy /= nq
    area2 = 0.0
    mx = 0.0
    my = 0.0
    for k in range(nq):
        x0, y0 = qx[k] - ox, qy[k] - oy
        x1 = qx[(k + 1) % nq] - ox
        y1 = qy[(k + 1) % nq] - oy
        cross = x0 * y1 - x1 * y0
        area2 += cross
        mx += (x0 + x1) * cross
        my += (y0 + y1) * cross
    area = 0.5 * area2
    if area <= 0.0:
        return 0.0, 0.5, 0.5
    cx = (ox + mx / (6.0 * area)) / d1
    cy = (oy + my / (6.0 * area)) / d2
    return area / (d1 * d2), cx, cy
