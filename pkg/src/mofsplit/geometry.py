"""Plane-cell intersection and flood operations.

Fluid convention: the fluid occupies ``{x : m . x <= alpha}`` in cell-local
physical coordinates, ``x_i in [0, dx_i]``.  Centroids are always reported
as unit-box fractions of the cell (divide physical coordinates by ``dx``).

``canonicalize`` reduces an arbitrary spec to the canonical form consumed by
``cut_volume`` / ``cut_centroid``: non-negative coefficients sorted
ascending, edge lengths scaled to one, and ``alpha <= alpha_max / 2``.  The
returned :class:`CutTransform` maps canonical results back to the raw frame.

``oracle_clip`` is an independent brute-force reference (general polyhedron
clipping + divergence-theorem integration) used by tests and the timing
benchmark; it never feeds the production path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _geom, _oracle
from ._geom import REL_ZERO


class DegenerateNormalError(ValueError):
    """All normal components are (numerically) zero."""


class EmptyCutError(ValueError):
    """Requested centroid of a zero-volume cut."""


@dataclass(frozen=True)
class CutSpec:
    """Canonical plane-cell cut: m sorted ascending >= 0, dx = 1, alpha <= amax/2."""

    m: np.ndarray
    dx: np.ndarray
    alpha: float

    @property
    def dim(self) -> int:
        return len(self.m)

    @property
    def alpha_max(self) -> float:
        return float(np.dot(self.m, self.dx))


@dataclass(frozen=True)
class CutResult:
    """Volume fraction in [0,1] and cell-local centroid (fractions of dx)."""

    volume_fraction: float
    centroid: np.ndarray


@dataclass(frozen=True)
class CutTransform:
    """Record of the canonicalization steps; maps canonical results back.

    The canonical frame is reached by (1) scaling axes by dx, (2) mirroring
    axes with negative coefficients, (3) complementing when alpha exceeds
    alpha_max/2, (4) sorting coefficients ascending.
    """

    dx: np.ndarray            # original edge lengths
    flipped: np.ndarray       # bool per original axis
    perm: np.ndarray          # canonical slot k came from original axis perm[k]
    complement: bool
    alpha_max: float          # canonical sum of coefficients
    alpha_shift: float        # alpha increase applied by the mirror flips

    def centroid_to_raw(self, canonical: CutResult) -> CutResult:
        """Map a canonical-frame result back to the raw frame (fractions)."""
        dim = len(self.dx)
        c = np.empty(dim)
        for k in range(dim):
            c[self.perm[k]] = canonical.centroid[k]
        v = canonical.volume_fraction
        if self.complement:
            # raw region = box minus the mirror image of the canonical cut
            vc = v
            v = 1.0 - vc
            if v <= 0.0:
                raise EmptyCutError("complement of a full cut is empty")
            c = (0.5 - vc * (1.0 - c)) / v
        c[self.flipped] = 1.0 - c[self.flipped]
        return CutResult(v, c)

    def alpha_to_raw(self, alpha_canonical: float) -> float:
        a = self.alpha_max - alpha_canonical if self.complement else alpha_canonical
        return a - self.alpha_shift


def canonicalize(m, alpha: float, dx) -> tuple[CutSpec, CutTransform]:
    """Reduce a raw cut spec to canonical form plus its back-transform."""
    m = np.asarray(m, dtype=np.float64)
    dx = np.asarray(dx, dtype=np.float64)
    dim = len(m)
    if dim not in (2, 3) or len(dx) != dim:
        raise ValueError("m and dx must both have length 2 or 3")
    if np.any(dx <= 0.0):
        raise ValueError("dx components must be strictly positive")

    p = m * dx
    flipped = p < 0.0
    shift = float(-p[flipped].sum())
    a = float(alpha) + shift
    p = np.abs(p)
    tol = REL_ZERO * p.max() if p.max() > 0.0 else 0.0
    p[p < tol] = 0.0
    amax = float(p.sum())
    if amax <= 0.0:
        raise DegenerateNormalError("normal has no nonzero component")

    complement = a > 0.5 * amax
    if complement:
        a = amax - a
    perm = np.argsort(p, kind="stable")
    spec = CutSpec(m=p[perm], dx=np.ones(dim), alpha=float(min(max(a, 0.0), 0.5 * amax)))
    rec = CutTransform(dx=dx.copy(), flipped=flipped, perm=perm,
                       complement=complement, alpha_max=amax, alpha_shift=shift)
    return spec, rec


def _require_canonical(spec: CutSpec) -> None:
    m = spec.m
    if np.any(m < 0.0) or np.any(np.diff(m) < 0.0):
        raise ValueError("CutSpec is not canonical: m must be sorted ascending, >= 0")
    amax = spec.alpha_max
    if amax <= 0.0:
        raise DegenerateNormalError("normal has no nonzero component")
    if spec.alpha < 0.0 or spec.alpha > 0.5 * amax * (1.0 + 1e-12):
        raise ValueError("CutSpec is not canonical: alpha outside [0, alpha_max/2]")


def cut_volume(spec: CutSpec) -> float:
    """Volume fraction of the canonical cut."""
    _require_canonical(spec)
    m = spec.m
    if spec.dim == 3:
        return float(_geom.cut3(m[0], m[1], m[2], spec.alpha,
                                spec.dx[0], spec.dx[1], spec.dx[2]))
    return float(_geom.cut2(m[0], m[1], spec.alpha, spec.dx[0], spec.dx[1]))


def cut_centroid(spec: CutSpec) -> CutResult:
    """Volume fraction and centroid of the canonical cut.

    Raises EmptyCutError when the cut has zero volume.
    """
    _require_canonical(spec)
    m = spec.m
    if spec.dim == 3:
        v, c1, c2, c3 = _geom.cutc3(m[0], m[1], m[2], spec.alpha,
                                    spec.dx[0], spec.dx[1], spec.dx[2])
        c = np.array([c1, c2, c3])
    else:
        v, c1, c2 = _geom.cutc2(m[0], m[1], spec.alpha, spec.dx[0], spec.dx[1])
        c = np.array([c1, c2])
    if v <= 0.0:
        raise EmptyCutError("cut volume is zero")
    return CutResult(float(v), c)


def flood_alpha(m, dx, target: float) -> float:
    """Plane constant alpha (raw frame) whose cut reproduces the target fraction."""
    if not 0.0 <= target <= 1.0:
        raise ValueError("target volume fraction must lie in [0, 1]")
    m = np.asarray(m, dtype=np.float64)
    dx = np.asarray(dx, dtype=np.float64)
    if len(m) == 3:
        a = _geom.flood3(m[0], m[1], m[2], dx[0], dx[1], dx[2], target)
    elif len(m) == 2:
        a = _geom.flood2(m[0], m[1], dx[0], dx[1], target)
    else:
        raise ValueError("m must have length 2 or 3")
    if np.isnan(a):
        raise DegenerateNormalError("normal has no nonzero component")
    return float(a)


def flood_centroid(m, dx, target: float) -> tuple[float, CutResult]:
    """flood_alpha followed by the centroid of the resulting cut (raw frame)."""
    alpha = flood_alpha(m, dx, target)
    m = np.asarray(m, dtype=np.float64)
    dx = np.asarray(dx, dtype=np.float64)
    if len(m) == 3:
        v, c1, c2, c3 = _geom.cutc3(m[0], m[1], m[2], alpha, dx[0], dx[1], dx[2])
        c = np.array([c1, c2, c3])
    else:
        v, c1, c2 = _geom.cutc2(m[0], m[1], alpha, dx[0], dx[1])
        c = np.array([c1, c2])
    if v <= 0.0 and target > 0.0:
        raise EmptyCutError("flooded cut has zero volume")
    return alpha, CutResult(float(v), c)


# 2D aliases with explicit names
def cut_volume_2d(spec: CutSpec) -> float:
    if spec.dim != 2:
        raise ValueError("cut_volume_2d requires a 2D spec")
    return cut_volume(spec)


def cut_centroid_2d(spec: CutSpec) -> CutResult:
    if spec.dim != 2:
        raise ValueError("cut_centroid_2d requires a 2D spec")
    return cut_centroid(spec)


def flood_alpha_2d(m, dx, target: float) -> float:
    if len(m) != 2:
        raise ValueError("flood_alpha_2d requires a 2D normal")
    return flood_alpha(m, dx, target)


# ---------------------------------------------------------------------------
# clipping oracle (reference implementation, tests/benchmark only)
# ---------------------------------------------------------------------------

@dataclass
class ClipPolyhedron:
    """Explicit clipped polyhedron: vertex positions plus face index loops."""

    vertices: np.ndarray
    faces: list = field(default_factory=list)
    volume_fraction: float = 0.0
    centroid: np.ndarray | None = None


_BOX_FACES = [
    (0, 4, 6, 2), (1, 3, 7, 5),
    (0, 1, 5, 4), (2, 6, 7, 3),
    (0, 2, 3, 1), (4, 5, 7, 6),
]


def oracle_clip(dx, m, alpha: float) -> ClipPolyhedron:
    """Clip the cell box against {m . x <= alpha}; exact volume and centroid.

    Pure-Python construction of the clipped polyhedron (or polygon in 2D);
    the batched numba twin lives in ``_oracle`` and is cross-checked against
    this in the test suite.
    """
    dx = np.asarray(dx, dtype=np.float64)
    m = np.asarray(m, dtype=np.float64)
    if len(m) == 2:
        return _oracle_clip_2d(dx, m, alpha)

    corners = np.array([[dx[0] if i & 1 else 0.0,
                         dx[1] if i & 2 else 0.0,
                         dx[2] if i & 4 else 0.0] for i in range(8)])
    dist = corners @ m - alpha
    if not np.any(dist > 0.0):
        poly = ClipPolyhedron(vertices=corners.copy(), faces=[list(f) for f in _BOX_FACES])
        poly.volume_fraction = 1.0
        poly.centroid = np.full(3, 0.5)
        return poly
    if not np.any(dist < 0.0):
        return ClipPolyhedron(vertices=np.zeros((0, 3)), faces=[],
                              centroid=np.full(3, 0.5))

    verts: list[np.ndarray] = []
    vert_ids: dict[tuple, int] = {}
    scale = float(dx.max())

    def vid(p):
        key = tuple(np.round(p / scale, 12))
        if key not in vert_ids:
            vert_ids[key] = len(verts)
            verts.append(np.asarray(p, dtype=np.float64))
        return vert_ids[key]

    faces = []
    cap_pts = []
    for loop in _BOX_FACES:
        poly = []
        for k in range(4):
            ia, ib = loop[k], loop[(k + 1) % 4]
            if dist[ia] <= 0.0:
                poly.append(vid(corners[ia]))
                if dist[ia] == 0.0:
                    cap_pts.append(corners[ia])
            if (dist[ia] < 0.0 < dist[ib]) or (dist[ib] < 0.0 < dist[ia]):
                t = dist[ia] / (dist[ia] - dist[ib])
                p = corners[ia] + t * (corners[ib] - corners[ia])
                poly.append(vid(p))
                cap_pts.append(p)
        # drop consecutive duplicates
        dedup = [i for k, i in enumerate(poly) if i != poly[k - 1]]
        if len(dedup) >= 3:
            faces.append(dedup)

    if cap_pts:
        ids = sorted({vid(p) for p in cap_pts})
        if len(ids) >= 3:
            pts = np.array([verts[i] for i in ids])
            nrm = m / np.linalg.norm(m)
            t = np.cross(nrm, [1.0, 0.0, 0.0])
            if np.linalg.norm(t) < 1e-8:
                t = np.cross(nrm, [0.0, 1.0, 0.0])
            t /= np.linalg.norm(t)
            b = np.cross(nrm, t)
            rel = pts - pts.mean(axis=0)
            ang = np.arctan2(rel @ b, rel @ t)
            faces.append([ids[k] for k in np.argsort(ang)])

    poly = ClipPolyhedron(vertices=np.array(verts) if verts else np.zeros((0, 3)),
                          faces=faces)
    if not verts or not faces:
        poly.centroid = np.full(3, 0.5)
        return poly

    apex = poly.vertices.mean(axis=0)
    vol = 0.0
    mom = np.zeros(3)
    for f in faces:
        for k in range(1, len(f) - 1):
            a = poly.vertices[f[0]] - apex
            b = poly.vertices[f[k]] - apex
            c = poly.vertices[f[k + 1]] - apex
            det = np.linalg.det(np.stack([a, b, c]))
            vol += det
            mom += det / 4.0 * (apex + poly.vertices[f[0]]
                                + poly.vertices[f[k]] + poly.vertices[f[k + 1]])
    vol /= 6.0
    mom /= 6.0
    box = float(np.prod(dx))
    poly.volume_fraction = max(vol / box, 0.0)
    poly.centroid = (mom / vol) / dx if vol > 0.0 else np.full(3, 0.5)
    return poly


def _oracle_clip_2d(dx, m, alpha: float) -> ClipPolyhedron:
    rect = np.array([[0.0, 0.0], [dx[0], 0.0], [dx[0], dx[1]], [0.0, dx[1]]])
    out = []
    n = len(rect)
    for k in range(n):
        a, b = rect[k], rect[(k + 1) % n]
        da = a @ m - alpha
        db = b @ m - alpha
        if da <= 0.0:
            out.append(a)
        if (da < 0.0 < db) or (db < 0.0 < da):
            t = da / (da - db)
            out.append(a + t * (b - a))
    if len(out) < 3:
        return ClipPolyhedron(vertices=np.zeros((0, 2)), faces=[],
                              centroid=np.full(2, 0.5))
    pts = np.array(out)
    mean = pts.mean(axis=0)
    x, y = (pts - mean).T
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    area = 0.5 * cross.sum()
    poly = ClipPolyhedron(vertices=pts, faces=[list(range(len(pts)))])
    if area <= 0.0:
        poly.centroid = np.full(2, 0.5)
        return poly
    cx = mean[0] + ((x + xn) * cross).sum() / (6.0 * area)
    cy = mean[1] + ((y + yn) * cross).sum() / (6.0 * area)
    poly.volume_fraction = float(area / (dx[0] * dx[1]))
    poly.centroid = np.array([cx, cy]) / dx
    return poly
