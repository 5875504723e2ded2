"""Directional-split MOF advection: single sweeps and full scheme steps.

A sweep transports volume fraction and centroid along one axis using the
interface reconstruction refreshed immediately before it.  Sweeps are
composed into the eight schemes:

  2D: EI, LE, EILE2D, LEEI2D, WY
  3D: EI, LE, EILE3D, EILE3DS, EIEALE, WY

Velocities enter as face Courant numbers (u*dt/dx).  ``CourantFaces`` lets
a caller supply exactly divergence-free face displacements (the benchmark
velocity builders do); a plain :class:`fields.FaceVelocity` plus dt is
converted on the fly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from . import _sweeps
from .fields import NGHOST, PERIODIC, FaceVelocity, Grid, MofState, fill_ghosts


class CflError(RuntimeError):
    """A sweep precondition failed: |courant| > 1 or 1D compression >= 1."""


class SweepKind(IntEnum):
    EULERIAN_IMPLICIT = 0
    LAGRANGIAN_EXPLICIT = 1
    EULERIAN_ALGEBRAIC = 2
    WEYMOUTH_YUE = 3


EI = SweepKind.EULERIAN_IMPLICIT
LE = SweepKind.LAGRANGIAN_EXPLICIT
EA = SweepKind.EULERIAN_ALGEBRAIC
WY = SweepKind.WEYMOUTH_YUE

SCHEMES_2D = ("EI", "LE", "EILE2D", "LEEI2D", "WY")
SCHEMES_3D = ("EI", "LE", "EILE3D", "EILE3DS", "EIEALE", "WY")


@dataclass(frozen=True)
class SchemeSpec:
    """A named split advection scheme bound to a grid dimension."""

    name: str
    dim: int

    def __post_init__(self):
        valid = SCHEMES_2D if self.dim == 2 else SCHEMES_3D
        if self.name not in valid:
            raise ValueError(
                f"scheme {self.name!r} is not defined in {self.dim}D "
                f"(choose from {valid})")

    def sweep_plan(self, step_index: int):
        """Sequence of (axis, SweepKind) for one step; EILE3D returns None
        (it runs through the velocity decomposition path in step())."""
        s = step_index
        if self.dim == 2:
            first = s % 2
            other = 1 - first
            if self.name == "EI":
                return [(first, EI), (other, EI)]
            if self.name == "LE":
                return [(first, LE), (other, LE)]
            if self.name == "WY":
                return [(first, WY), (other, WY)]
            if self.name == "EILE2D":
                return [(first, EI), (other, LE)]
            if self.name == "LEEI2D":
                return [(first, LE), (other, EI)]
        else:
            order = [(0, 1, 2), (1, 2, 0), (2, 0, 1)][s % 3]
            if self.name == "EI":
                return [(a, EI) for a in order]
            if self.name == "LE":
                return [(a, LE) for a in order]
            if self.name == "WY":
                return [(a, WY) for a in order]
            if self.name == "EILE3DS":
                if s % 2 == 0:
                    return [(0, EI), (1, LE), (2, EI)]
                return [(0, LE), (1, EI), (2, LE)]
            if self.name == "EIEALE":
                return [(order[0], EI), (order[1], EA), (order[2], LE)]
        return None  # EILE3D


@dataclass
class CourantFaces:
    """Ghost-padded face Courant numbers (u*dt/dx) per axis.

    Component k has the ghosted cell shape with one extra entry along axis
    k; index i along that axis is the left face of (ghosted) cell i.
    """

    grid: Grid
    components: tuple

    def __post_init__(self):
        ng = NGHOST
        for k, a in enumerate(self.components):
            expect = tuple(n + 2 * ng + (1 if ax == k else 0)
                           for ax, n in enumerate(self.grid.dims))
            if a.shape != expect:
                raise ValueError(
                    f"courant component {k} has shape {a.shape}, expected {expect}")

    def max_courant(self) -> float:
        ng = NGHOST
        out = 0.0
        for k, a in enumerate(self.components):
            sl = tuple(slice(ng, ng + n + (1 if ax == k else 0))
                       for ax, n in enumerate(self.grid.dims))
            out = max(out, float(np.abs(a[sl]).max()))
        return out

    def cell_divergence(self, axis: int) -> np.ndarray:
        """Ghost-shaped per-cell face difference along one axis (a_r - a_l)."""
        a = self.components[axis]
        n = a.shape[axis]
        lo = [slice(None)] * self.grid.dim
        hi = [slice(None)] * self.grid.dim
        lo[axis] = slice(0, n - 1)
        hi[axis] = slice(1, n)
        return a[tuple(hi)] - a[tuple(lo)]


def courant_from_velocity(vel: FaceVelocity, dt: float) -> CourantFaces:
    """Ghost-padded Courant arrays from a staggered velocity field."""
    grid = vel.grid
    ng = NGHOST
    comps = []
    for k, u in enumerate(vel.components):
        shape = tuple(n + 2 * ng + (1 if ax == k else 0)
                      for ax, n in enumerate(grid.dims))
        a = np.zeros(shape)
        sl = tuple(slice(ng, ng + n + (1 if ax == k else 0))
                   for ax, n in enumerate(grid.dims))
        a[sl] = u * (dt / grid.spacing[k])
        _fill_face_ghosts(grid, a, k)
        comps.append(a)
    return CourantFaces(grid, tuple(comps))


def _fill_face_ghosts(grid: Grid, a: np.ndarray, axis: int) -> None:
    ng = NGHOST
    for ax, kind in enumerate(grid.boundary):
        n = grid.dims[ax]
        nfaces = n + 1 if ax == axis else n
        period = n  # faces repeat with the cell period
        for g in range(ng):
            lo = [slice(None)] * grid.dim
            hi = [slice(None)] * grid.dim
            lo[ax] = ng - 1 - g
            hi[ax] = ng + nfaces + g
            if kind == PERIODIC:
                src_lo = list(lo)
                src_lo[ax] = ng - 1 - g + period
                src_hi = list(hi)
                src_hi[ax] = ng + nfaces + g - period
                a[tuple(lo)] = a[tuple(src_lo)]
                a[tuple(hi)] = a[tuple(src_hi)]
            else:
                src_lo = list(lo)
                src_lo[ax] = ng
                src_hi = list(hi)
                src_hi[ax] = ng + nfaces - 1
                a[tuple(lo)] = a[tuple(src_lo)]
                a[tuple(hi)] = a[tuple(src_hi)]


def as_courant(velocity, grid: Grid, dt: float) -> CourantFaces:
    if isinstance(velocity, CourantFaces):
        return velocity
    if isinstance(velocity, FaceVelocity):
        return courant_from_velocity(velocity, dt)
    raise TypeError("velocity must be FaceVelocity or CourantFaces")


def validate_cfl(cour: CourantFaces) -> None:
    ng = NGHOST
    for k, a in enumerate(cour.components):
        if np.abs(a).max() > 1.0 + 1e-12:
            raise CflError(
                f"face courant {np.abs(a).max():.3f} exceeds 1 on axis {k}")
        d = np.abs(np.diff(a, axis=k)).max()
        if d >= 1.0 - 1e-12:
            raise CflError(
                f"1D face-difference {d:.3f} on axis {k} leaves no room for "
                "the departure/target region")


class Workspace:
    """Reusable buffers for sweeps on one grid."""

    def __init__(self, grid: Grid):
        shape = grid.ghosted_shape
        dim = grid.dim
        self.Cn = np.zeros(shape)
        self.xcn = np.full((dim,) + shape, 0.5)
        self.Q = np.zeros((dim,) + shape)
        self.AL = np.zeros(shape)
        self.FLAG = np.zeros(shape, dtype=np.int8)
        self.ones = np.ones(shape)
        self.zeros = np.zeros(shape)


def _run_sweep(state: MofState, ws: Workspace, cour: CourantFaces, axis: int,
               kind: SweepKind, ctil=None, fea_num=None, fea_den=None) -> int:
    """Reconstruct, sweep along one axis, repair; swaps buffers into state."""
    grid = state.grid
    ng = NGHOST
    dim = grid.dim
    fill_ghosts(grid, state.C)
    fill_ghosts(grid, state.xc)
    h = grid.spacing
    if dim == 3:
        _sweeps.recon_pass3(state.C, state.xc[0], state.xc[1], state.xc[2],
                            ws.Q[0], ws.Q[1], ws.Q[2], ws.AL, ws.FLAG,
                            h[0], h[1], h[2], ng)
    else:
        _sweeps.recon_pass2(state.C, state.xc[0], state.xc[1],
                            ws.Q[0], ws.Q[1], ws.AL, ws.FLAG, h[0], h[1], ng)
    fill_ghosts(grid, ws.Q)
    fill_ghosts(grid, ws.AL)
    fill_ghosts(grid, ws.FLAG)

    others = [a for a in range(dim) if a != axis]
    perm = (axis, *others)
    ct = ctil if ctil is not None else ws.zeros
    fn = fea_num if fea_num is not None else ws.ones
    fd = fea_den if fea_den is not None else ws.ones
    af = cour.components[axis].transpose(perm)

    if dim == 3:
        t1, t2 = others
        repairs = _sweeps.sweep3(
            int(kind),
            state.C.transpose(perm),
            state.xc[axis].transpose(perm),
            state.xc[t1].transpose(perm),
            state.xc[t2].transpose(perm),
            ws.Q[axis].transpose(perm),
            ws.Q[t1].transpose(perm),
            ws.Q[t2].transpose(perm),
            ws.AL.transpose(perm),
            ws.FLAG.transpose(perm),
            ws.Cn.transpose(perm),
            ws.xcn[axis].transpose(perm),
            ws.xcn[t1].transpose(perm),
            ws.xcn[t2].transpose(perm),
            af,
            ct.transpose(perm),
            fn.transpose(perm),
            fd.transpose(perm),
            ng)
    else:
        t1 = others[0]
        repairs = _sweeps.sweep2(
            int(kind),
            state.C.transpose(perm),
            state.xc[axis].transpose(perm),
            state.xc[t1].transpose(perm),
            ws.Q[axis].transpose(perm),
            ws.Q[t1].transpose(perm),
            ws.AL.transpose(perm),
            ws.FLAG.transpose(perm),
            ws.Cn.transpose(perm),
            ws.xcn[axis].transpose(perm),
            ws.xcn[t1].transpose(perm),
            af,
            ct.transpose(perm),
            fn.transpose(perm),
            fd.transpose(perm),
            ng)

    state.C, ws.Cn = ws.Cn, state.C
    state.xc, ws.xcn = ws.xcn, state.xc
    return int(repairs)


# ---------------------------------------------------------------------------
# public single-sweep operations
# ---------------------------------------------------------------------------

def ei_sweep(state: MofState, velocity, dt: float, axis: int):
    """One Eulerian-implicit sweep; returns (state, repair_count)."""
    cour = as_courant(velocity, state.grid, dt)
    validate_cfl(cour)
    ws = Workspace(state.grid)
    rep = _run_sweep(state, ws, cour, axis, EI)
    return state, rep


def le_sweep(state: MofState, velocity, dt: float, axis: int):
    """One Lagrangian-explicit sweep; returns (state, repair_count)."""
    cour = as_courant(velocity, state.grid, dt)
    validate_cfl(cour)
    ws = Workspace(state.grid)
    rep = _run_sweep(state, ws, cour, axis, LE)
    return state, rep


def ea_sweep(state: MofState, velocity, dt: float, axis: int,
             beta_axis: int, gamma_axis: int):
    """Eulerian-algebraic middle sweep.

    beta_axis / gamma_axis name the flanking EI and LE sweep axes whose
    local factors enter the volume update.
    """
    cour = as_courant(velocity, state.grid, dt)
    validate_cfl(cour)
    ws = Workspace(state.grid)
    fea_num = 1.0 - cour.cell_divergence(beta_axis)
    fea_den = 1.0 + cour.cell_divergence(gamma_axis)
    rep = _run_sweep(state, ws, cour, axis, EA, fea_num=fea_num, fea_den=fea_den)
    return state, rep


def wy_sweep(state: MofState, velocity, dt: float, axis: int, c_tilde: np.ndarray):
    """Weymouth-Yue sweep with a frozen binary correction field.

    c_tilde must be the step-start indicator (C^n >= 1/2), shared by all
    sweeps of the step; it has the ghosted cell shape.
    """
    cour = as_courant(velocity, state.grid, dt)
    validate_cfl(cour)
    ws = Workspace(state.grid)
    rep = _run_sweep(state, ws, cour, axis, WY, ctil=c_tilde)
    return state, rep


def wy_indicator(state: MofState) -> np.ndarray:
    """Binary correction field frozen from the current fractions."""
    return (state.C >= 0.5).astype(np.float64)


# ---------------------------------------------------------------------------
# 3D velocity decomposition (EILE3D)
# ---------------------------------------------------------------------------

@dataclass
class DecomposedVelocity:
    """Three planar divergence-free Courant fields summing to the original.

    passes[p] = (axis_a, axis_b, cour_a, cour_b): the EILE2D pass p acts in
    the (axis_a, axis_b) plane with the given ghosted Courant arrays.
    amplification = max decomposed |courant| / max original |courant|.
    """

    grid: Grid
    passes: tuple
    amplification: float


def decompose_velocity_3d(cour: CourantFaces) -> DecomposedVelocity:
    """Split a 3D Courant field into three 2D divergence-free fields.

    Marching construction: half the x-component everywhere, integrate the
    first planar continuity relation upward from the lower boundary, and
    recurse.  Exactness: the per-cell planar divergences of the three parts
    vanish identically in floating point provided the input field is
    exactly divergence-free cell-wise.
    """
    grid = cour.grid
    if grid.dim != 3:
        raise ValueError("decompose_velocity_3d needs a 3D field")
    ng = NGHOST
    ax, ay, az = cour.components

    a1 = 0.5 * ax                                   # x-faces of u1 (and u2)
    # v1 marching along y from the halved bottom-boundary value
    b1 = np.zeros_like(ay)
    du = np.diff(a1, axis=0)                        # cell-wise x-difference
    b1[:, ng, :] = 0.5 * ay[:, ng, :]
    ny = grid.dims[1]
    csum = np.cumsum(du[:, ng:ng + ny, :], axis=1)
    b1[:, ng + 1:ng + ny + 1, :] = b1[:, ng, :][:, None, :] - csum
    _fill_face_ghosts(grid, b1, 1)

    b3 = ay - b1                                    # y-faces of u3
    c3 = np.zeros_like(az)
    dv = np.diff(b3, axis=1)
    c3[:, :, ng] = 0.5 * az[:, :, ng]
    nz = grid.dims[2]
    csum = np.cumsum(dv[:, :, ng:ng + nz], axis=2)
    c3[:, :, ng + 1:ng + nz + 1] = c3[:, :, ng][:, :, None] - csum
    _fill_face_ghosts(grid, c3, 2)

    c2 = az - c3
    a2 = ax - a1

    amax = max(_face_max(grid, ax, 0), _face_max(grid, ay, 1), _face_max(grid, az, 2))
    dmax = max(_face_max(grid, a1, 0), _face_max(grid, b1, 1),
               _face_max(grid, a2, 0), _face_max(grid, c2, 2),
               _face_max(grid, b3, 1), _face_max(grid, c3, 2))
    amp = dmax / amax if amax > 0 else 0.0

    passes = ((0, 1, a1, b1), (0, 2, a2, c2), (1, 2, b3, c3))
    return DecomposedVelocity(grid=grid, passes=passes, amplification=float(amp))


def _face_max(grid: Grid, a: np.ndarray, axis: int) -> float:
    ng = NGHOST
    sl = tuple(slice(ng, ng + n + (1 if k == axis else 0))
               for k, n in enumerate(grid.dims))
    return float(np.abs(a[sl]).max())


# ---------------------------------------------------------------------------
# full scheme step
# ---------------------------------------------------------------------------

def step(state: MofState, velocity, dt: float, scheme: SchemeSpec,
         step_index: int, workspace: Workspace = None):
    """Advance one full time step under the given scheme.

    velocity: FaceVelocity or CourantFaces sampled at the step's mid-time.
    Returns (state, info) with info carrying the repair count.
    """
    grid = state.grid
    if scheme.dim != grid.dim:
        raise ValueError(f"scheme {scheme.name} is {scheme.dim}D but grid is {grid.dim}D")
    cour = as_courant(velocity, grid, dt)
    validate_cfl(cour)
    ws = workspace if workspace is not None else Workspace(grid)
    repairs = 0

    plan = scheme.sweep_plan(step_index)
    if plan is not None:
        ctil = None
        if scheme.name == "WY":
            ctil = wy_indicator(state)
        for axis, kind in plan:
            if kind == EA:
                ei_axis = plan[0][0]
                le_axis = plan[2][0]
                fea_num = 1.0 - cour.cell_divergence(ei_axis)
                fea_den = 1.0 + cour.cell_divergence(le_axis)
                repairs += _run_sweep(state, ws, cour, axis, EA,
                                      fea_num=fea_num, fea_den=fea_den)
            else:
                repairs += _run_sweep(state, ws, cour, axis, kind, ctil=ctil)
        return state, {"repairs": repairs}

    # EILE3D: three EILE2D passes on the decomposed field
    dec = decompose_velocity_3d(cour)
    for axis_a, axis_b, ca, cb in dec.passes:
        comps = [None] * 3
        comps[axis_a] = ca
        comps[axis_b] = cb
        for k in range(3):
            if comps[k] is None:
                comps[k] = _zero_face(grid, k)
        pcour = CourantFaces(grid, tuple(comps))
        validate_cfl(pcour)
        if step_index % 2 == 0:
            order = [(axis_a, EI), (axis_b, LE)]
        else:
            order = [(axis_b, EI), (axis_a, LE)]
        for axis, kind in order:
            repairs += _run_sweep(state, ws, pcour, axis, kind)
    return state, {"repairs": repairs, "amplification": dec.amplification}


def _zero_face(grid: Grid, axis: int) -> np.ndarray:
    ng = NGHOST
    shape = tuple(n + 2 * ng + (1 if k == axis else 0)
                  for k, n in enumerate(grid.dims))
    return np.zeros(shape)
