"""Structured grid, MOF state, staggered velocity, and the bound repair rule.

Cell arrays carry ``NGHOST`` ghost layers on every axis.  Centroids are
stored cell-local as unit-box fractions, so ghost exchange is a plain copy
for both periodic and zero-gradient boundaries.  Pure cells (fraction
within one epsilon of 0 or 1) carry the conventional cell-center centroid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _sweeps
from ._geom import EPS_VOF

NGHOST = 2

PERIODIC = "periodic"
ZERO_GRADIENT = "zero-gradient"


@dataclass(frozen=True)
class Grid:
    """Uniform structured grid (2D or 3D)."""

    dims: tuple
    spacing: tuple
    origin: tuple = None
    boundary: tuple = None

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        object.__setattr__(self, "dims", dims)
        spacing = tuple(float(h) for h in self.spacing)
        object.__setattr__(self, "spacing", spacing)
        if self.origin is None:
            object.__setattr__(self, "origin", (0.0,) * len(dims))
        else:
            object.__setattr__(self, "origin", tuple(float(o) for o in self.origin))
        if self.boundary is None:
            object.__setattr__(self, "boundary", (PERIODIC,) * len(dims))
        else:
            object.__setattr__(self, "boundary", tuple(self.boundary))
        if len(dims) not in (2, 3):
            raise ValueError("grid must be 2D or 3D")
        if len(spacing) != len(dims) or len(self.boundary) != len(dims):
            raise ValueError("dims, spacing and boundary lengths must agree")
        if any(n < 4 for n in dims):
            raise ValueError("need at least 4 cells per axis")
        if any(h <= 0 for h in spacing):
            raise ValueError("spacing must be positive")
        for b in self.boundary:
            if b not in (PERIODIC, ZERO_GRADIENT):
                raise ValueError(f"unknown boundary kind {b!r}")

    @property
    def dim(self) -> int:
        return len(self.dims)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def ghosted_shape(self) -> tuple:
        return tuple(n + 2 * NGHOST for n in self.dims)

    @property
    def interior(self) -> tuple:
        return tuple(slice(NGHOST, NGHOST + n) for n in self.dims)

    def extent(self, axis: int) -> float:
        return self.dims[axis] * self.spacing[axis]

    def cell_centers(self, axis: int) -> np.ndarray:
        return self.origin[axis] + (np.arange(self.dims[axis]) + 0.5) * self.spacing[axis]

    def face_coords(self, axis: int) -> np.ndarray:
        return self.origin[axis] + np.arange(self.dims[axis] + 1) * self.spacing[axis]


@dataclass
class MofState:
    """Per-cell volume fraction and material centroid on a grid."""

    grid: Grid
    C: np.ndarray = None
    xc: np.ndarray = None      # shape (dim,) + ghosted dims, unit-box fractions

    def __post_init__(self):
        shape = self.grid.ghosted_shape
        if self.C is None:
            self.C = np.zeros(shape)
        if self.xc is None:
            self.xc = np.full((self.grid.dim,) + shape, 0.5)

    def copy(self) -> "MofState":
        return MofState(self.grid, self.C.copy(), self.xc.copy())

    def interior_C(self) -> np.ndarray:
        return self.C[self.grid.interior]

    def interior_xc(self, axis: int) -> np.ndarray:
        return self.xc[axis][self.grid.interior]


@dataclass
class FaceVelocity:
    """Staggered velocity: component k lives on faces normal to axis k."""

    grid: Grid
    components: tuple

    def __post_init__(self):
        for k, u in enumerate(self.components):
            expect = tuple(n + (1 if a == k else 0) for a, n in enumerate(self.grid.dims))
            if u.shape != expect:
                raise ValueError(
                    f"component {k} has shape {u.shape}, expected {expect}")
            if not np.all(np.isfinite(u)):
                raise ValueError("face velocities must be finite")

    def max_speed(self) -> float:
        return max(float(np.abs(u).max()) for u in self.components)


def fill_ghosts(grid: Grid, arr: np.ndarray) -> None:
    """Populate ghost layers of a cell array per the grid's boundary kinds."""
    ng = NGHOST
    for ax, kind in enumerate(grid.boundary):
        n = grid.dims[ax]
        src = arr
        idx_lo = [slice(None)] * arr.ndim
        idx_hi = [slice(None)] * arr.ndim
        # offset by possible leading component axes
        a = arr.ndim - grid.dim + ax
        if kind == PERIODIC:
            idx_lo[a] = slice(0, ng)
            idx_hi[a] = slice(n + ng, n + 2 * ng)
            src_lo = [slice(None)] * arr.ndim
            src_lo[a] = slice(n, n + ng)
            src_hi = [slice(None)] * arr.ndim
            src_hi[a] = slice(ng, 2 * ng)
            arr[tuple(idx_lo)] = src[tuple(src_lo)]
            arr[tuple(idx_hi)] = src[tuple(src_hi)]
        else:
            for g in range(ng):
                idx_lo[a] = g
                src_lo = list(idx_lo)
                src_lo[a] = ng
                arr[tuple(idx_lo)] = src[tuple(src_lo)]
                idx_hi[a] = n + ng + g
                src_hi = list(idx_hi)
                src_hi[a] = n + ng - 1
                arr[tuple(idx_hi)] = src[tuple(src_hi)]


def fill_state_ghosts(state: MofState) -> None:
    fill_ghosts(state.grid, state.C)
    fill_ghosts(state.grid, state.xc)


def bound_repair(state: MofState):
    """Enforce fraction bounds and centroid conventions in place.

    Fractions outside [0,1] by more than one epsilon revalue to eps / 1-eps
    (counted); rounding spill inside the epsilon band snaps to the exact
    bound (uncounted).  Pure cells get the cell-center centroid; mixed-cell
    centroids are clamped into the open cell.  Returns (state, count).
    """
    ng = NGHOST
    if state.grid.dim == 3:
        count = _sweeps.repair3(state.C, state.xc[0], state.xc[1], state.xc[2], ng)
    else:
        count = _sweeps.repair2(state.C, state.xc[0], state.xc[1], ng)
    return state, int(count)


def discrete_divergence(vel: FaceVelocity, grid: Grid) -> np.ndarray:
    """Per-cell sum of face differences over spacing."""
    div = np.zeros(grid.dims)
    for ax, u in enumerate(vel.components):
        lo = [slice(None)] * grid.dim
        hi = [slice(None)] * grid.dim
        lo[ax] = slice(0, grid.dims[ax])
        hi[ax] = slice(1, grid.dims[ax] + 1)
        div += (u[tuple(hi)] - u[tuple(lo)]) / grid.spacing[ax]
    return div


def total_mass(state: MofState, grid: Grid = None) -> float:
    """Sum of C times cell volume, accumulated in ascending index order."""
    grid = grid or state.grid
    if grid.dim == 3:
        return float(_sweeps.mass3(state.C, NGHOST, grid.cell_volume))
    return float(_sweeps.mass2(state.C, NGHOST, grid.cell_volume))


def is_mixed(C: np.ndarray) -> np.ndarray:
    return (C > EPS_VOF) & (C < 1.0 - EPS_VOF)
