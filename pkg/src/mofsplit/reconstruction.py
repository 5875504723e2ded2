"""MOF interface reconstruction.

Given a cell's volume fraction and material centroid, recover the plane
(line in 2D) whose cut matches the fraction exactly and whose centroid is
as close as possible to the reference.  The plane constant always comes
from the flood kernel, so the volume constraint holds at every iterate and
only the normal direction is optimized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _recon
from ._geom import EPS_VOF, cutc2, cutc3, flood2, flood3


@dataclass(frozen=True)
class PlaneInterface:
    """Reconstructed linear interface: unit normal and plane constant.

    Fluid side is {x : normal . x <= alpha} in cell-local physical
    coordinates (x_i in [0, dx_i]).
    """

    normal: np.ndarray
    alpha: float

    @property
    def dim(self) -> int:
        return len(self.normal)


@dataclass(frozen=True)
class MofTarget:
    """Reference data driving a reconstruction: fraction and centroid.

    centroid_ref is cell-local in unit-box fractions.
    """

    volume_fraction_ref: float
    centroid_ref: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.centroid_ref, dtype=np.float64)
        object.__setattr__(self, "centroid_ref", c)
        if not EPS_VOF < self.volume_fraction_ref < 1.0 - EPS_VOF:
            raise PureCellError(
                f"volume fraction {self.volume_fraction_ref} leaves nothing to reconstruct")
        if np.any(c <= 0.0) or np.any(c >= 1.0):
            raise ValueError("reference centroid must lie strictly inside the cell")


class PureCellError(ValueError):
    """Reconstruction requested for an (almost) empty or full cell."""


def reconstruct(target: MofTarget, cell_dims) -> PlaneInterface:
    """Recover the MOF-optimal plane for one cell.

    Runs the Gauss-Newton kernel (at most 10 iterations, tolerance 1e-8 on
    the objective / its decrease / the gradient norm) and returns the best
    iterate; non-convergence is not an error.
    """
    d = np.asarray(cell_dims, dtype=np.float64)
    c = target.centroid_ref
    cref = target.volume_fraction_ref
    if len(d) == 3:
        n1, n2, n3, alpha, err, iters = _recon.recon3(
            cref, c[0], c[1], c[2], d[0], d[1], d[2])
        n = np.array([n1, n2, n3])
    elif len(d) == 2:
        n1, n2, alpha, err, iters = _recon.recon2(cref, c[0], c[1], d[0], d[1])
        n = np.array([n1, n2])
    else:
        raise ValueError("cell_dims must have length 2 or 3")
    return PlaneInterface(normal=n, alpha=float(alpha))


def objective(phi: float, theta: float, target: MofTarget, cell_dims):
    """Centroid defect and actual centroid for a trial normal direction.

    In 2D only ``theta`` is used (normal = (cos, sin)).  Returns
    (E_MOF, actual_centroid) where the centroid is in unit-box fractions
    and E_MOF is the Euclidean defect in physical units.
    """
    d = np.asarray(cell_dims, dtype=np.float64)
    cref = target.volume_fraction_ref
    xr = target.centroid_ref
    if len(d) == 3:
        sp = np.sin(phi)
        n = np.array([sp * np.cos(theta), sp * np.sin(theta), np.cos(phi)])
        alpha = flood3(n[0], n[1], n[2], d[0], d[1], d[2], cref)
        _, c1, c2, c3 = cutc3(n[0], n[1], n[2], alpha, d[0], d[1], d[2])
        c = np.array([c1, c2, c3])
    else:
        n = np.array([np.cos(theta), np.sin(theta)])
        alpha = flood2(n[0], n[1], d[0], d[1], cref)
        _, c1, c2 = cutc2(n[0], n[1], alpha, d[0], d[1])
        c = np.array([c1, c2])
    err = float(np.linalg.norm((c - xr) * d))
    return err, c
