"""Moment-of-fluid interface tracking on structured grids.

Subpackages:
  geometry        analytic plane-cell cut/flood kernels + clipping oracle
  reconstruction  MOF interface recovery from volume fraction and centroid
  fields          grid, state, staggered velocity, bound repair
  advection       directional-split sweeps and full scheme steps
  benchcases      benchmark shapes, velocity fields, error metrics
  cli             batch benchmark runner and kernel timing
"""

__version__ = "0.1.0"
