"""georadon: geodesic Radon transforms on constant-curvature spaces.

Exact 1-D forward/dual transforms and inversion for radial/zonal functions
in five models (affine, chord/ball, elliptic, hyperboloid, projective),
Monte Carlo estimators for general functions, and a verification CLI.
"""

__version__ = "0.1.0"
