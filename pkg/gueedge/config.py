"""
Default discretization and regime constants.

Every public operation takes explicit overrides; these are only the
values used when a caller does not pass one.
"""

DEFAULT_M = 100
DEFAULT_T = 40.0
DEFAULT_C = 0.0
DEFAULT_SEED = 42

# cdf_via_qp: outer rule over x, inner Nystrom rule per endpoint
DEFAULT_OUTER_M = 60
DEFAULT_INNER_M = 80

# Outer rule for integrals of composed Airy functionals
DEFAULT_COMPOSE_M = 200
DEFAULT_COMPOSE_T = 40.0

AIRY_S_MIN = -12.0
TW_S_MIN = -10.0
FINITE_S_MIN = -10.0
MAX_MOMENT = 2

NEAR_DIAGONAL = 1e-6

# Scaled length appended past the turning point for finite-n kernels
EDGE_T = 24.0

HM_S_MIN = -12.0
HM_S_MAX = 8.0
HM_NPTS = 600
HM_TOL = 1e-10

GAUSS_MAX_M = 2000
