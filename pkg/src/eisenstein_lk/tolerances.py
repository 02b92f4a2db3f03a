"""Numerical constants shared across the package.

Everything that decides whether a number is "close enough" lives here so the
values are configuration, not magic numbers scattered through the code.
"""

#: Allowed defect in |a|^2 - |b|^2 = 1, relative to max(1, |a|^2 + |b|^2).
EPS_GRP = 1e-12

#: Entrywise residual allowed when reconstructing an element from its Iwasawa factors.
EPS_IWA = 1e-10

#: Slack on the contraction bound |Phi| <= 1.
EPS_ENT = 1e-9

#: Below this |Delta| the exponential map switches to its Taylor series.
DELTA_SERIES = 1e-3

#: log_group refuses elements whose rotation angle is within this of pi.
BRANCH_MARGIN = 1e-4

#: Radial cutoff of the canonical coordinates (matrix-entry distance to e).
CUTOFF_INNER = 0.5
CUTOFF_OUTER = 1.5

#: Hypergeometric series.
HYP_TERM_CAP = 10_000
HYP_RTOL = 1e-17

#: Circle quadrature.
DEFAULT_NODES = 512
ADAPTIVE_TOL = 1e-10
MAX_NODES = 1 << 16

#: Finite-difference step for the rho tensor and the agreement tolerance of its two routes.
RHO_STEP = 1e-4
RHO_AGREEMENT = 1e-6

#: Jump clocks: steps are refined until total_rate * dt <= this.
MAX_JUMP_RATE_DT = 0.1

#: Simulated paths are projected back onto the group this often (in steps).
RENORM_EVERY = 1000
