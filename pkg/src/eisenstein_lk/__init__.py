"""Principal-series matrices, Eisenstein transforms and Lévy processes on SU(1,1)."""

from .eisenstein import (
    DISC_MODE_STRIDE,
    EisensteinMatrix,
    RhoTensor,
    phi_entry,
    phi_matrix,
    phi_sharp_matrix,
    rho_tensor,
)
from .group import (
    AlgebraVector,
    GroupElement,
    IwasawaFactors,
    canonical_coords,
    exp_alg,
    horocycle_bracket,
    inverse,
    iwasawa,
    log_group,
    mul,
    project_to_group,
    to_disc,
)
from .levy import GeneratorTriple, LevyMeasureDiscrete, PathEnsemble, PathSample, marginal, simulate
from .lk import PsiMatrix, eta_matrix, matrix_exp, psi_matrix, verify_lk
from .specfun import gauss_2f1, log_gamma, phi_closed, phi_disc
from .transform import (
    CharacteristicRow,
    Measure,
    convolve,
    eisenstein_transform,
    helgason_ft,
    right_K_invariantise,
    symmetric_row,
)

__version__ = "0.1.0"
