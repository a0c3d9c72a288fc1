"""P-matrix classification, factorization, spectra, LCP, and finite-section experiments."""

from .classify import (
    NO,
    UNKNOWN,
    YES,
    classify_matrix,
    find_reversal_witness,
    is_column_sufficient,
    is_P_minors,
    is_P_submatrix_eigen,
    is_P_via_Z_spectrum,
    is_positive_stable,
    is_row_sufficient,
    is_sufficient,
    is_Z,
    powers_P_check,
)
from .cayley import cayley_u, factor_p, scaled_stable_factor, sm1_probe, verify_identities, verify_involution
from .lcp import LCPInstance, enumerate_solutions, lemke_solve, uniqueness_census
from .linalg import charpoly, det, eigenvalues, inverse, principal_submatrix, solve
from .spectral import (
    augment_to_P_set,
    extremal_spectrum_search,
    is_P_set,
    realize_P_set,
    sigma_all,
    wedge_check,
)
from .tolerances import DEFAULT_TOL, Tolerances

__all__ = [
    "DEFAULT_TOL",
    "LCPInstance",
    "NO",
    "Tolerances",
    "UNKNOWN",
    "YES",
    "augment_to_P_set",
    "cayley_u",
    "charpoly",
    "classify_matrix",
    "det",
    "eigenvalues",
    "enumerate_solutions",
    "extremal_spectrum_search",
    "factor_p",
    "find_reversal_witness",
    "inverse",
    "is_P_minors",
    "is_P_set",
    "is_P_submatrix_eigen",
    "is_P_via_Z_spectrum",
    "is_Z",
    "is_column_sufficient",
    "is_positive_stable",
    "is_row_sufficient",
    "is_sufficient",
    "lemke_solve",
    "powers_P_check",
    "principal_submatrix",
    "realize_P_set",
    "scaled_stable_factor",
    "sigma_all",
    "sm1_probe",
    "solve",
    "uniqueness_census",
    "verify_identities",
    "verify_involution",
    "wedge_check",
]

__version__ = "0.1.0"
