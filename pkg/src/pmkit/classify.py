"""Membership tests for the matrix classes under study.

P and P0 via exhaustive principal minors, the submatrix-eigenvalue
characterization as an independent oracle, Z / M-type via spectra,
positive stability, and column/row sufficiency.  Verdicts are
three-valued ("yes" / "no" / "unknown"): budgeted searches must not
masquerade as decisions, so sufficiency is decided exactly only for
n <= 3 (orthant-wise polyhedral emptiness over exact rationals) and
degrades to no-with-witness or unknown beyond that.

Every returned witness is re-validated in exact rational arithmetic
before release: a sign-reversal witness x satisfies x_i (Ax)_i <= 0 for
all i, a sufficiency witness additionally has a strictly negative
product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from . import feasibility
from .errors import DimensionTooLargeError, PreconditionViolatedError
from .linalg import as_matrix, as_vector, eigenvalues, inf_norm, principal_submatrix
from .tolerances import DEFAULT_TOL, Tolerances

YES = "yes"
NO = "no"
UNKNOWN = "unknown"

MINORS_MAX_DIM = 12
EIGEN_ORACLE_MAX_DIM = 10
EXACT_SUFFICIENCY_MAX_DIM = 3
REVERSAL_LP_MAX_DIM = 10
POWERS_MAX_DIM = 10
POWERS_MAX_K = 16


def lex_index_sets(n: int):
    """All nonempty subsets of 1..n, smallest size first, lexicographic
    within each size (shortlex).

    Shortlex is what makes the first violating set informative: a negated
    diagonal entry is reported as its 1x1 minor rather than as some larger
    set that happens to contain it.
    """
    for k in range(1, n + 1):
        yield from combinations(range(1, n + 1), k)


def verdict_and(*verdicts: str) -> str:
    """Three-valued conjunction: no dominates, unknown contaminates yes."""
    if NO in verdicts:
        return NO
    if UNKNOWN in verdicts:
        return UNKNOWN
    return YES


# ---------------------------------------------------------------------------
# principal-minor tests


def is_P_minors(m, tol: Tolerances = DEFAULT_TOL):
    """All 2^n - 1 principal minors positive; on "no" returns the
    lexicographically-first violating index set."""
    mat = as_matrix(m)
    n = mat.shape[0]
    if n > MINORS_MAX_DIM:
        raise DimensionTooLargeError(f"minor enumeration capped at n={MINORS_MAX_DIM}")
    norm = inf_norm(mat)
    for idx in lex_index_sets(n):
        sel = [i - 1 for i in idx]
        minor = float(np.linalg.det(mat[np.ix_(sel, sel)]))
        if minor <= tol.minor_for(norm, len(idx)):
            return NO, idx
    return YES, None


def is_P0_minors(m, tol: Tolerances = DEFAULT_TOL):
    """All principal minors nonnegative (within tolerance)."""
    mat = as_matrix(m)
    n = mat.shape[0]
    if n > MINORS_MAX_DIM:
        raise DimensionTooLargeError(f"minor enumeration capped at n={MINORS_MAX_DIM}")
    norm = inf_norm(mat)
    for idx in lex_index_sets(n):
        sel = [i - 1 for i in idx]
        minor = float(np.linalg.det(mat[np.ix_(sel, sel)]))
        if minor < -tol.minor_for(norm, len(idx)):
            return NO, idx
    return YES, None


def is_P_submatrix_eigen(m, tol: Tolerances = DEFAULT_TOL) -> str:
    """Independent oracle: every real eigenvalue of every principal
    submatrix is positive."""
    mat = as_matrix(m)
    n = mat.shape[0]
    if n > EIGEN_ORACLE_MAX_DIM:
        raise DimensionTooLargeError(f"submatrix-eigenvalue oracle capped at n={EIGEN_ORACLE_MAX_DIM}")
    for idx in lex_index_sets(n):
        sub = principal_submatrix(mat, idx)
        thr = tol.minor_for(inf_norm(sub), 1)
        spec = eigenvalues(sub, tol, check_residual=False)
        for lam in spec.values:
            if abs(lam.imag) <= tol.conj_for(abs(lam)) and lam.real <= thr:
                return NO
    return YES


# ---------------------------------------------------------------------------
# sign-reversal witnesses


def reversal_products(m, x) -> np.ndarray:
    """Componentwise products x_i (m x)_i in float arithmetic."""
    mat = as_matrix(m)
    v = as_vector(x, mat.shape[0])
    return v * (mat @ v)


def products_nonpositive_exact(
    m, x, strict: bool = False, tol: Tolerances = DEFAULT_TOL
) -> bool:
    """Exact-rational check that all x_i (m x)_i <= 0.

    With `strict`, at least one product must clear the scaled minor
    threshold (< -tol.minor_for(norm, 1) * ||x||_inf^2); violations below
    that are indistinguishable from rounding and do not refute
    sufficiency.  The check is scale-invariant in x.
    """
    mat = as_matrix(m)
    v = as_vector(x, mat.shape[0])
    if not np.any(v):
        return not strict
    prods = feasibility.exact_products(mat, v)
    if any(p > 0 for p in prods):
        return False
    if not strict:
        return True
    margin = Fraction(float(tol.minor_for(inf_norm(mat), 1))) * Fraction(
        float(np.abs(v).max())
    ) ** 2
    return any(p < -margin for p in prods)


def _snap_tiny(x: np.ndarray) -> np.ndarray:
    scale = np.abs(x).max()
    if scale == 0.0:
        return x
    out = x.copy()
    out[np.abs(out) <= 1e-11 * scale] = 0.0
    return out


def _normalize_witness(
    mat: np.ndarray, x: np.ndarray, strict: bool, tol: Tolerances
) -> Optional[np.ndarray]:
    """Scale to ||x||_inf = 1 when that survives the exact gate; otherwise
    fall back to an exact power-of-two scaling (sign-preserving)."""
    scale = np.abs(x).max()
    if scale == 0.0:
        return None
    plain = x / scale
    if products_nonpositive_exact(mat, plain, strict, tol):
        return plain
    pow2 = x * 2.0 ** (-np.floor(np.log2(scale)) - 1)
    if products_nonpositive_exact(mat, pow2, strict, tol):
        return pow2
    return None


def _gate_witness(
    mat: np.ndarray, x: np.ndarray, strict: bool, tol: Tolerances = DEFAULT_TOL
) -> Optional[np.ndarray]:
    for cand in (x, _snap_tiny(x)):
        if np.any(cand) and products_nonpositive_exact(mat, cand, strict, tol):
            out = _normalize_witness(mat, cand, strict, tol)
            if out is not None:
                return out
    return None


def _axis_candidates(n: int):
    eye = np.eye(n)
    for i in range(n):
        yield eye[i]
        yield -eye[i]
    for i in range(n):
        for j in range(i + 1, n):
            for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                yield si * eye[i] + sj * eye[j]


def _orthant_reversal_point(mat: np.ndarray, signs: np.ndarray) -> Optional[np.ndarray]:
    """Nonzero point of {x : Sx >= 0, SAx <= 0} via LP, normalized so that
    sum_j s_j x_j = 1 (every nonzero cone point scales to this slice)."""
    n = mat.shape[0]
    s = np.asarray(signs, dtype=float)
    a_ub = np.vstack([-np.diag(s), s[:, None] * mat])
    b_ub = np.zeros(2 * n)
    res = linprog(
        c=np.zeros(n),
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=s.reshape(1, -1),
        b_eq=np.ones(1),
        bounds=[(None, None)] * n,
        method="highs",
    )
    return res.x if res.status == 0 and res.x is not None else None


def find_reversal_witness(
    m, budget: int = 2000, seed: int = 0, tol: Tolerances = DEFAULT_TOL
) -> Optional[np.ndarray]:
    """Search for x != 0 with x_i (m x)_i <= 0 for all i (certifies not-P).

    Phases: deterministic axis candidates, seeded random sampling, then
    sign-pattern enumeration via linear feasibility for n <= 10.  Absence
    of a witness is NOT a P-certificate.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    mat = as_matrix(m)
    n = mat.shape[0]
    spent = 0

    for cand in _axis_candidates(n):
        if spent >= budget:
            return None
        spent += 1
        out = _gate_witness(mat, cand, strict=False, tol=tol)
        if out is not None:
            return out

    rng = np.random.default_rng(seed)
    n_random = min(max(budget // 4, 16), budget - spent)
    for _ in range(max(n_random, 0)):
        spent += 1
        out = _gate_witness(mat, rng.standard_normal(n), strict=False, tol=tol)
        if out is not None:
            return out

    if n <= REVERSAL_LP_MAX_DIM:
        for signs in product((1.0, -1.0), repeat=n):
            if spent >= budget:
                return None
            spent += 1
            x = _orthant_reversal_point(mat, np.array(signs))
            if x is None:
                continue
            out = _gate_witness(mat, x, strict=False, tol=tol)
            if out is not None:
                return out
    return None


# ---------------------------------------------------------------------------
# entrywise / spectral classes


def is_Z(m) -> str:
    """Off-diagonal entries all <= 0."""
    mat = as_matrix(m)
    off = mat - np.diag(np.diag(mat))
    return YES if (off <= 0.0).all() else NO


def is_P_via_Z_spectrum(m, tol: Tolerances = DEFAULT_TOL) -> str:
    """For Z-matrices only: P iff the real part of every eigenvalue is
    positive."""
    mat = as_matrix(m)
    if is_Z(mat) != YES:
        raise PreconditionViolatedError("spectral Z-route requires a Z-matrix")
    thr = tol.minor_for(inf_norm(mat), 1)
    spec = eigenvalues(mat, tol, check_residual=False)
    return YES if min(v.real for v in spec.values) > thr else NO


def is_positive_stable(m, tol: Tolerances = DEFAULT_TOL) -> str:
    """Every eigenvalue has positive real part."""
    mat = as_matrix(m)
    thr = tol.minor_for(inf_norm(mat), 1)
    spec = eigenvalues(mat, tol, check_residual=False)
    return YES if min(v.real for v in spec.values) > thr else NO


# ---------------------------------------------------------------------------
# sufficiency


def _csu_violation_system(mat: np.ndarray, signs, i: int):
    """Constraint rows for: x in orthant `signs`, SAx <= 0, with a strict
    violation at position i (normalized to margin 1)."""
    n = mat.shape[0]
    rows, consts = [], []
    for j in range(n):
        row = np.zeros(n)
        row[j] = signs[j]
        rows.append(row)
        consts.append(0.0)  # s_j x_j >= 0
    for j in range(n):
        rows.append(-signs[j] * mat[j])
        consts.append(0.0)  # -s_j (Ax)_j >= 0
    row = np.zeros(n)
    row[i] = signs[i]
    rows.append(row)
    consts.append(-1.0)  # s_i x_i >= 1
    rows.append(-signs[i] * mat[i])
    consts.append(-1.0)  # -s_i (Ax)_i >= 1
    return rows, consts


def _csu_violation_lp(mat: np.ndarray, signs, i: int) -> Optional[np.ndarray]:
    n = mat.shape[0]
    s = np.asarray(signs, dtype=float)
    a_ub = np.vstack([-np.diag(s), s[:, None] * mat])
    b_ub = np.zeros(2 * n)
    extra_ub = np.vstack([-s[i] * np.eye(n)[i], s[i] * mat[i]])
    a_ub = np.vstack([a_ub, extra_ub])
    b_ub = np.concatenate([b_ub, [-1.0, -1.0]])
    res = linprog(
        c=np.zeros(n),
        A_ub=a_ub,
        b_ub=b_ub,
        bounds=[(None, None)] * n,
        method="highs",
    )
    return res.x if res.status == 0 and res.x is not None else None


def _csu_violation_lp_max(mat: np.ndarray, signs, i: int, box: float = 1e4) -> Optional[np.ndarray]:
    """Maximize the violation -s_i (Ax)_i on the slice s_i x_i = 1 of the
    orthant cone, coordinates bounded by `box` (backstop when a feasible
    system yields only a sub-threshold witness)."""
    n = mat.shape[0]
    s = np.asarray(signs, dtype=float)
    a_ub = np.vstack([-np.diag(s), s[:, None] * mat, np.diag(s)])
    b_ub = np.concatenate([np.zeros(2 * n), np.full(n, box)])
    a_eq = (s[i] * np.eye(n)[i]).reshape(1, -1)
    res = linprog(
        c=s[i] * mat[i],  # minimize s_i (Ax)_i
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=np.ones(1),
        bounds=[(None, None)] * n,
        method="highs",
    )
    return res.x if res.status == 0 and res.x is not None else None


def is_column_sufficient(
    m, budget: int = 2000, seed: int = 0, tol: Tolerances = DEFAULT_TOL
):
    """Column sufficiency: x_i (Ax)_i <= 0 for all i implies all products 0.

    "no" carries an exact-validated witness.  Matrices whose symmetric
    part is positive semidefinite (within tolerance) are certified "yes"
    immediately at any n.  Otherwise, for n <= 3 the verdict is an exact
    decision (every orthant/violation-position system checked for
    emptiness over the rationals); for larger n a budgeted search returns
    "no" or "unknown".
    """
    mat = as_matrix(m)
    n = mat.shape[0]
    spent = 0

    # PSD shortcut: if the symmetric part is positive semidefinite within
    # tolerance, any x with all products <= 0 has every product bounded
    # below by lambda_min * n * ||x||_inf^2, which cannot clear the strict
    # witness gate; the verdict is "yes" with no search needed.
    sym_min = float(np.linalg.eigvalsh(0.5 * (mat + mat.T)).min())
    if sym_min >= -tol.minor_for(inf_norm(mat), 1) / n:
        return YES, None

    for cand in _axis_candidates(n):
        spent += 1
        out = _gate_witness(mat, cand, strict=True, tol=tol)
        if out is not None:
            return NO, out

    if n <= EXACT_SUFFICIENCY_MAX_DIM:
        for signs in product((1, -1), repeat=n):
            for i in range(n):
                rows, consts = _csu_violation_system(mat, signs, i)
                point = feasibility.feasible_point(rows, consts)
                if point is None:
                    continue
                x = np.array([float(v) for v in point])
                out = _gate_witness(mat, x, strict=True, tol=tol)
                if out is not None:
                    return NO, out
                # Feasible but below the minor threshold: push the
                # violation as far as the cone allows before giving up.
                x = _csu_violation_lp_max(mat, signs, i)
                if x is not None:
                    out = _gate_witness(mat, x, strict=True, tol=tol)
                    if out is not None:
                        return NO, out
        # Every orthant system is empty or carries only sub-threshold
        # violations; that is a "yes" under the declared tolerances.
        return YES, None

    rng = np.random.default_rng(seed)
    n_random = max(budget // 2, 16)
    for _ in range(n_random):
        if spent >= budget:
            break
        spent += 1
        out = _gate_witness(mat, rng.standard_normal(n), strict=True, tol=tol)
        if out is not None:
            return NO, out

    pattern_pool = list(product((1, -1), repeat=n)) if n <= REVERSAL_LP_MAX_DIM else []
    rng.shuffle(pattern_pool)
    for signs in pattern_pool:
        for i in range(n):
            if spent >= budget:
                return UNKNOWN, None
            spent += 1
            x = _csu_violation_lp(mat, signs, i)
            if x is None:
                continue
            out = _gate_witness(mat, x, strict=True, tol=tol)
            if out is not None:
                return NO, out
    return UNKNOWN, None


def is_row_sufficient(m, budget: int = 2000, seed: int = 0, tol: Tolerances = DEFAULT_TOL):
    """Row sufficiency: the transpose is column sufficient."""
    mat = as_matrix(m)
    return is_column_sufficient(mat.T, budget=budget, seed=seed, tol=tol)


def is_sufficient(m, budget: int = 2000, seed: int = 0, tol: Tolerances = DEFAULT_TOL) -> str:
    col, _ = is_column_sufficient(m, budget=budget, seed=seed, tol=tol)
    row, _ = is_row_sufficient(m, budget=budget, seed=seed, tol=tol)
    return verdict_and(col, row)


# ---------------------------------------------------------------------------
# powers experiment


@dataclass(frozen=True)
class PowersReport:
    """is_P_minors verdicts for A, A^2, ..., A^kmax plus the spectral
    observation relevant to the open positivity question."""

    verdicts: tuple[str, ...]
    all_powers_P: bool
    eigenvalues_all_positive_real: Optional[bool]
    spectrum: tuple[complex, ...]


def powers_P_check(m, kmax: int, tol: Tolerances = DEFAULT_TOL) -> PowersReport:
    mat = as_matrix(m)
    n = mat.shape[0]
    if n > POWERS_MAX_DIM:
        raise DimensionTooLargeError(f"powers check capped at n={POWERS_MAX_DIM}")
    if not 1 <= kmax <= POWERS_MAX_K:
        raise ValueError(f"kmax must be in 1..{POWERS_MAX_K}")
    verdicts = []
    power = np.eye(n)
    for _ in range(kmax):
        power = power @ mat
        verdicts.append(is_P_minors(power, tol)[0])
    spec = eigenvalues(mat, tol, check_residual=False)
    all_p = all(v == YES for v in verdicts)
    positive_real: Optional[bool] = None
    if all_p:
        positive_real = all(
            abs(v.imag) <= tol.conj_for(abs(v)) and v.real > 0 for v in spec.values
        )
    return PowersReport(tuple(verdicts), all_p, positive_real, spec.values)


# ---------------------------------------------------------------------------
# full report


@dataclass
class ClassificationReport:
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    methods: dict = field(default_factory=dict)
    tolerances_used: dict = field(default_factory=dict)
    seed: int = 0

    def as_obj(self, matrix=None) -> dict:
        from .serialize import matrix_to_obj

        obj = {
            "verdicts": dict(self.verdicts),
            "witnesses": {
                k: (list(map(float, v)) if isinstance(v, np.ndarray) else list(v))
                for k, v in self.witnesses.items()
                if v is not None
            },
            "methods": dict(self.methods),
            "tolerances": dict(self.tolerances_used),
            "seed": self.seed,
        }
        if matrix is not None:
            obj["input"] = matrix_to_obj(matrix)
        return obj


def classify_matrix(
    m, budget: int = 2000, seed: int = 0, tol: Tolerances = DEFAULT_TOL
) -> ClassificationReport:
    """One-stop report over all classes, with witnesses where applicable."""
    mat = as_matrix(m)
    n = mat.shape[0]
    rpt = ClassificationReport(seed=seed, tolerances_used=tol.as_dict())

    if n <= MINORS_MAX_DIM:
        p_verdict, p_witness = is_P_minors(mat, tol)
        rpt.verdicts["P"] = p_verdict
        rpt.methods["P"] = "principal-minors"
        if p_witness is not None:
            rpt.witnesses["P"] = p_witness
        rpt.verdicts["P0"] = is_P0_minors(mat, tol)[0]
        rpt.methods["P0"] = "principal-minors"
    else:
        witness = find_reversal_witness(mat, budget=budget, seed=seed, tol=tol)
        rpt.verdicts["P"] = NO if witness is not None else UNKNOWN
        rpt.methods["P"] = "sign-reversal-search"
        if witness is not None:
            rpt.witnesses["P"] = witness
        rpt.verdicts["P0"] = UNKNOWN
        rpt.methods["P0"] = "sign-reversal-search"

    z = is_Z(mat)
    rpt.verdicts["Z"] = z
    rpt.methods["Z"] = "off-diagonal-signs"
    if z == YES:
        m_verdict = is_P_via_Z_spectrum(mat, tol)
        rpt.methods["M"] = "Z-plus-eigenvalue-real-parts"
    else:
        m_verdict = NO
        rpt.methods["M"] = "off-diagonal-signs"
    rpt.verdicts["M"] = m_verdict

    rpt.verdicts["positive-stable"] = is_positive_stable(mat, tol)
    rpt.methods["positive-stable"] = "eigenvalue-real-parts"

    col, col_w = is_column_sufficient(mat, budget=budget, seed=seed, tol=tol)
    row, row_w = is_row_sufficient(mat, budget=budget, seed=seed + 1, tol=tol)
    rpt.verdicts["column-sufficient"] = col
    rpt.verdicts["row-sufficient"] = row
    rpt.verdicts["sufficient"] = verdict_and(col, row)
    method = "exact-orthant-decomposition" if n <= EXACT_SUFFICIENCY_MAX_DIM else "budgeted-search"
    rpt.methods["column-sufficient"] = method
    rpt.methods["row-sufficient"] = method
    rpt.methods["sufficient"] = method
    if col_w is not None:
        rpt.witnesses["column-sufficient"] = col_w
    if row_w is not None:
        rpt.witnesses["row-sufficient"] = row_w
    return rpt
