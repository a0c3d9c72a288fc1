"""Linear complementarity: Lemke pivoting, complementary-cone enumeration,
and the uniqueness census that cross-validates the P-matrix equivalence.

LCP(M, q): find z >= 0 with w = Mz + q >= 0 and z^T w = 0.  The problem
has a unique solution for every q exactly when M is a P-matrix; the
enumerator is the brute-force oracle over all 2^n complementary bases and
the Lemke solver is the constructive route checked against it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import DimensionTooLargeError, LcpCycleError
from .linalg import as_matrix, as_vector, inf_norm
from .tolerances import DEFAULT_TOL, Tolerances

LEMKE_MAX_DIM = 32
ENUM_MAX_DIM = 12
CENSUS_MAX_DIM = 10


@dataclass(frozen=True)
class LCPInstance:
    m: np.ndarray
    q: np.ndarray

    @staticmethod
    def make(m, q) -> "LCPInstance":
        mat = as_matrix(m)
        vec = as_vector(q, mat.shape[0])
        return LCPInstance(mat, vec)

    @property
    def n(self) -> int:
        return self.m.shape[0]


@dataclass(frozen=True)
class LCPSolution:
    z: np.ndarray
    w: np.ndarray
    basis: tuple[int, ...]  # 1-based indices where z is basic


def validate_solution(inst: LCPInstance, sol: LCPSolution, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Re-check the solution invariants independently of how it was found."""
    m, q = inst.m, inst.q
    res = inf_norm(sol.w - (m @ sol.z + q))
    thr_res = tol.res * (inf_norm(m) * inf_norm(sol.z) + inf_norm(q) + 1.0)
    thr_sign = tol.minor_for(inf_norm(m), 1) * (1.0 + inf_norm(sol.z) + inf_norm(sol.w))
    comp = abs(float(sol.z @ sol.w))
    return bool(
        res <= thr_res
        and sol.z.min(initial=0.0) >= -thr_sign
        and sol.w.min(initial=0.0) >= -thr_sign
        and comp <= tol.comp_for(inf_norm(q)) * (1.0 + inf_norm(sol.z))
    )


def _solution_from_z(inst: LCPInstance, z: np.ndarray) -> LCPSolution:
    w = inst.m @ z + inst.q
    basis = tuple(i + 1 for i in range(inst.n) if z[i] > 0.0)
    return LCPSolution(z, w, basis)


def lemke_solve(inst: LCPInstance, tol: Tolerances = DEFAULT_TOL) -> Optional[LCPSolution]:
    """Lemke complementary pivoting with the all-ones covering vector.

    Lexicographic ratio tests break degenerate ties (the classic
    anti-cycling rule); the iteration cap 2^(n+2) backstops it, and
    exceeding the cap raises LcpCycleError as an anomaly.  Returns None on
    ray termination.
    """
    n = inst.n
    if n > LEMKE_MAX_DIM:
        raise DimensionTooLargeError(f"lemke_solve capped at n={LEMKE_MAX_DIM}")
    m, q = inst.m, inst.q
    if q.min(initial=0.0) >= 0.0:
        return _solution_from_z(inst, np.zeros(n))

    # tableau columns: [w_0..w_{n-1} | z_0..z_{n-1} | z0 | rhs]
    tab = np.hstack([np.eye(n), -m, -np.ones((n, 1)), q.reshape(-1, 1)])
    rhs_col = 2 * n + 1
    z0_col = 2 * n
    basis = list(range(n))
    piv_tol = 1e-11 * (1.0 + inf_norm(m))

    def pivot(row: int, col: int) -> None:
        tab[row] /= tab[row, col]
        for r in range(n):
            if r != row and tab[r, col] != 0.0:
                tab[r] -= tab[r, col] * tab[row]

    def lex_ratio_row(col: int) -> Optional[int]:
        cand = [r for r in range(n) if tab[r, col] > piv_tol]
        if not cand:
            return None
        # compare (rhs, w-block) / pivot entry lexicographically
        best = cand[0]
        best_vec = np.concatenate(([tab[best, rhs_col]], tab[best, :n])) / tab[best, col]
        for r in cand[1:]:
            vec = np.concatenate(([tab[r, rhs_col]], tab[r, :n])) / tab[r, col]
            diff = vec - best_vec
            nz = np.nonzero(np.abs(diff) > 1e-12 * (1.0 + np.abs(best_vec)))[0]
            if nz.size and diff[nz[0]] < 0:
                best, best_vec = r, vec
        return best

    row = int(np.argmin(q))
    pivot(row, z0_col)
    leaving = basis[row]
    basis[row] = z0_col
    entering = n + leaving  # complement of the leaving w-variable

    for _ in range(2 ** (n + 2)):
        row = lex_ratio_row(entering)
        if row is None:
            return None  # ray termination
        pivot(row, entering)
        leaving, basis[row] = basis[row], entering
        if leaving == z0_col:
            z = np.zeros(n)
            for r, b in enumerate(basis):
                if n <= b < 2 * n:
                    z[b - n] = tab[r, rhs_col]
            z = np.maximum(z, 0.0)
            return _solution_from_z(inst, z)
        entering = leaving + n if leaving < n else leaving - n
    raise LcpCycleError("pivot cap 2^(n+2) exceeded; lexicographic rule should prevent this")


@dataclass(frozen=True)
class EnumerationResult:
    solutions: tuple[LCPSolution, ...]
    singular_skipped: int


def enumerate_solutions(inst: LCPInstance, tol: Tolerances = DEFAULT_TOL) -> EnumerationResult:
    """Brute-force oracle over all 2^n complementary bases.

    For each index set alpha: z_alpha solves M_aa z_alpha = -q_alpha with
    the complement clamped to zero; a basis is accepted when all resulting
    components clear -tau_minor.  Singular bases are skipped and counted.
    Distinct solutions are merged within 1e-8.
    """
    n = inst.n
    if n > ENUM_MAX_DIM:
        raise DimensionTooLargeError(f"enumeration capped at n={ENUM_MAX_DIM}")
    m, q = inst.m, inst.q
    thr_sign = tol.minor_for(inf_norm(m), 1) * (1.0 + inf_norm(q))
    sols: list[LCPSolution] = []
    skipped = 0
    for k in range(n + 1):
        for alpha in combinations(range(n), k):
            z = np.zeros(n)
            if alpha:
                sel = list(alpha)
                sub = m[np.ix_(sel, sel)]
                thr_piv = tol.sing_for(max(inf_norm(sub), inf_norm(m)))
                import warnings

                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
                    try:
                        lu, piv = scipy.linalg.lu_factor(sub, check_finite=False)
                    except (scipy.linalg.LinAlgError, ValueError):
                        skipped += 1
                        continue
                if np.abs(np.diag(lu)).min() <= thr_piv:
                    skipped += 1
                    continue
                z[sel] = scipy.linalg.lu_solve((lu, piv), -q[sel], check_finite=False)
            w = m @ z + q
            if z.min(initial=0.0) < -thr_sign or w.min(initial=0.0) < -thr_sign:
                continue
            zc = np.maximum(z, 0.0)
            dup = any(
                inf_norm(zc - s.z) <= 1e-8 * (1.0 + inf_norm(s.z)) for s in sols
            )
            if not dup:
                sols.append(_solution_from_z(inst, zc))
    return EnumerationResult(tuple(sols), skipped)


@dataclass(frozen=True)
class CensusReport:
    trials: int
    count_zero: int
    count_one: int
    count_many: int
    verdict: str  # consistent-with-P | uniqueness-violated | inconclusive
    lemke_mismatches: int
    lemke_rays: int
    singular_skips: int
    example_bad_q: Optional[tuple[float, ...]]


def uniqueness_census(
    m, trials: int, seed: int = 0, tol: Tolerances = DEFAULT_TOL, stop_early: bool = False
) -> CensusReport:
    """Sample random q in [-5, 5]^n and tally enumeration counts {0, 1, >=2}.

    Consistent-with-P requires every tally to be exactly one (and no
    singular bases skipped; skips downgrade the verdict to inconclusive).
    When the count is one, lemke_solve must reproduce the solution within
    1e-6.  `stop_early` returns as soon as a count != 1 shows up, for
    contrapositive sampling.
    """
    mat = as_matrix(m)
    n = mat.shape[0]
    if n > CENSUS_MAX_DIM:
        raise DimensionTooLargeError(f"census capped at n={CENSUS_MAX_DIM}")
    rng = np.random.default_rng(seed)

    # factorizations are q-independent: cache one LU per index set
    bases = []
    skipped_bases = 0
    import warnings

    for k in range(n + 1):
        for alpha in combinations(range(n), k):
            if not alpha:
                bases.append(((), None))
                continue
            sel = list(alpha)
            sub = mat[np.ix_(sel, sel)]
            thr_piv = tol.sing_for(max(inf_norm(sub), inf_norm(mat)))
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
                try:
                    lu, piv = scipy.linalg.lu_factor(sub, check_finite=False)
                except (scipy.linalg.LinAlgError, ValueError):
                    skipped_bases += 1
                    continue
            if np.abs(np.diag(lu)).min() <= thr_piv:
                skipped_bases += 1
                continue
            bases.append((sel, (lu, piv)))

    zero = one = many = 0
    mismatches = rays = 0
    bad_q: Optional[tuple[float, ...]] = None
    norm_m = inf_norm(mat)
    for _ in range(trials):
        q = rng.uniform(-5.0, 5.0, n)
        thr_sign = tol.minor_for(norm_m, 1) * (1.0 + inf_norm(q))
        sols: list[np.ndarray] = []
        for sel, fac in bases:
            z = np.zeros(n)
            if sel:
                z[sel] = scipy.linalg.lu_solve(fac, -q[sel], check_finite=False)
            w = mat @ z + q
            if z.min(initial=0.0) < -thr_sign or w.min(initial=0.0) < -thr_sign:
                continue
            zc = np.maximum(z, 0.0)
            if not any(inf_norm(zc - s) <= 1e-8 * (1.0 + inf_norm(s)) for s in sols):
                sols.append(zc)
        count = len(sols)
        if count == 0:
            zero += 1
        elif count == 1:
            one += 1
            sol = lemke_solve(LCPInstance(mat, q), tol)
            if sol is None:
                rays += 1
            elif inf_norm(sol.z - sols[0]) > 1e-6 * (1.0 + inf_norm(sols[0])):
                mismatches += 1
        else:
            many += 1
        if count != 1 and bad_q is None:
            bad_q = tuple(float(x) for x in q)
            if stop_early:
                break

    ran = zero + one + many
    if skipped_bases > 0:
        verdict = "inconclusive"
    elif zero == 0 and many == 0:
        verdict = "consistent-with-P"
    else:
        verdict = "uniqueness-violated"
    return CensusReport(
        trials=ran,
        count_zero=zero,
        count_one=one,
        count_many=many,
        verdict=verdict,
        lemke_mismatches=mismatches,
        lemke_rays=rays,
        singular_skips=skipped_bases,
        example_bad_q=bad_q,
    )
