"""Candidate spectra: symmetric functions, P-set tests, wedge bounds,
augmentation by positive reals, and heuristic realization by a P-matrix.

A multiset of reals and conjugate pairs is a P-set exactly when all its
elementary symmetric functions are positive; such sets are precisely the
spectra of P-matrices.  All sigma computations here are matrix-free
(polynomial expansion of prod (x + lambda_i)); the characteristic
polynomial of a realizing matrix is the independent cross-check route.

The P-set decision is evaluated after scaling the values by
L = max(1, max |lambda|), which leaves the test invariant
(sigma_k scales by L^k) while keeping degree-~10^3 expansions inside
floating-point range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .classify import NO, YES, is_P_minors
from .errors import (
    DimensionTooLargeError,
    NotAPSetError,
    NotConjugationClosedError,
    PreconditionViolatedError,
    ZeroElementInP0CheckError,
)
from .linalg import eigenvalues, pair_conjugates
from .tolerances import DEFAULT_TOL, Tolerances

FLOAT64_MAX_VALUES = 800   # beyond this the expansion switches to clongdouble
EXPANSION_MAX_VALUES = 12000


@dataclass(frozen=True)
class CandidateSpectrum:
    values: tuple[complex, ...]
    closed_under_conjugation: bool


def make_candidate(values: Sequence[complex], tol: Tolerances = DEFAULT_TOL) -> CandidateSpectrum:
    """Canonicalize a raw value list (conjugate pairing computed, not assumed)."""
    vals, _, closed = pair_conjugates([complex(v) for v in values], tol)
    return CandidateSpectrum(vals, closed)


def _coerce(s, tol: Tolerances) -> CandidateSpectrum:
    if isinstance(s, CandidateSpectrum):
        return s
    return make_candidate(s, tol)


def _expand_scaled(values: Sequence[complex], dtype) -> tuple[np.ndarray, float, float]:
    """Coefficients sigma_k(values / L) for k = 1..n plus (L, imag residue)."""
    n = len(values)
    scale = max(1.0, max((abs(v) for v in values), default=1.0))
    coeffs = np.zeros(n + 1, dtype=dtype)
    coeffs[0] = 1.0
    deg = 0
    for v in values:
        vs = complex(v) / scale
        coeffs[1 : deg + 2] = coeffs[1 : deg + 2] + vs * coeffs[0 : deg + 1]
        deg += 1
    residue = float(np.abs(coeffs.imag).max())
    return coeffs.real[1:], scale, residue


def sigma_all(s, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Elementary symmetric functions sigma_1..sigma_n of the candidate.

    Requires conjugation closure; the imaginary residue of the complex
    expansion is checked against the conjugation tolerance and discarded.
    """
    cand = _coerce(s, tol)
    if not cand.closed_under_conjugation:
        raise NotConjugationClosedError("candidate spectrum has an unmatched non-real value")
    n = len(cand.values)
    if n > EXPANSION_MAX_VALUES:
        raise DimensionTooLargeError(f"expansion capped at {EXPANSION_MAX_VALUES} values")
    dtype = np.complex128 if n <= FLOAT64_MAX_VALUES else np.clongdouble
    scaled, scale, residue = _expand_scaled(cand.values, dtype)
    if residue > tol.conj * (1.0 + float(np.abs(scaled).max(initial=1.0))):
        raise NotConjugationClosedError(f"imaginary residue {residue:.3e} above tolerance")
    k = np.arange(1, n + 1, dtype=float)
    with np.errstate(over="ignore"):
        out = scaled.astype(float) * np.power(scale, k)
    return out


def _pset_thresholds(n: int, scale: float, tol: Tolerances) -> np.ndarray:
    k = np.arange(1, n + 1, dtype=float)
    return tol.minor * (1.0 + np.power(scale, -k))


def is_P_set(s, tol: Tolerances = DEFAULT_TOL, variant: str = "P") -> str:
    """P-set test: sigma_k > threshold for all k (P0: sigma_k >= -threshold).

    Scale-invariant: evaluated on values/L against thresholds
    tol.minor * (1 + L^k) / L^k.
    """
    if variant not in ("P", "P0"):
        raise ValueError("variant must be 'P' or 'P0'")
    cand = _coerce(s, tol)
    if not cand.closed_under_conjugation:
        raise NotConjugationClosedError("candidate spectrum has an unmatched non-real value")
    n = len(cand.values)
    if n > EXPANSION_MAX_VALUES:
        raise DimensionTooLargeError(f"expansion capped at {EXPANSION_MAX_VALUES} values")
    dtype = np.complex128 if n <= FLOAT64_MAX_VALUES else np.clongdouble
    scaled, scale, _ = _expand_scaled(cand.values, dtype)
    thr = _pset_thresholds(n, scale, tol).astype(scaled.dtype)
    if variant == "P":
        return YES if bool((scaled > thr).all()) else NO
    return YES if bool((scaled >= -thr).all()) else NO


@dataclass(frozen=True)
class WedgeResult:
    verdict: str
    max_arg: float
    bound: float
    equality_case: Optional[bool] = None
    equality_sigma_consistent: Optional[bool] = None


def wedge_check(s, variant: str = "P", tol: Tolerances = DEFAULT_TOL) -> WedgeResult:
    """Kellogg wedge bound: |arg lambda_i| < (n-1)pi/n for P-sets
    (<= for P0-sets with nonzero values, equality iff sigma_1..sigma_{n-1}
    vanish and sigma_n > 0).

    Degenerate note: for n = 1 the bound is 0, so even the singleton
    P-set {t}, t > 0, sits exactly on it; callers interested in the
    theorem proper should use n >= 2.
    """
    if variant not in ("P", "P0"):
        raise ValueError("variant must be 'P' or 'P0'")
    cand = _coerce(s, tol)
    n = len(cand.values)
    if n == 0:
        raise ValueError("empty candidate spectrum")
    bound = (n - 1) * math.pi / n
    if variant == "P0":
        for v in cand.values:
            if abs(v) <= tol.conj:
                raise ZeroElementInP0CheckError("P0 wedge bound requires nonzero values")
    max_arg = max(abs(math.atan2(v.imag, v.real)) for v in cand.values)
    if variant == "P":
        return WedgeResult(YES if max_arg < bound else NO, max_arg, bound)
    verdict = YES if max_arg <= bound + 1e-12 else NO
    equality = abs(max_arg - bound) <= 1e-9
    sigma_ok = None
    if equality and cand.closed_under_conjugation:
        sig = sigma_all(cand, tol)
        scale = max(1.0, max(abs(v) for v in cand.values))
        thr = tol.minor * (1.0 + np.power(scale, np.arange(1, n + 1, dtype=float)))
        sigma_ok = bool((np.abs(sig[:-1]) <= thr[:-1]).all() and sig[-1] > thr[-1])
    return WedgeResult(verdict, max_arg, bound, equality, sigma_ok)


# ---------------------------------------------------------------------------
# augmentation by positive reals


@dataclass(frozen=True)
class AugmentGrid:
    """Search parameters for the positive-real augmentation."""

    magnitudes: tuple[float, ...] = tuple(0.25 * i for i in range(1, 33))
    ladder_magnitudes: tuple[float, ...] = (0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0)
    random_tuples: int = 120
    max_additions: int = 6000
    dense_count_limit: int = 24
    seed: int = 0


@dataclass(frozen=True)
class AugmentResult:
    additions: tuple[float, ...]
    sigma: tuple[float, ...]
    sigma_scale: float  # 1.0 when sigma is unscaled; else sigma_k(true) = sigma[k-1] * scale^k


def _check_augment_precondition(cand: CandidateSpectrum, tol: Tolerances) -> None:
    if not cand.closed_under_conjugation:
        raise PreconditionViolatedError("non-real values must come in conjugate pairs")
    for v in cand.values:
        if v.imag == 0.0 and v.real <= tol.conj:
            raise PreconditionViolatedError("real members must be positive")


def _union_is_pset(base: tuple[complex, ...], additions: Sequence[float], tol: Tolerances) -> bool:
    vals = base + tuple(complex(t) for t in additions)
    if len(vals) > EXPANSION_MAX_VALUES:
        return False
    return is_P_set(CandidateSpectrum(vals, True), tol) == YES


def _kellogg_min_total(values: Sequence[complex]) -> int:
    """Smallest total set size not excluded by the wedge bound (necessary)."""
    mx = max((abs(math.atan2(v.imag, v.real)) for v in values), default=0.0)
    if mx <= 0.0:
        return 1
    if mx >= math.pi:
        return EXPANSION_MAX_VALUES + 1
    return math.floor(math.pi / (math.pi - mx)) + 1


def _dip_targets(values: Sequence[complex]) -> list[float]:
    """Candidate magnitudes near the dips of prod(x + pair) on x >= 0.

    A pair a +- bi with a < 0 dips at x = |a| with margin b^2; ladder
    values near the dip absorb it fastest.
    """
    out = []
    for v in values:
        if v.imag > 0 and v.real < 0:
            out.extend([abs(v.real), abs(v), 1.25 * abs(v.real)])
    return sorted(set(round(t, 6) for t in out if t > 0))


def _result_sigma(base, additions, tol) -> tuple[tuple[float, ...], float]:
    vals = base + tuple(complex(t) for t in additions)
    sig = sigma_all(CandidateSpectrum(vals, True), tol)
    if np.isfinite(sig).all():
        return tuple(float(x) for x in sig), 1.0
    n = len(vals)
    dtype = np.complex128 if n <= FLOAT64_MAX_VALUES else np.clongdouble
    scaled, scale, _ = _expand_scaled(vals, dtype)
    return tuple(float(x) for x in scaled), float(scale)


def augment_to_P_set(
    c, grid: Optional[AugmentGrid] = None, tol: Tolerances = DEFAULT_TOL
) -> Optional[AugmentResult]:
    """Positive reals whose union with `c` has all sigma_k positive.

    Smallest addition count first; counts below the Kellogg-infeasible
    threshold are provably impossible and skipped outright.  Phase one
    scans small counts densely over the magnitude grid (plus dip-targeted
    and random tuples); phase two runs equal-value ladders, where
    positivity is monotone in the count, so the minimal count per
    magnitude comes from bisection.  None on budget exhaustion (the
    augmentation theorem guarantees existence, so persistent failure at
    small sizes signals a bug).
    """
    grid = grid or AugmentGrid()
    cand = _coerce(c, tol)
    _check_augment_precondition(cand, tol)
    base = cand.values

    if _union_is_pset(base, (), tol):
        sig, scale = _result_sigma(base, (), tol)
        return AugmentResult((), sig, scale)

    m_start = max(1, _kellogg_min_total(base) - len(base))
    if m_start > grid.max_additions:
        return None
    magnitudes = tuple(sorted(set(list(grid.magnitudes) + _dip_targets(base))))
    rng = np.random.default_rng(grid.seed)

    def finish(additions):
        adds = tuple(sorted(float(t) for t in additions))
        sig, scale = _result_sigma(base, adds, tol)
        return AugmentResult(adds, sig, scale)

    # dense small-count phase (mixed tuples only pay off at small counts;
    # past that the equal-value ladders dominate)
    dense_hi = min(m_start + grid.dense_count_limit - 1, grid.max_additions)
    if m_start <= 8:
        for m in range(m_start, dense_hi + 1):
            for t in magnitudes:
                if _union_is_pset(base, [t] * m, tol):
                    return finish([t] * m)
            for _ in range(max(grid.random_tuples // max(m, 1), 4)):
                cand_adds = np.exp(rng.uniform(np.log(0.05), np.log(30.0), m))
                if _union_is_pset(base, cand_adds, tol):
                    return finish(cand_adds)

    # equal-value ladder phase: positivity is monotone in the count for a
    # fixed magnitude, so one incremental pass per magnitude finds the
    # minimal count; dip-targeted magnitudes run first and cap the rest.
    ladder_ts = tuple(_dip_targets(base)) + tuple(grid.ladder_magnitudes)
    best: Optional[tuple[int, float]] = None
    cap = grid.max_additions
    for t in dict.fromkeys(ladder_ts):
        m_t = _ladder_min_count(base, float(t), cap, tol)
        if m_t is not None and (best is None or m_t < best[0]):
            best = (m_t, float(t))
            cap = m_t - 1
    if best is not None:
        m, t = best
        return finish([t] * m)
    return None


def _ladder_min_count(
    base: tuple[complex, ...], t: float, m_cap: int, tol: Tolerances
) -> Optional[int]:
    """Smallest m with base + m copies of t passing the P-set test.

    Multiplying a positive-coefficient polynomial by (x + t), t > 0, keeps
    the coefficients positive, so the first passing count in one
    incremental expansion is the minimum.
    """
    if m_cap < 1 or t <= 0.0:
        return None
    n_max = len(base) + m_cap
    if n_max > EXPANSION_MAX_VALUES:
        m_cap = EXPANSION_MAX_VALUES - len(base)
        n_max = len(base) + m_cap
        if m_cap < 1:
            return None
    dtype = np.complex128 if n_max <= FLOAT64_MAX_VALUES else np.clongdouble
    scale = max(1.0, max((abs(v) for v in base), default=1.0), t)
    coeffs = np.zeros(n_max + 1, dtype=dtype)
    coeffs[0] = 1.0
    deg = 0
    for v in base:
        coeffs[1 : deg + 2] = coeffs[1 : deg + 2] + (complex(v) / scale) * coeffs[0 : deg + 1]
        deg += 1
    ts = t / scale
    thr_full = (tol.minor * (1.0 + np.power(scale, -np.arange(1, n_max + 1, dtype=float)))).astype(
        np.float64 if dtype is np.complex128 else np.longdouble
    )
    for m in range(1, m_cap + 1):
        coeffs[1 : deg + 2] = coeffs[1 : deg + 2] + ts * coeffs[0 : deg + 1]
        deg += 1
        if bool((coeffs.real[1 : deg + 1] > thr_full[:deg]).all()):
            return m
    return None


# ---------------------------------------------------------------------------
# realization


def spectra_match(a: Sequence[complex], b: Sequence[complex], tol: float = 1e-6):
    """Multiset eigenvalue comparison via Hungarian assignment.

    Returns (ok, max_deviation); ok when every matched pair is within
    tol * (1 + |value|).
    """
    av = np.array([complex(v) for v in a])
    bv = np.array([complex(v) for v in b])
    if av.shape != bv.shape:
        return False, math.inf
    cost = np.abs(av[:, None] - bv[None, :])
    rows, cols = linear_sum_assignment(cost)
    devs = cost[rows, cols] / (1.0 + np.abs(bv[cols]))
    return bool((devs <= tol).all()), float(devs.max(initial=0.0))


def _block_form(cand: CandidateSpectrum) -> np.ndarray:
    vals, pairing, _ = pair_conjugates(cand.values)
    mats = []
    for group in pairing:
        if len(group) == 1:
            mats.append(np.array([[vals[group[0]].real]]))
        else:
            a, b = vals[group[0]].real, abs(vals[group[0]].imag)
            mats.append(np.array([[a, b], [-b, a]]))
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n))
    pos = 0
    for m in mats:
        k = m.shape[0]
        out[pos : pos + k, pos : pos + k] = m
        pos += k
    return out


def realize_P_set(
    s, budget: int = 4000, seed: int = 0, tol: Tolerances = DEFAULT_TOL
) -> Optional[np.ndarray]:
    """Heuristic construction of a P-matrix with the given P-set spectrum.

    Starts from the real block-diagonal form (1x1 blocks for reals, 2x2
    rotation-scaling blocks for conjugate pairs) and searches over random
    orthogonal similarities; None on budget exhaustion (failure is not a
    refutation of the existential theorem).
    """
    cand = _coerce(s, tol)
    if is_P_set(cand, tol) != YES:
        raise NotAPSetError("realization requires a P-set")
    n = len(cand.values)
    if n > 12:
        raise DimensionTooLargeError("realization verifies minors; capped at n=12")
    target = np.array(cand.values)
    block = _block_form(cand)

    def accept(mat):
        if is_P_minors(mat, tol)[0] != YES:
            return False
        ok, _ = spectra_match(eigenvalues(mat, tol).values, target, 1e-6)
        return ok

    if accept(block):
        return block
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        g = rng.standard_normal((n, n))
        q, r = np.linalg.qr(g)
        q = q * np.sign(np.diag(r))
        mat = q @ block @ q.T
        if accept(mat):
            return mat
    return None


# ---------------------------------------------------------------------------
# extremal evidence harness


@dataclass(frozen=True)
class ExtremalSearchReport:
    n: int
    budget: int
    trials: int
    p_matrices_found: int
    max_left_half_plane_count: Optional[int]
    max_abs_arg: Optional[float]
    witness: Optional[tuple[tuple[float, ...], ...]]
    witness_spectrum: Optional[tuple[complex, ...]]


def extremal_spectrum_search(
    n: int, budget: int = 500, seed: int = 0, tol: Tolerances = DEFAULT_TOL
) -> ExtremalSearchReport:
    """Randomized evidence for P-matrices with eigenvalues far into the
    left half-plane: records the best left-half-plane count and the
    largest |arg lambda| seen over generated P-matrices.
    """
    if not 2 <= n <= 8:
        raise ValueError("extremal search supports 2 <= n <= 8")
    rng = np.random.default_rng(seed)
    trials = 0
    found = 0
    best_count: Optional[int] = None
    best_arg: Optional[float] = None
    witness = None
    witness_spec = None

    def consider(mat):
        nonlocal found, best_count, best_arg, witness, witness_spec
        if is_P_minors(mat, tol)[0] != YES:
            return
        found += 1
        spec = eigenvalues(mat, tol, check_residual=False)
        lhp = sum(1 for v in spec.values if v.real < 0)
        arg = max(abs(math.atan2(v.imag, v.real)) for v in spec.values)
        if best_count is None or lhp > best_count:
            best_count = lhp
            witness = tuple(tuple(float(x) for x in row) for row in mat)
            witness_spec = spec.values
        if best_arg is None or arg > best_arg:
            best_arg = arg

    while trials < budget:
        mode = trials % 3
        trials += 1
        if mode == 0:
            consider(rng.uniform(-1.0, 1.0, (n, n)))
        elif mode == 1:
            m = rng.uniform(-1.0, 1.0, (n, n))
            off = np.abs(m).sum(axis=1) - np.abs(np.diag(m))
            np.fill_diagonal(m, off + rng.uniform(0.1, 1.0, n))
            consider(m + rng.uniform(-0.3, 0.3, (n, n)))
        else:
            # random P-set with a left-half-plane pair, short realization try
            vals = []
            pairs = max(1, n // 2 - (0 if n % 2 else 1))
            for _ in range(pairs):
                a = rng.uniform(-2.0, 0.5)
                b = rng.uniform(0.5, 2.5)
                vals += [complex(a, b), complex(a, -b)]
            while len(vals) < n:
                vals.append(complex(rng.uniform(0.5, 4.0), 0.0))
            cand = CandidateSpectrum(tuple(vals), True)
            if is_P_set(cand, tol) != YES:
                continue
            block = _block_form(cand)
            for _ in range(20):
                g = rng.standard_normal((n, n))
                q, r = np.linalg.qr(g)
                q = q * np.sign(np.diag(r))
                consider(q @ block @ q.T)

    return ExtremalSearchReport(
        n=n,
        budget=budget,
        trials=trials,
        p_matrices_found=found,
        max_left_half_plane_count=best_count,
        max_abs_arg=best_arg,
        witness=witness,
        witness_spectrum=witness_spec,
    )
