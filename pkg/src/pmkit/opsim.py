"""Finite-section laboratory for rule-defined Hilbert-space operators.

Operators are given by coefficient rules relative to a fixed orthonormal
basis; every claim is tested on N x N leading sections only (ladders of
orders), never on limits.  Covers: P-operator section checks, real
eigenvalue positivity, the diagonal square root, the Collatz-Wielandt
min-max identity for positive sections, nonsingularity of diagonal
interpolations DT + (I-D)S under the P precondition, the kernel
characterization of column sufficiency, and sign-reversal-set membership.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import combinations, product
from typing import Any, Mapping, Optional, Sequence

import numpy as np
import scipy.linalg

from .classify import NO, YES, is_column_sufficient, is_P_minors
from .errors import (
    DimensionTooLargeError,
    NoConvergenceError,
    NonDiagonalSpecError,
    NonPositiveEigenvalueError,
    NonPositiveSectionError,
    PreconditionNotEstablishedError,
    PreconditionViolatedError,
    RuleUndefinedError,
)
from .linalg import as_matrix, as_vector, eigenvalues, inf_norm
from .tolerances import DEFAULT_TOL, Tolerances

SECTION_MAX_ORDER = 64
KINDS = ("diagonal", "banded", "dense-rule")
RULES = ("inverse-square-diagonal", "tridiag", "matrix-literal")
DECAY_SAMPLE_INDICES = (1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024)


@dataclass(frozen=True)
class OperatorSpec:
    kind: str
    rule: str
    params: Mapping[str, Any]
    decay: bool = False

    def entry(self, i: int, j: int) -> float:
        """Coefficient <T e_j, e_i> for 1-based indices."""
        if i < 1 or j < 1:
            raise RuleUndefinedError("indices are 1-based")
        if self.rule == "inverse-square-diagonal":
            c = float(self.params.get("c", 1.0))
            return c / (i * i) if i == j else 0.0
        if self.rule == "tridiag":
            if i == j:
                return float(self.params["a"])
            if abs(i - j) == 1:
                return float(self.params["b"])
            return 0.0
        if self.rule == "matrix-literal":
            rows = self.params["matrix"]
            k = len(rows)
            if i <= k and j <= k:
                return float(rows[i - 1][j - 1])
            return 1.0 if i == j else 0.0
        raise RuleUndefinedError(f"unknown rule {self.rule!r}")


def make_spec(kind: str, rule: str, params: Optional[Mapping[str, Any]] = None, decay: bool = False) -> OperatorSpec:
    """Validated constructor: rule totality and the declared decay are
    checked on sampled indices."""
    params = dict(params or {})
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if rule not in RULES:
        raise RuleUndefinedError(f"unknown rule {rule!r}; known: {RULES}")
    if rule == "tridiag" and not {"a", "b"} <= params.keys():
        raise RuleUndefinedError("tridiag rule needs params 'a' and 'b'")
    if rule == "matrix-literal":
        rows = params.get("matrix")
        if rows is None or any(len(r) != len(rows) for r in rows):
            raise RuleUndefinedError("matrix-literal rule needs a square 'matrix' param")
    spec = OperatorSpec(kind, rule, params, decay)
    if kind == "diagonal":
        for i, j in ((1, 2), (2, 1), (3, 5), (7, 2)):
            if spec.entry(i, j) != 0.0:
                raise NonDiagonalSpecError("kind 'diagonal' but the rule has off-diagonal mass")
    if decay:
        diag = [abs(spec.entry(i, i)) for i in DECAY_SAMPLE_INDICES]
        slack = 1e-12 * (1.0 + diag[0])
        if any(b > a + slack for a, b in zip(diag, diag[1:])):
            raise ValueError("declared decay, but |entries| increase on sampled indices")
    return spec


def spec_to_obj(spec: OperatorSpec) -> dict:
    return {
        "kind": spec.kind,
        "rule": {"name": spec.rule, "params": dict(spec.params)},
        "decay": bool(spec.decay),
    }


def spec_from_obj(obj: dict) -> OperatorSpec:
    if not isinstance(obj, dict) or "kind" not in obj or "rule" not in obj:
        raise ValueError("operator spec object needs keys 'kind' and 'rule'")
    rule = obj["rule"]
    return make_spec(obj["kind"], rule["name"], rule.get("params", {}), bool(obj.get("decay", False)))


@dataclass(frozen=True)
class FiniteSection:
    order: int
    matrix: np.ndarray


def section(spec: OperatorSpec, n: int) -> FiniteSection:
    """The leading n x n block <T e_j, e_i> (1 <= n <= 64)."""
    if not 1 <= n <= SECTION_MAX_ORDER:
        raise DimensionTooLargeError(f"section order must be in 1..{SECTION_MAX_ORDER}")
    mat = np.array([[spec.entry(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)])
    if spec.kind == "diagonal" and np.any(mat - np.diag(np.diag(mat))):
        raise NonDiagonalSpecError("diagonal spec produced an off-diagonal entry")
    return FiniteSection(n, mat)


def _equilibrated(mat: np.ndarray) -> np.ndarray:
    """Scale rows by positive factors to unit max-entry.

    Positive diagonal row scaling multiplies every principal minor by a
    positive factor and each sign-reversal product by a positive factor,
    so the P predicate is exactly preserved while the minors of compact
    sections (which decay like products of the eigenvalue tail) come back
    into threshold range.
    """
    scale = np.abs(mat).max(axis=1)
    scale = np.where(scale > 0.0, scale, 1.0)
    return mat / scale[:, None]


def is_P_operator_section(spec: OperatorSpec, n: int, tol: Tolerances = DEFAULT_TOL) -> str:
    """Sign non-reversal P-test on the section (minor enumeration, n <= 12).

    The section is row-equilibrated first; see _equilibrated.
    """
    return is_P_minors(_equilibrated(section(spec, n).matrix), tol)[0]


# ---------------------------------------------------------------------------
# eigenvalue positivity ladder


@dataclass(frozen=True)
class EigenPositivityEntry:
    order: int
    real_eigenvalues: tuple[float, ...]
    all_real_positive: bool
    section_is_P: Optional[str]
    contradiction: bool


@dataclass(frozen=True)
class EigenPositivityReport:
    entries: tuple[EigenPositivityEntry, ...]
    violations: int


def eigen_positivity_check(
    spec: OperatorSpec, orders: Sequence[int], tol: Tolerances = DEFAULT_TOL
) -> EigenPositivityReport:
    """Real eigenvalues of each section with a positivity verdict; a
    non-positive real eigenvalue on a P section is a contradiction."""
    entries = []
    violations = 0
    for n in orders:
        sec = section(spec, int(n))
        spect = eigenvalues(sec.matrix, tol, check_residual=False)
        reals = spect.real_values(tol)
        thr = tol.minor_for(inf_norm(sec.matrix), 1)
        ok = all(v > thr for v in reals)
        p_verdict = (
            is_P_minors(_equilibrated(sec.matrix), tol)[0] if sec.order <= 12 else None
        )
        contradiction = (not ok) and p_verdict == YES
        if contradiction:
            violations += 1
        entries.append(EigenPositivityEntry(sec.order, reals, ok, p_verdict, contradiction))
    return EigenPositivityReport(tuple(entries), violations)


# ---------------------------------------------------------------------------
# diagonal square root


def operator_sqrt(spec: OperatorSpec, n: int, tol: Tolerances = DEFAULT_TOL) -> FiniteSection:
    """Section of R = diag(sqrt(lambda_i)) for a positive diagonal compact
    spec; ||R_N^2 - T_N||_inf stays below 1e-12 by construction."""
    if spec.kind != "diagonal":
        raise NonDiagonalSpecError("square root requires a diagonal spec")
    if not spec.decay:
        raise PreconditionViolatedError("square root requires the decay tag (compactness surrogate)")
    sec = section(spec, n)
    lam = np.diag(sec.matrix)
    if not (lam > 0).all():
        raise NonPositiveEigenvalueError("diagonal coefficients must be positive")
    root = FiniteSection(n, np.diag(np.sqrt(lam)))
    resid = inf_norm(root.matrix @ root.matrix - sec.matrix)
    if resid > 1e-12 * (1.0 + inf_norm(sec.matrix)):
        raise NoConvergenceError(f"square-root residual {resid:.3e} unexpectedly large")
    return root


def sqrt_candidate_deviation(spec: OperatorSpec, n: int, candidate) -> tuple[float, float]:
    """(square residual, entrywise deviation from the canonical root) for a
    diagonal positive candidate; the square root is injective on positives,
    so a small first component forces a small second."""
    cand = as_matrix(candidate)
    if np.any(cand - np.diag(np.diag(cand))) or not (np.diag(cand) > 0).all():
        raise NonDiagonalSpecError("candidate must be positive diagonal")
    sec = section(spec, n)
    root = operator_sqrt(spec, n)
    sq_resid = inf_norm(cand @ cand - sec.matrix)
    dev = float(np.abs(np.diag(cand) - np.diag(root.matrix)).max())
    return sq_resid, dev


# ---------------------------------------------------------------------------
# Collatz-Wielandt min-max identity


@dataclass(frozen=True)
class MinMaxResult:
    inf_sup: float
    sup_inf: float
    rho: float
    iterations: int
    perron: tuple[float, ...]


def minmax_rho(
    spec: OperatorSpec,
    n: int,
    samples: int = 64,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
) -> MinMaxResult:
    """Perron root of an entrywise positive section via power iteration,
    bracketed by Collatz-Wielandt ratios over sampled positive vectors.

    Every positive x gives min_i (Tx)_i/x_i <= rho <= max_i (Tx)_i/x_i;
    with the Perron vector in the sample set both estimates collapse onto
    rho.
    """
    sec = section(spec, n)
    mat = sec.matrix
    if not (mat > 0).all():
        raise NonPositiveSectionError("min-max identity requires an entrywise positive section")

    v = np.ones(n) / n
    rho = None
    iterations = 0
    for iterations in range(1, 200_000 + 1):
        w = mat @ v
        ratios = w / v
        lo, hi = float(ratios.min()), float(ratios.max())
        if hi - lo <= 1e-10 * max(1.0, hi):
            rho = 0.5 * (lo + hi)
            v = w / w.sum()
            break
        v = w / w.sum()
    if rho is None:
        raise NoConvergenceError("power iteration did not reach the 1e-10 bracket")

    rng = np.random.default_rng(seed)
    pool = [v]
    for _ in range(max(samples - 1, 0)):
        pool.append(np.exp(rng.uniform(np.log(0.1), np.log(10.0), n)))
    sup_ratios = []
    inf_ratios = []
    for x in pool:
        r = (mat @ x) / x
        sup_ratios.append(float(r.max()))
        inf_ratios.append(float(r.min()))
    return MinMaxResult(
        inf_sup=min(sup_ratios),
        sup_inf=max(inf_ratios),
        rho=float(rho),
        iterations=iterations,
        perron=tuple(float(x) for x in v),
    )


# ---------------------------------------------------------------------------
# diagonal interpolation nonsingularity


@dataclass(frozen=True)
class InterpReport:
    case1_established: bool
    case2_established: bool
    trials_case1: int
    trials_case2: int
    violations: tuple[tuple[str, tuple[float, ...], float], ...]
    min_abs_det: float


def _d_samples(rng: np.random.Generator, n: int, trials: int, d_rule: str):
    yield np.zeros(n)
    yield np.ones(n)
    produced = 2
    while produced < trials:
        mode = produced % 3 if d_rule == "mixed" else {"uniform": 0, "corners": 1}.get(d_rule, 0)
        if mode == 0:
            yield rng.uniform(0.0, 1.0, n)
        elif mode == 1:
            yield rng.integers(0, 2, n).astype(float)
        else:
            yield rng.uniform(0.0, 1.0, n) ** 2
        produced += 1


def diag_interp_check(
    spec_s: OperatorSpec,
    spec_t: OperatorSpec,
    n: int,
    trials: int = 100,
    seed: int = 0,
    d_rule: str = "mixed",
    tol: Tolerances = DEFAULT_TOL,
) -> InterpReport:
    """Nonsingularity of D T_N + (I-D) S_N (case 1, precondition: S T^{-1}
    is P) and T_N D + S_N (I-D) (case 2, precondition: S^{-1} T is P) for
    diagonal D with entries in [0, 1], corners included."""
    s_mat = section(spec_s, n).matrix
    t_mat = section(spec_t, n).matrix

    def _inv_or_none(mat):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            try:
                lu, piv = scipy.linalg.lu_factor(mat, check_finite=False)
            except (scipy.linalg.LinAlgError, ValueError):
                return None
        if np.abs(np.diag(lu)).min() <= tol.sing_for(inf_norm(mat)):
            return None
        return scipy.linalg.lu_solve((lu, piv), np.eye(mat.shape[0]), check_finite=False)

    t_inv = _inv_or_none(t_mat)
    s_inv = _inv_or_none(s_mat)
    case1 = t_inv is not None and n <= 12 and is_P_minors(s_mat @ t_inv, tol)[0] == YES
    case2 = s_inv is not None and n <= 12 and is_P_minors(s_inv @ t_mat, tol)[0] == YES
    if not case1 and not case2:
        raise PreconditionNotEstablishedError(
            "neither S T^{-1} nor S^{-1} T certified as a P-matrix"
        )

    rng = np.random.default_rng(seed)
    eye = np.eye(n)
    violations = []
    t1 = t2 = 0
    min_det = math.inf
    for dvals in _d_samples(rng, n, trials, d_rule):
        d = np.diag(dvals)
        if case1:
            t1 += 1
            combo = d @ t_mat + (eye - d) @ s_mat
            val = abs(float(np.linalg.det(combo)))
            min_det = min(min_det, val)
            if val <= tol.sing_for(inf_norm(combo)):
                violations.append(("case1", tuple(float(x) for x in dvals), val))
        if case2:
            t2 += 1
            combo = t_mat @ d + s_mat @ (eye - d)
            val = abs(float(np.linalg.det(combo)))
            min_det = min(min_det, val)
            if val <= tol.sing_for(inf_norm(combo)):
                violations.append(("case2", tuple(float(x) for x in dvals), val))
    return InterpReport(case1, case2, t1, t2, tuple(violations), min_det)


# ---------------------------------------------------------------------------
# column sufficiency via singular perturbed sections


def kernel_basis(mat, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Null-space basis via column-pivoted QR with the tau_zero rank
    threshold; returns an (n, k) array (k = 0 for nonsingular input)."""
    m = as_matrix(mat)
    n = m.shape[0]
    q, r, perm = scipy.linalg.qr(m, pivoting=True)
    diag = np.abs(np.diag(r))
    thr = tol.zero * (1.0 + (diag[0] if diag.size else 0.0))
    rank = int((diag > thr).sum())
    if rank == n:
        return np.zeros((n, 0))
    r11 = r[:rank, :rank]
    r12 = r[:rank, rank:]
    free = n - rank
    top = -scipy.linalg.solve_triangular(r11, r12, check_finite=False) if rank else np.zeros((0, free))
    y = np.vstack([top, np.eye(free)])
    out = np.zeros((n, free))
    out[perm] = y
    norms = np.linalg.norm(out, axis=0)
    return out / np.where(norms > 0, norms, 1.0)


def _strictly_nonzero_kernel_vector(
    basis: np.ndarray, tol: Tolerances
) -> Optional[np.ndarray]:
    """A kernel vector with no zero coordinate, when one exists.

    A coordinate vanishes on the whole kernel iff its basis row is zero;
    otherwise a generic combination avoids all n hyperplanes.
    """
    n, k = basis.shape
    if k == 0:
        return None
    row_scale = np.abs(basis).max()
    if row_scale == 0.0:
        return None
    zero_rows = np.abs(basis).max(axis=1) <= tol.zero * row_scale
    if zero_rows.any():
        return None
    rng = np.random.default_rng(12345)
    for _ in range(64):
        v = basis @ rng.standard_normal(k)
        vmax = np.abs(v).max()
        if vmax > 0 and np.abs(v).min() > tol.zero_for(vmax):
            return v / vmax
    return None


GRID_D_VALUES = (0.0, 1e-3, 0.1, 0.5, 1.0, 10.0)


@dataclass(frozen=True)
class KernelRefutation:
    alpha: tuple[int, ...]
    d_values: tuple[float, ...]
    kernel_vector: tuple[float, ...]
    full_witness: tuple[float, ...]


@dataclass(frozen=True)
class KernelSearchReport:
    refuted: bool
    refutations: tuple[KernelRefutation, ...]
    combinations_tested: int
    classifier_verdict: str
    consistent: bool


def _d_grid_for_alpha(sub_diag: np.ndarray, k: int, d_grid, rng: np.random.Generator):
    values = tuple(d_grid) if d_grid is not None else GRID_D_VALUES
    targeted = tuple(sorted({float(-x) for x in sub_diag if x < 0}))
    pool = tuple(sorted(set(values) | set(targeted)))
    if k <= 4:
        for combo in product(pool, repeat=k):
            if any(combo):
                yield np.array(combo)
        return
    for v in pool:
        if v:
            yield np.full(k, v)
    for i in range(k):
        for v in pool:
            if v:
                d = np.zeros(k)
                d[i] = v
                yield d
    if targeted:
        d = np.zeros(k)
        for i, x in enumerate(sub_diag):
            if x < 0:
                d[i] = -x
        if d.any():
            yield d
    for _ in range(256):
        d = rng.choice(pool, size=k)
        if d.any():
            yield d


def csufficient_kernel_search(
    spec: OperatorSpec,
    n: int,
    d_grid: Optional[Sequence[float]] = None,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
) -> KernelSearchReport:
    """Search for an index set alpha and nonnegative diagonal D != 0 making
    T_alpha + D singular with a strictly nonzero kernel vector: such a
    vector refutes column sufficiency of the section (its zero-padding is
    a sign-reversal witness with a strict product).  Cross-checked against
    the direct classifier.
    """
    if n > 8:
        raise DimensionTooLargeError("kernel search capped at n=8")
    sec = section(spec, n)
    mat = sec.matrix
    rng = np.random.default_rng(seed)
    refutations = []
    tested = 0
    for k in range(1, n + 1):
        for alpha in combinations(range(n), k):
            sel = list(alpha)
            sub = mat[np.ix_(sel, sel)]
            sub_diag = np.diag(sub)
            for dvals in _d_grid_for_alpha(sub_diag, k, d_grid, rng):
                tested += 1
                msum = sub + np.diag(dvals)
                basis = kernel_basis(msum, tol)
                if basis.shape[1] == 0:
                    continue
                v = _strictly_nonzero_kernel_vector(basis, tol)
                if v is None:
                    continue
                resid = inf_norm(msum @ v)
                if resid > 1e-7 * (1.0 + inf_norm(msum)):
                    continue
                full = np.zeros(n)
                full[sel] = v
                refutations.append(
                    KernelRefutation(
                        alpha=tuple(i + 1 for i in sel),
                        d_values=tuple(float(x) for x in dvals),
                        kernel_vector=tuple(float(x) for x in v),
                        full_witness=tuple(float(x) for x in full),
                    )
                )
                break  # one refutation per alpha is enough
    refuted = bool(refutations)
    verdict, _ = is_column_sufficient(mat, budget=2000, seed=seed, tol=tol)
    consistent = not (refuted and verdict == YES) and not ((not refuted) and verdict == NO)
    return KernelSearchReport(refuted, tuple(refutations), tested, verdict, consistent)


# ---------------------------------------------------------------------------
# sign-reversal set membership


@dataclass(frozen=True)
class RevQuery:
    products: tuple[float, ...]
    in_rev: bool


def rev_membership(spec: OperatorSpec, n: int, x, tol: Tolerances = DEFAULT_TOL) -> RevQuery:
    """Membership of x in the sign-reversal set of the section: all
    products <x, e_i><T_N x, e_i> below the scaled minor threshold.
    x = 0 is the degenerate member (all products exactly zero)."""
    sec = section(spec, n)
    v = as_vector(x, n)
    prods = v * (sec.matrix @ v)
    thr = tol.minor_for(inf_norm(sec.matrix), 1) * max(1.0, float(np.abs(v).max()) ** 2)
    return RevQuery(tuple(float(p) for p in prods), bool((prods <= thr).all()))


@dataclass(frozen=True)
class EigvecRevEntry:
    eigenvalue: float
    in_rev: bool


@dataclass(frozen=True)
class EigvecRevReport:
    precondition: str
    skipped: bool
    entries: tuple[EigvecRevEntry, ...]
    violations: int


def eigvec_rev_check(
    spec: OperatorSpec, n: int, seed: int = 0, tol: Tolerances = DEFAULT_TOL
) -> EigvecRevReport:
    """For a column-sufficient section, no eigenvector of a nonzero real
    eigenvalue may reverse signs; any that does is a contradiction.

    Skipped when the classifier refutes column sufficiency; an "unknown"
    classifier verdict (n > 3) is logged and the check still runs.
    """
    sec = section(spec, n)
    verdict, _ = is_column_sufficient(sec.matrix, budget=2000, seed=seed, tol=tol)
    if verdict == NO:
        return EigvecRevReport(verdict, True, (), 0)
    vals, vecs = np.linalg.eig(sec.matrix)
    thr_lam = tol.minor_for(inf_norm(sec.matrix), 1)
    entries = []
    violations = 0
    for idx in range(len(vals)):
        lam = vals[idx]
        if abs(lam.imag) > tol.conj_for(abs(lam)) or abs(lam.real) <= thr_lam:
            continue
        v = np.real(vecs[:, idx])
        norm = np.abs(v).max()
        if norm == 0.0:
            continue
        v = v / norm
        resid = inf_norm(sec.matrix @ v - lam.real * v)
        if resid > 1e-6 * (1.0 + abs(lam.real)):
            continue  # realified vector is not actually an eigenvector
        q = rev_membership(spec, n, v, tol)
        entries.append(EigvecRevEntry(float(lam.real), q.in_rev))
        if q.in_rev:
            violations += 1
    return EigvecRevReport(verdict, False, tuple(entries), violations)
