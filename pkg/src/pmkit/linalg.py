"""Dense real linear algebra kernel for small matrices (n <= 64).

Determinants, solves, and inverses go through LU with partial pivoting
(LAPACK); pivot magnitudes are checked against the scaled singularity
threshold so near-singular systems raise instead of returning garbage.
Eigenvalues use the standard Hessenberg + shifted-QR path (LAPACK dgeev),
except n <= 2 where the closed form is exact; the characteristic
polynomial is computed independently by the Faddeev-LeVerrier trace
recursion and serves as the cross-check route everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import (
    DimensionTooLargeError,
    InvalidIndexError,
    NoConvergenceError,
    SingularMatrixError,
)
from .tolerances import DEFAULT_TOL, Tolerances

MAX_DIM = 64


def as_matrix(m) -> np.ndarray:
    """Validate and return a dense square float64 matrix."""
    a = np.array(m, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError(f"expected a nonempty square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise DimensionTooLargeError(f"n={a.shape[0]} exceeds the cap {MAX_DIM}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must all be finite")
    return a


def as_vector(b, n: int) -> np.ndarray:
    a = np.array(b, dtype=float, copy=True).reshape(-1)
    if a.shape[0] != n:
        raise ValueError(f"expected a vector of length {n}, got {a.shape[0]}")
    if not np.isfinite(a).all():
        raise ValueError("vector entries must all be finite")
    return a


def inf_norm(m: np.ndarray) -> float:
    """Induced infinity norm (max absolute row sum); max-abs for vectors."""
    a = np.asarray(m, dtype=float)
    if a.ndim == 1:
        return float(np.abs(a).max()) if a.size else 0.0
    return float(np.abs(a).sum(axis=1).max())


def as_index_set(members: Iterable[int], n: int, allow_empty: bool = False) -> tuple[int, ...]:
    """Validate a 1-based index set: unique, within 1..n, returned sorted."""
    idx = tuple(sorted(int(i) for i in members))
    if not idx:
        if allow_empty:
            return idx
        raise InvalidIndexError("index set must be nonempty")
    if len(set(idx)) != len(idx):
        raise InvalidIndexError(f"duplicate members in index set {idx}")
    if idx[0] < 1 or idx[-1] > n:
        raise InvalidIndexError(f"index set {idx} out of range 1..{n}")
    return idx


def principal_submatrix(m, a: Iterable[int]) -> np.ndarray:
    """Rows and columns of `m` selected by the 1-based index set `a`."""
    mat = as_matrix(m)
    idx = as_index_set(a, mat.shape[0])
    sel = [i - 1 for i in idx]
    return mat[np.ix_(sel, sel)]


def _lu_with_pivot_check(mat: np.ndarray, tol: Tolerances):
    """LU factorization; raises SingularMatrixError on a tiny pivot."""
    import warnings

    thr = tol.sing_for(inf_norm(mat))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(mat, check_finite=False)
    if np.abs(np.diag(lu)).min() <= thr:
        raise SingularMatrixError(
            f"pivot magnitude {np.abs(np.diag(lu)).min():.3e} <= threshold {thr:.3e}"
        )
    return lu, piv


def det(m) -> float:
    """Determinant via LU with partial pivoting (singular -> ~0, no error)."""
    return float(np.linalg.det(as_matrix(m)))


def solve(m, b, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Solve m x = b; raises SingularMatrixError below the pivot threshold."""
    mat = as_matrix(m)
    rhs = as_vector(b, mat.shape[0])
    lu, piv = _lu_with_pivot_check(mat, tol)
    return scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)


def inverse(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    mat = as_matrix(m)
    lu, piv = _lu_with_pivot_check(mat, tol)
    return scipy.linalg.lu_solve((lu, piv), np.eye(mat.shape[0]), check_finite=False)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue multiset with conjugate-pair structure.

    `values` is canonically ordered (by real part, then |imag|); `pairing`
    groups indices into singletons for real values and index pairs for
    conjugate pairs (positive imaginary part first).
    """

    values: tuple[complex, ...]
    pairing: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.values)

    def real_values(self, tol: Tolerances = DEFAULT_TOL) -> tuple[float, ...]:
        return tuple(v.real for v in self.values if abs(v.imag) <= tol.conj_for(abs(v)))

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=complex)


def pair_conjugates(values: Sequence[complex], tol: Tolerances = DEFAULT_TOL):
    """Canonicalize a value multiset into (values, pairing, is_closed).

    Values with |Im| below the conjugation threshold are flattened to real.
    Remaining non-real values are matched into conjugate pairs and
    symmetrized exactly; `is_closed` is False when some value is left
    unmatched.
    """
    reals: list[float] = []
    plus: list[complex] = []
    minus: list[complex] = []
    for v in values:
        v = complex(v)
        if abs(v.imag) <= tol.conj_for(abs(v)):
            reals.append(v.real)
        elif v.imag > 0:
            plus.append(v)
        else:
            minus.append(v)

    pairs: list[tuple[float, float]] = []
    closed = True
    leftovers: list[complex] = []
    minus_pool = list(minus)
    for p in sorted(plus, key=lambda z: (z.real, z.imag)):
        best_j, best_d = -1, np.inf
        for j, q in enumerate(minus_pool):
            d = abs(p - q.conjugate())
            if d < best_d:
                best_j, best_d = j, d
        if best_j >= 0 and best_d <= 2.0 * tol.conj_for(abs(p)):
            q = minus_pool.pop(best_j)
            a = 0.5 * (p.real + q.real)
            b = 0.5 * (p.imag - q.imag)
            pairs.append((a, b))
        else:
            closed = False
            leftovers.append(p)
    if minus_pool:
        closed = False
        leftovers.extend(minus_pool)

    entries: list[tuple] = [((r, 0.0), (complex(r),)) for r in reals]
    entries += [((a, b), (complex(a, b), complex(a, -b))) for a, b in pairs]
    entries += [((z.real, abs(z.imag)), (z,)) for z in leftovers]
    entries.sort(key=lambda e: e[0])

    out_values: list[complex] = []
    pairing: list[tuple[int, ...]] = []
    for _, group in entries:
        start = len(out_values)
        out_values.extend(group)
        pairing.append(tuple(range(start, start + len(group))))
    return tuple(out_values), tuple(pairing), closed


def _eig_2x2(mat: np.ndarray) -> np.ndarray:
    t = mat[0, 0] + mat[1, 1]
    d = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
    disc = t * t - 4.0 * d
    if disc >= 0.0:
        s = np.sqrt(disc)
        return np.array([(t + s) / 2.0, (t - s) / 2.0], dtype=complex)
    s = np.sqrt(-disc) / 2.0
    return np.array([complex(t / 2.0, s), complex(t / 2.0, -s)])


def eigenvalues(m, tol: Tolerances = DEFAULT_TOL, check_residual: bool = True) -> Spectrum:
    """All n eigenvalues with conjugate pairing enforced post hoc.

    n <= 2 uses the exact closed form (this is also the terminal step of QR
    deflation), so e.g. a defective double eigenvalue of an integer 2x2
    matrix comes out exact rather than split by ~sqrt(eps).
    """
    mat = as_matrix(m)
    n = mat.shape[0]
    if n == 1:
        raw = np.array([complex(mat[0, 0])])
    elif n == 2:
        raw = _eig_2x2(mat)
    else:
        try:
            raw = np.linalg.eigvals(mat)
        except np.linalg.LinAlgError as exc:
            raise NoConvergenceError(str(exc)) from exc
    values, pairing, closed = pair_conjugates(raw, tol)
    if not closed:
        raise NoConvergenceError("eigenvalues of a real matrix failed conjugate pairing")
    if check_residual and n >= 3:
        scale = max(1.0, (2.0 * max(inf_norm(mat), max(abs(v) for v in values))) ** n)
        for v in values[:3]:
            resid = abs(np.linalg.det(mat - v * np.eye(n)))
            if resid > 1e-6 * scale:
                raise NoConvergenceError(
                    f"det(m - lambda I) residual {resid:.3e} too large for lambda={v}"
                )
    return Spectrum(values, pairing)


@dataclass(frozen=True)
class Polynomial:
    """Monic characteristic polynomial, stored through its symmetric functions.

    coeffs = (c_0, ..., c_n) with c_0 = 1 and
    charpoly(x) = x^n - c_1 x^(n-1) + c_2 x^(n-2) - ... + (-1)^n c_n,
    so c_k equals the k-th elementary symmetric function of the roots and
    also the sum of all k x k principal minors.
    """

    coeffs: tuple[float, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def elementary(self, k: int) -> float:
        return self.coeffs[k]

    def monic_coefficients(self) -> np.ndarray:
        """Coefficients of x^n - c_1 x^(n-1) + ... in descending powers."""
        signs = np.array([(-1.0) ** k for k in range(self.degree + 1)])
        return signs * np.array(self.coeffs)


def charpoly(m) -> Polynomial:
    """Faddeev-LeVerrier trace recursion for the characteristic polynomial."""
    mat = as_matrix(m)
    n = mat.shape[0]
    coeffs = [1.0]
    nk = np.eye(n)
    for k in range(1, n + 1):
        an = mat @ nk
        bk = -float(np.trace(an)) / k
        coeffs.append((-1.0) ** k * bk)  # c_k = (-1)^k b_k with b_k from det(xI - A)
        nk = an + bk * np.eye(n)
    return Polynomial(tuple(coeffs))
