"""Scalar policies, small dense linear algebra and a tableau simplex.

Two numeric policies are supported:

* ``"exact"`` -- :class:`fractions.Fraction` (Python ints are accepted and
  promoted).  Comparisons are exact.
* ``"float"`` -- double precision with absolute tolerance :data:`FLOAT_TOL`.

Mixing a Fraction with a float inside one computation raises
:class:`MixedPolicyError`; conversion between policies is always explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

FLOAT_TOL = 1e-9
EXACT = "exact"
FLOAT = "float"


class MixedPolicyError(TypeError):
    """Raised when exact and floating point scalars meet in one computation."""


class NumericBreakdown(ArithmeticError):
    """The float path lost too much precision to give a trustworthy answer."""


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------


def parse_scalar(text):
    """Parse ``"p/q"``, integers, or decimals.

    Rational strings and ints give a :class:`Fraction`; anything with a
    decimal point or exponent gives a float.

    >>> parse_scalar("1/4")
    Fraction(1, 4)
    >>> parse_scalar("0.25")
    0.25
    """
    if isinstance(text, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(text, (Fraction, float)):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, dict):
        return Fraction(int(text["num"]), int(text["den"]))
    s = str(text).strip()
    if not s:
        raise ValueError("empty scalar")
    if any(ch in s for ch in ".eE") and "/" not in s:
        return float(s)
    return Fraction(s)


def policy_of(values: Iterable) -> str:
    """Return the common policy of ``values``.

    Ints are neutral.  An iterable holding only ints counts as exact.
    """
    seen_float = seen_exact = False
    for v in values:
        if isinstance(v, (float, np.floating)):
            seen_float = True
        elif isinstance(v, (Fraction, int, np.integer)) and not isinstance(v, bool):
            seen_exact = seen_exact or isinstance(v, Fraction)
        else:
            raise TypeError(f"unsupported scalar {v!r} of type {type(v).__name__}")
        if seen_float and seen_exact:
            raise MixedPolicyError("exact and float scalars mixed in one table")
    return FLOAT if seen_float else EXACT


def normalize_scalars(values: Iterable) -> tuple[tuple, str]:
    """Coerce ints to the policy of their companions and return ``(values, policy)``."""
    vals = list(values)
    pol = policy_of(vals)
    if pol == EXACT:
        return tuple(Fraction(v) for v in vals), pol
    return tuple(float(v) for v in vals), pol


def to_float(values: Iterable) -> tuple:
    return tuple(float(v) for v in values)


def is_zero(x, policy: str, tol: float = FLOAT_TOL) -> bool:
    return x == 0 if policy == EXACT else abs(x) <= tol


def as_array(rows, policy: str | None = None) -> tuple[np.ndarray, str]:
    """Build a 2-D array with dtype ``object`` (exact) or ``float64``."""
    rows = [list(r) for r in rows]
    flat = [v for r in rows for v in r]
    if policy is None:
        policy = policy_of(flat)
    elif flat and policy_of(flat) != policy and any(not isinstance(v, int) for v in flat):
        raise MixedPolicyError(f"entries do not match requested policy {policy!r}")
    if policy == EXACT:
        arr = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                arr[i, j] = Fraction(v)
        return arr, policy
    return np.array(rows, dtype=float).reshape(len(rows), -1), policy


# ---------------------------------------------------------------------------
# dense linear algebra
# ---------------------------------------------------------------------------


def det_exact(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Rows are first scaled to integers; the integer determinant is computed
    with Bareiss' one-step division-free scheme and the scaling is undone at
    the end.
    """
    rows = [list(r) for r in matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("det_exact needs a square matrix")
    if n == 0:
        return Fraction(1)
    if policy_of(v for r in rows for v in r) != EXACT:
        raise MixedPolicyError("det_exact is defined for exact (rational) entries only")

    scale = Fraction(1)
    ints = []
    for r in rows:
        fr = [Fraction(v) for v in r]
        lcm = math.lcm(*(v.denominator for v in fr))
        ints.append([int(v * lcm) for v in fr])
        scale *= lcm

    m = ints
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return Fraction(sign * m[n - 1][n - 1]) / scale


def matrix_rank(rows: Sequence[Sequence], tol: float = FLOAT_TOL) -> int:
    """Row rank, exact for rational entries and pivot-thresholded for floats.

    Exact elimination takes the first nonzero pivot in each column; the float
    path uses partial pivoting and treats ``|pivot| <= tol`` as zero.
    """
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    arr, pol = as_array(rows)
    m, n = arr.shape
    rank = 0
    for col in range(n):
        if rank == m:
            break
        if pol == EXACT:
            piv = next((i for i in range(rank, m) if arr[i, col] != 0), None)
        else:
            i = rank + int(np.argmax(np.abs(arr[rank:, col])))
            piv = i if abs(arr[i, col]) > tol else None
        if piv is None:
            continue
        if piv != rank:
            arr[[rank, piv]] = arr[[piv, rank]]
        pivot_row = arr[rank] / arr[rank, col]
        for i in range(rank + 1, m):
            f = arr[i, col]
            if f != 0:
                arr[i] = arr[i] - f * pivot_row
        rank += 1
    return rank


def affine_rank(points: Sequence[Sequence], tol: float = FLOAT_TOL) -> int:
    """Dimension of the affine hull of ``points`` (rank of ``p_i - p_0``)."""
    pts = [list(p) for p in points]
    if not pts:
        raise ValueError("affine_rank of an empty point list")
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise ValueError("points have unequal dimensions")
    policy_of(v for p in pts for v in p)
    base = pts[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    if not diffs:
        return 0
    return matrix_rank(diffs, tol=tol)


def affinely_independent_subset(points: Sequence[Sequence], tol: float = FLOAT_TOL) -> list[int]:
    """Greedy indices of a maximal affinely independent subset, in input order."""
    pts = [list(p) for p in points]
    if not pts:
        return []
    chosen = [0]
    rank = 0
    for i in range(1, len(pts)):
        trial = [pts[j] for j in chosen] + [pts[i]]
        r = affine_rank(trial, tol=tol)
        if r > rank:
            chosen.append(i)
            rank = r
    return chosen


# ---------------------------------------------------------------------------
# linear programming
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LPProblem:
    """``A x = b``, ``x >= 0``; optionally maximise ``c . x``.

    ``sense`` is ``"feasibility"`` or ``"maximize"``.
    """

    A: tuple
    b: tuple
    c: tuple | None = None
    sense: str = "feasibility"

    def __post_init__(self):
        if self.sense not in ("feasibility", "maximize"):
            raise ValueError(f"unknown sense {self.sense!r}")
        m = len(self.A)
        if len(self.b) != m:
            raise ValueError("A and b have different row counts")
        n = len(self.A[0]) if m else 0
        if any(len(r) != n for r in self.A):
            raise ValueError("ragged constraint matrix")
        if self.sense == "maximize":
            if self.c is None or len(self.c) != n:
                raise ValueError("objective length does not match A")


@dataclass(frozen=True)
class LPResult:
    status: str  # feasible | infeasible | optimal | unbounded
    x: tuple | None
    dual: tuple | None
    objective: object = None
    policy: str = EXACT


def _pivot(T: np.ndarray, r: int, c: int) -> None:
    T[r] = T[r] / T[r, c]
    col = T[:, c].copy()
    col[r] = 0
    nz = np.nonzero(col != 0)[0]
    if len(nz):
        T[nz] -= np.outer(col[nz], T[r])


def _run_simplex(T, basis, allowed, policy, tol, max_iter):
    """Minimise with Bland's rule; the objective row is the last row of ``T``."""
    m = T.shape[0] - 1
    for _ in range(max_iter):
        obj = T[-1, :-1]
        entering = None
        for j in allowed:
            if (obj[j] < 0) if policy == EXACT else (obj[j] < -tol):
                entering = j
                break
        if entering is None:
            return "optimal"
        best = None
        for i in range(m):
            a = T[i, entering]
            if (a > 0) if policy == EXACT else (a > tol):
                ratio = T[i, -1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        leave = best[1]
        _pivot(T, leave, entering)
        basis[leave] = entering
    raise NumericBreakdown(f"simplex did not terminate within {max_iter} pivots")


def lp_solve(problem: LPProblem, max_iter: int = 50_000, tol: float = FLOAT_TOL) -> LPResult:
    """Two-phase tableau simplex with Bland's anti-cycling rule.

    Returns
    -------
    LPResult
        ``feasible`` (sense ``feasibility``) or ``optimal`` with a primal
        point; for ``optimal`` also the dual vector ``y`` with
        ``A^T y >= c``.  ``infeasible`` carries a Farkas vector ``y`` with
        ``y^T A <= 0`` and ``y^T b > 0``.  ``unbounded`` carries neither.

    Every primal answer is re-substituted before it is returned.
    """
    vals_b = list(problem.b)
    vals_c = list(problem.c) if problem.c is not None else []
    policy = policy_of([*(v for r in problem.A for v in r), *vals_b, *vals_c])
    A_arr, _ = as_array(problem.A, policy)
    m, n = A_arr.shape
    conv = Fraction if policy == EXACT else float
    b = np.array([conv(v) for v in vals_b], dtype=object if policy == EXACT else float)
    c = np.array([conv(v) for v in vals_c], dtype=object if policy == EXACT else float) if vals_c else None
    zero, one = conv(0), conv(1)

    signs = np.array([-1 if v < 0 else 1 for v in b], dtype=int)
    dtype = object if policy == EXACT else float
    T = np.empty((m + 1, n + m + 1), dtype=dtype)
    T[:, :] = zero
    for i in range(m):
        T[i, :n] = A_arr[i] * signs[i]
        T[i, n + i] = one
        T[i, -1] = b[i] * signs[i]
    T[-1, :] = zero
    T[-1, n:n + m] = one
    for i in range(m):
        T[-1] -= T[i]
    basis = list(range(n, n + m))

    status = _run_simplex(T, basis, list(range(n + m)), policy, tol, max_iter)
    if status != "optimal":
        raise NumericBreakdown("phase one reported an unbounded objective")
    infeas = -T[-1, -1]
    if not is_zero(infeas, policy, tol) and infeas > 0:
        y = _plain((one - T[-1, n + k]) * int(signs[k]) for k in range(m))
        _check_farkas(A_arr, b, y, policy, tol)
        return LPResult("infeasible", None, tuple(y), None, policy)

    # drive zero-level artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if not is_zero(T[i, j], policy, tol)), None)
            if col is None:
                continue
            _pivot(T, i, col)
            basis[i] = col
        keep.append(i)
    if len(keep) < m:
        T = T[keep + [m]]
        basis = [basis[i] for i in keep]

    if problem.sense == "feasibility":
        x = _extract_x(T, basis, n, zero)
        _check_primal(A_arr, b, x, policy, tol)
        return LPResult("feasible", tuple(x), None, None, policy)

    # phase two: minimise -c
    T[-1, :] = zero
    T[-1, :n] = -c
    for i, j in enumerate(basis):
        if T[-1, j] != 0:
            T[-1] -= T[-1, j] * T[i]
    status = _run_simplex(T, basis, list(range(n)), policy, tol, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", None, None, None, policy)
    x = _extract_x(T, basis, n, zero)
    _check_primal(A_arr, b, x, policy, tol)
    y = tuple(_plain(T[-1, n + k] * int(signs[k]) for k in range(m)))
    objective = _plain([sum((ci * xi for ci, xi in zip(c, x)), zero)])[0]
    return LPResult("optimal", tuple(x), y, objective, policy)


def _extract_x(T, basis, n, zero):
    x = [zero] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i, -1]
    return _plain(x)


def _plain(values):
    return [v if isinstance(v, Fraction) else float(v) for v in values]


def _check_primal(A, b, x, policy, tol):
    xv = np.array(x, dtype=object if policy == EXACT else float)
    resid = A.dot(xv) - b if len(b) else np.zeros(0)
    if policy == EXACT:
        if any(r != 0 for r in resid) or any(v < 0 for v in x):
            raise NumericBreakdown("exact simplex produced an invalid point")
        return
    scale = max(1.0, float(np.max(np.abs(b))) if len(b) else 1.0)
    if len(resid) and np.max(np.abs(resid)) > 1e3 * tol * scale or min(x, default=0.0) < -1e3 * tol:
        raise NumericBreakdown(
            f"primal re-substitution failed (residual {np.max(np.abs(resid)):.3e})"
        )


def _check_farkas(A, b, y, policy, tol):
    yv = np.array(y, dtype=object if policy == EXACT else float)
    lhs = yv.dot(A)
    gap = yv.dot(b)
    if policy == EXACT:
        ok = all(v <= 0 for v in lhs) and gap > 0
    else:
        ok = float(np.max(lhs, initial=-np.inf)) <= 1e3 * tol and gap > tol
    if not ok:
        raise NumericBreakdown("Farkas certificate failed verification")
