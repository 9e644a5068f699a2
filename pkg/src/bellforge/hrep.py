"""Facet description of the (2,2;2,2) conditional PD polytope at eps = 1/4.

The inequality list is produced once by ``tools/build_hrep.py`` (exact
adjacency decomposition under the polytope's 128-element symmetry group) and
stored as integers in ``data/pd_hrep_eps_1_4.json.gz``.
Coordinates are ``p(01|xy), p(10|xy), p(11|xy)`` for ``xy = 00, 01, 10, 11``;
``p(00|xy)`` is fixed by normalization.  Each row ``[b, a_1, ..., a_12]``
means ``a . x <= b``.
"""

from __future__ import annotations

import gzip
import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import gcd, lcm

import numpy as np

from .behaviors import CHSH
from .numerics import affine_rank

DATA_FILE = "pd_hrep_eps_1_4.json.gz"
MODULUS = 2147483647  # prime below 2**31, so products fit in int64
CONTAINS_TOL = 1e-9


def project(values) -> list:
    """Drop the ``p(00|xy)`` entries of a flat ``(2,2;2,2)`` table."""
    if len(values) != CHSH.size:
        raise ValueError(f"expected {CHSH.size} entries, got {len(values)}")
    return [values[4 * k + j] for k in range(4) for j in (1, 2, 3)]


@lru_cache(maxsize=1)
def load_pd_hrep() -> np.ndarray:
    """Integer rows ``[b, a...]`` from the packaged data file."""
    raw = resources.files("bellforge.data").joinpath(DATA_FILE).read_bytes()
    rows = json.loads(gzip.decompress(raw).decode("utf-8"))["inequalities"]
    arr = np.array([[int(v) for v in r] for r in rows], dtype=object)
    return arr


def hrep_contains(hrep, values, tol: float = CONTAINS_TOL) -> bool:
    """Whether a flat 16-entry table satisfies normalization and every inequality."""
    vals = [float(v) for v in values]
    if any(abs(sum(vals[4 * k:4 * k + 4]) - 1) > tol for k in range(4)):
        return False
    x = np.array(project(vals), dtype=float)
    A = np.array(hrep[:, 1:], dtype=float)
    b = np.array(hrep[:, 0], dtype=float)
    scale = np.abs(A).max(axis=1)
    return bool(np.all(A @ x - b <= tol * scale))


def exact_facet(points, approx_row, tol: float = 1e-7):
    """Recompute an approximate facet ``b - a.x >= 0`` exactly.

    ``points`` are exact 12-vectors.  The saturating set is read off the
    float row, the normal is the one-dimensional null space of
    ``[x, -1]`` over that set (exact Gaussian elimination), and the result is
    scaled to coprime integers with the polytope on the ``<=`` side.
    Returns ``None`` if the saturating set does not span a hyperplane.
    """
    b0, a0 = float(approx_row[0]), [float(v) for v in approx_row[1:]]
    norm = max(abs(v) for v in a0) or 1.0
    sat = [p for p in points if abs(b0 - sum(c * float(v) for c, v in zip(a0, p))) <= tol * norm]
    if len(sat) < 12 or affine_rank(sat) != 11:
        return None
    M = [[Fraction(v) for v in p] + [Fraction(-1)] for p in sat]
    vec = _null_vector(M)
    if vec is None:
        return None
    den = lcm(*(v.denominator for v in vec))
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints]
    a, b = ints[:-1], ints[-1]
    # a.x = b on the face; orient so the remaining points satisfy a.x <= b
    vals = [sum(c * v for c, v in zip(a, p)) for p in points]
    if max(vals) > b:
        a, b = [-c for c in a], -b
        vals = [-v for v in vals]
    if max(vals) != b:
        return None
    return [b, *a]


def _null_vector(M):
    rows = [r[:] for r in M]
    ncol = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [u - f * w for u, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncol) if c not in pivots]
    if len(free) != 1:
        return None
    fc = free[0]
    vec = [Fraction(0)] * ncol
    vec[fc] = Fraction(1)
    for i, c in enumerate(pivots):
        vec[c] = -rows[i][fc]
    return vec


def rank_mod_p(M, p: int = MODULUS) -> int:
    """Rank of an integer matrix over GF(p), a lower bound on its rank over Q."""
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        col = A[:, c].copy()
        col[r] = 0
        A = (A - (col[:, None] * A[r][None, :]) % p) % p
        r += 1
    return r


def validate_hrep(hrep, points) -> dict:
    """Exact checks: every point satisfies every row and every row is a facet.

    ``points`` are exact 12-vectors (projected vertices).  Each row's
    saturating set lies on its hyperplane, so its affine rank is at most 11;
    a rank of 11 over GF(p) proves equality.  Raises ``ValueError`` on the
    first violation.
    """
    P = [[Fraction(v) for v in p] for p in points]
    den = lcm(*(v.denominator for p in P for v in p))
    Pi = np.array([[int(v * den) for v in p] for p in P], dtype=object)
    H = np.array(hrep, dtype=object)
    big = max(abs(int(v)) for v in H.ravel()) * max(abs(int(v)) for v in Pi.ravel()) * 13 >= 2**62
    dtype = object if big else np.int64
    A = H[:, 1:].astype(dtype)
    b = (H[:, 0] * den).astype(dtype)
    slack = b[None, :] - Pi.astype(dtype).dot(A.T)  # points x rows
    if (slack < 0).any():
        raise ValueError("a vertex violates an inequality")
    Pint = Pi.astype(np.int64)
    for j in range(len(H)):
        sat = np.nonzero(slack[:, j] == 0)[0]
        if len(sat) < 12 or rank_mod_p(Pint[sat[1:]] - Pint[sat[0]]) != 11:
            raise ValueError(f"row {j} is not a facet")
    return {"inequalities": len(H), "points": len(points)}
