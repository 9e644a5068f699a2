"""Polytope queries over vertex sets: membership, maxima, faces and facets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .behaviors import CHSH, BellScenario
from .numerics import (
    EXACT,
    FLOAT,
    FLOAT_TOL,
    LPProblem,
    NumericBreakdown,
    affine_rank,
    affinely_independent_subset,
    det_exact,
    lp_solve,
    normalize_scalars,
    policy_of,
)
from .vertices import RelaxationParams, VertexSet

INEQUALITIES = ("mdl", "pd_facet", "mdpdl", "chsh", "chsh_leak")
MEMBERSHIP_TOL = 1e-10


@dataclass(frozen=True)
class LinearFunctional:
    """``coeffs . p <= bound`` over a flat behavior table of the given kind."""

    coeffs: tuple
    bound: object
    kind: str
    scenario: BellScenario = CHSH
    name: str = ""

    def __post_init__(self):
        vals, pol = normalize_scalars([*self.coeffs, self.bound])
        object.__setattr__(self, "coeffs", vals[:-1])
        object.__setattr__(self, "bound", vals[-1])

    @property
    def policy(self) -> str:
        return policy_of([*self.coeffs, self.bound])

    def value(self, p):
        """Left-hand side on a behavior or a raw value vector."""
        vals = getattr(p, "values", p)
        if len(vals) != len(self.coeffs):
            raise ValueError("functional and behavior have different sizes")
        if getattr(p, "kind", self.kind) != self.kind:
            raise ValueError(f"functional acts on {self.kind} tables, got {p.kind}")
        if policy_of(self.coeffs) == FLOAT or policy_of(vals) == FLOAT:
            return float(sum(float(c) * float(v) for c, v in zip(self.coeffs, vals)))
        return sum((c * v for c, v in zip(self.coeffs, vals)), Fraction(0))

    def as_float(self) -> "LinearFunctional":
        return LinearFunctional(tuple(float(c) for c in self.coeffs), float(self.bound),
                                self.kind, self.scenario, self.name)


@dataclass(frozen=True)
class MembershipResult:
    status: str  # inside | outside
    weights: tuple | None = None
    separator: LinearFunctional | None = None
    residual: float = 0.0


def _vertex_rows(V: VertexSet, policy: str):
    rows = V.rows()
    if policy == FLOAT and V.policy == EXACT:
        rows = [tuple(float(v) for v in r) for r in rows]
    return rows


def membership(p, V: VertexSet) -> MembershipResult:
    """Decide whether ``p`` lies in the convex hull of ``V``.

    ``p`` may be a behavior of the same kind or a raw value vector.  A float
    query against an exact vertex set converts the vertices to float.  Both
    outcomes are certified: the convex weights are substituted back, and the
    separating functional is evaluated over every vertex.
    """
    if not len(V):
        raise ValueError("empty vertex set")
    kind = getattr(p, "kind", None)
    if kind is not None and kind != V.kind:
        raise ValueError(f"query is {kind}, vertex set is {V.kind}")
    vals, pol = normalize_scalars(getattr(p, "values", p))
    if pol == EXACT and V.policy == FLOAT:
        vals, pol = tuple(float(v) for v in vals), FLOAT
    rows = _vertex_rows(V, pol)
    dim = len(vals)
    if len(rows[0]) != dim:
        raise ValueError("query and vertices have different dimensions")
    A = [tuple(r[i] for r in rows) for i in range(dim)] + [tuple(1 for _ in rows)]
    b = tuple(vals) + (1,)
    res = lp_solve(LPProblem(A=tuple(A), b=b))
    if res.status == "feasible":
        w = res.x
        recon = [sum(wi * r[i] for wi, r in zip(w, rows)) for i in range(dim)]
        resid = max(abs(a - b_) for a, b_ in zip(recon, vals))
        if pol == FLOAT and (resid > MEMBERSHIP_TOL or abs(sum(w) - 1) > MEMBERSHIP_TOL):
            raise NumericBreakdown(f"decomposition residual {resid:.3e} above tolerance")
        if pol == EXACT and (resid != 0 or sum(w) != 1):
            raise NumericBreakdown("exact decomposition failed re-substitution")
        return MembershipResult("inside", weights=w, residual=float(resid))

    y = res.dual
    f, g = y[:dim], y[dim]
    sep = LinearFunctional(tuple(f), -g, V.kind, V.scenario, "separator")
    vmax = max(sep.value(r) for r in rows)
    qv = sep.value(vals)
    if pol == EXACT:
        ok = vmax <= sep.bound < qv
    else:
        ok = vmax <= sep.bound + FLOAT_TOL and qv > sep.bound + FLOAT_TOL
    if not ok:
        raise NumericBreakdown("separating functional failed direct verification")
    return MembershipResult("outside", separator=sep)


def max_over_vertices(f: LinearFunctional, V: VertexSet):
    """Maximum of ``f`` over ``V`` and the maximizing vertices in canonical order.

    Returns ``(value, argmax)`` with ``argmax`` a list of vertex indices.
    """
    if not len(V):
        raise ValueError("empty vertex set")
    vals = [f.value(v) for v in V]
    best = max(vals)
    if policy_of([best]) == EXACT:
        arg = [i for i, v in enumerate(vals) if v == best]
    else:
        arg = [i for i, v in enumerate(vals) if abs(v - best) <= FLOAT_TOL]
    return best, arg


def saturating_vertices(f: LinearFunctional, V: VertexSet) -> VertexSet:
    """Vertices where ``f`` meets its bound (exactly, or within 1e-9 for floats)."""
    keep = []
    for v in V:
        val = f.value(v)
        if policy_of([val]) == EXACT and policy_of([f.bound]) == EXACT:
            hit = val == f.bound
        else:
            hit = abs(float(val) - float(f.bound)) <= FLOAT_TOL
        if hit:
            keep.append(v)
    return VertexSet(V.scenario, V.kind, V.params, tuple(keep), V.ordering, V.extremal)


def polytope_dim(V: VertexSet) -> int:
    if not len(V):
        raise ValueError("empty vertex set")
    return affine_rank(V.rows())


@dataclass(frozen=True)
class FacetReport:
    facet: bool
    saturating_dim: int
    polytope_dim: int
    saturating_count: int
    witness: tuple | None


def is_facet(f: LinearFunctional, V: VertexSet) -> FacetReport:
    """Check that ``f <= bound`` is valid on ``V`` and whether its face is a facet.

    A facet has saturating vertices spanning an affine subspace of dimension
    ``dim(V) - 1``; the witness lists that many plus one affinely independent
    saturating vertices.
    """
    best, _ = max_over_vertices(f, V)
    exact = policy_of([best]) == EXACT and policy_of([f.bound]) == EXACT
    if (best > f.bound) if exact else (float(best) > float(f.bound) + FLOAT_TOL):
        raise ValueError(f"functional is violated by a vertex ({best} > {f.bound})")
    sat = saturating_vertices(f, V)
    pdim = polytope_dim(V)
    sdim = affine_rank(sat.rows()) if len(sat) else -1
    facet = sdim == pdim - 1
    witness = None
    if facet:
        idx = affinely_independent_subset(sat.rows())
        witness = tuple(sat[i] for i in idx)
    return FacetReport(facet, sdim, pdim, len(sat), witness)


# ---------------------------------------------------------------------------
# inequalities
# ---------------------------------------------------------------------------


def _zeros(scenario, zero):
    return [zero] * scenario.size


def build_inequality(name: str, params: RelaxationParams | None = None,
                     scenario: BellScenario = CHSH) -> LinearFunctional:
    """Coefficient vector and bound for one of the named inequalities.

    ``mdl`` and ``mdpdl`` act on joint tables with bound 0 (the ``p(x, y)``
    term of ``mdpdl`` is expanded into joint coefficients); ``pd_facet``,
    ``chsh`` and ``chsh_leak`` act on conditional tables.
    """
    if name not in INEQUALITIES:
        raise ValueError(f"unknown inequality {name!r}; choose from {', '.join(INEQUALITIES)}")
    if scenario != CHSH:
        raise ValueError("the named inequalities are defined for the (2,2;2,2) scenario")
    params = params or RelaxationParams()
    idx = scenario.index
    l, h = params.l, params.h
    eps = params.epsA
    if name in ("pd_facet", "mdpdl") and params.epsA != params.epsB:
        raise ValueError(f"{name} needs epsA == epsB")
    zero = (l + h + eps + params.kappa) * 0

    if name == "mdl":
        c = _zeros(scenario, zero)
        c[idx(0, 0, 0, 0)] += l
        for a, b, x, y in ((0, 1, 0, 1), (1, 0, 1, 0), (0, 0, 1, 1)):
            c[idx(a, b, x, y)] -= h
        return LinearFunctional(tuple(c), zero, "joint", scenario, name)

    if name == "pd_facet":
        c = _zeros(scenario, zero)
        c[idx(0, 0, 0, 0)] += 1 - eps
        c[idx(1, 1, 0, 0)] += eps * (1 - eps)
        for a, b, x, y in ((0, 1, 0, 1), (1, 0, 1, 0), (0, 0, 1, 1)):
            c[idx(a, b, x, y)] -= 1
        return LinearFunctional(tuple(c), eps * (1 - eps), "conditional", scenario, name)

    if name == "mdpdl":
        c = _zeros(scenario, zero)
        w = l * (1 - eps)
        c[idx(0, 0, 0, 0)] += w
        c[idx(1, 1, 0, 0)] += w * eps
        for a in range(2):
            for b in range(2):
                c[idx(a, b, 0, 0)] -= w * eps
        for a, b, x, y in ((0, 1, 0, 1), (1, 0, 1, 0), (0, 0, 1, 1)):
            c[idx(a, b, x, y)] -= h
        return LinearFunctional(tuple(c), zero, "joint", scenario, name)

    # CHSH with Bob's settings allowed to depend on x; the table is the same
    c = _zeros(scenario, zero)
    for x, y, a, b in scenario.cells():
        sign = -1 if (x == 1 and y == 1) else 1
        c[idx(a, b, x, y)] += sign * (-1) ** (a + b)
    bound = zero + 2 if name == "chsh" else 2 + 2 * params.kappa
    return LinearFunctional(tuple(c), bound, "conditional", scenario, name)


# ---------------------------------------------------------------------------
# the pd_facet face in the (2,2;2,2) scenario
# ---------------------------------------------------------------------------

FACE_CLASSES = ("type1", "type2", "type3", "type4", "type5")


def classify_pd_face_vertex(v, eps) -> str | None:
    """Sort a saturating vertex of ``pd_facet`` into one of five structural types.

    The types are keyed by ``p(00|00), p(11|00), p(01|01), p(10|10), p(00|11)``.
    """
    p = v.p
    sig = (p(0, 0, 0, 0), p(1, 1, 0, 0), p(0, 1, 0, 1), p(1, 0, 1, 0), p(0, 0, 1, 1))
    q = (1 - eps) ** 2
    table = {
        "type1": (0, 1, 0, 0, 0),
        "type2": (eps, 0, 0, 0, 0),
        "type3": (1, 0, q, 0, 0),
        "type4": (1, 0, 0, q, 0),
        "type5": (1, 0, 0, 0, q),
    }
    exact = v.policy == EXACT and policy_of([eps]) == EXACT
    for name, target in table.items():
        if exact:
            if sig == target:
                return name
        elif all(abs(float(s) - float(t)) <= FLOAT_TOL for s, t in zip(sig, target)):
            return name
    return None


def face_class_counts(sat: VertexSet, eps) -> list[int]:
    counts = {k: 0 for k in FACE_CLASSES}
    for v in sat:
        k = classify_pd_face_vertex(v, eps)
        if k is not None:
            counts[k] += 1
    return [counts[k] for k in FACE_CLASSES]


def facet_witness_table(eps) -> list[list]:
    """The twelve affinely independent saturating vertices as a 12 x 12 matrix.

    Columns are ``p(01|xy), p(10|xy), p(11|xy)`` for ``xy = 00, 01, 10, 11``;
    ``p(00|xy)`` is implied by normalization.
    """
    e = eps
    o = 1 - e
    return [
        [0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1],
        [0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 1, 0],
        [0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 0],
        [0, 0, 1, 0, e, o, 0, 0, 1, e, 0, o],
        [0, 0, 1, 0, o, 0, e, 0, o, 0, o, e],
        [0, 0, 1, 0, e, o, o, 0, 0, 1, 0, 0],
        [0, o, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0],
        [o, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0],
        [o, 0, 0, 0, e, 0, e, 0, o, 0, o, e],
        [0, 0, 0, o * o, e * e, e - e * e, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, e, 0, e * e, o * o, e - e * e, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, e - e * e, e - e * e, e * e],
    ]


def witness_behaviors(eps, scenario: BellScenario = CHSH):
    """Full conditional tables for the rows of :func:`facet_witness_table`."""
    from .behaviors import ConditionalBehavior

    out = []
    for row in facet_witness_table(eps):
        vals = []
        for k in range(4):
            p01, p10, p11 = row[3 * k:3 * k + 3]
            vals.extend([1 - p01 - p10 - p11, p01, p10, p11])
        out.append(ConditionalBehavior(scenario, tuple(vals)))
    return out


def facet_det_formula(eps):
    """Closed form ``4 (2 - eps) (1 - eps)^6 eps^5`` of the witness determinant."""
    return 4 * (2 - eps) * (1 - eps) ** 6 * eps ** 5


def witness_det(eps):
    return det_exact(facet_witness_table(eps))
