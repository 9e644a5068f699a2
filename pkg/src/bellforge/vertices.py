"""Extreme points of the relaxed input, conditional and joint polytopes.

* input polytope: ``l <= p(x, y) <= h``, ``sum p = 1``;
* one-party marginal polytope: ``p(0 | k)`` over ``k`` conditioning inputs with
  pairwise total-variation shifts at most ``eps``;
* conditional polytope: products of one Alice marginal table per ``x`` and one
  Bob marginal table per ``y``;
* joint polytope: products of the above with input vertices.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from sympy.utilities.iterables import multiset_permutations

from .behaviors import (
    BellScenario,
    CHSH,
    ConditionalBehavior,
    InputDistribution,
    JointBehavior,
    joint_from_conditional,
    product_behavior,
)
from .numerics import EXACT, FLOAT, LPProblem, lp_solve, parse_scalar, policy_of

DEDUP_DECIMALS = 12


@dataclass(frozen=True)
class RelaxationParams:
    """Relaxation knobs: input box ``[l, h]``, PI shifts ``epsA, epsB``, leakage ``kappa``."""

    l: object = Fraction(1, 4)
    h: object = Fraction(1, 4)
    epsA: object = Fraction(0)
    epsB: object = Fraction(0)
    kappa: object = Fraction(0)

    def __post_init__(self):
        for name in ("l", "h", "epsA", "epsB", "kappa"):
            object.__setattr__(self, name, parse_scalar(getattr(self, name)))
        if not (0 < self.l <= self.h <= 1):
            raise ValueError(f"need 0 < l <= h <= 1, got l={self.l}, h={self.h}")
        for name in ("epsA", "epsB", "kappa"):
            v = getattr(self, name)
            if not (0 <= v < 1):
                raise ValueError(f"{name} must lie in [0, 1), got {v}")

    def check_box(self, scenario: BellScenario) -> None:
        n = scenario.n_inputs
        if not (self.l * n <= 1 <= self.h * n):
            raise ValueError(
                f"input box [{self.l}, {self.h}] is infeasible for {n} input pairs"
            )


@dataclass(frozen=True)
class VertexSet:
    """Vertices (or hull generators) of one of the polytopes, in canonical order."""

    scenario: BellScenario
    kind: str
    params: RelaxationParams | None
    vertices: tuple
    ordering: str = "lex"
    extremal: bool = field(default=True)

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __getitem__(self, i):
        return self.vertices[i]

    @property
    def policy(self) -> str:
        return self.vertices[0].policy if self.vertices else EXACT

    def rows(self) -> list[tuple]:
        return [v.values for v in self.vertices]

    def as_float(self) -> "VertexSet":
        return VertexSet(
            self.scenario, self.kind, self.params,
            tuple(v.as_float() for v in self.vertices), self.ordering, self.extremal,
        )


def canonical(tables: Sequence, tol_decimals: int = DEDUP_DECIMALS) -> tuple:
    """Deduplicate and sort tables lexicographically by their value vectors."""
    seen = {}
    for t in tables:
        if t.policy == EXACT:
            key = t.values
        else:
            key = tuple(round(v, tol_decimals) + 0.0 for v in t.values)
        seen.setdefault(key, t)
    return tuple(seen[k] for k in sorted(seen))


# ---------------------------------------------------------------------------
# input polytope
# ---------------------------------------------------------------------------


def input_vertices(params: RelaxationParams, scenario: BellScenario = CHSH) -> VertexSet:
    """Vertices of ``{p : l <= p(x, y) <= h, sum p = 1}``.

    For ``l < h`` these are the distinct permutations of ``n`` copies of
    ``h``, ``N - n - 1`` copies of ``l`` and one remainder entry, where
    ``N = nX nY`` and ``n = floor((1 - N l) / (h - l))``.
    """
    params.check_box(scenario)
    l, h = params.l, params.h
    N = scenario.n_inputs
    if l == h:
        value = Fraction(1, N) if policy_of([l]) == EXACT else 1.0 / N
        pts = [InputDistribution(scenario, (value,) * N)]
        return VertexSet(scenario, "input", params, tuple(pts))
    n = math.floor((1 - N * l) / (h - l))
    n = min(n, N - 1)
    rest = 1 - n * h - (N - n - 1) * l
    multiset = [h] * n + [l] * (N - n - 1) + [rest]
    pts = [InputDistribution(scenario, tuple(perm)) for perm in multiset_permutations(multiset)]
    return VertexSet(scenario, "input", params, canonical(pts))


# ---------------------------------------------------------------------------
# one-party marginal polytope
# ---------------------------------------------------------------------------


def _check_eps(eps):
    eps = parse_scalar(eps)
    if not (0 <= eps < 1):
        raise ValueError(f"eps must lie in [0, 1), got {eps}")
    return eps


def marginal_vertex_pairs(eps) -> list[tuple]:
    """Vertices ``(p(0 | k=0), p(0 | k=1))`` for two conditioning inputs.

    The constant pairs ``(eps, eps)`` and ``(1 - eps, 1 - eps)`` are not
    vertices and never appear.
    """
    eps = _check_eps(eps)
    one, zero = eps * 0 + 1, eps * 0
    raw = [(zero, zero), (one, one), (zero, eps), (one, one - eps), (eps, zero), (one - eps, one)]
    out = []
    for p in raw:
        if p not in out:
            out.append(p)
    return out


def _in_hull_of(point, others) -> bool:
    if not others:
        return False
    dim = len(point)
    A = [[o[i] for o in others] for i in range(dim)] + [[1] * len(others)]
    b = list(point) + [1]
    return lp_solve(LPProblem(A=tuple(map(tuple, A)), b=tuple(b))).status == "feasible"


def extreme_subset(points: Sequence[tuple]) -> list[int]:
    """Indices of points not expressible as convex combinations of the rest."""
    keep = []
    for i, p in enumerate(points):
        others = [q for j, q in enumerate(points) if j != i]
        if not _in_hull_of(p, others):
            keep.append(i)
    return keep


def marginal_vertices(eps, n_conditioning: int) -> list[tuple]:
    """Vertex tables ``p(0 | k)`` over ``n_conditioning`` inputs of the other party.

    Enumerates the grid with entries in ``{0, eps, 1 - eps, 1}`` that obeys
    ``|p(0|k) - p(0|k')| <= eps`` and drops points that are convex
    combinations of the others.  Output is sorted lexicographically.
    """
    eps = _check_eps(eps)
    if n_conditioning < 2:
        raise ValueError("need at least two conditioning inputs")
    values = sorted(set([eps * 0, eps, 1 - eps, eps * 0 + 1]))
    grid = []
    for combo in itertools.product(values, repeat=n_conditioning):
        if all(abs(u - v) <= eps for u, v in itertools.combinations(combo, 2)):
            grid.append(combo)
    if policy_of([eps]) == FLOAT:
        grid = sorted({tuple(round(v, DEDUP_DECIMALS) + 0.0 for v in g) for g in grid})
    return sorted(grid[i] for i in extreme_subset(grid))


# ---------------------------------------------------------------------------
# conditional and joint polytopes
# ---------------------------------------------------------------------------


def _alice_tables(epsA, scenario):
    """Each Alice table is a flat ``p_A(0 | x, y)`` vector built from one vertex per ``x``."""
    per_x = marginal_vertices(epsA, scenario.nY)
    out = []
    for choice in itertools.product(per_x, repeat=scenario.nX):
        out.append(tuple(choice[x][y] for x in range(scenario.nX) for y in range(scenario.nY)))
    return out


def _bob_tables(epsB, scenario):
    per_y = marginal_vertices(epsB, scenario.nX)
    out = []
    for choice in itertools.product(per_y, repeat=scenario.nY):
        out.append(tuple(choice[y][x] for x in range(scenario.nX) for y in range(scenario.nY)))
    return out


def pd_conditional_vertices(epsA, epsB, scenario: BellScenario = CHSH, jobs: int = 1) -> VertexSet:
    """Vertices of the conditional polytope with PI shifts bounded by ``epsA, epsB``."""
    epsA, epsB = _check_eps(epsA), _check_eps(epsB)
    policy_of([epsA, epsB])
    alice = _alice_tables(epsA, scenario)
    bob = _bob_tables(epsB, scenario)

    def build(a_tab):
        return [product_behavior(scenario, a_tab, b_tab) for b_tab in bob]

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(build, alice))
    else:
        chunks = [build(a) for a in alice]
    params = RelaxationParams(epsA=epsA, epsB=epsB)
    verts = canonical([v for chunk in chunks for v in chunk])
    return VertexSet(scenario, "conditional", params, verts)


def mdpdl_vertices(params: RelaxationParams, scenario: BellScenario = CHSH,
                   filter_extremal: bool = False, jobs: int = 1) -> VertexSet:
    """Generators of the joint polytope: input vertices times conditional vertices.

    Without ``filter_extremal`` the result may contain non-extremal points but
    its convex hull is the whole polytope.  With it, every point that is a
    convex combination of the others is removed by linear programming.
    """
    inputs = input_vertices(params, scenario)
    conds = pd_conditional_vertices(params.epsA, params.epsB, scenario, jobs=jobs)
    pts = []
    for inp in inputs:
        if inp.policy != conds.policy:
            inp = inp.as_float()
        cs = conds.vertices if conds.policy == inp.policy else [c.as_float() for c in conds]
        pts.extend(joint_from_conditional(c, inp) for c in cs)
    pts = canonical(pts)
    if filter_extremal:
        keep = extreme_subset([p.values for p in pts])
        pts = tuple(pts[i] for i in keep)
    return VertexSet(scenario, "joint", params, pts, extremal=filter_extremal)


def deterministic_vertices(scenario: BellScenario = CHSH) -> VertexSet:
    """Local deterministic behaviors (the ``eps = 0`` conditional vertices)."""
    return pd_conditional_vertices(0, 0, scenario)
