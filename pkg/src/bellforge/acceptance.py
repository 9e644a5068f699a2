"""Acceptance checks shared by ``bellforge self-test`` and the test suite.

Each check returns a :class:`CriterionResult`; nothing here raises on a
failed comparison.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction as F

import numpy as np

from .behaviors import CHSH, ConditionalBehavior, InputDistribution, joint_from_conditional, product_behavior
from .geometry import (
    build_inequality,
    face_class_counts,
    facet_det_formula,
    is_facet,
    max_over_vertices,
    membership,
    saturating_vertices,
    witness_det,
)
from .hrep import load_pd_hrep, hrep_contains
from .quantum import (
    KAPPA_BREAK,
    behavior_of,
    chsh_leak_strategy,
    chsh_leak_value,
    operator_norm_diff,
    tilted_hardy_strategy,
    tilted_hardy_value,
)
from .randomness import (
    beta_c,
    beta_q,
    beta_star,
    curve,
    dpbar_dbeta,
    guessing_probability,
    hmin,
    oracle_max_chsh,
    pbar_g,
)
from .vertices import RelaxationParams, mdpdl_vertices, pd_conditional_vertices

SQRT5 = math.sqrt(5)
HARDY_P00 = (5 * SQRT5 - 11) / 2
KAPPA_GRID = (0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, KAPPA_BREAK, 0.8, 0.9)
TILT_GRID = (0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99)
PG_KAPPAS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number}. {self.name}: {self.detail} ({self.seconds:.1f}s)"


def hardy_behavior() -> ConditionalBehavior:
    """Maximal Hardy-paradox correlations, flat in ``(x, y, a, b)`` order."""
    s = SQRT5
    vals = (
        (5 * s - 11) / 2, (7 - 3 * s) / 2, (7 - 3 * s) / 2, (s - 1) / 2,
        s - 2, 0.0, (7 - 3 * s) / 2, (s - 1) / 2,
        s - 2, (7 - 3 * s) / 2, 0.0, (s - 1) / 2,
        0.0, (3 - s) / 2, (3 - s) / 2, s - 2,
    )
    return ConditionalBehavior(CHSH, vals)


def decomposition_table():
    """Weights and ``(p_A(0|xy), p_B(0|xy))`` rows decomposing the Hardy behavior at eps = 1/4."""
    s, e = SQRT5, F(1, 4)
    o = 1 - e
    weights = [
        (108 * s - 241) / 5, (108 * s - 241) / 5, (311 - 138 * s) / 15,
        (14 - 6 * s) / 3, (1647 - 736 * s) / 20, (1169 - 522 * s) / 20,
        (882 * s - 1969) / 30, (141 - 63 * s) / 2, (99 * s - 221) / 3,
    ]
    # columns: pA(0|00), pB(0|00), pA(0|01), pB(0|01), pA(0|10), pB(0|10), pA(0|11), pB(0|11)
    rows = [
        (0, 0, 0, 0, 0, 0, e, 0),
        (0, 0, 0, 0, e, 0, 0, 0),
        (0, 0, 0, 0, 1, e, 1, 0),
        (0, 0, e, 1, 0, 0, 0, 1),
        (e, e, 0, 0, 0, 0, 0, 0),
        (e, o, 0, 0, 1, 1, 1, 0),
        (e, 1, 0, 0, 1, 1, 1, 0),
        (o, e, 1, 1, 0, 0, 0, 1),
        (1, e, 1, 1, 0, 0, 0, 1),
    ]
    verts = [product_behavior(CHSH, [F(r[i]) for i in (0, 2, 4, 6)], [F(r[i]) for i in (1, 3, 5, 7)])
             for r in rows]
    return weights, verts


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


def criterion_vertex_counts():
    counts = {e: len(pd_conditional_vertices(e, e)) for e in (F(1, 5), F(1, 4), F(1, 2), F(0))}
    ok = all(counts[e] == 1296 for e in (F(1, 5), F(1, 4), F(1, 2))) and counts[F(0)] == 16
    detail = ", ".join(f"eps={e}: {n}" for e, n in counts.items())
    return ok, detail


def criterion_facet():
    bad = []
    for e in (F(1, 5), F(1, 4), F(1, 3), F(1, 2), F(3, 4)):
        V = pd_conditional_vertices(e, e)
        f = build_inequality("pd_facet", RelaxationParams(epsA=e, epsB=e))
        best, _ = max_over_vertices(f, V)
        rep = is_facet(f, V)
        classes = face_class_counts(saturating_vertices(f, V), e)
        checks = (
            best == e * (1 - e),
            rep.saturating_count == 56,
            classes == [28, 16, 4, 4, 4],
            rep.saturating_dim == 11,
            rep.polytope_dim == 12,
            rep.facet,
            witness_det(e) == facet_det_formula(e),
        )
        if not all(checks):
            bad.append(f"eps={e}: {checks}")
    return not bad, "max, 56 saturating, (28,16,4,4,4), dims 11/12, det exact at 5 eps" if not bad else "; ".join(bad)


def criterion_table_one():
    H = hardy_behavior()
    weights, verts = decomposition_table()
    recon = [sum(w * float(v.values[i]) for w, v in zip(weights, verts)) for i in range(CHSH.size)]
    err = max(abs(a - b) for a, b in zip(recon, H.values))
    V = pd_conditional_vertices(F(1, 4), F(1, 4))
    listed = {v.values for v in V}
    all_listed = all(v.values in listed for v in verts)
    res = membership(H, V)
    ok = err <= 1e-10 and all_listed and min(weights) >= 0 and res.status == "inside" and res.residual < 1e-10
    return ok, f"table residual {err:.1e}, rows are vertices: {all_listed}, LP {res.status} residual {res.residual:.1e}"


def criterion_strict_superset():
    l = F(1, 4)
    params = RelaxationParams(l=l, h=l, epsA=F(1, 4), epsB=F(1, 4))
    joint = joint_from_conditional(hardy_behavior(), InputDistribution.uniform().as_float())
    f = build_inequality("mdl", RelaxationParams(l=l, h=l))
    margin = f.value(joint) - float(f.bound)
    target = float(l) ** 2 * HARDY_P00
    res = membership(joint, mdpdl_vertices(params))
    ok = abs(margin - target) <= 1e-10 and res.status == "inside"
    return ok, f"MDL margin {margin:.12f} vs {target:.12f}; MDPDL(eps=1/4): {res.status}"


def criterion_tilted_hardy():
    worst_zero, worst_val, min_margin = 0.0, 0.0, math.inf
    f_params = None
    uniform = InputDistribution.uniform().as_float()
    for e in TILT_GRID:
        p = behavior_of(tilted_hardy_strategy(e))
        worst_zero = max(worst_zero, abs(p.p(0, 1, 0, 1)), abs(p.p(1, 0, 1, 0)), abs(p.p(0, 0, 1, 1)))
        val = p.p(0, 0, 0, 0) + e * p.p(1, 1, 0, 0)
        worst_val = max(worst_val, abs(val - tilted_hardy_value(e)))
        f_params = RelaxationParams(l=F(1, 4), h=F(1, 4), epsA=e, epsB=e)
        f = build_inequality("mdpdl", f_params)
        min_margin = min(min_margin, f.value(joint_from_conditional(p, uniform)) - float(f.bound))
    ok = worst_zero <= 1e-9 and worst_val <= 1e-9 and min_margin > 0
    return ok, f"max zero entry {worst_zero:.1e}, closed-form gap {worst_val:.1e}, min MDPDL margin {min_margin:.3e}"


def criterion_chsh_leak():
    worst_val, worst_norm, slack = 0.0, 0.0, -math.inf
    for k in KAPPA_GRID:
        s = chsh_leak_strategy(k)
        worst_val = max(worst_val, abs(chsh_leak_value(behavior_of(s)) - beta_q(k)))
        for pair in s.bob:
            gap = operator_norm_diff(*pair)
            slack = max(slack, gap - 2 * k)
            if k <= KAPPA_BREAK:
                worst_norm = max(worst_norm, abs(gap - 2 * k))
    ok = worst_val <= 1e-9 and slack <= 1e-12 and worst_norm <= 1e-12
    return ok, f"value gap {worst_val:.1e}, norm slack {slack:.1e}, equality gap {worst_norm:.1e}"


def criterion_classical_leak():
    got = {}
    for k in (F(0), F(1, 4), F(1, 2), F(3, 4)):
        V = pd_conditional_vertices(0, k)
        f = build_inequality("chsh_leak", RelaxationParams(epsB=k, kappa=k))
        got[k] = max_over_vertices(f, V)[0]
    ok = all(v == 2 + 2 * k for k, v in got.items())
    return ok, ", ".join(f"kappa={k}: {v}" for k, v in got.items())


def criterion_guessing():
    end_err = max(abs(guessing_probability(2 * math.sqrt(2), 0) - 0.5),
                  abs(guessing_probability(2, 0) - 1),
                  abs(hmin(guessing_probability(2 * math.sqrt(2), 0)) - 1))
    cont, tang, conc = 0.0, 0.0, -math.inf
    for k in PG_KAPPAS:
        bs = beta_star(k)
        cont = max(cont, abs(guessing_probability(bs + 1e-8, k) - guessing_probability(bs - 1e-8, k)))
        chord = (pbar_g(bs, k) - 1) / (bs - beta_c(k))
        h = 1e-6
        fd = (pbar_g(bs + h, k) - pbar_g(bs - h, k)) / (2 * h)
        tang = max(tang, abs(chord - fd), abs(chord - dpbar_dbeta(bs, k)))
        pg = np.array([p.pg for p in curve(k, 1000)])
        conc = max(conc, float(np.max(np.diff(pg, 2))))
    ok = end_err <= 1e-9 and cont < 1e-6 and tang <= 1e-7 and conc <= 1e-8
    return ok, (f"endpoint error {end_err:.1e}, continuity {cont:.1e}, tangency {tang:.1e}, "
                f"max second difference {conc:.1e}")


def criterion_oracles():
    grid_gap = max(abs(oracle_max_chsh(k)[0] - beta_q(k)) for k in KAPPA_GRID)
    agree, n_in, n_out, total = hrep_agreement()
    ok = grid_gap <= 1e-3 and agree == total
    return ok, (f"grid oracle gap {grid_gap:.1e}; H-rep vs LP agree on {agree}/{total} "
                f"({n_in} inside, {n_out} outside)")


def sample_test_points(V, n_inside=50, n_outside=50, seed=2024):
    """Random convex combinations, and the same construction pushed away from the centroid."""
    rng = np.random.default_rng(seed)
    rows = np.array(V.as_float().rows())
    centroid = rows.mean(axis=0)
    pts = []
    for _ in range(n_inside):
        idx = rng.choice(len(rows), size=12, replace=False)
        pts.append(rng.dirichlet(np.ones(12)) @ rows[idx])
    for _ in range(n_outside):
        idx = rng.choice(len(rows), size=3, replace=False)
        q = rng.dirichlet(np.ones(3)) @ rows[idx]
        pts.append(centroid + rng.uniform(1.05, 1.6) * (q - centroid))
    return pts


def hrep_agreement(seed=2024):
    e = F(1, 4)
    V = pd_conditional_vertices(e, e)
    hrep = load_pd_hrep()
    agree = n_in = n_out = 0
    pts = sample_test_points(V, seed=seed)
    for x in pts:
        lp_in = membership(tuple(float(t) for t in x), V).status == "inside"
        h_in = hrep_contains(hrep, x)
        agree += lp_in == h_in
        n_in += h_in
        n_out += not h_in
    return agree, n_in, n_out, len(pts)


CRITERIA = (
    (1, "vertex counts", criterion_vertex_counts),
    (2, "facet reproduction", criterion_facet),
    (3, "Hardy decomposition table", criterion_table_one),
    (4, "MDL vs MDPDL strict superset", criterion_strict_superset),
    (5, "tilted Hardy violation", criterion_tilted_hardy),
    (6, "CHSH leakage quantum value", criterion_chsh_leak),
    (7, "classical bound under leakage", criterion_classical_leak),
    (8, "guessing probability", criterion_guessing),
    (9, "oracle cross-checks", criterion_oracles),
)


def run_one(number: int) -> CriterionResult:
    num, name, fn = CRITERIA[number - 1]
    t = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed criterion, reported with its message
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(num, name, bool(ok), detail, time.perf_counter() - t)


def run_all() -> list[CriterionResult]:
    return [run_one(n) for n, _, _ in CRITERIA]


def format_table(results) -> str:
    lines = [r.line() for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"
