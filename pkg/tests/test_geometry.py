import math
from fractions import Fraction as F

import numpy as np
import pytest

from bellforge.acceptance import decomposition_table, hardy_behavior
from bellforge.behaviors import CHSH, ConditionalBehavior, InputDistribution, joint_from_conditional
from bellforge.geometry import (
    LinearFunctional,
    build_inequality,
    classify_pd_face_vertex,
    face_class_counts,
    facet_witness_table,
    is_facet,
    max_over_vertices,
    membership,
    polytope_dim,
    saturating_vertices,
    witness_behaviors,
)
from bellforge.numerics import LPProblem, affine_rank, lp_solve
from bellforge.vertices import RelaxationParams, VertexSet, mdpdl_vertices, pd_conditional_vertices

S5 = math.sqrt(5)
HARDY = (5 * S5 - 11) / 2


def pd_params(e):
    return RelaxationParams(epsA=e, epsB=e)


def test_pd_facet_max_and_saturation(pd_quarter, pd_facet_quarter):
    best, arg = max_over_vertices(pd_facet_quarter, pd_quarter)
    assert best == F(3, 16)
    sat = saturating_vertices(pd_facet_quarter, pd_quarter)
    assert len(sat) == len(arg) == 56
    assert face_class_counts(sat, F(1, 4)) == [28, 16, 4, 4, 4]
    assert all(classify_pd_face_vertex(v, F(1, 4)) is not None for v in sat)


def test_chsh_deterministic(deterministic):
    f = build_inequality("chsh")
    best, arg = max_over_vertices(f, deterministic)
    assert best == 2 and len(arg) == 8
    assert len(saturating_vertices(f, deterministic)) == 8


def test_chsh_leak_classical_bound():
    k = F(1, 4)
    V = pd_conditional_vertices(0, k)
    f = build_inequality("chsh_leak", RelaxationParams(epsB=k, kappa=k))
    assert f.bound == F(5, 2)
    assert max_over_vertices(f, V)[0] == F(5, 2)


def test_polytope_dims(pd_quarter, deterministic):
    assert polytope_dim(pd_quarter) == 12
    assert polytope_dim(deterministic) == 8
    assert polytope_dim(VertexSet(CHSH, "conditional", None, (pd_quarter[0],))) == 0


@pytest.mark.parametrize("eps", [F(1, 5), F(1, 3), F(1, 2), F(2, 3)])
def test_pd_facet_is_facet(eps):
    V = pd_conditional_vertices(eps, eps)
    rep = is_facet(build_inequality("pd_facet", pd_params(eps)), V)
    assert rep.facet and rep.saturating_dim == 11 and rep.polytope_dim == 12
    assert len(rep.witness) == 12 and affine_rank([w.values for w in rep.witness]) == 11


def test_pd_facet_at_zero_smoke(deterministic):
    # outside the range the facet statement covers; only check that it is valid
    f = build_inequality("pd_facet", pd_params(0))
    assert max_over_vertices(f, deterministic)[0] == 0
    rep = is_facet(f, deterministic)
    assert rep.polytope_dim == 8


def test_normalization_functional_not_facet(pd_quarter):
    f = LinearFunctional((F(1, 4),) * 16, F(1), "conditional", CHSH, "norm")
    rep = is_facet(f, pd_quarter)
    assert not rep.facet and rep.saturating_dim == rep.polytope_dim == 12


def test_is_facet_rejects_invalid(pd_quarter):
    f = build_inequality("pd_facet", pd_params(F(1, 4)))
    bad = LinearFunctional(f.coeffs, F(0), f.kind, CHSH, "too tight")
    with pytest.raises(ValueError):
        is_facet(bad, pd_quarter)


def test_witness_table_rows(pd_quarter, pd_facet_quarter):
    # eleven printed rows are saturating vertices; the eleventh printed row is not in the polytope
    e = F(1, 4)
    listed = {v.values for v in pd_quarter}
    rows = witness_behaviors(e)
    inside = [r.values in listed for r in rows]
    assert inside == [True] * 10 + [False, True]
    assert all(pd_facet_quarter.value(r) == F(3, 16) for i, r in enumerate(rows) if inside[i])
    assert membership(rows[10], pd_quarter).status == "outside"


def test_mdl_coefficients():
    f = build_inequality("mdl", RelaxationParams(l=F(1, 8), h=F(1, 2)))
    idx = CHSH.index
    assert f.coeffs[idx(0, 0, 0, 0)] == F(1, 8)
    assert f.coeffs[idx(0, 1, 0, 1)] == f.coeffs[idx(1, 0, 1, 0)] == f.coeffs[idx(0, 0, 1, 1)] == F(-1, 2)
    assert f.bound == 0 and f.kind == "joint"


def test_mdpdl_coefficient_expansion():
    l, h, e = F(1, 8), F(1, 2), F(1, 4)
    f = build_inequality("mdpdl", RelaxationParams(l=l, h=h, epsA=e, epsB=e))
    idx = CHSH.index
    assert f.coeffs[idx(0, 0, 0, 0)] == l * (1 - e) * (1 - e)
    assert f.coeffs[idx(1, 1, 0, 0)] == 0
    assert f.coeffs[idx(0, 1, 0, 0)] == f.coeffs[idx(1, 0, 0, 0)] == -l * (1 - e) * e


def test_pd_facet_zero_is_hardy_form():
    f = build_inequality("pd_facet", pd_params(0))
    idx = CHSH.index
    expected = [0] * 16
    expected[idx(0, 0, 0, 0)] = 1
    for a, b, x, y in ((0, 1, 0, 1), (1, 0, 1, 0), (0, 0, 1, 1)):
        expected[idx(a, b, x, y)] = -1
    assert list(f.coeffs) == expected and f.bound == 0


def test_inequality_errors():
    with pytest.raises(ValueError):
        build_inequality("nope")
    with pytest.raises(ValueError):
        build_inequality("pd_facet", RelaxationParams(epsA=F(1, 4), epsB=F(1, 5)))


@pytest.mark.parametrize("eps", [F(1, 5), F(1, 3)])
@pytest.mark.parametrize("lh", [(F(1, 4), F(1, 4)), (F(1, 8), F(1, 2))])
def test_mdl_and_mdpdl_bounds_tight(eps, lh):
    l, h = lh
    mdl = build_inequality("mdl", RelaxationParams(l=l, h=h))
    assert max_over_vertices(mdl, mdpdl_vertices(RelaxationParams(l=l, h=h)))[0] == 0
    p = RelaxationParams(l=l, h=h, epsA=eps, epsB=eps)
    f = build_inequality("mdpdl", p)
    assert max_over_vertices(f, mdpdl_vertices(p))[0] == 0


def test_table_one_weights_by_lp():
    weights, verts = decomposition_table()
    A = [tuple(float(v.values[i]) for v in verts) for i in range(16)] + [(1.0,) * 9]
    b = tuple(hardy_behavior().values) + (1.0,)
    res = lp_solve(LPProblem(A=tuple(A), b=b))
    assert res.status == "feasible"
    assert np.allclose(res.x, weights, atol=1e-9)


def test_hardy_inside_pd(pd_quarter):
    res = membership(hardy_behavior(), pd_quarter)
    assert res.status == "inside" and res.residual < 1e-10
    assert abs(sum(res.weights) - 1) < 1e-10 and min(res.weights) >= 0


def test_hardy_joint_outside_mdl():
    V = mdpdl_vertices(RelaxationParams())
    joint = joint_from_conditional(hardy_behavior(), InputDistribution.uniform().as_float())
    res = membership(joint, V)
    assert res.status == "outside"
    sep = res.separator
    assert sep.value(joint) > max(sep.value(v) for v in V.as_float())


def test_vertex_self_membership(pd_quarter):
    for i in (0, 517, 1295):
        res = membership(pd_quarter[i], pd_quarter)
        assert res.status == "inside" and res.residual == 0
        assert sum(res.weights) == 1


def test_exact_outside_certificate(deterministic):
    pr = ConditionalBehavior.from_function(
        CHSH, lambda a, b, x, y: F(1, 2) if (a ^ b) == (x & y) else F(0))
    res = membership(pr, deterministic)
    assert res.status == "outside"
    assert res.separator.value(pr) > res.separator.bound
    assert max(res.separator.value(v) for v in deterministic) <= res.separator.bound


def test_membership_kind_mismatch(pd_quarter):
    joint = mdpdl_vertices(RelaxationParams())[0]
    with pytest.raises(ValueError):
        membership(joint, pd_quarter)
