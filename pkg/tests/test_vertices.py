import itertools
from fractions import Fraction as F

import pytest

from bellforge.behaviors import CHSH, InputDistribution, marginals, signaling_deficit
from bellforge.numerics import det_exact
from bellforge.vertices import (
    RelaxationParams,
    deterministic_vertices,
    input_vertices,
    marginal_vertex_pairs,
    marginal_vertices,
    mdpdl_vertices,
    pd_conditional_vertices,
)


def brute_force_marginal_vertices(eps, n):
    """Vertices of {0 <= p_i <= 1, |p_i - p_j| <= eps} from every n-subset of tight constraints."""
    rows = []  # (a, b) meaning a . p <= b
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append((tuple(e), F(1)))
        rows.append((tuple(-v for v in e), F(0)))
    for i, j in itertools.permutations(range(n), 2):
        a = [0] * n
        a[i], a[j] = 1, -1
        rows.append((tuple(a), eps))
    found = set()
    for subset in itertools.combinations(rows, n):
        M = [list(map(F, a)) for a, _ in subset]
        d = det_exact(M)
        if d == 0:
            continue
        # Cramer's rule
        sol = []
        for k in range(n):
            Mk = [r[:k] + [b] + r[k + 1:] for r, (_, b) in zip(M, subset)]
            sol.append(det_exact(Mk) / d)
        if all(sum(a_ * s for a_, s in zip(a, sol)) <= b for a, b in rows):
            found.add(tuple(sol))
    return sorted(found)


def test_input_vertices_uniform_box():
    V = input_vertices(RelaxationParams(l=F(1, 4), h=F(1, 4)))
    assert [v.values for v in V] == [(F(1, 4),) * 4]


def test_input_vertices_multiset():
    V = input_vertices(RelaxationParams(l=F(1, 8), h=F(1, 2)))
    assert len(V) == 12
    assert all(sorted(v.values) == [F(1, 8), F(1, 8), F(1, 4), F(1, 2)] for v in V)


def test_input_vertices_n_zero():
    V = input_vertices(RelaxationParams(l=F(1, 4), h=F(1, 2)))
    assert len(V) == 1 and V[0].values == (F(1, 4),) * 4


def test_input_box_infeasible():
    with pytest.raises(ValueError):
        input_vertices(RelaxationParams(l=F(1, 2), h=F(1, 2)))
    with pytest.raises(ValueError):
        RelaxationParams(l=F(1, 2), h=F(1, 4))


def test_input_vertices_are_vertices_of_box():
    # every generated point has at most one coordinate strictly inside (l, h)
    l, h = F(1, 10), F(2, 5)
    for v in input_vertices(RelaxationParams(l=l, h=h)):
        assert sum(1 for t in v.values if l < t < h) <= 1
        assert sum(v.values) == 1


def test_marginal_pairs():
    e = F(1, 4)
    assert len(marginal_vertex_pairs(e)) == 6
    assert (e, e) not in marginal_vertex_pairs(e)
    assert sorted(marginal_vertex_pairs(0)) == [(0, 0), (1, 1)]
    half = marginal_vertex_pairs(F(1, 2))
    assert len(half) == 6 and (0, F(1, 2)) in half and (F(1, 2), 0) in half
    with pytest.raises(ValueError):
        marginal_vertex_pairs(1)


@pytest.mark.parametrize("eps", [F(0), F(1, 5), F(1, 4), F(1, 2), F(3, 4)])
def test_marginal_vertices_two_inputs_match_pairs(eps):
    assert marginal_vertices(eps, 2) == sorted(marginal_vertex_pairs(eps))


@pytest.mark.parametrize("eps", [F(1, 5), F(1, 4), F(1, 3), F(1, 2), F(2, 3)])
def test_marginal_vertices_three_inputs_oracle(eps):
    assert marginal_vertices(eps, 3) == brute_force_marginal_vertices(eps, 3)


def test_marginal_vertices_four_inputs_oracle():
    e = F(1, 4)
    assert marginal_vertices(e, 4) == brute_force_marginal_vertices(e, 4)


def test_no_constant_eps_tables():
    for eps in (F(1, 5), F(1, 3)):
        for n in (2, 3):
            for t in marginal_vertices(eps, n):
                assert t != (eps,) * n and t != (1 - eps,) * n


@pytest.mark.parametrize("eps", [F(1, 5), F(1, 4), F(1, 2), F(2, 3), F(9, 10)])
def test_pd_count_1296(eps):
    assert len(pd_conditional_vertices(eps, eps)) == 1296


def test_pd_counts_other():
    assert len(pd_conditional_vertices(0, 0)) == 16
    assert len(pd_conditional_vertices(0, F(1, 2))) == 144


def test_float_eps_count():
    assert len(pd_conditional_vertices(0.25, 0.25)) == 1296


def test_deterministic_set_equality():
    lds = set()
    for a0, a1, b0, b1 in itertools.product(range(2), repeat=4):
        lds.add(tuple(F(int(a == (a0, a1)[x] and b == (b0, b1)[y])) for x, y, a, b in CHSH.cells()))
    assert {v.values for v in deterministic_vertices()} == lds


def test_vertices_respect_pd_bounds(pd_quarter):
    e = F(1, 4)
    for v in pd_quarter:
        dA, dB = signaling_deficit(v)
        assert dA <= e and dB <= e
        pa, pb = marginals(v)
        assert set(pa) <= {0, e, 1 - e, 1} and set(pb) <= {0, e, 1 - e, 1}


def test_asymmetric_bounds():
    V = pd_conditional_vertices(F(1, 5), F(1, 3))
    assert len(V) == 1296
    assert max(signaling_deficit(v)[0] for v in V) == F(1, 5)
    assert max(signaling_deficit(v)[1] for v in V) == F(1, 3)


def test_canonical_order_and_jobs():
    a = pd_conditional_vertices(F(1, 4), F(1, 4), jobs=1)
    b = pd_conditional_vertices(F(1, 4), F(1, 4), jobs=4)
    assert a.vertices == b.vertices
    rows = a.rows()
    assert rows == sorted(rows) and len(set(rows)) == len(rows)


def test_mdpdl_counts():
    e = F(1, 4)
    assert len(mdpdl_vertices(RelaxationParams(epsA=e, epsB=e))) == 1296
    assert len(mdpdl_vertices(RelaxationParams())) == 16
    V = mdpdl_vertices(RelaxationParams(l=F(1, 8), h=F(1, 2)))
    assert len(V) == 192 and not V.extremal
    assert all(v.kind == "joint" and sum(v.values) == 1 for v in V)


def test_mdpdl_filter_extremal_keeps_hull():
    V = mdpdl_vertices(RelaxationParams(l=F(1, 8), h=F(1, 2)), filter_extremal=True)
    # at eps = 0 every product point survives the LP redundancy filter
    assert len(V) == 192 and V.extremal
