from fractions import Fraction as F

import numpy as np
import pytest

from bellforge import CHSH, membership, pd_conditional_vertices
from bellforge.acceptance import hardy_behavior, sample_test_points
from bellforge.hrep import exact_facet, hrep_contains, load_pd_hrep, project, validate_hrep


@pytest.fixture(scope="module")
def hrep():
    return load_pd_hrep()


@pytest.fixture(scope="module")
def points(pd_quarter):
    return [project(list(v.values)) for v in pd_quarter]


def test_project_drops_p00():
    vals = list(range(16))
    assert project(vals) == [1, 2, 3, 5, 6, 7, 9, 10, 11, 13, 14, 15]
    with pytest.raises(ValueError):
        project(vals[:12])


def test_frozen_list_is_exact_facets(hrep, points):
    report = validate_hrep(hrep, points)
    assert report["inequalities"] == len(hrep) > 0
    rows = {tuple(r) for r in hrep.tolist()}
    assert len(rows) == len(hrep)


def test_nonnegativity_rows_present(hrep):
    # -p(11|xy) <= 0 is a facet of the relaxed polytope for every xy
    rows = {tuple(r) for r in hrep.tolist()}
    for k in range(4):
        row = [0] * 13
        row[1 + 3 * k + 2] = -1
        assert tuple(row) in rows


def test_exact_facet_recovers_row(hrep, points):
    row = hrep[len(hrep) // 2]
    noisy = [float(v) * (1 + 1e-12) for v in row]
    assert exact_facet(points, noisy) == [int(v) for v in row]


def test_exact_facet_rejects_non_facet(points):
    # p(01|00) + p(10|00) <= 2 is valid but touches no vertex
    row = [2.0, 1.0, 1.0] + [0.0] * 10
    assert exact_facet(points, row) is None


def test_vertices_and_hardy(hrep, pd_quarter):
    for v in pd_quarter.as_float():
        assert hrep_contains(hrep, v.values)
    assert hrep_contains(hrep, hardy_behavior().values)
    det = pd_conditional_vertices(0, 0, CHSH)
    assert all(hrep_contains(hrep, v.as_float().values) for v in det)


def test_contains_rejects_unnormalized(hrep):
    vals = [0.25] * 16
    vals[0] = 0.3
    assert not hrep_contains(hrep, vals)


def test_agreement_with_lp(hrep, pd_quarter):
    pts = sample_test_points(pd_quarter, 10, 10, seed=7)
    got = [(membership(tuple(float(t) for t in x), pd_quarter).status == "inside", hrep_contains(hrep, x))
           for x in pts]
    assert all(a == b for a, b in got)
    assert any(a for a, _ in got) and not all(a for a, _ in got)


def test_boundary_crossings_match_lp(hrep, pd_quarter):
    # walk from an interior point towards an exterior one; the facet list puts the
    # boundary at t*, and the LP must agree just before and just after it
    A = np.array(hrep[:, 1:], dtype=float)
    b = np.array(hrep[:, 0], dtype=float)
    pts = sample_test_points(pd_quarter, 4, 4, seed=11)
    for x_in, x_out in zip(pts[:4], pts[4:]):
        d = np.array(x_out) - np.array(x_in)
        p_in, p_d = np.array(project(list(x_in))), np.array(project(list(d)))
        rate = A @ p_d
        room = b - A @ p_in
        t_star = np.min(room[rate > 0] / rate[rate > 0])
        assert 0 < t_star < 1
        for t, expect in ((t_star * (1 - 1e-4), "inside"), (t_star * (1 + 1e-4), "outside")):
            q = tuple(float(v) for v in np.array(x_in) + t * d)
            assert hrep_contains(hrep, q) == (expect == "inside")
            assert membership(q, pd_quarter).status == expect
