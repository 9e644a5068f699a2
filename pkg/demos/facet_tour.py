"""
Vertices and one facet of the measurement-dependent, parameter-dependent
relaxation of the CHSH scenario.

Each party's marginal may shift by at most eps when the other party's input
changes.  For binary outcomes the conditional polytope is spanned by products
of one Alice table and one Bob table, 36 of each, so 1296 points for any
0 < eps < 1.

The script counts vertices, then checks that the PD inequality

    (1-eps) p(00|00) + eps(1-eps) p(11|00)
        - p(01|01) - p(10|10) - p(00|11) <= eps(1-eps)

is tight and its saturating vertices span a facet of the 12-dimensional polytope for a
handful of eps values.  Exact rational arithmetic throughout.

    python demos/facet_tour.py
"""

from fractions import Fraction as F

from bellforge import CHSH, RelaxationParams, pd_conditional_vertices
from bellforge.geometry import (
    build_inequality,
    face_class_counts,
    facet_det_formula,
    is_facet,
    max_over_vertices,
    saturating_vertices,
    witness_det,
)


def main():
    print("eps    vertices  max  saturating  classes             face dim  det(M_V)")
    for eps in (F(1, 8), F(1, 4), F(1, 3), F(1, 2), F(3, 4)):
        V = pd_conditional_vertices(eps, eps, CHSH)
        f = build_inequality("pd_facet", RelaxationParams(epsA=eps, epsB=eps))
        best, _ = max_over_vertices(f, V)
        sat = saturating_vertices(f, V)
        rep = is_facet(f, V)
        det = witness_det(eps)
        assert det == facet_det_formula(eps)
        print(f"{str(eps):5}  {len(V):8}  {str(best - f.bound):3}  {len(sat):10}  "
              f"{str(face_class_counts(sat, eps)):18}  {rep.saturating_dim}/{rep.polytope_dim}     {det}")

    # at eps = 0 only local deterministic points survive
    V0 = pd_conditional_vertices(0, 0, CHSH)
    print(f"\neps = 0 leaves {len(V0)} deterministic vertices")


if __name__ == "__main__":
    main()
