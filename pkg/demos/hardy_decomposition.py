"""
Hardy's behaviour has a local model once each marginal may move by 1/4.

The Hardy point violates every local model, but it lies inside the relaxed
polytope at eps = 1/4.  The LP gives one set of convex weights over the 1296
vertices; a hand-made nine-term decomposition reproduces the same table.

At eps = 0 the LP instead returns a separating functional, which is a Bell
inequality violated by the Hardy point.

    python demos/hardy_decomposition.py
"""

from fractions import Fraction as F

import numpy as np

from bellforge import CHSH, membership, pd_conditional_vertices
from bellforge.acceptance import decomposition_table, hardy_behavior


def show(table, label):
    print(label)
    for x in (0, 1):
        for y in (0, 1):
            k = 4 * (2 * x + y)
            print(f"  xy={x}{y}: " + "  ".join(f"{v:.6f}" for v in table[k:k + 4]))


def main():
    hardy = hardy_behavior()
    show(hardy.values, "Hardy behaviour p(ab|xy), ab = 00 01 10 11")

    weights, verts = decomposition_table()
    rebuilt = sum(w * np.array(v.as_float().values) for w, v in zip(weights, verts))
    print(f"\nnine-term decomposition, max error {np.max(np.abs(rebuilt - hardy.values)):.1e}")
    for w, v in zip(weights, verts):
        print(f"  {w:.6f}  " + " ".join(str(t) for t in v.values))

    V = pd_conditional_vertices(F(1, 4), F(1, 4), CHSH)
    res = membership(hardy, V)
    used = int(np.count_nonzero(np.array(res.weights, dtype=float) > 1e-12))
    print(f"\nLP at eps=1/4: {res.status}, {used} vertices used, residual {res.residual:.1e}")

    res0 = membership(hardy, pd_conditional_vertices(0, 0, CHSH))
    sep = res0.separator
    print(f"LP at eps=0: {res0.status}; separator value {sep.value(hardy):.6f} > bound {sep.bound}")


if __name__ == "__main__":
    main()
