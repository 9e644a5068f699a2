"""
How much randomness survives when Bob learns part of Alice's input?

Bob's observable for input y may differ by 2*kappa in operator norm depending
on Alice's input x.  The classical CHSH bound rises to 2 + 2 kappa and the
quantum one to 2 sqrt(2) (kappa + sqrt(1 - kappa^2)), reaching 4 at
kappa = 1/sqrt(2).

For each kappa the script writes the guessing probability of Alice's x = 0
output against the observed CHSH value, and the min-entropy, as CSV.

    python demos/leaky_chsh_curve.py > curve.csv
"""

import sys

from bellforge import io as bio
from bellforge.quantum import behavior_of, chsh_leak_strategy, chsh_leak_value
from bellforge.randomness import beta_c, beta_q, beta_star, curve, oracle_max_chsh

KAPPAS = (0.0, 0.1, 0.25, 0.5, 0.75)


def main(n_points=41):
    for k in KAPPAS:
        grid, _ = oracle_max_chsh(k)
        strat = chsh_leak_value(behavior_of(chsh_leak_strategy(k)))
        print(f"kappa={k:<5} beta_c={beta_c(k):.6f} beta_q={beta_q(k):.6f} "
              f"strategy={strat:.6f} grid={grid:.6f} beta*={beta_star(k):.6f}", file=sys.stderr)

    rows = [p.as_row() for k in KAPPAS for p in curve(k, n_points)]
    sys.stdout.write(bio.csv_text(["beta", "kappa", "pg", "hmin"], rows))


if __name__ == "__main__":
    main()
