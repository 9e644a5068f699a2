"""Bell scenarios and probability tables.

Tables are stored flat in row-major ``(x, y, a, b)`` order for joint and
conditional behaviors, ``(x, y)`` for input distributions and
``(x, y, a)`` / ``(x, y, b)`` for one-party marginals.  The layout is fixed
and is what the JSON files carry.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .numerics import EXACT, FLOAT_TOL, normalize_scalars


@dataclass(frozen=True)
class BellScenario:
    """Outcome counts ``nA, nB`` and input counts ``nX, nY``."""

    nA: int = 2
    nB: int = 2
    nX: int = 2
    nY: int = 2

    def __post_init__(self):
        if self.nA != 2 or self.nB != 2:
            raise ValueError("only binary outcomes (nA = nB = 2) are supported")
        if self.nX < 2 or self.nY < 2:
            raise ValueError("each party needs at least two inputs")

    @classmethod
    def parse(cls, text: str) -> "BellScenario":
        """Parse ``"nA,nB,nX,nY"``."""
        parts = [int(t) for t in str(text).split(",")]
        if len(parts) != 4:
            raise ValueError(f"scenario must have four entries, got {text!r}")
        return cls(*parts)

    @property
    def n_inputs(self) -> int:
        return self.nX * self.nY

    @property
    def size(self) -> int:
        return self.nX * self.nY * self.nA * self.nB

    def index(self, a: int, b: int, x: int, y: int) -> int:
        return ((x * self.nY + y) * self.nA + a) * self.nB + b

    def input_index(self, x: int, y: int) -> int:
        return x * self.nY + y

    def cells(self):
        """All ``(x, y, a, b)`` tuples in storage order."""
        return itertools.product(range(self.nX), range(self.nY), range(self.nA), range(self.nB))

    def as_dict(self) -> dict:
        return {"nA": self.nA, "nB": self.nB, "nX": self.nX, "nY": self.nY}


CHSH = BellScenario()


def _validated(values, expected_len, tol):
    vals, pol = normalize_scalars(values)
    if len(vals) != expected_len:
        raise ValueError(f"expected {expected_len} entries, got {len(vals)}")
    lo = 0 if pol == EXACT else -tol
    if any(v < lo for v in vals):
        raise ValueError("probability tables must be non-negative")
    return vals, pol


def _check_sum(total, pol, tol, what):
    ok = total == 1 if pol == EXACT else abs(total - 1.0) <= tol
    if not ok:
        raise ValueError(f"{what} sums to {total}, expected 1")


class _Table:
    """Shared behaviour of the immutable probability tables."""

    scenario: BellScenario
    values: tuple
    policy: str

    def __getitem__(self, key):
        return self.values[key]

    def __len__(self):
        return len(self.values)

    def array(self) -> np.ndarray:
        """Values as a numpy array (object dtype under the exact policy)."""
        if self.policy == EXACT:
            return np.array(self.values, dtype=object)
        return np.array(self.values, dtype=float)

    def as_float(self):
        return type(self)(self.scenario, tuple(float(v) for v in self.values))


@dataclass(frozen=True, eq=True)
class ConditionalBehavior(_Table):
    """``p(a, b | x, y)``; each ``(x, y)`` block is normalized."""

    scenario: BellScenario
    values: tuple
    tol: float = field(default=FLOAT_TOL, compare=False, repr=False)
    policy: str = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        vals, pol = _validated(self.values, self.scenario.size, self.tol)
        s = self.scenario
        block = s.nA * s.nB
        for k in range(s.n_inputs):
            _check_sum(sum(vals[k * block:(k + 1) * block]), pol, self.tol, f"block {k}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "policy", pol)

    kind = "conditional"

    def p(self, a, b, x, y):
        return self.values[self.scenario.index(a, b, x, y)]

    @classmethod
    def from_function(cls, scenario: BellScenario, fn) -> "ConditionalBehavior":
        """Build from ``fn(a, b, x, y)``."""
        return cls(scenario, tuple(fn(a, b, x, y) for x, y, a, b in scenario.cells()))


@dataclass(frozen=True, eq=True)
class JointBehavior(_Table):
    """``p(a, b, x, y)`` summing to one overall."""

    scenario: BellScenario
    values: tuple
    tol: float = field(default=FLOAT_TOL, compare=False, repr=False)
    policy: str = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        vals, pol = _validated(self.values, self.scenario.size, self.tol)
        _check_sum(sum(vals), pol, self.tol, "joint behavior")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "policy", pol)

    kind = "joint"

    def p(self, a, b, x, y):
        return self.values[self.scenario.index(a, b, x, y)]

    def input_marginal(self) -> "InputDistribution":
        s = self.scenario
        block = s.nA * s.nB
        return InputDistribution(
            s, tuple(sum(self.values[k * block:(k + 1) * block]) for k in range(s.n_inputs))
        )

    def conditional(self) -> ConditionalBehavior:
        """Condition on the inputs; every ``p(x, y)`` must be positive."""
        s = self.scenario
        block = s.nA * s.nB
        out = []
        for k in range(s.n_inputs):
            chunk = self.values[k * block:(k + 1) * block]
            total = sum(chunk)
            if total == 0:
                raise ZeroDivisionError(f"input pair {divmod(k, s.nY)} has zero probability")
            out.extend(v / total for v in chunk)
        return ConditionalBehavior(s, tuple(out))


@dataclass(frozen=True, eq=True)
class InputDistribution(_Table):
    """``p(x, y)``."""

    scenario: BellScenario
    values: tuple
    tol: float = field(default=FLOAT_TOL, compare=False, repr=False)
    policy: str = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        vals, pol = _validated(self.values, self.scenario.n_inputs, self.tol)
        _check_sum(sum(vals), pol, self.tol, "input distribution")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "policy", pol)

    kind = "input"

    @classmethod
    def uniform(cls, scenario: BellScenario = CHSH) -> "InputDistribution":
        n = scenario.n_inputs
        return cls(scenario, (Fraction(1, n),) * n)


def joint_from_conditional(cond: ConditionalBehavior, inp: InputDistribution) -> JointBehavior:
    """``p(a, b, x, y) = p(a, b | x, y) p(x, y)``.

    Exact and float tables cannot be combined; convert one side first.
    """
    if cond.scenario != inp.scenario:
        raise ValueError("scenario mismatch between conditional behavior and inputs")
    if cond.policy != inp.policy and not (_all_int_like(cond) or _all_int_like(inp)):
        from .numerics import MixedPolicyError

        raise MixedPolicyError("cannot combine exact and float tables; convert explicitly")
    s = cond.scenario
    block = s.nA * s.nB
    vals = tuple(cond.values[i] * inp.values[i // block] for i in range(s.size))
    return JointBehavior(s, vals)


def _all_int_like(table) -> bool:
    return table.policy == EXACT and all(v.denominator == 1 for v in table.values)


def marginals(cond: ConditionalBehavior):
    """Alice's ``p(a | x, y)`` and Bob's ``p(b | x, y)``, flat in ``(x, y, outcome)`` order."""
    s = cond.scenario
    pa, pb = [], []
    for x in range(s.nX):
        for y in range(s.nY):
            pa.extend(sum(cond.p(a, b, x, y) for b in range(s.nB)) for a in range(s.nA))
            pb.extend(sum(cond.p(a, b, x, y) for a in range(s.nA)) for b in range(s.nB))
    return tuple(pa), tuple(pb)


def signaling_deficit(cond: ConditionalBehavior):
    """Largest total-variation shift of each party's marginal under the other's input.

    Returns ``(dA, dB)`` where ``dA`` maximises over ``x, y, y'`` and ``dB``
    over ``y, x, x'``.
    """
    s = cond.scenario
    pa, pb = marginals(cond)
    zero = pa[0] * 0

    def a_row(x, y):
        k = (x * s.nY + y) * s.nA
        return pa[k:k + s.nA]

    def b_row(x, y):
        k = (x * s.nY + y) * s.nB
        return pb[k:k + s.nB]

    def tv(p, q):
        return sum(abs(u - v) for u, v in zip(p, q)) / 2

    dA = max(
        (tv(a_row(x, y), a_row(x, y2)) for x in range(s.nX)
         for y, y2 in itertools.combinations(range(s.nY), 2)),
        default=zero,
    )
    dB = max(
        (tv(b_row(x, y), b_row(x2, y)) for y in range(s.nY)
         for x, x2 in itertools.combinations(range(s.nX), 2)),
        default=zero,
    )
    return dA, dB


def product_behavior(scenario: BellScenario, alice0, bob0) -> ConditionalBehavior:
    """Product table from ``p_A(0 | x, y)`` and ``p_B(0 | x, y)`` (both flat in ``(x, y)``)."""
    def fn(a, b, x, y):
        k = scenario.input_index(x, y)
        pa = alice0[k] if a == 0 else 1 - alice0[k]
        pb = bob0[k] if b == 0 else 1 - bob0[k]
        return pa * pb

    return ConditionalBehavior.from_function(scenario, fn)
