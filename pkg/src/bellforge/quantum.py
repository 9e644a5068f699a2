"""Two-qubit states, qubit observables and the correlations they produce."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .behaviors import CHSH, ConditionalBehavior

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """Pure state with amplitudes in the ``|00>, |01>, |10>, |11>`` basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(4)
        norm = float(np.sum(np.abs(amp) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def maximally_entangled(cls) -> "TwoQubitState":
        return cls(np.array([1, 0, 0, 1]) / math.sqrt(2))

    @classmethod
    def tilted(cls, theta: float) -> "TwoQubitState":
        """``cos(theta/2)|00> - sin(theta/2)|11>``."""
        return cls(np.array([math.cos(theta / 2), 0, 0, -math.sin(theta / 2)]))

    def expectation(self, op: np.ndarray) -> float:
        psi = self.amplitudes
        return float(np.real(np.vdot(psi, op @ psi)))


@dataclass(frozen=True, eq=False)
class QubitObservable:
    """2x2 Hermitian observable."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex).reshape(2, 2)
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValueError("observable is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if np.linalg.norm(self.bloch) > 1 + 1e-9:
            raise ValueError("Bloch vector longer than one")

    @classmethod
    def from_bloch(cls, vec) -> "QubitObservable":
        x, y, z = vec
        return cls(x * SX + y * SY + z * SZ)

    @property
    def bloch(self) -> np.ndarray:
        return np.array([np.real(np.trace(self.matrix @ s)) / 2 for s in PAULI])

    @property
    def identity_part(self) -> float:
        return float(np.real(np.trace(self.matrix)) / 2)

    def projector(self, outcome: int) -> np.ndarray:
        """``(I + (-1)^outcome O) / 2``; only valid for +-1 observables."""
        return (I2 + (-1) ** outcome * self.matrix) / 2

    def __sub__(self, other):
        return self.matrix - other.matrix


def operator_norm_diff(o1: QubitObservable, o2: QubitObservable) -> float:
    """Largest absolute eigenvalue of ``o1 - o2`` (closed form for 2x2 Hermitian)."""
    d = np.asarray(o1 - o2)
    if np.max(np.abs(d - d.conj().T)) > HERMITIAN_TOL:
        raise ValueError("difference is not Hermitian")
    a, c = np.real(d[0, 0]), np.real(d[1, 1])
    mean = (a + c) / 2
    rad = math.sqrt(((a - c) / 2) ** 2 + abs(d[0, 1]) ** 2)
    return max(abs(mean + rad), abs(mean - rad))


@dataclass(frozen=True, eq=False)
class TwoQubitStrategy:
    """State plus Alice's observables per ``x`` and Bob's per ``y`` or per ``(y, x)``.

    ``bob`` is either a list indexed by ``y`` or, under leakage, a list of
    pairs ``bob[y][x]``.
    """

    state: TwoQubitState
    alice: tuple
    bob: tuple
    kappa: float = 0.0
    leaky: bool = field(default=False)

    def __post_init__(self):
        if self.leaky:
            for y, pair in enumerate(self.bob):
                gap = operator_norm_diff(pair[0], pair[1])
                if gap > 2 * self.kappa + 1e-12:
                    raise ValueError(
                        f"||B_{y},0 - B_{y},1|| = {gap:.6g} exceeds 2*kappa = {2 * self.kappa:.6g}"
                    )

    def bob_obs(self, y: int, x: int) -> QubitObservable:
        return self.bob[y][x] if self.leaky else self.bob[y]


def behavior_of(strategy: TwoQubitStrategy) -> ConditionalBehavior:
    """``p(a, b | x, y) = <psi| P^a_x (x) P^b_{y[,x]} |psi>``."""
    for obs in _all_observables(strategy):
        if abs(np.linalg.norm(obs.bloch) - 1) > 1e-9 or abs(obs.identity_part) > 1e-9:
            raise ValueError("behavior_of needs +-1 valued (unit Bloch) observables")
    scen = CHSH
    vals = []
    for x, y, a, b in scen.cells():
        op = np.kron(strategy.alice[x].projector(a), strategy.bob_obs(y, x).projector(b))
        vals.append(strategy.state.expectation(op))
    return ConditionalBehavior(scen, tuple(vals))


def _all_observables(strategy):
    yield from strategy.alice
    if strategy.leaky:
        for pair in strategy.bob:
            yield from pair
    else:
        yield from strategy.bob


def correlator(cond: ConditionalBehavior, x: int, y: int):
    return sum((-1) ** (a + b) * cond.p(a, b, x, y) for a, b in itertools.product(range(2), repeat=2))


def alice_mean(cond: ConditionalBehavior, x: int, y: int = 0):
    """``<A_x>`` read off the ``(x, y)`` block."""
    return sum((-1) ** a * cond.p(a, b, x, y) for a, b in itertools.product(range(2), repeat=2))


# ---------------------------------------------------------------------------
# strategies from the constructions
# ---------------------------------------------------------------------------


def _check_unit_interval(name, v):
    if not (0 <= v < 1):
        raise ValueError(f"{name} must lie in [0, 1), got {v}")


def tilted_hardy_angle(eps) -> float:
    _check_unit_interval("eps", eps)
    return math.asin(3 - math.sqrt(4 * float(eps) + 5))


def tilted_hardy_strategy(eps) -> TwoQubitStrategy:
    """Partially entangled strategy whose Bob observables equal Alice's.

    The state angle is ``theta = arcsin(3 - sqrt(4 eps + 5))``.
    """
    theta = tilted_hardy_angle(eps)
    s = math.sin(theta)
    root = math.sqrt(1 + s)
    a0 = QubitObservable.from_bloch((
        -math.sqrt(2) * s * math.sqrt(s) / ((2 - s) * root),
        0.0,
        -(2 + s) * math.sqrt(1 - s) / ((2 - s) * root),
    ))
    a1 = QubitObservable.from_bloch((math.sqrt(2) * math.sqrt(s) / root, 0.0, -math.sqrt(1 - s) / root))
    return TwoQubitStrategy(TwoQubitState.tilted(theta), (a0, a1), (a0, a1))


def tilted_hardy_value(eps) -> float:
    """Closed form of ``p(00|00) + eps p(11|00)`` for the tilted strategy."""
    _check_unit_interval("eps", eps)
    e = float(eps)
    r = math.sqrt(4 * e + 5)
    return ((4 * e + 5) * r - (12 * e + 11)) / (2 * (1 + e))


KAPPA_BREAK = 1 / math.sqrt(2)


def chsh_leak_strategy(kappa) -> TwoQubitStrategy:
    """Maximally entangled strategy optimal for CHSH when Bob may learn ``x``.

    Below ``1/sqrt(2)`` Bob's pairs differ by exactly ``2 kappa`` in operator
    norm; above it the fixed ``sigma_z / sigma_x`` assignment is used.
    """
    k = float(kappa)
    _check_unit_interval("kappa", k)
    a = (QubitObservable(SZ), QubitObservable(SX))
    if k <= KAPPA_BREAK:
        c = math.sqrt(1 - k * k)
        r2 = math.sqrt(2)
        b00 = QubitObservable.from_bloch(((-k + c) / r2, 0.0, (k + c) / r2))
        b01 = QubitObservable.from_bloch(((k + c) / r2, 0.0, (-k + c) / r2))
        b10 = QubitObservable.from_bloch(((k - c) / r2, 0.0, (k + c) / r2))
        b11 = QubitObservable.from_bloch(((-k - c) / r2, 0.0, (-k + c) / r2))
    else:
        b00, b01 = QubitObservable(SZ), QubitObservable(SX)
        b10, b11 = QubitObservable(SZ), QubitObservable(-SX)
    return TwoQubitStrategy(
        TwoQubitState.maximally_entangled(), a, ((b00, b01), (b10, b11)), kappa=k, leaky=True
    )


def chsh_leak_value(cond: ConditionalBehavior):
    """``<A0 B0,0> + <A0 B1,0> + <A1 B0,1> - <A1 B1,1>`` from a (2,2;2,2) table."""
    if cond.scenario != CHSH:
        raise ValueError("CHSH needs the (2,2;2,2) scenario")
    return correlator(cond, 0, 0) + correlator(cond, 0, 1) + correlator(cond, 1, 0) - correlator(cond, 1, 1)
