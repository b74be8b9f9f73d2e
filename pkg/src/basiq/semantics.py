"""State-vector reading of the calculus: qubits, Bell states, measurement.

This is a model check that runs beside the kernel, not part of it.  When
the two disagree the disagreement is reported and left alone.

Basis order is ``|q0 q1 ... q(n-1)>`` with qubit 0 as the most significant
bit, so for two qubits the amplitudes are ``(00, 01, 10, 11)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import List, NamedTuple, Tuple, Union

import numpy as np

from .formulas import Sequent
from .kernel import B, CheckReport, check_derivation
from . import fixtures

NORM_TOL = 1e-9
PROB_TOL = 1e-12
SQRT1_2 = 1 / np.sqrt(2)

NOT = np.array([[0, 1], [1, 0]], dtype=complex)
KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)

Seed = Union[int, np.random.Generator]


class NotNormalizedError(ValueError):
    pass


@dataclass(frozen=True)
class Amplitudes:
    """``a|0> + b|1>``."""

    a: complex
    b: complex

    def __post_init__(self):
        total = abs(self.a) ** 2 + abs(self.b) ** 2
        if abs(total - 1) > NORM_TOL:
            raise NotNormalizedError(f"|a|^2 + |b|^2 = {total}, expected 1")


@dataclass(frozen=True, eq=False)
class QState:
    n: int
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if self.n < 1 or amps.shape != (2**self.n,):
            raise ValueError(f"{self.n}-qubit state needs {2 ** max(self.n, 0)} amplitudes, got {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > NORM_TOL:
            raise NotNormalizedError(f"state norm is {norm}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    def __repr__(self):
        return f"QState(n={self.n}, amps={np.round(self.amps, 6).tolist()})"

    def tensor(self, other: "QState") -> "QState":
        return QState(self.n + other.n, np.kron(self.amps, other.amps))


def equal_up_to_phase(s: QState, t: QState, tol: float = NORM_TOL) -> bool:
    if s.n != t.n:
        return False
    # |<s|t>| = 1 exactly when the states differ by a unit scalar
    return abs(abs(np.vdot(s.amps, t.amps)) - 1) <= tol


class AtomAssertions(NamedTuple):
    asserted: np.ndarray  # |- A       ->  b|1>
    asserted_perp: np.ndarray  # |- A^   ->  a NOT|1> = a|0>
    negated_assertion: np.ndarray  # (|- A)^  ->  NOT(b|1>) = b|0>


def interpret_atom_assertions(amps: Amplitudes) -> AtomAssertions:
    """Unnormalized vector terms for the atomic assertions of a qubit."""
    asserted = amps.b * KET1
    return AtomAssertions(asserted, amps.a * (NOT @ KET1), NOT @ asserted)


def qubit_state(amps: Amplitudes) -> QState:
    """``a|0> + b|1>``: the two assertion terms summed into one qubit."""
    terms = interpret_atom_assertions(amps)
    return QState(1, terms.asserted_perp + terms.asserted)


class BellKind(enum.Enum):
    PHI_PLUS = "PhiPlus"
    PHI_MINUS = "PhiMinus"
    PSI_PLUS = "PsiPlus"
    PSI_MINUS = "PsiMinus"


def bell_state(kind: Union[BellKind, str]) -> QState:
    kind = BellKind(kind)
    k00, k01 = np.kron(KET0, KET0), np.kron(KET0, KET1)
    k10, k11 = np.kron(KET1, KET0), np.kron(KET1, KET1)
    sign = -1 if kind in (BellKind.PHI_MINUS, BellKind.PSI_MINUS) else 1
    if kind in (BellKind.PHI_PLUS, BellKind.PHI_MINUS):
        v = SQRT1_2 * (k00 + sign * k11)
    else:
        v = SQRT1_2 * (k01 + sign * k10)
    return QState(2, v)


def _bit_mask(n: int, qubit: int) -> np.ndarray:
    idx = np.arange(2**n)
    return ((idx >> (n - 1 - qubit)) & 1).astype(bool)


def outcome_probabilities(s: QState, qubit: int) -> Tuple[float, float]:
    if not 0 <= qubit < s.n:
        raise IndexError(f"qubit {qubit} out of range for a {s.n}-qubit state")
    weights = np.abs(s.amps) ** 2
    ones = _bit_mask(s.n, qubit)
    p0, p1 = float(weights[~ones].sum()), float(weights[ones].sum())
    total = p0 + p1
    return p0 / total, p1 / total


class MeasurementRecord(NamedTuple):
    qubit_index: int
    outcome: int
    probability: float
    post_state: QState


def _rng(seed: Seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def project(s: QState, qubit: int, outcome: int) -> QState:
    ones = _bit_mask(s.n, qubit)
    keep = ones if outcome else ~ones
    v = np.where(keep, s.amps, 0)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError(f"outcome {outcome} on qubit {qubit} has probability zero")
    return QState(s.n, v / norm)


def measure(s: QState, qubit_index: int, rng_seed: Seed = 0) -> MeasurementRecord:
    """Projective measurement of one qubit in the computational basis."""
    p0, p1 = outcome_probabilities(s, qubit_index)
    # a zero-weight branch is never drawn, even at u == 0
    outcome = 0 if p0 > 0 and _rng(rng_seed).random() < p0 else 1
    prob = p0 if outcome == 0 else p1
    return MeasurementRecord(qubit_index, outcome, prob, project(s, qubit_index, outcome))


def coefficient_determinant(s: QState) -> complex:
    """``amp(00) amp(11) - amp(01) amp(10)``; zero exactly for product states."""
    if s.n != 2:
        raise ValueError(f"separability test is for 2 qubits, got {s.n}")
    a00, a01, a10, a11 = s.amps
    return complex(a00 * a11 - a01 * a10)


def is_separable_2q(s: QState) -> bool:
    return abs(coefficient_determinant(s)) <= NORM_TOL


class Branch(enum.Enum):
    A = "A"
    PERP_A = "PerpA"


@dataclass(frozen=True)
class CutCrosscheck:
    branch: Branch
    conclusion: Sequent
    check: CheckReport
    probability: float  # |b|^2 or |a|^2
    born_probability: float  # same value, from the measurement machinery

    @property
    def measure_zero(self) -> bool:
        return self.probability == 0

    @property
    def agrees(self) -> bool:
        return self.check.ok and abs(self.probability - self.born_probability) <= PROB_TOL


def cut_measurement_crosscheck(amps: Amplitudes, branch: Union[Branch, str]) -> CutCrosscheck:
    """Check the cut that reads off one outcome of the qubit and attach the
    probability of that outcome."""
    branch = Branch(branch)
    name = "cut_measurement" if branch is Branch.A else "cut_measurement_perp"
    d = fixtures.load(name)
    report = check_derivation(d, B)
    if branch is Branch.A:
        prob = abs(amps.b) ** 2
        born = outcome_probabilities(qubit_state(amps), 0)[1]
    else:
        prob = abs(amps.a) ** 2
        born = outcome_probabilities(qubit_state(amps), 0)[0]
    return CutCrosscheck(branch, d.conclusion, report, float(prob), born)


def epr_trials(kind: Union[BellKind, str], trials: int, seed: int) -> List[Tuple[int, int]]:
    """(Alice, Bob) outcomes: measure qubit A, then qubit B of the collapsed state.
    Trial ``t`` draws from its own generator seeded with ``seed + t``."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    state = bell_state(kind)
    out = []
    for t in range(trials):
        rng = np.random.default_rng(seed + t)
        alice = measure(state, 0, rng)
        bob = measure(alice.post_state, 1, rng)
        out.append((alice.outcome, bob.outcome))
    return out


def epr_correlation(kind: Union[BellKind, str], trials: int, seed: int) -> float:
    pairs = epr_trials(kind, trials, seed)
    return sum(a == b for a, b in pairs) / len(pairs)
