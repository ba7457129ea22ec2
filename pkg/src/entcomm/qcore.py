"""Small exact state-vector simulator (up to four qubits).

Basis ordering follows ket notation: the leftmost symbol of ``|q0 q1 ... >``
is qubit 0 and carries weight ``2**(n-1)`` in the basis index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

TOL = 1e-12
MAX_QUBITS = 4


@dataclass(frozen=True, eq=False)
class StateVector:
    qubit_count: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.qubit_count <= MAX_QUBITS:
            raise ValueError(f"qubit_count must be in 1..{MAX_QUBITS}, got {self.qubit_count}")
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != 2**self.qubit_count:
            raise ValueError(
                f"expected {2**self.qubit_count} amplitudes, got {amps.size}"
            )
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > TOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def amplitude(self, bits: str) -> complex:
        """Amplitude of the basis ket written as a bit string, e.g. ``"011"``."""
        if len(bits) != self.qubit_count:
            raise ValueError(f"basis string {bits!r} has wrong length")
        return complex(self.amplitudes[int(bits, 2)])

    def allclose(self, other: StateVector, atol: float = TOL) -> bool:
        return self.qubit_count == other.qubit_count and bool(
            np.allclose(self.amplitudes, other.amplitudes, rtol=0.0, atol=atol)
        )


@dataclass(frozen=True, eq=False)
class SingleQubitGate:
    matrix: np.ndarray
    name: str = "U"

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"gate matrix must be 2x2, got shape {m.shape}")
        if not np.allclose(m @ m.conj().T, np.eye(2), rtol=0.0, atol=TOL):
            raise ValueError(f"gate {self.name!r} is not unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities over basis strings, stored in lexicographic order."""

    probabilities: Mapping[str, float]

    def __post_init__(self) -> None:
        probs = dict(sorted(self.probabilities.items()))
        if not probs:
            raise ValueError("empty distribution")
        for key, p in probs.items():
            if not -TOL <= p <= 1.0 + TOL:
                raise ValueError(f"probability of {key!r} out of range: {p!r}")
        if abs(sum(probs.values()) - 1.0) > TOL:
            raise ValueError("probabilities do not sum to 1")
        object.__setattr__(self, "probabilities", probs)

    def __getitem__(self, key: str) -> float:
        return self.probabilities.get(key, 0.0)

    def support(self, atol: float = TOL) -> dict[str, float]:
        return {k: p for k, p in self.probabilities.items() if p > atol}


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self) -> None:
        rho = np.array(self.entries, dtype=np.complex128)
        dim = rho.shape[0]
        if rho.shape != (dim, dim) or dim < 2 or dim & (dim - 1):
            raise ValueError(f"bad density matrix shape {rho.shape}")
        if not np.allclose(rho, rho.conj().T, rtol=0.0, atol=TOL):
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > TOL:
            raise ValueError("density matrix trace is not 1")
        if np.linalg.eigvalsh(rho).min() < -1e-9:
            raise ValueError("density matrix is not positive semidefinite")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]


def _bits(index: int, n: int) -> str:
    return format(index, f"0{n}b")


def basis_state(qubit_count: int, index: int) -> StateVector:
    if not 0 <= index < 2**qubit_count:
        raise ValueError(f"index {index} out of range for {qubit_count} qubits")
    amps = np.zeros(2**qubit_count, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(qubit_count, amps)


def state_from_kets(terms: Mapping[str, complex]) -> StateVector:
    """Build a state from ``{"011": amp, ...}``; all keys must share one length."""
    lengths = {len(k) for k in terms}
    if len(lengths) != 1:
        raise ValueError("ket labels must all have the same length")
    (n,) = lengths
    amps = np.zeros(2**n, dtype=np.complex128)
    for ket, amp in terms.items():
        amps[int(ket, 2)] = amp
    return StateVector(n, amps)


def ghz_state() -> StateVector:
    """The three-qubit state 1/2 (|000> - |011> - |101> - |110>)."""
    return state_from_kets({"000": 0.5, "011": -0.5, "101": -0.5, "110": -0.5})


def epr_state() -> StateVector:
    """The two-qubit state (|00> - |11>)/sqrt(2)."""
    s = 1.0 / math.sqrt(2.0)
    return state_from_kets({"00": s, "11": -s})


def hadamard() -> SingleQubitGate:
    s = 1.0 / math.sqrt(2.0)
    return SingleQubitGate(np.array([[s, s], [s, -s]]), name="H")


def rotation(theta: float) -> SingleQubitGate:
    """Real rotation [[cos t, -sin t], [sin t, cos t]]."""
    if not math.isfinite(theta):
        raise ValueError(f"rotation angle must be finite, got {theta!r}")
    c, s = math.cos(theta), math.sin(theta)
    return SingleQubitGate(np.array([[c, -s], [s, c]]), name=f"R({theta!r})")


def identity() -> SingleQubitGate:
    return SingleQubitGate(np.eye(2), name="I")


def apply_gate(state: StateVector, gate: SingleQubitGate, target: int) -> StateVector:
    n = state.qubit_count
    if not 0 <= target < n:
        raise ValueError(f"target qubit {target} out of range for {n} qubits")
    if not isinstance(gate, SingleQubitGate):
        # route raw matrices through the unitarity check
        gate = SingleQubitGate(gate)
    psi = state.amplitudes.reshape((2,) * n)
    psi = np.tensordot(gate.matrix, psi, axes=([1], [target]))
    psi = np.moveaxis(psi, 0, target)
    return StateVector(n, psi.reshape(-1))


def apply_local(state: StateVector, gates: Mapping[int, SingleQubitGate]) -> StateVector:
    """Apply one gate per listed qubit; qubits not listed are left alone."""
    for target, gate in sorted(gates.items()):
        state = apply_gate(state, gate, target)
    return state


def measure_distribution(state: StateVector) -> OutcomeDistribution:
    n = state.qubit_count
    probs = np.abs(state.amplitudes) ** 2
    return OutcomeDistribution({_bits(i, n): float(p) for i, p in enumerate(probs)})


def _cdf(distribution: OutcomeDistribution) -> tuple[list[str], np.ndarray]:
    keys = list(distribution.probabilities)
    cdf = np.cumsum([distribution.probabilities[k] for k in keys])
    cdf[-1] = 1.0
    return keys, cdf


def sample(distribution: OutcomeDistribution, rng: np.random.Generator) -> str:
    """Draw one basis string by inverse CDF over lexicographically sorted outcomes."""
    keys, cdf = _cdf(distribution)
    return keys[int(np.searchsorted(cdf, rng.random(), side="right"))]


def sample_many(
    distribution: OutcomeDistribution, rng: np.random.Generator, shots: int
) -> list[str]:
    """Same stream consumption and results as ``shots`` calls to :func:`sample`."""
    keys, cdf = _cdf(distribution)
    idx = np.searchsorted(cdf, rng.random(shots), side="right")
    return [keys[i] for i in idx]


def reduced_density_matrix(state: StateVector, keep: Iterable[int]) -> DensityMatrix:
    """Partial trace over every qubit not in ``keep``.

    Kept qubits retain their relative order in the returned matrix.
    """
    n = state.qubit_count
    kept = sorted(set(keep))
    if not kept:
        raise ValueError("keep set must be nonempty")
    if kept[0] < 0 or kept[-1] >= n:
        raise ValueError(f"keep indices {kept} out of range for {n} qubits")
    traced = [q for q in range(n) if q not in kept]
    psi = state.amplitudes.reshape((2,) * n).transpose(kept + traced)
    psi = psi.reshape(2 ** len(kept), 2 ** len(traced))
    return DensityMatrix(psi @ psi.conj().T)
