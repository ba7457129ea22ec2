"""Entanglement-assisted protocols: three-party GHZ for ``f``, two-party CHSH for ``g``."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import qcore
from .functions import PairInput, TripleInput, f, g, hi, lo

PARTIES = ("A", "B", "C")
GHZ_COST = 3
CHSH_COST = 2
CHSH_ANGLE_LOW = -math.pi / 16
CHSH_ANGLE_HIGH = 3 * math.pi / 16

Transcript = tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class RunResult:
    transcript: Transcript
    outputs: dict[str, int]
    measured_bits: dict[str, int]

    @property
    def output(self) -> int:
        values = set(self.outputs.values())
        if len(values) != 1:
            raise AssertionError(f"parties disagree: {self.outputs}")
        return values.pop()


def as_rng(randomness: np.random.Generator | int | None) -> np.random.Generator:
    if isinstance(randomness, np.random.Generator):
        return randomness
    return np.random.default_rng(randomness)


def _require_promise(t: TripleInput) -> TripleInput:
    t = TripleInput.of(*t)
    if (t.x + t.y + t.z) % 2:
        raise ValueError(f"input {tuple(t)} violates the even-sum promise")
    return t


def _ghz_measured_state(low_bits: Sequence[int]) -> qcore.StateVector:
    h = qcore.hadamard()
    return qcore.apply_local(
        qcore.ghz_state(), {q: h for q, bit in enumerate(low_bits) if bit}
    )


def ghz_distribution(t: TripleInput) -> qcore.OutcomeDistribution:
    """Joint outcome distribution after each party's conditional Hadamard."""
    t = _require_promise(t)
    return qcore.measure_distribution(_ghz_measured_state([lo(v) for v in t]))


def _finish_ghz(t: TripleInput, outcome: str) -> RunResult:
    measured = dict(zip(PARTIES, map(int, outcome)))
    transcript = tuple((p, hi(v) ^ measured[p]) for p, v in zip(PARTIES, t))
    total = 0
    for _, bit in transcript:
        total ^= bit
    # each party XORs the same three broadcast bits
    return RunResult(transcript, {p: total for p in PARTIES}, measured)


def run_ghz(t: TripleInput, randomness: np.random.Generator | int | None) -> RunResult:
    t = _require_promise(t)
    outcome = qcore.sample(ghz_distribution(t), as_rng(randomness))
    return _finish_ghz(t, outcome)


def ghz_parity_probability(x0: int, y0: int, z0: int) -> float:
    """Exact probability that a XOR b XOR c equals x0 OR y0 OR z0."""
    if any(b not in (0, 1) for b in (x0, y0, z0)):
        raise ValueError("low bits must be 0 or 1")
    if x0 ^ y0 ^ z0:
        raise ValueError(f"low bits {x0}{y0}{z0} violate the even-parity promise")
    dist = qcore.measure_distribution(_ghz_measured_state((x0, y0, z0)))
    target = x0 | y0 | z0
    return sum(p for bits, p in dist.probabilities.items() if bits.count("1") % 2 == target)


def chsh_angle(low_bit: int) -> float:
    return CHSH_ANGLE_LOW if low_bit == 0 else CHSH_ANGLE_HIGH


def chsh_state(p: PairInput) -> qcore.StateVector:
    p = PairInput.of(*p)
    return qcore.apply_local(
        qcore.epr_state(),
        {0: qcore.rotation(chsh_angle(lo(p.x))), 1: qcore.rotation(chsh_angle(lo(p.y)))},
    )


def chsh_distribution(p: PairInput) -> qcore.OutcomeDistribution:
    return qcore.measure_distribution(chsh_state(p))


def _finish_chsh(p: PairInput, outcome: str) -> RunResult:
    a, b = map(int, outcome)
    transcript = (("A", a ^ hi(p.x)), ("B", b ^ hi(p.y)))
    value = transcript[0][1] ^ transcript[1][1]
    return RunResult(transcript, {"A": value, "B": value}, {"A": a, "B": b})


def run_chsh(p: PairInput, randomness: np.random.Generator | int | None) -> RunResult:
    p = PairInput.of(*p)
    outcome = qcore.sample(chsh_distribution(p), as_rng(randomness))
    return _finish_chsh(p, outcome)


def chsh_success_probability(p: PairInput) -> float:
    """Exact probability that a XOR b equals x0 AND y0, i.e. both parties output g."""
    p = PairInput.of(*p)
    target = lo(p.x) & lo(p.y)
    dist = chsh_distribution(p)
    return sum(prob for bits, prob in dist.probabilities.items() if int(bits[0]) ^ int(bits[1]) == target)


def estimate_success(protocol: str, inp, shots: int, seed: np.random.Generator | int | None) -> float:
    """Monte-Carlo success rate.

    Draws the same stream as ``shots`` sequential ``run_*`` calls sharing one
    generator, but samples the fixed per-input distribution in one batch.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if protocol == "ghz":
        inp = _require_promise(inp)
        dist, finish, target = ghz_distribution(inp), _finish_ghz, f(inp)
    elif protocol == "chsh":
        inp = PairInput.of(*inp)
        dist, finish, target = chsh_distribution(inp), _finish_chsh, g(inp)
    else:
        raise ValueError(f"unknown protocol {protocol!r}; expected 'ghz' or 'chsh'")
    counts = Counter(qcore.sample_many(dist, as_rng(seed), shots))
    correct = sum(n for outcome, n in counts.items() if finish(inp, outcome).output == target)
    return correct / shots
