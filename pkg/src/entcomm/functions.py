"""The target functions and their promises.

Two-bit inputs are integers 0..3 read as ``v1 v0`` (high bit, low bit).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, NamedTuple

GIP_MAX_BITS = 16

# Rows indexed by y, columns by x, both in order 00, 01, 10, 11.
TABLE_G = (
    (0, 0, 1, 1),
    (0, 1, 1, 0),
    (1, 1, 0, 0),
    (1, 0, 0, 1),
)


def _check_two_bit(name: str, v: int) -> None:
    if not (isinstance(v, int) and 0 <= v <= 3):
        raise ValueError(f"{name} must be an integer in 0..3, got {v!r}")


def hi(v: int) -> int:
    return (v >> 1) & 1


def lo(v: int) -> int:
    return v & 1


class TripleInput(NamedTuple):
    x: int
    y: int
    z: int

    @classmethod
    def of(cls, x: int, y: int, z: int) -> TripleInput:
        for name, v in zip("xyz", (x, y, z)):
            _check_two_bit(name, v)
        return cls(x, y, z)


class PairInput(NamedTuple):
    x: int
    y: int

    @classmethod
    def of(cls, x: int, y: int) -> PairInput:
        _check_two_bit("x", x)
        _check_two_bit("y", y)
        return cls(x, y)


def promise_f(t: TripleInput) -> bool:
    even_sum = (t.x + t.y + t.z) % 2 == 0
    assert even_sum == (lo(t.x) ^ lo(t.y) ^ lo(t.z) == 0)
    return even_sum


def promise_triples() -> list[TripleInput]:
    """The 32 triples satisfying the parity promise, in lexicographic order."""
    return [TripleInput(*t) for t in product(range(4), repeat=3) if sum(t) % 2 == 0]


def all_pairs() -> list[PairInput]:
    return [PairInput(x, y) for x, y in product(range(4), repeat=2)]


def f_mod4(t: TripleInput) -> int:
    return ((t.x + t.y + t.z) % 4) // 2


def f_bits(t: TripleInput) -> int:
    return hi(t.x) ^ hi(t.y) ^ hi(t.z) ^ (lo(t.x) | lo(t.y) | lo(t.z))


def f(t: TripleInput) -> int:
    t = TripleInput.of(*t)
    if not promise_f(t):
        raise ValueError(f"f is undefined off the promise: {tuple(t)} has odd sum")
    value = f_mod4(t)
    if value != f_bits(t):
        raise AssertionError(f"mod-4 and bitwise forms of f disagree at {tuple(t)}")
    return value


def g(p: PairInput) -> int:
    x, y = PairInput.of(*p)
    return hi(x) ^ hi(y) ^ (lo(x) & lo(y))


def g_table(p: PairInput) -> int:
    return TABLE_G[p.y][p.x]


@dataclass(frozen=True)
class GipInstance:
    """Three n-bit strings, most significant position first."""

    n: int
    x: str
    y: str
    z: str

    def __post_init__(self) -> None:
        if not 1 <= self.n <= GIP_MAX_BITS:
            raise ValueError(f"n must be in 1..{GIP_MAX_BITS}, got {self.n}")
        for name in "xyz":
            s = getattr(self, name)
            if len(s) != self.n or set(s) - {"0", "1"}:
                raise ValueError(f"{name}={s!r} is not a {self.n}-bit string")


def promise_gip(inst: GipInstance) -> bool:
    return all(int(a) ^ int(b) ^ int(c) == 1 for a, b, c in zip(inst.x, inst.y, inst.z))


def _require_gip_promise(inst: GipInstance) -> None:
    if not promise_gip(inst):
        raise ValueError(f"bitwise XOR of {inst.x}, {inst.y}, {inst.z} is not all ones")


def gip(inst: GipInstance) -> int:
    _require_gip_promise(inst)
    acc = 0
    for a, b, c in zip(inst.x, inst.y, inst.z):
        acc ^= int(a) & int(b) & int(c)
    return acc


def gip_reduce(inst: GipInstance) -> TripleInput:
    """Zero counts of each string, mod 4. The result always has an even sum."""
    _require_gip_promise(inst)
    t = TripleInput(*(s.count("0") % 4 for s in (inst.x, inst.y, inst.z)))
    assert promise_f(t)
    return t


def gip_correction(n: int) -> int:
    """Bit to XOR onto ``f(gip_reduce(inst))`` to recover ``gip(inst)``."""
    return n % 2


def gip_via_f(inst: GipInstance) -> int:
    return f(gip_reduce(inst)) ^ gip_correction(inst.n)


# Each position of a promise instance is one of these (x_i, y_i, z_i) columns.
ODD_COLUMNS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))


def gip_instances(n: int) -> Iterator[GipInstance]:
    """All 4**n instances meeting the all-ones XOR promise."""
    for cols in product(ODD_COLUMNS, repeat=n):
        x, y, z = ("".join(str(c[k]) for c in cols) for k in range(3))
        yield GipInstance(n, x, y, z)
