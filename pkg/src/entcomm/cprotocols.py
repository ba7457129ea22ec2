"""Classical broadcast protocols as trees, exhaustive search, and exact optima.

A protocol tree node names a sender and a message function, stored as the
4-bit truth table ``(m(0), m(1), m(2), m(3))`` over the sender's input value.
Leaves carry the common output bit, or ``None`` when outputs are produced by
per-party decoders instead (the two-party model used for ``g``).

Serialized form::

    tree  := leaf | "(" SENDER " " BITS " " tree " " tree ")"
    leaf  := "0" | "1" | "*"

e.g. ``(A 0101 (B 0011 0 1) 1)``. ``*`` is an unlabeled leaf.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Iterable, Sequence, Union

from .functions import PairInput, TripleInput, all_pairs, f, g, hi, lo, promise_f, promise_triples

PARTY_NAMES = "ABC"
MESSAGE_FUNCTIONS: tuple[tuple[int, ...], ...] = tuple(product((0, 1), repeat=4))
# Nonconstant bipartitions of {0,1,2,3} up to swapping the two classes: value 0
# always lands in class 0. Lexicographic in the characteristic vector.
PARTITIONS: tuple[tuple[int, ...], ...] = tuple(m for m in MESSAGE_FUNCTIONS if m[0] == 0 and any(m))


class MalformedTreeError(ValueError):
    pass


@dataclass(frozen=True)
class Leaf:
    label: int | None = None


@dataclass(frozen=True)
class Node:
    sender: str
    message: tuple[int, ...]
    child0: "Tree | None"
    child1: "Tree | None"


Tree = Union[Node, Leaf]


def _height(node: Tree | None) -> int:
    if node is None:
        raise MalformedTreeError("internal node is missing a child")
    if isinstance(node, Leaf):
        return 0
    return 1 + max(_height(node.child0), _height(node.child1))


def _validate(node: Tree | None, parties: int) -> None:
    if node is None:
        raise MalformedTreeError("internal node is missing a child")
    if isinstance(node, Leaf):
        if node.label not in (None, 0, 1):
            raise MalformedTreeError(f"leaf label must be 0, 1 or None, got {node.label!r}")
        return
    if node.sender not in PARTY_NAMES[:parties]:
        raise MalformedTreeError(f"sender {node.sender!r} is not one of {PARTY_NAMES[:parties]}")
    if len(node.message) != 4 or any(b not in (0, 1) for b in node.message):
        raise MalformedTreeError(f"message function must be 4 bits, got {node.message!r}")
    _validate(node.child0, parties)
    _validate(node.child1, parties)


@dataclass(frozen=True)
class ProtocolTree:
    root: Tree
    parties: int = 3
    depth: int | None = None

    def __post_init__(self) -> None:
        if self.parties not in (2, 3):
            raise ValueError(f"party count must be 2 or 3, got {self.parties}")
        _validate(self.root, self.parties)
        height = _height(self.root)
        if self.depth is None:
            object.__setattr__(self, "depth", height)
        elif height > self.depth:
            raise MalformedTreeError(f"tree height {height} exceeds declared depth {self.depth}")

    def __str__(self) -> str:
        return serialize(self.root)


def _root(tree: ProtocolTree | Tree) -> tuple[Tree, int | None]:
    if isinstance(tree, ProtocolTree):
        return tree.root, tree.parties
    return tree, None


def evaluate(tree: ProtocolTree | Tree, inp: Sequence[int]) -> tuple[tuple[tuple[str, int], ...], int | None]:
    """Walk root to leaf on ``inp``; return the transcript and the leaf label."""
    node, parties = _root(tree)
    if parties is not None and len(inp) != parties:
        raise ValueError(f"input has {len(inp)} components but the tree has {parties} parties")
    transcript = []
    while True:
        if node is None:
            raise MalformedTreeError("internal node is missing a child")
        if isinstance(node, Leaf):
            return tuple(transcript), node.label
        bit = node.message[inp[PARTY_NAMES.index(node.sender)]]
        transcript.append((node.sender, bit))
        node = node.child1 if bit else node.child0


def _paths(node: Tree) -> Iterable[tuple[str, ...]]:
    if isinstance(node, Leaf):
        yield ()
        return
    for child in (node.child0, node.child1):
        for rest in _paths(child):
            yield (node.sender,) + rest


def check_label_coverage(tree: ProtocolTree | Tree, parties: int = 3) -> bool:
    """True iff every root-to-leaf path has each party speaking at least once."""
    node, declared = _root(tree)
    needed = set(PARTY_NAMES[: declared or parties])
    return all(needed <= set(path) for path in _paths(node))


def serialize(node: Tree) -> str:
    if isinstance(node, Leaf):
        return "*" if node.label is None else str(node.label)
    bits = "".join(map(str, node.message))
    return f"({node.sender} {bits} {serialize(node.child0)} {serialize(node.child1)})"


_TOKEN = re.compile(r"\(|\)|[ABC]|[01]{4}|[01*]")


def parse_tree(text: str, parties: int = 3, depth: int | None = None) -> ProtocolTree:
    tokens = _TOKEN.findall(text)
    if "".join(tokens) != re.sub(r"\s+", "", text):
        raise MalformedTreeError(f"unexpected characters in {text!r}")
    pos = 0

    def take() -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise MalformedTreeError("unexpected end of tree text")
        pos += 1
        return tokens[pos - 1]

    def parse() -> Tree:
        tok = take()
        if tok in ("0", "1"):
            return Leaf(int(tok))
        if tok == "*":
            return Leaf(None)
        if tok != "(":
            raise MalformedTreeError(f"expected a leaf or '(', got {tok!r}")
        sender, bits = take(), take()
        if sender not in PARTY_NAMES or len(bits) != 4:
            raise MalformedTreeError(f"bad node header {sender!r} {bits!r}")
        node = Node(sender, tuple(map(int, bits)), parse(), parse())
        if take() != ")":
            raise MalformedTreeError("expected ')'")
        return node

    root = parse()
    if pos != len(tokens):
        raise MalformedTreeError("trailing tokens after tree")
    return ProtocolTree(root, parties, depth)


# --- exhaustive feasibility search (common-output model) ---------------------


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: ProtocolTree | None
    explored: int


def feasible(
    target_fn: Callable[[Sequence[int]], int],
    inputs: Iterable[Sequence[int]],
    depth: int,
    parties: int = 3,
) -> FeasibilityResult:
    """Decide whether some depth-``depth`` tree computes ``target_fn`` on ``inputs``.

    A set is solvable at depth d iff the target is constant on it, or d > 0 and
    some sender and some bipartition of that sender's values split it into two
    nonempty parts, each solvable at depth d - 1. Constant messages and splits
    that leave one side empty are skipped: they only burn a level.
    """
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    values = {tuple(inp): target_fn(inp) for inp in inputs}
    if not values:
        raise ValueError("input set must be nonempty")
    senders = [(name, idx) for idx, name in enumerate(PARTY_NAMES[:parties])]
    memo: dict[tuple[tuple[tuple[int, ...], ...], int], Tree | None] = {}

    def solve(points: tuple[tuple[int, ...], ...], d: int) -> Tree | None:
        key = (points, d)
        if key in memo:
            return memo[key]
        labels = {values[pt] for pt in points}
        result: Tree | None = None
        if len(labels) == 1:
            result = Leaf(labels.pop())
        elif d > 0:
            for name, idx in senders:
                for msg in PARTITIONS:
                    part0 = tuple(pt for pt in points if msg[pt[idx]] == 0)
                    part1 = tuple(pt for pt in points if msg[pt[idx]] == 1)
                    if not part0 or not part1:
                        continue
                    sub0 = solve(part0, d - 1)
                    if sub0 is None:
                        continue
                    sub1 = solve(part1, d - 1)
                    if sub1 is not None:
                        result = Node(name, msg, sub0, sub1)
                        break
                if result is not None:
                    break
        memo[key] = result
        return result

    root = solve(tuple(sorted(values)), depth)
    witness = None if root is None else ProtocolTree(root, parties, depth)
    if witness is not None:
        for inp, want in values.items():
            assert evaluate(witness, inp)[1] == want, f"witness wrong on {inp}"
    return FeasibilityResult(root is not None, witness, len(memo))


# --- two-party, two-bit optimum with per-party decoders ----------------------


@dataclass(frozen=True)
class CellOptimum:
    correct: int
    alice: dict[int, int]
    bob: dict[int, int]


@dataclass
class SuccessReport:
    """Exact optimum over all depth-2 two-party trees under uniform inputs.

    ``table`` maps ``(root, child0, child1, |S0|, |S1|)`` to the best success
    among trees of that shape, where S0/S1 are the root sender's message
    classes and child0 is the node reached when the root bit is 0.
    """

    best: Fraction
    tree: ProtocolTree
    decoders: dict[tuple[int, int], CellOptimum]
    table: dict[tuple[str, str, str, int, int], Fraction] = field(default_factory=dict)

    def best_for(self, root: str | None = None, children: str | None = None,
                 sizes: tuple[int, int] | None = None) -> Fraction:
        hits = [
            v for (r, c0, c1, s0, s1), v in self.table.items()
            if (root is None or r == root)
            and (children is None or c0 + c1 == children)
            and (sizes is None or (s0, s1) == tuple(sizes))
        ]
        if not hits:
            raise KeyError(f"no configuration matches root={root} children={children} sizes={sizes}")
        return max(hits)


def _cell_optimum(target: dict[tuple[int, int], int], xs: frozenset, ys: frozenset) -> CellOptimum:
    """Best decoders on one transcript rectangle: both guesses must equal the target."""
    best: CellOptimum | None = None
    xs_sorted, ys_sorted = sorted(xs), sorted(ys)
    for guesses in product((0, 1), repeat=len(xs_sorted)):
        alice = dict(zip(xs_sorted, guesses))
        bob, total = {}, 0
        for y in ys_sorted:
            counts = [sum(1 for x in xs_sorted if alice[x] == target[x, y] == b) for b in (0, 1)]
            bob[y] = 0 if counts[0] >= counts[1] else 1
            total += counts[bob[y]]
        if best is None or total > best.correct:
            best = CellOptimum(total, alice, bob)
    assert best is not None
    return best


def _split(msg: tuple[int, ...], values: frozenset) -> tuple[frozenset, frozenset]:
    return (frozenset(v for v in values if msg[v] == 0), frozenset(v for v in values if msg[v] == 1))


def max_success_two_bit(target_fn: Callable[[PairInput], int] = g) -> SuccessReport:
    """Enumerate every depth-2 two-party tree (2 x 16 x (2 x 16)^2 of them)."""
    target = {(p.x, p.y): target_fn(p) for p in all_pairs()}
    total_inputs = len(target)
    everything = frozenset(range(4))
    cells: dict[tuple[frozenset, frozenset], CellOptimum] = {}

    def cell(xs: frozenset, ys: frozenset) -> CellOptimum:
        if (xs, ys) not in cells:
            cells[xs, ys] = _cell_optimum(target, xs, ys)
        return cells[xs, ys]

    best_count, best_tree, best_cells = -1, None, None
    table: dict[tuple[str, str, str, int, int], Fraction] = {}
    for root in "AB":
        for phi in MESSAGE_FUNCTIONS:
            halves = _split(phi, everything)
            for s0, s1 in product("AB", repeat=2):
                for psi0, psi1 in product(MESSAGE_FUNCTIONS, repeat=2):
                    rects = {}
                    for b1, sender, psi in ((0, s0, psi0), (1, s1, psi1)):
                        xs = halves[b1] if root == "A" else everything
                        ys = halves[b1] if root == "B" else everything
                        for b2, part in enumerate(_split(psi, xs if sender == "A" else ys)):
                            rects[b1, b2] = (part, ys) if sender == "A" else (xs, part)
                    found = {t: cell(*r) for t, r in rects.items()}
                    count = sum(c.correct for c in found.values())
                    key = (root, s0, s1, len(halves[0]), len(halves[1]))
                    value = Fraction(count, total_inputs)
                    if value > table.get(key, Fraction(-1)):
                        table[key] = value
                    if count > best_count:
                        best_count, best_cells = count, found
                        best_tree = ProtocolTree(
                            Node(root, phi,
                                 Node(s0, psi0, Leaf(), Leaf()),
                                 Node(s1, psi1, Leaf(), Leaf())),
                            parties=2, depth=2,
                        )
    assert best_tree is not None and best_cells is not None
    return SuccessReport(Fraction(best_count, total_inputs), best_tree, best_cells, table)


def decoder_success(tree: ProtocolTree, decoders: dict[tuple[int, int], CellOptimum],
                    target_fn: Callable[[PairInput], int] = g) -> Fraction:
    """Replay a decoder-model tree on all 16 pairs and count both-correct runs."""
    hits = 0
    for p in all_pairs():
        transcript, _ = evaluate(tree, p)
        key = tuple(bit for _, bit in transcript)
        dec = decoders[key]
        want = target_fn(p)
        hits += dec.alice.get(p.x) == want and dec.bob.get(p.y) == want
    return Fraction(hits, 16)


def optimal_success(depth: int, target_fn: Callable[[PairInput], int] = g) -> Fraction:
    """Best both-correct probability of any depth-``depth`` two-party protocol.

    Recurses over transcript rectangles instead of enumerating whole trees;
    decoders at different leaves are independent, so subtrees optimize separately.
    """
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    target = {(p.x, p.y): target_fn(p) for p in all_pairs()}

    @lru_cache(maxsize=None)
    def best(xs: frozenset, ys: frozenset, d: int) -> int:
        value = _cell_optimum(target, xs, ys).correct
        if d == 0:
            return value
        for msg in MESSAGE_FUNCTIONS:
            x0, x1 = _split(msg, xs)
            y0, y1 = _split(msg, ys)
            value = max(value,
                        best(x0, ys, d - 1) + best(x1, ys, d - 1),
                        best(xs, y0, d - 1) + best(xs, y1, d - 1))
        return value

    everything = frozenset(range(4))
    return Fraction(best(everything, everything, depth), len(target))


def conditional_bob_bound(partition_class_size: int, target_fn: Callable[[PairInput], int] = g) -> Fraction:
    """Best conditional success of Bob knowing only ``x in S`` and ``y``, over all |S| = size."""
    k = partition_class_size
    if k not in (1, 2, 3):
        raise ValueError(f"class size must be 1, 2 or 3, got {k}")
    best = Fraction(0)
    for subset in combinations(range(4), k):
        for decoder in MESSAGE_FUNCTIONS:
            hits = sum(decoder[y] == target_fn(PairInput(x, y)) for x in subset for y in range(4))
            best = max(best, Fraction(hits, 4 * k))
    return best


# --- concrete classical upper-bound protocols --------------------------------


def four_bit_protocol_f(t: TripleInput) -> tuple[tuple[tuple[str, int], ...], int]:
    """Alice sends x0 and x1, Bob y1 ^ (x0 | y0), Carol x1 ^ Bob's bit ^ z1; all output Carol's bit.

    Under the promise z0 = x0 ^ y0, so x0 | y0 | z0 = x0 | y0.
    """
    t = TripleInput.of(*t)
    if not promise_f(t):
        raise ValueError(f"input {tuple(t)} violates the even-sum promise")
    x0, x1 = lo(t.x), hi(t.x)
    bob = hi(t.y) ^ (x0 | lo(t.y))
    carol = x1 ^ bob ^ hi(t.z)
    return (("A", x0), ("A", x1), ("B", bob), ("C", carol)), carol


@lru_cache(maxsize=None)
def four_bit_protocol_tree() -> ProtocolTree:
    """The same four-bit protocol written out as a depth-4 tree."""

    def bob_node(x0: int, x1: int) -> Node:
        # bit for y: y1 ^ (x0 | y0)
        msg = tuple(hi(y) ^ (x0 | lo(y)) for y in range(4))
        return Node("B", msg, carol_node(x1, 0), carol_node(x1, 1))

    def carol_node(x1: int, bob: int) -> Node:
        msg = tuple(x1 ^ bob ^ hi(z) for z in range(4))
        return Node("C", msg, Leaf(0), Leaf(1))

    def alice_second(x0: int) -> Node:
        return Node("A", (0, 0, 1, 1), bob_node(x0, 0), bob_node(x0, 1))

    return ProtocolTree(Node("A", (0, 1, 0, 1), alice_second(0), alice_second(1)), 3, 4)


def three_bit_protocol_g(p: PairInput) -> tuple[tuple[tuple[str, int], ...], int]:
    """Alice sends x0 then x1; Bob, now knowing x, broadcasts g; both output it."""
    p = PairInput.of(*p)
    value = g(p)
    return (("A", lo(p.x)), ("A", hi(p.x)), ("B", value)), value


def lower_bound_f(max_depth: int = 4) -> dict[int, FeasibilityResult]:
    triples = promise_triples()
    return {d: feasible(f, triples, d, 3) for d in range(max_depth + 1)}
