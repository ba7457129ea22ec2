"""Named verification runs behind ``entcomm verify``.

Each claim function returns a :class:`Report` whose ``checks`` decide the verdict.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import cprotocols, functions, qcore, qprotocols

DEFAULT_SEED = 20251015
COS2_PI_8 = math.cos(math.pi / 8) ** 2
TOL = 1e-12


def fmt_prob(p: float) -> str:
    return f"{p:.12f}"


def fmt_frac(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator}"


@dataclass
class Report:
    command: str
    params: dict[str, object] = field(default_factory=dict)
    results: list[tuple[str, str]] = field(default_factory=list)
    checks: list[tuple[str, bool]] = field(default_factory=list)
    duration: float = 0.0

    def add(self, key: str, value: object) -> None:
        self.results.append((key, str(value)))

    def check(self, name: str, ok: bool) -> bool:
        self.checks.append((name, bool(ok)))
        return bool(ok)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def merge(self, other: Report) -> None:
        self.results.extend(other.results)
        self.checks.extend(other.checks)

    def lines(self, style: str = "text") -> list[str]:
        sep = "=" if style == "kv" else ": "
        out = [f"command{sep}{self.command}"]
        out += [f"param.{k}{sep}{v}" for k, v in self.params.items()]
        out += [f"result.{k}{sep}{v}" for k, v in self.results]
        out += [f"check.{k}{sep}{'pass' if ok else 'fail'}" for k, ok in self.checks]
        out.append(f"verdict{sep}{self.verdict}")
        out.append(f"duration_s{sep}{self.duration:.3f}")
        return out


def _timed(fn: Callable[..., Report]) -> Callable[..., Report]:
    def wrapper(*args, **kwargs) -> Report:
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.duration = time.perf_counter() - start
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def verify_lemma1(seed: int = DEFAULT_SEED) -> Report:
    rep = Report("verify lemma1")
    for x0, y0, z0 in ((0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)):
        p = qprotocols.ghz_parity_probability(x0, y0, z0)
        rep.add(f"parity[{x0}{y0}{z0}]", fmt_prob(p))
        rep.check(f"parity[{x0}{y0}{z0}]", abs(p - 1.0) <= TOL)
    h = qcore.hadamard()
    got = qcore.apply_local(qcore.ghz_state(), {1: h, 2: h})
    want = qcore.state_from_kets({"001": 0.5, "010": 0.5, "100": -0.5, "111": 0.5})
    rep.add("ihh_state", " ".join(f"{round(a.real, 12) + 0.0:+.12f}" for a in got.amplitudes))
    rep.check("ihh_golden_state", got.allclose(want, TOL))
    return rep


@_timed
def verify_ghz_protocol(seed: int = DEFAULT_SEED, seeds: int = 100) -> Report:
    rep = Report("verify ghz-protocol", {"seed": seed, "seeds": seeds})
    total = correct = 0
    lengths, agree = set(), True
    for t in functions.promise_triples():
        want = functions.f(t)
        for s in range(seed, seed + seeds):
            run = qprotocols.run_ghz(t, s)
            total += 1
            lengths.add(len(run.transcript))
            same = len(set(run.outputs.values())) == 1
            agree &= same
            correct += same and run.output == want
    rep.add("correct", f"{correct}/{total}")
    rep.add("transcript_lengths", sorted(lengths))
    rep.check("errorless", correct == total == 32 * seeds)
    rep.check("parties_agree", agree)
    rep.check("cost_3_bits", lengths == {qprotocols.GHZ_COST})
    return rep


@_timed
def verify_chsh_exact(seed: int = DEFAULT_SEED, shots: int = 100_000) -> Report:
    rep = Report("verify chsh-exact", {"seed": seed, "shots": shots})
    probs = {}
    for p in functions.all_pairs():
        probs[p] = qprotocols.chsh_success_probability(p)
        rep.add(f"exact[{p.x:02b},{p.y:02b}]", fmt_prob(probs[p]))
    rep.add("cos2_pi_8", fmt_prob(COS2_PI_8))
    rep.check("exact_all_inputs", all(abs(v - COS2_PI_8) <= TOL for v in probs.values()))
    rep.check("uniform", max(probs.values()) - min(probs.values()) <= TOL)
    sigma = math.sqrt(COS2_PI_8 * (1 - COS2_PI_8) / shots)
    rate = qprotocols.estimate_success("chsh", functions.PairInput(0, 0), shots, seed)
    rep.add("monte_carlo[00,00]", fmt_prob(rate))
    rep.add("three_sigma", fmt_prob(3 * sigma))
    rep.check("monte_carlo_within_3sigma", abs(rate - COS2_PI_8) <= 3 * sigma)
    return rep


@_timed
def verify_lower_bound_f(seed: int = DEFAULT_SEED) -> Report:
    rep = Report("verify lower-bound-f")
    triples = functions.promise_triples()
    results = cprotocols.lower_bound_f(4)
    for d, res in results.items():
        rep.add(f"depth{d}", f"{'feasible' if res.feasible else 'infeasible'} memo={res.explored}")
    rep.check("depth<=3_infeasible", not any(results[d].feasible for d in range(4)))
    witness = results[4].witness
    rep.check("depth4_feasible", witness is not None)
    if witness is not None:
        rep.add("witness", witness)
        rep.check("witness_correct", all(cprotocols.evaluate(witness, t)[1] == functions.f(t) for t in triples))
        rep.check("witness_label_coverage", cprotocols.check_label_coverage(witness))
        rep.check("witness_roundtrip", cprotocols.parse_tree(str(witness)) == witness)
    return rep


@_timed
def verify_two_bit_bound_g(seed: int = DEFAULT_SEED) -> Report:
    rep = Report("verify two-bit-bound-g")
    report = cprotocols.max_success_two_bit()
    rep.add("max_success", fmt_frac(report.best))
    rep.add("argmax_tree", report.tree)
    rep.check("max_is_3/4", report.best == Fraction(3, 4))
    rep.check("argmax_replays", cprotocols.decoder_success(report.tree, report.decoders) == report.best)
    rep.check("recursive_optimum_agrees", cprotocols.optimal_success(2) == report.best)
    for k, want in ((1, Fraction(1)), (2, Fraction(3, 4)), (3, Fraction(2, 3))):
        got = cprotocols.conditional_bob_bound(k)
        rep.add(f"bob_bound[{k}]", fmt_frac(got))
        rep.check(f"bob_bound[{k}]", got == want)
    aa = report.best_for("A", "AA")
    bb = report.best_for("A", "BB")
    rep.add("shape_AA", fmt_frac(aa))
    rep.add("shape_BB", fmt_frac(bb))
    rep.check("shape_AA<=1/2", aa <= Fraction(1, 2))
    rep.check("shape_BB=3/4", bb == Fraction(3, 4))
    for sizes in ((1, 3), (2, 2), (3, 1)):
        ab = report.best_for("A", "AB", sizes)
        rep.add(f"shape_AB[{sizes[0]},{sizes[1]}]", fmt_frac(ab))
        rep.check(f"shape_AB[{sizes[0]},{sizes[1]}]=5/8", ab == Fraction(5, 8))
    return rep


@_timed
def verify_table1(seed: int = DEFAULT_SEED) -> Report:
    rep = Report("verify table1")
    mismatches = [p for p in functions.all_pairs() if functions.g(p) != functions.g_table(p)]
    for y in range(4):
        rep.add(f"row[{y:02b}]", "".join(str(functions.g(functions.PairInput(x, y))) for x in range(4)))
    rep.check("all_16_entries", not mismatches)
    return rep


def observed_gip_corrections(n: int) -> set[int]:
    """Brute force: every value of gip XOR f(reduce) over all promise instances of size n."""
    seen = set()
    for inst in functions.gip_instances(n):
        direct = sum(int(a) & int(b) & int(c) for a, b, c in zip(inst.x, inst.y, inst.z)) % 2
        counts = [s.count("0") % 4 for s in (inst.x, inst.y, inst.z)]
        seen.add(direct ^ (sum(counts) % 4) // 2)
    return seen


@_timed
def verify_gip_reduction(seed: int = DEFAULT_SEED, max_n: int = 8) -> Report:
    rep = Report("verify gip-reduction", {"max_n": max_n})
    for n in range(1, max_n + 1):
        oracle = observed_gip_corrections(n)
        rep.add(f"oracle_correction[n={n}]", sorted(oracle))
        rep.check(f"oracle_confirms[n={n}]", oracle == {functions.gip_correction(n)})
        bad = sum(functions.gip(i) != functions.gip_via_f(i) for i in functions.gip_instances(n))
        rep.add(f"instances[n={n}]", 4**n)
        rep.check(f"reduction[n={n}]", bad == 0)
    return rep


NO_SIGNAL_GRID = 32


@_timed
def verify_no_signaling(seed: int = DEFAULT_SEED) -> Report:
    rep = Report("verify no-signaling", {"grid": NO_SIGNAL_GRID})
    worst = 0.0
    for label, state in (("epr", qcore.epr_state()), ("ghz", qcore.ghz_state())):
        rest = range(1, state.qubit_count)
        before = qcore.reduced_density_matrix(state, rest).entries
        for k in range(NO_SIGNAL_GRID):
            theta = 2 * math.pi * k / NO_SIGNAL_GRID
            for gate in (qcore.hadamard(), qcore.rotation(theta)):
                after = qcore.reduced_density_matrix(qcore.apply_gate(state, gate, 0), rest).entries
                worst = max(worst, float(np.abs(after - before).max()))
    rep.add("max_entry_change", f"{worst:.3e}")
    rep.check("unchanged_within_1e-12", worst <= TOL)
    return rep


@_timed
def verify_upper_bounds(seed: int = DEFAULT_SEED) -> Report:
    rep = Report("verify upper-bounds")
    tree = cprotocols.four_bit_protocol_tree()
    ok_f = ok_tree = True
    for t in functions.promise_triples():
        transcript, out = cprotocols.four_bit_protocol_f(t)
        ok_f &= out == functions.f(t) and len(transcript) == 4
        ok_tree &= cprotocols.evaluate(tree, t)[1] == functions.f(t)
    ok_g = True
    for p in functions.all_pairs():
        transcript, out = cprotocols.three_bit_protocol_g(p)
        ok_g &= out == functions.g(p) and len(transcript) == 3
    rep.add("four_bit_tree", tree)
    rep.check("four_bit_f_all_32", ok_f)
    rep.check("four_bit_tree_all_32", ok_tree)
    rep.check("three_bit_g_all_16", ok_g)
    return rep


CLAIMS: dict[str, Callable[..., Report]] = {
    "lemma1": verify_lemma1,
    "ghz-protocol": verify_ghz_protocol,
    "chsh-exact": verify_chsh_exact,
    "lower-bound-f": verify_lower_bound_f,
    "two-bit-bound-g": verify_two_bit_bound_g,
    "table1": verify_table1,
    "gip-reduction": verify_gip_reduction,
    "no-signaling": verify_no_signaling,
    "upper-bounds": verify_upper_bounds,
}


@_timed
def verify_all(seed: int = DEFAULT_SEED) -> Report:
    rep = Report("verify all", {"seed": seed})
    for name, fn in CLAIMS.items():
        sub = fn(seed=seed)
        rep.add(f"{name}.verdict", sub.verdict)
        rep.merge(Report(sub.command,
                         results=[(f"{name}.{k}", v) for k, v in sub.results],
                         checks=[(f"{name}.{k}", ok) for k, ok in sub.checks]))
    # headline separation
    classical_f = min(d for d, r in cprotocols.lower_bound_f(4).items() if r.feasible)
    quantum_f = len(qprotocols.run_ghz(functions.TripleInput(0, 0, 0), seed).transcript)
    quantum_g = min(qprotocols.chsh_success_probability(p) for p in functions.all_pairs())
    classical_g = cprotocols.max_success_two_bit().best
    rep.add("headline.f_bits", f"quantum={quantum_f} classical={classical_f}")
    rep.add("headline.g_two_bit_success", f"quantum={fmt_prob(quantum_g)} classical={fmt_frac(classical_g)}")
    rep.check("headline.f_quantum_3_lt_classical_4", quantum_f == 3 and classical_f == 4)
    rep.check("headline.g_quantum_gt_classical", quantum_g > classical_g == Fraction(3, 4))
    return rep
