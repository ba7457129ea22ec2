import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entcomm import qcore
from entcomm.qcore import (
    apply_gate,
    basis_state,
    epr_state,
    ghz_state,
    hadamard,
    measure_distribution,
    reduced_density_matrix,
    rotation,
    sample,
    sample_many,
    state_from_kets,
)

TOL = 1e-12
angles = st.floats(min_value=0.0, max_value=2 * math.pi, exclude_max=True)


def test_basis_state():
    assert np.array_equal(basis_state(1, 0).amplitudes, [1, 0])
    assert np.array_equal(basis_state(2, 3).amplitudes, [0, 0, 0, 1])
    with pytest.raises(ValueError):
        basis_state(3, 8)
    with pytest.raises(ValueError):
        basis_state(5, 0)


def test_ket_order_is_big_endian():
    # |10> is qubit 0 set, index 2
    assert basis_state(2, 2).amplitude("10") == 1


def test_ghz_amplitudes():
    psi = ghz_state()
    assert psi.amplitude("000") == 0.5
    assert psi.amplitude("110") == -0.5
    assert psi.amplitude("011") == -0.5
    assert psi.amplitude("101") == -0.5
    assert psi.amplitude("001") == 0


def test_epr_amplitudes():
    psi = epr_state()
    assert psi.amplitude("00") == pytest.approx(0.70710678118654752, abs=TOL)
    assert psi.amplitude("11") == pytest.approx(-0.70710678118654752, abs=TOL)
    assert psi.amplitude("01") == 0


def test_state_rejects_bad_norm_and_length():
    with pytest.raises(ValueError):
        qcore.StateVector(1, np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        qcore.StateVector(2, np.array([1.0, 0.0]))


def test_state_is_immutable():
    psi = ghz_state()
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 1.0


def test_hadamard_on_zero():
    out = apply_gate(basis_state(1, 0), hadamard(), 0)
    s = 1 / math.sqrt(2)
    assert np.allclose(out.amplitudes, [s, s], atol=TOL, rtol=0)


def test_rotation_values():
    assert np.allclose(rotation(0).matrix, np.eye(2), atol=TOL, rtol=0)
    out = apply_gate(basis_state(1, 0), rotation(math.pi / 2), 0)
    assert np.allclose(out.amplitudes, [0, 1], atol=TOL, rtol=0)
    with pytest.raises(ValueError):
        rotation(float("nan"))
    with pytest.raises(ValueError):
        rotation(float("inf"))


def test_apply_gate_errors():
    with pytest.raises(ValueError):
        apply_gate(ghz_state(), hadamard(), 3)
    with pytest.raises(ValueError):
        apply_gate(ghz_state(), np.array([[1, 1], [0, 1]]), 0)
    with pytest.raises(ValueError):
        qcore.SingleQubitGate(np.array([[2, 0], [0, 1]]))


def test_ihh_on_ghz_matches_golden_state():
    h = hadamard()
    out = apply_gate(apply_gate(ghz_state(), h, 1), h, 2)
    want = state_from_kets({"001": 0.5, "010": 0.5, "100": -0.5, "111": 0.5})
    assert out.allclose(want)


def test_rotated_epr_pair():
    out = apply_gate(apply_gate(epr_state(), rotation(-math.pi / 16), 0), rotation(3 * math.pi / 16), 1)
    c, s = math.cos(math.pi / 8) / math.sqrt(2), math.sin(math.pi / 8) / math.sqrt(2)
    want = state_from_kets({"00": c, "01": s, "10": s, "11": -c})
    assert out.allclose(want)


@settings(max_examples=100, deadline=None)
@given(theta1=angles, theta2=angles)
def test_rotated_epr_closed_form(theta1, theta2):
    out = apply_gate(apply_gate(epr_state(), rotation(theta1), 0), rotation(theta2), 1)
    c = math.cos(theta1 + theta2) / math.sqrt(2)
    s = math.sin(theta1 + theta2) / math.sqrt(2)
    assert np.allclose(out.amplitudes, [c, s, s, -c], atol=TOL, rtol=0)


@settings(max_examples=150, deadline=None)
@given(theta=angles, target=st.integers(0, 2), use_h=st.booleans())
def test_gates_preserve_norm(theta, target, use_h):
    gate = hadamard() if use_h else rotation(theta)
    out = apply_gate(ghz_state(), gate, target)
    assert abs(np.sum(np.abs(out.amplitudes) ** 2) - 1) <= TOL


def test_identity_rotation_leaves_distribution_exactly():
    for psi in (ghz_state(), epr_state(), basis_state(4, 9)):
        for t in range(psi.qubit_count):
            before = measure_distribution(psi).probabilities
            after = measure_distribution(apply_gate(psi, rotation(0), t)).probabilities
            assert before == after


def test_measure_distribution():
    assert measure_distribution(ghz_state()).support() == pytest.approx(
        {"000": 0.25, "011": 0.25, "101": 0.25, "110": 0.25}, abs=TOL
    )
    assert measure_distribution(basis_state(2, 3)).support() == {"11": 1.0}
    assert measure_distribution(epr_state()).support() == pytest.approx({"00": 0.5, "11": 0.5}, abs=TOL)


def test_sample_point_mass():
    dist = measure_distribution(basis_state(2, 3))
    for seed in range(20):
        assert sample(dist, np.random.default_rng(seed)) == "11"


def test_sample_is_reproducible():
    dist = measure_distribution(ghz_state())
    runs = []
    for _ in range(2):
        rng = np.random.default_rng(42)
        runs.append([sample(dist, rng) for _ in range(200)])
    assert runs[0] == runs[1]


def test_sample_many_matches_sequential_draws():
    dist = measure_distribution(apply_gate(epr_state(), rotation(0.3), 0))
    rng = np.random.default_rng(9)
    sequential = [sample(dist, rng) for _ in range(500)]
    assert sample_many(dist, np.random.default_rng(9), 500) == sequential


def test_sample_frequencies_ghz():
    shots = 100_000
    draws = sample_many(measure_distribution(ghz_state()), np.random.default_rng(42), shots)
    sigma = math.sqrt(0.25 * 0.75 / shots)
    for outcome in ("000", "011", "101", "110"):
        assert abs(draws.count(outcome) / shots - 0.25) <= 3 * sigma
    assert set(draws) == {"000", "011", "101", "110"}


def test_reduced_density_matrix_examples():
    rho = reduced_density_matrix(epr_state(), {1}).entries
    assert np.allclose(rho, np.eye(2) / 2, atol=TOL, rtol=0)
    rho = reduced_density_matrix(basis_state(2, 0), {0}).entries
    assert np.allclose(rho, [[1, 0], [0, 0]], atol=TOL, rtol=0)
    with pytest.raises(ValueError):
        reduced_density_matrix(epr_state(), set())
    with pytest.raises(ValueError):
        reduced_density_matrix(epr_state(), {2})


def _brute_partial_trace(psi, keep):
    n = psi.qubit_count
    traced = [q for q in range(n) if q not in keep]
    dim = 2 ** len(keep)
    rho = np.zeros((dim, dim), dtype=complex)
    for i in range(2**n):
        for j in range(2**n):
            bi, bj = format(i, f"0{n}b"), format(j, f"0{n}b")
            if all(bi[q] == bj[q] for q in traced):
                r = int("".join(bi[q] for q in keep), 2)
                c = int("".join(bj[q] for q in keep), 2)
                rho[r, c] += psi.amplitudes[i] * np.conj(psi.amplitudes[j])
    return rho


@pytest.mark.parametrize("keep", [[0], [1], [2], [0, 1], [0, 2], [1, 2], [0, 1, 2]])
def test_reduced_density_matrix_matches_brute_force(keep):
    psi = apply_gate(apply_gate(ghz_state(), rotation(0.7), 0), hadamard(), 2)
    got = reduced_density_matrix(psi, keep).entries
    assert np.allclose(got, _brute_partial_trace(psi, keep), atol=TOL, rtol=0)


@pytest.mark.parametrize("k", range(32))
def test_no_signaling_grid(k):
    theta = 2 * math.pi * k / 32
    for psi in (epr_state(), ghz_state()):
        rest = range(1, psi.qubit_count)
        before = reduced_density_matrix(psi, rest).entries
        for gate in (hadamard(), rotation(theta)):
            after = reduced_density_matrix(apply_gate(psi, gate, 0), rest).entries
            assert np.abs(after - before).max() <= TOL


def test_density_matrix_invariants():
    with pytest.raises(ValueError):
        qcore.DensityMatrix(np.array([[1, 1], [0, 0]]))
    with pytest.raises(ValueError):
        qcore.DensityMatrix(np.array([[2, 0], [0, -1]]))
