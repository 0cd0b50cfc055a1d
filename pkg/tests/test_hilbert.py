import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import phases, unit_states
from tribeam.errors import BasisMismatchError, ContractViolation, DegenerateInputError
from tribeam.hilbert import (
    FOCK_MODES,
    LinearOperator,
    StateVector,
    completeness_deviation,
    expectation,
    inner_product,
    ket,
    ray_projector,
)
from tribeam.measurement import P_L, P_M, P_P, coherent_projector


def test_basis_kets_orthonormal():
    for x in "abh":
        for y in "abh":
            assert inner_product(ket(x), ket(y)) == (1.0 if x == y else 0.0)


def test_paper_state_inner_products(psi):
    assert inner_product(psi, psi) == pytest.approx(1.0, abs=1e-15)
    assert inner_product(ket("h"), psi) == pytest.approx(1 / math.sqrt(2), abs=1e-15)


def test_inner_product_basis_mismatch():
    with pytest.raises(BasisMismatchError):
        inner_product(ket("a"), ket("a", FOCK_MODES))


@given(unit_states(), unit_states())
def test_inner_product_conjugate_symmetric(u, v):
    assert inner_product(u, v) == pytest.approx(inner_product(v, u).conjugate(), abs=1e-14)


def test_ray_projector_on_basis_ket():
    p = ray_projector(ket("a"))
    assert p.trace() == 1.0
    assert p.is_projector()
    assert p.allclose(ray_projector(ket("a"), normalize=True))


def test_ray_projector_unit_vector_flag_irrelevant():
    assert ray_projector(ket("h")).allclose(ray_projector(ket("h"), normalize=True))


@given(phases, phases)
def test_unnormalized_two_beam_ray(t1, t2):
    v = StateVector.from_dict({"a": np.exp(1j * t1), "b": np.exp(1j * t2)})
    p = ray_projector(v)
    # oracle: explicit 3x3 outer product and product written out by hand
    m = np.zeros((3, 3), dtype=complex)
    amps = [np.exp(1j * t1), np.exp(1j * t2), 0.0]
    for i in range(3):
        for j in range(3):
            m[i, j] = amps[i] * np.conj(amps[j])
    sq = np.array([[sum(m[i, k] * m[k, j] for k in range(3)) for j in range(3)] for i in range(3)])
    assert np.allclose(p.matrix, m, atol=1e-15)
    assert p.trace() == pytest.approx(2.0, abs=1e-12)
    assert np.allclose(sq, 2 * m, atol=1e-12)
    assert p.is_ray_weight()
    assert not p.is_projector()


def test_ray_projector_zero_vector():
    with pytest.raises(DegenerateInputError):
        ray_projector(StateVector.from_dict({}))


@given(unit_states())
def test_normalized_ray_idempotent(v):
    p = ray_projector(v, normalize=True)
    assert np.allclose(p.matrix @ p.matrix, p.matrix, rtol=0, atol=1e-12)
    assert abs(p.trace() - 1.0) <= 1e-12
    assert p.is_hermitian()


def test_expectation_paper_values(psi):
    assert expectation(P_L, psi) == pytest.approx(0.25, abs=1e-15)
    assert expectation(coherent_projector(0.0), psi) == pytest.approx(1.0, abs=1e-15)
    # |1/2 - 1/2|^2
    assert expectation(coherent_projector(math.pi), psi) == pytest.approx(0.0, abs=1e-15)


def test_expectation_rejects_non_hermitian(psi):
    op = LinearOperator(psi.labels, [[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    with pytest.raises(ContractViolation):
        expectation(op, psi)


@given(unit_states(), phases, unit_states(), unit_states())
def test_expectation_linear_and_phase_invariant(s, theta, u, v):
    a, b = ray_projector(u), ray_projector(v, normalize=True)
    lhs = expectation(a * 0.3 + b * 1.7, s)
    assert lhs == pytest.approx(0.3 * expectation(a, s) + 1.7 * expectation(b, s), abs=1e-12)
    rotated = np.exp(1j * theta) * s
    assert abs(expectation(a, rotated) - expectation(a, s)) <= 1e-12


def test_completeness_of_region_projectors():
    assert completeness_deviation([P_L, P_M, P_P]) <= 1e-12
    assert completeness_deviation([P_L + P_M, P_P]) <= 1e-12
    assert completeness_deviation([coherent_projector(0.0), P_P]) > 0


def _eigen_deviation(ops):
    # oracle: Frobenius norm from the spectrum of the Hermitian residual
    resid = sum(op.matrix for op in ops) - np.eye(3)
    return math.sqrt(sum(ev**2 for ev in np.linalg.eigvalsh(resid)))


def test_incomplete_threshold_eigen_oracle():
    grid = 2 * np.pi * np.arange(64) / 64
    devs = [_eigen_deviation([coherent_projector(p), P_P]) for p in grid]
    # the a-b block of P_k - I has eigenvalues +1 and -1 for every phase
    assert min(devs) == pytest.approx(math.sqrt(2), abs=1e-12)
    for p, d in zip(grid, devs):
        assert completeness_deviation([coherent_projector(p), P_P]) == pytest.approx(d, abs=1e-12)
        assert d > 0.4


def test_completeness_restricts_to_beam_modes():
    vac = LinearOperator.identity(FOCK_MODES) * 2.0
    full = LinearOperator(FOCK_MODES, np.diag([7.0, 1.0, 1.0, 1.0]))
    assert completeness_deviation([full]) == 0.0
    assert completeness_deviation([vac]) == pytest.approx(math.sqrt(3))


@given(st.lists(unit_states(), min_size=1, max_size=3))
def test_states_immutable(states):
    for s in states:
        with pytest.raises(ValueError):
            s.amplitudes[0] = 0
