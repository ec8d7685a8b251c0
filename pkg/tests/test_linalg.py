import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_density, random_unitary
from qinfo.errors import DimensionMismatchError, InvalidStateError, NotHermitianError
from qinfo.linalg import (
    dagger,
    eig_hermitian,
    is_unitary,
    partial_trace,
    qubit_rotation,
    shannon_entropy,
    tensor,
    von_neumann_entropy,
)


def test_tensor_identity_and_index_order():
    assert np.allclose(tensor(np.eye(2), np.eye(2)), np.eye(4))
    out = tensor(np.diag([1, 0]), np.diag([0, 1]))
    assert np.allclose(out, np.diag([0, 1, 0, 0]))
    # |i>|j> at i * db + j
    e = np.eye(3)
    v = tensor(np.eye(2)[1], e[2])
    assert np.argmax(np.abs(v)) == 1 * 3 + 2


def test_tensor_needs_factor():
    with pytest.raises(ValueError):
        tensor()


def test_partial_trace_of_product(rng):
    a = random_density(2, rng)
    b = random_density(3, rng)
    ab = tensor(a, b)
    assert np.allclose(partial_trace(ab, (2, 3), [0]), a, atol=1e-12)
    assert np.allclose(partial_trace(ab, (2, 3), [1]), b, atol=1e-12)
    assert np.isclose(partial_trace(ab, (2, 3), []).item(), 1.0)


def test_partial_trace_three_parties(rng):
    a, b, c = (random_density(d, rng) for d in (2, 3, 2))
    abc = tensor(a, b, c)
    assert np.allclose(partial_trace(abc, (2, 3, 2), [0, 2]), tensor(a, c), atol=1e-12)
    assert np.allclose(partial_trace(abc, (2, 3, 2), [2, 0]), tensor(a, c), atol=1e-12)


def test_partial_trace_bad_dims():
    with pytest.raises(DimensionMismatchError):
        partial_trace(np.eye(4), (2, 3), [0])
    with pytest.raises(DimensionMismatchError):
        partial_trace(np.eye(4), (2, 2), [5])


def test_eig_reconstruction_and_unitarity(rng):
    for _ in range(20):
        z = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        m = (z + dagger(z)) / 2
        m /= np.max(np.abs(m))
        w, v = eig_hermitian(m)
        assert np.all(np.diff(w) >= 0)
        assert np.max(np.abs(m - v @ np.diag(w) @ dagger(v))) <= 1e-10
        assert np.max(np.abs(dagger(v) @ v - np.eye(5))) <= 1e-10


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


def test_shannon_entropy_values():
    assert shannon_entropy([0.5, 0.5]) == pytest.approx(1.0)
    assert shannon_entropy([1.0, 0.0]) == 0.0
    assert shannon_entropy([0.25] * 4) == pytest.approx(2.0)
    assert shannon_entropy([1 - 1e-15, 1e-15]) == pytest.approx(0.0, abs=1e-12)


def test_von_neumann_entropy_examples():
    assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0, abs=1e-12)
    assert von_neumann_entropy(np.diag([1, 0])) == pytest.approx(0.0, abs=1e-12)
    assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0, abs=1e-12)


def test_von_neumann_entropy_validates():
    with pytest.raises(InvalidStateError):
        von_neumann_entropy(np.diag([0.7, 0.7]))
    with pytest.raises(InvalidStateError):
        von_neumann_entropy(np.diag([1.5, -0.5]))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_entropy_unitary_invariance(dim, seed):
    rng = np.random.default_rng(seed)
    rho = random_density(dim, rng)
    u = random_unitary(dim, rng)
    assert abs(von_neumann_entropy(u @ rho @ dagger(u)) - von_neumann_entropy(rho)) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_entropy_bounds(dim, seed):
    rho = random_density(dim, np.random.default_rng(seed))
    s = von_neumann_entropy(rho)
    assert -1e-12 <= s <= np.log2(dim) + 1e-12


@given(st.floats(-10, 10, allow_nan=False))
def test_qubit_rotation_is_unitary(angle):
    u = qubit_rotation(angle)
    assert is_unitary(u)
    assert np.allclose(qubit_rotation(-angle), dagger(u))


def test_qubit_rotation_quarter_turn():
    u = qubit_rotation(np.pi)
    assert np.allclose(u, [[0, 1], [-1, 0]])


def test_rejects_non_finite_entries():
    with pytest.raises(ValueError):
        partial_trace(np.array([[np.nan, 0], [0, 1]]), (2,), [0])
