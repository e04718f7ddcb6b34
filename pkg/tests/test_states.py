import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entbound import states
from entbound.errors import (
    DimensionError,
    NotHermitianError,
    NotPositiveError,
    QdmParseError,
    StateDimensionError,
    TraceError,
)
from entbound.states import Bipartition

from conftest import random_state, random_unitary

P22 = Bipartition(2, 2)


def test_bipartition_rejects_small_dims():
    with pytest.raises(DimensionError):
        Bipartition(1, 4)
    assert Bipartition(3, 2).d_min == 2 and Bipartition(3, 2).d == 6


def test_validate_dimension_mismatch():
    with pytest.raises(StateDimensionError):
        states.validate(np.eye(3) / 3, P22)
    with pytest.raises(StateDimensionError):
        states.validate(np.ones((4, 3)) / 4, P22)


def test_validate_not_hermitian():
    m = np.eye(4) / 4
    m = m.astype(complex)
    m[0, 1] = 0.1
    with pytest.raises(NotHermitianError):
        states.validate(m, P22)


def test_validate_trace():
    with pytest.raises(TraceError):
        states.validate(np.eye(4) / 4 * (1 + 1e-9), P22)


def test_validate_negative_eigenvalue():
    with pytest.raises(NotPositiveError):
        states.validate(np.diag([0.6, 0.6, 0.1, -0.3]), P22)


def test_validated_matrix_is_frozen():
    rho = states.maximally_mixed(P22)
    with pytest.raises(ValueError):
        rho.mat[0, 0] = 1.0


def test_purity_and_linear_entropy_extremes():
    bell = states.bell_state()
    mixed = states.maximally_mixed(P22)
    assert states.purity(bell) == pytest.approx(1.0, abs=1e-15)
    assert states.linear_entropy(bell) == pytest.approx(0.0, abs=1e-14)
    assert states.purity(mixed) == pytest.approx(0.25, abs=1e-15)
    assert states.linear_entropy(mixed) == pytest.approx(1.0, abs=1e-14)


def test_diagonal_purity():
    rho = states.validate(np.diag([0.5, 0.25, 0.125, 0.125]), P22)
    assert states.purity(rho) == pytest.approx(0.34375, abs=1e-15)
    assert states.linear_entropy(rho) == pytest.approx(4 / 3 * 0.65625, rel=1e-14)


def test_bell_partial_transpose_spectrum():
    pt = states.partial_transpose_1(states.bell_state())
    w = np.linalg.eigvalsh(pt)
    np.testing.assert_allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-14)
    assert states.negativity(states.bell_state()) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_maximally_entangled_negativity(d):
    assert states.negativity(states.bell_state(d)) == pytest.approx(1.0, abs=1e-11)


def test_partial_transpose_index_convention():
    part = Bipartition(2, 3)
    m = np.arange(36, dtype=complex).reshape(6, 6)
    pt = states.partial_transpose(m, part)
    for a in range(2):
        for b in range(3):
            for a2 in range(2):
                for b2 in range(3):
                    assert pt[a * 3 + b, a2 * 3 + b2] == m[a2 * 3 + b, a * 3 + b2]


@given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_partial_transpose_involution(d1, d2, seed):
    part = Bipartition(d1, d2)
    m = random_state(part, np.random.default_rng(seed))
    pt = states.partial_transpose(m, part)
    np.testing.assert_allclose(states.partial_transpose(pt, part), m, atol=0)
    assert np.trace(pt).real == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(pt, pt.conj().T, atol=1e-15)


def test_partial_trace_of_product(rng):
    a = random_state(Bipartition(2, 2), rng)[:2, :2]
    a = a / np.trace(a)
    b = random_state(Bipartition(3, 2), rng)[:3, :3]
    b = b / np.trace(b)
    rho = states.validate(np.kron(a, b), Bipartition(2, 3))
    np.testing.assert_allclose(states.partial_trace(rho, 1), a, atol=1e-14)
    np.testing.assert_allclose(states.partial_trace(rho, 2), b, atol=1e-14)
    with pytest.raises(ValueError):
        states.partial_trace(rho, 3)


def test_bell_marginals_are_mixed():
    np.testing.assert_allclose(states.partial_trace(states.bell_state(), 1), np.eye(2) / 2, atol=1e-15)


@pytest.mark.parametrize("p", np.round(np.linspace(0, 1, 11), 10))
def test_werner_negativity(p):
    assert states.negativity(states.werner_state(p)) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-10)


def _schmidt_negativity(psi, d1, d2):
    s = np.linalg.svd(psi.reshape(d1, d2), compute_uv=False)
    return (s.sum() ** 2 - 1.0) / (min(d1, d2) - 1)


@given(st.integers(2, 4), st.integers(2, 5), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_pure_state_negativity_matches_schmidt(d1, d2, seed):
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal(d1 * d2) + 1j * rng.standard_normal(d1 * d2)
    psi /= np.linalg.norm(psi)
    rho = states.pure(psi, Bipartition(d1, d2))
    assert states.negativity(rho) == pytest.approx(_schmidt_negativity(psi, d1, d2), abs=1e-10)


@given(st.integers(2, 3), st.integers(2, 4), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_negativity_local_unitary_invariance(d1, d2, seed):
    rng = np.random.default_rng(seed)
    part = Bipartition(d1, d2)
    m = random_state(part, rng)
    u = np.kron(random_unitary(d1, rng), random_unitary(d2, rng))
    n0 = states.negativity(states.validate(m, part))
    n1 = states.negativity(states.validate(u @ m @ u.conj().T, part))
    assert n1 == pytest.approx(n0, abs=1e-10)
    assert 0.0 <= n0 <= 1.0


@given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_low_purity_states_are_ppt(d1, d2, seed):
    rng = np.random.default_rng(seed)
    part = Bipartition(d1, d2)
    d = part.d
    m = random_state(part, rng)
    # mix toward I/d until Tr rho^2 <= 1/(d - 1)
    p0 = float(np.sum(np.abs(m) ** 2))
    target = 1.0 / (d - 1)
    lam = min(1.0, np.sqrt((target - 1.0 / d) / (p0 - 1.0 / d)))
    rho = states.validate(lam * m + (1 - lam) * np.eye(d) / d, part)
    assert states.purity(rho) <= target + 1e-12
    assert states.negativity(rho) <= 1e-9
    assert states.pt_negative_count(rho) == 0


def test_pt_negative_count_bell():
    assert states.pt_negative_count(states.bell_state(3)) == 3


def test_qdm_round_trip(tmp_path, rng):
    part = Bipartition(2, 3)
    m = random_state(part, rng)
    path = tmp_path / "state.qdm"
    states.write_qdm(path, m, part)
    back, part2 = states.read_qdm(path)
    assert part2 == part
    np.testing.assert_array_equal(back, m)


def test_qdm_format_header():
    text = states.format_qdm(np.eye(4) / 4, P22)
    lines = text.splitlines()
    assert lines[0] == "qdm 1 2 2"
    assert lines[1] == "0.25 0.0"
    assert len(lines) == 17


@pytest.mark.parametrize(
    "text",
    [
        "",
        "qdm 2 2 2\n",
        "qdm 1 two 2\n",
        "qdm 1 2 2\n" + "0 0\n" * 15,
        "qdm 1 2 2\n" + "0 0\n" * 15 + "0\n",
        "qdm 1 2 2\n" + "0 0\n" * 15 + "x 0\n",
        "qdm 1 2 2\n" + "0 0\n" * 15 + "nan 0\n",
        "qdm 1 0 2\n",
    ],
)
def test_qdm_parse_errors(text):
    with pytest.raises(QdmParseError):
        states.parse_qdm(text)


def test_qdm_dimension_one_is_a_dimension_error():
    with pytest.raises(DimensionError):
        states.parse_qdm("qdm 1 1 2\n" + "0.5 0\n" * 4)
