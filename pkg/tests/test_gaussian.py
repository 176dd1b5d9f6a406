import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_state, seeds
from gaussclone.gaussian import (
    GaussianState,
    apply,
    beam_splitter,
    coherent_state,
    concentrate,
    concentration_network,
    displacement,
    distribute,
    identity,
    overlap_with_coherent,
    partial_trace,
    rotation,
    squeezer,
    symplectic_form,
    vacuum,
)


def test_coherent_state_vacuum():
    s = coherent_state([0])
    assert np.array_equal(s.mean, [0, 0])
    assert np.array_equal(s.cov, np.diag([0.25, 0.25]))


def test_coherent_state_amplitude_and_product():
    assert np.array_equal(coherent_state([1 + 0j]).mean, [1, 0])
    s = coherent_state([1 + 0j, 1 + 0j])
    assert s.n_modes == 2
    assert np.array_equal(s.mean, [1, 0, 1, 0])
    assert np.array_equal(s.cov, 0.25 * np.eye(4))


def test_coherent_state_rejects_empty():
    with pytest.raises(ValueError):
        coherent_state([])


def test_covariance_symmetrized_on_construction():
    s = GaussianState([0, 0], [[0.25, 0.1], [0.1 + 1e-9, 0.25]])
    assert np.array_equal(s.cov, s.cov.T)


def test_beam_splitter_identity_at_full_transmission():
    assert np.array_equal(beam_splitter(1.0, 0, 1, 2).matrix, np.eye(4))


def test_balanced_split():
    s = apply(beam_splitter(0.5, 0, 1, 2), coherent_state([math.sqrt(2), 0]))
    assert np.allclose(s.mean, [1, 0, -1, 0], atol=1e-15)
    assert np.allclose(s.cov, 0.25 * np.eye(4), atol=1e-15)


def test_epsilon_split_amplitudes():
    # |sqrt(N) alpha> on mode 0 mixed with vacuum on mode 1 at transmittance eps
    N, alpha, eps = 3, 0.4 - 0.2j, 0.3
    s = apply(beam_splitter(eps, 0, 1, 2), coherent_state([math.sqrt(N) * alpha, 0]))
    a0 = math.sqrt(eps * N) * alpha
    a1 = -math.sqrt((1 - eps) * N) * alpha
    assert np.allclose(s.mean, [a0.real, a0.imag, a1.real, a1.imag], atol=1e-15)


@pytest.mark.parametrize("t,i,j", [(-0.1, 0, 1), (1.5, 0, 1), (0.5, 1, 1)])
def test_beam_splitter_errors(t, i, j):
    with pytest.raises(ValueError):
        beam_splitter(t, i, j, 2)


def test_squeezer():
    assert np.array_equal(squeezer(0.0, 0, 1).matrix, np.eye(2))
    s = apply(squeezer(math.log(2) / 2, 0, 1), vacuum(1))
    assert np.allclose(s.cov, np.diag([0.5, 0.125]), atol=1e-15)
    roundtrip = squeezer(-0.7, 0, 1) @ squeezer(0.7, 0, 1)
    assert np.allclose(roundtrip.matrix, np.eye(2), atol=1e-15)


def test_apply_identity_and_displacement():
    s = coherent_state([0.3 - 1j, 2])
    assert apply(identity(2), s).allclose(s, atol=0)
    d = apply(displacement((1.5, 0.0), 0, 1), vacuum(1))
    assert d.allclose(coherent_state([1.5]), atol=0)


def test_apply_dimension_mismatch():
    with pytest.raises(ValueError):
        apply(identity(2), vacuum(1))


def test_composition_matches_sequential(rng):
    s = random_state(rng, 3)
    a, b = squeezer(0.4, 1, 3), beam_splitter(0.3, 1, 2, 3)
    assert apply(b @ a, s).allclose(apply(b, apply(a, s)))


def test_concentrate_single_copy_unchanged():
    s = coherent_state([0.2 + 0.5j])
    assert concentrate(s).allclose(s, atol=0)


def test_concentrate_four_copies():
    s = concentrate(coherent_state([1] * 4))
    assert np.allclose(s.mean, [2, 0, 0, 0, 0, 0, 0, 0], atol=1e-14)
    assert np.allclose(s.cov, 0.25 * np.eye(8), atol=1e-15)


@pytest.mark.parametrize("N", [2, 3, 5])
def test_concentrate_matches_stepwise_arithmetic(N):
    # oracle: fold the accumulator amplitude by hand, one two-mode step at a time
    alpha = 0.3 + 0.7j
    amps = [alpha] * N
    for k in range(1, N):
        t = k / (k + 1)
        a, b = amps[0], amps[k]
        amps[0] = math.sqrt(t) * a + math.sqrt(1 - t) * b
        amps[k] = -math.sqrt(1 - t) * a + math.sqrt(t) * b
    s = concentrate(coherent_state([alpha] * N))
    want = np.array([[z.real, z.imag] for z in amps]).reshape(-1)
    assert np.allclose(s.mean, want, atol=1e-14)
    assert np.allclose(s.mean[:2], [math.sqrt(N) * alpha.real, math.sqrt(N) * alpha.imag], atol=1e-14)


def test_distribute_single_part_unchanged():
    s = coherent_state([2])
    assert distribute(s, 0, 1).allclose(s, atol=0)


def test_distribute_four_parts():
    s = distribute(coherent_state([2]), 0, 4)
    assert s.n_modes == 4
    assert np.allclose(s.mean, [1, 0] * 4, atol=1e-14)


def test_distribute_splits_excess_noise():
    s = distribute(GaussianState([0, 0], np.diag([0.75, 0.25])), 0, 2)
    # oracle: balanced BS written out by hand acting on (x0, x1) with x1 vacuum
    c = math.sqrt(0.5)
    bs = np.array([[c, -c], [c, c]])
    x_cov = bs @ np.diag([0.75, 0.25]) @ bs.T
    for k in (0, 1):
        reduced = partial_trace(s, [k])
        assert np.allclose(reduced.cov, np.diag([0.5, 0.25]), atol=1e-15)
        assert math.isclose(reduced.cov[0, 0], x_cov[k, k], abs_tol=1e-15)


def test_partial_trace():
    s = coherent_state([1, 2j])
    assert partial_trace(s, [0, 1]).allclose(s, atol=0)
    assert partial_trace(s, [1]).allclose(coherent_state([2j]), atol=0)
    cov = 0.25 * np.eye(4)
    cov[0, 2] = cov[2, 0] = 0.1
    corr = GaussianState(np.zeros(4), cov + 0.2 * np.eye(4))
    assert np.array_equal(partial_trace(corr, [0]).cov, corr.cov[:2, :2])
    with pytest.raises(ValueError):
        partial_trace(s, [])


def test_overlap_examples():
    assert math.isclose(overlap_with_coherent(vacuum(1), 0), 1.0, abs_tol=1e-15)
    alpha = 0.8 - 0.6j
    assert math.isclose(
        overlap_with_coherent(coherent_state([alpha]), 0), math.exp(-abs(alpha) ** 2), rel_tol=1e-14
    )
    noisy = GaussianState([alpha.real, alpha.imag], np.diag([0.5, 0.5]))
    assert math.isclose(overlap_with_coherent(noisy, alpha), 2 / 3, abs_tol=1e-15)


def test_overlap_is_one_only_for_the_coherent_state():
    alpha = 1.2 + 0.1j
    assert math.isclose(overlap_with_coherent(coherent_state([alpha]), alpha), 1.0, abs_tol=1e-15)
    assert overlap_with_coherent(apply(squeezer(0.1, 0, 1), coherent_state([alpha])), alpha) < 1
    assert overlap_with_coherent(coherent_state([alpha + 0.01]), alpha) < 1


def test_overlap_rejects_multimode():
    with pytest.raises(ValueError):
        overlap_with_coherent(vacuum(2), 0)


def test_squeezed_overlap_matches_closed_form_matrix_element():
    # |<alpha|S(r)|beta>|^2 for real alpha, beta via the closed form
    for alpha, beta, r in [(0.7, -0.3, 0.4), (1.1, 0.9, -0.6), (0.0, 0.5, 1.2)]:
        amp = math.exp(
            -(alpha**2 + beta**2) / 2 + alpha * beta / math.cosh(r) + (alpha**2 - beta**2) / 2 * math.tanh(r)
        ) / math.sqrt(math.cosh(r))
        s = apply(squeezer(r, 0, 1), coherent_state([beta]))
        assert math.isclose(overlap_with_coherent(s, alpha), amp**2, rel_tol=1e-12)


def test_vacuum_satisfies_uncertainty_bound():
    assert np.allclose(vacuum(3).symplectic_eigenvalues(), 0.25)
    assert not GaussianState([0, 0], np.diag([0.1, 0.25])).is_physical()


# properties -------------------------------------------------------------------


ops = st.one_of(
    st.builds(lambda t: beam_splitter(t, 0, 2, 3), st.floats(0, 1)),
    st.builds(lambda t: beam_splitter(t, 2, 1, 3), st.floats(0, 1)),
    st.builds(lambda r: squeezer(r, 1, 3), st.floats(-3, 3)),
    st.builds(lambda th: rotation(th, 0, 3), st.floats(-7, 7)),
)


@given(ops)
def test_every_op_is_symplectic(op):
    assert op.symplectic_error() < 1e-12


@given(st.lists(ops, min_size=1, max_size=6), seeds)
@settings(max_examples=50)
def test_op_then_inverse_restores_state(chain, seed):
    s = random_state(np.random.default_rng(seed), 3)
    op = chain[0]
    for nxt in chain[1:]:
        op = nxt @ op
    assert op.is_symplectic(1e-10)
    back = apply(op.inverse(), apply(op, s))
    assert back.allclose(s, atol=1e-9 * max(1.0, np.abs(op.matrix).max() ** 2))


@given(st.integers(1, 7), seeds)
@settings(max_examples=30)
def test_concentrate_inverts_distribute(M, seed):
    s = random_state(np.random.default_rng(seed), M)
    back = concentrate(distribute(s, 0, M, targets=range(1, M)))
    assert back.allclose(s, atol=1e-12)
    assert concentration_network(range(M), M).symplectic_error() < 1e-12


@given(st.floats(-math.pi, math.pi), st.complex_numbers(max_magnitude=3), seeds)
@settings(max_examples=50)
def test_overlap_rotation_invariance(theta, alpha, seed):
    s = random_state(np.random.default_rng(seed), 1)
    rotated = apply(rotation(theta, 0, 1), s)
    rotated_alpha = alpha * complex(math.cos(theta), -math.sin(theta))
    assert math.isclose(
        overlap_with_coherent(rotated, rotated_alpha), overlap_with_coherent(s, alpha), rel_tol=1e-10, abs_tol=1e-14
    )


@given(st.lists(ops, min_size=1, max_size=5), st.lists(st.complex_numbers(max_magnitude=2), min_size=3, max_size=3))
@settings(max_examples=50)
def test_pure_propagation_preserves_purity(chain, alphas):
    s = coherent_state(alphas)
    for op in chain:
        s = apply(op, s)
    assert math.isclose(np.linalg.det(s.cov), (1 / 16) ** 3, rel_tol=1e-9)
    assert np.allclose(s.symplectic_eigenvalues(), 0.25, atol=1e-9)


@given(st.floats(-1.5, 1.5), st.floats(-7, 7), st.complex_numbers(max_magnitude=3))
def test_single_mode_purity_preserved(r, theta, alpha):
    s = apply(rotation(theta, 0, 1) @ squeezer(r, 0, 1), coherent_state([alpha]))
    assert abs(np.linalg.det(s.cov) - 1 / 16) < 1e-12


def test_symplectic_form_convention():
    omega = symplectic_form(1)
    assert np.array_equal(omega, [[0, 1], [-1, 0]])
