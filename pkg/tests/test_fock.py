import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tmq import algebra as A
from tmq import fock


def test_truncation_validation():
    with pytest.raises(ValueError):
        fock.TruncationSpec(n_max=1)
    with pytest.raises(ValueError):
        fock.TruncationSpec(n_max=5, guard=5)
    with pytest.raises(ValueError):
        fock.TruncationSpec(n_max=5, guard=0)
    assert fock.TruncationSpec(n_max=24).dim == 625


def test_basis_ordering(small_trunc):
    # n+ is the major index
    assert small_trunc.index(1, 0) == small_trunc.levels
    assert small_trunc.index(0, 1) == 1


def test_annihilate_one_photon(small_trunc):
    a = fock.ladder("plus", "annihilate", small_trunc)
    out = a.matrix @ fock.basis_state(1, 0, small_trunc).vector
    np.testing.assert_allclose(out, fock.vacuum(small_trunc).vector)


def test_annihilate_vacuum(small_trunc):
    a = fock.ladder("plus", "annihilate", small_trunc)
    assert not np.any(a.matrix @ fock.vacuum(small_trunc).vector)


def test_create_matrix_element(small_trunc):
    ad = fock.ladder("plus", "create", small_trunc)
    assert ad.matrix[small_trunc.index(2, 0), small_trunc.index(1, 0)] == pytest.approx(math.sqrt(2))


def test_create_is_adjoint_of_annihilate(small_trunc):
    for mode in ("plus", "minus"):
        a = fock.ladder(mode, "annihilate", small_trunc)
        np.testing.assert_array_equal(fock.ladder(mode, "create", small_trunc).matrix, a.dag().matrix)


def test_canonical_commutator_on_trusted_subspace(small_trunc):
    a = fock.ladder("plus", "annihilate", small_trunc)
    c = fock.commutator_fock(a, a.dag())
    block = c.restrict()
    np.testing.assert_allclose(block, np.eye(block.shape[0]), atol=1e-12)


def test_distinct_modes_commute(small_trunc):
    ap = fock.ladder("plus", "annihilate", small_trunc)
    am = fock.ladder("minus", "annihilate", small_trunc)
    assert not np.any(fock.commutator_fock(ap, am.dag()).matrix)
    assert not np.any(fock.commutator_fock(ap, am).matrix)


def test_mismatched_truncation_rejected():
    a = fock.ladder("plus", "annihilate", fock.TruncationSpec(6, 2))
    b = fock.ladder("plus", "annihilate", fock.TruncationSpec(7, 2))
    with pytest.raises(ValueError):
        fock.commutator_fock(a, b)
    with pytest.raises(ValueError):
        fock.expectation(fock.vacuum(fock.TruncationSpec(7, 2)), a)


def test_lift_matches_ladder_products(small_trunc):
    ap = fock.ladder("plus", "annihilate", small_trunc)
    am = fock.ladder("minus", "annihilate", small_trunc)
    form = A.ladder_form("plus", "create") * A.ladder_form("minus", "create")
    np.testing.assert_allclose(fock.lift(form, small_trunc).matrix, (ap.dag() @ am.dag()).matrix)


def test_lift_x1_vacuum_power(small_trunc):
    X1 = A.make_quadrature("X1")
    vac = fock.vacuum(small_trunc)
    lx = fock.lift(X1, small_trunc)
    assert fock.expectation(vac, lx.dag() @ lx).real == pytest.approx(0.5, abs=1e-15)


def test_lift_number_on_11(small_trunc):
    s = fock.basis_state(1, 1, small_trunc)
    assert fock.expectation(s, fock.lift(A.number(), small_trunc)).real == pytest.approx(2)


def test_lift_delta21_vacuum(small_trunc):
    assert fock.expectation(fock.vacuum(small_trunc), fock.lift(A.delta(2, 1), small_trunc)).real == \
        pytest.approx(-0.5)


def test_vacuum_expectations(small_trunc):
    vac = fock.vacuum(small_trunc)

    def ev(form):
        return fock.expectation(vac, fock.lift(form, small_trunc))

    assert ev(A.gamma(1, 1)) == pytest.approx(0.5)
    assert abs(ev(A.gamma(1, 2))) < 1e-15
    assert ev(A.casimir()).real == pytest.approx(-0.25, abs=1e-12)


def test_evolve_vacuum_without_pump(small_trunc):
    out = fock.evolve(fock.vacuum(small_trunc), 0, 1.3, 2.0)
    np.testing.assert_allclose(out.vector, fock.vacuum(small_trunc).vector, atol=1e-14)


def _schmidt_number(r):
    # independent oracle: sum_n 2n |sech r tanh^n r|^2 = 2 sinh^2 r
    t = math.tanh(r)
    return sum(2 * n * (t ** n / math.cosh(r)) ** 2 for n in range(400))


def test_evolve_photon_number(trunc):
    out = fock.evolve(fock.vacuum(trunc), 0.3, 0.0, 1.0)
    n = fock.expectation(out, fock.lift(A.number(), trunc)).real
    assert n == pytest.approx(_schmidt_number(0.3), abs=1e-12)
    assert n == pytest.approx(0.18546521824226758, abs=1e-12)


def test_evolve_schmidt_amplitude(trunc):
    out = fock.evolve(fock.vacuum(trunc), 0.3, 0.0, 1.0)
    assert abs(out.amplitude(1, 1)) == pytest.approx(math.tanh(0.3) / math.cosh(0.3), abs=1e-12)
    assert abs(out.amplitude(1, 1)) == pytest.approx(0.27867777, abs=1e-8)


def test_evolve_matches_closed_form_series(trunc):
    # exp(-i H t) with real xi squeezes with z = -xi t
    out = fock.evolve(fock.vacuum(trunc), 0.3, 0.0, 1.0)
    ref = fock.two_mode_squeezed_vacuum(0.3, math.pi, trunc)
    np.testing.assert_allclose(out.vector, ref.vector, atol=1e-12)


def test_squeeze_state_matches_closed_form(trunc):
    for r, phi in ((0.2, 0.0), (0.4, 1.1)):
        out = fock.squeeze_state(fock.vacuum(trunc), r, phi)
        ref = fock.two_mode_squeezed_vacuum(r, phi, trunc)
        mask = trunc.trusted_mask()
        np.testing.assert_allclose(out.vector[mask], ref.vector[mask], atol=1e-12)


def test_squeeze_unitary_zero_gain_is_identity(small_trunc):
    U = fock.squeeze_unitary(0.0, 0.7, small_trunc)
    np.testing.assert_allclose(U.matrix, np.eye(small_trunc.dim), atol=1e-15)


def test_squeeze_unitary_scaling(trunc):
    r = 0.4
    U = fock.squeeze_unitary(r, 0.0, trunc)
    X1 = fock.lift(A.make_quadrature("X1"), trunc)
    lhs = (U.dag() @ X1 @ U).restrict(trunc.n_max - 3)
    np.testing.assert_allclose(lhs, math.exp(r) * X1.restrict(trunc.n_max - 3), atol=1e-6)


def test_squeeze_unitary_unitary_on_trusted_subspace(trunc):
    U = fock.squeeze_unitary(0.4, 0.3, trunc).matrix
    mask = trunc.trusted_mask(trunc.n_max - 3)
    cols = U[:, mask]
    np.testing.assert_allclose(cols.conj().T @ cols, np.eye(mask.sum()), atol=1e-10)


def test_squeezed_vacuum_photon_number(trunc):
    U = fock.squeeze_unitary(0.5, 0.0, trunc)
    vac = fock.vacuum(trunc)
    n = fock.expectation(vac, U.dag() @ fock.lift(A.number(), trunc) @ U).real
    assert n == pytest.approx(2 * math.sinh(0.5) ** 2, abs=1e-9)
    assert n == pytest.approx(0.5430806348, abs=1e-9)


def test_truncation_overflow(small_trunc):
    with pytest.raises(fock.TruncationOverflow) as info:
        fock.squeeze_state(fock.vacuum(small_trunc), 1.5)
    assert info.value.leakage > info.value.tol
    with pytest.raises(fock.TruncationOverflow):
        fock.evolve(fock.vacuum(small_trunc), 1.5, 0.0, 1.0)
    with pytest.raises(fock.TruncationOverflow):
        fock.squeeze_unitary(1.5, 0.0, small_trunc)


def test_rotate_state_phases(small_trunc):
    s = fock.basis_state(2, 1, small_trunc)
    out = fock.rotate_state(s, 0.3)
    assert out.amplitude(2, 1) == pytest.approx(np.exp(-0.9j))


@given(st.floats(0, 0.4), st.floats(0, 2 * math.pi), st.floats(-1, 1), st.floats(0, 1.5))
@settings(max_examples=15, deadline=None)
def test_evolve_preserves_norm_and_number_difference(r, phase, eps, t):
    trunc = fock.TruncationSpec(20, 4)
    v = np.zeros(trunc.dim, dtype=complex)
    v[trunc.index(1, 0)] = 0.6
    v[trunc.index(0, 0)] = 0.8
    start = fock.FockState(v, trunc)
    xi = r * complex(math.cos(phase), math.sin(phase))
    out = fock.evolve(start, xi, eps, t)
    dn = fock.lift(A.number_difference(), trunc)
    assert out.norm == pytest.approx(1, abs=1e-10)
    assert fock.expectation(out, dn).real == pytest.approx(fock.expectation(start, dn).real, abs=1e-8)


@pytest.mark.parametrize("r", [0.1, 0.3, 0.5])
def test_casimir_invariant_under_squeezing(trunc, r):
    C = fock.lift(A.casimir(), trunc)
    for n_plus, n_minus in ((0, 0), (2, 0), (1, 3)):
        s = fock.basis_state(n_plus, n_minus, trunc)
        ref = fock.expectation(s, C).real
        assert ref == pytest.approx(((n_plus - n_minus) ** 2 - 1) / 4)
        assert fock.expectation(fock.squeeze_state(s, r, 0.2), C).real == pytest.approx(ref, abs=1e-6)


def test_schwinger_identity(trunc):
    J = [fock.lift(j, trunc) for j in A.su2_generators()]
    N = A.number()
    lhs = (J[0] @ J[0] + J[1] @ J[1] + J[2] @ J[2]).restrict()
    rhs = fock.lift(N * N / 4 + N / 2, trunc).restrict()
    np.testing.assert_allclose(lhs, rhs, atol=1e-9)
