import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tmq import algebra as A
from tmq import fock, gaussian as G

angles = st.floats(0, 2 * math.pi)
small_gains = st.floats(0, 1.0)


def tmsv(r, phi=0.0):
    return G.apply_squeeze(G.vacuum(), r, phi)


def test_vacuum():
    v = G.vacuum()
    np.testing.assert_array_equal(v.cov, 0.5 * np.eye(4))
    np.testing.assert_array_equal(v.mean, np.zeros(4))
    np.testing.assert_allclose(G.covariance_V(v).matrix, np.eye(2))
    assert G.quadrature_powers(v) == pytest.approx((0.5, 0.5, 0.0))


def test_squeezed_quadrature_powers():
    g11, g22, g12 = G.quadrature_powers(tmsv(0.3))
    assert g11 == pytest.approx(0.5 * math.exp(0.6), abs=1e-14)
    assert g22 == pytest.approx(0.5 * math.exp(-0.6), abs=1e-14)
    assert g11 == pytest.approx(0.91105940, abs=1e-8)
    assert g22 == pytest.approx(0.27440582, abs=1e-8)
    assert abs(g12) < 1e-15


def test_zero_gain_is_identity():
    s = G.apply_displacement(G.vacuum(), 0.3 + 0.1j, -0.2j)
    out = G.apply_squeeze(s, 0.0, 1.2)
    np.testing.assert_allclose(out.cov, s.cov)
    np.testing.assert_allclose(out.mean, s.mean)


def test_epr_variance_after_squeeze():
    s = tmsv(0.4)
    b = np.array([1, 0, -1, 0.0])
    assert b @ s.cov @ b == pytest.approx(math.exp(-0.8), abs=1e-14)
    assert b @ s.cov @ b == pytest.approx(0.44932896, abs=1e-8)


def test_full_rotation_is_identity():
    s = tmsv(0.3, 0.4)
    np.testing.assert_allclose(G.apply_rotation(s, 2 * math.pi).cov, s.cov, atol=1e-14)


@given(angles)
def test_vacuum_rotation_invariant(theta):
    np.testing.assert_allclose(G.apply_rotation(G.vacuum(), theta).cov, G.vacuum().cov, atol=1e-15)


def test_rotation_moves_k1_into_k2():
    s = tmsv(0.3)
    k1, k2, _ = G.su11_expectations(s)
    k1r, k2r, _ = G.su11_expectations(G.apply_rotation(s, math.pi / 4))
    assert abs(k1r) < 1e-14
    assert abs(k2r) == pytest.approx(k1, abs=1e-14)
    assert abs(k2) < 1e-15


def test_pure_squeezed_product():
    for r in (0.1, 0.7, 1.5):
        g11, g22, _ = G.quadrature_powers(tmsv(r))
        assert g11 * g22 == pytest.approx(0.25, abs=1e-12)


@given(small_gains, angles, angles)
def test_coherence_from_shifted_axis(r, phi, theta):
    s = tmsv(r, phi)
    g12 = G.quadrature_powers(s, theta)[2]
    g11, g22, _ = G.quadrature_powers(s, theta - math.pi / 4)
    assert g12 == pytest.approx(0.5 * (g22 - g11), abs=1e-12 * math.cosh(2 * r))


def test_covariance_V_tmsv():
    V = G.covariance_V(tmsv(0.3))
    assert V.V11 == pytest.approx(math.exp(0.6))
    assert V.V22 == pytest.approx(math.exp(-0.6))
    assert V.V22 == pytest.approx(0.5488116361, abs=1e-9)
    assert abs(V.V12) < 1e-15


def test_displaced_vacuum_has_vacuum_V():
    s = G.apply_displacement(G.vacuum(), 1.2 - 0.4j, 0.3j)
    np.testing.assert_allclose(G.covariance_V(s).matrix, np.eye(2), atol=1e-14)


def test_simon_duan():
    assert not G.simon_duan_inseparable(G.covariance_V(G.vacuum())).inseparable
    w = G.simon_duan_inseparable(G.covariance_V(tmsv(0.3)))
    assert w.inseparable and w.witness == pytest.approx(math.exp(-0.6))
    classical = G.ComplexQuadCovariance(2.0, 1.5, 0.0)
    assert not G.simon_duan_inseparable(classical).inseparable


def test_witness_monotone_in_r():
    rs = np.linspace(0.05, 2, 40)
    w = [G.simon_duan_inseparable(G.covariance_V(tmsv(r))).witness for r in rs]
    assert np.all(np.diff(w) < 0)
    np.testing.assert_allclose(w, np.exp(-2 * rs), atol=1e-12)


def test_epr_sum():
    assert G.epr_sum(G.vacuum()) == pytest.approx(2.0)
    assert G.epr_sum(tmsv(0.4)) == pytest.approx(2 * math.exp(-0.8))
    assert G.epr_sum(tmsv(0.4)) == pytest.approx(0.89865793, abs=1e-8)
    assert G.EPR_THRESHOLD == 2.0


@given(small_gains, angles, angles)
def test_epr_sum_is_twice_V22(r, phi, theta):
    s = G.apply_rotation(tmsv(r, phi), theta)
    assert G.epr_sum(s) == pytest.approx(2 * G.covariance_V(s).V22, abs=1e-12 * math.cosh(2 * r))


def test_renyi2():
    assert G.renyi2_entropy(G.covariance_V(G.vacuum())) == 0
    assert G.renyi2_entropy(G.covariance_V(tmsv(0.8))) == pytest.approx(0, abs=1e-12)
    assert G.renyi2_entropy(G.ComplexQuadCovariance(2, 2, 0)) == pytest.approx(0.5 * math.log(4))
    assert G.renyi2_entropy(G.ComplexQuadCovariance(2, 2, 0)) == pytest.approx(0.69314718, abs=1e-8)
    with pytest.raises(G.UnphysicalStateError):
        G.renyi2_entropy(G.ComplexQuadCovariance(0.5, 0.5, 0))


def test_unphysical_state_rejected():
    bad = G.GaussianState(np.zeros(4), 0.1 * np.eye(4))
    assert not bad.is_physical()
    with pytest.raises(G.UnphysicalStateError):
        G.quadrature_powers(bad)
    with pytest.raises(G.UnphysicalStateError):
        G.GaussianState(np.zeros(4), np.triu(np.ones((4, 4))))


@given(small_gains, angles, angles)
def test_symplectic_form_preserved(r, phi, theta):
    for S in (G.squeeze_symplectic(r, phi), G.rotation_symplectic(theta)):
        np.testing.assert_allclose(S @ G.OMEGA @ S.T, G.OMEGA, atol=1e-12 * math.cosh(r) ** 2)


def test_gram_excess_matches_direct_product():
    S = G.squeeze_symplectic(0.7, 0.4)
    np.testing.assert_allclose(G.squeeze_gram_excess(0.7, 0.4), S @ S.T - np.eye(4), atol=1e-14)


@st.composite
def compositions(draw):
    s = G.vacuum()
    for _ in range(draw(st.integers(1, 4))):
        s = G.apply_squeeze(s, draw(st.floats(0, 0.6)), draw(angles))
        s = G.apply_rotation(s, draw(angles))
    return s


@given(compositions())
@settings(max_examples=200)
def test_heisenberg_product_and_purity(s):
    V = G.covariance_V(s)
    assert V.det >= 1 - 1e-10
    assert s.is_physical()
    assert G.renyi2_entropy(V) == pytest.approx(0, abs=1e-9)


def test_mean_complex_quadratures():
    s = G.apply_displacement(G.vacuum(), 0.5, 0.0)
    x1, x2 = G.mean_complex_quadratures(s)
    # <X1> = (<a+> + <a-^dag>)/sqrt2,  <X2> = (<a+> - <a-^dag>)/(sqrt2 i)
    assert x1 == pytest.approx(0.5 / math.sqrt(2))
    assert x2 == pytest.approx(-0.5j / math.sqrt(2))


def test_json_round_trip():
    s = G.apply_displacement(tmsv(0.3, 0.2), 0.1, -0.2j)
    back = G.GaussianState.from_json(s.to_json())
    np.testing.assert_array_equal(back.cov, s.cov)
    np.testing.assert_array_equal(back.mean, s.mean)


@pytest.mark.parametrize("r", [0.1, 0.2, 0.3, 0.4])
@pytest.mark.parametrize("theta", [0.0, math.pi / 8, math.pi / 4])
def test_oracle_equivalence(trunc, r, theta):
    gs = tmsv(r)
    fs = fock.squeeze_state(fock.vacuum(trunc), r, 0.0)
    expected = [fock.expectation(fs, fock.lift(A.gamma(i, j, theta), trunc)).real
                for i, j in ((1, 1), (2, 2), (1, 2))]
    np.testing.assert_allclose(G.quadrature_powers(gs, theta), expected, atol=1e-6)


def test_oracle_equivalence_displaced(small_trunc):
    # zero-mean engine vs Fock for a displaced squeezed state
    alpha = 0.3 - 0.2j
    gs = G.apply_squeeze(G.apply_displacement(G.vacuum(), alpha, 0), 0.2, 0.5)
    D = fock.lift(alpha * A.ladder_form("plus", "create") - np.conj(alpha) * A.ladder_form("plus"), small_trunc)
    from scipy.linalg import expm
    v = expm(D.matrix) @ fock.vacuum(small_trunc).vector
    fs = fock.squeeze_state(fock.FockState(v, small_trunc), 0.2, 0.5)
    for i, j in ((1, 1), (2, 2), (1, 2)):
        ref = fock.expectation(fs, fock.lift(A.gamma(i, j), small_trunc)).real
        assert G.quadrature_powers(gs)[[(1, 1), (2, 2), (1, 2)].index((i, j))] == pytest.approx(ref, abs=1e-8)
    assert G.mean_number(gs) == pytest.approx(
        fock.expectation(fs, fock.lift(A.number(), small_trunc)).real, abs=1e-8)


def test_su2_expectations_vanish_for_tmsv():
    assert G.su2_expectations(tmsv(0.5)) == pytest.approx((0, 0, 0), abs=1e-15)
