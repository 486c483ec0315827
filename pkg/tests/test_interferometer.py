import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tmq import algebra as A
from tmq import fock, gaussian as G
from tmq import interferometer as I

GRID = np.linspace(0, math.pi, 181)


def test_fringe_extrema_values():
    s = I.fringe(0.3, GRID)
    assert s.gamma22[0] == pytest.approx(0.5 * math.exp(-0.6), abs=1e-14)
    assert s.gamma22[90] == pytest.approx(0.5 * math.exp(0.6), abs=1e-14)
    assert s.gamma22[0] == pytest.approx(0.27440582, abs=1e-8)
    assert s.gamma22[90] == pytest.approx(0.91105940, abs=1e-8)
    assert int(np.argmin(s.gamma22)) in (0, 180)
    assert int(np.argmax(s.gamma22)) == 90


def test_fringe_flat_without_squeezing():
    np.testing.assert_allclose(I.fringe(0.0, GRID).gamma22, 0.5, atol=1e-15)


@pytest.mark.parametrize("r", [0.1, 0.2, 0.3, 0.4])
def test_fringe_closed_form(r):
    s = I.fringe(r, GRID)
    expected = [0.5 * (math.cosh(2 * r) - math.cos(2 * t) * math.sinh(2 * r)) for t in GRID]
    np.testing.assert_allclose(s.gamma22, expected, atol=1e-10, rtol=0)
    assert s.gamma22.min() * s.gamma22.max() == pytest.approx(0.25, abs=1e-9)


def test_fringe_engine_agreement(trunc):
    grid = np.linspace(0, math.pi, 25)
    gs = I.fringe(0.3, grid, g=0.2)
    fs = I.fringe(0.3, grid, g=0.2, engine="fock", trunc=trunc)
    np.testing.assert_allclose(fs.gamma22, gs.gamma22, atol=1e-4)
    np.testing.assert_allclose(fs.power, gs.power, atol=1e-4)


def test_nulling_configuration():
    # the second amplifier undoes the first at theta = 0 when g == r
    s = I.fringe(0.4, np.array([0.0]), g=0.4)
    assert s.power[0] == pytest.approx(0, abs=1e-14)


def test_fringe_series_validation():
    with pytest.raises(ValueError):
        I.FringeSeries(np.array([0.0, 0.0]), np.zeros(2), np.zeros(2))
    with pytest.raises(ValueError):
        I.FringeSeries(np.array([0.0, 1.0]), np.array([0.0, np.nan]), np.zeros(2))


def test_fringe_csv_and_json():
    s = I.fringe(0.3, np.linspace(0, math.pi, 3))
    lines = s.to_csv().splitlines()
    assert lines[0] == "theta_rad,power,gamma22"
    assert [float(v) for v in lines[1].split(",")] == [0.0, s.power[0], s.gamma22[0]]
    data = json.loads(s.to_json())
    assert data["metadata"]["r"] == 0.3 and data["metadata"]["engine"] == "gaussian"
    assert data["points"][2]["gamma22"] == s.gamma22[2]


def test_fringe_csv_is_deterministic():
    a = I.fringe(0.25, GRID, g=0.3).to_csv()
    b = I.fringe(0.25, GRID, g=0.3).to_csv()
    assert a == b


def test_config_validation():
    with pytest.raises(ValueError):
        I.InterferometerConfig(r=-0.1)
    with pytest.raises(ValueError):
        I.InterferometerConfig(r=0.1, engine="magic")
    with pytest.raises(ValueError):
        I.InterferometerConfig(r=math.nan)
    assert I.InterferometerConfig(r=0.1, engine="fock").trunc == fock.TruncationSpec()


def test_measured_transform_limits():
    r = 0.3
    assert I.measured_gamma22_transform(r, 0.0).isclose(math.exp(-2 * r) * A.gamma(2, 2))
    assert I.measured_gamma22_transform(r, math.pi / 2).isclose(math.exp(2 * r) * A.gamma(1, 1))


@given(st.floats(0, 1), st.floats(0, 2 * math.pi))
def test_measured_transform_coefficients(r, theta):
    s, c = math.sin(theta), math.cos(theta)
    exact = (s * s * math.exp(2 * r)) * A.gamma(1, 1) + (c * c * math.exp(-2 * r)) * A.gamma(2, 2) \
        - (2 * s * c) * A.gamma(1, 2)
    assert I.measured_gamma22_transform(r, theta).isclose(exact, atol=1e-12 * math.exp(2 * r))


def test_measured_transform_vacuum_expectation_oracle(trunc):
    r, theta = 0.2, math.pi / 3
    form = I.measured_gamma22_transform(r, theta)
    value = fock.expectation(fock.vacuum(trunc), fock.lift(form, trunc)).real
    assert value == pytest.approx(I.fringe_closed_form(r, theta), abs=1e-6)


@pytest.mark.parametrize("r", np.linspace(0, 0.8, 5))
@pytest.mark.parametrize("theta", np.linspace(0, math.pi, 8))
def test_measured_transform_vacuum_expectation_gaussian(r, theta):
    value = I.state_expectations(G.vacuum(), [I.measured_gamma22_transform(r, theta)])[0]
    assert value == pytest.approx(I.fringe_closed_form(r, theta), abs=1e-9)


def test_vacuum_readout_normalised():
    for g in np.linspace(1e-6, 5, 40):
        res = I.amplified_readout(G.vacuum(), g)
        assert res.normalized == 1.0
        assert res.raw_power == pytest.approx(math.cosh(2 * g) - 1, rel=1e-12)


def test_readout_requires_positive_gain():
    with pytest.raises(ValueError):
        I.amplified_readout(G.vacuum(), 0.0)


@pytest.mark.parametrize("g", [0.2, 0.4, 0.6])
@pytest.mark.parametrize("phi", [0.0, math.pi / 4])
def test_readout_oracle(trunc, g, phi):
    state = fock.squeeze_state(fock.vacuum(trunc), 0.2, 0.0)

    def ev(form):
        return fock.expectation(state, fock.lift(form, trunc)).real

    exact = I.readout_expression(ev(A.gamma(1, 1, phi).normal_part()), ev(A.gamma(2, 2, phi).normal_part()), g)
    assert I.amplified_readout(state, g, phi).raw_power == pytest.approx(exact, abs=1e-6)
    gs = G.apply_squeeze(G.vacuum(), 0.2, 0.0)
    assert I.amplified_readout(gs, g, phi).raw_power == pytest.approx(exact, abs=1e-6)


def test_readout_amplified_term_dominates_deamplified_term():
    r, g = 0.3, 2.0
    n11 = 0.5 * (math.exp(2 * r) - 1)
    n22 = 0.5 * (math.exp(-2 * r) - 1)
    raw = I.amplified_readout(G.apply_squeeze(G.vacuum(), r), g).raw_power
    assert raw == pytest.approx(n11 * math.exp(2 * g) + n22 * math.exp(-2 * g) + math.cosh(2 * g) - 1)
    assert abs(n22 * math.exp(-2 * g)) < 0.02 * n11 * math.exp(2 * g)


def test_readout_large_gain_limit():
    r = 0.3
    n11 = 0.5 * (math.exp(2 * r) - 1)
    norm = I.amplified_readout(G.apply_squeeze(G.vacuum(), r), 12.0).normalized
    assert norm == pytest.approx(2 * n11 + 1, rel=1e-9)


def test_visibilities_tmsv():
    w1, w2, v1 = I.visibilities(G.apply_squeeze(G.vacuum(), 0.3))
    assert w1 == pytest.approx(math.tanh(0.6), abs=1e-14)
    assert w1 == pytest.approx(0.53704957, abs=1e-8)
    assert abs(w2) < 1e-15 and abs(v1) < 1e-15


def test_visibilities_vacuum():
    assert I.visibilities(G.vacuum()) == pytest.approx((0, 0, 0), abs=1e-15)


def test_visibilities_oracle(trunc):
    s = fock.squeeze_state(fock.vacuum(trunc), 0.3, 0.0)
    w1, w2, v1 = I.visibilities(s)
    assert w1 == pytest.approx(math.tanh(0.6), abs=1e-8)
    assert abs(w2) < 1e-10 and abs(v1) < 1e-12


def test_complementarity_tmsv():
    lhs, ok = I.complementarity_check(G.apply_squeeze(G.vacuum(), 0.5))
    assert ok and lhs == pytest.approx(math.tanh(1.0) ** 2)
    assert lhs == pytest.approx(0.58002, abs=1e-5)
    assert I.complementarity_check(G.vacuum()) == (0.0, True)


@given(st.lists(st.tuples(st.floats(0, 0.5), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi)),
                min_size=1, max_size=3))
@settings(max_examples=100)
def test_complementarity_random_gaussian(steps):
    s = G.vacuum()
    for r, phi, theta in steps:
        s = G.apply_rotation(G.apply_squeeze(s, r, phi), theta)
    assert I.complementarity_check(s)[1]


def test_gaussian_expectation_matches_fock_for_displaced_state(small_trunc):
    gs = G.apply_displacement(G.vacuum(), 0.4, -0.3j)
    from scipy.linalg import expm
    ap, am = A.ladder_form("plus"), A.ladder_form("minus")
    gen = 0.4 * ap.adjoint() - 0.4 * ap + (-0.3j) * am.adjoint() - (0.3j) * am
    v = expm(fock.lift(gen, small_trunc).matrix) @ fock.vacuum(small_trunc).vector
    fs = fock.FockState(v, small_trunc)
    forms = [A.gamma(1, 1), A.gamma(1, 2), *A.su2_generators(), A.number()]
    np.testing.assert_allclose(I.state_expectations(gs, forms), I.state_expectations(fs, forms), atol=1e-9)


def test_gaussian_expectation_rejects_quartic():
    with pytest.raises(TypeError):
        I.state_expectations(G.vacuum(), [A.casimir()])
