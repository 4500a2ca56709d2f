import dataclasses
import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from uavmeta import model
from uavmeta.model import NetworkParams, ParameterError, SimControls


def test_epsilon_max_baseline():
    eps = model.epsilon_max(2.1, 0.01, 2.0, 100.0, 100.0)
    assert eps == pytest.approx(math.log(200) / math.log(math.sqrt(20000)) / 2.1, rel=1e-14)
    assert eps == pytest.approx(0.5095, abs=5e-5)
    # the edge user transmits exactly p_u
    assert 0.01 * math.sqrt(20000) ** (2.1 * eps) == pytest.approx(2.0, rel=1e-9)


def test_epsilon_max_zero_when_rho_is_pu():
    assert model.epsilon_max(4.0, 2.0, 2.0, 100.0, 100.0) == 0.0


def test_epsilon_max_domain_errors():
    with pytest.raises(ParameterError):
        model.epsilon_max(2.1, 3.0, 2.0, 100.0, 100.0)
    with pytest.raises(ParameterError):
        model.epsilon_max(2.1, 0.01, 2.0, 0.5, 0.5)


@settings(max_examples=80, deadline=None)
@given(alpha=st.floats(0.5, 6), rho=st.floats(1e-4, 0.5), p_u=st.floats(0.6, 10),
       r_c=st.floats(5, 500), h=st.floats(5, 500), bump=st.floats(1.01, 2))
def test_epsilon_max_monotone(alpha, rho, p_u, r_c, h, bump):
    assume(rho * bump <= p_u)
    e = model.epsilon_max(alpha, rho, p_u, r_c, h)
    assert model.epsilon_max(alpha * bump, rho, p_u, r_c, h) < e
    assert model.epsilon_max(alpha, rho * bump, p_u, r_c, h) < e
    assert model.epsilon_max(alpha, rho, p_u * bump, r_c, h) > e


def test_db_round_trip():
    assert model.db_to_linear(-20) == pytest.approx(0.01, rel=1e-12)
    for x in (1e-3, 0.01, 1.0, 42.0):
        assert model.db_to_linear(model.linear_to_db(x)) == pytest.approx(x, rel=1e-12)


def test_baseline_at_eps_max_is_valid():
    p = model.baseline_params(h=100.0, eps_scale=1.0)
    assert model.validate(p) is p
    assert p.eta_n == pytest.approx(0.01)


def test_negative_eps_rejected():
    p = model.baseline_params().replace(eps_l=-0.1)
    with pytest.raises(ParameterError) as info:
        model.validate(p)
    assert any("eps_l below 0" in e for e in info.value.errors)


def test_eps_above_bound_rejected():
    p = model.baseline_params()
    bad = p.replace(eps_l=p.eps_max("l") + 0.01)
    with pytest.raises(ParameterError) as info:
        model.validate(bad)
    assert any("eps_l" in e and "bound" in e for e in info.value.errors)
    model.validate(p.replace(eps_l=p.eps_max("l") - 0.01))


def test_all_errors_reported_together():
    p = NetworkParams(r_c=-1.0, m_l=2.5, lambda_u=2e-6)
    errs = model.param_errors(p)
    assert any("r_c" in e for e in errs)
    assert any("m_l" in e for e in errs)
    assert any("lambda_u" in e for e in errs)


def test_params_are_frozen():
    p = model.baseline_params()
    with pytest.raises(dataclasses.FrozenInstanceError):
        p.h = 3.0


def test_controls_validation():
    p = model.baseline_params()
    model.validate_controls(SimControls(), p)
    errs = model.control_errors(SimControls(window_radius=5000.0, n_fading=0, z_max=50.0), p)
    assert any("window_radius" in e for e in errs)
    assert any("n_fading" in e for e in errs)
    assert any("z_max" in e for e in errs)


def test_config_mapping_uses_db_and_rejects_unknown():
    p = model.params_from_mapping({"eta_n_db": "-20", "h": "50", "lambda_b": "2e-6", "m_l": "2"})
    assert p.eta_n == pytest.approx(0.01) and p.h == 50.0 and p.m_l == 2
    assert p.lambda_u == p.lambda_b
    with pytest.raises(ParameterError):
        model.params_from_mapping({"eta_n": "0.01"})
    with pytest.raises(ParameterError):
        model.params_from_mapping({"bogus": "1"})
