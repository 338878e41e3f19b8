import math

import pytest

import ri_toolkit as ri


def test_cone_measure_quarter_plane():
    cone = ri.MonomialCone(2, 2, [1.0, 1.0])
    assert cone.D == 4.0
    assert cone.B_mu == pytest.approx(0.125, rel=1e-14)
    est, err = cone.ball_measure_mc(200000, 3)
    assert abs(est - 0.125) <= 3 * err
    assert cone.sigma([2.0, 0.0]) == pytest.approx(2.0)


def test_invalid_cone_raises():
    with pytest.raises(ValueError):
        ri.MonomialCone(2, 1, [0.0])


def test_step_function_and_norms():
    f = ri.StepFunction([2.0, 3.0], [1.0])
    assert f.rearrange().breakpoints == [0.0, 1.0]
    g = ri.StepFunction([0.0, 1.0, 2.0, 3.0], [1.0, 3.0, 2.0])
    assert g.rearrange().values == [3.0, 2.0, 1.0]
    assert ri.lk_norm(g, {"p": 2, "q": 2}) == pytest.approx(math.sqrt(14.0))
    assert ri.lk_norm(g, {"p": "inf", "q": "inf"}) == pytest.approx(3.0)
    # phi(t) = t^{1/p} for Lebesgue spaces
    assert ri.fundamental_function({"p": 2, "q": 2}, 4.0) == pytest.approx(2.0)


def test_space_errors():
    with pytest.raises(ri.ConfigError):
        ri.lk_norm(ri.StepFunction([0.0, 1.0], [1.0]), {"p": 1, "q": 2})
    with pytest.raises(ri.ConfigError):
        ri.associate_space({"q": 2})


def test_fubini_and_kernel():
    f = ri.StepFunction([0.0, 1.0], [1.0])
    lhs, rhs, err = ri.fubini_check(f, f, 2, 4.0)
    assert lhs == pytest.approx(2.0 / 3.0, rel=1e-12)
    assert err <= 1e-12
    # g(t) = 2 - 4 sqrt(t) + 2 t on (0, 1) for m = 2, D = 4
    assert ri.kernel_g_derivative(f, 2, 4.0, 0, 0.25) == pytest.approx(2 - 2 + 0.5, rel=1e-12)


def test_optimal_target_lebesgue():
    cone = ri.MonomialCone(2, 2, [1.0, 1.0])
    r = ri.optimal_target({"p": 2, "q": 2}, cone, 1, family_size=4)
    assert r["verdict"] is True
    assert r["output_space"]["label"] == "L^{4,2}"
    assert 0 < r["ratio_min"] <= r["ratio_max"] < math.inf
    none = ri.optimal_target({"p": 4, "q": 2}, cone, 1, family_size=4)
    assert none["output_space"]["kind"] == "NonExistent"
    assert none["ratio_min"] is None
    assert ri.target_condition({"p": 2, "q": 2}, cone, 1)
    assert not ri.domain_condition({"p": 1.2, "q": 1.2}, cone, 1)


def test_optimal_domain_linf():
    cone = ri.MonomialCone(2, 2, [1.0, 1.0])
    r = ri.optimal_domain({"p": "inf", "q": "inf"}, cone, 1, family_size=4)
    assert r["output_space"]["kind"] == "ImplicitUm"
    assert r["ratio_min"] == pytest.approx(1.0, rel=1e-8)


def test_campaign_deterministic():
    cfg = {"campaign": "reduction_duality", "cone": {"n": 2, "k": 2, "A": [1, 1]}, "m": 2,
           "family_size": 10, "seed": 3}
    a, csv_a = ri.run_campaign(cfg, threads=1)
    b, csv_b = ri.run_campaign(cfg, threads=2)
    assert a == b and csv_a == csv_b
    assert a["summary"] == {"cases": 10, "passed": 10, "failed": 0}
    assert csv_a.splitlines()[0] == "campaign,case_id,input_hash,metric,value,tolerance,pass"
    assert "optimal_target_equiv" in ri.campaign_names()


def test_campaign_config_error_names_field():
    cfg = {"campaign": "optimal_target_equiv", "cone": {"n": 2, "k": 2, "A": [1, 1]}, "m": 1}
    with pytest.raises(ri.ConfigError, match="spaces"):
        ri.run_campaign(cfg)
