import pytest

from seasirs.analysis.sampling import default_rng
from seasirs.analysis.verify import (
    CHECKS,
    Outcome,
    VerdictReport,
    check_boundary_endemic,
    check_boundary_invariance,
    check_comparison,
    check_extinction,
    check_invariance,
    check_lyapunov,
    check_near_equal_rates,
    check_persistence,
    hypothesis_values,
    run_checks,
    verification_settings,
)
from seasirs.exceptions import DomainError, PreconditionError, ValidationError
from seasirs.models import State

from .common import p_star, random_params_list, with_r0


def test_violated_needs_witness():
    with pytest.raises(ValidationError):
        VerdictReport("extinction", {}, Outcome.VIOLATED, {})


def test_verdict_to_dict():
    report = VerdictReport(
        "comparison", {"R0": 0.5}, Outcome.VIOLATED, {"max_excess": 1.0}, witness={"t": 2.0}
    )
    data = report.to_dict()
    assert report.violated
    assert data["outcome"] == "violated"
    assert data["witness"] == {"t": 2.0}
    assert "witness" not in VerdictReport("x", {}, Outcome.CONFIRMED, {}).to_dict()


def test_hypothesis_values():
    values = hypothesis_values(p_star(0.004))
    assert values["R0"] == pytest.approx(1.66061, abs=1e-5)
    assert values["rho"] > 1
    assert values["mu_interior"] is True
    assert values["rate_gap"] == pytest.approx(0.1)


def test_verification_settings():
    settings = verification_settings(p_star(0.004, theta=0.25, omega=4.0))
    assert settings.abs_tol == settings.rel_tol == 1e-9
    assert settings.max_step == 1.0


def test_extinction_autonomous():
    params = p_star(0.002)
    report = check_extinction(params, sample_count=4, rng=default_rng(1))
    assert report.outcome == Outcome.CONFIRMED
    assert report.evidence["max_distance"] <= 1e-4 * params.N
    assert report.evidence["horizon"] >= 10 * params.omega
    assert report.evidence["horizon"] % params.omega == 0


def test_extinction_seasonal():
    params = p_star(0.001, 0.003, omega=10.0)
    report = check_extinction(params, sample_count=3, rng=default_rng(2))
    assert report.outcome == Outcome.CONFIRMED
    assert report.hypothesis_values["R0"] < 1


def test_extinction_explicit_points():
    params = p_star(0.002)
    points = [State(90.0, 5.0, 5.0), State(50.0, 10.0, 5.0)]
    report = check_extinction(params, initial_points=points, horizon=100.0)
    assert report.outcome == Outcome.CONFIRMED
    assert report.evidence["samples"] == 2
    with pytest.raises(DomainError):
        check_extinction(params, initial_points=[State(90.0, 20.0, 5.0)])


def test_extinction_rejects_supercritical():
    with pytest.raises(PreconditionError):
        check_extinction(p_star(0.004))
    with pytest.raises(PreconditionError):
        check_extinction(p_star(0.003, 0.005, omega=10.0))


# random parameter sets with the season length and waning rate pinned to keep
# horizons short; the other rates, N, θ and the β ratio vary
@pytest.mark.parametrize(
    "params",
    random_params_list(seed=21, count=5, seasonal=False, sigma=0.1, omega=4.0)
    + random_params_list(seed=22, count=5, sigma=0.1, omega=4.0),
)
def test_extinction_random_params(params):
    params = with_r0(params, 0.6)
    report = check_extinction(params, sample_count=3, rng=default_rng(23))
    assert report.outcome == Outcome.CONFIRMED
    assert report.evidence["R0"] == pytest.approx(0.6, rel=1e-6)
    assert report.evidence["max_distance"] <= 1e-4 * params.N


def test_persistence_autonomous():
    params = p_star(0.004)
    report = check_persistence(params, sample_count=3, rng=default_rng(3))
    assert report.outcome == Outcome.CONFIRMED
    assert report.evidence["delta_hat"] > 1.0
    start, end = report.evidence["window"]
    assert 0 < start < end


def test_persistence_seasonal():
    params = p_star(0.003, 0.005, omega=10.0)
    report = check_persistence(params, sample_count=2, rng=default_rng(4))
    assert report.outcome == Outcome.CONFIRMED


def test_persistence_rejects():
    with pytest.raises(PreconditionError):
        check_persistence(p_star(0.002))
    with pytest.raises(PreconditionError):
        check_persistence(p_star(0.004, mu=1.0))
    with pytest.raises(PreconditionError):
        check_persistence(p_star(0.004, alpha=0.0, mu=0.9))
    with pytest.raises(PreconditionError):
        check_persistence(p_star(0.004), initial_points=[State(90.0, 0.0, 0.0)])


@pytest.mark.parametrize(
    "params",
    random_params_list(seed=24, count=5, seasonal=False, sigma=0.1, omega=4.0)
    + random_params_list(seed=25, count=5, sigma=0.1, omega=4.0),
)
def test_persistence_random_params(params):
    params = with_r0(params, 2.0)
    assert 0 < params.mu < 1
    assert params.alpha * params.beta1 > 0
    report = check_persistence(params, sample_count=2, rng=default_rng(26))
    assert report.outcome == Outcome.CONFIRMED
    assert report.evidence["delta_hat"] > 1e-6 * params.N


def test_near_equal_rates_confirmed():
    report = check_near_equal_rates(p_star(0.004), sample_count=2, rng=default_rng(5))
    assert report.outcome == Outcome.CONFIRMED
    assert report.hypothesis_values["within"] is True
    assert [v["r_s"] for v in report.evidence["variants"]] == pytest.approx([0.112, 0.088])


def test_near_equal_rates_outside_bound_is_inconclusive():
    report = check_near_equal_rates(
        p_star(0.004), delta_r=0.5, sample_count=1, rng=default_rng(6)
    )
    assert report.outcome == Outcome.INCONCLUSIVE
    assert report.evidence["skipped_r_s"] == [pytest.approx(-0.4)]


def test_near_equal_rates_rejects():
    with pytest.raises(PreconditionError):
        check_near_equal_rates(p_star(0.002))
    with pytest.raises(PreconditionError):
        check_near_equal_rates(p_star(0.004, mu=0.0))
    with pytest.raises(ValidationError):
        check_near_equal_rates(p_star(0.004), delta_r=-0.1)


@pytest.mark.parametrize(
    "params", random_params_list(seed=27, count=5, seasonal=False, sigma=0.1)
)
def test_near_equal_rates_random_params(params):
    params = with_r0(params.replace(r_s=params.r_a), 1.8)
    report = check_near_equal_rates(params, sample_count=3, rng=default_rng(28))
    assert report.outcome == Outcome.CONFIRMED
    assert report.hypothesis_values["within"] is True
    assert report.evidence["skipped_r_s"] == []


@pytest.mark.parametrize(
    "params,kind", [(p_star(0.004, mu=1.0), "E3"), (p_star(0.01, mu=0.0), "E2")]
)
def test_boundary_endemic(params, kind):
    report = check_boundary_endemic(params, sample_count=3, rng=default_rng(7))
    assert report.outcome == Outcome.CONFIRMED
    assert report.evidence["equilibrium"] == kind


def test_boundary_endemic_rejects():
    with pytest.raises(PreconditionError):
        check_boundary_endemic(p_star(0.004))
    with pytest.raises(PreconditionError):
        check_boundary_endemic(p_star(0.001, mu=1.0))


def test_comparison():
    params = p_star(0.002, 0.006, omega=2.0)
    report = check_comparison(params, sample_count=5, rng=default_rng(8))
    assert report.outcome == Outcome.CONFIRMED
    assert report.evidence["t_end"] == 20.0


@pytest.mark.parametrize("params", random_params_list(seed=29, count=5))
def test_comparison_random_params(params):
    report = check_comparison(params, sample_count=3, rng=default_rng(30))
    assert report.outcome == Outcome.CONFIRMED
    assert report.evidence["max_excess"] <= 1e-9 * params.N


def test_invariance():
    report = check_invariance(p_star(0.002, 0.006), sample_count=5, rng=default_rng(9))
    assert report.outcome == Outcome.CONFIRMED
    assert report.evidence["max_breach"] <= 1e-8 * 100.0


def test_boundary_invariance():
    report = check_boundary_invariance(p_star(0.004), sample_count=3, rng=default_rng(10))
    assert report.outcome == Outcome.CONFIRMED
    assert report.evidence["max_infected"] == 0.0


@pytest.mark.parametrize(
    "params,name",
    [
        (p_star(0.002), "L"),
        (p_star(0.01, mu=0.0), "V_mu0"),
        (p_star(0.004, r_s=0.1), "V1"),
    ],
)
def test_lyapunov(params, name):
    report = check_lyapunov(params, sample_count=200, rng=default_rng(11))
    assert report.outcome == Outcome.CONFIRMED
    assert list(report.evidence) == [name]
    assert report.evidence[name]["max_derivative"] <= 0


def test_lyapunov_rejects():
    with pytest.raises(PreconditionError):
        check_lyapunov(p_star(0.004))
    with pytest.raises(PreconditionError):
        check_lyapunov(p_star(0.001, 0.002))


def test_run_checks_skips_inapplicable():
    params = p_star(0.001, 0.003, omega=10.0)
    reports = run_checks(params, sample_count=2, rng=default_rng(12))
    assert [r.theorem_id for r in reports] == [
        "extinction",
        "comparison",
        "invariance",
        "boundary-invariance",
    ]
    assert not any(r.violated for r in reports)


def test_run_checks_explicit():
    params = p_star(0.002)
    reports = run_checks(params, ["lyapunov", "invariance"], sample_count=3)
    assert [r.theorem_id for r in reports] == ["lyapunov", "invariance"]
    with pytest.raises(PreconditionError):
        run_checks(params, ["persistence"], sample_count=1)


def test_run_checks_initial_points():
    params = p_star(0.002)
    points = [State(90.0, 5.0, 5.0)]
    reports = run_checks(params, ["invariance", "boundary-invariance"], initial_points=points)
    assert reports[0].evidence["samples"] == 1
    assert reports[1].evidence["samples"] == 20


def test_run_checks_unknown():
    with pytest.raises(ValidationError):
        run_checks(p_star(0.002), ["extinction", "no-such-check"])


@pytest.mark.parametrize(
    "check,params",
    [
        (check_extinction, p_star(0.002)),
        (check_persistence, p_star(0.004)),
        (check_near_equal_rates, p_star(0.004)),
        (check_boundary_endemic, p_star(0.004, mu=1.0)),
        (check_comparison, p_star(0.002)),
        (check_invariance, p_star(0.002)),
        (check_boundary_invariance, p_star(0.002)),
        (check_lyapunov, p_star(0.002)),
    ],
)
@pytest.mark.parametrize("count", [0, -3])
def test_checks_need_samples(check, params, count):
    with pytest.raises(ValidationError):
        check(params, sample_count=count, rng=default_rng(31))


def test_checks_need_initial_points():
    with pytest.raises(ValidationError):
        check_extinction(p_star(0.002), initial_points=[])
    with pytest.raises(ValidationError):
        check_comparison(p_star(0.002), initial_points=[])


def test_run_checks_needs_samples():
    with pytest.raises(ValidationError):
        run_checks(p_star(0.002), ["extinction"], sample_count=0)
    with pytest.raises(ValidationError):
        run_checks(p_star(0.002), sample_count=0)


def test_check_ids():
    assert sorted(CHECKS) == sorted(
        [
            "extinction",
            "persistence",
            "near-equal-rates",
            "boundary-endemic",
            "lyapunov",
            "comparison",
            "invariance",
            "boundary-invariance",
        ]
    )
