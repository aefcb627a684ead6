import numpy as np
import pytest

from seasirs.core import rhs
from seasirs.core.smallmat import CubicCoeffs, StabilityVerdict, eig3, verdict_from_roots
from seasirs.dynamics.equilibria import (
    EquilibriumKind,
    Stability,
    TransformedParams,
    classify,
    dfe_charpoly,
    endemic_rh_certificate,
    find_equilibria,
    jacobian,
)
from seasirs.dynamics.reproduction import r0_closed_form
from seasirs.exceptions import PreconditionError
from seasirs.models import State

from .common import p_star, random_params_list


def critical_beta(params):
    return 1.0 / (
        params.N
        * (
            params.mu / (params.d + params.r_a)
            + params.alpha * (1.0 - params.mu) / (params.d + params.r_s)
        )
    )


def assert_residual(params, report):
    bound = 1e-10 * (params.d + params.sigma) * params.N
    assert report.residual <= bound
    assert np.abs(rhs(params, report.state, params.beta)).max() <= bound


def test_subcritical_has_only_disease_free():
    reports = find_equilibria(p_star(0.002))
    assert len(reports) == 1
    assert reports[0].kind == EquilibriumKind.DISEASE_FREE
    assert reports[0].state == State(100.0, 0.0, 0.0)


def test_endemic_pstar():
    params = p_star(0.004)
    reports = find_equilibria(params)
    assert [r.kind for r in reports] == [EquilibriumKind.DISEASE_FREE, EquilibriumKind.ENDEMIC]
    endemic = reports[1]
    assert endemic.state.S == pytest.approx(60.219, abs=1e-3)
    assert endemic.state.I_a == pytest.approx(7.124, abs=1e-3)
    assert endemic.state.I_s == pytest.approx(5.828, abs=1e-3)
    assert_residual(params, endemic)
    assert all(z.real < 0 for z in endemic.eigenvalues)


def test_asymptomatic_free_equilibrium():
    params = p_star(0.01, mu=0.0)
    reports = find_equilibria(params)
    assert reports[1].kind == EquilibriumKind.ASYMPTOMATIC_FREE
    assert reports[1].state.I_a == 0.0
    assert_residual(params, reports[1])


def test_symptomatic_free_equilibrium():
    params = p_star(0.004, mu=1.0)
    reports = classify(params)
    assert reports[1].kind == EquilibriumKind.SYMPTOMATIC_FREE
    assert reports[1].state.I_s == 0.0
    assert reports[0].stability == Stability.SADDLE
    assert reports[1].stability == Stability.STABLE
    assert_residual(params, reports[1])


@pytest.mark.parametrize("params", random_params_list(seed=6, count=50, seasonal=False))
def test_residual_property(params):
    for report in find_equilibria(params):
        assert_residual(params, report)


def test_find_equilibria_needs_autonomous():
    with pytest.raises(PreconditionError):
        find_equilibria(p_star(0.004, 0.006))


@pytest.mark.parametrize(
    "state", [State(100.0, 0.0, 0.0), State(60.0, 7.0, 6.0), State(20.0, 30.0, 10.0)]
)
def test_jacobian_finite_differences(state):
    params = p_star(0.004)
    h = 1e-6 * params.N
    J = jacobian(params, state, params.beta)
    numeric = np.empty((3, 3))
    for k in range(3):
        step = np.zeros(3)
        step[k] = h
        x = state.as_array()
        numeric[:, k] = (
            rhs(params, x + step, params.beta) - rhs(params, x - step, params.beta)
        ) / (2 * h)
    assert np.abs(J - numeric).max() <= 1e-5 * np.abs(J).max()


def test_jacobian_disease_free_eigenvalue():
    params = p_star(0.004)
    roots = eig3(jacobian(params, State(params.N, 0.0, 0.0), params.beta))
    assert np.abs(roots + (params.d + params.sigma)).min() <= 1e-10


def test_dfe_charpoly_critical():
    params = p_star(0.004)
    charpoly = dfe_charpoly(params, critical_beta(params))
    assert abs(charpoly.a0) <= 1e-12


def test_dfe_charpoly_pstar():
    charpoly = dfe_charpoly(p_star(0.004))
    assert charpoly.a0 < 0
    assert charpoly.a1 == pytest.approx(0.16 + 0.072 - 0.34)


def test_dfe_charpoly_no_transmission():
    charpoly = dfe_charpoly(p_star(0.004), beta=0.0)
    assert charpoly.a0 == pytest.approx(0.12 * 0.22, rel=1e-14)
    assert charpoly.a1 == pytest.approx(-0.34, rel=1e-14)


@pytest.mark.parametrize("params", random_params_list(seed=7, count=20, seasonal=False))
def test_dfe_charpoly_identity(params):
    charpoly = dfe_charpoly(params)
    scale = (params.d + params.r_a) * (params.d + params.r_s) * (1.0 + r0_closed_form(params))
    assert charpoly.identity_gap <= 1e-12 * scale
    # constant term of det(λI − J(E₀)) = (d + σ)·a₀
    J = jacobian(params, State(params.N, 0.0, 0.0), params.beta)
    cubic = CubicCoeffs.from_matrix(J)
    assert cubic.xi0 == pytest.approx(
        (params.d + params.sigma) * charpoly.a0, abs=1e-12 * max(1.0, scale)
    )


def test_endemic_certificate_pstar():
    params = p_star(0.004)
    certificate = endemic_rh_certificate(params)
    assert certificate.verdict == StabilityVerdict.ALL_NEGATIVE
    assert certificate.xi0 > 0
    assert certificate.xi2 > 0
    assert certificate.gap > 0
    endemic = find_equilibria(params)[1]
    assert verdict_from_roots(endemic.eigenvalues) == StabilityVerdict.ALL_NEGATIVE
    assert endemic.rh_certificate.to_dict()["verdict"] == "all_negative"


def test_endemic_certificate_marginal():
    params = p_star(0.004)
    params = params.with_beta(critical_beta(params) * (1.0 + 1e-12))
    certificate = endemic_rh_certificate(params)
    assert abs(certificate.xi0) <= 1e-12
    assert certificate.verdict == StabilityVerdict.MARGINAL


@pytest.mark.parametrize(
    "changes",
    [{"mu": 0.0}, {"mu": 1.0}, {"beta1": 0.002, "beta2": 0.002}, {"beta2": 0.006}],
)
def test_endemic_certificate_preconditions(changes):
    with pytest.raises(PreconditionError):
        endemic_rh_certificate(p_star(0.004).replace(**changes))


@pytest.mark.parametrize("params", random_params_list(seed=8, count=30, seasonal=False))
def test_certificate_coefficients_positive(params):
    if r0_closed_form(params) <= 1.0:
        params = params.with_beta(2.0 * critical_beta(params))
    certificate = endemic_rh_certificate(params)
    assert certificate.c0 > 0
    assert certificate.c1 > 0
    assert certificate.c2 > 0
    endemic = find_equilibria(params)[1]
    if min(abs(z.real) for z in endemic.eigenvalues) > 1e-8:
        assert certificate.verdict == verdict_from_roots(endemic.eigenvalues)


def test_transformed_endemic_state():
    params = p_star(0.004)
    tp = TransformedParams.from_params(params)
    assert tp.R0_hat == pytest.approx(r0_closed_form(params), rel=1e-12)
    expected = tp.transform(find_equilibria(params)[1].state)
    actual = tp.endemic_state()
    assert actual.as_array() == pytest.approx(expected.as_array(), rel=1e-10)
    xi = CubicCoeffs.from_matrix(tp.jacobian(actual))
    certificate = endemic_rh_certificate(params)
    assert xi.xi0 == pytest.approx(certificate.xi0, rel=1e-8)
    assert xi.xi1 == pytest.approx(certificate.xi1, rel=1e-8)
    assert xi.xi2 == pytest.approx(certificate.xi2, rel=1e-8)


def test_classify_subcritical():
    reports = classify(p_star(0.004), beta=0.002)
    assert len(reports) == 1
    assert reports[0].stability == Stability.STABLE
    assert reports[0].meta["R0"] == pytest.approx(0.830303, abs=1e-6)


def test_classify_supercritical():
    reports = classify(p_star(0.004))
    assert [r.stability for r in reports] == [Stability.SADDLE, Stability.STABLE]
    data = reports[1].to_dict()
    assert data["kind"] == "E1"
    assert data["rh_certificate"]["c0"] > 0


def test_classify_critical():
    params = p_star(0.004)
    reports = classify(params, beta=critical_beta(params))
    assert reports[0].stability == Stability.SADDLE_NODE
