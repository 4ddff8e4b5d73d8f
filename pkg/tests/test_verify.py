import numpy as np
import pytest
from conftest import (
    NEGLECTED_TERM_BETA_01,
    analytic_profiles,
    catalog_profiles,
    spec_for,
)

from boostfield import (
    ConstantProfile,
    Event,
    FieldSpec,
    GaussHermiteProfile,
    GaussianProfile,
    HarmonicComponent,
    LorentzBoost,
    MassParameters,
    PlaneWaveProfile,
    ResidualReport,
    ScanResult,
    analytic_envelope_derivatives,
    derivative_slopes,
    envelope_equation_residual,
    fd_envelope_bundle,
    fd_partial,
    fit_loglog_slope,
    klein_gordon_residual,
    neglected_term,
    neglected_term_scan,
    sample_events,
    scalar_invariance_check,
    schrodinger_residual,
    separable_potential,
)

BETAS = (0.0, 0.3, 0.6, 0.9)


# -- stencils ----------------------------------------------------------------


def test_fd_partial_on_known_function():
    f = lambda e: np.sin(e.z) * np.cos(e.tau) + 0j
    e = Event(0.0, 0.0, 0.7, 0.4)
    h = 1e-4
    assert fd_partial(f, e, "z", 1, h) == pytest.approx(
        np.cos(0.7) * np.cos(0.4), abs=1e-8
    )
    assert fd_partial(f, e, "tau", 2, h) == pytest.approx(
        -np.sin(0.7) * np.cos(0.4), abs=1e-6
    )
    assert fd_partial(f, e, "x", 1, h) == 0.0


def test_fd_partial_validation():
    f = lambda e: 0j
    e = Event(0, 0, 0, 0)
    with pytest.raises(ValueError, match="axis"):
        fd_partial(f, e, "w", 1, 0.1)
    with pytest.raises(ValueError, match="order"):
        fd_partial(f, e, "z", 3, 0.1)
    with pytest.raises(ValueError, match="spacing"):
        fd_partial(f, e, "z", 1, 0.0)


def test_analytic_bundle_agrees_with_stencils():
    spec = spec_for(GaussianProfile(1.0, 0.2, 0.8), 0.6)
    e = Event(0.3, -0.2, 0.4, 0.1)
    a = analytic_envelope_derivatives(spec, 0, e)
    f = fd_envelope_bundle(spec, 0, e, 1e-4)
    for name in ("d_tau", "d_z", "d2_tau", "d2_z"):
        assert getattr(a, name) == pytest.approx(getattr(f, name), rel=1e-6, abs=1e-7)
    assert a.d_x == 0 and a.d2_y == 0
    assert a.laplacian() == a.d2_x + a.d2_y + a.d2_z


# -- residual identities ------------------------------------------------------


@pytest.mark.parametrize("beta", BETAS)
@pytest.mark.parametrize("name", sorted(catalog_profiles()))
def test_envelope_identity_holds_at_round_off(name, beta):
    spec = spec_for(catalog_profiles()[name], beta)
    events = sample_events(60, 17)
    rep = envelope_equation_residual(spec, 0, events)
    assert rep.max_abs < 1e-13, (name, beta, rep.max_abs)
    assert rep.rms <= rep.max_abs


def test_envelope_identity_fd_mode():
    spec = spec_for(GaussianProfile(1.0, 0.2, 0.8), 0.6)
    events = sample_events(20, 23)
    rep = envelope_equation_residual(spec, 0, events, derivatives="fd")
    assert rep.stencil_spacing == pytest.approx(0.8 / 100.0)
    assert rep.max_abs < 1e-3  # limited by the second-order stencil, not the identity
    with pytest.raises(ValueError, match="analytic.*fd|fd.*analytic"):
        envelope_equation_residual(spec, 0, events, derivatives="spectral")


def test_mean_component_has_no_envelope_equation():
    spec = FieldSpec(
        (
            HarmonicComponent(0.0, ConstantProfile(1.0)),
            HarmonicComponent(2.0, ConstantProfile(1.0)),
        ),
        LorentzBoost(0.3),
    )
    with pytest.raises(ValueError, match="mean component"):
        envelope_equation_residual(spec, 0, sample_events(5, 1))
    with pytest.raises(ValueError, match="mean component"):
        klein_gordon_residual(spec, 0, sample_events(5, 1))


def test_vanishing_envelope_rejected():
    spec = spec_for(GaussianProfile(1.0, 0.0, 0.1), 0.0)
    far = [Event(0.0, 0.0, 50.0 + i, 0.0) for i in range(4)]
    with pytest.raises(ValueError, match="vanishes"):
        envelope_equation_residual(spec, 0, far)


def test_tail_events_filtered_not_fatal():
    spec = spec_for(GaussianProfile(1.0, 0.0, 0.1), 0.0)
    events = [Event(0.0, 0.0, 0.0, 0.0), Event(0.0, 0.0, 30.0, 0.0)]
    rep = envelope_equation_residual(spec, 0, events)
    assert rep.sample_count == 1
    assert rep.metadata["events_given"] == 2


@pytest.mark.parametrize("beta", BETAS)
@pytest.mark.parametrize("name", sorted(catalog_profiles()))
def test_klein_gordon_identity_intrinsic(name, beta):
    spec = spec_for(catalog_profiles()[name], beta)
    rep = klein_gordon_residual(spec, 0, sample_events(60, 19))
    assert rep.max_abs < 1e-13, (name, beta, rep.max_abs)


def test_klein_gordon_explicit_mass_scalar():
    # the bracket reduces to the rest-frame curvature ratio plus omega^2
    w = 2.0
    events = sample_events(40, 29)
    spec = spec_for(ConstantProfile(1.5), 0.6, omega=w)
    rep = klein_gordon_residual(spec, 0, events, mass_scalar=w * w)
    assert rep.max_abs < 1e-13

    k = 1.3
    spec = spec_for(PlaneWaveProfile(1.0, k), 0.6, omega=w)
    rep = klein_gordon_residual(spec, 0, events, mass_scalar=w * w - k * k)
    assert rep.max_abs < 1e-13
    # a wrong constant leaves a visible residual
    rep = klein_gordon_residual(spec, 0, events, mass_scalar=w * w)
    assert rep.max_abs > 1e-3


@pytest.mark.parametrize("name", sorted(catalog_profiles()))
def test_scalar_invariance(name):
    spec = spec_for(catalog_profiles()[name], 0.8)
    rep = scalar_invariance_check(spec, 0, sample_events(60, 31))
    assert rep.max_abs < 1e-13, (name, rep.max_abs)


# -- Schrodinger form ---------------------------------------------------------


def test_schrodinger_exact_mode_plane_wave():
    w = 2.0
    mass = MassParameters(w, 1.0)
    for beta in BETAS:
        spec = spec_for(PlaneWaveProfile(1.0, 1.3), beta, omega=w)
        u = separable_potential(spec, 0)
        rep = schrodinger_residual(spec, 0, mass, u, sample_events(50, 37))
        assert rep.max_abs < 1e-13, beta


def test_schrodinger_unity_mode_shrinks_with_beta():
    w = 2.0
    mass = MassParameters(w, 1.0)
    events = sample_events(50, 41)

    def unity_rms(beta):
        spec = spec_for(PlaneWaveProfile(1.0, 1.3), beta, omega=w)
        u = separable_potential(spec, 0)
        return schrodinger_residual(spec, 0, mass, u, events, gamma_mode="unity").rms

    assert unity_rms(0.1) > unity_rms(0.05) > unity_rms(0.025)
    assert unity_rms(0.0) < 1e-14


def test_schrodinger_mass_must_match_carrier():
    spec = spec_for(PlaneWaveProfile(1.0, 1.3), 0.3, omega=2.0)
    u = separable_potential(spec, 0)
    with pytest.raises(ValueError, match="carrier"):
        schrodinger_residual(spec, 0, MassParameters(1.0, 1.0), u, sample_events(5, 2))


def test_schrodinger_rejects_non_separable_potential():
    spec = spec_for(GaussianProfile(1.0, 0.0, 0.8), 0.5, omega=2.0)
    zero_u = lambda x, y, z: 0.0
    with pytest.raises(ValueError, match="does not separate"):
        schrodinger_residual(
            spec, 0, MassParameters(2.0, 1.0), zero_u, sample_events(10, 3)
        )


def test_schrodinger_gamma_mode_validation():
    spec = spec_for(PlaneWaveProfile(1.0, 1.3), 0.3, omega=2.0)
    u = separable_potential(spec, 0)
    with pytest.raises(ValueError, match="gamma_mode"):
        schrodinger_residual(
            spec, 0, MassParameters(2.0, 1.0), u, sample_events(5, 2), gamma_mode="x"
        )


# -- separable potentials ------------------------------------------------------


def test_separable_potential_constant_and_plane_wave():
    spec = spec_for(ConstantProfile(2.0), 0.6)
    assert separable_potential(spec, 0)(0.0, 0.0, 1.7) == 0.0
    spec = spec_for(PlaneWaveProfile(1.0, 1.3), 0.6)
    g = spec.boost.gamma
    u = separable_potential(spec, 0)
    assert u(0.0, 0.0, 0.4) == pytest.approx(-((g * 1.3) ** 2), rel=1e-14)


def test_separable_potential_static_profiles():
    # order-1 eigenfunction shape: the well is (u^2 - 3) / sigma^2
    spec = spec_for(GaussHermiteProfile(1.0, 1, 0.0, 1.2), 0.0)
    u = separable_potential(spec, 0)
    z = 0.9
    assert u(0.0, 0.0, z) == pytest.approx(((z / 1.2) ** 2 - 3.0) / 1.2**2, rel=1e-13)


def test_separable_potential_rejects_moving_localized_profile():
    spec = spec_for(GaussianProfile(1.0, 0.0, 0.8), 0.4)
    with pytest.raises(ValueError, match="does not separate"):
        separable_potential(spec, 0)


# -- neglected-term scan --------------------------------------------------------


def test_neglected_term_reference_value():
    mass = MassParameters(1.0, 1.0)
    assert neglected_term(mass, 0.1) == pytest.approx(NEGLECTED_TERM_BETA_01, rel=1e-12)
    assert neglected_term(mass, 0.0) == 0.0


def test_neglected_term_scales_with_rest_energy():
    t1 = neglected_term(MassParameters(1.0, 1.0), 0.3)
    t3 = neglected_term(MassParameters(3.0, 1.0), 0.3)
    tc = neglected_term(MassParameters(1.0, 1.0, c=2.0), 0.3)
    assert t3 == pytest.approx(3.0 * t1, rel=1e-14)
    assert tc == pytest.approx(4.0 * t1, rel=1e-14)


def test_neglected_term_beta_range():
    mass = MassParameters(1.0, 1.0)
    with pytest.raises(ValueError, match="beta"):
        neglected_term(mass, 1.0)
    with pytest.raises(ValueError, match="beta"):
        neglected_term(mass, -0.1)


def test_neglected_term_scan_slope_is_quartic():
    mass = MassParameters(1.0, 1.0)
    scan = neglected_term_scan(mass, [0.01, 0.02, 0.04, 0.08])
    assert scan.fitted_slope == pytest.approx(4.0, abs=0.01)
    assert scan.fit_range == (0.01, 0.08)
    assert len(scan.points) == 4


def test_neglected_term_scan_validation():
    mass = MassParameters(1.0, 1.0)
    with pytest.raises(ValueError, match="inside"):
        neglected_term_scan(mass, [0.0, 0.1, 0.2])
    with pytest.raises(ValueError, match="ascending"):
        neglected_term_scan(mass, [0.1, 0.05, 0.2])
    with pytest.raises(ValueError, match="0.2"):
        neglected_term_scan(mass, [0.1, 0.2, 0.5])


# -- convergence certification ---------------------------------------------------


def test_derivative_slopes_gaussian():
    spec = spec_for(GaussianProfile(1.0, 0.2, 0.8), 0.6)
    slopes = derivative_slopes(spec, 0, sample_events(6, 43))
    for name in ("d_tau", "d_z", "d2_tau", "d2_z"):
        assert 1.9 <= slopes[name] <= 2.1, (name, slopes[name])
    for name in ("d_x", "d_y", "d2_x", "d2_y"):
        assert slopes[name] is None


def test_derivative_slopes_static_constant_all_degenerate():
    # beta = 0 plus a constant profile: the envelope is a constant function
    spec = spec_for(ConstantProfile(1.0), 0.0)
    slopes = derivative_slopes(spec, 0, sample_events(4, 47))
    assert all(s is None for s in slopes.values())


def test_derivative_slopes_moving_constant_profile():
    spec = spec_for(ConstantProfile(1.0), 0.6)
    slopes = derivative_slopes(spec, 0, sample_events(4, 53))
    for name in ("d_tau", "d_z", "d2_tau", "d2_z"):
        assert slopes[name] is not None
        assert 1.9 <= slopes[name] <= 2.1


def test_derivative_slopes_spacing_validation():
    spec = spec_for(GaussianProfile(1.0, 0.0, 1.0), 0.3)
    with pytest.raises(ValueError, match="decreasing"):
        derivative_slopes(spec, 0, sample_events(3, 5), hs=[0.01, 0.02, 0.04])
    with pytest.raises(ValueError, match="decreasing"):
        derivative_slopes(spec, 0, sample_events(3, 5), hs=[0.01, 0.005])


def test_fit_loglog_slope():
    xs = [1.0, 2.0, 4.0, 8.0]
    ys = [3.0 * x**1.7 for x in xs]
    assert fit_loglog_slope(xs, ys) == pytest.approx(1.7, rel=1e-12)
    with pytest.raises(ValueError, match="positive"):
        fit_loglog_slope([1.0, 2.0], [1.0, -1.0])
    with pytest.raises(ValueError, match="at least 2"):
        fit_loglog_slope([1.0], [1.0])


# -- event sampling and report plumbing ------------------------------------------


def test_sample_events_deterministic():
    a = sample_events(10, 99)
    b = sample_events(10, 99)
    c = sample_events(10, 100)
    assert a == b
    assert a != c
    assert all(-1.0 <= e.z <= 1.0 and -1.0 <= e.tau <= 1.0 for e in a)


def test_sample_events_custom_box():
    evs = sample_events(50, 7, z=(2.0, 3.0), tau=(-0.5, 0.0))
    assert all(2.0 <= e.z <= 3.0 for e in evs)
    assert all(-0.5 <= e.tau <= 0.0 for e in evs)
    with pytest.raises(ValueError, match="at least one"):
        sample_events(0, 1)


def test_residual_report_validation_and_dict():
    with pytest.raises(ValueError, match="max_abs"):
        ResidualReport("x", 3, 1e-12, 1e-10, None, {})
    rep = ResidualReport("x", 3, 1e-10, 1e-12, 0.01, {"beta": 0.5})
    d = rep.to_dict()
    assert d["equation_id"] == "x"
    assert d["stencil_spacing"] == 0.01


def test_scan_result_needs_three_points():
    with pytest.raises(ValueError, match="3 points"):
        ScanResult(((1.0, 1.0), (2.0, 2.0)), 1.0, (1.0, 2.0))
