import numpy as np
import pytest
from conftest import catalog_profiles, spec_for
from numpy.testing import assert_allclose

from boostfield import (
    ConstantProfile,
    Event,
    FieldSpec,
    GaussianProfile,
    HarmonicComponent,
    LorentzBoost,
    MassParameters,
    boost_event,
    dumps_spec,
    load_spec,
    loads_spec,
    save_spec,
    spec_from_dict,
)


def two_harmonic_spec(beta=0.6):
    return FieldSpec(
        (
            HarmonicComponent(0.0, ConstantProfile(0.4)),
            HarmonicComponent(1.7, GaussianProfile(1.0 + 0.5j, 0.1, 0.9)),
        ),
        LorentzBoost(beta),
    )


def test_psi_rest_is_plain_harmonic_sum():
    spec = two_harmonic_spec()
    e = Event(0.0, 0.0, 0.3, 1.1)
    manual = 0.4 + spec.components[1].profile.value(0.3) * np.exp(1.7j * 1.1)
    assert spec.psi_rest(e) == pytest.approx(manual, rel=1e-14)
    assert spec.signal_rest(e) == pytest.approx(manual.real, rel=1e-14)


def test_lab_field_equals_rest_field_at_boosted_event():
    # the same number read off in either frame, for every profile kind
    rng = np.random.default_rng(9)
    for name, p in catalog_profiles().items():
        spec = spec_for(p, 0.6)
        for _ in range(50):
            e = Event(*rng.uniform(-1.0, 1.0, size=4))
            lab = spec.psi_lab(e)
            rest = spec.psi_rest(boost_event(e, spec.boost))
            assert abs(lab - rest) < 1e-12 * (1.0 + abs(lab)), name


def test_harmonic_lab_is_envelope_times_carrier():
    spec = two_harmonic_spec()
    e = Event(0.0, 0.0, -0.4, 0.8)
    for k, comp in enumerate(spec.components):
        expected = spec.envelope(k, e) * np.exp(1j * comp.omega * e.tau)
        assert spec.harmonic_lab(k, e) == pytest.approx(expected, rel=1e-14)
    total = sum(spec.harmonic_lab(k, e) for k in range(2))
    assert spec.psi_lab(e) == pytest.approx(total, rel=1e-13)


def test_scalar_density_is_frame_invariant_along_drift():
    # xi is constant along z = z0 + beta * tau, so the density rides along
    spec = two_harmonic_spec(0.7)
    beta = spec.boost.beta
    e0 = Event(0.0, 0.0, 0.25, 0.0)
    d0 = spec.scalar_density(e0)
    for dtau in (0.5, 2.0, -1.5):
        e1 = Event(0.0, 0.0, 0.25 + beta * dtau, dtau)
        assert spec.scalar_density(e1) == pytest.approx(d0, rel=1e-12)


def test_scalar_density_positive_and_summed():
    spec = two_harmonic_spec()
    e = Event(0.0, 0.0, 0.3, 0.9)
    xi = boost_event(e, spec.boost).z
    manual = sum(abs(c.profile.value(xi)) ** 2 for c in spec.components)
    assert spec.scalar_density(e) == pytest.approx(manual, rel=1e-13)


def test_on_axis_helpers_match_scalar_paths():
    spec = two_harmonic_spec()
    z = np.linspace(-1.0, 1.0, 17)
    tau = 0.45
    env = spec.envelope_on_axis(1, z, tau)
    har = spec.harmonic_on_axis(1, z, tau)
    psi = spec.psi_lab_on_axis(z, tau)
    for i, zi in enumerate(z):
        e = Event(0.0, 0.0, float(zi), tau)
        assert env[i] == pytest.approx(spec.envelope(1, e), rel=1e-13)
        assert har[i] == pytest.approx(spec.harmonic_lab(1, e), rel=1e-13)
        assert psi[i] == pytest.approx(spec.psi_lab(e), rel=1e-13)


def test_harmonic_dtau_matches_stencil():
    spec = two_harmonic_spec(0.55)
    z = np.linspace(-0.8, 0.8, 9)
    h = 1e-6
    analytic = spec.harmonic_dtau_on_axis(1, z, 0.3)
    fd = (spec.harmonic_on_axis(1, z, 0.3 + h) - spec.harmonic_on_axis(1, z, 0.3 - h)) / (
        2.0 * h
    )
    assert_allclose(analytic, fd, rtol=1e-8, atol=1e-8)


def test_mean_component_must_be_real():
    with pytest.raises(ValueError, match="real profile"):
        HarmonicComponent(0.0, ConstantProfile(1.0j))
    HarmonicComponent(0.0, ConstantProfile(1.0))  # fine


def test_omega_validation():
    with pytest.raises(ValueError, match="omega"):
        HarmonicComponent(-1.0, ConstantProfile(1.0))
    with pytest.raises(ValueError, match="omega"):
        HarmonicComponent(np.nan, ConstantProfile(1.0))


def test_omegas_must_strictly_increase():
    comps = (
        HarmonicComponent(1.0, ConstantProfile(1.0)),
        HarmonicComponent(1.0, ConstantProfile(2.0)),
    )
    with pytest.raises(ValueError, match="strictly increasing"):
        FieldSpec(comps, LorentzBoost(0.0))


def test_empty_spec_rejected():
    with pytest.raises(ValueError, match="at least one"):
        FieldSpec((), LorentzBoost(0.0))


def test_spec_json_round_trip():
    spec = two_harmonic_spec()
    again = loads_spec(dumps_spec(spec))
    assert again.boost == spec.boost
    assert again.components == spec.components
    e = Event(0.0, 0.0, 0.2, -0.7)
    assert again.psi_lab(e) == spec.psi_lab(e)


def test_spec_file_round_trip(tmp_path):
    spec = two_harmonic_spec()
    path = tmp_path / "spec.json"
    save_spec(spec, path)
    assert load_spec(path).components == spec.components


@pytest.mark.parametrize(
    "mangle,err",
    [
        (lambda d: d.update(extra=1), "unknown field-spec keys"),
        (lambda d: d["boost"].update(gamma=1.25), "unknown boost keys"),
        (lambda d: d["components"][0].update(label="x"), "unknown component keys"),
        (lambda d: d.pop("boost"), "needs 'boost'"),
        (lambda d: d["components"][0].pop("omega"), "needs 'omega'"),
    ],
)
def test_strict_spec_parsing(mangle, err):
    d = two_harmonic_spec().to_dict()
    mangle(d)
    with pytest.raises(ValueError, match=err):
        spec_from_dict(d)


def test_mass_parameters():
    mp = MassParameters(2.0, 0.5, c=3.0)
    assert mp.omega == pytest.approx(12.0)
    with pytest.raises(ValueError, match="positive"):
        MassParameters(-1.0, 1.0)
    with pytest.raises(ValueError, match="positive"):
        MassParameters(1.0, 0.0)
