"""Residual certification of the envelope and wave identities.

Everything here evaluates pointwise residuals of the differential identities
a boosted harmonic satisfies, in multiplied-through form (no division by the
field), and reports them normalized by the local term scale: a residual of
1e-16 next to terms of size 1e+2 is round-off, the same residual next to
terms of 1e-18 is not.  Reports therefore quote

    r(e) = |sum of equation terms at e| / (sum of |each term| + floor)

so a tolerance like 1e-10 means ten million times round-off headroom,
independent of field amplitude.

The derivative bundle of the lab-frame envelope b(e) = q(xi) e^{i w eta},
with xi = g(z - v t), eta = g(t - v z) - t, g = gamma, v = beta, w = omega:

    b_t  = (-g v q' + i w (g-1) q) e^{i w eta}
    b_z  = ( g q'  - i g w v  q) e^{i w eta}
    b_tt = (g^2 v^2 q'' - 2 i g (g-1) w v q' - w^2 (g-1)^2 q) e^{i w eta}
    b_zz = (g^2 q'' - g^2 w^2 v^2 q - 2 i g^2 w v q') e^{i w eta}

Transverse derivatives vanish for the profile catalog.  Central-difference
stencils of first and second order provide the independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Literal

import numpy as np

from .fields import FieldSpec, MassParameters
from .kinematics import Event, boost_event, comoving_coords

Axis = Literal["x", "y", "z", "tau"]

_AXES = ("x", "y", "z", "tau")


@dataclass(frozen=True)
class DerivativeBundle:
    """First and second partial derivatives of a complex field at one event."""

    d_tau: complex
    d_x: complex
    d_y: complex
    d_z: complex
    d2_tau: complex
    d2_x: complex
    d2_y: complex
    d2_z: complex

    def laplacian(self) -> complex:
        return self.d2_x + self.d2_y + self.d2_z


@dataclass(frozen=True)
class ResidualReport:
    """Normalized residual statistics of one identity over an event sample."""

    equation_id: str
    sample_count: int
    max_abs: float
    rms: float
    stencil_spacing: float | None
    metadata: dict

    def __post_init__(self) -> None:
        if not (self.max_abs >= self.rms >= 0.0):
            raise ValueError(
                f"need max_abs >= rms >= 0, got {self.max_abs!r}, {self.rms!r}"
            )
        if self.sample_count < 1:
            raise ValueError("report needs at least one sample")

    def to_dict(self) -> dict:
        return {
            "equation_id": self.equation_id,
            "sample_count": self.sample_count,
            "max_abs": self.max_abs,
            "rms": self.rms,
            "stencil_spacing": self.stencil_spacing,
            "metadata": self.metadata,
        }


@dataclass(frozen=True)
class ScanResult:
    """Log-log slope fit of a scalar quantity against a parameter."""

    points: tuple[tuple[float, float], ...]
    fitted_slope: float
    fit_range: tuple[float, float]

    def __post_init__(self) -> None:
        if len(self.points) < 3:
            raise ValueError("need at least 3 points for a slope fit")

    def to_dict(self) -> dict:
        return {
            "points": [[b, v] for b, v in self.points],
            "fitted_slope": self.fitted_slope,
            "fit_range": list(self.fit_range),
        }


def fd_partial(
    field: Callable[[Event], complex], e: Event, axis: Axis, order: int, h: float
) -> complex:
    """Central-difference partial of a scalar field along one coordinate axis.

    order 1: (f(+h) - f(-h)) / 2h;  order 2: (f(+h) - 2 f + f(-h)) / h^2.
    """
    if axis not in _AXES:
        raise ValueError(f"axis must be one of {_AXES}, got {axis!r}")
    if order not in (1, 2):
        raise ValueError(f"stencil order must be 1 or 2, got {order!r}")
    if not (math.isfinite(h) and h > 0):
        raise ValueError(f"stencil spacing must be positive, got {h!r}")
    up = field(replace(e, **{axis: getattr(e, axis) + h}))
    dn = field(replace(e, **{axis: getattr(e, axis) - h}))
    if order == 1:
        out = (up - dn) / (2.0 * h)
    else:
        out = (up - 2.0 * field(e) + dn) / (h * h)
    out = complex(out)
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise ValueError(f"stencil produced non-finite value at {e!r}")
    return out


def analytic_envelope_derivatives(spec: FieldSpec, k: int, e: Event) -> DerivativeBundle:
    """Closed-form derivative bundle of envelope k at a lab event."""
    comp = spec.components[k]
    b = spec.boost
    g, v, w = b.gamma, b.beta, comp.omega
    cc = comoving_coords(e, b)
    q = complex(comp.profile.value(cc.xi))
    qz = complex(comp.profile.dz(cc.xi))
    qzz = complex(comp.profile.dzz(cc.xi))
    ph = complex(np.exp(1j * w * cc.eta))
    zero = 0j
    return DerivativeBundle(
        d_tau=(-g * v * qz + 1j * w * (g - 1.0) * q) * ph,
        d_x=zero,
        d_y=zero,
        d_z=(g * qz - 1j * g * w * v * q) * ph,
        d2_tau=(
            g * g * v * v * qzz
            - 2j * g * (g - 1.0) * w * v * qz
            - w * w * (g - 1.0) ** 2 * q
        )
        * ph,
        d2_x=zero,
        d2_y=zero,
        d2_z=(g * g * qzz - g * g * w * w * v * v * q - 2j * g * g * w * v * qz) * ph,
    )


def fd_envelope_bundle(spec: FieldSpec, k: int, e: Event, h: float) -> DerivativeBundle:
    """Stencil derivative bundle of envelope k, for cross-checking."""
    f = lambda ev: spec.envelope(k, ev)
    return DerivativeBundle(
        d_tau=fd_partial(f, e, "tau", 1, h),
        d_x=fd_partial(f, e, "x", 1, h),
        d_y=fd_partial(f, e, "y", 1, h),
        d_z=fd_partial(f, e, "z", 1, h),
        d2_tau=fd_partial(f, e, "tau", 2, h),
        d2_x=fd_partial(f, e, "x", 2, h),
        d2_y=fd_partial(f, e, "y", 2, h),
        d2_z=fd_partial(f, e, "z", 2, h),
    )


_SCALE_FLOOR = 1e-30


def _finish_report(
    equation_id: str,
    residuals: list[float],
    h: float | None,
    metadata: dict,
) -> ResidualReport:
    arr = np.asarray(residuals, dtype=float)
    return ResidualReport(
        equation_id=equation_id,
        sample_count=int(arr.size),
        max_abs=float(arr.max()),
        rms=float(np.sqrt(np.mean(arr**2))),
        stencil_spacing=h,
        metadata=metadata,
    )


def _filter_events(
    spec: FieldSpec, k: int, events: list[Event], eps_q: float
) -> tuple[list[Event], float]:
    """Drop events where the envelope modulus is negligibly small."""
    comp = spec.components[k]
    b = spec.boost
    mods = [abs(complex(comp.profile.value(comoving_coords(e, b).xi))) for e in events]
    qmax = max(mods) if mods else 0.0
    if qmax == 0.0:
        raise ValueError("envelope vanishes on the whole event sample")
    kept = [e for e, m in zip(events, mods) if m > eps_q * qmax]
    if not kept:
        raise ValueError("no events with envelope modulus above threshold")
    return kept, qmax


def _base_metadata(spec: FieldSpec, k: int, extra: dict | None = None) -> dict:
    comp = spec.components[k]
    md = {
        "beta": spec.boost.beta,
        "omega": comp.omega,
        "profile": comp.profile.kind,
        "normalization": "local_term_scale",
    }
    if extra:
        md.update(extra)
    return md


def envelope_equation_residual(
    spec: FieldSpec,
    k: int,
    events: list[Event],
    eps_q: float = 1e-8,
    derivatives: Literal["analytic", "fd"] = "analytic",
    h: float | None = None,
) -> ResidualReport:
    """Residual of the first-order envelope identity of harmonic k.

    The boosted envelope b satisfies exactly

        -i gamma b_t + (1/2w) lap b = [ (1/2w)(lap q / q) + (w/2)(gamma-1)^2 ] b

    where lap is the lab Laplacian and q the profile evaluated at xi.  The
    residual is evaluated multiplied through by q (the curvature term uses
    lap q * e^{i w eta} directly), so profile nodes cost nothing.
    """
    comp = spec.components[k]
    b = spec.boost
    g, v, w = b.gamma, b.beta, comp.omega
    if w == 0.0:
        raise ValueError("mean component has no envelope equation")
    kept, _ = _filter_events(spec, k, events, eps_q)
    if derivatives == "fd" and h is None:
        h = comp.profile.characteristic_length / 100.0
    residuals = []
    for e in kept:
        cc = comoving_coords(e, b)
        ph = complex(np.exp(1j * w * cc.eta))
        q = complex(comp.profile.value(cc.xi))
        psi_b = q * ph
        if derivatives == "analytic":
            bun = analytic_envelope_derivatives(spec, k, e)
            lap_q = g * g * complex(comp.profile.dzz(cc.xi))  # transverse parts vanish
        elif derivatives == "fd":
            bun = fd_envelope_bundle(spec, k, e, h)
            prof_field = lambda ev: complex(
                comp.profile.value(comoving_coords(ev, b).xi)
            )
            lap_q = (
                fd_partial(prof_field, e, "x", 2, h)
                + fd_partial(prof_field, e, "y", 2, h)
                + fd_partial(prof_field, e, "z", 2, h)
            )
        else:
            raise ValueError(f"derivatives must be 'analytic' or 'fd', got {derivatives!r}")
        t1 = -1j * g * bun.d_tau
        t2 = bun.laplacian() / (2.0 * w)
        t3 = -(lap_q * ph) / (2.0 * w)
        t4 = -(w / 2.0) * (g - 1.0) ** 2 * psi_b
        scale = abs(t1) + abs(t2) + abs(t3) + abs(t4) + _SCALE_FLOOR
        residuals.append(abs(t1 + t2 + t3 + t4) / scale)
    return _finish_report(
        "envelope",
        residuals,
        h if derivatives == "fd" else None,
        _base_metadata(
            spec,
            k,
            {"eps_q": eps_q, "derivatives": derivatives, "events_given": len(events)},
        ),
    )


def schrodinger_residual(
    spec: FieldSpec,
    k: int,
    mass: MassParameters,
    potential: Callable,
    events: list[Event],
    gamma_mode: Literal["exact", "unity"] = "exact",
    eps_q: float = 1e-8,
) -> ResidualReport:
    """Residual of the Schrodinger form of the envelope identity.

    With U = hbar^2 u / 2m and w = m c / hbar the envelope identity reads

        -i hbar c G b_t + (hbar^2/2m) lap b
            = [ (hbar^2/2m) u + m c^2 (G-1)^2 / 2 ] b

    exactly when G = gamma ("exact" mode).  "unity" mode sets G = 1, the
    static-limit equation; its residual is the relativistic leftovers and
    shrinks as the boost slows.

    The potential u(x, y, z) must reproduce lap q / q at every sampled
    event (time-separability); a mismatch raises rather than producing a
    silently meaningless residual.
    """
    if gamma_mode not in ("exact", "unity"):
        raise ValueError(f"gamma_mode must be 'exact' or 'unity', got {gamma_mode!r}")
    comp = spec.components[k]
    b = spec.boost
    g, v, w = b.gamma, b.beta, comp.omega
    if w == 0.0:
        raise ValueError("mean component has no envelope equation")
    if abs(w - mass.omega) > 1e-9 * max(w, mass.omega):
        raise ValueError(
            f"component omega {w} is not the carrier m c / hbar = {mass.omega}"
        )
    kept, _ = _filter_events(spec, k, events, eps_q)
    hbar, m, c = mass.hbar, mass.m, mass.c
    geff = g if gamma_mode == "exact" else 1.0
    residuals = []
    for e in kept:
        cc = comoving_coords(e, b)
        ph = complex(np.exp(1j * w * cc.eta))
        q = complex(comp.profile.value(cc.xi))
        psi_b = q * ph
        lap_ratio = g * g * complex(comp.profile.dzz(cc.xi)) / q if q != 0 else 0j
        u = complex(potential(e.x, e.y, e.z))
        if abs(lap_ratio - u) > 1e-6 * (1.0 + abs(lap_ratio) + abs(u)):
            raise ValueError(
                "potential is not the profile's curvature ratio at "
                f"{e!r}: u={u!r} vs lap q / q={lap_ratio!r}; "
                "the profile does not separate in time under this boost"
            )
        bun = analytic_envelope_derivatives(spec, k, e)
        t1 = -1j * hbar * c * geff * bun.d_tau
        t2 = (hbar * hbar / (2.0 * m)) * bun.laplacian()
        t3 = -(hbar * hbar / (2.0 * m)) * u * psi_b
        t4 = -(m * c * c * (geff - 1.0) ** 2 / 2.0) * psi_b
        scale = abs(t1) + abs(t2) + abs(t3) + abs(t4) + _SCALE_FLOOR
        residuals.append(abs(t1 + t2 + t3 + t4) / scale)
    return _finish_report(
        "schrodinger",
        residuals,
        None,
        _base_metadata(
            spec,
            k,
            {
                "eps_q": eps_q,
                "gamma_mode": gamma_mode,
                "events_given": len(events),
                "m": m,
                "hbar": hbar,
                "c": c,
            },
        ),
    )


def klein_gordon_residual(
    spec: FieldSpec,
    k: int,
    events: list[Event],
    mass_scalar: float | None = None,
    eps_q: float = 1e-8,
) -> ResidualReport:
    """Residual of the second-order identity for the full harmonic psi.

    The harmonic psi = q(xi) e^{i w tau'} satisfies exactly

        psi_tt - lap psi + [ (lap q - v^2 q_zz)/q + w^2 ] psi = 0

    with lab derivatives of q throughout.  When ``mass_scalar`` is given it
    replaces the bracket (caller asserts the field has that constant
    scalar, e.g. plane waves); when None the bracket is evaluated from the
    profile, multiplied through by q.
    """
    comp = spec.components[k]
    b = spec.boost
    g, v, w = b.gamma, b.beta, comp.omega
    if w == 0.0:
        raise ValueError("mean component has no envelope equation")
    kept, _ = _filter_events(spec, k, events, eps_q)
    residuals = []
    for e in kept:
        cc = comoving_coords(e, b)
        carrier = complex(np.exp(1j * w * e.tau))
        ph = complex(np.exp(1j * w * cc.eta))
        q = complex(comp.profile.value(cc.xi))
        psi_b = q * ph
        psi = psi_b * carrier
        bun = analytic_envelope_derivatives(spec, k, e)
        psi_tt = (bun.d2_tau + 2j * w * bun.d_tau - w * w * psi_b) * carrier
        lap_psi = bun.laplacian() * carrier
        if mass_scalar is None:
            qzz = complex(comp.profile.dzz(cc.xi))
            lab_lap_q = g * g * qzz
            lab_qzz = g * g * qzz
            s_term = (lab_lap_q - v * v * lab_qzz) * ph * carrier + w * w * psi
        else:
            s_term = mass_scalar * psi
        t1, t2, t3 = psi_tt, -lap_psi, s_term
        scale = abs(t1) + abs(t2) + abs(t3) + _SCALE_FLOOR
        residuals.append(abs(t1 + t2 + t3) / scale)
    return _finish_report(
        "klein_gordon",
        residuals,
        None,
        _base_metadata(
            spec,
            k,
            {
                "eps_q": eps_q,
                "mass_scalar": mass_scalar,
                "events_given": len(events),
            },
        ),
    )


def scalar_invariance_check(
    spec: FieldSpec, k: int, events: list[Event], eps_q: float = 1e-8
) -> ResidualReport:
    """Frame agreement of the curvature scalar of harmonic k.

    Compares (lap q - v^2 q_zz)/q evaluated with lab derivatives against
    the rest-frame Laplacian ratio lap' q' / q' at the boosted event.  The
    two are the same number; the report shows how close to round-off the
    implementation keeps them.
    """
    comp = spec.components[k]
    b = spec.boost
    g, v = b.gamma, b.beta
    kept, _ = _filter_events(spec, k, events, eps_q)
    residuals = []
    for e in kept:
        cc = comoving_coords(e, b)
        q = complex(comp.profile.value(cc.xi))
        qzz = complex(comp.profile.dzz(cc.xi))
        lhs = (g * g * qzz - v * v * g * g * qzz) / q
        rp = boost_event(e, b)
        qp = complex(comp.profile.value(rp.z))
        rhs = complex(comp.profile.dzz(rp.z)) / qp
        scale = abs(lhs) + abs(rhs) + _SCALE_FLOOR
        residuals.append(abs(lhs - rhs) / scale)
    return _finish_report(
        "scalar_invariance",
        residuals,
        None,
        _base_metadata(spec, k, {"eps_q": eps_q, "events_given": len(events)}),
    )


def neglected_term(mass: MassParameters, beta: float) -> float:
    """The rest-energy correction m c^2 (gamma - 1)^2 / 2 at a given beta."""
    if not (np.isfinite(beta) and 0.0 <= beta < 1.0):
        raise ValueError(f"beta must lie in [0, 1), got {beta!r}")
    gamma = 1.0 / math.sqrt(1.0 - beta * beta)
    return mass.m * mass.c**2 * (gamma - 1.0) ** 2 / 2.0


def neglected_term_scan(mass: MassParameters, betas) -> ScanResult:
    """Scan the rest-energy correction over beta and fit its log-log slope.

    The term is quartic in beta at low speed; the fitted slope makes that
    visible without trusting the algebra.
    """
    betas = [float(b) for b in betas]
    if any(b <= 0.0 or b >= 1.0 for b in betas):
        raise ValueError("scan betas must lie strictly inside (0, 1)")
    if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
        raise ValueError("scan betas must be strictly ascending")
    if sum(1 for b in betas if b <= 0.2) < 3:
        raise ValueError("need at least 3 betas in (0, 0.2] for a low-speed fit")
    points = tuple((b, neglected_term(mass, b)) for b in betas)
    slope = fit_loglog_slope([p[0] for p in points], [p[1] for p in points])
    return ScanResult(points, slope, (betas[0], betas[-1]))


def fit_loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size != ys.size or xs.size < 2:
        raise ValueError("need matching x and y with at least 2 points")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("log-log fit needs positive data")
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


_BUNDLE_FIELDS = ("d_tau", "d_x", "d_y", "d_z", "d2_tau", "d2_x", "d2_y", "d2_z")


def derivative_slopes(
    spec: FieldSpec,
    k: int,
    events: list[Event],
    hs=None,
    floor: float = 1e-12,
) -> dict[str, float | None]:
    """Convergence order of stencils against the closed-form bundle.

    For each derivative entry, fits the log-log slope of the worst-case
    stencil error over the spacing ladder ``hs``; a slope of 2 certifies
    that the closed forms are the true derivatives.  Entries where closed
    form and stencils agree below the degeneracy floor (identically zero
    derivatives: transverse axes, static limits, constant profiles) return
    None, as do entries whose finest-ladder error sits at the stencil
    round-off plateau eps * |b| / h**order, where no order can be measured.
    A degenerate entry that *disagrees* raises.
    """
    comp = spec.components[k]
    if hs is None:
        L = comp.profile.characteristic_length
        hs = [L * 1e-2, L * 5e-3, L * 2.5e-3]
    hs = [float(h) for h in hs]
    if len(hs) < 3 or any(h2 >= h1 for h1, h2 in zip(hs, hs[1:])):
        raise ValueError("need at least 3 strictly decreasing spacings")
    analytic = [analytic_envelope_derivatives(spec, k, e) for e in events]
    b_scale = max(abs(spec.envelope(k, e)) for e in events)
    eps = float(np.finfo(float).eps)
    out: dict[str, float | None] = {}
    for name in _BUNDLE_FIELDS:
        ref = max(abs(getattr(b, name)) for b in analytic)
        floor_abs = floor * (1.0 + ref)
        errs = []
        for h in hs:
            worst = 0.0
            for e, bun in zip(events, analytic):
                fd = fd_envelope_bundle(spec, k, e, h)
                worst = max(worst, abs(getattr(fd, name) - getattr(bun, name)))
            errs.append(worst)
        if max(errs) <= floor_abs:
            out[name] = None
            continue
        if min(errs) <= 0.0:
            raise ValueError(f"degenerate error ladder for {name}: {errs}")
        order = 2 if name.startswith("d2") else 1
        roundoff = eps * (1.0 + b_scale) / hs[-1] ** order
        if errs[-1] <= 100.0 * roundoff:
            out[name] = None  # truncation hidden under subtraction noise
            continue
        out[name] = fit_loglog_slope(hs, errs)
    return out


def sample_events(
    n: int,
    seed: int,
    x=(-1.0, 1.0),
    y=(-1.0, 1.0),
    z=(-1.0, 1.0),
    tau=(-1.0, 1.0),
) -> list[Event]:
    """Deterministic uniform events inside a declared bounding box."""
    if n < 1:
        raise ValueError("need at least one event")
    rng = np.random.default_rng(seed)
    cols = [rng.uniform(lo, hi, size=n) for lo, hi in (x, y, z, tau)]
    return [Event(*vals) for vals in zip(*cols)]


def separable_potential(spec: FieldSpec, k: int) -> Callable:
    """Static lab potential u(x, y, z) = lap q / q for a separable profile.

    Exists for any boost when the curvature ratio is constant (constant and
    plane-wave profiles) and for arbitrary profiles only in the static
    case.  Raises when the ratio would be time-dependent.
    """
    comp = spec.components[k]
    b = spec.boost
    g = b.gamma
    kind = comp.profile.kind
    if kind == "constant":
        return lambda x, y, z: np.zeros_like(np.asarray(z, dtype=float))
    if kind == "plane_wave":
        val = -((g * comp.profile.wavenumber) ** 2)
        return lambda x, y, z: np.full_like(np.asarray(z, dtype=float), val)
    if b.beta != 0.0:
        raise ValueError(
            f"{kind} profile has a position-dependent curvature ratio; "
            "it does not separate in time under a nonzero boost"
        )

    def u(x, y, z):
        ratio = comp.profile.curvature_ratio(z)
        ratio = np.asarray(ratio)
        if np.any(np.abs(ratio.imag) > 1e-9 * (1.0 + np.abs(ratio))):
            raise ValueError("curvature ratio is not real; no Hermitian potential")
        out = ratio.real
        return out if out.shape else float(out)

    return u
