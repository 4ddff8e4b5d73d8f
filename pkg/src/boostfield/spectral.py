"""Boxcar harmonic extraction from uniformly sampled signals.

The only averaging operator here is the plain symmetric mean

    <f>_T = (1/(2T)) * integral_{-T}^{+T} f(t) dt

evaluated by the trapezoid rule (second order in the sample spacing), with
linear interpolation at the window edges when T does not land on a sample.
No FFTs and no window functions: the window length T itself is the
resolution knob, errors from off-resonant harmonics decay like 1/T.

Extraction projects with the conjugate kernel,

    q_hat(omega) = < f(t) * exp(-i omega t) >_T,

which is the projection that returns the coefficient q of a component
q * exp(+i omega t): for such a component the integrand becomes the
constant q, while every other harmonic contributes a sinc tail bounded by
|q_other| / (|delta omega| * T).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SampledSignal:
    """Complex samples on a uniform time grid t0 + j*dt."""

    samples: np.ndarray
    dt: float
    t0: float

    def __post_init__(self) -> None:
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim != 1 or s.size < 2:
            raise ValueError("need a 1-d signal with at least 2 samples")
        if not np.all(np.isfinite(s.real) & np.isfinite(s.imag)):
            raise ValueError("signal samples must be finite")
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if not np.isfinite(self.t0):
            raise ValueError("t0 must be finite")
        object.__setattr__(self, "samples", s)

    @classmethod
    def symmetric(cls, samples, dt: float) -> "SampledSignal":
        """Signal centered on t = 0: t0 = -(n-1)*dt/2."""
        samples = np.asarray(samples, dtype=complex)
        return cls(samples, dt, -0.5 * (samples.size - 1) * dt)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.size)

    @property
    def t_end(self) -> float:
        return self.t0 + self.dt * (self.samples.size - 1)

    def max_symmetric_window(self) -> float:
        """Largest T with [-T, T] inside the sampled range."""
        T = min(-self.t0, self.t_end)
        if T <= 0:
            raise ValueError("samples do not straddle t = 0")
        return T


@dataclass(frozen=True)
class SpectrumEntry:
    omega: float
    q_hat: complex
    window_T: float


@dataclass(frozen=True)
class SpectrumEstimate:
    entries: tuple[SpectrumEntry, ...]
    residual_rms: float


def _interp_complex(t: float, times: np.ndarray, samples: np.ndarray) -> complex:
    re = np.interp(t, times, samples.real)
    im = np.interp(t, times, samples.imag)
    return complex(re, im)


def _integrate_window(sig: SampledSignal, values: np.ndarray, T: float) -> complex:
    """Trapezoid integral of `values` over [-T, T], edges interpolated."""
    if not (np.isfinite(T) and T > 0):
        raise ValueError(f"window half-width T must be positive, got {T!r}")
    slack = 1e-9 * sig.dt
    if sig.t0 > -T + slack or sig.t_end < T - slack:
        raise ValueError(
            f"window [-{T}, {T}] not covered by samples "
            f"[{sig.t0}, {sig.t_end}]"
        )
    times = sig.times
    lo, hi = max(-T, times[0]), min(T, times[-1])
    inside = np.nonzero((times >= lo) & (times <= hi))[0]
    if inside.size == 0:
        # whole window sits between two samples
        fa = _interp_complex(lo, times, values)
        fb = _interp_complex(hi, times, values)
        return 0.5 * (fb + fa) * (hi - lo)
    first, last = inside[0], inside[-1]
    total = 0j
    if inside.size >= 2:
        total += np.trapezoid(values[first : last + 1], dx=sig.dt)
    if times[first] - lo > 0:
        fa = _interp_complex(lo, times, values)
        total += 0.5 * (values[first] + fa) * (times[first] - lo)
    if hi - times[last] > 0:
        fb = _interp_complex(hi, times, values)
        total += 0.5 * (fb + values[last]) * (hi - times[last])
    return complex(total)


def time_average(sig: SampledSignal, T: float) -> complex:
    """Symmetric boxcar mean <f>_T over [-T, T]."""
    return _integrate_window(sig, sig.samples, T) / (2.0 * T)


def extract_harmonic(sig: SampledSignal, omega: float, T: float) -> complex:
    """Coefficient estimate q_hat(omega) = <f(t) exp(-i omega t)>_T."""
    if not np.isfinite(omega):
        raise ValueError(f"omega must be finite, got {omega!r}")
    demodulated = sig.samples * np.exp(-1j * omega * sig.times)
    return _integrate_window(sig, demodulated, T) / (2.0 * T)


def scan_spectrum(sig: SampledSignal, omegas, T: float) -> SpectrumEstimate:
    """Extract q_hat at each probe frequency and report the residual RMS.

    The residual is signal minus reconstruction, measured over the samples
    inside [-T, T].  An empty probe list yields the RMS of the signal
    itself.
    """
    entries = tuple(
        SpectrumEntry(float(w), extract_harmonic(sig, float(w), T), float(T))
        for w in omegas
    )
    times = sig.times
    mask = (times >= -T) & (times <= T)
    window_t = times[mask]
    recon = np.zeros(window_t.size, dtype=complex)
    for ent in entries:
        recon += ent.q_hat * np.exp(1j * ent.omega * window_t)
    resid = sig.samples[mask] - recon
    rms = float(np.sqrt(np.mean(np.abs(resid) ** 2))) if window_t.size else 0.0
    return SpectrumEstimate(entries, rms)


def reconstruct(est: SpectrumEstimate, times) -> np.ndarray:
    """Sum of the estimated harmonics q_hat * exp(i omega t) at given times."""
    times = np.asarray(times, dtype=float)
    out = np.zeros(times.shape, dtype=complex)
    for ent in est.entries:
        out += ent.q_hat * np.exp(1j * ent.omega * times)
    return out


def sample_rest_signal(spec, z: float, T: float, dt: float, pad: float = 0.0) -> SampledSignal:
    """Sample a field spec's rest-frame psi at fixed z over t in [-T-pad, T+pad]."""
    if not (np.isfinite(T) and T > 0 and np.isfinite(dt) and dt > 0):
        raise ValueError("need positive T and dt")
    half = T + pad
    n = int(np.floor(half / dt))
    times = dt * np.arange(-n, n + 1)
    total = np.zeros(times.size, dtype=complex)
    for comp in spec.components:
        total += comp.profile.value(z) * np.exp(1j * comp.omega * times)
    return SampledSignal(total, dt, times[0])
