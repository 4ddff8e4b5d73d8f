"""Lorentz kinematics along a shared z axis.

Two inertial frames appear throughout this package: the rest frame of the
field object (primed coordinates) and the lab frame, which moves with
dimensionless velocity ``beta`` along the common z axis.  Time coordinates
are stored in length units, i.e. ``tau`` is c times the clock reading, so
every transformation below is dimensionless:

    x' = x
    y' = y
    z' = gamma * (z - beta * tau)
    tau' = gamma * (tau - beta * z)

with ``gamma = 1 / sqrt(1 - beta**2)``.  ``beta > 0`` means the lab frame
moves along +z relative to the rest frame; equivalently, an object at rest
in the primed frame drifts toward +z in the lab at speed ``beta``.  The
inverse transformation is the same map with ``-beta``.

For a lab event (z, tau) the comoving coordinates are

    xi  = gamma * (z - beta * tau)          (identical to z')
    eta = gamma * (tau - beta * z) - tau    (rest-frame time minus lab time)

``eta`` isolates the part of the rest-frame phase that a lab carrier wave
exp(i*omega*tau) does not already account for: eta + tau = tau'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class LorentzBoost:
    """Boost tying the lab frame to the rest frame.

    ``beta`` is the frame velocity in units of c and must satisfy
    |beta| < 1.  ``gamma`` is derived.  ``c`` is carried along purely as a
    unit scale for callers working in physical units; the coordinate maps
    never use it because tau is already a length.
    """

    beta: float
    c: float = 1.0
    gamma: float = field(init=False)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.beta) and abs(self.beta) < 1.0):
            raise ValueError(
                f"superluminal boost: beta={self.beta!r}, need |beta| < 1"
            )
        if not (math.isfinite(self.c) and self.c > 0.0):
            raise ValueError(f"speed constant must be positive, got {self.c!r}")
        # factored form stays accurate as |beta| -> 1, where 1 - beta**2
        # cancels catastrophically
        gamma = 1.0 / math.sqrt((1.0 - self.beta) * (1.0 + self.beta))
        object.__setattr__(self, "gamma", gamma)

    def inverse(self) -> "LorentzBoost":
        return LorentzBoost(-self.beta, self.c)


@dataclass(frozen=True)
class Event:
    """Spacetime point (x, y, z, tau); tau in length units."""

    x: float
    y: float
    z: float
    tau: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "z", "tau"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"non-finite event coordinate {name}={v!r}")


@dataclass(frozen=True)
class ComovingCoords:
    """Longitudinal rest coordinate xi and phase-lag coordinate eta."""

    xi: float
    eta: float


def boost_event(e: Event, b: LorentzBoost) -> Event:
    """Map a lab-frame event to its rest-frame coordinates."""
    return Event(
        e.x,
        e.y,
        b.gamma * (e.z - b.beta * e.tau),
        b.gamma * (e.tau - b.beta * e.z),
    )


def inverse_boost_event(e: Event, b: LorentzBoost) -> Event:
    """Map a rest-frame event back to lab coordinates."""
    return boost_event(e, b.inverse())


def comoving_coords(e: Event, b: LorentzBoost) -> ComovingCoords:
    """Comoving coordinates of a lab event: xi = z', eta = tau' - tau."""
    zp = b.gamma * (e.z - b.beta * e.tau)
    tp = b.gamma * (e.tau - b.beta * e.z)
    return ComovingCoords(zp, tp - e.tau)


def compose_boosts(b1: LorentzBoost, b2: LorentzBoost) -> LorentzBoost:
    """Boost equivalent to applying b1 and then b2 (relativistic velocity sum)."""
    if b1.c != b2.c:
        raise ValueError("cannot compose boosts with different unit scales")
    return LorentzBoost((b1.beta + b2.beta) / (1.0 + b1.beta * b2.beta), b1.c)


def interval(e: Event) -> float:
    """Invariant interval tau^2 - x^2 - y^2 - z^2 of an event."""
    return e.tau * e.tau - e.x * e.x - e.y * e.y - e.z * e.z
