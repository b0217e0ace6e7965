"""Exact stream-function solutions of the 2D vorticity-transport equation.

Every constructor returns a :class:`StreamSolution`: a vectorised complex
stream function whose real part is the physical stream function, together
with its excluded (singular) set and, where available, closed-form
velocities ``u = d(Re psi)/dy``, ``v = -d(Re psi)/dx``.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
import math
from typing import Callable, Optional

import numpy as np

from .errors import ConstructionError, DomainError, SingularPointError
from .numeric import (SINGULAR_RADIUS, FdScheme, c_cos, c_exp, c_ln, c_pow, c_tanh,
                      exp_integral_e1, tanh_pole_distance)

#: radius (physical units) around singular points that is never evaluated
EXCLUSION_RADIUS = 1e-6


class Family(str, Enum):
    GENERAL_TRAVELING = "GeneralTravelingWave"
    HARMONIC_POWER = "HarmonicPower"
    HARMONIC_COSINE = "HarmonicCosine"
    HARMONIC_LOG = "HarmonicLog"
    HARMONIC_TANH = "HarmonicTanh"
    HARMONIC_EXP = "HarmonicExp"
    REAL_QUADRATIC = "RealQuadratic"
    REAL_EXP = "RealExp"
    OSEEN_RANKINE = "OseenRankine"
    TRANSFORMED = "Transformed"
    CUSTOM = "Custom"


HARMONIC_KINDS = ("power", "cosine", "log", "tanh", "exp")

_HARMONIC_FAMILY = {
    "power": Family.HARMONIC_POWER,
    "cosine": Family.HARMONIC_COSINE,
    "log": Family.HARMONIC_LOG,
    "tanh": Family.HARMONIC_TANH,
    "exp": Family.HARMONIC_EXP,
}


@dataclass(frozen=True)
class WaveParams:
    """Traveling-wave coefficients.

    Defaults are the values used for all figures: ``k1 = k2 = 2``,
    ``d0 = 0``, ``omega = 0.1``; the Reynolds number defaults to 1.
    """

    k1: float = 2.0
    k2: float = 2.0
    d0: float = 0.0
    omega: float = 0.1
    re_number: float = 1.0
    c1: complex = 0.0
    c2: complex = 0.0
    c3: complex = 0.0
    c4: complex = 0.0

    def __post_init__(self):
        if not self.re_number > 0:
            raise ConstructionError("Reynolds number must be positive")

    @property
    def wave_norm2(self):
        return self.k1 ** 2 + self.k2 ** 2

    def replace(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        out = {}
        for name in ("k1", "k2", "d0", "omega", "re_number",
                     "c1", "c2", "c3", "c4"):
            v = getattr(self, name)
            if isinstance(v, complex):
                v = [v.real, v.imag] if v.imag else v.real
            out[name] = v
        return out


def _inf_distance(x, y, t):
    return np.full(np.broadcast(x, y, t).shape, np.inf)


@dataclass(frozen=True, eq=False)
class StreamSolution:
    """An evaluable complex stream function ``psi(x, y, t)``.

    The physical stream function is ``Re psi``. ``distance_fn`` returns the
    physical distance to the spatial singular set (``inf`` when there is
    none) and ``t_min`` the earliest valid time.
    """

    family: Family
    label: str
    psi_fn: Callable
    params: Optional[WaveParams] = None
    extras: dict = field(default_factory=dict)
    velocity_fn: Optional[Callable] = None
    distance_fn: Callable = _inf_distance
    t_min: float = -math.inf
    length_scale: float = 1.0
    exclusion_radius: float = EXCLUSION_RADIUS
    propagation: Optional[tuple] = None
    harmonic: bool = False
    seed: Optional["StreamSolution"] = None
    group: object = None

    @classmethod
    def from_function(cls, fn, label="custom", *, velocity_fn=None,
                      distance_fn=None, length_scale=1.0, t_min=-math.inf):
        """Wrap an arbitrary vectorised ``fn(x, y, t)`` as a solution
        candidate (useful for negative controls)."""
        return cls(Family.CUSTOM, label, fn, velocity_fn=velocity_fn,
                   distance_fn=distance_fn or _inf_distance,
                   length_scale=length_scale, t_min=t_min)

    # -- singular set ---------------------------------------------------
    def singular_distance(self, x, y, t):
        return np.asarray(self.distance_fn(x, y, t), dtype=float)

    def singular_mask(self, x, y, t):
        x, y, t = np.broadcast_arrays(*(np.asarray(v, float) for v in (x, y, t)))
        return ((self.singular_distance(x, y, t) < self.exclusion_radius)
                | (t < self.t_min))

    def _check(self, x, y, t):
        bad = self.singular_mask(x, y, t)
        if np.any(bad):
            x, y, t = np.broadcast_arrays(*(np.asarray(v, float) for v in (x, y, t)))
            pts = np.column_stack([x[bad], y[bad], t[bad]])
            raise SingularPointError(
                "%s is singular at (x, y, t) = %r" % (self.label, tuple(pts[0])),
                points=pts)

    # -- evaluation -----------------------------------------------------
    def evaluate(self, x, y, t):
        """Complex stream function; raises on excluded points."""
        self._check(x, y, t)
        return self.psi_fn(x, y, t)

    __call__ = evaluate

    def real(self, x, y, t):
        return np.real(self.evaluate(x, y, t))

    @property
    def has_analytic_velocity(self):
        return self.velocity_fn is not None

    def analytic_velocity(self, x, y, t):
        if self.velocity_fn is None:
            raise AttributeError("%s has no closed-form velocity" % self.label)
        self._check(x, y, t)
        return self.velocity_fn(x, y, t)

    def default_scheme(self, **kwargs):
        return FdScheme.for_length(self.length_scale, **kwargs)

    def __repr__(self):
        return "StreamSolution(%s, %r)" % (self.family.value, self.label)


# --------------------------------------------------------------------------
# general traveling wave and its real specialisations
# --------------------------------------------------------------------------

def _phase_real(p, x, y, t):
    return p.k1 * x + p.k2 * y + p.d0 - p.omega * t


def make_general_traveling(p, *, family=Family.GENERAL_TRAVELING, label="eq10"):
    """psi = C1 exp(-a z) + C2 z^2 + C3 z + C4, z = k1 x + k2 y + d0 - omega t,
    a = omega Re / (k1^2 + k2^2)."""
    norm2 = p.wave_norm2
    if norm2 == 0:
        raise ConstructionError("degenerate wave vector: k1 = k2 = 0")
    rate = p.omega * p.re_number / norm2
    c1, c2, c3, c4 = (complex(c) for c in (p.c1, p.c2, p.c3, p.c4))

    def psi(x, y, t):
        z = _phase_real(p, np.asarray(x, float), y, t)
        out = c2 * z ** 2 + c3 * z + c4
        if c1 != 0:
            out = out + c1 * np.exp(-rate * z)
        return np.asarray(out, dtype=complex)

    def velocity(x, y, t):
        z = _phase_real(p, np.asarray(x, float), y, t)
        dphi = 2 * c2 * z + c3
        if c1 != 0:
            dphi = dphi - rate * c1 * np.exp(-rate * z)
        dphi = np.asarray(dphi, dtype=complex)
        return np.real(p.k2 * dphi), -np.real(p.k1 * dphi)

    if c1 != 0 and rate != 0:
        length = 1.0 / (abs(rate) * math.sqrt(norm2))
    else:
        length = 1.0  # polynomial in x, y, t: any step resolves it
    return StreamSolution(family, label, psi, params=p,
                          extras={"rate": rate}, velocity_fn=velocity,
                          length_scale=length)


def make_real_family(kind, p):
    """The two real-coefficient members: ``quadratic`` (C2 = 1) and
    ``exponential`` (C1 = 1)."""
    if kind == "quadratic":
        q = p.replace(c1=0.0, c2=1.0, c3=0.0, c4=0.0)
        return make_general_traveling(q, family=Family.REAL_QUADRATIC, label="eq40a")
    if kind == "exponential":
        q = p.replace(c1=1.0, c2=0.0, c3=0.0, c4=0.0)
        return make_general_traveling(q, family=Family.REAL_EXP, label="eq40b")
    raise ConstructionError("unknown real family %r" % (kind,))


# --------------------------------------------------------------------------
# harmonic (potential-flow) families, phase Z = k(p + jq) + d0 - omega t
# --------------------------------------------------------------------------

def _harmonic_phase(k, p, axis, x, y, t):
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    along, across = (x, y) if axis == "x" else (y, x)
    return k * along + 1j * k * across + p.d0 - p.omega * np.asarray(t, float)


def make_harmonic(kind, A=1.0, n=1.0, p=WaveParams(), *, axis="x", label=None):
    """psi = A F(k x + j k y + d0 - omega t) for F among power, cos, ln,
    tanh and exp(j .).

    ``k`` is ``p.k1``. With ``axis='y'`` the roles of x and y are swapped,
    giving the y-propagating twin of each family.
    """
    if kind not in HARMONIC_KINDS:
        raise ConstructionError("unknown harmonic kind %r (expected one of %s)"
                                % (kind, ", ".join(HARMONIC_KINDS)))
    if axis not in ("x", "y"):
        raise ConstructionError("axis must be 'x' or 'y'")
    k = float(p.k1)
    if k == 0:
        raise ConstructionError("harmonic families need k != 0")
    A = complex(A)
    n = float(n)
    polynomial = kind == "power" and n.is_integer() and n >= 0

    if kind == "power":
        def F(Z):
            return c_pow(Z, n)

        def dF(Z):
            return n * c_pow(Z, n - 1) if n != 0 else np.zeros_like(Z)
    elif kind == "cosine":
        F, dF = c_cos, (lambda Z: -np.sin(Z))
    elif kind == "log":
        F, dF = c_ln, (lambda Z: 1.0 / Z)
    elif kind == "tanh":
        F = c_tanh

        def dF(Z):
            return 1.0 - np.tanh(Z) ** 2
    else:
        def F(Z):
            return c_exp(1j * Z)

        def dF(Z):
            return 1j * np.exp(1j * Z)

    def phase(x, y, t):
        return _harmonic_phase(k, p, axis, x, y, t)

    def psi(x, y, t):
        return A * np.asarray(F(phase(x, y, t)), dtype=complex)

    def velocity(x, y, t):
        d = A * np.asarray(dF(phase(x, y, t)), dtype=complex)
        dx, dy = (k * d, 1j * k * d) if axis == "x" else (1j * k * d, k * d)
        return np.real(dy), -np.real(dx)

    def distance(x, y, t):
        Z = phase(x, y, t)
        if kind == "tanh":
            return tanh_pole_distance(Z) / abs(k)
        if kind == "log" or (kind == "power" and n < 0):
            return np.abs(Z) / abs(k)
        if kind == "power" and not polynomial:
            # branch point plus the cut along the negative real axis
            to_cut = np.where(Z.real <= 0, np.abs(Z.imag), np.abs(Z))
            return to_cut / abs(k)
        return np.full(np.shape(Z), np.inf)

    family = _HARMONIC_FAMILY[kind]
    extras = {"kind": kind, "A": A, "n": n, "axis": axis, "k": k}
    return StreamSolution(
        family, label or "harmonic-%s" % kind, psi, params=p, extras=extras,
        velocity_fn=velocity, distance_fn=distance,
        length_scale=1.0 if polynomial else 1.0 / abs(k),
        # the guards in numeric work in phase units; |dZ| = |k| |dx|
        exclusion_radius=max(EXCLUSION_RADIUS, SINGULAR_RADIUS / abs(k)) * (1 + 1e-9),
        propagation=(axis, p.omega / k), harmonic=True)


# --------------------------------------------------------------------------
# invariant radial solution: Rankine + Lamb-Oseen terms
# --------------------------------------------------------------------------

def make_oseen_rankine(C2=0.0, C3=1.0, re_number=1.0, t_min=0.05, *, label="eq28"):
    """psi = C2 ln(t / r^2) + C3 E1(Re r^2 / (4 t)), valid for t >= t_min > 0.

    The velocity is closed form:
    ``u = -2 y (C2 + C3 exp(-Re r^2/4t)) / r^2`` and
    ``v = 2 x (C2 + C3 exp(-Re r^2/4t)) / r^2``.
    """
    if not re_number > 0:
        raise ConstructionError("Reynolds number must be positive")
    if not t_min > 0:
        raise ConstructionError("t_min must be positive")
    C2 = float(C2)
    C3 = float(C3)

    def psi(x, y, t):
        x, y, t = np.broadcast_arrays(*(np.asarray(v, float) for v in (x, y, t)))
        r2 = x * x + y * y
        out = np.zeros(r2.shape)
        if C2:
            out = out + C2 * np.log(t / r2)
        if C3:
            out = out + C3 * exp_integral_e1(re_number * r2 / (4.0 * t))
        return out.astype(complex)

    def velocity(x, y, t):
        x, y, t = np.broadcast_arrays(*(np.asarray(v, float) for v in (x, y, t)))
        r2 = x * x + y * y
        strength = (C2 + C3 * np.exp(-re_number * r2 / (4.0 * t))) / r2
        return -2.0 * y * strength, 2.0 * x * strength

    def distance(x, y, t):
        return np.hypot(x, y)

    return StreamSolution(
        Family.OSEEN_RANKINE, label, psi,
        params=WaveParams(re_number=re_number),
        extras={"C2": C2, "C3": C3, "re_number": re_number},
        velocity_fn=velocity, distance_fn=distance, t_min=float(t_min),
        length_scale=min(1.0, math.sqrt(4.0 * t_min / re_number)))


def wave_speed(p):
    """Phase speed omega / k of the harmonic families (k = k1)."""
    if p.k1 == 0:
        raise DomainError("k = 0: the pattern does not propagate")
    return p.omega / p.k1
