"""One-parameter symmetry groups of the vorticity-transport equation and
their action on stream-function solutions.

Seven groups are available:

=========  ===============================================  ================
kind       point map (x, y, t, psi) ->                       generator
=========  ===============================================  ================
G1         (x e^(e/2), y e^(e/2), t e^e, psi)                x/2 dx + y/2 dy + t dt
G2         (x, y, t + e, psi)                                dt
G3         rotate (x, y) by -e t, psi + e (x^2+y^2)/2        yt dx - xt dy + r^2/2 dpsi
G4         rotate (x, y) by -e                               y dx - x dy
G_alpha    (x + e a(t), y, t, psi + e a'(t) y)               a dx + y a' dpsi
G_beta     (x, y + e b(t), t, psi - e b'(t) x)               b dy - x b' dpsi
G_gamma    (x, y, t, psi + e g(t))                           g dpsi
=========  ===============================================  ================

G3 and G4 are the exact flows of their generators (finite rotations). The
first-order maps ``(x + e y t, y - e x t)`` and ``(x + e y, y - e x)`` are
available with ``linearized=True``; they agree to O(e^2) but are neither
closed under composition nor solution-preserving for non-harmonic seeds.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
import math
import re
from typing import Callable, Optional

import numpy as np

from .catalog import Family, StreamSolution
from .errors import ConstructionError
from .numeric import richardson


class GroupKind(str, Enum):
    G1 = "G1"
    G2 = "G2"
    G3 = "G3"
    G4 = "G4"
    G_ALPHA = "Galpha"
    G_BETA = "Gbeta"
    G_GAMMA = "Ggamma"

    @classmethod
    def parse(cls, text):
        key = text.strip().lower().replace("_", "").replace("-", "")
        aliases = {"g1": cls.G1, "g2": cls.G2, "g3": cls.G3, "g4": cls.G4,
                   "galpha": cls.G_ALPHA, "ga": cls.G_ALPHA,
                   "gbeta": cls.G_BETA, "gb": cls.G_BETA,
                   "ggamma": cls.G_GAMMA, "gg": cls.G_GAMMA}
        try:
            return aliases[key]
        except KeyError:
            raise ConstructionError("unknown group kind %r" % text) from None


FUNCTION_KINDS = ("constant", "linear", "quadratic", "sine")


@dataclass(frozen=True)
class TimeFunction:
    """A function of time with its exact derivative.

    Built-in vocabulary: ``constant`` c, ``linear`` a t, ``quadratic`` a t^2
    and ``sine`` a sin(b t). ``custom`` wraps a user pair (f, f').
    """

    kind: str
    a: float = 1.0
    b: float = 1.0
    f: Optional[Callable] = field(default=None, compare=False)
    df: Optional[Callable] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in FUNCTION_KINDS + ("custom",):
            raise ConstructionError("unknown time function %r" % self.kind)
        if self.kind == "custom" and (self.f is None or self.df is None):
            raise ConstructionError("custom time function needs f and df")

    @classmethod
    def custom(cls, f, df):
        return cls("custom", f=f, df=df)

    @classmethod
    def parse(cls, text):
        """Parse ``name`` or ``name(a[,b])``, e.g. ``sine(1,2)``."""
        m = re.fullmatch(r"\s*(\w+)\s*(?:\(([^)]*)\))?\s*", text)
        if not m or m.group(1) not in FUNCTION_KINDS:
            raise ConstructionError("bad time function %r (expected one of %s)"
                                    % (text, ", ".join(FUNCTION_KINDS)))
        args = [float(v) for v in m.group(2).split(",")] if m.group(2) else []
        if len(args) > 2:
            raise ConstructionError("too many arguments in %r" % text)
        return cls(m.group(1), *args)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "constant":
            return np.full(t.shape, self.a)
        if self.kind == "linear":
            return self.a * t
        if self.kind == "quadratic":
            return self.a * t * t
        if self.kind == "sine":
            return self.a * np.sin(self.b * t)
        return np.asarray(self.f(t), dtype=float)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "constant":
            return np.zeros(t.shape)
        if self.kind == "linear":
            return np.full(t.shape, self.a)
        if self.kind == "quadratic":
            return 2.0 * self.a * t
        if self.kind == "sine":
            return self.a * self.b * np.cos(self.b * t)
        return np.asarray(self.df(t), dtype=float)

    def __str__(self):
        if self.kind == "custom":
            return "custom"
        return "%s(%r,%r)" % (self.kind, self.a, self.b)


_FUNCTION_GROUPS = (GroupKind.G_ALPHA, GroupKind.G_BETA, GroupKind.G_GAMMA)


def _check_derivative(fn):
    ts = np.array([0.3, 1.1, 2.7])
    h = 1e-4
    fd = (fn(ts + h) - fn(ts - h)) / (2 * h)
    exact = fn.derivative(ts)
    scale = np.maximum(np.abs(exact), np.abs(fn(ts)) + 1.0)
    if np.any(np.abs(fd - exact) > 1e-6 * scale):
        raise ConstructionError("time function derivative is inconsistent "
                                "with finite differences")


@dataclass(frozen=True)
class GroupElement:
    kind: GroupKind
    epsilon: float
    fn: Optional[TimeFunction] = None
    linearized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", GroupKind(self.kind))
        if not math.isfinite(self.epsilon):
            raise ConstructionError("epsilon must be finite")
        needs_fn = self.kind in _FUNCTION_GROUPS
        if needs_fn and self.fn is None:
            raise ConstructionError("%s needs a time function" % self.kind.value)
        if not needs_fn and self.fn is not None:
            raise ConstructionError("%s takes no time function" % self.kind.value)
        if self.linearized and self.kind not in (GroupKind.G3, GroupKind.G4):
            raise ConstructionError("only G3 and G4 have a linearized form")
        if needs_fn:
            _check_derivative(self.fn)

    @classmethod
    def parse(cls, text):
        """Parse ``KIND:EPS[:FN]``, e.g. ``G3:0.1`` or ``Galpha:0.5:sine(1,2)``."""
        parts = text.split(":", 2)
        if len(parts) < 2:
            raise ConstructionError("group spec %r must be KIND:EPS[:FN]" % text)
        kind = GroupKind.parse(parts[0])
        try:
            eps = float(parts[1])
        except ValueError:
            raise ConstructionError("bad epsilon in %r" % text) from None
        fn = TimeFunction.parse(parts[2]) if len(parts) == 3 else None
        return cls(kind, eps, fn)

    def with_epsilon(self, epsilon):
        return replace(self, epsilon=epsilon)

    @property
    def label(self):
        text = "%s(%g" % (self.kind.value, self.epsilon)
        if self.fn is not None:
            text += ", %s" % self.fn
        if self.linearized:
            text += ", linearized"
        return text + ")"

    # -- point maps -------------------------------------------------------
    def _angle(self, t):
        return self.epsilon * t if self.kind == GroupKind.G3 else self.epsilon

    def transform_point(self, x, y, t, psi):
        """Push a point of the graph (x, y, t, psi) forward by this element."""
        e = self.epsilon
        x, y, t, psi = np.broadcast_arrays(
            *(np.asarray(v, dtype=complex if i == 3 else float)
              for i, v in enumerate((x, y, t, psi))))
        k = self.kind
        if k == GroupKind.G1:
            s = math.exp(e / 2)
            return x * s, y * s, t * math.exp(e), psi
        if k == GroupKind.G2:
            return x, y, t + e, psi
        if k in (GroupKind.G3, GroupKind.G4):
            extra = e * (x * x + y * y) / 2 if k == GroupKind.G3 else 0.0
            if self.linearized:
                w = e * t if k == GroupKind.G3 else e
                return x + w * y, y - w * x, t, psi + extra
            th = self._angle(t)
            c, s = np.cos(th), np.sin(th)
            return x * c + y * s, -x * s + y * c, t, psi + extra
        if k == GroupKind.G_ALPHA:
            return x + e * self.fn(t), y, t, psi + e * self.fn.derivative(t) * y
        if k == GroupKind.G_BETA:
            return x, y + e * self.fn(t), t, psi - e * self.fn.derivative(t) * x
        return x, y, t, psi + e * self.fn(t)

    def pullback(self, x, y, t):
        """Coordinates at which the seed is evaluated for the new solution,
        plus the additive stream-function term: ``psi'(x, y, t) =
        psi(X, Y, T) + extra``."""
        e = self.epsilon
        x, y, t = np.broadcast_arrays(*(np.asarray(v, float) for v in (x, y, t)))
        k = self.kind
        zero = np.zeros(x.shape)
        if k == GroupKind.G1:
            s = math.exp(-e / 2)
            return x * s, y * s, t * math.exp(-e), zero
        if k == GroupKind.G2:
            return x, y, t - e, zero
        if k in (GroupKind.G3, GroupKind.G4):
            extra = e * (x * x + y * y) / 2 if k == GroupKind.G3 else zero
            if self.linearized:
                w = e * t if k == GroupKind.G3 else e
                return x - w * y, y + w * x, t, extra
            th = self._angle(t)
            c, s = np.cos(th), np.sin(th)
            return x * c - y * s, x * s + y * c, t, extra
        if k == GroupKind.G_ALPHA:
            return x - e * self.fn(t), y, t, e * self.fn.derivative(t) * y
        if k == GroupKind.G_BETA:
            return x, y - e * self.fn(t), t, -e * self.fn.derivative(t) * x
        return x, y, t, e * self.fn(t)

    def infinitesimals(self):
        """The generator of this group as an :class:`Infinitesimals` instance."""
        k = self.kind
        return Infinitesimals(
            c1=1.0 if k == GroupKind.G1 else 0.0,
            c2=1.0 if k == GroupKind.G2 else 0.0,
            c3=1.0 if k == GroupKind.G3 else 0.0,
            c4=1.0 if k == GroupKind.G4 else 0.0,
            alpha=self.fn if k == GroupKind.G_ALPHA else None,
            beta=self.fn if k == GroupKind.G_BETA else None,
            gamma=self.fn if k == GroupKind.G_GAMMA else None)


@dataclass(frozen=True)
class Infinitesimals:
    """General infinitesimal generator of the point symmetries:

    xi1 = C1 x/2 + C3 y t + C4 y + alpha(t)
    xi2 = C1 y/2 - C3 x t - C4 x + beta(t)
    xi3 = C1 t + C2
    eta = C3 (x^2 + y^2)/2 + y alpha'(t) - x beta'(t) + gamma(t)
    """

    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c4: float = 0.0
    alpha: Optional[TimeFunction] = None
    beta: Optional[TimeFunction] = None
    gamma: Optional[TimeFunction] = None

    def evaluate(self, x, y, t):
        x, y, t = np.broadcast_arrays(*(np.asarray(v, float) for v in (x, y, t)))
        zero = np.zeros(x.shape)
        a = self.alpha(t) if self.alpha else zero
        da = self.alpha.derivative(t) if self.alpha else zero
        b = self.beta(t) if self.beta else zero
        db = self.beta.derivative(t) if self.beta else zero
        g = self.gamma(t) if self.gamma else zero
        xi1 = 0.5 * self.c1 * x + self.c3 * y * t + self.c4 * y + a
        xi2 = 0.5 * self.c1 * y - self.c3 * x * t - self.c4 * x + b
        xi3 = self.c1 * t + self.c2 + zero
        eta = 0.5 * self.c3 * (x * x + y * y) + y * da - x * db + g
        return xi1, xi2, xi3, eta


# --------------------------------------------------------------------------
# action on solutions
# --------------------------------------------------------------------------

def _velocity_map(g, seed_velocity):
    """Closed-form velocity of the transformed solution from the seed's."""
    e = g.epsilon
    k = g.kind

    def velocity(x, y, t):
        x, y, t = np.broadcast_arrays(*(np.asarray(v, float) for v in (x, y, t)))
        X, Y, T, _ = g.pullback(x, y, t)
        u, v = seed_velocity(X, Y, T)
        if k == GroupKind.G1:
            s = math.exp(-e / 2)
            return s * u, s * v
        if k in (GroupKind.G2, GroupKind.G_GAMMA):
            return u, v
        if k in (GroupKind.G3, GroupKind.G4):
            spin_u, spin_v = (e * y, -e * x) if k == GroupKind.G3 else (0.0, 0.0)
            w = e * t if k == GroupKind.G3 else e
            if g.linearized:
                return u + w * v + spin_u, v - w * u + spin_v
            c, s = np.cos(w), np.sin(w)
            return c * u + s * v + spin_u, c * v - s * u + spin_v
        if k == GroupKind.G_ALPHA:
            return u + e * g.fn.derivative(t), v
        return u, v + e * g.fn.derivative(t)

    return velocity


def _scale_factor(g, t):
    """Local length ratio (new / seed coordinates) of the pull-back."""
    if g.kind == GroupKind.G1:
        return math.exp(g.epsilon / 2)
    if g.linearized:
        w = g.epsilon * np.asarray(t, float) if g.kind == GroupKind.G3 else g.epsilon
        return 1.0 / np.sqrt(1.0 + np.square(w))
    return 1.0


def _length_ratio(g):
    # linearized G3 stretches with t; t = 2 stands for the usual window
    return float(_scale_factor(g, 2.0))


def apply_group(g, s):
    """New solution generated from ``s`` by the group element ``g``."""

    def psi(x, y, t):
        X, Y, T, extra = g.pullback(x, y, t)
        return s.psi_fn(X, Y, T) + extra

    def distance(x, y, t):
        X, Y, T, _ = g.pullback(x, y, t)
        return s.singular_distance(X, Y, T) * _scale_factor(g, t)

    t_min = s.t_min
    if math.isfinite(t_min):
        if g.kind == GroupKind.G1:
            t_min = t_min * math.exp(g.epsilon)
        elif g.kind == GroupKind.G2:
            t_min = t_min + g.epsilon

    scale = _length_ratio(g)
    harmonic = s.harmonic and g.kind != GroupKind.G3
    return StreamSolution(
        Family.TRANSFORMED, "%s[%s]" % (g.label, s.label), psi,
        params=s.params, extras=dict(s.extras),
        velocity_fn=_velocity_map(g, s.velocity_fn) if s.velocity_fn else None,
        distance_fn=distance, t_min=t_min,
        length_scale=s.length_scale * scale,
        exclusion_radius=s.exclusion_radius * (scale if g.kind == GroupKind.G1 else 1.0),
        harmonic=harmonic, seed=s, group=g)


def compose(g_outer, inner):
    """Apply ``g_outer`` to an already transformed solution."""
    return apply_group(g_outer, inner)


def infinitesimal_consistency(g, at, psi=0.0):
    """Max deviation between d/de of the point map at e = 0 and the
    generator components (xi1, xi2, xi3, eta) at ``at = (x, y, t)``."""
    x, y, t = (float(v) for v in at)
    stack = []
    for d in (4e-3, 2e-3, 1e-3):
        plus = g.with_epsilon(d).transform_point(x, y, t, psi)
        minus = g.with_epsilon(-d).transform_point(x, y, t, psi)
        stack.append([np.real(np.asarray(p) - np.asarray(m)) / (2 * d)
                      for p, m in zip(plus, minus)])
    derivative = richardson(np.array(stack, dtype=float), 2.0, 2)
    expected = np.array([float(v) for v in g.infinitesimals().evaluate(x, y, t)])
    return float(np.max(np.abs(derivative - expected)))


PRESET_EPSILON = 0.1


def named_symmetry_presets(epsilon=PRESET_EPSILON, params=None):
    """The five displayed rotation-stretch symmetry solutions, each built
    by applying G3(epsilon) to its seed: general traveling wave, cosine,
    log, tanh and the Lamb-Oseen term."""
    from .presets import SYMMETRY_PRESETS, build_preset

    return [build_preset(name, params, epsilon=epsilon)
            for name in SYMMETRY_PRESETS]
