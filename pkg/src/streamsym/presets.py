"""Named solutions, one per displayed equation, with plotting/verification
windows."""

from dataclasses import dataclass, field, replace
import math
from typing import Callable

from .catalog import (WaveParams, make_general_traveling, make_harmonic,
                      make_oseen_rankine, make_real_family)
from .errors import ConstructionError
from .symmetry import GroupElement, GroupKind, PRESET_EPSILON, apply_group


@dataclass(frozen=True)
class Window:
    """Axis ranges used for default grids and random verification points."""

    x: tuple = (-3.0, 3.0)
    y: tuple = (-3.0, 3.0)
    t: tuple = (0.5, 2.0)

    def grid_spec(self, n=101):
        return "%r:%r:%r:%r:%dx%d" % (self.x + self.y + (n, n))


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    build_fn: Callable
    params: WaveParams = WaveParams()
    options: dict = field(default_factory=dict)
    window: Window = Window()
    seed_of: str = ""

    def build(self, params=None, **options):
        opts = dict(self.options)
        opts.update({k: v for k, v in options.items() if v is not None})
        return self.build_fn(params or self.params, opts)


def general_params(p):
    """Integration constants for the general-wave preset when none given."""
    if all(complex(c) == 0 for c in (p.c1, p.c2, p.c3, p.c4)):
        return p.replace(c1=1.0, c2=1.0, c3=1.0, c4=0.0)
    return p


def _named(sol, name):
    return replace(sol, label=name)


def _general(p, o):
    return make_general_traveling(general_params(p))


def _harmonic(kind, axis="x"):
    def build(p, o):
        return make_harmonic(kind, o.get("A", 1.0), o.get("n", 1.0), p, axis=axis)
    return build


def _real(kind):
    return lambda p, o: make_real_family(kind, p)


def _oseen(p, o):
    return make_oseen_rankine(o.get("C2", 0.0), o.get("C3", 1.0), p.re_number,
                              o.get("t_min", 0.05))


def _uniform(p, o):
    # A = -j/k turns A (kx + jky) into the real stream function y
    k = p.k1
    return make_harmonic("power", -1j * o.get("U", 1.0) / k, 1.0, p)


_PERIODIC_X = Window(x=(-math.pi, math.pi), y=(-1.0, 1.0))
_PERIODIC_Y = Window(x=(-1.0, 1.0), y=(-math.pi, math.pi))

_SEEDS = [
    Preset("eq10", "general traveling wave C1 e^(-a z) + C2 z^2 + C3 z + C4",
           _general),
    Preset("eq13", "harmonic power A (kx + jky + d0 - wt)^n", _harmonic("power"),
           options={"A": 1.0, "n": 2.0}),
    Preset("eq30", "traveling continuous wave cos(kx + jky + d0 - wt)",
           _harmonic("cosine"), window=_PERIODIC_X),
    Preset("eq33", "cosine wave with x and y swapped (y-propagating)",
           _harmonic("cosine", "y"), window=_PERIODIC_Y),
    Preset("eq35", "moving free vortex ln(kx + jky + d0 - wt)", _harmonic("log")),
    Preset("eq37", "traveling solitary wave tanh(kx + jky + d0 - wt)",
           _harmonic("tanh"), window=Window(x=(-math.pi, math.pi), y=(-1.2, 1.2))),
    Preset("eq39a", "exp(j(kx - wt + d0) - ky)", _harmonic("exp"),
           window=_PERIODIC_X),
    Preset("eq39b", "exp(j(ky - wt + d0) - kx)", _harmonic("exp", "y"),
           window=_PERIODIC_Y),
    Preset("eq40a", "real quadratic (k1 x + k2 y + d0 - wt)^2", _real("quadratic")),
    Preset("eq40b", "real exponential exp(-w Re z / (k1^2 + k2^2))",
           _real("exponential")),
    Preset("eq28", "invariant radial solution C2 ln(t/r^2) + C3 E1(Re r^2/4t)",
           _oseen, options={"C2": 0.0, "C3": 1.0, "t_min": 0.05}),
    Preset("uniform", "uniform stream psi = U y (power n = 1)", _uniform,
           options={"U": 1.0}),
]

_SYMMETRY = [("eq27", "eq10"), ("eq34", "eq30"), ("eq36", "eq35"),
             ("eq38", "eq37"), ("eq41", "eq28")]


def _g3_of(seed):
    def build(p, o):
        g = GroupElement(GroupKind.G3, o.get("epsilon", PRESET_EPSILON))
        return apply_group(g, seed.build_fn(p, o))
    return build


PRESETS = {p.name: p for p in _SEEDS}
for _name, _seed in _SYMMETRY:
    _s = PRESETS[_seed]
    PRESETS[_name] = Preset(
        _name, "G3 rotation-stretch of %s" % _seed, _g3_of(_s),
        params=_s.params, options=dict(_s.options, epsilon=PRESET_EPSILON),
        window=_s.window, seed_of=_seed)

SEED_PRESETS = ("eq10", "eq13", "eq30", "eq35", "eq37", "eq39a", "eq39b",
                "eq40a", "eq40b", "eq28")
SYMMETRY_PRESETS = tuple(name for name, _ in _SYMMETRY)


def get_preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise ConstructionError("unknown preset %r; available: %s"
                                % (name, ", ".join(PRESETS))) from None


def build_preset(name, params=None, **options):
    preset = get_preset(name)
    return _named(preset.build(params, **options), name)
