"""Numeric building blocks: E1, guarded complex elementary functions and
Richardson-extrapolated central differences.

Everything here is a pure function of its inputs and works elementwise on
numpy arrays as well as on Python scalars.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

import numpy as np

from .errors import DomainError, SingularPointError, StencilPlacementError

EULER_GAMMA = 0.57721566490153286061
EPS = np.finfo(float).eps

# exclusion radius around isolated singular points, in the function's own
# argument (phase) space
SINGULAR_RADIUS = 1e-6


# --------------------------------------------------------------------------
# exponential integral
# --------------------------------------------------------------------------

def _e1_series(x):
    # E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    total = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(1, 60):
        term = term * (-x) / k
        contrib = term / k
        total += contrib
        if np.all(np.abs(contrib) <= 1e-17 * np.abs(total)):
            break
    return -EULER_GAMMA - np.log(x) - total


def _e1_continued_fraction(x):
    # modified Lentz evaluation of e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...)))
    tiny = 1e-300
    b = x + 1.0
    c = np.full_like(x, 1.0 / tiny)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for i in range(1, 500):
        an = -float(i * i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) > 1e-16
        if not active.any():
            break
    return h * np.exp(-x)


def exp_integral_e1(x):
    """Exponential integral E1(x) = int_x^inf exp(-s)/s ds for x > 0.

    Power series below x = 1, continued fraction above. Accepts scalars or
    arrays; raises :class:`DomainError` if any argument is <= 0.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("E1 requires x > 0 (got min %r)" % float(np.min(arr)))
    flat = np.atleast_1d(arr).ravel()
    out = np.empty_like(flat)
    small = flat <= 1.0
    if small.any():
        out[small] = _e1_series(flat[small])
    if (~small).any():
        out[~small] = _e1_continued_fraction(flat[~small])
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


# --------------------------------------------------------------------------
# complex elementary functions
# --------------------------------------------------------------------------

def _as_complex(z):
    return np.asarray(z, dtype=complex)


def _unwrap(result, like):
    if np.ndim(like) == 0:
        return complex(result)
    return result


def _raise_if(mask, z, what):
    if np.any(mask):
        bad = np.atleast_1d(z)[np.atleast_1d(mask)]
        raise SingularPointError(
            "%s is singular at z = %r" % (what, complex(bad[0])), points=bad)


def c_exp(z):
    return _unwrap(np.exp(_as_complex(z)), z)


def c_cos(z):
    return _unwrap(np.cos(_as_complex(z)), z)


def c_ln(z):
    """Principal logarithm, imaginary part in (-pi, pi]."""
    zz = _as_complex(z)
    _raise_if(np.abs(zz) < SINGULAR_RADIUS, zz, "ln")
    w = np.log(zz)
    # a negative-zero imaginary part would otherwise land on -pi
    w = np.where(w.imag == -np.pi, w + 2j * np.pi, w)
    return _unwrap(w, z)


def tanh_pole_distance(z):
    """Distance from z to the nearest pole j(pi/2 + n pi) of tanh."""
    zz = _as_complex(z)
    n = np.round((zz.imag - np.pi / 2) / np.pi)
    return np.abs(zz - 1j * (np.pi / 2 + n * np.pi))


def c_tanh(z):
    zz = _as_complex(z)
    _raise_if(tanh_pole_distance(zz) < SINGULAR_RADIUS, zz, "tanh")
    return _unwrap(np.tanh(zz), z)


def _is_nonneg_integer(n):
    return float(n).is_integer() and n >= 0


def c_pow(z, n):
    """Principal-branch power z**n.

    Non-negative integer exponents are entire and accept z = 0; every other
    exponent treats z = 0 as singular.
    """
    zz = _as_complex(z)
    if float(n).is_integer() and abs(n) <= 64:
        m = int(n)
        if m >= 0:
            return _unwrap(zz ** m, z)
        _raise_if(np.abs(zz) < SINGULAR_RADIUS, zz, "z**%d" % m)
        return _unwrap(1.0 / zz ** (-m), z)
    _raise_if(np.abs(zz) < SINGULAR_RADIUS, zz, "z**%g" % n)
    return _unwrap(np.exp(n * c_ln(zz)), z)


# --------------------------------------------------------------------------
# finite differences
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FdScheme:
    """Central-difference scheme with Richardson refinement.

    ``h`` is the finest step. The ``levels`` steps used are
    ``h * ratio**(levels-1), ..., h * ratio, h`` (coarse to fine).
    """

    h: float = 1e-2
    ratio: float = 2.0
    levels: int = 3
    order: int = 2
    scale: float = 1.0

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("step h must be positive")
        if not self.ratio > 1:
            raise ValueError("refinement ratio must exceed 1")
        if self.levels < 2:
            raise ValueError("need at least two levels")
        if self.order not in (2, 4):
            raise ValueError("stencil order must be 2 or 4")
        if self.h <= 1e3 * EPS * self.scale:
            raise ValueError(
                "finest step %g is too close to machine precision for "
                "domain scale %g" % (self.h, self.scale))

    @classmethod
    def for_length(cls, length, **kwargs):
        """Default scheme for a solution with characteristic length ``length``."""
        return cls(h=1e-2 * length, scale=length, **kwargs)

    @property
    def steps(self):
        return tuple(self.h * self.ratio ** (self.levels - 1 - i)
                     for i in range(self.levels))

    def half_width(self, derivative_order):
        return _half_width(derivative_order, self.order)

    def footprint(self, max_spatial=4, max_time=1):
        """Largest (spatial, temporal) offset reached by the coarsest level."""
        coarse = self.steps[0]
        return (self.half_width(max_spatial) * coarse,
                self.half_width(max_time) * coarse)


def _half_width(m, accuracy):
    if m == 0:
        return 0
    return (m + 1) // 2 - 1 + accuracy // 2


@lru_cache(maxsize=None)
def central_weights(m, accuracy):
    """Offsets and weights of the central stencil for d^m/dx^m.

    Weights are for unit spacing; divide by h**m. Solved exactly in
    rational arithmetic from the Taylor moment conditions.
    """
    p = _half_width(m, accuracy)
    offsets = list(range(-p, p + 1))
    size = len(offsets)
    # Vandermonde system sum_j w_j s_j^q = q! delta_{qm}
    rows = [[Fraction(s) ** q for s in offsets] for q in range(size)]
    rhs = [Fraction(math.factorial(m)) if q == m else Fraction(0)
           for q in range(size)]
    for col in range(size):
        pivot = next(r for r in range(col, size) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        rhs[col], rhs[pivot] = rhs[pivot], rhs[col]
        for r in range(size):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col] / rows[col][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
                rhs[r] -= factor * rhs[col]
    weights = [rhs[i] / rows[i][i] for i in range(size)]
    return tuple(offsets), tuple(float(w) for w in weights)


@lru_cache(maxsize=None)
def _tensor_stencil(which, accuracy):
    parts = [central_weights(m, accuracy) for m in which]
    stencil = {}
    for ox, wx in zip(*parts[0]):
        for oy, wy in zip(*parts[1]):
            for ot, wt in zip(*parts[2]):
                w = wx * wy * wt
                if w != 0.0:
                    stencil[(ox, oy, ot)] = stencil.get((ox, oy, ot), 0.0) + w
    return stencil


def _normalize_index(which):
    which = tuple(int(v) for v in which)
    if len(which) == 2:
        which = which + (0,)
    if len(which) != 3 or min(which) < 0 or sum(which) > 4:
        raise ValueError("multi-index must have 3 non-negative entries, "
                         "total order <= 4: %r" % (which,))
    return which


def stencil_levels(f, which_list, x, y, t, scheme, avoid=None):
    """Plain central differences of ``f`` at every level of ``scheme``.

    Returns ``(values, noise)`` dictionaries keyed by multi-index, each entry
    an array of shape ``(levels, npoints)``. ``noise`` bounds the rounding
    error of the corresponding estimate. All indices share one set of
    function evaluations per level.
    """
    which_list = [_normalize_index(w) for w in which_list]
    x, y, t = np.broadcast_arrays(*(np.atleast_1d(np.asarray(v, float))
                                    for v in (x, y, t)))
    x, y, t = x.ravel(), y.ravel(), t.ravel()
    stencils = {w: _tensor_stencil(w, scheme.order) for w in which_list}
    offsets = sorted({o for s in stencils.values() for o in s})
    index = {o: i for i, o in enumerate(offsets)}
    off = np.array(offsets, dtype=float)

    values = {w: np.empty((scheme.levels, x.size)) for w in which_list}
    noise = {w: np.empty((scheme.levels, x.size)) for w in which_list}
    for level, h in enumerate(scheme.steps):
        X = x[:, None] + off[None, :, 0] * h
        Y = y[:, None] + off[None, :, 1] * h
        T = t[:, None] + off[None, :, 2] * h
        if avoid is not None:
            bad = np.asarray(avoid(X, Y, T), dtype=bool)
            if bad.any():
                rows = np.nonzero(bad.any(axis=1))[0]
                pts = np.column_stack([x[rows], y[rows], t[rows]])
                raise StencilPlacementError(
                    "stencil footprint (h=%g) touches the singular set at %d "
                    "point(s), first %r" % (h, rows.size, tuple(pts[0])),
                    points=pts)
        try:
            F = np.asarray(f(X, Y, T), dtype=float)
        except SingularPointError as exc:
            raise StencilPlacementError(
                "stencil footprint (h=%g) hit a singular point: %s" % (h, exc),
                points=exc.points) from exc
        if not np.all(np.isfinite(F)):
            rows = np.nonzero(~np.isfinite(F).all(axis=1))[0]
            pts = np.column_stack([x[rows], y[rows], t[rows]])
            raise StencilPlacementError(
                "non-finite values on the stencil footprint (h=%g)" % h,
                points=pts)
        absF = np.abs(F)
        for w, stencil in stencils.items():
            scale = h ** (-sum(w))
            cols = np.array([index[o] for o in stencil])
            wts = np.array(list(stencil.values()))
            values[w][level] = (F[:, cols] @ wts) * scale
            # a few ulps per function value, amplified by the weights
            noise[w][level] = 4 * EPS * (absF[:, cols] @ np.abs(wts)) * scale
    return values, noise


def richardson(values, ratio, order):
    """Extrapolate a coarse-to-fine stack of estimates along axis 0.

    Central differences have error expansions in even powers of h, so the
    successive elimination orders are ``order, order + 2, ...``.
    """
    table = np.asarray(values, dtype=float)
    p = order
    while table.shape[0] > 1:
        factor = ratio ** p - 1.0
        table = table[1:] + (table[1:] - table[:-1]) / factor
        p += 2
    return table[0]


def observed_order(values, ratio):
    """Convergence slope from the three finest entries of a level stack."""
    values = np.asarray(values, dtype=float)
    if values.shape[0] < 3:
        return np.full(values.shape[1:], np.nan)
    coarse = np.abs(values[-3] - values[-2])
    fine = np.abs(values[-2] - values[-1])
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(coarse / fine) / np.log(ratio)


def fd_partial(f, which, at, scheme=None, avoid=None):
    """Partial derivative of a real function ``f(x, y, t)``.

    Parameters
    ----------
    f : callable
        Vectorised real function of ``(x, y, t)``.
    which : tuple
        Multi-index ``(nx, ny, nt)`` (or ``(nx, ny)``), total order <= 4.
    at : tuple
        Point ``(x, y, t)``; components may be arrays of equal shape.
    scheme : FdScheme, optional
    avoid : callable, optional
        Boolean predicate on ``(x, y, t)`` marking excluded nodes.

    Returns
    -------
    value, order_estimate
        Richardson-extrapolated derivative and the observed convergence
        order of the plain central differences. Scalars if ``at`` is scalar.
    """
    scheme = scheme or FdScheme()
    which = _normalize_index(which)
    x, y, t = (tuple(at) + (0.0,))[:3] if len(at) == 2 else at
    values, _ = stencil_levels(f, [which], x, y, t, scheme, avoid=avoid)
    stack = values[which]
    value = richardson(stack, scheme.ratio, scheme.order)
    order = observed_order(stack, scheme.ratio)
    if np.ndim(x) == 0 and np.ndim(y) == 0 and np.ndim(t) == 0:
        return float(value[0]), float(order[0])
    shape = np.broadcast(np.asarray(x), np.asarray(y), np.asarray(t)).shape
    return value.reshape(shape), order.reshape(shape)
