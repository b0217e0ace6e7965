"""Velocity, vorticity and pressure derived from a stream function.

Conventions: ``u = d(Re psi)/dy``, ``v = -d(Re psi)/dx`` and
``omega = dv/dx - du/dy = -lap(Re psi)``.
"""

from collections import deque
from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError, PathError
from .grid import Field, Quantity
from .numeric import richardson, stencil_levels


@dataclass
class VelocitySample:
    u: np.ndarray
    v: np.ndarray

    def __iter__(self):
        return iter((self.u, self.v))


@dataclass
class PressureField:
    """Recovered pressure on a grid; ``values[reference node] == p0``."""

    grid: object
    t: float
    values: np.ndarray
    reference: tuple
    mask: np.ndarray
    path: str = "xy"

    @property
    def reference_index(self):
        (x0, y0), _ = self.reference
        return (int(np.argmin(np.abs(self.grid.x - x0))),
                int(np.argmin(np.abs(self.grid.y - y0))))

    def to_field(self):
        return Field(self.grid, self.t, self.values, Quantity.PRESSURE, self.mask)


def _arrays(x, y, t):
    return np.broadcast_arrays(*(np.asarray(v, float) for v in (x, y, t)))


def _real_psi(s):
    return lambda X, Y, T: np.real(s.psi_fn(X, Y, T))


def _derivatives(f, which_list, x, y, t, scheme, avoid):
    vals, _ = stencil_levels(f, which_list, x, y, t, scheme, avoid=avoid)
    shape = np.shape(x)
    return {w: richardson(v, scheme.ratio, scheme.order).reshape(shape)
            for w, v in vals.items()}


def velocity(s, x, y, t, scheme=None):
    """Velocity at the given points: closed form when the solution carries
    one, otherwise finite differences of ``Re psi``."""
    x, y, t = _arrays(x, y, t)
    s._check(x, y, t)
    if s.has_analytic_velocity:
        u, v = s.velocity_fn(x, y, t)
        u, v = np.real(u), np.real(v)
    else:
        scheme = scheme or s.default_scheme()
        d = _derivatives(_real_psi(s), [(0, 1, 0), (1, 0, 0)], x, y, t, scheme,
                         s.singular_mask)
        u, v = d[(0, 1, 0)], -d[(1, 0, 0)]
    u = np.broadcast_to(u, x.shape).astype(float)
    v = np.broadcast_to(v, x.shape).astype(float)
    if u.ndim == 0:
        return VelocitySample(float(u), float(v))
    return VelocitySample(u, v)


def vorticity(s, x, y, t, scheme=None):
    """``-lap(Re psi)`` by finite differences."""
    x, y, t = _arrays(x, y, t)
    s._check(x, y, t)
    scheme = scheme or s.default_scheme()
    d = _derivatives(_real_psi(s), [(2, 0, 0), (0, 2, 0)], x, y, t, scheme,
                     s.singular_mask)
    w = -(d[(2, 0, 0)] + d[(0, 2, 0)])
    return float(w) if w.ndim == 0 else w


_VEL_TERMS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 0, 0), (0, 2, 0)]


def pressure_gradient(s, x, y, t, re_number=None, scheme=None):
    """Pressure gradient from the momentum balance

        grad p = -d/dt(u, v) - (u d/dx + v d/dy)(u, v) + (1/Re) lap(u, v).
    """
    x, y, t = _arrays(x, y, t)
    s._check(x, y, t)
    scheme = scheme or s.default_scheme()
    if re_number is None:
        re_number = s.params.re_number if s.params is not None else 1.0
    if s.has_analytic_velocity:
        fu = lambda X, Y, T: np.real(s.velocity_fn(X, Y, T)[0])
        fv = lambda X, Y, T: np.real(s.velocity_fn(X, Y, T)[1])
        du = _derivatives(fu, _VEL_TERMS, x, y, t, scheme, s.singular_mask)
        dv = _derivatives(fv, _VEL_TERMS, x, y, t, scheme, s.singular_mask)
        u, v = (np.real(c) for c in s.velocity_fn(x, y, t))
    else:
        # u = psi_y, v = -psi_x: shift the multi-indices instead of nesting
        needed = sorted({(a, b + 1, c) for a, b, c in _VEL_TERMS + [(0, 0, 0)]}
                        | {(a + 1, b, c) for a, b, c in _VEL_TERMS + [(0, 0, 0)]})
        d = _derivatives(_real_psi(s), needed, x, y, t, scheme, s.singular_mask)
        du = {w: d[(w[0], w[1] + 1, w[2])] for w in _VEL_TERMS}
        dv = {w: -d[(w[0] + 1, w[1], w[2])] for w in _VEL_TERMS}
        u, v = d[(0, 1, 0)], -d[(1, 0, 0)]

    def component(d):
        return (-d[(0, 0, 1)] - u * d[(1, 0, 0)] - v * d[(0, 1, 0)]
                + (d[(2, 0, 0)] + d[(0, 2, 0)]) / re_number)

    px, py = component(du), component(dv)
    if np.ndim(px) == 0:
        return float(px), float(py)
    return px, py


def stencil_mask(s, X, Y, t, scheme, max_spatial, max_time=0):
    """Nodes whose finite-difference footprint would reach the singular set."""
    reach_xy, reach_t = scheme.footprint(max_spatial, max_time)
    T = np.full(np.shape(X), float(t))
    dist = s.singular_distance(X, Y, T)
    return (dist <= math.sqrt(2) * reach_xy + s.exclusion_radius) | \
        (T - reach_t < s.t_min)


def _cumtrapz(g, step):
    out = np.zeros_like(g)
    out[1:] = np.cumsum(0.5 * (g[1:] + g[:-1]) * step)
    return out


def _line_integral(g, start, step):
    """Trapezoid integral of the 1-D samples ``g`` from index ``start`` to
    every index (negative direction handled by reversing)."""
    out = np.empty_like(g)
    out[start:] = _cumtrapz(g[start:], step)
    out[:start + 1] = _cumtrapz(g[:start + 1][::-1], -step)[::-1]
    return out


def _l_paths(px, py, i0, j0, dx, dy, order):
    nx, ny = px.shape
    p = np.empty_like(px)
    if order == "xy":
        along_x = _line_integral(px[:, j0], i0, dx)
        for i in range(nx):
            p[i, :] = along_x[i] + _line_integral(py[i, :], j0, dy)
    else:
        along_y = _line_integral(py[i0, :], j0, dy)
        for j in range(ny):
            p[:, j] = along_y[j] + _line_integral(px[:, j], i0, dx)
    return p


def _fill_around_mask(p, px, py, mask, dx, dy):
    """Breadth-first trapezoid steps into nodes whose L-path was blocked."""
    nx, ny = p.shape
    queue = deque(zip(*np.nonzero(np.isfinite(p) & ~mask)))
    while queue:
        i, j = queue.popleft()
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            a, b = i + di, j + dj
            if 0 <= a < nx and 0 <= b < ny and not mask[a, b] and not np.isfinite(p[a, b]):
                if di:
                    p[a, b] = p[i, j] + 0.5 * (px[i, j] + px[a, b]) * di * dx
                else:
                    p[a, b] = p[i, j] + 0.5 * (py[i, j] + py[a, b]) * dj * dy
                queue.append((a, b))


def recover_pressure(s, grid, t, reference=None, re_number=None, path="xy",
                     scheme=None):
    """Integrate the pressure gradient over ``grid`` from a reference node.

    ``reference`` is ``((x, y), p0)``, snapped to the nearest node (default:
    the lower-left corner with ``p0 = 0``). Each node is reached by an
    axis-aligned L-path, along x first for ``path='xy'`` and along y first
    for ``path='yx'``, using the composite trapezoid rule. Nodes whose path
    crosses a masked node are reached by a breadth-first detour.
    """
    if path not in ("xy", "yx"):
        raise ValueError("path must be 'xy' or 'yx'")
    scheme = scheme or s.default_scheme()
    X, Y = grid.mesh()
    mask = stencil_mask(s, X, Y, t, scheme, 3, 1)
    if mask.all():
        raise DomainError("no node of the grid is clear of the singular set at t=%g" % t)
    if reference is None:
        reference = ((grid.x_min, grid.y_min), 0.0)
    (xr, yr), p0 = reference
    i0 = int(np.argmin(np.abs(grid.x - xr)))
    j0 = int(np.argmin(np.abs(grid.y - yr)))
    if mask[i0, j0]:
        raise PathError("reference node (%g, %g) is masked" % (grid.x[i0], grid.y[j0]))

    px = np.full(X.shape, np.nan)
    py = np.full(X.shape, np.nan)
    ok = ~mask
    px[ok], py[ok] = pressure_gradient(s, X[ok], Y[ok], np.full(ok.sum(), float(t)),
                                       re_number, scheme)
    p = _l_paths(px, py, i0, j0, grid.dx, grid.dy, path)
    p[mask] = np.nan
    if np.any(~np.isfinite(p) & ok):
        _fill_around_mask(p, px, py, mask, grid.dx, grid.dy)
        if np.any(~np.isfinite(p) & ok):
            raise PathError("%d unmasked node(s) are not connected to the reference"
                            % int(np.sum(~np.isfinite(p) & ok)))
    p = p + p0
    p[i0, j0] = p0
    return PressureField(grid, float(t), p, ((float(grid.x[i0]), float(grid.y[j0])), p0),
                         mask, path)


def sample_grid(s, grid, t, quantity=Quantity.PSI, scheme=None):
    """Evaluate one quantity at every grid node; singular nodes are masked.

    Finite-difference quantities also mask nodes whose stencil would touch
    the singular set.
    """
    quantity = Quantity(quantity)
    scheme = scheme or s.default_scheme()
    if quantity == Quantity.PRESSURE:
        X, Y = grid.mesh()
        mask = stencil_mask(s, X, Y, t, scheme, 3, 1)
        if mask.all():
            raise DomainError("no node of the grid is clear of the singular set at t=%g" % t)
        ref = (grid.x_min, grid.y_min)
        if mask[0, 0]:
            i, j = np.argwhere(~mask)[0]
            ref = (grid.x[i], grid.y[j])
        return recover_pressure(s, grid, t, (ref, 0.0), scheme=scheme).to_field()

    X, Y = grid.mesh()
    T = np.full(X.shape, float(t))
    mask = s.singular_mask(X, Y, T)
    if quantity == Quantity.VORTICITY or (
            quantity in (Quantity.U, Quantity.V) and not s.has_analytic_velocity):
        order = 2 if quantity == Quantity.VORTICITY else 1
        mask = mask | stencil_mask(s, X, Y, t, scheme, order, 0)
    values = np.full(X.shape, np.nan)
    ok = ~mask
    if ok.any():
        xs, ys, ts = X[ok], Y[ok], T[ok]
        if quantity == Quantity.PSI:
            values[ok] = np.real(s.psi_fn(xs, ys, ts))
        elif quantity == Quantity.VORTICITY:
            values[ok] = vorticity(s, xs, ys, ts, scheme)
        else:
            vel = velocity(s, xs, ys, ts, scheme)
            values[ok] = vel.u if quantity == Quantity.U else vel.v
    return Field(grid, float(t), values, quantity, mask)
