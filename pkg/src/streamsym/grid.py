"""Rectangular sampling lattices and the fields sampled on them."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class Quantity(str, Enum):
    PSI = "psi"
    U = "u"
    V = "v"
    VORTICITY = "vorticity"
    PRESSURE = "pressure"


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least 2 nodes per axis")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("grid bounds must be increasing")

    @property
    def x(self):
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def y(self):
        return np.linspace(self.y_min, self.y_max, self.ny)

    @property
    def dx(self):
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def dy(self):
        return (self.y_max - self.y_min) / (self.ny - 1)

    def mesh(self):
        """Node coordinates, each of shape ``(nx, ny)`` (``ij`` indexing)."""
        return np.meshgrid(self.x, self.y, indexing="ij")

    def to_dict(self):
        return {"x_min": self.x_min, "x_max": self.x_max,
                "y_min": self.y_min, "y_max": self.y_max,
                "nx": self.nx, "ny": self.ny}

    @classmethod
    def from_dict(cls, d):
        return cls(float(d["x_min"]), float(d["x_max"]), float(d["y_min"]),
                   float(d["y_max"]), int(d["nx"]), int(d["ny"]))

    @classmethod
    def parse(cls, spec):
        """Parse ``min:max:NxM`` (same range on both axes) or
        ``xmin:xmax:ymin:ymax:NxM``."""
        parts = spec.split(":")
        try:
            counts = parts[-1].lower().split("x")
            nx, ny = (int(counts[0]), int(counts[1])) if len(counts) == 2 \
                else (int(counts[0]), int(counts[0]))
            bounds = [float(v) for v in parts[:-1]]
        except (ValueError, IndexError):
            raise ValueError("bad grid spec %r" % spec) from None
        if len(bounds) == 2:
            bounds = bounds * 2
        if len(bounds) != 4:
            raise ValueError("bad grid spec %r" % spec)
        return cls(bounds[0], bounds[1], bounds[2], bounds[3], nx, ny)


@dataclass
class Field:
    """Samples of one quantity on a grid at time ``t``.

    ``values`` has shape ``(nx, ny)``; masked nodes hold NaN and are flagged
    in ``mask``. Vector quantities are not stored here: ``u`` and ``v`` are
    sampled as two separate fields.
    """

    grid: Grid
    t: float
    values: np.ndarray
    quantity: Quantity = Quantity.PSI
    mask: np.ndarray = field(default=None)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.nx, self.grid.ny):
            raise ValueError("values shape %r does not match grid %dx%d"
                             % (self.values.shape, self.grid.nx, self.grid.ny))
        if self.mask is None:
            self.mask = ~np.isfinite(self.values)
        self.mask = np.asarray(self.mask, dtype=bool)
        self.values = np.where(self.mask, np.nan, self.values)
        self.quantity = Quantity(self.quantity)

    @property
    def unmasked(self):
        return self.values[~self.mask]
