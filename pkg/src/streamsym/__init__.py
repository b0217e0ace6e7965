"""Exact stream-function solutions of 2-D incompressible flow, their Lie
symmetry transforms, and finite-difference certification."""

from .catalog import (Family, StreamSolution, WaveParams, make_general_traveling,
                      make_harmonic, make_oseen_rankine, make_real_family, wave_speed)
from .contours import ContourSet, Polyline, default_levels, extract_contours
from .errors import (ConstructionError, DomainError, NotApplicableError, PathError,
                     SingularPointError, StencilPlacementError, StreamSymError)
from .fields import (PressureField, VelocitySample, pressure_gradient,
                     recover_pressure, sample_grid, velocity, vorticity)
from .grid import Field, Grid, Quantity
from .numeric import FdScheme, exp_integral_e1, fd_partial
from .presets import PRESETS, build_preset
from .symmetry import (GroupElement, GroupKind, TimeFunction, apply_group, compose,
                       infinitesimal_consistency, named_symmetry_presets)
from .verify import (ResidualReport, laplace_residual, ode_check, pde_residual,
                     random_points, verify_solution, wave_translation_check)

__all__ = [
    "Family", "StreamSolution", "WaveParams", "make_general_traveling",
    "make_harmonic", "make_oseen_rankine", "make_real_family", "wave_speed",
    "ContourSet", "Polyline", "default_levels", "extract_contours",
    "ConstructionError", "DomainError", "NotApplicableError", "PathError",
    "SingularPointError", "StencilPlacementError", "StreamSymError",
    "PressureField", "VelocitySample", "pressure_gradient", "recover_pressure",
    "sample_grid", "velocity", "vorticity", "Field", "Grid", "Quantity", "FdScheme",
    "exp_integral_e1", "fd_partial", "PRESETS", "build_preset", "GroupElement",
    "GroupKind", "TimeFunction", "apply_group", "compose",
    "infinitesimal_consistency", "named_symmetry_presets", "ResidualReport",
    "laplace_residual", "ode_check", "pde_residual", "random_points",
    "verify_solution", "wave_translation_check",
]
