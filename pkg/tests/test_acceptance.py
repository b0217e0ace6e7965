"""Acceptance suite: nine criteria, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``.
"""

import math
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import mpmath
import numpy as np
import pytest

from streamsym.catalog import StreamSolution, WaveParams, make_oseen_rankine
from streamsym.cli import main as cli_main
from streamsym.contours import extract_contours
from streamsym.export import read_field
from streamsym.fields import recover_pressure, sample_grid
from streamsym.grid import Grid
from streamsym.numeric import FdScheme, exp_integral_e1, fd_partial
from streamsym.presets import PRESETS, SEED_PRESETS, SYMMETRY_PRESETS, build_preset
from streamsym.symmetry import GroupElement, GroupKind, TimeFunction, infinitesimal_consistency
from streamsym.verify import (laplace_residual, pde_residual, random_points,
                              wave_translation_check)

STEP = FdScheme(h=1e-2)
SEED = 42


def _line(number, title, ok, detail):
    return "criterion %d [%s] %s: %s" % (number, "PASS" if ok else "FAIL", title, detail)


# ---------------------------------------------------------------------------
# 1. PDE satisfaction
# ---------------------------------------------------------------------------

def _negative_controls():
    p = WaveParams()
    quartic = StreamSolution.from_function(lambda x, y, t: x ** 4 * y, "x^4 y")
    broken = StreamSolution.from_function(
        lambda x, y, t: np.tanh(p.k1 * x + p.k1 * y + p.d0 - p.omega * t),
        "tanh with real phase", length_scale=0.5)
    return [(quartic, PRESETS["eq10"].window), (broken, PRESETS["eq37"].window)]


def criterion_pde():
    start = time.perf_counter()
    failures, worst_abs, orders = [], 0.0, []
    for name in SEED_PRESETS + SYMMETRY_PRESETS:
        s = build_preset(name)
        r = pde_residual(s, random_points(s, PRESETS[name].window, 50, SEED, STEP), scheme=STEP)
        worst_abs = max(worst_abs, r.max_abs)
        orders.append(r.order_estimate)
        if not (r.max_abs <= 1e-2 and 1.8 <= r.order_estimate <= 2.5):
            failures.append("%s(max %.2e, order %.3f)" % (name, r.max_abs, r.order_estimate))
    for s, window in _negative_controls():
        r = pde_residual(s, random_points(s, window, 50, SEED, STEP), scheme=STEP)
        norms = r.level_norms
        non_decreasing = bool(np.all(np.diff(norms) >= -1e-3 * norms[:-1]))
        if r.passed() or not non_decreasing:
            failures.append("negative control %s not rejected" % s.label)
    elapsed = time.perf_counter() - start
    if elapsed > 10.0:
        failures.append("runtime %.1f s" % elapsed)
    detail = "15 presets, max |R| %.2e, order in [%.3f, %.3f], 2 controls rejected, %.2f s" % (
        worst_abs, min(orders), max(orders), elapsed)
    return not failures, detail if not failures else "; ".join(failures)


# ---------------------------------------------------------------------------
# 2. Harmonic suite
# ---------------------------------------------------------------------------

def criterion_harmonic():
    cases = [("eq13", {"n": 1}), ("eq13", {"n": 2}), ("eq13", {"n": -1}), ("eq30", {}),
             ("eq35", {}), ("eq37", {}), ("eq39a", {}), ("eq39b", {})]
    worst, failures = 0.0, []
    for name, opts in cases:
        s = build_preset(name, **opts)
        r = laplace_residual(s, random_points(s, PRESETS[name].window, 50, SEED, STEP),
                             scheme=STEP)
        worst = max(worst, r.max_abs)
        if r.max_abs > 1e-4:
            failures.append("%s%s %.2e" % (name, opts or "", r.max_abs))
    quad = build_preset("eq40a")
    lap = laplace_residual(quad, random_points(quad, PRESETS["eq40a"].window, 50, SEED, STEP),
                           scheme=STEP).residuals
    off = float(np.max(np.abs(lap - 16.0)))
    if off > 1e-3:
        failures.append("eq40a laplacian off 16 by %.2e" % off)
    detail = "8 harmonic cases max |lap| %.2e; eq40a lap = 16 within %.1e" % (worst, off)
    return not failures, detail if not failures else "; ".join(failures)


# ---------------------------------------------------------------------------
# 3. Closed-form velocity of the radial solution
# ---------------------------------------------------------------------------

def criterion_radial_velocity():
    s = make_oseen_rankine(C2=1.0, C3=1.0, re_number=1.0)
    rng = np.random.default_rng(SEED)
    r, angle = rng.uniform(0.5, 5.0, 100), rng.uniform(0.0, 2 * math.pi, 100)
    t = rng.uniform(0.5, 4.0, 100)
    x, y = r * np.cos(angle), r * np.sin(angle)
    u, v = s.analytic_velocity(x, y, t)
    psi = lambda X, Y, T: np.real(s.psi_fn(X, Y, T))
    psi_y, _ = fd_partial(psi, (0, 1, 0), (x, y, t), STEP)
    psi_x, _ = fd_partial(psi, (1, 0, 0), (x, y, t), STEP)
    rel = max(np.max(np.abs(psi_y - u) / np.abs(u)), np.max(np.abs(-psi_x - v) / np.abs(v)))
    return rel <= 1e-6, "max relative deviation %.2e over 100 points" % rel


# ---------------------------------------------------------------------------
# 4. Group laws
# ---------------------------------------------------------------------------

_FUNCTIONS = {GroupKind.G_ALPHA: TimeFunction("sine", 0.7, 1.3),
              GroupKind.G_BETA: TimeFunction("quadratic", 0.4),
              GroupKind.G_GAMMA: TimeFunction("linear", 2.0)}


def criterion_group_laws():
    rng = np.random.default_rng(SEED)
    law_err, gen_err = 0.0, 0.0
    for kind in GroupKind:
        fn = _FUNCTIONS.get(kind)
        make = lambda e: GroupElement(kind, e, fn)
        for _ in range(20):
            x, y = rng.uniform(-3, 3, 2)
            t, psi = rng.uniform(0.1, 3.0), rng.uniform(-2, 2)
            e1, e2 = rng.uniform(-1, 1, 2)
            pt = (x, y, t, psi)
            twice = make(e2).transform_point(*make(e1).transform_point(*pt))
            once = make(e1 + e2).transform_point(*pt)
            back = make(-e1).transform_point(*make(e1).transform_point(*pt))
            law_err = max(law_err,
                          np.max(np.abs(np.array(twice, complex) - np.array(once, complex))),
                          np.max(np.abs(np.array(back, complex) - np.array(pt, complex))))
            gen_err = max(gen_err, infinitesimal_consistency(make(0.3), (x, y, t), psi))
    ok = law_err <= 1e-10 and gen_err <= 1e-6
    return ok, "7 kinds: composition/inverse error %.1e, generator error %.1e" % (law_err, gen_err)


# ---------------------------------------------------------------------------
# 5. Propagation
# ---------------------------------------------------------------------------

def _peak_shift(before, after, max_cells):
    """x-shift (in cells) maximising the normalised cross-correlation."""
    best, best_score = 0, -np.inf
    n = before.shape[0]
    for shift in range(-max_cells, max_cells + 1):
        if shift >= 0:
            a, b = after[shift:], before[:n - shift]
        else:
            a, b = after[:n + shift], before[-shift:]
        score = np.sum(a * b) / math.sqrt(np.sum(a * a) * np.sum(b * b))
        if score > best_score:
            best, best_score = shift, score
    return best


def criterion_propagation():
    s = build_preset("eq30")
    speed = s.propagation[1]
    window = PRESETS["eq30"].window
    grid = Grid(window.x[0], window.x[1], window.y[0], window.y[1], 101, 41)
    mismatch = max(wave_translation_check(s, grid, 0.5, dt) for dt in (0.0, 1.0, 20.0))
    failures = [] if mismatch <= 1e-10 else ["translation mismatch %.2e" % mismatch]
    shifts = []
    with tempfile.TemporaryDirectory() as tmp:
        for dt in (1.0, 20.0):
            cli_main(["frames", "--preset", "eq30", "--grid", "%r:%r:-1:1:101x41" % window.x,
                      "--t", "0", "--t", repr(dt), "--out", tmp, "--format", "csv"])
            f0, _ = read_field(Path(tmp, "frame_0000.csv").read_text())
            f1, _ = read_field(Path(tmp, "frame_0001.csv").read_text())
            # half a wavelength of search keeps the periodic pattern unambiguous
            cells = _peak_shift(f0.values, f1.values, 24)
            expected = speed * dt / f0.grid.dx
            shifts.append((dt, cells, expected))
            if abs(cells - expected) > 1.0:
                failures.append("dt=%g peak %d cells, expected %.2f" % (dt, cells, expected))
    detail = "c = %.3f, mismatch %.1e, peaks %s" % (
        speed, mismatch, ", ".join("dt=%g: %d vs %.2f cells" % v for v in shifts))
    return not failures, detail if not failures else "; ".join(failures)


# ---------------------------------------------------------------------------
# 6. Exponential integral
# ---------------------------------------------------------------------------

def criterion_e1():
    mpmath.mp.dps = 30
    worst = 0.0
    for x in (0.01, 0.1, 1.0, 5.0, 10.0, 30.0):
        oracle = mpmath.quad(lambda s: mpmath.exp(-s) / s, [x, x + 1, x + 10, x + 100, mpmath.inf])
        worst = max(worst, abs(exp_integral_e1(x) - float(oracle)) / float(oracle))
    return worst <= 1e-10, "max relative error %.2e against quadrature" % worst


# ---------------------------------------------------------------------------
# 7. Pressure
# ---------------------------------------------------------------------------

def criterion_pressure():
    failures, parts = [], []
    for name in ("uniform", "eq30"):
        w = PRESETS[name].window
        grid = Grid(w.x[0], w.x[1], w.y[0], w.y[1], 101, 101)
        ref = ((w.x[0], w.y[0]), 1.5)
        a = recover_pressure(build_preset(name), grid, 1.0, ref, path="xy")
        b = recover_pressure(build_preset(name), grid, 1.0, ref, path="yx")
        gap = float(np.max(np.abs(a.values - b.values)))
        scale = float(np.max(np.abs(a.values - 1.5)))
        parts.append("%s gap %.1e of %.1e" % (name, gap, scale))
        if gap > 1e-3 * scale:
            failures.append("%s path gap %.2e vs scale %.2e" % (name, gap, scale))
    still = StreamSolution.from_function(lambda x, y, t: np.zeros(np.shape(x)) + 2.0, "still")
    p = recover_pressure(still, Grid(-1, 1, -1, 1, 21, 21), 0.0, ((0.0, 0.0), -0.75))
    dev = float(np.max(np.abs(p.values + 0.75)))
    parts.append("quiescent deviation %.1e" % dev)
    if dev > 1e-12:
        failures.append("quiescent pressure deviates by %.2e" % dev)
    return not failures, ", ".join(parts) if not failures else "; ".join(failures)


# ---------------------------------------------------------------------------
# 8. Contour topology
# ---------------------------------------------------------------------------

def _extrema(row):
    """Indices where the slope changes sign; flat steps inherit the previous slope."""
    slope = np.sign(np.diff(row))
    for i in range(1, len(slope)):
        if slope[i] == 0:
            slope[i] = slope[i - 1]
    return [i + 1 for i in range(len(slope) - 1) if slope[i] * slope[i + 1] < 0]


def _concentric(s, t, grid):
    """Every contour lies on an origin-centred circle and each level has a
    closed ring centred within one cell of the origin.

    Levels pass through radii inside the inscribed disk; curves at larger
    radius may be cut into arcs by the square window corners.
    """
    field = sample_grid(s, grid, t)
    radii = (0.5, 1.0, 1.5, 2.0, 2.5)
    levels = [float(np.real(s.psi_fn(r, 0.0, t))) for r in radii]
    for r, cs in zip(radii, extract_contours(field, levels)):
        rings = [p.points for p in cs.polylines if p.closed]
        if not rings:
            return False, "level through r=%g has no closed curve" % r
        for line in cs.polylines:
            if np.ptp(np.hypot(*line.points.T)) > 2 * grid.dx:
                return False, "level through r=%g has a non-circular curve" % r
        if any(np.hypot(*ring.mean(axis=0)) > grid.dx for ring in rings):
            return False, "level through r=%g has an off-centre ring" % r
    return True, ""


def criterion_topology():
    failures = []
    lattice = Grid(-2 * math.pi, 2 * math.pi, -2 * math.pi, 2 * math.pi, 101, 101)
    field = sample_grid(build_preset("eq30"), lattice, 0.0)
    sets = extract_contours(field, 9)
    if len(sets) != 9 or not all(cs.polylines for cs in sets):
        failures.append("eq30: expected 9 non-empty contour sets")
    for j in range(101):
        row = field.values[:, j]
        signs = np.sign(row[_extrema(row)])
        if len(signs) < 6 or np.any(signs[1:] != -signs[:-1]):
            failures.append("eq30 extrema along x do not alternate at row %d" % j)
            break
    disk = Grid(-3, 3, -3, 3, 101, 101)
    ok, why = _concentric(build_preset("eq28", C2=0.0, C3=1.0), 1.0, disk)
    if not ok:
        failures.append("eq28 " + why)
    for t in (1.0, 2.0):
        ok, why = _concentric(build_preset("eq41"), t, disk)
        if not ok:
            failures.append("eq41 t=%g %s" % (t, why))
    detail = "eq30 lattice extrema alternate on all 101 rows; eq28 and eq41 (t=1,2) curves concentric"
    return not failures, detail if not failures else "; ".join(failures)


# ---------------------------------------------------------------------------
# 9. CLI determinism
# ---------------------------------------------------------------------------

def criterion_determinism():
    commands = [
        ["sample", "--preset", "eq37", "--format", "csv"],
        ["sample", "--preset", "eq41", "--t", "2", "--quantity", "pressure"],
        ["contour", "--preset", "eq30", "--grid", "-6.28:6.28:101x101", "--t", "0",
         "--levels", "9"],
        ["contour", "--preset", "eq28", "--format", "csv"],
    ]
    failures = []
    with tempfile.TemporaryDirectory() as tmp:
        for n, argv in enumerate(commands):
            outputs = []
            for run in range(2):
                path = Path(tmp, "out_%d_%d" % (n, run))
                proc = subprocess.run([sys.executable, "-m", "streamsym", *argv, "--out", str(path)],
                                      capture_output=True)
                outputs.append(path.read_bytes() if proc.returncode == 0 else None)
            if outputs[0] is None or outputs[0] != outputs[1]:
                failures.append(" ".join(argv[:3]))
    return not failures, ("%d commands byte-identical across runs" % len(commands)
                          if not failures else "differs: " + "; ".join(failures))


CRITERIA = [
    (1, "PDE satisfaction", criterion_pde),
    (2, "harmonic suite", criterion_harmonic),
    (3, "radial closed-form velocity", criterion_radial_velocity),
    (4, "group laws", criterion_group_laws),
    (5, "propagation", criterion_propagation),
    (6, "E1 accuracy", criterion_e1),
    (7, "pressure self-consistency", criterion_pressure),
    (8, "contour topology", criterion_topology),
    (9, "CLI determinism", criterion_determinism),
]


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(number, title, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(number, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = [(n, t, *check()) for n, t, check in CRITERIA]
    for n, t, ok, detail in results:
        print(_line(n, t, ok, detail))
    sys.exit(0 if all(r[2] for r in results) else 1)
