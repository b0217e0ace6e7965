"""Command-line front end: sample fields, extract contours, write frame
sequences and run the verification suites.

Exit status: 0 ok, 1 verification failure, 2 configuration error,
3 domain error (e.g. a grid with no regular node).
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import os
import re
import sys

from .catalog import WaveParams, make_general_traveling, make_harmonic, \
    make_oseen_rankine, make_real_family
from .contours import DEFAULT_LEVEL_COUNT, extract_contours
from .errors import ConstructionError, DomainError, NotApplicableError, PathError
from .export import (contours_to_csv, contours_to_json, dumps_json,
                     field_to_csv, field_to_json)
from .fields import sample_grid
from .grid import Grid, Quantity
from .presets import PRESETS, Window, build_preset, get_preset
from .symmetry import GroupElement, apply_group
from .verify import DEFAULT_SEED, DEFAULT_TOLERANCE, verify_solution

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_DOMAIN = 0, 1, 2, 3
LAPLACE_TOLERANCE = 1e-4

FAMILIES = ("general", "quadratic", "exponential", "power", "cosine", "log",
            "tanh", "exp", "oseen")


class ConfigError(Exception):
    pass


def _add_solution_args(p):
    g = p.add_argument_group("solution")
    g.add_argument("--preset", help="named solution (see `list`)")
    g.add_argument("--family", choices=FAMILIES, help="explicit family instead of a preset")
    for name in ("k1", "k2", "d0", "omega"):
        g.add_argument("--" + name, type=float)
    g.add_argument("--re", type=float, dest="re_number", help="Reynolds number")
    for name in ("c1", "c2", "c3", "c4"):
        g.add_argument("--" + name, type=complex)
    g.add_argument("--A", type=complex, dest="amplitude", help="harmonic amplitude")
    g.add_argument("--n", type=float, dest="power", help="harmonic exponent")
    g.add_argument("--group", action="append", default=[], metavar="KIND:EPS[:FN]",
                   help="symmetry to apply (repeatable, left to right)")


def _add_output_args(p, fmt=True):
    p.add_argument("--grid", help="min:max:NxM or xmin:xmax:ymin:ymax:NxM")
    p.add_argument("--t", type=float, action="append", dest="times", help="time (repeatable)")
    p.add_argument("--quantity", choices=[q.value for q in Quantity], default="psi")
    p.add_argument("--out", help="output file (directory for `frames`); default stdout")
    if fmt:
        p.add_argument("--format", choices=("csv", "json"), default="json")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="streamsym", description="Exact stream-function solutions: "
        "sampling, contours, symmetry transforms and verification.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="print the preset catalog")

    p = sub.add_parser("sample", help="sample a field on a grid")
    _add_solution_args(p)
    _add_output_args(p)

    p = sub.add_parser("contour", help="extract iso-lines of a field")
    _add_solution_args(p)
    _add_output_args(p)
    p.add_argument("--levels", default=str(DEFAULT_LEVEL_COUNT),
                   help="level count or comma-separated level values")

    p = sub.add_parser("frames", help="one sampled field per time value")
    _add_solution_args(p)
    _add_output_args(p)
    p.add_argument("--levels", help="write contours instead of fields")

    p = sub.add_parser("verify", help="run the residual suites")
    _add_solution_args(p)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.add_argument("--out")
    for q in (sub.choices["sample"], sub.choices["contour"], sub.choices["frames"]):
        q.add_argument("--seed", type=int, default=DEFAULT_SEED,
                       help="recorded for provenance; sampling is deterministic")
    return parser


def _params(args, base):
    changes = {name: getattr(args, name) for name in
               ("k1", "k2", "d0", "omega", "re_number", "c1", "c2", "c3", "c4")
               if getattr(args, name) is not None}
    return base.replace(**changes)


def _options(args):
    opts = {}
    if args.amplitude is not None:
        opts["A"] = args.amplitude
    if args.power is not None:
        opts["n"] = args.power
    if args.c2 is not None:
        opts["C2"] = args.c2.real
    if args.c3 is not None:
        opts["C3"] = args.c3.real
    return opts


def resolve_solution(args):
    """``(solution, window, config)`` for the solution flags of ``args``."""
    if args.preset and args.family:
        raise ConfigError("give either --preset or --family, not both")
    if args.family:
        p = _params(args, WaveParams())
        opts = _options(args)
        fam = args.family
        if fam == "general":
            s = make_general_traveling(p)
        elif fam in ("quadratic", "exponential"):
            s = make_real_family(fam, p)
        elif fam == "oseen":
            s = make_oseen_rankine(opts.get("C2", 0.0), opts.get("C3", 1.0), p.re_number)
        else:
            s = make_harmonic(fam, opts.get("A", 1.0), opts.get("n", 1.0), p, label=fam)
        window = Window()
        source = {"family": fam}
    else:
        name = args.preset or ""
        try:
            preset = get_preset(name)
        except ConstructionError as exc:
            raise ConfigError(str(exc)) from None
        p = _params(args, preset.params)
        opts = _options(args)
        s = build_preset(name, p, **opts)
        window = preset.window
        source = {"preset": name}
    groups = [GroupElement.parse(text) for text in args.group]
    for g in groups:
        s = apply_group(g, s)
    config = dict(source, params=p.to_dict(),
                  options={k: _plain(v) for k, v in sorted(opts.items())},
                  groups=[g.label for g in groups])
    return s, window, config


def _plain(v):
    if isinstance(v, complex):
        return [v.real, v.imag] if v.imag else v.real
    return v


def _grid(args, window):
    try:
        return Grid.parse(args.grid) if args.grid else Grid.parse(window.grid_spec(101))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _times(args, s):
    return args.times or [max(1.0, s.t_min)]


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _field(s, grid, t, quantity):
    field = sample_grid(s, grid, t, quantity)
    if field.mask.all():
        raise DomainError("every grid node is singular or outside the valid "
                          "time range at t=%g" % t)
    return field


def _levels(text):
    if text is None:
        return None
    parts = [v for v in text.split(",") if v.strip()]
    try:
        if len(parts) == 1 and float(parts[0]).is_integer() and "." not in parts[0]:
            return int(parts[0])
        return [float(v) for v in parts]
    except ValueError:
        raise ConfigError("bad --levels %r" % text) from None


def _render_field(field, config, fmt):
    return field_to_csv(field, config) if fmt == "csv" else field_to_json(field, config)


def _render_contours(field, levels, config, fmt):
    sets = extract_contours(field, levels)
    if fmt == "csv":
        return contours_to_csv(sets, field.t, config)
    return contours_to_json(sets, field.t, config)


def cmd_list(args):
    for name, preset in PRESETS.items():
        print("%-8s %s" % (name, preset.description))
    return EXIT_OK


def cmd_sample(args):
    s, window, config = resolve_solution(args)
    grid = _grid(args, window)
    t = _times(args, s)[0]
    config.update(command="sample", seed=args.seed)
    field = _field(s, grid, t, args.quantity)
    _emit(_render_field(field, config, args.format), args.out)
    return EXIT_OK


def cmd_contour(args):
    s, window, config = resolve_solution(args)
    grid = _grid(args, window)
    t = _times(args, s)[0]
    levels = _levels(args.levels)
    config.update(command="contour", seed=args.seed, levels=args.levels)
    field = _field(s, grid, t, args.quantity)
    _emit(_render_contours(field, levels, config, args.format), args.out)
    return EXIT_OK


def cmd_frames(args):
    s, window, config = resolve_solution(args)
    grid = _grid(args, window)
    times = _times(args, s)
    levels = _levels(args.levels)
    config.update(command="frames", seed=args.seed)
    out_dir = args.out or "frames"
    os.makedirs(out_dir, exist_ok=True)
    fields = [_field(s, grid, t, args.quantity) for t in times]

    def write(index):
        field = fields[index]
        text = (_render_field(field, config, args.format) if levels is None
                else _render_contours(field, levels, config, args.format))
        path = os.path.join(out_dir, "frame_%04d.%s" % (index, args.format))
        _emit(text, path)
        return path

    with ThreadPoolExecutor() as pool:
        paths = list(pool.map(write, range(len(times))))
    for path in paths:
        print(path)
    return EXIT_OK


def cmd_verify(args):
    s, window, config = resolve_solution(args)
    reports = verify_solution(s, window, args.points, args.seed)
    ok = True
    suites = []
    for r in reports:
        tol = args.tolerance if r.kind == "pde" else LAPLACE_TOLERANCE
        passed = r.passed(tol)
        ok &= passed
        suites.append(r.to_dict(tol))
        print("%-7s %-7s max_abs=%.3e order=%.3f %s%s" % (
            r.kind, s.label, r.max_abs, r.order_estimate,
            "PASS" if passed else "FAIL",
            " (resolved exactly)" if r.resolved_exactly else ""), file=sys.stderr)
    config.update(command="verify", seed=args.seed, points=args.points)
    document = dumps_json({"config": config, "passed": bool(ok), "suites": suites})
    if args.out:
        _emit(document, args.out)
    else:
        sys.stdout.write(document)
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {"list": cmd_list, "sample": cmd_sample, "contour": cmd_contour,
            "frames": cmd_frames, "verify": cmd_verify}


def _attach_negative_values(argv):
    """Join ``--opt -6.28:...`` into ``--opt=-6.28:...``: argparse would
    otherwise read a leading minus as a new option."""
    out = []
    i = 0
    while i < len(argv):
        token = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (token.startswith("--") and "=" not in token and nxt is not None
                and re.match(r"-[\d.]", nxt)):
            out.append("%s=%s" % (token, nxt))
            i += 2
        else:
            out.append(token)
            i += 1
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_negative_values(argv))
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ConstructionError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        print("available presets: %s" % ", ".join(PRESETS), file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, PathError, NotApplicableError) as exc:
        print("domain error: %s" % exc, file=sys.stderr)
        return EXIT_DOMAIN
    except BrokenPipeError:
        # reader went away (e.g. `| head`); silence the flush at interpreter exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
