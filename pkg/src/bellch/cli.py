"""Experiment runner: table/figure data as deterministic CSV/JSON.

Exit codes: 0 success, 2 argument/parse error, 3 size guard exceeded,
4 numeric failure.
"""

import argparse
import contextlib
import json
import sys
from math import pi

import numpy as np

from . import __version__
from .bell import ch, chsh_prob, i3322, load_functional
from .horodecki import max_ch
from .scheme import analytic_ch_value, two_qubit_ncopy_value
from .seesaw import SeesawConfig, seesaw_maximize
from .states import (
    SizeGuardError,
    isotropic,
    load_state,
    random_two_qubit,
    schmidt_state,
    tensor_power_density,
    tensor_power_schmidt,
    werner,
)

ENHANCEMENT_MARGIN = 1e-6

TABLE1_STATES = [
    ("2:1", (2, 1)),
    ("1:1:1", (1, 1, 1)),
    ("1:2:3", (1, 2, 3)),
    ("1:2:3:4", (1, 2, 3, 4)),
    ("1:2:3:3", (1, 2, 3, 3)),
    ("1:1:1:1:1", (1, 1, 1, 1, 1)),
]
TABLE1_COPIES = (1, 2, 3, 4, 5, 10)


@contextlib.contextmanager
def _open_out(path):
    if path:
        with open(path, "w") as f:
            yield f
    else:
        yield sys.stdout


def _write_csv(stream, command, seed, header, rows, fmt="%.6f"):
    stream.write(f"# command={command} seed={seed} version={__version__}\n")
    stream.write(",".join(header) + "\n")
    for row in rows:
        cells = [fmt % v if isinstance(v, float) else str(v) for v in row]
        stream.write(",".join(cells) + "\n")


def _parse_spec(text):
    """Inline JSON or @path-to-file."""
    if text.startswith("@"):
        with open(text[1:]) as f:
            return json.load(f)
    return json.loads(text)


def _named_functional(text):
    name = text.strip().lower()
    if name == "ch":
        return ch()
    if name == "chsh":
        return chsh_prob()
    if name == "i3322":
        return i3322()
    return load_functional(_parse_spec(text))


def _config(args):
    return SeesawConfig(restarts=args.restarts, max_iters=args.iters,
                        tol=args.tol, seed=args.seed)


def cmd_table1(args):
    rows = []
    for label, raw in TABLE1_STATES:
        s = schmidt_state(np.array(raw, dtype=float))
        for n in TABLE1_COPIES:
            rows.append((label, n, analytic_ch_value(tensor_power_schmidt(s, n))))
    with _open_out(args.out) as f:
        _write_csv(f, "table1", args.seed, ("state", "copies", "value"),
                   rows, fmt="%.5f")
    return 0


def cmd_fig1(args):
    if args.grid < 2:
        raise ValueError("--grid must be >= 2")
    phis = [(i + 1) * (pi / 4) / args.grid for i in range(args.grid)]
    rows = []
    for phi in phis:
        for n in range(1, 11):
            rows.append((float(phi), f"N={n}", two_qubit_ncopy_value(phi, n)))
        single = max_ch(load_state({"kind": "schmidt",
                                    "coeffs": [np.cos(phi), np.sin(phi)]}))
        rows.append((float(phi), "horodecki", single))
    with _open_out(args.out) as f:
        _write_csv(f, "fig1", args.seed, ("phi", "curve", "value"), rows)
    return 0


def cmd_werner_scan(args):
    if args.copies > 4:
        raise SizeGuardError("werner-scan supports at most 4 copies")
    cfg = _config(args)
    f_ch = ch()
    ps = np.linspace(0.25, 1.0, args.grid)
    rows = []
    for p in ps:
        rho = werner(float(p))
        exact = max_ch(rho)
        res = seesaw_maximize(tensor_power_density(rho, args.copies), f_ch, cfg)
        rows.append((float(p), exact, res.value))
    with _open_out(args.out) as f:
        _write_csv(f, "werner-scan", args.seed,
                   ("p", "max_ch_single", "seesaw_ncopy"), rows)
    return 0


def cmd_isotropic_scan(args):
    if args.d ** (2 * args.copies) > 4096:
        raise SizeGuardError("isotropic-scan dimension guard exceeded")
    cfg = _config(args)
    f_ch = ch()
    ps = np.linspace(0.0, 1.0, args.grid)
    rows = []
    for p in ps:
        rho = isotropic(args.d, float(p))
        res = seesaw_maximize(tensor_power_density(rho, args.copies), f_ch, cfg)
        rows.append((float(p), args.copies, res.value))
    with _open_out(args.out) as f:
        _write_csv(f, "isotropic-scan", args.seed, ("p", "copies", "value"), rows)
    return 0


def run_survey(count, copies, cfg, rng):
    """Sample HS-random Bell-CH-violating two-qubit states and compare the
    N-copy see-saw value against the exact single-copy maximum."""
    from .states import concurrence, linear_entropy

    f_ch = ch()
    rows = []
    enhanced_count = 0
    sampled = 0
    while len(rows) < count:
        rho = random_two_qubit(rng)
        sampled += 1
        single = max_ch(rho)
        if single <= 0.0:
            continue
        res = seesaw_maximize(tensor_power_density(rho, copies), f_ch, cfg)
        enhanced = res.value > single + ENHANCEMENT_MARGIN
        enhanced_count += enhanced
        rows.append((len(rows), concurrence(rho), linear_entropy(rho),
                     single, res.value, int(enhanced)))
    summary = {
        "count": count,
        "copies": copies,
        "sampled": sampled,
        "enhanced_count": enhanced_count,
        "enhanced_fraction": enhanced_count / count,
    }
    return rows, summary


def cmd_survey(args):
    cfg = _config(args)
    rng = np.random.default_rng(args.seed)
    rows, summary = run_survey(args.count, args.copies, cfg, rng)
    summary["seed"] = args.seed
    with _open_out(args.out) as f:
        _write_csv(f, "survey", args.seed,
                   ("index", "concurrence", "linear_entropy",
                    "max_ch_single", "seesaw_ncopy", "enhanced"), rows)
    summary_path = args.summary_out or (args.out + ".summary.json" if args.out else None)
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    if summary_path:
        with open(summary_path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _measurements_json(meas):
    return [[[[z.real, z.imag] for z in row] for row in m.plus] for m in meas]


def cmd_seesaw(args):
    rho = load_state(_parse_spec(args.state))
    f = _named_functional(args.ineq)
    if args.copies > 1:
        rho = tensor_power_density(rho, args.copies)
    res = seesaw_maximize(rho, f, _config(args))
    out = {
        "value": res.value,
        "lhv_bound": f.lhv_bound,
        "inequality": f.name,
        "copies": args.copies,
        "iterations": res.iterations,
        "restart_index": res.restart_index,
        "converged": res.converged,
        "seed": args.seed,
        "a_meas": _measurements_json(res.a_meas),
        "b_meas": _measurements_json(res.b_meas),
    }
    with _open_out(args.out) as f_out:
        json.dump(out, f_out, indent=2, sort_keys=True)
        f_out.write("\n")
    return 0


def _add_seesaw_flags(p):
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-10)


def build_parser():
    parser = argparse.ArgumentParser(prog="bellch",
                                     description="Bell-CH violation experiments")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn in (("table1", cmd_table1),):
        p = sub.add_parser(name, help="analytic N-copy values for the reference states")
        p.set_defaults(fn=fn)

    p = sub.add_parser("fig1", help="two-qubit N-copy value curves over phi")
    p.add_argument("--grid", type=int, default=90)
    p.set_defaults(fn=cmd_fig1)

    p = sub.add_parser("werner-scan", help="Werner states: exact vs N-copy see-saw")
    p.add_argument("--grid", type=int, default=16)
    p.add_argument("--copies", type=int, default=2)
    _add_seesaw_flags(p)
    p.set_defaults(fn=cmd_werner_scan)

    p = sub.add_parser("isotropic-scan", help="isotropic states: N-copy see-saw values")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--grid", type=int, default=11)
    p.add_argument("--copies", type=int, default=1)
    _add_seesaw_flags(p)
    p.set_defaults(fn=cmd_isotropic_scan)

    p = sub.add_parser("survey", help="random two-qubit enhancement survey")
    p.add_argument("--count", type=int, default=5000)
    p.add_argument("--copies", type=int, default=3)
    p.add_argument("--summary-out")
    _add_seesaw_flags(p)
    p.set_defaults(fn=cmd_survey)

    p = sub.add_parser("seesaw", help="see-saw on one state/inequality pair")
    p.add_argument("--state", required=True, help="inline JSON or @file")
    p.add_argument("--ineq", default="ch", help="ch|chsh|i3322, inline JSON, or @file")
    p.add_argument("--copies", type=int, default=1)
    _add_seesaw_flags(p)
    p.set_defaults(fn=cmd_seesaw)

    for p in sub.choices.values():
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output path (default: stdout)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SizeGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
