"""``reur`` command line.

    reur <subcommand> [--config FILE] [--out PATH] [--format csv|json] [--seed N]

Subcommands emit tables of bound values (``squeeze``, ``thermal``, ``masses``,
``ising``) or run the invariant suite (``verify``).  Every run is
deterministic: the same arguments produce byte-identical output.
"""
import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bounds, ising, lattice, verify

SUBCOMMANDS = ("squeeze", "thermal", "masses", "ising", "verify")

DEFAULTS = {
    "squeeze": {"lambda_grid": [k / 100 for k in range(96)], "n_pairs": [1, 5, 25, 100]},
    "thermal": {"temps": [0.01, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0],
                "masses": [0.5, 1.0, 2.0]},
    "masses": {"ratio_grid": [10.0 ** (k / 10) for k in range(-30, 31)], "masses": [1.0],
               "particle_numbers": [1, 2, 3, 4], "momenta": [0.0, 1.0, 2.0, 10.0]},
    "ising": {"j1_list": [0.5, 1.5, 2.0, 2.5], "ratio_grid": None, "n_modes": 10,
              "epsilon": 1.0, "h1": 1.0, "h2": 1.0},
    "verify": {"state": None},
}

HEADERS = {
    "squeeze": ["lambda", "n_pairs", "bound"],
    "thermal": ["T", "m", "b_relativistic", "b_nonrelativistic", "closed_form_check"],
    "masses": ["ratio", "scenario_label", "bound"],
    "ising": ["ratio", "J1", "bound", "divergent"],
    "verify": ["name", "passed", "deviation", "tolerance", "detail"],
}


class ConfigError(ValueError):
    pass


def parse_floats(text):
    """Comma-separated numbers, or ``start:stop:num`` for an inclusive linspace."""
    text = text.strip()
    if text.count(":") == 2:
        start, stop, num = text.split(":")
        num = int(num)
        if num < 1:
            raise argparse.ArgumentTypeError("linspace needs at least one point")
        return [float(x) for x in np.linspace(float(start), float(stop), num)]
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    parser = argparse.ArgumentParser(prog="reur", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run configuration")
    common.add_argument("--out", type=Path, help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="output format")
    common.add_argument("--seed", type=int, help="seed for randomized checks")
    common.add_argument("--plot-script", type=Path,
                        help="also write a matplotlib script that plots the output")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("squeeze", parents=[common], help="squeezed-vacuum bounds")
    p.add_argument("--lambda-grid", type=parse_floats)

    p = sub.add_parser("thermal", parents=[common], help="thermal density bounds")
    p.add_argument("--temps", type=parse_floats)
    p.add_argument("--masses", type=parse_floats)

    p = sub.add_parser("masses", parents=[common], help="distinct-mass vacuum bounds")
    p.add_argument("--ratio-grid", type=parse_floats)
    p.add_argument("--masses", type=parse_floats, help="reference mass m1 (one value)")

    p = sub.add_parser("ising", parents=[common], help="Ising vacuum-vs-vacuum scan")
    p.add_argument("--j1-list", type=parse_floats)
    p.add_argument("--ratio-grid", type=parse_floats)
    p.add_argument("--n-modes", type=int)
    p.add_argument("--epsilon", type=float)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--state", type=Path, help="state or occupation JSON to validate")
    return parser


def resolve_config(args):
    """Merge defaults, the config file and command-line overrides (in that order)."""
    params = dict(DEFAULTS[args.subcommand])
    run = {"format": "json" if args.subcommand == "verify" else "csv",
           "seed": verify.DEFAULT_SEED, "output_path": None}
    if args.config is not None:
        with open(args.config) as fh:
            cfg = json.load(fh)
        if cfg.get("subcommand", args.subcommand) != args.subcommand:
            raise ConfigError(
                f"config is for '{cfg['subcommand']}', not '{args.subcommand}'")
        unknown = set(cfg.get("parameters", {})) - set(params)
        if unknown:
            raise ConfigError(f"unknown parameters for {args.subcommand}: {sorted(unknown)}")
        params.update(cfg.get("parameters", {}))
        for key in ("format", "seed", "output_path"):
            if cfg.get(key) is not None:
                run[key] = cfg[key]
    for key in params:
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    if args.format is not None:
        run["format"] = args.format
    if args.seed is not None:
        run["seed"] = args.seed
    if args.out is not None:
        run["output_path"] = str(args.out)
    if run["format"] not in ("csv", "json"):
        raise ConfigError(f"unknown format {run['format']!r}")
    if int(run["seed"]) < 0:
        raise ConfigError("seed must be unsigned")
    return params, run


# validation ---------------------------------------------------------------------

def _floats(params, key):
    values = params[key]
    if values is None:
        return None
    try:
        values = [float(v) for v in values]
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be a list of numbers") from None
    if not values:
        raise ConfigError(f"{key} is empty")
    if not all(math.isfinite(v) for v in values):
        raise ConfigError(f"{key} must be finite")
    return values


def _validate(sub, params):
    p = dict(params)
    if sub == "squeeze":
        p["lambda_grid"] = _floats(p, "lambda_grid")
        if any(not 0.0 <= lam < 1.0 for lam in p["lambda_grid"]):
            raise ConfigError("lambda grid must lie in [0, 1)")
        p["n_pairs"] = [int(n) for n in p["n_pairs"]]
        if any(n < 1 for n in p["n_pairs"]):
            raise ConfigError("n_pairs must be positive integers")
    elif sub == "thermal":
        p["temps"] = _floats(p, "temps")
        p["masses"] = _floats(p, "masses")
        if any(t <= 0.0 for t in p["temps"]):
            raise ConfigError("temperatures must be positive")
        if any(m <= 0.0 for m in p["masses"]):
            raise ConfigError("masses must be positive")
    elif sub == "masses":
        p["ratio_grid"] = _floats(p, "ratio_grid")
        p["masses"] = _floats(p, "masses")
        p["momenta"] = _floats(p, "momenta")
        p["particle_numbers"] = _floats(p, "particle_numbers")
        if any(r <= 0.0 for r in p["ratio_grid"]):
            raise ConfigError("mass ratios must be positive")
        if len(p["masses"]) != 1 or p["masses"][0] <= 0.0:
            raise ConfigError("masses takes a single positive reference mass m1")
        if any(n < 0.0 for n in p["particle_numbers"]):
            raise ConfigError("particle numbers must be non-negative")
    elif sub == "ising":
        p["j1_list"] = _floats(p, "j1_list")
        if p["ratio_grid"] is not None:
            p["ratio_grid"] = _floats(p, "ratio_grid")
            if any(b < a for a, b in zip(p["ratio_grid"], p["ratio_grid"][1:])):
                raise ConfigError("ratio grid must be sorted ascending")
        n = p["n_modes"]
        if isinstance(n, bool) or int(n) != n or n < 2 or n % 2:
            raise ConfigError("n_modes must be an even integer >= 2")
        p["n_modes"] = int(n)
        if not float(p["epsilon"]) > 0.0:
            raise ConfigError("epsilon must be positive")
        if float(p["h2"]) == 0.0:
            raise ConfigError("h2 must be non-zero")
        if any(j == 0.0 for j in p["j1_list"]) and float(p["h1"]) == 0.0:
            raise ConfigError("reference couplings (0, 0) are not allowed")
    return p


# runners ------------------------------------------------------------------------

def run_squeeze(p, run):
    rows = []
    for n in p["n_pairs"]:
        for lam in p["lambda_grid"]:
            rows.append({"lambda": lam, "n_pairs": n,
                         "bound": bounds.squeezing_bound(n, lam).value})
    return {"rows": rows}


def run_thermal(p, run):
    rows = []
    for m in p["masses"]:
        for t in p["temps"]:
            rel = bounds.thermal_bound(lattice.RelativisticContinuum(m), t).value
            nonrel = bounds.thermal_bound(lattice.NonRelativisticContinuum(m), t).value
            closed = bounds.nonrel_thermal_closed_form(m, t)
            check = abs(nonrel - closed) / closed if closed > 0.0 else abs(nonrel)
            rows.append({"T": t, "m": m, "b_relativistic": rel,
                         "b_nonrelativistic": nonrel, "closed_form_check": check})
    return {"rows": rows}


def _fmt_num(x):
    return f"{x:g}"


def mass_scenarios(p):
    """``(label, particles)`` pairs: vacuum, n at p=0, then n=1 at each momentum."""
    out = [("vacuum", ())]
    for n in p["particle_numbers"]:
        out.append((f"n={_fmt_num(n)} p=0", ((0.0, n),)))
    for mom in p["momenta"]:
        label = f"n=1 p={_fmt_num(mom)}"
        if all(label != existing for existing, _ in out):
            out.append((label, ((mom, 1.0),)))
    return out


def run_masses(p, run):
    m1 = p["masses"][0]
    rows = []
    for label, particles in mass_scenarios(p):
        for r in p["ratio_grid"]:
            rep = bounds.distinct_mass_bound(m1, r * m1, particles)
            rows.append({"ratio": r, "scenario_label": label, "bound": rep.value,
                         "divergent": rep.divergent})
    return {"rows": rows, "m1": m1}


def run_ising(p, run):
    rows = []
    minima = []
    grid = p["ratio_grid"]
    for j1 in p["j1_list"]:
        ref = ising.IsingCouplings(j1, float(p["h1"]), float(p["epsilon"]), p["n_modes"])
        curve = ising.scan_bound(ref, float(p["h2"]), grid)
        for r, b in zip(curve.ratio_grid, curve.bounds):
            rows.append({"ratio": float(r), "J1": j1, "bound": b.value,
                         "divergent": b.divergent})
        for r, v in curve.minima:
            minima.append({"J1": j1, "ratio": r, "value": v})
    return {"rows": rows, "minima": minima}


def run_verify(p, run):
    checks = verify.run_all(int(run["seed"]), p.get("state"))
    return {"rows": [c.as_dict() for c in checks],
            "passed": all(c.passed for c in checks)}


RUNNERS = {"squeeze": run_squeeze, "thermal": run_thermal, "masses": run_masses,
           "ising": run_ising, "verify": run_verify}


# output -------------------------------------------------------------------------

def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(float(v))
    if v is None:
        return ""
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def to_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(row.get(h)) for h in header])
    return buf.getvalue()


def to_json(sub, params, run, result):
    rows = []
    for row in result["rows"]:
        out = {k: _json_value(v) for k, v in row.items()}
        if "bound" in row and isinstance(row["bound"], float) and not math.isfinite(row["bound"]):
            out["divergent"] = bool(row.get("divergent", False))
            out["undefined"] = math.isnan(row["bound"])
        rows.append(out)
    doc = {"subcommand": sub, "parameters": params, "seed": int(run["seed"]), "rows": rows}
    for key in ("minima", "passed", "m1"):
        if key in result:
            doc[key] = result[key]
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=False) + "\n"


PLOT_TEMPLATE = '''"""Plot {data} (generated by reur {sub})."""
import csv
from collections import defaultdict

import matplotlib.pyplot as plt

series = defaultdict(lambda: ([], []))
with open({data!r}) as fh:
    for row in csv.DictReader(fh):
        y = float(row[{y!r}])
        if y == float("inf"):
            continue
        xs, ys = series[row[{group!r}]]
        xs.append(float(row[{x!r}]))
        ys.append(y)

fig, ax = plt.subplots()
for label, (xs, ys) in series.items():
    ax.plot(xs, ys, label=f"{group} = {{label}}")
ax.set_xlabel({x!r})
ax.set_ylabel({y!r})
{extra}ax.legend()
fig.savefig({image!r})
'''

PLOT_AXES = {
    "squeeze": ("lambda", "bound", "n_pairs", "ax.set_yscale('log')\n"),
    "thermal": ("T", "b_relativistic", "m", "ax.set_xscale('log')\nax.set_yscale('log')\n"),
    "masses": ("ratio", "bound", "scenario_label", "ax.set_xscale('log')\nax.set_yscale('log')\n"),
    "ising": ("ratio", "bound", "J1", "ax.set_ylim(0, 10)\n"),
}


def plot_script(sub, data_path, script_path):
    x, y, group, extra = PLOT_AXES[sub]
    image = str(Path(data_path).with_suffix(".png"))
    return PLOT_TEMPLATE.format(data=str(data_path), sub=sub, x=x, y=y, group=group,
                                extra=extra, image=image)


def render(sub, params, run, result):
    if run["format"] == "json":
        return to_json(sub, params, run, result)
    text = to_csv(HEADERS[sub], result["rows"])
    if sub == "ising" and run["output_path"] is None:
        text += "\n" + to_csv(["J1", "ratio", "value"], result["minima"])
    return text


def _write(path, text):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def minima_path(out):
    out = Path(out)
    return out.with_name(out.stem + "_minima" + (out.suffix or ".csv"))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    sub = args.subcommand
    try:
        params, run = resolve_config(args)
        params = _validate(sub, params)
        if sub == "verify" and params.get("state") is not None:
            params["state"] = str(params["state"])
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        parser.exit(2, f"reur {sub}: error: {exc}\n")
    result = RUNNERS[sub](params, run)
    text = render(sub, params, run, result)
    out = run["output_path"]
    if out is None:
        sys.stdout.write(text)
    else:
        _write(out, text)
        if sub == "ising" and run["format"] == "csv":
            _write(minima_path(out), to_csv(["J1", "ratio", "value"], result["minima"]))
    if args.plot_script is not None and sub != "verify":
        if out is None or run["format"] != "csv":
            parser.exit(2, f"reur {sub}: error: --plot-script needs --out with csv format\n")
        _write(args.plot_script, plot_script(sub, out, args.plot_script))
    if sub == "verify":
        return 0 if result["passed"] else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
