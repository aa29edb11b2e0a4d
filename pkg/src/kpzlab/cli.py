"""Command-line entry point: one subcommand per experiment, seeded
reproducibility, CSV + JSON outputs, and a pass/fail gate per criterion.

Exit status: 0 when every criterion of the subcommand passes, 1 when a
criterion fails, 2 on configuration errors.  Output is byte-identical for
any --workers count.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .csvio import write_csv
from .errors import KpzlabError
from .experiments import (
    environment_experiment,
    holder_experiment,
    increment_samples,
    independence_experiment,
    invariance_experiment,
    limit_environment_experiment,
    selftest,
    transversal_samples,
    variation_experiment,
)
from .field import build_field
from .geodesy import weight_function
from .landscape import geodesic_between
from .limit_env import truncation_stability
from .paths import sample_brownian_bridge
from .rng import Rng
from .stats import empirical_survival, fit_tail_exponent

DEFAULT_SEED = 20260810
SUBCOMMANDS = (
    "selftest",
    "variation",
    "tails",
    "environment",
    "limit-env",
    "independence",
    "holder",
    "invariance",
)


@dataclass
class ExperimentConfig:
    """Declarative run configuration; echoed verbatim into every output."""

    seed: int = DEFAULT_SEED
    n_lines: int = 512
    delta: float = 1.0 / 128
    window: float = 6.0
    eps_list: tuple = ()
    alphas: tuple = ()
    n_samples: int = 1000
    out_dir: str = "out"
    workers: int = 1
    quantity: str = "pi"
    times: tuple = (0.25, 0.75)
    probes: tuple = (1.0,)
    resolutions: tuple = (32, 128, 512)
    band: tuple = (0.5, 0.99)
    r: float = 0.5
    eps: float = 0.375
    eps3_lines: int = 32
    level: float = 0.01
    c: float = 1.0
    limit_window: float = 6.0
    margin: float = 2.0
    stability: bool = False
    figures: bool = False
    triples: int = 1000

    def validate(self):
        positive = {
            "n_lines": self.n_lines,
            "delta": self.delta,
            "window": self.window,
            "n_samples": self.n_samples,
            "eps": self.eps,
            "eps3_lines": self.eps3_lines,
            "limit_window": self.limit_window,
            "triples": self.triples,
        }
        for name, value in positive.items():
            if value <= 0:
                raise KpzlabError(f"config field {name} must be positive, got {value}")
        if self.workers < 1:
            raise KpzlabError("workers must be >= 1")
        if not 0 < self.level < 1:
            raise KpzlabError("level must be in (0, 1)")
        if any(e <= 0 for e in self.eps_list) or any(a <= 0 for a in self.alphas):
            raise KpzlabError("eps_list and alphas entries must be positive")
        if not 0.01 <= self.band[0] < self.band[1] <= 0.99:
            raise KpzlabError("band must satisfy 0.01 <= lo < hi <= 0.99")

    #: fields that steer execution, not the experiment; kept out of the CSV
    #: echo so results are byte-identical across worker counts and out dirs
    _EXECUTION_FIELDS = ("out_dir", "workers", "figures")

    def to_dict(self, experiment_only: bool = False) -> dict:
        d = asdict(self)
        if experiment_only:
            for key in self._EXECUTION_FIELDS:
                d.pop(key, None)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d


def _jsonable(v):
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, np.ndarray):
        return v.tolist()
    raise TypeError(f"not JSON-serializable: {type(v)}")


def _parse_floats(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


def _parse_ints(text):
    return tuple(int(x) for x in text.split(",") if x.strip())


def _add_common(p):
    p.add_argument("--seed", type=int, help="master seed (default: KPZLAB_SEED or %d)" % DEFAULT_SEED)
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--workers", type=int)
    p.add_argument("--n-samples", dest="n_samples", type=int)
    p.add_argument("--n-lines", dest="n_lines", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--window", type=float)
    p.add_argument("--level", type=float)
    p.add_argument("--config", help="JSON config file; explicit flags win")
    p.add_argument("--figures", action="store_const", const=True,
                   help="render figures next to the CSV (needs the kpzplot package)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="kpzlab",
        description="Monte-Carlo experiments on discretized Brownian last passage percolation",
    )
    ap.add_argument("--version", action="version", version=f"kpzlab {__version__}")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("selftest", help="exact grid identities and estimator gates")
    _add_common(p)
    p.add_argument("--triples", type=int, help="random grid triples for composition checks")

    p = sub.add_parser("variation", help="alpha-variation sweep of the geodesic or weight")
    _add_common(p)
    p.add_argument("--alphas", type=_parse_floats)
    p.add_argument("--eps-list", dest="eps_list", type=_parse_floats)
    p.add_argument("--quantity", choices=("pi", "weight"))

    p = sub.add_parser("tails", help="empirical tails with stretch-exponent fits")
    _add_common(p)
    p.add_argument("--quantity", choices=("transversal", "increments", "boundary"))
    p.add_argument("--eps3-lines", dest="eps3_lines", type=int,
                   help="increment window eps^3 in line spacings")
    p.add_argument("--band", type=_parse_floats)
    p.add_argument("--limit-window", dest="limit_window", type=float,
                   help="truncation half-width for the boundary quantity")

    p = sub.add_parser("environment", help="Brownian-Bessel environment comparison")
    _add_common(p)
    p.add_argument("--r", type=float, help="window start time (line-aligned)")
    p.add_argument("--eps", type=float)
    p.add_argument("--probes", type=_parse_floats)

    p = sub.add_parser("limit-env", help="limiting boundary maximization: nu, mu")
    _add_common(p)
    p.add_argument("--limit-window", dest="limit_window", type=float, help="truncation half-width M")
    p.add_argument("--margin", type=float)
    p.add_argument("--stability", action="store_const", const=True,
                   help="also check truncation stability across windows")

    p = sub.add_parser("independence", help="correlation of increments at separated times")
    _add_common(p)
    p.add_argument("--times", type=_parse_floats)
    p.add_argument("--eps3-lines", dest="eps3_lines", type=int)

    p = sub.add_parser("holder", help="Hoelder ratio statistics across resolutions")
    _add_common(p)
    p.add_argument("--resolutions", type=_parse_ints)

    p = sub.add_parser("invariance", help="flip and 1-2-3 rescaling symmetry checks")
    _add_common(p)
    p.add_argument("--c", type=float, help="spatial offset of the flip pair")
    return ap


_DEFAULTS = {
    "selftest": dict(n_lines=32, delta=1.0 / 24, n_samples=100),
    "variation": dict(n_lines=512, delta=1.0 / 256, n_samples=2000),
    "tails": dict(n_lines=512, delta=1.0 / 128, n_samples=10_000, quantity="transversal"),
    "environment": dict(n_lines=512, delta=1.0 / 256, n_samples=10_000, eps=0.625),
    "limit-env": dict(n_lines=128, delta=1.0 / 64, n_samples=10_000),
    "independence": dict(n_lines=512, delta=1.0 / 256, n_samples=10_000, eps3_lines=16),
    "holder": dict(n_lines=512, delta=1.0 / 128, n_samples=400, resolutions=(8, 32, 128)),
    "invariance": dict(n_lines=256, delta=1.0 / 64, n_samples=4000),
}


def resolve_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    merged = dict(_DEFAULTS.get(args.subcommand, {}))
    if getattr(args, "config", None):
        with open(args.config) as fh:
            merged.update(json.load(fh))
    for key, value in vars(args).items():
        if key in ("subcommand", "config") or value is None:
            continue
        merged[key] = value
    if "seed" not in merged:
        merged["seed"] = int(os.environ.get("KPZLAB_SEED", DEFAULT_SEED))
    for key, value in merged.items():
        if not hasattr(cfg, key):
            raise KpzlabError(f"unknown config key: {key}")
        if isinstance(getattr(cfg, key), tuple) and not isinstance(value, tuple):
            value = tuple(value)
        setattr(cfg, key, value)
    if args.subcommand == "variation" and not cfg.eps_list:
        cfg.eps_list = tuple(k / cfg.n_lines for k in (8, 16, 32, 64))
    if args.subcommand == "variation" and not cfg.alphas:
        cfg.alphas = (1.0, 1.5, 2.0) if cfg.quantity == "pi" else (2.0, 3.0, 4.0)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# subcommand handlers: return (criteria, csv_rows_by_file, extra_stats)
# ---------------------------------------------------------------------------


def _slope_criteria(slopes, critical, below, above):
    crit = {}
    if critical in slopes:
        crit["slope_critical_flat"] = {
            "alpha": critical,
            "slope": slopes[critical],
            "pass": abs(slopes[critical]) <= 0.25,
        }
    if above in slopes:
        crit["slope_above_positive"] = {
            "alpha": above,
            "slope": slopes[above],
            "pass": slopes[above] >= 0.3,
        }
    if below in slopes:
        crit["slope_below_negative"] = {
            "alpha": below,
            "slope": slopes[below],
            "pass": slopes[below] <= -0.3,
        }
    return crit


def cmd_variation(cfg, rng):
    critical = 1.5 if cfg.quantity == "pi" else 3.0
    res = variation_experiment(
        rng,
        cfg.n_lines,
        cfg.delta,
        cfg.alphas,
        cfg.eps_list,
        critical,
        n_samples=cfg.n_samples,
        quantity=cfg.quantity,
        window=cfg.window,
        workers=cfg.workers,
    )
    if cfg.quantity == "pi":
        criteria = _slope_criteria(res["slopes"], 1.5, 1.0, 2.0)
    else:
        # for the weight the sub-critical exponent has the negative slope
        criteria = {}
        sl = res["slopes"]
        if 3.0 in sl:
            criteria["slope_critical_flat"] = {"alpha": 3.0, "slope": sl[3.0], "pass": abs(sl[3.0]) <= 0.25}
        if 2.0 in sl:
            criteria["slope_below_negative"] = {"alpha": 2.0, "slope": sl[2.0], "pass": sl[2.0] <= -0.3}
        if 4.0 in sl:
            criteria["slope_above_positive"] = {"alpha": 4.0, "slope": sl[4.0], "pass": sl[4.0] >= 0.3}
    criteria["interval_linearity"] = {
        **{k: v for k, v in res["linearity"].items() if k != "pass"},
        "pass": res["linearity"]["pass"],
    }
    files = {
        "variation": (
            ("alpha", "eps", "mean_V", "se_V", "n"),
            [tuple(r) for r in res["rows"]],
        )
    }
    return criteria, files, {"slopes": {str(k): v for k, v in res["slopes"].items()}}


def _tail_rows(name, samples, band):
    fit = fit_tail_exponent(samples, band=band)
    m, s = empirical_survival(samples)
    rows = [(name, float(mi), float(si), "", "", "", "") for mi, si in zip(m, s)]
    rows.append((name, "", "", fit.beta_hat, fit.r_squared, band[0], band[1]))
    return fit, rows


def cmd_tails(cfg, rng):
    cols = ("quantity", "m", "survival", "beta_hat", "r_squared", "band_lo", "band_hi")
    rows, criteria, extra = [], {}, {}
    if cfg.quantity == "transversal":
        samples = transversal_samples(
            rng, cfg.n_lines, cfg.delta, cfg.n_samples, window=cfg.window, workers=cfg.workers
        )
        fit, r = _tail_rows("transversal", samples, cfg.band)
        rows += r
        criteria["transversal_exponent"] = {
            "beta_hat": fit.beta_hat,
            "range": [2.2, 3.8],
            "pass": 2.2 <= fit.beta_hat <= 3.8,
        }
    elif cfg.quantity == "increments":
        i_s, w_s = increment_samples(
            rng,
            cfg.n_lines,
            cfg.delta,
            0.5,
            cfg.eps3_lines,
            cfg.n_samples,
            window=cfg.window,
            workers=cfg.workers,
        )
        fit_i, r = _tail_rows("I", np.abs(i_s), cfg.band)
        rows += r
        fit_w, r = _tail_rows("W", np.abs(w_s), cfg.band)
        rows += r
        criteria["spatial_increment_exponent"] = {
            "beta_hat": fit_i.beta_hat,
            "range": [2.2, 3.8],
            "pass": 2.2 <= fit_i.beta_hat <= 3.8,
        }
        criteria["weight_increment_exponent"] = {
            "beta_hat": fit_w.beta_hat,
            "range": [1.1, 1.9],
            "pass": 1.1 <= fit_w.beta_hat <= 1.9,
        }
        extra["increment_eps"] = (cfg.eps3_lines / cfg.n_lines) ** (1 / 3)
    else:  # boundary argmax tails
        from .limit_env import tail_samples_boundary_argmax

        abs_x, abs_d, abs_l = tail_samples_boundary_argmax(
            rng, cfg.n_lines, cfg.limit_window, cfg.delta, cfg.n_samples
        )
        for name, samples in (("absX", abs_x), ("absYX", abs_d), ("absL", abs_l)):
            try:
                fit, r = _tail_rows(name, samples, cfg.band)
                rows += r
                extra[f"beta_{name}"] = fit.beta_hat
            except KpzlabError:
                continue
        # super-polynomial decay: slope of log S against log m keeps falling
        qs = np.quantile(abs_d[abs_d > 0], [0.5, 0.75, 0.9, 0.97])
        if qs[0] > 0 and np.all(np.diff(qs) > 0):
            surv = np.array([0.5, 0.25, 0.1, 0.03])
            slopes = np.diff(np.log(surv)) / np.diff(np.log(qs))
            monotone = bool(np.all(np.diff(slopes) < 0))
        else:
            monotone = False
        criteria["super_polynomial_decay"] = {"pass": monotone}
    return criteria, {"tails": (cols, rows)}, extra


def cmd_environment(cfg, rng):
    res = environment_experiment(
        rng,
        cfg.n_lines,
        cfg.delta,
        cfg.r,
        cfg.eps,
        cfg.n_samples,
        probe_points=cfg.probes,
        window=cfg.window,
        level=cfg.level,
        workers=cfg.workers,
    )
    rows = [
        (r["z"], r["stat_bessel"], r["stat_brownian"], r["threshold"])
        for r in res["rows"]
    ]
    criteria = {}
    for r in res["rows"]:
        criteria[f"bessel_distance_z{r['z']:g}"] = {
            "stat": r["stat_bessel"],
            "threshold": r["threshold"],
            "pass": r["stat_bessel"] < r["threshold"],
        }
        criteria[f"brownian_distance_z{r['z']:g}"] = {
            "stat": r["stat_brownian"],
            "threshold": r["threshold"],
            "pass": r["stat_brownian"] < r["threshold"],
        }
    criteria["argmax_sign_property"] = {
        "fraction": res["sign_fraction"],
        "pass": res["sign_fraction"] == 1.0,
    }
    cols = ("z", "stat_bessel", "stat_brownian", "threshold")
    return criteria, {"environment": (cols, rows)}, {"n_kept": res["n_kept"]}


def cmd_limit_env(cfg, rng):
    res = limit_environment_experiment(
        rng,
        cfg.n_lines,
        cfg.limit_window,
        cfg.delta,
        cfg.n_samples,
        level=cfg.level,
        workers=cfg.workers,
    )
    cols = ("replica", "X", "Y", "length", "nu_hat", "nu_se", "mu_hat", "mu_se")
    rows = [
        (i, x, y, l, "", "", "", "")
        for i, (x, y, l) in enumerate(res["samples"])
    ]
    rows.append(
        ("", "", "", "", res["nu"].mean, res["nu"].std_error, res["mu"].mean, res["mu"].std_error)
    )
    criteria = {
        "flip_symmetry": {
            "stat": res["flip_stat"],
            "threshold": res["flip_threshold"],
            "pass": res["flip_stat"] < res["flip_threshold"],
        },
        "window_respected": {
            "max_abs_x": res["max_abs_x"],
            "pass": res["max_abs_x"] <= cfg.limit_window + 1e-9,
        },
    }
    extra = {
        "nu": {"mean": res["nu"].mean, "se": res["nu"].std_error},
        "mu": {"mean": res["mu"].mean, "se": res["mu"].std_error},
        "mean_length": res["mean_length"],
    }
    if cfg.stability:
        stab = truncation_stability(
            rng.lane(7), cfg.n_lines, cfg.delta, (4.0, cfg.limit_window), max(200, cfg.n_samples // 10)
        )
        frac = stab["changed_fraction"][-1]
        criteria["truncation_stability"] = {"changed_fraction": frac, "pass": frac < 0.05}
        extra["stability"] = stab
    return criteria, {"limit-env": (cols, rows)}, extra


def cmd_independence(cfg, rng):
    res = independence_experiment(
        rng,
        cfg.n_lines,
        cfg.delta,
        cfg.times,
        cfg.eps3_lines,
        cfg.n_samples,
        window=cfg.window,
        workers=cfg.workers,
    )
    cols = ("t1", "t2", "eps", "corr", "ci_lo", "ci_hi")
    rows = [(res["t1"], res["t2"], res["eps"], res["corr"], res["ci_lo"], res["ci_hi"])]
    criteria = {
        "correlation_small": {"corr": res["corr"], "pass": abs(res["corr"]) < 0.1},
        "ci_covers_zero": {
            "ci": [res["ci_lo"], res["ci_hi"]],
            "pass": res["ci_lo"] <= 0.0 <= res["ci_hi"],
        },
    }
    return criteria, {"independence": (cols, rows)}, {}


def cmd_holder(cfg, rng):
    res = holder_experiment(
        rng,
        cfg.n_lines,
        cfg.delta,
        cfg.resolutions,
        cfg.n_samples,
        window=cfg.window,
        workers=cfg.workers,
    )
    cols = (
        "resolution",
        "median_ratio_pi",
        "median_ratio_W",
        "median_logcorrected_pi",
        "median_logcorrected_W",
    )
    rows = [
        (r["resolution"], r["median_ratio_pi"], r["median_ratio_W"],
         r["median_logcorrected_pi"], r["median_logcorrected_W"])
        for r in res["rows"]
    ]
    plain_pi = [r["median_ratio_pi"] for r in res["rows"]]
    plain_w = [r["median_ratio_W"] for r in res["rows"]]
    log_pi = [r["median_logcorrected_pi"] for r in res["rows"]]
    log_w = [r["median_logcorrected_W"] for r in res["rows"]]

    def _spread(vals):
        return max(vals) / min(vals) - 1.0

    criteria = {
        "plain_ratio_increasing_pi": {
            "medians": plain_pi,
            "pass": bool(np.all(np.diff(plain_pi) > 0)),
        },
        "plain_ratio_increasing_W": {
            "medians": plain_w,
            "pass": bool(np.all(np.diff(plain_w) > 0)),
        },
        "logcorrected_stable_pi": {
            "medians": log_pi,
            "spread": _spread(log_pi),
            "pass": _spread(log_pi) < 0.5,
        },
        "logcorrected_stable_W": {
            "medians": log_w,
            "spread": _spread(log_w),
            "pass": _spread(log_w) < 0.5,
        },
        "per_replica_monotone": {"pass": res["per_replica_monotone"]},
    }
    files = {"holder": (cols, rows), "paths": _overlay_rows(cfg, rng)}
    return criteria, files, {}


def _overlay_rows(cfg, rng):
    """One stored replica for the overlay figure: a geodesic, its weight
    function, and an independent Brownian bridge, as (t, value, replica)."""
    base = rng.lane(9)
    field = build_field(base.replica(0), cfg.n_lines, -cfg.window, cfg.window, cfg.delta)
    geo = geodesic_between(field, 0.0, 0.0, 0.0, 1.0)
    w = weight_function(field, geo)
    bridge = sample_brownian_bridge(base.replica(1), 1.0 / cfg.n_lines, cfg.n_lines, 1.0)
    rows = []
    for sid, path in enumerate((geo.path, w, bridge)):
        t = path.times()
        rows += [(float(ti), float(vi), sid) for ti, vi in zip(t, path.values)]
    return ("t", "value", "replica"), rows


def cmd_invariance(cfg, rng):
    res = invariance_experiment(
        rng,
        cfg.n_lines,
        cfg.delta,
        cfg.n_samples,
        c=cfg.c,
        window=cfg.window,
        level=cfg.level,
        workers=cfg.workers,
    )
    cols = ("pair", "stat", "threshold")
    rows = [
        ("flip", res["flip_stat"], res["threshold"]),
        ("rescale_123", res["rescale_stat"], res["threshold"]),
    ]
    criteria = {
        "flip_symmetry": {
            "stat": res["flip_stat"],
            "threshold": res["threshold"],
            "pass": res["flip_stat"] < res["threshold"],
        },
        "rescaling_123": {
            "stat": res["rescale_stat"],
            "threshold": res["threshold"],
            "pass": res["rescale_stat"] < res["threshold"],
        },
    }
    return criteria, {"invariance": (cols, rows)}, {}


def cmd_selftest(cfg, rng):
    report = selftest(
        rng, n=cfg.n_lines, delta=cfg.delta, n_triples=cfg.triples
    )
    cols = ("check", "detail", "pass")
    rows = []
    for name, info in report.items():
        detail = json.dumps({k: v for k, v in info.items() if k != "pass"}, sort_keys=True)
        rows.append((name, detail, info["pass"]))
    return report, {"selftest": (cols, rows)}, {}


_HANDLERS = {
    "selftest": cmd_selftest,
    "variation": cmd_variation,
    "tails": cmd_tails,
    "environment": cmd_environment,
    "limit-env": cmd_limit_env,
    "independence": cmd_independence,
    "holder": cmd_holder,
    "invariance": cmd_invariance,
}

_FIGURE_KINDS = {
    "variation": ("variation", "variation-sweep"),
    "tails": ("tails", "tail-loglog"),
    "environment": ("environment", "environment-distance"),
    "holder": ("paths", "overlay"),
}


def _render_figures(subcommand, written, out_dir, seed):
    target = _FIGURE_KINDS.get(subcommand)
    if target is None:
        return []
    stem, kind = target
    csv_path = written.get(stem)
    if csv_path is None:
        return []
    png = os.path.join(out_dir, f"{subcommand}-{seed}-{kind}.png")
    cmd = [
        sys.executable,
        "-m",
        "kpzplot",
        "--input-csv",
        csv_path,
        "--kind",
        kind,
        "--output",
        png,
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise KpzlabError(
            f"figure rendering failed ({proc.returncode}): {proc.stderr.strip() or proc.stdout.strip()}"
        )
    return [png]


def run(subcommand: str, cfg: ExperimentConfig) -> int:
    """Run one experiment; writes CSV + JSON under cfg.out_dir and returns
    the exit status."""
    t0 = time.time()
    rng = Rng(cfg.seed)
    try:
        os.makedirs(cfg.out_dir, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create out dir: {exc}", file=sys.stderr)
        return 2
    criteria, files, extra = _HANDLERS[subcommand](cfg, rng)
    meta = {"subcommand": subcommand, "config": cfg.to_dict(experiment_only=True)}
    written = {}
    try:
        for stem, (cols, rows) in files.items():
            name = subcommand if stem == subcommand else stem
            path = os.path.join(cfg.out_dir, f"{name}-{cfg.seed}.csv")
            write_csv(path, cols, rows, meta)
            written[stem] = path
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 2
    outputs = list(written.values())
    if cfg.figures:
        outputs += _render_figures(subcommand, written, cfg.out_dir, cfg.seed)
    ok = all(c.get("pass", False) for c in criteria.values())
    report = {
        "artifact": f"kpzlab {__version__}",
        "subcommand": subcommand,
        "config": cfg.to_dict(),
        "criteria": criteria,
        "pass": ok,
        "stats": extra,
        "outputs": outputs,
        "wall_time_s": round(time.time() - t0, 3),
    }
    report_path = os.path.join(cfg.out_dir, f"{subcommand}-{cfg.seed}.json")
    with open(report_path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True, default=_jsonable)
        fh.write("\n")
    for name, info in criteria.items():
        status = "PASS" if info.get("pass", False) else "FAIL"
        print(f"[{status}] {subcommand}/{name}")
    print(f"report: {report_path}")
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (KpzlabError, OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(args.subcommand, cfg)
    except KpzlabError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
