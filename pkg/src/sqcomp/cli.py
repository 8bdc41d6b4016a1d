"""Experiment runner: produces the standard figure data tables and runs the
validation suite.

Subcommands: figure2, figure3, figure4 (sweep tables), probe (single query),
validate (invariant suite). Output is CSV or JSON with 12 significant
digits; identical configurations produce byte-identical files. Exit codes:
0 success, 1 validation/runtime failure, 2 configuration error.
"""

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import gaussian, oracle
from .comparator import (
    Efficiency,
    overlap,
    p_eta_same,
    p_two_hypotheses,
    p_universal,
    p_zero,
    p_zero_eta,
    reliability,
    single_detector_povm,
    verify_no_error,
)
from .errors import DegenerateDenominator, SqcompError
from .fock import SqueezeParam, Truncation, output_state, required_cutoff, squeeze_matrix

FIG3_ETAS = (0.999, 0.99, 0.90, 0.50)
DELTA_MINUS_MAX = 3.0
R_MAX = 3.0
DPLUS_SWEEP_LO, DPLUS_SWEEP_HI = 0.2, 2.4


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    n_max: int
    tail_tol: float
    grid_step: float
    delta_minus: float
    delta_plus: float
    etas: tuple
    r: float
    s: float
    out: str
    fmt: str
    workers: int

    def __post_init__(self):
        if self.grid_step <= 0.0:
            raise ConfigError(f"grid step must be > 0, got {self.grid_step}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        for e in self.etas:
            if not 0.0 < e <= 1.0:
                raise ConfigError(f"eta must be in (0, 1], got {e}")
        try:
            Truncation(self.n_max, self.tail_tol)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.delta_minus < 0.0 or self.delta_plus < 0.0:
            raise ConfigError("delta-minus and delta-plus must be >= 0")
        if self.r < 0.0 or self.s < 0.0:
            raise ConfigError("squeezing magnitudes r and s must be >= 0")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.fmt}")


_DEFAULTS = {
    "n_max": 60,
    "tail_tol": 1e-6,
    "grid_step": 0.05,
    "delta_minus": 0.2,
    "delta_plus": None,  # per-subcommand default
    "eta": None,
    "r": 0.5,
    "s": 0.3,
    "out": "",
    "format": "csv",
    "workers": 1,
}

_CONFIG_TYPES = {
    "n_max": int,
    "tail_tol": float,
    "grid_step": float,
    "delta_minus": float,
    "delta_plus": float,
    "r": float,
    "s": float,
    "out": str,
    "format": str,
    "workers": int,
}


def _parse_config_file(path):
    """Flat key = value file mirroring the flag names; '#' comments."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key = key.strip().replace("-", "_")
        val = val.strip()
        if key == "eta":
            try:
                values["eta"] = [float(v) for v in val.replace(",", " ").split()]
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: bad eta list {val!r}") from None
        elif key in _CONFIG_TYPES:
            try:
                values[key] = _CONFIG_TYPES[key](val)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {val!r}") from None
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    return values


def _resolve(args, default_delta_plus, default_etas):
    """Merge defaults < config file < explicit flags into an ExperimentConfig."""
    merged = dict(_DEFAULTS)
    merged["delta_plus"] = default_delta_plus
    if getattr(args, "config", None):
        merged.update(_parse_config_file(args.config))
    for key in ("n_max", "tail_tol", "grid_step", "delta_minus", "delta_plus",
                "r", "s", "out", "format", "workers"):
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    if getattr(args, "eta", None):
        merged["eta"] = list(args.eta)
    etas = tuple(merged["eta"]) if merged["eta"] else tuple(default_etas)
    return ExperimentConfig(
        n_max=merged["n_max"],
        tail_tol=merged["tail_tol"],
        grid_step=merged["grid_step"],
        delta_minus=merged["delta_minus"],
        delta_plus=merged["delta_plus"],
        etas=etas,
        r=merged["r"],
        s=merged["s"],
        out=merged["out"],
        fmt=merged["format"],
        workers=merged["workers"],
    )


def _grid(stop, step):
    n = int(round(stop / step))
    return [round(i * step, 12) for i in range(n + 1)]


def _fmt_value(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def _emit(rows, fieldnames, cfg):
    if cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([_fmt_value(row[k]) for k in fieldnames])
        text = buf.getvalue()
    else:
        payload = [{k: row[k] for k in fieldnames} for row in rows]
        text = json.dumps(payload, indent=2) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _map_rows(fn, tasks, workers):
    if workers <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _scaled_trunc(r, s, cfg):
    n = max(cfg.n_max, required_cutoff(r, s, cfg.tail_tol))
    return Truncation(n, cfg.tail_tol)


def _figure2_row(task):
    dm, rep_dp, n_max, tail_tol = task
    cfg_pair = lambda dp: ((dp + dm) / 2.0, (dp - dm) / 2.0)

    dp_main = max(rep_dp, dm)
    r, s = cfg_pair(dp_main)
    trunc = Truncation(max(n_max, required_cutoff(r, s, tail_tol)), tail_tol)
    p_opt = p_zero(SqueezeParam(r), SqueezeParam(s), trunc).p_diff

    lo = max(dm, DPLUS_SWEEP_LO)
    sweep = sorted({round(v, 12) for v in np.linspace(lo, max(lo, DPLUS_SWEEP_HI), 5)})
    spread = 0.0
    for dp in sweep:
        if dp < dm or dp == dp_main:
            continue
        r2, s2 = cfg_pair(dp)
        tr2 = Truncation(max(n_max, required_cutoff(r2, s2, tail_tol)), tail_tol)
        p2 = p_zero(SqueezeParam(r2), SqueezeParam(s2), tr2).p_diff
        spread = max(spread, abs(p2 - p_opt))

    om = overlap(dm)
    return {
        "delta_minus": dm,
        "p_opt": p_opt,
        "p_universal": p_universal(om),
        "p_two_hypotheses": p_two_hypotheses(om),
        "p_opt_dplus_spread": spread,
    }


def cmd_figure2(cfg):
    if any(e != 1.0 for e in cfg.etas):
        raise ConfigError("figure2 is defined for ideal detectors only (eta = 1)")
    tasks = [(dm, cfg.delta_plus, cfg.n_max, cfg.tail_tol)
             for dm in _grid(DELTA_MINUS_MAX, cfg.grid_step)]
    rows = _map_rows(_figure2_row, tasks, cfg.workers)
    _emit(rows, ["delta_minus", "p_opt", "p_universal", "p_two_hypotheses",
                 "p_opt_dplus_spread"], cfg)
    return 0


def series_cap(r, eta, n_max):
    """Series length needed for the same-input detection series at (r, eta)."""
    lam = math.tanh(r)
    if lam == 0.0:
        return n_max
    q = eta * lam / (1.0 - (1.0 - eta) * lam)
    if q <= 0.0 or q >= 1.0:
        return n_max
    need = int(math.ceil(math.log(1e-15) / (2.0 * math.log(q)))) + 64
    return max(n_max, need)


def _figure3_row(task):
    r, eta, n_max, tail_tol = task
    trunc = Truncation(series_cap(r, eta, n_max), tail_tol)
    p = p_eta_same(r, Efficiency(eta), trunc)
    return {"r": r, "eta": eta, "p_zero_same": p, "p_diff_same": 1.0 - p}


def cmd_figure3(cfg):
    tasks = [(r, eta, cfg.n_max, cfg.tail_tol)
             for eta in cfg.etas for r in _grid(R_MAX, cfg.grid_step)]
    rows = _map_rows(_figure3_row, tasks, cfg.workers)
    _emit(rows, ["r", "eta", "p_zero_same", "p_diff_same"], cfg)
    return 0


def _figure4_row(task):
    sweep, dm, dp, eta, n_max, tail_tol = task
    r, s = (dp + dm) / 2.0, (dp - dm) / 2.0
    trunc = Truncation(max(n_max, required_cutoff(r, s, tail_tol)), tail_tol)
    try:
        value = reliability(r, s, Efficiency(eta), trunc)
        status = "ok"
    except DegenerateDenominator:
        value = None
        status = "degenerate"
    return {"sweep": sweep, "delta_minus": dm, "delta_plus": dp, "eta": eta,
            "reliability": value, "status": status}


def cmd_figure4(cfg):
    tasks = []
    for eta in cfg.etas:
        for dm in _grid(min(cfg.delta_plus, DELTA_MINUS_MAX), cfg.grid_step):
            tasks.append(("delta_minus", dm, cfg.delta_plus, eta, cfg.n_max, cfg.tail_tol))
    dp_grid = [v for v in _grid(2.0, cfg.grid_step) if v >= max(cfg.delta_minus, 0.2)]
    for eta in cfg.etas:
        for dp in dp_grid:
            tasks.append(("delta_plus", cfg.delta_minus, dp, eta, cfg.n_max, cfg.tail_tol))
    rows = _map_rows(_figure4_row, tasks, cfg.workers)
    _emit(rows, ["sweep", "delta_minus", "delta_plus", "eta", "reliability", "status"], cfg)
    return 0


def cmd_probe(cfg):
    if len(cfg.etas) != 1:
        raise ConfigError("probe expects exactly one --eta")
    eta = Efficiency(cfg.etas[0])
    r, s = cfg.r, cfg.s
    trunc = _scaled_trunc(r, s, cfg)
    xi, zeta = SqueezeParam(r), SqueezeParam(s)

    ideal = p_zero(xi, zeta, trunc)
    lossy = p_zero_eta(xi, zeta, eta, trunc)
    cap = Truncation(series_cap(max(r, s), eta.eta, trunc.n_max), cfg.tail_tol)
    dm = abs(r - s)
    om = overlap(dm)
    try:
        rel = reliability(r, s, eta, trunc)
        rel_status = "ok"
    except DegenerateDenominator:
        rel = None
        rel_status = "degenerate"
    row = {
        "r": r,
        "s": s,
        "eta": eta.eta,
        "n_max": trunc.n_max,
        "tail_tol": cfg.tail_tol,
        "p_zero_ideal": ideal.p_zero,
        "p_diff_ideal": ideal.p_diff,
        "p_zero_eta": lossy.p_zero,
        "p_diff_eta": lossy.p_diff,
        "p_eta_same_r": p_eta_same(r, eta, cap),
        "p_eta_same_s": p_eta_same(s, eta, cap),
        "overlap": om,
        "p_universal": p_universal(om),
        "p_two_hypotheses": p_two_hypotheses(om),
        "reliability": rel,
        "reliability_status": rel_status,
        "truncation_bound": lossy.truncation_bound,
    }
    _emit([row], list(row.keys()), cfg)
    return 0


def _validation_checks(cfg):
    """The default invariant suite; each item returns (ok, detail)."""
    trunc = Truncation(cfg.n_max, cfg.tail_tol)

    def oracle_squeeze():
        worst = 0.0
        for gamma in (SqueezeParam(0.1), SqueezeParam(0.5), SqueezeParam(1.0),
                      SqueezeParam(0.5, math.pi / 3)):
            ref = oracle.expm_squeeze(gamma, 256)
            mat = squeeze_matrix(gamma, Truncation(63, 0.999)).elements
            worst = max(worst, float(np.max(np.abs(mat[:33, :33] - ref[:33, :33]))))
        return worst <= 1e-8, f"max |main - expm| = {worst:.3e} (tol 1e-8)"

    def oracle_pipeline():
        worst = 0.0
        for r, s in ((0.5, 0.0), (0.3, 0.7)):
            ref = oracle.expm_output_state(SqueezeParam(r), SqueezeParam(s), 96)
            st = output_state(SqueezeParam(r), SqueezeParam(s), Truncation(63, 1e-6))
            worst = max(worst, float(np.max(np.abs(st.amps[:33, :33] - ref[:33, :33]))))
        return worst <= 1e-8, f"max |state - pipeline| = {worst:.3e} (tol 1e-8)"

    def appendix_identity():
        worst = 0.0
        worst_det = 0.0
        for r in np.linspace(-1.0, 1.0, 21):
            for s in np.linspace(-1.0, 1.0, 21):
                a = gaussian.sigma_out(r, s)
                b = gaussian.sigma_prime(r, s)
                worst = max(worst, float(np.max(np.abs(a - b))))
                worst_det = max(worst_det, abs(np.linalg.det(a) - 1.0 / 16.0))
        ok = worst <= 1e-12 and worst_det <= 1e-10
        return ok, f"max |sigma' - sigma_out| = {worst:.3e}, |det - 1/16| = {worst_det:.3e}"

    def closed_form():
        worst = 0.0
        for r in (0.1, 0.3, 0.5, 1.0):
            for eta in (0.5, 0.9, 0.99):
                t = Truncation(max(cfg.n_max, 96), 1e-10)
                a = p_zero_eta(SqueezeParam(r), SqueezeParam(r), Efficiency(eta), t).p_zero
                b = p_eta_same(r, Efficiency(eta), Truncation(series_cap(r, eta, t.n_max), 1e-10))
                worst = max(worst, abs(a - b))
        return worst <= 1e-8, f"max |contracted - series| = {worst:.3e} (tol 1e-8)"

    def literal_sum():
        worst = 0.0
        for (r, s, eta) in ((0.3, 0.3, 0.9), (0.3, 0.1, 0.9), (0.5, 0.5, 0.5)):
            lit = oracle.direct_smeared_zero_prob(SqueezeParam(r), SqueezeParam(s),
                                                  eta, 12)
            reg = p_zero_eta(SqueezeParam(r), SqueezeParam(s), Efficiency(eta),
                             Truncation(96, 1e-10)).p_zero
            worst = max(worst, abs(lit - reg))
        return worst <= 1e-4, f"max |literal - contracted| = {worst:.3e} (tol 1e-4)"

    def completeness():
        worst = 0.0
        for eta in (0.1, 0.5, 0.9):
            b = np.column_stack(
                [single_detector_povm(n, Efficiency(eta), trunc) for n in range(trunc.dim)]
            )
            worst = max(worst, float(np.max(np.abs(b.sum(axis=1) - 1.0))))
        return worst <= 1e-12, f"max |sum_n weight - 1| = {worst:.3e}"

    def no_error():
        rep = verify_no_error([0.0, 0.25, 0.5, 0.75, 1.0], Efficiency(1.0), trunc)
        return rep.passed, (
            f"max p(D|r,r) = {rep.max_p_diff:.3e} at r = {rep.worst_r}"
            f" (threshold {rep.threshold:.1e})"
        )

    def moments():
        worst = 0.0
        for r, s in ((0.0, 0.0), (0.3, 0.3), (0.5, 0.1), (0.8, 0.4)):
            rep = gaussian.crosscheck_fock(r, s, trunc)
            worst = max(worst, rep.max_dev)
            if not rep.passed:
                return False, f"moment deviation {rep.max_dev:.3e} at (r, s) = ({r}, {s})"
        return True, f"max quadrature-moment deviation = {worst:.3e}"

    return [
        ("squeeze matrix vs expm oracle", oracle_squeeze),
        ("output state vs expm pipeline", oracle_pipeline),
        ("covariance identity + purity", appendix_identity),
        ("lossy closed-form equivalence", closed_form),
        ("literal quintuple sum", literal_sum),
        ("loss-weight completeness", completeness),
        ("no-error condition (eta = 1)", no_error),
        ("quadrature moment cross-check", moments),
    ]


def cmd_validate(cfg):
    checks = _validation_checks(cfg)
    failures = 0
    for name, check in checks:
        try:
            ok, detail = check()
        except SqcompError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        status = "PASS" if ok else "FAIL"
        failures += 0 if ok else 1
        print(f"{status} {name}: {detail}")
    print(f"{len(checks) - failures} passed, {failures} failed")
    return 0 if failures == 0 else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sqcomp",
        description="Unambiguous comparison of squeezed vacua: figure data and validation",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-max", dest="n_max", type=int, default=None,
                        help="Fock cutoff (figures scale it up as needed)")
    common.add_argument("--tail-tol", dest="tail_tol", type=float, default=None,
                        help="admissible truncated probability mass")
    common.add_argument("--eta", action="append", type=float, default=None,
                        help="detector efficiency; repeat for several curves")
    common.add_argument("--delta-minus", dest="delta_minus", type=float, default=None,
                        help="squeezing difference |r - s| (fixed value where applicable)")
    common.add_argument("--delta-plus", dest="delta_plus", type=float, default=None,
                        help="squeezing sum r + s (fixed/representative value)")
    common.add_argument("--grid-step", dest="grid_step", type=float, default=None,
                        help="sweep step")
    common.add_argument("--out", type=str, default=None, help="output file (default stdout)")
    common.add_argument("--format", dest="format", choices=("csv", "json"), default=None)
    common.add_argument("--workers", type=int, default=None,
                        help="parallel worker processes for grid evaluation")
    common.add_argument("--config", type=str, default=None,
                        help="flat key = value config file (flags take precedence)")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("figure2", parents=[common],
                   help="difference-detection probability vs delta_minus (eta = 1)")
    sub.add_parser("figure3", parents=[common],
                   help="same-input zero-difference probability vs r for several eta")
    sub.add_parser("figure4", parents=[common],
                   help="reliability vs delta_minus and vs delta_plus")
    probe = sub.add_parser("probe", parents=[common],
                           help="all quantities for a single (r, s, eta)")
    probe.add_argument("--r", type=float, default=None, help="first squeezing magnitude")
    probe.add_argument("--s", type=float, default=None, help="second squeezing magnitude")
    sub.add_parser("validate", parents=[common], help="run the invariant suite")
    return parser


_DISPATCH = {
    "figure2": (cmd_figure2, 1.2, (1.0,)),
    "figure3": (cmd_figure3, 1.2, FIG3_ETAS),
    "figure4": (cmd_figure4, 1.0, FIG3_ETAS),
    "probe": (cmd_probe, 1.0, (0.9,)),
    "validate": (cmd_validate, 1.0, (1.0,)),
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    fn, default_dp, default_etas = _DISPATCH[args.command]
    try:
        cfg = _resolve(args, default_dp, default_etas)
        return fn(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SqcompError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
