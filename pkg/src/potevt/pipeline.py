"""
End-to-end runs behind the command line: analyze, diagnose, simulate and
backtest.

Every run computes everything in memory first and writes files only once the
computation has succeeded, so a failing run leaves no partial output. Reports
are JSON with a ``schema`` field; the only non-reproducible key is
``generated_at``. Non-finite numbers never reach the JSON: they are written as
``null`` alongside a ``<key>_reason`` string.
"""

from __future__ import annotations

import datetime as _dt
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from scipy import stats

from . import diagnostics as diag
from . import dist, rng
from .dist import GpdParams, LogNormalParams
from .errors import ConfigError, ConvergenceError, InputError, OutOfTailError, PotError
from .fit import fit_lognormal, fit_normal
from .ingest import LossSeries, load_series, format_values
from .pot import (PotFit, empirical_es, empirical_var, es_pot, fit_pot,
                  risk_decomposition)

SCHEMA = "potevt.report/1"
DEFAULT_ALPHAS = (0.95, 0.99, 0.995)
TIMESTAMP_KEY = "generated_at"


@dataclass
class RunConfig:
    input: Optional[Path] = None
    format: str = "single"
    sign: str = "as-is"
    threshold: Optional[float] = None
    threshold_quantile: Optional[float] = None
    alphas: Sequence[float] = DEFAULT_ALPHAS
    band: Optional[float] = None
    grid: Optional[tuple] = None
    seed: int = 0
    out: Path = Path("potevt-out")
    split: float = 0.5
    render: bool = False

    def check(self, needs_grid: bool = False) -> None:
        if (self.threshold is None) == (self.threshold_quantile is None):
            raise ConfigError("give exactly one of --threshold or --threshold-quantile")
        if self.threshold is not None and not math.isfinite(self.threshold):
            raise ConfigError("threshold must be finite")
        if self.threshold_quantile is not None and not 0 < self.threshold_quantile < 1:
            raise ConfigError("threshold quantile must lie in (0, 1)")
        if not self.alphas:
            raise ConfigError("at least one alpha is required")
        for a in self.alphas:
            if not 0 < a < 1:
                raise ConfigError(f"alpha {a} is not in (0, 1)")
        if self.band is not None and not (self.band >= 0 and math.isfinite(self.band)):
            raise ConfigError("band delta must be finite and non-negative")
        if needs_grid and self.grid is None:
            raise ConfigError("diagnostics need --grid MIN:MAX:COUNT")
        if self.grid is not None:
            lo, hi, count = self.grid
            if count < 2:
                raise ConfigError("grid count must be at least 2")
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ConfigError("grid needs finite MIN < MAX")


def parse_grid(text: str) -> tuple:
    try:
        lo, hi, count = text.split(":")
        return float(lo), float(hi), int(count)
    except ValueError:
        raise ConfigError(f"grid must look like MIN:MAX:COUNT, got {text!r}") from None


# ----------------------------------------------------------------------------
# JSON / CSV helpers
# ----------------------------------------------------------------------------

def _put(block: dict, key: str, value, reason: str = "undefined") -> None:
    """Store a finite number, or null plus ``<key>_reason``."""
    if value is None or (isinstance(value, float) and not math.isfinite(value)):
        block[key] = None
        block[key + "_reason"] = reason
    else:
        block[key] = value


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    return "" if math.isnan(v) else repr(v)


def csv_text(header: Sequence[str], rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _column(col) -> list:
    a = np.asarray(col)
    if a.dtype == bool:
        return ["1" if v else "0" for v in a.tolist()]
    if np.issubdtype(a.dtype, np.integer):
        return [str(v) for v in a.tolist()]
    return ["" if v != v else repr(v) for v in a.astype(float).tolist()]


def csv_columns(header: Sequence[str], columns) -> str:
    """Fast CSV rendering for long numeric columns."""
    cols = [_column(c) for c in columns]
    return ",".join(header) + "\n" + "".join(",".join(r) + "\n" for r in zip(*cols))


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def _write_outputs(out: Path, files: dict, render: bool = False) -> None:
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name in sorted(files):
            (out / name).write_text(files[name], encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write to {out}: {exc}") from exc
    if render:
        _render_svgs(out, [n for n in sorted(files) if n.endswith(".csv")])


def _render_svgs(out: Path, names) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    for name in names:
        data = np.genfromtxt(out / name, delimiter=",", names=True)
        if data.size < 2 or len(data.dtype.names) < 2:
            continue
        cols = data.dtype.names
        fig, ax = plt.subplots(figsize=(6, 4))
        for col in cols[1:]:
            ax.plot(data[cols[0]], data[col], label=col, lw=1)
        ax.set_xlabel(cols[0])
        ax.legend(fontsize="small")
        fig.savefig(out / (name[:-4] + ".svg"), format="svg", metadata={"Date": None})
        plt.close(fig)


def _stamp() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


# ----------------------------------------------------------------------------
# Pieces
# ----------------------------------------------------------------------------

def resolve_threshold(series: LossSeries, cfg: RunConfig) -> float:
    """Absolute threshold, or the empirical quantile of the series."""
    if cfg.threshold is not None:
        return float(cfg.threshold)
    return empirical_var(series, cfg.threshold_quantile).var


def _fit_or_fail(series, u: float) -> PotFit:
    f = fit_pot(series, u)
    if not f.converged:
        raise ConvergenceError(f"GPD fit at u={u!r} hit the iteration cap after {f.iterations} iterations")
    return f


def default_grid(series: LossSeries, count: int = 50) -> np.ndarray:
    q = np.quantile(series.values, np.linspace(0.5, 0.99, count))
    return np.unique(q)


def _grid_of(series: LossSeries, cfg: RunConfig) -> np.ndarray:
    if cfg.grid is None:
        return default_grid(series)
    lo, hi, count = cfg.grid
    return np.linspace(lo, hi, count)


def summary_block(series: LossSeries, cfg: RunConfig) -> dict:
    x = series.values
    return {
        "path": None if cfg.input is None else str(cfg.input),
        "label": series.label,
        "format": cfg.format,
        "sign": cfg.sign,
        "n": series.n,
        "min": float(x.min()),
        "max": float(x.max()),
        "mean": math.fsum(x) / series.n,
    }


def fit_block(f: PotFit) -> dict:
    return {
        "xi": f.params.xi,
        "beta": f.params.beta,
        "u": f.u,
        "N": f.N,
        "m": f.m,
        "tail_fraction": f.tail_fraction,
        "loglik": f.loglik,
        "converged": f.converged,
        "iterations": f.iterations,
    }


def risk_rows(series: LossSeries, f: PotFit, alphas) -> list:
    rows = []
    for a in alphas:
        row = {"alpha": a}
        try:
            r = es_pot(a, f)
            _put(row, "var_pot", r.var)
            _put(row, "es_pot", r.es, "infinite-mean (xi >= 1)")
            _put(row, "wc_alpha_es", r.wc_alpha_es, "infinite-mean (xi >= 1)")
        except PotError as exc:
            reason = "out-of-tail" if isinstance(exc, OutOfTailError) else str(exc)
            for key in ("var_pot", "es_pot", "wc_alpha_es"):
                _put(row, key, None, reason)
        emp = empirical_es(series, a)
        row["var_empirical"] = emp.var
        row["es_empirical"] = emp.es
        row["es_empirical_degenerate"] = emp.degenerate_tail
        row["wc_tail_mass"] = 1.0 - a
        rows.append(row)
    return rows


def baseline_block(series: LossSeries, alphas) -> dict:
    """Normal and LogNormal moment fits with their region split per alpha."""
    out = {}
    for name, fitter in (("normal", fit_normal), ("lognormal", fit_lognormal)):
        try:
            res = fitter(series.values)
        except PotError as exc:
            out[name] = None
            out[name + "_reason"] = str(exc)
            continue
        theta = res.theta
        params = ({"mu": theta.mu, "sigma2": theta.sigma2} if name == "normal"
                  else {"mu_log": theta.mu_log, "sigma2_log": theta.sigma2_log})
        block = dict(params, mean=theta.mean, mode=theta.mode)
        _put(block, "loglik", res.loglik, "underflow")
        decs = []
        for a in alphas:
            d = {"alpha": a}
            try:
                r = risk_decomposition(theta, a)
                d.update(x_alpha=r.x_alpha, p_el=r.p_el, p_ul=r.p_ul, p_wc=r.p_wc)
            except PotError as exc:
                d.update(x_alpha=None, p_el=None, p_ul=None, p_wc=None, reason=str(exc))
            decs.append(d)
        block["decomposition"] = decs
        out[name] = block
    return out


def plot_files(series: LossSeries, f: PotFit, grid) -> dict:
    """CSV plot data: histogram, density overlays, exceedance scatter, threshold, mean excess."""
    x = series.values
    files = {}

    edges = np.histogram_bin_edges(x, bins="auto")
    if edges.size > 201:
        edges = np.histogram_bin_edges(x, bins=200)
    counts, edges = np.histogram(x, bins=edges)
    widths = np.diff(edges)
    dens = counts / (x.size * np.where(widths > 0, widths, 1.0))
    files["histogram.csv"] = csv_text(
        ["bin_left", "bin_right", "count", "density"],
        zip(edges[:-1], edges[1:], counts, dens))

    normal = fit_normal(x).theta if x.size >= 2 and x.min() < x.max() else None
    try:
        lognormal = fit_lognormal(x).theta
    except PotError:
        lognormal = None
    pts = np.linspace(x.min(), x.max(), 400)
    if normal is not None:
        pts = np.union1d(pts, [normal.mu])
    if lognormal is not None:
        pts = np.union1d(pts, [lognormal.mode])
    pts = np.union1d(pts, [f.u])
    n_pdf = dist.normal_pdf(pts, normal) if normal is not None else np.full(pts.size, np.nan)
    if lognormal is not None:
        ln_pdf = np.full(pts.size, np.nan)
        pos = pts > 0
        ln_pdf[pos] = dist.lognormal_pdf(pts[pos], lognormal)
    else:
        ln_pdf = np.full(pts.size, np.nan)
    tail = np.full(pts.size, np.nan)
    above = pts >= f.u
    tail[above] = f.tail_fraction * dist.gpd_pdf(pts[above] - f.u, f.params)
    files["density.csv"] = csv_text(["x", "normal_pdf", "lognormal_pdf", "tail_pdf"],
                                    zip(pts, n_pdf, ln_pdf, tail))

    files["exceedances.csv"] = csv_columns(
        ["index", "value", "exceeds"], [np.arange(x.size), x, x > f.u])
    files["threshold.csv"] = csv_text(["u"], [(f.u,)])

    me = diag.mean_excess_curve(series, grid)
    files["mean_excess.csv"] = csv_text(["u", "m", "mean_excess"], me.rows())
    return files


# ----------------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------------

def _load(cfg: RunConfig) -> LossSeries:
    if cfg.input is None:
        raise ConfigError("--input is required")
    return load_series(cfg.input, format=cfg.format, sign=cfg.sign)


def analyze(cfg: RunConfig, write: bool = True) -> dict:
    """Load, fit at the resolved threshold, estimate VaR/ES per alpha, write report and plot data."""
    cfg.check()
    series = _load(cfg)
    u = resolve_threshold(series, cfg)
    f = _fit_or_fail(series, u)
    report = {
        "schema": SCHEMA,
        "command": "analyze",
        TIMESTAMP_KEY: _stamp(),
        "input": summary_block(series, cfg),
        "threshold": {"u": u, "absolute": cfg.threshold, "quantile": cfg.threshold_quantile},
        "fit": fit_block(f),
        "risk": risk_rows(series, f, cfg.alphas),
        "baseline": baseline_block(series, cfg.alphas),
    }
    files = plot_files(series, f, _grid_of(series, cfg))
    report["files"] = sorted(files) + ["report.json"]
    files["report.json"] = dump_report(report)
    if write:
        _write_outputs(Path(cfg.out), files, cfg.render)
    return report


def diagnose(cfg: RunConfig, write: bool = True) -> dict:
    """Mean excess, refit stability, VaR/ES over the grid and, with a band, borderline sensitivity."""
    cfg.check(needs_grid=True)
    series = _load(cfg)
    u = resolve_threshold(series, cfg)
    grid = _grid_of(series, cfg)
    files = {}

    me = diag.mean_excess_curve(series, grid)
    xi_c, mod_c = diag.threshold_stability(series, grid)
    header = ["u", "m", "mean_excess", "xi", "modified_scale"]
    cols = [me.stat, xi_c.stat, mod_c.stat]
    for a in cfg.alphas:
        v, e = diag.risk_curves(series, grid, a)
        header += [f"var_{a!r}", f"es_{a!r}"]
        cols += [v.stat, e.stat]
    files["stability.csv"] = csv_text(header, zip(grid, me.m_per_u, *cols))

    report = {
        "schema": SCHEMA,
        "command": "diagnose",
        TIMESTAMP_KEY: _stamp(),
        "input": summary_block(series, cfg),
        "threshold": {"u": u, "absolute": cfg.threshold, "quantile": cfg.threshold_quantile},
        "grid": {"count": int(grid.size), "min": float(grid[0]), "max": float(grid[-1]),
                 "fitted": int(xi_c.present.sum())},
        "mean_excess_slope": None,
    }
    try:
        report["mean_excess_slope"] = diag.slope(me)
    except PotError as exc:
        report["mean_excess_slope_reason"] = str(exc)

    if cfg.band is not None:
        blocks = []
        sens = [diag.borderline_sensitivity(series, u, cfg.band, a) for a in cfg.alphas]
        for a, b in zip(cfg.alphas, sens):
            block = {"alpha": a, "delta": b.delta, "thresholds": list(b.thresholds),
                     "m": list(b.m), "var": list(b.var), "var_excess": list(b.var_excess),
                     "var_spread": b.var_spread, "same_exceedances": b.same_exceedances,
                     "band_count": int(b.band_values.size)}
            if b.es_defined:
                block.update(es=list(b.es), es_spread=b.es_spread)
            else:
                block.update(es=None, es_spread=None, es_reason="infinite-mean (xi >= 1)")
            blocks.append(block)
        report["borderline"] = blocks
        b = sens[0]
        w = b.band_weights if b.band_weights is not None else np.full(b.band_values.size, np.nan)
        files["borderline_weights.csv"] = csv_text(["value", "weight"], zip(b.band_values, w))

    report["files"] = sorted(files) + ["diagnostics.json"]
    files["diagnostics.json"] = dump_report(report)
    if write:
        _write_outputs(Path(cfg.out), files, cfg.render)
    return report


def simulate(seed: int, n: int, model: Union[GpdParams, LogNormalParams],
             u_offset: float = 0.0) -> LossSeries:
    """Seeded variates ``u_offset + Q(U)`` by inverse transform of a SplitMix64 stream."""
    if n < 1:
        raise ConfigError("n must be at least 1")
    u = rng.uniforms(seed, n)
    if isinstance(model, GpdParams):
        x = dist.gpd_quantile(u, model)
    elif isinstance(model, LogNormalParams):
        x = dist.lognormal_quantile(u, model)
    else:
        raise ConfigError(f"cannot simulate from {type(model).__name__}")
    return LossSeries(u_offset + np.asarray(x, dtype=float), label=f"sim-{seed}")


def write_simulation(series: LossSeries, out: Path, name: str = "series.csv") -> Path:
    _write_outputs(Path(out), {name: format_values(series.values)})
    return Path(out) / name


@dataclass(frozen=True)
class BacktestRow:
    alpha: float
    var: Optional[float]
    observed: Optional[int]
    expected: float
    lower: int
    upper: int
    reason: Optional[str] = None

    @property
    def inside(self) -> Optional[bool]:
        if self.observed is None:
            return None
        return self.lower <= self.observed <= self.upper


def binomial_interval(n: int, p: float, level: float = 0.99) -> tuple:
    """Two-sided central binomial interval for the number of exceedances."""
    tail = 0.5 * (1.0 - level)
    return int(stats.binom.ppf(tail, n, p)), int(stats.binom.ppf(1.0 - tail, n, p))


def backtest(series, split: float, alphas, threshold: Optional[float] = None,
             threshold_quantile: Optional[float] = None, level: float = 0.99):
    """Fit on the leading ``split`` fraction and count holdout exceedances of each POT VaR.

    Returns
    -------
    (PotFit, list of BacktestRow)
    """
    x = series.values if isinstance(series, LossSeries) else np.asarray(series, dtype=float)
    if not 0 < split < 1:
        raise ConfigError(f"split must lie strictly in (0, 1), got {split!r}")
    k = int(math.floor(split * x.size))
    train, hold = x[:k], x[k:]
    if train.size == 0 or hold.size == 0:
        raise ConfigError("both the training part and the holdout must be nonempty")
    if (threshold is None) == (threshold_quantile is None):
        raise ConfigError("give exactly one of threshold or threshold_quantile")
    u = threshold if threshold is not None else empirical_var(train, threshold_quantile).var
    f = _fit_or_fail(train, u)
    rows = []
    for a in alphas:
        expected = (1.0 - a) * hold.size
        lo, hi = binomial_interval(hold.size, 1.0 - a, level)
        try:
            v = es_pot(a, f).var
        except PotError as exc:
            rows.append(BacktestRow(a, None, None, expected, lo, hi, str(exc)))
            continue
        rows.append(BacktestRow(a, v, int(np.count_nonzero(hold > v)), expected, lo, hi))
    return f, rows


def run_backtest(cfg: RunConfig, write: bool = True) -> dict:
    cfg.check()
    series = _load(cfg)
    f, rows = backtest(series, cfg.split, cfg.alphas, cfg.threshold, cfg.threshold_quantile)
    table = []
    for r in rows:
        row = {"alpha": r.alpha, "expected": r.expected, "lower_99": r.lower, "upper_99": r.upper}
        _put(row, "var_pot", r.var, r.reason or "undefined")
        _put(row, "observed", r.observed, r.reason or "undefined")
        row["inside"] = r.inside
        table.append(row)
    report = {
        "schema": SCHEMA,
        "command": "backtest",
        TIMESTAMP_KEY: _stamp(),
        "input": summary_block(series, cfg),
        "split": cfg.split,
        "n_train": f.N,
        "n_holdout": series.n - f.N,
        "fit": fit_block(f),
        "calibration": table,
    }
    files = {
        "backtest.csv": csv_text(
            ["alpha", "var_pot", "observed", "expected", "lower_99", "upper_99", "inside"],
            [(r.alpha, r.var, r.observed, r.expected, r.lower, r.upper, r.inside) for r in rows]),
    }
    report["files"] = sorted(files) + ["backtest.json"]
    files["backtest.json"] = dump_report(report)
    if write:
        _write_outputs(Path(cfg.out), files, cfg.render)
    return report
