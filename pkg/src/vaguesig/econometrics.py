"""Variable construction and panel estimation.

Implements the estimation pipeline used throughout: winsorization at
empirical quantiles, indicator construction by median splits, iterative
removal of singleton fixed-effect groups, the within transformation via
alternating projections for one or more fixed-effect dimensions, OLS on the
transformed system, and two-way clustered standard errors assembled from
the component sandwiches. Specs are declarative (outcome, regressors,
interactions, fixed effects, clusters, filter) so one table column equals
one spec.

Quantiles are nearest-rank (type 1) everywhere, so results are exactly
reproducible across implementations. Median splits are strict: ties never
set the indicator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import pandas as pd
import scipy.linalg

__all__ = [
    "RegressionSpec",
    "RegressionResult",
    "DemeanConvergenceError",
    "RankDeficiencyError",
    "winsorize",
    "type1_quantile",
    "median_split",
    "construct_variables",
    "drop_singletons",
    "demean_fe",
    "ols",
    "cluster_se",
    "run_spec",
    "quintile_table",
    "results_to_markdown",
    "results_to_records",
    "specs_from_obj",
]

DEMEAN_TOL = 1e-10
DEMEAN_MAX_ITER = 10_000


class DemeanConvergenceError(RuntimeError):
    """Alternating projections failed to converge; carries the delta trace."""

    def __init__(self, message: str, trace: Sequence[float]):
        super().__init__(message)
        self.trace = tuple(trace)


class RankDeficiencyError(ValueError):
    """Design matrix is rank deficient; names the dependent column set."""

    def __init__(self, columns: Sequence[str]):
        super().__init__(
            "design matrix is rank deficient; dependent columns: "
            + ", ".join(columns)
        )
        self.columns = tuple(columns)


def type1_quantile(values, p: float) -> float:
    """Nearest-rank empirical quantile: the ceil(n*p)-th order statistic."""
    arr = np.sort(np.asarray(values, dtype=float))
    n = arr.size
    if n == 0:
        raise ValueError("quantile of empty input")
    if not 0.0 <= p <= 1.0:
        raise ValueError("quantile level must lie in [0, 1]")
    k = min(max(math.ceil(n * p), 1), n)
    return float(arr[k - 1])


def winsorize(values, lower_p: float = 0.01, upper_p: float = 0.99) -> np.ndarray:
    """Clip values at the nearest-rank quantiles; order-preserving and
    idempotent."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("cannot winsorize an empty input")
    if not 0.0 <= lower_p < upper_p <= 1.0:
        raise ValueError("need 0 <= lower_p < upper_p <= 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError("winsorize requires finite values")
    lo = type1_quantile(arr, lower_p)
    hi = type1_quantile(arr, upper_p)
    return np.clip(arr, lo, hi)


def median_split(values, groups=None) -> np.ndarray:
    """Indicator for strictly exceeding the (group) nearest-rank median.

    ``groups`` of None splits against the global median; otherwise one
    median per group. Ties map to zero.
    """
    vals = pd.Series(np.asarray(values, dtype=float)).reset_index(drop=True)
    if groups is None:
        med = type1_quantile(vals.to_numpy(), 0.5)
        return (vals.to_numpy() > med).astype(np.int64)
    key = pd.Series(np.asarray(groups)).reset_index(drop=True)
    med = vals.groupby(key).transform(lambda g: type1_quantile(g.to_numpy(), 0.5))
    return (vals.to_numpy() > med.to_numpy()).astype(np.int64)


# ---------------------------------------------------------------------------
# Variable construction

_REQUIRED_PANEL_COLUMNS = (
    "analyst_id",
    "firm_id",
    "period",
    "forecast",
    "realized",
    "price_50",
    "tone",
)


def construct_variables(
    panel: pd.DataFrame,
    lower_p: float = 0.01,
    upper_p: float = 0.99,
) -> tuple[pd.DataFrame, dict]:
    """Build the observation table for estimation from a forecast panel.

    Derives price-scaled, winsorized forecast errors and revisions, the
    boldness indicator against the prior-period consensus pool, winsorized
    horizon, tone changes and within-pair demeaned tone, and the composite
    fixed-effect keys. Rows missing a forecast, realization, or a positive
    price are excluded; reasons and counts come back in the report dict.
    """
    missing = [c for c in _REQUIRED_PANEL_COLUMNS if c not in panel.columns]
    if missing:
        raise ValueError("panel is missing columns: " + ", ".join(missing))
    df = panel.copy()
    report: dict = {"excluded": {}, "notes": {}}

    def exclude(mask: pd.Series, reason: str) -> None:
        count = int(mask.sum())
        if count:
            report["excluded"][reason] = count
        nonlocal df
        df = df.loc[~mask]

    exclude(~np.isfinite(df["forecast"]), "missing_forecast")
    exclude(~np.isfinite(df["realized"]), "missing_actual")
    exclude(~(np.isfinite(df["price_50"]) & (df["price_50"] > 0)), "missing_price")
    exclude(~np.isfinite(df["tone"]), "missing_tone")
    if df.empty:
        raise ValueError("no usable rows after exclusions")

    df = df.sort_values(["analyst_id", "firm_id", "period"]).reset_index(drop=True)
    pair = df.groupby(["analyst_id", "firm_id"], sort=False)

    df["ferror"] = winsorize(
        (df["forecast"] - df["realized"]) / df["price_50"], lower_p, upper_p
    )

    price_next = pair["price_50"].shift(-1)
    if "next_forecast" in df.columns:
        frev_raw = (df["next_forecast"] - df["forecast"]) / price_next
    else:
        frev_raw = (pair["forecast"].shift(-1) - df["forecast"]) / price_next
    df["frev_next"] = _winsorize_available(frev_raw, lower_p, upper_p)

    prior_forecast = (
        df["prior_forecast"]
        if "prior_forecast" in df.columns
        else pair["forecast"].shift(1)
    )
    df["frev_current"] = _winsorize_available(
        (df["forecast"] - prior_forecast) / df["price_50"], lower_p, upper_p
    )

    bold, undefined = _boldness(df)
    df["bold"] = bold
    if undefined:
        report["notes"]["bold_undefined"] = undefined

    if "horizon_days" in df.columns:
        df["horizon"] = winsorize(
            df["horizon_days"].astype(float), lower_p, upper_p
        )

    df["dtone"] = df["tone"] - pair["tone"].shift(1)
    df["tone_demeaned"] = df["tone"] - pair["tone"].transform("mean")

    df["year"] = df["period"].astype(np.int64)
    df["analyst_year"] = (
        df["analyst_id"].astype(str) + ":" + df["year"].astype(str)
    )
    df["analyst_firm"] = (
        df["analyst_id"].astype(str) + ":" + df["firm_id"].astype(str)
    )
    report["rows"] = int(len(df))
    return df.reset_index(drop=True), report


def _winsorize_available(series: pd.Series, lower_p: float, upper_p: float):
    """Winsorize over the finite entries, leaving gaps as NaN."""
    arr = series.to_numpy(dtype=float, copy=True)
    ok = np.isfinite(arr)
    if ok.any():
        arr[ok] = winsorize(arr[ok], lower_p, upper_p)
    arr[~ok] = np.nan
    return arr


def _boldness(df: pd.DataFrame) -> tuple[np.ndarray, int]:
    """Boldness against the prior-period consensus pool of the same firm.

    The pool is every forecast for the firm in the immediately preceding
    period (the prior window excludes the forecast date itself). Pools with
    fewer than two forecasts leave the standard deviation undefined, so the
    indicator falls back to zero and the row is counted as flagged.
    """
    stats = (
        df.groupby(["firm_id", "period"])["forecast"]
        .agg(["mean", "std", "count"])
        .reset_index()
    )
    stats["period"] = stats["period"] + 1
    merged = df[["firm_id", "period", "forecast"]].merge(
        stats, on=["firm_id", "period"], how="left"
    )
    defined = (merged["count"].fillna(0) >= 2) & np.isfinite(
        merged["std"].to_numpy(dtype=float)
    )
    deviation = np.abs(merged["forecast"] - merged["mean"])
    bold = np.where(
        defined & (deviation > 2.0 * merged["std"]), 1, 0
    ).astype(np.int64)
    undefined = int((~defined).sum())
    return bold, undefined


# ---------------------------------------------------------------------------
# Estimation primitives

def drop_singletons(
    df: pd.DataFrame, fe_keys: Sequence[str]
) -> tuple[pd.DataFrame, int, int]:
    """Iteratively remove rows in singleton fixed-effect groups.

    Dropping a row can create new singletons under another key, so the
    removal repeats until a fixed point. Returns the reduced frame, the
    number of rows dropped, and the iteration count.
    """
    out = df
    dropped = 0
    iterations = 0
    while True:
        iterations += 1
        keep = pd.Series(True, index=out.index)
        for key in fe_keys:
            sizes = out.groupby(key)[key].transform("size")
            keep &= sizes > 1
        if keep.all():
            break
        dropped += int((~keep).sum())
        out = out.loc[keep]
        if out.empty:
            break
    return out, dropped, iterations


def _group_demean(z: np.ndarray, codes: np.ndarray, n_groups: int) -> np.ndarray:
    counts = np.bincount(codes, minlength=n_groups).astype(float)
    sums = np.zeros((n_groups, z.shape[1]))
    np.add.at(sums, codes, z)
    return z - sums[codes] / counts[codes, None]


def demean_fe(
    x: np.ndarray,
    y: np.ndarray,
    fe_codes: Sequence[np.ndarray],
    tol: float = DEMEAN_TOL,
    max_iter: int = DEMEAN_MAX_ITER,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Within transformation by alternating projections.

    Subtracts group means for each fixed-effect dimension in turn until the
    largest change falls below ``tol`` relative to the initial column scale.
    A single dimension needs exactly one pass. Non-convergence raises with
    the delta trace attached.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    z = np.column_stack([np.asarray(x, dtype=float), np.asarray(y, dtype=float)])
    codes = [np.asarray(c, dtype=np.int64) for c in fe_codes]
    n_groups = [int(c.max()) + 1 if c.size else 0 for c in codes]
    scale = np.maximum(np.abs(z).max(axis=0), 1.0)
    if len(codes) == 0:
        return z[:, :-1], z[:, -1], 0
    if len(codes) == 1:
        z = _group_demean(z, codes[0], n_groups[0])
        return z[:, :-1], z[:, -1], 1
    trace: list[float] = []
    for iteration in range(1, max_iter + 1):
        previous = z.copy()
        for c, g in zip(codes, n_groups):
            z = _group_demean(z, c, g)
        delta = float(np.max(np.abs(z - previous) / scale))
        trace.append(delta)
        if delta < tol:
            return z[:, :-1], z[:, -1], iteration
    raise DemeanConvergenceError(
        f"within transformation did not converge in {max_iter} iterations "
        f"(last delta {trace[-1]:.3e})",
        trace[-20:],
    )


def ols(
    x: np.ndarray, y: np.ndarray, names: Sequence[str] | None = None
) -> tuple[np.ndarray, np.ndarray, int]:
    """Least squares via pivoted QR; raises naming dependent columns when the
    design is rank deficient. Returns (coefficients, residuals, dof)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n, k = x.shape
    if n <= k:
        raise ValueError(f"need more rows ({n}) than columns ({k})")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("design matrix and outcome must be finite")
    q, r, piv = scipy.linalg.qr(x, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    ref = diag[0] if diag.size and diag[0] > 0 else 1.0
    rank = int(np.sum(diag > 1e-10 * ref))
    if rank < k:
        labels = (
            [names[i] for i in piv[rank:]]
            if names is not None
            else [f"column {i}" for i in piv[rank:]]
        )
        raise RankDeficiencyError(labels)
    beta_piv = scipy.linalg.solve_triangular(r, q.T @ y)
    beta = np.empty(k)
    beta[piv] = beta_piv
    residuals = y - x @ beta
    return beta, residuals, n - k


def _cluster_meat(xu: np.ndarray, codes: np.ndarray, n_groups: int) -> np.ndarray:
    sums = np.zeros((n_groups, xu.shape[1]))
    np.add.at(sums, codes, xu)
    return sums.T @ sums


def cluster_se(
    x: np.ndarray,
    residuals: np.ndarray,
    cluster_a,
    cluster_b,
    extra_df: int = 0,
    group_adjust: bool = True,
) -> tuple[np.ndarray, dict]:
    """Two-way clustered covariance of OLS coefficients.

    Sums the two one-way cluster sandwiches and subtracts the sandwich on
    the intersection clusters. Each component gets the finite-sample factor
    G/(G-1) * (N-1)/(N-K) where K counts the regressors plus ``extra_df``
    absorbed parameters. A non-positive-semidefinite result is repaired by
    truncating negative eigenvalues at zero, and the repair is flagged in
    the returned diagnostics rather than silent.
    """
    x = np.asarray(x, dtype=float)
    residuals = np.asarray(residuals, dtype=float)
    n, k = x.shape
    codes_a, groups_a = pd.factorize(np.asarray(cluster_a))
    codes_b, groups_b = pd.factorize(np.asarray(cluster_b))
    if len(groups_a) < 2 or len(groups_b) < 2:
        raise ValueError(
            "each cluster dimension needs at least two clusters "
            f"(got {len(groups_a)} and {len(groups_b)})"
        )
    pair_key = codes_a.astype(np.int64) * len(groups_b) + codes_b
    codes_ab, groups_ab = pd.factorize(pair_key)

    xu = x * residuals[:, None]
    k_total = k + extra_df
    if group_adjust and n - k_total <= 0:
        raise ValueError(
            f"too few observations ({n}) for the finite-sample adjustment "
            f"with {k_total} model parameters"
        )

    def adj(g: int) -> float:
        if not group_adjust:
            return 1.0
        return (g / (g - 1.0)) * ((n - 1.0) / (n - k_total))

    meat = (
        adj(len(groups_a)) * _cluster_meat(xu, codes_a, len(groups_a))
        + adj(len(groups_b)) * _cluster_meat(xu, codes_b, len(groups_b))
        - adj(len(groups_ab)) * _cluster_meat(xu, codes_ab, len(groups_ab))
    )
    bread = np.linalg.inv(x.T @ x)
    cov = bread @ meat @ bread
    cov = (cov + cov.T) / 2.0
    diagnostics = {
        "n_clusters_a": int(len(groups_a)),
        "n_clusters_b": int(len(groups_b)),
        "n_clusters_intersection": int(len(groups_ab)),
        "psd_repaired": False,
    }
    eigenvalues = np.linalg.eigvalsh(cov)
    if eigenvalues[0] < -1e-12 * max(1.0, float(eigenvalues[-1])):
        vals, vecs = np.linalg.eigh(cov)
        cov = vecs @ np.diag(np.maximum(vals, 0.0)) @ vecs.T
        cov = (cov + cov.T) / 2.0
        diagnostics["psd_repaired"] = True
    return cov, diagnostics


# ---------------------------------------------------------------------------
# Declarative specs

@dataclass(frozen=True)
class RegressionSpec:
    """One regression column: outcome, design, fixed effects, clustering."""

    name: str
    outcome: str
    regressors: tuple[str, ...]
    interactions: tuple[tuple[str, str], ...] = ()
    fixed_effects: tuple[str, ...] = ("year",)
    clusters: tuple[str, str] = ("analyst_id", "year")
    filter: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "regressors", tuple(self.regressors))
        object.__setattr__(
            self, "interactions", tuple(tuple(p) for p in self.interactions)
        )
        object.__setattr__(self, "fixed_effects", tuple(self.fixed_effects))
        object.__setattr__(self, "clusters", tuple(self.clusters))
        if len(self.clusters) != 2:
            raise ValueError("clusters must name exactly two key columns")
        for a, b in self.interactions:
            for component in (a, b):
                if component not in self.regressors:
                    raise ValueError(
                        f"interaction component {component!r} must also appear "
                        "among the main regressors"
                    )


@dataclass(frozen=True)
class RegressionResult:
    """Estimates for one spec plus the diagnostics of how they were made."""

    spec: RegressionSpec
    terms: tuple[str, ...]
    coefficients: tuple[float, ...]
    std_errors: tuple[float, ...]
    t_stats: tuple[float, ...]
    n_obs: int
    n_input_rows: int
    dropped_missing: int
    dropped_singletons: int
    dropped_columns: tuple[str, ...]
    demean_iterations: int
    adj_r2_within: float
    adj_r2_full: float
    absorbed_share: float
    n_clusters: tuple[int, int]
    psd_repaired: bool

    def coefficient(self, term: str) -> float:
        return self.coefficients[self.terms.index(term)]

    def std_error(self, term: str) -> float:
        return self.std_errors[self.terms.index(term)]

    def t_stat(self, term: str) -> float:
        return self.t_stats[self.terms.index(term)]


def interaction_name(a: str, b: str) -> str:
    return f"{a}_x_{b}"


def run_spec(spec: RegressionSpec, data: pd.DataFrame) -> RegressionResult:
    """Estimate one spec: filter, build interactions, drop singletons, apply
    the within transformation, run OLS, and cluster the standard errors.

    Columns that lose all variation under the within transformation (or are
    otherwise collinear) are dropped with a diagnostic instead of failing,
    so indicator-plus-interaction designs degrade cleanly to their base
    spec when an indicator never varies.
    """
    needed = (
        {spec.outcome}
        | set(spec.regressors)
        | set(spec.fixed_effects)
        | set(spec.clusters)
    )
    missing = sorted(c for c in needed if c not in data.columns)
    if missing:
        raise ValueError(f"spec {spec.name!r}: unknown column(s) " + ", ".join(missing))

    df = data
    if spec.filter:
        df = df.query(spec.filter)
    n_input = len(df)
    if n_input == 0:
        raise ValueError(f"spec {spec.name!r}: empty sample after filter")

    df = df.copy()
    terms = list(spec.regressors)
    for a, b in spec.interactions:
        name = interaction_name(a, b)
        df[name] = df[a].astype(float) * df[b].astype(float)
        terms.append(name)

    numeric = [spec.outcome] + terms
    finite = np.ones(len(df), dtype=bool)
    for col in numeric:
        finite &= np.isfinite(df[col].astype(float).to_numpy())
    for col in set(spec.fixed_effects) | set(spec.clusters):
        finite &= df[col].notna().to_numpy()
    dropped_missing = int((~finite).sum())
    df = df.loc[finite]
    if df.empty:
        raise ValueError(f"spec {spec.name!r}: no finite rows to estimate on")

    df, dropped_singletons, _ = drop_singletons(df, spec.fixed_effects)
    if df.empty:
        raise ValueError(f"spec {spec.name!r}: all rows sit in singleton groups")

    y = df[spec.outcome].astype(float).to_numpy()
    x = df[terms].astype(float).to_numpy()

    if spec.fixed_effects:
        fe_codes = [pd.factorize(df[key].to_numpy())[0] for key in spec.fixed_effects]
        absorbed = sum(int(c.max()) + 1 for c in fe_codes) - (len(fe_codes) - 1)
        xd, yd, iterations = demean_fe(x, y, fe_codes)
    else:
        x = np.column_stack([np.ones(len(df)), x])
        terms = ["intercept"] + terms
        xd, yd, iterations, absorbed = x, y, 0, 0

    kept_idx, dropped_columns = _screen_columns(xd, terms)
    xk = xd[:, kept_idx]
    kept_terms = [terms[i] for i in kept_idx]
    if xk.shape[1] == 0:
        raise ValueError(
            f"spec {spec.name!r}: no regressor survives the within transformation"
        )

    beta, residuals, _ = ols(xk, yd, kept_terms)
    cov, cluster_diag = cluster_se(
        xk,
        residuals,
        df[spec.clusters[0]].to_numpy(),
        df[spec.clusters[1]].to_numpy(),
        extra_df=absorbed,
    )
    se = np.sqrt(np.diag(cov))
    with np.errstate(divide="ignore", invalid="ignore"):
        tstat = np.where(se > 0, beta / se, np.nan)

    n = len(df)
    ssr = float(residuals @ residuals)
    y_total = df[spec.outcome].astype(float).to_numpy()
    sst_total = float(np.sum((y_total - y_total.mean()) ** 2))
    sst_within = float(np.sum((yd - yd.mean()) ** 2))
    k_model = xk.shape[1] + absorbed
    dof = max(n - k_model, 1)
    adj_within = (
        1.0 - (ssr / dof) / (sst_within / (n - 1)) if sst_within > 0 else float("nan")
    )
    adj_full = (
        1.0 - (ssr / dof) / (sst_total / (n - 1)) if sst_total > 0 else float("nan")
    )
    absorbed_share = 1.0 - sst_within / sst_total if sst_total > 0 else float("nan")

    return RegressionResult(
        spec=spec,
        terms=tuple(kept_terms),
        coefficients=tuple(float(b) for b in beta),
        std_errors=tuple(float(s) for s in se),
        t_stats=tuple(float(t) for t in tstat),
        n_obs=n,
        n_input_rows=n_input,
        dropped_missing=dropped_missing,
        dropped_singletons=dropped_singletons,
        dropped_columns=tuple(dropped_columns),
        demean_iterations=iterations,
        adj_r2_within=float(adj_within),
        adj_r2_full=float(adj_full),
        absorbed_share=float(absorbed_share),
        n_clusters=(cluster_diag["n_clusters_a"], cluster_diag["n_clusters_b"]),
        psd_repaired=cluster_diag["psd_repaired"],
    )


def _screen_columns(
    x: np.ndarray, names: Sequence[str]
) -> tuple[list[int], list[str]]:
    """Identify columns to keep: drop no-variation columns first, then any
    remaining linearly dependent ones found by pivoted QR."""
    norms = np.linalg.norm(x, axis=0)
    threshold = 1e-9 * math.sqrt(max(x.shape[0], 1))
    kept = [i for i in range(x.shape[1]) if norms[i] > threshold]
    dropped = [names[i] for i in range(x.shape[1]) if norms[i] <= threshold]
    if kept:
        sub = x[:, kept]
        _, r, piv = scipy.linalg.qr(sub, mode="economic", pivoting=True)
        diag = np.abs(np.diag(r))
        ref = diag[0] if diag.size and diag[0] > 0 else 1.0
        rank = int(np.sum(diag > 1e-10 * ref))
        if rank < len(kept):
            dependent = sorted(piv[rank:])
            dropped.extend(names[kept[i]] for i in dependent)
            kept = [kept[i] for i in range(len(kept)) if i not in set(dependent)]
    return kept, dropped


# ---------------------------------------------------------------------------
# Quintile table

def quintile_table(
    data: pd.DataFrame,
    by: str = "tone",
    value: str = "ferror",
    horizons: Sequence[int] = (0, 1, 2, 3, 4),
    group: Sequence[str] = ("analyst_id", "firm_id"),
    period: str = "period",
) -> pd.DataFrame:
    """Mean outcome per quintile of the ranking column, at the current report
    and at subsequent reports of the same pair.

    Quintiles are assigned by stable rank of the ranking column (ties keep
    input order), quintile 1 lowest. Returns a long-form table with columns
    quintile, horizon, mean_value, std_value, n.
    """
    for col in (by, value, period, *group):
        if col not in data.columns:
            raise ValueError(f"quintile table: unknown column {col!r}")
    base = data.loc[np.isfinite(data[by].astype(float))].reset_index(drop=True)
    values = base[by].to_numpy(dtype=float)
    if np.unique(values).size < 5:
        raise ValueError("quintile table needs at least 5 distinct ranking values")
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.int64)
    ranks[order] = np.arange(len(values))
    base["quintile"] = (ranks * 5) // len(values) + 1

    keys = list(group)
    records = []
    for h in sorted(horizons):
        future = base[keys + [period, value]].copy()
        future[period] = future[period] - h
        future = future.rename(columns={value: "future_value"})
        merged = base[keys + [period, "quintile"]].merge(
            future, on=keys + [period], how="left"
        )
        grouped = merged.groupby("quintile")["future_value"]
        means = grouped.mean()
        stds = grouped.std()
        counts = grouped.count()
        for q in range(1, 6):
            records.append(
                {
                    "quintile": q,
                    "horizon": h,
                    "mean_value": float(means.get(q, np.nan)),
                    "std_value": float(stds.get(q, np.nan)),
                    "n": int(counts.get(q, 0)),
                }
            )
    return pd.DataFrame.from_records(records)


# ---------------------------------------------------------------------------
# Output formatting and spec files

def _stars(t: float) -> str:
    at = abs(t)
    if at > 2.576:
        return "***"
    if at > 1.960:
        return "**"
    if at > 1.645:
        return "*"
    return ""


def results_to_markdown(results: Sequence[RegressionResult]) -> str:
    """Coefficient table with t-statistics in parentheses and significance
    stars at the 10/5/1% levels, one column per spec."""
    term_order: list[str] = []
    for res in results:
        for term in res.terms:
            if term not in term_order:
                term_order.append(term)
    header = [""] + [f"({i + 1}) {r.spec.outcome}" for i, r in enumerate(results)]
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "---|" * len(header),
    ]
    for term in term_order:
        coef_cells = []
        t_cells = []
        for res in results:
            if term in res.terms:
                i = res.terms.index(term)
                coef_cells.append(
                    f"{res.coefficients[i]:.4f}{_stars(res.t_stats[i])}"
                )
                t_cells.append(f"({res.t_stats[i]:.2f})")
            else:
                coef_cells.append("")
                t_cells.append("")
        lines.append("| " + " | ".join([term] + coef_cells) + " |")
        lines.append("| " + " | ".join([""] + t_cells) + " |")
    meta_rows = [
        ("Spec", [r.spec.name for r in results]),
        ("Fixed effects", [", ".join(r.spec.fixed_effects) or "none" for r in results]),
        ("Clusters", [", ".join(r.spec.clusters) for r in results]),
        ("Adj. R2 (within)", [f"{r.adj_r2_within:.3f}" for r in results]),
        ("Adj. R2 (full)", [f"{r.adj_r2_full:.3f}" for r in results]),
        ("Observations", [str(r.n_obs) for r in results]),
        ("Singletons dropped", [str(r.dropped_singletons) for r in results]),
    ]
    for label, cells in meta_rows:
        lines.append("| " + " | ".join([label] + cells) + " |")
    return "\n".join(lines) + "\n"


def results_to_records(results: Sequence[RegressionResult]) -> list[dict]:
    """Flatten results for CSV output, one row per term."""
    records = []
    for res in results:
        for i, term in enumerate(res.terms):
            records.append(
                {
                    "spec": res.spec.name,
                    "outcome": res.spec.outcome,
                    "term": term,
                    "coefficient": res.coefficients[i],
                    "std_error": res.std_errors[i],
                    "t_stat": res.t_stats[i],
                    "n_obs": res.n_obs,
                    "adj_r2_within": res.adj_r2_within,
                    "adj_r2_full": res.adj_r2_full,
                    "absorbed_share": res.absorbed_share,
                    "dropped_singletons": res.dropped_singletons,
                    "dropped_columns": ";".join(res.dropped_columns),
                    "psd_repaired": res.psd_repaired,
                }
            )
    return records


def specs_from_obj(obj) -> list[RegressionSpec]:
    """Build specs from parsed JSON: a list of spec objects or a mapping with
    a 'specs' list. Unknown keys are rejected by name."""
    if isinstance(obj, Mapping):
        obj = obj.get("specs")
    if not isinstance(obj, list):
        raise ValueError("spec file must hold a list of specs or {'specs': [...]}")
    allowed = {
        "name",
        "outcome",
        "regressors",
        "interactions",
        "fixed_effects",
        "clusters",
        "filter",
    }
    specs = []
    for i, raw in enumerate(obj):
        if not isinstance(raw, Mapping):
            raise ValueError(f"spec {i}: expected an object")
        unknown = sorted(set(raw) - allowed)
        if unknown:
            raise ValueError(f"spec {i}: unknown keys " + ", ".join(unknown))
        for required in ("name", "outcome", "regressors"):
            if required not in raw:
                raise ValueError(f"spec {i}: missing {required!r}")
        specs.append(
            RegressionSpec(
                name=str(raw["name"]),
                outcome=str(raw["outcome"]),
                regressors=tuple(raw["regressors"]),
                interactions=tuple(tuple(p) for p in raw.get("interactions", ())),
                fixed_effects=tuple(raw.get("fixed_effects", ("year",))),
                clusters=tuple(raw.get("clusters", ("analyst_id", "year"))),
                filter=raw.get("filter"),
            )
        )
    return specs
