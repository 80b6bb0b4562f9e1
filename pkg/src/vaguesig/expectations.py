"""Seeded Monte Carlo generator of synthetic analyst forecast panels.

Each analyst-firm pair carries two signal components per period: a precise
component that enters the numerical forecast, and a vague component that is
expressed only through a noisy bounded tone proxy. The realized outcome is
the sum of both components plus unpredictable noise, the forecast is the
precise component plus a covariate-predictable bias plus forecast noise,
and the next-period forecast mixes the current vague component with the
standing forecast using a fixed weight. By construction the panel satisfies
the decomposition identities exactly, the tone proxy is negatively related
to forecast errors and positively related to subsequent revisions, and
regime flags that scale the vague-signal dispersion strengthen both
relations in their flagged subsamples.

Rows for distinct pairs come from independent counter-based substreams
(Philox keyed by a spawn tuple), so generation is reproducible and could be
parallelized without changing the output.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import pandas as pd

__all__ = [
    "RegimeFlag",
    "SimulationConfig",
    "COVARIATE_NAMES",
    "PANEL_COLUMNS",
    "AUDIT_COLUMNS",
    "gen_signals",
    "realize_state",
    "make_forecast",
    "forecast_error",
    "update_forecast",
    "emit_tone",
    "gen_panel",
]

COVARIATE_NAMES = ("prior_return", "experience_gap", "size_momentum")


@dataclass(frozen=True)
class RegimeFlag:
    """A binary regime channel that scales the vague-signal dispersion.

    Rows draw the flag independently with probability ``share``; flagged
    rows have their vague-signal standard deviation multiplied by
    ``sigma_scale``.
    """

    name: str
    share: float = 0.5
    sigma_scale: float = 2.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.share <= 1.0:
            raise ValueError(f"flag {self.name!r}: share must lie in [0, 1]")
        if self.sigma_scale <= 0.0:
            raise ValueError(f"flag {self.name!r}: sigma_scale must be positive")


@dataclass(frozen=True)
class SimulationConfig:
    """Parameters of the synthetic panel generator.

    ``update_weight`` is the weight placed on the current vague component
    when the next-period forecast is formed; it must lie strictly inside
    (0, 1) except in test harnesses that opt into the boundary.
    """

    n_firms: int = 50
    n_analysts: int = 40
    n_periods: int = 50
    sigma_precise: float = 1.0
    sigma_vague: float = 0.5
    sigma_outcome_noise: float = 0.5
    sigma_forecast_noise: float = 0.3
    update_weight: float = 0.6
    bias_coeffs: tuple[float, ...] = (0.10, 0.05, 0.20)
    tone_noise: float = 0.10
    tone_scale: float = 1.0
    vague_share: float = 1.0
    regime_flags: tuple[RegimeFlag, ...] = (
        RegimeFlag("vagueness"),
        RegimeFlag("uncertainty"),
        RegimeFlag("busyness"),
    )
    seed: int = 42
    allow_boundary_weight: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "bias_coeffs", tuple(float(b) for b in self.bias_coeffs))
        object.__setattr__(self, "regime_flags", tuple(self.regime_flags))
        for name in ("n_firms", "n_analysts", "n_periods"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        for name in (
            "sigma_precise",
            "sigma_vague",
            "sigma_outcome_noise",
            "sigma_forecast_noise",
            "tone_noise",
        ):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")
        if self.tone_scale <= 0.0:
            raise ValueError("tone_scale must be positive")
        upper_ok = self.update_weight < 1.0 or (
            self.allow_boundary_weight and self.update_weight <= 1.0
        )
        if not (0.0 < self.update_weight and upper_ok):
            raise ValueError("update_weight must lie strictly in (0, 1)")
        if not 0.0 <= self.vague_share <= 1.0:
            raise ValueError("vague_share must lie in [0, 1]")
        if len(self.bias_coeffs) != len(COVARIATE_NAMES):
            raise ValueError(
                f"bias_coeffs must have {len(COVARIATE_NAMES)} entries, one per "
                f"covariate {COVARIATE_NAMES}"
            )
        names = [f.name for f in self.regime_flags]
        if len(set(names)) != len(names):
            raise ValueError("regime flag names must be unique")

    @property
    def n_rows(self) -> int:
        return self.n_firms * self.n_analysts * self.n_periods

    def replace(self, **changes) -> "SimulationConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "n_firms": self.n_firms,
            "n_analysts": self.n_analysts,
            "n_periods": self.n_periods,
            "sigma_precise": self.sigma_precise,
            "sigma_vague": self.sigma_vague,
            "sigma_outcome_noise": self.sigma_outcome_noise,
            "sigma_forecast_noise": self.sigma_forecast_noise,
            "update_weight": self.update_weight,
            "bias_coeffs": list(self.bias_coeffs),
            "tone_noise": self.tone_noise,
            "tone_scale": self.tone_scale,
            "vague_share": self.vague_share,
            "regime_flags": [
                {"name": f.name, "share": f.share, "sigma_scale": f.sigma_scale}
                for f in self.regime_flags
            ],
            "seed": self.seed,
        }

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "SimulationConfig":
        """Build a config from a plain mapping, rejecting unknown keys."""
        known = {
            "n_firms",
            "n_analysts",
            "n_periods",
            "sigma_precise",
            "sigma_vague",
            "sigma_outcome_noise",
            "sigma_forecast_noise",
            "update_weight",
            "bias_coeffs",
            "tone_noise",
            "tone_scale",
            "vague_share",
            "regime_flags",
            "seed",
        }
        unknown = sorted(set(mapping) - known)
        if unknown:
            raise ValueError(
                "unknown config keys: "
                + ", ".join(unknown)
                + "; valid keys: "
                + ", ".join(sorted(known))
            )
        kwargs = dict(mapping)
        if "bias_coeffs" in kwargs:
            kwargs["bias_coeffs"] = tuple(kwargs["bias_coeffs"])
        if "regime_flags" in kwargs:
            kwargs["regime_flags"] = tuple(
                RegimeFlag(**f) if isinstance(f, Mapping) else f
                for f in kwargs["regime_flags"]
            )
        return cls(**kwargs)


# Substream spawn-key prefixes; pair streams carry all per-row draws, firm
# streams carry the price path.
_FIRM_STREAM = 2
_PAIR_STREAM = 3


def _pair_rng(cfg: SimulationConfig, analyst: int, firm: int) -> np.random.Generator:
    seq = np.random.SeedSequence(cfg.seed, spawn_key=(_PAIR_STREAM, analyst, firm))
    return np.random.Generator(np.random.Philox(seq))


def _firm_rng(cfg: SimulationConfig, firm: int) -> np.random.Generator:
    seq = np.random.SeedSequence(cfg.seed, spawn_key=(_FIRM_STREAM, firm))
    return np.random.Generator(np.random.Philox(seq))


def _pair_draws(cfg: SimulationConfig, analyst: int, firm: int) -> dict:
    """All random draws for one analyst-firm pair, in a fixed order."""
    rng = _pair_rng(cfg, analyst, firm)
    t = cfg.n_periods
    n_flags = len(cfg.regime_flags)
    draws = {
        "assign_u": rng.random(),
        "flag_u": rng.random((t, n_flags)),
        "vague_z": rng.standard_normal(t),
        "outcome_noise": rng.standard_normal(t) * cfg.sigma_outcome_noise,
        "forecast_noise": rng.standard_normal(t) * cfg.sigma_forecast_noise,
        "covariates": rng.standard_normal((t, len(COVARIATE_NAMES))),
        "tone_z": rng.standard_normal(t),
        "precise_signals": rng.standard_normal(t) * cfg.sigma_precise,
        "horizon_days": rng.integers(8, 361, t),
    }
    draws["vague_assigned"] = bool(draws["assign_u"] < cfg.vague_share)
    flags = np.zeros((t, n_flags), dtype=np.int64)
    scale = np.ones(t)
    for k, flag in enumerate(cfg.regime_flags):
        hit = draws["flag_u"][:, k] < flag.share
        flags[:, k] = hit
        scale = np.where(hit, scale * flag.sigma_scale, scale)
    draws["flags"] = flags
    vague_sd = cfg.sigma_vague * scale * (1.0 if draws["vague_assigned"] else 0.0)
    draws["vague_sd"] = vague_sd
    draws["vague"] = draws["vague_z"] * vague_sd
    return draws


def gen_signals(
    cfg: SimulationConfig, analyst: int, firm: int, period: int = 0
) -> tuple[float, float]:
    """Fresh (precise, vague) signal draws for one pair and period.

    The vague component is zero for pairs not assigned vague signals; the
    assignment itself is a pair-level draw with probability ``vague_share``.
    """
    if not 0 <= period < cfg.n_periods:
        raise ValueError(f"period {period} outside [0, {cfg.n_periods})")
    draws = _pair_draws(cfg, analyst, firm)
    return float(draws["precise_signals"][period]), float(draws["vague"][period])


def realize_state(precise_exp: float, vague_exp: float, noise: float) -> float:
    """Realized outcome: precise plus vague component plus unpredictable noise."""
    return precise_exp + vague_exp + noise


def make_forecast(
    precise_exp: float,
    covariates: Sequence[float],
    cfg: SimulationConfig,
    noise: float | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """Numerical forecast: precise component plus predictable bias plus noise.

    The vague component is deliberately absent; only the precise part can be
    expressed numerically.
    """
    covariates = np.asarray(covariates, dtype=float)
    if covariates.shape != (len(cfg.bias_coeffs),):
        raise ValueError(
            f"expected {len(cfg.bias_coeffs)} covariates, got shape "
            f"{covariates.shape}"
        )
    if noise is None:
        noise = (
            float(rng.normal(0.0, cfg.sigma_forecast_noise)) if rng is not None else 0.0
        )
    return float(precise_exp + covariates @ np.asarray(cfg.bias_coeffs) + noise)


def forecast_error(forecast: float, realized: float) -> float:
    """Forecast minus realized outcome; with all noise off this equals the
    negated vague component."""
    return forecast - realized


def update_forecast(
    current_vague_exp: float,
    current_forecast: float,
    weight: float,
    allow_boundary: bool = False,
) -> float:
    """Next-period forecast: weighted mix of the current vague component and
    the standing forecast."""
    upper_ok = weight < 1.0 or (allow_boundary and weight <= 1.0)
    if not (0.0 < weight and upper_ok):
        raise ValueError("weight must lie strictly in (0, 1)")
    return weight * current_vague_exp + (1.0 - weight) * current_forecast


def emit_tone(
    vague_exp,
    tone_noise: float = 0.0,
    rng: np.random.Generator | int | None = None,
    scale: float = 1.0,
):
    """Noisy bounded tone proxy of the vague component.

    A tanh squashes the component into (-1, 1); measurement noise is added
    and the result re-clamped. Strictly increasing in the component at zero
    noise. Accepts scalars or arrays.
    """
    if tone_noise < 0.0:
        raise ValueError("tone_noise must be non-negative")
    if scale <= 0.0:
        raise ValueError("scale must be positive")
    value = np.tanh(np.asarray(vague_exp, dtype=float) / scale)
    if tone_noise > 0.0:
        if rng is None:
            raise ValueError("tone_noise > 0 requires an rng or seed")
        if not isinstance(rng, np.random.Generator):
            rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(rng)))
        value = value + rng.standard_normal(value.shape) * tone_noise
    out = np.clip(value, -1.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _id_strings(prefix: str, count: int) -> list[str]:
    width = max(2, len(str(count - 1)))
    return [f"{prefix}{i:0{width}d}" for i in range(count)]


PANEL_COLUMNS = (
    "analyst_id",
    "firm_id",
    "period",
    "forecast",
    "prior_forecast",
    "next_forecast",
    "realized",
    "forecast_error",
    "revision_current",
    "revision_next",
    "tone",
    "horizon_days",
    "price_50",
) + COVARIATE_NAMES

AUDIT_COLUMNS = (
    "analyst_id",
    "firm_id",
    "period",
    "precise_exp",
    "vague_exp",
    "outcome_noise",
    "forecast_noise",
    "bias",
    "vague_sd",
    "vague_assigned",
)


def gen_panel(cfg: SimulationConfig) -> tuple[pd.DataFrame, pd.DataFrame]:
    """Generate the full panel plus a latent-draw audit table.

    Returns ``(panel, audit)``. The panel holds only observables (forecasts,
    realizations, tone, covariates, regime flags, prices); the latent signal
    and noise draws live in the audit table so downstream estimation cannot
    peek at them. Output is deterministic given the config, including its
    seed, and row order is (analyst, firm, period).
    """
    analysts = _id_strings("a", cfg.n_analysts)
    firms = _id_strings("f", cfg.n_firms)
    t = cfg.n_periods
    w = cfg.update_weight

    prices = np.empty((cfg.n_firms, t))
    for f in range(cfg.n_firms):
        rng = _firm_rng(cfg, f)
        base = 50.0 * math.exp(0.2 * rng.standard_normal())
        prices[f] = base * np.exp(0.05 * rng.standard_normal(t))

    flag_names = tuple(f.name for f in cfg.regime_flags)
    panel_rows = []
    audit_rows = []
    for a in range(cfg.n_analysts):
        for f in range(cfg.n_firms):
            d = _pair_draws(cfg, a, f)
            bias = d["covariates"] @ np.asarray(cfg.bias_coeffs)
            forecast = np.empty(t)
            precise = np.empty(t)
            precise[0] = d["precise_signals"][0]
            forecast[0] = precise[0] + bias[0] + d["forecast_noise"][0]
            for s in range(1, t):
                forecast[s] = w * d["vague"][s - 1] + (1.0 - w) * forecast[s - 1]
                precise[s] = forecast[s] - bias[s] - d["forecast_noise"][s]
            realized = precise + d["vague"] + d["outcome_noise"]
            tone = np.clip(
                np.tanh(d["vague"] / cfg.tone_scale) + d["tone_z"] * cfg.tone_noise,
                -1.0,
                1.0,
            )
            next_forecast = np.r_[forecast[1:], np.nan]
            prior_forecast = np.r_[np.nan, forecast[:-1]]
            pair_panel = {
                "analyst_id": np.repeat(analysts[a], t),
                "firm_id": np.repeat(firms[f], t),
                "period": np.arange(t),
                "forecast": forecast,
                "prior_forecast": prior_forecast,
                "next_forecast": next_forecast,
                "realized": realized,
                "forecast_error": forecast - realized,
                "revision_current": forecast - prior_forecast,
                "revision_next": next_forecast - forecast,
                "tone": tone,
                "horizon_days": d["horizon_days"],
                "price_50": prices[f],
            }
            for j, name in enumerate(COVARIATE_NAMES):
                pair_panel[name] = d["covariates"][:, j]
            for j, name in enumerate(flag_names):
                pair_panel[name] = d["flags"][:, j]
            panel_rows.append(pd.DataFrame(pair_panel))
            audit_rows.append(
                pd.DataFrame(
                    {
                        "analyst_id": np.repeat(analysts[a], t),
                        "firm_id": np.repeat(firms[f], t),
                        "period": np.arange(t),
                        "precise_exp": precise,
                        "vague_exp": d["vague"],
                        "outcome_noise": d["outcome_noise"],
                        "forecast_noise": d["forecast_noise"],
                        "bias": bias,
                        "vague_sd": d["vague_sd"],
                        "vague_assigned": np.repeat(
                            int(d["vague_assigned"]), t
                        ),
                    }
                )
            )
    panel = pd.concat(panel_rows, ignore_index=True)
    audit = pd.concat(audit_rows, ignore_index=True)
    return panel, audit
