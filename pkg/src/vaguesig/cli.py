"""Command-line entry point.

Subcommands: ``analyze`` (corpus to report metrics), ``simulate`` (synthetic
forecast panel plus latent audit file), ``regress`` (declarative spec suite
over an observation CSV), ``replicate`` (end-to-end simulate, construct,
estimate, and check the sign predictions), ``roughset`` (exhaustive
verifications and classification dumps), and ``lexicon`` (dump the bundled
hedging wordlist).

Every output file starts with a comment carrying the tool version, the
seed, and digests of the inputs; no timestamps are written, so a rerun with
equal inputs and seed is byte-identical. Exit codes: 0 success, 1 usage,
2 data error, 3 failed replication check.
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from . import __version__
from . import econometrics as em
from . import expectations as ex
from . import roughset as rough
from . import textmetrics as tm

USAGE_EXIT = 1
DATA_EXIT = 2
CHECK_EXIT = 3

CONTROL_COLUMNS = ("horizon", "bold") + ex.COVARIATE_NAMES


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()[:12]


def _header(seed, inputs: dict[str, Path], extra: str = "") -> str:
    digests = ",".join(f"{k}:{_digest(v)}" for k, v in inputs.items())
    parts = [f"vaguesig {__version__}", f"seed={seed}", f"inputs={digests or 'none'}"]
    if extra:
        parts.append(extra)
    return "# " + " | ".join(parts) + "\n"


def _write_csv(path: Path, df: pd.DataFrame, header: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(header)
        df.to_csv(fh, index=False)


def _write_text(path: Path, text: str, header: str, markdown: bool = False) -> None:
    stripped = header.strip("# \n")
    lead = f"<!-- {stripped} -->\n" if markdown else header
    path.write_text(lead + text, encoding="utf-8")


# ---------------------------------------------------------------------------
# analyze

def _summary_block(metrics: pd.DataFrame) -> str:
    lines = ["summary (per-report distribution)"]
    lines.append(
        f"{'variable':<15}{'n':>7}{'mean':>9}{'sd':>9}{'min':>9}"
        f"{'p25':>9}{'p50':>9}{'p75':>9}{'max':>9}"
    )
    for col in ("tone", "text_only_pct", "hedge_pct"):
        vals = metrics[col].to_numpy(dtype=float)
        q = [em.type1_quantile(vals, p) for p in (0.25, 0.50, 0.75)]
        sd = float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0
        lines.append(
            f"{col:<15}{len(vals):>7}{vals.mean():>9.3f}{sd:>9.3f}"
            f"{vals.min():>9.3f}{q[0]:>9.3f}{q[1]:>9.3f}{q[2]:>9.3f}"
            f"{vals.max():>9.3f}"
        )
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    corpus_path = Path(args.input)
    inputs = {"corpus": corpus_path}
    reports = tm.load_corpus(corpus_path)
    if not reports:
        raise ValueError("no reports in corpus")
    if args.lexicon:
        lex_path = Path(args.lexicon)
        lexicon = tm.load_lexicon(lex_path)
        inputs["lexicon"] = lex_path
    else:
        lexicon = tm.default_lexicon()
    rows = []
    for report in reports:
        if args.labels == "external":
            if report.labels is None:
                raise ValueError(
                    f"report {report.report_id!r} lacks complete tone labels; "
                    "rerun with --labels naive to use the wordlist fallback"
                )
            labels = report.labels
        else:
            labels = [tm.naive_tone(s) for s in report.sentences]
        m = tm.report_metrics(report.sentences, labels, lexicon)
        rows.append(
            {
                "report_id": report.report_id,
                "n_sentences": m.n_sentences,
                "tone": m.tone,
                "pos_pct": m.pos_pct,
                "neg_pct": m.neg_pct,
                "text_only_pct": m.text_only_pct,
                "hedge_pct": m.hedge_pct,
            }
        )
    metrics = pd.DataFrame(rows)
    header = _header("n/a", inputs, extra=f"labels={args.labels}")
    _write_csv(Path(args.output), metrics, header)
    print(f"wrote {len(metrics)} report metric rows to {args.output}")
    print(_summary_block(metrics))
    return 0


# ---------------------------------------------------------------------------
# simulate

def _parse_override(text: str):
    key, _, raw = text.partition("=")
    if not _:
        raise ValueError(f"override {text!r} must look like key=value")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _load_config(args) -> ex.SimulationConfig:
    mapping: dict = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise ValueError("config file must hold a JSON object")
        mapping.update(loaded)
    for override in getattr(args, "set", None) or []:
        key, value = _parse_override(override)
        mapping[key] = value
    if getattr(args, "seed", None) is not None:
        mapping["seed"] = args.seed
    return ex.SimulationConfig.from_mapping(mapping)


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    if args.verbose:
        print(f"config: {json.dumps(cfg.to_dict(), sort_keys=True)}")
    if cfg.n_periods == 1:
        print(
            "warning: n_periods=1 produces no revision rows", file=sys.stderr
        )
    panel, audit = ex.gen_panel(cfg)
    inputs = {"config": Path(args.config)} if args.config else {}
    header = _header(cfg.seed, inputs)
    _write_csv(Path(args.output), panel, header)
    if args.audit:
        _write_csv(Path(args.audit), audit, header)
    flag_names = [f.name for f in cfg.regime_flags]
    shares = {name: float(panel[name].mean()) for name in flag_names}
    print(f"wrote {len(panel)} panel rows to {args.output}")
    print(
        "regimes: "
        + ", ".join(f"{k}={v:.3f}" for k, v in sorted(shares.items()))
    )
    return 0


# ---------------------------------------------------------------------------
# regress

def cmd_regress(args) -> int:
    data_path = Path(args.input)
    spec_path = Path(args.spec)
    data = pd.read_csv(data_path, comment="#")
    with open(spec_path, "r", encoding="utf-8") as fh:
        specs = em.specs_from_obj(json.load(fh))
    if not specs:
        raise ValueError("spec file contains no specs")
    results = []
    failures = []
    for spec in specs:
        try:
            results.append(em.run_spec(spec, data))
        except Exception as exc:  # isolate per-spec failures
            failures.append((spec.name, str(exc)))
    header = _header("n/a", {"data": data_path, "specs": spec_path})
    if results:
        _write_csv(
            Path(args.output),
            pd.DataFrame(em.results_to_records(results)),
            header,
        )
        if args.markdown:
            _write_text(
                Path(args.markdown),
                em.results_to_markdown(results),
                header,
                markdown=True,
            )
        print(f"estimated {len(results)} spec(s); wrote {args.output}")
    for name, message in failures:
        print(f"spec {name!r} failed: {message}", file=sys.stderr)
    return DATA_EXIT if failures else 0


# ---------------------------------------------------------------------------
# replicate

def replication_specs() -> list[em.RegressionSpec]:
    """The estimation suite run by ``replicate``, one spec per design."""
    controls = list(CONTROL_COLUMNS)
    rev_controls = ["frev_current"] + controls
    pair_year = ("analyst_firm", "year")
    return [
        em.RegressionSpec(
            "err_tone_year", "ferror", tuple(["tone"] + controls),
            fixed_effects=("year",),
        ),
        em.RegressionSpec(
            "err_tone_analyst_year", "ferror", tuple(["tone"] + controls),
            fixed_effects=("analyst_year",),
        ),
        em.RegressionSpec(
            "err_tone_pair_year", "ferror", tuple(["tone"] + controls),
            fixed_effects=pair_year,
        ),
        em.RegressionSpec(
            "err_tone_vagueness", "ferror",
            tuple(["tone", "vagueness"] + controls),
            interactions=(("tone", "vagueness"),),
            fixed_effects=pair_year,
        ),
        em.RegressionSpec(
            "rev_tone", "frev_next", tuple(["tone"] + rev_controls),
            fixed_effects=pair_year,
        ),
        em.RegressionSpec(
            "rev_tone_uncertainty", "frev_next",
            tuple(["tone", "uncertainty"] + rev_controls),
            interactions=(("tone", "uncertainty"),),
            fixed_effects=pair_year,
        ),
        em.RegressionSpec(
            "err_tone_busyness", "ferror",
            tuple(["tone", "busyness"] + controls),
            interactions=(("tone", "busyness"),),
            fixed_effects=pair_year,
        ),
        em.RegressionSpec(
            "rev_tone_busyness", "frev_next",
            tuple(["tone", "busyness"] + rev_controls),
            interactions=(("tone", "busyness"),),
            fixed_effects=pair_year,
        ),
    ]


def _check_line(name: str, detail: str, passed: bool) -> tuple[str, bool]:
    return f"- {name}: {detail} -> {'PASS' if passed else 'FAIL'}", passed


def prediction_checks(
    results: dict[str, em.RegressionResult],
    quintiles: pd.DataFrame,
    null_mode: bool,
) -> tuple[list[str], bool]:
    """PASS/FAIL lines for the sign-and-significance predictions.

    In null mode (vague-signal dispersion forced to zero) every relation is
    expected to vanish, so the checks invert to |t| < 2, and the quintile
    check asks for a spread indistinguishable from noise.
    """
    lines: list[str] = []
    all_ok = True

    def signed(name: str, spec: str, term: str, sign: int) -> None:
        nonlocal all_ok
        res = results[spec]
        t = res.t_stat(term)
        coef = res.coefficient(term)
        if null_mode:
            ok = abs(t) < 2.0
            detail = f"{spec}:{term} t={t:.2f}, expected |t|<2 under null"
        else:
            ok = (coef * sign > 0) and abs(t) > 2.0
            want = "<0" if sign < 0 else ">0"
            detail = f"{spec}:{term} coef={coef:.5f} t={t:.2f}, expected {want}, |t|>2"
        line, ok = _check_line(name, detail, ok)
        lines.append(line)
        all_ok &= ok

    signed("tone_predicts_error_year_fe", "err_tone_year", "tone", -1)
    signed("tone_predicts_error_analyst_year_fe", "err_tone_analyst_year", "tone", -1)
    signed("tone_predicts_error_pair_year_fe", "err_tone_pair_year", "tone", -1)
    signed(
        "vaguer_reports_predict_errors_more",
        "err_tone_vagueness",
        em.interaction_name("tone", "vagueness"),
        -1,
    )
    signed("tone_predicts_next_revision", "rev_tone", "tone", +1)
    signed(
        "uncertainty_strengthens_revision_link",
        "rev_tone_uncertainty",
        em.interaction_name("tone", "uncertainty"),
        +1,
    )
    signed(
        "busyness_strengthens_error_link",
        "err_tone_busyness",
        em.interaction_name("tone", "busyness"),
        -1,
    )
    signed(
        "busyness_strengthens_revision_link",
        "rev_tone_busyness",
        em.interaction_name("tone", "busyness"),
        +1,
    )

    current = quintiles.loc[quintiles["horizon"] == 0].sort_values("quintile")
    means = current["mean_value"].to_numpy()
    stds = current["std_value"].to_numpy()
    counts = current["n"].to_numpy()
    if null_mode:
        spread = abs(means[0] - means[-1])
        spread_se = float(
            np.sqrt(stds[0] ** 2 / counts[0] + stds[-1] ** 2 / counts[-1])
        )
        ok = spread < 4.0 * spread_se
        detail = (
            f"Q1-Q5 spread {spread:.5f} vs 4*se {4 * spread_se:.5f}, "
            "expected indistinguishable from noise"
        )
    else:
        ok = (
            bool(np.all(np.diff(means) < 0))
            and means[0] > 0
            and means[-1] < 0
        )
        detail = (
            "mean error by tone quintile "
            + ", ".join(f"{m:.5f}" for m in means)
            + ", expected strictly decreasing with Q1>0>Q5"
        )
    line, ok = _check_line("quintile_error_shape", detail, ok)
    lines.append(line)
    all_ok &= ok
    return lines, all_ok


class ReplicateOutcome:
    """What one replicate run produced, for programmatic inspection."""

    def __init__(self, ok, lines, results, quintiles, n_rows):
        self.ok = ok
        self.lines = lines
        self.results = results
        self.quintiles = quintiles
        self.n_rows = n_rows


class StageError(RuntimeError):
    """A replicate stage failed; the message names the stage."""


@contextlib.contextmanager
def _stage(name: str):
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(f"stage {name!r} failed: {exc}") from exc


def run_replicate_pipeline(
    cfg: ex.SimulationConfig,
    out_dir: Path,
    null_mode: bool,
    config_path: Path | None = None,
) -> ReplicateOutcome:
    """simulate -> construct variables -> spec suite -> quintiles -> checks.

    Any stage failure is re-raised tagged with the stage name.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    inputs = {"config": config_path} if config_path else {}
    header = _header(
        cfg.seed, inputs, extra=f"mode={'null' if null_mode else 'default'}"
    )

    with _stage("simulate"):
        panel, audit = ex.gen_panel(cfg)
        _write_csv(out_dir / "panel.csv", panel, header)
        _write_csv(out_dir / "audit.csv", audit, header)

    with _stage("construct-variables"):
        obs, report = em.construct_variables(panel)
        _write_csv(out_dir / "observations.csv", obs, header)

    results: dict[str, em.RegressionResult] = {}
    with _stage("estimate"):
        for spec in replication_specs():
            results[spec.name] = em.run_spec(spec, obs)
        ordered = [results[s.name] for s in replication_specs()]
        _write_csv(
            out_dir / "results.csv",
            pd.DataFrame(em.results_to_records(ordered)),
            header,
        )
        _write_text(
            out_dir / "results.md",
            em.results_to_markdown(ordered),
            header,
            markdown=True,
        )

    with _stage("quintiles"):
        quintiles = em.quintile_table(obs)
        _write_csv(out_dir / "quintiles.csv", quintiles, header)

    lines, all_ok = prediction_checks(results, quintiles, null_mode)
    body = [
        "# replication checks",
        "",
        f"mode: {'null (vague dispersion zero)' if null_mode else 'default'}",
        f"seed: {cfg.seed}",
        f"panel rows: {len(panel)}; estimated rows: {report['rows']}",
        "",
        *lines,
        "",
        f"overall: {'PASS' if all_ok else 'FAIL'}",
        "",
    ]
    _write_text(out_dir / "report.md", "\n".join(body), header, markdown=True)
    return ReplicateOutcome(all_ok, lines, results, quintiles, len(panel))


def cmd_replicate(args) -> int:
    cfg = _load_config(args)
    if args.null:
        cfg = cfg.replace(sigma_vague=0.0)
    if args.verbose:
        print(f"config: {json.dumps(cfg.to_dict(), sort_keys=True)}")
    outcome = run_replicate_pipeline(
        cfg,
        Path(args.output_dir),
        args.null,
        config_path=Path(args.config) if args.config else None,
    )
    for line in outcome.lines:
        print(line)
    print(f"overall: {'PASS' if outcome.ok else 'FAIL'}")
    return 0 if outcome.ok else CHECK_EXIT


# ---------------------------------------------------------------------------
# roughset

def _tone_table_text(space: rough.StateSpace) -> str:
    rows = [
        "certain states all positive, or none certain and possible states "
        "all positive -> positive (+1)",
        "certain states all negative, or none certain and possible states "
        "all negative -> negative (-1)",
        "otherwise -> neutral (0)",
    ]
    counts = {rough.ToneClass.POSITIVE: 0, rough.ToneClass.NEUTRAL: 0,
              rough.ToneClass.NEGATIVE: 0}
    for rs in rough.enumerate_rough_sets(space):
        counts[rough.tone_classify(rs)] += 1
    lines = ["classification rule:"]
    lines += [f"  {r}" for r in rows]
    lines.append(
        "enumeration: "
        + ", ".join(
            f"{tone.name.lower()}={counts[tone]}"
            for tone in (
                rough.ToneClass.POSITIVE,
                rough.ToneClass.NEUTRAL,
                rough.ToneClass.NEGATIVE,
            )
        )
    )
    return "\n".join(lines)


def cmd_roughset(args) -> int:
    with open(args.input, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if args.check == "classify":
        rs = rough.rough_set_from_dict(payload)
        print(f"rough set: {rs!r}")
        print(f"definability: {rough.classify_definability(rs).value}")
        print(f"informative: {rough.is_informative(rs)}")
        print(f"tone: {rough.tone_classify(rs).name.lower()}")
        print(f"boundary: {rough.boundary(rs)!r}")
        return 0
    space = rough.space_from_dict(payload)
    if space.size > args.cap:
        raise rough.EnumerationCapError(
            f"space size {space.size} exceeds enumeration cap {args.cap}; "
            "pass --cap to override"
        )
    if args.check == "informative":
        print(rough.verify_informative_rough_sets(space, cap=args.cap).summary())
    elif args.check == "faithful":
        print(rough.verify_faithful_representation(space, cap=args.cap).summary())
    else:
        print(_tone_table_text(space))
    return 0


def cmd_lexicon(args) -> int:
    text = tm.lexicon_to_text(tm.default_lexicon())
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote default lexicon to {args.output}")
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="vaguesig", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="compute report metrics from a corpus")
    p.add_argument("--input", required=True, help="JSONL corpus path")
    p.add_argument("--output", required=True, help="metrics CSV path")
    p.add_argument("--lexicon", help="hedging lexicon file (default: bundled)")
    p.add_argument(
        "--labels",
        choices=("external", "naive"),
        default="external",
        help="tone label source: corpus labels or the wordlist fallback",
    )
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="generate a synthetic forecast panel")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument(
        "--set", action="append", metavar="KEY=VALUE",
        help="override one config key (JSON value)",
    )
    p.add_argument("--output", required=True, help="panel CSV path")
    p.add_argument("--audit", help="latent-draw audit CSV path")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("regress", help="run a spec suite over an observation CSV")
    p.add_argument("--input", required=True, help="observation CSV path")
    p.add_argument("--spec", required=True, help="JSON spec file")
    p.add_argument("--output", required=True, help="results CSV path")
    p.add_argument("--markdown", help="optional Markdown table path")
    p.set_defaults(func=cmd_regress)

    p = sub.add_parser(
        "replicate", help="end-to-end simulation, estimation, and sign checks"
    )
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument(
        "--set", action="append", metavar="KEY=VALUE",
        help="override one config key (JSON value)",
    )
    p.add_argument("--null", action="store_true",
                   help="zero the vague-signal dispersion (expected-null run)")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_replicate)

    p = sub.add_parser("roughset", help="exhaustive rough-set verifications")
    p.add_argument("--input", required=True, help="state-space or rough-set JSON")
    p.add_argument(
        "--check",
        choices=("informative", "faithful", "tone-table", "classify"),
        required=True,
    )
    p.add_argument(
        "--cap", type=int, default=rough.DEFAULT_ENUMERATION_CAP,
        help="enumeration cap on the space size",
    )
    p.set_defaults(func=cmd_roughset)

    p = sub.add_parser("lexicon", help="dump the bundled hedging lexicon")
    p.add_argument("--output", help="target path (default: stdout)")
    p.set_defaults(func=cmd_lexicon)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        ValueError,
        KeyError,
        OSError,
        json.JSONDecodeError,
        em.DemeanConvergenceError,
        StageError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
