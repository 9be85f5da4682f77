"""Command-line front end: flat key-value configuration, suite
orchestration, and deterministic CSV/JSON emission.

Every output file is self-describing: it begins with an echo of the
effective configuration (one ``key = value`` per line) that can be saved
and re-parsed to reproduce the run byte for byte.  The echo omits keys
that cannot change the result rows (workers, out) and the timestamp
metadata, which ``--no-timestamp`` drops entirely.

Exit codes: 0 on success, 2 for usage/validation problems and for failed
check suites, 1 for runtime errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import dataclasses
from dataclasses import dataclass, fields, replace
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .fields import catalog
from .hgroup import origin
from .quad import QuadSpec, ScaleGrid
from .squarefn import g_alpha
from .beta import beta_profile
from .verify import (
    HarnessConfig,
    dorronsoro_ratio,
    dorronsoro_stability,
    gate_exponents,
    poincare_ratio,
    poincare_stability,
    run_identity_suite,
    run_lemma_suite,
)

_SUITES = ("beta", "squarefn", "identities", "lemmas", "dorronsoro", "poincare")
_FORMATS = ("csv", "json")
_MODE_ALIASES = {"mc": "montecarlo", "montecarlo": "montecarlo", "grid": "grid"}


class UsageError(ValueError):
    """Configuration problem: unknown key, bad value, inadmissible run."""


@dataclass(frozen=True)
class RunConfig:
    """Fully materialized run description.

    field_params are the catalog constructor arguments (from dotted
    ``field.key`` config lines or the ``name:key=value`` flag syntax).
    workers and out never influence result bytes.
    """

    suite: str = "identities"
    n: int = 1
    field: str = "gaussian"
    field_params: dict = dataclasses.field(default_factory=dict)
    p: float = 2.0
    q: float = 1.0
    alpha: float = 1.0
    r_min: float = 1e-3
    r_max: float = 1e2
    per_decade: int = 16
    t_min: float = 1e-4
    t_max: float = 1e2
    t_per_decade: int = 16
    box_radius: float = 4.0
    mode: str = "montecarlo"
    samples: int = 100_000
    grid_per_axis: int = 24
    seed: int = 42
    workers: int = 1
    out: str | None = None
    format: str = "csv"
    timestamp: bool = True

    @property
    def quad_spec(self) -> QuadSpec:
        return QuadSpec(
            mode=self.mode,
            samples=self.samples,
            seed=self.seed,
            grid_per_axis=self.grid_per_axis,
        )

    @property
    def scale_grid(self) -> ScaleGrid:
        return ScaleGrid(self.r_min, self.r_max, self.per_decade)

    def harness_config(self) -> HarnessConfig:
        return HarnessConfig(
            n=self.n,
            p=self.p,
            q=self.q,
            alpha=self.alpha,
            r_min=self.r_min,
            r_max=self.r_max,
            per_decade=self.per_decade,
            t_min=self.t_min,
            t_max=self.t_max,
            t_per_decade=self.t_per_decade,
            box_radius=self.box_radius,
            spec=self.quad_spec,
        )

    def make_field(self):
        return catalog(self.field, n=self.n, **self.field_params)


_INT_KEYS = {"n", "per_decade", "t_per_decade", "samples", "grid_per_axis",
             "seed", "workers"}
_FLOAT_KEYS = {"p", "q", "alpha", "r_min", "r_max", "t_min", "t_max",
               "box_radius"}
_STR_KEYS = {"suite", "field", "mode", "out", "format"}
_BOOL_KEYS = {"timestamp"}


def _parse_scalar(text: str):
    """Best-effort typed value for a field parameter: int, float,
    comma-separated float tuple, or the raw string."""
    if "," in text:
        return tuple(float(part) for part in text.split(","))
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def _coerce(key: str, raw):
    if isinstance(raw, str):
        raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _BOOL_KEYS:
            if isinstance(raw, bool):
                return raw
            if raw in ("true", "false"):
                return raw == "true"
            raise ValueError(raw)
    except (TypeError, ValueError):
        raise UsageError(f"bad value for {key}: {raw!r}") from None
    return raw


def _read_config_file(path: str) -> dict:
    """Flat `key = value` lines; `#` starts a comment; field.NAME keys
    collect into field_params."""
    settings: dict = {}
    params: dict = {}
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key.startswith("field."):
            params[key[len("field."):]] = _parse_scalar(value)
        elif key in _INT_KEYS | _FLOAT_KEYS | _STR_KEYS | _BOOL_KEYS:
            settings[key] = _coerce(key, value)
        else:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
    if params:
        settings["field_params"] = params
    return settings


def _parse_field_flag(text: str) -> tuple[str, dict]:
    """--field syntax: NAME or NAME:key=value,key=value.

    A comma token without '=' continues the previous value, so vector
    parameters read naturally: affine:a=1.5,-0.5,b=2.
    """
    name, sep, rest = text.partition(":")
    params: dict = {}
    if sep:
        items: list[str] = []
        for token in rest.split(","):
            if "=" in token:
                items.append(token)
            elif items:
                items[-1] += "," + token
            else:
                raise UsageError(
                    f"bad --field parameter {token!r}, expected key=value"
                )
        for item in items:
            key, _, value = item.partition("=")
            params[key.strip()] = _parse_scalar(value.strip())
    return name.strip(), params


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heisbeta",
        description="Multiscale affine approximation sweeps and inequality "
        "checks on the Heisenberg group.",
    )
    parser.add_argument("suite", nargs="?", choices=_SUITES,
                        help="which sweep or check suite to run")
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--n", type=int)
    parser.add_argument("--field",
                        help="catalog field, NAME or NAME:key=value,...")
    parser.add_argument("--p", type=float)
    parser.add_argument("--q", type=float)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--rmin", dest="r_min", type=float)
    parser.add_argument("--rmax", dest="r_max", type=float)
    parser.add_argument("--per-decade", dest="per_decade", type=int)
    parser.add_argument("--box-radius", dest="box_radius", type=float)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--grid-per-axis", dest="grid_per_axis", type=int)
    parser.add_argument("--mode", choices=sorted(_MODE_ALIASES))
    parser.add_argument("--seed", type=int)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--out")
    parser.add_argument("--format", choices=_FORMATS)
    parser.add_argument("--no-timestamp", dest="timestamp",
                        action="store_const", const=False)
    return parser


def parse_config(argv=None) -> RunConfig:
    """Assemble a validated RunConfig from flags and an optional config
    file; explicit flags override file values, which override defaults."""
    args = _build_parser().parse_args(argv)
    settings: dict = {}
    if args.config:
        settings.update(_read_config_file(args.config))
    for key in ("n", "p", "q", "alpha", "r_min", "r_max", "per_decade",
                "box_radius", "samples", "grid_per_axis", "mode", "seed",
                "workers", "out", "format", "timestamp"):
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    if args.field is not None:
        name, params = _parse_field_flag(args.field)
        settings["field"] = name
        # the flag names a complete field; stale file params must not leak in
        settings["field_params"] = params
    if args.suite is not None:
        settings["suite"] = args.suite
    if "workers" not in settings:
        env = os.environ.get("HEIS_BETA_WORKERS")
        if env:
            settings["workers"] = _coerce("workers", env)
    known = {f.name for f in fields(RunConfig)}
    unknown = set(settings) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    config = RunConfig(**settings)
    return _validated(config)


def _validated(config: RunConfig) -> RunConfig:
    if config.suite not in _SUITES:
        raise UsageError(f"suite must be one of {_SUITES}, got {config.suite!r}")
    if config.mode not in _MODE_ALIASES:
        raise UsageError(f"mode must be grid, mc, or montecarlo, got {config.mode!r}")
    config = replace(config, mode=_MODE_ALIASES[config.mode])
    if config.format not in _FORMATS:
        raise UsageError(f"format must be csv or json, got {config.format!r}")
    if config.n < 1:
        raise UsageError(f"n must be a positive integer, got {config.n}")
    if not config.p > 1:
        raise UsageError(f"p must exceed 1, got {config.p}")
    if not config.q >= 1:
        raise UsageError(f"q must be at least 1, got {config.q}")
    if not 0.0 < config.alpha < 2.0:
        raise UsageError(f"alpha must lie in (0, 2), got {config.alpha}")
    if not 0.0 < config.r_min < config.r_max:
        raise UsageError(
            f"need 0 < rmin < rmax, got [{config.r_min}, {config.r_max}]"
        )
    if config.samples < 1 or config.grid_per_axis < 1:
        raise UsageError("samples and grid-per-axis must be positive")
    if config.workers < 1:
        raise UsageError(f"workers must be >= 1, got {config.workers}")
    if config.box_radius <= 0:
        raise UsageError(f"box-radius must be positive, got {config.box_radius}")
    if config.suite == "dorronsoro":
        gate = gate_exponents(config.p, config.q, config.n)
        if not gate.admissible:
            raise UsageError(
                f"exponents p={config.p}, q={config.q} rejected at Q={gate.Q}: "
                f"outside the admissible window"
            )
    if config.suite == "poincare" and not 1.0 < config.p <= 2.0:
        raise UsageError(f"poincare suite needs p in (1, 2], got {config.p}")
    try:
        config.make_field()
    except (ValueError, TypeError) as exc:
        raise UsageError(f"field configuration rejected: {exc}") from None
    return config


# ---------------------------------------------------------------------------
# emission


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, np.integer):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, tuple):
        return ",".join(repr(float(part)) for part in value)
    return str(value)


def _echo_lines(config: RunConfig) -> list[str]:
    """Effective-config echo: every key that shapes the result rows, in a
    fixed order, omitting workers/out/timestamp."""
    keys = ("suite", "n", "field", "p", "q", "alpha", "r_min", "r_max",
            "per_decade", "t_min", "t_max", "t_per_decade", "box_radius",
            "mode", "samples", "grid_per_axis", "seed", "format")
    lines = [f"{key} = {_fmt(getattr(config, key))}" for key in keys]
    at = keys.index("field") + 1
    param_lines = [
        f"field.{key} = {_fmt(config.field_params[key])}"
        for key in sorted(config.field_params)
    ]
    return lines[:at] + param_lines + lines[at:]


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _emit_csv(config: RunConfig, columns, rows) -> str:
    out = [f"# heisbeta {__version__}"]
    if config.timestamp:
        out.append(f"# generated = {_timestamp()}")
    out.extend(f"# {line}" for line in _echo_lines(config))
    out.append(",".join(columns))
    for row in rows:
        out.append(",".join(_fmt(cell) for cell in row))
    return "\n".join(out) + "\n"


def _emit_json(config: RunConfig, columns, rows, reports=None) -> str:
    doc: dict = {"version": __version__}
    if config.timestamp:
        doc["generated"] = _timestamp()
    doc["config"] = dict(line.split(" = ", 1) for line in _echo_lines(config))
    if reports is not None:
        doc["reports"] = reports
    else:
        doc["rows"] = [_json_safe(dict(zip(columns, row))) for row in rows]
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, (np.floating, np.integer)):
        return _json_safe(float(value))
    if isinstance(value, tuple):
        return [_json_safe(part) for part in value]
    if isinstance(value, dict):
        return {key: _json_safe(item) for key, item in value.items()}
    return value


def _report_rows(reports):
    columns = ("name", "lhs", "rhs", "ratio", "degenerate")
    rows = [
        (rep.name, rep.lhs, rep.rhs, rep.ratio, rep.degenerate)
        for rep in reports
    ]
    dicts = [
        _json_safe({
            "name": rep.name,
            "lhs": rep.lhs,
            "rhs": rep.rhs,
            "ratio": rep.ratio,
            "degenerate": rep.degenerate,
            "truncation": list(rep.truncation),
            "params": rep.params,
        })
        for rep in reports
    ]
    return columns, rows, dicts


# ---------------------------------------------------------------------------
# suites


def _probe_points(config: RunConfig):
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 71]))
    dim = 2 * config.n + 1
    pts = [origin(config.n)]
    for _ in range(4):
        x = np.empty(dim)
        x[:-1] = rng.uniform(-1.5, 1.5, size=dim - 1)
        x[-1] = rng.uniform(-2.0, 2.0)
        pts.append(x)
    return pts


def _run_beta(config: RunConfig):
    f = config.make_field()
    prof = beta_profile(
        f, origin(config.n), 1, config.q, config.scale_grid, config.quad_spec
    )
    rows = list(zip(prof.grid.nodes(), prof.values, prof.stderrs))
    return ("r", "beta", "stderr"), [tuple(map(float, row)) for row in rows], None, 0


def _run_squarefn(config: RunConfig):
    f = config.make_field()
    rows = []
    for x_id, x in enumerate(_probe_points(config)):
        res = g_alpha(f, x, config.alpha, config.scale_grid, config.quad_spec)
        rows.append((x_id, config.alpha, res.value, res.truncation_low,
                     res.truncation_high))
    return ("x_id", "alpha", "value", "trunc_low", "trunc_high"), rows, None, 0


def _run_reports(config: RunConfig, reports):
    columns, rows, dicts = _report_rows(reports)
    failed = any(rep.params.get("pass") is False for rep in reports)
    return columns, rows, dicts, (2 if failed else 0)


def _run_suite(config: RunConfig):
    if config.suite == "beta":
        return _run_beta(config)
    if config.suite == "squarefn":
        return _run_squarefn(config)
    harness = config.harness_config()
    if config.suite == "identities":
        return _run_reports(config, run_identity_suite(harness, config.workers))
    if config.suite == "lemmas":
        return _run_reports(config, run_lemma_suite(harness, config.workers))
    f = config.make_field()
    if config.suite == "dorronsoro":
        base = dorronsoro_ratio(f, config.p, config.q, harness)
        reports = [base] + [
            dorronsoro_stability(f, config.p, config.q, harness, s, base=base)
            for s in (0.5, 1.0, 2.0)
        ]
        return _run_reports(config, reports)
    base = poincare_ratio(f, config.p, harness)
    reports = [base] + [
        poincare_stability(f, config.p, harness, s, base=base)
        for s in (0.5, 2.0)
    ]
    return _run_reports(config, reports)


def run(config: RunConfig) -> int:
    """Execute the configured suite and write its artifact; returns the
    exit status (0 ok, 2 failed checks, 1 runtime error)."""
    try:
        columns, rows, dicts, status = _run_suite(config)
        if config.format == "csv":
            text = _emit_csv(config, columns, rows)
        else:
            text = _emit_json(config, columns, rows, reports=dicts)
        if config.out:
            with open(config.out, "w", encoding="utf-8") as sink:
                sink.write(text)
        else:
            sys.stdout.write(text)
    except (OSError, FloatingPointError, ValueError) as exc:
        print(f"heisbeta: error: {exc}", file=sys.stderr)
        return 1
    return status


def main(argv=None) -> None:
    try:
        config = parse_config(argv)
    except UsageError as exc:
        print(f"heisbeta: {exc}", file=sys.stderr)
        raise SystemExit(2) from None
    raise SystemExit(run(config))


if __name__ == "__main__":
    main()
