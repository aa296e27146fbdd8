"""Column-wise robust center estimation for delimited numeric files.

Reads CSV or whitespace-delimited columns, fits the configured loss's
center per column (closed forms for quadratic/absolute, gradient-sign
search otherwise) and emits a JSON or text report.  Exit codes: 0 on
success, 2 for input data problems, 3 for configuration problems.
"""

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .classic import ClassicLossSpec
from .generalized import LogExpParams
from .minimize import (
    SampleSet,
    cumulative_value,
    find_centralizing_pair,
    mean,
    median,
    robust_center,
)

LOSS_KINDS = ("quadratic", "absolute", "huber", "pseudo_huber", "log_exp")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONFIG = 3


class InputDataError(Exception):
    """Unreadable or malformed input data (exit code 2)."""


class ConfigError(Exception):
    """Invalid configuration (exit code 3)."""


@dataclass
class RunConfig:
    """One estimation run: loss family, parameters and I/O choices."""

    loss_kind: str = "log_exp"
    a: float = 1.0
    b: float = 0.0
    delta: float = 1.0
    epsilon: float = 1e-9
    mode: str = "center"
    normalize: str = "none"
    columns: Optional[list] = None
    input_format: str = "csv"
    output_format: str = "json"


def sniff_format(text):
    """Guess csv vs whitespace from the first non-blank line."""
    for line in text.splitlines():
        if line.strip():
            return "csv" if "," in line else "whitespace"
    return "csv"


def _rows(stream, input_format):
    """Yield (1-based line number, list of raw fields), skipping blank lines."""
    if input_format == "csv":
        import csv as _csv

        reader = _csv.reader(stream)
        for fields in reader:
            if not fields or all(f.strip() == "" for f in fields):
                continue
            yield reader.line_num, fields
    elif input_format == "whitespace":
        for line_num, line in enumerate(stream, start=1):
            fields = line.split()
            if fields:
                yield line_num, fields
    else:
        raise ConfigError(f"unknown input format {input_format!r}")


def parse_input(source, input_format, columns=None):
    """Read columnar numeric data into one SampleSet per selected column.

    ``source`` is a path, "-" for stdin, or an open text stream.  When
    ``columns`` is None every column of the first row is selected and all
    rows must have that many fields.  Bad cells (non-numeric, NaN or
    infinite) and ragged rows raise InputDataError naming the 1-based row.
    """
    if hasattr(source, "read"):
        stream, close = source, False
    elif source == "-":
        stream, close = sys.stdin, False
    else:
        try:
            stream = open(source, "r", encoding="utf-8")
        except OSError as exc:
            raise InputDataError(f"cannot read {source!r}: {exc}") from exc
        close = True
    try:
        rows = list(_rows(stream, input_format))
    finally:
        if close:
            stream.close()

    if not rows:
        raise InputDataError("input contains no data rows")
    selected = list(range(len(rows[0][1]))) if columns is None else list(columns)
    if not selected:
        raise InputDataError("no columns selected")
    if any(c < 0 for c in selected):
        raise InputDataError("column indices must be >= 0")

    ncols = len(rows[0][1])
    data = {c: [] for c in selected}
    for line_num, fields in rows:
        if columns is None and len(fields) != ncols:
            raise InputDataError(
                f"row {line_num} has {len(fields)} fields, expected {ncols}"
            )
        for c in selected:
            if c >= len(fields):
                raise InputDataError(
                    f"row {line_num} has {len(fields)} fields; column {c} requested"
                )
            cell = fields[c].strip()
            try:
                val = float(cell)
            except ValueError:
                raise InputDataError(
                    f"row {line_num}, column {c}: {cell!r} is not a number"
                ) from None
            if not math.isfinite(val):
                raise InputDataError(
                    f"row {line_num}, column {c}: non-finite value {cell!r}"
                )
            data[c].append(val)
    return [SampleSet.from_values(data[c]) for c in selected]


def _build_loss(cfg):
    if cfg.loss_kind == "log_exp":
        if cfg.b < 0:
            raise ConfigError(
                f"log_exp with b = {cfg.b!r} < 0 is refused: the gradient-sign "
                "search requires a convex loss (b >= 0)"
            )
        try:
            return LogExpParams(cfg.a, cfg.b)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if cfg.loss_kind in LOSS_KINDS:
        try:
            return ClassicLossSpec(cfg.loss_kind, cfg.delta)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown loss kind {cfg.loss_kind!r}")


def _affine(samples, normalize):
    """Per-column transform (shift, scale): normalized = (x - shift) / scale."""
    if normalize == "none":
        return 0.0, 1.0
    if normalize == "mean":
        return mean(samples), 1.0
    if normalize == "zscore":
        mu = mean(samples)
        sd = float(np.std(samples.values))
        # A constant column has zero spread; shifting alone is the best we can do.
        return mu, sd if sd > 0 else 1.0
    raise ConfigError(f"unknown normalize mode {normalize!r}")


def run_estimate(cfg, data):
    """Estimate one center per column and return the report dict.

    Normalization is applied per column before the search and inverted on
    the way out, so estimates and pair bounds are in input units.  The
    reported loss is the cumulative loss of the original-units data at the
    returned estimate.  Quadratic and absolute losses use their closed
    forms (mean, median) with zero gradient evaluations.
    """
    spec = _build_loss(cfg)
    if not (math.isfinite(cfg.epsilon) and cfg.epsilon > 0):
        raise ConfigError(f"epsilon must be finite and positive, got {cfg.epsilon!r}")
    if cfg.mode not in ("pair", "center"):
        raise ConfigError(f"unknown mode {cfg.mode!r}")
    indices = list(range(len(data))) if cfg.columns is None else list(cfg.columns)
    columns = []
    for idx, samples in zip(indices, data):
        shift, scale = _affine(samples, cfg.normalize)
        if shift == 0.0 and scale == 1.0:
            work = samples
        else:
            work = SampleSet.from_values((samples.values - shift) / scale)
        pair = None
        if cfg.loss_kind == "quadratic":
            estimate, evals = mean(work), 0
        elif cfg.loss_kind == "absolute":
            estimate, evals = median(work), 0
        elif cfg.mode == "pair":
            found = find_centralizing_pair(spec, work)
            if found.exact:
                lo = hi = found.x_star
            else:
                lo, hi = found.x_low, found.x_high
            estimate, evals = 0.5 * (lo + hi), found.grad_evals
            pair = [lo * scale + shift, hi * scale + shift]
        else:
            result = robust_center(spec, work, cfg.epsilon)
            estimate, evals = result.x_eps, result.grad_evals
        estimate = estimate * scale + shift
        columns.append(
            {
                "index": int(idx),
                "n": samples.n,
                "estimate": float(estimate),
                "pair": None if pair is None else [float(pair[0]), float(pair[1])],
                "loss": float(cumulative_value(spec, samples, estimate)),
                "grad_evals": int(evals),
                "normalize": cfg.normalize,
            }
        )
    return {
        "columns": columns,
        "loss_kind": cfg.loss_kind,
        "params": {
            "a": float(cfg.a),
            "b": float(cfg.b),
            "delta": float(cfg.delta),
            "epsilon": float(cfg.epsilon),
        },
    }


def emit_report(report, output_format):
    """Render the report: one JSON object, or one human-readable line per column.

    JSON floats use Python's shortest round-trip serialization, so parsing
    the report back recovers every value bit-for-bit.
    """
    if output_format == "json":
        return json.dumps(report) + "\n"
    if output_format != "text":
        raise ConfigError(f"unknown output format {output_format!r}")
    p = report["params"]
    lines = [
        f"loss={report['loss_kind']} a={p['a']:g} b={p['b']:g} "
        f"delta={p['delta']:g} epsilon={p['epsilon']:g}"
    ]
    for col in report["columns"]:
        pair = (
            ""
            if col["pair"] is None
            else f" pair=[{col['pair'][0]:.15g}, {col['pair'][1]:.15g}]"
        )
        lines.append(
            f"column {col['index']}: n={col['n']} estimate={col['estimate']:.15g}"
            f"{pair} loss={col['loss']:.15g} grad_evals={col['grad_evals']} "
            f"normalize={col['normalize']}"
        )
    return "\n".join(lines) + "\n"


class _Parser(argparse.ArgumentParser):
    # Flag problems are configuration errors (exit 3), not argparse's default 2.
    def error(self, message):
        raise ConfigError(message)


def _columns_arg(text):
    try:
        cols = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad column list {text!r}") from None
    if any(c < 0 for c in cols):
        raise argparse.ArgumentTypeError("column indices must be >= 0")
    return cols


def build_parser():
    p = _Parser(
        prog="robust-center",
        description="Estimate a robust center per column of a numeric table.",
    )
    p.add_argument("input", help="path to the data file, or - for stdin")
    p.add_argument("--loss", choices=LOSS_KINDS, default="log_exp",
                   help="loss family (default: log_exp)")
    p.add_argument("--a", type=float, default=None, metavar="A",
                   help="log_exp sharpness, > 0 (default 1)")
    p.add_argument("--b", type=float, default=None, metavar="B",
                   help="log_exp offset, >= 0 (default 0)")
    p.add_argument("--delta", type=float, default=None, metavar="D",
                   help="huber/pseudo_huber scale, > 0 (default 1)")
    p.add_argument("--epsilon", type=float, default=1e-9, metavar="EPS",
                   help="guarantee radius for the center search (default 1e-9)")
    p.add_argument("--mode", choices=("pair", "center"), default="center",
                   help="report the bracketing pair or the refined center")
    p.add_argument("--normalize", choices=("none", "mean", "zscore"), default="none",
                   help="per-column affine normalization, inverted in the report")
    p.add_argument("--columns", type=_columns_arg, default=None, metavar="I,J,...",
                   help="0-based column indices (default: all)")
    p.add_argument("--input-format", choices=("csv", "whitespace"), default=None,
                   help="default: sniffed from the first line")
    p.add_argument("--format", choices=("json", "text"), default="json",
                   dest="output_format", help="report format (default json)")
    p.add_argument("--output", default=None, metavar="PATH",
                   help="write the report to PATH instead of stdout")
    return p


def _warn_irrelevant(ns):
    if ns.loss != "log_exp":
        for name, value in (("a", ns.a), ("b", ns.b)):
            if value is not None:
                print(f"warning: --{name} is ignored for loss {ns.loss}", file=sys.stderr)
    if ns.loss not in ("huber", "pseudo_huber") and ns.delta is not None:
        print(f"warning: --delta is ignored for loss {ns.loss}", file=sys.stderr)


def main(argv=None):
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        _warn_irrelevant(ns)
        text = _read_source(ns.input)
        cfg = RunConfig(
            loss_kind=ns.loss,
            a=1.0 if ns.a is None else ns.a,
            b=0.0 if ns.b is None else ns.b,
            delta=1.0 if ns.delta is None else ns.delta,
            epsilon=ns.epsilon,
            mode=ns.mode,
            normalize=ns.normalize,
            columns=ns.columns,
            input_format=ns.input_format or sniff_format(text),
            output_format=ns.output_format,
        )
        data = parse_input(io.StringIO(text), cfg.input_format, cfg.columns)
        report = run_estimate(cfg, data)
        out = emit_report(report, cfg.output_format)
        if ns.output:
            with open(ns.output, "w", encoding="utf-8") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InputDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def _read_source(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputDataError(f"cannot read {path!r}: {exc}") from exc


if __name__ == "__main__":
    sys.exit(main())
