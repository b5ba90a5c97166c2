"""Command line front end.

Three subcommands: ``extract`` pulls a background out of an image
sequence and writes background.png plus report.json, ``evaluate``
scores a candidate background against a ground-truth image, and
``inspect`` prints the fitted spectrum without writing files.

Each pipeline stage maps to its own exit code so scripted callers can
tell what failed: 2 usage, 3 ingestion, 4 model fitting, 5 metrics,
6 output writing.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from .background import BackgroundResult, dmd_on_video, qdmd_background
from .errors import (
    EigenPairingError,
    InsufficientDataError,
    LogSingularityError,
    NonDiagonalizableError,
    RankError,
    SequenceLoadError,
    ShapeMismatchError,
)
from .metrics import evaluate_pair
from .video import (
    FrameStack,
    downsample,
    load_image,
    load_sequence,
    trim_static_margins,
    write_png,
)

__all__ = ["RunConfig", "main", "entry"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INGEST = 3
EXIT_MODEL = 4
EXIT_METRICS = 5
EXIT_WRITE = 6

_METHODS = ("qdmd", "dmd-gray", "dmd-rgb")

_MODEL_ERRORS = (RankError, InsufficientDataError, NonDiagonalizableError,
                 LogSingularityError, EigenPairingError, ShapeMismatchError,
                 np.linalg.LinAlgError, ValueError)


class _UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    """Effective settings for extract/inspect after merging the config file."""

    input: str
    frames: tuple[int, int] | None = None
    stride: int = 1
    downsample: int = 1
    trim_tol: float | None = None
    rank: int | None = None
    method: str = "qdmd"
    dt: float = 1.0
    out: str | None = None
    gt: str | None = None
    tau: float = 20.0
    dump_foreground: bool = False
    dump_spectrum: bool = False
    stable_output: bool = False

    def validate(self) -> None:
        if self.method not in _METHODS:
            raise _UsageError(f"method must be one of {', '.join(_METHODS)}; "
                              f"got {self.method!r}")
        if self.rank is not None and self.rank < 1:
            raise _UsageError(f"rank must be at least 1, got {self.rank}")
        if self.downsample < 1:
            raise _UsageError(
                f"downsample factor must be at least 1, got {self.downsample}")
        if self.stride < 1:
            raise _UsageError(f"stride must be at least 1, got {self.stride}")
        if self.dt <= 0:
            raise _UsageError(f"dt must be positive, got {self.dt}")
        if self.tau < 0:
            raise _UsageError(f"tau must be nonnegative, got {self.tau}")


def _parse_frames(value) -> tuple[int, int]:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        a, b = value
    else:
        parts = str(value).split("..")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise _UsageError(f"frame range must look like A..B, got {value!r}")
        a, b = parts
    try:
        a, b = int(a), int(b)
    except (TypeError, ValueError):
        raise _UsageError(f"frame range must be integers, got {value!r}")
    if a < 0 or b < a:
        raise _UsageError(f"invalid frame range {a}..{b}")
    return a, b


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quatdmd",
        description="Background extraction from image sequences via "
                    "dynamic mode decomposition.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p):
        p.add_argument("--input", help="frame directory or glob pattern")
        p.add_argument("--frames", help="inclusive zero-based range A..B "
                                        "within the sorted listing")
        p.add_argument("--stride", type=int, help="keep every N-th frame")
        p.add_argument("--downsample", type=int,
                       help="block-average spatial factor")
        p.add_argument("--trim-tol", type=float, dest="trim_tol",
                       help="drop static leading/trailing frames whose "
                            "successive difference stays within this")
        p.add_argument("--rank", type=int, help="truncation rank")
        p.add_argument("--method", choices=_METHODS)
        p.add_argument("--dt", type=float, help="seconds between frames")
        p.add_argument("--config", help="JSON file of defaults; flags win")

    extract = sub.add_parser("extract", help="write background.png and "
                                             "report.json")
    add_run_flags(extract)
    extract.add_argument("--out", help="output directory")
    extract.add_argument("--gt", help="ground-truth image to score against")
    extract.add_argument("--tau", type=float,
                         help="error-pixel threshold in gray levels")
    extract.add_argument("--dump-foreground", action="store_true",
                         dest="dump_foreground", default=None)
    extract.add_argument("--dump-spectrum", action="store_true",
                         dest="dump_spectrum", default=None)
    extract.add_argument("--stable-output", action="store_true",
                         dest="stable_output", default=None,
                         help="omit timings so identical inputs give "
                              "byte-identical reports")

    evaluate = sub.add_parser("evaluate", help="score a background image "
                                               "against ground truth")
    evaluate.add_argument("gt", help="ground-truth image path")
    evaluate.add_argument("candidate", help="candidate background image path")
    evaluate.add_argument("--tau", type=float,
                          help="error-pixel threshold in gray levels")

    inspect = sub.add_parser("inspect", help="print the fitted spectrum "
                                             "as JSON")
    add_run_flags(inspect)
    return parser


_CONFIG_KEYS = ("input", "frames", "stride", "downsample", "trim_tol", "rank",
                "method", "dt", "out", "gt", "tau", "dump_foreground",
                "dump_spectrum", "stable_output")


def _load_config(args: argparse.Namespace) -> RunConfig:
    """Merge flags over config-file values over built-in defaults."""
    values = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise _UsageError(f"cannot read config {args.config!r}: {exc}")
        if not isinstance(loaded, dict):
            raise _UsageError("config file must hold a JSON object")
        unknown = sorted(set(loaded) - set(_CONFIG_KEYS))
        if unknown:
            raise _UsageError(f"unknown config keys: {', '.join(unknown)}")
        values.update(loaded)
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag

    if "input" not in values or values["input"] in (None, ""):
        raise _UsageError("an input directory or glob is required "
                          "(--input or config file)")
    if values.get("frames") is not None:
        values["frames"] = _parse_frames(values["frames"])

    defaults = RunConfig(input="")
    config = RunConfig(**{key: values.get(key, getattr(defaults, key))
                          for key in _CONFIG_KEYS})
    config.validate()
    return config


def _ingest(config: RunConfig, timings: dict) -> FrameStack:
    started = time.perf_counter()
    stack = load_sequence(config.input, frame_range=config.frames,
                          stride=config.stride, dt=config.dt)
    if config.trim_tol is not None:
        stack = trim_static_margins(stack, tolerance=config.trim_tol)
    if config.downsample > 1:
        stack = downsample(stack, config.downsample)
    timings["ingest"] = time.perf_counter() - started
    return stack


def _fit(config: RunConfig, stack: FrameStack, want_foreground: bool,
         timings: dict) -> BackgroundResult:
    started = time.perf_counter()
    if config.method == "qdmd":
        result = qdmd_background(stack, rank=config.rank,
                                 want_foreground=want_foreground)
    else:
        mode = "grayscale" if config.method == "dmd-gray" else "per-channel"
        result = dmd_on_video(stack, mode=mode, rank=config.rank,
                              want_foreground=want_foreground)
    timings["model"] = time.perf_counter() - started
    return result


def _spectrum_rows(info: dict) -> list[dict]:
    """Modes sorted by |omega| ascending, largest amplitude first on ties."""
    order = np.lexsort((-np.asarray(info["amplitude_magnitudes"]),
                        np.asarray(info["omega_magnitudes"])))
    return [{"index": int(i),
             "eigenvalue": info["eigenvalues"][i],
             "omega_magnitude": info["omega_magnitudes"][i],
             "amplitude_magnitude": info["amplitude_magnitudes"][i],
             "background": int(i) == info["background_index"]}
            for i in order]


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _fail(code: int, stage: str, exc: Exception) -> int:
    print(f"quatdmd: {stage}: {exc}", file=sys.stderr)
    return code


def _cmd_extract(args: argparse.Namespace) -> int:
    config = _load_config(args)
    if not config.out:
        raise _UsageError("--out is required for extract")
    timings: dict[str, float] = {}

    try:
        stack = _ingest(config, timings)
    except (SequenceLoadError, OSError, ValueError) as exc:
        return _fail(EXIT_INGEST, "ingest", exc)

    try:
        result = _fit(config, stack, config.dump_foreground, timings)
    except _MODEL_ERRORS as exc:
        return _fail(EXIT_MODEL, "model", exc)

    metrics = None
    if config.gt:
        started = time.perf_counter()
        try:
            gt_image = load_image(config.gt)
            metrics = evaluate_pair(gt_image, result.image, tau=config.tau)
        except (SequenceLoadError, OSError, ShapeMismatchError,
                ValueError) as exc:
            return _fail(EXIT_METRICS, "metrics", exc)
        timings["metrics"] = time.perf_counter() - started

    report = {
        "method": result.method,
        "frames": {
            "count": stack.frame_count,
            "width": stack.width,
            "height": stack.height,
            "first": stack.source_ids[0],
            "last": stack.source_ids[-1],
        },
        "channels": result.channels,
        "scalar_residual": result.scalar_residual,
        "scalar_norm_fraction": result.scalar_norm_fraction,
        "metrics": metrics.as_dict() if metrics is not None else None,
    }

    started = time.perf_counter()
    try:
        os.makedirs(config.out, exist_ok=True)
        background_path = os.path.join(config.out, "background.png")
        write_png(background_path, result.image)
        written = [background_path]

        if config.dump_foreground:
            for l, frame in enumerate(result.foreground_frames):
                path = os.path.join(config.out, f"foreground_{l:04d}.png")
                write_png(path, frame)
                written.append(path)
        if config.dump_spectrum:
            spectrum = {label: _spectrum_rows(info)
                        for label, info in result.channels.items()}
            path = os.path.join(config.out, "spectrum.json")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(_json_text({"method": result.method,
                                     "channels": spectrum}))
            written.append(path)

        timings["write"] = time.perf_counter() - started
        if not config.stable_output:
            report["timings_seconds"] = timings
        report_path = os.path.join(config.out, "report.json")
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write(_json_text(report))
        written.append(report_path)
    except OSError as exc:
        return _fail(EXIT_WRITE, "write", exc)

    for path in written:
        print(path)
    return EXIT_OK


def _cmd_evaluate(args: argparse.Namespace) -> int:
    tau = 20.0 if args.tau is None else args.tau
    if tau < 0:
        raise _UsageError(f"tau must be nonnegative, got {tau}")
    try:
        gt_image = load_image(args.gt)
        candidate = load_image(args.candidate)
    except (SequenceLoadError, OSError) as exc:
        return _fail(EXIT_INGEST, "load", exc)
    try:
        report = evaluate_pair(gt_image, candidate, tau=tau)
    except (ShapeMismatchError, ValueError) as exc:
        return _fail(EXIT_METRICS, "metrics", exc)
    sys.stdout.write(_json_text(report.as_dict()))
    return EXIT_OK


def _cmd_inspect(args: argparse.Namespace) -> int:
    config = _load_config(args)
    timings: dict[str, float] = {}
    try:
        stack = _ingest(config, timings)
    except (SequenceLoadError, OSError, ValueError) as exc:
        return _fail(EXIT_INGEST, "ingest", exc)
    try:
        result = _fit(config, stack, False, timings)
    except _MODEL_ERRORS as exc:
        return _fail(EXIT_MODEL, "model", exc)
    spectrum = {label: _spectrum_rows(info)
                for label, info in result.channels.items()}
    sys.stdout.write(_json_text({"method": result.method,
                                 "channels": spectrum}))
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = {"extract": _cmd_extract, "evaluate": _cmd_evaluate,
               "inspect": _cmd_inspect}[args.command]
    try:
        return handler(args)
    except _UsageError as exc:
        return _fail(EXIT_USAGE, "usage", exc)


def entry() -> None:
    raise SystemExit(main())
