"""Sweep configuration, CSV output, and the ``simulate`` command line.

A sweep config is a YAML document (see configs/ for commented examples):

    spreading_factors: [7, 12]        # list of S values, each in 7..12
    payload_bytes: [1]                # list of B values (bytes >= 1)
    covariance_qs: [1.0, 0.99994]     # list of q values in [0, 1]
    snr_db: {start: -30, stop: 5, step: 1}   # or an explicit list
    trials: 50000                     # optional, default 50000
    master_seed: 1                    # optional, default 0
    channel_kind: correlated_rayleigh # optional; or awgn
    sweep_axis: snr                   # optional: snr | q | payload
    bandwidth_hz: 125000.0            # optional, default 125 kHz

The grid is the Cartesian product of the four axes, expanded in
(spreading_factors, payload_bytes, covariance_qs, snr_db) order.  Each
grid point gets its own seed derived from (master_seed, point_index);
that derived seed is what lands in the row's master_seed column, so any
single row can be reproduced with estimate_fer alone, without the
config.  Rows are flushed as they complete; re-running with an existing
output file validates the header, skips the grid points already present,
and appends the rest, so interrupted sweeps resume where they stopped.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, asdict

import numpy as np
import yaml

from . import __version__
from .simulator import CHANNEL_KINDS, TrialPoint, estimate_fer

CSV_HEADER = (
    "spreading_factor,payload_bytes,covariance_q,snr_db,trials,frame_errors,"
    "fer,ci_low,ci_high,symbol_errors,symbols_total,master_seed"
)

SWEEP_AXES = ("snr", "q", "payload")

# The CLI enforces the LoRa range even though the library accepts more.
LORA_MIN_SF = 7
LORA_MAX_SF = 12

_CONFIG_KEYS = {
    "spreading_factors",
    "payload_bytes",
    "covariance_qs",
    "snr_db",
    "trials",
    "master_seed",
    "channel_kind",
    "sweep_axis",
    "bandwidth_hz",
}


class ConfigError(ValueError):
    """A sweep config failed validation; the message names the field."""


@dataclass(frozen=True)
class SweepConfig:
    spreading_factors: tuple[int, ...]
    payload_bytes: tuple[int, ...]
    covariance_qs: tuple[float, ...]
    snr_db: tuple[float, ...]
    trials: int = 50_000
    master_seed: int = 0
    channel_kind: str = "correlated_rayleigh"
    sweep_axis: str = "snr"
    bandwidth_hz: float = 125e3

    def grid(self) -> list[TrialPoint]:
        """All grid points in deterministic output order, seeds attached."""
        points = []
        index = 0
        for sf in self.spreading_factors:
            for b in self.payload_bytes:
                for q in self.covariance_qs:
                    for snr in self.snr_db:
                        points.append(
                            TrialPoint(
                                spreading_factor=sf,
                                payload_bytes=b,
                                covariance_q=q,
                                snr_db=snr,
                                trials=self.trials,
                                master_seed=_point_seed(self.master_seed, index),
                                channel_kind=self.channel_kind,
                            )
                        )
                        index += 1
        return points


def _point_seed(master_seed: int, point_index: int) -> int:
    seq = np.random.SeedSequence(master_seed, spawn_key=(point_index,))
    return int(seq.generate_state(1, np.uint64)[0])


def _expect_list(raw: dict, key: str, kind, lo=None, hi=None) -> tuple:
    try:
        values = raw[key]
    except KeyError:
        raise ConfigError(f"{key}: missing required field") from None
    if not isinstance(values, (list, tuple)) or len(values) == 0:
        raise ConfigError(f"{key}: must be a non-empty list")
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{key}: {v!r} is not a number")
        v = kind(v)
        if (lo is not None and v < lo) or (hi is not None and v > hi):
            raise ConfigError(f"{key}: {v} outside allowed range [{lo}, {hi}]")
        out.append(v)
    return tuple(out)


def _expand_snr(raw) -> tuple[float, ...]:
    if isinstance(raw, (list, tuple)):
        if len(raw) == 0:
            raise ConfigError("snr_db: must be a non-empty list")
        values = []
        for v in raw:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"snr_db: {v!r} is not a number")
            if math.isnan(float(v)) or math.isinf(float(v)):
                raise ConfigError(f"snr_db: {v!r} is not finite")
            values.append(float(v))
        return tuple(values)
    if isinstance(raw, dict):
        extra = set(raw) - {"start", "stop", "step"}
        if extra:
            raise ConfigError(f"snr_db: unknown range keys {sorted(extra)}")
        try:
            start, stop, step = (float(raw[k]) for k in ("start", "stop", "step"))
        except KeyError as missing:
            raise ConfigError(f"snr_db: range needs start/stop/step, missing {missing}")
        if step <= 0:
            raise ConfigError(f"snr_db: step must be positive, got {step}")
        if stop < start:
            raise ConfigError(f"snr_db: stop {stop} is below start {start}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(start + k * step for k in range(count))
    raise ConfigError("snr_db: must be a list or a {start, stop, step} range")


def parse_config(text: str) -> SweepConfig:
    """Parse and validate a YAML sweep config; unknown keys are rejected."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a YAML mapping of fields")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    sfs = _expect_list(raw, "spreading_factors", int, LORA_MIN_SF, LORA_MAX_SF)
    payloads = _expect_list(raw, "payload_bytes", int, lo=1)
    qs = _expect_list(raw, "covariance_qs", float, 0.0, 1.0)
    if "snr_db" not in raw:
        raise ConfigError("snr_db: missing required field")
    snrs = _expand_snr(raw["snr_db"])

    trials = raw.get("trials", 50_000)
    if isinstance(trials, bool) or not isinstance(trials, int) or trials < 1:
        raise ConfigError(f"trials: must be a positive integer, got {trials!r}")
    seed = raw.get("master_seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"master_seed: must be a nonnegative integer, got {seed!r}")
    kind = raw.get("channel_kind", "correlated_rayleigh")
    if kind not in CHANNEL_KINDS:
        raise ConfigError(f"channel_kind: must be one of {CHANNEL_KINDS}, got {kind!r}")
    axis = raw.get("sweep_axis", "snr")
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep_axis: must be one of {SWEEP_AXES}, got {axis!r}")
    bandwidth = raw.get("bandwidth_hz", 125e3)
    if isinstance(bandwidth, bool) or not isinstance(bandwidth, (int, float)) or bandwidth <= 0:
        raise ConfigError(f"bandwidth_hz: must be positive, got {bandwidth!r}")

    return SweepConfig(
        spreading_factors=sfs,
        payload_bytes=payloads,
        covariance_qs=qs,
        snr_db=snrs,
        trials=trials,
        master_seed=seed,
        channel_kind=kind,
        sweep_axis=axis,
        bandwidth_hz=float(bandwidth),
    )


def format_row(est) -> str:
    """One CSV row, formatted identically on every platform/run."""
    p = est.point
    return ",".join(
        [
            str(p.spreading_factor),
            str(p.payload_bytes),
            f"{p.covariance_q:g}",
            f"{p.snr_db:g}",
            str(est.trials),
            str(est.frame_errors),
            f"{est.fer:.6g}",
            f"{est.ci_low:.6g}",
            f"{est.ci_high:.6g}",
            str(est.symbol_errors),
            str(est.symbols_total),
            str(p.master_seed),
        ]
    )


def _count_existing_rows(path: str) -> int:
    """Rows already completed in a partial output file (resume support).

    Validates the header and truncates a trailing partial line if the
    previous run died mid-write.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if not data:
        return 0
    complete, _, partial = data.rpartition(b"\n")
    if partial:
        with open(path, "wb") as fh:
            if complete:
                fh.write(complete + b"\n")
        data = complete + b"\n" if complete else b""
    if not data:
        return 0
    lines = data.decode("utf-8").splitlines()
    if lines[0] != CSV_HEADER:
        raise ConfigError(
            f"existing output file {path} does not start with the expected CSV header"
        )
    return len(lines) - 1


def run_sweep(
    config: SweepConfig,
    out_path: str,
    workers: int = 1,
    progress: bool = False,
    target_fer: float | None = None,
    log=sys.stderr,
) -> list:
    """Evaluate every grid point and stream rows to ``out_path``.

    Returns the FerEstimate list for the points run in this invocation.
    A metadata sidecar (config echo, seed, version, wall time) is written
    next to the CSV as ``<out_path>.meta.json``.
    """
    points = config.grid()
    skip = 0
    if os.path.exists(out_path) and os.path.getsize(out_path) > 0:
        skip = _count_existing_rows(out_path)
        if skip > len(points):
            raise ConfigError(
                f"existing output file has {skip} rows but the grid has "
                f"only {len(points)} points; refusing to append"
            )
        if skip and progress:
            print(f"resuming: {skip}/{len(points)} rows already present", file=log)

    t0 = time.monotonic()
    results = []
    mode = "a" if skip else "w"
    with open(out_path, mode, encoding="utf-8", newline="") as fh:
        if not skip:
            fh.write(CSV_HEADER + "\n")
            fh.flush()
        for idx in range(skip, len(points)):
            point = points[idx]
            est = estimate_fer(point, workers=workers)
            results.append(est)
            fh.write(format_row(est) + "\n")
            fh.flush()
            if progress:
                print(
                    f"[{idx + 1}/{len(points)}] S={point.spreading_factor} "
                    f"B={point.payload_bytes} q={point.covariance_q:g} "
                    f"snr={point.snr_db:g} dB: fer={est.fer:.4g} "
                    f"({est.frame_errors}/{est.trials})",
                    file=log,
                )
            if target_fer is not None and est.ci_high > 3.0 * target_fer:
                print(
                    f"warning: point S={point.spreading_factor} "
                    f"B={point.payload_bytes} q={point.covariance_q:g} "
                    f"snr={point.snr_db:g} dB resolves FER only down to "
                    f"{est.ci_high:.3g} (95% upper bound) with {est.trials} "
                    f"trials; target was {target_fer:g}",
                    file=log,
                )

    meta = {
        "config": asdict(config),
        "csv": os.path.basename(out_path),
        "tool": "chirpsim",
        "version": __version__,
        "points_total": len(points),
        "points_run": len(results),
        "points_skipped": skip,
        "workers": workers,
        "wall_time_s": round(time.monotonic() - t0, 3),
        "finished_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    with open(out_path + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return results


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Run a chirp-spread-spectrum FER sweep and write CSV results.",
    )
    parser.add_argument("--config", required=True, help="YAML sweep config path")
    parser.add_argument("--out", required=True, help="output CSV path")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config's master_seed")
    parser.add_argument("--trials", type=int, default=None,
                        help="override the config's trials per point")
    parser.add_argument("--workers", type=int, default=1,
                        help="parallel worker processes per point (default 1)")
    parser.add_argument("--progress", action="store_true",
                        help="print per-point progress to stderr")
    parser.add_argument("--target-fer", type=float, default=None,
                        help="warn when a point's 95%% upper bound exceeds "
                             "3x this target")
    args = parser.parse_args(argv)

    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = parse_config(fh.read())
        if args.seed is not None:
            config = _replace(config, master_seed=args.seed)
        if args.trials is not None:
            if args.trials < 1:
                raise ConfigError(f"trials: must be >= 1, got {args.trials}")
            config = _replace(config, trials=args.trials)
        if args.workers < 1:
            raise ConfigError(f"workers: must be >= 1, got {args.workers}")
        run_sweep(
            config,
            args.out,
            workers=args.workers,
            progress=args.progress,
            target_fer=args.target_fer,
        )
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def _replace(config: SweepConfig, **kwargs) -> SweepConfig:
    fields = asdict(config)
    fields.update(kwargs)
    return SweepConfig(**fields)


if __name__ == "__main__":
    sys.exit(main())
