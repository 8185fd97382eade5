"""Monte-Carlo FER/BER simulation of the IRA code against the Viterbi baseline."""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .baseline import DEFAULT_GENERATORS, ConvCodeSpec, conv_encode_batch, parse_generators, viterbi_decode
from .channel import add_noise, ebno_to_sigma, frame_rng, llr, modulate
from .code import IraCode, encode_batch, reference_code
from .decoder import DEFAULT_ITERS, decode_flooding, decode_turbo
from .errors import ParameterError

CSV_HEADER = ["system", "scheduling", "ebno_db", "frames", "bit_errors", "frame_errors",
              "ber", "fer", "iters", "seed"]

SYSTEMS = ("ira", "conv")
SCHEDULINGS = ("turbo", "flooding")
EB_ACCOUNTING = ("payload", "frame")


@dataclass(frozen=True)
class SweepConfig:
    system: str = "ira"
    scheduling: str = "turbo"
    iters: int = DEFAULT_ITERS
    snr_points: tuple[float, ...] = (1.0, 1.5, 2.0, 2.5, 3.0)
    max_frames: int = 10_000
    target_frame_errors: int = 100
    seed: int = 2024
    eb_accounting: str = "payload"
    workers: int = 1
    batch_frames: int = 256
    # decoder options
    early_stop: bool = True
    info_update: str = "edge"
    minsum: bool = False
    # code construction
    small: str = "ref"
    shift: str = "skip-first"
    pins: bool = True
    generators: tuple[int, ...] = DEFAULT_GENERATORS

    def __post_init__(self):
        if self.system not in SYSTEMS:
            raise ParameterError(f"system must be one of {SYSTEMS}")
        if self.scheduling not in SCHEDULINGS:
            raise ParameterError(f"scheduling must be one of {SCHEDULINGS}")
        if self.eb_accounting not in EB_ACCOUNTING:
            raise ParameterError(f"eb_accounting must be one of {EB_ACCOUNTING}")
        if not self.snr_points:
            raise ParameterError("snr_points is empty")
        if self.max_frames < 1 or self.iters < 1 or self.workers < 1 or self.batch_frames < 1:
            raise ParameterError("max_frames, iters, workers and batch_frames must be >= 1")
        object.__setattr__(self, "snr_points", tuple(float(x) for x in self.snr_points))

    @property
    def scheduling_label(self) -> str:
        return self.scheduling if self.system == "ira" else "viterbi"


@dataclass(frozen=True)
class SimResult:
    system: str
    scheduling: str
    ebno_db: float
    frames: int
    bit_errors: int
    frame_errors: int
    ber: float
    fer: float
    iters: int
    seed: int
    elapsed_seconds: float = field(default=0.0, compare=False)

    def row(self) -> list[str]:
        return [self.system, self.scheduling, repr(self.ebno_db), str(self.frames),
                str(self.bit_errors), str(self.frame_errors), repr(self.ber), repr(self.fer),
                str(self.iters), str(self.seed)]


class IraSystem:
    def __init__(self, config: SweepConfig, code: Optional[IraCode] = None):
        self.config = config
        self.code = code or reference_code(config.small, config.shift, config.pins)
        self.payload_bits = self.code.payload_bits
        self.channel_bits = self.code.n

    def eb_bits(self, accounting: str) -> int:
        return self.payload_bits if accounting == "payload" else self.code.k

    def encode(self, payload: np.ndarray) -> np.ndarray:
        return encode_batch(self.code, payload[None, :])[0]

    def decode(self, llrs: np.ndarray) -> np.ndarray:
        c = self.config
        if c.scheduling == "turbo":
            res = decode_turbo(self.code, llrs, c.iters, c.early_stop, c.minsum, c.info_update)
        else:
            res = decode_flooding(self.code, llrs, c.iters, c.early_stop, c.minsum)
        return res.hard_bits[self.code.free_positions]


class ConvSystem:
    def __init__(self, config: SweepConfig):
        self.spec = ConvCodeSpec(tuple(config.generators))
        self.payload_bits = self.spec.info_bits
        self.channel_bits = self.spec.coded_bits

    def eb_bits(self, accounting: str) -> int:
        return self.payload_bits

    def encode(self, payload: np.ndarray) -> np.ndarray:
        return conv_encode_batch(self.spec, payload)[0]

    def decode(self, llrs: np.ndarray) -> np.ndarray:
        return viterbi_decode(self.spec, llrs)


def make_system(config: SweepConfig):
    return IraSystem(config) if config.system == "ira" else ConvSystem(config)


def simulate_frame(system, sigma: float, seed: int, point: int, frame: int) -> int:
    """Bit errors in one frame; all randomness comes from the frame's own stream."""
    rng = frame_rng(seed, point, frame)
    payload = rng.integers(0, 2, system.payload_bits, dtype=np.uint8)
    y = add_noise(modulate(system.encode(payload)), sigma, rng)
    decoded = system.decode(llr(y, sigma))
    return int(np.count_nonzero(decoded != payload))


def run_point(config: SweepConfig, ebno_db: float, point_index: int = 0, system=None,
              sigma: Optional[float] = None) -> SimResult:
    """Simulate frames until ``max_frames`` or ``target_frame_errors`` is reached.

    Frames are simulated in batches (optionally on a thread pool) but tallied
    strictly in frame order, so the stopping frame and every count are the
    same for any worker count.
    """
    system = system or make_system(config)
    if sigma is None:
        sigma = ebno_to_sigma(ebno_db, system.eb_bits(config.eb_accounting), system.channel_bits)
    start = time.perf_counter()
    frames = bit_errors = frame_errors = 0
    pool = ThreadPoolExecutor(config.workers) if config.workers > 1 else None
    try:
        done = False
        while not done and frames < config.max_frames:
            batch = range(frames, min(frames + config.batch_frames, config.max_frames))
            job = lambda f: simulate_frame(system, sigma, config.seed, point_index, f)
            errs = list(pool.map(job, batch)) if pool else [job(f) for f in batch]
            for e in errs:
                frames += 1
                bit_errors += e
                frame_errors += e > 0
                if frame_errors >= config.target_frame_errors:
                    done = True
                    break
    finally:
        if pool:
            pool.shutdown()
    return SimResult(
        system=config.system, scheduling=config.scheduling_label, ebno_db=float(ebno_db),
        frames=frames, bit_errors=bit_errors, frame_errors=frame_errors,
        ber=bit_errors / (frames * system.payload_bits), fer=frame_errors / frames,
        iters=config.iters if config.system == "ira" else 0, seed=config.seed,
        elapsed_seconds=time.perf_counter() - start)


def run_sweep(config: SweepConfig, csv_path=None, svg_path=None, progress=None) -> list[SimResult]:
    system = make_system(config)
    results = []
    for i, ebno in enumerate(config.snr_points):
        res = run_point(config, ebno, i, system)
        results.append(res)
        if progress:
            progress(res)
    if csv_path is not None:
        write_csv(results, csv_path)
    if svg_path is not None:
        write_svg(results, svg_path)
    return results


def run_comparison(configs: Sequence[SweepConfig], csv_path=None, svg_path=None,
                   progress=None) -> list[SimResult]:
    results = []
    for cfg in configs:
        results.extend(run_sweep(cfg, progress=progress))
    if csv_path is not None:
        write_csv(results, csv_path)
    if svg_path is not None:
        write_svg(results, svg_path)
    return results


def write_csv(results: Sequence[SimResult], path) -> None:
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for r in results:
                w.writerow(r.row())
    except OSError as exc:
        raise ParameterError(f"cannot write {path}: {exc}") from exc


def read_csv(path) -> list[SimResult]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ParameterError(f"{path}: unexpected header {reader.fieldnames}")
        return [SimResult(
            system=row["system"], scheduling=row["scheduling"], ebno_db=float(row["ebno_db"]),
            frames=int(row["frames"]), bit_errors=int(row["bit_errors"]),
            frame_errors=int(row["frame_errors"]), ber=float(row["ber"]), fer=float(row["fer"]),
            iters=int(row["iters"]), seed=int(row["seed"])) for row in reader]


def crossing_ebno(results: Sequence[SimResult], target: float = 1e-2, metric: str = "fer"):
    """Eb/N0 where the curve first falls to `target`, by log-linear interpolation.

    Returns None when the curve never brackets the target.
    """
    pts = sorted((r.ebno_db, getattr(r, metric)) for r in results)
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if not y0 >= target >= y1 or y0 == y1:
            continue
        if y1 <= 0:
            # no errors at the upper point: fall back to linear interpolation
            return x0 + (y0 - target) / (y0 - y1) * (x1 - x0)
        t = (math.log10(y0) - math.log10(target)) / (math.log10(y0) - math.log10(y1))
        return x0 + t * (x1 - x0)
    return None


# ---------------------------------------------------------------- config files

_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}


def _coerce(name: str, text: str):
    text = text.strip()
    if name == "snr_points":
        return tuple(float(t) for t in text.replace(",", " ").split())
    if name == "generators":
        return parse_generators(text)
    if name in ("early_stop", "minsum", "pins"):
        try:
            return _BOOL[text.lower()]
        except KeyError:
            raise ParameterError(f"{name}: not a boolean: {text!r}") from None
    if name in ("iters", "max_frames", "target_frame_errors", "seed", "workers", "batch_frames"):
        return int(text)
    return text


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    names = {f.name for f in fields(SweepConfig)} | {"systems", "csv", "svg"}
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"config line {n}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in names:
            raise ParameterError(f"config line {n}: unknown key {key!r}")
        out[key] = val
    return out


def build_configs(settings: dict) -> tuple[list[SweepConfig], dict]:
    """SweepConfigs (one per system) plus output paths from raw string settings."""
    settings = dict(settings)
    outputs = {k: settings.pop(k) for k in ("csv", "svg") if k in settings}
    systems = settings.pop("systems", None) or settings.pop("system", "ira")
    kwargs = {k: _coerce(k, v) if isinstance(v, str) else v for k, v in settings.items()}
    configs = [SweepConfig(system=s.strip(), **kwargs)
               for s in str(systems).split(",") if s.strip()]
    return configs, outputs


def load_config(path) -> tuple[list[SweepConfig], dict]:
    return build_configs(parse_config_text(Path(path).read_text()))


# ---------------------------------------------------------------- SVG output

_COLORS = {"ira": "#1f77b4", "conv": "#d62728"}


def write_svg(results: Sequence[SimResult], path, width: int = 640, height: int = 440) -> None:
    """Log-scale FER (solid) and BER (dashed) curves, one polyline per system/metric."""
    left, right, top, bottom = 70, 150, 20, 50
    pw, ph = width - left - right, height - top - bottom
    xs = [r.ebno_db for r in results]
    ys = [v for r in results for v in (r.fer, r.ber) if v > 0]
    if not xs:
        raise ParameterError("no results to plot")
    x0, x1 = min(xs), max(xs)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    lo = math.floor(math.log10(min(ys))) if ys else -6
    hi = 0
    if lo >= hi:
        lo = hi - 1

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        y = max(y, 10.0 ** lo)
        return top + (hi - math.log10(y)) / (hi - lo) * ph

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'font-family="sans-serif" font-size="12">',
             f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for e in range(lo, hi + 1):
        y = py(10.0 ** e)
        parts.append(f'<line x1="{left}" y1="{y:.1f}" x2="{left + pw}" y2="{y:.1f}" '
                     f'stroke="#ddd"/>')
        parts.append(f'<text x="{left - 8}" y="{y + 4:.1f}" text-anchor="end">1e{e}</text>')
    for x in sorted(set(xs)):
        parts.append(f'<text x="{px(x):.1f}" y="{top + ph + 18}" text-anchor="middle">{x:g}</text>')
    parts.append(f'<text x="{left + pw / 2}" y="{height - 10}" text-anchor="middle">'
                 f'Eb/N0 (dB)</text>')
    groups = {}
    for r in results:
        groups.setdefault((r.system, r.scheduling), []).append(r)
    legend_y = top + 10
    for (system, sched), rs in groups.items():
        rs = sorted(rs, key=lambda r: r.ebno_db)
        color = _COLORS.get(system, "#2ca02c")
        for metric, dash in (("fer", ""), ("ber", ' stroke-dasharray="5,4"')):
            pts = " ".join(f"{px(r.ebno_db):.1f},{py(getattr(r, metric)):.1f}" for r in rs)
            label = f"{system}/{sched} {metric.upper()}"
            parts.append(f'<polyline data-series="{label}" points="{pts}" fill="none" '
                         f'stroke="{color}" stroke-width="2"{dash}/>')
            parts.append(f'<line x1="{left + pw + 10}" y1="{legend_y}" x2="{left + pw + 30}" '
                         f'y2="{legend_y}" stroke="{color}" stroke-width="2"{dash}/>')
            parts.append(f'<text x="{left + pw + 35}" y="{legend_y + 4}">{label}</text>')
            legend_y += 18
    parts.append("</svg>")
    try:
        Path(path).write_text("\n".join(parts) + "\n")
    except OSError as exc:
        raise ParameterError(f"cannot write {path}: {exc}") from exc
