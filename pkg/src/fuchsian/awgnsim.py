"""AWGN channel Monte-Carlo for Fuchsian codebooks.

Trial i draws everything (message, then two normals) from its own stream
``default_rng([seed, i])``, so serial and sharded runs agree exactly.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .codec import Codebook, decode, metrics, nearest

SIM_COLUMNS = ("group", "preset", "sigma", "trials", "seed", "errors", "erasures", "ser",
               "ml_agreement", "mean_iterations")


@dataclass(frozen=True)
class ChannelConfig:
    sigma: float
    seed: int = 0
    trials: int = 1000

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError("sigma must be nonnegative")
        if self.trials < 1:
            raise ValueError("trials must be positive")


@dataclass
class TrialReport:
    trials: int
    correct: int
    errors: int
    erasures: int
    ml_agreement: float
    mean_iterations: float
    sigma: float
    seed: int
    ml_fallback: bool = False

    @property
    def ser(self) -> float:
        """Share of trials whose decision is not the sent message (erasures included)."""
        return (self.errors + self.erasures) / self.trials

    def row(self, group: str = "", preset: str = "") -> dict:
        return {"group": group, "preset": preset, "sigma": self.sigma, "trials": self.trials,
                "seed": self.seed, "errors": self.errors, "erasures": self.erasures,
                "ser": self.ser, "ml_agreement": self.ml_agreement,
                "mean_iterations": self.mean_iterations}


def stream(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def transmit(x: complex, cfg: ChannelConfig, trial: int = 0, rng: np.random.Generator | None = None) -> complex:
    """y = x + sigma (g1 + i g2)."""
    rng = stream(cfg.seed, trial) if rng is None else rng
    g = rng.standard_normal(2)
    if cfg.sigma == 0:
        return complex(x)
    return complex(x) + cfg.sigma * complex(g[0], g[1])


def ml_decode(cb: Codebook, y: complex) -> int:
    return nearest(cb, complex(y))


def sigma_from_snr_db(cb: Codebook, snr_db: float) -> float:
    """Per-dimension sigma for SNR = avg_energy / (2 sigma^2)."""
    es = metrics(cb).avg_energy
    return math.sqrt(es / (2 * 10 ** (snr_db / 10)))


def snr_db(cb: Codebook, sigma: float) -> float:
    es = metrics(cb).avg_energy
    return 10 * math.log10(es / (2 * sigma**2)) if sigma > 0 else math.inf


def _chunk(cb: Codebook, cfg: ChannelConfig, start: int, stop: int, ml_fallback: bool):
    correct = errors = erasures = agree = iters = reduced = 0
    q = len(cb.entries)
    for i in range(start, stop):
        rng = stream(cfg.seed, i)
        m = int(rng.integers(q))
        y = transmit(cb.entries[m].codeword, cfg, rng=rng)
        r = decode(cb, y, ml_fallback=ml_fallback)
        if r.status in ("ok", "erasure"):
            iters += r.iterations
            reduced += 1
        if r.message is None:
            erasures += 1
        elif r.message == m:
            correct += 1
        else:
            errors += 1
        agree += r.message == ml_decode(cb, y)
    return correct, errors, erasures, agree, iters, reduced


def run_trials(cb: Codebook, cfg: ChannelConfig, ml_fallback: bool = False, workers: int = 1) -> TrialReport:
    n = cfg.trials
    if workers <= 1 or n < 2 * workers:
        parts = [_chunk(cb, cfg, 0, n, ml_fallback)]
    else:
        bounds = np.linspace(0, n, workers + 1).astype(int)
        with ProcessPoolExecutor(workers) as ex:
            futs = [ex.submit(_chunk, cb, cfg, int(a), int(b), ml_fallback)
                    for a, b in zip(bounds[:-1], bounds[1:])]
            parts = [f.result() for f in futs]
    c, e, x, ag, it, red = (sum(p[k] for p in parts) for k in range(6))
    return TrialReport(n, c, e, x, ag / n, it / red if red else math.nan, cfg.sigma, cfg.seed, ml_fallback)


def reports_csv(rows, header: str = "") -> str:
    buf = io.StringIO()
    if header:
        buf.write(header + "\n")
    w = csv.DictWriter(buf, fieldnames=SIM_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (format(v, ".17g") if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


__all__ = ["ChannelConfig", "TrialReport", "stream", "transmit", "ml_decode", "run_trials",
           "sigma_from_snr_db", "snr_db", "reports_csv"]
