"""Monte-Carlo simulation of the dominating radial coupling diffusion.

The distance ``rho_t`` between two mirror-coupled Brownian motions is
dominated by the one-dimensional diffusion

    d rho = b(rho) dt + sqrt(8) dW,

absorbed at 0 (the particles have met) and, as a modelling choice, reflected
at the diameter ``D``.  Reflection only slows contraction, so it is
conservative for the test ``E g(rho_t) <= g(rho_0) exp(-delta t)``.

Paths use Euler-Maruyama steps.  A step ending above 0 is still counted as
absorbed with the Brownian-bridge crossing probability
``exp(-2 x0 x1 / (8 dt))``, which removes the O(sqrt(dt)) bias of
discretely monitored absorption.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError
from .solver import CLIP, RadialOperator, TrialFunction

SIGMA2 = 8.0  # quadratic variation of 2 beta_t with <beta>_t = 2t
N_CHECKPOINTS = 32
PATH_CHUNK = 1024
STEP_BLOCK = 512

REFLECTION_NOTE = (
    "paths reflect at D; the dominating SDE has no barrier there, "
    "so reflection can only slow contraction (conservative for the <= test)"
)


@dataclass(frozen=True)
class SimConfig:
    rho0: float
    t_end: float
    dt: float = 1e-4
    paths: int = 10_000
    seed: int = 0
    workers: int = 1

    def validate(self, D: float) -> None:
        if not 0 < self.rho0 <= D:
            raise ConfigError(f"rho0 must lie in (0, D] = (0, {D!r}], got {self.rho0!r}")
        if not self.t_end > 0 or not self.dt > 0:
            raise ConfigError("t_end and dt must be positive")
        if self.dt > self.t_end / 100 * (1 + 1e-12):
            raise ConfigError("dt must be at most t_end / 100")
        if self.paths < 100:
            raise ConfigError("at least 100 paths are required")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    @property
    def n_steps(self) -> int:
        return int(math.ceil(self.t_end / self.dt - 1e-9))


@dataclass
class SimResult:
    times: np.ndarray
    mean_g: np.ndarray
    stderr: np.ndarray
    coupled_fraction: np.ndarray
    config: SimConfig
    trial: str = ""
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "config": {
                "rho0": self.config.rho0,
                "t_end": self.config.t_end,
                "dt": self.config.dt,
                "paths": self.config.paths,
                "seed": self.config.seed,
            },
            "trial": self.trial,
            "note": REFLECTION_NOTE,
            "rows": [
                {"t": t, "mean_g": m, "stderr": s, "coupled_fraction": c}
                for t, m, s, c in zip(
                    self.times.tolist(), self.mean_g.tolist(),
                    self.stderr.tolist(), self.coupled_fraction.tolist(),
                )
            ],
            "diagnostics": self.diagnostics,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "mean_g", "stderr", "coupled_fraction"])
        for row in zip(self.times, self.mean_g, self.stderr, self.coupled_fraction):
            writer.writerow([f"{float(v):.9g}" for v in row])
        return buf.getvalue()


def checkpoint_steps(n_steps: int, count: int = N_CHECKPOINTS) -> np.ndarray:
    """``count`` strictly increasing, roughly geometric step indices ending at ``n_steps``."""
    if n_steps < count:
        raise ConfigError(f"need at least {count} time steps")
    idx = np.rint(np.geomspace(n_steps / 64.0, n_steps, count)).astype(np.int64)
    idx[0] = max(idx[0], 1)
    for j in range(1, count):
        idx[j] = max(idx[j], idx[j - 1] + 1)
    idx[-1] = n_steps
    for j in range(count - 2, -1, -1):
        idx[j] = min(idx[j], idx[j + 1] - 1)
    return idx


def _path_generator(seed: int, path: int) -> np.random.Generator:
    # counter-based stream keyed by (seed, path index)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, path])))


def _run_chunk(op: RadialOperator, cfg: SimConfig, g, first: int, count: int, ckpt: np.ndarray):
    D = op.diameter
    lo, hi = D * CLIP, D * (1.0 - CLIP)
    dt = cfg.dt
    noise = math.sqrt(SIGMA2 * dt)
    gens = [_path_generator(cfg.seed, p) for p in range(first, first + count)]

    rho = np.full(count, float(cfg.rho0))
    coupled = np.zeros(count, dtype=bool)
    g_samples = np.empty((len(ckpt), count))
    coupled_counts = np.empty(len(ckpt), dtype=np.int64)
    large_steps = 0
    next_ck = 0
    step = 0
    n_steps = int(ckpt[-1])
    while step < n_steps:
        nb = min(STEP_BLOCK, n_steps - step)
        z = np.empty((count, nb))
        u = np.empty((count, nb))
        for i, gen in enumerate(gens):
            z[i] = gen.standard_normal(nb)
            u[i] = gen.random(nb)
        for j in range(nb):
            move = op.b(np.clip(rho, lo, hi)) * dt
            large_steps += int(np.count_nonzero(np.abs(move[~coupled]) > 0.1 * D))
            x1 = rho + move + noise * z[:, j]
            x1 = np.where(x1 > D, 2.0 * D - x1, x1)
            with np.errstate(over="ignore", under="ignore"):
                p_cross = np.exp(-2.0 * rho * np.maximum(x1, 0.0) / (SIGMA2 * dt))
            hit = (x1 <= 0.0) | (u[:, j] < p_cross)
            coupled |= hit
            rho = np.where(coupled, 0.0, x1)
            step += 1
            if next_ck < len(ckpt) and step == ckpt[next_ck]:
                g_samples[next_ck] = np.where(coupled, 0.0, g(rho))
                coupled_counts[next_ck] = np.count_nonzero(coupled)
                next_ck += 1

    mean = g_samples.mean(axis=1)
    m2 = ((g_samples - mean[:, None]) ** 2).sum(axis=1)
    return count, mean, m2, coupled_counts, large_steps


def _merge(a, b):
    na, ma, m2a, ca, la = a
    nb, mb, m2b, cb, lb = b
    n = na + nb
    d = mb - ma
    return n, ma + d * nb / n, m2a + m2b + d * d * na * nb / n, ca + cb, la + lb


def _tree_reduce(parts):
    # fixed pairwise order: the result does not depend on who computed each part
    while len(parts) > 1:
        nxt = [_merge(parts[i], parts[i + 1]) for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def simulate(op: RadialOperator, cfg: SimConfig, g: Optional[TrialFunction] = None) -> SimResult:
    """Simulate ``cfg.paths`` paths and record ``E g(rho_t)`` at 32 checkpoints.

    ``g`` defaults to ``sin(pi r / (2 D))``.  Output is a deterministic
    function of ``(op, cfg, g)``; ``cfg.workers`` does not affect it.
    """
    D = op.diameter
    cfg.validate(D)
    if g is None:
        g = TrialFunction.sine_halfpi(D)
    ckpt = checkpoint_steps(cfg.n_steps)
    starts = list(range(0, cfg.paths, PATH_CHUNK))
    jobs = [(s, min(PATH_CHUNK, cfg.paths - s)) for s in starts]

    def run(job):
        return _run_chunk(op, cfg, g, job[0], job[1], ckpt)

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(job) for job in jobs]
    n, mean, m2, coupled, large = _tree_reduce(parts)
    stderr = np.sqrt(m2 / (n - 1) / n)
    return SimResult(
        times=ckpt * cfg.dt,
        mean_g=mean,
        stderr=stderr,
        coupled_fraction=coupled / n,
        config=cfg,
        trial=g.describe(),
        diagnostics={"large_drift_steps": int(large), "n_steps": int(cfg.n_steps)},
    )


@dataclass
class ContractionReport:
    delta: float
    g_rho0: float
    rows: list
    passed: bool
    note: str = REFLECTION_NOTE

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "g_rho0": self.g_rho0,
            "passed": self.passed,
            "note": self.note,
            "checkpoints": self.rows,
        }


def contraction_check(
    op: RadialOperator, g: TrialFunction, delta: float, cfg: SimConfig,
    result: Optional[SimResult] = None,
) -> ContractionReport:
    """Check ``mean_g(t) <= g(rho0) exp(-delta t) + 3 stderr(t)`` at every checkpoint.

    Failures are report content, never exceptions.  A precomputed ``result``
    for the same ``(op, cfg, g)`` may be passed to skip the simulation.
    """
    if result is None:
        result = simulate(op, cfg, g)
    g0 = float(g(cfg.rho0))
    rows = []
    for t, m, se in zip(result.times.tolist(), result.mean_g.tolist(), result.stderr.tolist()):
        bound = g0 * math.exp(-delta * t)
        margin = bound + 3.0 * se - m
        rows.append({"t": t, "mean_g": m, "bound": bound, "stderr": se,
                     "margin": margin, "pass": bool(margin >= 0)})
    return ContractionReport(float(delta), g0, rows, all(r["pass"] for r in rows))


def decay_rate(result: SimResult) -> float:
    """Exponential rate from a weighted log-linear fit of ``mean_g`` against ``t``."""
    ok = (result.mean_g > 0) & (result.stderr > 0)
    t = result.times[ok]
    y = np.log(result.mean_g[ok])
    w = result.mean_g[ok] / result.stderr[ok]
    if t.size < 2:
        raise ConfigError("not enough positive checkpoints for a rate fit")
    slope, _ = np.polyfit(t, y, 1, w=w)
    return float(-slope)
