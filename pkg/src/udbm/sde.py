"""Euler-Maruyama integration of the unitary Dyson Brownian motion.

    dx_i = (2 pi / sqrt(N)) dB_i + (2 pi^2 / N) sum_{j != i} cot((x_i - x_j) / 2) dt

Angles are kept on the lift x_1 < ... < x_N < x_1 + 2 pi. A step that
would leave the chamber is split in two halves along a Brownian bridge of
its increment, down to ``DT_MIN``; below that the sub-step is dropped and
counted as a stall.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.accel import njit, prange
from ..core.config import settings
from ..core.errors import InvalidArgumentError
from ..core.logging import stage

logger = logging.getLogger(__name__)

CHUNK_PATHS = 1024
BOUNDARY_GAP = 1e-12


@dataclass
class DysonState:
    angles: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.angles = np.asarray(self.angles, dtype=np.float64)
        if self.angles.ndim != 1 or self.angles.size < 1:
            raise InvalidArgumentError("angles must be a non-empty vector", shape=self.angles.shape)

    @property
    def N(self) -> int:
        return self.angles.shape[0]

    def on_boundary(self) -> bool:
        return min_gap(self.angles) <= BOUNDARY_GAP

    def projected(self) -> np.ndarray:
        """Sorted angles in [0, 2 pi)."""
        return np.sort(np.mod(self.angles, 2 * np.pi))


def min_gap(x: np.ndarray) -> float:
    if x.shape[0] == 1:
        return 2 * np.pi
    gaps = np.diff(x)
    return float(min(gaps.min(), x[0] + 2 * np.pi - x[-1]))


def canonical_start(angles: Sequence[float]) -> np.ndarray:
    """Sorted lift of an arbitrary angle tuple."""
    return np.sort(np.mod(np.asarray(angles, dtype=np.float64), 2 * np.pi))


def diffusion(N: int) -> float:
    return 2 * np.pi / math.sqrt(N)


def drift_scale(N: int) -> float:
    return 2 * np.pi ** 2 / N


# --- compiled kernels ---

@njit(cache=True)
def _in_chamber(y):
    N = y.shape[0]
    for i in range(N - 1):
        if not y[i + 1] > y[i]:
            return False
    return y[N - 1] < y[0] + 2 * math.pi


@njit(cache=True)
def _propose(x, dt, w, sigma, coef, y):
    N = x.shape[0]
    for i in range(N):
        s = 0.0
        for j in range(N):
            if j != i:
                d = 0.5 * (x[i] - x[j])
                s += math.cos(d) / math.sin(d)
        y[i] = x[i] + coef * s * dt + sigma * w[i]
    return _in_chamber(y)


@njit(parallel=True, cache=True)
def _sweep(xs, dW, h, sigma, coef, record_at, steps, rec_ptr, out):
    P, N = xs.shape
    S = dW.shape[1]
    R = record_at.shape[0]
    for p in prange(P):
        y = np.empty(N)
        s = steps[p]
        r = rec_ptr[p]
        while True:
            while r < R and record_at[r] <= s:
                out[p, r] = xs[p]
                r += 1
            if s >= S:
                break
            if not _propose(xs[p], h, dW[p, s], sigma, coef, y):
                break
            xs[p, :] = y
            s += 1
        steps[p] = s
        rec_ptr[p] = r


# --- single steps ---

def _bridge_step(x: np.ndarray, h: float, w: np.ndarray, rng: np.random.Generator,
                 dt_min: float) -> Tuple[np.ndarray, int]:
    """Advance by h with Brownian increment w, bisecting rejected sub-steps."""
    N = x.shape[0]
    sigma, coef = diffusion(N), drift_scale(N)
    y = np.empty(N)
    stack: List[Tuple[float, np.ndarray]] = [(h, w)]
    stalls = 0
    while stack:
        tau, inc = stack.pop()
        if _propose(x, tau, inc, sigma, coef, y):
            x = y.copy()
            continue
        if tau / 2 < dt_min:
            stalls += 1
            continue
        first = inc / 2 + math.sqrt(tau / 4) * rng.standard_normal(N)
        stack.append((tau / 2, inc - first))
        stack.append((tau / 2, first))
    return x, stalls


def _ramp_up(x: np.ndarray, h: float, rng: np.random.Generator, dt_min: float) -> Tuple[np.ndarray, int]:
    """Leave a boundary start: noise-only steps from dt_min, doubling up to h.

    Noisy steps are reduced mod 2 pi before sorting, which keeps a start on
    the 0 / 2 pi seam inside the ordered chamber.
    """
    N = x.shape[0]
    sigma = diffusion(N)
    elapsed, tau, stalls = 0.0, dt_min, 0
    while min_gap(x) <= BOUNDARY_GAP and elapsed < h:
        tau = min(tau, h - elapsed)
        x = np.sort(np.mod(x + sigma * math.sqrt(tau) * rng.standard_normal(N), 2 * np.pi))
        elapsed += tau
        tau *= 2
    if elapsed < h:
        x, stalls = _bridge_step(x, h - elapsed, math.sqrt(h - elapsed) * rng.standard_normal(N), rng, dt_min)
    if min_gap(x) <= BOUNDARY_GAP:
        logger.warning("boundary start still degenerate after ramp-up over dt=%.3g", h)
    return x, stalls


def sde_step(state: DysonState, dt: float, rng: np.random.Generator,
             dt_min: Optional[float] = None) -> DysonState:
    if dt <= 0:
        raise InvalidArgumentError("time step must be positive", dt=dt)
    dt_min = settings.DT_MIN if dt_min is None else dt_min
    x = state.angles.copy()
    if state.on_boundary():
        x, stalls = _ramp_up(x, dt, rng, dt_min)
    else:
        x, stalls = _bridge_step(x, dt, math.sqrt(dt) * rng.standard_normal(x.shape[0]), rng, dt_min)
    if stalls:
        logger.debug("%d sub-steps dropped at dt_min=%.1e", stalls, dt_min)
    return DysonState(angles=x, time=state.time + dt)


# --- ensembles ---

@dataclass
class SDESpec:
    start: np.ndarray
    times: Sequence[float]
    n_paths: int
    dt: float
    seed: int
    starts: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        self.start = canonical_start(self.start)
        if self.dt <= 0:
            raise InvalidArgumentError("time step must be positive", dt=self.dt)
        if self.n_paths < 1:
            raise InvalidArgumentError("ensemble needs at least one path", n_paths=self.n_paths)
        if not len(self.times) or any(t < 0 for t in self.times):
            raise InvalidArgumentError("recording times must be a non-empty list of t >= 0", times=list(self.times))

    @property
    def N(self) -> int:
        return self.start.shape[0]

    @property
    def record_steps(self) -> np.ndarray:
        return np.array([int(round(t / self.dt)) for t in self.times], dtype=np.int64)


@dataclass
class SDERecord:
    spec: SDESpec
    angles: np.ndarray = field(repr=False)
    stalls: int = 0

    def rows(self) -> List[Tuple]:
        """(t, path_id, x_1..x_N) rows, angles reduced to [0, 2 pi) and sorted."""
        out = []
        for p in range(self.angles.shape[0]):
            for r, t in enumerate(self.spec.times):
                out.append((t, p, *np.sort(np.mod(self.angles[p, r], 2 * np.pi)).tolist()))
        out.sort(key=lambda row: (row[0], row[1]))
        return out

    def moment_mean(self, f, r: int) -> Tuple[complex, float]:
        """Ensemble mean and standard error of a vectorized observable at record r."""
        vals = np.asarray(f(self.angles[:, r, :]), dtype=np.complex128)
        P = vals.shape[0]
        err = math.sqrt((np.var(vals.real) + np.var(vals.imag)) / max(P - 1, 1))
        return complex(vals.mean()), err


def _path_rng(seed: int, path: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(path,)))


def simulate_paths(spec: SDESpec, dt_min: Optional[float] = None) -> SDERecord:
    """Independent SDE paths, one random stream per path.

    Each chunk runs the compiled sweep until every path either finishes or
    hits a rejected step; rejected steps are refined in Python with the
    path's own generator, so results do not depend on the thread count.
    """
    dt_min = settings.DT_MIN if dt_min is None else dt_min
    N, h = spec.N, spec.dt
    steps_at = spec.record_steps
    order = np.argsort(steps_at, kind="stable")
    record_at = steps_at[order]
    S = int(record_at[-1])
    sigma, coef = diffusion(N), drift_scale(N)
    out = np.empty((spec.n_paths, len(record_at), N))
    stalls = 0
    starts = None if spec.starts is None else np.sort(np.asarray(spec.starts, dtype=np.float64), axis=1)

    with stage(logger, "udbm-simulate", N=N, paths=spec.n_paths, steps=S, dt=h) as info:
        for lo in range(0, spec.n_paths, CHUNK_PATHS):
            hi = min(spec.n_paths, lo + CHUNK_PATHS)
            rngs = [_path_rng(spec.seed, p) for p in range(lo, hi)]
            dW = np.stack([g.standard_normal((max(S, 1), N)) * math.sqrt(h) for g in rngs])
            xs = np.tile(spec.start, (hi - lo, 1)) if starts is None else starts[lo:hi].copy()
            steps = np.zeros(hi - lo, dtype=np.int64)
            rec_ptr = np.zeros(hi - lo, dtype=np.int64)
            chunk = np.empty((hi - lo, len(record_at), N))

            # boundary starts leave the chamber wall before the compiled sweep
            for i in range(hi - lo):
                if S > 0 and min_gap(xs[i]) <= BOUNDARY_GAP:
                    while rec_ptr[i] < len(record_at) and record_at[rec_ptr[i]] == 0:
                        chunk[i, rec_ptr[i]] = xs[i]
                        rec_ptr[i] += 1
                    xs[i], k = _ramp_up(xs[i], h, rngs[i], dt_min)
                    stalls += k
                    steps[i] = 1

            while True:
                _sweep(xs, dW, h, sigma, coef, record_at, steps, rec_ptr, chunk)
                pending = np.flatnonzero(steps < S)
                if pending.size == 0:
                    break
                for i in pending:
                    xs[i], k = _bridge_step(xs[i].copy(), h, dW[i, steps[i]], rngs[i], dt_min)
                    stalls += k
                    steps[i] += 1
            out[lo:hi][:, order, :] = chunk
        info["stalls"] = stalls
    if stalls:
        logger.warning("%d sub-steps dropped at dt_min=%.1e", stalls, dt_min)
    return SDERecord(spec=spec, angles=out, stalls=stalls)
