"""0D (space-clamped) membrane: fixed-step integration and sweeps.

The membrane obeys c_m * du/dt = -f(u, y) with the six ionic states
advanced alongside; schemes are classical RK4 (default, dt = 0.01 ms) and
explicit Euler (for parity with the tissue solver's ionic update).
"""

from __future__ import annotations

import csv
import os
import warnings
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from . import _kernels, ionic
from .params import AbetaParams, BaseParams, IonicState, SEIZURE_ONSET_STATE

SCHEMES = {"rk4": 0, "euler": 1}


class IntegrationDivergedError(RuntimeError):
    """The state left its validity region; carries the last valid time."""

    def __init__(self, t_last: float):
        super().__init__(f"integration diverged; last valid time {t_last:.6g} ms")
        self.t_last = t_last


@dataclass(frozen=True)
class OdeRun:
    """One 0D integration: initial data, grid, and parameters."""

    base: BaseParams
    abeta: AbetaParams
    u0: float = -67.0
    state0: IonicState = SEIZURE_ONSET_STATE
    dt: float = 0.01  # ms
    t_end: float = 60_000.0  # ms
    stride: int = 100  # record every `stride` steps
    scheme: str = "rk4"

    def validate(self) -> None:
        if self.dt <= 0:
            raise ValueError("dt must be > 0")
        if self.t_end < self.dt:
            raise ValueError("t_end must be >= dt")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        self.state0.validate()


@dataclass
class Trace:
    """Recorded samples of one 0D run (time in ms)."""

    t: np.ndarray
    u: np.ndarray
    ca_i: np.ndarray
    k_o: np.ndarray
    na_i: np.ndarray
    j_abeta: np.ndarray
    abeta: float = 0.0

    def __len__(self) -> int:
        return self.t.size


def integrate(run: OdeRun) -> Trace:
    """Integrate one run on a fixed grid; deterministic for fixed inputs."""
    run.validate()
    n_steps = int(round(run.t_end / run.dt))
    prm = ionic.pack_base(run.base, run.abeta)
    ab5 = ionic.pack_modifiers(run.abeta, run.base)
    rec, final, status = _kernels.integrate0d(
        run.u0, run.state0.as_array(), prm, ab5,
        run.dt, n_steps, run.stride, SCHEMES[run.scheme],
    )
    if status >= 0:
        raise IntegrationDivergedError((status - 1) * run.dt)
    t = np.arange(rec.shape[1]) * (run.dt * run.stride)
    return Trace(
        t=t, u=rec[0].copy(), ca_i=rec[1].copy(), k_o=rec[2].copy(),
        na_i=rec[3].copy(), j_abeta=rec[4].copy(), abeta=run.abeta.abeta,
    )


def sweep(abeta_values: Sequence[float], template: OdeRun) -> list[Trace]:
    """One trace per amyloid concentration, identical time grids.

    Honors ABSEIZE_THREADS for process fan-out; results keep input order.
    """
    values = list(abeta_values)
    if not values:
        raise ValueError("abeta_values must be nonempty")
    if any(v < 0 for v in values):
        raise ValueError("abeta values must be >= 0")
    runs = [
        replace(template, abeta=replace(template.abeta, abeta=float(v)))
        for v in values
    ]
    n_workers = int(os.environ.get("ABSEIZE_THREADS", "1"))
    if n_workers > 1 and len(runs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            return list(pool.map(integrate, runs))
    return [integrate(r) for r in runs]


@dataclass
class SpikeBurstMetrics:
    spike_times: np.ndarray  # ms
    bursts: list[tuple[float, float]]  # (first, last spike time) per burst
    burst_count: int
    mean_intraburst_freq: float  # Hz, over bursts with >= 2 spikes
    duty_cycle: float  # total burst span / trace span


def spike_burst_metrics(
    trace: Trace, spike_threshold: float = 0.0, burst_gap: float = 500.0
) -> SpikeBurstMetrics:
    """Threshold-crossing spikes, gap-clustered bursts, and duty cycle."""
    if len(trace) == 0:
        raise ValueError("empty trace")
    u, t = trace.u, trace.t
    up = np.flatnonzero((u[:-1] < spike_threshold) & (u[1:] >= spike_threshold))
    spike_times = t[up + 1]
    if spike_times.size == 0:
        return SpikeBurstMetrics(spike_times, [], 0, 0.0, 0.0)
    gaps = np.diff(spike_times)
    breaks = np.flatnonzero(gaps > burst_gap)
    starts = np.r_[0, breaks + 1]
    ends = np.r_[breaks, spike_times.size - 1]
    bursts = [(float(spike_times[s]), float(spike_times[e])) for s, e in zip(starts, ends)]
    span = float(t[-1] - t[0])
    total = sum(b1 - b0 for b0, b1 in bursts)
    n_sp = 0
    dur = 0.0
    for s, e, (b0, b1) in zip(starts, ends, bursts):
        if e > s:
            n_sp += e - s + 1
            dur += b1 - b0
    freq = 1000.0 * n_sp / dur if dur > 0 else 0.0
    return SpikeBurstMetrics(
        spike_times=spike_times,
        bursts=bursts,
        burst_count=len(bursts),
        mean_intraburst_freq=freq,
        duty_cycle=total / span if span > 0 else 0.0,
    )


@dataclass
class Attractor:
    """Post-transient trajectory in (ca_i, k_o, na_i) with u as color channel."""

    points: np.ndarray  # (n, 4): ca_i, k_o, na_i, u
    bounds: np.ndarray  # (2, 4): min / max per column


def attractor_export(trace: Trace, burn_in: float = 5000.0) -> Attractor:
    keep = trace.t >= burn_in
    if not keep.any():
        warnings.warn("burn-in covers the whole trace; attractor is empty")
        pts = np.empty((0, 4))
        return Attractor(points=pts, bounds=np.full((2, 4), np.nan))
    pts = np.column_stack([trace.ca_i[keep], trace.k_o[keep],
                           trace.na_i[keep], trace.u[keep]])
    bounds = np.vstack([pts.min(axis=0), pts.max(axis=0)])
    return Attractor(points=pts, bounds=bounds)


def write_trace_csv(trace: Trace, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "u", "ca_i", "k_o", "na_i", "j_abeta"])
        for row in zip(trace.t, trace.u, trace.ca_i, trace.k_o,
                       trace.na_i, trace.j_abeta):
            w.writerow([f"{v:.17g}" for v in row])


def write_attractor_csv(att: Attractor, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["ca_i", "k_o", "na_i", "u"])
        for row in att.points:
            w.writerow([f"{v:.17g}" for v in row])


def read_trace_csv(path) -> Trace:
    data = np.genfromtxt(path, delimiter=",", names=True)
    data = np.atleast_1d(data)
    return Trace(
        t=data["t"], u=data["u"], ca_i=data["ca_i"], k_o=data["k_o"],
        na_i=data["na_i"], j_abeta=data["j_abeta"],
    )
