"""Bifurcation sweeps: one scalar parameter, many independent runs.

Every grid value runs a full simulation from the *same* seeded initial
condition (the history draw depends only on the discrete age windows,
which the swept population parameters do not touch), then records the
post-transient yearly values.  Runs are independent, so they fan out
over a process pool; results are emitted in grid order, which keeps the
output bytes independent of the worker count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from multiprocessing import get_context

import numpy as np

from . import engine
from .model import Parameters

SWEEPABLE = ("gamma", "m0", "rho", "lam", "D0", "alphaD", "R0", "R1", "P0", "d")


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter scan definition.

    The grid is ``lo, lo+step, ..., hi`` accumulated in exact decimal
    arithmetic (no floating-point drift across 800 grid points).  For
    each value the model runs ``years`` years and the yearly samples
    with ``record_lo <= t <= record_hi`` are kept.
    """

    param_name: str
    lo: float
    hi: float
    step: float = 0.01
    years: int = 2000
    record_lo: int = 1500
    record_hi: int = 2000
    seed: int = 0

    def __post_init__(self):
        if self.param_name not in SWEEPABLE:
            raise ValueError(
                f"cannot sweep {self.param_name!r}; one of {SWEEPABLE}"
            )
        if self.hi < self.lo:
            raise ValueError(f"need lo <= hi, got [{self.lo}, {self.hi}]")
        if self.step <= 0:
            raise ValueError(f"step must be > 0, got {self.step}")
        if not (0 <= self.record_lo <= self.record_hi <= self.years):
            raise ValueError("need 0 <= record_lo <= record_hi <= years")

    def grid(self) -> list[float]:
        lo = Decimal(str(self.lo))
        hi = Decimal(str(self.hi))
        step = Decimal(str(self.step))
        values = []
        i = 0
        while True:
            v = lo + i * step
            if v > hi:
                break
            values.append(float(v))
            i += 1
        return values


@dataclass
class BifurcationData:
    """Sweep result: per grid value, the recorded yearly (t, N_r, P) rows.

    Faulted runs keep their place in the grid with ``faulted`` set and
    NaN-filled arrays, so a single pathological parameter value cannot
    abort a long sweep.
    """

    spec: SweepSpec
    param_values: list[float]
    t: list[np.ndarray]
    N_r: list[np.ndarray]
    P: list[np.ndarray]
    faulted: list[bool] = field(default_factory=list)

    def rows(self):
        """Yield (param_value, t, N_r, P) tuples in output order."""
        for i, v in enumerate(self.param_values):
            for j in range(len(self.t[i])):
                yield v, self.t[i][j], self.N_r[i][j], self.P[i][j]


def _run_one(args) -> tuple[np.ndarray, np.ndarray, np.ndarray, bool]:
    base, spec, value = args
    params = base.override(**{spec.param_name: value})
    record = engine.RecordSpec(
        grid_stride=0, yearly=True, yearly_start_year=spec.record_lo
    )
    n_expect = spec.record_hi - spec.record_lo + 1
    try:
        traj = engine.simulate(params, spec.seed, spec.years, record)
    except engine.SimulationFault:
        t = np.arange(spec.record_lo, spec.record_hi + 1, dtype=float)
        nan = np.full(n_expect, np.nan)
        return t, nan, nan.copy(), True
    keep = traj.t_yearly <= spec.record_hi
    return (
        traj.t_yearly[keep],
        traj.yearly["N_r"][keep],
        traj.yearly["P"][keep],
        False,
    )


def run_sweep(
    base_params: Parameters, spec: SweepSpec, jobs: int = 1
) -> BifurcationData:
    """Run the sweep, optionally on ``jobs`` worker processes.

    The output is ordered by grid value and is byte-deterministic
    regardless of ``jobs``.
    """
    values = spec.grid()
    work = [(base_params, spec, v) for v in values]
    if jobs > 1:
        with get_context("fork").Pool(processes=jobs) as pool:
            results = pool.map(_run_one, work, chunksize=1)
    else:
        results = [_run_one(w) for w in work]
    data = BifurcationData(
        spec=spec, param_values=values, t=[], N_r=[], P=[], faulted=[]
    )
    for t, nr, p, faulted in results:
        data.t.append(t)
        data.N_r.append(nr)
        data.P.append(p)
        data.faulted.append(faulted)
    return data


def cluster_count(values: np.ndarray, radius: float) -> int:
    """Number of single-linkage clusters of scalar ``values`` at ``radius``.

    Two values share a cluster when a chain of gaps each <= radius
    connects them; on sorted values that is one plus the number of
    consecutive gaps exceeding the radius.  Deterministic; used as the
    periodicity detector (a near-periodic orbit collapses onto a few
    clusters, a chaotic band does not).
    """
    v = np.sort(np.asarray(values, dtype=float))
    if len(v) == 0:
        raise ValueError("cluster_count needs at least one value")
    if radius <= 0:
        raise ValueError(f"radius must be > 0, got {radius}")
    return int(1 + np.count_nonzero(np.diff(v) > radius))


def periodic_window_fraction(
    data: BifurcationData,
    variable: str = "N_r",
    max_clusters: int = 8,
    radius_scale: float = 1e-3,
) -> float:
    """Fraction of grid values whose recorded orbit collapses onto
    ``<= max_clusters`` clusters (cluster radius = radius_scale times
    that value's recorded range; zero-range orbits count as collapsed).

    This quantifies how much of a bifurcation diagram consists of
    periodicity windows rather than chaotic bands.
    """
    series = {"N_r": data.N_r, "P": data.P}[variable]
    collapsed = 0
    usable = 0
    for vals, faulted in zip(series, data.faulted):
        if faulted:
            continue
        usable += 1
        rng = float(np.ptp(vals))
        if rng == 0.0:
            collapsed += 1
            continue
        if cluster_count(vals, radius_scale * rng) <= max_clusters:
            collapsed += 1
    if usable == 0:
        raise ValueError("no non-faulted grid values")
    return collapsed / usable
