"""Deterministic O(1)-per-step simulation over ring-buffered birth histories.

The continuous delay system is discretized with ``q`` steps per year:
age windows become step-count windows, the delay integrals become
sliding sums over ring buffers of per-step birth counts, and the price
equation becomes an explicit update clamped at zero.  A simulation is
fully determined by (parameters, seed, initial price), and two runs of
the same triple are bit-identical.

Two interchangeable stepping backends exist: a compiled Cython kernel
(``hogcycle._kernel``) and a pure-Python fallback
(``hogcycle._kernel_py``).  The compiled one is selected at import when
available; set ``HOGCYCLE_BACKEND=python`` (or pass ``backend=``) to
force the fallback.  Both produce bit-identical trajectories.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import _kernel_py
from .model import Parameters, seasonality
from .rng import Xoshiro256StarStar

try:
    from . import _kernel
except ImportError:  # extension not built; pure-Python kernel still works
    _kernel = None

#: trajectory variables recorded at every step, in column order
VARIABLES = ("N_r", "N_b", "S", "P", "B_r", "B_b")
TOTAL_VARIABLES = ("total_r", "total_b")

_BIRTH_LAW_CODES = {"proportional": 0, "appendix_literal": 1}
_FORCE_CODES = {"relative_spread": 0, "excess_over_supply": 1}


class SimulationFault(RuntimeError):
    """A step produced a non-finite value or hit a market-force singularity."""

    def __init__(self, step: int, reason: str):
        self.step = step
        self.reason = reason
        super().__init__(f"simulation fault at step {step}: {reason}")


def available_backends() -> tuple[str, ...]:
    return ("c", "python") if _kernel is not None else ("python",)


def default_backend() -> str:
    env = os.environ.get("HOGCYCLE_BACKEND")
    if env:
        return env
    return "c" if _kernel is not None else "python"


def get_backend(name: str | None = None):
    """Resolve a backend name ('c' or 'python') to its kernel module."""
    name = name or default_backend()
    if name in ("c", "compiled"):
        if _kernel is None:
            raise RuntimeError("compiled kernel not available; build the extension")
        return _kernel
    if name in ("python", "py"):
        return _kernel_py
    raise ValueError(f"unknown backend {name!r}")


@dataclass(frozen=True)
class DiscreteIndices:
    """Age windows converted to step counts.

    ``kA0 = max(1, nint(q*A0))`` and ``kA1 = max(kA0, nint(q*A1) - 1)``
    (animals die exactly at the upper age, so that step is excluded);
    the butchery window is treated identically.  The lower clamps keep
    the windows non-empty and strictly in the past.
    """

    kA0: int
    kA1: int
    kOmega0: int
    kOmega1: int

    def __post_init__(self):
        if not (1 <= self.kA0 <= self.kA1):
            raise ValueError(f"need 1 <= kA0 <= kA1, got {self.kA0}, {self.kA1}")
        if not (1 <= self.kOmega0 <= self.kOmega1):
            raise ValueError(
                f"need 1 <= kOmega0 <= kOmega1, got {self.kOmega0}, {self.kOmega1}"
            )

    @property
    def window_r(self) -> int:
        return self.kA1 - self.kA0 + 1

    @property
    def window_b(self) -> int:
        return self.kOmega1 - self.kOmega0 + 1

    @property
    def history_steps(self) -> int:
        """Number of pre-seeded birth steps (the longer of the two lookbacks)."""
        return max(self.kA1, self.kOmega1)

    @property
    def phase_dim(self) -> int:
        """History cells plus the price: the dimension of the state space."""
        return self.kA1 + self.kOmega1 + 1


def _nint(x: float) -> int:
    """Nearest integer, ties rounded up."""
    return int(math.floor(x + 0.5))


def discretize(params: Parameters) -> DiscreteIndices:
    """Convert the age windows of ``params`` to step-count windows."""
    q = params.q
    ka0 = max(1, _nint(q * params.A0))
    ka1 = max(ka0, _nint(q * params.A1) - 1)
    ko0 = max(1, _nint(q * params.Omega0))
    ko1 = max(ko0, _nint(q * params.Omega1) - 1)
    return DiscreteIndices(ka0, ka1, ko0, ko1)


@dataclass
class SimState:
    """Full dynamical state: birth rings, window sums, price, step counter.

    Ring buffers have one slot more than the maximal lookback so that a
    naive window recomputation is always possible; the slot of step
    ``s`` is ``s % len(ring)``.  ``sum_br``/``sum_bb`` always hold the
    window sums for the *next* step ``k + 1``.  Single-writer: one
    state must not be advanced from two threads.
    """

    indices: DiscreteIndices
    br: np.ndarray
    bb: np.ndarray
    sum_br: float
    sum_bb: float
    P: float
    k: int
    seed: int

    def window_sum_naive(self) -> tuple[float, float]:
        """Recompute both sliding sums from the rings (oracle for the
        incrementally maintained values)."""
        ix = self.indices
        nr = _kernel_py._window_sum(self.br.tolist(), self.k, ix.kA1, ix.kA0)
        nb = _kernel_py._window_sum(self.bb.tolist(), self.k, ix.kOmega1, ix.kOmega0)
        return nr, nb

    def copy(self) -> "SimState":
        return SimState(
            indices=self.indices,
            br=self.br.copy(),
            bb=self.bb.copy(),
            sum_br=self.sum_br,
            sum_bb=self.sum_bb,
            P=self.P,
            k=self.k,
            seed=self.seed,
        )


def init_history(
    indices: DiscreteIndices, seed: int, p_init: float = 1.0
) -> SimState:
    """Draw the seeded random initial birth history.

    Both histories are filled with ``max(kA1, kOmega1)`` i.i.d. draws
    each (reproducing line first, then butchery line, one PRNG stream)
    from U[0, 2/(kA1-kA0+1)), so the first mature population value has
    expectation close to 1, the density-dependence threshold.  The
    initial price is ``p_init``.  Bit-reproducible per seed.
    """
    lb = indices.history_steps
    bound = 2.0 / indices.window_r
    rng = Xoshiro256StarStar(seed)
    br_draws = [bound * rng.random() for _ in range(lb)]
    bb_draws = [bound * rng.random() for _ in range(lb)]

    br = np.zeros(indices.kA1 + 1)
    bb = np.zeros(indices.kOmega1 + 1)
    for s in range(max(1, lb - indices.kA1), lb + 1):
        br[s % len(br)] = br_draws[s - 1]
    for s in range(max(1, lb - indices.kOmega1), lb + 1):
        bb[s % len(bb)] = bb_draws[s - 1]

    sum_br = _kernel_py._window_sum(br.tolist(), lb, indices.kA1, indices.kA0)
    sum_bb = _kernel_py._window_sum(bb.tolist(), lb, indices.kOmega1, indices.kOmega0)
    if p_init < 0:
        raise ValueError(f"initial price must be >= 0, got {p_init}")
    return SimState(
        indices=indices,
        br=br,
        bb=bb,
        sum_br=sum_br,
        sum_bb=sum_bb,
        P=float(p_init),
        k=lb,
        seed=seed,
    )


def season_table(params: Parameters) -> np.ndarray:
    """Seasonal density sampled at the q year phases i/q."""
    return np.array(
        [seasonality(i / params.q, params.rho) for i in range(params.q)]
    )


@dataclass(frozen=True)
class RecordSpec:
    """What to record while stepping.

    ``grid_stride`` 0 disables grid recording; stride 1 records every
    step.  Start years skip the burn-in (a step is recorded from
    ``start_year * q`` on).  ``totals`` adds the whole-history
    population sums (ages 0..kA1 resp. 0..kOmega1) to every record.
    """

    grid_stride: int = 1
    yearly: bool = True
    grid_start_year: float = 0.0
    yearly_start_year: float = 0.0
    totals: bool = False


#: record nothing (state advance only)
RECORD_NOTHING = RecordSpec(grid_stride=0, yearly=False)


@dataclass
class Trajectory:
    """Recorded series; ``grid`` per recorded step, ``yearly`` per year.

    ``t_grid``/``t_yearly`` are in years (step index / q); the variable
    dicts map names from :data:`VARIABLES` (plus ``total_r``/``total_b``
    when recorded) to equally long arrays.
    """

    q: int
    t_grid: np.ndarray
    grid: dict[str, np.ndarray]
    t_yearly: np.ndarray
    yearly: dict[str, np.ndarray]

    def extend(self, other: "Trajectory") -> "Trajectory":
        if other.q != self.q:
            raise ValueError("cannot concatenate trajectories with different q")
        self.t_grid = np.concatenate([self.t_grid, other.t_grid])
        self.t_yearly = np.concatenate([self.t_yearly, other.t_yearly])
        for key in self.grid:
            self.grid[key] = np.concatenate([self.grid[key], other.grid[key]])
        for key in self.yearly:
            self.yearly[key] = np.concatenate([self.yearly[key], other.yearly[key]])
        return self


def _recorded_steps(k1: int, k2: int, start: int, stride: int) -> np.ndarray:
    """Steps in [k1, k2] that are >= start and divisible by stride."""
    if stride <= 0 or k2 < k1:
        return np.empty(0, dtype=np.int64)
    lo = max(k1, start)
    first = -(-lo // stride) * stride
    if first > k2:
        return np.empty(0, dtype=np.int64)
    return np.arange(first, k2 + 1, stride, dtype=np.int64)


_FAULT_REASONS = {
    _kernel_py.STATUS_NONFINITE: "non-finite value (parameter pathology)",
    _kernel_py.STATUS_FORCE_DOMAIN: "market force undefined (degenerate demand/supply)",
}


def advance(
    state: SimState,
    params: Parameters,
    years: float,
    record: RecordSpec = RECORD_NOTHING,
    backend: str | None = None,
) -> Trajectory:
    """Advance ``state`` by ``round(q * years)`` steps, recording per ``record``.

    Mutates ``state`` in place and returns the recorded trajectory
    (empty for ``years = 0``).  Raises :class:`SimulationFault` on
    non-finite values, leaving the state at the last completed step.
    """
    p = params
    ix = state.indices
    nsteps = int(round(p.q * years))
    if nsteps < 0:
        raise ValueError(f"years must be >= 0, got {years}")
    k1, k2 = state.k + 1, state.k + nsteps

    grid_ks = _recorded_steps(
        k1, k2, int(round(record.grid_start_year * p.q)), record.grid_stride
    )
    yearly_ks = (
        _recorded_steps(k1, k2, int(round(record.yearly_start_year * p.q)), p.q)
        if record.yearly
        else np.empty(0, dtype=np.int64)
    )
    n_tot_g = len(grid_ks) if record.totals else 0
    n_tot_y = len(yearly_ks) if record.totals else 0
    grid_out = np.empty((len(grid_ks), 6))
    yearly_out = np.empty((len(yearly_ks), 6))
    grid_tot = np.empty((n_tot_g, 2))
    yearly_tot = np.empty((n_tot_y, 2))

    kernel = get_backend(backend)
    state_vec = np.array([state.sum_br, state.sum_bb, state.P])
    status, fault_step, n_g, n_y = kernel.run_steps(
        state.br,
        state.bb,
        ix.kA0,
        ix.kA1,
        ix.kOmega0,
        ix.kOmega1,
        state_vec,
        state.k,
        nsteps,
        season_table(p),
        p.q,
        p.m0,
        p.gamma,
        p.lam,
        p.D0,
        p.alphaD,
        p.R0,
        p.R1,
        p.P0,
        p.d,
        int(p.R_const is not None),
        p.R_const if p.R_const is not None else 0.0,
        _BIRTH_LAW_CODES[p.birth_law],
        _FORCE_CODES[p.market_force],
        int(round(record.grid_start_year * p.q)),
        record.grid_stride,
        grid_out,
        grid_tot,
        int(round(record.yearly_start_year * p.q)),
        int(record.yearly),
        yearly_out,
        yearly_tot,
        int(record.totals),
    )
    state.sum_br, state.sum_bb, state.P = state_vec
    if status != 0:
        state.k = fault_step - 1
        raise SimulationFault(fault_step, _FAULT_REASONS[status])
    state.k += nsteps
    assert n_g == len(grid_ks) and n_y == len(yearly_ks)

    grid = {name: grid_out[:, i] for i, name in enumerate(VARIABLES)}
    yearly = {name: yearly_out[:, i] for i, name in enumerate(VARIABLES)}
    if record.totals:
        for i, name in enumerate(TOTAL_VARIABLES):
            grid[name] = grid_tot[:, i]
            yearly[name] = yearly_tot[:, i]
    return Trajectory(
        q=p.q,
        t_grid=grid_ks / p.q,
        grid=grid,
        t_yearly=yearly_ks / p.q,
        yearly=yearly,
    )


def step(state: SimState, params: Parameters, backend: str | None = None) -> SimState:
    """Advance ``state`` by a single step (no recording)."""
    ix = state.indices
    kernel = get_backend(backend)
    empty6 = np.empty((0, 6))
    empty2 = np.empty((0, 2))
    state_vec = np.array([state.sum_br, state.sum_bb, state.P])
    status, fault_step, _, _ = kernel.run_steps(
        state.br,
        state.bb,
        ix.kA0,
        ix.kA1,
        ix.kOmega0,
        ix.kOmega1,
        state_vec,
        state.k,
        1,
        season_table(params),
        params.q,
        params.m0,
        params.gamma,
        params.lam,
        params.D0,
        params.alphaD,
        params.R0,
        params.R1,
        params.P0,
        params.d,
        int(params.R_const is not None),
        params.R_const if params.R_const is not None else 0.0,
        _BIRTH_LAW_CODES[params.birth_law],
        _FORCE_CODES[params.market_force],
        0,
        0,
        empty6,
        empty2,
        0,
        0,
        empty6,
        empty2,
        0,
    )
    state.sum_br, state.sum_bb, state.P = state_vec
    if status != 0:
        raise SimulationFault(fault_step, _FAULT_REASONS[status])
    state.k += 1
    return state


def totals(state: SimState) -> tuple[float, float]:
    """Whole-history population sums (reproducing line, butchery line).

    Sums every ring slot, i.e. all animals aged 0..kA1 (resp.
    0..kOmega1) steps, in the same slot order the kernels use when
    recording totals.
    """
    tot_r = 0.0
    for v in state.br.tolist():
        tot_r += v
    tot_b = 0.0
    for v in state.bb.tolist():
        tot_b += v
    return tot_r, tot_b


def simulate(
    params: Parameters,
    seed: int,
    years: float,
    record: RecordSpec | None = None,
    p_init: float = 1.0,
    backend: str | None = None,
) -> Trajectory:
    """Run a fresh seeded simulation for ``years`` years.

    Equivalent to :func:`init_history` followed by :func:`advance`;
    deterministic in (params, seed, p_init).
    """
    state = init_history(discretize(params), seed, p_init)
    return advance(state, params, years, record or RecordSpec(), backend)


def final_time(params: Parameters, years: float) -> float:
    """Time (in years) reached by ``simulate(params, ., years)``.

    The history seeding occupies steps 1..max(kA1, kOmega1), so a run
    of ``years`` years ends at that offset plus ``years``.
    """
    ix = discretize(params)
    return (ix.history_steps + int(round(params.q * years))) / params.q


def average_breeder_fraction(
    params: Parameters,
    seed: int,
    years: float,
    start_year: float = 0.0,
    backend: str | None = None,
) -> float:
    """Empirical time average of R(P(t)) over [start_year, end of run].

    This is how the frozen breeder fraction of the decoupled-control
    preset (``R_const = 0.955``) is obtained from the coupled dynamics;
    the helper recomputes it for any window.
    """
    from .model import breeder_fraction

    record = RecordSpec(grid_stride=1, yearly=False, grid_start_year=start_year)
    traj = simulate(params, seed, years, record, backend=backend)
    p = params
    values = [breeder_fraction(x, p.R0, p.R1, p.P0, p.d) for x in traj.grid["P"]]
    return float(np.mean(values))
