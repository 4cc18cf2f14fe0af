"""Model coefficients, parameter presets, and derived a-priori bounds.

The dynamical system couples an age-structured breeding population with
a supply/demand price equation.  Newborn females are split between a
reproducing line and a butchery line according to the current meat
price; mature butchery-line animals form the market supply; the price
moves with the demand/supply imbalance.  This module holds everything
that is a pure function of the parameters:

* the coefficient functions (density-dependent fertility, seasonal
  birth synchronization, exponential demand, the breeder's
  price-to-reproduction strategy, and the market force);
* the named presets (``SP``, ``HH1``, ``TG``);
* the derived constants bounding every solution (population cap, supply
  band, Lipschitz constant, price band) together with the three
  persistence/attractor hypotheses that can be checked numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

BIRTH_LAWS = ("proportional", "appendix_literal")
MARKET_FORCES = ("relative_spread", "excess_over_supply")


class DomainError(ValueError):
    """An operation was evaluated outside its mathematical domain."""


@dataclass(frozen=True)
class Parameters:
    """All constants defining one experiment.

    Ages and times are in years, prices in price units, populations in
    animals (females unless noted).  ``q`` is the number of simulation
    steps per year.  When ``R_const`` is set, the breeder fraction is
    frozen at that value regardless of price (decoupled-control mode).

    ``birth_law`` selects how per-step births are computed:
    ``proportional`` (default) makes births proportional to the mature
    population times its density-dependent fertility — the law of the
    continuous model, and the only one sustaining the documented
    oscillatory regimes; ``appendix_literal`` drops the population
    factor and applies the fertility ceiling twice, which for supply
    dominated settings collapses the price to zero (kept as an explicit
    variant because its per-step bounds differ).
    """

    A0: float = 0.18        # age of first birth
    A1: float = 2.0         # maximal reproducing age
    Omega0: float = 0.18    # minimal butchery age
    Omega1: float = 2.0     # maximal butchery age
    m0: float = 5.0         # maximal yearly female fertility, pups/year
    gamma: float = 8.25     # density exponent of fertility
    rho: float = 0.79       # winter fraction of the year, in (0, 1)
    lam: float = 1.0        # market temperature, 1/year
    D0: float = 5.0         # demand at zero price, animals/year
    alphaD: float = 1.0     # demand decay rate, 1/price-unit
    R0: float = 0.0         # minimal breeder fraction
    R1: float = 1.0         # maximal breeder fraction
    P0: float = 1.0         # price threshold of the breeder strategy
    d: float = 4.0          # steepness of the breeder strategy
    birth_law: str = "proportional"
    market_force: str = "relative_spread"
    q: int = 100            # steps per year
    R_const: float | None = None

    def __post_init__(self):
        if not (0 < self.A0 < self.A1):
            raise DomainError(f"need 0 < A0 < A1, got A0={self.A0}, A1={self.A1}")
        if not (0 < self.Omega0 < self.Omega1):
            raise DomainError(
                f"need 0 < Omega0 < Omega1, got {self.Omega0}, {self.Omega1}"
            )
        if not (0.0 < self.rho < 1.0):
            raise DomainError(f"rho must be in (0,1), got {self.rho}")
        if not (0.0 <= self.R0 <= self.R1 <= 1.0):
            raise DomainError(f"need 0 <= R0 <= R1 <= 1, got {self.R0}, {self.R1}")
        if self.gamma < 1.0:
            raise DomainError(f"gamma must be >= 1, got {self.gamma}")
        if not (isinstance(self.q, int) and self.q >= 1):
            raise DomainError(f"q must be a positive integer, got {self.q!r}")
        for name in ("m0", "lam", "D0", "alphaD", "P0", "d"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.birth_law not in BIRTH_LAWS:
            raise DomainError(f"unknown birth_law {self.birth_law!r}")
        if self.market_force not in MARKET_FORCES:
            raise DomainError(f"unknown market_force {self.market_force!r}")
        if self.R_const is not None and not (0.0 <= self.R_const <= 1.0):
            raise DomainError(f"R_const must be in [0,1], got {self.R_const}")

    @property
    def delta_omega(self) -> float:
        return self.Omega1 - self.Omega0

    def breeder_bounds(self) -> tuple[float, float]:
        """Effective (lower, upper) bounds of the breeder fraction."""
        if self.R_const is not None:
            return self.R_const, self.R_const
        return self.R0, self.R1

    def override(self, **changes) -> "Parameters":
        return replace(self, **changes)


#: Standard setting, close to realistic pork values; the main chaotic regime.
SP = Parameters()

#: SP with the breeder fraction frozen at the long-run average of R(P(t))
#: observed in SP.  Decouples population from price; near-periodic orbit.
HH1 = SP.override(R_const=0.955)

#: Theory-guard setting: SP with a breeder floor and a large demand so that
#: all three attractor hypotheses hold (persistence, demand, supply).
TG = SP.override(R0=0.4, R1=0.9, D0=30.0)

PRESETS = {"SP": SP, "HH1": HH1, "TG": TG}


def fertility(N: float, m0: float, gamma: float) -> float:
    """Yearly female births per mature female at total population ``N``.

    ``m0 * max(N, 1)**(-gamma)``: constant below the crowding threshold,
    power-law decreasing above it.  Total on N >= 0.
    """
    return m0 * max(N, 1.0) ** (-gamma)


def seasonality(t: float, rho: float) -> float:
    """1-periodic birth-synchronization density at time ``t`` (years).

    Equal to ``1/(1-rho)`` during the birth season (year-fraction in
    [0, 1-rho)) and 0 during the winter fraction ``rho``; integrates to
    one over any whole year.
    """
    frac = t - math.floor(t)
    return 1.0 / (1.0 - rho) if frac < 1.0 - rho else 0.0


def demand(P: float, D0: float, alphaD: float) -> float:
    """Market demand at price ``P``: ``D0 * exp(-alphaD * P)``."""
    return D0 * math.exp(-alphaD * P)


def breeder_fraction(P: float, R0: float, R1: float, P0: float, d: float) -> float:
    """Fraction of newborn females sent to the reproducing line at price ``P``.

    ``R0 + (R1-R0) * f_d(P/P0)`` where ``f_d(x) = x**d / 2`` below the
    threshold and a logistic ``1/(1+exp(-2d(x-1)))`` above; both
    branches meet at 1/2 for x = 1, so R is continuous and monotone
    non-decreasing with range in [R0, R1).
    """
    x = P / P0
    if x < 1.0:
        f = 0.5 * x**d
    else:
        f = 1.0 / (1.0 + math.exp(-2.0 * d * (x - 1.0)))
    return R0 + (R1 - R0) * f


def market_force(D: float, S: float, variant: str = "relative_spread") -> float:
    """Normalized demand/supply imbalance driving the log-price derivative.

    ``relative_spread`` returns (D-S)/(D+S), in [-1, 1]; the alternative
    ``excess_over_supply`` returns (D-S)/S.  Raises :class:`DomainError`
    on the degenerate inputs (D=S=0, resp. S=0).
    """
    if variant == "relative_spread":
        if D + S <= 0.0:
            raise DomainError("market force undefined for D + S = 0")
        return (D - S) / (D + S)
    if variant == "excess_over_supply":
        if S <= 0.0:
            raise DomainError("market force undefined for S = 0")
        return (D - S) / S
    raise DomainError(f"unknown market force variant {variant!r}")


def _season_mass(x: float, rho: float) -> float:
    # cumulative integral of the seasonal density from 0 to x, any real x
    fl = math.floor(x)
    return fl + min(x - fl, 1.0 - rho) / (1.0 - rho)


def window_integral(t: float, a_lo: float, a_hi: float, rho: float) -> float:
    """Integral of the seasonal density over ages [a_lo, a_hi] at time ``t``.

    That is the mass of births, per unit yearly mass, whose authors are
    currently aged within the window: integral of m_rho over
    [t - a_hi, t - a_lo].  Exact for the step seasonality.
    """
    return _season_mass(t - a_lo, rho) - _season_mass(t - a_hi, rho)


def window_integral_extrema(
    a_lo: float,
    a_hi: float,
    rho: float,
    season=None,
    quad_steps: int = 20000,
) -> tuple[float, float]:
    """(min, max) over one period of the sliding-window seasonal mass.

    For the built-in step seasonality the window integral is piecewise
    linear in ``t``, so the extrema are attained where a window endpoint
    crosses a breakpoint of the density; those candidates are evaluated
    exactly.  For a user-supplied 1-periodic ``season`` callable, falls
    back to midpoint quadrature with ``quad_steps`` nodes per period,
    scanned over one period of window offsets.
    """
    if season is None:
        breaks = []
        for a in (a_lo, a_hi):
            breaks.append(a - math.floor(a))
            b = a + (1.0 - rho)
            breaks.append(b - math.floor(b))
        vals = [window_integral(t, a_lo, a_hi, rho) for t in breaks]
        return min(vals), max(vals)

    h = 1.0 / quad_steps
    dens = [season((i + 0.5) * h) for i in range(quad_steps)]
    n_win = max(1, round((a_hi - a_lo) / h))
    total = sum(dens[i % quad_steps] for i in range(n_win)) * h
    lo = hi = total
    for start in range(1, quad_steps):
        total += (dens[(start - 1 + n_win) % quad_steps] - dens[start - 1]) * h
        lo = min(lo, total)
        hi = max(hi, total)
    return lo, hi


@dataclass(frozen=True)
class DerivedConstants:
    """A-priori bounds and hypothesis flags derived from the parameters.

    ``c0``/``c1`` bound the seasonal mass seen through the reproducing
    age window, ``cOmega_min``/``cOmega_max`` the same through the
    butchery window.  ``N_max``, ``L1``, ``S_max`` bound every solution
    unconditionally; ``N_min``, ``S_min`` hold eventually when the
    persistence hypothesis is satisfied; ``[P_min, P_max]`` is the price
    band the demand function maps onto [S_min, S_max] (NaN where the
    supply band leaves the range of the demand function).
    """

    c0: float
    c1: float
    cOmega_min: float
    cOmega_max: float
    rho_max: float
    N_max: float
    N_min: float
    L1: float
    S_max: float
    S_min: float
    P_min: float
    P_max: float
    hyp_persistence: bool  # m0 * R_lo * c0 > 2
    hyp_demand: bool       # D0 > S_max
    hyp_supply: bool       # S_min > 0

    @property
    def hypotheses(self) -> tuple[bool, bool, bool]:
        return self.hyp_persistence, self.hyp_demand, self.hyp_supply


def _demand_inverse(s: float, D0: float, alphaD: float) -> float:
    """Price at which demand equals ``s``; NaN outside (0, D0]."""
    if not (0.0 < s <= D0):
        return math.nan
    return math.log(D0 / s) / alphaD


def derive_constants(params: Parameters) -> DerivedConstants:
    """Compute all solution bounds and hypothesis flags for ``params``."""
    p = params
    r_lo, r_hi = p.breeder_bounds()
    c0, c1 = window_integral_extrema(p.A0, p.A1, p.rho)
    com_lo, com_hi = window_integral_extrema(p.Omega0, p.Omega1, p.rho)
    rho_max = 1.0 / (1.0 - p.rho)

    n_max = p.m0 * r_hi * c1
    l1 = 2.0 * p.m0 * r_hi * rho_max
    s_max = p.m0 * (2.0 - r_lo) / p.delta_omega * com_hi
    if n_max > 0.0:
        damp = n_max ** (1.0 - p.gamma)
        n_min = 0.5 * p.m0 * r_lo * c0 * damp
        s_min = p.m0 * (2.0 - r_hi) / (2.0 * p.delta_omega) * damp * com_lo
    else:
        n_min = 0.0
        s_min = 0.0

    return DerivedConstants(
        c0=c0,
        c1=c1,
        cOmega_min=com_lo,
        cOmega_max=com_hi,
        rho_max=rho_max,
        N_max=n_max,
        N_min=n_min,
        L1=l1,
        S_max=s_max,
        S_min=s_min,
        P_min=_demand_inverse(s_max, p.D0, p.alphaD),
        P_max=_demand_inverse(s_min, p.D0, p.alphaD),
        hyp_persistence=p.m0 * r_lo * c0 > 2.0,
        hyp_demand=p.D0 > s_max,
        hyp_supply=s_min > 0.0,
    )
