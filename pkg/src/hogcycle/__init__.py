"""Coupled livestock-population / meat-price delay system.

A deterministic simulator for an age-structured breeding population
whose newborn females are split between reproduction and butchery
according to the meat price, coupled with supply/demand price
dynamics; plus the chaos-analysis toolkit (autocorrelation, return-sign
entropy, box-counting dimension, bifurcation sweeps) and the checker
for the a-priori solution bounds.
"""

__version__ = "0.1.0"

from .analysis import (
    AcfResult,
    ChaosReport,
    DimensionFit,
    autocorrelation,
    box_count,
    chaos_report,
    combinatorial_entropy,
    delay_embed,
    entropy_slope,
    entropy_table,
    fractal_dimension,
    sign_returns,
)
from .engine import (
    DiscreteIndices,
    RecordSpec,
    SimState,
    SimulationFault,
    Trajectory,
    advance,
    available_backends,
    average_breeder_fraction,
    default_backend,
    discretize,
    final_time,
    init_history,
    simulate,
    step,
    totals,
)
from .model import (
    HH1,
    PRESETS,
    SP,
    TG,
    DerivedConstants,
    DomainError,
    Parameters,
    breeder_fraction,
    demand,
    derive_constants,
    fertility,
    market_force,
    seasonality,
    window_integral_extrema,
)
from .sweep import (
    BifurcationData,
    SweepSpec,
    cluster_count,
    periodic_window_fraction,
    run_sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
