import numpy as np
import pytest

import hogcycle as hc


@pytest.fixture(scope="session")
def sp_300k():
    """One 300000-year SP run shared by the chaos / dimension criteria.

    Records the price on the step grid over the last 10000 years (the
    chaos-analysis window) and all yearly series from year 100000 on
    (the dimension window).
    """
    end = hc.final_time(hc.SP, 300000)
    record = hc.RecordSpec(
        grid_stride=1,
        yearly=True,
        grid_start_year=end - 10000.0,
        yearly_start_year=100000.0,
    )
    return hc.simulate(hc.SP, seed=0, years=300000, record=record)


@pytest.fixture(scope="session")
def sp_300k_yearly(sp_300k):
    """Yearly N_r and P restricted to t in [100000, 300000]."""
    keep = sp_300k.t_yearly <= 300000.0
    return (
        sp_300k.yearly["N_r"][keep],
        sp_300k.yearly["P"][keep],
    )


@pytest.fixture(scope="session")
def hh1_yearly():
    """HH1 yearly N_r for t in [95000, 100000] (5001 points)."""
    record = hc.RecordSpec(grid_stride=0, yearly=True, yearly_start_year=95000.0)
    traj = hc.simulate(hc.HH1, seed=0, years=100000, record=record)
    keep = traj.t_yearly <= 100000.0
    return traj.yearly["N_r"][keep]


def random_parameter_set(rng: np.random.Generator, q: int = 100) -> hc.Parameters:
    """A random valid parameter set with grid-aligned ages and winter.

    Ages and the winter fraction are drawn as multiples of 1/q, so the
    discrete birth windows integrate the step seasonality exactly and
    the continuous bounds transfer to the discretization without extra
    slack.
    """
    a0 = int(rng.integers(10, 51)) / q
    a1 = a0 + int(rng.integers(60, 301)) / q
    o0 = int(rng.integers(10, 51)) / q
    o1 = o0 + int(rng.integers(60, 301)) / q
    r0 = float(rng.uniform(0.0, 0.6))
    return hc.Parameters(
        A0=a0,
        A1=a1,
        Omega0=o0,
        Omega1=o1,
        m0=float(rng.uniform(2, 20)),
        gamma=float(rng.uniform(1, 10)),
        rho=int(rng.integers(30, 90)) / q,
        lam=float(rng.uniform(0.5, 4)),
        D0=float(rng.uniform(1, 30)),
        alphaD=float(rng.uniform(0.3, 2)),
        R0=r0,
        R1=float(rng.uniform(r0, 1.0)),
        P0=float(rng.uniform(0.5, 2)),
        d=float(rng.uniform(1, 6)),
        birth_law="proportional",
        q=q,
    )
