"""Chaos diagnostics for recorded time series.

Two tool chains:

* price-return entropy: autocorrelation of a series, its first zero
  crossing tau*, signs of the log10 returns sampled every tau*, and the
  growth slope of the word entropy H_K — a positive slope lower-bounds
  the dynamical entropy of the flow;
* attractor geometry: 3-d delay embedding of a yearly series and the
  box-counting dimension of the resulting point cloud.

All operations are pure; nothing here touches the simulation state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .model import DomainError

REGRESSION_METHODS = ("ols", "theil_sen")


@dataclass
class AcfResult:
    """Autocorrelation over a lag grid, with its first zero crossing.

    ``tau_star`` is the first zero of the correlation, refined by
    linear interpolation between the bracketing grid lags (None when
    the correlation never crosses zero on the grid).  ``acf_at_tau``
    is the value at the grid lag nearest tau* (the interpolated value
    is zero by construction) and ``threshold_ok`` says whether its
    magnitude is below 1e-2.
    """

    lags: np.ndarray
    values: np.ndarray
    tau_star: float | None
    acf_at_tau: float | None
    threshold_ok: bool


@dataclass
class ChaosReport:
    """Return-sign entropy analysis of a price (or population) series."""

    tau_star: float
    acf: AcfResult
    returns: np.ndarray
    signs: np.ndarray
    K: np.ndarray
    HK: np.ndarray
    slope: float
    corrcoef: float
    regression_method: str


@dataclass
class DimensionFit:
    """Box-counting dimension estimate over a saturation-guarded fit range."""

    epsilons: np.ndarray
    counts: np.ndarray
    fit_lo: int
    fit_hi: int  # exclusive
    dimension: float
    corrcoef: float

    @property
    def fit_range(self) -> tuple[int, int]:
        return self.fit_lo, self.fit_hi


def autocorrelation(
    series: np.ndarray, dt: float, max_lag: float = 100.0
) -> AcfResult:
    """Empirical autocorrelation of a uniformly sampled series.

    The value at lag k*dt is the Pearson correlation between Y(t) and
    Y(t + k*dt) over the overlap window, i.e. means and variances are
    taken per lag over the overlapping segments.  Computed for all lags
    up to ``max_lag`` via FFT plus cumulative sums, O(n log n).
    """
    y = np.asarray(series, dtype=float)
    n = len(y)
    nlags = int(round(max_lag / dt))
    if n < 2 * nlags:
        raise DomainError(
            f"series too short: need >= {2 * nlags} samples for max_lag={max_lag}"
        )
    if np.ptp(y) == 0.0:
        raise DomainError("constant series has no autocorrelation")

    # global centering removes the mean-product cancellation; Pearson is
    # translation invariant so the result is unchanged
    z = y - y.mean()
    nfft = 1 << (2 * n - 1).bit_length()
    fz = np.fft.rfft(z, nfft)
    raw = np.fft.irfft(fz * np.conj(fz), nfft)[: nlags + 1]  # sum z[t] z[t+k]

    csum = np.concatenate([[0.0], np.cumsum(z)])
    csq = np.concatenate([[0.0], np.cumsum(z * z)])
    ks = np.arange(nlags + 1)
    m = n - ks  # overlap lengths
    sx = csum[n - ks]  # sum of z[0 .. n-k-1]
    sy = csum[n] - csum[ks]  # sum of z[k .. n-1]
    sxx = csq[n - ks]
    syy = csq[n] - csq[ks]
    cov = raw - sx * sy / m
    varx = sxx - sx * sx / m
    vary = syy - sy * sy / m
    denom = np.sqrt(varx * vary)
    if np.any(denom <= 0.0):
        raise DomainError("constant overlap window encountered")
    values = cov / denom

    crossing = np.flatnonzero(values[1:] <= 0.0)
    if len(crossing) == 0:
        tau_star, acf_at_tau, ok = None, None, False
    else:
        i = int(crossing[0]) + 1
        r_prev, r_here = values[i - 1], values[i]
        frac = r_prev / (r_prev - r_here) if r_prev != r_here else 0.0
        tau_star = dt * (i - 1 + frac)
        nearest = int(round(tau_star / dt))
        acf_at_tau = float(values[nearest])
        ok = abs(acf_at_tau) < 1e-2
    return AcfResult(
        lags=ks * dt,
        values=values,
        tau_star=tau_star,
        acf_at_tau=acf_at_tau,
        threshold_ok=ok,
    )


def sign_returns(series: np.ndarray, tau: float, dt: float) -> np.ndarray:
    """Signs (+1/-1) of log10 returns of ``series`` sampled every ``tau``.

    Sample i is taken at index ``round(i * tau / dt)`` (nearest grid
    point); the return is log10 of the ratio of consecutive samples.
    Exact zero returns map to +1 (documented tie-break).  All values
    must be strictly positive.
    """
    y = np.asarray(series, dtype=float)
    if tau < dt:
        raise DomainError(f"tau={tau} below the sampling step dt={dt}")
    n_samples = int(math.floor((len(y) - 1) * dt / tau)) + 1
    idx = np.round(np.arange(n_samples) * tau / dt).astype(np.int64)
    idx = idx[idx < len(y)]
    if len(idx) < 2:
        raise DomainError("series too short for even two tau-spaced samples")
    samples = y[idx]
    if np.any(samples <= 0.0):
        raise DomainError("sign returns need strictly positive values")
    returns = np.diff(np.log10(samples))
    signs = np.where(returns >= 0.0, 1, -1).astype(np.int8)
    return signs


def combinatorial_entropy(signs: np.ndarray, K: int) -> float:
    """Shannon entropy (bits) of the empirical length-K sign-word distribution.

    Words are the sliding windows of length K; probabilities are their
    relative frequencies.  Lies in [0, K]; 0 for a constant sequence,
    K for ideal fair coin flips.
    """
    s = np.asarray(signs)
    n = len(s)
    if K < 1:
        raise DomainError(f"word length must be >= 1, got {K}")
    if K > n:
        raise DomainError(f"word length {K} exceeds sequence length {n}")
    bits = (s > 0).astype(np.int64)
    codes = np.zeros(n - K + 1, dtype=np.int64)
    for j in range(K):
        codes = (codes << 1) | bits[j : n - K + 1 + j]
    counts = np.bincount(codes, minlength=1)
    p = counts[counts > 0] / len(codes)
    return float(-(p * np.log2(p)).sum())


def entropy_table(signs: np.ndarray, k_max: int = 12) -> tuple[np.ndarray, np.ndarray]:
    """H_K for K = 1..k_max as (K array, H array)."""
    ks = np.arange(1, k_max + 1)
    hk = np.array([combinatorial_entropy(signs, int(k)) for k in ks])
    return ks, hk


def entropy_slope(
    K: np.ndarray, HK: np.ndarray, method: str = "ols"
) -> tuple[float, float]:
    """Slope of H_K vs K (bits/symbol) and the Pearson correlation of the fit.

    ``ols`` is the default; ``theil_sen`` gives the robust median-slope
    alternative (the correlation coefficient reported is Pearson in
    both cases).
    """
    if len(K) < 3:
        raise DomainError("need at least 3 entropy points for a slope")
    if method == "ols":
        fit = stats.linregress(K, HK)
        return float(fit.slope), float(fit.rvalue)
    if method == "theil_sen":
        slope, _, _, _ = stats.theilslopes(HK, K)
        corr = float(np.corrcoef(K, HK)[0, 1])
        return float(slope), corr
    raise DomainError(f"unknown regression method {method!r}")


def chaos_report(
    series: np.ndarray,
    dt: float,
    max_lag: float = 100.0,
    k_max: int = 12,
    method: str = "ols",
    tau: float | None = None,
) -> ChaosReport:
    """Full return-sign entropy pipeline for one series.

    Runs the autocorrelation, takes its first zero tau* (or the given
    ``tau``, e.g. 1.0 for yearly returns), builds the sign sequence of
    tau-spaced log10 returns and regresses H_K on K.
    """
    acf = autocorrelation(series, dt, max_lag)
    if tau is None:
        if acf.tau_star is None:
            raise DomainError("autocorrelation never crosses zero; pass tau")
        tau = acf.tau_star
    y = np.asarray(series, dtype=float)
    n_samples = int(math.floor((len(y) - 1) * dt / tau)) + 1
    idx = np.round(np.arange(n_samples) * tau / dt).astype(np.int64)
    samples = y[idx[idx < len(y)]]
    if np.any(samples <= 0.0):
        raise DomainError("sign returns need strictly positive values")
    returns = np.diff(np.log10(samples))
    signs = np.where(returns >= 0.0, 1, -1).astype(np.int8)
    ks, hk = entropy_table(signs, k_max)
    slope, corr = entropy_slope(ks, hk, method)
    return ChaosReport(
        tau_star=float(tau),
        acf=acf,
        returns=returns,
        signs=signs,
        K=ks,
        HK=hk,
        slope=slope,
        corrcoef=corr,
        regression_method=method,
    )


def delay_embed(series: np.ndarray, dim: int = 3, lag: int = 1) -> np.ndarray:
    """Delay-coordinate embedding: point t is (Y(t), Y(t+lag), ..., Y(t+(dim-1)lag)).

    ``lag`` counts samples of the input series.  Returns an array of
    shape (n - (dim-1)*lag, dim).
    """
    y = np.asarray(series, dtype=float)
    n = len(y) - (dim - 1) * lag
    if n < 1:
        raise DomainError(
            f"series of length {len(y)} too short for dim={dim}, lag={lag}"
        )
    return np.column_stack([y[i * lag : i * lag + n] for i in range(dim)])


def box_count(points: np.ndarray, epsilon: float) -> int:
    """Number of epsilon-cubes of the origin-anchored grid holding a point.

    Cubes are [i*eps, (i+1)*eps) x ... ; a point belongs to the cube of
    its coordinate-wise floor(x/eps).
    """
    if epsilon <= 0.0:
        raise DomainError(f"box size must be positive, got {epsilon}")
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    cells = np.floor(pts / epsilon).astype(np.int64)
    return len(np.unique(cells, axis=0))


def fractal_dimension(
    points: np.ndarray,
    n_epsilons: int = 20,
    span: tuple[float, float] = (1e-3, 0.25),
    count_floor: int = 10,
    count_ceil_frac: float = 0.1,
) -> DimensionFit:
    """Box-counting dimension of a point cloud.

    Counts occupied boxes on a log-spaced grid of box sizes spanning
    ``span`` times the cloud diameter (max coordinate extent), then
    fits -slope of log10(count) against log10(eps) by least squares
    over the sub-range where ``count_floor < count < count_ceil_frac *
    n_points`` — the small-box end saturates at the number of points
    and carries no slope information.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = len(pts)
    if n < 1000:
        raise DomainError(f"need at least 1000 points, got {n}")
    diameter = float(np.max(pts.max(axis=0) - pts.min(axis=0)))
    if diameter <= 0.0:
        raise DomainError("degenerate cloud: all points identical")

    epsilons = np.geomspace(span[0] * diameter, span[1] * diameter, n_epsilons)
    counts = np.array([box_count(pts, float(e)) for e in epsilons])
    usable = (counts > count_floor) & (counts < count_ceil_frac * n)
    if usable.sum() < 3:
        raise DomainError("fewer than 3 usable box sizes in the fit range")
    keep = np.flatnonzero(usable)
    fit = stats.linregress(np.log10(epsilons[keep]), np.log10(counts[keep]))
    return DimensionFit(
        epsilons=epsilons,
        counts=counts,
        fit_lo=int(keep[0]),
        fit_hi=int(keep[-1]) + 1,
        dimension=float(-fit.slope),
        corrcoef=float(fit.rvalue),
    )
