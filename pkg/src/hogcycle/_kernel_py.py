"""Pure-Python stepping kernel: the reference implementation.

One simulation step computes, in this fixed order: the mature
reproducing population ``N_r`` (sliding window sum over past
reproducing-line births), the butchery population ``N_b`` (same over
butchery-line births), the supply ``S``, the price update, and finally
the two birth quantities that are pushed onto the ring buffers.

The compiled extension ``hogcycle._kernel`` mirrors this module
statement for statement (same expressions, same evaluation order, libm
functions, no FMA contraction), so both backends produce bit-identical
trajectories; the test suite asserts that.  Any change here must be
replicated there.

Conventions shared by both backends:

* Ring buffers have length ``kA1 + 1`` (resp. ``kOmega1 + 1``); the
  slot of step ``s`` is ``s % len``.  Window sums are refreshed from
  the rings every ``REFRESH_STEPS`` steps (oldest entry first) to stop
  floating-point drift of the incremental updates.
* The seasonal density is sampled at the year phase ``(k % q) / q``
  through a precomputed per-phase table, which keeps the sampling exact
  for arbitrarily large step counts.
* A step is recorded if ``k`` is at/after the relevant start step and
  divisible by the stride (grid) or by ``q`` (yearly).  Recorded totals
  are whole-ring sums in slot order.
"""

from __future__ import annotations

from math import exp, isfinite

#: interval (in steps) between exact recomputations of the window sums
REFRESH_STEPS = 100

STATUS_OK = 0
STATUS_NONFINITE = 1
STATUS_FORCE_DOMAIN = 2


def _window_sum(ring, k, j_hi, j_lo):
    """Sum of ring entries for steps k+1-j, j = j_hi..j_lo, oldest first."""
    n = len(ring)
    acc = 0.0
    for j in range(j_hi, j_lo - 1, -1):
        acc += ring[(k + 1 - j) % n]
    return acc


def run_steps(
    br_arr,
    bb_arr,
    kA0,
    kA1,
    kO0,
    kO1,
    state,
    k_start,
    nsteps,
    season_arr,
    q,
    m0,
    gamma,
    lam,
    D0,
    alphaD,
    R0,
    R1,
    P0,
    d,
    use_r_const,
    r_const,
    birth_law,
    force_variant,
    grid_rec_start,
    grid_stride,
    grid_out,
    grid_tot,
    yearly_rec_start,
    yearly_on,
    yearly_out,
    yearly_tot,
    totals_on,
):
    """Advance the system ``nsteps`` steps from completed step ``k_start``.

    ``state`` is a 3-element float64 array (sum_br, sum_bb, P), updated
    in place together with the ring buffers.  ``birth_law`` is 0 for the
    population-proportional law and 1 for the literal density-only law;
    ``force_variant`` is 0 for (D-S)/(D+S) and 1 for (D-S)/S.  Returns
    ``(status, fault_step, n_grid_rows, n_yearly_rows)``.
    """
    br = br_arr.tolist()
    bb = bb_arr.tolist()
    season = season_arr.tolist()
    lr = len(br)
    lb = len(bb)
    qd = float(q)
    wb = float(kO1 - kO0 + 1)
    sum_br = state[0]
    sum_bb = state[1]
    p = state[2]
    grid_rows = []
    yearly_rows = []
    status = STATUS_OK
    fault_step = -1

    for k in range(k_start + 1, k_start + nsteps + 1):
        # the incremental sums can carry a ~1 ulp negative residue when the
        # true window sum is zero; the populations themselves are sums of
        # non-negative births, so clamp at the point of use
        nr = sum_br
        if nr < 0.0:
            nr = 0.0
        nb = sum_bb
        if nb < 0.0:
            nb = 0.0
        s = qd * nb / wb
        dm = D0 * exp(-alphaD * p)
        if force_variant == 0:
            denom = dm + s
            if denom <= 0.0:
                status, fault_step = STATUS_FORCE_DOMAIN, k
                break
            f = (dm - s) / denom
        else:
            if s <= 0.0:
                status, fault_step = STATUS_FORCE_DOMAIN, k
                break
            f = (dm - s) / s
        p = p + lam * p * f / qd
        if p < 0.0:
            p = 0.0
        mrho = season[k % q]
        mn = m0 * max(nr, 1.0) ** (-gamma)
        if use_r_const:
            r = r_const
        else:
            x = p / P0
            if x < 1.0:
                fb = 0.5 * x**d
            else:
                fb = 1.0 / (1.0 + exp(-2.0 * d * (x - 1.0)))
            r = R0 + (R1 - R0) * fb
        if birth_law == 1:
            base = m0 / qd * mrho * mn
        else:
            base = mrho * nr * mn / qd
        brk = base * r
        bbk = base * (2.0 - r)
        if not (isfinite(nr) and isfinite(s) and isfinite(p) and isfinite(brk)):
            status, fault_step = STATUS_NONFINITE, k
            break
        br[k % lr] = brk
        bb[k % lb] = bbk

        if grid_stride > 0 and k >= grid_rec_start and k % grid_stride == 0:
            row = (nr, nb, s, p, brk, bbk)
            if totals_on:
                tot_r = 0.0
                for v in br:
                    tot_r += v
                tot_b = 0.0
                for v in bb:
                    tot_b += v
                grid_rows.append((row, (tot_r, tot_b)))
            else:
                grid_rows.append((row, None))
        if yearly_on and k >= yearly_rec_start and k % q == 0:
            row = (nr, nb, s, p, brk, bbk)
            if totals_on:
                tot_r = 0.0
                for v in br:
                    tot_r += v
                tot_b = 0.0
                for v in bb:
                    tot_b += v
                yearly_rows.append((row, (tot_r, tot_b)))
            else:
                yearly_rows.append((row, None))

        sum_br = sum_br + br[(k + 1 - kA0) % lr] - br[(k - kA1) % lr]
        sum_bb = sum_bb + bb[(k + 1 - kO0) % lb] - bb[(k - kO1) % lb]
        if k % REFRESH_STEPS == 0:
            sum_br = _window_sum(br, k, kA1, kA0)
            sum_bb = _window_sum(bb, k, kO1, kO0)

    br_arr[:] = br
    bb_arr[:] = bb
    state[0] = sum_br
    state[1] = sum_bb
    state[2] = p
    for i, (row, tot) in enumerate(grid_rows):
        grid_out[i, :] = row
        if tot is not None:
            grid_tot[i, :] = tot
    for i, (row, tot) in enumerate(yearly_rows):
        yearly_out[i, :] = row
        if tot is not None:
            yearly_tot[i, :] = tot
    return status, fault_step, len(grid_rows), len(yearly_rows)
