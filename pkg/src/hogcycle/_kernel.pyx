# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled stepping kernel.

Statement-for-statement mirror of ``hogcycle._kernel_py`` (the
documented reference); compiled with FMA contraction disabled so both
backends are bit-identical.  See that module for the semantics.
"""

from libc.math cimport exp, pow, isfinite


REFRESH_STEPS = 100

STATUS_OK = 0
STATUS_NONFINITE = 1
STATUS_FORCE_DOMAIN = 2


cdef inline double _window_sum(double[::1] ring, long k, long j_hi, long j_lo):
    cdef long n = ring.shape[0]
    cdef double acc = 0.0
    cdef long j
    for j in range(j_hi, j_lo - 1, -1):
        acc += ring[(k + 1 - j) % n]
    return acc


def run_steps(
    double[::1] br,
    double[::1] bb,
    long kA0,
    long kA1,
    long kO0,
    long kO1,
    double[::1] state,
    long k_start,
    long nsteps,
    double[::1] season,
    long q,
    double m0,
    double gamma,
    double lam,
    double D0,
    double alphaD,
    double R0,
    double R1,
    double P0,
    double d,
    int use_r_const,
    double r_const,
    int birth_law,
    int force_variant,
    long grid_rec_start,
    long grid_stride,
    double[:, ::1] grid_out,
    double[:, ::1] grid_tot,
    long yearly_rec_start,
    int yearly_on,
    double[:, ::1] yearly_out,
    double[:, ::1] yearly_tot,
    int totals_on,
):
    cdef long lr = br.shape[0]
    cdef long lb = bb.shape[0]
    cdef double qd = <double> q
    cdef double wb = <double> (kO1 - kO0 + 1)
    cdef double sum_br = state[0]
    cdef double sum_bb = state[1]
    cdef double p = state[2]
    cdef long gi = 0
    cdef long yi = 0
    cdef int status = STATUS_OK
    cdef long fault_step = -1
    cdef long k, i
    cdef double nr, nb, s, dm, denom, f, mrho, mn, x, fb, r, base, brk, bbk
    cdef double tot_r, tot_b

    for k in range(k_start + 1, k_start + nsteps + 1):
        # mirror of the reference kernel: clamp the ~1 ulp negative residue
        # the incremental sums can carry when the true window sum is zero
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
        mn = m0 * pow(max(nr, 1.0), -gamma)
        if use_r_const:
            r = r_const
        else:
            x = p / P0
            if x < 1.0:
                fb = 0.5 * pow(x, d)
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
            grid_out[gi, 0] = nr
            grid_out[gi, 1] = nb
            grid_out[gi, 2] = s
            grid_out[gi, 3] = p
            grid_out[gi, 4] = brk
            grid_out[gi, 5] = bbk
            if totals_on:
                tot_r = 0.0
                for i in range(lr):
                    tot_r += br[i]
                tot_b = 0.0
                for i in range(lb):
                    tot_b += bb[i]
                grid_tot[gi, 0] = tot_r
                grid_tot[gi, 1] = tot_b
            gi += 1
        if yearly_on and k >= yearly_rec_start and k % q == 0:
            yearly_out[yi, 0] = nr
            yearly_out[yi, 1] = nb
            yearly_out[yi, 2] = s
            yearly_out[yi, 3] = p
            yearly_out[yi, 4] = brk
            yearly_out[yi, 5] = bbk
            if totals_on:
                tot_r = 0.0
                for i in range(lr):
                    tot_r += br[i]
                tot_b = 0.0
                for i in range(lb):
                    tot_b += bb[i]
                yearly_tot[yi, 0] = tot_r
                yearly_tot[yi, 1] = tot_b
            yi += 1

        sum_br = sum_br + br[(k + 1 - kA0) % lr] - br[(k - kA1) % lr]
        sum_bb = sum_bb + bb[(k + 1 - kO0) % lb] - bb[(k - kO1) % lb]
        if k % REFRESH_STEPS == 0:
            sum_br = _window_sum(br, k, kA1, kA0)
            sum_bb = _window_sum(bb, k, kO1, kO0)

    state[0] = sum_br
    state[1] = sum_bb
    state[2] = p
    return status, fault_step, gi, yi
