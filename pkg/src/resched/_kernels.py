"""Integer kernels for the fixed-permutation schedule.

Written as plain Python over int64 arrays so the same source runs with or
without numba (``NUMBA_DISABLE_JIT=1`` gives the interpreted path).  All
per-position state (baseline starts ``bs`` and latest starts ``ls``) is
indexed by position, not by operation.
"""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

FEASIBLE = 0
INFEASIBLE = 1
CUT_OFF = 2


@njit(cache=True)
def _lenint(a1, b1, a2, b2):
    v = min(b1, b2) - max(a1, a2)
    return v if v > 0 else 0


@njit(cache=True)
def latest_start_at(pos, s, perm, ls, p, dmax):
    if pos == 0:
        return s + dmax
    return max(s, ls[pos - 1] + p[perm[pos - 1]]) + dmax


@njit(cache=True)
def earliest_robust_start(pos, perm, bs, ls, r, p, pw, lim, D, M, dmax):
    """Earliest robust baseline start of the operation at ``pos``.

    Writes ``bs[pos]`` and ``ls[pos]`` and returns the start; the caller
    compares it with s_max.
    """
    i = perm[pos]
    s = r[i]
    if pos > 0:
        q = perm[pos - 1]
        pq = p[q]
        s = max(r[i], bs[pos - 1] + pq)
        t = ls[pos - 1]
        lower = min(ls[pos - 1], max(bs[pos - 1], r[i] - pq))
        # Step 1: right-shift schedules of the predecessor, latest first
        while t >= lower:
            j = (t + pq - 1) // D
            lo = j * D
            hi = lo + D
            energy = pw[q] * _lenint(lo, hi, t, t + pq)
            nxt = t
            k = pos - 2
            while k >= 0:
                o = perm[k]
                st = min(ls[k], nxt - p[o])
                if st + p[o] <= lo:
                    break
                energy += pw[o] * _lenint(lo, hi, st, st + p[o])
                nxt = st
                k -= 1
            if pw[i] == 0:
                # zero power cannot violate any limit
                t = lo - pq - 1
                continue
            mpi = (lim[j] - energy) // pw[i]
            if p[i] <= mpi:
                t = lo - pq - 1
            elif mpi >= hi - (t + pq):
                t -= 1
            else:
                s = max(r[i], hi - mpi)
                break
    # Step 2: intervals reachable by the operation on its own
    lst = latest_start_at(pos, s, perm, ls, p, dmax)
    j = s // D
    while j < M:
        lo = j * D
        hi = lo + D
        mi = min(p[i], _lenint(lo, hi, s, lst + p[i]))
        if mi == 0:
            break
        if pw[i] > 0:
            mpi = lim[j] // pw[i]
            if mpi < mi:
                s = hi - mpi
                lst = latest_start_at(pos, s, perm, ls, p, dmax)
        j += 1
    bs[pos] = s
    ls[pos] = lst
    return s


@njit(cache=True)
def schedule_from(perm, start_pos, bs, ls, tard, r, p, d, pw, lim, D, M, dmax, smax, cutoff):
    """Run the fixed-permutation algorithm from ``start_pos`` onward.

    Positions before ``start_pos`` must already hold their earliest robust
    starts in ``bs``/``ls`` and cumulative tardiness in ``tard``.  Returns
    ``(code, position)``: FEASIBLE with n, INFEASIBLE with the failing
    position, or CUT_OFF when cumulative tardiness exceeds ``cutoff``
    (a negative cutoff disables the check).
    """
    n = perm.shape[0]
    acc = tard[start_pos - 1] if start_pos > 0 else 0
    for pos in range(start_pos, n):
        s = earliest_robust_start(pos, perm, bs, ls, r, p, pw, lim, D, M, dmax)
        if s > smax:
            return INFEASIBLE, pos
        i = perm[pos]
        late = s + p[i] - d[i]
        if late > 0:
            acc += late
        tard[pos] = acc
        if cutoff >= 0 and acc > cutoff:
            return CUT_OFF, pos
    return FEASIBLE, n


def empty_state(n):
    return (np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64))
