"""Pure-Python/numpy implementations of the hot kernels.

These are the reference semantics; ``_ckernels.pyx`` mirrors them
operation for operation so both backends return identical results.
"""
import numpy as np

SELECTION = 0
SUM_RATE = 1


def count_failures(x, splits, threshold, combining=SELECTION):
    """Count outage events for each candidate power split.

    Parameters
    ----------
    x : ndarray, shape (n_rrb, n_samples)
        Per-unit-power instantaneous SINR samples for every RRB.
    splits : ndarray, shape (n_splits, n_rrb)
        Power fractions, one row per candidate.
    threshold : float
        SINR threshold ``2**(rate/bandwidth) - 1`` of one RRB.
    combining : int
        ``SELECTION``: a sample fails when no RRB reaches ``threshold``
        on its own. ``SUM_RATE``: a sample fails when the summed Shannon
        rate is short, evaluated as ``prod(1 + f*x) < 1 + threshold``.

    Returns
    -------
    ndarray of int64, shape (n_splits,)
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    splits = np.ascontiguousarray(splits, dtype=np.float64)
    n_rrb, _ = x.shape
    counts = np.zeros(splits.shape[0], dtype=np.int64)
    for k, f in enumerate(splits):
        if combining == SELECTION:
            fail = f[0] * x[0] < threshold
            for i in range(1, n_rrb):
                fail &= f[i] * x[i] < threshold
        else:
            prod = 1.0 + f[0] * x[0]
            for i in range(1, n_rrb):
                prod = prod * (1.0 + f[i] * x[i])
            fail = prod < 1.0 + threshold
        counts[k] = int(np.count_nonzero(fail))
    return counts


def schedule_slots(budget, n_slots, interference_key, admissible, rate,
                   n_ded_ns, n_ded_s, n_shared, delay_budget):
    """Run the base-station scheduler for ``n_slots`` consecutive slots.

    Users are ranked by remaining delay budget, then by expected
    interference contribution, then by index. Dedicated-S RRBs are filled
    first; shared RRBs only take users flagged ``admissible``. ``budget``
    is updated in place.

    Returns ``(grants, goodput, violations)`` where ``grants[t, rrb]`` is
    the granted user index or -1.
    """
    n_users = len(budget)
    n_rrb = n_ded_ns + n_ded_s + n_shared
    grants = np.full((n_slots, n_rrb), -1, dtype=np.int32)
    goodput = np.zeros(n_slots, dtype=np.float64)
    violations = 0
    b = [int(v) for v in budget]
    key = [float(v) for v in interference_key]
    adm = [bool(v) for v in admissible]
    rates = [float(v) for v in rate]
    ded_end = n_ded_ns + n_ded_s
    for t in range(n_slots):
        order = sorted(range(n_users), key=lambda u: (b[u], key[u], u))
        served = [False] * n_users
        pos = 0
        for rrb in range(n_ded_ns, ded_end):
            if pos >= n_users:
                break
            u = order[pos]
            pos += 1
            grants[t, rrb] = u
            served[u] = True
        rrb = ded_end
        while rrb < n_rrb and pos < n_users:
            u = order[pos]
            pos += 1
            if adm[u]:
                grants[t, rrb] = u
                served[u] = True
                rrb += 1
        g = 0.0
        for r in range(n_rrb):
            u = grants[t, r]
            if u >= 0:
                g += rates[u]
        goodput[t] = g
        for u in range(n_users):
            if served[u]:
                b[u] = delay_budget
            else:
                b[u] -= 1
                if b[u] <= 0:
                    violations += 1
                    b[u] = delay_budget
    budget[:] = b
    return grants, goodput, violations
