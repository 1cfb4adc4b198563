import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from urllc_hma import kernels
from urllc_hma.agents import rrs_schedule
from urllc_hma.slicing import InterferenceCap, Mode, all_slices

BACKENDS = [kernels.python_backend] + ([kernels.compiled_backend] if kernels.compiled_backend else [])


def test_backend_reported():
    assert kernels.BACKEND in ("compiled", "python")


@pytest.mark.skipif(kernels.compiled_backend is None, reason="extension not built")
@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 5), st.integers(1, 6), st.sampled_from([0, 1]))
def test_count_failures_backends_agree(seed, n_rrb, n_splits, combining):
    rng = np.random.default_rng(seed)
    x = rng.exponential(1.0, (n_rrb, 2000)) * 10
    splits = rng.dirichlet(np.ones(n_rrb), n_splits)
    splits[0] = 0.0
    splits[0, 0] = 1.0
    a = kernels.python_backend.count_failures(x, splits, 3.0, combining)
    b = kernels.compiled_backend.count_failures(x, splits, 3.0, combining)
    assert np.array_equal(a, b)


def test_count_failures_hand_example():
    x = np.array([[1.0, 10.0, 0.1], [5.0, 0.1, 0.1]])
    splits = np.array([[1.0, 0.0], [0.5, 0.5]])
    for be in BACKENDS:
        # threshold 2: split 0 fails samples 0 and 2; split 1 fails only sample 2
        assert list(be.count_failures(x, splits, 2.0, kernels.SELECTION)) == [2, 1]
        # sum rate, split 1: (1.5)(3.5)=5.25, (6)(1.05)=6.3, (1.05)^2 -> fails below 3
        assert list(be.count_failures(x, splits, 2.0, kernels.SUM_RATE)) == [2, 1]


def _sched_inputs(seed, n_users):
    rng = np.random.default_rng(seed)
    key = rng.uniform(-160, -140, n_users)
    return (rng.integers(1, 11, n_users), key, key <= -150.0, rng.uniform(1e3, 1e6, n_users))


@pytest.mark.parametrize("be", BACKENDS, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
@pytest.mark.parametrize("seed", range(5))
def test_schedule_kernel_matches_single_slot_reference(be, seed):
    n_users, delay = 9, 10
    bud, key, adm, rate = _sched_inputs(seed, n_users)
    cap = InterferenceCap(-150.0)
    for sl in all_slices(Mode.HMA):
        ref_b = [int(v) for v in bud]
        kb = np.array(bud, dtype=np.int64)
        grants, goodput, viol = be.schedule_slots(kb, 30, key, adm, rate, sl.n_ded_ns, sl.n_ded_s,
                                                  sl.n_shared, delay)
        ref_viol = 0
        for t in range(30):
            g = rrs_schedule(ref_b, list(key), sl, cap)
            assert [(-1 if u is None else u) for u in g] == list(grants[t])
            assert goodput[t] == pytest.approx(sum(rate[u] for u in g if u is not None), rel=1e-12)
            for u in range(n_users):
                if u in g:
                    ref_b[u] = delay
                else:
                    ref_b[u] -= 1
                    if ref_b[u] <= 0:
                        ref_viol += 1
                        ref_b[u] = delay
        assert viol == ref_viol and list(kb) == ref_b


@pytest.mark.skipif(kernels.compiled_backend is None, reason="extension not built")
def test_schedule_backends_identical():
    bud, key, adm, rate = _sched_inputs(1, 20)
    b1, b2 = np.array(bud), np.array(bud)
    r1 = kernels.python_backend.schedule_slots(b1, 500, key, adm, rate, 1, 2, 2, 10)
    r2 = kernels.compiled_backend.schedule_slots(b2, 500, key, adm, rate, 1, 2, 2, 10)
    assert np.array_equal(r1[0], r2[0]) and np.array_equal(r1[1], r2[1]) and r1[2] == r2[2]
    assert np.array_equal(b1, b2)


def test_pure_backend_selected_by_env(monkeypatch):
    import importlib
    monkeypatch.setenv("URLLC_HMA_PURE", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("URLLC_HMA_PURE")
        importlib.reload(kernels)
