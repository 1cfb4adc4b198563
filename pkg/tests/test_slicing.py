import pytest
from hypothesis import given, strategies as st

from urllc_hma.slicing import (InterferenceCap, Mode, SliceConfig, all_slices, check_interference_cap,
                               make_mode)


def test_make_mode_examples():
    assert make_mode(Mode.OMA, 1, 4) == SliceConfig(1, 4, 0)
    assert make_mode(Mode.NOMA, 0, 0) == SliceConfig(0, 0, 5)
    assert make_mode(Mode.HMA, 1, 2) == SliceConfig(1, 2, 2)
    assert make_mode("HMA", 2, 3) == make_mode("OMA", 2, 3)


def test_make_mode_rejects_inconsistent_counts():
    with pytest.raises(ValueError):
        make_mode(Mode.OMA, 1, 2)
    with pytest.raises(ValueError):
        make_mode(Mode.NOMA, 1, 0)
    with pytest.raises(ValueError):
        make_mode(Mode.HMA, 4, 2)
    with pytest.raises(ValueError):
        SliceConfig(1, 1, 1)


def test_all_slices_counts():
    assert len(all_slices(Mode.HMA)) == 21
    assert len(all_slices(Mode.OMA)) == 6
    assert all_slices(Mode.NOMA) == [SliceConfig(0, 0, 5)]


def test_rrb_layout():
    s = SliceConfig(1, 2, 2)
    assert list(s.ded_ns) == [0] and list(s.ded_s) == [1, 2] and list(s.shared) == [3, 4]
    assert s.ns_usable == [0, 3, 4]


def test_cap_examples():
    cap = InterferenceCap(-172.0)
    assert check_interference_cap(cap, [])
    assert check_interference_cap(cap, [-172.0])
    assert not check_interference_cap(cap, [-172.0, -172.0])
    assert check_interference_cap(cap, [None, -180.0])
    assert not check_interference_cap(cap, [[-180.0], [-170.0]])


@given(st.lists(st.one_of(st.none(), st.floats(-200, -150)), max_size=6), st.floats(-200, -150))
def test_cap_monotone(contribs, extra):
    cap = InterferenceCap()
    if not check_interference_cap(cap, contribs):
        assert not check_interference_cap(cap, contribs + [extra])
