import pytest
from hypothesis import given, strategies as st

from tmchain.tapes import (CircularTape, HeadedTape, SparseBitTape, circ_move, dense_to_sparse,
                           tape_read, tape_write)

indices = st.integers(-50, 50)
tapes = st.frozensets(indices, max_size=12).map(SparseBitTape)


def test_read_blank_and_lookup():
    assert tape_read(SparseBitTape(), 0) == 0
    t = SparseBitTape(frozenset({5}))
    assert tape_read(t, 5) == 1
    assert tape_read(t, -3) == 0


def test_write_examples():
    assert tape_write(SparseBitTape(), 0, 1).ones == {0}
    assert tape_write(SparseBitTape(frozenset({0})), 0, 0).ones == frozenset()
    assert tape_write(SparseBitTape(frozenset({0})), 2, 1).ones == {0, 2}


def test_write_rejects_non_bits():
    with pytest.raises(ValueError):
        tape_write(SparseBitTape(), 0, 2)


@given(tapes, indices, st.sampled_from([0, 1]))
def test_read_after_write(t, i, b):
    assert tape_read(tape_write(t, i, b), i) == b


@given(tapes, indices, st.sampled_from([0, 1]), st.sampled_from([0, 1]))
def test_last_write_wins(t, i, b, b2):
    assert tape_write(tape_write(t, i, b), i, b2) == tape_write(t, i, b2)


def test_circular_wraparound():
    t = CircularTape.from_string("0101", 3)
    assert circ_move(t, "R").head == 0
    assert circ_move(CircularTape.from_string("0101", 0), "L").head == 3
    one = CircularTape.from_string("1", 0)
    assert circ_move(one, "R").head == 0


@given(st.text("01", min_size=1, max_size=20), st.integers(0, 40), st.sampled_from("LR"))
def test_full_lap_is_identity(bits, head, d):
    t = CircularTape.from_string(bits, head)
    start = t.head
    for _ in range(len(t)):
        t = t.move(d)
    assert t.head == start
    assert t.bits == bits


def test_circular_rejects_bad_cells():
    with pytest.raises(ValueError):
        CircularTape(b"\x00\x02")
    with pytest.raises(ValueError):
        CircularTape(b"")


def test_window_and_literals():
    t = HeadedTape.from_string("0110", head=5)
    assert t.window() == (1, "11000")
    assert SparseBitTape.from_string("101", offset=-1).ones == {-1, 1}
    assert str(HeadedTape()) == "head=0 offset=0 tape=0"


def test_dense_round_trip():
    t = SparseBitTape(frozenset({-3, 0, 4}))
    arr = t.to_array(-5, 6)
    assert dense_to_sparse(arr, -5) == t
