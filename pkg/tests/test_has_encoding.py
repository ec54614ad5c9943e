import pytest
from hypothesis import given, strategies as st

from tmchain.has_encoding import (NoFinalMarkWarning, PhysicalLimitError, assemble, counter_tape,
                                  encode_program, jump_offset, load_manifest, manifest)
from tmchain.tapes import HeadedTape
from tmchain.wang import J, L, M, R, WangProgram, program


def test_jump_offset_examples():
    assert jump_offset(5, 5, 5) == 0
    assert jump_offset(3, 3, 9) == 0
    assert jump_offset(1, 3, 5) == 4
    with pytest.raises(ValueError):
        jump_offset(0, 7, 5)


@given(st.integers(1, 40).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n), st.integers(0, n))))
def test_jump_offset_bounded(nkx):
    n, k, x = nkx
    y = jump_offset(k, x, n)
    assert 0 <= y <= n
    # the scan passes y+1 instruction words around a ring of n+1 words
    assert (k - (y + 1) + 1) % (n + 1) == x


def test_encode_examples():
    e = encode_program(program("M,R,L"), append_mark=True)
    assert (e.bits, e.n) == ("10100110001", 4)
    with pytest.warns(NoFinalMarkWarning):
        e = encode_program(program("M,R,L"))
    assert e.bits == "1010010001"
    assert e.block_starts == (0, 1, 3, 6)
    assert e.sentinel_start == 6
    assert encode_program(program("M")).bits == "10001"


@given(st.lists(st.one_of(st.sampled_from([L, R, M]), st.integers(0, 30).map(J)), min_size=1, max_size=15))
def test_one_mark_per_word(ins):
    n = len(ins) + 1
    p = WangProgram(tuple(J(i.target % n) if i.op == "J" else i for i in ins) + (M,))
    e = encode_program(p)
    assert e.bits.count("1") == len(p) + 1
    for a, b in zip(e.block_starts, e.block_starts[1:] + (len(e.bits),)):
        assert e.bits[a:b].count("1") == 1 and e.bits[b - 1] == "1"


def test_counter_tape():
    c = counter_tape(3)
    assert len(c) == 5 and c.bits == "01111" and c.read() == 0
    assert counter_tape(1).bits == "011"
    with pytest.raises(ValueError):
        counter_tape(0)
    n = 3
    assert max(jump_offset(k, x, n) for k in range(n + 1) for x in range(n + 1)) + 1 <= n + 1


def test_assemble_examples():
    a = assemble(program("M"))
    c = a.config
    assert (c.p.bits, c.p.head, len(c.c), c.c.read(), c.w, c.state) == ("10001", 0, 3, 0, HeadedTape(), 1)
    t = HeadedTape.from_string("1101", 2)
    assert assemble(program("R,M"), t).config.w == t
    with pytest.warns(NoFinalMarkWarning):
        assert assemble(program("M,R,L")).halt.sentinel_pc_start == 6


def test_append_mark():
    a = assemble(program("M,R"), append_mark=True)
    assert a.encoded.n == 3 and a.encoded.bits == "101" + "1" + "0001"


def test_physical_limit():
    assemble(program("M,R,L,M"), physical=True)
    with pytest.raises(PhysicalLimitError):
        assemble(program("M,L,L,L,L,L,M"), physical=True)


def test_manifest_round_trip():
    a = assemble(program("R,J 0,M"), HeadedTape.from_string("011", 1))
    b = load_manifest(manifest(a))
    assert b.config == a.config
    assert b.halt == a.halt
    assert b.encoded == a.encoded
