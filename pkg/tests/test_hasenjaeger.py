import io

import pytest
from hypothesis import given, settings, strategies as st

from tmchain.has_encoding import assemble
from tmchain.hasenjaeger import (TABLE1, TRACE_HEADER, AmbiguousRules, HaltMode, HaltRule,
                                 HasenjaegerConfig, HasenjaegerMachine, HasRunner,
                                 canonical_machine, has_run, has_step)
from tmchain.tapes import CircularTape, HeadedTape
from tmchain.turing import Status
from tmchain.wang import J, L, M, R, WangProgram, program, wang_run

H = canonical_machine()


def cfg(state, p, c, w, ph=0, ch=0, wh=0):
    return HasenjaegerConfig(state, CircularTape.from_string(p, ph), CircularTape.from_string(c, ch),
                             HeadedTape.from_string(w, wh))


def test_lookup_examples():
    assert H.lookup(1, 1, 0, 0)[1:] == ("R", "_", "1", 1)
    assert H.lookup(2, 1, 1, 0)[1:] == ("R", "L", "L", 1)
    assert H.lookup(4, 0, 0, 1)[1:] == ("R", "_", "_", 1)
    assert H.lookup(4, 0, 0, 1).number == 14


def test_table_is_total_and_exact():
    assert len(H.rules) == 32
    assert H.rule_numbers() == list(range(1, 15))


def test_overlapping_rows_rejected():
    rows = TABLE1 + ((15, 1, "1", "1", "1", "R", "_", "_", 1),)
    with pytest.raises(AmbiguousRules):
        HasenjaegerMachine.from_rows(rows, 4)
    with pytest.raises(AmbiguousRules):
        HasenjaegerMachine.from_rows(TABLE1[:-1], 4)


def test_step_examples():
    c = has_step(H, cfg(1, "10", "01", "0"))
    assert (c.state, c.p.head, c.w.tape.ones) == (1, 1, {0})
    c = has_step(H, cfg(1, "01", "01", "0"))
    assert (c.state, c.p.head, c.c.head, c.w.head, c.w.tape.ones) == (2, 1, 0, 0, frozenset())
    c = has_step(H, cfg(3, "01", "01", "1"))
    assert (c.state, c.p.head, c.c.head) == (3, 1, 1)


def test_run_examples():
    asm = assemble(program("M"))
    at_sentinel = HasenjaegerConfig(1, asm.config.p.move("R"), asm.config.c, HeadedTape.from_string("1"))
    r = has_run(H, at_sentinel, 100, asm.halt)
    assert (r.status, r.steps) == (Status.LOOP_DETECTED, 0)
    r = has_run(H, asm.config, 100, asm.halt)
    assert (r.status, r.steps, r.final.w.tape.ones) == (Status.LOOP_DETECTED, 1, {0})
    long = assemble(program("M,R,M,R,M,R,M"))
    r = has_run(H, long.config, 5, long.halt)
    assert (r.status, r.steps) == (Status.BUDGET_EXCEEDED, 5)


def test_cycle_mode_finds_halt_loop():
    asm = assemble(program("M,R,M,L,M"))
    sent = has_run(H, asm.config, 1000, asm.halt)
    cyc = has_run(H, asm.config, 1000, HaltRule(HaltMode.CYCLE))
    assert cyc.status is Status.LOOP_DETECTED
    assert cyc.final.w == sent.final.w
    assert sent.steps < cyc.steps <= sent.steps + 10


def test_tapes_p_and_c_unchanged():
    asm = assemble(program("R,M,L,J 0,M"))
    r = has_run(H, asm.config, 400, asm.halt)
    assert r.final.p.cells == asm.config.p.cells
    assert r.final.c.cells == asm.config.c.cells


def test_trace_rows():
    asm = assemble(program("M,R"), append_mark=True)
    buf = io.StringIO()
    r = has_run(H, asm.config, 100, asm.halt, trace=buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] + "\n" == TRACE_HEADER
    assert len(lines) == r.steps + 1
    assert lines[1].split("\t") == ["1", "1", "0", "0", "0", "100", "1"]


instr = st.one_of(st.sampled_from([L, R, M]), st.integers(0, 10).map(J))


def _prog(ins):
    n = len(ins)
    return WangProgram(tuple(J(i.target % n) if i.op == "J" else i for i in ins) + (M,))


@settings(max_examples=60, deadline=None)
@given(st.lists(instr, min_size=1, max_size=10), st.text("01", max_size=5), st.integers(0, 400))
def test_fast_matches_reference(ins, bits, budget):
    asm = assemble(_prog(ins), HeadedTape.from_string(bits))
    fast = has_run(H, asm.config, budget, asm.halt)
    slow = has_run(H, asm.config, budget, asm.halt, fast=False)
    assert fast == slow
    plain = HasRunner(H, asm.config, asm.halt, accelerate=False)
    assert plain.result(plain.run(budget)) == fast


@settings(max_examples=40, deadline=None)
@given(st.lists(instr, min_size=1, max_size=10), st.text("01", max_size=5))
def test_w_matches_wang_at_halt(ins, bits):
    p = _prog(ins)
    tape = HeadedTape.from_string(bits)
    w = wang_run(p, tape, budget=60)
    if not w.halted:
        return
    asm = assemble(p, tape)
    r = has_run(H, asm.config, 10 ** 6, asm.halt)
    assert r.status is Status.LOOP_DETECTED
    assert r.final.w == w.final.tape
