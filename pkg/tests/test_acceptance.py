"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line, printed at the end of the
pytest run (and when this file is run as a script).
"""

import functools
import random

from conftest import ACCEPTANCE_LINES
from tmchain.compile_netm import SLOWDOWN_CONSTANT, compile_tm_to_netm, encode_netm_input
from tmchain.compile_wang import (HOOPER, STANDARD, compile_netm_to_hooper, compile_netm_to_wang,
                                  encode_wang_tape)
from tmchain.corpus import CORPUS_INPUTS, incrementer, incrementer_input, two_state_netms, two_state_tms
from tmchain.has_encoding import assemble
from tmchain.hasenjaeger import canonical_machine, has_run, has_step
from tmchain.tapes import HeadedTape
from tmchain.turing import tm_run
from tmchain.wang import J, L, M, R, WangProgram, check_hooper_restrictions, wang_run
from tmchain.workbench import (Verdict, bench_slowdown, golden_table1, has_instruction_costs,
                               netm_wang_lockstep, run_chain)

CHAIN_BUDGET = 200
COST = {"M": 1, "R": 2, "L": 3}


def record(number, title, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} {number:2d} {title}" + (f": {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def random_tape(rng):
    bits = "".join(rng.choice("01") for _ in range(rng.randint(0, 6)))
    return HeadedTape.from_string(bits, rng.randint(0, max(len(bits) - 1, 0)))


def random_jump_free(rng):
    return WangProgram(tuple(rng.choice((L, R, M)) for _ in range(rng.randint(1, 30))))


@functools.lru_cache(maxsize=None)
def chain_runs():
    """Chain reports for every halting corpus run and the small incrementers."""
    cases = [(m, HeadedTape.from_string(s)) for m in two_state_tms() for s in CORPUS_INPUTS]
    cases += [(incrementer(w), incrementer_input(w)) for w in (1, 2, 3)]
    reports = []
    for m, tape in cases:
        if tm_run(m, tape, budget=CHAIN_BUDGET).halted:
            reports.append(run_chain(m, tape, CHAIN_BUDGET))
    return reports


@functools.lru_cache(maxsize=None)
def corpus_programs():
    """Wang and Hooper programs for the 2-state NETMs and the compiled 2-state TMs."""
    netms = list(two_state_netms()) + [compile_tm_to_netm(m).machine for m in two_state_tms()]
    return [(m, compile_netm_to_wang(m), compile_netm_to_hooper(m)) for m in netms]


def test_01_golden_table():
    res = golden_table1()
    ok = res.passed and (res.rows_matched, res.rows_total, res.entries) == (14, 14, 32)
    record(1, "golden rule table", ok, res.to_text().strip())


def test_02_instruction_costs():
    rng = random.Random(2)
    bad = 0
    for _ in range(100):
        p = random_jump_free(rng)
        asm = assemble(p, random_tape(rng), append_mark=True)
        r = has_run(canonical_machine(), asm.config, 10 ** 6, asm.halt)
        run_ops = list(p) + ([M] if p[-1] != M else [])
        if not (r.status.value == "loop-detected" and r.steps == sum(COST[i.op] for i in run_ops)):
            bad += 1
    record(2, "M/R/L cost 1/2/3 steps", bad == 0, f"{bad} of 100 programs off")


def test_03_fall_through_jump_cost():
    rng = random.Random(3)
    falls = bad = mism = 0
    for _ in range(100):
        n = rng.randint(2, 20)
        ins = []
        for k in range(n):
            if rng.random() < 0.3:
                ins.append(J(rng.randint(0, n - 1)))
            else:
                ins.append(rng.choice((L, R, M)))
        costs, mismatches, _ = has_instruction_costs(WangProgram(tuple(ins)), random_tape(rng), 300,
                                                     append_mark=True)
        mism += len(mismatches)
        for c in costs:
            if c.op == "J" and not c.taken:
                falls += 1
                bad += c.steps != c.y + 4
    record(3, "fall-through jump costs y+4", falls > 0 and bad == 0 and mism == 0,
           f"{falls} fall-throughs, {bad} off, {mism} tape mismatches")


def test_04_halt_loop_period():
    rng = random.Random(4)
    m = canonical_machine()
    halting = [n for n in two_state_netms() if tm_run(n, HeadedTape(), budget=50).halted]
    progs = [compile_netm_to_wang(n)[0] for n in halting[:4]]
    progs += [random_jump_free(rng) for _ in range(6)]
    bad = 0
    for p in progs:
        tape = encode_wang_tape(HeadedTape()).tape if len(p) > 13 else HeadedTape()
        asm = assemble(p, tape, append_mark=True)
        r = has_run(m, asm.config, 10 ** 6, asm.halt)
        cfgs = [r.final]
        for _ in range(30):
            cfgs.append(has_step(m, cfgs[-1]))
        period = all(cfgs[t] == cfgs[t + 10] for t in range(21))
        shorter = any(cfgs[t] == cfgs[0] for t in range(1, 10))
        bad += r.status.value != "loop-detected" or not period or shorter
    record(4, "post-halt loop has period 10", bad == 0, f"{bad} of {len(progs)} programs off")


def test_05_block_arithmetic():
    bad = 0
    for m, (wp, _), (hp, hcodec) in corpus_programs():
        q = m.num_states - 1
        bad += len(wp) != STANDARD * q + 1
        bad += len(hp) != HOOPER * q + hcodec.trailer
        for size, mid, p, gadget in ((STANDARD, 8, wp, False), (HOOPER, 32, hp, True)):
            for k, ins in enumerate(p):
                if ins.op != "J":
                    continue
                block = ins.target % size == 0 or ins.target == (k // size) * size + mid
                bad += not (block or (gadget and ins.target == k + 4))
    record(5, "block sizes and jump targets", bad == 0,
           f"{len(corpus_programs())} machines, {bad} violations")


def test_06_wang_netm_ratio():
    bad, runs = 0, 0
    for m in two_state_netms():
        for bits in ("", "101"):
            r = netm_wang_lockstep(m, HeadedTape.from_string(bits), CHAIN_BUDGET)
            runs += 1
            bad += bool(r.mismatches) or r.lower_steps > 8 * r.upper_steps + 2
    record(6, "wang steps <= 8 netm steps + 2", bad == 0, f"{runs} runs, {bad} off")


def test_07_chain_equivalence():
    reps = chain_runs()
    names = ("netm", "wang", "hooper", "has")
    bad = sum(any(rep.levels[n].status == "skipped" or rep.levels[n].mismatches
                  or rep.levels[n].tape != rep.levels["tm"].tape for n in names)
              for rep in reps)
    record(7, "chain equivalence at four levels", bad == 0, f"{len(reps)} halting runs, {bad} off")


def test_08_cubic_bound():
    rows = bench_slowdown("incrementer", [4, 8, 16], has=False)
    C = SLOWDOWN_CONSTANT
    within = all(r.t_netm <= C * (r.t_tm + 1) ** 3 for r in rows)
    monotone = all(a.t_tm < b.t_tm and a.t_netm < b.t_netm for a, b in zip(rows, rows[1:]))
    record(8, "netm steps <= C (t+1)^3", C == 32 and within and monotone,
           " ".join(f"w={r.size}:{r.t_netm}/{(r.t_tm + 1) ** 3}" for r in rows))


def test_09_hooper_restrictions():
    syntactic = sum(len(check_hooper_restrictions(hp)) for _, _, (hp, _) in corpus_programs())
    dynamic = 0
    for m in two_state_netms():
        hp, codec = compile_netm_to_hooper(m)
        for bits in ("", "101", "0110"):
            t = HeadedTape.from_string(bits)
            steps = tm_run(m, t, budget=CHAIN_BUDGET).steps
            r = wang_run(hp, encode_wang_tape(t, 0, codec).tape, budget=HOOPER * 30 * (steps + 1))
            dynamic += len(check_hooper_restrictions(hp, r))
    dynamic += sum(rep.verdicts["hooper-restrictions"] is not Verdict.PASS for rep in chain_runs())
    record(9, "hooper restrictions", syntactic == 0 and dynamic == 0,
           f"{syntactic} syntactic, {dynamic} dynamic")


def test_10_non_erasure():
    bad = sum(rep.verdicts["non-erasure"] is not Verdict.PASS for rep in chain_runs())
    for m in two_state_netms():
        c = compile_tm_to_netm(m)
        for bits in CORPUS_INPUTS:
            r = tm_run(c.machine, encode_netm_input(HeadedTape.from_string(bits)), budget=20_000)
            bad += r.erasures != 0
    record(10, "no 1 -> 0 transitions", bad == 0, f"{bad} runs erased a cell")


if __name__ == "__main__":
    import sys
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                pass
    sys.exit(0 if all(line.startswith("PASS") for line in ACCEPTANCE_LINES) else 1)
