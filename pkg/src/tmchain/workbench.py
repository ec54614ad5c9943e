"""End-to-end verification of the compilation chain.

A Turing machine is compiled to a non-erasing machine, then to a Wang B
program in both the standard and the Hooper-restricted layout, and the
standard program is encoded for Hasenjaeger's machine. Every level runs on
the encoded input and is stopped at each simulated-step boundary, where its
configuration is decoded all the way back and compared with the Turing
machine's own configuration after the same number of steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources

from . import _kernels
from .compile_netm import CompiledNetm, compile_tm_to_netm, decode_netm_output, encode_netm_input
from .compile_wang import (HOOPER, STANDARD, compile_netm_to_hooper, compile_netm_to_wang,
                           decode_wang_tape, encode_wang_tape)
from .corpus import FAMILIES
from .has_encoding import assemble, jump_offset
from .hasenjaeger import TABLE1, HasenjaegerMachine, HasRunner, canonical_machine, expand_pattern
from .tapes import HeadedTape
from .turing import TmConfig, TmRunner, TuringMachine, tm_step
from .wang import WangRunner, check_hooper_restrictions

LEVELS = ("netm", "wang", "hooper", "has")
WANG_PER_NETM = 8
HAS_SLACK = 4
# refuse Hasenjaeger runs whose program ring would exceed this many cells
HAS_MAX_PROGRAM_BITS = 40_000_000


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NA = "n/a"


@dataclass
class LevelResult:
    status: str  # "halted", "budget-exceeded" or "skipped"
    steps: int = 0
    budget: int = 0
    tape: HeadedTape | None = None  # final configuration, decoded to the Turing level
    checkpoints: int = 0
    mismatches: list = field(default_factory=list)
    erasures: int = 0
    note: str = ""


@dataclass
class ChainReport:
    machine: TuringMachine
    input: HeadedTape
    budget: int
    levels: dict
    verdicts: dict

    @property
    def passed(self) -> bool:
        return all(v is not Verdict.FAIL for v in self.verdicts.values())

    def to_text(self) -> str:
        lines = [f"machine: states={self.machine.num_states} rules="
                 + ";".join(f"{r.from_state},{r.read},{r.write},{r.move},{r.to_state}"
                            for r in self.machine.quintuples()),
                 f"input: {self.input}",
                 f"budget: {self.budget}"]
        for name, lv in self.levels.items():
            line = f"level {name}: status={lv.status} steps={lv.steps}"
            if lv.status != "skipped":
                line += f" budget={lv.budget} checkpoints={lv.checkpoints} erasures={lv.erasures}"
                if lv.tape is not None:
                    line += f" {lv.tape}"
                if lv.mismatches:
                    line += " mismatches=" + ",".join(map(str, lv.mismatches[:10]))
            if lv.note:
                line += f" note={lv.note}"
            lines.append(line)
        for name, v in self.verdicts.items():
            lines.append(f"verdict {name}: {v.value}")
        lines.append(f"result: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"


def _same(a: HeadedTape, b: HeadedTape) -> bool:
    return a.head == b.head and a.tape.ones == b.tape.ones


def tm_trace(m: TuringMachine, tape: HeadedTape, budget: int) -> list[TmConfig]:
    """Configurations after 0, 1, ... steps, up to a halt or ``budget``."""
    out = [TmConfig(0, tape)]
    while len(out) <= budget and out[-1].state != m.halt_state:
        out.append(tm_step(m, out[-1]))
    return out


class _Driver:
    """Runs one level checkpoint by checkpoint and compares each stop with
    the reference trace."""

    def __init__(self, trace, halted, decode, snapshot):
        self.trace, self.halted = trace, halted
        self.decode, self.snapshot = decode, snapshot
        self.res = LevelResult("budget-exceeded")
        self.prev = None

    def check(self, k, runner):
        q, tape = self.decode(runner)
        want = self.trace[k]
        if q != want.state or not _same(tape, want.tape):
            self.res.mismatches.append(k)
        ones = self.snapshot(runner)
        if self.prev is not None:
            self.res.erasures += len(self.prev - ones)
        self.prev = ones
        self.res.tape = tape

    def drive(self, runner, budget, final_codes) -> LevelResult:
        t = len(self.trace) - 1
        res = self.res
        res.budget = budget
        k = 0
        try:
            self.check(0, runner)
            while True:
                if k == t and not self.halted:
                    res.note = "stopped at the budget checkpoint"
                    break
                code = runner.run(budget, True)
                if code == _kernels.CHECKPOINT:
                    k += 1
                    if k > t:
                        res.mismatches.append(f"extra-{k}")
                        break
                    self.check(k, runner)
                    continue
                if code in final_codes:
                    res.status = "halted"
                    if k != t or not self.halted:
                        res.mismatches.append("halt")
                    else:
                        self.check(t, runner)
                elif self.halted:
                    res.mismatches.append("budget")
                break
        except ValueError as e:  # undecodable configuration
            res.mismatches.append(f"{type(e).__name__}@{k}")
        res.steps = runner.steps
        res.checkpoints = k
        return res


def _netm_level(c: CompiledNetm, tape, trace, halted, budget):
    runner = TmRunner(c.machine, encode_netm_input(tape, c.codec), 0, c.step_states)

    def decode(r):
        return c.step_states[r.state], decode_netm_output(r.dense.sparse(), c.codec)

    drv = _Driver(trace, halted, decode, lambda r: set(r.dense.sparse().ones))
    res = drv.drive(runner, budget, (_kernels.HALTED,))
    res.erasures += runner.erasures
    return res


def _wang_level(c: CompiledNetm, prog, codec, tape, trace, halted, budget):
    wt = encode_wang_tape(encode_netm_input(tape, c.codec), 0, codec)
    marks = [codec.pc(i) for i in c.step_states]
    runner = WangRunner(prog, wt.tape, wt.pc, marks)

    def decode(r):
        pc = min(r.pc, len(prog) - 1)
        netm_tape = decode_wang_tape(HeadedTape(r.dense.sparse(), r.head))
        return c.step_states[pc // codec.block_size], decode_netm_output(netm_tape.tape, c.codec)

    drv = _Driver(trace, halted, decode, lambda r: set(r.dense.sparse().ones))
    return drv.drive(runner, budget, (_kernels.HALTED,)), runner


def instruction_costs(prog, exec_count, taken_count, p_bits: int):
    """Lower and upper bounds on Hasenjaeger steps for the Wang instructions
    counted in ``exec_count``; only taken jumps have a spread."""
    n = len(prog)
    lo = hi = 0
    for k, ins in enumerate(prog):
        e, tk = int(exec_count[k]), int(taken_count[k])
        if not e:
            continue
        if ins.op == "J":
            y = jump_offset(k, ins.target, n)
            lo += (e - tk) * (y + 4) + tk * (y + 5)
            hi += (e - tk) * (y + 4) + tk * (p_bits + 2 * y + 10)
        else:
            c = {"M": 1, "R": 2, "L": 3}[ins.op] * e
            lo += c
            hi += c
    return lo, hi


def _has_level(c: CompiledNetm, prog, wang_runner, tape, trace, halted):
    wt = encode_wang_tape(encode_netm_input(tape, c.codec), 0)
    asm = assemble(prog, wt.tape)
    starts = asm.encoded.block_starts
    lo, hi = instruction_costs(prog, wang_runner.exec_count, wang_runner.taken_count,
                               len(asm.encoded.bits))
    budget = HAS_SLACK * hi
    marks = [starts[STANDARD * i] for i in c.step_states]
    runner = HasRunner(canonical_machine(), asm.config, asm.halt, marks)
    pc_of = {s: k for k, s in enumerate(starts)}

    def decode(r):
        pc = min(pc_of[r.ph], len(prog) - 1)
        netm_tape = decode_wang_tape(r.w_tape())
        return c.step_states[pc // STANDARD], decode_netm_output(netm_tape.tape, c.codec)

    drv = _Driver(trace, halted, decode, lambda r: set(r.dense.sparse().ones))
    return drv.drive(runner, budget, (_kernels.LOOP,)), (lo, hi), len(asm.encoded.bits)


def run_chain(m: TuringMachine, tape: HeadedTape = HeadedTape(), budget: int = 200,
              levels=LEVELS) -> ChainReport:
    """Compile ``m`` down the chain and compare every level with it.

    Budgets scale from the Turing budget: ``C (budget+1)^3`` for the NETM,
    ``8 netm + 2`` for Wang, ``54 netm + 8`` for the Hooper layout and four
    times the predicted instruction cost for Hasenjaeger. When ``m`` does not
    halt, every level stops at the checkpoint for step ``budget``.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    levels = tuple(levels)
    if "has" in levels and "wang" not in levels:
        levels = levels + ("wang",)
    trace = tm_trace(m, tape, budget)
    t = len(trace) - 1
    halted = trace[-1].state == m.halt_state
    out = {"tm": LevelResult("halted" if halted else "budget-exceeded", t, budget, trace[-1].tape, t)}
    verdicts = {}
    c = compile_tm_to_netm(m)
    C = c.slowdown_constant

    netm = _netm_level(c, tape, trace, halted, math.ceil(C * (budget + 1) ** 3))
    out["netm"] = netm
    verdicts["netm-equivalence"] = _eq(netm)
    verdicts["netm-cubic"] = _bound(netm.steps <= C * (t + 1) ** 3)

    wang_runner = None
    prog, codec = compile_netm_to_wang(c.machine)
    if "wang" in levels:
        wang, wang_runner = _wang_level(c, prog, codec, tape, trace, halted,
                                        WANG_PER_NETM * netm.steps + 2)
        out["wang"] = wang
        verdicts["wang-equivalence"] = _eq(wang)
        verdicts["wang-ratio"] = _bound(wang.steps <= WANG_PER_NETM * netm.steps + 2)
    else:
        out["wang"] = LevelResult("skipped")
        verdicts["wang-equivalence"] = verdicts["wang-ratio"] = Verdict.NA

    if "hooper" in levels:
        hprog, hcodec = compile_netm_to_hooper(c.machine)
        hoop, hrunner = _wang_level(c, hprog, hcodec, tape, trace, halted,
                                    HOOPER * netm.steps + hcodec.trailer)
        out["hooper"] = hoop
        verdicts["hooper-equivalence"] = _eq(hoop)
        viol = check_hooper_restrictions(hprog, hrunner.result(_kernels.BUDGET))
        if viol:
            hoop.note = f"{len(viol)} restriction violation(s), first {viol[0]}"
        verdicts["hooper-restrictions"] = _bound(not viol)
    else:
        out["hooper"] = LevelResult("skipped")
        verdicts["hooper-equivalence"] = verdicts["hooper-restrictions"] = Verdict.NA

    if "has" in levels:
        p_bits = _program_bits(prog)
        if p_bits > HAS_MAX_PROGRAM_BITS:
            out["has"] = LevelResult("skipped", note=f"program ring of {p_bits} cells")
            verdicts["has-equivalence"] = verdicts["has-cost"] = Verdict.NA
        else:
            has, (lo, hi), _ = _has_level(c, prog, wang_runner, tape, trace, halted)
            out["has"] = has
            verdicts["has-equivalence"] = _eq(has)
            verdicts["has-cost"] = _bound(lo <= has.steps <= hi)
    else:
        out["has"] = LevelResult("skipped")
        verdicts["has-equivalence"] = verdicts["has-cost"] = Verdict.NA

    ran = [lv for lv in out.values() if lv.status != "skipped"]
    verdicts["non-erasure"] = _bound(all(lv.erasures == 0 for lv in ran if lv is not out["tm"]))
    return ChainReport(m, tape, budget, out, verdicts)


def _program_bits(prog) -> int:
    n = len(prog)
    bits = 4  # sentinel
    for k, ins in enumerate(prog):
        bits += {"M": 1, "R": 2, "L": 3}.get(ins.op, 0)
        if ins.op == "J":
            bits += 4 + jump_offset(k, ins.target, n)
    return bits


def _eq(lv: LevelResult) -> Verdict:
    return Verdict.FAIL if lv.mismatches else Verdict.PASS


def _bound(ok: bool) -> Verdict:
    return Verdict.PASS if ok else Verdict.FAIL


# ---- slowdown benchmark ----------------------------------------------------------

class CapExceeded(RuntimeError):
    pass


BENCH_COLUMNS = ("size", "t_tm", "t_netm", "t_wang", "t_has", "wang_per_netm", "netm_per_cubic")


@dataclass
class BenchRow:
    size: int
    t_tm: int
    t_netm: int
    t_wang: int
    t_has: int | None
    C: float

    @property
    def wang_per_netm(self) -> float:
        return self.t_wang / self.t_netm if self.t_netm else 0.0

    @property
    def netm_per_cubic(self) -> float:
        return self.t_netm / (self.t_tm + 1) ** 3


def bench_slowdown(family: str, sizes, cap: int = 100_000, *, has: bool = True) -> list[BenchRow]:
    """Step counts at every level for a family of halting machines.

    Hasenjaeger runs are skipped (``t_has`` is None) once the program ring
    would exceed ``HAS_MAX_PROGRAM_BITS``.
    """
    make, make_input = FAMILIES[family]
    rows = []
    for size in sizes:
        m, tape = make(size), make_input(size)
        levels = LEVELS if has else ("netm", "wang")
        rep = run_chain(m, tape, cap, levels=levels)
        if rep.levels["tm"].status != "halted":
            raise CapExceeded(f"{family} size {size} did not halt within {cap} steps")
        for name in ("netm-equivalence", "netm-cubic", "wang-equivalence", "wang-ratio"):
            if rep.verdicts[name] is Verdict.FAIL:
                raise AssertionError(f"{family} size {size}: {name} failed")
        lv = rep.levels
        t_has = lv["has"].steps if lv["has"].status == "halted" else None
        rows.append(BenchRow(size, lv["tm"].steps, lv["netm"].steps, lv["wang"].steps, t_has,
                             float(compile_tm_to_netm(m).slowdown_constant)))
    return rows


def bench_tsv(rows) -> str:
    lines = ["\t".join(BENCH_COLUMNS)]
    for r in rows:
        lines.append("\t".join([str(r.size), str(r.t_tm), str(r.t_netm), str(r.t_wang),
                                "n/a" if r.t_has is None else str(r.t_has),
                                f"{r.wang_per_netm:.4f}", f"{r.netm_per_cubic:.4f}"]))
    return "\n".join(lines) + "\n"


# ---- rule table golden check ---------------------------------------------------

def load_table1_transcription() -> list[tuple]:
    text = resources.files("tmchain").joinpath("data/table1.tsv").read_text()
    rows = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#") or line.startswith("rule"):
            continue
        f = line.split("\t")
        rows.append((int(f[0]), int(f[1]), f[2], f[3], f[4], f[5], f[6], f[7], int(f[8])))
    return rows


@dataclass
class GoldenResult:
    passed: bool
    rows_matched: int
    rows_total: int
    entries: int
    bad_rules: list

    def to_text(self) -> str:
        s = f"table1: {'pass' if self.passed else 'fail'} {self.rows_matched}/{self.rows_total} rows, {self.entries} entries"
        if self.bad_rules:
            s += " mismatched rules: " + ",".join(map(str, self.bad_rules))
        return s + "\n"


def golden_table1(machine: HasenjaegerMachine | None = None) -> GoldenResult:
    """Compare a machine, by default the canonical one, entry by entry with
    the checked-in transcription of the rule table."""
    machine = machine or canonical_machine()
    rows = load_table1_transcription()
    bad, entries, seen = set(), 0, set()
    for number, q, p, cc, w, pa, ca, wa, q2 in rows:
        for key in ((q, a, b, d) for a in expand_pattern(p) for b in expand_pattern(cc)
                    for d in expand_pattern(w)):
            entries += 1
            seen.add(key)
            r = machine.rules.get(key)
            if r is None or (r.number, r.p_act, r.c_act, r.w_act, r.next_state) != (number, pa, ca, wa, q2):
                bad.add(number if r is None else r.number)
                bad.add(number)
    for key, r in machine.rules.items():
        if key not in seen:
            bad.add(r.number)
    if machine.start_state != 1:
        bad.add(0)
    total = len(rows)
    return GoldenResult(not bad, total - len(bad & {r[0] for r in rows}), total, entries, sorted(bad))


def table1_rows() -> tuple:
    return TABLE1


# ---- lock-step comparisons -----------------------------------------------------

@dataclass
class Lockstep:
    upper_steps: int
    lower_steps: int
    checkpoints: int
    mismatches: list
    halted: bool


def netm_wang_lockstep(m, tape: HeadedTape, budget: int, *, hooper: bool = False) -> Lockstep:
    """Step ``m`` directly and its Wang program side by side, comparing at
    every block entry (one per simulated step)."""
    prog, codec = (compile_netm_to_hooper if hooper else compile_netm_to_wang)(m)
    wt = encode_wang_tape(tape, 0, codec)
    runner = WangRunner(prog, wt.tape, wt.pc, [codec.pc(i) for i in range(m.num_states)])
    ref = TmRunner(m, tape)
    mismatches, k = [], 0
    wang_budget = (WANG_PER_NETM if not hooper else HOOPER) * budget + codec.trailer + 1
    while True:
        if ref.state == m.halt_state or k == budget:
            break
        ref.run(k + 1)
        code = runner.run(wang_budget, True)
        k += 1
        if code != _kernels.CHECKPOINT:
            mismatches.append(f"wang-stopped@{k}")
            break
        try:
            got = decode_wang_tape(HeadedTape(runner.dense.sparse(), runner.head))
        except ValueError:
            mismatches.append(k)
            continue
        want = ref.config()
        if runner.pc != codec.pc(want.state) or not _same(got, want.tape):
            mismatches.append(k)
    halted = ref.state == m.halt_state
    if halted and not mismatches:
        code = runner.run(wang_budget, True)
        if code != _kernels.HALTED:
            mismatches.append("no-halt")
    return Lockstep(ref.steps, runner.steps, k, mismatches, halted)


@dataclass
class InstructionCost:
    index: int
    op: str
    taken: bool
    y: int | None
    steps: int


def has_instruction_costs(prog, tape: HeadedTape = HeadedTape(), budget: int = 10_000,
                          *, append_mark: bool = False):
    """Run ``prog`` on the Wang interpreter and on Hasenjaeger's machine in
    lock step, one instruction at a time.

    Returns ``(costs, mismatches, has_runner)`` where ``costs`` lists the
    Hasenjaeger steps spent on each executed instruction and ``mismatches``
    the instruction counts at which W differs from the Wang tape.
    """
    from .wang import wang_step, WangConfig

    asm = assemble(prog, tape, append_mark=append_mark)
    starts = asm.encoded.block_starts
    n = asm.encoded.n
    if append_mark and len(prog) != n:
        from .wang import M, WangProgram
        prog = WangProgram(prog.instructions + (M,))
    runner = HasRunner(canonical_machine(), asm.config, asm.halt, starts[:n])
    pc_of = {s: k for k, s in enumerate(starts)}
    w = WangConfig(0, tape)
    costs, mismatches = [], []
    big = 1 << 62
    for _ in range(budget):
        if w.pc >= n:
            break
        ins = prog[w.pc]
        taken = ins.op == "J" and w.tape.read() == 1
        y = jump_offset(w.pc, ins.target, n) if ins.op == "J" else None
        before = runner.steps
        nxt = wang_step(prog, w)
        code = runner.run(big, True)
        costs.append(InstructionCost(w.pc, ins.op, taken, y, runner.steps - before))
        w = nxt
        at = pc_of.get(runner.ph)
        if code == _kernels.LOOP:
            at = n
        if at != min(w.pc, n) or runner.wh != w.tape.head or \
                runner.dense.sparse().ones != w.tape.tape.ones:
            mismatches.append(len(costs))
    return costs, mismatches, runner
