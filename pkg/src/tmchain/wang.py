"""Wang B machines: programs over L, R, M and J(x) on a non-erasing tape.

A jump fires only when the head reads 1. Running past the last instruction
halts the machine; the instruction that runs past the end is counted as a
step. Jump target ``n`` (one past the end) is accepted so that encoders can
append a sentinel; the plain interpreter treats ``pc == n`` as halted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _kernels
from .tapes import HeadedTape
from .turing import HALTED, DenseTape, RunResult, Status


class Instr(NamedTuple):
    op: str  # "L", "R", "M" or "J"
    target: int | None = None

    def __str__(self):
        return f"J {self.target}" if self.op == "J" else self.op


L = Instr("L")
R = Instr("R")
M = Instr("M")


def J(x: int) -> Instr:
    return Instr("J", int(x))


_OPCODES = {"L": _kernels.OP_L, "R": _kernels.OP_R, "M": _kernels.OP_M, "J": _kernels.OP_J}


@dataclass(frozen=True)
class WangProgram:
    instructions: tuple

    def __post_init__(self):
        ins = tuple(self.instructions)
        object.__setattr__(self, "instructions", ins)
        if not ins:
            raise ValueError("a Wang program needs at least one instruction")
        n = len(ins)
        for k, i in enumerate(ins):
            if i.op not in _OPCODES:
                raise ValueError(f"instruction {k}: unknown op {i.op!r}")
            if i.op == "J" and not 0 <= i.target <= n:
                raise ValueError(f"instruction {k}: jump target {i.target} outside 0..{n}")

    def __len__(self):
        return len(self.instructions)

    def __getitem__(self, k):
        return self.instructions[k]

    def __iter__(self):
        return iter(self.instructions)

    def arrays(self):
        op = np.array([_OPCODES[i.op] for i in self.instructions], dtype=np.int64)
        arg = np.array([i.target if i.op == "J" else -1 for i in self.instructions],
                       dtype=np.int64)
        return op, arg

    def __str__(self):
        return ",".join(map(str, self.instructions))


def program(spec: str | Sequence) -> WangProgram:
    """Build a program from ``"R,J 8,M"`` style text or a sequence of
    :class:`Instr`."""
    if isinstance(spec, str):
        items = [s.strip() for s in spec.replace(";", ",").split(",") if s.strip()]
        return WangProgram(tuple(_parse_instr(s) for s in items))
    return WangProgram(tuple(spec))


def _parse_instr(s: str) -> Instr:
    parts = s.split()
    op = parts[0].upper()
    if op == "J" and len(parts) == 2:
        return J(int(parts[1]))
    if op in ("L", "R", "M") and len(parts) == 1:
        return Instr(op)
    raise ValueError(f"cannot parse Wang instruction {s!r}")


@dataclass(frozen=True)
class WangConfig:
    pc: int
    tape: HeadedTape

    @property
    def head(self) -> int:
        return self.tape.head


def wang_step(p: WangProgram, c: WangConfig):
    """Execute ``p[c.pc]``. A config with ``pc == len(p)`` is halted and
    steps to :data:`HALTED`."""
    n = len(p)
    if c.pc >= n:
        return HALTED
    ins = p[c.pc]
    t, h = c.tape.tape, c.tape.head
    pc = c.pc + 1
    if ins.op == "L":
        h -= 1
    elif ins.op == "R":
        h += 1
    elif ins.op == "M":
        t = t.write(h, 1)
    elif t.read(h):
        pc = ins.target
    return WangConfig(pc, HeadedTape(t, h))


@dataclass(frozen=True)
class WangRunResult(RunResult):
    marked_writes: int = 0  # M executed on a cell already holding 1
    first_marked_write: int | None = None  # 1-based step of the first one


class WangRunner:
    """Resumable compiled run; ``mark_pcs`` are checkpoint program counters."""

    def __init__(self, p: WangProgram, tape: HeadedTape, pc: int = 0,
                 mark_pcs: Iterable[int] = ()):
        self.program = p
        self.op, self.arg = p.arrays()
        self.dense = DenseTape(tape.tape, tape.head)
        self.head = tape.head
        self.pc = pc
        self.steps = 0
        self.marked_writes = 0
        self.first_marked = 0
        self.exec_count = np.zeros(len(p), dtype=np.int64)
        self.taken_count = np.zeros(len(p), dtype=np.int64)
        self.marks = np.zeros(len(p), dtype=np.bool_)
        for k in mark_pcs:
            if k < len(p):
                self.marks[k] = True

    def run(self, budget: int, stop_at_mark: bool = False) -> int:
        while True:
            self.dense.ensure(self.head)
            code, h, self.pc, self.steps, self.marked_writes, self.first_marked = _kernels.wang_run(
                self.op, self.arg, self.dense.cells, self.dense.index(self.head), self.pc,
                budget, self.steps, self.marks, stop_at_mark, self.exec_count,
                self.taken_count, self.marked_writes, self.first_marked)
            self.head = h + self.dense.offset
            if code != _kernels.GROW:
                return code

    def config(self) -> WangConfig:
        return WangConfig(self.pc, HeadedTape(self.dense.sparse(), self.head))

    def result(self, code: int) -> WangRunResult:
        status = Status.HALTED if code == _kernels.HALTED else Status.BUDGET_EXCEEDED
        return WangRunResult(status, self.steps, self.config(), 0, self.marked_writes,
                             self.first_marked or None)


def wang_run(p: WangProgram, tape: HeadedTape, budget: int = 100_000, *,
             fast: bool = True) -> WangRunResult:
    if budget < 0:
        raise ValueError("budget must be non-negative")
    if fast:
        runner = WangRunner(p, tape)
        return runner.result(runner.run(budget))
    c = WangConfig(0, tape)
    steps = marked = 0
    first = None
    while True:
        if c.pc >= len(p):
            return WangRunResult(Status.HALTED, steps, c, 0, marked, first)
        if steps >= budget:
            return WangRunResult(Status.BUDGET_EXCEEDED, steps, c, 0, marked, first)
        if p[c.pc].op == "M" and c.tape.read():
            marked += 1
            first = first or steps + 1
        c = wang_step(p, c)
        steps += 1


class Violation(NamedTuple):
    restriction: int
    index: int  # instruction index, or 1-based step for restriction 3
    detail: str


def check_hooper_restrictions(p: WangProgram, run: WangRunResult | None = None) -> list[Violation]:
    """Violations of the three restrictions of Hooper's machine.

    Restrictions 1 (the instruction after a jump is L or R) and 2 (every jump
    lands on L or R) are checked on the program text. Restriction 3 (M only
    on blank cells) is a property of runs: pass the result of a
    :func:`wang_run` to include its first marked-cell write.
    """
    out = []
    n = len(p)
    moves = ("L", "R")
    for k, ins in enumerate(p):
        if ins.op != "J":
            continue
        if k + 1 >= n:
            out.append(Violation(1, k, "jump has no successor"))
        elif p[k + 1].op not in moves:
            out.append(Violation(1, k, f"successor {p[k + 1]}"))
        if ins.target >= n:
            out.append(Violation(2, k, f"target {ins.target} is past the end"))
        elif p[ins.target].op not in moves:
            out.append(Violation(2, k, f"target {ins.target} is {p[ins.target]}"))
    if run is not None and run.marked_writes:
        out.append(Violation(3, run.first_marked_write,
                             f"{run.marked_writes} mark(s) on a marked cell"))
    return out


# ---- .wb text format ------------------------------------------------------

def loads_wb(text: str) -> tuple[WangProgram, list[str]]:
    ins, comments = [], []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        ins.append(_parse_instr(line.split("#", 1)[0].strip()))
    return WangProgram(tuple(ins)), comments


def dumps_wb(p: WangProgram, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments] + [str(i) for i in p]
    return "\n".join(lines) + "\n"
