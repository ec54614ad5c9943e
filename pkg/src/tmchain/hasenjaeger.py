"""Hasenjaeger's three-tape machine.

Tapes P (program) and C (counter) are read-only rings; W is the non-erasing
work tape. Each step reads all three heads, then applies one rule: P and C
move L, R or stay (``_``); W moves, stays, or is marked (``1``). The machine
has no halt state. A simulated Wang program halts by entering a ten-step
loop, detected here either from encoder metadata (sentinel mode) or by
watching for a repeated configuration (cycle mode).
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, NamedTuple

import numpy as np

from . import _kernels
from .tapes import CircularTape, HeadedTape
from .turing import DenseTape, RunResult, Status

STAY = "_"
MARK = "1"


class HasRule(NamedTuple):
    number: int
    p_act: str
    c_act: str
    w_act: str
    next_state: int


# (number, state, P, C, W, P action, C action, W action, next state); * matches 0 and 1
TABLE1 = (
    (1, 1, "1", "*", "0", "R", "_", "1", 1),
    (2, 1, "1", "*", "1", "R", "_", "_", 1),
    (3, 1, "0", "*", "*", "R", "_", "_", 2),
    (4, 2, "1", "0", "*", "R", "_", "R", 1),
    (5, 2, "0", "0", "*", "R", "R", "_", 2),
    (6, 2, "1", "1", "*", "R", "L", "L", 1),
    (7, 2, "0", "1", "*", "R", "L", "_", 3),
    (8, 3, "0", "*", "0", "R", "_", "_", 3),
    (9, 3, "1", "*", "0", "R", "_", "_", 1),
    (10, 3, "0", "*", "1", "R", "R", "_", 3),
    (11, 3, "1", "*", "1", "L", "R", "_", 4),
    (12, 4, "0", "1", "*", "L", "_", "_", 4),
    (13, 4, "1", "1", "*", "L", "L", "_", 4),
    (14, 4, "*", "0", "*", "R", "_", "_", 1),
)


def expand_pattern(pattern: str) -> list[int]:
    return [0, 1] if pattern == "*" else [int(pattern)]


class AmbiguousRules(ValueError):
    pass


@dataclass(frozen=True)
class HasenjaegerMachine:
    """Generic instance: states are ``1..num_states`` and ``rules`` maps every
    ``(state, p, c, w)`` to a :class:`HasRule`."""

    num_states: int
    start_state: int
    rules: dict = field(hash=False, compare=True)

    @classmethod
    def from_rows(cls, rows: Iterable, num_states: int, start_state: int = 1):
        """Expand wildcard rows into a total table; overlaps and gaps raise."""
        rules = {}
        for number, q, p, c, w, pa, ca, wa, q2 in rows:
            for pb in expand_pattern(p):
                for cb in expand_pattern(c):
                    for wb in expand_pattern(w):
                        key = (q, pb, cb, wb)
                        if key in rules:
                            raise AmbiguousRules(f"rules {rules[key].number} and {number} overlap at {key}")
                        rules[key] = HasRule(number, pa, ca, wa, q2)
        missing = [(q, a, b, c) for q in range(1, num_states + 1)
                   for a in (0, 1) for b in (0, 1) for c in (0, 1) if (q, a, b, c) not in rules]
        if missing:
            raise AmbiguousRules(f"no rule for {missing}")
        for r in rules.values():
            if r.p_act not in "LR_" or r.c_act not in "LR_" or r.w_act not in ("L", "R", STAY, MARK):
                raise ValueError(f"rule {r.number}: bad action")
        return cls(num_states, start_state, rules)

    def lookup(self, state: int, p: int, c: int, w: int) -> HasRule:
        return self.rules[state, p, c, w]

    def arrays(self):
        shape = (self.num_states + 1, 2, 2, 2)
        pa = np.zeros(shape, dtype=np.int64)
        ca = np.zeros(shape, dtype=np.int64)
        wa = np.zeros(shape, dtype=np.int64)
        ns = np.zeros(shape, dtype=np.int64)
        delta = {"L": -1, "R": 1, STAY: 0}
        for key, r in self.rules.items():
            pa[key] = delta[r.p_act]
            ca[key] = delta[r.c_act]
            wa[key] = _kernels.W_MARK if r.w_act == MARK else delta[r.w_act]
            ns[key] = r.next_state
        return pa, ca, wa, ns

    def rule_numbers(self) -> list[int]:
        return sorted({r.number for r in self.rules.values()})


def canonical_machine() -> HasenjaegerMachine:
    """The four-state, fourteen-rule program wired into Hasenjaeger's device."""
    return HasenjaegerMachine.from_rows(TABLE1, num_states=4, start_state=1)


@dataclass(frozen=True)
class HasenjaegerConfig:
    state: int
    p: CircularTape
    c: CircularTape
    w: HeadedTape

    def signature(self) -> tuple:
        return self.state, self.p.head, self.c.head, self.w.head


def has_step(m: HasenjaegerMachine, cfg: HasenjaegerConfig) -> HasenjaegerConfig:
    """Apply the unique rule for the three current reads. All reads happen
    before any action."""
    return _apply(m, cfg)[0]


def _apply(m, cfg):
    r = m.lookup(cfg.state, cfg.p.read(), cfg.c.read(), cfg.w.read())
    p = cfg.p if r.p_act == STAY else cfg.p.move(r.p_act)
    c = cfg.c if r.c_act == STAY else cfg.c.move(r.c_act)
    w = cfg.w
    if r.w_act == MARK:
        w = HeadedTape(w.tape.write(w.head, 1), w.head)
    elif r.w_act != STAY:
        w = HeadedTape(w.tape, w.head + (1 if r.w_act == "R" else -1))
    return HasenjaegerConfig(r.next_state, p, c, w), r


class HaltMode(Enum):
    SENTINEL = "sentinel"
    CYCLE = "cycle"


@dataclass(frozen=True)
class HaltRule:
    """Sentinel mode fires in the start state with P at ``sentinel_pc_start``
    and W reading 1. Cycle mode fires when ``(state, P head, C head, W head)``
    repeats with no W mark in between."""

    mode: HaltMode = HaltMode.CYCLE
    sentinel_pc_start: int | None = None
    state: int = 1

    def __post_init__(self):
        if self.mode is HaltMode.SENTINEL and self.sentinel_pc_start is None:
            raise ValueError("sentinel mode needs sentinel_pc_start")


@dataclass(frozen=True)
class HasRunResult(RunResult):
    rule_counts: dict = field(default_factory=dict)  # rule number -> applications


TRACE_HEADER = "step\tstate\tpHead\tcHead\twHead\treads\truleId\n"


def _sentinel_hit(halt: HaltRule, cfg: HasenjaegerConfig) -> bool:
    return (halt.mode is HaltMode.SENTINEL and cfg.state == halt.state
            and cfg.p.head == halt.sentinel_pc_start and cfg.w.read() == 1)


def has_run(m: HasenjaegerMachine, cfg: HasenjaegerConfig, budget: int,
            halt: HaltRule = HaltRule(), *, fast: bool = True,
            trace: io.TextIOBase | None = None) -> HasRunResult:
    """Run until the halt rule fires (``LOOP_DETECTED``) or ``budget`` steps.

    The compiled path serves sentinel mode without a trace; cycle mode and
    tracing use the reference stepper.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    if halt.mode is HaltMode.SENTINEL and halt.sentinel_pc_start >= len(cfg.p):
        raise ValueError("sentinel index outside the program tape")
    if fast and trace is None and halt.mode is HaltMode.SENTINEL:
        runner = HasRunner(m, cfg, halt)
        return runner.result(runner.run(budget))
    return _reference_run(m, cfg, budget, halt, trace)


def _reference_run(m, cfg, budget, halt, trace):
    counts: dict = {}
    steps = 0
    seen = {cfg.signature()}
    if trace is not None:
        trace.write(TRACE_HEADER)
    while True:
        if _sentinel_hit(halt, cfg):
            return HasRunResult(Status.LOOP_DETECTED, steps, cfg, 0, counts)
        if steps >= budget:
            return HasRunResult(Status.BUDGET_EXCEEDED, steps, cfg, 0, counts)
        reads = f"{cfg.p.read()}{cfg.c.read()}{cfg.w.read()}"
        before = cfg
        cfg, r = _apply(m, cfg)
        steps += 1
        counts[r.number] = counts.get(r.number, 0) + 1
        if trace is not None:
            trace.write(f"{steps}\t{before.state}\t{before.p.head}\t{before.c.head}"
                        f"\t{before.w.head}\t{reads}\t{r.number}\n")
        if halt.mode is HaltMode.CYCLE:
            if r.w_act == MARK and before.w.read() == 0:
                seen = set()
            sig = cfg.signature()
            if sig in seen:
                return HasRunResult(Status.LOOP_DETECTED, steps, cfg, 0, counts)
            seen.add(sig)


# The jump scan leaves P on the 1 of the instruction before the target and
# enters the start state from q4; that stop is not an instruction boundary.
SCAN_STATES = (4,)


class HasRunner:
    """Resumable compiled run with optional checkpoints at ``mark_ps`` (P head
    positions) whenever the machine enters its start state from a state not
    listed in ``scan_states``."""

    def __init__(self, m: HasenjaegerMachine, cfg: HasenjaegerConfig,
                 halt: HaltRule | None = None, mark_ps: Iterable[int] = (),
                 accelerate: bool = True, scan_states: Iterable[int] = SCAN_STATES):
        self.machine = m
        self.arrays = m.arrays()
        self.p_ring, self.c_ring = cfg.p, cfg.c
        self.p_cells = np.frombuffer(cfg.p.cells, dtype=np.uint8)
        self.c_cells = np.frombuffer(cfg.c.cells, dtype=np.uint8)
        self.p_runs = _kernels.run_lengths(self.p_cells)
        self.c_runs = _kernels.run_lengths(self.c_cells)
        self.dense = DenseTape(cfg.w.tape, cfg.w.head)
        self.state, self.ph, self.ch, self.wh = cfg.state, cfg.p.head, cfg.c.head, cfg.w.head
        self.halt = halt or HaltRule()
        self.steps = 0
        self.counts = np.zeros((m.num_states + 1, 2, 2, 2), dtype=np.int64)
        self.marks = np.zeros(len(self.p_cells), dtype=np.bool_)
        for k in mark_ps:
            self.marks[k] = True
        self.mark_from = np.ones(m.num_states + 1, dtype=np.bool_)
        for q in scan_states:
            if q <= m.num_states:
                self.mark_from[q] = False
        self.accelerate = accelerate

    def run(self, budget: int, stop_at_mark: bool = False) -> int:
        pa, ca, wa, ns = self.arrays
        sent = self.halt.mode is HaltMode.SENTINEL
        sent_p = self.halt.sentinel_pc_start if sent else -1
        while True:
            self.dense.ensure(self.wh)
            code, self.state, self.ph, self.ch, wh, self.steps = _kernels.has_run(
                pa, ca, wa, ns, self.p_cells, self.p_runs[0], self.p_runs[1],
                self.c_cells, self.c_runs[0], self.c_runs[1], self.dense.cells,
                self.state, self.ph, self.ch, self.dense.index(self.wh), budget,
                self.steps, sent, self.halt.state, sent_p, self.machine.start_state,
                self.marks, self.mark_from, stop_at_mark, self.counts, self.accelerate)
            self.wh = wh + self.dense.offset
            if code != _kernels.GROW:
                return code

    def config(self) -> HasenjaegerConfig:
        return HasenjaegerConfig(
            self.state,
            CircularTape(self.p_ring.cells, self.ph),
            CircularTape(self.c_ring.cells, self.ch),
            HeadedTape(self.dense.sparse(), self.wh))

    def w_tape(self) -> HeadedTape:
        return HeadedTape(self.dense.sparse(), self.wh)

    def rule_counts(self) -> dict:
        out: dict = {}
        for key, r in self.machine.rules.items():
            k = int(self.counts[key])
            if k:
                out[r.number] = out.get(r.number, 0) + k
        return out

    def result(self, code: int) -> HasRunResult:
        status = {_kernels.LOOP: Status.LOOP_DETECTED}.get(code, Status.BUDGET_EXCEEDED)
        return HasRunResult(status, self.steps, self.config(), 0, self.rule_counts())
