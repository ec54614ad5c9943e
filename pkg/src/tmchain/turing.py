"""Binary Turing machines and their non-erasing restriction.

State 0 is the start state and state ``num_states - 1`` the halt state. The
transition table must be total on every other state and empty on the halt
state; that is enforced once, by :func:`validate_tm`, so the interpreters
never meet a missing rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple

import numpy as np

from . import _kernels
from .tapes import HeadedTape, L, R, SparseBitTape, dense_to_sparse


class Status(Enum):
    HALTED = "halted"
    BUDGET_EXCEEDED = "budget-exceeded"
    LOOP_DETECTED = "loop-detected"


HALTED = Status.HALTED


class TmRule(NamedTuple):
    from_state: int
    read: int
    write: int
    move: str
    to_state: int


class Issue(NamedTuple):
    kind: str  # MissingRule, DuplicateRule, HaltStateRule, StateOutOfRange, BadSymbol, ErasingRule
    state: int
    symbol: int | None = None

    def __str__(self):
        if self.symbol is None:
            return f"{self.kind}({self.state})"
        return f"{self.kind}({self.state},{self.symbol})"


class InvalidMachine(ValueError):
    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(map(str, self.issues)))


@dataclass(frozen=True)
class TuringMachine:
    num_states: int
    rules: dict  # (state, read bit) -> TmRule

    @property
    def halt_state(self) -> int:
        return self.num_states - 1

    def rule(self, state: int, bit: int) -> TmRule:
        return self.rules[state, bit]

    def quintuples(self) -> list[TmRule]:
        return [self.rules[k] for k in sorted(self.rules)]

    def is_non_erasing(self) -> bool:
        return not any(r.read == 1 and r.write == 0 for r in self.rules.values())

    def arrays(self):
        """Dense ``(write, move, next)`` tables for the compiled loop; the
        halt row is never read."""
        n = self.num_states
        write = np.zeros((n, 2), dtype=np.uint8)
        move = np.zeros((n, 2), dtype=np.int64)
        nxt = np.zeros((n, 2), dtype=np.int64)
        for (q, b), r in self.rules.items():
            write[q, b] = r.write
            move[q, b] = 1 if r.move == R else -1
            nxt[q, b] = r.to_state
        return write, move, nxt

    def __hash__(self):
        return hash((self.num_states, tuple(self.quintuples())))

    def __eq__(self, other):
        return (isinstance(other, TuringMachine)
                and self.num_states == other.num_states
                and self.rules == other.rules)


class NonErasingMachine(TuringMachine):
    """A :class:`TuringMachine` with no rule that overwrites 1 with 0."""


def _as_rule(r) -> TmRule:
    q, a, b, d, q2 = r
    return TmRule(int(q), int(a), int(b), str(d).upper(), int(q2))


def check_tm(num_states: int, rules: Iterable) -> list[Issue]:
    """All reasons a raw description fails to be a binary Turing machine."""
    issues = []
    if num_states < 2:
        issues.append(Issue("StateOutOfRange", num_states))
        return issues
    halt = num_states - 1
    seen = {}
    for raw in rules:
        r = _as_rule(raw)
        if not (0 <= r.from_state < num_states and 0 <= r.to_state < num_states):
            issues.append(Issue("StateOutOfRange", r.from_state if not 0 <= r.from_state < num_states else r.to_state))
            continue
        if r.read not in (0, 1) or r.write not in (0, 1) or r.move not in (L, R):
            issues.append(Issue("BadSymbol", r.from_state, r.read))
            continue
        if r.from_state == halt:
            issues.append(Issue("HaltStateRule", r.from_state, r.read))
            continue
        key = (r.from_state, r.read)
        if key in seen:
            issues.append(Issue("DuplicateRule", *key))
            continue
        seen[key] = r
    for q in range(halt):
        for b in (0, 1):
            if (q, b) not in seen:
                issues.append(Issue("MissingRule", q, b))
    return issues


def validate_tm(num_states: int, rules: Iterable) -> TuringMachine:
    rules = [_as_rule(r) for r in rules]
    issues = check_tm(num_states, rules)
    if issues:
        raise InvalidMachine(issues)
    return TuringMachine(num_states, {(r.from_state, r.read): r for r in rules})


def validate_netm(m: TuringMachine) -> NonErasingMachine:
    issues = [Issue("ErasingRule", r.from_state)
              for r in m.quintuples() if r.read == 1 and r.write == 0]
    if issues:
        raise InvalidMachine(issues)
    return NonErasingMachine(m.num_states, dict(m.rules))


@dataclass(frozen=True)
class TmConfig:
    state: int
    tape: HeadedTape

    @property
    def head(self) -> int:
        return self.tape.head


def tm_step(m: TuringMachine, c: TmConfig):
    """One transition, or :data:`HALTED` when ``c`` is already in the halt state."""
    if c.state == m.halt_state:
        return HALTED
    r = m.rules[c.state, c.tape.read()]
    head = c.tape.head
    tape = c.tape.tape.write(head, r.write)
    head += 1 if r.move == R else -1
    return TmConfig(r.to_state, HeadedTape(tape, head))


@dataclass(frozen=True)
class RunResult:
    status: Status
    steps: int
    final: object
    erasures: int = 0  # cells that went 1 -> 0 during the run

    @property
    def halted(self) -> bool:
        return self.status is Status.HALTED


class DenseTape:
    """Growable uint8 array holding a window of a sparse tape."""

    def __init__(self, tape: SparseBitTape, *points: int, pad: int = 64):
        pts = set(tape.ones).union(points) or {0}
        lo, hi = min(pts), max(pts)
        self.offset = lo - pad
        self.cells = tape.to_array(self.offset, hi + pad + 1)

    def index(self, i: int) -> int:
        return i - self.offset

    def ensure(self, i: int) -> None:
        """Grow so that absolute index ``i`` is inside the array."""
        j = i - self.offset
        n = len(self.cells)
        if 0 <= j < n:
            return
        extra = max(n, abs(j) + 64)
        if j < 0:
            self.cells = np.concatenate([np.zeros(extra, dtype=np.uint8), self.cells])
            self.offset -= extra
        else:
            self.cells = np.concatenate([self.cells, np.zeros(extra, dtype=np.uint8)])

    def sparse(self) -> SparseBitTape:
        return dense_to_sparse(self.cells, self.offset)

    def ones(self) -> int:
        return int(self.cells.sum())


class TmRunner:
    """Resumable compiled run of a Turing machine.

    ``mark_states`` lists states whose entry ends a :meth:`run` call early
    when ``stop_at_mark`` is set; the chain verifier uses this to snapshot
    simulated-step boundaries.
    """

    def __init__(self, m: TuringMachine, tape: HeadedTape, state: int = 0,
                 mark_states: Iterable[int] = ()):
        self.machine = m
        self.arrays = m.arrays()
        self.dense = DenseTape(tape.tape, tape.head)
        self.head = tape.head
        self.state = state
        self.steps = 0
        self.erasures = 0
        self.marks = np.zeros(m.num_states, dtype=np.bool_)
        for q in mark_states:
            self.marks[q] = True

    def run(self, budget: int, stop_at_mark: bool = False) -> int:
        write, move, nxt = self.arrays
        while True:
            self.dense.ensure(self.head)
            code, h, self.state, self.steps, self.erasures = _kernels.tm_run(
                write, move, nxt, self.machine.halt_state, self.dense.cells,
                self.dense.index(self.head), self.state, budget, self.steps,
                self.marks, stop_at_mark, self.erasures)
            self.head = h + self.dense.offset
            if code != _kernels.GROW:
                return code

    def config(self) -> TmConfig:
        return TmConfig(self.state, HeadedTape(self.dense.sparse(), self.head))

    def result(self, code: int) -> RunResult:
        status = Status.HALTED if code == _kernels.HALTED else Status.BUDGET_EXCEEDED
        return RunResult(status, self.steps, self.config(), self.erasures)


def tm_run(m: TuringMachine, tape: HeadedTape, start_state: int = 0,
           budget: int = 10_000, *, fast: bool = True) -> RunResult:
    if budget < 0:
        raise ValueError("budget must be non-negative")
    if fast:
        runner = TmRunner(m, tape, start_state)
        return runner.result(runner.run(budget))
    c = TmConfig(start_state, tape)
    steps = erasures = 0
    while True:
        if c.state == m.halt_state:
            return RunResult(Status.HALTED, steps, c, erasures)
        if steps >= budget:
            return RunResult(Status.BUDGET_EXCEEDED, steps, c, erasures)
        head, before = c.tape.head, c.tape.read()
        c = tm_step(m, c)
        if before == 1 and c.tape.tape.read(head) == 0:
            erasures += 1
        steps += 1


# ---- .tm / .netm text format -------------------------------------------

def parse_tm(text: str) -> tuple[int, list[TmRule], list[str]]:
    """Parse ``.tm`` text into ``(num_states, rules, comments)`` without
    validating totality."""
    num_states = None
    rules, comments = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        parts = line.split("#", 1)[0].split()
        if parts[0] == "states" and len(parts) == 2:
            num_states = int(parts[1])
        elif parts[0] == "rule" and len(parts) == 6:
            rules.append(_as_rule(parts[1:]))
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}")
    if num_states is None:
        raise ValueError("missing 'states <N>' line")
    return num_states, rules, comments


def loads_tm(text: str, non_erasing: bool = False) -> TuringMachine:
    n, rules, _ = parse_tm(text)
    m = validate_tm(n, rules)
    return validate_netm(m) if non_erasing else m


def dumps_tm(m: TuringMachine, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"states {m.num_states}")
    lines += [f"rule {r.from_state} {r.read} {r.write} {r.move} {r.to_state}"
              for r in m.quintuples()]
    return "\n".join(lines) + "\n"
