"""Compile a binary Turing machine into a non-erasing one.

Each simulated cell is a triple ``[marker, hi, lo]``: the pair ``hi lo`` is
``10`` for 0 and ``01`` for 1, and the marker is 1 only on the triple under
the simulated head. A simulated step copies the whole encoded tape to fresh
cells on its right, applying the transition while copying, so nothing is
ever overwritten with 0.

Tape layout, in triples from ``origin``::

    gen 0 | 000 | gen 1 | 000 | gen 2 | ... | gen t | 000 000 ...

A generation ends at the first all-zero triple. One simulated step:

1. From the first triple of the current generation, scan right to the
   triple whose marker is set, read the simulated symbol and *consume* that
   triple by filling its pair to ``11``. The finite control now knows the
   rule to apply.
2. Copy source triples left to right. A copied triple gets its marker set
   (its pair is untouched); the consumed head triple is recognised by its
   ``11`` pair. Each copy walks back to the start of the source (second
   all-zero triple to the left), forward to the first uncopied triple, then
   right past the separator to the first blank triple of the destination,
   where it writes ``0 10`` or ``0 01``.
3. The head triple is written with the rule's symbol. A left move sets the
   marker of the destination triple just before it; a right move sets the
   marker on the next triple written. Moving off either end adds a blank
   triple on that side of the new generation.
4. Go to the first triple of the new generation and continue in the next
   simulated state, or halt there.

Every earlier generation stays on the tape in its consumed form: all
markers set, all pairs intact except the head cell, which reads ``11``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .tapes import HeadedTape, L, R, SparseBitTape
from .turing import InvalidMachine, NonErasingMachine, TuringMachine, validate_netm, validate_tm

HALT = ("HALT",)
TRAP = ("TRAP",)
# Largest measured netm_steps / (t+1)^3 is 24.5 (a 2-state machine that halts
# after one left move off the input); calibration runs live in the tests.
SLOWDOWN_CONSTANT = Fraction(32)


@dataclass(frozen=True)
class NetmCodec:
    origin: int = 0
    triple: tuple = ("marker", "hi", "lo")
    parking: str = "halt with the head on the marker cell of the newest generation"


@dataclass(frozen=True)
class CompiledNetm:
    machine: NonErasingMachine
    codec: NetmCodec
    state_names: tuple  # index -> builder name
    step_states: dict = field(default_factory=dict)  # netm state -> simulated state at a step boundary
    slowdown_constant: Fraction = SLOWDOWN_CONSTANT

    @property
    def start_state(self) -> int:
        return 0


class MalformedRegion(ValueError):
    pass


class _Builder:
    def __init__(self):
        self.table = {}

    def rule(self, name, read, write, move, nxt):
        if (name, read) in self.table:
            raise AssertionError(f"duplicate rule for {name} on {read}")
        if read == 1 and write == 0:
            raise AssertionError(f"erasing rule in {name}")
        self.table[name, read] = (write, move, nxt)

    def keep(self, name, move, nxt, only=(0, 1)):
        for b in only:
            self.rule(name, b, b, move, nxt)


def _finish_target(ctx, halt):
    q2 = ctx[0]
    return HALT if q2 == halt else ("H", q2, True)


def _expand(b: _Builder, name, tm: TuringMachine):
    """Emit both rules for state ``name``."""
    kind = name[0]
    halt = tm.halt_state

    if kind == "TRAP":
        b.keep(name, R, name)
    elif kind == "MOV":
        _, d, k, cont = name
        b.keep(name, d, ("MOV", d, k - 1, cont) if k > 1 else cont)

    # find the head triple of a fresh generation
    elif kind == "H":
        _, q, first = name
        b.rule(name, 1, 1, R, ("Hh", q, first))
        b.rule(name, 0, 0, R, ("MOV", R, 2, ("H", q, False)))
    elif kind == "Hh":
        _, q, le = name
        r1 = tm.rules[q, 1]
        b.rule(name, 1, 1, R, ("Hc0", q, le))
        b.rule(name, 0, 1, L, ("Cmk", (r1.to_state, r1.write, r1.move), le))
    elif kind == "Hc0":
        _, q, le = name
        r0 = tm.rules[q, 0]
        b.rule(name, 0, 1, L, ("MOV", L, 1, ("Cmk", (r0.to_state, r0.write, r0.move), le)))
        b.keep(name, R, TRAP, only=(1,))
    elif kind == "Cmk":
        _, ctx, le = name
        if le and ctx[2] == L:
            blank = ("A", 0, 0, ("back", ctx, (False, False)))
            b.keep(name, R, ("MOV", R, 2, ("SRmk", ("S", blank))))
        else:
            b.keep(name, L, ("SLlo", (1, ("F", ctx, (False, False))), 0))

    # scan left, triple by triple, for the k-th all-zero triple
    elif kind == "SLlo":
        _, job, f = name
        for x in (0, 1):
            b.rule(name, x, x, L, ("SLhi", job, f, x == 0))
    elif kind == "SLhi":
        _, job, f, z = name
        for x in (0, 1):
            b.rule(name, x, x, L, ("SLmk", job, f, z and x == 0))
    elif kind == "SLmk":
        _, job, f, z = name
        k, cont = job
        b.rule(name, 1, 1, L, ("SLlo", job, f))
        if z and f + 1 == k:
            b.rule(name, 0, 0, R, ("MOV", R, 2, cont))
        else:
            b.rule(name, 0, 0, L, ("SLlo", job, f + 1 if z else f))

    # scan right for the first all-zero triple
    elif kind == "SRmk":
        _, job = name
        for x in (0, 1):
            b.rule(name, x, x, R, ("SRhi", job, x == 0))
    elif kind == "SRhi":
        _, job, z = name
        for x in (0, 1):
            b.rule(name, x, x, R, ("SRlo", job, z and x == 0))
    elif kind == "SRlo":
        _, job, z = name
        b.rule(name, 1, 1, R, ("SRmk", job))
        if not z:
            b.rule(name, 0, 0, R, ("SRmk", job))
        elif job[0] == "S":
            b.rule(name, 0, 0, R, ("SRmk", job[1]))
        else:
            _, v, mark, after = job
            b.rule(name, 0, v, L, ("Whi", v, mark, after))

    # write a triple right to left, starting from its lo cell
    elif kind == "Whi":
        _, v, mark, after = name
        b.rule(name, 0, 1 - v, L, ("Wmk", mark, after))
        b.keep(name, R, TRAP, only=(1,))
    elif kind == "Wmk":
        _, mark, after = name
        what, ctx = after[0], after[1]
        if what == "back":
            nxt = ("SLlo", (2, ("F", ctx, after[2])), 0)
        elif what == "markprev":
            nxt = ("MOV", L, 2, ("MPmk", ctx, after[2]))
        else:
            nxt = ("SLlo", (1, _finish_target(ctx, halt)), 0)
        b.rule(name, 0, mark, L, nxt)
        b.keep(name, R, TRAP, only=(1,))
    elif kind == "MPmk":
        _, ctx, fl = name
        b.rule(name, 0, 1, L, ("SLlo", (2, ("F", ctx, fl)), 0))
        b.keep(name, R, TRAP, only=(1,))

    # find and copy the next source triple
    elif kind == "F":
        _, ctx, fl = name
        for m in (0, 1):
            b.rule(name, m, m, R, ("Fhi", ctx, fl, m))
    elif kind == "Fhi":
        _, ctx, fl, m = name
        for h in (0, 1):
            b.rule(name, h, h, R, ("Flo", ctx, fl, m, h))
    elif kind == "Flo":
        _, ctx, fl, m, h = name
        head_done, pending = fl
        q2, w, d = ctx
        for lo in (0, 1):
            if (m, h, lo) == (0, 0, 0):
                if pending:
                    tail = ("A", 0, 1, ("finish", ctx))
                    b.rule(name, 0, 0, R, ("SRmk", tail))
                else:
                    b.rule(name, 0, 0, R, _finish_target(ctx, halt))
            elif m == 0 and h != lo:
                b.rule(name, lo, lo, L, ("MOV", L, 1, ("MKmk", ctx, fl, 0 if h else 1)))
            elif m == 1 and h == 1 and lo == 1:
                if head_done:
                    b.rule(name, 1, 1, R, ("F", ctx, fl))
                else:
                    after = ("back", ctx, (True, True)) if d == R else ("markprev", ctx, (True, False))
                    b.rule(name, 1, 1, R, ("SRmk", ("S", ("A", w, 0, after))))
            elif m == 1 and h != lo:
                b.rule(name, lo, lo, R, ("F", ctx, fl))
            else:
                b.rule(name, lo, lo, R, TRAP)
    elif kind == "MKmk":
        _, ctx, fl, v = name
        head_done, pending = fl
        job = ("S", ("A", v, 1 if pending else 0, ("back", ctx, (head_done, False))))
        b.rule(name, 0, 1, R, ("MOV", R, 2, ("SRmk", job)))
        b.keep(name, R, TRAP, only=(1,))
    else:
        raise AssertionError(f"unknown state {name}")
    return [b.table[name, 0][2], b.table[name, 1][2]]


def compile_tm_to_netm(m: TuringMachine) -> CompiledNetm:
    """Build the non-erasing simulator of ``m``; states are generated only
    when reachable from the start state ``("H", 0, True)``."""
    try:
        m = validate_tm(m.num_states, m.quintuples())
    except InvalidMachine as e:
        raise InvalidMachine(e.issues) from None
    b = _Builder()
    start = ("H", 0, True)
    order = [start]
    seen = {start, HALT}
    todo = deque([start])
    while todo:
        name = todo.popleft()
        for nxt in _expand(b, name, m):
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                todo.append(nxt)
    order.append(HALT)
    index = {name: i for i, name in enumerate(order)}
    rules = []
    for (name, read), (write, move, nxt) in b.table.items():
        rules.append((index[name], read, write, move, index[nxt]))
    netm = validate_netm(validate_tm(len(order), rules))
    step_states = {index[n]: n[1] for n in order if n[0] == "H" and n[2]}
    step_states[index[HALT]] = m.halt_state
    return CompiledNetm(netm, NetmCodec(), tuple(order), step_states)


# ---- tape codec ---------------------------------------------------------------

def encode_netm_input(tape: HeadedTape, codec: NetmCodec = NetmCodec()) -> HeadedTape:
    """Triples for every cell spanned by the support, the head and cell 0;
    the NETM head starts on the first triple's marker."""
    offset, bits = tape.tape.window(tape.head, 0)
    ones = set()
    for j, ch in enumerate(bits):
        i = offset + j
        base = codec.origin + 3 * i
        if i == tape.head:
            ones.add(base)
        ones.add(base + 1 if ch == "0" else base + 2)
    return HeadedTape(SparseBitTape(frozenset(ones)), codec.origin + 3 * offset)


@dataclass(frozen=True)
class Generation:
    start: int  # simulated cell index of the first triple
    values: tuple  # decoded cells; None marks the consumed head cell
    head: int  # simulated head index
    consumed: bool


def _regions(tape: SparseBitTape, origin: int):
    triples = sorted({(i - origin) // 3 for i in tape.ones})
    runs = []
    for t in triples:
        if runs and runs[-1][1] == t - 1:
            runs[-1][1] = t
        else:
            runs.append([t, t])
    return runs


def _read_triple(tape, origin, t):
    base = origin + 3 * t
    return tape.read(base), tape.read(base + 1), tape.read(base + 2)


def generations(tape: SparseBitTape, codec: NetmCodec = NetmCodec()) -> list[Generation]:
    """Decode every generation on a NETM tape, oldest first.

    Simulated positions are recovered by replaying growth: a generation one
    triple longer than its predecessor with its head on the first triple
    grew on the left.
    """
    out = []
    for a, z in _regions(tape, codec.origin):
        trip = [_read_triple(tape, codec.origin, t) for t in range(a, z + 1)]
        consumed = any((h, lo) == (1, 1) for _, h, lo in trip)
        values, heads = [], []
        for j, (mk, h, lo) in enumerate(trip):
            if (h, lo) == (1, 1):
                values.append(None)
                heads.append(j)
            elif (h, lo) in ((1, 0), (0, 1)):
                values.append(0 if h else 1)
                if mk and not consumed:
                    heads.append(j)
            else:
                raise MalformedRegion(f"pair {h}{lo} in triple {a + j}")
        if len(heads) != 1:
            raise MalformedRegion(f"{len(heads)} head markers in region at triple {a}")
        if not out:
            start = a
        else:
            prev = out[-1]
            grew_left = len(values) == len(prev.values) + 1 and heads[0] == 0
            start = prev.start - 1 if grew_left else prev.start
        out.append(Generation(start, tuple(values), start + heads[0], consumed))
    return out


def decode_netm_output(tape: SparseBitTape, codec: NetmCodec = NetmCodec()) -> HeadedTape:
    """Simulated tape and head held by the newest generation."""
    gens = generations(tape, codec)
    if not gens:
        raise MalformedRegion("no encoded region on tape")
    g = gens[-1]
    if g.consumed:
        raise MalformedRegion("newest generation is partly copied")
    ones = frozenset(g.start + j for j, v in enumerate(g.values) if v == 1)
    return HeadedTape(SparseBitTape(ones), g.head)


def dumps_compiled(c: CompiledNetm) -> str:
    from .turing import dumps_tm

    header = [
        "non-erasing simulator (triple encoding)",
        f"origin {c.codec.origin}",
        "layout " + " ".join(c.codec.triple),
        f"parking {c.codec.parking}",
        f"slowdown {c.slowdown_constant}",
        "step_states " + " ".join(f"{k}:{v}" for k, v in sorted(c.step_states.items())),
    ]
    return dumps_tm(c.machine, header)
