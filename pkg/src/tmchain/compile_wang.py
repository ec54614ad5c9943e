"""Compile a non-erasing Turing machine into a Wang B program.

Simulated symbols are pairs on the Wang tape, ``0 -> 10`` and ``1 -> 11``,
with the Wang head on the left bit of the pair under the simulated head.
State ``q_i`` becomes the block starting at ``13 i``::

    R, J(13i+8), <read-0 case, 6 instructions>, <read-1 case, 5 instructions>

The ``R`` looks at the right bit of the pair; a 1 jumps to the read-1 case.
Each case ends on the left bit of the next pair with a taken ``J(13j)``.
Stepping onto fresh tape reads ``00``, which the case repairs to ``10`` by
marking its left bit. Spare ``M`` instructions hit cells that already hold
1 and keep every case at a fixed length. The halt state's block start is a
single trailing ``M``.

The Hooper variant obeys three extra rules: the instruction after a jump is
``L`` or ``R``, every jump lands on ``L`` or ``R``, and ``M`` is only run on
a blank cell. Blocks grow to 54 instructions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tapes import HeadedTape, SparseBitTape
from .turing import InvalidMachine, NonErasingMachine, validate_netm
from .wang import J, L, M, R, WangConfig, WangProgram

STANDARD = 13
HOOPER = 54


@dataclass(frozen=True)
class WangCodec:
    block_size: int = STANDARD
    trailer: int = 1
    symbols: tuple = ("10", "11")

    def pc(self, state: int) -> int:
        return self.block_size * state

    def header(self) -> list[str]:
        return [f"block {self.block_size}", f"trailer {self.trailer}",
                f"symbols 0={self.symbols[0]} 1={self.symbols[1]}"]


class MisalignedPair(ValueError):
    pass


def _checked(m) -> NonErasingMachine:
    try:
        return validate_netm(m)
    except InvalidMachine as e:
        raise InvalidMachine(e.issues) from None


def _case(read: int, write: int, move: str) -> list:
    """The case body without its final jump."""
    if read == 0:
        return {
            (0, "R"): [R, M, M, M, M],
            (0, "L"): [L, L, L, M, M],
            (1, "R"): [M, R, M, M, M],
            (1, "L"): [M, L, L, L, M],
        }[write, move]
    return [R, M, M, M] if move == "R" else [L, L, L, M]


def compile_netm_to_wang(m: NonErasingMachine) -> tuple[WangProgram, WangCodec]:
    m = _checked(m)
    out = []
    for i in range(m.halt_state):
        out += [R, J(STANDARD * i + 8)]
        for b in (0, 1):
            r = m.rule(i, b)
            out += _case(b, r.write, r.move) + [J(STANDARD * r.to_state)]
    out.append(M)
    return WangProgram(tuple(out)), WangCodec(STANDARD, 1)


def _mark(k: int) -> list:
    """Conditional mark starting at absolute index ``k``: skip the M when the
    cell already holds 1."""
    return [J(k + 4), R, L, M, R, L]


def _hooper_case(base: int, body: list, target: int, padded: bool) -> list:
    out = []
    for ins in body:
        out += _mark(base + len(out)) if ins == M else [ins]
    if padded:
        out += [L, R] * 5
    return out + [J(target), L, R]


def compile_netm_to_hooper(m: NonErasingMachine) -> tuple[WangProgram, WangCodec]:
    """Hooper-restricted blocks of 54 instructions.

    The halt block is ``R, L`` followed by the conditional mark, so the
    jumps into it land on ``R``.
    """
    m = _checked(m)
    out = []
    for i in range(m.halt_state):
        base = HOOPER * i
        out += [R, J(base + 32), L, R]
        for b in (0, 1):
            r = m.rule(i, b)
            out += _hooper_case(len(out), _case(b, r.write, r.move),
                                HOOPER * r.to_state, r.move == "L")
        assert len(out) == base + HOOPER
    k = len(out)
    out += [R, L] + _mark(k + 2)
    return WangProgram(tuple(out)), WangCodec(HOOPER, 8)


def encode_wang_tape(tape: HeadedTape, state: int = 0,
                     codec: WangCodec = WangCodec()) -> WangConfig:
    """Pairs for every cell spanned by the support, the head and cell 0; the
    head goes on the left bit of its pair."""
    offset, bits = tape.tape.window(tape.head, 0)
    ones = set()
    for j, ch in enumerate(bits):
        i = offset + j
        ones.add(2 * i)
        if ch == "1":
            ones.add(2 * i + 1)
    return WangConfig(codec.pc(state), HeadedTape(SparseBitTape(frozenset(ones)), 2 * tape.head))


def decode_wang_tape(c: WangConfig | HeadedTape) -> HeadedTape:
    ht = c.tape if isinstance(c, WangConfig) else c
    t = ht.tape
    pair = ht.head // 2
    if not t.read(2 * pair):
        raise MisalignedPair(f"pair {pair} under the head starts with 0")
    ones = frozenset(i // 2 for i in t.ones if i % 2 == 1)
    return HeadedTape(SparseBitTape(ones), pair)
