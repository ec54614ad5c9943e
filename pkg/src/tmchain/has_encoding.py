"""Encode a Wang B program as a start configuration of Hasenjaeger's machine.

Instructions become words with exactly one 1: ``M -> 1``, ``R -> 01``,
``L -> 001`` and ``J(x) -> 000 0^y 1``, where ``y`` counts how many encoded
instructions the jump scans back over on the circular P tape. A self-jump
``J(n)`` is appended so that a halted program spins in a fixed ten-step loop.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .hasenjaeger import HaltMode, HaltRule, HasenjaegerConfig
from .tapes import CircularTape, HeadedTape
from .wang import WangProgram, M

PHYSICAL_CELLS = 18


class PhysicalLimitError(ValueError):
    pass


class NoFinalMarkWarning(UserWarning):
    pass


def jump_offset(k: int, x: int, n: int) -> int:
    """Zero padding ``y`` for a jump at position ``k`` to ``x`` in a program of
    ``n`` instructions (the sentinel sits at position ``n``)."""
    if not (0 <= k <= n and 0 <= x <= n):
        raise ValueError(f"jump {k}->{x} outside 0..{n}")
    return k - x if x <= k else n + 1 + k - x


def encode_instruction(ins, k: int, n: int) -> str:
    if ins.op == "M":
        return "1"
    if ins.op == "R":
        return "01"
    if ins.op == "L":
        return "001"
    return "000" + "0" * jump_offset(k, ins.target, n) + "1"


@dataclass(frozen=True)
class EncodedProgram:
    bits: str
    block_starts: tuple  # leftmost bit of each encoded instruction, sentinel last
    n: int

    @property
    def sentinel_start(self) -> int:
        return self.block_starts[self.n]


def encode_program(p: WangProgram, *, append_mark: bool = False) -> EncodedProgram:
    """Concatenate the instruction words and the ``J(n)`` sentinel.

    A program that does not end in M may leave W reading 0 when it halts, in
    which case the sentinel falls through instead of looping. That is only
    warned about unless ``append_mark`` asks for a trailing M.
    """
    if p[len(p) - 1].op != "M":
        if append_mark:
            p = WangProgram(p.instructions + (M,))
        else:
            warnings.warn("program does not end with M; halting may not be detected",
                          NoFinalMarkWarning, stacklevel=2)
    n = len(p)
    words, starts, pos = [], [], 0
    for k, ins in enumerate(list(p) + [None]):
        word = encode_instruction(ins, k, n) if ins is not None else "000" + "0" * jump_offset(n, n, n) + "1"
        starts.append(pos)
        words.append(word)
        pos += len(word)
    return EncodedProgram("".join(words), tuple(starts), n)


def counter_tape(n: int) -> CircularTape:
    """``n + 2`` cells, all 1 except cell 0; the head starts on the 0."""
    if n < 1:
        raise ValueError("counter tape needs n >= 1")
    return CircularTape(b"\x00" + b"\x01" * (n + 1), 0)


@dataclass(frozen=True)
class Assembly:
    config: HasenjaegerConfig
    halt: HaltRule
    encoded: EncodedProgram


def assemble(p: WangProgram, tape: HeadedTape = HeadedTape(), *,
             append_mark: bool = False, physical: bool = False) -> Assembly:
    """Start configuration that simulates ``p`` on ``tape``: P holds the
    encoding with its head on instruction 0, C is the counter ring with its
    head on the 0, W is ``tape`` unchanged, and the state is q1."""
    enc = encode_program(p, append_mark=append_mark)
    ctape = counter_tape(enc.n)
    if physical:
        if len(enc.bits) > PHYSICAL_CELLS:
            raise PhysicalLimitError(f"P needs {len(enc.bits)} cells, hardware has {PHYSICAL_CELLS}")
        if len(ctape) > PHYSICAL_CELLS:
            raise PhysicalLimitError(f"C needs {len(ctape)} cells, hardware has {PHYSICAL_CELLS}")
    ptape = CircularTape.from_string(enc.bits, enc.block_starts[0])
    cfg = HasenjaegerConfig(1, ptape, ctape, tape)
    return Assembly(cfg, HaltRule(HaltMode.SENTINEL, enc.sentinel_start), enc)


def manifest(asm: Assembly) -> str:
    """Plain-text description of an assembled configuration."""
    cfg = asm.config
    offset, wbits = cfg.w.window()
    lines = [
        f"n: {asm.encoded.n}",
        f"P: {cfg.p.bits}",
        f"P_head: {cfg.p.head}",
        f"C: {cfg.c.bits}",
        f"C_head: {cfg.c.head}",
        f"W: {wbits}",
        f"W_offset: {offset}",
        f"W_head: {cfg.w.head}",
        f"state: {cfg.state}",
        f"sentinel: {asm.halt.sentinel_pc_start}",
        "block_starts: " + ",".join(map(str, asm.encoded.block_starts)),
    ]
    return "\n".join(lines) + "\n"


def load_manifest(text: str) -> Assembly:
    fields = {}
    for line in text.splitlines():
        if ":" in line and not line.lstrip().startswith("#"):
            k, v = line.split(":", 1)
            fields[k.strip()] = v.strip()
    n = int(fields["n"])
    starts = tuple(int(s) for s in fields["block_starts"].split(","))
    ptape = CircularTape.from_string(fields["P"], int(fields["P_head"]))
    ctape = CircularTape.from_string(fields["C"], int(fields["C_head"]))
    w = HeadedTape.from_string(fields["W"], int(fields["W_head"]), int(fields["W_offset"]))
    cfg = HasenjaegerConfig(int(fields["state"]), ptape, ctape, w)
    enc = EncodedProgram(fields["P"], starts, n)
    return Assembly(cfg, HaltRule(HaltMode.SENTINEL, int(fields["sentinel"])), enc)
