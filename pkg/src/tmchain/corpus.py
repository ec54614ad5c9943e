"""Small machines used for verification and benchmarks."""

from __future__ import annotations

import itertools

from .tapes import HeadedTape
from .turing import NonErasingMachine, TuringMachine, validate_netm, validate_tm

_ACTIONS = list(itertools.product((0, 1), ("L", "R"), (0, 1)))  # write, move, next


def two_state_tms() -> list[TuringMachine]:
    """All 64 machines with one working state and a halt state."""
    return [validate_tm(2, [(0, 0, *a0), (0, 1, *a1)])
            for a0, a1 in itertools.product(_ACTIONS, _ACTIONS)]


def two_state_netms() -> list[NonErasingMachine]:
    """The 32 two-state machines whose read-1 rule writes 1."""
    return [validate_netm(m) for m in two_state_tms() if m.rule(0, 1).write == 1]


def incrementer(width: int) -> TuringMachine:
    """Add one to a ``width``-bit big-endian number whose top bit sits
    under the head: walk right to the last bit, then carry leftwards."""
    if width < 1:
        raise ValueError("width must be positive")
    rules = []
    for i in range(width - 1):
        rules += [(i, 0, 0, "R", i + 1), (i, 1, 1, "R", i + 1)]
    carry, halt = width - 1, width
    rules += [(carry, 1, 0, "L", carry), (carry, 0, 1, "L", halt)]
    return validate_tm(width + 1, rules)


def incrementer_input(width: int) -> HeadedTape:
    """``0 1^(width-1)``, the input that carries all the way to the top bit."""
    return HeadedTape.from_string("0" + "1" * (width - 1))


def unary_counter() -> TuringMachine:
    """Scan right over a block of 1s and append one more."""
    return validate_tm(2, [(0, 1, 1, "R", 0), (0, 0, 1, "R", 1)])


def zigzag() -> TuringMachine:
    """Step right then left forever without writing anything new."""
    return validate_tm(3, [(0, 0, 0, "R", 1), (0, 1, 1, "R", 1),
                           (1, 0, 0, "L", 0), (1, 1, 1, "L", 0)])


CORPUS_INPUTS = ("", "101", "0110")

FAMILIES = {"incrementer": (incrementer, incrementer_input)}
