"""Compiled inner loops for long runs.

Every kernel mutates its tape array in place and returns a status code plus
the scalar machine state, so the Python wrapper can grow the tape or take a
checkpoint snapshot and then resume. The pure-Python steppers in the model
modules define the semantics; these loops are checked against them.
"""

import numpy as np
from numba import njit

HALTED = 0
BUDGET = 1
GROW = 2
CHECKPOINT = 3
LOOP = 4

# Wang opcodes
OP_L, OP_R, OP_M, OP_J = 0, 1, 2, 3

# Hasenjaeger W actions (P and C use -1/0/+1)
W_MARK = 2


@njit(cache=True)
def tm_run(write, move, nxt, halt, tape, head, state, budget, steps,
           mark_states, stop_at_mark, erasures):
    n = tape.shape[0]
    while True:
        if state == halt:
            return HALTED, head, state, steps, erasures
        if steps >= budget:
            return BUDGET, head, state, steps, erasures
        if head < 0 or head >= n:
            return GROW, head, state, steps, erasures
        b = tape[head]
        w = write[state, b]
        if b == 1 and w == 0:
            erasures += 1
        tape[head] = w
        d = move[state, b]
        state = nxt[state, b]
        head += d
        steps += 1
        if stop_at_mark and mark_states[state]:
            return CHECKPOINT, head, state, steps, erasures


@njit(cache=True)
def wang_run(op, arg, tape, head, pc, budget, steps, mark_pc, stop_at_mark,
             exec_count, taken_count, m_on_marked, first_marked):
    n = op.shape[0]
    size = tape.shape[0]
    while True:
        if pc >= n:
            return HALTED, head, pc, steps, m_on_marked, first_marked
        if steps >= budget:
            return BUDGET, head, pc, steps, m_on_marked, first_marked
        if head < 0 or head >= size:
            return GROW, head, pc, steps, m_on_marked, first_marked
        o = op[pc]
        exec_count[pc] += 1
        if o == OP_L:
            head -= 1
            pc += 1
        elif o == OP_R:
            head += 1
            pc += 1
        elif o == OP_M:
            if tape[head] == 1:
                if m_on_marked == 0:
                    first_marked = steps + 1
                m_on_marked += 1
            tape[head] = 1
            pc += 1
        else:
            if tape[head] == 1:
                taken_count[pc] += 1
                pc = arg[pc]
            else:
                pc += 1
        steps += 1
        if stop_at_mark and pc < n and mark_pc[pc]:
            return CHECKPOINT, head, pc, steps, m_on_marked, first_marked


@njit(cache=True)
def has_run(pa, ca, wa, ns, ptape, prun_r, prun_l, ctape, crun_r, crun_l,
            wtape, state, ph, ch, wh, budget, steps,
            sentinel_on, sentinel_state, sentinel_p,
            mark_state, mark_p, mark_from, stop_at_mark, rule_counts, accelerate):
    """Step the three-tape machine.

    With ``accelerate`` set, a rule that keeps the state and leaves W in
    place is applied ``k`` times at once, where ``k`` is the number of steps
    before the P or C read could change. The visited configurations are
    exactly those of single stepping; only the loop overhead is skipped.

    A checkpoint fires on entering ``mark_state`` with P on a marked cell,
    but only when the state just left has ``mark_from`` set.
    """
    plen = ptape.shape[0]
    clen = ctape.shape[0]
    wsize = wtape.shape[0]
    while True:
        if wh < 0 or wh >= wsize:
            return GROW, state, ph, ch, wh, steps
        w = wtape[wh]
        if sentinel_on and state == sentinel_state and ph == sentinel_p and w == 1:
            return LOOP, state, ph, ch, wh, steps
        if steps >= budget:
            return BUDGET, state, ph, ch, wh, steps
        p = ptape[ph]
        c = ctape[ch]
        dp = pa[state, p, c, w]
        dc = ca[state, p, c, w]
        aw = wa[state, p, c, w]
        s2 = ns[state, p, c, w]
        k = 1
        if accelerate and s2 == state and aw == 0 and not (stop_at_mark and state == mark_state):
            kp = budget
            if dp == 1:
                kp = np.int64(prun_r[ph])
            elif dp == -1:
                kp = np.int64(prun_l[ph])
            kc = budget
            if dc == 1:
                kc = np.int64(crun_r[ch])
            elif dc == -1:
                kc = np.int64(crun_l[ch])
            k = min(kp, kc)
            if k > budget - steps:
                k = budget - steps
            if sentinel_on and state == sentinel_state and w == 1 and dp != 0:
                j = ((sentinel_p - ph) * dp) % plen
                if j >= 1 and j < k:
                    k = j
            if k < 1:
                k = 1
        rule_counts[state, p, c, w] += k
        ph = (ph + dp * k) % plen
        ch = (ch + dc * k) % clen
        if aw == W_MARK:
            wtape[wh] = 1
        else:
            wh += aw * k
        prev = state
        state = s2
        steps += k
        if stop_at_mark and state == mark_state and mark_p[ph] and mark_from[prev]:
            return CHECKPOINT, state, ph, ch, wh, steps


RUN_CAP = 65535


def run_lengths(bits: np.ndarray):
    """Per-cell length of the run of equal bits going right and going left on
    a ring, capped at the ring length and at ``RUN_CAP`` (stored as uint16
    to keep long program rings affordable)."""
    n = bits.shape[0]
    right = np.ones(n, dtype=np.uint16)
    left = np.ones(n, dtype=np.uint16)
    _fill_runs(bits, right, left)
    return right, left


@njit(cache=True)
def _fill_runs(bits, right, left):
    n = bits.shape[0]
    uniform = True
    for i in range(1, n):
        if bits[i] != bits[0]:
            uniform = False
            break
    cap = min(n, 65535)
    if uniform:
        for i in range(n):
            right[i] = cap
            left[i] = cap
        return
    # start the sweep just after a bit change so runs never straddle the seam
    start = 0
    for i in range(n):
        if bits[i] != bits[(i - 1) % n]:
            start = i
            break
    for t in range(n - 1, -1, -1):
        i = (start + t) % n
        j = (i + 1) % n
        if t < n - 1 and bits[j] == bits[i]:
            right[i] = min(right[j] + 1, cap)
        else:
            right[i] = 1
    for t in range(n):
        i = (start + t) % n
        j = (i - 1) % n
        if t > 0 and bits[j] == bits[i]:
            left[i] = min(left[j] + 1, cap)
        else:
            left[i] = 1
