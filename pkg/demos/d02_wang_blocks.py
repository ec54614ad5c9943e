"""
Wang B programs from a non-erasing machine
==========================================

Every state becomes a 13-instruction block; the Hooper layout uses 54.
"""

from tmchain.compile_wang import compile_netm_to_hooper, compile_netm_to_wang, decode_wang_tape, encode_wang_tape
from tmchain.tapes import HeadedTape
from tmchain.turing import validate_netm, validate_tm
from tmchain.wang import check_hooper_restrictions, wang_run

# write a 1 and step right
m = validate_netm(validate_tm(2, [(0, 0, 1, "R", 1), (0, 1, 1, "R", 1)]))
prog, codec = compile_netm_to_wang(m)
print(prog)
print("length", len(prog), "=", codec.block_size, "* 1 +", codec.trailer)

start = encode_wang_tape(HeadedTape())
r = wang_run(prog, start.tape)
print("wang:", r.status.value, r.steps, "steps, tape", r.final.tape)
print("decoded:", decode_wang_tape(r.final))

hprog, hcodec = compile_netm_to_hooper(m)
hr = wang_run(hprog, encode_wang_tape(HeadedTape(), 0, hcodec).tape)
print("hooper:", len(hprog), "instructions,", hr.steps, "steps")
print("restriction violations:", check_hooper_restrictions(hprog, hr))
