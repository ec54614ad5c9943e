"""
From a Turing machine to a non-erasing one
==========================================

A binary TM may overwrite 1 with 0. A non-erasing machine may not, so it
copies the whole tape forward on every step and never looks back.
"""

from tmchain.compile_netm import compile_tm_to_netm, decode_netm_output, encode_netm_input, generations
from tmchain.corpus import incrementer, incrementer_input
from tmchain.turing import tm_run

# a 3-bit incrementer: 011 + 1 = 100, which erases two 1s on the way
m = incrementer(3)
tape = incrementer_input(3)
ref = tm_run(m, tape)
print("TM:", ref.status.value, ref.steps, "steps, erasures:", ref.erasures)
print("   ", ref.final.tape)

c = compile_tm_to_netm(m)
print("NETM states:", c.machine.num_states, " erasing:", not c.machine.is_non_erasing())

got = tm_run(c.machine, encode_netm_input(tape), budget=10 ** 6)
print("NETM:", got.status.value, got.steps, "steps, erasures:", got.erasures)
print("     decoded", decode_netm_output(got.final.tape.tape))

# the NETM tape keeps one generation per simulated step
for k, g in enumerate(generations(got.final.tape.tape)):
    cells = "".join("?" if v is None else str(v) for v in g.values)
    print(f"  generation {k}: start={g.start} head={g.head} cells={cells}")
