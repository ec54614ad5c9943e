"""
Running a Wang program on Hasenjaeger's machine
===============================================

Three tapes: a read-only ring P holding the program, a counter ring C and
the work tape W. Fourteen rules do everything.
"""

from tmchain.has_encoding import assemble, manifest
from tmchain.hasenjaeger import TABLE1, canonical_machine, has_run
from tmchain.wang import program
from tmchain.workbench import has_instruction_costs

for row in TABLE1:
    print(*row, sep="\t")

p = program("R,M,L,M,R,R,M")
asm = assemble(p)
print(manifest(asm))

r = has_run(canonical_machine(), asm.config, 10_000, asm.halt)
print(r.status.value, "after", r.steps, "steps; W =", r.final.w)
print("rules used:", dict(sorted(r.rule_counts.items())))

# per-instruction cost: M, R, L take 1, 2, 3 steps, a fall-through jump y+4
costs, mismatches, _ = has_instruction_costs(program("M,R,J 0,L,J 1,M"))
for c in costs:
    print(f"  {c.index}: {c.op}{'' if c.y is None else f' y={c.y}'} taken={c.taken} steps={c.steps}")
print("mismatches:", mismatches)
