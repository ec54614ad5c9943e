"""
The whole chain and its slowdown
================================

TM -> NETM -> Wang -> Hasenjaeger, checked at every simulated step.
"""

import numpy as np

from tmchain.corpus import incrementer, incrementer_input
from tmchain.workbench import bench_slowdown, bench_tsv, golden_table1, run_chain

rep = run_chain(incrementer(2), incrementer_input(2), budget=50)
print(rep.to_text())

print(golden_table1().to_text())

rows = bench_slowdown("incrementer", [1, 2, 3, 4, 8, 16])
print(bench_tsv(rows))

# the NETM level is cubic: fit log t_netm against log (t_tm + 1)
t = np.array([r.t_tm + 1 for r in rows], dtype=float)
n = np.array([r.t_netm for r in rows], dtype=float)
slope = np.polyfit(np.log(t), np.log(n), 1)[0]
print(f"log-log slope of netm steps: {slope:.2f}")
