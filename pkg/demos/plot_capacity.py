"""
Code-capacity logical error rates
=================================

Independent X and Z flips on data qubits, decoded with BP-OSD. The output is
a CSV table for plotting elsewhere.
"""

from bbcodes import CodeSpec
from bbcodes.sim import sweep, to_csv

##############################################################################
# A short sweep
# -------------
#
# Each point stops after a fixed number of logical failures. The 95% Wilson
# interval comes with every row.

codes = {
    30: CodeSpec.pi(3, 5, "1+p+p2", "p+p3+p8"),
    42: CodeSpec.pi(3, 7, "1+p2+p3", "p+p3+p11"),
}
p_list = [0.02, 0.04, 0.06]
for n, spec in codes.items():
    results = sweep(spec, p_list, stop=50, seed=1, max_shots=20_000)
    print(f"n = {n}")
    print(to_csv(results))

##############################################################################
# At equal ``p`` the 30-qubit code sits below the 42-qubit one. With only
# 50 failures per point the intervals are wide; raise ``stop`` to separate
# them cleanly.
