"""
Minimum distance
================

Exhaustive search settles the distance of small codes. For larger ones a
decoder-driven probe returns witnesses, which bound the distance from above.
"""

import time

from bbcodes import CodeSpec, LogicalTestContext, build_checks, distance_upperbound, exact_distance

##############################################################################
# Exact distance
# --------------
#
# The search splits each candidate logical into two halves and matches
# syndromes, so weight ``w`` costs about ``C(n, w/2)`` subsets.

ctx = LogicalTestContext(build_checks(CodeSpec.pi(3, 5, "1+p+p2", "p+p3+p8")))
rep = exact_distance(ctx, 8)
print(f"[[{ctx.n},{ctx.k},{rep.d_exact}]] witness support:", rep.witness.nonzero()[0])

##############################################################################
# Probing
# -------
#
# Each probe decodes a random single-qubit logical test. The residual is a
# logical operator whose weight bounds ``d``.

ctx = LogicalTestContext(build_checks(CodeSpec.xy(3, 9, "1+y2+y4", "y3+x+x2")))
for trials in (10, 100, 1000):
    print(trials, "trials ->", distance_upperbound(ctx, 1, trials, seed=0).d_upper)

##############################################################################
# Equivalent-looking codes that are not
# -------------------------------------
#
# Transposing only ``a`` keeps ``k`` but can change the distance. Both codes
# below have ``k = 8``; the second has a weight-8 logical, while an
# exhaustive check rules out any logical of weight 8 or less in the first.

first = CodeSpec.xy(6, 12, "x4+y2+y6", "y5+x3+x4")
second = first.transform(5)
c1, c2 = (LogicalTestContext(build_checks(s)) for s in (first, second))
print("k:", c1.k, c2.k)
print("probe bound on the second:", distance_upperbound(c2, 1, 2000, seed=0, target=8).d_upper)
t = time.time()
print("first has a logical of weight <= 8:", exact_distance(c1, 8).d_exact is not None,
      f"({time.time() - t:.1f} s)")
