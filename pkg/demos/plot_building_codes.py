"""
Building codes
==============

Two ways to write down a bivariate-bicycle code, and how to read off its
dimension without building a matrix.
"""

import numpy as np

from bbcodes import CodeSpec, build_checks, code_params, dimension, dimension_coprime
from bbcodes.codes import gcd_with_modulus, tanner_components
from bbcodes.polyring import factorize_circulant, format_uni

##############################################################################
# Bivariate form
# --------------
#
# A code is fixed by two polynomials in commuting shifts ``x`` and ``y`` of
# orders ``l`` and ``m``. ``build_checks`` expands them into the X and Z
# check matrices, which always commute.

spec = CodeSpec.xy(3, 9, "1+y2+y4", "y3+x+x2")
pc = build_checks(spec)
hx, hz = pc.h_x.to_dense(), pc.h_z.to_dense()
print(hx.shape, hz.shape)
print("commute:", not np.any((hx.astype(int) @ hz.T.astype(int)) % 2))
print(code_params(spec))

##############################################################################
# Row and column weights equal the number of terms in each polynomial.

print("row weights:", set(hx.sum(axis=1).tolist()), "column weights:", set(hx.sum(axis=0).tolist()))
print("Tanner components:", tanner_components(pc))

##############################################################################
# Coprime form
# ------------
#
# When ``gcd(l, m) = 1`` the pair can be written in the single variable
# ``pi = xy``. The code is then cyclic of length ``lm`` and its dimension is
# twice the degree of ``gcd(a, b, pi^lm + 1)``.

cop = CodeSpec.pi(3, 5, "1+p+p2", "p+p3+p8")
g = gcd_with_modulus(cop.a_uni, cop.b_uni, 15)
print("g =", format_uni(g), "-> k =", dimension_coprime(cop.a_uni, cop.b_uni, 15))
print("rank gives k =", dimension(build_checks(cop)))

##############################################################################
# Which ``g`` are available depends on how ``pi^N + 1`` factors.

for N in (15, 21, 35):
    fact = factorize_circulant(N)
    print(N, [f"{format_uni(f)}^{e}" if e > 1 else format_uni(f) for f, e in fact.factors])
