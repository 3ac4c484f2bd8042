"""
Decomposing an arithmetic surface
=================================

A toy with deg L_K = 2, c1(L)^2 = 6 and a rank one Neron-Tate lattice.
"""

from lefkit.arakelov import decompose, gs_beilinson_equivalence, l_lift, l_pairing
from lefkit.models import arithmetic_surface_toy
from lefkit.pairing import find_polarization_twist


def show(v):
    return " ".join(str(x) for x in v)


d = arithmetic_surface_toy(2, 6, [[-1]])
S = decompose(d)
print("height of the generic fiber:", S.h_L)
print("beta([X_K]):", show(S.beta_XK()))
print("c1(L0) in degree 1:", S.L0.block(0).to_json())

# L-liftings: the hyperplane class and the Pic^0 generator
print("lift of c1(L_K):", show(l_lift(d, S, 1, (1, 0))))
print("lift of P:", show(l_lift(d, S, 1, (0, 1))))
print("<P, P>_L =", l_pairing(d, S, 1, (0, 1), (0, 1)))

r = gs_beilinson_equivalence(d)
print("Gillet-Soule:", r.gs, " Beilinson:", r.beilinson)

# with c1(L)^2 negative the polarization needs a twist by X_eps
for Lsq in (6, -14, -20):
    t = arithmetic_surface_toy(2, Lsq, [[-1]])
    print(f"c1(L)^2 = {Lsq}: twist c =", find_polarization_twist(t.filtered, t.pair, t.eps_op))
