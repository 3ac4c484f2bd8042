"""
Local heights on a degenerate fiber
===================================

A fiber made of two rational curves meeting in two points, first as a
reduction graph and then rebuilt from its strata.
"""

from lefkit.local import arakelov_lift, bb_lift, conjecture_report, local_height
from lefkit.models import bgs_assemble, cyc2_graph, graph_cycles, reduction_graph_model, two_curve_strata

g = cyc2_graph()
f, m = reduction_graph_model(g)
cycles = graph_cycles(g)
print("cycles:", sorted(cycles))

z1 = m.cycle(*cycles["comp1"])
z2 = m.cycle(*cycles["comp2"])
print("(comp1, comp2) =", local_height(m, z1, z2))
print("(comp1, comp1) =", local_height(m, z1, z1))

# the lift of a vertical class carries a Green's function correction
print("lift of vert1:", *arakelov_lift(m, m.cycle(*cycles["vert1"])).coords)

# a homologically trivial difference of points has a curvature-free lift
diff = m.cycle(1, (1, -1, 0, 0))
print("BB lift of comp1 - comp2:", *bb_lift(m, diff).coords)

# same fiber from the combinatorics of its strata
strata = bgs_assemble(two_curve_strata(points=2)).fiber
print("i^*i_* from strata:", strata.conn.block(1).to_json())
print("conjectures hold:", conjecture_report(strata).all_hold)
