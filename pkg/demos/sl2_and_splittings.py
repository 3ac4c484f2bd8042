"""
Lefschetz modules and their canonical splittings
================================================

The cohomology of P^2, its Lambda operator, and the three-step splitting
of a small filtered module.
"""

from lefkit.lefschetz import lambda_operator, primitive_parts
from lefkit.models import arithmetic_surface_toy, projective_space_module
from lefkit.splitting import three_step_split, verify_block_form

# P^2: one line per degree, L multiplies by the hyperplane class
M, P = projective_space_module(2)
D = primitive_parts(M)
print("primitive degrees of P^2:", sorted(i for i, b in D.primitive_bases.items() if b))

Lam = lambda_operator(M)
for i in M.degrees:
    print(f"Lambda on degree {i}:", Lam.block(i).to_json())

# a filtered module: the Arakelov Chow group of a toy arithmetic surface
d = arithmetic_surface_toy(2, 6, [[-1]])
S = three_step_split(d.filtered)
print("alpha0 in degree 1:", S.alpha0.block(1).to_json())
print("beta in degree 0:", S.beta.block(0).to_json())
print("block form holds:", verify_block_form(d.filtered, S))
