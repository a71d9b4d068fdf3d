"""Two atoms are enough to break distributivity of the lattice of ideal spaces.

The sum norm is computed twice: by the conic solver and by brute-force grid
search over decompositions x = u + v.
"""

from idealspace import Intersect, Lp, Sum, make_space, norm, vector
from idealspace.oracles import batch_norm

E, F, G = Lp("3/2"), Lp(1), Lp(3)
space = make_space([0.7256, 0.5931])
x = vector([-0.03355, 0.012265], space)

lhs = Sum(E, Intersect(F, G))
rhs = Intersect(Sum(E, F), Sum(E, G))
for label, e in [("E+(F∩G)", lhs), ("(E+F)∩(E+G)", rhs)]:
    solver = norm(e, x).value
    grid = batch_norm(e, x.values, space.weights)[0]
    print(f"{label:>14}: solver {solver:.10f}  grid {grid:.10f}")

a, b = norm(lhs, x).value, norm(rhs, x).value
print(f"relative gap {(a - b) / b:.3%}; the lattice identity needs 0")
