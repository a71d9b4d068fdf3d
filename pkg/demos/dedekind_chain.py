"""An unbounded chain of rescaled L2 norms and a finite greatest lower bound."""

from idealspace import dedekind_demo

out = dedekind_demo(n_max=50, lower_bounds=20)
for name, rep in out.items():
    print(f"{name:>8}: {rep.verdict}, {rep.instances} instances, max violation "
          f"{rep.max_violation:.2e}")
