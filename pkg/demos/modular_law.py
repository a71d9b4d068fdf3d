"""The modular law E + (H ∩ F) = (E + H) ∩ F for E ⊂¹ F, sampled."""

import numpy as np

from idealspace import LInfty, L1, Lp, check_modularity, lambda_proj, norm, rho_proj
from idealspace.measure import FunctionVector, make_space

space = make_space([0.1, 0.2, 0.3, 0.4], "probability")
E, F = LInfty, L1
rng = np.random.default_rng(0)
for H in (Lp(2), Lp(3), Lp("3/2")):
    x = FunctionVector(rng.normal(size=4), space)
    lam, rho = norm(lambda_proj(E, F, H), x).value, norm(rho_proj(E, F, H), x).value
    print(f"H = {H}: lambda {lam:.10f}  rho {rho:.10f}")

rep = check_modularity(E, F, Lp(2), space, samples=50, seed=1)
print(f"{rep.law}: {rep.verdict} on {rep.instances} vectors, max violation {rep.max_violation:.2e}")
