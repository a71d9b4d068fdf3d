"""Rebinding a symmetric space to another measure space of the same mass."""

from idealspace import (LorentzProfile, LpProfile, SymmetricSpace, check_transfer_isomorphism,
                        indicator, make_space, mekler_transfer, symmetric_norm)

mu = make_space([0.5, 0.5], "probability")
nu = make_space([0.25, 0.25, 0.25, 0.25], "probability")
S = SymmetricSpace(LpProfile(2), mu)
T = mekler_transfer(S, nu)
print("half-measure indicator:", symmetric_norm(S, indicator(mu, {0})).value,
      symmetric_norm(T, indicator(nu, {1, 2})).value)

E = SymmetricSpace(LpProfile(1), mu)
F = SymmetricSpace(LorentzProfile(("3/2", 1, "1/2")), mu)
rep = check_transfer_isomorphism(E, F, nu, samples=6)
print(f"transfer checks: {rep.verdict}; raw maxima {rep.details[-1]}")
