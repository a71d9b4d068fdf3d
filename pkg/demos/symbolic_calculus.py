"""Normal forms, zero parts, the maps k and k', and the closure checks."""

from idealspace import Dual, Intersect, L1, LInfty, Lp, ZeroPart
from idealspace.symbolic import (check_closure, check_galois, k_map, kprime_map, membership,
                                 order_leq, reduce_with_trace)

out, steps = reduce_with_trace(Dual(Dual(Dual(Intersect(L1, Lp(3))))))
print("normal form:", out)
for i, s in enumerate(steps, 1):
    print(f"  {i}. [{s.rule}] {s.before} -> {s.after}")

print("zero part of Linf:", reduce_with_trace(ZeroPart(LInfty))[0])
print("k(L3) =", k_map(Lp(3)), "  k'(L1) =", kprime_map(L1))
print("L1 in J0:", membership(L1).in_J0, "  L2 flags:", membership(Lp(2)))

d = order_leq(LInfty, Lp(2))
print(d)
print(d.trace())

print(check_galois().details)
for op in ("zero", "bidual", "kk'", "k'k"):
    r = check_closure(op)
    print(f"{r.law}: {r.verdict} ({r.details[-1]})")
