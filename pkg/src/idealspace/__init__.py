"""Lattices of ideal spaces on finite measure spaces.

Space expressions (``Lp``, ``Orlicz``, ``Sym`` leaves combined with
intersection, sum, Köthe dual and scaling) are evaluated numerically on
finite atomic measure spaces, and the lattice laws relating them are checked
by randomized suites and by a symbolic rewrite calculus.
"""

from .expr import (INF, L1, L2, ZERO, BigIntersect, BigSum, Dual, Expr, Intersect, LInfty, Lp,
                   Orlicz, Scale, Sum, Sym, ZeroPart)
from .lattice import (OrderVerdict, check_distributivity, check_lattice_axioms,
                      check_modularity, dedekind_demo, inclusion_constant, join, lambda_proj,
                      meet, rho_proj, uniqueness_probe)
from .measure import (FunctionVector, MeasureError, MeasureSpace, StepFunction, counting_space,
                      distribution_function, equimeasurable, indicator, make_space,
                      probability_space, rearrangement, vector)
from .norms import (ConvergenceError, NormError, NormResult, bidual_gap, big_intersect_norm,
                    big_sum_norm, dual_norm, intersect_norm, norm, sum_norm)
from .parse import ParseError, parse_expr
from .profiles import LorentzProfile, LpProfile, OrliczProfile
from .reports import LawReport
from .symbolic import (check_closure, check_galois, k_map, koethe_dual, kprime_map, membership,
                       order_leq, reduce, zero_part)
from .symmetric import (SymmetricSpace, check_inclusion_chain, check_transfer_isomorphism,
                        mekler_transfer, symmetric_norm)

__version__ = "0.1.0"
