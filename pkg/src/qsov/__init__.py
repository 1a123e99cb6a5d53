"""Exact separation-of-variables toolkit for q-deformed many-body systems.

Layers:

* :mod:`qsov.ring`, :mod:`qsov.laurent`, :mod:`qsov.operators` -- exact
  arithmetic: integer polynomials, their fraction field, Laurent
  polynomials and q-shift difference operators.
* :mod:`qsov.qseries` -- q-Pochhammer symbols, terminating basic
  hypergeometric sums, q-Lauricella sums and their identities.
* :mod:`qsov.macdonald` -- symmetric Laurent polynomials, commuting
  difference Hamiltonians and Macdonald polynomial construction for
  three variables.
* :mod:`qsov.sov` -- the separating map M, its inverse, the p-basis and
  the factorization of Macdonald polynomials.
* :mod:`qsov.seppoly` -- separated one-variable polynomials, their
  difference equation and independent reconstruction routes.
* :mod:`qsov.classical` -- the commuting classical Hamiltonians, Lax
  characteristic identity and numeric canonical separation.
* :mod:`qsov.numeric` -- floating point cross-checks: torus quadrature,
  Askey-Wilson integrals, orthogonality and integral operators.
* :mod:`qsov.cli` -- command line front end.
"""

from .ring import IntPoly, RatFunc, register_symbol

# Canonical symbol order.  Registering everything up front makes renders and
# golden files reproducible and keeps the gcd main variable (the highest
# active index) cheap: positions t1..t3 sit above the series parameters, and
# the multilinear classical momenta T1..T3 come last.
for _name in ("A", "B", "C", "r", "s", "w", "y", "L", "u", "t1", "t2", "t3", "T1", "T2", "T3"):
    register_symbol(_name)
del _name

from .laurent import LaurentPoly
from .operators import QShiftOperator

__version__ = "0.1.0"

__all__ = [
    "IntPoly",
    "RatFunc",
    "LaurentPoly",
    "QShiftOperator",
    "register_symbol",
    "__version__",
]
