"""Laurent polynomials over the exact coefficient field.

A LaurentPoly has a fixed tuple of variable names (disjoint from the
coefficient symbols), integer exponents of either sign, and RatFunc
coefficients.  This is the layer difference operators act on: the shift
t_j -> q t_j is exact on monomials.
"""

from __future__ import annotations

from . import render
from .ring import ExactDivisionError, RatFunc

__all__ = ["LaurentPoly"]


def _trimmed(terms: dict) -> dict:
    return {k: v for k, v in terms.items() if not v.is_zero()}


class LaurentPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, varnames: tuple[str, ...], terms: dict | None = None):
        self.vars = tuple(varnames)
        self.terms = _trimmed(terms) if terms else {}

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(varnames) -> "LaurentPoly":
        return LaurentPoly(varnames)

    @staticmethod
    def const(varnames, coeff) -> "LaurentPoly":
        if isinstance(coeff, int):
            coeff = RatFunc.from_int(coeff)
        n = len(varnames)
        return LaurentPoly(varnames, {(0,) * n: coeff})

    @staticmethod
    def one(varnames) -> "LaurentPoly":
        return LaurentPoly.const(varnames, 1)

    @staticmethod
    def var(varnames, name: str, exp: int = 1) -> "LaurentPoly":
        i = tuple(varnames).index(name)
        key = tuple(exp if j == i else 0 for j in range(len(varnames)))
        return LaurentPoly(varnames, {key: RatFunc.one()})

    @staticmethod
    def monomial(varnames, key, coeff=None) -> "LaurentPoly":
        if coeff is None:
            coeff = RatFunc.one()
        elif isinstance(coeff, int):
            coeff = RatFunc.from_int(coeff)
        return LaurentPoly(varnames, {tuple(key): coeff})

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        z = (0,) * len(self.vars)
        return not self.terms or (len(self.terms) == 1 and z in self.terms)

    def const_value(self) -> RatFunc:
        if not self.terms:
            return RatFunc.zero()
        z = (0,) * len(self.vars)
        if len(self.terms) == 1 and z in self.terms:
            return self.terms[z]
        raise ValueError("not a constant Laurent polynomial")

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self.vars != other.vars:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    __hash__ = None

    def __repr__(self) -> str:
        return f"LaurentPoly({render.laurent_str(self.terms, self.vars)})"

    def render(self) -> str:
        return render.laurent_str(self.terms, self.vars)

    # -- arithmetic -------------------------------------------------------------

    def _check(self, other: "LaurentPoly"):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return LaurentPoly(self.vars, out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.vars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                c = ca * cb
                s = out.get(k)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = s
        return LaurentPoly(self.vars, out)

    def scale(self, coeff) -> "LaurentPoly":
        if isinstance(coeff, int):
            coeff = RatFunc.from_int(coeff)
        if coeff.is_zero():
            return LaurentPoly(self.vars)
        return LaurentPoly(self.vars, {k: c * coeff for k, c in self.terms.items()})

    def mul_monomial(self, key, coeff=None) -> "LaurentPoly":
        key = tuple(key)
        out = {}
        for k, c in self.terms.items():
            nk = tuple(x + y for x, y in zip(k, key))
            out[nk] = c if coeff is None else c * coeff
        return LaurentPoly(self.vars, out)

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self.terms) == 1:
                ((k, c),) = self.terms.items()
                return LaurentPoly.monomial(
                    self.vars, tuple(e * n for e in k), c ** n
                )
            raise ValueError("negative power of a non-monomial Laurent polynomial")
        result = LaurentPoly.one(self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- structure ---------------------------------------------------------------

    def coeff(self, key) -> RatFunc:
        return self.terms.get(tuple(key), RatFunc.zero())

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return max((k[i] for k in self.terms), default=0)

    def min_degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return min((k[i] for k in self.terms), default=0)

    def coeff_of_power(self, name: str, e: int) -> "LaurentPoly":
        """Coefficient of name^e, as a Laurent polynomial with that slot zeroed."""
        i = self.vars.index(name)
        out = {}
        for k, c in self.terms.items():
            if k[i] == e:
                out[k[:i] + (0,) + k[i + 1 :]] = c
        return LaurentPoly(self.vars, out)

    # -- q-shift and substitution ---------------------------------------------------

    def qshift(self, shifts: dict) -> "LaurentPoly":
        """Apply the dilation var -> q^m var for each {var: m}; exact."""
        idx = {self.vars.index(name): m for name, m in shifts.items() if m}
        if not idx:
            return self
        out = {}
        for k, c in self.terms.items():
            e = sum(m * k[i] for i, m in idx.items())
            out[k] = c * RatFunc.q_power(e) if e else c
        return LaurentPoly(self.vars, out)

    def rename(self, varnames) -> "LaurentPoly":
        varnames = tuple(varnames)
        if len(varnames) != len(self.vars):
            raise ValueError("rename must preserve arity")
        return LaurentPoly(varnames, dict(self.terms))

    def substitute(self, images: dict) -> "LaurentPoly":
        """Map each variable to a LaurentPoly over a common target variable set.

        Negative powers of a variable require its image to be a monomial.
        """
        some = next(iter(images.values()))
        tvars = some.vars
        pos_cache: dict[tuple[str, int], LaurentPoly] = {}

        def image_pow(name: str, e: int) -> LaurentPoly:
            got = pos_cache.get((name, e))
            if got is None:
                got = images[name] ** e
                pos_cache[(name, e)] = got
            return got

        total = LaurentPoly.zero(tvars)
        for k, c in self.terms.items():
            term = LaurentPoly.const(tvars, c)
            for name, e in zip(self.vars, k):
                if e:
                    term = term * image_pow(name, e)
            total = total + term
        return total

    def divexact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact division in the Laurent ring; raises if a remainder is left."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("Laurent division by zero")
        if self.is_zero():
            return self
        # shift both to ordinary polynomials
        nv = len(self.vars)
        mins_a = [min(k[i] for k in self.terms) for i in range(nv)]
        mins_b = [min(k[i] for k in other.terms) for i in range(nv)]
        shift_a = tuple(-min(m, 0) for m in mins_a)
        shift_b = tuple(-min(m, 0) for m in mins_b)
        a = {tuple(x + y for x, y in zip(k, shift_a)): c for k, c in self.terms.items()}
        b = {tuple(x + y for x, y in zip(k, shift_b)): c for k, c in other.terms.items()}
        bl = max(b)
        blc = b[bl]
        out: dict = {}
        rem = dict(a)
        while rem:
            rk = max(rem)
            dk = tuple(x - y for x, y in zip(rk, bl))
            if any(d < 0 for d in dk):
                raise ExactDivisionError("denominator does not clear")
            qc = rem[rk] / blc
            out[dk] = qc
            for k, c in b.items():
                kk = tuple(x + y for x, y in zip(k, dk))
                s = rem.get(kk)
                s = -(c * qc) if s is None else s - c * qc
                if s.is_zero():
                    rem.pop(kk, None)
                else:
                    rem[kk] = s
        back = tuple(y - x for x, y in zip(shift_a, shift_b))
        return LaurentPoly(
            self.vars,
            {tuple(x + y for x, y in zip(k, back)): c for k, c in out.items()},
        )

    # -- evaluation ---------------------------------------------------------------

    def eval_complex(self, point: dict, den_tol: float = 1e-300) -> complex:
        var_vals = [complex(point[name]) for name in self.vars]
        sym_point = {k: v for k, v in point.items() if k not in self.vars}
        total = 0j
        for k, c in self.terms.items():
            term = c.eval_complex(sym_point, den_tol)
            for v, e in zip(var_vals, k):
                if e:
                    term *= v ** e
            total += term
        return total

    def specialize_coeffs(self, bindings: dict) -> "LaurentPoly":
        return LaurentPoly(
            self.vars, {k: c.specialize(bindings) for k, c in self.terms.items()}
        )
