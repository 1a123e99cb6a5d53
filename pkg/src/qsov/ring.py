"""Exact sparse multivariate polynomial arithmetic over Z and its fraction field.

Every symbolic value in the library bottoms out in :class:`RatFunc`: a reduced
fraction of integer polynomials in the deformation parameter ``q``, the
coupling parameter ``ell`` and any auxiliary symbols registered on demand.
Python's unbounded integers give exact coefficient arithmetic; reduction uses
a primitive PRS multivariate gcd (recurse on the last active symbol) with
monomial/content/trial-division fast paths.

No floats enter here.  Canonical form: fractions are fully reduced, the
integer content of (num, den) is 1, and the denominator's leading coefficient
under the lexicographic term order is positive.
"""

from __future__ import annotations

import math
from itertools import zip_longest

__all__ = [
    "register_symbol",
    "symbol_index",
    "symbol_names",
    "IntPoly",
    "RatFunc",
    "PoleError",
    "ExactDivisionError",
    "poly_gcd",
]

# Symbol registry: append-only ordered list.  q and ell are always present.
_SYMBOLS: list[str] = ["q", "ell"]
_INDEX: dict[str, int] = {"q": 0, "ell": 1}


def register_symbol(name: str) -> int:
    """Register an auxiliary symbol (idempotent) and return its index."""
    if name in _INDEX:
        return _INDEX[name]
    _SYMBOLS.append(name)
    _INDEX[name] = len(_SYMBOLS) - 1
    return _INDEX[name]


def symbol_index(name: str) -> int:
    try:
        return _INDEX[name]
    except KeyError:
        raise KeyError(f"unknown symbol {name!r}; register it first") from None


def symbol_names() -> tuple[str, ...]:
    return tuple(_SYMBOLS)


class PoleError(ZeroDivisionError):
    """A substitution made a denominator vanish."""


class ExactDivisionError(ArithmeticError):
    """An exact division left a remainder."""


def _trim(key: tuple[int, ...]) -> tuple[int, ...]:
    n = len(key)
    while n and key[n - 1] == 0:
        n -= 1
    return key[:n]


def _pad(key: tuple[int, ...], n: int) -> tuple[int, ...]:
    return key + (0,) * (n - len(key)) if len(key) < n else key


def _key_add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a:
        return b
    if not b:
        return a
    return _trim(tuple(x + y for x, y in zip_longest(a, b, fillvalue=0)))


def _key_sub(a: tuple[int, ...], b: tuple[int, ...]):
    """a - b componentwise, or None if any component would go negative."""
    out = []
    for x, y in zip_longest(a, b, fillvalue=0):
        d = x - y
        if d < 0:
            return None
        out.append(d)
    return _trim(tuple(out))


def _key_cmp_key(key: tuple[int, ...], width: int) -> tuple[int, ...]:
    return _pad(key, width)


class IntPoly:
    """Sparse polynomial over Z: dict {exponent tuple -> nonzero int}.

    Exponent tuples are indexed by the symbol registry and stored with
    trailing zeros trimmed, so values stay valid when new symbols are
    registered later.  Instances are treated as immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict):
        self.terms = terms

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "IntPoly":
        return _ZERO

    @staticmethod
    def one() -> "IntPoly":
        return _ONE

    @staticmethod
    def const(c: int) -> "IntPoly":
        return IntPoly({(): c}) if c else _ZERO

    @staticmethod
    def sym(name: str, exp: int = 1) -> "IntPoly":
        if exp < 0:
            raise ValueError("IntPoly exponents must be nonnegative")
        if exp == 0:
            return _ONE
        i = symbol_index(name) if name in _INDEX else register_symbol(name)
        key = (0,) * i + (exp,)
        return IntPoly({key: 1})

    @staticmethod
    def monomial(key: tuple[int, ...], coeff: int = 1) -> "IntPoly":
        if coeff == 0:
            return _ZERO
        if any(e < 0 for e in key):
            raise ValueError("IntPoly exponents must be nonnegative")
        return IntPoly({_trim(tuple(key)): coeff})

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self) -> int:
        if not self.terms:
            return 0
        if len(self.terms) == 1 and () in self.terms:
            return self.terms[()]
        raise ValueError("not a constant polynomial")

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPoly) and self.terms == other.terms

    __hash__ = None  # mutable dict inside; not hashable

    def __repr__(self) -> str:  # debugging aid only
        from . import render

        return f"IntPoly({render.poly_str(self)})"

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "IntPoly") -> "IntPoly":
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return IntPoly(out)

    def __neg__(self) -> "IntPoly":
        return IntPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        if not other.terms:
            return self
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) - c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return IntPoly(out)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if not self.terms or not other.terms:
            return _ZERO
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = _key_add(ka, kb)
                s = out.get(k, 0) + ca * cb
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return IntPoly(out)

    def scale(self, c: int) -> "IntPoly":
        if c == 0:
            return _ZERO
        if c == 1:
            return self
        return IntPoly({k: v * c for k, v in self.terms.items()})

    def mul_monomial(self, key: tuple[int, ...], coeff: int = 1) -> "IntPoly":
        key = _trim(tuple(key))
        if coeff == 1 and not key:
            return self
        return IntPoly({_key_add(k, key): c * coeff for k, c in self.terms.items()})

    def __pow__(self, n: int) -> "IntPoly":
        if n < 0:
            raise ValueError("negative power of IntPoly")
        result = _ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- structure ---------------------------------------------------------

    def width(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    def degree_in(self, idx: int) -> int:
        deg = 0
        for k in self.terms:
            if idx < len(k) and k[idx] > deg:
                deg = k[idx]
        return deg

    def active_indices(self) -> list[int]:
        seen: set[int] = set()
        for k in self.terms:
            for i, e in enumerate(k):
                if e:
                    seen.add(i)
        return sorted(seen)

    def leading(self) -> tuple[tuple[int, ...], int]:
        """(key, coeff) of the lex-largest monomial."""
        w = self.width()
        k = max(self.terms, key=lambda key: _key_cmp_key(key, w))
        return k, self.terms[k]

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
            if g == 1:
                return 1
        return g

    def monomial_content(self) -> tuple[int, ...]:
        """Componentwise minimum exponent vector over all terms."""
        if not self.terms:
            return ()
        w = self.width()
        mins = [None] * w
        for k in self.terms:
            kk = _pad(k, w)
            for i in range(w):
                e = kk[i]
                if mins[i] is None or e < mins[i]:
                    mins[i] = e
        return _trim(tuple(m or 0 for m in mins))

    def divexact_int(self, c: int) -> "IntPoly":
        if c == 1:
            return self
        out = {}
        for k, v in self.terms.items():
            q, r = divmod(v, c)
            if r:
                raise ExactDivisionError("integer content division left remainder")
            out[k] = q
        return IntPoly(out)

    def divexact(self, other: "IntPoly"):
        """Exact polynomial quotient self/other, or None if not divisible."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero():
            return _ZERO
        if other.is_const():
            d = other.const_value()
            try:
                return self.divexact_int(d)
            except ExactDivisionError:
                return None
        gk, gc = other.leading()
        rem = dict(self.terms)
        out: dict = {}
        w = max(self.width(), other.width())
        while rem:
            rk = max(rem, key=lambda key: _key_cmp_key(key, w))
            rc = rem[rk]
            dk = _key_sub(rk, gk)
            if dk is None:
                return None
            qc, r = divmod(rc, gc)
            if r:
                return None
            out[dk] = qc
            for k, c in other.terms.items():
                kk = _key_add(k, dk)
                s = rem.get(kk, 0) - c * qc
                if s:
                    rem[kk] = s
                else:
                    rem.pop(kk, None)
        return IntPoly(out)

    def diff(self, idx: int) -> "IntPoly":
        out: dict = {}
        for k, c in self.terms.items():
            if idx < len(k) and k[idx]:
                e = k[idx]
                nk = _trim(k[:idx] + (e - 1,) + k[idx + 1 :])
                s = out.get(nk, 0) + c * e
                if s:
                    out[nk] = s
                else:
                    out.pop(nk, None)
        return IntPoly(out)

    # -- evaluation / substitution ------------------------------------------

    def eval_complex(self, point: dict) -> complex:
        vals: dict[int, complex] = {}
        for name, v in point.items():
            vals[symbol_index(name)] = v
        total = 0j
        for k, c in self.terms.items():
            term = complex(c)
            for i, e in enumerate(k):
                if e:
                    if i not in vals:
                        raise KeyError(f"no value for symbol {_SYMBOLS[i]!r}")
                    term *= vals[i] ** e
            total += term
        return total

    def subs(self, bindings: dict) -> "RatFunc":
        """Substitute symbols by RatFunc values; unbound symbols stay symbolic."""
        idx_bind: dict[int, RatFunc] = {}
        for name, v in bindings.items():
            idx_bind[symbol_index(name)] = v if isinstance(v, RatFunc) else RatFunc.from_int(v)
        pow_cache: dict[tuple[int, int], RatFunc] = {}
        total = RatFunc.zero()
        for k, c in self.terms.items():
            mono_key = []
            factor = RatFunc.from_int(c)
            for i, e in enumerate(k):
                if not e:
                    mono_key.append(0)
                    continue
                if i in idx_bind:
                    mono_key.append(0)
                    pc = pow_cache.get((i, e))
                    if pc is None:
                        pc = idx_bind[i] ** e
                        pow_cache[(i, e)] = pc
                    factor = factor * pc
                else:
                    mono_key.append(e)
            mono = IntPoly.monomial(tuple(mono_key))
            total = total + factor * RatFunc.from_poly(mono)
        return total


_ZERO = IntPoly({})
_ONE = IntPoly({(): 1})


# -- gcd machinery ----------------------------------------------------------


def _normalize_sign(p: IntPoly) -> IntPoly:
    if p.is_zero():
        return p
    _, lc = p.leading()
    return -p if lc < 0 else p


def _univ(p: IntPoly, main: int) -> dict[int, IntPoly]:
    """View p as univariate in symbol `main` with IntPoly coefficients."""
    out: dict[int, dict] = {}
    for k, c in p.terms.items():
        e = k[main] if main < len(k) else 0
        nk = _trim(k[:main] + (0,) + k[main + 1 :]) if main < len(k) else k
        out.setdefault(e, {})[nk] = c
    return {e: IntPoly(d) for e, d in out.items()}


def _from_univ(u: dict[int, IntPoly], main: int) -> IntPoly:
    out: dict = {}
    for e, p in u.items():
        for k, c in p.terms.items():
            kk = _pad(k, main + 1)
            kk = _trim(kk[:main] + (kk[main] + e,) + kk[main + 1 :])
            out[kk] = out.get(kk, 0) + c
    return IntPoly({k: c for k, c in out.items() if c})


def _poly_gcd_many(polys) -> IntPoly:
    g = _ZERO
    for p in polys:
        g = poly_gcd(g, p)
        if g.is_const() and abs(g.const_value()) == 1:
            return _ONE
    return g


def _pseudo_rem(f: dict[int, IntPoly], g: dict[int, IntPoly]):
    """Pseudo-remainder of univariate views (coefficients are IntPoly)."""
    df = max(f)
    dg = max(g)
    lcg = g[dg]
    r = dict(f)
    while r:
        dr = max(r)
        if dr < dg:
            break
        lcr = r.pop(dr)
        # r := lcg*r - lcr*x^{dr-dg}*g
        nr: dict[int, IntPoly] = {}
        for e, c in r.items():
            nr[e] = c * lcg
        for e, c in g.items():
            if e == dg:
                continue
            ee = e + dr - dg
            sub = c * lcr
            nr[ee] = (nr[ee] - sub) if ee in nr else -sub
        r = {e: c for e, c in nr.items() if not c.is_zero()}
    return r


def _primitive_wrt(u: dict[int, IntPoly]) -> dict[int, IntPoly]:
    cont = _poly_gcd_many(u.values())
    if cont.is_const() and abs(cont.const_value()) == 1:
        return u
    return {e: c.divexact(cont) for e, c in u.items()}


def poly_gcd(f: IntPoly, g: IntPoly) -> IntPoly:
    """Gcd in Z[symbols], sign-normalized (leading coefficient positive)."""
    if f.is_zero():
        return _normalize_sign(g)
    if g.is_zero():
        return _normalize_sign(f)

    # monomial content
    mf = f.monomial_content()
    mg = g.monomial_content()
    m = _trim(tuple(min(a, b) for a, b in zip_longest(mf, mg, fillvalue=0)))
    if mf:
        f = IntPoly({_key_sub(k, mf): c for k, c in f.terms.items()})
    if mg:
        g = IntPoly({_key_sub(k, mg): c for k, c in g.terms.items()})

    cf = f.content()
    cg = g.content()
    c = math.gcd(cf, cg)
    f = f.divexact_int(cf)
    g = g.divexact_int(cg)

    def wrap(p: IntPoly) -> IntPoly:
        return _normalize_sign(p.mul_monomial(m, c))

    if f.is_const() or g.is_const():
        return wrap(_ONE)
    if f.terms == g.terms or f.terms == (-g).terms:
        return wrap(f)

    # trial divisions catch the common case of structured denominators
    if len(g.terms) <= len(f.terms) and f.divexact(g) is not None:
        return wrap(g)
    if len(f.terms) <= len(g.terms) and g.divexact(f) is not None:
        return wrap(f)

    # main variable: smallest maximal degree among the active symbols keeps
    # the pseudo-remainder sequence short; ties go to the highest index
    degs: dict[int, int] = {}
    for p in (f, g):
        for k in p.terms:
            for i, e in enumerate(k):
                if e > degs.get(i, 0):
                    degs[i] = e
    import os as _os
    _rule = _os.environ.get("QSOV_GCD_MAIN", "mindeg")
    if _rule == "maxidx":
        main = max(degs)
    elif _rule == "maxdeg":
        main = max(degs, key=lambda i: (degs[i], i))
    else:
        main = min(degs, key=lambda i: (degs[i], -i))
    uf = _univ(f, main)
    ug = _univ(g, main)
    contf = _poly_gcd_many(uf.values())
    contg = _poly_gcd_many(ug.values())
    cont = poly_gcd(contf, contg)
    pf = _primitive_wrt(uf)
    pg = _primitive_wrt(ug)
    if max(pf) < max(pg):
        pf, pg = pg, pf
    while pg:
        r = _pseudo_rem(pf, pg)
        if not r:
            pf = pg
            break
        pf, pg = pg, _primitive_wrt({e: p for e, p in r.items()})
        if max(pf) < max(pg):  # can only happen on degenerate input
            pf, pg = pg, pf
        if max(pg) == 0:
            pf = pg
            break
    prim = _from_univ(pf, main)
    prim = _normalize_sign(prim.divexact_int(prim.content()))
    if prim.is_const():
        prim = _ONE
    return _normalize_sign((cont * prim).mul_monomial(m, c))


# -- fraction field ----------------------------------------------------------


class RatFunc:
    """Reduced fraction of IntPoly.  Immutable; all operations are pure."""

    __slots__ = ("num", "den")

    def __init__(self, num: IntPoly, den: IntPoly = _ONE, _reduced: bool = False):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num = _ZERO
            self.den = _ONE
            return
        if not _reduced:
            g = poly_gcd(num, den)
            if not (g.is_const() and g.const_value() == 1):
                num = num.divexact(g)
                den = den.divexact(g)
        _, lc = den.leading()
        if lc < 0:
            num = -num
            den = -den
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "RatFunc":
        return _RF_ZERO

    @staticmethod
    def one() -> "RatFunc":
        return _RF_ONE

    @staticmethod
    def from_int(c: int) -> "RatFunc":
        if c == 0:
            return _RF_ZERO
        if c == 1:
            return _RF_ONE
        return RatFunc(IntPoly.const(c), _ONE, _reduced=True)

    @staticmethod
    def from_poly(p: IntPoly) -> "RatFunc":
        return RatFunc(p, _ONE, _reduced=True)

    @staticmethod
    def fraction(a: int, b: int) -> "RatFunc":
        return RatFunc(IntPoly.const(a), IntPoly.const(b))

    @staticmethod
    def sym(name: str, exp: int = 1) -> "RatFunc":
        """Symbol power; negative exponents give 1/sym^|exp|."""
        if exp >= 0:
            return RatFunc(IntPoly.sym(name, exp), _ONE, _reduced=True)
        return RatFunc(_ONE, IntPoly.sym(name, -exp), _reduced=True)

    @staticmethod
    def q_power(k: int) -> "RatFunc":
        return RatFunc.sym("q", k)

    @staticmethod
    def ell_power(k: int) -> "RatFunc":
        return RatFunc.sym("ell", k)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.is_const() and self.num.is_const() and \
            self.den.const_value() == 1 and self.num.const_value() == 1

    def is_poly(self) -> bool:
        return self.den.is_const() and self.den.const_value() == 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            if isinstance(other, int):
                other = RatFunc.from_int(other)
            else:
                return NotImplemented
        if self.num.terms == other.num.terms and self.den.terms == other.den.terms:
            return True
        return (self.num * other.den) == (other.num * self.den)

    __hash__ = None

    def __repr__(self) -> str:
        from . import render

        return f"RatFunc({render.ratfunc_str(self)})"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if isinstance(other, int):
            other = RatFunc.from_int(other)
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        a, b, c, d = self.num, self.den, other.num, other.den
        if b.terms == d.terms:
            return RatFunc(a + c, b)
        g = poly_gcd(b, d)
        if g.is_const() and g.const_value() == 1:
            return RatFunc(a * d + c * b, b * d, _reduced=True)
        b1 = b.divexact(g)
        d1 = d.divexact(g)
        t = a * d1 + c * b1
        if t.is_zero():
            return _RF_ZERO
        g2 = poly_gcd(t, g)
        if g2.is_const() and g2.const_value() == 1:
            return RatFunc(t, b1 * d, _reduced=True)
        return RatFunc(t.divexact(g2), b1 * d.divexact(g2), _reduced=True)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        if isinstance(other, int):
            other = RatFunc.from_int(other)
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        return (-self) + other

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        if isinstance(other, int):
            other = RatFunc.from_int(other)
        if self.num.is_zero() or other.num.is_zero():
            return _RF_ZERO
        a, b, c, d = self.num, self.den, other.num, other.den
        g1 = poly_gcd(a, d)
        if not (g1.is_const() and g1.const_value() == 1):
            a = a.divexact(g1)
            d = d.divexact(g1)
        g2 = poly_gcd(c, b)
        if not (g2.is_const() and g2.const_value() == 1):
            c = c.divexact(g2)
            b = b.divexact(g2)
        return RatFunc(a * c, b * d, _reduced=True)

    __rmul__ = __mul__

    def inv(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverting zero rational function")
        return RatFunc(self.den, self.num, _reduced=True)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if isinstance(other, int):
            other = RatFunc.from_int(other)
        return self * other.inv()

    def __rtruediv__(self, other) -> "RatFunc":
        return self.inv() * other

    def __pow__(self, n: int) -> "RatFunc":
        if n == 0:
            return _RF_ONE
        if n < 0:
            return self.inv() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, _reduced=True)

    # -- calculus / evaluation -----------------------------------------------

    def diff(self, name: str) -> "RatFunc":
        i = symbol_index(name)
        dn = self.num.diff(i)
        dd = self.den.diff(i)
        if dd.is_zero():
            return RatFunc(dn, self.den)
        return RatFunc(dn * self.den - self.num * dd, self.den * self.den)

    def specialize(self, bindings: dict) -> "RatFunc":
        """Substitute symbols by RatFunc values (exact).

        Raises PoleError naming the vanishing factor if the denominator
        specializes to zero.
        """
        nv = self.num.subs(bindings)
        dv = self.den.subs(bindings)
        if dv.is_zero():
            from . import render

            raise PoleError(
                f"denominator {render.poly_str(self.den)} vanishes under substitution"
            )
        return nv / dv

    def eval_complex(self, point: dict, den_tol: float = 1e-300) -> complex:
        dv = self.den.eval_complex(point)
        if abs(dv) <= den_tol:
            raise PoleError("denominator numerically zero at evaluation point")
        return self.num.eval_complex(point) / dv


_RF_ZERO = RatFunc(_ZERO, _ONE, _reduced=True)
_RF_ONE = RatFunc(_ONE, _ONE, _reduced=True)
