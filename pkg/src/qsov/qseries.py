"""q-Pochhammer symbols, basic hypergeometric sums and q-Lauricella sums.

Exact layer: everything here is finite arithmetic over the coefficient
field (or over a Laurent ring when the argument is a variable), so all
identities are checked as ring equalities.  The numeric companions
(infinite products, q-Gamma/Beta, Jackson integral, dilogarithm) live at
the bottom of the module and use plain floats.
"""

from __future__ import annotations

import math

from .laurent import LaurentPoly
from .ring import RatFunc

__all__ = [
    "qpoch",
    "qbinom",
    "bhs_terminating",
    "one_phi_zero_coeffs",
    "qlauricella_terminating",
    "hg_diffeq_residual",
    "series_mul",
    "pq_lemma_check",
    "andrews_identity_check",
    "vwp_sum_check",
    "PochTally",
    "mono",
    "mono_mul",
    "qpoch_inf_num",
    "qpoch_num",
    "lq_num",
    "qgamma_num",
    "qbeta_num",
    "qint_num",
    "dilog_num",
    "asympt_dilog_check",
]


def _ring_of(a):
    """(one, q) in the ring of `a`."""
    if isinstance(a, LaurentPoly):
        return LaurentPoly.one(a.vars), LaurentPoly.const(a.vars, RatFunc.q_power(1))
    return RatFunc.one(), RatFunc.q_power(1)


def qpoch(a, k: int):
    """Finite q-Pochhammer (a;q)_k.

    k >= 0 gives the product (1-a)(1-aq)...(1-aq^{k-1}).  Negative k is
    supported for field elements via (a;q)_{-m} = 1/(q^{-m}a;q)_m.
    """
    if isinstance(a, int):
        a = RatFunc.from_int(a)
    one, q = _ring_of(a)
    if k < 0:
        if isinstance(a, LaurentPoly):
            raise ValueError("negative Pochhammer length needs a field element")
        shifted = a * RatFunc.q_power(k)
        return qpoch(shifted, -k).inv()
    out = one
    aq = a
    for _ in range(k):
        out = out * (one - aq)
        aq = aq * q
    return out


def qbinom(n: int, k: int) -> RatFunc:
    """Gaussian binomial coefficient [n choose k]_q."""
    if k < 0 or k > n:
        return RatFunc.zero()
    q = RatFunc.sym("q")
    return qpoch(q, n) / (qpoch(q, k) * qpoch(q, n - k))


def bhs_terminating(tops, bottoms, z, nterms: int):
    """Terminating basic hypergeometric sum.

    sum_{j=0}^{nterms} [prod (tops;q)_j / ((q;q)_j prod (bottoms;q)_j)] z^j,
    with tops/bottoms in the coefficient field and z either a field
    element or a Laurent polynomial.  Raises if a bottom Pochhammer
    factor vanishes within the summation range.
    """
    one = RatFunc.one()
    q = RatFunc.q_power(1)
    scalars = [one]
    term = one
    tps = list(tops)
    bts = list(bottoms)
    qj = one  # q^{j-1} tracker
    for j in range(1, nterms + 1):
        num = one
        for t in tps:
            num = num * (one - t * qj)
        den = one - qj * q
        for b in bts:
            f = one - b * qj
            if f.is_zero():
                raise ZeroDivisionError(
                    f"bottom Pochhammer factor vanishes at term {j}"
                )
            den = den * f
        if den.is_zero():
            raise ZeroDivisionError(f"bottom Pochhammer factor vanishes at term {j}")
        term = term * num / den
        scalars.append(term)
        qj = qj * q
    if isinstance(z, LaurentPoly):
        total = LaurentPoly.zero(z.vars)
        zp = LaurentPoly.one(z.vars)
        for j, s in enumerate(scalars):
            if j:
                zp = zp * z
            total = total + zp.scale(s)
        return total
    total = RatFunc.zero()
    zp = one
    for j, s in enumerate(scalars):
        if j:
            zp = zp * z
        total = total + zp * s
    return total


def one_phi_zero_coeffs(a: RatFunc, upto: int) -> list[RatFunc]:
    """Power series coefficients of 1phi0(a; -; q, y) up to y^upto."""
    one = RatFunc.one()
    q = RatFunc.q_power(1)
    out = [one]
    c = one
    qk = one
    for k in range(1, upto + 1):
        c = c * (one - a * qk) / (one - qk * q)
        out.append(c)
        qk = qk * q
    return out


def qlauricella_terminating(a, blist, c, xlist, bounds) -> RatFunc:
    """Terminating q-Lauricella sum phi_D.

    sum over 0 <= k_j <= bounds[j] of
      (a;q)_K / (c;q)_K * prod_j (b_j;q)_{k_j} x_j^{k_j} / (q;q)_{k_j},
    K = sum k_j.  All parameters live in the coefficient field.
    """
    if not (len(blist) == len(xlist) == len(bounds)):
        raise ValueError("blist, xlist and bounds must have equal length")
    one = RatFunc.one()
    kmax = sum(bounds)
    poch_a = [one]
    poch_c = [one]
    for i in range(kmax):
        poch_a.append(poch_a[-1] * (one - a * RatFunc.q_power(i)))
        f = one - c * RatFunc.q_power(i)
        if f.is_zero():
            raise ZeroDivisionError("(c;q)_K factor vanishes inside summation range")
        poch_c.append(poch_c[-1] * f)
    # per-variable factors (b_j;q)_k x_j^k / (q;q)_k
    per = []
    for b, x, bound in zip(blist, xlist, bounds):
        facs = [one]
        t = one
        for k in range(1, bound + 1):
            t = t * (one - b * RatFunc.q_power(k - 1)) * x / (
                one - RatFunc.q_power(k)
            )
            facs.append(t)
        per.append(facs)

    total = RatFunc.zero()

    def rec(j: int, ksum: int, partial: RatFunc):
        nonlocal total
        if j == len(per):
            total = total + partial * poch_a[ksum] / poch_c[ksum]
            return
        for k, f in enumerate(per[j]):
            rec(j + 1, ksum + k, partial * f)

    rec(0, 0, one)
    return total


def hg_diffeq_residual(tops, bottoms, coeffs, upto: int) -> list[RatFunc]:
    """Residual series of the hypergeometric q-difference operator.

    Applies  y*prod_k(1 - a_k Y) - prod_k(1 - q^{-1} b_k Y)  (Y: y -> qy,
    b_n = q appended internally) to the power series with the given
    coefficients and returns the residual coefficients up to y^upto.
    """
    one = RatFunc.one()
    q = RatFunc.q_power(1)
    bts = list(bottoms) + [q]
    if len(bts) != len(tops):
        raise ValueError("need one fewer bottom parameter than top parameters")
    out = []
    for m in range(upto + 1):
        qm1 = RatFunc.q_power(m - 1)
        shifted = RatFunc.zero()
        if m >= 1 and m - 1 < len(coeffs):
            pa = one
            for a in tops:
                pa = pa * (one - a * qm1)
            shifted = coeffs[m - 1] * pa
        direct = RatFunc.zero()
        if m < len(coeffs):
            pb = one
            for b in bts:
                pb = pb * (one - b * qm1)
            direct = coeffs[m] * pb
        out.append(shifted - direct)
    return out


def series_mul(a: list, b: list, upto: int) -> list:
    """Cauchy product of power series coefficient lists, truncated."""
    zero = RatFunc.zero()
    out = [zero] * (upto + 1)
    for i, ai in enumerate(a):
        if i > upto:
            break
        for j, bj in enumerate(b):
            if i + j > upto:
                break
            out[i + j] = out[i + j] + ai * bj
    return out


def pq_lemma_check(nu: int, degree: int, order: int | None = None) -> bool:
    """Polynomial-weighted q-binomial sums resum to a single 1phi0 factor.

    For the basis polynomial P(q^k) = (q^(k-nu+1);q)_nu of degree nu <= N,
      sum_k (a;q)_k / (q;q)_k y^k P(q^k) = Q(y) (a q^N y;q)_inf / (y;q)_inf
    with Q(y) = (a;q)_nu y^nu (a q^nu y;q)_(N-nu); checked as a formal power
    series in y to the given order (default N+4) with symbolic a.
    """
    if not 0 <= nu <= degree:
        raise ValueError("need 0 <= nu <= degree")
    upto = degree + 4 if order is None else order
    a = RatFunc.sym("A")
    one = RatFunc.one()
    lhs = []
    for k in range(upto + 1):
        pval = one
        for i in range(nu):
            pval = pval * (one - RatFunc.q_power(k - nu + 1 + i))
        lhs.append(qpoch(a, k) / qpoch(RatFunc.q_power(1), k) * pval)
    qcoeffs = [one]
    for i in range(degree - nu):
        fac = a * RatFunc.q_power(nu + i)
        qcoeffs = [one * c for c in qcoeffs] + [RatFunc.zero()]
        for j in range(len(qcoeffs) - 1, 0, -1):
            qcoeffs[j] = qcoeffs[j] - fac * qcoeffs[j - 1]
    scale = qpoch(a, nu)
    qpoly = [RatFunc.zero()] * nu + [scale * c for c in qcoeffs]
    rhs = series_mul(qpoly, one_phi_zero_coeffs(a * RatFunc.q_power(degree), upto), upto)
    return all(l == r for l, r in zip(lhs, rhs))


def andrews_identity_check(nus, m: int) -> bool:
    """Terminating instance of Andrews' reduction of phi_D to a single series.

    phi_D[a; q^-nu_1 .. q^-nu_p; c; q; x_1..x_p] equals
      [(a, q^-nu_1 x_1, ..;q)_inf / (c, x_1, ..;q)_inf]
        * (p+1)phi_p[c/a, x_1..x_p; q^-nu_1 x_1, ..; q, a];
    at c = a q^-m both sides are finite: the infinite-product prefactor
    collapses to prod_j (q^-nu_j x_j;q)_(nu_j) / (a q^-m;q)_m and the series
    terminates at k = m.  Checked as an exact rational identity with a and
    the x_j symbolic.
    """
    nus = list(nus)
    if not 1 <= len(nus) <= 3:
        raise ValueError("supported for one to three x variables")
    xs = [RatFunc.sym(nm) for nm in ("t1", "t2", "t3")[: len(nus)]]
    a = RatFunc.sym("y")
    c = a * RatFunc.q_power(-m)
    lhs = qlauricella_terminating(
        a, [RatFunc.q_power(-v) for v in nus], c, xs, nus
    )
    pref = qpoch(c, m).inv()
    for v, x in zip(nus, xs):
        pref = pref * qpoch(x * RatFunc.q_power(-v), v)
    rhs = pref * bhs_terminating(
        [RatFunc.q_power(-m)] + xs,
        [x * RatFunc.q_power(-v) for v, x in zip(nus, xs)],
        a,
        m,
    )
    return lhs == rhs


def vwp_sum_check(m: int) -> bool:
    """Terminating very-well-poised 6phi5 summation with symbolic a, b, c.

    sum_{k=0}^{m} (1-aq^(2k))/(1-a) (a,b,c,q^-m;q)_k
      / ((q, aq/b, aq/c, aq^(m+1);q)_k) (aq^(m+1)/(bc))^k
      = (aq, aq/(bc);q)_m / ((aq/b, aq/c;q)_m).
    The q a^(1/2) pairs of the classical parameter list only enter through
    the ratio (1-aq^(2k))/(1-a), so everything is rational in a.
    """
    a, b, c = RatFunc.sym("A"), RatFunc.sym("B"), RatFunc.sym("C")
    one = RatFunc.one()
    q = RatFunc.q_power(1)
    z = a * RatFunc.q_power(m + 1) / (b * c)
    lhs = RatFunc.zero()
    for k in range(m + 1):
        num = qpoch(a, k) * qpoch(b, k) * qpoch(c, k) * qpoch(RatFunc.q_power(-m), k)
        den = (
            qpoch(q, k)
            * qpoch(a * q / b, k)
            * qpoch(a * q / c, k)
            * qpoch(a * RatFunc.q_power(m + 1), k)
        )
        lhs = lhs + (one - a * RatFunc.q_power(2 * k)) / (one - a) * num / den * z**k
    rhs = (
        qpoch(a * q, m)
        * qpoch(a * q / (b * c), m)
        / (qpoch(a * q / b, m) * qpoch(a * q / c, m))
    )
    return lhs == rhs


# -- formal infinite-Pochhammer bookkeeping -----------------------------------


def mono(**exps) -> tuple:
    """Canonical key for a monomial argument, e.g. mono(q=1, ell=3, y=1)."""
    return tuple(sorted((k, v) for k, v in exps.items() if v))


def mono_mul(a: tuple, b: tuple) -> tuple:
    d = dict(a)
    for k, v in b:
        d[k] = d.get(k, 0) + v
    return tuple(sorted((k, v) for k, v in d.items() if v))


class PochTally:
    """Signed multiset of infinite q-Pochhammer arguments.

    Tracks products prod (z;q)_inf^{m_z} with monomial arguments z; the
    general Pochhammer (z;q)_alpha with q^alpha itself a monomial is the
    ratio of two infinite symbols.  An identity of Pochhammer ratios
    holds iff the tally cancels completely.
    """

    def __init__(self):
        self.counts: dict[tuple, int] = {}

    def add(self, arg: tuple, mult: int = 1) -> "PochTally":
        c = self.counts.get(arg, 0) + mult
        if c:
            self.counts[arg] = c
        else:
            self.counts.pop(arg, None)
        return self

    def add_general(self, arg: tuple, qalpha: tuple, mult: int = 1) -> "PochTally":
        """(arg;q)_alpha = (arg;q)_inf / (q^alpha*arg;q)_inf."""
        self.add(arg, mult)
        self.add(mono_mul(arg, qalpha), -mult)
        return self

    def is_empty(self) -> bool:
        return not self.counts


# -- numeric layer -------------------------------------------------------------


def qpoch_inf_num(a: complex, q: float, tol: float = 1e-17) -> complex:
    """(a;q)_inf as a float product, truncated once |a| q^k < tol."""
    if not 0 < q < 1:
        raise ValueError("need 0 < q < 1")
    out = 1.0 + 0.0j
    mag = abs(a)
    while mag >= tol:
        out *= 1.0 - a
        a *= q
        mag *= q
    return out


def qpoch_num(a: complex, alpha: float, q: float) -> complex:
    """(a;q)_alpha = (a;q)_inf / (q^alpha a;q)_inf for real alpha."""
    return qpoch_inf_num(a, q) / qpoch_inf_num(q ** alpha * a, q)


def lq_num(nu: complex, x: complex, y: complex, q: float) -> complex:
    """Four-fold product (nu*x*y, nu*x/y, nu*y/x, nu/(x*y); q)_inf."""
    return (
        qpoch_inf_num(nu * x * y, q)
        * qpoch_inf_num(nu * x / y, q)
        * qpoch_inf_num(nu * y / x, q)
        * qpoch_inf_num(nu / (x * y), q)
    )


def qgamma_num(z: float, q: float) -> float:
    """Gamma_q(z) = (q;q)_inf / (q^z;q)_inf * (1-q)^{1-z}."""
    num = qpoch_inf_num(q, q)
    den = qpoch_inf_num(q ** z, q)
    return (num / den).real * (1.0 - q) ** (1.0 - z)


def qbeta_num(a: float, b: float, q: float) -> float:
    """B_q(a,b) = Gamma_q(a) Gamma_q(b) / Gamma_q(a+b)."""
    return qgamma_num(a, q) * qgamma_num(b, q) / qgamma_num(a + b, q)


def qint_num(f, q: float, tol: float = 1e-17, kmax: int = 100000) -> complex:
    """Jackson integral int_0^1 d_q t f(t) = (1-q) sum_k f(q^k) q^k."""
    total = 0.0 + 0.0j
    for k in range(kmax):
        node = q ** k
        term = f(node) * node
        total += term
        if k > 8 and abs(term) < tol * max(1.0, abs(total)):
            break
    else:
        raise RuntimeError("Jackson integral did not converge")
    return (1.0 - q) * total


def dilog_num(z: float) -> float:
    """Real dilogarithm Li_2(z) for z <= 1."""
    if z > 1.0:
        raise ValueError("dilog_num defined for z <= 1")
    if z == 1.0:
        return math.pi ** 2 / 6.0
    if z == 0.0:
        return 0.0
    if z < -0.5:
        # Landen: Li2(z) = -Li2(z/(z-1)) - ln(1-z)^2/2
        return -dilog_num(z / (z - 1.0)) - 0.5 * math.log1p(-z) ** 2
    if z > 0.5:
        # reflection: Li2(z) + Li2(1-z) = pi^2/6 - ln(z)ln(1-z)
        return (
            math.pi ** 2 / 6.0
            - math.log(z) * math.log1p(-z)
            - dilog_num(1.0 - z)
        )
    total = 0.0
    zk = 1.0
    for k in range(1, 1000):
        zk *= z
        term = zk / (k * k)
        total += term
        if abs(term) < 1e-17:
            break
    return total


def asympt_dilog_check(x: float, hbar: float) -> float:
    """Deviation in the semiclassical expansion of the infinite Pochhammer.

    With q = e^-hbar, ln(x;q)_inf = -Li2(x)/hbar + ln(1-x)/2 + O(hbar);
    returns |ln(x;q)_inf + Li2(x)/hbar - ln(1-x)/2|, which should scale
    linearly in hbar for fixed x in (0,1).  The log is accumulated term
    by term: the product itself is ~ e^(-Li2(x)/hbar) and underflows the
    double range long before the expansion stops improving.
    """
    if not 0.0 < x < 1.0:
        raise ValueError("need 0 < x < 1")
    if hbar <= 0.0:
        raise ValueError("need hbar > 0")
    q = math.exp(-hbar)
    val = 0.0
    xq = x
    while xq > 1e-18:
        val += math.log1p(-xq)
        xq *= q
    return abs(val + dilog_num(x) / hbar - 0.5 * math.log1p(-x))
