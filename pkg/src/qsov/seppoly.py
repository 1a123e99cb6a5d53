"""Separated one-variable Laurent polynomials and their q-difference equation.

For a nondecreasing integer weight lam of length n the separated polynomial
S_lam(y) = sum_{k=lam_1}^{lam_n} chi_k y^k is built here through several
independent routes:

  * coefficientwise, each chi_k a terminating (n+1)phi(n) sum,
  * as a Cauchy product of the binomial 1phi0 series with the nphi(n-1)
    series, which must truncate to a Laurent polynomial,
  * as a terminating double sum coming from the q-Lauricella function,
  * by unwinding the (n+2)-term coefficient recursion of the separated
    q-difference equation.

Cross-checking these against each other, and against the (n+1)-term
q-difference equation whose coefficients involve the Hamiltonian eigenvalues,
is the purpose of most functions in this module.
"""

from __future__ import annotations

from .laurent import LaurentPoly
from .macdonald import assert_weight, eigenvalue, ell_half_power, ell_of_rank
from .qseries import (
    PochTally,
    bhs_terminating,
    mono,
    one_phi_zero_coeffs,
    qlauricella_terminating,
    qpoch,
)
from .ring import RatFunc

Y = ("y",)


def hypergeometric_parameters(lam):
    """Parameter lists (a_1..a_n; b_1..b_{n-1}) with b_j = a_j / ell.

    a_j = ell^(n-j+1) * q^(lam_1 - lam_{n-j+1} + 1); the last lower parameter
    q is left implicit, as in the series recursion.
    """
    lam = assert_weight(lam)
    n = len(lam)
    ell = ell_of_rank(n)
    tops = []
    for j in range(1, n + 1):
        tops.append(ell ** (n - j + 1) * RatFunc.q_power(lam[0] - lam[n - j] + 1))
    bots = [a / ell for a in tops[:-1]]
    return tops, bots


def chi_coeff(lam, k: int) -> RatFunc:
    """Coefficient of y^k in S_lam; zero outside lam_1 <= k <= lam_n."""
    lam = assert_weight(lam)
    n = len(lam)
    m = k - lam[0]
    if m < 0 or k > lam[-1]:
        return RatFunc.zero()
    q = RatFunc.q_power(1)
    elln = ell_of_rank(n) ** n
    tops, bots = hypergeometric_parameters(lam)
    phi = bhs_terminating(
        [RatFunc.q_power(-m)] + tops,
        [RatFunc.q_power(2 - m) * elln] + bots,
        q,
        m + 1,
    )
    pref = (q * elln) ** m * qpoch(elln.inv() * RatFunc.q_power(-1), m) / qpoch(q, m)
    return pref * phi


def sep_poly(lam) -> LaurentPoly:
    """S_lam as a Laurent polynomial in y."""
    lam = assert_weight(lam)
    terms = {}
    for k in range(lam[0], lam[-1] + 1):
        c = chi_coeff(lam, k)
        if not c.is_zero():
            terms[(k,)] = c
    return LaurentPoly(Y, terms)


def chi_endpoints(lam) -> tuple[RatFunc, RatFunc]:
    """Closed forms of the lowest and highest coefficients of S_lam.

    The lowest one is 1; the highest is a ratio of finite Pochhammers in
    ell^-j.  Both are independent of the hypergeometric sums in chi_coeff.
    """
    lam = assert_weight(lam)
    n = len(lam)
    ell = ell_of_rank(n)
    top = ell ** (sum(lam) - n * lam[0])
    for j in range(1, n):
        lj = ell ** (-j)
        top = top * qpoch(lj, lam[j - 1] - lam[0]) * qpoch(lj, lam[-1] - lam[n - j - 1])
        top = top / (qpoch(lj, lam[j] - lam[0]) * qpoch(lj, lam[-1] - lam[n - j]))
    return RatFunc.one(), top


def sep_value_at_ell_minus_n(lam) -> RatFunc:
    """Closed form of S_lam evaluated at y = ell^(-n)."""
    lam = assert_weight(lam)
    n = len(lam)
    ell = ell_of_rank(n)
    out = ell ** (-n * lam[0]) * qpoch(ell ** (-n), lam[-1] - lam[0])
    for j in range(1, n):
        lj = ell ** (-j)
        out = out * qpoch(lj, lam[j - 1] - lam[0]) / qpoch(lj, lam[j] - lam[0])
    return out


def evaluate_y(f: LaurentPoly, value: RatFunc) -> RatFunc:
    """Evaluate a one-variable Laurent polynomial at an exact field element."""
    if f.vars != Y:
        raise ValueError("expected a polynomial in y alone")
    out = RatFunc.zero()
    for (k,), c in f.terms.items():
        out = out + c * value**k
    return out


def sep_poly_via_series(lam, guard: int = 4) -> LaurentPoly:
    """S_lam from the product of the 1phi0 series with the nphi(n-1) series.

    y^(-lam_1) S_lam(y) = [sum_i g_i y^i] * [sum_j f_j y^j] where the first
    factor expands (y;q)_{1-ng} by the q-binomial theorem.  The product must
    truncate at y^(lam_n - lam_1); the next `guard` coefficients are checked
    to vanish and an ArithmeticError is raised otherwise.
    """
    lam = assert_weight(lam)
    n = len(lam)
    width = lam[-1] - lam[0]
    upto = width + guard
    one = RatFunc.one()
    q = RatFunc.q_power(1)
    elln = ell_of_rank(n) ** n
    # (y;q)_{1-ng} = 1phi0(q^-1 ell^-n; -; q, q ell^n y)
    g = one_phi_zero_coeffs(elln.inv() * RatFunc.q_power(-1), upto)
    zpow = one
    gy = []
    for i in range(upto + 1):
        gy.append(g[i] * zpow)
        zpow = zpow * q * elln
    tops, bots = hypergeometric_parameters(lam)
    f = [one]
    for j in range(1, upto + 1):
        qj1 = RatFunc.q_power(j - 1)
        num = one
        for a in tops:
            num = num * (one - a * qj1)
        den = one - RatFunc.q_power(j)
        for b in bots:
            den = den * (one - b * qj1)
        f.append(f[-1] * num / den)
    terms = {}
    for m in range(upto + 1):
        c = RatFunc.zero()
        for i in range(m + 1):
            c = c + gy[i] * f[m - i]
        if m > width:
            if not c.is_zero():
                raise ArithmeticError(
                    "series for the separated polynomial fails to truncate"
                )
        elif not c.is_zero():
            terms[(lam[0] + m,)] = c
    return LaurentPoly(Y, terms)


# -- q-Lauricella routes ---------------------------------------------------------


def lauricella_double_sum(lam) -> LaurentPoly:
    """S_lam as the terminating double (in general (n-1)-fold) sum.

    Each summand is a product of two finite y-Pochhammers with scalar
    weights, so the result is assembled directly in the Laurent ring.
    """
    lam = assert_weight(lam)
    n = len(lam)
    ell = ell_of_rank(n)
    one = RatFunc.one()
    q = RatFunc.q_power(1)
    width = lam[-1] - lam[0]
    y = LaurentPoly.var(Y, "y")
    pref = one
    for j in range(1, n):
        pref = pref * qpoch(
            RatFunc.q_power(lam[0] - lam[n - j] + 1) * ell ** (n - j),
            lam[n - j] - lam[n - j - 1],
        )
    bounds = [lam[n - j] - lam[n - j - 1] for j in range(1, n)]
    xs = [RatFunc.q_power(lam[0] - lam[n - j - 1] + 1) * ell ** (n - j) for j in range(1, n)]
    bs = [RatFunc.q_power(lam[n - j - 1] - lam[n - j]) for j in range(1, n)]
    total = LaurentPoly.zero(Y)

    def weight_factor(b, x, k):
        w = one
        for i in range(k):
            w = w * (one - b * RatFunc.q_power(i)) * x / (one - RatFunc.q_power(i + 1))
        return w

    def rec(j, ksum, scalar):
        nonlocal total
        if j == len(bounds):
            head = qpoch(y, ksum).scale(scalar)
            tail = qpoch(
                y.scale(RatFunc.q_power(lam[0] - lam[-1] + 1 + ksum) * ell**n),
                width - ksum,
            )
            total = total + head * tail
            return
        for k in range(bounds[j] + 1):
            rec(j + 1, ksum + k, scalar * weight_factor(bs[j], xs[j], k))

    rec(0, 0, one)
    return total.mul_monomial((lam[0],), one).scale(pref.inv())


def sep_poly_as_ratfunc(lam, yname: str = "y") -> RatFunc:
    """S_lam as an exact rational expression in a registered scalar symbol."""
    yv = RatFunc.sym(yname)
    S = sep_poly(lam)
    out = RatFunc.zero()
    for (k,), c in S.terms.items():
        out = out + c * yv**k
    return out


def lauricella_phi_d_form(lam, yname: str = "y") -> RatFunc:
    """S_lam via the terminating q-Lauricella function of n-1 variables.

    Works in the scalar field with y adjoined as a symbol, since the
    Lauricella summand mixes y into both numerator and denominator
    Pochhammers; the polynomial prefactor clears the denominators.
    """
    lam = assert_weight(lam)
    n = len(lam)
    ell = ell_of_rank(n)
    yv = RatFunc.sym(yname)
    c = RatFunc.q_power(1 + lam[0] - lam[-1]) * ell**n * yv
    bounds = [lam[n - j] - lam[n - j - 1] for j in range(1, n)]
    xs = [RatFunc.q_power(lam[0] - lam[n - j - 1] + 1) * ell ** (n - j) for j in range(1, n)]
    bs = [RatFunc.q_power(lam[n - j - 1] - lam[n - j]) for j in range(1, n)]
    phi = qlauricella_terminating(yv, bs, c, xs, bounds)
    pref = yv ** lam[0] * qpoch(c, lam[-1] - lam[0])
    for j in range(1, n):
        pref = pref / qpoch(
            RatFunc.q_power(lam[0] - lam[n - j] + 1) * ell ** (n - j),
            lam[n - j] - lam[n - j - 1],
        )
    return pref * phi


def lauricella_product_check(lam) -> bool:
    """Verify the product form of S_lam built on ell^-1 lower parameters.

    The form reads S = y^{lam_1} (q ell y;q)_{(1-n)g} prod_i (a_i;q)_g *
    phi_D[y; ell^-1,...; q ell y; a_1..a_{n-1}].  Feeding its parameters
    through the reduction of phi_D to a single nphi(n-1) series must
    reproduce the defining parameters (a; b) exactly, and the leftover
    infinite-Pochhammer bookkeeping must cancel to (y;q)_{1-ng}.  Both
    statements are checked exactly; no infinite sums are evaluated.
    """
    lam = assert_weight(lam)
    n = len(lam)
    ell = ell_of_rank(n)
    q = RatFunc.q_power(1)
    tops, bots = hypergeometric_parameters(lam)
    # parameter correspondence: c/a' = a_n and b'_j x_j = b_j
    if not (q * ell == tops[-1]):
        return False
    for j in range(n - 1):
        if not (ell.inv() * tops[j] == bots[j]):
            return False
    # infinite-product bookkeeping; arguments are monomials in q, ell, y
    def akey(i):
        return mono(q=1 + lam[0] - lam[n - 1 - i], ell=n - i)

    def bkey(i):
        return mono(q=1 + lam[0] - lam[n - 1 - i], ell=n - i - 1)

    tally = PochTally()
    # (q ell y;q)_{(1-n)g}: q^{(1-n)g} = ell^{n-1}
    tally.add_general(mono(q=1, ell=1, y=1), mono(ell=n - 1))
    # (a_i;q)_g with q^g = ell^-1
    for i in range(n - 1):
        tally.add_general(akey(i), mono(ell=-1))
    # Andrews prefactor (a', b'_j x_j; q)_inf / (c, x_j; q)_inf
    tally.add(mono(y=1))
    for i in range(n - 1):
        tally.add(bkey(i))
    tally.add(mono(q=1, ell=1, y=1), -1)
    for i in range(n - 1):
        tally.add(akey(i), -1)
    # target: (y;q)_{1-ng} with q^{1-ng} = q ell^n
    tally.add_general(mono(y=1), mono(q=1, ell=n), -1)
    return tally.is_empty()


# -- separated q-difference equation -----------------------------------------------


def sep_eq_coefficients(lam, simplified: bool = False) -> list[LaurentPoly]:
    """Coefficients C_k(y) of f(q^k y), k = 0..n, in the separated equation.

    sum_k (-1)^k ell^{(n-1)k/2} (1 - q^k ell^k y) (y;q)_k (q^{k+1} ell^n y;q)_{n-k}
    h_{n-k} f(q^k y) = 0, with h_0 = 1.  The simplified variant divides out
    the common factor (1 - q^n ell^n y).
    """
    lam = assert_weight(lam)
    n = len(lam)
    ell = ell_of_rank(n)
    y = LaurentPoly.var(Y, "y")
    oneL = LaurentPoly.one(Y)
    out = []
    for k in range(n + 1):
        h = eigenvalue(n - k, lam) if k < n else RatFunc.one()
        sgn = RatFunc.from_int(-1 if k % 2 else 1)
        scal = sgn * ell_half_power(n, (n - 1) * k) * h
        if simplified and k == n:
            poly = qpoch(y, k)
        else:
            mid = oneL - y.scale(RatFunc.q_power(k) * ell**k)
            tail_len = (n - k - 1) if simplified else (n - k)
            poly = mid * qpoch(y, k) * qpoch(
                y.scale(RatFunc.q_power(k + 1) * ell**n), tail_len
            )
        out.append(poly.scale(scal))
    return out


def sep_eq_residual(lam, f: LaurentPoly, simplified: bool = False) -> LaurentPoly:
    """Apply the separated q-difference operator to f; zero iff f solves it."""
    coeffs = sep_eq_coefficients(lam, simplified=simplified)
    total = LaurentPoly.zero(Y)
    for k, C in enumerate(coeffs):
        total = total + C * f.qshift({"y": k})
    return total


def dform_coefficients(lam) -> list[LaurentPoly]:
    """The four coefficients of the n=3 separated equation in its compact form.

    Index k is the shift order of f(q^k y):
    (1-qy)(1-q^2 y) l^3 f(q^3 y) - (1-qy)(1-q^2 l^2 y) l^2 h_1 f(q^2 y)
    + (1-q l y)(1-q^2 l^3 y) l h_2 f(qy) - (1-q l^3 y)(1-q^2 l^3 y) h_3 f(y) = 0.
    """
    lam = assert_weight(lam)
    if len(lam) != 3:
        raise ValueError("the compact form is specific to three variables")
    ell = RatFunc.sym("ell")
    one = LaurentPoly.one(Y)
    y = LaurentPoly.var(Y, "y")

    def lin(c: RatFunc) -> LaurentPoly:
        return one - y.scale(c)

    q1 = RatFunc.q_power(1)
    q2 = RatFunc.q_power(2)
    h1, h2, h3 = (eigenvalue(k, lam) for k in (1, 2, 3))
    return [
        (lin(q1 * ell**3) * lin(q2 * ell**3)).scale(-h3),
        (lin(q1 * ell) * lin(q2 * ell**3)).scale(ell * h2),
        (lin(q1) * lin(q2 * ell**2)).scale(-(ell**2) * h1),
        (lin(q1) * lin(q2)).scale(ell**3),
    ]


def sep_eq_dform_consistency(lam) -> bool:
    """General-n coefficients at n=3 equal -(1-y)(1-q^3 l^3 y) times the compact ones."""
    lam = assert_weight(lam)
    gen = sep_eq_coefficients(lam)
    comp = dform_coefficients(lam)
    y = LaurentPoly.var(Y, "y")
    one = LaurentPoly.one(Y)
    ell = RatFunc.sym("ell")
    factor = (one - y) * (one - y.scale(RatFunc.q_power(3) * ell**3))
    return all(gen[k] == -(factor * comp[k]) for k in range(4))


# -- coefficient recursion -----------------------------------------------------------


def recursion_entry(lam, k: int, d: int, coeffs=None) -> RatFunc:
    """Entry A_{kd} of the recursion sum_d A_{kd} f_{k-d} = 0.

    Extracted from the full-form equation coefficients: A_{kd} =
    sum_i [C_i(y)]_d q^{i(k-d)}.
    """
    if coeffs is None:
        coeffs = sep_eq_coefficients(lam)
    out = RatFunc.zero()
    for i, C in enumerate(coeffs):
        c = C.coeff((d,))
        if not c.is_zero():
            out = out + c * RatFunc.q_power(i * (k - d))
    return out


def boundary_coefficient(lam, k: int, which: str) -> RatFunc:
    """Closed form of A_{k0} ("low") or A_{k,n+1} ("high")."""
    lam = assert_weight(lam)
    n = len(lam)
    ell = ell_of_rank(n)
    qk = RatFunc.q_power(k)
    out = RatFunc.from_int(-1 if n % 2 else 1)
    if which == "low":
        out = out * ell ** (n * (n - 1) // 2)
        for j in range(1, n + 1):
            out = out * (qk - RatFunc.q_power(lam[j - 1]) * ell ** (1 - j))
        return out
    if which == "high":
        sc = (ell * RatFunc.q_power(-1)) ** (n * (n + 1) // 2)
        out = RatFunc.from_int(-1) * sc
        for j in range(1, n + 1):
            out = out * (qk - RatFunc.q_power(lam[j - 1] + n + 1) * ell ** (n - j))
        return out
    raise ValueError("which must be 'low' or 'high'")


def sep_poly_by_recursion(lam) -> LaurentPoly:
    """Rebuild S_lam from the coefficient recursion of the separated equation.

    Starts from f_{lam_1} = 1, solves upward dividing by A_{k0}, and then
    demands that the n+1 overdetermined tail rows vanish; the boundary
    entries are cross-checked against their closed forms along the way.
    """
    lam = assert_weight(lam)
    n = len(lam)
    coeffs = sep_eq_coefficients(lam)
    lo, hi = lam[0], lam[-1]

    def A(k, d):
        return recursion_entry(lam, k, d, coeffs)

    if not A(lo, 0).is_zero():
        raise ArithmeticError("lowest-order recursion entry fails to vanish")
    if not A(hi + n + 1, n + 1).is_zero():
        raise ArithmeticError("highest-order recursion entry fails to vanish")
    for k in range(lo, hi + n + 2):
        if A(k, 0) == boundary_coefficient(lam, k, "low") and A(
            k, n + 1
        ) == boundary_coefficient(lam, k, "high"):
            continue
        raise ArithmeticError("boundary recursion entries disagree with closed forms")
    f = {lo: RatFunc.one()}
    for k in range(lo + 1, hi + 1):
        acc = RatFunc.zero()
        for d in range(1, n + 2):
            prev = f.get(k - d)
            if prev is not None:
                acc = acc + A(k, d) * prev
        head = A(k, 0)
        if head.is_zero():
            raise ArithmeticError("recursion pivot vanishes inside the support")
        f[k] = RatFunc.zero() - acc / head
    for k in range(hi + 1, hi + n + 2):
        acc = RatFunc.zero()
        for d in range(n + 2):
            prev = f.get(k - d)
            if prev is not None:
                acc = acc + A(k, d) * prev
        if not acc.is_zero():
            raise ArithmeticError("overdetermined tail row of the recursion is nonzero")
    return LaurentPoly(Y, {(k,): c for k, c in f.items() if not c.is_zero()})
