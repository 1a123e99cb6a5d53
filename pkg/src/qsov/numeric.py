"""Floating-point verification layer.

Everything here cross-checks exact results from the other modules against
independent numeric quadrature: the Askey-Wilson integral on the unit
circle, the action of the two-parameter kernel operator on reflexive
Laurent polynomials, Macdonald orthogonality on the 3-torus, and the
q-integral representation of the separated polynomials.

Only the unit-circle regime is supported: all quadrature contours are
|t| = 1, so every Askey-Wilson style parameter must stay inside the unit
disk.  Deformed contours (parameters crossing the circle) are out of
scope; the exact modules already cover that territory symbolically.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .macdonald import assert_weight, macdonald_poly
from .qseries import qpoch_inf_num
from .seppoly import sep_poly

__all__ = [
    "QuadratureGrid",
    "aw_closed_form",
    "aw_weight_num",
    "aw_integral_check",
    "mab_kernel_num",
    "p_nu_num",
    "mab_numeric_check",
    "r_poly_num",
    "mab_rpoly_check",
    "macdonald_inner_product",
    "orthogonality_check",
    "qint_rhs",
    "qint_rhs_raw",
    "qint_sep_poly_check",
]


def _pairwise_sum(vals: list, lo: int, hi: int) -> complex:
    # fixed recursive split: bit-stable no matter how the work is farmed out
    if hi - lo <= 8:
        total = 0j
        for i in range(lo, hi):
            total += vals[i]
        return total
    mid = (lo + hi) // 2
    return _pairwise_sum(vals, lo, mid) + _pairwise_sum(vals, mid, hi)


class QuadratureGrid:
    """Periodic trapezoid rule on the unit circle.

    Nodes are the N-th roots of unity and dt/(2 pi i t) turns into the
    plain average over nodes, which integrates t^m exactly for |m| < N.
    N must be a power of two, at least 64, so that halving and doubling
    the grid for convergence studies keeps the node sets nested.
    """

    __slots__ = ("n", "nodes")

    def __init__(self, n: int):
        if n < 64 or n & (n - 1):
            raise ValueError("node count must be a power of two, at least 64")
        self.n = n
        self.nodes = tuple(cmath.exp(2j * math.pi * m / n) for m in range(n))

    def average(self, f) -> complex:
        vals = [f(t) for t in self.nodes]
        return _pairwise_sum(vals, 0, self.n) / self.n


def aw_weight_num(a: complex, b: complex, c: complex, d: complex, t: complex, q: float) -> complex:
    """w(a,b,c,d;t) = (t^2, t^-2;q)_inf / prod_x (xt, x/t;q)_inf."""
    out = qpoch_inf_num(t * t, q) * qpoch_inf_num(1.0 / (t * t), q)
    for x in (a, b, c, d):
        out /= qpoch_inf_num(x * t, q) * qpoch_inf_num(x / t, q)
    return out


def aw_closed_form(a: complex, b: complex, c: complex, d: complex, q: float) -> complex:
    num = 2.0 * qpoch_inf_num(a * b * c * d, q)
    den = qpoch_inf_num(q, q)
    for u, v in ((a, b), (a, c), (a, d), (b, c), (b, d), (c, d)):
        den *= qpoch_inf_num(u * v, q)
    return num / den


def _require_disk(*params: complex) -> None:
    if any(abs(x) >= 1.0 for x in params):
        raise ValueError("parameters must lie inside the unit disk (circle contour)")


def aw_integral_check(a: complex, b: complex, c: complex, d: complex, q: float, n: int = 256) -> float:
    """Relative quadrature error of the Askey-Wilson integral.

    Averages the weight over the N-node circle grid and compares with
    2 (abcd;q)_inf / (q, ab, ac, ad, bc, bd, cd;q)_inf.
    """
    if not 0.0 < q < 1.0:
        raise ValueError("need 0 < q < 1")
    _require_disk(a, b, c, d)
    grid = QuadratureGrid(n)
    approx = grid.average(lambda t: aw_weight_num(a, b, c, d, t, q))
    exact = aw_closed_form(a, b, c, d, q)
    return abs(approx - exact) / abs(exact)


# -- the two-parameter kernel operator -------------------------------------------------


def _lq(nu: complex, x: complex, y: complex, q: float) -> complex:
    return (
        qpoch_inf_num(nu * x * y, q)
        * qpoch_inf_num(nu * x / y, q)
        * qpoch_inf_num(nu * y / x, q)
        * qpoch_inf_num(nu / (x * y), q)
    )


def _require_kernel_regime(alpha: float, beta: float, r: complex, s: complex, q: float) -> None:
    if not 0.0 < q < 1.0:
        raise ValueError("need 0 < q < 1")
    if alpha <= 0.0 or beta <= 0.0:
        raise ValueError("need alpha, beta > 0 so q^(a/2), q^(b/2) < 1")
    if abs(abs(r) - 1.0) > 1e-12 or abs(abs(s) - 1.0) > 1e-12:
        raise ValueError("r and s must be unimodular (circle contour)")


def mab_kernel_num(alpha: float, beta: float, r: complex, s: complex, t: complex, q: float) -> complex:
    """Normalized kernel sending 1 to 1.

    (1-q)(q;q)_inf^2 (t^2,t^-2;q)_inf L(q^((a+b)/2); r,s)
    / (2 B_q(a,b) L(q^(a/2); s,t) L(q^(b/2); r,t)) with L the four-fold
    Pochhammer product over sign choices of the exponents.
    """
    qq = qpoch_inf_num(q, q)
    # B_q(a,b) = (1-q)(q, q^(a+b);q)_inf / (q^a, q^b;q)_inf
    bq = (
        (1.0 - q)
        * qq
        * qpoch_inf_num(q ** (alpha + beta), q)
        / (qpoch_inf_num(q**alpha, q) * qpoch_inf_num(q**beta, q))
    )
    num = (
        (1.0 - q)
        * qq
        * qq
        * qpoch_inf_num(t * t, q)
        * qpoch_inf_num(1.0 / (t * t), q)
        * _lq(q ** (0.5 * (alpha + beta)), r, s, q)
    )
    den = 2.0 * bq * _lq(q ** (0.5 * alpha), s, t, q) * _lq(q ** (0.5 * beta), r, t, q)
    return num / den


def _poch_prod(base: complex, z: complex, order: int, q: float) -> complex:
    out = 1.0 + 0j
    for i in range(order):
        out *= 1.0 - base * q**i * z
    return out


def p_nu_num(beta: float, r: complex, t: complex, nu: int, q: float) -> complex:
    """p_nu at parameter beta: (q^(b/2) r t, q^(b/2) r/t;q)_nu."""
    base = q ** (0.5 * beta) * r
    return _poch_prod(base, t, nu, q) * _poch_prod(base, 1.0 / t, nu, q)


def mab_numeric_check(
    alpha: float, beta: float, r: complex, s: complex, nu: int, q: float, n: int = 512
) -> float:
    """Relative error of the kernel action on p_nu against the exact image.

    Quadrature of kernel * p_nu^beta(t) over |t| = 1 versus
    (q^b;q)_nu / (q^(a+b);q)_nu * p_nu^(a+b)(s).
    """
    _require_kernel_regime(alpha, beta, r, s, q)
    if not 0 <= nu <= 3:
        raise ValueError("nu must lie in 0..3")
    grid = QuadratureGrid(n)
    approx = grid.average(
        lambda t: mab_kernel_num(alpha, beta, r, s, t, q) * p_nu_num(beta, r, t, nu, q)
    )
    exact = (
        _poch_prod(q**beta, 1.0, nu, q)
        / _poch_prod(q ** (alpha + beta), 1.0, nu, q)
        * p_nu_num(alpha + beta, r, s, nu, q)
    )
    return abs(approx - exact) / abs(exact)


def r_poly_num(
    alpha: float,
    beta: float,
    r: complex,
    s: complex,
    t: complex,
    idx: tuple[int, int, int, int],
    q: float,
) -> complex:
    """Reflexive Laurent polynomial with Pochhammer orders (j1, j2, k1, k2)."""
    j1, j2, k1, k2 = idx
    qa, qb = q ** (0.5 * alpha), q ** (0.5 * beta)
    out = _poch_prod(qa * s, t, j1, q) * _poch_prod(qa * s, 1.0 / t, j1, q)
    out *= _poch_prod(qa / s, t, j2, q) * _poch_prod(qa / s, 1.0 / t, j2, q)
    out *= _poch_prod(qb * r, t, k1, q) * _poch_prod(qb * r, 1.0 / t, k1, q)
    out *= _poch_prod(qb / r, t, k2, q) * _poch_prod(qb / r, 1.0 / t, k2, q)
    return out


def mab_rpoly_check(
    alpha: float,
    beta: float,
    r: complex,
    s: complex,
    idx: tuple[int, int, int, int],
    q: float,
    n: int = 512,
) -> float:
    """Kernel action on a general R polynomial versus its closed-form image."""
    _require_kernel_regime(alpha, beta, r, s, q)
    j1, j2, k1, k2 = idx
    if min(idx) < 0:
        raise ValueError("Pochhammer orders must be nonnegative")
    grid = QuadratureGrid(n)
    approx = grid.average(
        lambda t: mab_kernel_num(alpha, beta, r, s, t, q)
        * r_poly_num(alpha, beta, r, s, t, idx, q)
    )
    qab = q ** (0.5 * (alpha + beta))
    exact = (
        _poch_prod(q**alpha, 1.0, j1 + j2, q)
        * _poch_prod(q**beta, 1.0, k1 + k2, q)
        / _poch_prod(q ** (alpha + beta), 1.0, j1 + j2 + k1 + k2, q)
        * _poch_prod(qab, r * s, j1 + k1, q)
        * _poch_prod(qab, r / s, j2 + k1, q)
        * _poch_prod(qab, s / r, j1 + k2, q)
        * _poch_prod(qab, 1.0 / (r * s), j2 + k2, q)
    )
    return abs(approx - exact) / abs(exact)


# -- Macdonald orthogonality on the 3-torus --------------------------------------------


def _numeric_terms(lam, q: float, ell: float) -> list[tuple[tuple[int, ...], complex]]:
    poly = macdonald_poly(lam).poly
    point = {"q": q, "ell": ell}
    return [(key, c.eval_complex(point)) for key, c in sorted(poly.terms.items())]


def macdonald_inner_product(lam, lam2, g: float, q: float, n_axis: int = 48) -> complex:
    """Torus quadrature of conj(P_lam) P_lam2 Delta at ell = q^-g.

    The conjugate is realized as t_j -> 1/t_j on |t_j| = 1.  Because the
    nodes are roots of unity, every monomial and every weight factor is a
    power-of-omega lookup; the sums are plain numpy reductions, so the
    result is bit-stable for a fixed n_axis.
    """
    if not 0.0 < q < 1.0:
        raise ValueError("need 0 < q < 1")
    if g <= 0.0:
        raise ValueError("need g > 0 so that ell^-1 = q^g < 1")
    if n_axis < 8:
        raise ValueError("need at least 8 nodes per axis")
    lam, lam2 = assert_weight(lam), assert_weight(lam2)
    if len(lam) != 3 or len(lam2) != 3:
        raise ValueError("torus quadrature is implemented for rank 3")
    ell = q ** (-g)

    omega = np.exp(2j * np.pi * np.arange(n_axis) / n_axis)
    # one factor of Delta per ordered pair: value depends on m_j - m_k only
    ratio = omega.copy()
    wfac = np.ones(n_axis, dtype=complex)
    arg_up, arg_dn = ratio.copy(), (q**g) * ratio
    while np.max(np.abs(arg_up)) >= 1e-16:
        wfac *= (1.0 - arg_up) / (1.0 - arg_dn)
        arg_up *= q
        arg_dn *= q

    m1, m2, m3 = np.meshgrid(
        np.arange(n_axis), np.arange(n_axis), np.arange(n_axis), indexing="ij"
    )
    weight = (
        wfac[(m1 - m2) % n_axis]
        * wfac[(m2 - m1) % n_axis]
        * wfac[(m1 - m3) % n_axis]
        * wfac[(m3 - m1) % n_axis]
        * wfac[(m2 - m3) % n_axis]
        * wfac[(m3 - m2) % n_axis]
    )

    left = np.zeros_like(weight)
    for key, coef in _numeric_terms(lam, q, ell):
        left += coef.conjugate() * omega[(-(m1 * key[0] + m2 * key[1] + m3 * key[2])) % n_axis]
    right = np.zeros_like(weight)
    for key, coef in _numeric_terms(lam2, q, ell):
        right += coef * omega[(m1 * key[0] + m2 * key[1] + m3 * key[2]) % n_axis]

    return complex(np.sum(left * right * weight) / n_axis**3)


def orthogonality_check(lam, lam2, g: float, q: float, n_axis: int = 48) -> float:
    """Normalized |<P_lam, P_lam2>| on the torus; tiny for distinct weights.

    Normalization is the geometric mean of the two self inner products, so
    equal weights return 1 and orthogonal pairs return the suppression
    factor achieved by the quadrature.
    """
    cross = macdonald_inner_product(lam, lam2, g, q, n_axis)
    norm1 = macdonald_inner_product(lam, lam, g, q, n_axis)
    norm2 = macdonald_inner_product(lam2, lam2, g, q, n_axis)
    if not (norm1.real > 0.0 and norm2.real > 0.0):
        raise ArithmeticError("self inner products must be positive")
    return abs(cross) / math.sqrt(norm1.real * norm2.real)


# -- q-integral representation of the separated polynomials ----------------------------


def _qint_pieces(lam, q: float, g: float):
    """Shared bookkeeping for the q-integral representation at rank 3.

    Returns (b, coeffs, denom): the exponent b = lam1 - lam3 + 1 - 3g, the
    coefficients of the terminating integrand polynomial
    P(z) = prod_j prod_{i=1..m_j} (1 - z q^-i x_j) in powers of z = q^k
    (orders m_j = lam_{n-j+1} - lam_{n-j}, arguments
    x_j = q ell^(n-j) q^(lam1 - lam_{n-j})), and the outer Pochhammer
    denominator prod_j (q^(lam1-lam_{n-j+1}+1) ell^(n-j);q)_{m_j}.
    """
    l1, l2, l3 = lam
    b = l1 - l3 + 1.0 - 3.0 * g
    coeffs = [1.0 + 0j]
    for m, xj in ((l3 - l2, q ** (1.0 + l1 - l2 - 2.0 * g)), (l2 - l1, q ** (1.0 - g))):
        for i in range(1, m + 1):
            a = q ** (-i) * xj
            nxt = coeffs + [0j]
            for d in range(len(coeffs), 0, -1):
                nxt[d] -= a * coeffs[d - 1]
            coeffs = nxt
    denom = _poch_prod(q ** (l1 - l3 + 1.0 - 2.0 * g), 1.0, l3 - l2, q)
    denom *= _poch_prod(q ** (l1 - l2 + 1.0 - g), 1.0, l2 - l1, q)
    return b, coeffs, denom


def qint_rhs(lam, q: float, g: float, x: float) -> complex:
    """Right side of the q-integral representation of S_lam at y = q^x.

    S_lam(q^x) = q^(lam1 x) (q^(x+b);q)_M / denom * 1/B_q(x, b)
                 * int_0^1 d_q t t^(x-1) (tq;q)_(b-1) / prod_j (t x_j;q)_(beta_j)
    with M = lam3 - lam1 and b, x_j, denom as in the shared bookkeeping.
    The Jackson sum is carried out degree by degree against the q-binomial
    theorem, which turns the whole expression into
    q^(lam1 x)/denom * sum_d c_d (q^x;q)_d (q^(x+b+d);q)_(M-d):
    a finite product form that stays regular at integer g and integer x,
    where the raw 1/B_q prefactor and the raw sum degenerate to 0 * inf.
    """
    lam = assert_weight(lam)
    if len(lam) != 3:
        raise ValueError("the q-integral route is implemented for rank 3")
    if not 0.0 < q < 1.0:
        raise ValueError("need 0 < q < 1")
    if g <= 0.0 or x <= 0.0:
        raise ValueError("divergent slice: need g > 0 and evaluation point x > 0")
    b, coeffs, denom = _qint_pieces(lam, q, g)
    l1, _, l3 = lam
    m_top = l3 - l1
    total = 0j
    for d, c in enumerate(coeffs):
        total += c * _poch_prod(q**x, 1.0, d, q) * _poch_prod(q ** (x + b + d), 1.0, m_top - d, q)
    return q ** (l1 * x) / denom * total


def qint_rhs_raw(lam, q: float, g: float, x: float, kmax: int = 100000) -> complex:
    """Same right side by literal truncated Jackson summation.

    Only valid on generic slices: x + b must stay away from nonpositive
    integers, otherwise the 1/B_q prefactor and the sum degenerate (use
    qint_rhs, which evaluates the analytic limit, instead).
    """
    lam = assert_weight(lam)
    if len(lam) != 3:
        raise ValueError("the q-integral route is implemented for rank 3")
    if not 0.0 < q < 1.0:
        raise ValueError("need 0 < q < 1")
    if g <= 0.0 or x <= 0.0:
        raise ValueError("divergent slice: need g > 0 and evaluation point x > 0")
    b, coeffs, denom = _qint_pieces(lam, q, g)
    l1, _, l3 = lam
    series = 0j
    poch_b = 1.0 + 0j  # (q^b;q)_k, absorbs (q^b;q)_inf/(q^(k+b);q)_inf from 1/B_q
    for k in range(kmax):
        zk = q**k
        pk = 0j
        for d in range(len(coeffs) - 1, -1, -1):
            pk = pk * zk + coeffs[d]
        term = poch_b * q ** (k * x) * qpoch_inf_num(q ** (k + 1), q) * pk
        series += term
        poch_b *= 1.0 - q ** (b + k)
        if k > 8 and abs(term) < 1e-17 * max(1.0, abs(series)):
            break
    else:
        raise RuntimeError("Jackson sum did not converge")
    series *= qpoch_inf_num(q**x, q) / (qpoch_inf_num(q, q) * qpoch_inf_num(q ** (x + b), q))
    pref = q ** (l1 * x) * _poch_prod(q ** (x + b), 1.0, l3 - l1, q)
    return pref / denom * series


def qint_sep_poly_check(lam, q: float = 0.5, g: float = 1.0, xs=(0.5, 1.0, 2.0)) -> float:
    """Max relative error of the q-integral form of S_lam over the x grid."""
    lam = assert_weight(lam)
    ell = q ** (-g)
    spoly = sep_poly(lam)
    worst = 0.0
    for x in xs:
        exact = spoly.eval_complex({"y": q**x, "q": q, "ell": ell})
        approx = qint_rhs(lam, q, g, x)
        worst = max(worst, abs(approx - exact) / max(abs(exact), 1e-300))
    return worst
