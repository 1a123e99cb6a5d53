"""Symmetric Laurent polynomials, commuting q-difference Hamiltonians and
Macdonald polynomials.

Weights are nondecreasing integer tuples (lambda_1 <= ... <= lambda_n);
negative parts are allowed, giving symmetric Laurent polynomials.  The
coupling enters as ell; for even particle numbers the square root of ell
cannot be avoided in the Hamiltonian coefficients, so those ranks work in
the field generated by L with ell = L^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

from .laurent import LaurentPoly
from .operators import QShiftOperator
from .ring import RatFunc

__all__ = [
    "t_vars",
    "ell_of_rank",
    "ell_half_power",
    "assert_weight",
    "is_dominant",
    "monomial_sym",
    "dominance_leq",
    "enumerate_lower",
    "weight_sort_key",
    "hamiltonian",
    "eigenvalue",
    "expand_in_monomials",
    "MacdonaldPoly",
    "macdonald_poly",
]


def t_vars(n: int) -> tuple[str, ...]:
    return tuple(f"t{j}" for j in range(1, n + 1))


def ell_of_rank(n: int) -> RatFunc:
    """ell as an element of the coefficient field used for rank n."""
    if n % 2:
        return RatFunc.sym("ell")
    return RatFunc.sym("L") ** 2


def ell_half_power(n: int, m: int) -> RatFunc:
    """ell^(m/2) in the rank-n coefficient field."""
    if m % 2 == 0:
        return ell_of_rank(n) ** (m // 2)
    if n % 2:
        raise ValueError("half-integer ell power at odd rank")
    return RatFunc.sym("L") ** m


def assert_weight(parts) -> tuple[int, ...]:
    parts = tuple(int(p) for p in parts)
    if any(a > b for a, b in zip(parts, parts[1:])):
        raise ValueError(f"weight parts must be nondecreasing: {parts}")
    return parts


def is_dominant(parts) -> bool:
    parts = tuple(parts)
    return all(a <= b for a, b in zip(parts, parts[1:]))


def monomial_sym(parts, varnames=None) -> LaurentPoly:
    """Monomial symmetric Laurent polynomial m_lambda (orbit sum)."""
    parts = assert_weight(parts)
    if varnames is None:
        varnames = t_vars(len(parts))
    orbit = set(permutations(parts))
    one = RatFunc.one()
    return LaurentPoly(tuple(varnames), {key: one for key in orbit})


def dominance_leq(mu, lam) -> bool:
    """mu <= lam in the dominance order on weights of equal total degree."""
    mu = assert_weight(mu)
    lam = assert_weight(lam)
    if len(mu) != len(lam) or sum(mu) != sum(lam):
        return False
    tail_mu = 0
    tail_lam = 0
    for a, b in zip(reversed(mu[1:]), reversed(lam[1:])):
        tail_mu += a
        tail_lam += b
        if tail_mu > tail_lam:
            return False
    return True


def enumerate_lower(lam) -> list[tuple[int, ...]]:
    """All dominant weights mu with mu <= lam (dominance), lam included."""
    lam = assert_weight(lam)
    n = len(lam)
    total = sum(lam)
    tails = [sum(lam[k:]) for k in range(n)]  # tails[k] = sum of parts k..n-1
    out: list[tuple[int, ...]] = []

    def rec(pos: int, remaining: int, upper: int | None, chosen: list[int]):
        # pos runs n-1 .. 0; chosen holds parts pos+1..n-1 (reversed order)
        if pos == 0:
            v = remaining
            if (upper is None or v <= upper):
                out.append(tuple([v] + chosen[::-1]))
            return
        # v = mu_pos; nondecreasing: v <= upper; parts below sum to remaining - v
        # and each is <= v, so remaining - v <= pos * v  =>  v >= remaining/(pos+1)
        lo = -(-remaining // (pos + 1))  # ceil
        hi = tails[pos] - (sum(chosen))
        if upper is not None:
            hi = min(hi, upper)
        for v in range(lo, hi + 1):
            chosen.append(v)
            rec(pos - 1, remaining - v, v, chosen)
            chosen.pop()

    rec(n - 1, total, None, [])
    return [mu for mu in out if dominance_leq(mu, lam)]


def weight_sort_key(mu):
    """Linear extension of dominance: sort descending by reversed tuple."""
    return tuple(reversed(mu))


@lru_cache(maxsize=None)
def hamiltonian(i: int, n: int = 3) -> QShiftOperator:
    """The i-th commuting q-difference Hamiltonian in n variables.

    H_i = sum over |J| = i of
          prod_{j in J, k not in J} (ell^{-1/2} t_j - ell^{1/2} t_k)/(t_j - t_k)
          * prod_{j in J} T_j,
    with T_j the shift t_j -> q t_j.
    """
    if not 1 <= i <= n:
        raise ValueError("Hamiltonian index out of range")
    varnames = t_vars(n)
    ell = ell_of_rank(n)
    terms = []
    for subset in combinations(range(n), i):
        inside = set(subset)
        num = LaurentPoly.const(varnames, ell_half_power(n, -i * (n - i)))
        den = LaurentPoly.one(varnames)
        for j in subset:
            tj = LaurentPoly.var(varnames, varnames[j])
            for k in range(n):
                if k in inside:
                    continue
                tk = LaurentPoly.var(varnames, varnames[k])
                num = num * (tj - tk.scale(ell))
                den = den * (tj - tk)
        shift = tuple(1 if j in inside else 0 for j in range(n))
        terms.append((num, den, shift))
    return QShiftOperator(varnames, terms)


def eigenvalue(k: int, lam, n: int | None = None) -> RatFunc:
    """Eigenvalue of H_k on P_lambda: e_k of q^{lambda_j} ell^{(n+1)/2 - j}."""
    lam = assert_weight(lam)
    if n is None:
        n = len(lam)
    if len(lam) != n:
        raise ValueError("weight length must match rank")
    mus = [
        RatFunc.q_power(lam[j - 1]) * ell_half_power(n, n + 1 - 2 * j)
        for j in range(1, n + 1)
    ]
    total = RatFunc.zero()
    for subset in combinations(range(n), k):
        prod = RatFunc.one()
        for j in subset:
            prod = prod * mus[j]
        total = total + prod
    return total


def expand_in_monomials(f: LaurentPoly) -> dict[tuple[int, ...], RatFunc]:
    """Expand a symmetric Laurent polynomial over monomial symmetric functions.

    Raises ValueError if f is not symmetric under all variable permutations.
    """
    coeffs: dict[tuple[int, ...], RatFunc] = {}
    for key, c in f.terms.items():
        if tuple(sorted(key)) == key:
            coeffs[key] = c
    rebuilt = LaurentPoly.zero(f.vars)
    for mu, c in coeffs.items():
        rebuilt = rebuilt + monomial_sym(mu, f.vars).scale(c)
    if not rebuilt == f:
        raise ValueError("polynomial is not symmetric")
    return coeffs


@dataclass(frozen=True)
class MacdonaldPoly:
    weight: tuple[int, ...]
    coeffs: dict  # weight -> RatFunc, monomial-symmetric expansion
    poly: LaurentPoly


@lru_cache(maxsize=None)
def _hamiltonian_row(k: int, mu: tuple[int, ...]) -> tuple:
    """m-basis expansion of H_k m_mu; rows are shared across weights."""
    f = monomial_sym(mu)
    g = hamiltonian(k, len(mu)).apply(f)
    return tuple(expand_in_monomials(g).items())


@lru_cache(maxsize=None)
def _macdonald_cached(lam: tuple[int, ...]) -> MacdonaldPoly:
    n = len(lam)
    if n != 3:
        raise ValueError("Macdonald solver implemented for three variables")
    mus = sorted(enumerate_lower(lam), key=weight_sort_key, reverse=True)
    assert mus[0] == lam
    index = {mu: i for i, mu in enumerate(mus)}
    action = {}
    for mu in mus:
        row = dict(_hamiltonian_row(1, mu))
        if any(nu not in index for nu in row):
            raise ArithmeticError(f"H1 action on m_{mu} leaves the dominance ideal")
        action[mu] = row
    h1_lam = eigenvalue(1, lam)
    kappa: dict[tuple[int, ...], RatFunc] = {lam: RatFunc.one()}
    for mu in mus[1:]:
        gap = h1_lam - eigenvalue(1, mu)
        if gap.is_zero():
            raise ArithmeticError(f"eigenvalue collision between {lam} and {mu}")
        acc = RatFunc.zero()
        for sigma in mus:
            if sigma == mu:
                continue
            if sigma in kappa and mu in action[sigma]:
                acc = acc + kappa[sigma] * action[sigma][mu]
        kappa[mu] = acc / gap
    poly = LaurentPoly.zero(t_vars(n))
    for mu, c in kappa.items():
        if not c.is_zero():
            poly = poly + monomial_sym(mu).scale(c)
    # independent confirmation with the higher Hamiltonians, checked
    # coefficient-wise in the m-basis: the operator only ever acts on
    # monomial symmetric functions, whose rows are small and shared
    # across weights.
    for k in (2, 3):
        hk = eigenvalue(k, lam)
        total: dict[tuple[int, ...], RatFunc] = {}
        for sigma, c in kappa.items():
            if c.is_zero():
                continue
            for nu, a in _hamiltonian_row(k, sigma):
                cur = total.get(nu)
                total[nu] = c * a if cur is None else cur + c * a
        for nu in set(total) | set(kappa):
            lhs = total.get(nu, RatFunc.zero())
            rhs = hk * kappa.get(nu, RatFunc.zero())
            if not lhs == rhs:
                raise ArithmeticError(f"H{k} eigenrelation failed for weight {lam}")
    coeffs = {mu: c for mu, c in kappa.items() if not c.is_zero()}
    return MacdonaldPoly(lam, coeffs, poly)


def macdonald_poly(lam) -> MacdonaldPoly:
    """Monic (in m_lambda) Macdonald polynomial for a dominant weight, n = 3.

    Solved by back-substitution against H_1 alone; the H_2 and H_3
    eigenrelations are then verified exactly and failure raises.
    """
    return _macdonald_cached(assert_weight(lam))
