"""Canonical text rendering for exact values.

One deterministic format everywhere: monomials sorted descending by
exponent vector (lexicographic over the registered symbol order),
coefficients as reduced integer fractions, `ell` displayed as `l`.
Golden files and CLI output both go through these functions, so the
rendering *is* the comparison format.
"""

from __future__ import annotations

from . import ring

__all__ = [
    "poly_str",
    "ratfunc_str",
    "coeff_factor_str",
    "laurent_str",
    "mbasis_str",
    "seppoly_str",
]

DISPLAY = {"ell": "l"}


def _sym_name(i: int) -> str:
    name = ring.symbol_names()[i]
    return DISPLAY.get(name, name)


def _monomial_str(key: tuple[int, ...]) -> str:
    parts = []
    for i, e in enumerate(key):
        if e == 0:
            continue
        if e == 1:
            parts.append(_sym_name(i))
        else:
            parts.append(f"{_sym_name(i)}^{e}")
    return "*".join(parts)


def poly_str(p: "ring.IntPoly") -> str:
    if p.is_zero():
        return "0"
    w = p.width()
    keys = sorted(p.terms, key=lambda k: k + (0,) * (w - len(k)), reverse=True)
    pieces = []
    for n, k in enumerate(keys):
        c = p.terms[k]
        mono = _monomial_str(k)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if n == 0:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces)


def ratfunc_str(r: "ring.RatFunc") -> str:
    ns = poly_str(r.num)
    if r.is_poly():
        return ns
    ds = poly_str(r.den)
    return f"({ns})/({ds})"


def _is_atomic(s: str) -> bool:
    return " " not in s and "/" not in s


def coeff_factor_str(r: "ring.RatFunc") -> str:
    """Rendering of a coefficient used as a multiplicative factor."""
    s = ratfunc_str(r)
    if r.is_poly():
        return s if _is_atomic(s) else f"({s})"
    return s  # already (num)/(den)


def laurent_str(terms: dict, varnames: tuple[str, ...], ascending: bool = False) -> str:
    """Render {exponent tuple -> RatFunc} over named variables."""
    live = {k: v for k, v in terms.items() if not v.is_zero()}
    if not live:
        return "0"
    pieces = []
    for n, key in enumerate(sorted(live, reverse=not ascending)):
        coeff = live[key]
        mono = "*".join(
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(varnames, key)
            if e != 0
        )
        cs = coeff_factor_str(coeff)
        neg = cs.startswith("-") and _is_atomic(cs)
        if neg:
            cs = cs[1:]
        if mono:
            body = mono if cs == "1" else f"{cs}*{mono}"
        else:
            body = cs
        if n == 0:
            pieces.append(body if not neg else f"-{body}")
        else:
            pieces.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(pieces)


def mbasis_str(coeffs: dict) -> str:
    """Render a {weight -> RatFunc} expansion over monomial symmetric functions.

    Weights are ordered descending along the linear extension of dominance
    (reversed-tuple order), so the leading weight comes first.
    """
    live = {k: v for k, v in coeffs.items() if not v.is_zero()}
    if not live:
        return "0"
    pieces = []
    for n, mu in enumerate(sorted(live, key=lambda k: tuple(reversed(k)), reverse=True)):
        label = "m[" + ",".join(str(p) for p in mu) + "]"
        cs = coeff_factor_str(live[mu])
        body = label if cs == "1" else f"{cs}*{label}"
        pieces.append(body if n == 0 else f"+ {body}")
    return " ".join(pieces)


def seppoly_str(terms: dict) -> str:
    """Render a one-variable separated polynomial, constant term first."""
    return laurent_str(terms, ("y",), ascending=True)
