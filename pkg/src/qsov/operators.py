"""q-shift difference operators with rational coefficient functions.

An operator is a finite sum  sum_i  (num_i/den_i)(t) * T^{m_i}  where
T^{m} dilates t_j -> q^{m_j} t_j.  Coefficients are kept as explicit
numerator/denominator pairs of Laurent polynomials; application to a
Laurent polynomial clears the denominators by exact division and raises
if anything fails to clear.
"""

from __future__ import annotations

from .laurent import LaurentPoly
from .ring import ExactDivisionError

__all__ = ["QShiftOperator"]


class QShiftOperator:
    __slots__ = ("vars", "terms")

    def __init__(self, varnames, terms):
        """terms: list of (num, den, shift) with Laurent num/den, tuple shift."""
        self.vars = tuple(varnames)
        self.terms = []
        for num, den, shift in terms:
            if den.is_zero():
                raise ZeroDivisionError("operator coefficient with zero denominator")
            if not num.is_zero():
                self.terms.append((num, den, tuple(shift)))

    @staticmethod
    def shift(varnames, shift) -> "QShiftOperator":
        one = LaurentPoly.one(varnames)
        return QShiftOperator(varnames, [(one, one, tuple(shift))])

    def __add__(self, other: "QShiftOperator") -> "QShiftOperator":
        if self.vars != other.vars:
            raise ValueError("variable mismatch")
        return QShiftOperator(self.vars, list(self.terms) + list(other.terms))

    def scale(self, coeff) -> "QShiftOperator":
        return QShiftOperator(
            self.vars, [(num.scale(coeff), den, m) for num, den, m in self.terms]
        )

    def merged(self) -> "QShiftOperator":
        """Combine duplicate shift vectors into single fractions."""
        by_shift: dict[tuple, tuple[LaurentPoly, LaurentPoly]] = {}
        for num, den, m in self.terms:
            if m not in by_shift:
                by_shift[m] = (num, den)
            else:
                n0, d0 = by_shift[m]
                if d0 == den:
                    by_shift[m] = (n0 + num, d0)
                else:
                    by_shift[m] = (n0 * den + num * d0, d0 * den)
        return QShiftOperator(
            self.vars, [(n, d, m) for m, (n, d) in by_shift.items()]
        )

    def compose(self, other: "QShiftOperator") -> "QShiftOperator":
        """self after other: (a T^m)(b T^p) = a * b(q^m t) * T^(m+p)."""
        if self.vars != other.vars:
            raise ValueError("variable mismatch")
        out = []
        for num1, den1, m1 in self.terms:
            shift_map = dict(zip(self.vars, m1))
            for num2, den2, m2 in other.terms:
                out.append(
                    (
                        num1 * num2.qshift(shift_map),
                        den1 * den2.qshift(shift_map),
                        tuple(a + b for a, b in zip(m1, m2)),
                    )
                )
        return QShiftOperator(self.vars, out)

    def adjoint(self) -> "QShiftOperator":
        """Formal adjoint under the constant-term pairing: a T^m -> T^-m a."""
        out = []
        for num, den, m in self.terms:
            back = {name: -e for name, e in zip(self.vars, m)}
            out.append(
                (num.qshift(back), den.qshift(back), tuple(-e for e in m))
            )
        return QShiftOperator(self.vars, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QShiftOperator):
            return NotImplemented
        if self.vars != other.vars:
            return False
        a = self.merged()
        b = other.merged()
        da = {m: (n, d) for n, d, m in a.terms}
        db = {m: (n, d) for n, d, m in b.terms}
        if da.keys() != db.keys():
            return False
        for m, (n1, d1) in da.items():
            n2, d2 = db[m]
            if not (n1 * d2) == (n2 * d1):
                return False
        return True

    __hash__ = None

    def apply(self, f: LaurentPoly) -> LaurentPoly:
        """Apply to a Laurent polynomial; denominators must clear exactly."""
        if f.vars != self.vars:
            raise ValueError("variable mismatch")
        if not self.terms:
            return LaurentPoly.zero(self.vars)
        # distinct denominators (by structural equality of terms dicts)
        dens: list[LaurentPoly] = []
        for _, den, _ in self.terms:
            if not any(den == d for d in dens):
                dens.append(den)
        common = dens[0]
        for d in dens[1:]:
            common = common * d
        total = LaurentPoly.zero(self.vars)
        for num, den, m in self.terms:
            cof = common.divexact(den)
            shifted = f.qshift(dict(zip(self.vars, m)))
            total = total + num * cof * shifted
        try:
            return total.divexact(common)
        except ExactDivisionError:
            raise ExactDivisionError(
                "operator denominator does not clear on this input"
            ) from None
