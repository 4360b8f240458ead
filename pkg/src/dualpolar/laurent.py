"""Laurent polynomials in one variable eta over an exact coefficient field.

Coefficients may be Scalar, AlgNum, Fraction or int; mixed int coefficients
coerce through the field element arithmetic.  The zero polynomial has an
empty coefficient table.
"""

from __future__ import annotations

__all__ = ["LaurentPoly", "eta_power"]


class LaurentPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        table = {}
        if coeffs:
            for k, c in coeffs.items():
                if not _is_zero(c):
                    table[k] = c
        self.coeffs = table

    # -- constructors --------------------------------------------------------

    @staticmethod
    def constant(c):
        return LaurentPoly({0: c})

    @staticmethod
    def coerce(x):
        if isinstance(x, LaurentPoly):
            return x
        return LaurentPoly({0: x})

    # -- structure -----------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def degree(self):
        """Highest exponent; raises on the zero polynomial."""
        return max(self.coeffs)

    def low_degree(self):
        """Lowest exponent; raises on the zero polynomial."""
        return min(self.coeffs)

    def support(self):
        return sorted(self.coeffs)

    def coeff(self, k):
        return self.coeffs.get(k, 0)

    def is_symmetric(self):
        """f(eta) == f(1/eta)."""
        return self == self.reversed()

    def reversed(self):
        """eta -> 1/eta substitution."""
        return LaurentPoly({-k: c for k, c in self.coeffs.items()})

    def is_monic(self):
        return bool(self) and self.coeffs[self.degree()] == 1

    def map_coeffs(self, fn):
        return LaurentPoly({k: fn(c) for k, c in self.coeffs.items()})

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        other = LaurentPoly.coerce(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k, 0) + c
            if _is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            if _is_zero(other):
                return LaurentPoly()
            return LaurentPoly({k: c * other for k, c in self.coeffs.items()})
        out = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                t = c1 * c2
                s = out.get(k)
                out[k] = t if s is None else s + t
        return LaurentPoly(out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, c):
        if isinstance(c, LaurentPoly):
            raise TypeError("divide by a coefficient, not a polynomial")
        return LaurentPoly({k: v / c for k, v in self.coeffs.items()})

    def shift(self, n):
        """Multiply by eta**n."""
        return LaurentPoly({k + n: c for k, c in self.coeffs.items()})

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = LaurentPoly({0: 1})
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = LaurentPoly.coerce(other)
        keys = set(self.coeffs) | set(other.coeffs)
        for k in keys:
            if not _is_zero(self.coeffs.get(k, 0) - other.coeffs.get(k, 0)):
                return False
        return True

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(frozenset((k, c) for k, c in self.coeffs.items()))

    # -- evaluation --------------------------------------------------------------

    def evaluate(self, x, one=1, inv=None):
        """Value at x; x may be a field element or a square matrix.

        one is the multiplicative identity of the target (a matrix identity
        when x is a matrix); inv overrides 1/x for negative exponents.
        """
        if not self.coeffs:
            return one * 0
        if any(k < 0 for k in self.coeffs) and inv is None:
            inv = 1 / x
        pos_pows = {0: one}
        out = None
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            if k >= 0:
                base, steps = x, k
            else:
                base, steps = inv, -k
            p = pos_pows.get(k)
            if p is None:
                p = one
                for _ in range(steps):
                    p = p * base
                pos_pows[k] = p
            term = p * c if not isinstance(c, int) else p * c
            out = term if out is None else out + term
        return out

    def value_table(self, points, one=1):
        """Values at a list of invertible field points."""
        return [self.evaluate(x, one=one) for x in points]

    # -- printing -------------------------------------------------------------------

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            cs = str(c)
            if k == 0:
                parts.append(f"({cs})" if _needs_parens(cs) else cs)
                continue
            mono = "eta" if k == 1 else f"eta^{k}"
            if cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append(f"-{mono}")
            else:
                if _needs_parens(cs):
                    cs = f"({cs})"
                parts.append(f"{cs}*{mono}")
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self):
        return f"LaurentPoly({self})"


def _needs_parens(s):
    return "+" in s or "-" in s[1:] or "/" in s


def _is_zero(c):
    if isinstance(c, int):
        return c == 0
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return c == 0


def eta_power(k, coeff=1):
    return LaurentPoly({k: coeff})
