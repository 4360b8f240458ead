"""Exact base field Q(i)(v) with q = v**4, and its concrete evaluations.

Scalar is a rational function in one formal variable v over the Gaussian
rationals, with q := v**4 so that quarter powers of q (needed by the
Hermitian families, where the form exponent e is a half-integer) are plain
monomials.  All arithmetic is exact; there is no floating point anywhere.

Internally a Scalar is a Gaussian-integer polynomial numerator over a
*real* primitive integer polynomial denominator with positive leading
coefficient.  That form is canonical (the minimal real denominator is
lcm(d, conj d), which is conjugation-invariant), and the spec-level
"monic denominator" view is exposed through the .numerator/.denominator
properties.  Reduction by the polynomial gcd is lazy: equality tests use
cross-multiplication, and full reduction happens on demand (hashing,
printing, the canonical views).

AlgNum elements live in Q(i)[s]/(m(s)) where m is the minimal polynomial
over Q of the real positive fourth root of a concrete prime power q0; the
ring map v -> s evaluates formal identities on actual graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "Scalar",
    "AlgNum",
    "AlgNumField",
    "FamilyParams",
    "FAMILY_TAGS",
    "family_params",
    "conj",
    "gauss_int",
    "q_pochhammer",
    "phi_32",
    "eval_at",
    "q_power",
    "v_power",
    "imag_unit",
    "from_fraction",
    "from_gauss",
    "prime_power_decomposition",
]


# ---------------------------------------------------------------------------
# integer polynomial helpers: tuples of ints, index = exponent, trimmed
# ---------------------------------------------------------------------------

_KRONECKER_CUTOFF = 1200  # len(a)*len(b) above which packed bigint convolution wins


def _trim(c):
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, x in enumerate(b):
        out[k] += x
    return _trim(out)


def _pneg(a):
    return tuple(-x for x in a)


def _psub(a, b):
    out = list(a) + [0] * (len(b) - len(a))
    for k, x in enumerate(b):
        out[k] -= x
    return _trim(out)


def _pack(c, bits):
    nb = bits // 8
    pos = bytearray(len(c) * nb)
    neg = bytearray(len(c) * nb)
    has_neg = False
    for k, x in enumerate(c):
        if x > 0:
            pos[k * nb : k * nb + nb] = x.to_bytes(nb, "little")
        elif x < 0:
            neg[k * nb : k * nb + nb] = (-x).to_bytes(nb, "little")
            has_neg = True
    z = int.from_bytes(pos, "little")
    if has_neg:
        z -= int.from_bytes(neg, "little")
    return z


def _unpack(z, bits, n):
    neg = z < 0
    if neg:
        z = -z
    nb = bits // 8
    raw = z.to_bytes(n * nb + 8, "little")
    half = 1 << (bits - 1)
    full = 1 << bits
    out = []
    carry = 0
    for k in range(n):
        w = int.from_bytes(raw[k * nb : (k + 1) * nb], "little") + carry
        if w >= half:
            w -= full
            carry = 1
        else:
            carry = 0
        out.append(-w if neg else w)
    return tuple(out)


def _conv(a, b):
    na, nb = len(a), len(b)
    if na == 0 or nb == 0:
        return ()
    if na == 1:
        s = a[0]
        return _trim([s * x for x in b])
    if nb == 1:
        s = b[0]
        return _trim([s * x for x in a])
    if na * nb <= _KRONECKER_CUTOFF:
        out = [0] * (na + nb - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return _trim(out)
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    bound = ma * mb * min(na, nb)
    bits = bound.bit_length() + 2
    bits = (bits + 7) & ~7
    return _trim(_unpack(_pack(a, bits) * _pack(b, bits), bits, na + nb - 1))


def _pcontent(a):
    g = 0
    for x in a:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                return 1
    return g


def _pvaluation(a):
    for k, x in enumerate(a):
        if x:
            return k
    return 0


def _pshift_down(a, k):
    return a[k:] if k else a


def _pdiv_int(a, g):
    return tuple(x // g for x in a)


def _pdivexact(a, b):
    """Exact division of integer polynomials; raises if not divisible."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return ()
    rem = list(a)
    db = len(b) - 1
    lb = b[-1]
    out = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        qc, r = divmod(c, lb)
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[k - db] = qc
        for j in range(db + 1):
            rem[k - db + j] -= qc * b[j]
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    return _trim(out)


_SCREEN_P = (1 << 31) - 1  # prime, = 3 mod 4


def _pgcd_screen_trivial(a, b):
    """True if a mod-p Euclid run certifies gcd(a, b) is constant."""
    p = _SCREEN_P
    ra = [x % p for x in a]
    rb = [x % p for x in b]
    if a[-1] % p == 0 or b[-1] % p == 0:
        return False
    fa = _trim(ra)
    fb = _trim(rb)
    while fb:
        if len(fb) == 1:
            return True
        inv = pow(fb[-1], p - 2, p)
        rem = list(fa)
        db = len(fb) - 1
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c:
                qc = (c * inv) % p
                for j in range(db + 1):
                    rem[k - db + j] = (rem[k - db + j] - qc * fb[j]) % p
        fa, fb = fb, _trim(rem)
    return len(fa) == 1


def _ppp(a):
    """Primitive part with positive leading coefficient."""
    if not a:
        return a
    g = _pcontent(a)
    if a[-1] < 0:
        g = -g
    return _pdiv_int(a, g) if g != 1 else a


def _is_probable_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _gcd_prime_stream():
    n = (1 << 62) + 1
    while True:
        if _is_probable_prime(n):
            yield n
        n += 2


def _modp_gcd(a, b, p):
    """Monic gcd of the mod-p images, or None if a leading coeff vanishes."""
    if a[-1] % p == 0 or b[-1] % p == 0:
        return None
    fa = _trim([x % p for x in a])
    fb = _trim([x % p for x in b])
    while fb:
        inv = pow(fb[-1], p - 2, p)
        rem = list(fa)
        db = len(fb) - 1
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c:
                qc = c * inv % p
                for j in range(db + 1):
                    rem[k - db + j] = (rem[k - db + j] - qc * fb[j]) % p
        fa, fb = fb, _trim(rem)
    inv = pow(fa[-1], p - 2, p)
    return tuple(x * inv % p for x in fa)


def _divides(g, a):
    try:
        _pdivexact(a, g)
        return True
    except ArithmeticError:
        return False


def _pgcd(a, b):
    """gcd of integer polynomials, primitive with positive lead.

    Modular (small-primes) algorithm: combine monic mod-p images by CRT with
    the leading-coefficient bound, then certify by exact division.
    """
    if not a:
        return _ppp(b)
    if not b:
        return _ppp(a)
    if len(a) == 1 or len(b) == 1:
        return (1,)
    if _pgcd_screen_trivial(a, b):
        return (1,)
    fa, fb = _ppp(a), _ppp(b)
    if fa == fb:
        return fa
    glead = math.gcd(fa[-1], fb[-1])
    best_deg = None
    modulus = 0
    combined = None
    for p in _gcd_prime_stream():
        gp = _modp_gcd(fa, fb, p)
        if gp is None:
            continue
        dp = len(gp) - 1
        if dp == 0:
            return (1,)
        scaled = tuple(x * glead % p for x in gp)
        if best_deg is None or dp < best_deg:
            best_deg = dp
            modulus = p
            combined = scaled
        elif dp == best_deg:
            # CRT combine with the previous images
            m, q = modulus, p
            inv = pow(m % q, q - 2, q)
            new = []
            for k in range(best_deg + 1):
                x = combined[k] if k < len(combined) else 0
                y = scaled[k] if k < len(scaled) else 0
                t = (y - x) % q * inv % q
                new.append(x + m * t)
            modulus = m * q
            combined = tuple(new)
        else:
            continue  # unlucky prime
        half = modulus // 2
        cand = _ppp(tuple(x - modulus if x > half else x for x in combined))
        if cand and cand[-1] > 0 and _divides(cand, fa) and _divides(cand, fb):
            return cand


# ---------------------------------------------------------------------------
# Scalar: Gaussian-integer numerator / real primitive integer denominator
# ---------------------------------------------------------------------------


def _normalize(nre, nim, den):
    """Cheap canonicalization: v-valuation strip, content gcd, sign."""
    if not nre and not nim:
        return (), (), (1,)
    vals = [_pvaluation(den)]
    if nre:
        vals.append(_pvaluation(nre))
    if nim:
        vals.append(_pvaluation(nim))
    k = min(vals)
    if k:
        nre = _pshift_down(nre, k)
        nim = _pshift_down(nim, k)
        den = _pshift_down(den, k)
    g = math.gcd(_pcontent(nre), math.gcd(_pcontent(nim), _pcontent(den)))
    if den[-1] < 0:
        g = -g
    if g != 1:
        nre = _pdiv_int(nre, g)
        nim = _pdiv_int(nim, g)
        den = _pdiv_int(den, g)
    return nre, nim, den


class Scalar:
    """Element of Q(i)(v), with q = v**4."""

    __slots__ = ("nre", "nim", "den", "_reduced", "_hash")

    def __init__(self, nre=(), nim=(), den=(1,), _normalized=False):
        if not _normalized:
            nre, nim, den = _normalize(_trim(nre), _trim(nim), _trim(den))
        self.nre = nre
        self.nim = nim
        self.den = den
        self._reduced = len(den) == 1
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def _raw(nre, nim, den, reduced=False):
        s = Scalar.__new__(Scalar)
        s.nre, s.nim, s.den = _normalize(nre, nim, den)
        s._reduced = reduced or len(s.den) == 1
        s._hash = None
        return s

    @staticmethod
    def from_int(n):
        return Scalar((n,) if n else ())

    @staticmethod
    def coerce(x):
        if isinstance(x, Scalar):
            return x
        if isinstance(x, int):
            return Scalar.from_int(x)
        if isinstance(x, Fraction):
            return from_fraction(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    # -- basic predicates ---------------------------------------------------

    def is_zero(self):
        return not self.nre and not self.nim

    def __bool__(self):
        return not self.is_zero()

    def is_real(self):
        return not self.nim

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return Scalar._raw(
                _padd(self.nre, other.nre), _padd(self.nim, other.nim), self.den
            )
        g = _pgcd(self.den, other.den)
        if len(g) > 1:
            da = _pdivexact(self.den, g)
            db = _pdivexact(other.den, g)
        else:
            da, db = self.den, other.den
        nre = _padd(_conv(self.nre, db), _conv(other.nre, da))
        nim = _padd(_conv(self.nim, db), _conv(other.nim, da))
        return Scalar._raw(nre, nim, _conv(self.den, db))

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(_pneg(self.nre), _pneg(self.nim), self.den, self._reduced)

    def __sub__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return _ZERO
        ar, ai, br, bi = self.nre, self.nim, other.nre, other.nim
        if not ai and not bi:
            nre, nim = _conv(ar, br), ()
        elif not ai:
            nre, nim = _conv(ar, br), _conv(ar, bi)
        elif not bi:
            nre, nim = _conv(ar, br), _conv(ai, br)
        else:
            t1 = _conv(ar, br)
            t2 = _conv(ai, bi)
            t3 = _conv(_padd(ar, ai), _padd(br, bi))
            nre, nim = _psub(t1, t2), _psub(_psub(t3, t1), t2)
        return Scalar._raw(nre, nim, _conv(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("Scalar division by zero")
        if not self.nim:
            nre, nim, den = self.den, (), self.nre
            if den[-1] < 0:
                nre, den = _pneg(nre), _pneg(den)
            return Scalar._raw(nre, nim, den, self._reduced)
        # 1/(a+bi) = (a-bi)*d / (a^2+b^2): keeps the denominator real
        a, b = self.nre, self.nim
        nden = _padd(_conv(a, a), _conv(b, b))
        nre = _conv(self.den, a)
        nim = _pneg(_conv(self.den, b))
        return Scalar._raw(nre, nim, nden)

    def __truediv__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = _ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def conj(self):
        """Field automorphism fixing v, sending sqrt(-1) to -sqrt(-1)."""
        return Scalar._raw(self.nre, _pneg(self.nim), self.den, self._reduced)

    # -- equality / canonical form ------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.coerce(other)
        elif not isinstance(other, Scalar):
            return NotImplemented
        if self.den == other.den:
            return self.nre == other.nre and self.nim == other.nim
        return (
            _conv(self.nre, other.den) == _conv(other.nre, self.den)
            and _conv(self.nim, other.den) == _conv(other.nim, self.den)
        )

    def __ne__(self, other):
        r = self.__eq__(other)
        return NotImplemented if r is NotImplemented else not r

    def reduced(self):
        """Return self with the numerator/denominator polynomial gcd removed."""
        if self._reduced:
            return self
        g = _pgcd(_pgcd(self.nre, self.nim), self.den)
        if len(g) > 1:
            s = Scalar._raw(
                _pdivexact(self.nre, g),
                _pdivexact(self.nim, g),
                _pdivexact(self.den, g),
                reduced=True,
            )
        else:
            s = self
        s._reduced = True
        return s

    def __hash__(self):
        if self._hash is None:
            r = self.reduced()
            self._hash = hash((r.nre, r.nim, r.den))
        return self._hash

    # -- spec-level views ----------------------------------------------------

    @property
    def numerator(self):
        """Numerator coefficients as Gaussian rationals, for the monic-denominator form."""
        r = self.reduced()
        lc = Fraction(r.den[-1])
        n = max(len(r.nre), len(r.nim))
        out = []
        for k in range(n):
            a = Fraction(r.nre[k]) / lc if k < len(r.nre) else Fraction(0)
            b = Fraction(r.nim[k]) / lc if k < len(r.nim) else Fraction(0)
            out.append((a, b))
        return tuple(out)

    @property
    def denominator(self):
        """Denominator coefficients (monic, real) of the reduced form."""
        r = self.reduced()
        lc = Fraction(r.den[-1])
        return tuple(Fraction(c) / lc for c in r.den)

    def as_fraction(self):
        """The value as a Fraction, if it is a rational constant."""
        r = self.reduced()
        if r.nim or len(r.nre) > 1 or len(r.den) > 1:
            raise ValueError("scalar is not a rational constant")
        return Fraction(r.nre[0] if r.nre else 0, r.den[0])

    def as_gauss(self):
        """The value as a pair of Fractions (re, im), if constant."""
        r = self.reduced()
        if len(r.nre) > 1 or len(r.nim) > 1 or len(r.den) > 1:
            raise ValueError("scalar is not a constant")
        d = r.den[0]
        return (
            Fraction(r.nre[0] if r.nre else 0, d),
            Fraction(r.nim[0] if r.nim else 0, d),
        )

    def has_nonneg_coeffs(self):
        """True if the reduced form is a real polynomial (or polynomial over a
        positive constant) with non-negative coefficients; such values are
        positive at every real q > 1."""
        r = self.reduced()
        if r.nim or len(r.den) > 1:
            return False
        return all(c >= 0 for c in r.nre)

    # -- printing -------------------------------------------------------------

    def __str__(self):
        r = self.reduced()
        if r.is_zero():
            return "0"
        lc = Fraction(r.den[-1])
        num = _fmt_gpoly(r.nre, r.nim, lc)
        if len(r.den) == 1 and r.den[0] == lc:
            return num
        den = _fmt_gpoly(r.den, (), lc)
        if "+" in num or "-" in num[1:] or " " in num:
            num = f"({num})"
        if "+" in den or "-" in den[1:] or " " in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"Scalar({self})"


def _fmt_frac(x):
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_gauss(a, b):
    if b == 0:
        return _fmt_frac(a)
    im = f"{_fmt_frac(b)}*i" if abs(b) != 1 else ("i" if b > 0 else "-i")
    if a == 0:
        return im
    return f"{_fmt_frac(a)}{'+' if b > 0 else ''}{im}"


def _fmt_gpoly(re, im, scale):
    n = max(len(re), len(im))
    terms = []
    for k in range(n):
        a = Fraction(re[k]) / scale if k < len(re) else Fraction(0)
        b = Fraction(im[k]) / scale if k < len(im) else Fraction(0)
        if a == 0 and b == 0:
            continue
        c = _fmt_gauss(a, b)
        if k == 0:
            terms.append(c)
            continue
        mono = "v" if k == 1 else f"v^{k}"
        if c == "1":
            terms.append(mono)
        elif c == "-1":
            terms.append(f"-{mono}")
        else:
            if ("+" in c or "-" in c[1:]) and not (c.startswith("(")):
                c = f"({c})"
            terms.append(f"{c}*{mono}")
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


_ZERO = Scalar()
_ONE = Scalar((1,))
_I = Scalar((), (1,))


def v_power(k):
    """v**k as a Scalar, any integer k."""
    if k >= 0:
        return Scalar._raw((0,) * k + (1,), (), (1,), reduced=True)
    return Scalar._raw((1,), (), (0,) * (-k) + (1,), reduced=True)


def q_power(exp):
    """q**exp as a Scalar; exp may be a Fraction with denominator 1, 2 or 4."""
    k = Fraction(exp) * 4
    if k.denominator != 1:
        raise ValueError(f"q**({exp}) is not a monomial in v = q^(1/4)")
    return v_power(int(k))


def imag_unit():
    return _I


def from_fraction(x):
    x = Fraction(x)
    return Scalar._raw((x.numerator,), (), (x.denominator,), reduced=True)


def from_gauss(re, im):
    re, im = Fraction(re), Fraction(im)
    d = (re.denominator * im.denominator) // math.gcd(re.denominator, im.denominator)
    return Scalar._raw(
        (re.numerator * (d // re.denominator),),
        (im.numerator * (d // im.denominator),),
        (d,),
        reduced=True,
    )


def conj(x):
    """Conjugation dispatch: fixes rationals, negates the imaginary part."""
    if isinstance(x, (int, Fraction)):
        return x
    return x.conj()


# ---------------------------------------------------------------------------
# q-combinatorics over the formal field
# ---------------------------------------------------------------------------

_Q = v_power(4)


def gauss_int(n):
    """(q**n - 1)/(q - 1) as a polynomial in q, for n >= 0."""
    if n < 0:
        raise ValueError("gauss_int needs n >= 0")
    coeffs = [0] * (4 * (n - 1) + 1) if n else []
    for k in range(n):
        coeffs[4 * k] = 1
    return Scalar(tuple(coeffs))


def q_pochhammer(r, n):
    """(r; q)_n = (1 - r)(1 - r q) ... (1 - r q^(n-1))."""
    if n < 0:
        raise ValueError("q_pochhammer needs n >= 0")
    r = Scalar.coerce(r)
    out = _ONE
    rq = r
    for _ in range(n):
        out = out * (_ONE - rq)
        rq = rq * _Q
    return out


def _terminating_index(a1, limit=256):
    """The i >= 0 with a1 = q**(-i), or None."""
    x = Scalar.coerce(a1)
    for i in range(limit + 1):
        if x == _ONE:
            return i
        x = x * _Q
    return None


def phi_32(a1, a2, a3, b2, z):
    """Terminating basic hypergeometric sum with upper parameters
    (a1, a2, a3), lower parameters (0, b2), argument z.

    a1 must be q**(-i) for some integer i >= 0 (else the series does not
    terminate), and no factor (1 - b2 q^k), k < i, may vanish.
    """
    a1, a2, a3, b2, z = map(Scalar.coerce, (a1, a2, a3, b2, z))
    i = _terminating_index(a1)
    if i is None:
        raise ValueError("series does not terminate")
    total = _ONE
    term = _ONE
    fa1, fa2, fa3, fb2, fq = a1, a2, a3, b2, _Q
    for n in range(1, i + 1):
        low = (_ONE - fb2) * (_ONE - fq)
        if low.is_zero():
            raise ZeroDivisionError("pole in summand")
        term = term * (_ONE - fa1) * (_ONE - fa2) * (_ONE - fa3) * z / low
        total = total + term
        fa1 = fa1 * _Q
        fa2 = fa2 * _Q
        fa3 = fa3 * _Q
        fb2 = fb2 * _Q
        fq = fq * _Q
    return total


# ---------------------------------------------------------------------------
# concrete evaluation: Q(i)[s]/(m(s)), s the real positive q0^(1/4)
# ---------------------------------------------------------------------------


def prime_power_decomposition(n):
    """(p, k) with n = p**k, p prime; None if n is not a prime power."""
    if n < 2:
        return None
    for p in range(2, n + 1):
        if p * p > n:
            return (n, 1)
        if n % p == 0:
            k = 0
            m = n
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else None
    return None


class AlgNumField:
    """Q(i)[s]/(s**d - c), the minimal field containing i and q0**(1/4).

    d is 1, 2 or 4 depending on q0 = p**k (k = 0, 2, other mod 4), so the
    modulus is irreducible over Q(i) and the quotient is a field.
    """

    _cache = {}

    def __new__(cls, q0):
        if q0 in cls._cache:
            return cls._cache[q0]
        pk = prime_power_decomposition(q0)
        if pk is None:
            raise ValueError(f"{q0} is not a prime power")
        self = super().__new__(cls)
        p, k = pk
        self.q0 = q0
        if k % 4 == 0:
            self.degree, self.c = 1, p ** (k // 4)
        elif k % 2 == 0:
            self.degree, self.c = 2, p ** (k // 2)
        else:
            self.degree, self.c = 4, q0
        cls._cache[q0] = self
        return self

    @property
    def min_poly(self):
        """Coefficients of m(s) = s**degree - c, ascending."""
        return (-self.c,) + (0,) * (self.degree - 1) + (1,)

    def _make(self, re, im, den):
        x = AlgNum.__new__(AlgNum)
        g = math.gcd(_pcontent(re), math.gcd(_pcontent(im), den))
        if den < 0:
            g = -g
        if g != 1 and g != 0:
            re = _pdiv_int(re, g)
            im = _pdiv_int(im, g)
            den //= g
        x.field = self
        x.re = _trim(re)
        x.im = _trim(im)
        x.den = den
        return x

    def zero(self):
        return self._make((), (), 1)

    def one(self):
        return self._make((1,), (), 1)

    def i(self):
        return self._make((), (1,), 1)

    def s(self):
        if self.degree == 1:
            return self._make((self.c,), (), 1)
        return self._make((0, 1), (), 1)

    def from_fraction(self, x):
        x = Fraction(x)
        return self._make((x.numerator,), (), x.denominator)

    def from_gauss(self, re, im=0):
        re, im = Fraction(re), Fraction(im)
        d = (re.denominator * im.denominator) // math.gcd(
            re.denominator, im.denominator
        )
        return self._make(
            (re.numerator * (d // re.denominator),),
            (im.numerator * (d // im.denominator),),
            d,
        )

    def coerce(self, x):
        if isinstance(x, AlgNum):
            if x.field is not self:
                raise TypeError("AlgNum from a different field")
            return x
        if isinstance(x, int):
            return self._make((x,), (), 1)
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into AlgNumField")

    def _fold(self, coeffs):
        """Reduce a coefficient list mod s**degree - c, in place."""
        d, c = self.degree, self.c
        for k in range(len(coeffs) - 1, d - 1, -1):
            if coeffs[k]:
                coeffs[k - d] += c * coeffs[k]
                coeffs[k] = 0
        return _trim(coeffs[:d])

    def __repr__(self):
        return f"AlgNumField(q0={self.q0}, m=s^{self.degree}-{self.c})"


class AlgNum:
    """Element of an AlgNumField, exact Gaussian-rational coordinates."""

    __slots__ = ("field", "re", "im", "den")

    def is_zero(self):
        return not self.re and not self.im

    def __bool__(self):
        return not self.is_zero()

    def _binop(self, other):
        return self.field.coerce(other)

    def __add__(self, other):
        try:
            o = self._binop(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return self.field._make(_padd(self.re, o.re), _padd(self.im, o.im), self.den)
        re = _padd(tuple(x * o.den for x in self.re), tuple(x * self.den for x in o.re))
        im = _padd(tuple(x * o.den for x in self.im), tuple(x * self.den for x in o.im))
        return self.field._make(re, im, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return self.field._make(_pneg(self.re), _pneg(self.im), self.den)

    def __sub__(self, other):
        try:
            o = self._binop(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._binop(other) - self

    def __mul__(self, other):
        try:
            o = self._binop(other)
        except TypeError:
            return NotImplemented
        ar, ai, br, bi = self.re, self.im, o.re, o.im
        t1 = _conv(ar, br)
        t2 = _conv(ai, bi)
        t3 = _conv(_padd(ar, ai), _padd(br, bi))
        re = self.field._fold(list(_psub(t1, t2)))
        im = self.field._fold(list(_psub(_psub(t3, t1), t2)))
        return self.field._make(re, im, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("AlgNum division by zero")
        F = self.field
        d = F.degree
        # solve x * self = 1 as a d x d Gaussian-rational linear system
        cols = []
        basis = [F._make((0,) * k + (1,), (), 1) for k in range(d)]
        for b in basis:
            p = b * self
            col = []
            for k in range(d):
                a = Fraction(p.re[k] if k < len(p.re) else 0, p.den)
                bb = Fraction(p.im[k] if k < len(p.im) else 0, p.den)
                col.append((a, bb))
            cols.append(col)
        # augmented Gaussian elimination over Q(i)
        n = d
        M = [[cols[j][i] for j in range(n)] for i in range(n)]
        rhs = [(Fraction(1), Fraction(0)) if i == 0 else (Fraction(0), Fraction(0)) for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if M[r][col] != (0, 0))
            M[col], M[piv] = M[piv], M[col]
            rhs[col], rhs[piv] = rhs[piv], rhs[col]
            a, b = M[col][col]
            nrm = a * a + b * b
            inv = (a / nrm, -b / nrm)
            M[col] = [_cmul(x, inv) for x in M[col]]
            rhs[col] = _cmul(rhs[col], inv)
            for r in range(n):
                if r != col and M[r][col] != (0, 0):
                    f = M[r][col]
                    M[r] = [_csub(x, _cmul(f, y)) for x, y in zip(M[r], M[col])]
                    rhs[r] = _csub(rhs[r], _cmul(f, rhs[col]))
        res = F.zero()
        for k in range(n):
            a, b = rhs[k]
            res = res + F.from_gauss(a, b) * basis[k]
        return res

    def __truediv__(self, other):
        try:
            o = self._binop(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._binop(other) * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def conj(self):
        return self.field._make(self.re, _pneg(self.im), self.den)

    def __eq__(self, other):
        try:
            o = self._binop(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im and self.den == o.den

    def __ne__(self, other):
        r = self.__eq__(other)
        return NotImplemented if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.field.q0, self.re, self.im, self.den))

    @property
    def coeffs(self):
        """Gaussian-rational coordinates in the power basis of s."""
        d = self.field.degree
        return tuple(
            (
                Fraction(self.re[k] if k < len(self.re) else 0, self.den),
                Fraction(self.im[k] if k < len(self.im) else 0, self.den),
            )
            for k in range(d)
        )

    def as_fraction(self):
        if self.im or len(self.re) > 1:
            raise ValueError("AlgNum is not rational")
        return Fraction(self.re[0] if self.re else 0, self.den)

    def as_gauss(self):
        if len(self.re) > 1 or len(self.im) > 1:
            raise ValueError("AlgNum is not in Q(i)")
        return (
            Fraction(self.re[0] if self.re else 0, self.den),
            Fraction(self.im[0] if self.im else 0, self.den),
        )

    def __str__(self):
        d = self.field.degree
        terms = []
        for k in range(d):
            a = Fraction(self.re[k] if k < len(self.re) else 0, self.den)
            b = Fraction(self.im[k] if k < len(self.im) else 0, self.den)
            if a == 0 and b == 0:
                continue
            c = _fmt_gauss(a, b)
            if k == 0:
                terms.append(c)
            else:
                mono = "s" if k == 1 else f"s^{k}"
                if c == "1":
                    terms.append(mono)
                elif c == "-1":
                    terms.append(f"-{mono}")
                else:
                    if "+" in c or "-" in c[1:]:
                        c = f"({c})"
                    terms.append(f"{c}*{mono}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self):
        return f"AlgNum({self}, q0={self.field.q0})"


def _cmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _csub(x, y):
    return (x[0] - y[0], x[1] - y[1])


def eval_at(s, q0):
    """Image of a Scalar under v -> q0**(1/4) in AlgNumField(q0)."""
    F = AlgNumField(q0)
    s = Scalar.coerce(s)
    sv = F.s()

    def horner(coeffs):
        acc = F.zero()
        for c in reversed(coeffs):
            acc = acc * sv + c
        return acc

    num = horner(s.nre) + F.i() * horner(s.nim)
    den = horner(s.den)
    if den.is_zero():
        raise ZeroDivisionError(f"pole at q0={q0}")
    return num / den


# ---------------------------------------------------------------------------
# the six families of formed spaces
# ---------------------------------------------------------------------------

FAMILY_TAGS = ("C", "B", "D", "2D", "2A-even", "2A-odd")

_FAMILY_TABLE = {
    # tag: (e, ambient dimension as a function of D, form kind, hermitian?)
    "C": (Fraction(1), lambda D: 2 * D, "alternating", False),
    "B": (Fraction(1), lambda D: 2 * D + 1, "quadratic", False),
    "D": (Fraction(0), lambda D: 2 * D, "quadratic", False),
    "2D": (Fraction(2), lambda D: 2 * D + 2, "quadratic", False),
    "2A-even": (Fraction(3, 2), lambda D: 2 * D + 1, "hermitian", True),
    "2A-odd": (Fraction(1, 2), lambda D: 2 * D, "hermitian", True),
}


@dataclass(frozen=True)
class FamilyParams:
    """One of the six families of formed spaces, with its exponent e."""

    tag: str
    e: Fraction
    D: int
    ambient_dim: int

    @property
    def form_kind(self):
        return _FAMILY_TABLE[self.tag][2]

    @property
    def hermitian(self):
        return _FAMILY_TABLE[self.tag][3]


def family_params(tag, D):
    if tag not in _FAMILY_TABLE:
        raise ValueError(f"unknown family tag {tag!r}; expected one of {FAMILY_TAGS}")
    if D < 3:
        raise ValueError("diameter D must be at least 3")
    e, dim_fn, _, _ = _FAMILY_TABLE[tag]
    return FamilyParams(tag, e, D, dim_fn(D))


def family_e(tag):
    if tag not in _FAMILY_TABLE:
        raise ValueError(f"unknown family tag {tag!r}; expected one of {FAMILY_TAGS}")
    return _FAMILY_TABLE[tag][0]
