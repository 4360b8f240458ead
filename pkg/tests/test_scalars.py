"""Field axioms, q-combinatorics, and concrete evaluation of the base field."""

import random
from fractions import Fraction as F

import pytest

from dualpolar.scalars import (
    AlgNumField,
    Scalar,
    conj,
    eval_at,
    family_params,
    from_fraction,
    from_gauss,
    gauss_int,
    imag_unit,
    phi_32,
    prime_power_decomposition,
    q_pochhammer,
    q_power,
    v_power,
)

Q = q_power(1)
I = imag_unit()


def random_scalar(rng, size=3):
    """A random element of Q(i)(v) with small support."""
    def poly():
        return tuple(rng.randint(-4, 4) for _ in range(rng.randint(1, size)))

    num_re, num_im = poly(), poly()
    while True:
        den = poly()
        if any(den):
            break
    s = Scalar(num_re, num_im) / Scalar(den)
    return s


def test_field_axioms_randomized():
    rng = random.Random(20260810)
    for _ in range(60):
        a, b, c = (random_scalar(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a * b == b * a
        if a:
            assert a * a.inverse() == 1
        assert a - a == 0
        assert a + 0 == a and a * 1 == a


def test_conjugation_is_automorphism():
    rng = random.Random(7)
    for _ in range(40):
        a, b = random_scalar(rng), random_scalar(rng)
        assert conj(a * b) == conj(a) * conj(b)
        assert conj(a + b) == conj(a) + conj(b)
        assert conj(conj(a)) == a
    assert conj(I) == -1 * I
    assert conj(v_power(3)) == v_power(3)


def test_conj_fixes_rational_functions_of_q():
    rng = random.Random(99)
    for _ in range(20):
        # build from q-powers only: no imaginary part anywhere
        num = sum((rng.randint(-3, 3) * Q**k for k in range(3)), Scalar())
        den = Q**2 + rng.randint(1, 5)
        s = num / den
        assert conj(s) == s


def test_canonical_form_and_views():
    x = (Q * Q - 1) / (Q - 1)  # reduces to q + 1
    assert x == Q + 1
    assert x.reduced().denominator == (F(1),)
    y = (2 * Q - 2) / (4 * Q - 4)
    assert y == F(1, 2)
    assert y.as_fraction() == F(1, 2)
    z = from_gauss(F(1, 2), F(-1, 3))
    assert z.as_gauss() == (F(1, 2), F(-1, 3))
    # monic denominator view
    w = Scalar((1,)) / Scalar((1, 2))  # 1/(1 + 2v)
    assert w.denominator == (F(1, 2), F(1))


def test_equality_is_value_equality():
    a = (Q**3 - 1) / (Q - 1)
    b = gauss_int(3)
    assert a == b
    assert hash(a) == hash(b)
    assert str(a) == str(b)


def test_gauss_int_recurrence():
    for n in range(11):
        assert gauss_int(n + 1) == Q * gauss_int(n) + 1
    assert gauss_int(0) == 0
    assert gauss_int(1) == 1
    assert eval_at(gauss_int(3), 2).as_fraction() == 7


def test_pochhammer_basics_and_splitting():
    rng = random.Random(3)
    assert q_pochhammer(Scalar(), 4) == 1
    assert q_pochhammer(7, 0) == 1
    for d in (1, 2, 3):
        for n in range(d + 1, d + 3):
            assert q_pochhammer(q_power(-d), n) == 0
    for _ in range(10):
        r = random_scalar(rng, size=2)
        m, n = rng.randint(0, 3), rng.randint(0, 3)
        assert q_pochhammer(r, m + n) == q_pochhammer(r, m) * q_pochhammer(
            r * Q**m, n
        )


def test_phi32_trivial_and_errors():
    assert phi_32(1, Q, Q**2, q_power(-5), Q) == 1
    with pytest.raises(ValueError, match="terminate"):
        phi_32(Q, Q, Q, q_power(-3), Q)
    with pytest.raises(ZeroDivisionError, match="pole"):
        phi_32(q_power(-3), Q, Q, q_power(-1), Q)


def test_phi32_two_term_expansion():
    # i=1 sum with middle parameters tau*eta^{\pm1} specialised at eta = 1:
    # the explicit two-term value, against the h_1 shape at eta = 1
    d = 4
    tau = I * q_power(F(-5, 2))
    val = phi_32(q_power(-1), tau, tau, q_power(-d), Q)
    expected = 1 + (1 - q_power(-1)) * (1 - tau) ** 2 * Q / (
        (1 - q_power(-d)) * (1 - Q)
    )
    assert val == expected
    scaled = q_pochhammer(q_power(-d), 1) / tau * val
    assert scaled == 2 - tau - tau.inverse() * q_power(-d)


def test_eval_at_is_ring_hom():
    rng = random.Random(11)
    for q0 in (2, 3, 4):
        for _ in range(15):
            a, b = random_scalar(rng), random_scalar(rng)
            try:
                ea, eb = eval_at(a, q0), eval_at(b, q0)
            except ZeroDivisionError:
                continue  # random denominator hit a pole; not the point here
            assert eval_at(a * b, q0) == ea * eb
            assert eval_at(a + b, q0) == ea + eb


def test_eval_at_pole_detection():
    s = 1 / (Q - 2)
    with pytest.raises(ZeroDivisionError, match="pole"):
        eval_at(s, 2)
    assert eval_at(s, 3).as_fraction() == 1


def test_eval_tau_to_gaussian_subfield():
    tau = I * q_power(F(-2))  # e=1, D=3: i * q^-2
    t = eval_at(tau, 2)
    assert t.as_gauss() == (F(0), F(1, 4))


def test_algnum_field_structure():
    for q0, deg in ((2, 4), (3, 4), (4, 2), (16, 1), (9, 2), (8, 4)):
        Fld = AlgNumField(q0)
        assert Fld.degree == deg
        s = Fld.s()
        assert s**4 == q0
        rng = random.Random(q0)
        for _ in range(10):
            x = Fld.from_gauss(F(rng.randint(-5, 5), rng.randint(1, 4)),
                               F(rng.randint(-5, 5), rng.randint(1, 4)))
            x = x + s * rng.randint(-3, 3)
            if x:
                assert x * x.inverse() == 1
            assert conj(conj(x)) == x


def test_prime_power_decomposition():
    assert prime_power_decomposition(2) == (2, 1)
    assert prime_power_decomposition(16) == (2, 4)
    assert prime_power_decomposition(9) == (3, 2)
    assert prime_power_decomposition(12) is None
    assert prime_power_decomposition(1) is None
    with pytest.raises(ValueError, match="prime power"):
        AlgNumField(6)


def test_family_table():
    fp = family_params("C", 3)
    assert (fp.e, fp.ambient_dim, fp.form_kind) == (F(1), 6, "alternating")
    assert family_params("B", 3).ambient_dim == 7
    assert family_params("D", 4).e == 0
    assert family_params("2D", 3).ambient_dim == 8
    assert family_params("2A-odd", 3).e == F(1, 2)
    assert family_params("2A-even", 3).hermitian
    with pytest.raises(ValueError):
        family_params("E", 3)
    with pytest.raises(ValueError):
        family_params("C", 2)


def test_scalar_serialization_stability():
    samples = [
        gauss_int(4),
        (Q**2 + 1) / (Q - 1),
        I / 4,
        from_fraction(F(-7, 3)) * v_power(-2),
        (1 + I) / (Q + 2),
    ]
    for s in samples:
        t = str(s)
        assert t == str(s.reduced())
        assert t == str(s * 1)
