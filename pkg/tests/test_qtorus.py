import random

import pytest

from homfly import colored_unknot
from poly import QG_TABLE, RatFunc
from qtorus import (
    ColoredSeq, OperatorParseError, PoleAtClassicalLimit, TorusElem, act, annihilates,
    classical_limit, classical_table, delta, parse_operator, torus_mul, unknot_operator,
)

q = QG_TABLE.var('q')
g = QG_TABLE.var('g')


def qpow(n):
    return RatFunc(q ** n)


def random_elem(rng, r=1, terms=3, sign=-1):
    out = TorusElem(r, sign=sign)
    for _ in range(terms):
        nu = [rng.randint(-2, 2) for _ in range(r)]
        lam = [rng.randint(-2, 2) for _ in range(r)]
        coeff = RatFunc(QG_TABLE.monomial({'q': rng.randint(-2, 2), 'g': rng.randint(-1, 1)}, rng.randint(1, 3)))
        out = out + TorusElem.monomial(nu, lam, coeff, r, sign)
    return out


def random_sequence(rng, r=1):
    support = {tuple(rng.randint(-2, 2) for _ in range(r)): rng.randint(-3, 3) for _ in range(4)}
    return ColoredSeq(lambda k: support.get(k, 0), r)


def test_commutation_rule():
    nu, lam = TorusElem.nu(), TorusElem.lam()
    assert torus_mul(lam, nu) == TorusElem.monomial([1], [1], qpow(-1))
    assert torus_mul(nu, lam) == TorusElem.monomial([1], [1])


def test_unit_and_square():
    rng = random.Random(1)
    x = random_elem(rng)
    one = TorusElem.scalar(1)
    assert torus_mul(one, x) == x
    nu, lam = TorusElem.nu(), TorusElem.lam()
    expected = nu * nu + TorusElem.monomial([1], [1], 1 + qpow(-1)) + lam * lam
    assert (nu + lam) ** 2 == expected


def test_associativity():
    rng = random.Random(2)
    for _ in range(100):
        r = rng.randint(1, 2)
        a, b, c = (random_elem(rng, r, terms=rng.randint(1, 4)) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_inverse_of_a_term():
    x = TorusElem.monomial([2], [-1], RatFunc(g * q))
    assert x * x.inverse() == TorusElem.scalar(1)
    assert x.inverse() * x == TorusElem.scalar(1)


def test_action_of_generators():
    f = colored_unknot()
    image = act(TorusElem.nu(), f)
    for k in range(0, 4):
        assert image(k) == qpow(k) * f(k)
    shifted = act(TorusElem.lam(), delta(0))
    for k in range(-3, 4):
        assert shifted(k) == delta(1)(k)


def test_action_is_compatible_with_products():
    rng = random.Random(3)
    for _ in range(100):
        r = rng.randint(1, 2)
        a, b = random_elem(rng, r), random_elem(rng, r)
        f = random_sequence(rng, r)
        left, right = act(a * b, f), act(a, act(b, f))
        for _ in range(3):
            k = tuple(rng.randint(-3, 3) for _ in range(r))
            assert left(k) == right(k)


def test_opposite_sign_breaks_compatibility():
    lam, nu = TorusElem.lam(sign=1), TorusElem.nu(sign=1)
    f = delta(0)
    assert act(lam * nu, f)(1) != act(lam, act(nu, f))(1)


def test_unknot_operator_normal_form():
    nu, lam = TorusElem.nu(), TorusElem.lam()
    expected = (nu - nu.inverse()
                - TorusElem.monomial([-1], [1], RatFunc(q * g))
                + TorusElem.monomial([1], [1], RatFunc(q ** -1 * g ** -1)))
    assert unknot_operator() == expected


def test_unknot_operator_annihilates_colored_unknot():
    report = annihilates(unknot_operator(), colored_unknot(), range(1, 9), range(3, 7))
    assert report.passed
    assert report.checked == 32


def test_negative_controls():
    f = colored_unknot()
    assert not annihilates(unknot_operator(sign=1), f, range(1, 9), range(3, 7)).passed
    assert not annihilates(TorusElem.nu() - 1, f, range(1, 9), range(3, 7)).passed
    constant = ColoredSeq(lambda k: 1)
    assert not annihilates(unknot_operator(), constant, range(1, 9), range(3, 7)).passed
    assert annihilates(TorusElem(1), f, range(1, 9), range(3, 7)).passed


def test_colored_unknot_recursion():
    f = colored_unknot()
    for n in range(3, 7):
        image = {'g': q ** n}
        for k in range(1, 9):
            lhs = (f(k) * RatFunc(q ** k - q ** -k)).specialize(image)
            rhs = (f(k - 1) * RatFunc(q ** (n - k + 1) - q ** (k - n - 1))).specialize(image)
            assert lhs == rhs


def test_classical_limit_examples():
    table = classical_table()
    nu, lam, gg = table.var('nu'), table.var('L'), table.var('g')
    term = TorusElem.monomial([1], [1])
    assert classical_limit(TorusElem.monomial([1], [1], qpow(-1)) - term).is_zero()
    assert classical_limit(unknot_operator()) == nu - nu ** -1 - gg * nu ** -1 * lam + gg ** -1 * nu * lam


def test_classical_limit_cancels_removable_poles():
    x = TorusElem.scalar(RatFunc(q ** 2 - 1, q - 1))
    assert classical_limit(x) == 2


def test_classical_limit_detects_poles():
    x = TorusElem.monomial([1], [0], RatFunc(QG_TABLE.const(1), q - 1))
    with pytest.raises(PoleAtClassicalLimit) as err:
        classical_limit(x)
    assert 'pole' in str(err.value)


def test_classical_limit_is_multiplicative():
    rng = random.Random(4)
    for _ in range(20):
        r = rng.randint(1, 2)
        a, b = random_elem(rng, r), random_elem(rng, r)
        assert classical_limit(a * b) == classical_limit(a) * classical_limit(b)


def test_parse_operator():
    parsed = parse_operator("nu - nu^-1 - L*(g*nu^-1 - g^-1*nu)")
    assert parsed == unknot_operator()
    assert parse_operator("L*nu") == TorusElem.monomial([1], [1], qpow(-1))
    two = parse_operator("nu1*L2 + q", r=2)
    assert two.r == 2
    with pytest.raises(OperatorParseError):
        parse_operator("nu + x")
    with pytest.raises(OperatorParseError):
        parse_operator("nu +")


def test_sequences_memoize():
    calls = []

    def fn(k):
        calls.append(k)
        return 1

    f = ColoredSeq(fn)
    assert f(2) is f(2)
    assert calls == [(2,)]
