import math
import random
from fractions import Fraction

import pytest

from poly import (
    KCH_TABLE, QG_TABLE, Q_TABLE, LaurentPoly, PolyDivisionError, RatFunc, VarTable,
    VarTableMismatch, divide_exact, kch_import, parse_poly, qbinom_formal, qbinom_int,
    substitute,
)

T = VarTable.build(invertible=('g', 'nu', 'L'), polynomial=('a',))
NLG = VarTable.build(invertible=('g', 'nu', 'L'))


def random_poly(rng, table, terms=4, span=2):
    out = table.zero()
    for _ in range(terms):
        exps = {}
        for name, inv in zip(table.names, table.invertible):
            exps[name] = rng.randint(-span if inv else 0, span)
        out = out + table.monomial(exps, rng.randint(-3, 3))
    return out


def test_cancellation_and_difference_of_squares():
    g, nu = T.var('g'), T.var('nu')
    assert (nu - nu ** -1) + nu ** -1 == nu
    assert (g - g ** -1) * (g + g ** -1) == g ** 2 - g ** -2


def test_zero_absorbs():
    rng = random.Random(3)
    for _ in range(5):
        assert (T.zero() * random_poly(rng, T)).is_zero()


def test_ring_axioms_on_random_triples():
    rng = random.Random(11)
    for _ in range(20):
        a, b, c = (random_poly(rng, T) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a + (-a) == 0


def test_mismatched_tables_raise():
    with pytest.raises(VarTableMismatch):
        T.var('g') + NLG.var('g')


def test_negative_exponent_on_polynomial_variable_rejected():
    with pytest.raises(ValueError):
        LaurentPoly(T, {(0, 0, 0, -1): Fraction(1)})


def test_printer_uses_caret_and_star():
    g, nu = T.var('g'), T.var('nu')
    assert str(2 * g * nu ** -2 - 1) == "-1 + 2*g*nu^-2"
    assert str(T.zero()) == "0"


def test_parse_poly():
    g, nu = T.var('g'), T.var('nu')
    assert parse_poly('g*nu^-2 - g^-1', T) == g * nu ** -2 - g ** -1
    assert parse_poly('(a + 1)^2', T) == T.var('a') ** 2 + 2 * T.var('a') + 1


def test_json_form():
    p = parse_poly('1/2*g - 3*a^2*L^-1', T)
    data = p.to_dict()
    assert data['vars'] == list(T.names)
    assert {t['den'] for t in data['terms']} == {'1', '2'}
    assert LaurentPoly.from_dict(data) == p


def test_clear_denominators_is_primitive_and_nonnegative():
    g, nu = T.var('g'), T.var('nu')
    p = (Fraction(2, 3) * g * nu ** -2 - Fraction(4, 3) * g ** -1)
    cleared = p.clear_denominators()
    assert cleared == g ** 2 - 2 * nu ** 2
    assert all(e >= 0 for exp in cleared.terms for e in exp)


def test_evaluate_and_diff():
    g, nu = T.var('g'), T.var('nu')
    p = g ** 2 * nu - nu ** -1
    assert p.evaluate({'g': 2, 'nu': 3}) == Fraction(35, 3)
    assert p.diff('nu') == g ** 2 + nu ** -2


def test_divide_exact():
    q = Q_TABLE.var('q')
    assert divide_exact(q ** 4 - q ** -4, q ** 2 - q ** -2) == q ** 2 + q ** -2
    with pytest.raises(PolyDivisionError):
        divide_exact(q + 1, q - 1)


def test_ratfunc_equality_and_reduction():
    q = Q_TABLE.var('q')
    r = RatFunc(q ** 2 - 1, q - 1)
    assert r == q + 1
    assert r.reduced().is_polynomial()
    s = RatFunc(q ** 2 - 1, q ** 2 + q)
    reduced = s.reduced()
    assert reduced == s
    assert reduced.is_polynomial()
    assert RatFunc(q, q + 1) + RatFunc(Q_TABLE.const(1), q + 1) == 1


def test_reduction_keeps_a_non_divisible_fraction():
    q, g = QG_TABLE.var('q'), QG_TABLE.var('g')
    r = RatFunc((g - 1) * (q + 1), (g - 1) * (q + 2))
    reduced = r.reduced()
    assert reduced == r
    assert not reduced.is_polynomial()
    assert reduced.den in (q + 2, -(q + 2))
    assert reduced.num in (q + 1, -(q + 1))


def test_ratfunc_is_unhashable():
    q = Q_TABLE.var('q')
    with pytest.raises(TypeError):
        hash(RatFunc(q, q + 1))


def test_zero_denominator():
    with pytest.raises(PolyDivisionError):
        RatFunc(Q_TABLE.const(1), Q_TABLE.zero())


# substitution

def test_import_of_U_minus_mu():
    mu, U = KCH_TABLE.var('mu'), KCH_TABLE.var('U')
    g, nu = NLG.var('g'), NLG.var('nu')
    assert kch_import(U - mu, NLG) == g ** -2 - nu ** -2


def test_import_of_lambda_times_one_minus_mu():
    mu, lam = KCH_TABLE.var('mu'), KCH_TABLE.var('lam')
    g, nu, L = NLG.var('g'), NLG.var('nu'), NLG.var('L')
    assert kch_import(lam * (1 - mu), NLG) == -(g ** -1) * L ** -1 * (1 - nu ** -2)


def test_identity_substitution():
    rng = random.Random(5)
    p = random_poly(rng, T)
    assert substitute(p, {}, T) == p


def test_substitute_is_multiplicative():
    rng = random.Random(7)
    for _ in range(10):
        p, r = random_poly(rng, KCH_TABLE), random_poly(rng, KCH_TABLE)
        assert kch_import(p * r, NLG) == kch_import(p, NLG) * kch_import(r, NLG)


def test_substitution_hitting_zero():
    nu = NLG.var('nu')
    with pytest.raises(PolyDivisionError):
        substitute(nu ** -1 + 1, {'nu': NLG.zero()}, NLG)


# q-binomials

def test_qbinom_examples():
    q = Q_TABLE.var('q')
    assert qbinom_int(5, 0) == 1
    assert qbinom_int(2, 1) == q + q ** -1
    assert qbinom_int(4, 2) == q ** 4 + q ** 2 + 2 + q ** -2 + q ** -4
    assert qbinom_int(3, 4).is_zero()
    assert qbinom_int(3, -1).is_zero()


def test_qbinom_symmetries():
    q = Q_TABLE.var('q')
    for n in range(13):
        for k in range(n + 1):
            p = qbinom_int(n, k)
            assert p == qbinom_int(n, n - k)
            assert p.specialize({'q': q ** -1}) == p


def test_q_pascal():
    q = Q_TABLE.var('q')
    for n in range(1, 13):
        for k in range(n + 1):
            rhs = q ** k * qbinom_int(n - 1, k) + q ** (k - n) * qbinom_int(n - 1, k - 1)
            assert qbinom_int(n, k) == rhs


def test_qbinom_at_q_equal_one():
    one = {'q': Q_TABLE.const(1)}
    for n in range(13):
        for k in range(n + 1):
            assert qbinom_int(n, k).specialize(one) == math.comb(n, k)


def test_qbinom_formal_examples():
    q, g = QG_TABLE.var('q'), QG_TABLE.var('g')
    assert qbinom_formal(3, 0) == 1
    assert qbinom_formal(0, 1) == RatFunc(g - g ** -1, q - q ** -1)
    assert qbinom_formal(1, 1).specialize({'g': q ** 3}) == qbinom_int(2, 1).embed(QG_TABLE)
    with pytest.raises(ValueError):
        qbinom_formal(0, -1)


def test_qbinom_formal_specializes_to_integer():
    q = QG_TABLE.var('q')
    for n in range(11):
        for a in range(0, 3):
            for b in range(0, n - a + 1):
                value = qbinom_formal(a, b).specialize({'g': q ** n})
                assert value == qbinom_int(n - a, b).embed(QG_TABLE)
