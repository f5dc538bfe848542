"""
Quantum torus operators acting on colored sequences.

An element is a finite sum of coefficient * nu^a L^b with every nu to the
left of every L. The action on sequences is

    (nu_i f)(k) = q^(k_i) f(k),    (L_i f)(k) = f(k - e_i),

and the commutation rule L_i nu_i = q^c nu_i L_i uses the sign c held by
each element. c = -1 is the value under which composing operators agrees
with composing their actions.
"""
import itertools
import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from poly import QG_TABLE, PolyDivisionError, RatFunc, VarTable, divide_exact, parse_expression

logger = logging.getLogger(__name__)

TORUS_SIGN = -1


class PoleAtClassicalLimit(PolyDivisionError):
    """A coefficient has a pole at q = 1."""


class OperatorParseError(ValueError):
    pass


def _scalar(value):
    return RatFunc.lift(value, QG_TABLE)


def _q_power(n):
    return RatFunc(QG_TABLE.var('q') ** n)


def _dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def _names(r):
    if r == 1:
        return ('nu',), ('L',)
    return tuple(f"nu{i}" for i in range(1, r + 1)), tuple(f"L{i}" for i in range(1, r + 1))


class TorusElem:
    """
    Normal-ordered element of the rank-r quantum torus with RatFunc(q, g)
    coefficients.
    """

    __slots__ = ('r', 'terms', 'sign')

    def __init__(self, r, terms=None, sign=TORUS_SIGN):
        self.r = r
        self.sign = sign
        clean = {}
        for (a, b), c in (terms or {}).items():
            c = _scalar(c)
            if not c.is_zero():
                clean[(tuple(a), tuple(b))] = c
        self.terms = clean

    @classmethod
    def scalar(cls, value, r=1, sign=TORUS_SIGN):
        zero = (0,) * r
        return cls(r, {(zero, zero): value}, sign)

    @classmethod
    def monomial(cls, nu=None, lam=None, coeff=1, r=1, sign=TORUS_SIGN):
        nu = tuple(nu) if nu is not None else (0,) * r
        lam = tuple(lam) if lam is not None else (0,) * r
        return cls(r, {(nu, lam): coeff}, sign)

    @classmethod
    def nu(cls, i=1, r=1, sign=TORUS_SIGN):
        exp = [0] * r
        exp[i - 1] = 1
        return cls.monomial(nu=exp, r=r, sign=sign)

    @classmethod
    def lam(cls, i=1, r=1, sign=TORUS_SIGN):
        exp = [0] * r
        exp[i - 1] = 1
        return cls.monomial(lam=exp, r=r, sign=sign)

    def _check(self, other):
        if isinstance(other, TorusElem):
            if other.r != self.r:
                raise ValueError(f"Rank mismatch: {self.r} vs {other.r}")
            return other
        if isinstance(other, (int, Fraction, RatFunc)):
            return TorusElem.scalar(other, self.r, self.sign)
        return NotImplemented

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms[key] + c if key in terms else c
        return TorusElem(self.r, terms, self.sign)

    __radd__ = __add__

    def __neg__(self):
        return TorusElem(self.r, {k: -c for k, c in self.terms.items()}, self.sign)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return torus_mul(self, other)

    def __rmul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return torus_mul(other, self)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = TorusElem.scalar(1, self.r, self.sign)
        for _ in range(n):
            result = result * self
        return result

    def inverse(self):
        """Inverse of a single term c nu^a L^b."""
        if len(self.terms) != 1:
            raise PolyDivisionError("Only single-term torus elements are inverted")
        ((a, b), c), = self.terms.items()
        neg_a = tuple(-x for x in a)
        neg_b = tuple(-x for x in b)
        return TorusElem(self.r, {(neg_a, neg_b): c.inverse() * _q_power(self.sign * _dot(a, b))}, self.sign)

    def __eq__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return (self - other).is_zero()

    __hash__ = None

    def __str__(self):
        if not self.terms:
            return "0"
        nus, lams = _names(self.r)
        pieces = []
        for (a, b), c in sorted(self.terms.items()):
            factors = []
            for name, e in list(zip(nus, a)) + list(zip(lams, b)):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            body = '*'.join(factors)
            coeff = str(c)
            if not body:
                pieces.append(f"({coeff})")
            elif coeff == '1':
                pieces.append(body)
            else:
                pieces.append(f"({coeff})*{body}")
        return ' + '.join(pieces)

    __repr__ = __str__


def torus_mul(x, y):
    """
    Normal-ordered product: (nu^a L^b)(nu^c L^d) = q^(s * b.c) nu^(a+c) L^(b+d)
    with s the commutation sign of ``x``.
    """
    if x.r != y.r:
        raise ValueError(f"Rank mismatch: {x.r} vs {y.r}")
    terms = {}
    for (a, b), c1 in x.terms.items():
        for (c, d), c2 in y.terms.items():
            key = (tuple(u + v for u, v in zip(a, c)), tuple(u + v for u, v in zip(b, d)))
            coeff = c1 * c2
            shift = x.sign * _dot(b, c)
            if shift:
                coeff = coeff * _q_power(shift)
            terms[key] = terms[key] + coeff if key in terms else coeff
    return TorusElem(x.r, terms, x.sign)


@dataclass
class ColoredSeq:
    """
    A map Z^r -> RatFunc(q, g) given by a pure callback, memoized.
    """
    fn: object
    r: int = 1
    memo: dict = field(default_factory=dict, repr=False)
    _lock: object = field(default_factory=threading.Lock, repr=False)

    def __call__(self, *k):
        if len(k) == 1 and isinstance(k[0], tuple):
            k = k[0]
        if len(k) != self.r:
            raise ValueError(f"Expected {self.r} indices, got {k}")
        if k not in self.memo:
            value = _scalar(self.fn(k))
            with self._lock:
                self.memo.setdefault(k, value)
        return self.memo[k]


def delta(j, r=1):
    """Indicator sequence of the point j."""
    point = (j,) if isinstance(j, int) else tuple(j)
    return ColoredSeq(lambda k: 1 if k == point else 0, r)


def act(a, f):
    """
    Apply an operator to a sequence.

    Args:
        a (TorusElem): The operator
        f (ColoredSeq): The sequence

    Returns:
        ColoredSeq: k -> sum c q^(a.k) f(k - b)
    """
    if a.r != f.r:
        raise ValueError(f"Rank mismatch: operator {a.r}, sequence {f.r}")
    terms = list(a.terms.items())

    def value(k):
        total = RatFunc(QG_TABLE.zero())
        for (nu, lam), c in terms:
            shifted = tuple(x - y for x, y in zip(k, lam))
            fk = f(shifted)
            if fk.is_zero():
                continue
            total = total + c * _q_power(_dot(nu, k)) * fk
        return total

    return ColoredSeq(value, a.r)


def unknot_operator(sign=TORUS_SIGN):
    """
    nu - nu^-1 - L (g nu^-1 - g^-1 nu), normal ordered; it annihilates
    k -> [N choose k] when g = q^N.
    """
    g = RatFunc(QG_TABLE.var('g'))
    nu = TorusElem.nu(sign=sign)
    lam = TorusElem.lam(sign=sign)
    inner = nu.inverse() * g - nu * g.inverse()
    return nu - nu.inverse() - lam * inner


def classical_table(r=1):
    nus, lams = _names(r)
    return VarTable.build(invertible=('g',) + nus + lams)


def classical_limit(a):
    """
    Set q = 1.

    Args:
        a (TorusElem): Operator whose coefficients are regular at q = 1

    Returns:
        LaurentPoly: Commutative polynomial in g, the nu's and the L's

    Raises:
        PoleAtClassicalLimit: When a coefficient has a pole at q = 1
    """
    table = classical_table(a.r)
    nus, lams = _names(a.r)
    at_one = {'q': QG_TABLE.const(1)}
    result = table.zero()
    for (nu, lam), c in a.terms.items():
        value = _at_q_one(c, at_one)
        if value is None:
            value = _at_q_one(c.reduced(), at_one)
        if value is None:
            raise PoleAtClassicalLimit(f"Coefficient {c} of the nu^{nu} L^{lam} term has a pole at q = 1")
        mono = dict(zip(nus, nu))
        mono.update(zip(lams, lam))
        mono_poly = table.monomial({k: v for k, v in mono.items() if v})
        result = result + value.embed(table) * mono_poly
    return result


def _at_q_one(c, at_one):
    den = c.den.specialize(at_one)
    if den.is_zero():
        return None
    num = c.num.specialize(at_one)
    return divide_exact(num, den)


@dataclass
class AnnihilationReport:
    passed: bool
    checked: int
    failures: list

    def to_dict(self):
        return {'passed': self.passed, 'checked': self.checked,
                'failures': [{'N': n, 'k': list(k), 'value': str(v)} for n, k, v in self.failures]}


def annihilates(a, f, box, n_range):
    """
    Exact check that act(a, f) vanishes on a box of indices after g = q^N.

    Args:
        a (TorusElem): Operator
        f (ColoredSeq): Sequence with formal g
        box (iterable): One iterable of indices per component, or a single
            iterable when r = 1
        n_range (iterable): Values of N

    Returns:
        AnnihilationReport: Pass flag with the failing points
    """
    if a.r == 1 and not isinstance(next(iter(box), None), (range, list, tuple)):
        box = [box]
    image = act(a, f)
    q = QG_TABLE.var('q')
    failures = []
    checked = 0
    for n in n_range:
        images = {'g': q ** n}
        for k in itertools.product(*box):
            value = image(k).specialize(images)
            checked += 1
            if not value.is_zero():
                failures.append((n, k, value))
    if failures:
        logger.info(f"Operator fails to annihilate at {len(failures)} of {checked} points")
    return AnnihilationReport(not failures, checked, failures)


def parse_operator(text, r=1, sign=TORUS_SIGN):
    """
    Parse an operator literal such as "nu - nu^-1 - L*(g*nu^-1 - g^-1*nu)".

    Products keep their written order; q and g are scalars.

    Raises:
        OperatorParseError: On unknown names or malformed text
    """
    nus, lams = _names(r)

    def atom(name):
        if name in nus:
            return TorusElem.nu(nus.index(name) + 1, r, sign)
        if name in lams:
            return TorusElem.lam(lams.index(name) + 1, r, sign)
        if name in ('q', 'g'):
            return TorusElem.scalar(RatFunc(QG_TABLE.var(name)), r, sign)
        raise OperatorParseError(f"Unknown operator symbol {name!r}")

    try:
        return parse_expression(text, atom, lambda c: TorusElem.scalar(c, r, sign))
    except OperatorParseError:
        raise
    except (ValueError, PolyDivisionError) as e:
        raise OperatorParseError(f"Cannot parse operator {text!r}: {str(e)}") from e
