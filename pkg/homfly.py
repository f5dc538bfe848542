"""
HOMFLYPT evaluation of braid closures through the Hecke algebra, with an
independent skein-recursion oracle and the colored unknot sequence.

Conventions: T_i^2 = z T_i + 1 with z = q^-1 - q, a positive kink
multiplies by t = -g, and a disjoint unknot by
delta = (g - g^-1)/(q - q^-1).
"""
import logging
from functools import lru_cache

from braid import BraidWord, closure, resolve
from poly import QG_TABLE, PolyDivisionError, RatFunc, VarTable, divide_exact, qbinom_formal
from qtorus import ColoredSeq

logger = logging.getLogger(__name__)

# d stands for the unknot value while tracing
TRACE_TABLE = VarTable.build(invertible=('q', 'g'), polynomial=('d',))


def _z(table=QG_TABLE):
    q = table.var('q')
    return q ** -1 - q


def _t(table=QG_TABLE):
    return -table.var('g')


def unknot_value():
    """(g - g^-1)/(q - q^-1)"""
    q, g = QG_TABLE.var('q'), QG_TABLE.var('g')
    return RatFunc(g - g ** -1, q - q ** -1)


class HeckeElem:
    """
    Linear combination of basis elements T_w, w a permutation of 0..n-1 in
    one-line notation, with Laurent coefficients in q and g.
    """

    __slots__ = ('n', 'terms')

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {w: c for w, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def identity(cls, n):
        return cls(n, {tuple(range(n)): QG_TABLE.const(1)})

    @classmethod
    def generator(cls, i, n):
        """T_i for 1 <= i < n."""
        return cls.identity(n).times_generator(i - 1)

    @classmethod
    def from_braid(cls, b):
        """Image of a braid word: +k -> T_k and -k -> T_k - z."""
        elem = cls.identity(b.n)
        for letter in b.letters:
            elem = elem.times_letter(letter)
        return elem

    def times_generator(self, i):
        """Right multiplication by T_i, i 0-based."""
        z = _z()
        terms = {}
        for w, c in self.terms.items():
            ws = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
            _accumulate(terms, ws, c)
            if w[i] > w[i + 1]:
                _accumulate(terms, w, c * z)
        return HeckeElem(self.n, terms)

    def times_letter(self, letter):
        i = abs(letter) - 1
        out = self.times_generator(i)
        if letter < 0:
            out = out - self.scale(_z())
        return out

    def scale(self, c):
        return HeckeElem(self.n, {w: v * c for w, v in self.terms.items()})

    def __add__(self, other):
        terms = dict(self.terms)
        for w, c in other.terms.items():
            _accumulate(terms, w, c)
        return HeckeElem(self.n, terms)

    def __sub__(self, other):
        return self + other.scale(QG_TABLE.const(-1))

    def __mul__(self, other):
        return hecke_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, HeckeElem):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    __hash__ = None

    def __str__(self):
        if not self.terms:
            return "0"
        return ' + '.join(f"({c})*T{list(w)}" for w, c in sorted(self.terms.items()))

    __repr__ = __str__


def _accumulate(terms, w, c):
    s = terms[w] + c if w in terms else c
    if s.is_zero():
        terms.pop(w, None)
    else:
        terms[w] = s


def reduced_word(w):
    """Generators i (0-based) with T_w = T_i1 ... T_il."""
    w = list(w)
    word = []
    while True:
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                w[i], w[i + 1] = w[i + 1], w[i]
                word.append(i)
                break
        else:
            return word[::-1]


def hecke_mul(a, b):
    """
    Product in the permutation basis.

    Args:
        a (HeckeElem): Left factor
        b (HeckeElem): Right factor on the same number of strands

    Returns:
        HeckeElem: a * b
    """
    if a.n != b.n:
        raise ValueError(f"Hecke algebras differ: H_{a.n} vs H_{b.n}")
    result = HeckeElem(a.n)
    for v, c in b.terms.items():
        part = a
        for i in reduced_word(v):
            part = part.times_generator(i)
        result = result + part.scale(c)
    return result


@lru_cache(maxsize=None)
def _trace_basis(w):
    """
    Unnormalized trace of T_w over TRACE_TABLE: the framed invariant of the
    closure of a positive permutation braid.
    """
    n = len(w)
    d = TRACE_TABLE.var('d')
    if n == 0:
        return TRACE_TABLE.const(1)
    if w[-1] == n - 1:
        return d * _trace_basis(w[:-1])
    m = w.index(n - 1)
    u = w[:m] + w[m + 1:]
    # T_w = T_u T_{n-2} T_{n-3} ... T_m, and the trace moves T_{n-3}...T_m to the right of T_u
    elem = HeckeElem(n - 1, {u: QG_TABLE.const(1)})
    for i in range(n - 3, m - 1, -1):
        elem = elem.times_generator(i)
    t = _t(TRACE_TABLE)
    total = TRACE_TABLE.zero()
    for v, c in elem.terms.items():
        total = total + c.embed(TRACE_TABLE) * _trace_basis(v)
    return t * total


def trace(elem):
    """Trace of a Hecke element as a polynomial in q, g and d."""
    total = TRACE_TABLE.zero()
    for w, c in elem.terms.items():
        total = total + c.embed(TRACE_TABLE) * _trace_basis(w)
    return total


def _substitute_unknot(p):
    """Replace d by (g - g^-1)/(q - q^-1) and cancel powers of q - q^-1."""
    q, g = QG_TABLE.var('q'), QG_TABLE.var('g')
    top, bottom = g - g ** -1, q - q ** -1
    n = p.degree('d')
    di = TRACE_TABLE.index('d')
    num = QG_TABLE.zero()
    for exp, c in p.terms.items():
        k = exp[di]
        mono = QG_TABLE.monomial({'q': exp[TRACE_TABLE.index('q')], 'g': exp[TRACE_TABLE.index('g')]}, c)
        num = num + mono * top ** k * bottom ** (n - k)
    while n > 0 and not num.is_zero():
        try:
            num = divide_exact(num, bottom)
        except PolyDivisionError:
            break
        n -= 1
    return RatFunc(num, bottom ** n)


def framed_homflypt(b):
    """
    Blackboard-framed invariant X of the closure; X(L+) - X(L-) = z X(L0).

    Args:
        b (BraidWord): The braid

    Returns:
        RatFunc: X in q and g
    """
    return _substitute_unknot(trace(HeckeElem.from_braid(b)))


def homflypt(b):
    """
    Framing-independent HOMFLYPT polynomial (-g)^-wr X of the closure.

    The unknot gives (g - g^-1)/(q - q^-1) and the invariant is
    multiplicative on split unions. It satisfies
    -g P(L+) + g^-1 P(L-) = (q^-1 - q) P(L0).
    """
    value = framed_homflypt(b)
    t = RatFunc(_t())
    logger.debug(f"HOMFLYPT of {b}: writhe {b.writhe()}")
    return value * t ** (-b.writhe())


# skein recursion oracle

def _first_bad_crossing(b):
    """
    Walk each component from the top of its leftmost strand, components in
    order; return the index of the first crossing met first from below,
    or None when the diagram is descending.
    """
    info = closure(b)
    visited = set()
    for left in info.leftmost:
        start = left
        p = start
        while True:
            for t, letter in enumerate(b.letters):
                k = abs(letter)
                if p not in (k, k + 1):
                    continue
                over = (p == k) if letter > 0 else (p == k + 1)
                if t not in visited:
                    visited.add(t)
                    if not over:
                        return t
                p = k + 1 if p == k else k
            if p == start:
                break
    return None


@lru_cache(maxsize=None)
def _skein(n, letters):
    b = BraidWord(n, letters)
    bad = _first_bad_crossing(b)
    if bad is None:
        info = closure(b)
        d = TRACE_TABLE.var('d')
        return d ** info.r * _t(TRACE_TABLE) ** b.writhe()
    plus, minus, zero = (w.letters for w in resolve(b, bad))
    z = _z(TRACE_TABLE)
    if letters[bad] > 0:
        return _skein(n, minus) + z * _skein(n, zero)
    return _skein(n, plus) - z * _skein(n, zero)


def skein_homflypt(b, framed=False):
    """
    HOMFLYPT by recursive crossing changes down to descending diagrams,
    which are unlinks valued delta^r t^wr.

    Args:
        b (BraidWord): The braid
        framed (bool): Return the blackboard-framed value

    Returns:
        RatFunc: The invariant in q and g
    """
    value = _substitute_unknot(_skein(b.n, tuple(b.letters)))
    if framed:
        return value
    return value * RatFunc(_t()) ** (-b.writhe())


def colored_unknot(r=1):
    """
    k -> [N choose k] with g = q^N kept formal; zero for k < 0.
    """
    if r != 1:
        raise ValueError("Only the one-component colored unknot is provided")

    def value(k):
        (k,) = k
        if k < 0:
            return RatFunc(QG_TABLE.zero())
        return qbinom_formal(0, k)

    return ColoredSeq(value, 1)
