import json
import logging
import re
from math import gcd, lcm
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

logger = logging.getLogger(__name__)


class VarTableMismatch(ValueError):
    """Raised when two operands do not share the same variable table."""


class PolyDivisionError(ZeroDivisionError):
    """Raised when a division or substitution would put zero in a denominator."""


@dataclass(frozen=True)
class VarTable:
    """
    Ordered variable names, each flagged invertible (Laurent) or not.

    The order is fixed for the lifetime of every polynomial built on the table.
    """
    names: tuple
    invertible: tuple

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"Duplicate variable names in {self.names}")
        if len(self.names) != len(self.invertible):
            raise ValueError("Every variable needs an invertibility flag")

    @classmethod
    def build(cls, invertible=(), polynomial=()):
        """
        Create a table from invertible names followed by non-invertible names.

        Args:
            invertible (iterable): Names of Laurent variables
            polynomial (iterable): Names of ordinary polynomial variables

        Returns:
            VarTable: The new table
        """
        invertible = tuple(invertible)
        polynomial = tuple(polynomial)
        return cls(invertible + polynomial,
                   (True,) * len(invertible) + (False,) * len(polynomial))

    def __len__(self):
        return len(self.names)

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"Unknown variable {name!r}; table has {list(self.names)}") from None

    def is_invertible(self, name):
        return self.invertible[self.index(name)]

    def zero(self):
        return LaurentPoly(self, {})

    def const(self, c):
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return LaurentPoly(self, {(0,) * len(self): c})

    def monomial(self, exponents, coeff=1):
        """
        Build c * prod(v^e) from a {name: exponent} mapping.
        """
        exp = [0] * len(self)
        for name, e in exponents.items():
            exp[self.index(name)] += e
        return LaurentPoly(self, {tuple(exp): Fraction(coeff)}) if coeff else self.zero()

    def var(self, name):
        return self.monomial({name: 1})

    def extend(self, invertible=(), polynomial=()):
        """Return a table with extra names appended (existing order preserved)."""
        names = list(self.names)
        flags = list(self.invertible)
        for name in invertible:
            if name not in names:
                names.append(name)
                flags.append(True)
        for name in polynomial:
            if name not in names:
                names.append(name)
                flags.append(False)
        return VarTable(tuple(names), tuple(flags))

    def to_dict(self):
        return {'vars': list(self.names), 'invertible': list(self.invertible)}


class LaurentPoly:
    """
    Exact multivariate Laurent polynomial over the rationals.

    Terms are stored as {exponent tuple: Fraction} with no zero coefficients,
    so structural equality is mathematical equality. Instances are never
    mutated after construction.
    """

    __slots__ = ('table', 'terms', '_hash')

    def __init__(self, table, terms):
        self.table = table
        clean = {}
        for exp, c in terms.items():
            if c:
                clean[exp] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean
        self._hash = None
        for exp in clean:
            if len(exp) != len(table):
                raise ValueError(f"Exponent {exp} does not match table of size {len(table)}")
            for e, inv, name in zip(exp, table.invertible, table.names):
                if e < 0 and not inv:
                    raise ValueError(f"Negative exponent on non-invertible variable {name}")

    # construction helpers

    @classmethod
    def _raw(cls, table, terms):
        """Trusted constructor: terms already clean."""
        obj = cls.__new__(cls)
        obj.table = table
        obj.terms = terms
        obj._hash = None
        return obj

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.table != self.table:
                raise VarTableMismatch(
                    f"Variable tables differ: {self.table.names} vs {other.table.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.table.const(other)
        return NotImplemented

    # predicates and accessors

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(exp) for exp in self.terms)

    def is_monomial(self):
        return len(self.terms) == 1

    def constant_term(self):
        return self.terms.get((0,) * len(self.table), Fraction(0))

    def variables(self):
        """Names of variables that occur with a nonzero exponent."""
        used = set()
        for exp in self.terms:
            for name, e in zip(self.table.names, exp):
                if e:
                    used.add(name)
        return used

    def degree(self, name):
        i = self.table.index(name)
        return max((exp[i] for exp in self.terms), default=0)

    def low_degree(self, name):
        i = self.table.index(name)
        return min((exp[i] for exp in self.terms), default=0)

    def sorted_terms(self):
        """Terms in the canonical order: graded lex on exponents, largest first."""
        return sorted(self.terms.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True)

    def leading(self):
        if not self.terms:
            raise PolyDivisionError("Zero polynomial has no leading term")
        return self.sorted_terms()[0]

    # ring structure

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp, 0) + c
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        return LaurentPoly._raw(self.table, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.table, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return self.table.zero()
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(exp, 0) + c1 * c2
                if s:
                    terms[exp] = s
                else:
                    del terms[exp]
        return LaurentPoly._raw(self.table, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.invert_monomial() ** (-n)
        result = self.table.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise PolyDivisionError("Division by zero scalar")
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_monomial():
            return self * other.invert_monomial()
        return divide_exact(self, other)

    def invert_monomial(self):
        """Inverse of a unit monomial c*x^e (all variables in it invertible)."""
        if not self.is_monomial():
            raise PolyDivisionError(f"{self} is not a monomial unit")
        (exp, c), = self.terms.items()
        for e, inv, name in zip(exp, self.table.invertible, self.table.names):
            if e and not inv:
                raise PolyDivisionError(f"Variable {name} is not invertible")
        return LaurentPoly._raw(self.table, {tuple(-e for e in exp): 1 / c})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.table.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # transformations

    def scale_monomial(self, exp, coeff=1):
        """Multiply by coeff * x^exp given as an exponent tuple."""
        coeff = Fraction(coeff)
        return LaurentPoly(self.table, {tuple(a + b for a, b in zip(e, exp)): c * coeff
                                        for e, c in self.terms.items()})

    def clear_denominators(self):
        """
        Multiply by the unique unit monomial that makes every exponent >= 0
        with minimal degrees in the invertible variables, and scale to a
        primitive integer polynomial with positive leading coefficient.
        Ideal membership is unchanged.

        Returns:
            LaurentPoly: The normalized representative
        """
        if not self.terms:
            return self
        n = len(self.table)
        shift = tuple(-min(exp[i] for exp in self.terms) if self.table.invertible[i] else 0
                      for i in range(n))
        shifted = self.scale_monomial(shift)
        return shifted.primitive()

    def primitive(self):
        """Scale to integer coefficients with gcd 1 and positive leading coefficient."""
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = lcm(den, c.denominator)
        num_gcd = 0
        for c in self.terms.values():
            num_gcd = gcd(num_gcd, (c * den).numerator)
        factor = Fraction(den, num_gcd)
        if self.leading()[1] < 0:
            factor = -factor
        return LaurentPoly._raw(self.table, {e: c * factor for e, c in self.terms.items()})

    def monic(self):
        if not self.terms:
            return self
        return self * (1 / self.leading()[1])

    def diff(self, name):
        """Partial derivative with respect to one variable."""
        i = self.table.index(name)
        terms = {}
        for exp, c in self.terms.items():
            if exp[i]:
                new = list(exp)
                new[i] -= 1
                terms[tuple(new)] = c * exp[i]
        return LaurentPoly(self.table, terms)

    def evaluate(self, point):
        """
        Evaluate at a point.

        Args:
            point (dict): {name: value}; values may be Fraction, int, float or complex.
                Every variable occurring in the polynomial must be given.

        Returns:
            The value in whatever number type the point uses
        """
        values = []
        for name in self.table.names:
            values.append(point.get(name))
        total = 0
        for exp, c in self.terms.items():
            term = c if all(isinstance(v, (int, Fraction)) or v is None for v in values) else complex(c)
            for v, e in zip(values, exp):
                if e:
                    if v is None:
                        raise KeyError(f"No value for variable in {self}")
                    if v == 0 and e < 0:
                        raise PolyDivisionError("Negative power of zero")
                    term = term * (v ** e if not isinstance(v, int) else Fraction(v) ** e)
            total += term
        return total

    def specialize(self, images, table=None):
        """
        Substitute Laurent polynomials for some variables, returning a
        LaurentPoly over ``table`` (default: own table).

        Negative exponents are only allowed when the image is a unit monomial.

        Args:
            images (dict): {name: LaurentPoly over the target table}
            table (VarTable, optional): Target table; unmapped variables keep their names

        Returns:
            LaurentPoly: The image
        """
        table = table or self.table
        idx = []
        for name in self.table.names:
            if name in images:
                idx.append(None)
            elif name in table.names:
                idx.append(table.names.index(name))
            else:
                idx.append(-1)
        powers = {}

        def power(name, e):
            key = (name, e)
            if key not in powers:
                powers[key] = images[name] ** e
            return powers[key]

        result = {}
        for exp, c in self.terms.items():
            base_exp = [0] * len(table)
            term = None
            for name, e, j in zip(self.table.names, exp, idx):
                if not e:
                    continue
                if j == -1:
                    raise KeyError(f"Variable {name} has no image and is missing from the target table")
                if j is not None:
                    base_exp[j] += e
                else:
                    factor = power(name, e)
                    term = factor if term is None else term * factor
            mono = LaurentPoly._raw(table, {tuple(base_exp): c})
            piece = mono if term is None else mono * term
            for e2, c2 in piece.terms.items():
                s = result.get(e2, 0) + c2
                if s:
                    result[e2] = s
                else:
                    result.pop(e2, None)
        return LaurentPoly(table, result)

    def embed(self, table):
        """Re-express over a larger table that contains every used variable."""
        return self.specialize({}, table)

    # text and JSON

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"LaurentPoly({format_poly(self)})"

    def to_dict(self):
        return {
            'vars': list(self.table.names),
            'invertible': list(self.table.invertible),
            'terms': [{'exp': list(exp), 'num': str(c.numerator), 'den': str(c.denominator)}
                      for exp, c in self.sorted_terms()],
        }

    @classmethod
    def from_dict(cls, data, table=None):
        if table is None:
            flags = data.get('invertible')
            if flags is None:
                flags = [True] * len(data['vars'])
            table = VarTable(tuple(data['vars']), tuple(flags))
        terms = {tuple(t['exp']): Fraction(int(t['num']), int(t['den'])) for t in data['terms']}
        return cls(table, terms)

    def to_json(self):
        return json.dumps(self.to_dict())


def format_poly(p):
    """Human readable form using ^ for powers and * for products."""
    if not p.terms:
        return "0"
    pieces = []
    for exp, c in p.sorted_terms():
        factors = []
        for name, e in zip(p.table.names, exp):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        sign = '-' if c < 0 else '+'
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = '*'.join(factors)
        else:
            body = f"{mag}*" + '*'.join(factors)
        pieces.append((sign, body))
    text = ('-' if pieces[0][0] == '-' else '') + pieces[0][1]
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def divide_exact(a, b):
    """
    Exact quotient a / b of Laurent polynomials.

    Both operands are shifted to ordinary polynomials and divided under lex
    order; a nonzero remainder means b does not divide a.

    Raises:
        PolyDivisionError: If b is zero or does not divide a
    """
    if b.is_zero():
        raise PolyDivisionError("Division by the zero polynomial")
    if a.is_zero():
        return a
    n = len(a.table)
    shift_a = tuple(-min(exp[i] for exp in a.terms) for i in range(n))
    shift_b = tuple(-min(exp[i] for exp in b.terms) for i in range(n))
    pa = a.scale_monomial(shift_a)
    pb = b.scale_monomial(shift_b)
    lead_exp = max(pb.terms)
    lead_c = pb.terms[lead_exp]
    remainder = dict(pa.terms)
    quotient = {}
    while remainder:
        exp = max(remainder)
        delta = tuple(x - y for x, y in zip(exp, lead_exp))
        if any(d < 0 for d in delta):
            raise PolyDivisionError(f"{b} does not divide {a}")
        coeff = remainder[exp] / lead_c
        quotient[delta] = quotient.get(delta, 0) + coeff
        for e, c in pb.terms.items():
            key = tuple(x + y for x, y in zip(e, delta))
            s = remainder.get(key, 0) - coeff * c
            if s:
                remainder[key] = s
            else:
                remainder.pop(key, None)
    back = tuple(sb - sa for sa, sb in zip(shift_a, shift_b))
    return LaurentPoly(a.table, quotient).scale_monomial(back)


class RatFunc:
    """
    Quotient of two Laurent polynomials over a common table.

    The denominator is normalized to leading coefficient 1 and folded into the
    numerator whenever it is a unit monomial. Equality is tested by
    cross-multiplication, so no gcd engine is needed for correctness.
    """

    __slots__ = ('num', 'den')

    def __init__(self, num, den=None):
        if den is None:
            den = num.table.const(1)
        if num.table != den.table:
            raise VarTableMismatch("Numerator and denominator tables differ")
        if den.is_zero():
            raise PolyDivisionError("Zero denominator")
        if den.is_monomial():
            num = num * den.invert_monomial()
            den = den.table.const(1)
        else:
            lead = den.leading()[1]
            if lead != 1:
                num = num * (1 / lead)
                den = den * (1 / lead)
        self.num = num
        self.den = den

    @property
    def table(self):
        return self.num.table

    @classmethod
    def lift(cls, value, table):
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, LaurentPoly):
            return cls(value)
        return cls(table.const(value))

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den == 1

    def as_poly(self):
        """Return the Laurent polynomial this equals, dividing exactly if needed."""
        if self.den == 1:
            return self.num
        return divide_exact(self.num, self.den)

    def _other(self, other):
        if isinstance(other, RatFunc):
            if other.table != self.table:
                raise VarTableMismatch("Rational function tables differ")
            return other
        if isinstance(other, (LaurentPoly, int, Fraction)):
            return RatFunc.lift(other, self.table)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise PolyDivisionError("Inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    def __eq__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self.num * other.den == other.num * self.den

    # equality is by cross-multiplication, so there is no canonical form to hash
    __hash__ = None

    def specialize(self, images, table=None):
        num = self.num.specialize(images, table)
        den = self.den.specialize(images, table)
        if den.is_zero():
            raise PolyDivisionError(f"Specialization makes denominator {self.den} vanish")
        return RatFunc(num, den)

    def evaluate(self, point):
        d = self.den.evaluate(point)
        if d == 0:
            raise PolyDivisionError(f"Denominator {self.den} vanishes at {point}")
        return self.num.evaluate(point) / d

    def reduced(self):
        """
        Cancel the gcd of numerator and denominator.

        Tries exact division first and falls back to sympy's ``cancel``.

        Returns:
            RatFunc: An equal fraction in lowest terms
        """
        if self.den == 1:
            return self
        try:
            return RatFunc(divide_exact(self.num, self.den))
        except PolyDivisionError:
            pass
        import sympy
        symbols = [sympy.Symbol(name) for name in self.table.names]
        expr = sympy.cancel(to_sympy(self.num, symbols) / to_sympy(self.den, symbols))
        num, den = sympy.fraction(sympy.together(expr))
        logger.debug(f"Reduced {self} with sympy")
        return RatFunc(from_sympy(num, self.table, symbols), from_sympy(den, self.table, symbols))

    def __str__(self):
        if self.den == 1:
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"

    __repr__ = __str__

    def to_dict(self):
        return {'num': self.num.to_dict(), 'den': self.den.to_dict()}


def to_sympy(p, symbols):
    import sympy
    expr = sympy.Integer(0)
    for exp, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(symbols, exp):
            if e:
                term = term * s ** e
        expr += term
    return expr


def from_sympy(expr, table, symbols):
    import sympy
    expr = sympy.expand(expr)
    symbols = list(symbols)
    terms = {}
    for term in sympy.Add.make_args(expr):
        if term == 0:
            continue
        coeff, rest = term.as_coeff_Mul()
        exp = [0] * len(table)
        for factor in sympy.Mul.make_args(rest):
            base, e = factor.as_base_exp()
            if base == 1:
                continue
            exp[symbols.index(base)] += int(e)
        coeff = sympy.Rational(coeff)
        key = tuple(exp)
        terms[key] = terms.get(key, 0) + Fraction(int(coeff.p), int(coeff.q))
    return LaurentPoly(table, terms)


def substitute(p, mapping, table):
    """
    Ring-homomorphism image of p under a variable -> RatFunc map.

    Args:
        p (LaurentPoly): Source polynomial
        mapping (dict): {name: RatFunc | LaurentPoly} images over ``table``
        table (VarTable): Target table; unmapped variables must exist there

    Returns:
        RatFunc: The image

    Raises:
        PolyDivisionError: If a negative power hits an image equal to zero
    """
    images = {name: RatFunc.lift(v, table) for name, v in mapping.items()}
    fixed = {}
    for name in p.table.names:
        if name not in images:
            fixed[name] = table.names.index(name) if name in table.names else -1
    total = RatFunc(table.zero())
    cache = {}
    for exp, c in p.terms.items():
        base = [0] * len(table)
        term = RatFunc(table.const(c))
        for name, e in zip(p.table.names, exp):
            if not e:
                continue
            if name in fixed:
                if fixed[name] < 0:
                    raise KeyError(f"Variable {name} is neither mapped nor present in the target table")
                base[fixed[name]] += e
                continue
            key = (name, e)
            if key not in cache:
                img = images[name]
                if e < 0 and img.is_zero():
                    raise PolyDivisionError(f"Substitution sends {name} to zero but it appears inverted")
                cache[key] = img ** e
            term = term * cache[key]
        total = total + term * LaurentPoly(table, {tuple(base): Fraction(1)})
    return total


# q-binomials

Q_TABLE = VarTable.build(invertible=('q',))
QG_TABLE = VarTable.build(invertible=('q', 'g'))


def qint_factor(table, m):
    """q^m - q^-m over ``table``."""
    q = table.var('q')
    return q ** m - q ** (-m)


@lru_cache(maxsize=None)
def qbinom_int(n, k):
    """
    Gaussian binomial [n choose k] as a Laurent polynomial in q.

    Computed from the product formula by exact division; symmetric under
    q <-> 1/q. Returns 0 outside 0 <= k <= n.
    """
    if n < 0 or k < 0 or k > n:
        return Q_TABLE.zero()
    num = Q_TABLE.const(1)
    den = Q_TABLE.const(1)
    for i in range(k):
        num = num * qint_factor(Q_TABLE, n - i)
        den = den * qint_factor(Q_TABLE, i + 1)
    return divide_exact(num, den)


def qbinom_formal(a, b, table=QG_TABLE):
    """
    The formal binomial [N - a choose b] as a rational function of g = q^N and q.

    Args:
        a (int): Shift of the formal top entry
        b (int): Bottom entry, b >= 0
        table (VarTable): Table containing q and g

    Returns:
        RatFunc: prod_{i<b} (g q^{-a-i} - g^{-1} q^{a+i}) / prod_{j<=b} (q^j - q^{-j})
    """
    if b < 0:
        raise ValueError(f"qbinom_formal needs b >= 0, got {b}")
    q = table.var('q')
    g = table.var('g')
    num = table.const(1)
    den = table.const(1)
    for i in range(b):
        num = num * (g * q ** (-a - i) - g ** -1 * q ** (a + i))
        den = den * qint_factor(table, i + 1)
    return RatFunc(num, den)


def q_power_of_g(table, n):
    """The specialization image g -> q^n."""
    return {'g': table.var('q') ** n}


# the (mu, lambda, U) -> (nu, Lambda, g) import

def kch_import(p, table):
    """
    Import a polynomial in mu, lam, U into (nu, L, g) coordinates using
    mu -> nu^-2, U -> g^-2, lam -> -g^-1 L^-1.

    Args:
        p (LaurentPoly): Polynomial over a table naming mu/lam/U (optionally suffixed by component)
        table (VarTable): Target table containing nu, L, g (same suffixes)

    Returns:
        RatFunc: The image
    """
    g = table.var('g')
    mapping = {}
    for name in p.table.names:
        m = re.fullmatch(r'(mu|lam|U)(\d*)', name)
        if not m:
            continue
        kind, suffix = m.groups()
        if kind == 'mu':
            mapping[name] = table.var(f'nu{suffix}') ** -2
        elif kind == 'U':
            mapping[name] = g ** -2
        else:
            mapping[name] = -(g ** -1) * table.var(f'L{suffix}') ** -1
    return substitute(p, mapping, table)


KCH_TABLE = VarTable.build(invertible=('mu', 'lam', 'U'))


def kch_unknot_polynomial():
    """U - lam - mu + lam*mu, the unknot's augmentation polynomial."""
    mu, lam, U = (KCH_TABLE.var(n) for n in ('mu', 'lam', 'U'))
    return U - lam - mu + lam * mu


# expression parsing shared with the quantum torus literals

_TOKEN = re.compile(r'\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|\+|-|\(|\)))')


def tokenize(text):
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"Unexpected character at position {pos}: {text[pos:pos + 10]!r}")
        number, name, op = m.groups()
        if number is not None:
            tokens.append(('num', number, m.start(1)))
        elif name is not None:
            tokens.append(('name', name, m.start(2)))
        else:
            tokens.append(('op', op, m.start(3)))
        pos = m.end()
    return tokens


def parse_expression(text, atom, constant):
    """
    Recursive-descent parser for + - * ^ and parentheses.

    Products are formed strictly left to right, so the parser is safe for
    noncommutative algebras.

    Args:
        text (str): Expression text
        atom (callable): name -> algebra element
        constant (callable): Fraction -> algebra element

    Returns:
        The parsed algebra element
    """
    tokens = tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None, len(text))

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if expected is not None and tok[1] != expected:
            raise ValueError(f"Expected {expected!r} at position {tok[2]}, found {tok[1]!r}")
        pos += 1
        return tok

    def expr():
        sign = 1
        if peek()[1] in ('+', '-'):
            sign = -1 if take()[1] == '-' else 1
        value = term()
        if sign < 0:
            value = -value
        while peek()[1] in ('+', '-'):
            op = take()[1]
            rhs = term()
            value = value + rhs if op == '+' else value - rhs
        return value

    def term():
        value = power()
        while peek()[1] == '*' or peek()[1] == '(' or peek()[0] in ('name', 'num'):
            if peek()[1] == '*':
                take()
            value = value * power()
        return value

    def power():
        base = primary()
        if peek()[1] == '^':
            take()
            sign = 1
            if peek()[1] == '-':
                take()
                sign = -1
            kind, val, where = take()
            if kind != 'num' or '/' in val:
                raise ValueError(f"Integer exponent expected at position {where}")
            return base ** (sign * int(val))
        return base

    def primary():
        kind, val, where = peek()
        if kind == 'num':
            take()
            return constant(Fraction(val))
        if kind == 'name':
            take()
            return atom(val)
        if val == '(':
            take()
            inner = expr()
            take(')')
            return inner
        raise ValueError(f"Unexpected token {val!r} at position {where}")

    result = expr()
    if pos != len(tokens):
        raise ValueError(f"Trailing input at position {peek()[2]}")
    return result


def parse_poly(text, table):
    """Parse text such as 'g*nu^-2 - g^-1' into a LaurentPoly over ``table``."""
    return parse_expression(text, table.var, table.const)
