"""
The cord algebra side: the braid action on the a_ij generators, the
Phi^L / Phi^R matrices, and the relation matrices of the augmentation ideal.
"""
import json
import logging
from dataclasses import dataclass

from braid import BraidWord, closure
from ideal import IdealGens, eliminate, ideal_from
from poly import LaurentPoly, VarTable, kch_import, KCH_TABLE

logger = logging.getLogger(__name__)


def a_name(i, j):
    """Generator name for a_ij; indices past 9 are separated by an underscore."""
    if i < 10 and j < 10:
        return f"a{i}{j}"
    return f"a{i}_{j}"


def a_names(n):
    return tuple(a_name(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j)


def nu_name(r, c):
    """Meridian name of 0-based component c in an r-component closure."""
    return 'nu' if r == 1 else f"nu{c + 1}"


def lam_name(r, c):
    return 'L' if r == 1 else f"L{c + 1}"


def aug_table(n, r=1):
    """
    Variable table for an n-strand closure with r components.

    Args:
        n (int): Strand count
        r (int): Component count

    Returns:
        VarTable: g, the nu's and L's (invertible) followed by the a_ij
    """
    inv = ('g',) + tuple(nu_name(r, c) for c in range(r)) + tuple(lam_name(r, c) for c in range(r))
    return VarTable.build(invertible=inv, polynomial=a_names(n))


def a_table(n):
    return VarTable.build(polynomial=a_names(n))


class AugMatrix:
    """Square matrix of Laurent polynomials over one table; indices are 0-based."""

    __slots__ = ('table', 'rows')

    def __init__(self, table, rows):
        self.table = table
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def identity(cls, table, n):
        one, zero = table.const(1), table.zero()
        return cls(table, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, table, entries):
        zero = table.zero()
        n = len(entries)
        return cls(table, [[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    @property
    def size(self):
        return len(self.rows)

    def __getitem__(self, key):
        i, j = key
        return self.rows[i][j]

    def __matmul__(self, other):
        n = self.size
        zero = self.table.zero()
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for m in range(n):
                    x, y = self.rows[i][m], other.rows[m][j]
                    if x and y:
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return AugMatrix(self.table, out)

    def __add__(self, other):
        return AugMatrix(self.table, [[x + y for x, y in zip(r1, r2)]
                                      for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return AugMatrix(self.table, [[x - y for x, y in zip(r1, r2)]
                                      for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.apply(lambda x: -x)

    def scale(self, c):
        return self.apply(lambda x: x * c)

    def apply(self, fn):
        return AugMatrix(self.table, [[fn(x) for x in row] for row in self.rows])

    def __eq__(self, other):
        if not isinstance(other, AugMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def entries(self):
        """Yield (i, j, entry) with 1-based indices, row-major."""
        for i, row in enumerate(self.rows, 1):
            for j, x in enumerate(row, 1):
                yield i, j, x

    def to_lists(self):
        return [[str(x) for x in row] for row in self.rows]

    def __str__(self):
        return '\n'.join('[' + ', '.join(row) + ']' for row in self.to_lists())


class AlgebraMap:
    """
    Algebra endomorphism given by images of some generators; every other
    variable is fixed.
    """

    def __init__(self, table, images):
        self.table = table
        self.images = dict(images)

    @classmethod
    def identity(cls, table):
        return cls(table, {})

    def __call__(self, x):
        if isinstance(x, AugMatrix):
            return x.apply(self)
        if not self.images:
            return x
        return x.specialize(self.images)

    def image(self, name):
        return self.images.get(name, self.table.var(name))

    def compose(self, other):
        """self o other: apply ``other`` first, then ``self``."""
        images = dict(self.images)
        for name, img in other.images.items():
            images[name] = self(img)
        return AlgebraMap(self.table, images)


def phi_gen(letter, table):
    """
    Action of sigma_k^(+-1) on the a_ij.

    Args:
        letter (int): +k or -k
        table (VarTable): Table holding the a_ij of every strand in play

    Returns:
        AlgebraMap: The generator automorphism
    """
    k = abs(letter)
    strands = sorted({int(x) for x in _strands(table)})
    a = lambda i, j: table.var(a_name(i, j))
    images = {}
    for i in strands:
        if i in (k, k + 1):
            continue
        if letter > 0:
            images[a_name(k + 1, i)] = a(k, i)
            images[a_name(i, k + 1)] = a(i, k)
            images[a_name(k, i)] = a(k + 1, i) - a(k + 1, k) * a(k, i)
            images[a_name(i, k)] = a(i, k + 1) - a(i, k) * a(k, k + 1)
        else:
            images[a_name(k, i)] = a(k + 1, i)
            images[a_name(i, k)] = a(i, k + 1)
            images[a_name(k + 1, i)] = a(k, i) - a(k, k + 1) * a(k + 1, i)
            images[a_name(i, k + 1)] = a(i, k) - a(i, k + 1) * a(k + 1, k)
    images[a_name(k, k + 1)] = -a(k + 1, k)
    images[a_name(k + 1, k)] = -a(k, k + 1)
    return AlgebraMap(table, images)


def _strands(table):
    """Strand labels present among the a_ij of a table."""
    found = set()
    for name in table.names:
        if not name.startswith('a'):
            continue
        body = name[1:]
        if '_' in body:
            i, j = body.split('_')
        elif len(body) == 2 and body.isdigit():
            i, j = body[0], body[1]
        else:
            continue
        found.update((int(i), int(j)))
    return found


def phi_word(b, table):
    """phi_beta as a composite: phi_{b1 b2} = phi_{b1} o phi_{b2}."""
    m = AlgebraMap.identity(table)
    for letter in b.letters:
        m = m.compose(phi_gen(letter, table))
    return m


def _block(table, n, k, block):
    rows = [[table.const(1) if i == j else table.zero() for j in range(n)] for i in range(n)]
    for (di, dj), x in block.items():
        rows[k - 1 + di][k - 1 + dj] = x
    return AugMatrix(table, rows)


def gen_matrix_L(letter, table, n):
    k = abs(letter)
    zero, one = table.zero(), table.const(1)
    if letter > 0:
        block = {(0, 0): -table.var(a_name(k + 1, k)), (0, 1): one, (1, 0): one, (1, 1): zero}
    else:
        block = {(0, 0): zero, (0, 1): one, (1, 0): one, (1, 1): -table.var(a_name(k, k + 1))}
    return _block(table, n, k, block)


def gen_matrix_R(letter, table, n):
    k = abs(letter)
    zero, one = table.zero(), table.const(1)
    if letter > 0:
        block = {(0, 0): -table.var(a_name(k, k + 1)), (0, 1): one, (1, 0): one, (1, 1): zero}
    else:
        block = {(0, 0): zero, (0, 1): one, (1, 0): one, (1, 1): -table.var(a_name(k + 1, k))}
    return _block(table, n, k, block)


def phi_matrices(b, table):
    """
    Phi^L_beta and Phi^R_beta folded letter by letter with
    Phi^L_{b s} = phi_b(Phi^L_s) Phi^L_b and Phi^R_{b s} = Phi^R_b phi_b(Phi^R_s).

    Returns:
        tuple: (Phi^L, Phi^R, phi_beta)
    """
    n = b.n
    left = AugMatrix.identity(table, n)
    right = AugMatrix.identity(table, n)
    m = AlgebraMap.identity(table)
    for letter in b.letters:
        left = m(gen_matrix_L(letter, table, n)) @ left
        right = right @ m(gen_matrix_R(letter, table, n))
        m = m.compose(phi_gen(letter, table))
    return left, right, m


def phiL(b, table=None):
    table = table or aug_table(b.n)
    return phi_matrices(b, table)[0]


def phiR(b, table=None):
    table = table or aug_table(b.n)
    return phi_matrices(b, table)[1]


def phi_star_matrices(b, table=None):
    """
    Phi^L and Phi^R read off from the action of beta on an auxiliary strand
    n+1 placed to the right: phi(a_{i*}) = sum_j Phi^L_ij a_{j*} and
    phi(a_{*j}) = sum_i a_{*i} Phi^R_ij.

    Returns:
        tuple: (Phi^L, Phi^R) over ``table``
    """
    n = b.n
    table = table or aug_table(n)
    star = n + 1
    big = a_table(star)
    m = phi_word(b.with_strands(star), big)

    left_rows = [[table.zero()] * n for _ in range(n)]
    right_rows = [[table.zero()] * n for _ in range(n)]
    row_idx = {big.index(a_name(j, star)): j for j in range(1, n + 1)}
    col_idx = {big.index(a_name(star, j)): j for j in range(1, n + 1)}
    for i in range(1, n + 1):
        _split_linear(m.image(a_name(i, star)), row_idx, table,
                      lambda j, x: _put(left_rows, i - 1, j - 1, x))
        _split_linear(m.image(a_name(star, i)), col_idx, table,
                      lambda j, x: _put(right_rows, j - 1, i - 1, x))
    return AugMatrix(table, left_rows), AugMatrix(table, right_rows)


def _put(rows, i, j, x):
    rows[i][j] = rows[i][j] + x


def _split_linear(p, index, table, sink):
    for exp, c in p.terms.items():
        hits = [pos for pos in index if exp[pos]]
        if len(hits) != 1 or exp[hits[0]] != 1:
            raise ValueError(f"{p} is not linear in the auxiliary generators")
        pos = hits[0]
        rest = list(exp)
        rest[pos] = 0
        coeff = LaurentPoly(p.table, {tuple(rest): c}).embed(table)
        sink(index[pos], coeff)


# relation matrices

def strand_nu(info, table):
    return [table.var(nu_name(info.r, info.comp(i))) for i in range(1, info.n + 1)]


def build_A(info, table, nus=None):
    """
    The matrix A: a_ij above the diagonal, -nu^-2 a_ij below it and
    1 - nu^-2 on the diagonal, nu taken from the row's component.

    Args:
        info (ClosureInfo): Closure data
        table (VarTable): Augmentation table
        nus (list, optional): Per-strand meridian elements overriding the closure's

    Returns:
        AugMatrix: A
    """
    nus = nus or strand_nu(info, table)
    n = info.n
    rows = []
    for i in range(1, n + 1):
        inv2 = nus[i - 1] ** -2
        row = []
        for j in range(1, n + 1):
            if i < j:
                row.append(table.var(a_name(i, j)))
            elif i > j:
                row.append(-inv2 * table.var(a_name(i, j)))
            else:
                row.append(1 - inv2)
        rows.append(row)
    return AugMatrix(table, rows)


def build_Ahat(info, table, nus=None):
    """The matrix -g*Ahat."""
    nus = nus or strand_nu(info, table)
    g = table.var('g')
    ginv = g ** -1
    n = info.n
    rows = []
    for i in range(1, n + 1):
        inv2 = nus[i - 1] ** -2
        row = []
        for j in range(1, n + 1):
            if i < j:
                row.append(-ginv * table.var(a_name(i, j)))
            elif i > j:
                row.append(g * inv2 * table.var(a_name(i, j)))
            else:
                row.append(g * inv2 - ginv)
        rows.append(row)
    return AugMatrix(table, rows)


def build_LambdaPrime(info, table, lambda_sign=-1):
    """
    Diagonal Lambda': at the leftmost strand of component c the entry is
    L_c^-1 nu_c^(2*sign*w_c) (-g)^w_c with w_c the self-writhe, else 1.
    """
    g = table.var('g')
    entries = [table.const(1)] * info.n
    for c, left in enumerate(info.leftmost):
        w = info.self_wr[c]
        nu = table.var(nu_name(info.r, c))
        lam = table.var(lam_name(info.r, c))
        entries[left - 1] = lam ** -1 * nu ** (2 * lambda_sign * w) * (-g) ** w
    return AugMatrix.diag(table, entries)


def D_matrix(info, table):
    """diag((-g)^d(i) nu_c(i))."""
    g = table.var('g')
    nus = strand_nu(info, table)
    return AugMatrix.diag(table, [(-g) ** info.dist(i) * nus[i - 1] for i in range(1, info.n + 1)])


def D_beta(info, table):
    D = D_matrix(info, table)
    return AugMatrix.diag(table, [D[info.beta(i) - 1, info.beta(i) - 1] for i in range(1, info.n + 1)])


def psi(info, table, psi_sign=-1):
    """
    Rescaling a_ij -> (-g)^(sign * k(i,j)) (nu_c(i) / nu_c(j)) a_ij with
    k(i,j) = d(j) - d(i); the default sign is the one that turns the knot
    contact relations into the ones built here.
    """
    g = table.var('g')
    nus = strand_nu(info, table)
    images = {}
    for i in range(1, info.n + 1):
        for j in range(1, info.n + 1):
            if i == j:
                continue
            factor = (-g) ** (psi_sign * info.k(i, j)) * nus[i - 1] * nus[j - 1] ** -1
            images[a_name(i, j)] = factor * table.var(a_name(i, j))
    return AlgebraMap(table, images)


@dataclass
class Presentation:
    """
    Relation generators of the augmentation ideal of a braid closure.
    """
    braid: BraidWord
    info: object
    table: VarTable
    generators: tuple
    labels: tuple

    def __len__(self):
        return len(self.generators)

    def eliminated(self):
        """Names projected away when passing to the augmentation variety."""
        return a_names(self.info.n)

    def kept(self):
        return tuple(name for name in self.table.names if name not in set(self.eliminated()))

    def to_dict(self):
        return {
            'braid': self.braid.to_dict(),
            'closure': self.info.to_dict(),
            'table': self.table.to_dict(),
            'relations': [{'label': label, 'poly': p.to_dict(), 'text': str(p)}
                          for label, p in zip(self.labels, self.generators)],
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        b = BraidWord(data['braid']['n'], tuple(data['braid']['letters']))
        table = VarTable(tuple(data['table']['vars']), tuple(data['table']['invertible']))
        gens = tuple(LaurentPoly.from_dict(r['poly'], table) for r in data['relations'])
        labels = tuple(r['label'] for r in data['relations'])
        return cls(b, closure(b), table, gens, labels)


def _collect(named):
    """Drop zeros and unit-multiple duplicates, keeping the first label."""
    seen = set()
    gens, labels = [], []
    for label, p in named:
        if p.is_zero():
            continue
        key = p.clear_denominators()
        if key in seen:
            continue
        seen.add(key)
        gens.append(key)
        labels.append(label)
    return tuple(gens), tuple(labels)


def relation_matrices(b, lambda_sign=-1, table=None):
    """
    The matrices whose entries generate the ideal.

    Returns:
        dict: 'ourCH1', 'ourCH2', 'ourCH3' AugMatrix values plus the pieces
    """
    info = closure(b)
    table = table or aug_table(b.n, info.r)
    left, right, m = phi_matrices(b, table)
    A = build_A(info, table)
    B = build_Ahat(info, table)
    lam = build_LambdaPrime(info, table, lambda_sign)
    return {
        'info': info, 'table': table,
        'A': A, 'Ahat': B, 'LambdaPrime': lam, 'PhiL': left, 'PhiR': right, 'phi': m,
        'ourCH1': A @ lam - lam @ m(A),
        'ourCH2': B - lam @ left @ A,
        'ourCH3': A @ lam - B @ right,
    }


def relations(b, lambda_sign=-1, include_ch1=None):
    """
    Build the relation generators for the closure of ``b``.

    Entries of ourCH2 = (-g Ahat) - Lambda' Phi^L A and of ourCH3 multiplied
    on the right by Lambda', i.e. A Lambda' - (-g Ahat) Phi^R, normalized by
    clearing denominators. For a knot the ourCH1 entries already lie in the
    ideal and are only added on request. For a link phi(A) = Phi^L A Phi^R
    fails once the components carry different meridians, so ourCH1 is
    emitted by default.

    Args:
        b (BraidWord): The braid
        lambda_sign (int): Sign s in nu^(2*s*w) of the Lambda' corner entry
        include_ch1 (bool, optional): Also emit A Lambda' - Lambda' phi(A);
            None means "only for links"

    Returns:
        Presentation: Labelled generators
    """
    mats = relation_matrices(b, lambda_sign)
    if include_ch1 is None:
        include_ch1 = not mats['info'].is_knot()
    named = []
    kinds = ('ourCH2', 'ourCH3') + (('ourCH1',) if include_ch1 else ())
    for kind in kinds:
        for i, j, x in mats[kind].entries():
            named.append((f"{kind}[{i},{j}]", x))
    gens, labels = _collect(named)
    logger.info(f"Braid {b} on {b.n} strands: {len(gens)} relation generators")
    return Presentation(b, mats['info'], mats['table'], gens, labels)


def kch_lambda(info, table):
    """
    Knot contact Lambda: lam mu^w U^((n-w-1)/2) in the corner, imported to
    (nu, L, g) coordinates.
    """
    if not info.is_knot():
        raise ValueError("The knot contact Lambda is only defined here for knots")
    w, n = info.wr_total, info.n
    corner = KCH_TABLE.monomial({'lam': 1, 'mu': w, 'U': (n - w - 1) // 2})
    entries = [table.const(1)] * n
    entries[0] = kch_import(corner, table).as_poly()
    return AugMatrix.diag(table, entries)


def kch_relations(b):
    """
    The knot contact homology relations Ahat - Lambda Phi^L A and
    A Lambda - Ahat Phi^R, before the Psi rescaling.

    Returns:
        Presentation: Unnormalized-coordinate generators
    """
    info = closure(b)
    table = aug_table(b.n, info.r)
    left, right, _ = phi_matrices(b, table)
    A = build_A(info, table)
    g = table.var('g')
    Ahat = build_Ahat(info, table).scale((-g) ** -1)
    lam = kch_lambda(info, table)
    named = []
    for kind, mat in (('KCH2', Ahat - lam @ left @ A), ('KCH3', A @ lam - Ahat @ right)):
        for i, j, x in mat.entries():
            named.append((f"{kind}[{i},{j}]", x))
    gens, labels = _collect(named)
    return Presentation(b, info, table, gens, labels)


def corner_shift(info, table, lambda_sign=-1, inverse=False):
    """
    Images L_c -> L_c nu_c^(2 s w_c) g^(w_c), which turn every Lambda' corner
    into (-1)^(w_c) L_c^-1; ``inverse`` gives the map back.

    Returns:
        dict: {name: LaurentPoly over ``table``}
    """
    g = table.var('g')
    e = -1 if inverse else 1
    images = {}
    for c, w in enumerate(info.self_wr):
        lam, nu = lam_name(info.r, c), nu_name(info.r, c)
        images[lam] = table.var(lam) * (table.var(nu) ** (2 * lambda_sign * w) * g ** w) ** e
    return images


def augmentation_ideal(b, lambda_sign=-1, **limits):
    """
    The eliminated augmentation ideal of the closure of ``b`` in g, nu, L.

    The a_ij are eliminated after the corner shift, which fixes them and is
    invertible, and the result is shifted back.

    Args:
        b (BraidWord): The braid
        lambda_sign (int): Sign s in nu^(2*s*w) of the Lambda' corner entry
        **limits: spair_budget and timeout_s for the Groebner engine

    Returns:
        tuple: (Presentation, IdealGens with status 'eliminated')

    Raises:
        GroebnerIncomplete: When a budget is exhausted
    """
    pres = relations(b, lambda_sign)
    images = corner_shift(pres.info, pres.table, lambda_sign)
    shifted = [p.specialize(images).clear_denominators() for p in pres.generators]
    result = eliminate(ideal_from(shifted, pres.table), pres.eliminated(), **limits)
    back = corner_shift(pres.info, result.table, lambda_sign, inverse=True)
    gens = tuple(p.specialize(back).clear_denominators() for p in result.generators)
    return pres, IdealGens(result.table, gens, result.status, result.eliminated)
