import json
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np
import pandas as pd

from poly import LaurentPoly, VarTable

logger = logging.getLogger(__name__)

DEFAULT_SPAIR_BUDGET = 200_000
DEFAULT_TIMEOUT_S = 60.0


class GroebnerIncomplete(RuntimeError):
    """Raised when Buchberger exceeds its S-pair or wall-clock budget."""

    def __init__(self, pairs, elapsed, basis_size):
        super().__init__(f"Groebner basis incomplete after {pairs} S-pairs and "
                         f"{elapsed:.1f}s (basis size {basis_size})")
        self.pairs = pairs
        self.elapsed = elapsed
        self.basis_size = basis_size


def tag_name(name):
    return f"t_{name}"


@dataclass(frozen=True)
class RingSpec:
    """
    Polynomial ring with a block order: the first ``n_elim`` variables form
    the eliminated block, ranked above the rest; grevlex inside each block.
    ``tags`` maps each inverse tag to the variable it inverts.
    """
    table: VarTable
    n_elim: int
    tags: tuple = ()

    @classmethod
    def for_table(cls, table, eliminate=(), tagged=True):
        """
        Lay out a ring for polynomials over ``table`` with one inverse tag
        per invertible variable; eliminated variables and all tags go in the
        upper block. Without tags the ring is plain polynomial.
        """
        eliminate = set(eliminate)
        tags = tuple((tag_name(name), name) for name in table.names if tagged and table.is_invertible(name))
        tag_names = {t for t, _ in tags}
        drop = [name for name in table.names if name in eliminate and name not in tag_names]
        keep = [name for name in table.names if name not in eliminate and name not in tag_names]
        names = tuple(drop) + tuple(t for t, _ in tags) + tuple(keep)
        flags = tuple(table.is_invertible(n) for n in drop) + (False,) * len(tags) + \
            tuple(table.is_invertible(n) for n in keep)
        return cls(VarTable(names, flags), len(drop) + len(tags), tags)

    @property
    def nvars(self):
        return len(self.table)

    def kept_table(self):
        return VarTable(self.table.names[self.n_elim:], self.table.invertible[self.n_elim:])

    def eliminated_names(self):
        return self.table.names[:self.n_elim]

    def key_function(self):
        split = self.n_elim

        @lru_cache(maxsize=None)
        def key(exp):
            hi, lo = exp[:split], exp[split:]
            return (sum(hi), tuple(-e for e in reversed(hi)), sum(lo), tuple(-e for e in reversed(lo)))
        return key

    def to_dict(self):
        return {'vars': list(self.table.names), 'invertible': list(self.table.invertible),
                'n_elim': self.n_elim, 'tags': [list(t) for t in self.tags]}


@dataclass
class IdealGens:
    """
    Generators of an ideal in a Laurent ring, understood as saturated with
    respect to every invertible variable.
    """
    table: VarTable
    generators: tuple
    status: str = 'generators'
    eliminated: tuple = ()
    _bases: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def to_dict(self):
        return {
            'table': self.table.to_dict(),
            'status': self.status,
            'eliminated': list(self.eliminated),
            'generators': [p.to_dict() for p in self.generators],
            'text': [str(p) for p in self.generators],
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        table = VarTable(tuple(data['table']['vars']), tuple(data['table']['invertible']))
        gens = tuple(LaurentPoly.from_dict(p, table) for p in data['generators'])
        return cls(table, gens, data.get('status', 'generators'), tuple(data.get('eliminated', ())))


# integer polynomial kernel: dicts {exponent tuple: int}

def _to_internal(p, ring):
    p = p.clear_denominators()
    if p.is_zero():
        return {}
    p = p.embed(ring.table)
    return {exp: int(c) for exp, c in p.terms.items()}


def _from_internal(f, ring, table=None):
    table = table or ring.table
    p = LaurentPoly(ring.table, {e: Fraction(c) for e, c in f.items()})
    return p.embed(table) if table is not ring.table else p


def _content(f):
    g = 0
    for c in f.values():
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _primitive(f, key):
    if not f:
        return f
    g = _content(f)
    lead = f[max(f, key=key)]
    if lead < 0:
        g = -g
    if g == 1:
        return f
    return {e: c // g for e, c in f.items()}


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_exp(a, b):
    return tuple(x - y for x, y in zip(a, b))


class _Engine:
    """
    Buchberger over the integers with content removal, the sugar selection
    strategy and removal of monomial factors in the invertible variables.
    """

    def __init__(self, ring, spair_budget, timeout_s, start=None, pairs_done=0):
        self.ring = ring
        self.key = ring.key_function()
        self.units = tuple(i for i, inv in enumerate(ring.table.invertible) if inv)
        self.spair_budget = spair_budget
        self.timeout_s = timeout_s
        self.pairs_done = pairs_done
        self.start = time.monotonic() if start is None else start

    def lm(self, f):
        return max(f, key=self.key)

    def reduce(self, f, basis, lms, full=True):
        """
        Remainder of f modulo the basis, up to an integer unit.

        Args:
            full (bool): Reduce every term, not only the leading one
        """
        f = dict(f)
        done = {}
        steps = 0
        while f:
            m = self.lm(f)
            c = f[m]
            for g, lg in zip(basis, lms):
                if _divides(lg, m):
                    break
            else:
                if not full:
                    f.update(done)
                    return _primitive(f, self.key)
                done[m] = c
                del f[m]
                continue
            lc = g[lg]
            h = gcd(c, lc)
            a, b = lc // h, c // h
            if a != 1:
                if a == -1:
                    f = {e: -v for e, v in f.items()}
                    done = {e: -v for e, v in done.items()}
                else:
                    f = {e: v * a for e, v in f.items()}
                    done = {e: v * a for e, v in done.items()}
            delta = _sub_exp(m, lg)
            for e, v in g.items():
                k = tuple(x + y for x, y in zip(e, delta))
                s = f.get(k, 0) - b * v
                if s:
                    f[k] = s
                else:
                    f.pop(k, None)
            steps += 1
            if steps % 16 == 0 and f:
                cf = gcd(_content(f), _content(done)) if done else _content(f)
                if cf > 1:
                    f = {e: v // cf for e, v in f.items()}
                    done = {e: v // cf for e, v in done.items()}
        return _primitive(done, self.key)

    def strip(self, f):
        """Divide out the largest monomial in the invertible variables dividing f."""
        if not f or not self.units:
            return f
        shift = [0] * self.ring.nvars
        for i in self.units:
            shift[i] = min(e[i] for e in f)
        if not any(shift):
            return f
        return {_sub_exp(e, shift): c for e, c in f.items()}

    def normal(self, f, basis, lms):
        """Top-reduce and strip until neither changes f."""
        while True:
            f = self.reduce(f, basis, lms, full=False)
            g = self.strip(f)
            if g is f:
                return f
            f = g

    def spoly(self, f, g, lf, lg):
        lcm = _lcm(lf, lg)
        cf, cg = f[lf], g[lg]
        h = gcd(cf, cg)
        mf, mg = cg // h, cf // h
        df, dg = _sub_exp(lcm, lf), _sub_exp(lcm, lg)
        out = {}
        for e, v in f.items():
            k = tuple(x + y for x, y in zip(e, df))
            out[k] = out.get(k, 0) + mf * v
        for e, v in g.items():
            k = tuple(x + y for x, y in zip(e, dg))
            s = out.get(k, 0) - mg * v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return {e: v for e, v in out.items() if v}

    def update(self, basis, lms, sugars, pairs, f, lf, sugar):
        """
        Gebauer-Moeller pair update when f joins the basis.

        ``pairs`` maps (i, j) to (sugar, lcm) and is returned updated.
        """
        t = len(basis)
        kept = {}
        for (i, j), (s, L) in pairs.items():
            if _divides(lf, L) and L != _lcm(lms[i], lf) and L != _lcm(lms[j], lf):
                continue
            kept[(i, j)] = (s, L)
        by_lcm = {}
        for i in range(t):
            by_lcm.setdefault(_lcm(lms[i], lf), []).append(i)
        minimal = []
        for L in sorted(by_lcm, key=self.key):
            if all(not _divides(M, L) for M in minimal):
                minimal.append(L)
        dl = sum(lf)
        for L in minimal:
            coprime = any(L == tuple(x + y for x, y in zip(lms[i], lf)) for i in by_lcm[L])
            if not coprime:
                i = min(by_lcm[L])
                d = sum(L)
                kept[(i, t)] = (max(sugars[i] + d - sum(lms[i]), sugar + d - dl), L)
        basis.append(f)
        lms.append(lf)
        sugars.append(sugar)
        return kept

    def check_budget(self, basis):
        elapsed = time.monotonic() - self.start
        if self.pairs_done > self.spair_budget or elapsed > self.timeout_s:
            raise GroebnerIncomplete(self.pairs_done, elapsed, len(basis))

    def run(self, polys):
        basis, lms, sugars, pairs = [], [], [], {}
        for f in sorted((p for p in polys if p), key=lambda f: self.key(self.lm(f))):
            f = self.normal(self.strip(f), basis, lms)
            if f:
                pairs = self.update(basis, lms, sugars, pairs, f, self.lm(f), max(sum(e) for e in f))
        while pairs:
            (i, j), (sugar, _) = min(pairs.items(), key=lambda item: (item[1][0], self.key(item[1][1]), item[0]))
            del pairs[(i, j)]
            self.pairs_done += 1
            self.check_budget(basis)
            s = self.spoly(basis[i], basis[j], lms[i], lms[j])
            r = self.normal(s, basis, lms) if s else {}
            if r:
                pairs = self.update(basis, lms, sugars, pairs, r, self.lm(r), sugar)
            if self.pairs_done % 500 == 0:
                logger.debug(f"Buchberger: {self.pairs_done} pairs, basis {len(basis)}, queue {len(pairs)}")
        return self.interreduce(self.minimalize(basis, lms))

    def minimalize(self, basis, lms):
        order = sorted(range(len(basis)), key=lambda i: self.key(lms[i]))
        kept = []
        for i in order:
            if all(not _divides(lms[j], lms[i]) for j in kept):
                kept.append(i)
        return [basis[i] for i in kept]

    def interreduce(self, basis):
        lms = [self.lm(f) for f in basis]
        out = []
        for i, f in enumerate(basis):
            others = basis[:i] + basis[i + 1:]
            other_lms = lms[:i] + lms[i + 1:]
            out.append(self.reduce(f, others, other_lms, full=True))
        out = [f for f in out if f]
        out.sort(key=lambda f: self.key(self.lm(f)))
        return out


def _ring_polys(ideal, ring):
    polys = [_to_internal(p, ring) for p in ideal.generators]
    for tag, name in ring.tags:
        i, j = ring.table.index(name), ring.table.index(tag)
        exp = [0] * ring.nvars
        exp[i] = exp[j] = 1
        polys.append({tuple(exp): 1, (0,) * ring.nvars: -1})
    return [p for p in polys if p]


def groebner(ideal, eliminate=(), spair_budget=DEFAULT_SPAIR_BUDGET, timeout_s=DEFAULT_TIMEOUT_S):
    """
    Reduced Groebner basis of the saturated ideal, in the block order with
    ``eliminate`` and the inverse tags above everything else.

    Args:
        ideal (IdealGens): Generators
        eliminate (iterable): Variables placed in the upper block
        spair_budget (int): Maximum number of S-pairs to process
        timeout_s (float): Wall-clock limit in seconds

    Returns:
        IdealGens: The basis over the ring's table (inverse tags included),
            status 'groebner', sorted by leading monomial

    Raises:
        GroebnerIncomplete: When a budget is exhausted
    """
    ring, basis = _basis(ideal, tuple(eliminate), spair_budget, timeout_s)
    return IdealGens(ring.table, tuple(basis), 'groebner', tuple(eliminate))


def _basis(ideal, eliminate, spair_budget, timeout_s, engine=None):
    cache_key = (eliminate, spair_budget, timeout_s)
    if cache_key in ideal._bases:
        return ideal._bases[cache_key]
    ring = RingSpec.for_table(ideal.table, eliminate)
    if engine is None:
        engine = _Engine(ring, spair_budget, timeout_s)
    else:
        engine = _Engine(ring, spair_budget, timeout_s, engine.start, engine.pairs_done)
    basis = engine.run(_ring_polys(ideal, ring))
    elapsed = time.monotonic() - engine.start
    logger.info(f"Groebner basis: {len(basis)} elements, {engine.pairs_done} S-pairs, {elapsed:.2f}s")
    result = (ring, [_from_internal(f, ring) for f in basis])
    ideal._bases[cache_key] = result
    return result


def _linear_pivot(p, drop):
    """
    A name in ``drop`` occurring in p in a single term c*name*m with m a
    monomial in invertible variables, or None.
    """
    table = p.table
    for name in drop:
        i = table.index(name)
        hits = [(exp, c) for exp, c in p.terms.items() if exp[i]]
        if len(hits) != 1 or hits[0][0][i] != 1:
            continue
        exp, c = hits[0]
        if all(not e or k == i or table.invertible[k] for k, e in enumerate(exp)):
            return name, exp, c
    return None


def substitute_linear(polys, drop):
    """
    Remove dropped variables that some generator solves for with a unit
    coefficient: from c*a*m + r = 0 substitute a = -r/(c*m) everywhere else.

    Args:
        polys (list): LaurentPoly generators over one table
        drop (iterable): Names that may be substituted away

    Returns:
        tuple: (generators, substituted names in order)
    """
    gens = [p.clear_denominators() for p in polys if not p.is_zero()]
    remaining = list(drop)
    done = []
    while remaining:
        best = None
        for idx, p in enumerate(gens):
            pivot = _linear_pivot(p, remaining)
            if pivot and (best is None or len(p.terms) < len(gens[best[0]].terms)):
                best = (idx, pivot)
        if best is None:
            break
        idx, (name, exp, c) = best
        p = gens.pop(idx)
        table = p.table
        rest = p - LaurentPoly(table, {exp: c})
        i = table.index(name)
        unit = LaurentPoly(table, {tuple(0 if k == i else e for k, e in enumerate(exp)): c})
        image = -(rest * unit.invert_monomial())
        gens = [q.specialize({name: image}).clear_denominators() for q in gens]
        gens = [q for q in gens if not q.is_zero()]
        remaining.remove(name)
        done.append(name)
        logger.debug(f"Substituted {name} = {image}")
    return gens, tuple(done)


def _free_of(p, count):
    return not any(exp[i] for exp in p.terms for i in range(count))


def _eliminated_gens(ideal, drop, spair_budget, timeout_s):
    """
    Generators of the saturated elimination ideal over the kept variables.

    When no dropped variable is invertible, the saturation only involves
    kept variables and commutes with elimination: the dropped variables
    are removed first without inverse tags, then the result is saturated.
    """
    cache_key = ('eliminated', drop, spair_budget, timeout_s)
    if cache_key in ideal._bases:
        return ideal._bases[cache_key]
    table = ideal.table
    if any(table.is_invertible(n) for n in drop):
        ring, basis = _basis(ideal, drop, spair_budget, timeout_s)
        result = (ring.kept_table(), [p for p in basis if _free_of(p, ring.n_elim)])
        ideal._bases[cache_key] = result
        return result

    gens, substituted = substitute_linear(ideal.generators, drop)
    remaining = tuple(n for n in drop if n not in substituted)
    names = tuple(n for n in table.names if n not in substituted)
    kept_names = tuple(n for n in names if n not in remaining)
    kept = VarTable(kept_names, tuple(table.is_invertible(n) for n in kept_names))
    engine = None
    if remaining and gens:
        ring = RingSpec.for_table(VarTable(names, tuple(table.is_invertible(n) for n in names)),
                                  remaining, tagged=False)
        engine = _Engine(ring, spair_budget, timeout_s)
        polys = [_from_internal(f, ring) for f in engine.run([_to_internal(p, ring) for p in gens])]
        gens = [p for p in polys if _free_of(p, ring.n_elim)]
        logger.info(f"Dropped {len(remaining)} variables with {engine.pairs_done} S-pairs: "
                    f"{len(gens)} generators to saturate")
    gens = [p.embed(kept) for p in gens]
    if gens:
        ring, basis = _basis(IdealGens(kept, tuple(gens)), (), spair_budget, timeout_s, engine)
        gens = [p for p in basis if _free_of(p, ring.n_elim)]
    result = (kept, gens)
    ideal._bases[cache_key] = result
    return result


def eliminate(ideal, drop, spair_budget=DEFAULT_SPAIR_BUDGET, timeout_s=DEFAULT_TIMEOUT_S):
    """
    Elimination ideal of the saturated ideal: its intersection with the
    Laurent ring of the variables not in ``drop``.

    Args:
        ideal (IdealGens): Generators over a table containing ``drop``
        drop (iterable): Names to project away

    Returns:
        IdealGens: Generators over the remaining variables, each cleared of
            monomial factors, status 'eliminated'
    """
    drop = tuple(drop)
    kept, basis = _eliminated_gens(ideal, drop, spair_budget, timeout_s)
    out = []
    seen = set()
    for p in basis:
        q = p.embed(kept).clear_denominators()
        if q.is_constant() and not q.is_zero():
            # the unit ideal
            out = [kept.const(1)]
            break
        if q not in seen:
            seen.add(q)
            out.append(q)
    logger.info(f"Eliminated {len(drop)} variables: {len(out)} generators remain")
    return IdealGens(kept, tuple(out), 'eliminated', drop)


def member(p, ideal, spair_budget=DEFAULT_SPAIR_BUDGET, timeout_s=DEFAULT_TIMEOUT_S):
    """
    Whether ``p`` lies in the saturated ideal.

    Args:
        p (LaurentPoly): Candidate; its variables must belong to the ideal's table
        ideal (IdealGens): The ideal

    Returns:
        bool: True when p reduces to zero
    """
    ring, basis = _basis(ideal, (), spair_budget, timeout_s)
    if p.is_zero():
        return True
    engine = _Engine(ring, spair_budget, timeout_s)
    internal = [_to_internal(b, ring) for b in basis]
    lms = [engine.lm(f) for f in internal]
    return not engine.reduce(_to_internal(p.embed(ideal.table), ring), internal, lms, full=True)


def ideal_equal(first, second, spair_budget=DEFAULT_SPAIR_BUDGET, timeout_s=DEFAULT_TIMEOUT_S):
    """Mutual containment of two saturated ideals over tables with the same names."""
    if set(first.table.names) != set(second.table.names):
        logger.warning(f"Variable sets differ: {first.table.names} vs {second.table.names}")
        return False
    for p in first.generators:
        if not member(p.embed(second.table), second, spair_budget, timeout_s):
            return False
    for p in second.generators:
        if not member(p.embed(first.table), first, spair_budget, timeout_s):
            return False
    return True


def ideal_from(polys, table=None):
    polys = tuple(polys)
    table = table or polys[0].table
    return IdealGens(table, polys)


# numeric cross-check

class _Compiled:
    """A Laurent polynomial frozen into numpy arrays for fast complex evaluation."""

    def __init__(self, p, names):
        index = [p.table.index(n) for n in names]
        items = list(p.terms.items())
        self.exps = np.array([[exp[i] for i in index] for exp, _ in items], dtype=int).reshape(len(items), len(names))
        self.coeffs = np.array([complex(c) for _, c in items], dtype=complex)

    def terms(self, x):
        if not len(self.coeffs):
            return np.zeros(0, dtype=complex)
        return self.coeffs * np.prod(x[None, :] ** self.exps, axis=1)

    def value(self, x):
        return self.terms(x).sum()

    def scale(self, x):
        return np.abs(self.terms(x)).sum()

    def gradient(self, x, unknowns):
        grad = np.zeros(len(unknowns), dtype=complex)
        for col, u in enumerate(unknowns):
            e = self.exps[:, u]
            mask = e != 0
            if not mask.any():
                continue
            shifted = self.exps[mask].copy()
            shifted[:, u] -= 1
            grad[col] = (self.coeffs[mask] * e[mask] * np.prod(x[None, :] ** shifted, axis=1)).sum()
        return grad


def _newton(system, x, unknowns, max_iter=80, tol=1e-12):
    """Damped Gauss-Newton with least-squares steps; returns (x, residual)."""
    def residual(y):
        return np.array([f.value(y) for f in system])

    F = residual(x)
    norm = np.linalg.norm(F)
    for _ in range(max_iter):
        if norm < tol:
            break
        J = np.array([f.gradient(x, unknowns) for f in system])
        step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        t = 1.0
        for _ in range(12):
            y = x.copy()
            y[unknowns] += t * step
            with np.errstate(all='ignore'):
                Fy = residual(y)
            ny = np.linalg.norm(Fy)
            if np.isfinite(ny) and ny < norm:
                break
            t /= 2
        else:
            return x, norm
        x, F, norm = y, Fy, ny
    return x, norm


def numeric_oracle(presentation, eliminated, trials=5, seed=0, restarts=20, tol=1e-6,
                   lam_bounds=(1e-6, 1e6), corrupt=False):
    """
    Check eliminated generators against random points of the augmentation variety.

    For each trial, g and the nu's are fixed at random complex values and the
    relations are solved for the a_ij and the L's by Gauss-Newton from random
    starts. Every eliminated generator is then evaluated at the solution.

    Args:
        presentation (Presentation): Relations over the full table
        eliminated (IdealGens): Generators in g, nu, L
        trials (int): Number of random parameter points
        seed (int): Seed for numpy's generator
        restarts (int): Newton starts per trial
        tol (float): Residual threshold, relative to the size of the terms
        lam_bounds (tuple): Accepted range for |L|
        corrupt (bool): Add 1 to every generator (negative control)

    Returns:
        pandas.DataFrame: One row per trial
    """
    rng = np.random.default_rng(seed)
    table = presentation.table
    names = list(table.names)
    unknown_names = [n for n in names if n.startswith('a') or n.startswith('L')]
    unknowns = np.array([names.index(n) for n in unknown_names], dtype=int)
    lam_idx = [names.index(n) for n in names if n.startswith('L')]
    system = [_Compiled(p, names) for p in presentation.generators]
    checks = []
    for p in eliminated.generators:
        q = p + 1 if corrupt else p
        checks.append(_Compiled(q.embed(table) if q.table != table else q, names))

    rows = []
    for trial in range(trials):
        row = {'trial': trial, 'converged': False, 'starts': 0, 'max_residual': np.nan,
               'max_scaled_residual': np.nan, 'passed': False}
        params = {}
        for n in names:
            if n not in unknown_names:
                params[n] = rng.uniform(0.6, 1.4) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        for start in range(restarts):
            x = np.zeros(len(names), dtype=complex)
            for n, v in params.items():
                x[names.index(n)] = v
            x[unknowns] = rng.normal(size=len(unknowns)) + 1j * rng.normal(size=len(unknowns))
            with np.errstate(all='ignore'):
                x, norm = _newton(system, x, unknowns)
            row['starts'] = start + 1
            if not norm < 1e-10:
                continue
            mags = np.abs(x[lam_idx])
            if (mags < lam_bounds[0]).any() or (mags > lam_bounds[1]).any():
                continue
            values = np.array([abs(c.value(x)) for c in checks]) if checks else np.zeros(1)
            scales = np.array([max(1.0, c.scale(x)) for c in checks]) if checks else np.ones(1)
            row['converged'] = True
            row['max_residual'] = float(values.max())
            row['max_scaled_residual'] = float((values / scales).max())
            row['passed'] = bool((values / scales).max() < tol)
            break
        if not row['converged']:
            logger.warning(f"Numeric oracle trial {trial}: no solution after {restarts} starts")
        rows.append(row)
    return pd.DataFrame(rows, columns=['trial', 'converged', 'starts', 'max_residual',
                                       'max_scaled_residual', 'passed'])
