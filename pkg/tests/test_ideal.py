import pytest
import sympy

from braid import BraidWord
from checks import MarkovCheck
from ideal import (
    GroebnerIncomplete, IdealGens, RingSpec, eliminate, groebner, ideal_equal, ideal_from, member,
    numeric_oracle, substitute_linear,
)
from models import RunConfig
from ngalg import augmentation_ideal, relation_matrices, relations
from poly import VarTable, from_sympy
from report import validate_oracle

XY = VarTable.build(polynomial=('x', 'y'))
UNKNOT = BraidWord(1, ())
TREFOIL = BraidWord(2, (1, 1, 1))
HOPF = BraidWord(2, (1, 1))
FIGURE_EIGHT = BraidWord(3, (1, -2, 1, -2))


def presentation_ideal(b, **kwargs):
    pres = relations(b, **kwargs)
    return pres, ideal_from(pres.generators, pres.table)


def test_redundant_generator_disappears():
    x = VarTable.build(polynomial=('x',)).var('x')
    basis = groebner(ideal_from([x ** 2 - 1, x - 1]))
    assert basis.generators == (x - 1,)
    assert basis.status == 'groebner'


def test_inverse_tag_is_forced():
    table = VarTable.build(invertible=('nu',))
    basis = groebner(ideal_from([table.var('nu') - 2]))
    t = basis.table.var('t_nu')
    assert 2 * t - 1 in basis.generators
    assert basis.table.var('nu') - 2 in basis.generators


def test_grevlex_basis_agrees_with_sympy():
    x, y = XY.var('x'), XY.var('y')
    gens = [x ** 3 - 2 * x * y, x ** 2 * y + x - 2 * y ** 2]
    ours = set(groebner(ideal_from(gens)).generators)
    assert ours == {x ** 2, x * y, 2 * y ** 2 - x}

    sx, sy = sympy.symbols('x y')
    theirs = sympy.groebner([sx ** 3 - 2 * sx * sy, sx ** 2 * sy + sx - 2 * sy ** 2], sx, sy, order='grevlex')
    assert {from_sympy(p, XY, (sx, sy)).clear_denominators() for p in theirs.exprs} == ours


def test_basis_reduces_its_inputs():
    x, y = XY.var('x'), XY.var('y')
    ideal = ideal_from([x ** 2 + 2 * x * y ** 2, x * y + 2 * y ** 3 - 1])
    for p in ideal.generators:
        assert member(p, ideal)
    assert member(ideal.generators[0] * y + ideal.generators[1] * x, ideal)


def test_groebner_is_idempotent():
    _, ideal = presentation_ideal(UNKNOT)
    once = groebner(ideal)
    twice = groebner(ideal_from(once.generators, once.table))
    assert twice.generators == once.generators
    assert twice.table == once.table


def test_ring_layout_puts_tags_and_dropped_names_first():
    table = VarTable.build(invertible=('g', 'nu'), polynomial=('a12',))
    ring = RingSpec.for_table(table, ['a12'])
    assert ring.table.names == ('a12', 't_g', 't_nu', 'g', 'nu')
    assert ring.n_elim == 3
    assert ring.kept_table().names == ('g', 'nu')


def test_eliminate_linear_substitution():
    table = VarTable.build(invertible=('g', 'nu', 'L'), polynomial=('a',))
    a, g, nu, L = (table.var(n) for n in ('a', 'g', 'nu', 'L'))
    result = eliminate(ideal_from([a - nu, a * L - g]), ['a'])
    assert result.status == 'eliminated'
    assert result.table.names == ('g', 'nu', 'L')
    expected = result.table.var('nu') * result.table.var('L') - result.table.var('g')
    assert result.generators == (expected,)


def test_substitute_linear_needs_a_unit_coefficient():
    table = VarTable.build(invertible=('g', 'nu'), polynomial=('a', 'b'))
    a, b, g, nu = (table.var(n) for n in ('a', 'b', 'g', 'nu'))
    gens, done = substitute_linear([g * a - nu, a * b - 1], ['a', 'b'])
    assert done == ('a', 'b')
    assert gens == []
    gens, done = substitute_linear([(g + 1) * a - nu, a * b - g], ['a'])
    assert done == ()
    assert len(gens) == 2


def test_eliminate_without_linear_pivots():
    table = VarTable.build(invertible=('nu',), polynomial=('a',))
    a, nu = table.var('a'), table.var('nu')
    result = eliminate(ideal_from([a ** 2 - nu, a ** 3 - nu ** 2]), ['a'])
    # a = nu^2 / nu = nu, so nu^2 = nu and nu is a unit
    assert result.generators == (result.table.var('nu') - 1,)


def test_eliminate_unknot_keeps_its_relation():
    pres, ideal = presentation_ideal(UNKNOT)
    result = eliminate(ideal, pres.eliminated())
    assert result.generators == pres.generators


def test_membership_uses_units():
    table = VarTable.build(invertible=('nu', 'L'))
    nu, L = table.var('nu'), table.var('L')
    assert member(table.const(1), ideal_from([nu - 1, nu + 1]))
    assert not member(nu + 1, ideal_from([nu - 1]))
    assert member(nu - 1, ideal_from([L * nu ** 2 * (nu - 1)]))


def test_ideal_equality():
    table = VarTable.build(invertible=('nu',), polynomial=('x',))
    nu, x = table.var('nu'), table.var('x')
    assert ideal_equal(ideal_from([x - nu, nu ** 2 - 1]), ideal_from([x ** 2 - 1, x - nu]))
    assert not ideal_equal(ideal_from([x - nu]), ideal_from([x + nu]))
    other = VarTable.build(invertible=('mu',)).var('mu')
    assert not ideal_equal(ideal_from([nu - 1]), ideal_from([other - 1]))


def test_budget_exhaustion_is_reported():
    x, y = XY.var('x'), XY.var('y')
    with pytest.raises(GroebnerIncomplete) as err:
        groebner(ideal_from([x * y - 1, x ** 2 - y]), spair_budget=0)
    assert err.value.pairs == 1


def test_ideal_json():
    pres, ideal = presentation_ideal(HOPF)
    again = IdealGens.from_dict(ideal.to_dict())
    assert again.generators == ideal.generators
    assert again.table == ideal.table


def test_unknot_first_relation_family_is_redundant():
    mats = relation_matrices(UNKNOT)
    _, ideal = presentation_ideal(UNKNOT)
    for _, _, entry in mats['ourCH1'].entries():
        assert member(entry, ideal)


@pytest.mark.slow
def test_first_relation_family_is_redundant_for_knots():
    mats = relation_matrices(TREFOIL)
    _, ideal = presentation_ideal(TREFOIL)
    for _, _, entry in mats['ourCH1'].entries():
        assert member(entry, ideal)


@pytest.mark.slow
def test_first_relation_family_is_needed_for_links():
    mats = relation_matrices(HOPF)
    _, emitted = presentation_ideal(HOPF)
    _, without = presentation_ideal(HOPF, include_ch1=False)
    entries = [entry for _, _, entry in mats['ourCH1'].entries() if not entry.is_zero()]
    assert entries
    assert all(member(entry, emitted) for entry in entries)
    assert not all(member(entry, without) for entry in entries)


@pytest.mark.slow
def test_eliminated_generators_lie_in_the_input_ideal():
    pres, result = augmentation_ideal(TREFOIL)
    ideal = ideal_from(pres.generators, pres.table)
    assert result.table.names == ('g', 'nu', 'L')
    for p in result.generators:
        assert member(p.embed(pres.table), ideal)


# numeric oracle

def test_oracle_on_unknot():
    pres, ideal = presentation_ideal(UNKNOT)
    result = eliminate(ideal, pres.eliminated())
    frame = numeric_oracle(pres, result, trials=5, seed=1)
    assert len(frame) == 5
    assert frame['converged'].all()
    assert frame['passed'].all()
    assert validate_oracle(frame)['valid']


def test_oracle_negative_control_on_unknot():
    pres, ideal = presentation_ideal(UNKNOT)
    result = eliminate(ideal, pres.eliminated())
    frame = numeric_oracle(pres, result, trials=5, seed=1, corrupt=True)
    assert frame['converged'].all()
    assert not frame['passed'].any()
    assert (frame['max_residual'] > 1e-2).all()


@pytest.mark.slow
def test_oracle_on_trefoil():
    pres, result = augmentation_ideal(TREFOIL)
    frame = numeric_oracle(pres, result, trials=100, seed=3)
    check = validate_oracle(frame)
    assert check['valid'], check['errors']
    corrupted = numeric_oracle(pres, result, trials=100, seed=3, corrupt=True)
    bad = corrupted[corrupted['converged']]
    assert (bad['max_residual'] > 1e-2).mean() >= 0.9


# Markov invariance

@pytest.mark.slow
def test_markov_invariance_of_trefoil_ideal():
    result = MarkovCheck(RunConfig(timeout_s=300.0)).run(TREFOIL, control=FIGURE_EIGHT)
    assert result['status'] == 'passed', result['rows']
    assert len(result['rows']) == 6
    assert result['rows'][-1]['equal'] is False


# augmentation ideals

def unknot_ideal():
    pres, ideal = presentation_ideal(UNKNOT)
    return eliminate(ideal, pres.eliminated())


@pytest.mark.parametrize("sign", [1, -1])
def test_stabilized_unknot_has_the_unknot_ideal(sign):
    _, result = augmentation_ideal(BraidWord(2, (sign,)))
    assert result.table.names == ('g', 'nu', 'L')
    assert ideal_equal(result, unknot_ideal())


@pytest.mark.parametrize("sign", [1, -1])
def test_opposite_lambda_sign_breaks_stabilization(sign):
    _, result = augmentation_ideal(BraidWord(2, (sign,)), lambda_sign=1)
    assert not ideal_equal(result, unknot_ideal())


def test_corner_shift_agrees_with_direct_elimination():
    b = BraidWord(2, (1,))
    pres, ideal = presentation_ideal(b)
    direct = eliminate(ideal, pres.eliminated())
    _, shifted = augmentation_ideal(b)
    assert ideal_equal(direct, shifted)


@pytest.mark.slow
def test_trefoil_augmentation_polynomial():
    _, result = augmentation_ideal(TREFOIL)
    table = result.table
    g, nu, L = table.var('g'), table.var('nu'), table.var('L')
    m = nu ** -2
    c = nu ** 2 * g ** -2
    beta = m - c
    corner = -(g ** 3) * nu ** -6 * L ** -1
    expected = ((1 - m) * corner ** 2
                + g ** 2 * nu ** -4 * (2 - 2 * m + beta + beta ** 2) * corner
                + g ** 4 * nu ** -8 * (1 - c))
    assert ideal_equal(result, ideal_from([expected.clear_denominators()]))
