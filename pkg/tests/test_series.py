import json
import random
from fractions import Fraction as Q

import pytest

from orthoforms import builtin_lattice
from orthoforms.series import (
    Monomial,
    SeriesOverflowError,
    TruncatedSeries,
    WeightedSeries,
    ZeroSeriesError,
    expand_product,
    jacobi_support_class,
    jacobian,
    log_derivative_residual,
    monomial,
    one,
    principal_block_residual,
    series_from_json,
    series_to_json,
    syzygy_sum,
    zero,
)
from orthoforms.weyl import WeylVector

RECT = (Q(4), Q(4))


def key(a, l, t):
    return (Q(a), tuple(Q(x) for x in l), Q(t))


def series(rank, entries, rect=RECT, prefactor=None):
    return TruncatedSeries(rank, entries, rect, prefactor)


def random_series(rng, rank, rect=RECT, nterms=5, boundary_regular=False, unit=False):
    zero_l = tuple(Q(0) for _ in range(rank))
    terms = {}
    if unit:
        terms[key(0, zero_l, 0)] = Q(rng.randint(1, 5))
    for _ in range(nterms):
        a, t = rng.randint(0, 3), rng.randint(0, 3)
        if boundary_regular and (a == 0 or t == 0):
            l = zero_l
        else:
            l = tuple(Q(rng.randint(-2, 2)) for _ in range(rank))
        c = Q(rng.randint(-4, 4), rng.randint(1, 3))
        k = key(a, l, t)
        terms[k] = terms.get(k, Q(0)) + c
    return TruncatedSeries(rank, {k: v for k, v in terms.items() if v}, rect)


class TestArithmetic:
    def test_mul_identity(self):
        rng = random.Random(0)
        x = random_series(rng, 2)
        assert x * one(2, RECT) == x

    def test_monomial_product(self):
        q1 = monomial(1, RECT, 1, (0,), 0)
        xi1 = monomial(1, RECT, 0, (0,), 1)
        assert dict((q1 * xi1).terms) == {key(1, (0,), 1): Q(1)}

    def test_geometric_cancellation(self):
        rect = (Q(5), Q(5))
        one_minus_q = series(1, {key(0, (0,), 0): 1, key(1, (0,), 0): -1}, rect)
        geo = series(1, {key(a, (0,), 0): 1 for a in range(6)}, rect)
        assert one_minus_q * geo == one(1, rect)

    def test_ring_axioms_random(self):
        rng = random.Random(3)
        for _ in range(15):
            x = random_series(rng, 1)
            y = random_series(rng, 1)
            z = random_series(rng, 1)
            assert x + y == y + x
            assert (x + y) + z == x + (y + z)
            assert x * y == y * x
        for _ in range(8):
            x = random_series(rng, 2, nterms=3)
            y = random_series(rng, 2, nterms=3)
            z = random_series(rng, 2, nterms=3)
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z

    def test_prefactor_merging(self):
        x = series(1, {key(0, (0,), 0): 1}, prefactor=Monomial(Q(2), (Q(0),), Q(1)))
        y = series(1, {key(0, (0,), 0): 1}, prefactor=Monomial(Q(1), (Q(1),), Q(0)))
        total = x + y
        absolute = total.absolute_terms()
        assert absolute[key(2, (0,), 1)] == 1
        assert absolute[key(1, (1,), 0)] == 1

    def test_rank_mismatch(self):
        with pytest.raises(ValueError):
            one(1, RECT) + one(2, RECT)

    def test_denominator_validation(self):
        with pytest.raises(ValueError):
            TruncatedSeries(1, {key(Q(1, 7), (0,), 0): 1}, RECT)


class TestDerive:
    def test_examples(self):
        q3 = monomial(1, RECT, 3, (0,), 0)
        assert dict(q3.derive("tau").terms) == {key(3, (0,), 0): Q(3)}
        assert one(1, RECT).derive("omega").is_zero
        m = series(1, {key(1, (Q(1, 2),), 1): 1})
        assert dict(m.derive("z1").terms) == {key(1, (Q(1, 2),), 1): Q(1, 2)}

    def test_prefactor_participates(self):
        x = series(1, {key(0, (0,), 0): 1}, prefactor=Monomial(Q(3), (Q(0),), Q(5)))
        assert dict(x.derive("tau").terms) == {key(0, (0,), 0): Q(3)}
        assert dict(x.derive("omega").terms) == {key(0, (0,), 0): Q(5)}

    def test_product_rule_and_commutation(self):
        rng = random.Random(9)
        for _ in range(10):
            f = random_series(rng, 2, nterms=4)
            g = random_series(rng, 2, nterms=4)
            for axis in ("tau", "z1", "z2", "omega"):
                assert (f * g).derive(axis) == f.derive(axis) * g + f * g.derive(axis)
            assert f.derive("tau").derive("omega") == f.derive("omega").derive("tau")
            assert f.derive("z1").derive("z2") == f.derive("z2").derive("z1")

    def test_invalid_axis(self):
        with pytest.raises(ValueError):
            one(1, RECT).derive("z2")
        with pytest.raises(ValueError):
            one(1, RECT).derive("nu")


class TestLeadingOrderAndInvert:
    def test_leading(self):
        x = series(1, {key(2, (0,), 3): 1, key(5, (0,), 3): 1})
        assert x.leading_order() == (2, 3)

    def test_prefactor_included(self):
        x = series(
            1, {key(0, (0,), 0): 7}, prefactor=Monomial(Q(1, 2), (Q(0),), Q(1, 2))
        )
        assert x.leading_order() == (Q(1, 2), Q(1, 2))

    def test_zero_series_signals(self):
        with pytest.raises(ZeroSeriesError, match="rectangle order"):
            zero(1, RECT).leading_order()

    def test_invert_geometric(self):
        g = series(1, {key(0, (0,), 0): 1, key(1, (0,), 0): -1})
        inv = g.invert()
        assert g * inv == one(1, RECT)

    def test_invert_requires_unit(self):
        with pytest.raises(ValueError):
            series(1, {key(0, (0,), 0): 2}).invert()

    def test_invert_blocks_boundary_zeta(self):
        g = series(1, {key(0, (0,), 0): 1, key(0, (1,), 0): -1})
        with pytest.raises(ValueError, match="boundary"):
            g.invert()


def weyl(rank, a=0, c=0):
    return WeylVector(Q(a), tuple(Q(0) for _ in range(rank)), Q(c))


class TestExpandProduct:
    def test_empty_input_gives_one(self):
        g = expand_product({}, weyl(1), (Q(2), Q(2)), 1)
        assert dict(g.terms) == {key(0, (0,), 0): Q(1)}

    def test_single_boundary_factor_slice(self):
        # the (a, t) = (0, 0) slice of the product is exactly 1 - zeta^(l0)
        g = expand_product({(0, (Q(-1),)): 1}, weyl(1), (Q(2), Q(2)), 1)
        slice00 = {k: v for k, v in g.terms.items() if k[0] == 0 and k[2] == 0}
        assert slice00 == {key(0, (0,), 0): Q(1), key(0, (-1,), 0): Q(-1)}

    def test_negative_boundary_exponent_rejected(self):
        with pytest.raises(ValueError, match="toric boundary"):
            expand_product({(0, (Q(-1),)): -1}, weyl(1), (Q(2), Q(2)), 1)

    def test_principal_part_gives_debt_terms(self):
        # factors (1 - q^n)^24, (1 - xi^m)^24 and (1 - q^-1 xi)
        coeffs = {(-1, (Q(0),)): 1, (0, (Q(0),)): 24}
        g = expand_product(coeffs, weyl(1, a=1), (Q(2), Q(2)), 1)
        assert g.terms[key(-1, (0,), 1)] == -1
        assert g.terms[key(1, (0,), 0)] == -24

    def test_moderate_boundary_block_succeeds(self):
        coeffs = {}
        for i in range(4):
            for s in (1, -1):
                l = [Q(0)] * 4
                l[i] = Q(s)
                coeffs[(0, tuple(l))] = 1
        g = expand_product(coeffs, weyl(4), (Q(1), Q(1)), 4)
        assert g.terms[(Q(0), (Q(0),) * 4, Q(0))] == 1

    def test_overflow_guard_triggers(self):
        coeffs = {}
        for i in range(10):
            coeffs[(0, (Q(-i - 1),))] = 3
            coeffs[(0, (Q(i + 1),))] = 3
        with pytest.raises(SeriesOverflowError):
            expand_product(coeffs, weyl(1), (Q(1), Q(1)), 1, term_cap=50)


class TestLogDerivativeOracle:
    def small_dataset(self):
        # A2 root data: f(0, l) = 1 on six dual roots, k solved to 9
        from orthoforms import build_dual_set, qzero_from_dual_sets, realize, solve_weight, weyl_vector

        comp = realize("A", 2, 1)
        phi = qzero_from_dual_sets(comp.lattice, [build_dual_set(comp)])
        phi = phi.with_weight(solve_weight(phi))
        return phi, weyl_vector(phi)

    def test_identity_holds(self):
        phi, wv = self.small_dataset()
        res = log_derivative_residual(
            phi.coefficient_table(), wv, (Q(2), Q(2)), phi.lattice.rank
        )
        assert res.is_zero

    def test_factorization_holds(self):
        phi, wv = self.small_dataset()
        res = principal_block_residual(
            phi.coefficient_table(), wv, (Q(2), Q(2)), phi.lattice.rank
        )
        assert res.is_zero

    def test_identity_detects_tampered_expansion(self):
        # the two sides agree for a correct expansion; flipping one stored
        # coefficient of the expansion must break the cleared identity
        from orthoforms.series import _binomial_series, product_factors

        phi, wv = self.small_dataset()
        table = {k: v for k, v in phi.coefficient_table().items() if k[0] >= 0}
        rect = (Q(2), Q(2))
        rank = phi.lattice.rank
        g0 = expand_product(table, wv, rect, rank)
        xi_factors = [f for f in product_factors(table, rect, rank) if f.m > 0]
        p = one(rank, rect)
        for fac in xi_factors:
            p = p * _binomial_series(fac, rank, rect, 24)
        rhs_bracket = p.scale(wv.c)
        for fac in xi_factors:
            u = monomial(rank, rect, fac.n, fac.l, fac.m)
            geo = zero(rank, rect)
            j = 0
            while j * fac.m <= rect[1]:
                geo = geo + monomial(
                    rank, rect, j * fac.n, tuple(j * x for x in fac.l), j * fac.m
                )
                j += 1
            rhs_bracket = rhs_bracket + (u * (p * geo)).scale(Q(-fac.m * fac.exponent))
        assert (g0.derive("omega") * p - g0 * rhs_bracket).is_zero
        tampered_terms = dict(g0.terms)
        bump = (Q(1), tuple(Q(0) for _ in range(rank)), Q(1))
        tampered_terms[bump] = tampered_terms.get(bump, Q(0)) + 1
        g_bad = TruncatedSeries(rank, tampered_terms, g0.rect, g0.prefactor, g0.den)
        assert not (g_bad.derive("omega") * p - g_bad * rhs_bracket).is_zero


class TestJacobian:
    def monomials(self):
        return [
            WeightedSeries(one(1, RECT), 1),
            WeightedSeries(monomial(1, RECT, 1, (0,), 0), 1),
            WeightedSeries(monomial(1, RECT, 0, (1,), 0), 1),
            WeightedSeries(monomial(1, RECT, 0, (0,), 1), 1),
        ]

    def test_monomial_example(self):
        j = jacobian(self.monomials())
        assert dict(j.terms) == {key(1, (1,), 1): Q(1)}

    def test_duplicate_column_vanishes(self):
        forms = self.monomials()
        j = jacobian([forms[0], forms[0], forms[2], forms[3]])
        assert j.is_zero

    def test_constant_weight_zero_vanishes(self):
        forms = self.monomials()
        forms[0] = WeightedSeries(one(1, RECT), 0)
        # weight-zero constant: first row entry 0, derivative rows 0
        assert jacobian(forms).is_zero

    def test_form_count_enforced(self):
        with pytest.raises(ValueError, match="forms"):
            jacobian(self.monomials()[:3])

    def test_rank_mismatch(self):
        bad = self.monomials()[:3] + [WeightedSeries(one(2, RECT), 1)]
        with pytest.raises(ValueError):
            jacobian(bad)

    def test_antisymmetry(self):
        rng = random.Random(21)
        for s in (1, 2):
            forms = [
                WeightedSeries(random_series(rng, s, nterms=4), rng.randint(1, 6))
                for _ in range(s + 3)
            ]
            w = 3
            f0 = WeightedSeries(forms[0].series, w)
            f1 = WeightedSeries(forms[1].series, w)
            rest = forms[2:]
            assert jacobian([f0, f1] + rest) == jacobian([f1, f0] + rest).scale(-1)

    def test_algebraic_dependence_vanishes(self):
        rng = random.Random(22)
        for s in (1, 2):
            f = random_series(rng, s, nterms=3, unit=True)
            others = [
                WeightedSeries(random_series(rng, s, nterms=3), rng.randint(1, 5))
                for _ in range(s + 1)
            ]
            forms = [WeightedSeries(f, 2), WeightedSeries(f * f, 4)] + others
            assert jacobian(forms).is_zero

    def test_leading_order_bound(self):
        rng = random.Random(23)
        nonzero = 0
        for s in (1, 2):
            for _ in range(10):
                forms = [
                    WeightedSeries(
                        random_series(rng, s, nterms=4, boundary_regular=True, unit=True),
                        rng.randint(1, 6),
                    )
                    for _ in range(s + 3)
                ]
                j = jacobian(forms)
                if not j.is_zero:
                    nonzero += 1
                    lead = j.leading_order()
                    assert lead[0] >= s + 1 and lead[1] >= s + 1
        assert nonzero >= 5


class TestSyzygy:
    def test_monomials(self):
        rng = random.Random(31)
        for s in (1, 2):
            forms = []
            for _ in range(s + 4):
                a, t = rng.randint(0, 2), rng.randint(0, 2)
                l = tuple(Q(rng.randint(-1, 1)) for _ in range(s))
                forms.append(
                    WeightedSeries(monomial(s, RECT, a, l, t), rng.randint(1, 5))
                )
            assert syzygy_sum(forms).is_zero

    def test_duplicate_forms(self):
        rng = random.Random(32)
        f = random_series(rng, 1, nterms=3)
        forms = [WeightedSeries(f, 2)] * 2 + [
            WeightedSeries(random_series(rng, 1, nterms=3), rng.randint(1, 4))
            for _ in range(3)
        ]
        assert syzygy_sum(forms).is_zero

    def test_random_dense(self):
        rng = random.Random(33)
        for _ in range(5):
            forms = [
                WeightedSeries(random_series(rng, 1, nterms=4), rng.randint(1, 6))
                for _ in range(5)
            ]
            assert syzygy_sum(forms).is_zero

    def test_form_count(self):
        with pytest.raises(ValueError):
            syzygy_sum([WeightedSeries(one(1, RECT), 1)] * 4)


class TestSupportClass:
    A1 = builtin_lattice("A1")

    def test_constant_is_holomorphic(self):
        assert jacobi_support_class([(0, (0,))], self.A1, 1) == "holomorphic"

    def test_positive_index_is_cusp(self):
        assert jacobi_support_class([(1, (0,))], self.A1, 1) == "cusp"

    def test_weak_but_not_holomorphic(self):
        assert jacobi_support_class([(0, (1,))], self.A1, 1) == "weak"

    def test_weakly_holomorphic(self):
        assert jacobi_support_class([(-1, (0,))], self.A1, 1) == "weakly-holomorphic"


class TestJson:
    def test_round_trip(self):
        rng = random.Random(41)
        x = random_series(rng, 2, nterms=6)
        x = TruncatedSeries(
            2, x.terms, x.rect, Monomial(Q(31), (Q(1, 2), Q(0)), Q(30)), x.den
        )
        doc = json.loads(json.dumps(series_to_json(x)))
        assert series_from_json(doc) == x

    def test_schema_fields(self):
        doc = series_to_json(one(1, RECT))
        assert doc["rank"] == 1 and doc["den"] == 24
        assert doc["prefactor"]["A"] == "0/1"
        assert doc["rect"] == ["4/1", "4/1"]
