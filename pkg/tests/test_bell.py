import itertools
import math

import numpy as np
import pytest

from merminlab.bell import (
    BellExpression,
    BellTerm,
    DeterministicStrategy,
    all_strategies,
    correlator,
    evaluate_quantum,
    lhv_bound,
    mermin_closed_form,
    mermin_expression,
    nlwi_certificate,
    parity_contradiction_check,
)
from merminlab.hilbert import ghz_state
from merminlab.observables import SettingsTable, bloch_observable, zheng_settings


class TestMerminExpression:
    def test_term_structure(self):
        expr = mermin_expression()
        assert len(expr.terms) == 4
        assert tuple(t.coefficient for t in expr.terms) == (1, -1, -1, -1)
        assert tuple(t.choices for t in expr.terms) == ("EEE", "EUU", "UEU", "UUE")

    def test_cached_lhv_bound(self):
        assert mermin_expression().lhv_bound == 2

    def test_inconsistent_bound_rejected(self):
        terms = mermin_expression().terms
        with pytest.raises(ValueError):
            BellExpression(terms, lhv_bound=3.0)

    def test_bad_term_rejected(self):
        with pytest.raises(ValueError):
            BellTerm(1.0, "EU")
        with pytest.raises(ValueError):
            BellTerm(1.0, "EUX")


class TestClosedForm:
    @pytest.mark.parametrize(
        "theta,expected",
        [(math.pi / 4, 4.0), (0.0, -1.0), (math.pi / 6, 2.75)],
    )
    def test_reference_values(self, theta, expected):
        assert mermin_closed_form(theta) == pytest.approx(expected, abs=1e-12)

    def test_algebraic_identity(self):
        # Same curve as 4 - 5 cos^2(2 theta); verified, not assumed.
        for theta in np.linspace(0.0, math.pi / 2, 500):
            expected = 4.0 - 5.0 * math.cos(2 * theta) ** 2
            assert abs(mermin_closed_form(float(theta)) - expected) <= 1e-12


class TestEvaluateQuantum:
    @pytest.mark.parametrize(
        "theta,expected",
        [(math.pi / 4, 4.0), (0.0, -1.0), (math.pi / 6, 2.75)],
    )
    def test_reference_values(self, theta, expected):
        value = evaluate_quantum(
            mermin_expression(), ghz_state(theta, 3), zheng_settings(theta)
        )
        assert value == pytest.approx(expected, abs=1e-10)

    def test_matches_closed_form_on_dense_grid(self):
        expr = mermin_expression()
        for theta in np.linspace(0.0, math.pi / 2, 500):
            t = float(theta)
            value = evaluate_quantum(expr, ghz_state(t, 3), zheng_settings(t))
            assert abs(value - mermin_closed_form(t)) <= 1e-10

    def test_bounded_by_coefficient_sum(self):
        rng = np.random.default_rng(3)
        expr = mermin_expression()
        for _ in range(10):
            parties = []
            for _ in range(3):
                pair = []
                for _ in range(2):
                    v = rng.normal(size=3)
                    v /= np.linalg.norm(v)
                    pair.append(bloch_observable((float(v[0]), float(v[1]), float(v[2]))))
                parties.append(tuple(pair))
            table = SettingsTable(tuple(parties))
            theta = float(rng.uniform(0, math.pi / 2))
            value = evaluate_quantum(expr, ghz_state(theta, 3), table)
            assert abs(value) <= 4.0 + 1e-12

    def test_party_permutation_invariance(self):
        # The state is symmetric under particle exchange and the Mermin
        # terms permute among themselves, so permuting the table's party
        # slots leaves the value unchanged.
        rng = np.random.default_rng(17)
        expr = mermin_expression()
        parties = []
        for _ in range(3):
            pair = []
            for _ in range(2):
                v = rng.normal(size=3)
                v /= np.linalg.norm(v)
                pair.append(bloch_observable((float(v[0]), float(v[1]), float(v[2]))))
            parties.append(tuple(pair))
        state = ghz_state(0.52, 3)
        reference = evaluate_quantum(expr, state, SettingsTable(tuple(parties)))
        for perm in itertools.permutations(range(3)):
            permuted = SettingsTable(tuple(parties[i] for i in perm))
            assert evaluate_quantum(expr, state, permuted) == pytest.approx(
                reference, abs=1e-12
            )


class TestLhvBound:
    def test_mermin_bound_is_exactly_two(self):
        result = lhv_bound(mermin_expression())
        assert result.bound == 2
        assert isinstance(result.bound, int)

    def test_single_term_bound(self):
        expr = BellExpression((BellTerm(1.0, "EEE"),))
        assert lhv_bound(expr).bound == 1

    def test_maximizer_count(self):
        result = lhv_bound(mermin_expression())
        assert len(result.maximizers) == 32
        assert len(result.maximizers) % 2 == 0
        for strategy in result.maximizers:
            assert strategy.value(mermin_expression()) == 2

    def test_strategy_values_are_even_and_never_four(self):
        expr = mermin_expression()
        values = {s.value(expr) for s in all_strategies()}
        assert values == {-2, 2}
        for v in values:
            assert isinstance(v, int) and v % 2 == 0 and abs(v) <= 4
        assert 4 not in values

    def test_enumeration_size(self):
        assert len(list(all_strategies())) == 64

    def test_strategy_validation(self):
        with pytest.raises(ValueError):
            DeterministicStrategy(e=(1, 1, 0), u=(1, 1, 1))


class TestParityCheck:
    def test_exhaustive_truth_table(self):
        true_patterns = [
            values
            for values in itertools.product((1, -1), repeat=3)
            if parity_contradiction_check(values)
        ]
        assert len(true_patterns) == 4
        for values in itertools.product((1, -1), repeat=3):
            assert parity_contradiction_check(values) == (math.prod(values) == -1)

    def test_reference_patterns(self):
        assert parity_contradiction_check((-1, -1, -1))
        assert not parity_contradiction_check((1, 1, 1))
        assert not parity_contradiction_check((-1, -1, 1))

    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            parity_contradiction_check((0, 1, 1))
        with pytest.raises(ValueError):
            parity_contradiction_check((1, 1))


class TestNlwiCertificate:
    def test_valid_at_maximal_entanglement(self):
        theta = math.pi / 4
        cert = nlwi_certificate(ghz_state(theta, 3), zheng_settings(theta), tol=1e-10)
        assert cert is not None and cert.valid
        assert cert.signs == (1, -1, -1, -1)
        assert cert.product_values == (-1, -1, -1)
        assert not cert.lhv_reproducible
        assert cert.transcript
        for value in cert.correlators:
            assert abs(abs(value) - 1.0) <= 1e-10

    def test_none_away_from_maximal_entanglement(self):
        theta = math.pi / 6
        assert nlwi_certificate(ghz_state(theta, 3), zheng_settings(theta), 1e-10) is None

    def test_none_on_grid_below_maximal(self):
        for theta in np.linspace(0.01, math.pi / 4 - 1e-3, 40):
            t = float(theta)
            assert nlwi_certificate(ghz_state(t, 3), zheng_settings(t), 1e-10) is None

    def test_none_for_imperfect_settings(self):
        # z/x settings give <zzz> = 0 at maximal entanglement: no
        # perfect correlators, hence no certificate.
        table = SettingsTable(
            ((bloch_observable((0.0, 0.0, 1.0)), bloch_observable((1.0, 0.0, 0.0))),) * 3
        )
        assert nlwi_certificate(ghz_state(math.pi / 4, 3), table, 1e-10) is None

    def test_rejects_non_positive_tol(self):
        with pytest.raises(ValueError):
            nlwi_certificate(ghz_state(0.3, 3), zheng_settings(0.3), tol=0.0)

    def test_certificate_signs_unreachable_by_enumeration(self):
        theta = math.pi / 4
        cert = nlwi_certificate(ghz_state(theta, 3), zheng_settings(theta))
        expr = mermin_expression()
        for strategy in all_strategies():
            reproduced = all(
                strategy.term_value(term.choices) == sign
                for term, sign in zip(expr.terms, cert.signs)
            )
            assert not reproduced


def test_correlator_choice_strings():
    theta = math.pi / 4
    state, table = ghz_state(theta, 3), zheng_settings(theta)
    assert correlator(state, table, "EEE") == pytest.approx(1.0, abs=1e-12)
    assert correlator(state, table, "EUU") == pytest.approx(-1.0, abs=1e-12)
