from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

import oracles
from extgame.game import GameVerdict, best_response, classify_game, classify_joint_strategy
from extgame.prob import ValidationError
from extgame.scenarios import (
    NEWCOMB_SPACE,
    SCENARIOS,
    AppendixWitness,
    NewcombParams,
    alpha_sweep,
    appendix_lemma_check,
    build_fearful,
    default_grid,
    fearful_eu_closed_form,
    fearful_threshold,
    matching_pennies,
    matching_pennies_check,
    merged_scenario,
    newcomb_fearful,
    newcomb_realist,
    sensor_variant,
    time_reversed_games,
    time_reversed_newcomb,
)
from extgame.strategies import Verdict, compile, conditional_independent_fixed, contains

AB, B = (F(1), F(0)), (F(0), F(1))


def test_registry_ids_are_stable():
    assert list(SCENARIOS) == [
        "fearful", "realist", "merged-1", "merged-2", "merged-3",
        "appendix", "alpha-sweep", "time-reversed", "matching-pennies", "sensor",
    ]


class TestParams:
    @pytest.mark.parametrize("alpha", [F(1, 2), F(0), F(11, 10)])
    def test_alpha_range(self, alpha):
        with pytest.raises(ValidationError):
            NewcombParams(alpha)

    def test_payoff_cells(self):
        with pytest.raises(ValidationError):
            NewcombParams(1, {("AB", "ab"): 1})


class TestFearful:
    def test_perfect_predictor(self):
        br = best_response(newcomb_fearful(NewcombParams(1)), "you")
        assert br.parameter == B and br.value == 1_000_000

    def test_threshold_tie(self):
        alpha = F(1001, 2000)
        assert fearful_threshold() == alpha
        br = best_response(newcomb_fearful(NewcombParams(alpha)), "you")
        assert br.value == 500_500 and AB in br.maximizers and B in br.maximizers

    def test_just_below_threshold(self):
        alpha = F(1251, 2500)
        assert oracles.fearful_eu(alpha, 0) > oracles.fearful_eu(alpha, 1)
        assert best_response(newcomb_fearful(NewcombParams(alpha)), "you").parameter == AB

    @given(st.fractions(0, 1, max_denominator=50), st.fractions(0, 1, max_denominator=50))
    def test_closed_form_matches_enumeration(self, alpha, p_b):
        assert fearful_eu_closed_form(alpha, p_b) == oracles.fearful_eu(alpha, p_b)

    @given(st.fractions(0, 1, max_denominator=40))
    def test_solver_matches_closed_form_on_the_grid(self, alpha):
        br = best_response(build_fearful(alpha), "you")
        assert dict(br.values) == {g: oracles.fearful_eu(alpha, g[1]) for g in default_grid()}

    def test_proper(self):
        assert classify_game(newcomb_fearful()).verdict is GameVerdict.PROPER


class TestRealist:
    @pytest.mark.parametrize("q, value", [((1, 0), 1000), ((0, 1), 1_001_000), ((F(1, 2), F(1, 2)), 501_000)])
    def test_values(self, q, value):
        br = best_response(newcomb_realist(q), "you")
        assert br.parameter == AB and br.value == value == oracles.realist_eu(1, q)

    @given(st.fractions(0, 1, max_denominator=30))
    def test_dominance_for_every_q(self, x):
        game = newcomb_realist((1 - x, x))
        assert classify_game(game).verdict is GameVerdict.PROPER
        assert best_response(game, "you").maximizers == (AB,)


class TestMerges:
    def test_one(self):
        m = merged_scenario(1)
        assert m.classification.verdict is GameVerdict.OVER_PLAYED
        first = m.classification.witnesses[0]
        assert first.name == "realist you vs fearful W"
        assert first.choice["you"] == ("realist", (F(3, 4), F(1, 4)))
        assert first.result.certificate.verify()
        # a delta h forces P(g); W setting another P(g) on top conflicts
        verdicts = [r.verdict for _, _, r in m.extra_checks]
        assert verdicts == [Verdict.SINGLETON, Verdict.EMPTY] * 2

    def test_two_is_the_realist_game(self):
        m = merged_scenario(2)
        assert m.classification.verdict is GameVerdict.PROPER
        assert m.coincides_with_realist is True

    def test_three(self):
        m = merged_scenario(3, NewcombParams(F(3, 4)))
        assert m.classification.verdict is GameVerdict.OVER_PLAYED
        w = m.classification.witnesses[0]
        assert w.choice["you"] == (F(3, 4), F(1, 4))
        assert w.result.certificate.verify()

    def test_unknown(self):
        with pytest.raises(ValidationError):
            merged_scenario(4)


class TestAppendix:
    def test_three_quarters(self):
        rep = appendix_lemma_check(F(3, 4))
        assert set(rep.feasible_h) == {AB, B}
        assert rep.ratio_gap == F(1, 2)

    def test_perfect_predictor_payoff(self):
        rep = appendix_lemma_check(1)
        assert dict(zip(rep.feasible_h, rep.payoffs))[B] == 1_000_000

    def test_half_is_rejected(self):
        with pytest.raises(ValidationError, match="identity"):
            appendix_lemma_check(F(1, 2))

    def test_table2_with_zero_weight_is_consistent(self):
        j = AppendixWitness(F(3, 4), 0, 1).joint()
        assert contains(compile(conditional_independent_fixed("y", "g", B), NEWCOMB_SPACE), j)


class TestSweepAndReversal:
    def test_sweep(self):
        rows = alpha_sweep([F(51, 100), F(3, 4), 1])
        assert all(r.scenario3 is GameVerdict.OVER_PLAYED for r in rows)
        three_quarters = dict(rows[1].h_verdicts)
        assert three_quarters[(F(3, 4), F(1, 4))] is Verdict.EMPTY
        assert three_quarters[B] is Verdict.SINGLETON
        assert rows[-1].fearful.parameter == B

    def test_time_reversal(self):
        rep = time_reversed_newcomb()
        assert rep.identical == {"fearful": True, "realist": True, "merged-3": True}
        assert rep.annotations["forward"] != rep.annotations["reversed"]
        fearful, realist = time_reversed_games()
        assert best_response(fearful, "you").value == 1_000_000
        assert best_response(realist, "you").parameter == AB


class TestMatchingPennies:
    def test_certain_match(self):
        c = matching_pennies_check(0, 0)
        assert (c["eu_row"], c["eu_col"]) == (1, 0)

    @pytest.mark.parametrize("p_c", [F(0), F(1, 3), F(1)])
    def test_fair_row_coin(self, p_c):
        assert matching_pennies_check(F(1, 2), p_c)["eu_row"] == F(1, 2)

    def test_grids_are_proper(self):
        assert classify_game(matching_pennies([0, F(1, 2), 1], [F(1, 4), 1])).verdict is GameVerdict.PROPER

    def test_sensor(self):
        game = sensor_variant()
        assert classify_game(game).verdict is GameVerdict.PROPER
        point = classify_joint_strategy(game, {p.id: p.family.grid[0] for p in game.players}).point
        assert {o for o, p in point.items() if p} == {("0", "0", "0"), ("1", "1", "1")}

    def test_sensor_is_nature(self):
        assert sensor_variant().player("sensor").is_nature
