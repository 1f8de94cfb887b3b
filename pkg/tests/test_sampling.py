import os
from fractions import Fraction

import pytest

from core.axioms import CC, PAR
from core.errors import BoundExceededError, ValidationError
from core.model import PreferenceModel, load_model
from core.profile import Profile
from core.rules import black, borda, copeland, maximin, plurality, ranked_pairs, schulze, stv, veto
from core.sampling import (SamplerPlan, SatisfactionEstimate, adversarial_estimate, estimate_satisfaction,
                           exact_satisfaction, exact_small_probability, exact_smoothed_satisfaction, fit_rate,
                           sample_profile, wilson_interval)
from utils.config import Config

PI1 = Profile.from_table_columns(["1/4", "1/4", "1/8", "1/8", "1/8", "1/8"])
PI2 = Profile.from_table_columns(["1/8", "1/8", "3/8", "1/8", "1/8", "1/8"])


def test_exact_two_agent_probability():
    probabilities = exact_small_probability(SamplerPlan.per_agent([PI2, PI1]))
    # one 1>2>3 voter and one 2>3>1 voter: 1/8 * 1/8 + 3/8 * 1/4
    assert probabilities[(1, 0, 0, 1, 0, 0)] == Fraction(7, 64)
    assert sum(probabilities.values()) == 1


def test_exact_probability_bounds(monkeypatch):
    monkeypatch.setattr(Config, 'EXACT_PMV_MAX_N', 2)
    with pytest.raises(BoundExceededError, match="EXACT_PMV_MAX_N"):
        exact_small_probability(SamplerPlan.ic(3, 3))


def test_two_voter_condorcet_winner_is_plurality_winner(models_dir):
    model = load_model(os.path.join(models_dir, 'pi1_pi2.json'))
    value, choice = exact_smoothed_satisfaction(model, plurality(3), CC, 2)
    assert value == 1
    assert len(choice) == 2


def test_exact_satisfaction_below_one():
    # a 2-2-1 split of five voters can leave the Condorcet winner with one first place
    value = exact_satisfaction(plurality(3), CC, SamplerPlan.ic(3, 5))
    assert 0 < value < 1
    assert exact_satisfaction(maximin(), CC, SamplerPlan.ic(3, 5)) == 1
    assert exact_satisfaction(borda(3), PAR, SamplerPlan.ic(3, 5)) == 1
    assert exact_satisfaction(plurality(3), CC, SamplerPlan.ic(3, 4)) == 1


def test_sampling_is_deterministic():
    plan = SamplerPlan.ic(4, 25, seed=7)
    first = sample_profile(plan, 3)
    assert first == sample_profile(plan, 3)
    assert first.n == 25
    per_agent = SamplerPlan.per_agent([PI1] * 5 + [PI2] * 6, seed=1)
    assert sample_profile(per_agent, 0) == sample_profile(per_agent, 0)
    assert sample_profile(per_agent, 0).n == 11


def test_plan_validation():
    with pytest.raises(ValidationError):
        SamplerPlan.ic(3, 0)
    with pytest.raises(ValidationError):
        SamplerPlan.ic(3, 10, trials=0)
    with pytest.raises(ValidationError):
        SamplerPlan(3, 4, (PI1, PI2))
    with pytest.raises(ValidationError):
        SamplerPlan.iid(Profile.from_rankings([(1, 2, 3), (2, 1, 3)]), 5)
    assert SamplerPlan.ic(3, 5).is_ic
    assert not SamplerPlan.iid(PI1, 5).is_ic


def test_wilson_interval():
    lo, hi = wilson_interval(0, 20)
    assert lo == 0.0 and 0 < hi < 0.2
    lo, hi = wilson_interval(20, 20)
    assert hi == 1.0 and 0.8 < lo < 1
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert abs((lo + hi) - 1) < 1e-12
    with pytest.raises(ValidationError):
        wilson_interval(0, 0)


def test_estimate_for_always_satisfied_axiom():
    plan = SamplerPlan.ic(4, 31, seed=3, trials=40)
    result = estimate_satisfaction(borda(4), PAR, plan)
    assert result.successes == 40
    assert result.estimate == 1.0
    assert result.to_dict()['trials'] == 40


def test_estimate_from_counts():
    result = SatisfactionEstimate.from_counts(9, 10)
    assert result.estimate == 0.9
    assert result.ci_lo < 0.9 < result.ci_hi


def test_fit_rate():
    assert fit_rate([100, 400], [0.9, 0.95]) == pytest.approx(-0.5)
    assert fit_rate([100, 400], [0.9, 1.0]) is None
    assert fit_rate([100], [0.9]) is None


def test_adversarial_estimate_reports_minimum():
    model = PreferenceModel.of([PI1, PI2])
    report = adversarial_estimate(model, plurality(3), CC, 15, trials=30, seed=2, witnesses=[])
    assert [c['candidate'] for c in report['candidates']] == ['vertex[0]', 'vertex[1]']
    assert report['minimum']['estimate'] == min(c['estimate'] for c in report['candidates'])
    assert 'heuristic' in report['caveat']


@pytest.mark.slow
def test_parallel_estimate_matches_serial():
    plan = SamplerPlan.ic(3, 51, seed=11, trials=400)
    serial = estimate_satisfaction(stv(3), CC, plan, jobs=1)
    parallel = estimate_satisfaction(stv(3), CC, plan, jobs=4)
    assert serial.successes == parallel.successes


@pytest.mark.slow
def test_ic_plurality_condorcet_rate_is_medium():
    plan = SamplerPlan.ic(3, 1001, seed=5, trials=2000)
    result = estimate_satisfaction(plurality(3), CC, plan)
    assert 0.5 < result.estimate < 0.99


@pytest.mark.slow
@pytest.mark.parametrize('rule', [plurality(4), borda(4), veto(4), stv(4)], ids=lambda r: r.label)
def test_ic_condorcet_rate_settles(rule):
    estimates = {n: estimate_satisfaction(rule, CC, SamplerPlan.ic(4, n, seed=2024, trials=20000),
                                          jobs=Config.DEFAULT_JOBS).estimate
                 for n in (40, 200, 800)}
    assert all(0 < p < 1 for p in estimates.values())
    assert abs(estimates[800] - estimates[200]) < 0.06


@pytest.mark.slow
@pytest.mark.parametrize('rule', [maximin(), stv(4), black(4), copeland(Fraction(1, 2)), ranked_pairs(), schulze()],
                         ids=lambda r: r.label)
def test_ic_participation_failures_decay_polynomially(rule):
    ns = (100, 400, 1600)
    estimates = [estimate_satisfaction(rule, PAR, SamplerPlan.ic(4, n, seed=2024, trials=20000),
                                       jobs=Config.DEFAULT_JOBS).estimate for n in ns]
    slope = fit_rate(ns, estimates)
    assert slope is not None
    assert -0.85 <= slope <= -0.20
