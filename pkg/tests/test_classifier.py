import os
from fractions import Fraction

import pytest

from core.classifier import (BOTH, EVEN, ODD, classify_cc, classify_cc_scoring, classify_par, gisr_conditions,
                             uniform_constraints)
from core.errors import UnsupportedError, ValidationError
from core.model import (INDETERMINATE, LIKELY, MEDIUM, ONE, VERY_LIKELY, VERY_UNLIKELY, PreferenceModel, ic_model,
                        load_model)
from core.profile import Profile
from core.rules import (baldwin, black, borda, copeland, maximin, plurality, ranked_pairs, schulze, stv)


def test_ic_plurality_is_medium():
    cases = classify_cc(ic_model(3), plurality(3))
    assert [c.parity for c in cases] == [EVEN, ODD]
    assert all(c.label == MEDIUM for c in cases)
    assert cases[0].witness is None


def test_ic_borda_is_medium():
    assert classify_cc(ic_model(3), borda(3), EVEN)[0].label == MEDIUM


def test_single_weak_condorcet_winner_that_always_wins(models_dir):
    model = load_model(os.path.join(models_dir, 'pi2.json'))
    case = classify_cc(model, plurality(3), EVEN)[0]
    assert case.label == VERY_LIKELY
    assert 'n >= 73' in case.note


def test_condorcet_winner_outscored(models_dir):
    model = load_model(os.path.join(models_dir, 'cw_plurality_split.json'))
    for case in classify_cc(model, plurality(3), BOTH):
        assert case.label == VERY_UNLIKELY
        assert case.witness is not None
        assert case.to_dict()['witness']['lambda'] == ['1']


def test_scoring_classification_rejects_bad_input():
    with pytest.raises(ValidationError):
        classify_cc_scoring(ic_model(3), (1, 0, 0), BOTH)
    with pytest.raises(ValidationError):
        classify_cc(ic_model(4), plurality(3), EVEN)
    with pytest.raises(ValidationError):
        classify_cc(ic_model(3), plurality(3), 'sometimes')
    with pytest.raises(UnsupportedError):
        classify_cc(ic_model(3), maximin())


def test_baldwin_is_one():
    cases = classify_cc(ic_model(4), baldwin(4), BOTH)
    assert [c.label for c in cases] == [ONE, ONE]


@pytest.mark.slow
def test_ic_stv_is_medium():
    case = classify_cc(ic_model(4), stv(4), EVEN)[0]
    assert case.label == MEDIUM


@pytest.mark.parametrize('rule', [maximin(), ranked_pairs(), schulze(), copeland(Fraction(1, 2)), stv(4), black(4)],
                         ids=lambda r: r.label)
def test_ic_participation_is_likely(rule):
    case = classify_par(ic_model(4), rule)
    assert case.label == LIKELY
    assert case.ell == 1
    assert case.to_dict()['ell'] == 1


def test_scoring_participation_is_one():
    assert classify_par(ic_model(4), borda(4)).label == ONE


def test_participation_without_uniform_in_hull():
    entries = [Fraction(1, 16)] * 12 + [Fraction(1, 48)] * 12
    model = PreferenceModel.of([Profile.from_vector(4, entries)])
    case = classify_par(model, maximin())
    assert case.label == INDETERMINATE
    assert case.witness is None


def test_participation_needs_four_alternatives():
    with pytest.raises(UnsupportedError):
        classify_par(ic_model(3), maximin())


def test_uniform_constraints_pin_the_uniform_distribution():
    rows = uniform_constraints(3)
    uniform = [Fraction(1, 6)] * 6
    assert all(sum(a * x for a, x in zip(row, uniform)) == 0 for row, _ in rows)


def test_gisr_conditions():
    report = gisr_conditions(None, plurality(3), Profile.uniform(3))
    assert not report.rs
    assert not report.rd
    assert not report.nrs
    split = Profile.from_table_columns(["7/32", "6/32", "4/32", "7/32", "6/32", "2/32"])
    report = gisr_conditions(None, plurality(3), split)
    assert report.rd
    assert report.to_dict()['winners'] == [1]
    with pytest.raises(UnsupportedError):
        gisr_conditions(None, maximin(), split)
