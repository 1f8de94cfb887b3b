from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.axioms import sat_par
from core.constructions import (EVEN, ODD, TargetWMG, cw_scoring_gap_bound, cw_scoring_gap_profile,
                                mcgarvey_profile, mrse_core_profile, par_violation_profile, par_violation_threshold)
from core.errors import UnsupportedError, ValidationError
from core.profile import majority_structure, prefers, wmg
from core.rules import (TieBreakOrder, black, borda, copeland, maximin, plurality, ranked_pairs, resolve,
                        scoring_cowinners, schulze, stv)

FAMILIES = [
    (maximin(), 4), (maximin(), 5), (ranked_pairs(), 4), (schulze(), 4), (schulze(), 5),
    (copeland(0), 4), (copeland(Fraction(1, 2)), 4), (copeland(1), 5), (black(4), 4), (black(5), 5),
]


def _replay(family, profile, ranking, tiebreak=None):
    order = ranking.order
    assert profile.weight(order) > 0
    before = resolve(family, profile, tiebreak)
    after = resolve(family, profile.remove(order), tiebreak)
    assert prefers(order, after, before)


@pytest.mark.parametrize('family,m', FAMILIES, ids=lambda v: getattr(v, 'label', str(v)))
@pytest.mark.parametrize('parity', [EVEN, ODD])
def test_participation_violation_at_threshold(family, m, parity):
    n = par_violation_threshold(family, m, parity)
    assert n % 2 == parity
    for size in (n, n + 2):
        profile, ranking = par_violation_profile(family, m, size)
        assert profile.n == size
        _replay(family, profile, ranking)
        assert not sat_par(family, profile).satisfied


@pytest.mark.parametrize('family,m', [(maximin(), 4), (black(4), 4)], ids=['maximin', 'black'])
def test_participation_violation_below_threshold(family, m):
    n = par_violation_threshold(family, m, ODD)
    with pytest.raises(ValidationError):
        par_violation_profile(family, m, n - 2)


def test_stv_participation_violation():
    rule = stv(4)
    n = par_violation_threshold(rule, 4, ODD)
    profile, ranking = par_violation_profile(rule, 4, n)
    assert profile.n == n
    _replay(rule, profile, ranking)
    even = par_violation_threshold(rule, 4, EVEN)
    assert even % 2 == EVEN
    profile, ranking = par_violation_profile(rule, 4, even + 24)
    _replay(rule, profile, ranking)


def test_mrse_core_profile():
    core = mrse_core_profile(stv(4))
    assert core.n % 2 == 1
    with pytest.raises(UnsupportedError):
        mrse_core_profile(stv(3))


def test_unsupported_families():
    with pytest.raises(UnsupportedError):
        par_violation_profile(plurality(4), 4, 101)
    with pytest.raises(UnsupportedError):
        par_violation_threshold(maximin(), 3, ODD)
    with pytest.raises(ValidationError):
        par_violation_threshold(maximin(), 4, 2)


def test_witness_respects_tiebreak():
    tiebreak = TieBreakOrder((1, 2, 3, 4))
    n = par_violation_threshold(schulze(), 4, ODD)
    profile, ranking = par_violation_profile(schulze(), 4, n, tiebreak)
    _replay(schulze(), profile, ranking, tiebreak)


COPELANDS = [(copeland(0), 4), (copeland(0), 6), (copeland(Fraction(1, 3)), 5), (copeland(Fraction(1, 2)), 4),
             (copeland(1), 4), (copeland(1), 6)]


@pytest.mark.parametrize('family,m', COPELANDS, ids=lambda v: getattr(v, 'label', str(v)))
@pytest.mark.parametrize('parity', [EVEN, ODD])
@pytest.mark.parametrize('reorder', [reversed, lambda order: (2, 1) + tuple(order[2:])], ids=['reversed', 'swapped'])
def test_copeland_violation_under_other_tiebreaks(family, m, parity, reorder):
    tiebreak = TieBreakOrder(tuple(reorder(range(1, m + 1))))
    n = par_violation_threshold(family, m, parity)
    profile, ranking = par_violation_profile(family, m, n, tiebreak)
    assert profile.n == n
    _replay(family, profile, ranking, tiebreak)
    assert not sat_par(family, profile, tiebreak).satisfied


def test_target_wmg_validation():
    with pytest.raises(ValidationError):
        TargetWMG(3, ((0, 1, 0), (1, 0, 0), (0, 0, 0)))
    with pytest.raises(ValidationError):
        TargetWMG.from_edges(3, {(1, 1): 2})
    mixed = TargetWMG.from_edges(3, {(1, 2): 1, (2, 3): 2})
    assert mixed.parity is None
    with pytest.raises(ValidationError):
        mixed.minimal_n(ODD)
    odd = TargetWMG.from_edges(3, {(1, 2): 1, (2, 3): 1, (3, 1): 1})
    with pytest.raises(ValidationError, match="minimal feasible n"):
        mcgarvey_profile(odd, 4)


def test_mcgarvey_cycle():
    target = TargetWMG.from_edges(3, {(1, 2): 1, (2, 3): 1, (3, 1): 1})
    n = target.minimal_n(ODD)
    profile = mcgarvey_profile(target, n)
    assert TargetWMG.of(profile) == target
    assert majority_structure(profile).cw is None
    assert mcgarvey_profile(target, n + 6).n == n + 6


def test_mcgarvey_keeps_included_rankings():
    target = TargetWMG.from_edges(4, {(1, 2): 4, (3, 4): 2})
    profile = mcgarvey_profile(target, 20, include=[(4, 3, 2, 1), (2, 1)])
    assert profile.weight((4, 3, 2, 1)) >= 1
    assert profile.weight((2, 1, 3, 4)) >= 1
    assert wmg(profile).w(1, 2) == 4


@st.composite
def targets(draw, m=4):
    parity = draw(st.sampled_from([EVEN, ODD]))
    edges = {}
    for a in range(1, m + 1):
        for b in range(a + 1, m + 1):
            edges[(a, b)] = 2 * draw(st.integers(-4, 4)) + parity
    return TargetWMG.from_edges(m, edges), parity


@settings(max_examples=100, deadline=None)
@given(targets(), st.integers(0, 5))
def test_mcgarvey_realizes_targets(plan, extra):
    target, parity = plan
    n = target.minimal_n(parity) + 2 * extra
    profile = mcgarvey_profile(target, n)
    assert profile.n == n
    assert TargetWMG.of(profile) == target


def test_gap_bound():
    assert cw_scoring_gap_bound(3) == 73
    assert cw_scoring_gap_bound(4) == 81


def test_plurality_gap():
    profile = cw_scoring_gap_profile((1, 0, 0), 3, 80, 1, 2)
    assert profile.n == 80
    assert majority_structure(profile).cw == 1
    assert scoring_cowinners((1, 0, 0), profile) == {2}


@pytest.mark.parametrize('n', [81, 90, 97])
def test_borda_gap_relabelled(n):
    profile = cw_scoring_gap_profile(borda(4).scores, 4, n, 3, 1)
    assert profile.n == n
    assert majority_structure(profile).cw == 3
    assert scoring_cowinners(borda(4).scores, profile) == {1}


def test_gap_rejects_bad_input():
    with pytest.raises(ValidationError):
        cw_scoring_gap_profile((1, 0, 0), 3, 72, 1, 2)
    with pytest.raises(ValidationError):
        cw_scoring_gap_profile((1, 0, 0), 3, 80, 2, 2)
    with pytest.raises(ValidationError):
        cw_scoring_gap_profile((1, 0, 0, 0), 3, 80, 1, 2)
    with pytest.raises(UnsupportedError):
        cw_scoring_gap_profile((1, 0), 2, 80, 1, 2)


def test_gap_on_veto_like_vector():
    s = (2, 2, 1, 0, 0)
    profile = cw_scoring_gap_profile(s, 5, cw_scoring_gap_bound(5), 2, 5)
    assert majority_structure(profile).cw == 2
    assert scoring_cowinners(s, profile) == {5}
