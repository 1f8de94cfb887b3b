from fractions import Fraction

import pytest
from hypothesis import given

from core.errors import ValidationError
from core.profile import (Histogram, Profile, Ranking, all_rankings, as_rational, complete_order, format_profile_text,
                          histogram, majority_structure, parse_profile_text, ranking_from_index, ranking_index,
                          restrict, reverse, umg, wmg)
from tests.strategies import alternative_permutations, examples, profiles


def test_ranking_index_is_lexicographic():
    assert [ranking_index(r) for r in all_rankings(3)] == list(range(6))
    assert ranking_index((1, 2, 3)) == 0
    assert ranking_index((3, 2, 1)) == 5
    assert ranking_from_index(3, 3) == (2, 3, 1)


def test_index_round_trip_m5():
    for i in (0, 1, 57, 119):
        assert ranking_index(ranking_from_index(i, 5)) == i


def test_not_a_permutation():
    with pytest.raises(ValidationError):
        Ranking((1, 1, 2))
    with pytest.raises(ValidationError):
        ranking_index((0, 1, 2))


def test_ranking_parse_and_str():
    r = Ranking.parse("2>3>1")
    assert r.order == (2, 3, 1)
    assert str(r) == "2>3>1"
    assert r.prefers(3, 1)
    assert r.reversed().order == (1, 3, 2)


def test_complete_order_appends_others_ascending():
    assert complete_order((3, 1), 5) == (3, 1, 2, 4, 5)
    assert reverse((1, 2, 3)) == (3, 2, 1)


def test_as_rational():
    assert as_rational("3/6") == Fraction(1, 2)
    assert as_rational("4/2") == 2 and isinstance(as_rational("4/2"), int)
    with pytest.raises(ValidationError):
        as_rational(0.5)


def test_profile_basics():
    p = Profile.from_votes(3, [(2, (1, 2, 3)), (1, (3, 2, 1)), (1, (1, 2, 3))])
    assert p.n == 4
    assert p.weight((1, 2, 3)) == 3
    assert p.support_size == 2
    assert p.remove((1, 2, 3)).weight((1, 2, 3)) == 2
    with pytest.raises(ValidationError):
        p.remove((2, 1, 3))


def test_profile_arithmetic():
    a = Profile.from_rankings([(1, 2, 3)])
    b = Profile.from_rankings([(2, 1, 3), (1, 2, 3)])
    merged = a + b
    assert merged.weight((1, 2, 3)) == 2
    assert (3 * b).n == 6
    assert a.add((3, 2, 1), 2).n == 3


def test_fractional_profile_has_no_voter_count():
    p = Profile.uniform(3)
    assert p.total == 1
    with pytest.raises(ValidationError):
        p.n


def test_negative_weights_need_signed():
    with pytest.raises(ValidationError):
        Profile(3, {0: -1})
    assert Profile(3, {0: -1}, signed=True).total == -1


def test_table_columns_order():
    p = Profile.from_table_columns(["1/8", "1/8", "3/8", "1/8", "1/8", "1/8"])
    assert p.weight((2, 3, 1)) == Fraction(3, 8)
    assert p.total == 1


def test_wmg_small():
    p = Profile.from_votes(3, [(6, (1, 2, 3)), (4, (2, 3, 1)), (4, (3, 2, 1))])
    g = wmg(p)
    assert g.w(2, 1) == 2
    assert g.w(2, 3) == 6
    assert g.w(1, 3) == -2
    s = majority_structure(p)
    assert s.cw == 2
    assert s.condorcet_loser == 1


def test_majority_structure_cycle_and_ties():
    cycle = Profile.from_rankings([(1, 2, 3), (2, 3, 1), (3, 1, 2)])
    s = majority_structure(cycle)
    assert s.cw is None and s.wcw == frozenset() and s.condorcet_loser is None

    tied = Profile.from_votes(3, [(2, (1, 2, 3)), (2, (2, 1, 3))])
    s = majority_structure(tied)
    assert s.cw is None
    assert s.wcw == frozenset({1, 2})
    assert s.acw == frozenset({1, 2})
    assert s.condorcet_loser == 3


def test_restrict_keeps_labels():
    p = Profile.from_votes(4, [(1, (4, 2, 1, 3)), (2, (1, 3, 2, 4))])
    r = restrict(p, [2, 4])
    assert r.m == 2
    assert r.labels == (2, 4)
    assert r.weight((2, 1)) == 1
    assert r.weight((1, 2)) == 2


def test_profile_text_round_trip():
    p = Profile.from_votes(3, [(2, (1, 2, 3)), (1, (3, 1, 2))])
    text = format_profile_text(p, ["example"])
    assert text.startswith("# example")
    assert parse_profile_text(text) == p


def test_profile_text_errors():
    with pytest.raises(ValidationError, match="line 2"):
        parse_profile_text("1: 1>2>3\n1: 1>2\n")
    with pytest.raises(ValidationError):
        parse_profile_text("# nothing\n")


def test_histogram_round_trip():
    p = Profile.from_votes(3, [(2, (1, 2, 3)), (1, (3, 1, 2))])
    h = histogram(p)
    assert h.entries == (2, 0, 0, 0, 1, 0)
    assert h.l1() == 3
    assert Histogram.from_dict(h.to_dict()).to_profile() == p


@examples(200)
@given(profiles())
def test_wmg_antisymmetric(p):
    g = wmg(p)
    for a in range(1, p.m + 1):
        assert g.w(a, a) == 0
        for b in range(1, p.m + 1):
            assert g.w(a, b) == -g.w(b, a)
            assert (g.w(a, b) - p.n) % 2 == 0 or a == b


@examples(200)
@given(profiles(m=4))
def test_umg_matches_margins(p):
    relation = umg(p)
    g = wmg(p)
    for a in range(4):
        for b in range(4):
            x = g.margin[a][b]
            assert relation[a][b] == (x > 0) - (x < 0)


@examples(100)
@given(profiles(m=4), alternative_permutations(4))
def test_relabel_moves_condorcet_winner(p, mapping):
    cw = majority_structure(p).cw
    moved = majority_structure(p.relabel(mapping)).cw
    assert moved == (mapping[cw] if cw is not None else None)
