from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given

from core.errors import BoundExceededError, ValidationError
from core.profile import Profile, majority_structure, wmg
from core.rules import (CONDORCET_CONSISTENT, MRSE, SCORING, EliminationOrder, RuleSpec, TieBreakOrder, baldwin, black,
                        borda, coombs, copeland, cowinners, edge_groups, maximin, mrse_cowinners, parallel_universes,
                        parse_rule, plurality, possible_losing_rounds, ranked_pairs, ranked_pairs_cowinners, resolve,
                        schulze, scores, stv, validate_scoring_vector, veto)
from tests.strategies import alternative_permutations, examples, profiles
from utils.config import Config

CENTRE_SQUEEZE = Profile.from_votes(3, [(4, (2, 1, 3)), (3, (3, 1, 2)), (2, (1, 2, 3))])


def brute_force_universes(rule, profile):
    """Elimination orders where every step removes one of the lowest scorers"""
    valid = set()
    for order in permutations(range(1, profile.m + 1)):
        alive = set(order)
        ok = True
        for x in order[:-1]:
            totals = scores(profile, rule.component(len(alive)), alive)
            if totals[x] != min(totals.values()):
                ok = False
                break
            alive.discard(x)
        if ok:
            valid.add(EliminationOrder(order))
    return frozenset(valid)


def _sources(locked, m):
    targets = {b for _, b in locked}
    return {a for a in range(1, m + 1) if a not in targets}


def _creates_cycle(locked, edge):
    seen, stack = set(), [edge[1]]
    adjacency = {}
    for a, b in locked:
        adjacency.setdefault(a, []).append(b)
    while stack:
        node = stack.pop()
        if node == edge[0]:
            return True
        if node not in seen:
            seen.add(node)
            stack.extend(adjacency.get(node, []))
    return False


def brute_force_ranked_pairs(profile):
    """Winners over every ordering of every group of equal-weight edges"""
    groups = edge_groups(profile)
    states = [[]]
    for group in groups:
        nxt = []
        for locked in states:
            for ordering in permutations(group):
                current = list(locked)
                for edge in ordering:
                    if not _creates_cycle(current, edge):
                        current.append(edge)
                nxt.append(current)
        states = nxt
    winners = set()
    for locked in states:
        winners |= _sources(locked, profile.m)
    return frozenset(winners)


def test_scoring_vector_validation():
    assert validate_scoring_vector([2, 1, 0]) == (2, 1, 0)
    with pytest.raises(ValidationError):
        validate_scoring_vector([1, 1, 1])
    with pytest.raises(ValidationError):
        validate_scoring_vector([0, 1, 0])


def test_presets():
    assert plurality(4).scores == (1, 0, 0, 0)
    assert borda(4).scores == (3, 2, 1, 0)
    assert veto(4).scores == (1, 1, 1, 0)
    assert stv(4).component(3) == (1, 0, 0)
    assert coombs(3).component(3) == (1, 1, 0)
    assert baldwin(4).component(4) == (3, 2, 1, 0)
    assert black(3).kind in CONDORCET_CONSISTENT
    assert copeland("1/2").label == "copeland:1/2"


def test_parse_rule():
    assert parse_rule("borda", 4) == borda(4)
    assert parse_rule("scoring:[2,1,0]", 3).scores == (2, 1, 0)
    assert parse_rule("copeland:0", 5).alpha == 0
    mrse = parse_rule("mrse:[[1,0],[1,0,0]]", 3)
    assert mrse.kind == MRSE and mrse.m == 3
    assert parse_rule("condorcetified:[1,0,0]", 3).kind == 'condorcetified'
    with pytest.raises(ValidationError):
        parse_rule("approval", 3)
    with pytest.raises(ValidationError):
        parse_rule("copeland:2", 3)


def test_rule_size_mismatch():
    with pytest.raises(ValidationError):
        cowinners(borda(4), CENTRE_SQUEEZE)


def test_centre_squeeze():
    assert cowinners(plurality(3), CENTRE_SQUEEZE) == {2}
    assert cowinners(borda(3), CENTRE_SQUEEZE) == {1}
    assert cowinners(stv(3), CENTRE_SQUEEZE) == {2}
    assert cowinners(maximin(), CENTRE_SQUEEZE) == {1}
    assert cowinners(black(3), CENTRE_SQUEEZE) == {1}


def test_stv_parallel_universes():
    p = Profile.from_votes(3, [(6, (1, 2, 3)), (4, (2, 3, 1)), (4, (3, 2, 1))])
    universes = parallel_universes(stv(3), p)
    assert universes == {EliminationOrder((2, 1, 3)), EliminationOrder((3, 1, 2))}
    assert mrse_cowinners(stv(3), p) == {2, 3}
    assert possible_losing_rounds(stv(3), p, 1) == {2}
    # resolute STV removes the tie-break-last of the lowest scorers
    assert resolve(stv(3), p) == 2
    assert resolve(stv(3), p, TieBreakOrder((1, 3, 2))) == 3


def test_put_bound(monkeypatch):
    monkeypatch.setattr(Config, 'PUT_MAX_ALTERNATIVES', 3)
    p = Profile.from_rankings([(1, 2, 3, 4)])
    with pytest.raises(BoundExceededError, match="PUT_MAX_ALTERNATIVES"):
        mrse_cowinners(stv(4), p)
    assert resolve(stv(4), p) == 1


def test_copeland_alpha():
    # 1 and 2 tie, both beat 3
    p = Profile.from_votes(3, [(2, (1, 2, 3)), (2, (2, 1, 3))])
    assert cowinners(copeland(0), p) == {1, 2}
    assert cowinners(copeland(1), p) == {1, 2}
    cycle = Profile.from_rankings([(1, 2, 3), (2, 3, 1), (3, 1, 2)])
    assert cowinners(copeland(Fraction(1, 2)), cycle) == {1, 2, 3}


def test_ranked_pairs_and_schulze_cycle():
    p = Profile.from_votes(3, [(4, (1, 2, 3)), (4, (2, 3, 1)), (5, (3, 1, 2))])
    assert ranked_pairs_cowinners(p) == {3}
    assert cowinners(schulze(), p) == {3}
    assert cowinners(maximin(), p) == {3}
    assert resolve(ranked_pairs(), p) == 3


def test_ranked_pairs_tied_group():
    cycle = Profile.from_rankings([(1, 2, 3), (2, 3, 1), (3, 1, 2)])
    assert ranked_pairs_cowinners(cycle) == {1, 2, 3}
    # identity order locks (1,2) then (2,3)
    assert resolve(ranked_pairs(), cycle) == 1


def test_empty_profile_resolves_to_tiebreak_first():
    assert resolve(borda(3), Profile.empty(3), TieBreakOrder((2, 1, 3))) == 2


def test_tiebreak_order():
    t = TieBreakOrder.parse("3>1>2")
    assert t.first([1, 2]) == 1
    assert t.last([3, 2]) == 2
    with pytest.raises(ValidationError):
        TieBreakOrder((1, 1, 2))


@examples(300, thorough=1000)
@given(profiles(m=4, max_voters=20))
def test_parallel_universes_match_brute_force(p):
    for rule in (stv(4), coombs(4), baldwin(4)):
        assert parallel_universes(rule, p) == brute_force_universes(rule, p)


@examples(300, thorough=1000)
@given(profiles(m=4, max_voters=20))
def test_ranked_pairs_match_brute_force(p):
    assert ranked_pairs_cowinners(p) == brute_force_ranked_pairs(p)


@examples(200)
@given(profiles(m=4, max_voters=15))
def test_condorcet_consistency(p):
    cw = majority_structure(p).cw
    if cw is None:
        return
    for rule in (maximin(), copeland(0), copeland(Fraction(1, 2)), ranked_pairs(), schulze(), black(4)):
        assert cowinners(rule, p) == {cw}
        assert resolve(rule, p) == cw


@examples(150)
@given(profiles(m=4, max_voters=15), alternative_permutations(4))
def test_neutrality(p, mapping):
    moved = p.relabel(mapping)
    for rule in (plurality(4), borda(4), veto(4), stv(4), maximin(), copeland(), ranked_pairs(), schulze(), black(4)):
        assert cowinners(rule, moved) == {mapping[a] for a in cowinners(rule, p)}


@examples(150)
@given(profiles(m=3, max_voters=15), profiles(m=3, max_voters=15))
def test_anonymity_of_merge_order(p, q):
    for rule in (borda(3), stv(3), schulze()):
        assert cowinners(rule, p + q) == cowinners(rule, q + p)


@examples(150)
@given(profiles(m=4, max_voters=15))
def test_scoring_affine_invariance(p):
    base = (3, 2, 1, 0)
    shifted = tuple(5 * s + 7 for s in base)
    assert cowinners(RuleSpec(SCORING, scores=shifted), p) == cowinners(borda(4), p)


def test_edge_groups_heaviest_first():
    p = Profile.from_votes(3, [(3, (1, 2, 3)), (1, (2, 3, 1))])
    groups = edge_groups(p)
    weights = [wmg(p).w(*g[0]) for g in groups]
    assert weights == sorted(weights, reverse=True)
