"""
Voting rules: irresolute co-winners and deterministic resolute refinements
Positional scoring, MRSE (STV/Coombs/Baldwin) with parallel-universes
tie-breaking, maximin, Copeland_alpha, ranked pairs, Schulze, Condorcetified
scoring rules
"""
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from core.errors import BoundExceededError, ValidationError
from core.profile import Number, Profile, as_rational, majority_structure, rational_str, wmg
from utils.config import Config

logger = logging.getLogger(__name__)

SCORING = 'scoring'
MRSE = 'mrse'
MAXIMIN = 'maximin'
COPELAND = 'copeland'
RANKED_PAIRS = 'rankedpairs'
SCHULZE = 'schulze'
CONDORCETIFIED = 'condorcetified'

KINDS = (SCORING, MRSE, MAXIMIN, COPELAND, RANKED_PAIRS, SCHULZE, CONDORCETIFIED)
CONDORCET_CONSISTENT = (MAXIMIN, COPELAND, RANKED_PAIRS, SCHULZE, CONDORCETIFIED)


def validate_scoring_vector(s: Sequence[int]) -> Tuple[int, ...]:
    """Integer, weakly decreasing, strict first-last gap"""
    try:
        s = tuple(int(v) for v in s)
    except (TypeError, ValueError):
        raise ValidationError(f"scoring vector must be integers: {s!r}")
    if len(s) < 2:
        raise ValidationError(f"scoring vector needs at least two entries: {list(s)}")
    if any(s[i] < s[i + 1] for i in range(len(s) - 1)):
        raise ValidationError(f"scoring vector must be weakly decreasing: {list(s)}")
    if s[0] <= s[-1]:
        raise ValidationError(f"scoring vector needs s1 > sm: {list(s)}")
    return s


def plurality_vector(k: int) -> Tuple[int, ...]:
    return (1,) + (0,) * (k - 1)


def borda_vector(k: int) -> Tuple[int, ...]:
    return tuple(range(k - 1, -1, -1))


def veto_vector(k: int) -> Tuple[int, ...]:
    return (1,) * (k - 1) + (0,)


@dataclass(frozen=True)
class RuleSpec:
    """Declarative description of an irresolute rule

    scores: scoring vector (scoring / condorcetified)
    components: MRSE scoring vectors for 2..m alive alternatives
    """
    kind: str
    scores: Tuple[int, ...] = ()
    components: Tuple[Tuple[int, ...], ...] = ()
    alpha: Fraction = Fraction(1, 2)
    name: str = ''

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown rule kind {self.kind!r}")
        if self.kind in (SCORING, CONDORCETIFIED):
            object.__setattr__(self, 'scores', validate_scoring_vector(self.scores))
        if self.kind == MRSE:
            comps = tuple(sorted((validate_scoring_vector(c) for c in self.components), key=len))
            if not comps or [len(c) for c in comps] != list(range(2, len(comps) + 2)):
                raise ValidationError("MRSE needs one scoring vector per round size 2..m")
            object.__setattr__(self, 'components', comps)
        if self.kind == COPELAND:
            alpha = Fraction(self.alpha)
            if not 0 <= alpha <= 1:
                raise ValidationError(f"Copeland alpha must lie in [0, 1], got {alpha}")
            object.__setattr__(self, 'alpha', alpha)

    @property
    def m(self) -> Optional[int]:
        if self.kind in (SCORING, CONDORCETIFIED):
            return len(self.scores)
        if self.kind == MRSE:
            return len(self.components) + 1
        return None

    def component(self, k: int) -> Tuple[int, ...]:
        """MRSE scoring vector used when k alternatives are alive"""
        return self.components[k - 2]

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if self.kind in (SCORING, CONDORCETIFIED):
            return f"{self.kind}:[{','.join(map(str, self.scores))}]"
        if self.kind == MRSE:
            return 'mrse:[' + ','.join('[' + ','.join(map(str, c)) + ']' for c in self.components) + ']'
        if self.kind == COPELAND:
            return f"copeland:{rational_str(self.alpha)}"
        return self.kind

    def check_m(self, m: int):
        if self.m is not None and self.m != m:
            raise ValidationError(f"rule {self.label} is defined for m={self.m}, profile has m={m}")

    def __str__(self) -> str:
        return self.label


# presets

def plurality(m: int) -> RuleSpec:
    return RuleSpec(SCORING, scores=plurality_vector(m), name='plurality')


def borda(m: int) -> RuleSpec:
    return RuleSpec(SCORING, scores=borda_vector(m), name='borda')


def veto(m: int) -> RuleSpec:
    return RuleSpec(SCORING, scores=veto_vector(m), name='veto')


def stv(m: int) -> RuleSpec:
    return RuleSpec(MRSE, components=tuple(plurality_vector(k) for k in range(2, m + 1)), name='stv')


def coombs(m: int) -> RuleSpec:
    return RuleSpec(MRSE, components=tuple(veto_vector(k) for k in range(2, m + 1)), name='coombs')


def baldwin(m: int) -> RuleSpec:
    return RuleSpec(MRSE, components=tuple(borda_vector(k) for k in range(2, m + 1)), name='baldwin')


def black(m: int) -> RuleSpec:
    return RuleSpec(CONDORCETIFIED, scores=borda_vector(m), name='black')


def maximin() -> RuleSpec:
    return RuleSpec(MAXIMIN, name='maximin')


def copeland(alpha=Fraction(1, 2)) -> RuleSpec:
    alpha = Fraction(as_rational(alpha))
    return RuleSpec(COPELAND, alpha=alpha, name=f"copeland:{rational_str(alpha)}")


def ranked_pairs() -> RuleSpec:
    return RuleSpec(RANKED_PAIRS, name='rankedpairs')


def schulze() -> RuleSpec:
    return RuleSpec(SCHULZE, name='schulze')


_PRESETS = {
    'plurality': plurality, 'borda': borda, 'veto': veto,
    'stv': stv, 'coombs': coombs, 'baldwin': baldwin, 'black': black,
}
_GRAPH_PRESETS = {'maximin': maximin, 'rankedpairs': ranked_pairs, 'schulze': schulze}


def _parse_int_list(text: str) -> List[int]:
    body = text.strip()
    if not (body.startswith('[') and body.endswith(']')):
        raise ValidationError(f"expected a bracketed list, got {text!r}")
    try:
        return [int(v) for v in body[1:-1].split(',') if v.strip()]
    except ValueError:
        raise ValidationError(f"bad integer list {text!r}")


def parse_rule(text: str, m: int) -> RuleSpec:
    """Parse the CLI rule syntax for an m-alternative election"""
    key = text.strip().lower()
    if key in _PRESETS:
        return _PRESETS[key](m)
    if key in _GRAPH_PRESETS:
        return _GRAPH_PRESETS[key]()
    if key == 'copeland':
        return copeland()
    if key.startswith('copeland:'):
        return copeland(key.split(':', 1)[1])
    if key.startswith('scoring:'):
        return RuleSpec(SCORING, scores=tuple(_parse_int_list(key.split(':', 1)[1])))
    if key.startswith('condorcetified:'):
        return RuleSpec(CONDORCETIFIED, scores=tuple(_parse_int_list(key.split(':', 1)[1])))
    if key.startswith('mrse:'):
        body = key.split(':', 1)[1].strip()
        groups = re.findall(r'\[[^\[\]]*\]', body[1:-1] if body.startswith('[[') else body)
        if not groups:
            raise ValidationError(f"bad MRSE component list {text!r}")
        return RuleSpec(MRSE, components=tuple(tuple(_parse_int_list(g)) for g in groups))
    raise ValidationError(f"unknown rule {text!r}")


@dataclass(frozen=True)
class TieBreakOrder:
    """Priority over alternatives; earlier means favored"""
    priority: Tuple[int, ...]
    _rank: Dict[int, int] = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        priority = tuple(int(a) for a in self.priority)
        if sorted(priority) != list(range(1, len(priority) + 1)):
            raise ValidationError(f"tie-break order must be a permutation: {list(priority)}")
        object.__setattr__(self, 'priority', priority)
        object.__setattr__(self, '_rank', {a: i for i, a in enumerate(priority)})

    @classmethod
    def identity(cls, m: int) -> 'TieBreakOrder':
        return cls(tuple(range(1, m + 1)))

    @classmethod
    def parse(cls, text: str) -> 'TieBreakOrder':
        return cls(tuple(p for p in re.split(r'[>,\s]+', text.strip()) if p))

    def rank(self, a: int) -> int:
        return self._rank[a]

    def first(self, candidates: Iterable[int]) -> int:
        return min(candidates, key=self._rank.__getitem__)

    def last(self, candidates: Iterable[int]) -> int:
        return max(candidates, key=self._rank.__getitem__)


@dataclass(frozen=True)
class EliminationOrder:
    """order[0] is eliminated first; order[-1] is the winner"""
    order: Tuple[int, ...]

    @property
    def winner(self) -> int:
        return self.order[-1]

    def round_of(self, a: int) -> int:
        return self.order.index(a) + 1

    def __str__(self) -> str:
        return ' |> '.join(map(str, self.order))


# scoring

def scores(profile: Profile, s: Sequence[int], alive: Iterable[int] = None) -> Dict[int, Number]:
    """Total positional score of every alive alternative on the restricted profile"""
    alive = frozenset(alive) if alive is not None else frozenset(range(1, profile.m + 1))
    if len(s) != len(alive):
        raise ValidationError(f"scoring vector of length {len(s)} for {len(alive)} alternatives")
    totals: Dict[int, Number] = {a: 0 for a in alive}
    for order, weight in profile.items():
        pos = 0
        for a in order:
            if a in alive:
                if s[pos]:
                    totals[a] += weight * s[pos]
                pos += 1
    return totals


def _argmax(values: Dict[int, Number]) -> FrozenSet[int]:
    top = max(values.values())
    return frozenset(a for a, v in values.items() if v == top)


def _argmin(values: Dict[int, Number]) -> FrozenSet[int]:
    low = min(values.values())
    return frozenset(a for a, v in values.items() if v == low)


def scoring_cowinners(s: Sequence[int], profile: Profile) -> FrozenSet[int]:
    return _argmax(scores(profile, s))


# MRSE with parallel-universes tie-breaking

def _check_put_bound(m: int, what: str):
    if m > Config.PUT_MAX_ALTERNATIVES:
        raise BoundExceededError(
            f"{what} with m={m} exceeds the PUT bound {Config.PUT_MAX_ALTERNATIVES}; use resolute mode",
            'PUT_MAX_ALTERNATIVES')


class _MrseUniverses:
    """Memoized execution tree of an MRSE rule on one profile"""

    def __init__(self, rule: RuleSpec, profile: Profile):
        rule.check_m(profile.m)
        self.rule = rule
        self.profile = profile
        self._losers: Dict[FrozenSet[int], FrozenSet[int]] = {}
        self._winners: Dict[FrozenSet[int], FrozenSet[int]] = {}
        self._suffixes: Dict[FrozenSet[int], Set[Tuple[int, ...]]] = {}

    def losers(self, alive: FrozenSet[int]) -> FrozenSet[int]:
        if alive not in self._losers:
            self._losers[alive] = _argmin(scores(self.profile, self.rule.component(len(alive)), alive))
        return self._losers[alive]

    def winners(self, alive: FrozenSet[int]) -> FrozenSet[int]:
        if len(alive) == 1:
            return alive
        if alive not in self._winners:
            result: Set[int] = set()
            for loser in self.losers(alive):
                result |= self.winners(alive - {loser})
            self._winners[alive] = frozenset(result)
        return self._winners[alive]

    def suffixes(self, alive: FrozenSet[int]) -> Set[Tuple[int, ...]]:
        if len(alive) == 1:
            return {tuple(alive)}
        if alive not in self._suffixes:
            result = set()
            for loser in self.losers(alive):
                for rest in self.suffixes(alive - {loser}):
                    result.add((loser,) + rest)
            self._suffixes[alive] = result
        return self._suffixes[alive]


def parallel_universes(rule: RuleSpec, profile: Profile) -> FrozenSet[EliminationOrder]:
    _check_put_bound(profile.m, "parallel universes")
    run = _MrseUniverses(rule, profile)
    return frozenset(EliminationOrder(o) for o in run.suffixes(frozenset(range(1, profile.m + 1))))


def mrse_cowinners(rule: RuleSpec, profile: Profile) -> FrozenSet[int]:
    _check_put_bound(profile.m, "irresolute MRSE")
    return _MrseUniverses(rule, profile).winners(frozenset(range(1, profile.m + 1)))


def possible_losing_rounds(rule: RuleSpec, profile: Profile, a: int) -> FrozenSet[int]:
    """Rounds (1-based) in which `a` drops out in some parallel universe"""
    if not 1 <= a <= profile.m:
        raise ValidationError(f"alternative {a} not in 1..{profile.m}")
    return frozenset(o.round_of(a) for o in parallel_universes(rule, profile) if o.winner != a)


def _resolve_mrse(rule: RuleSpec, profile: Profile, tiebreak: TieBreakOrder) -> int:
    rule.check_m(profile.m)
    alive = frozenset(range(1, profile.m + 1))
    while len(alive) > 1:
        losers = _argmin(scores(profile, rule.component(len(alive)), alive))
        alive = alive - {tiebreak.last(losers)}
    return next(iter(alive))


# majority-graph rules

def maximin_cowinners(profile: Profile) -> FrozenSet[int]:
    graph = wmg(profile)
    m = profile.m
    if m == 1:
        return frozenset({1})
    min_scores = {a: min(graph.w(a, b) for b in range(1, m + 1) if b != a) for a in range(1, m + 1)}
    return _argmax(min_scores)


def copeland_cowinners(profile: Profile, alpha=Fraction(1, 2)) -> FrozenSet[int]:
    alpha = Fraction(as_rational(alpha))
    graph = wmg(profile)
    m = profile.m
    totals: Dict[int, Number] = {}
    for a in range(1, m + 1):
        wins = sum(1 for b in range(1, m + 1) if b != a and graph.w(a, b) > 0)
        ties = sum(1 for b in range(1, m + 1) if b != a and graph.w(a, b) == 0)
        totals[a] = wins + alpha * ties
    return _argmax(totals)


def _creates_cycle(locked: Iterable[Tuple[int, int]], edge: Tuple[int, int]) -> bool:
    source, target = edge
    g = nx.DiGraph()
    g.add_nodes_from((source, target))
    g.add_edges_from(locked)
    return nx.has_path(g, target, source)


def _sources(locked: Iterable[Tuple[int, int]], m: int) -> FrozenSet[int]:
    targets = {b for _, b in locked}
    return frozenset(a for a in range(1, m + 1) if a not in targets)


def edge_groups(profile: Profile) -> List[List[Tuple[int, int]]]:
    """Strictly positive majority edges grouped by weight, heaviest first"""
    by_weight: Dict[Number, List[Tuple[int, int]]] = {}
    for a, b, w in wmg(profile).edges():
        by_weight.setdefault(w, []).append((a, b))
    return [by_weight[w] for w in sorted(by_weight, reverse=True)]


def _lock_group(locked: FrozenSet[Tuple[int, int]], group: Sequence[Tuple[int, int]]) -> Set[FrozenSet]:
    """All locked sets reachable by some ordering of one equal-weight group"""
    results: Set[FrozenSet] = set()
    seen: Set[Tuple[FrozenSet, FrozenSet]] = set()

    def visit(current: FrozenSet, remaining: FrozenSet):
        if (current, remaining) in seen:
            return
        seen.add((current, remaining))
        if not remaining:
            results.add(current)
            return
        for edge in remaining:
            nxt = current if _creates_cycle(current, edge) else current | {edge}
            visit(nxt, remaining - {edge})

    visit(locked, frozenset(group))
    return results


def ranked_pairs_cowinners(profile: Profile) -> FrozenSet[int]:
    _check_put_bound(profile.m, "irresolute ranked pairs")
    states: Set[FrozenSet] = {frozenset()}
    for group in edge_groups(profile):
        nxt: Set[FrozenSet] = set()
        for locked in states:
            nxt |= _lock_group(locked, group)
        states = nxt
    winners: Set[int] = set()
    for locked in states:
        winners |= _sources(locked, profile.m)
    return frozenset(winners)


def _resolve_ranked_pairs(profile: Profile, tiebreak: TieBreakOrder) -> int:
    edges = sorted(wmg(profile).edges(), key=lambda e: (-e[2], tiebreak.rank(e[0]), tiebreak.rank(e[1])))
    locked: List[Tuple[int, int]] = []
    for a, b, _ in edges:
        if not _creates_cycle(locked, (a, b)):
            locked.append((a, b))
    return tiebreak.first(_sources(locked, profile.m))


def strongest_paths(profile: Profile) -> List[List[Number]]:
    """Widest-path strengths over strictly positive margins; 0 means no path"""
    graph = wmg(profile)
    m = profile.m
    strength = [[max(graph.margin[i][j], 0) if i != j else 0 for j in range(m)] for i in range(m)]
    for k in range(m):
        for i in range(m):
            if i == k:
                continue
            for j in range(m):
                if j != i and j != k:
                    via = min(strength[i][k], strength[k][j])
                    if via > strength[i][j]:
                        strength[i][j] = via
    return strength


def schulze_cowinners(profile: Profile) -> FrozenSet[int]:
    strength = strongest_paths(profile)
    m = profile.m
    return frozenset(a for a in range(1, m + 1)
                     if all(strength[a - 1][b - 1] >= strength[b - 1][a - 1] for b in range(1, m + 1) if b != a))


def condorcetified_cowinners(s: Sequence[int], profile: Profile) -> FrozenSet[int]:
    cw = majority_structure(profile).cw
    if cw is not None:
        return frozenset({cw})
    return scoring_cowinners(s, profile)


# dispatch

def cowinners(rule: RuleSpec, profile: Profile) -> FrozenSet[int]:
    """Irresolute co-winner set"""
    rule.check_m(profile.m)
    if rule.kind == SCORING:
        return scoring_cowinners(rule.scores, profile)
    if rule.kind == MRSE:
        return mrse_cowinners(rule, profile)
    if rule.kind == MAXIMIN:
        return maximin_cowinners(profile)
    if rule.kind == COPELAND:
        return copeland_cowinners(profile, rule.alpha)
    if rule.kind == RANKED_PAIRS:
        return ranked_pairs_cowinners(profile)
    if rule.kind == SCHULZE:
        return schulze_cowinners(profile)
    return condorcetified_cowinners(rule.scores, profile)


def resolve(rule: RuleSpec, profile: Profile, tiebreak: TieBreakOrder = None) -> int:
    """Single winner of the deterministic refinement; r(empty) is the tiebreak-first alternative"""
    tiebreak = tiebreak or TieBreakOrder.identity(profile.m)
    if len(tiebreak.priority) != profile.m:
        raise ValidationError(f"tie-break order covers {len(tiebreak.priority)} alternatives, profile has {profile.m}")
    if profile.total == 0:
        return tiebreak.first(range(1, profile.m + 1))
    if rule.kind == MRSE:
        return _resolve_mrse(rule, profile, tiebreak)
    if rule.kind == RANKED_PAIRS:
        return _resolve_ranked_pairs(profile, tiebreak)
    return tiebreak.first(cowinners(rule, profile))
