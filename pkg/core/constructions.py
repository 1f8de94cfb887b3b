"""
Deterministic witness profiles

McGarvey realization of weighted majority graphs, participation (no-show)
violations for the Condorcet-consistent and MRSE families, and profiles whose
Condorcet winner differs from the unique scoring winner. Every generated
profile is re-checked with the rules/axioms evaluators before it is returned.

"others" in a ranking always means the remaining alternatives in ascending
order; reverse() is the full reversal.
"""
import logging
import math
from dataclasses import dataclass
from itertools import permutations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from core.axioms import sat_par
from core.errors import UnsupportedError, ValidationError
from core.profile import (Profile, Ranking, complete_order, majority_structure, prefers, reverse,
                          wmg)
from core.rules import (CONDORCETIFIED, COPELAND, MAXIMIN, MRSE, RANKED_PAIRS, SCHULZE, RuleSpec,
                        TieBreakOrder, resolve, scoring_cowinners, validate_scoring_vector)

logger = logging.getLogger(__name__)

EVEN = 0
ODD = 1


@dataclass(frozen=True)
class TargetWMG:
    """Desired integer margins; margins[a-1][b-1] = w(a, b)"""
    m: int
    margins: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.m < 2:
            raise ValidationError(f"a majority graph needs at least two alternatives, got m={self.m}")
        rows = tuple(tuple(int(x) for x in row) for row in self.margins)
        if len(rows) != self.m or any(len(row) != self.m for row in rows):
            raise ValidationError(f"margin matrix must be {self.m}x{self.m}")
        for a in range(self.m):
            if rows[a][a] != 0:
                raise ValidationError(f"w({a + 1},{a + 1}) must be 0")
            for b in range(a + 1, self.m):
                if rows[a][b] != -rows[b][a]:
                    raise ValidationError(f"margins not antisymmetric at ({a + 1},{b + 1}): "
                                          f"{rows[a][b]} vs {rows[b][a]}")
        object.__setattr__(self, 'margins', rows)

    @classmethod
    def from_edges(cls, m: int, edges: Mapping[Tuple[int, int], int]) -> 'TargetWMG':
        """Unlisted pairs get margin 0; each listed (a, b) also fixes w(b, a)"""
        rows = [[0] * m for _ in range(m)]
        for (a, b), w in edges.items():
            if a == b or not (1 <= a <= m and 1 <= b <= m):
                raise ValidationError(f"bad edge ({a},{b}) for m={m}")
            rows[a - 1][b - 1] = w
            rows[b - 1][a - 1] = -w
        return cls(m, tuple(tuple(r) for r in rows))

    @classmethod
    def of(cls, profile: Profile) -> 'TargetWMG':
        profile.require_integral()
        return cls(profile.m, tuple(tuple(int(x) for x in row) for row in wmg(profile).margin))

    def w(self, a: int, b: int) -> int:
        return self.margins[a - 1][b - 1]

    @property
    def parity(self) -> Optional[int]:
        """Common parity of the off-diagonal margins, None when mixed"""
        found = {self.w(a, b) % 2 for a in range(1, self.m + 1) for b in range(a + 1, self.m + 1)}
        return found.pop() if len(found) == 1 else None

    def minus(self, profile: Profile) -> 'TargetWMG':
        graph = wmg(profile)
        return TargetWMG(self.m, tuple(
            tuple(int(self.margins[a][b] - graph.margin[a][b]) for b in range(self.m)) for a in range(self.m)))

    def minimal_n(self, parity: int, include: Sequence[Sequence[int]] = ()) -> int:
        """Fewest voters the McGarvey construction needs at this parity"""
        if self.parity is None:
            raise ValidationError("margins of mixed parity are not realizable")
        if self.parity != parity:
            raise ValidationError(f"margins are {'odd' if self.parity else 'even'}; no "
                                  f"{'odd' if parity else 'even'} n realizes them "
                                  f"(minimal feasible n={self.minimal_n(self.parity, include)})")
        rest = self
        used = 0
        if parity == ODD:
            base = _base_vote(self.m, include)
            rest = self.minus(Profile.from_rankings([base]))
            used = 1
        used += sum(abs(rest.w(a, b)) for a in range(1, self.m + 1) for b in range(a + 1, self.m + 1))
        return max(used + 2 * len(include), 1 if parity == ODD else 2)

    def to_dict(self) -> Dict:
        return {'m': self.m, 'margins': [list(row) for row in self.margins]}


def _base_vote(m: int, include: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    return tuple(include[0]) if include else tuple(range(1, m + 1))


def _raise_pair(m: int, a: int, b: int) -> List[Tuple[int, ...]]:
    """Two votes adding exactly +2 to w(a, b) and nothing elsewhere"""
    rest = tuple(c for c in range(1, m + 1) if c not in (a, b))
    return [(a, b) + rest, reverse(rest) + (a, b)]


def mcgarvey_profile(target: TargetWMG, n: int, include: Sequence[Sequence[int]] = ()) -> Profile:
    """n-profile whose weighted majority graph is exactly `target`.

    Every ranking in `include` appears in the result (together with its
    reverse). For odd n the first included ranking is the single unpaired vote.
    """
    m = target.m
    include = [tuple(complete_order(r, m)) for r in include]
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    parity = n % 2
    minimal = target.minimal_n(parity, include)
    if n < minimal:
        raise ValidationError(f"target needs at least n={minimal} voters at this parity, got n={n}")
    votes: Dict[Tuple[int, ...], int] = {}

    def put(order: Tuple[int, ...], count: int = 1):
        votes[order] = votes.get(order, 0) + count

    rest = target
    if parity == ODD:
        base = _base_vote(m, include)
        put(base)
        rest = target.minus(Profile.from_rankings([base]))
    for a in range(1, m + 1):
        for b in range(a + 1, m + 1):
            w = rest.w(a, b)
            if w == 0:
                continue
            winner, loser = (a, b) if w > 0 else (b, a)
            for order in _raise_pair(m, winner, loser):
                put(order, abs(w) // 2)
    for order in include:
        put(order)
        put(reverse(order))
    padding = n - sum(votes.values())
    identity = tuple(range(1, m + 1))
    put(identity, padding // 2)
    put(reverse(identity), padding // 2)
    profile = Profile.from_votes(m, [(c, o) for o, c in votes.items() if c])
    if TargetWMG.of(profile) != target or profile.n != n:
        raise ArithmeticError(f"McGarvey construction missed its target at n={n}")
    return profile


# participation violations

def _others(m: int, head: Iterable[int]) -> Tuple[int, ...]:
    head = set(head)
    return tuple(a for a in range(1, m + 1) if a not in head)


def _graph_target(m: int, core: Mapping[Tuple[int, int], int], first: int, step: int,
                  parity: int) -> TargetWMG:
    """Core edges on {1..4}; 1..4 beat every later alternative and later
    alternatives are oriented low to high, with distinct weights from `first`
    in steps of `step`. Even targets add 1 to every positive weight."""
    edges = dict(core)
    weight = first
    for a in range(1, 5):
        for i in range(5, m + 1):
            edges[(a, i)] = weight
            weight += step
    for i in range(5, m + 1):
        for j in range(i + 1, m + 1):
            edges[(i, j)] = weight
            weight += step
    if parity == EVEN:
        edges = {e: w + 1 for e, w in edges.items()}
    return TargetWMG.from_edges(m, edges)


_MAXIMIN_CORE = {(4, 1): 5, (3, 2): 5, (1, 2): 1, (1, 3): 9, (2, 4): 13, (3, 4): 17}
_RANKED_PAIRS_CORE = {(4, 1): 9, (3, 4): 9, (1, 2): 5, (1, 3): 13, (2, 4): 17, (2, 3): 21}
_SCHULZE_CORE = {(4, 1): 9, (2, 3): 9, (1, 2): 13, (1, 3): 5, (2, 4): 1, (3, 4): 17}


def _graph_plan(family: RuleSpec, m: int, parity: int) -> Tuple[TargetWMG, List[Tuple[int, ...]]]:
    if family.kind == MAXIMIN:
        target = _graph_target(m, _MAXIMIN_CORE, 21, 4, parity)
        r = complete_order((3, 2, 1, 4), m)
        return target, [r, reverse(r)]
    core = _RANKED_PAIRS_CORE if family.kind == RANKED_PAIRS else _SCHULZE_CORE
    target = _graph_target(m, core, 25 if family.kind == RANKED_PAIRS else 21, 4, parity)
    return target, [complete_order((2, 3, 1, 4), m), reverse(complete_order((3, 2, 1, 4), m))]


def _copeland_plan(family: RuleSpec, m: int) -> Tuple[TargetWMG, Tuple[int, ...]]:
    """Odd-n graph and the vote whose removal (or reversed addition) flips it"""
    if family.alpha > 0:
        edges = {(2, 3): 1, (3, 1): 3, (1, 2): 3}
        r = complete_order((4, 2, 3, 1), m)
    else:
        edges = {(2, 3): 3, (3, 1): 3, (1, 2): 3}
        r = complete_order((3, 2, 1, 4), m)
    for a in (1, 2, 3):
        for i in range(4, m + 1):
            edges[(a, i)] = 3
    if family.alpha == 0:
        edges[(1, 4)] = 1
    for i in range(4, m + 1):
        for j in range(i + 1, m + 1):
            edges[(i, j)] = 3
    return TargetWMG.from_edges(m, edges), r


def _copeland_rotation(m: int, tiebreak: TieBreakOrder) -> Dict[int, int]:
    """Rotation of the 1-2-3 cycle sending 1 to the tie-break favourite among them"""
    shift = tiebreak.first((1, 2, 3)) - 1
    mapping = {a: (a - 1 + shift) % 3 + 1 for a in (1, 2, 3)}
    mapping.update({a: a for a in range(4, m + 1)})
    return mapping


# MRSE

# each of 1..4 on top three times, followed by the other three in a cycle
_MRSE_CYCLIC = (
    (1, 2, 3, 4), (1, 3, 4, 2), (1, 4, 2, 3),
    (2, 1, 4, 3), (2, 4, 3, 1), (2, 3, 1, 4),
    (3, 1, 4, 2), (3, 4, 2, 1), (3, 2, 1, 4),
    (4, 1, 2, 3), (4, 2, 3, 1), (4, 3, 1, 2),
)
# 1 and 2 exchanged in two of the 24 orders of {1,2,3,4}
_MRSE_SWAPS = {(3, 2, 4, 1): (3, 1, 4, 2), (4, 1, 3, 2): (4, 2, 3, 1)}


def _mrse_tie_block(m: int, s4: Sequence[int]) -> Profile:
    """Odd number of votes on which 3 and 4 score the same with four alive"""
    d1, d2 = s4[0] - s4[1], s4[1] - s4[2]
    if d1 == 0:
        return Profile.from_rankings([complete_order((3, 4, 1, 2), m)])
    if d2 == 0:
        return Profile.from_rankings([complete_order((1, 3, 4, 2), m)])
    g = math.gcd(d1, d2)
    d1, d2 = d1 // g, d2 // g
    if d1 % 2:
        return Profile.from_votes(m, [(d1 + d2, complete_order((1, 3, 4, 2), m)),
                                      (d2, complete_order((4, 1, 3, 2), m))])
    return Profile.from_votes(m, [(d1 + d2, complete_order((3, 4, 1, 2), m)),
                                  (d1, complete_order((4, 1, 3, 2), m))])


def mrse_core_profile(rule: RuleSpec) -> Profile:
    """Odd-size profile on which 5..m drop out in ascending order, then 3 and 4
    tie for last; eliminating 3 elects 1 and eliminating 4 elects 2"""
    m = rule.m
    if m < 4:
        raise UnsupportedError(f"the MRSE participation construction needs m >= 4, got m={m}")
    tail = tuple(range(5, m + 1))
    s3, s4 = rule.component(3), rule.component(4)
    p21 = Profile.from_votes(m, [
        (1, (1,) + tail + (3, 4, 2)),
        (1, (1,) + tail + (4, 3, 2)),
        (3, (1,) + tail + (2, 4, 3)),
        (3, (2,) + tail + (1, 3, 4)),
    ])
    p22 = _mrse_tie_block(m, s4)
    p2 = (p22.n + 1) * p21 + p22
    p3_star = Profile.from_rankings(
        [order + tail for order in _MRSE_CYCLIC]
        + [_MRSE_SWAPS.get(order, order) + tail for order in permutations((1, 2, 3, 4))])
    p3 = ((s3[0] - s3[-1]) * (p2.n + 2) + 1) * p3_star
    core = p2 + p3
    if m == 4:
        return core
    d = max(c[0] - c[-1] for c in rule.components)
    block1 = Profile.from_rankings(head + order for head in permutations((1, 2, 3, 4))
                                   for order in permutations(tail))
    block2 = Profile.from_votes(m, [(i - 4, (i,) + order) for i in tail
                                    for order in permutations(_others(m, (i,)))])
    k2 = d * core.n + 2 * d + 1
    k1 = d * (k2 * block2.n + core.n) + d + 1
    return k1 * block1 + k2 * block2 + core


def _mrse_copies(rule: RuleSpec, parity: int) -> int:
    s3 = rule.component(3)
    return math.factorial(rule.m) * (s3[0] - s3[-1]) + (1 if parity == ODD else 0)


def _mrse_profile(rule: RuleSpec, n: int) -> Profile:
    m = rule.m
    core = mrse_core_profile(rule)
    copies = _mrse_copies(rule, n % 2)
    n1 = copies * core.n
    if n < n1:
        raise ValidationError(f"{rule.label}: construction needs n >= {n1} at this parity, got n={n}")
    size = math.factorial(m)
    rounds = (n - n1) // size
    pairs = (n - n1 - rounds * size) // 2
    profile = copies * core
    if rounds:
        profile = profile + Profile.uniform(m, 1).scale(rounds)
    if pairs:
        profile = profile + Profile.from_votes(m, [(pairs, complete_order((1, 2, 3, 4), m)),
                                                   (pairs, complete_order((2, 1, 4, 3), m))])
    return profile


# Condorcetified scoring

def _plurality_like(s: Sequence[int]) -> bool:
    return s[1] == s[-1]


def _first_drop(s: Sequence[int]) -> int:
    """Smallest k >= 2 with s_k > s_{k+1} (1-based)"""
    return next(k for k in range(2, len(s)) if s[k - 1] > s[k])


def _split_order(m: int, k: int, head: Sequence[int], middle: int) -> Tuple[int, ...]:
    """[head[0] > head[1] > A1 > middle > A2] with A1 = 4..k+1 and A2 = k+2..m"""
    a1 = tuple(range(4, k + 2))
    a2 = tuple(range(k + 2, m + 1))
    return tuple(head) + a1 + (middle,) + a2


def _condorcetified_star(s: Sequence[int]) -> Profile:
    m = len(s)
    k = _first_drop(s)
    p1 = Profile.from_votes(m, [
        (4, _split_order(m, k, (1, 2), 3)),
        (3, _split_order(m, k, (2, 3), 1)),
        (2, _split_order(m, k, (3, 1), 2)),
        (1, _split_order(m, k, (2, 1), 3)),
    ])
    p2 = Profile.from_rankings(head + order for head in permutations((1, 2, 3))
                               for order in permutations(range(4, m + 1)))
    return p1 + 6 * p2


def _condorcetified_threshold(s: Sequence[int], parity: int) -> int:
    if _plurality_like(s):
        return 17 if parity == ODD else 14
    size = _condorcetified_star(s).n
    return size * (size // 2 + 1) + (1 if parity == ODD else 0)


def _condorcetified_profile(s: Sequence[int], n: int) -> Profile:
    m = len(s)
    minimal = _condorcetified_threshold(s, n % 2)
    if n < minimal:
        raise ValidationError(f"condorcetified construction needs n >= {minimal} at this parity, got n={n}")
    if _plurality_like(s):
        # 1 is a weak Condorcet winner tied with 3; 2 leads first places by two
        if n % 2 == EVEN:
            counts = (n // 2 - 4, 3, n // 2 - 3, 4)
        else:
            counts = ((n - 9) // 2, 3, (n - 7) // 2, 5)
        heads = ((2, 1, 3), (2, 3, 1), (3, 1, 2), (1, 2, 3))
        return Profile.from_votes(m, [(c, complete_order(h, m)) for c, h in zip(counts, heads)])
    star = _condorcetified_star(s)
    body = n - (n % 2)
    copies = body // star.n
    pairs = (body - copies * star.n) // 2
    profile = copies * star
    extra = [(pairs, complete_order((2, 1, 3), m)), (pairs, complete_order((2, 3, 1), m))]
    if n % 2:
        extra.append((1, complete_order((2, 1, 3), m)))
    return profile + Profile.from_votes(m, [(c, o) for c, o in extra if c])


# dispatch

def _check_family(family: RuleSpec, m: int):
    if family.kind not in (MAXIMIN, RANKED_PAIRS, SCHULZE, COPELAND, MRSE, CONDORCETIFIED):
        raise UnsupportedError(f"no participation construction for {family.label}")
    family.check_m(m)
    if m < 4:
        raise UnsupportedError(f"participation constructions need m >= 4, got m={m}")


def par_violation_threshold(family: RuleSpec, m: int, parity: int) -> int:
    """Smallest n of the given parity the construction supports"""
    _check_family(family, m)
    if parity not in (EVEN, ODD):
        raise ValidationError(f"parity must be 0 (even) or 1 (odd), got {parity}")
    if family.kind in (MAXIMIN, RANKED_PAIRS, SCHULZE):
        target, include = _graph_plan(family, m, parity)
        return target.minimal_n(parity, include)
    if family.kind == COPELAND:
        target, r = _copeland_plan(family, m)
        return target.minimal_n(ODD, [r]) + (1 if parity == EVEN else 0)
    if family.kind == MRSE:
        return _mrse_copies(family, parity) * mrse_core_profile(family).n
    return _condorcetified_threshold(family.scores, parity)


def _candidates(family: RuleSpec, m: int, parity: int,
                tiebreak: TieBreakOrder = None) -> List[Tuple[int, ...]]:
    """Abstaining votes the construction is designed around, preferred first"""
    if family.kind in (MAXIMIN, RANKED_PAIRS, SCHULZE):
        return _graph_plan(family, m, parity)[1]
    if family.kind == COPELAND:
        rotation = _copeland_rotation(m, tiebreak or TieBreakOrder.identity(m))
        r = tuple(rotation[a] for a in _copeland_plan(family, m)[1])
        return [r] if parity == ODD else [reverse(r)]
    if family.kind == MRSE:
        return [complete_order((4, 2, 1, 3), m), complete_order((3, 1, 2, 4), m)]
    k = 2 if _plurality_like(family.scores) else _first_drop(family.scores)
    return [complete_order((3, 1, 2), m), _split_order(m, k, (3, 1), 2)]


def _witness(family: RuleSpec, profile: Profile, candidates: Sequence[Tuple[int, ...]],
             tiebreak: TieBreakOrder) -> Optional[Ranking]:
    before = resolve(family, profile, tiebreak)
    for order in candidates:
        if profile.weight(order) == 0 or order[0] == before:
            continue
        after = resolve(family, profile.remove(order), tiebreak)
        if prefers(order, after, before):
            return Ranking(order)
    verdict = sat_par(family, profile, tiebreak)
    return None if verdict.satisfied else Ranking(tuple(verdict.witness['ranking']))


def par_violation_profile(family: RuleSpec, m: int, n: int,
                          tiebreak: TieBreakOrder = None) -> Tuple[Profile, Ranking]:
    """n-profile on which the resolved rule violates participation, and the
    ranking of a voter who gains by abstaining"""
    _check_family(family, m)
    tiebreak = tiebreak or TieBreakOrder.identity(m)
    parity = n % 2
    if family.kind != MRSE:
        minimal = par_violation_threshold(family, m, parity)
        if n < minimal:
            raise ValidationError(f"{family.label}: construction needs n >= {minimal} for "
                                  f"{'odd' if parity else 'even'} n, got n={n}")
    if family.kind in (MAXIMIN, RANKED_PAIRS, SCHULZE):
        target, include = _graph_plan(family, m, parity)
        profile = mcgarvey_profile(target, n, include)
    elif family.kind == COPELAND:
        target, r = _copeland_plan(family, m)
        if parity == ODD:
            profile = mcgarvey_profile(target, n, [r])
        else:
            profile = mcgarvey_profile(target, n - 1, [r]).add(reverse(r))
        profile = profile.relabel(_copeland_rotation(m, tiebreak))
    elif family.kind == MRSE:
        profile = _mrse_profile(family, n)
    else:
        profile = _condorcetified_profile(family.scores, n)
    witness = _witness(family, profile, _candidates(family, m, parity, tiebreak), tiebreak)
    if witness is None:
        if tiebreak != TieBreakOrder.identity(m):
            raise UnsupportedError(f"{family.label}: construction does not violate participation "
                                   f"under tie-break {'>'.join(map(str, tiebreak.priority))}")
        raise ArithmeticError(f"{family.label}: constructed {n}-profile does not violate participation")
    logger.debug(f"{family.label} m={m} n={n}: {profile.support_size} distinct rankings, witness {witness}")
    return profile, witness


# Condorcet winner vs scoring winner

def cw_scoring_gap_bound(m: int) -> int:
    return 8 * m + 49


def _relabel_map(m: int, pins: Mapping[int, int]) -> Dict[int, int]:
    sources = [a for a in range(1, m + 1) if a not in pins]
    targets = [a for a in range(1, m + 1) if a not in pins.values()]
    mapping = dict(pins)
    mapping.update(zip(sources, targets))
    return mapping


def cw_scoring_gap_profile(s: Sequence[int], m: int, n: int, a: int, b: int) -> Profile:
    """n-profile with Condorcet winner a whose unique s-scoring winner is b"""
    s = validate_scoring_vector(s)
    if len(s) != m:
        raise ValidationError(f"scoring vector has {len(s)} entries, expected m={m}")
    if m < 3:
        raise UnsupportedError(f"needs m >= 3, got m={m}")
    if a == b or not (1 <= a <= m and 1 <= b <= m):
        raise ValidationError(f"need two different alternatives in 1..{m}, got a={a}, b={b}")
    bound = cw_scoring_gap_bound(m)
    if n < bound:
        raise ValidationError(f"construction needs n >= {bound} for m={m}, got n={n}")
    if _plurality_like(s):
        f = (n - 1) // 2
        profile = Profile.from_votes(m, [
            (f, complete_order((2, 1, 3), m)),
            (f - 1, complete_order((3, 1, 2), m)),
            (n + 1 - 2 * f, complete_order((1, 2, 3), m)),
        ])
        winner = 2
    else:
        k = _first_drop(s)
        star = Profile.from_votes(m, [
            (3, _split_order(m, k, (1, 2), 3)),
            (2, _split_order(m, k, (2, 3), 1)),
            (1, _split_order(m, k, (3, 1), 2)),
            (1, _split_order(m, k, (2, 1), 3)),
        ])
        # alternatives 4..k+1 collect s2 from every star vote and may outscore 2
        winner = 2
        if k >= 3 and 3 * s[0] + 3 * s[1] + s[k] < 7 * s[k - 1]:
            winner = 4
        rest = _others(m, (winner,))
        shifts = [(winner,) + rest[j:] + rest[:j] for j in range(m - 1)]
        copies = (n - m + 1) // 7
        remainder = n - m + 1 - 7 * copies
        profile = copies * star + Profile.from_rankings(shifts)
        if remainder:
            profile = profile.add((winner,) + rest, remainder)
    profile = profile.relabel(_relabel_map(m, {1: a, winner: b}))
    cw = majority_structure(profile).cw
    top = scoring_cowinners(s, profile)
    if cw != a or top != frozenset({b}) or profile.n != n:
        raise ArithmeticError(f"gap construction for {list(s)} at n={n} gave CW={cw}, winners={sorted(top)}")
    return profile
