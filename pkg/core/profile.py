"""
Rankings, profiles, histograms and majority structure
All weights and margins are exact rationals (int or Fraction)
"""
import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from core.errors import ValidationError

Number = Union[int, Fraction]

# Column order used by the published m=3 tables
TABLE_COLUMNS_M3 = ((1, 2, 3), (1, 3, 2), (2, 3, 1), (3, 2, 1), (2, 1, 3), (3, 1, 2))

_LINE_RE = re.compile(r'^\s*([0-9]+(?:/[0-9]+)?)\s*:\s*(.+?)\s*$')


def as_rational(value) -> Number:
    """Parse int / Fraction / 'p/q' string; integral values come back as int"""
    if isinstance(value, bool):
        raise ValidationError(f"not a number: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        raise ValidationError(f"floats are not exact, pass 'p/q' instead: {value!r}")
    try:
        q = Fraction(str(value).strip()) if isinstance(value, str) else Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError):
        raise ValidationError(f"not a rational number: {value!r}")
    return q.numerator if q.denominator == 1 else q


def rational_str(value: Number) -> str:
    return str(Fraction(value))


@lru_cache(maxsize=None)
def all_rankings(m: int) -> Tuple[Tuple[int, ...], ...]:
    """All rankings over 1..m in canonical (lexicographic) index order"""
    return tuple(permutations(range(1, m + 1)))


def _check_permutation(order: Sequence[int]) -> Tuple[int, ...]:
    try:
        order = tuple(int(a) for a in order)
    except (TypeError, ValueError):
        raise ValidationError(f"ranking must contain integer alternatives: {order!r}")
    if sorted(order) != list(range(1, len(order) + 1)):
        raise ValidationError(f"not a permutation of 1..{len(order)}: {list(order)}")
    return order


def ranking_index(order: Sequence[int]) -> int:
    """Lexicographic rank of the permutation word"""
    order = _check_permutation(order)
    remaining = sorted(order)
    index = 0
    for a in order:
        pos = remaining.index(a)
        index += pos * math.factorial(len(remaining) - 1)
        remaining.pop(pos)
    return index


def ranking_from_index(index: int, m: int) -> Tuple[int, ...]:
    if m < 1 or not 0 <= index < math.factorial(m):
        raise ValidationError(f"ranking index {index} out of range for m={m}")
    remaining = list(range(1, m + 1))
    order = []
    for k in range(m, 0, -1):
        pos, index = divmod(index, math.factorial(k - 1))
        order.append(remaining.pop(pos))
    return tuple(order)


def reverse(order: Sequence[int]) -> Tuple[int, ...]:
    return tuple(reversed(tuple(order)))


def complete_order(head: Sequence[int], m: int) -> Tuple[int, ...]:
    """head followed by the remaining alternatives in ascending order ("others")"""
    head = tuple(head)
    rest = tuple(a for a in range(1, m + 1) if a not in head)
    return _check_permutation(head + rest)


@dataclass(frozen=True)
class Ranking:
    """A linear order over 1..m, top to bottom"""
    order: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'order', _check_permutation(self.order))

    @classmethod
    def from_index(cls, index: int, m: int) -> 'Ranking':
        return cls(ranking_from_index(index, m))

    @classmethod
    def parse(cls, text: str) -> 'Ranking':
        parts = [p for p in re.split(r'[>,\s]+', text.strip()) if p]
        return cls(tuple(parts))

    @property
    def m(self) -> int:
        return len(self.order)

    @property
    def index(self) -> int:
        return ranking_index(self.order)

    def position(self, a: int) -> int:
        return self.order.index(a)

    def prefers(self, a: int, b: int) -> bool:
        return self.order.index(a) < self.order.index(b)

    def reversed(self) -> 'Ranking':
        return Ranking(reverse(self.order))

    def __str__(self) -> str:
        return '>'.join(str(a) for a in self.order)


def prefers(order: Sequence[int], a: int, b: int) -> bool:
    return order.index(a) < order.index(b)


class Profile:
    """Weighted multiset of rankings over m alternatives

    Weights are keyed by canonical ranking index. `signed=True` marks a
    fractional profile that may carry negative weights (geometry use only).
    """

    __slots__ = ('m', '_weights', 'total', 'signed', 'labels')

    def __init__(self, m: int, weights: Mapping[int, Number] = None, signed: bool = False,
                 labels: Sequence[int] = None):
        if not isinstance(m, int) or m < 1:
            raise ValidationError(f"m must be a positive integer, got {m!r}")
        size = math.factorial(m)
        clean: Dict[int, Number] = {}
        for index, value in (weights or {}).items():
            if not isinstance(index, int) or not 0 <= index < size:
                raise ValidationError(f"ranking index {index!r} out of range for m={m}")
            value = as_rational(value)
            if value < 0 and not signed:
                raise ValidationError(f"negative weight {value} on ranking {ranking_from_index(index, m)}")
            if value != 0:
                clean[index] = value
        self.m = m
        self._weights = MappingProxyType(dict(sorted(clean.items())))
        self.total = as_rational(sum(clean.values(), 0))
        self.signed = signed
        self.labels = tuple(labels) if labels is not None else tuple(range(1, m + 1))
        if len(self.labels) != m:
            raise ValidationError(f"expected {m} labels, got {len(self.labels)}")

    # construction

    @classmethod
    def from_votes(cls, m: int, votes: Iterable[Tuple[Number, Sequence[int]]]) -> 'Profile':
        """votes: (count, order) pairs; repeated orders are merged"""
        weights: Dict[int, Number] = {}
        for count, order in votes:
            if len(order) != m:
                raise ValidationError(f"ranking {list(order)} has {len(order)} alternatives, expected {m}")
            index = ranking_index(order)
            weights[index] = weights.get(index, 0) + as_rational(count)
        return cls(m, weights)

    @classmethod
    def from_rankings(cls, rankings: Iterable[Sequence[int]]) -> 'Profile':
        rankings = [tuple(r) for r in rankings]
        if not rankings:
            raise ValidationError("no rankings given")
        return cls.from_votes(len(rankings[0]), [(1, r) for r in rankings])

    @classmethod
    def uniform(cls, m: int, weight: Number = None) -> 'Profile':
        size = math.factorial(m)
        value = as_rational(weight) if weight is not None else Fraction(1, size)
        return cls(m, {i: value for i in range(size)})

    @classmethod
    def empty(cls, m: int) -> 'Profile':
        return cls(m, {})

    @classmethod
    def from_vector(cls, m: int, entries: Sequence[Number], signed: bool = False) -> 'Profile':
        if len(entries) != math.factorial(m):
            raise ValidationError(f"expected {math.factorial(m)} entries, got {len(entries)}")
        return cls(m, {i: v for i, v in enumerate(entries)}, signed=signed)

    @classmethod
    def from_table_columns(cls, weights: Sequence[Number]) -> 'Profile':
        """m=3 weights listed in the (123,132,231,321,213,312) column order"""
        if len(weights) != 6:
            raise ValidationError("expected six column weights")
        return cls.from_votes(3, zip(weights, TABLE_COLUMNS_M3))

    # access

    @property
    def weights(self) -> Mapping[int, Number]:
        return self._weights

    def items(self) -> Iterator[Tuple[Tuple[int, ...], Number]]:
        """(order, weight) pairs in index order"""
        table = all_rankings(self.m) if self.m <= 9 else None
        for index, value in self._weights.items():
            order = table[index] if table is not None else ranking_from_index(index, self.m)
            yield order, value

    def weight(self, ranking: Union[int, Sequence[int]]) -> Number:
        index = ranking if isinstance(ranking, int) else ranking_index(ranking)
        return self._weights.get(index, 0)

    @property
    def support_size(self) -> int:
        return len(self._weights)

    @property
    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v in self._weights.values())

    @property
    def n(self) -> int:
        """Voter count of an integer profile"""
        self.require_integral()
        return int(self.total)

    def require_integral(self):
        if self.signed or not self.is_integral:
            raise ValidationError("operation requires an integer profile")

    # arithmetic

    def __add__(self, other: 'Profile') -> 'Profile':
        if not isinstance(other, Profile):
            return NotImplemented
        if other.m != self.m:
            raise ValidationError(f"cannot merge profiles over {self.m} and {other.m} alternatives")
        merged = dict(self._weights)
        for index, value in other._weights.items():
            merged[index] = merged.get(index, 0) + value
        return Profile(self.m, merged, signed=self.signed or other.signed, labels=self.labels)

    def scale(self, factor: Number) -> 'Profile':
        factor = as_rational(factor)
        if factor < 0 and not self.signed:
            raise ValidationError("negative scaling of a non-signed profile")
        return Profile(self.m, {i: v * factor for i, v in self._weights.items()},
                       signed=self.signed, labels=self.labels)

    def __rmul__(self, factor: Number) -> 'Profile':
        return self.scale(factor)

    def add(self, order: Sequence[int], count: Number = 1) -> 'Profile':
        return self + Profile.from_votes(self.m, [(count, order)])

    def remove(self, ranking: Union[int, Sequence[int]], count: Number = 1) -> 'Profile':
        """Profile with `count` copies of a ranking taken out"""
        index = ranking if isinstance(ranking, int) else ranking_index(ranking)
        count = as_rational(count)
        current = self._weights.get(index, 0)
        if current < count and not self.signed:
            raise ValidationError(
                f"cannot remove {count} of {ranking_from_index(index, self.m)}: only {current} present")
        weights = dict(self._weights)
        weights[index] = current - count
        return Profile(self.m, weights, signed=self.signed, labels=self.labels)

    def normalized(self) -> 'Profile':
        if self.total == 0:
            raise ValidationError("cannot normalize an empty profile")
        return self.scale(Fraction(1) / Fraction(self.total))

    def relabel(self, mapping: Mapping[int, int]) -> 'Profile':
        """Apply the alternative permutation a -> mapping[a] to every ranking"""
        perm = [mapping.get(a, a) for a in range(1, self.m + 1)]
        _check_permutation(perm)
        weights: Dict[int, Number] = {}
        for order, value in self.items():
            index = ranking_index([perm[a - 1] for a in order])
            weights[index] = weights.get(index, 0) + value
        return Profile(self.m, weights, signed=self.signed)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Profile) and self.m == other.m
                and dict(self._weights) == dict(other._weights))

    def __hash__(self) -> int:
        return hash((self.m, tuple(self._weights.items())))

    def __repr__(self) -> str:
        body = ', '.join(f"{rational_str(v)}x[{'>'.join(map(str, o))}]" for o, v in self.items())
        return f"Profile(m={self.m}, {{{body}}})"


@dataclass(frozen=True)
class Histogram:
    """Length-m! vector of weights in canonical ranking order"""
    m: int
    entries: Tuple[Number, ...]

    def l1(self) -> Number:
        return as_rational(sum((abs(e) for e in self.entries), 0))

    def to_dict(self) -> Dict:
        return {'m': self.m, 'entries': [rational_str(e) for e in self.entries]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: Mapping) -> 'Histogram':
        m = int(data['m'])
        entries = tuple(as_rational(e) for e in data['entries'])
        if len(entries) != math.factorial(m):
            raise ValidationError(f"histogram for m={m} needs {math.factorial(m)} entries")
        return cls(m, entries)

    def to_profile(self, signed: bool = False) -> Profile:
        return Profile.from_vector(self.m, self.entries, signed=signed)


def histogram(profile: Profile) -> Histogram:
    size = math.factorial(profile.m)
    return Histogram(profile.m, tuple(profile.weights.get(i, 0) for i in range(size)))


@dataclass(frozen=True)
class WeightedMajorityGraph:
    """margin[a-1][b-1] = w(a, b) = P[a > b] - P[b > a]"""
    m: int
    margin: Tuple[Tuple[Number, ...], ...]

    def w(self, a: int, b: int) -> Number:
        return self.margin[a - 1][b - 1]

    def __add__(self, other: 'WeightedMajorityGraph') -> 'WeightedMajorityGraph':
        if other.m != self.m:
            raise ValidationError("majority graphs over different alternative sets")
        return WeightedMajorityGraph(self.m, tuple(
            tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(self.margin, other.margin)))

    def edges(self) -> List[Tuple[int, int, Number]]:
        """Strictly positive edges (a, b, w)"""
        return [(a, b, self.w(a, b)) for a in range(1, self.m + 1)
                for b in range(1, self.m + 1) if a != b and self.w(a, b) > 0]

    def to_dict(self) -> Dict:
        return {'m': self.m, 'margin': [[rational_str(x) for x in row] for row in self.margin]}


def wmg(profile: Profile) -> WeightedMajorityGraph:
    m = profile.m
    pref = [[0] * m for _ in range(m)]
    for order, value in profile.items():
        for i, a in enumerate(order):
            row = pref[a - 1]
            for b in order[i + 1:]:
                row[b - 1] += value
    return WeightedMajorityGraph(m, tuple(
        tuple(as_rational(pref[a][b] - pref[b][a]) for b in range(m)) for a in range(m)))


def umg(profile: Union[Profile, WeightedMajorityGraph]) -> Tuple[Tuple[int, ...], ...]:
    """Ternary relation: 1 beats, 0 tied, -1 loses"""
    graph = profile if isinstance(profile, WeightedMajorityGraph) else wmg(profile)
    return tuple(tuple((x > 0) - (x < 0) for x in row) for row in graph.margin)


@dataclass(frozen=True)
class MajorityStructure:
    umg: Tuple[Tuple[int, ...], ...]
    cw: Optional[int]
    wcw: FrozenSet[int]
    acw: FrozenSet[int]
    condorcet_loser: Optional[int]

    def to_dict(self) -> Dict:
        return {
            'cw': self.cw,
            'wcw': sorted(self.wcw),
            'acw': sorted(self.acw),
            'condorcet_loser': self.condorcet_loser,
        }


def majority_structure(source: Union[Profile, WeightedMajorityGraph]) -> MajorityStructure:
    relation = umg(source)
    m = len(relation)
    alts = range(1, m + 1)

    def beats_all(a: int, allowed: Iterable[int] = ()) -> bool:
        return all(relation[a - 1][b - 1] > 0 for b in alts if b != a and b not in allowed)

    cw = next((a for a in alts if beats_all(a)), None)
    wcw = frozenset(a for a in alts if all(relation[a - 1][b - 1] >= 0 for b in alts if b != a))
    acw: FrozenSet[int] = frozenset()
    if cw is None:
        for a in alts:
            for b in alts:
                if a < b and relation[a - 1][b - 1] == 0 and beats_all(a, (b,)) and beats_all(b, (a,)):
                    acw = frozenset((a, b))
    loser = None
    if m >= 2:
        loser = next((a for a in alts if all(relation[a - 1][b - 1] < 0 for b in alts if b != a)), None)
    return MajorityStructure(relation, cw, wcw, acw, loser)


def restrict(profile: Profile, alive: Iterable[int]) -> Profile:
    """Project every ranking onto `alive`; alternatives are renumbered 1..k in
    ascending order and the original ids kept in `labels`"""
    alive = sorted(set(alive))
    if not alive:
        raise ValidationError("cannot restrict to an empty alternative set")
    if alive[0] < 1 or alive[-1] > profile.m:
        raise ValidationError(f"alternatives {alive} not within 1..{profile.m}")
    new_id = {a: i + 1 for i, a in enumerate(alive)}
    weights: Dict[int, Number] = {}
    for order, value in profile.items():
        index = ranking_index([new_id[a] for a in order if a in new_id])
        weights[index] = weights.get(index, 0) + value
    labels = tuple(profile.labels[a - 1] for a in alive)
    return Profile(len(alive), weights, signed=profile.signed, labels=labels)


def parse_profile_text(text: str) -> Profile:
    """Parse lines of `<weight>: a1>a2>...>am`; `#` starts a comment"""
    votes = []
    m = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        match = _LINE_RE.match(line)
        if not match:
            raise ValidationError(f"line {lineno}: expected '<weight>: a1>a2>...', got {raw.strip()!r}")
        weight = as_rational(match.group(1))
        try:
            order = tuple(int(a) for a in match.group(2).split('>'))
        except ValueError:
            raise ValidationError(f"line {lineno}: bad ranking {match.group(2)!r}")
        if m is None:
            m = len(order)
        elif len(order) != m:
            raise ValidationError(f"line {lineno}: ranking has {len(order)} alternatives, expected {m}")
        try:
            _check_permutation(order)
        except ValidationError as e:
            raise ValidationError(f"line {lineno}: {e}")
        votes.append((weight, order))
    if m is None:
        raise ValidationError("profile text contains no rankings")
    return Profile.from_votes(m, votes)


def format_profile_text(profile: Profile, header: Sequence[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines += [f"{rational_str(v)}: {'>'.join(map(str, o))}" for o, v in profile.items()]
    return '\n'.join(lines) + '\n'
