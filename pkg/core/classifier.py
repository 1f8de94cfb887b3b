"""
Asymptotic smoothed-satisfaction labels for the Condorcet criterion and
participation over a finite strictly positive preference model

Every "there is a mixture in CH(Pi)" clause is one exact LP per sign pattern;
"for every mixture" clauses are decided by refuting their negation.
"""
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from core.axioms import rule_satisfies_cl
from core.errors import BoundExceededError, UnsupportedError, ValidationError
from core.geometry import Constraint, MixtureWitness, mixture_feasibility, pair_vector, score_difference_vector
from core.model import (
    INDETERMINATE, LIKELY, MEDIUM, ONE, UNLIKELY, VERY_LIKELY, VERY_UNLIKELY, PreferenceModel,
)
from core.profile import Profile, majority_structure
from core.rules import (
    CONDORCET_CONSISTENT, MRSE, SCORING, RuleSpec, cowinners, possible_losing_rounds,
)
from utils.config import Config

logger = logging.getLogger(__name__)

EVEN = 'even'
ODD = 'odd'
BOTH = 'both'
PARITIES = (EVEN, ODD, BOTH)

VALIDITY = 'for all sufficiently large n of the given parity'


@dataclass
class AsymptoticCase:
    label: str
    parity: str
    clause: str
    witness: Optional[MixtureWitness] = None
    ell: Optional[int] = None
    note: str = VALIDITY

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'label': self.label,
            'parity': self.parity,
            'clause': self.clause,
            'witness': self.witness.to_dict() if self.witness is not None else None,
            'note': self.note,
        }
        if self.ell is not None:
            data['ell'] = self.ell
        return data


def _check_parity(parity: str) -> str:
    parity = parity.lower()
    if parity not in (EVEN, ODD):
        raise ValidationError(f"parity must be 'even' or 'odd', got {parity!r}")
    return parity


class _Forms:
    """Cached Pair and score-difference vectors for one m"""

    def __init__(self, m: int):
        self.m = m
        self._pairs: Dict[Tuple[int, int], Tuple[int, ...]] = {}
        self._diffs: Dict[Tuple, Tuple[int, ...]] = {}

    def pair(self, a: int, b: int) -> Tuple[int, ...]:
        if (a, b) not in self._pairs:
            self._pairs[(a, b)] = pair_vector(self.m, a, b)
        return self._pairs[(a, b)]

    def diff(self, s: Sequence[int], a: int, b: int, alive: FrozenSet[int] = None) -> Tuple[int, ...]:
        """score(a) - score(b) under s on the alive set"""
        alive = alive if alive is not None else frozenset(range(1, self.m + 1))
        key = (tuple(s), a, b, alive)
        if key not in self._diffs:
            self._diffs[key] = score_difference_vector(s, a, b, m=self.m, alive=alive)
        return self._diffs[key]

    def others(self, *excluded: int) -> List[int]:
        return [c for c in range(1, self.m + 1) if c not in excluded]

    # sign patterns

    def cw(self, a: int) -> List[Constraint]:
        return [(self.pair(a, c), '>0') for c in self.others(a)]

    def wcw(self, a: int) -> List[Constraint]:
        return [(self.pair(c, a), '<=0') for c in self.others(a)]

    def acw(self, a: int, b: int) -> List[Constraint]:
        rows = [(self.pair(a, b), '=0')]
        rows += [(self.pair(x, c), '>0') for x in (a, b) for c in self.others(a, b)]
        return rows

    def scoring_cowinner(self, s: Sequence[int], b: int) -> List[Constraint]:
        return [(self.diff(s, c, b), '<=0') for c in self.others(b)]

    def outscores(self, s: Sequence[int], c: int, a: int) -> List[Constraint]:
        return [(self.diff(s, c, a), '>0')]


def _first_witness(model: PreferenceModel, patterns: Iterable[List[Constraint]]) -> Optional[MixtureWitness]:
    for constraints in patterns:
        witness = mixture_feasibility(model, constraints)
        if witness is not None:
            return witness
    return None


def _check_model(model: PreferenceModel, m: int):
    if not isinstance(model, PreferenceModel):
        raise ValidationError("expected a PreferenceModel")
    if model.m != m:
        raise ValidationError(f"model over {model.m} alternatives, rule over {m}")
    if m < 3:
        raise UnsupportedError(f"smoothed Condorcet classification needs m >= 3, got {m}")


# positional scoring rules

def _scoring_vl_breakers(forms: _Forms, s: Sequence[int]) -> Iterable[List[Constraint]]:
    """Patterns with |WCW| * |co-winners u WCW| >= 2"""
    for a, b in combinations(range(1, forms.m + 1), 2):
        yield forms.wcw(a) + forms.wcw(b)
    for a, b in permutations(range(1, forms.m + 1), 2):
        yield forms.wcw(a) + forms.scoring_cowinner(s, b)


def _scoring_vu_patterns(forms: _Forms, s: Sequence[int]) -> Iterable[List[Constraint]]:
    """Condorcet winner a outscored by some b"""
    for a, b in permutations(range(1, forms.m + 1), 2):
        yield forms.cw(a) + forms.outscores(s, b, a)


def _scoring_u_patterns(forms: _Forms, s: Sequence[int]) -> Iterable[List[Constraint]]:
    """ACW pair {a, b} with both outscored by a third alternative"""
    for a, b in combinations(range(1, forms.m + 1), 2):
        for c in forms.others(a, b):
            yield forms.acw(a, b) + forms.outscores(s, c, a) + forms.outscores(s, c, b)


def classify_cc_scoring(model: PreferenceModel, s: Sequence[int], parity: str) -> AsymptoticCase:
    """Smoothed Condorcet criterion of the positional scoring rule s"""
    parity = _check_parity(parity)
    s = RuleSpec(SCORING, scores=tuple(s)).scores
    m = len(s)
    _check_model(model, m)
    forms = _Forms(m)
    note = f"{VALIDITY} (n >= {8 * m + 49})"

    if _first_witness(model, _scoring_vl_breakers(forms, s)) is None:
        return AsymptoticCase(VERY_LIKELY, parity, 'every mixture has at most one weak Condorcet winner '
                              'and it is the unique co-winner whenever present', note=note)
    witness = _first_witness(model, _scoring_vu_patterns(forms, s))
    if witness is not None:
        return AsymptoticCase(VERY_UNLIKELY, parity, 'some mixture has a Condorcet winner that is not a co-winner',
                              witness, note=note)
    witness = _first_witness(model, _scoring_u_patterns(forms, s))
    if witness is not None:
        if parity == ODD:
            return AsymptoticCase(VERY_UNLIKELY, parity,
                                  'some mixture has two almost Condorcet winners, neither a co-winner',
                                  witness, note=note)
        return AsymptoticCase(UNLIKELY, parity, 'some mixture has two almost Condorcet winners, neither a co-winner',
                              witness, note=note)
    return AsymptoticCase(MEDIUM, parity, 'none of the other clauses holds', note=note)


# MRSE rules

def _loser_rows(forms: _Forms, rule: RuleSpec, alive: FrozenSet[int], losers: FrozenSet[int]) -> List[Constraint]:
    """`losers` is exactly the set of lowest scorers on `alive`"""
    s = rule.component(len(alive))
    ref = min(losers)
    rows = [(forms.diff(s, x, ref, alive), '=0') for x in sorted(losers) if x != ref]
    rows += [(forms.diff(s, ref, c, alive), '<0') for c in sorted(alive - losers)]
    return rows


def _tied_lowest(forms: _Forms, rule: RuleSpec, alive: FrozenSet[int], x: int) -> List[Constraint]:
    s = rule.component(len(alive))
    return [(forms.diff(s, x, c, alive), '<=0') for c in sorted(alive) if c != x]


def _subsets_by_size(alive: FrozenSet[int]) -> Iterable[FrozenSet[int]]:
    items = sorted(alive)
    for k in range(1, len(items) + 1):
        for combo in combinations(items, k):
            yield frozenset(combo)


def _avoid_winners(model: PreferenceModel, rule: RuleSpec, forms: _Forms, base: List[Constraint],
                   excluded: FrozenSet[int]) -> Optional[MixtureWitness]:
    """A mixture meeting `base` on which no parallel universe elects an excluded alternative.

    Alive sets are expanded largest first, so each one is reached only after
    all of its parents have fixed their loser sets.
    """
    start = mixture_feasibility(model, base)
    if start is None:
        return None

    def search(pending: Tuple[FrozenSet[int], ...], constraints: List[Constraint],
               witness: MixtureWitness) -> Optional[MixtureWitness]:
        if not pending:
            return witness
        alive, rest = pending[0], pending[1:]
        for losers in _subsets_by_size(alive):
            successors = [alive - {x} for x in losers]
            if any(b <= excluded for b in successors):
                continue
            trial = constraints + _loser_rows(forms, rule, alive, losers)
            found = mixture_feasibility(model, trial)
            if found is None:
                continue
            nxt = set(rest) | {b for b in successors if len(b) > 1}
            ordered = tuple(sorted(nxt, key=lambda b: (-len(b), sorted(b))))
            result = search(ordered, trial, found)
            if result is not None:
                return result
        return None

    return search((frozenset(range(1, rule.m + 1)),), list(base), start)


def _mrse_vl_breaker(model: PreferenceModel, rule: RuleSpec, forms: _Forms,
                     failing: FrozenSet[int]) -> Optional[MixtureWitness]:
    """A mixture where some weak Condorcet winner can drop out while a CL-failing component decides"""
    m = rule.m
    for a in range(1, m + 1):
        for k in sorted(failing, reverse=True):
            for prefix in permutations(forms.others(a), m - k):
                rows = forms.wcw(a)
                alive = frozenset(range(1, m + 1))
                for x in prefix:
                    rows += _tied_lowest(forms, rule, alive, x)
                    alive = alive - {x}
                rows += _tied_lowest(forms, rule, alive, a)
                witness = mixture_feasibility(model, rows)
                if witness is not None:
                    return witness
    return None


def _failing_components(rule: RuleSpec) -> FrozenSet[int]:
    return frozenset(k for k in range(3, rule.m + 1) if not rule_satisfies_cl(rule.component(k)).satisfied)


def classify_cc_mrse(model: PreferenceModel, rule: RuleSpec, parity: str) -> AsymptoticCase:
    """Smoothed Condorcet criterion of an MRSE rule under parallel-universes tie-breaking"""
    parity = _check_parity(parity)
    if rule.kind != MRSE:
        raise ValidationError(f"{rule.label} is not an MRSE rule")
    m = rule.m
    _check_model(model, m)
    if m > Config.PUT_MAX_ALTERNATIVES:
        raise BoundExceededError(f"MRSE classification with m={m}", 'PUT_MAX_ALTERNATIVES')
    forms = _Forms(m)

    failing = _failing_components(rule)
    if not failing:
        return AsymptoticCase(ONE, parity, 'every component rule satisfies the Condorcet loser criterion')
    logger.debug(f"{rule.label}: components failing Condorcet loser for sizes {sorted(failing)}")
    if _mrse_vl_breaker(model, rule, forms, failing) is None:
        return AsymptoticCase(VERY_LIKELY, parity, 'no mixture lets a weak Condorcet winner drop out '
                              'in a round decided by a component failing the Condorcet loser criterion')
    for a in range(1, m + 1):
        witness = _avoid_winners(model, rule, forms, forms.cw(a), frozenset({a}))
        if witness is not None:
            return AsymptoticCase(VERY_UNLIKELY, parity,
                                  'some mixture has a Condorcet winner that wins in no parallel universe', witness)
    for a, b in combinations(range(1, m + 1), 2):
        witness = _avoid_winners(model, rule, forms, forms.acw(a, b), frozenset({a, b}))
        if witness is not None:
            label = VERY_UNLIKELY if parity == ODD else UNLIKELY
            return AsymptoticCase(label, parity,
                                  'some mixture has two almost Condorcet winners, neither a co-winner', witness)
    return AsymptoticCase(MEDIUM, parity, 'none of the other clauses holds')


def classify_cc(model: PreferenceModel, rule: RuleSpec, parity: str = BOTH) -> List[AsymptoticCase]:
    """Dispatch on the rule family; 'both' classifies the even and odd cases"""
    parity = parity.lower()
    if parity not in PARITIES:
        raise ValidationError(f"parity must be one of {', '.join(PARITIES)}, got {parity!r}")
    parities = (EVEN, ODD) if parity == BOTH else (parity,)
    if rule.kind == SCORING:
        return [classify_cc_scoring(model, rule.scores, p) for p in parities]
    if rule.kind == MRSE:
        return [classify_cc_mrse(model, rule, p) for p in parities]
    raise UnsupportedError(f"Condorcet classification covers scoring and MRSE rules, not {rule.label}")


# participation

def uniform_constraints(m: int) -> List[Constraint]:
    """pi is the uniform distribution, scaled by m! to integer forms"""
    size = math.factorial(m)
    return [(tuple((size if j == i else 0) - 1 for j in range(size)), '=0') for i in range(size)]


def classify_par(model: PreferenceModel, rule: RuleSpec) -> AsymptoticCase:
    """Smoothed participation for Condorcet-consistent and MRSE families"""
    m = model.m
    if m < 4:
        raise UnsupportedError(f"smoothed participation classification needs m >= 4, got {m}")
    rule.check_m(m)
    if rule.kind == SCORING:
        return AsymptoticCase(ONE, BOTH, 'positional scoring rules satisfy participation on every profile')
    if rule.kind != MRSE and rule.kind not in CONDORCET_CONSISTENT:
        raise UnsupportedError(f"no participation classification for {rule.label}")
    witness = mixture_feasibility(model, uniform_constraints(m))
    if witness is not None:
        return AsymptoticCase(LIKELY, BOTH, 'the uniform distribution lies in CH(Pi)', witness, ell=1,
                              note=f"{VALIDITY}; rate 1-Theta(n^-1/2)")
    return AsymptoticCase(INDETERMINATE, BOTH, 'the uniform distribution is outside CH(Pi)',
                          note='at least 1-Theta(n^-l/2) for some l >= 1; possibly VeryLikely or One')


# closure-free conditions at one mixture

@dataclass
class GisrReport:
    rs: bool
    rd: bool
    nrs: bool
    as_hint: bool
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {'RS': self.rs, 'RD': self.rd, 'NRS': self.nrs, 'AS': self.as_hint, **self.details}


def gisr_conditions(model: Optional[PreferenceModel], rule: RuleSpec,
                    pi: Union[MixtureWitness, Profile]) -> GisrReport:
    """Robust satisfaction / dissatisfaction / non-robust satisfaction at pi"""
    if rule.kind not in (SCORING, MRSE):
        raise UnsupportedError(f"closure conditions are checkable for scoring and MRSE rules, not {rule.label}")
    profile = pi.distribution if isinstance(pi, MixtureWitness) else pi
    if model is not None and model.m != profile.m:
        raise ValidationError(f"distribution over {profile.m} alternatives, model over {model.m}")
    structure = majority_structure(profile)
    winners = cowinners(rule, profile)
    rd = structure.cw is not None and structure.cw not in winners
    nrs = len(structure.acw - winners) == 2
    if rule.kind == SCORING:
        rs = len(structure.wcw) * len(winners | structure.wcw) <= 1
        as_hint = False
    else:
        failing = _failing_components(rule)
        m = profile.m
        rs = all(m + 1 - i not in failing
                 for a in structure.wcw for i in possible_losing_rounds(rule, profile, a))
        as_hint = not failing
    details = {'winners': sorted(winners), **structure.to_dict()}
    return GisrReport(rs, rd, nrs, as_hint, details)
