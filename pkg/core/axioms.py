"""
Per-profile axiom evaluators: Condorcet criterion (CC and CC*),
participation (Par) and Condorcet loser (CL)
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Optional, Sequence

from core.errors import BoundExceededError, ValidationError
from core.profile import Profile, all_rankings, majority_structure, prefers
from core.rules import SCORING, RuleSpec, TieBreakOrder, cowinners, resolve
from utils.config import Config
from utils.lp import find_feasible_point

logger = logging.getLogger(__name__)

CC = 'cc'
CC_STAR = 'cc*'
PAR = 'par'
CL = 'cl'
AXIOMS = (CC, CC_STAR, PAR, CL)


@dataclass(frozen=True)
class AxiomVerdict:
    """Outcome of one axiom on one profile; witness present iff violated"""
    axiom: str
    rule: str
    satisfied: bool
    witness: Optional[Dict[str, Any]] = None

    def __post_init__(self):
        if self.satisfied != (self.witness is None):
            raise ValueError("a witness is required exactly when the axiom is violated")

    def to_dict(self) -> Dict[str, Any]:
        return {'axiom': self.axiom, 'rule': self.rule, 'satisfied': self.satisfied, 'witness': self.witness}


def _winner_set(rule: RuleSpec, profile: Profile, tiebreak: Optional[TieBreakOrder]) -> FrozenSet[int]:
    if tiebreak is not None:
        return frozenset({resolve(rule, profile, tiebreak)})
    return cowinners(rule, profile)


def sat_cc(rule: RuleSpec, profile: Profile, tiebreak: TieBreakOrder = None) -> AxiomVerdict:
    """Condorcet winner, when present, is a co-winner (resolute when a tiebreak is given)"""
    cw = majority_structure(profile).cw
    if cw is None:
        return AxiomVerdict(CC, rule.label, True)
    winners = _winner_set(rule, profile, tiebreak)
    if cw in winners:
        return AxiomVerdict(CC, rule.label, True)
    return AxiomVerdict(CC, rule.label, False, {'cw': cw, 'winners': sorted(winners)})


def sat_cc_star(rule: RuleSpec, profile: Profile) -> AxiomVerdict:
    """Condorcet winner, when present, is the unique co-winner"""
    cw = majority_structure(profile).cw
    if cw is None:
        return AxiomVerdict(CC_STAR, rule.label, True)
    winners = cowinners(rule, profile)
    if winners == frozenset({cw}):
        return AxiomVerdict(CC_STAR, rule.label, True)
    return AxiomVerdict(CC_STAR, rule.label, False, {'cw': cw, 'winners': sorted(winners)})


def sat_par(rule: RuleSpec, profile: Profile, tiebreak: TieBreakOrder = None) -> AxiomVerdict:
    """No voter strictly prefers the outcome of abstaining.

    Identical votes share one check: the removal outcome only depends on
    which ranking is removed.
    """
    profile.require_integral()
    if profile.total < 1:
        raise ValidationError("participation needs at least one voter")
    tiebreak = tiebreak or TieBreakOrder.identity(profile.m)
    before = resolve(rule, profile, tiebreak)
    for order, _ in profile.items():
        if order[0] == before:
            continue
        after = resolve(rule, profile.remove(order), tiebreak)
        if prefers(order, after, before):
            return AxiomVerdict(PAR, rule.label, False, {
                'ranking': list(order), 'before': before, 'after': after,
            })
    return AxiomVerdict(PAR, rule.label, True)


def sat_cl_profile(rule: RuleSpec, profile: Profile, tiebreak: TieBreakOrder = None) -> AxiomVerdict:
    loser = majority_structure(profile).condorcet_loser
    if loser is None:
        return AxiomVerdict(CL, rule.label, True)
    winners = _winner_set(rule, profile, tiebreak)
    if loser not in winners:
        return AxiomVerdict(CL, rule.label, True)
    return AxiomVerdict(CL, rule.label, False, {'condorcet_loser': loser, 'winners': sorted(winners)})


def evaluate(axiom: str, rule: RuleSpec, profile: Profile, tiebreak: TieBreakOrder = None) -> AxiomVerdict:
    """Dispatch by axiom name; Par is always resolute"""
    axiom = axiom.lower()
    if axiom == CC:
        return sat_cc(rule, profile, tiebreak)
    if axiom == CC_STAR:
        return sat_cc_star(rule, profile)
    if axiom == PAR:
        return sat_par(rule, profile, tiebreak)
    if axiom == CL:
        return sat_cl_profile(rule, profile, tiebreak)
    raise ValidationError(f"unknown axiom {axiom!r}; expected one of {', '.join(AXIOMS)}")


@dataclass(frozen=True)
class CondorcetLoserDecision:
    satisfied: bool
    counterexample: Optional[Profile] = None


def _pair_margin_row(k: int, a: int, b: int) -> List[int]:
    return [1 if prefers(order, a, b) else -1 for order in all_rankings(k)]


def _score_row(k: int, s: Sequence[int], a: int) -> List[int]:
    return [s[order.index(a)] for order in all_rankings(k)]


def rule_satisfies_cl(s: Sequence[int]) -> CondorcetLoserDecision:
    """Whether the scoring rule s never elects a Condorcet loser.

    Decided over the k!-simplex: the loser must lose every pairwise contest
    strictly while scoring at least as much as everybody else. The rule is
    neutral, so alternative 1 stands for every candidate.
    """
    k = len(s)
    if k == 2:
        return CondorcetLoserDecision(True)
    if k > Config.CL_LP_MAX_ALTERNATIVES:
        raise BoundExceededError(f"Condorcet loser LP for k={k}", 'CL_LP_MAX_ALTERNATIVES')
    size = math.factorial(k)
    a = 1
    strict = [(_pair_margin_row(k, a, b), 0) for b in range(2, k + 1)]
    weak = [([sb - sa for sa, sb in zip(_score_row(k, s, a), _score_row(k, s, b))], 0)
            for b in range(2, k + 1)]
    point = find_feasible_point(size, strict=strict, weak=weak, equal=[([1] * size, 1)])
    if point is None:
        return CondorcetLoserDecision(True)
    scale = math.lcm(*(Fraction(v).denominator for v in point))
    weights = {i: int(v * scale) for i, v in enumerate(point) if v}
    profile = Profile(k, weights)
    verdict = sat_cl_profile(RuleSpec(SCORING, scores=tuple(s)), profile)
    if verdict.satisfied:
        raise ArithmeticError(f"LP counterexample for {list(s)} failed re-verification")
    logger.debug(f"scoring vector {list(s)} fails Condorcet loser: {profile}")
    return CondorcetLoserDecision(False, profile)
