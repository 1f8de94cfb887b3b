"""
Random profiles from per-agent ranking distributions, exact small-n PMV
probabilities, and Monte Carlo satisfaction estimates
"""
import concurrent.futures
import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.axioms import CC, CC_STAR, evaluate
from core.classifier import classify_cc
from core.errors import BoundExceededError, UnsupportedError, ValidationError
from core.model import PreferenceModel
from core.profile import Profile, histogram
from core.rules import MRSE, SCORING, RuleSpec, TieBreakOrder
from utils.config import Config

logger = logging.getLogger(__name__)

WILSON_Z = 1.959963984540054
_MAX_DENOMINATOR = 2 ** 62


@dataclass(frozen=True)
class SamplerPlan:
    """Distributions are either one shared distribution or one per agent"""
    m: int
    n: int
    distributions: Tuple[Profile, ...]
    seed: int = 0
    trials: int = 1
    label: str = ''

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"n must be at least 1, got {self.n}")
        if self.trials < 1:
            raise ValidationError(f"trials must be at least 1, got {self.trials}")
        if len(self.distributions) not in (1, self.n):
            raise ValidationError(f"expected 1 or n={self.n} distributions, got {len(self.distributions)}")
        for pi in self.distributions:
            if pi.m != self.m or pi.signed or pi.total != 1:
                raise ValidationError(f"not a distribution over {self.m} alternatives: {pi}")

    @classmethod
    def iid(cls, pi: Profile, n: int, seed: int = 0, trials: int = 1, label: str = '') -> 'SamplerPlan':
        return cls(pi.m, n, (pi,), seed, trials, label)

    @classmethod
    def ic(cls, m: int, n: int, seed: int = 0, trials: int = 1) -> 'SamplerPlan':
        return cls.iid(Profile.uniform(m), n, seed, trials, f"IC(m={m})")

    @classmethod
    def per_agent(cls, pis: Sequence[Profile], seed: int = 0, trials: int = 1, label: str = '') -> 'SamplerPlan':
        pis = tuple(pis)
        if not pis:
            raise ValidationError("per-agent plan needs at least one agent")
        return cls(pis[0].m, len(pis), pis, seed, trials, label)

    @property
    def is_ic(self) -> bool:
        return len(self.distributions) == 1 and self.distributions[0] == Profile.uniform(self.m)

    def agent_distributions(self) -> Tuple[Profile, ...]:
        if len(self.distributions) == 1:
            return self.distributions * self.n
        return self.distributions


@dataclass(frozen=True)
class _Table:
    """Exact cumulative thresholds of one distribution over [0, denominator)"""
    denominator: int
    thresholds: np.ndarray

    @classmethod
    def of(cls, pi: Profile) -> '_Table':
        size = math.factorial(pi.m)
        weights = [Fraction(pi.weight(i)) for i in range(size)]
        denominator = math.lcm(*(w.denominator for w in weights))
        if denominator >= _MAX_DENOMINATOR:
            raise ValidationError(f"distribution denominator {denominator} is too large to sample exactly")
        counts = [int(w * denominator) for w in weights]
        return cls(denominator, np.cumsum(np.array(counts, dtype=np.int64)))

    def draw(self, rng: np.random.Generator, k: int) -> np.ndarray:
        u = rng.integers(0, self.denominator, size=k, dtype=np.int64)
        return np.searchsorted(self.thresholds, u, side='right')


def trial_generator(seed: int, trial: int) -> np.random.Generator:
    """Counter-based stream: the same (seed, trial) always yields the same draws"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial,))))


def _groups(plan: SamplerPlan) -> List[Tuple[Profile, int]]:
    order: Dict[Profile, int] = {}
    for pi in plan.agent_distributions():
        order[pi] = order.get(pi, 0) + 1
    return list(order.items())


def sample_profile(plan: SamplerPlan, trial: int, tables: Dict[Profile, _Table] = None) -> Profile:
    rng = trial_generator(plan.seed, trial)
    size = math.factorial(plan.m)
    if plan.is_ic:
        counts = np.bincount(rng.integers(0, size, size=plan.n), minlength=size)
    else:
        tables = tables if tables is not None else {}
        counts = np.zeros(size, dtype=np.int64)
        for pi, k in _groups(plan):
            if pi not in tables:
                tables[pi] = _Table.of(pi)
            counts += np.bincount(tables[pi].draw(rng, k), minlength=size)
    return Profile(plan.m, {i: int(c) for i, c in enumerate(counts) if c})


def exact_small_probability(plan: SamplerPlan) -> Dict[Tuple[int, ...], Fraction]:
    """Exact distribution of the histogram by sequential convolution"""
    if plan.n > Config.EXACT_PMV_MAX_N:
        raise BoundExceededError(f"exact PMV with n={plan.n}", 'EXACT_PMV_MAX_N')
    if plan.m > Config.EXACT_PMV_MAX_M:
        raise BoundExceededError(f"exact PMV with m={plan.m}", 'EXACT_PMV_MAX_M')
    size = math.factorial(plan.m)
    states: Dict[Tuple[int, ...], Fraction] = {(0,) * size: Fraction(1)}
    for pi in plan.agent_distributions():
        support = [(i, Fraction(v)) for i, v in pi.weights.items()]
        nxt: Dict[Tuple[int, ...], Fraction] = {}
        for hist, p in states.items():
            for i, q in support:
                key = hist[:i] + (hist[i] + 1,) + hist[i + 1:]
                nxt[key] = nxt.get(key, Fraction(0)) + p * q
        states = nxt
    return states


def exact_satisfaction(rule: RuleSpec, axiom: str, plan: SamplerPlan,
                       tiebreak: TieBreakOrder = None) -> Fraction:
    total = Fraction(0)
    for hist, p in exact_small_probability(plan).items():
        profile = Profile.from_vector(plan.m, hist)
        if evaluate(axiom, rule, profile, tiebreak).satisfied:
            total += p
    return total


def exact_smoothed_satisfaction(model: PreferenceModel, rule: RuleSpec, axiom: str, n: int,
                                tiebreak: TieBreakOrder = None) -> Tuple[Fraction, Tuple[int, ...]]:
    """Minimum over every assignment of model distributions to the n agents"""
    best: Optional[Tuple[Fraction, Tuple[int, ...]]] = None
    for choice in product(range(len(model)), repeat=n):
        plan = SamplerPlan.per_agent([model.distributions[j] for j in choice])
        value = exact_satisfaction(rule, axiom, plan, tiebreak)
        if best is None or value < best[0]:
            best = (value, choice)
    return best


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> Tuple[float, float]:
    if trials <= 0:
        raise ValidationError("Wilson interval needs at least one trial")
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, min(p, centre - half)), min(1.0, max(p, centre + half))


@dataclass
class SatisfactionEstimate:
    successes: int
    trials: int
    estimate: float
    ci_lo: float
    ci_hi: float
    seconds: float = 0.0
    extra: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_counts(cls, successes: int, trials: int, seconds: float = 0.0) -> 'SatisfactionEstimate':
        lo, hi = wilson_interval(successes, trials)
        return cls(successes, trials, successes / trials, lo, hi, seconds)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'successes': self.successes, 'trials': self.trials, 'estimate': self.estimate,
            'ci_lo': self.ci_lo, 'ci_hi': self.ci_hi, 'duration_seconds': round(self.seconds, 3),
            **self.extra,
        }


def _count_successes(args) -> int:
    rule, axiom, plan, tiebreak, start, stop = args
    tables: Dict[Profile, _Table] = {}
    hits = 0
    for trial in range(start, stop):
        profile = sample_profile(plan, trial, tables)
        if evaluate(axiom, rule, profile, tiebreak).satisfied:
            hits += 1
    return hits


def _chunks(trials: int, jobs: int) -> List[Tuple[int, int]]:
    size = max(1, math.ceil(trials / (jobs * 4)))
    return [(start, min(trials, start + size)) for start in range(0, trials, size)]


def estimate_satisfaction(rule: RuleSpec, axiom: str, plan: SamplerPlan, tiebreak: TieBreakOrder = None,
                          jobs: int = 1) -> SatisfactionEstimate:
    """Monte Carlo mean of the per-profile verdict over plan.trials profiles"""
    rule.check_m(plan.m)
    started = time.time()
    jobs = max(1, int(jobs or 1))
    if jobs == 1 or plan.trials < 2 * jobs:
        successes = _count_successes((rule, axiom, plan, tiebreak, 0, plan.trials))
    else:
        tasks = [(rule, axiom, plan, tiebreak, lo, hi) for lo, hi in _chunks(plan.trials, jobs)]
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as ex:
            successes = sum(ex.map(_count_successes, tasks))
    result = SatisfactionEstimate.from_counts(successes, plan.trials, time.time() - started)
    logger.debug(f"{rule.label}/{axiom} n={plan.n}: {successes}/{plan.trials} "
                 f"in {result.seconds:.1f}s")
    return result


def _classifier_witnesses(model: PreferenceModel, rule: RuleSpec, axiom: str) -> List[Profile]:
    if axiom not in (CC, CC_STAR) or rule.kind not in (SCORING, MRSE) or model.m < 3:
        return []
    try:
        cases = classify_cc(model, rule)
    except (UnsupportedError, BoundExceededError) as e:
        logger.debug(f"no classifier witnesses for {rule.label}: {e}")
        return []
    return [c.witness.distribution for c in cases if c.witness is not None]


def adversarial_estimate(model: PreferenceModel, rule: RuleSpec, axiom: str, n: int, trials: int,
                         seed: int = 0, tiebreak: TieBreakOrder = None, jobs: int = 1,
                         witnesses: Sequence[Profile] = None) -> Dict[str, Any]:
    """Lowest i.i.d. satisfaction over the model's vertices and classifier witness mixtures.

    A heuristic lower bound over i.i.d. hull points only; correlated
    per-agent choices are not searched.
    """
    candidates: List[Tuple[str, Profile]] = [(f"vertex[{j}]", pi) for j, pi in enumerate(model.distributions)]
    if witnesses is None:
        witnesses = _classifier_witnesses(model, rule, axiom)
    seen = {pi for _, pi in candidates}
    for k, pi in enumerate(witnesses):
        if pi not in seen:
            seen.add(pi)
            candidates.append((f"witness[{k}]", pi))
    results = []
    for name, pi in candidates:
        plan = SamplerPlan.iid(pi, n, seed, trials, name)
        estimate = estimate_satisfaction(rule, axiom, plan, tiebreak, jobs)
        results.append({'candidate': name, **estimate.to_dict()})
    minimum = min(results, key=lambda r: r['estimate'])
    return {
        'rule': rule.label, 'axiom': axiom, 'n': n, 'trials': trials, 'seed': seed,
        'candidates': results, 'minimum': minimum,
        'caveat': 'heuristic: i.i.d. plans at hull points only, not the infimum over all per-agent choices',
    }


def fit_rate(ns: Sequence[int], estimates: Sequence[float]) -> Optional[float]:
    """log-log slope of 1 - p against n; None when some failure rate is zero"""
    failures = [1 - p for p in estimates]
    if len(ns) < 2 or any(f <= 0 for f in failures):
        return None
    slope, _ = np.polyfit(np.log(np.asarray(ns, dtype=float)), np.log(np.asarray(failures)), 1)
    return float(slope)
