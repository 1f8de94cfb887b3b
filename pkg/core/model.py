"""
Single-agent preference models and the asymptotic label vocabulary
"""
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from core.errors import ValidationError
from core.profile import Number, Profile, Ranking, as_rational, rational_str

# Labels of the seven-case categorization, in increasing order of satisfaction
ZERO = 'Zero'
VERY_UNLIKELY = 'VeryUnlikely'
UNLIKELY = 'Unlikely'
MEDIUM = 'Medium'
LIKELY = 'Likely'
VERY_LIKELY = 'VeryLikely'
ONE = 'One'
INDETERMINATE = 'Indeterminate'

LABELS = (ZERO, VERY_UNLIKELY, UNLIKELY, MEDIUM, LIKELY, VERY_LIKELY, ONE)

RATES = {
    ZERO: '0',
    VERY_UNLIKELY: 'exp(-Theta(n))',
    UNLIKELY: 'Theta(n^-1/2)',
    MEDIUM: 'Theta(1) and 1-Theta(1)',
    LIKELY: '1-Theta(n^-l/2)',
    VERY_LIKELY: '1-exp(-Theta(n))',
    ONE: '1',
    INDETERMINATE: 'unknown',
}


@dataclass(frozen=True)
class PreferenceModel:
    """Finite set of strictly positive distributions over rankings"""
    m: int
    distributions: Tuple[Profile, ...]
    epsilon: Fraction

    def __post_init__(self):
        if not self.distributions:
            raise ValidationError("a preference model needs at least one distribution")
        epsilon = Fraction(self.epsilon)
        if epsilon <= 0:
            raise ValidationError("epsilon must be strictly positive")
        size = math.factorial(self.m)
        for k, pi in enumerate(self.distributions):
            if pi.m != self.m:
                raise ValidationError(f"distribution {k} is over {pi.m} alternatives, model has {self.m}")
            if pi.total != 1:
                raise ValidationError(f"distribution {k} sums to {pi.total}, expected 1")
            if pi.support_size != size or min(pi.weights.values()) < epsilon:
                raise ValidationError(f"distribution {k} is not bounded below by epsilon={epsilon}")
        object.__setattr__(self, 'epsilon', epsilon)

    @classmethod
    def of(cls, distributions: Sequence[Profile], epsilon: Number = None) -> 'PreferenceModel':
        """Model whose epsilon is the smallest entry present"""
        distributions = tuple(distributions)
        if not distributions:
            raise ValidationError("a preference model needs at least one distribution")
        m = distributions[0].m
        if epsilon is None:
            size = math.factorial(m)
            entries = [pi.weight(i) for pi in distributions for i in range(size)]
            epsilon = min(entries)
            if epsilon <= 0:
                raise ValidationError("every distribution must put positive mass on every ranking")
        return cls(m, distributions, Fraction(epsilon))

    def __len__(self) -> int:
        return len(self.distributions)

    def vectors(self) -> List[List[Number]]:
        size = math.factorial(self.m)
        return [[pi.weight(i) for i in range(size)] for pi in self.distributions]

    def to_dict(self) -> Dict:
        return {
            'm': self.m,
            'epsilon': rational_str(self.epsilon),
            'distributions': [
                {str(Ranking.from_index(i, self.m)): rational_str(v) for i, v in pi.weights.items()}
                for pi in self.distributions
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> 'PreferenceModel':
        try:
            m = int(data['m'])
            raw = data['distributions']
        except (KeyError, TypeError, ValueError):
            raise ValidationError("model JSON needs 'm' and 'distributions'")
        distributions = []
        for entry in raw:
            votes = [(as_rational(w), Ranking.parse(r).order) for r, w in entry.items()]
            distributions.append(Profile.from_votes(m, votes))
        epsilon = data.get('epsilon')
        return cls.of(distributions, as_rational(epsilon) if epsilon is not None else None)


def ic_model(m: int) -> PreferenceModel:
    """Impartial culture: the uniform distribution alone"""
    return PreferenceModel.of([Profile.uniform(m)])


def load_model(path: str) -> PreferenceModel:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}: invalid JSON ({e})")
    return PreferenceModel.from_dict(data)
