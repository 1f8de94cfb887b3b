"""
Hyperplane sets, sign signatures, integer polyhedra and their characteristic
cones, mixture feasibility over CH(Pi), and small-instance activation
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

import numpy as np
import sympy

from core.errors import BoundExceededError, ValidationError
from core.model import (
    LIKELY, MEDIUM, ONE, UNLIKELY, VERY_LIKELY, VERY_UNLIKELY, ZERO, INDETERMINATE, PreferenceModel,
)
from core.profile import Histogram, Number, Profile, all_rankings, as_rational, histogram, rational_str
from core.rules import RuleSpec
from utils.config import Config
from utils.lp import find_feasible_point, solve_lp

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]

PLUS, MINUS, ZERO_SIGN = '+', '-', '0'

RELATIONS = {'>0', '=0', '<0', '>=0', '<=0'}
_RELATION_ALIASES = {'≥0': '>=0', '≤0': '<=0'}


def _coprime(row: Sequence[int]) -> Vector:
    row = tuple(int(v) for v in row)
    g = math.gcd(*row) if row else 0
    if g > 1:
        row = tuple(v // g for v in row)
    return row


def _dot(row: Sequence, x: Sequence) -> Number:
    return as_rational(sum((a * b for a, b in zip(row, x) if a and b), 0))


def _as_vector(x: Union[Profile, Histogram, Sequence]) -> Tuple[Number, ...]:
    if isinstance(x, Profile):
        return histogram(x).entries
    if isinstance(x, Histogram):
        return x.entries
    return tuple(as_rational(v) for v in x)


# linear forms

def pair_vector(m: int, a: int, b: int) -> Vector:
    """Pair_{a,b}: +1 on rankings with a > b, -1 elsewhere; Pair_{a,b} . Hist(P) = w_P(a, b)"""
    return tuple(1 if order.index(a) < order.index(b) else -1 for order in all_rankings(m))


def score_difference_vector(s: Sequence[int], a: int, b: int, m: int = None,
                            alive: Iterable[int] = None) -> Vector:
    """Component R is s(rank of a in R|alive) - s(rank of b in R|alive)"""
    m = m or len(s)
    alive = frozenset(alive) if alive is not None else frozenset(range(1, m + 1))
    if len(alive) != len(s):
        raise ValidationError(f"scoring vector of length {len(s)} for {len(alive)} alive alternatives")
    return _score_difference(tuple(s), a, b, alive, m)


def _score_difference(s: Tuple[int, ...], a: int, b: int, alive: frozenset, m: int) -> Vector:
    row = []
    for order in all_rankings(m):
        restricted = [c for c in order if c in alive]
        row.append(s[restricted.index(a)] - s[restricted.index(b)])
    return tuple(row)


@dataclass(frozen=True)
class LinearFormSet:
    """Hyperplane normals over the m!-dimensional histogram space"""
    m: int
    forms: Tuple[Vector, ...]
    label: str = 'custom'

    def __post_init__(self):
        size = math.factorial(self.m)
        forms = tuple(_coprime(f) for f in self.forms)
        if not forms:
            raise ValidationError("a linear form set must be nonempty")
        for f in forms:
            if len(f) != size:
                raise ValidationError(f"form of length {len(f)} in a space of dimension {size}")
        object.__setattr__(self, 'forms', forms)

    def __len__(self) -> int:
        return len(self.forms)

    def to_dict(self) -> Dict:
        return {'m': self.m, 'label': self.label, 'forms': [list(f) for f in self.forms]}

    @classmethod
    def from_dict(cls, data: Mapping) -> 'LinearFormSet':
        return cls(int(data['m']), tuple(tuple(f) for f in data['forms']), data.get('label', 'custom'))


def _dedupe(rows: Iterable[Vector]) -> Tuple[Vector, ...]:
    seen = {}
    for row in rows:
        row = _coprime(row)
        if any(row):
            seen.setdefault(row, None)
    return tuple(seen)


def h_eo(m: int) -> LinearFormSet:
    """Edge-order hyperplanes Pair_{e1} - Pair_{e2} over distinct ordered pairs"""
    edges = [(a, b) for a in range(1, m + 1) for b in range(1, m + 1) if a != b]
    rows = []
    for e1, e2 in combinations(edges, 2):
        p1, p2 = pair_vector(m, *e1), pair_vector(m, *e2)
        rows.append(tuple(x - y for x, y in zip(p1, p2)))
    return LinearFormSet(m, _dedupe(rows), 'H_EO')


def h_copeland(m: int) -> LinearFormSet:
    """Pair_{a,b} - Pair_{b,a} reduces to Pair_{a,b}; one form per unordered pair"""
    rows = [pair_vector(m, a, b) for a, b in combinations(range(1, m + 1), 2)]
    return LinearFormSet(m, tuple(rows), 'H_Copeland')


def h_scoring(s: Sequence[int]) -> LinearFormSet:
    m = len(s)
    rows = [_score_difference(tuple(s), a, b, frozenset(range(1, m + 1)), m)
            for a, b in combinations(range(1, m + 1), 2)]
    return LinearFormSet(m, _dedupe(rows), f"H_scoring({','.join(map(str, s))})")


def h_mrse(rule: RuleSpec) -> LinearFormSet:
    """Score differences on every alive set of size >= 2"""
    m = rule.m
    everyone = range(1, m + 1)
    rows = []
    for k in range(m, 1, -1):
        s = rule.component(k)
        for alive in combinations(everyone, k):
            for a, b in combinations(alive, 2):
                rows.append(_score_difference(s, a, b, frozenset(alive), m))
    return LinearFormSet(m, _dedupe(rows), f"H_MRSE({rule.label})")


# signatures

@dataclass(frozen=True)
class Signature:
    signs: Tuple[str, ...]

    def __post_init__(self):
        signs = tuple(self.signs)
        if any(t not in (PLUS, MINUS, ZERO_SIGN) for t in signs):
            raise ValidationError(f"signature entries must be '+', '-' or '0': {signs}")
        object.__setattr__(self, 'signs', signs)

    @classmethod
    def parse(cls, text: str) -> 'Signature':
        return cls(tuple(c for c in text.replace(',', '').replace(' ', '')))

    @property
    def is_atomic(self) -> bool:
        return ZERO_SIGN not in self.signs

    def refines(self, other: 'Signature') -> bool:
        return refines(self, other)

    def __add__(self, other: 'Signature') -> 'Signature':
        return oplus(self, other)

    def __len__(self) -> int:
        return len(self.signs)

    def __str__(self) -> str:
        return '(' + ','.join(self.signs) + ')'


def _sign(v: Number) -> str:
    return PLUS if v > 0 else MINUS if v < 0 else ZERO_SIGN


def sign_signature(forms: LinearFormSet, x: Union[Profile, Histogram, Sequence]) -> Signature:
    vec = _as_vector(x)
    if len(vec) != math.factorial(forms.m):
        raise ValidationError(f"vector of length {len(vec)} for forms over m={forms.m}")
    return Signature(tuple(_sign(_dot(h, vec)) for h in forms.forms))


def _check_lengths(t1: Signature, t2: Signature):
    if len(t1) != len(t2):
        raise ValidationError(f"signatures of different lengths {len(t1)} and {len(t2)}")


def refines(t1: Signature, t2: Signature) -> bool:
    """t1 agrees with t2 wherever t2 is nonzero"""
    _check_lengths(t1, t2)
    return all(b == ZERO_SIGN or a == b for a, b in zip(t1.signs, t2.signs))


def oplus(t1: Signature, t2: Signature) -> Signature:
    _check_lengths(t1, t2)
    return Signature(tuple(a if a == b else ZERO_SIGN for a, b in zip(t1.signs, t2.signs)))


# polyhedra

@dataclass(frozen=True)
class Polyhedron:
    """{x : A x <= b} over the histogram space of m alternatives

    Rows are stored coprime; b is floored accordingly, which keeps the integer
    points unchanged.
    """
    m: int
    A: Tuple[Vector, ...]
    b: Tuple[int, ...]
    label: str = ''

    def __post_init__(self):
        if len(self.A) != len(self.b):
            raise ValidationError(f"{len(self.A)} rows but {len(self.b)} right-hand sides")
        size = math.factorial(self.m)
        rows, rhs = [], []
        for row, bound in zip(self.A, self.b):
            row = tuple(int(v) for v in row)
            if len(row) != size:
                raise ValidationError(f"row of length {len(row)} in a space of dimension {size}")
            g = math.gcd(*row)
            if g > 1:
                row, bound = tuple(v // g for v in row), math.floor(Fraction(bound) / g)
            rows.append(row)
            rhs.append(int(bound))
        object.__setattr__(self, 'A', tuple(rows))
        object.__setattr__(self, 'b', tuple(rhs))

    @property
    def dim_ambient(self) -> int:
        return math.factorial(self.m)

    def contains(self, x: Union[Profile, Histogram, Sequence]) -> bool:
        vec = _as_vector(x)
        return all(_dot(row, vec) <= bound for row, bound in zip(self.A, self.b))

    def characteristic_cone(self) -> 'Polyhedron':
        return Polyhedron(self.m, self.A, (0,) * len(self.A), f"cone({self.label})")

    def intersect(self, other: 'Polyhedron') -> 'Polyhedron':
        if other.m != self.m:
            raise ValidationError("polyhedra over different spaces")
        return Polyhedron(self.m, self.A + other.A, self.b + other.b, f"{self.label}&{other.label}")

    def is_empty(self) -> bool:
        """Empty over the reals"""
        return find_feasible_point(self.dim_ambient, weak=zip(self.A, self.b), free=True) is None

    def to_dict(self) -> Dict:
        return {'m': self.m, 'label': self.label, 'A': [list(r) for r in self.A], 'b': list(self.b)}

    @classmethod
    def from_dict(cls, data: Mapping) -> 'Polyhedron':
        return cls(int(data['m']), tuple(tuple(r) for r in data['A']), tuple(data['b']), data.get('label', ''))


def _signature_rows(forms: LinearFormSet, t: Signature, shift: Vector = None) -> List[Tuple[Vector, int]]:
    """Rows of H_t; with `shift` the signature is taken at x - shift"""
    if len(t) != len(forms):
        raise ValidationError(f"signature of length {len(t)} for {len(forms)} forms")
    rows = []
    for h, sign in zip(forms.forms, t.signs):
        offset = _dot(h, shift) if shift is not None else 0
        neg = tuple(-v for v in h)
        if sign == PLUS:
            rows.append((neg, -1 - offset))
        elif sign == MINUS:
            rows.append((h, -1 + offset))
        else:
            rows.append((h, offset))
            rows.append((neg, -offset))
    return rows


def _cw_rows(m: int, a: int) -> List[Tuple[Vector, int]]:
    return [(pair_vector(m, b, a), -1) for b in range(1, m + 1) if b != a]


def _umg_rows(graph: Sequence[Sequence[int]]) -> List[Tuple[Vector, int]]:
    m = len(graph)
    rows = []
    for a, b in combinations(range(1, m + 1), 2):
        rel = graph[a - 1][b - 1]
        if rel != -graph[b - 1][a - 1]:
            raise ValidationError(f"majority relation is not antisymmetric at ({a}, {b})")
        if rel > 0:
            rows.append((pair_vector(m, b, a), -1))
        elif rel < 0:
            rows.append((pair_vector(m, a, b), -1))
        else:
            rows.append((pair_vector(m, b, a), 0))
            rows.append((pair_vector(m, a, b), 0))
    return rows


def build_region(kind: str, m: int, **params) -> Polyhedron:
    """Integer polyhedron for one histogram property.

    Kinds and their parameters:
      umg_equals        graph (ternary relation as returned by core.profile.umg)
      signature         forms, t
      cw_and_signature  a, forms, t
      par_pair          forms, t1, ranking, t2
      cw_and_cowinner   a, s
      cw_not_cowinner   a, b, s
    """
    size = math.factorial(m)
    if kind == 'umg_equals':
        graph = params['graph']
        if len(graph) != m:
            raise ValidationError(f"majority relation over {len(graph)} alternatives, expected {m}")
        rows = _umg_rows(graph)
    elif kind == 'signature':
        rows = _signature_rows(params['forms'], params['t'])
    elif kind == 'cw_and_signature':
        rows = _cw_rows(m, params['a']) + _signature_rows(params['forms'], params['t'])
    elif kind == 'par_pair':
        ranking = tuple(params['ranking'])
        unit = tuple(1 if order == ranking else 0 for order in all_rankings(m))
        if not any(unit):
            raise ValidationError(f"ranking {list(ranking)} is not a ranking over {m} alternatives")
        forms = params['forms']
        rows = _signature_rows(forms, params['t1']) + _signature_rows(forms, params['t2'], shift=unit)
        rows.append((tuple(-v for v in unit), -1))
    elif kind == 'cw_and_cowinner':
        a, s = params['a'], tuple(params['s'])
        rows = _cw_rows(m, a)
        rows += [(score_difference_vector(s, b, a), 0) for b in range(1, m + 1) if b != a]
    elif kind == 'cw_not_cowinner':
        a, b, s = params['a'], params['b'], tuple(params['s'])
        if a == b:
            raise ValidationError("the outscoring alternative must differ from the Condorcet winner")
        rows = _cw_rows(m, a) + [(score_difference_vector(s, a, b), -1)]
    else:
        raise ValidationError(f"unknown region kind {kind!r}")
    for row, _ in rows:
        if len(row) != size:
            raise ValidationError(f"region row of length {len(row)} for m={m}")
    label = params.get('label') or kind
    return Polyhedron(m, tuple(r for r, _ in rows), tuple(int(v) for _, v in rows), label)


def essential_rows(poly: Polyhedron) -> List[Vector]:
    """Rows that vanish on the whole characteristic cone {x : A x <= 0}"""
    return list(_essential_rows(poly.dim_ambient, poly.A))


@lru_cache(maxsize=4096)
def _essential_rows(size: int, A: Tuple[Vector, ...]) -> Tuple[Vector, ...]:
    result = []
    for row in A:
        if not any(row):
            continue
        neg = [-v for v in row]
        # max -a.x over the cone, capped at 1; zero means a.x = 0 throughout
        lp = solve_lp(neg, list(A) + [neg], [0] * len(A) + [1], free_vars=range(size))
        if lp.status == 'optimal' and lp.value == 0:
            result.append(row)
    return tuple(result)


def cone_dimension(poly: Polyhedron) -> int:
    rows = essential_rows(poly)
    if not rows:
        return poly.dim_ambient
    return poly.dim_ambient - int(sympy.Matrix(rows).rank())


# mixtures over CH(Pi)

@dataclass(frozen=True)
class MixtureWitness:
    lambdas: Tuple[Fraction, ...]
    distribution: Profile

    def to_dict(self) -> Dict:
        return {
            'lambda': [rational_str(v) for v in self.lambdas],
            'distribution': [rational_str(v) for v in histogram(self.distribution).entries],
        }


Constraint = Tuple[Sequence[int], str]


def _normalize_relation(relation: str) -> str:
    relation = _RELATION_ALIASES.get(relation.replace(' ', ''), relation.replace(' ', ''))
    if relation not in RELATIONS:
        raise ValidationError(f"unknown relation {relation!r}; expected one of {sorted(RELATIONS)}")
    return relation


def _holds(value: Number, relation: str) -> bool:
    return {
        '>0': value > 0, '<0': value < 0, '=0': value == 0, '>=0': value >= 0, '<=0': value <= 0,
    }[relation]


def mixture_feasibility(model: PreferenceModel, constraints: Sequence[Constraint]) -> Optional[MixtureWitness]:
    """A mixture of the model's distributions meeting every sign constraint, or None"""
    if not len(model):
        raise ValidationError("empty preference model")
    constraints = [(tuple(f), _normalize_relation(r)) for f, r in constraints]
    vectors = model.vectors()
    k = len(vectors)
    # g_j = form . pi^j; the constraint reads sum_j lambda_j g_j (relation) 0
    coeffs = [(tuple(_dot(f, v) for v in vectors), r) for f, r in constraints]
    if k == 1:
        if all(_holds(g[0], r) for g, r in coeffs):
            return _witness(model, (Fraction(1),), constraints)
        return None
    strict, weak, equal = [], [], [([1] * k, 1)]
    for g, r in coeffs:
        if r == '>0':
            strict.append(([-v for v in g], 0))
        elif r == '<0':
            strict.append((list(g), 0))
        elif r == '>=0':
            weak.append(([-v for v in g], 0))
        elif r == '<=0':
            weak.append((list(g), 0))
        else:
            equal.append((list(g), 0))
    point = find_feasible_point(k, strict=strict, weak=weak, equal=equal)
    if point is None:
        return None
    return _witness(model, tuple(Fraction(v) for v in point), constraints)


def _witness(model: PreferenceModel, lambdas: Tuple[Fraction, ...],
             constraints: Sequence[Tuple[Vector, str]]) -> MixtureWitness:
    mixed = None
    for lam, pi in zip(lambdas, model.distributions):
        if lam:
            part = pi.scale(lam)
            mixed = part if mixed is None else mixed + part
    vec = histogram(mixed).entries
    for f, r in constraints:
        if not _holds(_dot(f, vec), r):
            raise ArithmeticError(f"mixture witness {lambdas} violates a constraint on re-evaluation")
    return MixtureWitness(lambdas, mixed)


def cone_constraints(poly: Polyhedron) -> List[Constraint]:
    """Membership in the characteristic cone as sign constraints"""
    return [(row, '<=0') for row in poly.A]


# activation

@dataclass(frozen=True, order=True)
class ActivationWeight:
    """-inf (inactive) < -n/log n (active, pi outside the cone) < cone dimension"""
    tier: int
    dimension: int = 0

    INACTIVE = 0
    OUTSIDE = 1
    INSIDE = 2

    @classmethod
    def inactive(cls) -> 'ActivationWeight':
        return cls(cls.INACTIVE)

    @classmethod
    def outside(cls) -> 'ActivationWeight':
        return cls(cls.OUTSIDE)

    @classmethod
    def inside(cls, dimension: int) -> 'ActivationWeight':
        return cls(cls.INSIDE, dimension)

    def __str__(self) -> str:
        if self.tier == self.INACTIVE:
            return '-inf'
        if self.tier == self.OUTSIDE:
            return '-n/log n'
        return str(self.dimension)


@dataclass
class ActivationReport:
    n: int
    active: List[bool]
    dimensions: List[int]
    alpha: ActivationWeight
    beta: ActivationWeight
    alpha_star: Optional[ActivationWeight] = None
    beta_star: Optional[ActivationWeight] = None
    inf_label: str = INDETERMINATE
    sup_label: str = INDETERMINATE
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        def fmt(w):
            return None if w is None else str(w)
        return {
            'n': self.n, 'active': self.active, 'dimensions': self.dimensions,
            'alpha': fmt(self.alpha), 'beta': fmt(self.beta),
            'alpha_star': fmt(self.alpha_star), 'beta_star': fmt(self.beta_star),
            'inf_label': self.inf_label, 'sup_label': self.sup_label, 'notes': self.notes,
        }


def lattice_slice(size: int, n: int) -> np.ndarray:
    """All nonnegative integer vectors of length `size` summing to n (stars and bars)"""
    bars = np.array(list(combinations(range(n + size - 1), size - 1)), dtype=np.int64).reshape(-1, size - 1)
    padded = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), n + size - 1)])
    return np.diff(padded, axis=1) - 1


def activity(polys: Sequence[Polyhedron], n: int) -> List[bool]:
    """Whether each polyhedron holds an integer histogram of n voters"""
    if not polys:
        return []
    size = polys[0].dim_ambient
    if n > Config.ACTIVATION_MAX_N:
        raise BoundExceededError(f"activation enumeration with n={n}", 'ACTIVATION_MAX_N')
    if size != 6:
        raise BoundExceededError(f"activation enumeration over {size} rankings (only m=3)", 'ACTIVATION_MAX_N')
    points = lattice_slice(size, n)
    result = []
    for poly in polys:
        A = np.array(poly.A, dtype=np.int64).reshape(-1, size)
        b = np.array(poly.b, dtype=np.int64)
        result.append(bool(np.all(points @ A.T <= b, axis=1).any()))
    logger.debug(f"activation n={n}: {sum(result)}/{len(result)} polyhedra active over {len(points)} points")
    return result


def _meets_cone(model: PreferenceModel, poly: Polyhedron) -> bool:
    return mixture_feasibility(model, cone_constraints(poly)) is not None


def _escapes(model: PreferenceModel, cones: Sequence[Polyhedron]) -> bool:
    """Some mixture lies outside every given cone (one strict row per cone)

    Branches only on the first cone the current witness still lies in; any
    escaping mixture must leave that cone through one of its rows.
    """
    cones = list(cones)
    if not cones:
        return True
    solved: Dict[FrozenSet[Tuple[int, int]], Optional[Vector]] = {}
    failed: Set[FrozenSet[Tuple[int, int]]] = set()

    def witness(key: FrozenSet[Tuple[int, int]]) -> Optional[Vector]:
        if key not in solved:
            found = mixture_feasibility(model, [(cones[i].A[j], '>0') for i, j in sorted(key)])
            solved[key] = None if found is None else histogram(found.distribution).entries
        return solved[key]

    def search(key: FrozenSet[Tuple[int, int]]) -> bool:
        if key in failed:
            return False
        vec = witness(key)
        if vec is None:
            failed.add(key)
            return False
        left = {i for i, _ in key}
        inside = next((i for i, c in enumerate(cones)
                       if i not in left and all(_dot(r, vec) <= 0 for r in c.A)), None)
        if inside is None:
            return True
        if any(search(key | {(inside, j)}) for j, row in enumerate(cones[inside].A) if any(row)):
            return True
        failed.add(key)
        return False

    found = search(frozenset())
    logger.debug(f"escape search over {len(cones)} cones: {len(solved)} LPs, escapes={found}")
    return found


def _alpha(model: PreferenceModel, polys: Sequence[Polyhedron], active: Sequence[bool],
           dims: Sequence[int]) -> ActivationWeight:
    best = ActivationWeight.inactive()
    for poly, on, dim in zip(polys, active, dims):
        if not on:
            continue
        weight = ActivationWeight.inside(dim) if _meets_cone(model, poly) else ActivationWeight.outside()
        best = max(best, weight)
    return best


def _beta(model: PreferenceModel, polys: Sequence[Polyhedron], active: Sequence[bool],
          dims: Sequence[int]) -> ActivationWeight:
    """min over CH(Pi) of the heaviest incident edge"""
    live = [(p, d) for p, d, on in zip(polys, dims, active) if on]
    if not live:
        return ActivationWeight.inactive()
    levels = [ActivationWeight.outside()] + [ActivationWeight.inside(d) for d in sorted({d for _, d in live})]
    for level in levels:
        # some pi whose heaviest edge is at most `level`: pi avoids every cone weighing more
        heavier = [p for p, d in live if ActivationWeight.inside(d) > level]
        if _escapes(model, [p.characteristic_cone() for p in heavier]):
            return level
    return levels[-1]


def _inf_label(beta: ActivationWeight, alpha_star: Optional[ActivationWeight], q: int) -> str:
    if beta.tier == ActivationWeight.INACTIVE:
        return ZERO
    if beta.tier == ActivationWeight.OUTSIDE:
        return VERY_UNLIKELY
    if beta.dimension < q:
        return UNLIKELY
    if alpha_star is None:
        return INDETERMINATE
    if alpha_star.tier == ActivationWeight.INSIDE:
        return MEDIUM if alpha_star.dimension == q else LIKELY
    return VERY_LIKELY if alpha_star.tier == ActivationWeight.OUTSIDE else ONE


def _sup_label(alpha: ActivationWeight, beta_star: Optional[ActivationWeight], q: int) -> str:
    if alpha.tier == ActivationWeight.INACTIVE:
        return ZERO
    if alpha.tier == ActivationWeight.OUTSIDE:
        return VERY_UNLIKELY
    if alpha.dimension < q:
        return UNLIKELY
    if beta_star is None:
        return INDETERMINATE
    if beta_star.tier == ActivationWeight.INSIDE:
        return MEDIUM if beta_star.dimension == q else LIKELY
    return VERY_LIKELY if beta_star.tier == ActivationWeight.OUTSIDE else ONE


def _rate_note(side: str, weight: ActivationWeight, q: int) -> Optional[str]:
    # Unlikely covers every exponent in (-q/2, 0)
    if weight.tier != ActivationWeight.INSIDE or weight.dimension >= q:
        return None
    return f"{side}: Theta(n^({rational_str(Fraction(weight.dimension - q, 2))}))"


def activation_and_case(polys: Sequence[Polyhedron], model: PreferenceModel, n: int,
                        complement: Sequence[Polyhedron] = None) -> ActivationReport:
    """Activity of each polyhedron and the smoothed-likelihood labels of "histogram in C".

    The inf-side label reads beta of C and alpha of the complement C*; the
    sup-side label reads alpha of C and beta of C*. Without a complement only
    the Zero/VeryUnlikely/Unlikely outcomes are decidable.
    """
    if model.m != 3:
        raise BoundExceededError(f"activation enumeration over m={model.m} (only m=3)", 'ACTIVATION_MAX_N')
    for poly in list(polys) + list(complement or ()):
        if poly.m != 3:
            raise ValidationError(f"polyhedron {poly.label!r} is over m={poly.m}, model over m=3")
    q = math.factorial(model.m)
    active = activity(polys, n)
    dims = [cone_dimension(p) if on else 0 for p, on in zip(polys, active)]
    report = ActivationReport(n, active, dims, _alpha(model, polys, active, dims),
                              _beta(model, polys, active, dims))
    if complement is not None:
        active_star = activity(complement, n)
        dims_star = [cone_dimension(p) if on else 0 for p, on in zip(complement, active_star)]
        report.alpha_star = _alpha(model, complement, active_star, dims_star)
        report.beta_star = _beta(model, complement, active_star, dims_star)
    report.inf_label = _inf_label(report.beta, report.alpha_star, q)
    report.sup_label = _sup_label(report.alpha, report.beta_star, q)
    report.notes = [note for note in (_rate_note("inf", report.beta, q),
                                      _rate_note("sup", report.alpha, q)) if note]
    logger.debug(f"activation n={n}: alpha={report.alpha} beta={report.beta} "
                 f"alpha*={report.alpha_star} beta*={report.beta_star} -> {report.inf_label}")
    return report


def all_umgs(m: int) -> List[Tuple[Tuple[int, ...], ...]]:
    """Every ternary majority relation over m alternatives"""
    pairs = list(combinations(range(1, m + 1), 2))
    graphs = []
    for values in product((1, 0, -1), repeat=len(pairs)):
        rel = [[0] * m for _ in range(m)]
        for (a, b), v in zip(pairs, values):
            rel[a - 1][b - 1], rel[b - 1][a - 1] = v, -v
        graphs.append(tuple(tuple(r) for r in rel))
    return graphs


def _has_cw(graph: Sequence[Sequence[int]]) -> bool:
    m = len(graph)
    return any(all(graph[a][b] > 0 for b in range(m) if b != a) for a in range(m))


def cc_scoring_regions(s: Sequence[int]) -> Tuple[List[Polyhedron], List[Polyhedron]]:
    """(C, C*) for the Condorcet criterion of the scoring rule s.

    C: no Condorcet winner, or the Condorcet winner is a co-winner.
    C*: some Condorcet winner a is outscored by some b.
    """
    m = len(s)
    satisfied = [build_region('umg_equals', m, graph=g, label='no-cw')
                 for g in all_umgs(m) if not _has_cw(g)]
    satisfied += [build_region('cw_and_cowinner', m, a=a, s=s, label=f"cw={a}-wins")
                  for a in range(1, m + 1)]
    failing = [build_region('cw_not_cowinner', m, a=a, b=b, s=s, label=f"cw={a}-beaten-by-{b}")
               for a in range(1, m + 1) for b in range(1, m + 1) if a != b]
    return satisfied, failing
