"""Weak*-Hausdorff pseudometrics, the metric d on the polar and its
Hausdorff metric, separation and immeasurability witnesses, and the clopen
Boolean algebra generated by cylinder boundedness."""
import itertools
import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from app.numerics import (SparseVec, INF, pair, sup_norm, union_support,
                          format_rational, as_integer)
from app.lp import (Constraint, EQ, GE, LE, MAXIMIZE, LpProblem, lp_solve,
                    minimize)
from app.geometry import (PointSet, Polyhedron, PolarSpec, FinitePoints,
                          as_polyhedron, membership, polar_contains,
                          scalar_image, separating_functional, set_from_dict)
from app.exceptions import (BadParameter, DocumentError, NotInNormalizingSet,
                            UnboundedInput)

logger = logging.getLogger(__name__)

BASIS = 'basis'
DENSE = 'dense'


@dataclass(frozen=True)
class MetricConfig:
    """Test functionals A_n (n >= 1), weights 2^-n / (1 + normalizer(A_n))
    and the compact normalizing set K."""

    normalizing_set: object = field(default_factory=PolarSpec)
    enumeration: str = BASIS
    terms: int = 64

    def __post_init__(self):
        if self.enumeration not in (BASIS, DENSE):
            raise BadParameter(f'unknown enumeration {self.enumeration!r}')
        if self.terms < 1:
            raise BadParameter('a dense config needs at least one term')
        K = self.normalizing_set
        if isinstance(K, Polyhedron) and not K.bounded:
            raise UnboundedInput('the normalizing set must be bounded')
        if isinstance(K, PointSet):
            object.__setattr__(self, 'normalizing_set', as_polyhedron(K))

    def functional(self, n):
        if n < 1:
            raise BadParameter('test functionals are numbered from 1')
        if self.enumeration == BASIS:
            return SparseVec.basis(n - 1)
        return dense_functionals(n)[n - 1]

    def normalizer(self, A):
        K = self.normalizing_set
        if isinstance(K, PolarSpec):
            return K.radius * sup_norm(A)
        return max(abs(pair(A, v)) for v in K.vertices)

    def weight(self, n):
        return Fraction(1, 2 ** n) / (1 + self.normalizer(self.functional(n)))

    def contains(self, point):
        K = self.normalizing_set
        if isinstance(K, PolarSpec):
            return polar_contains(point, K)
        return membership(point, K)

    def to_dict(self):
        return {'kind': 'metric',
                'enumeration': self.enumeration,
                'terms': self.terms,
                'normalizing_set': self.normalizing_set.to_dict()}

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise DocumentError('metric config must be a JSON object')
        K = set_from_dict(data.get('normalizing_set', {'kind': 'polar'}))
        return cls(K, data.get('enumeration', BASIS),
                   as_integer(data.get('terms', 64), 'terms'))


_DENSE_CACHE = []


def _dense_stream():
    """All nonzero finitely supported rational vectors, by height h: support
    within {0..h-1}, numerators |p| <= h, denominators <= h."""
    seen = set()
    for h in itertools.count(1):
        values = sorted({Fraction(p, q) for q in range(1, h + 1)
                         for p in range(-h, h + 1)})
        for combo in itertools.product(values, repeat=h):
            vec = SparseVec(enumerate(combo))
            if vec and vec not in seen:
                seen.add(vec)
                yield vec


_DENSE_ITER = _dense_stream()
_DENSE_LOCK = threading.Lock()


def dense_functionals(count):
    with _DENSE_LOCK:
        while len(_DENSE_CACHE) < count:
            _DENSE_CACHE.append(next(_DENSE_ITER))
        return _DENSE_CACHE[:count]


def _check_normalized(cfg, *points):
    for point in points:
        if not cfg.contains(point):
            raise NotInNormalizingSet(
                f'{point!r} lies outside the normalizing set')


def _require_basis(cfg):
    if cfg.enumeration != BASIS:
        raise BadParameter('exact Hausdorff computations need the basis config')


def coordinate_weight(cfg, k):
    return cfg.weight(k + 1)


def _weighted_l1(vec, cfg):
    return sum((coordinate_weight(cfg, k) * abs(v) for k, v in vec.items()),
               Fraction(0))


def metric_d(sigma, tau, cfg=None):
    """d(sigma, tau) = sum_n w_n |A_n(sigma - tau)|.

    Exact for the basis enumeration; the truncated partial sum for the dense
    one (see :func:`metric_d_bounds`)."""
    cfg = cfg or MetricConfig()
    _check_normalized(cfg, sigma, tau)
    diff = sigma - tau
    if cfg.enumeration == BASIS:
        return _weighted_l1(diff, cfg)
    return sum((cfg.weight(n) * abs(pair(cfg.functional(n), diff))
                for n in range(1, cfg.terms + 1)), Fraction(0))


def metric_d_bounds(sigma, tau, cfg=None):
    """Certified enclosure of d; the tail of a dense config is below 2^(1-T)."""
    cfg = cfg or MetricConfig()
    value = metric_d(sigma, tau, cfg)
    if cfg.enumeration == BASIS:
        return value, value
    return value, value + Fraction(2, 2 ** cfg.terms)


def distance_to_set(sigma, F, cfg=None):
    """min over F of d(sigma, .), by LP for polyhedra.

    Coordinates outside the support of F contribute the constant
    w_k |sigma_k|; only the others enter the LP."""
    cfg = cfg or MetricConfig()
    _require_basis(cfg)
    if isinstance(F, PointSet):
        return min(metric_d(sigma, p, cfg) for p in F.points)
    if not F.bounded:
        raise UnboundedInput('distance to an unbounded set')
    _check_normalized(cfg, sigma, *F.vertices)
    vertices = list(F.vertices)
    if sigma in vertices:
        return Fraction(0)
    coords = union_support(vertices)
    inside = SparseVec({k: sigma[k] for k in coords})
    outside = _weighted_l1(sigma - inside, cfg)
    if membership(inside, F):
        return outside
    p = len(vertices)
    slack = {k: p + i for i, k in enumerate(coords)}
    constraints = [Constraint(SparseVec({i: 1 for i in range(p)}), EQ, 1)]
    for k in coords:
        hull = {i: v[k] for i, v in enumerate(vertices)}
        upper = dict(hull)
        upper[slack[k]] = 1
        lower = {i: -c for i, c in hull.items()}
        lower[slack[k]] = 1
        constraints.append(Constraint(SparseVec(upper), GE, sigma[k]))
        constraints.append(Constraint(SparseVec(lower), GE, -sigma[k]))
    objective = SparseVec({slack[k]: coordinate_weight(cfg, k) for k in coords})
    outcome = minimize(objective, constraints, range(p + len(coords)))
    return outside + outcome.value


def _excess(P, Q, cfg):
    return max(distance_to_set(v, Q, cfg) for v in P.vertices)


def hausdorff_full(P, Q, cfg=None):
    cfg = cfg or MetricConfig()
    _require_basis(cfg)
    P, Q = as_polyhedron(P), as_polyhedron(Q)
    if not (P.bounded and Q.bounded):
        raise UnboundedInput('hausdorff_full needs bounded sets')
    _check_normalized(cfg, *P.vertices, *Q.vertices)
    value = max(_excess(P, Q, cfg), _excess(Q, P, cfg))
    logger.debug('hausdorff_full = %s', format_rational(value))
    return value


def _point_to_set(x, S):
    if isinstance(S, FinitePoints):
        return min(abs(x - t) for t in S.values)
    return max(S.lower - x, x - S.upper, Fraction(0))


def _scalar_excess(S, T):
    if isinstance(S, FinitePoints):
        return max(_point_to_set(x, T) for x in S.values)
    if isinstance(T, FinitePoints):
        if S.lower == -INF or S.upper == INF:
            return INF
        candidates = [S.lower, S.upper]
        for a, b in zip(T.values, T.values[1:]):
            mid = (a + b) / 2
            if S.lower <= mid <= S.upper:
                candidates.append(mid)
        return max(_point_to_set(x, T) for x in candidates)
    if (S.upper == INF and T.upper != INF) or \
            (S.lower == -INF and T.lower != -INF):
        return INF
    ends = [x for x in (S.lower, S.upper) if x not in (INF, -INF)]
    return max((_point_to_set(x, T) for x in ends), default=Fraction(0))


def scalar_hausdorff(S, T):
    return max(_scalar_excess(S, T), _scalar_excess(T, S))


def pseudometric_dH(F, G, A):
    return scalar_hausdorff(scalar_image(F, A), scalar_image(G, A))


def comparison_factor(n, cfg=None):
    """2^n (1 + normalizer(A_n)) = 1 / w_n."""
    cfg = cfg or MetricConfig()
    return 1 / cfg.weight(n)


def separating_direction(P, Q):
    P, Q = as_polyhedron(P), as_polyhedron(Q)
    if not (P.bounded and Q.bounded):
        raise UnboundedInput('separating_direction needs bounded sets')
    for first, second in ((P, Q), (Q, P)):
        for vertex in first.vertices:
            if not membership(vertex, second):
                functional, margin = separating_functional(
                    vertex, second.vertices)
                logger.debug('separated %r with margin %s',
                             vertex, format_rational(margin))
                return functional
    return None


def _unbounded_above(F, A):
    return any(pair(A, r) > 0 for r in F.rays)


def immeasurable_witness(P, Q):
    if not P.rays and not Q.rays:
        return None
    for k in union_support(list(P.rays) + list(Q.rays)):
        for A in (SparseVec.basis(k), SparseVec.basis(k, -1)):
            if _unbounded_above(P, A) != _unbounded_above(Q, A):
                return A
    for first, second in ((P, Q), (Q, P)):
        for ray in first.rays:
            coords = union_support([ray] + list(second.rays))
            constraints = [Constraint(SparseVec({k: s[k] for k in coords}), LE, 0)
                           for s in second.rays]
            for k in coords:
                constraints.append(Constraint(SparseVec.basis(k), LE, 1))
                constraints.append(Constraint(SparseVec.basis(k), GE, -1))
            outcome = lp_solve(LpProblem(ray, constraints), MAXIMIZE)
            if outcome.value > 0:
                return outcome.point
    return None


@dataclass(frozen=True)
class CylinderSpec:
    generators: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'generators', tuple(self.generators))

    def to_dict(self):
        return {'kind': 'cylinder',
                'generators': [g.to_json() for g in self.generators]}

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict) or \
                not isinstance(data.get('generators', []), list):
            raise DocumentError('cylinder document needs a generators list')
        return cls(tuple(SparseVec.from_json(g)
                         for g in data.get('generators', [])))


def cylinder_bounded(P, V):
    """P lies in lambda * V for some lambda, V the cylinder of the generators."""
    return all(pair(A, r) == 0 for r in P.rays for A in V.generators)


@dataclass(frozen=True)
class Atom:
    cylinder: CylinderSpec


@dataclass(frozen=True)
class Not:
    operand: object


@dataclass(frozen=True)
class And:
    operands: tuple


@dataclass(frozen=True)
class Or:
    operands: tuple


def clopen_eval(expr, P):
    if isinstance(expr, Atom):
        return cylinder_bounded(P, expr.cylinder)
    if isinstance(expr, Not):
        return not clopen_eval(expr.operand, P)
    if isinstance(expr, And):
        return all(clopen_eval(e, P) for e in expr.operands)
    if isinstance(expr, Or):
        return any(clopen_eval(e, P) for e in expr.operands)
    raise BadParameter(f'not a clopen expression: {expr!r}')


def clopen_atoms(expr):
    if isinstance(expr, Atom):
        return [expr]
    children = [expr.operand] if isinstance(expr, Not) else expr.operands
    atoms = []
    for child in children:
        for atom in clopen_atoms(child):
            if atom not in atoms:
                atoms.append(atom)
    return atoms


def clopen_from_dict(data):
    if not isinstance(data, dict) or len(data) != 1:
        raise DocumentError('a clopen expression has exactly one operator key')
    (op, arg), = data.items()
    if op == 'atom':
        return Atom(CylinderSpec.from_dict({'generators': arg}))
    if op == 'not':
        return Not(clopen_from_dict(arg))
    if op in ('and', 'or') and isinstance(arg, list):
        operands = tuple(clopen_from_dict(e) for e in arg)
        return And(operands) if op == 'and' else Or(operands)
    raise DocumentError(f'unknown clopen operator {op!r}')


def clopen_to_dict(expr):
    if isinstance(expr, Atom):
        return {'atom': [g.to_json() for g in expr.cylinder.generators]}
    if isinstance(expr, Not):
        return {'not': clopen_to_dict(expr.operand)}
    key = 'and' if isinstance(expr, And) else 'or'
    return {key: [clopen_to_dict(e) for e in expr.operands]}
