"""V-representation polyhedra over the l1 dual model.

Sets are either finite point sets or polyhedra given by vertices and
recession rays.  Every query (hull membership, cone membership, redundancy)
is an exact feasibility LP on the V-representation; no facet description is
ever built.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from app.numerics import (SparseVec, INF, pair, l1_norm, sup_norm, as_rational,
                          union_support, format_rational, json_list)
from app.lp import (Constraint, LpProblem, EQ, GE, LE, MAXIMIZE, feasible,
                    Infeasible, lp_solve)
from app.exceptions import (BadParameter, DocumentError, NonConvexInput,
                            UnboundedInput)

logger = logging.getLogger(__name__)


def _dedupe(vectors):
    seen = set()
    unique = []
    for vec in vectors:
        if vec not in seen:
            seen.add(vec)
            unique.append(vec)
    return unique


class PointSet:
    kind = 'points'

    def __init__(self, points):
        points = _dedupe(points)
        if not points:
            raise BadParameter('a point set must be nonempty')
        self.points = tuple(points)

    @property
    def vertices(self):
        return self.points

    @property
    def rays(self):
        return ()

    @property
    def bounded(self):
        return True

    def __eq__(self, other):
        return isinstance(other, PointSet) and \
            set(self.points) == set(other.points)

    def __hash__(self):
        return hash(frozenset(self.points))

    def __repr__(self):
        return f'PointSet({list(self.points)!r})'

    def to_dict(self):
        return {'kind': self.kind,
                'points': [p.to_json() for p in self.points]}


class Polyhedron:
    """conv(vertices) + cone(rays); bounded iff there are no rays."""

    kind = 'polyhedron'

    def __init__(self, vertices, rays=(), irredundant=False):
        vertices = _dedupe(vertices)
        if not vertices:
            raise BadParameter('a polyhedron needs at least one vertex')
        rays = _dedupe(rays)
        if any(not r for r in rays):
            raise BadParameter('recession rays must be nonzero')
        self.vertices = tuple(vertices)
        self.rays = tuple(rays)
        self.irredundant = bool(irredundant)

    @property
    def bounded(self):
        return not self.rays

    def __eq__(self, other):
        return isinstance(other, Polyhedron) and \
            set(self.vertices) == set(other.vertices) and \
            set(self.rays) == set(other.rays)

    def __hash__(self):
        return hash((frozenset(self.vertices), frozenset(self.rays)))

    def __repr__(self):
        return f'Polyhedron({list(self.vertices)!r}, rays={list(self.rays)!r})'

    def to_dict(self):
        data = {'kind': self.kind,
                'points': [v.to_json() for v in self.vertices],
                'rays': [r.to_json() for r in self.rays]}
        if self.irredundant:
            data['irredundant'] = True
        return data


@dataclass(frozen=True)
class PolarSpec:
    """Closed l1 ball of ``radius``: the absolute polar of the sup ball of
    radius 1/radius in the finitely supported sequences."""

    radius: Fraction = Fraction(1)

    def __post_init__(self):
        radius = as_rational(self.radius)
        if radius <= 0:
            raise BadParameter('polar radius must be positive')
        object.__setattr__(self, 'radius', radius)

    def to_dict(self):
        return {'kind': 'polar', 'radius': format_rational(self.radius)}


@dataclass(frozen=True)
class FinitePoints:
    values: tuple

    @property
    def lower(self):
        return self.values[0]

    @property
    def upper(self):
        return self.values[-1]


@dataclass(frozen=True)
class Interval:
    lower: object
    upper: object

    def __post_init__(self):
        if self.lower > self.upper:
            raise BadParameter('interval bounds out of order')


def set_from_dict(data):
    if not isinstance(data, dict) or 'kind' not in data:
        raise DocumentError('set document needs a "kind" field')
    if data['kind'] == 'polar':
        return PolarSpec(as_rational(data.get('radius', '1')))
    points = [SparseVec.from_json(p) for p in json_list(data, 'points')]
    if not points:
        raise DocumentError('set document lists no points')
    rays = [SparseVec.from_json(r) for r in json_list(data, 'rays')]
    if data['kind'] == 'points':
        if rays:
            raise NonConvexInput('a point set with rays is not convex')
        return PointSet(points)
    if data['kind'] == 'polyhedron':
        # the irredundant flag is recomputed, never read
        return Polyhedron(points, rays)
    raise DocumentError(f'unknown set kind {data["kind"]!r}')


def as_polyhedron(F):
    if isinstance(F, Polyhedron):
        return F
    return Polyhedron(F.points)


def _combination_rows(target, vertices, rays):
    """Rows of ``target = sum a_i v_i + sum b_j r_j`` (plus sum a = 1 when
    vertices are given); variables are numbered vertices first."""
    generators = list(vertices) + list(rays)
    constraints = []
    for k in union_support(generators + [target]):
        row = SparseVec({i: g[k] for i, g in enumerate(generators)})
        constraints.append(Constraint(row, EQ, target[k]))
    if vertices:
        constraints.append(Constraint(
            SparseVec({i: 1 for i in range(len(vertices))}), EQ, 1))
    return constraints, range(len(generators))


def in_hull(point, vertices, rays=()):
    if not vertices:
        return False
    constraints, variables = _combination_rows(point, vertices, rays)
    return feasible(constraints, variables)


def in_cone(direction, rays):
    if not rays:
        return not direction
    constraints, variables = _combination_rows(direction, (), rays)
    return feasible(constraints, variables)


def membership(point, P):
    P = as_polyhedron(P)
    return in_hull(point, P.vertices, P.rays)


def recession_rays(P):
    kept = list(_dedupe(P.rays))
    for ray in list(kept):
        others = [r for r in kept if r != ray]
        if in_cone(ray, others):
            kept.remove(ray)
    return kept


def closed_convex_hull(F):
    if isinstance(F, Polyhedron) and F.irredundant:
        return F
    P = as_polyhedron(F)
    rays = recession_rays(P)
    kept = list(P.vertices)
    for vertex in P.vertices:
        others = [v for v in kept if v != vertex]
        if others and in_hull(vertex, others, rays):
            kept.remove(vertex)
    logger.debug('hull kept %d of %d vertices, %d of %d rays',
                 len(kept), len(P.vertices), len(rays), len(P.rays))
    return Polyhedron(kept, rays, irredundant=True)


def irredundant_vertices(P):
    return PointSet(closed_convex_hull(P).vertices)


def same_hull(P, Q):
    P, Q = as_polyhedron(P), as_polyhedron(Q)
    return all(membership(v, Q) for v in P.vertices) and \
        all(membership(v, P) for v in Q.vertices) and \
        all(in_cone(r, Q.rays) for r in P.rays) and \
        all(in_cone(r, P.rays) for r in Q.rays)


def support_value(P, A):
    for ray in P.rays:
        if pair(A, ray) > 0:
            return INF
    return max(pair(A, v) for v in P.vertices)


def scalar_image(F, A):
    if isinstance(F, PointSet):
        return FinitePoints(tuple(sorted({pair(A, p) for p in F.points})))
    upper = support_value(F, A)
    lower = support_value(F, -A)
    return Interval(-lower, upper)


def scalar_hull(S):
    return Interval(S.lower, S.upper)


def path_combine(lam, P, Q):
    """f(lam) = (1 - lam) P + lam Q as a polytope."""
    lam = as_rational(lam)
    if not 0 <= lam <= 1:
        raise BadParameter('path parameter must lie in [0, 1]')
    P, Q = as_polyhedron(P), as_polyhedron(Q)
    if not (P.bounded and Q.bounded):
        raise UnboundedInput('path_combine needs bounded endpoints')
    points = [p * (1 - lam) + q * lam for p in P.vertices for q in Q.vertices]
    return closed_convex_hull(PointSet(points))


def path_samples(P, Q, lambdas):
    return [(as_rational(lam), path_combine(lam, P, Q)) for lam in lambdas]


def polar_contains(point, U):
    return l1_norm(point) <= U.radius


def hyperset_classes(F, polar=None):
    classes = {'F'}
    convex = isinstance(F, Polyhedron)
    if convex:
        classes.add('CF')
    if F.bounded:
        classes |= {'B', 'K'}
        if convex:
            classes |= {'CB', 'CK'}
        if polar is not None and \
                all(polar_contains(v, polar) for v in F.vertices):
            classes.add('U')
            if convex:
                classes.add('CU')
    return frozenset(classes)


def separating_functional(point, others):
    """Max-margin functional in the box [-1, 1]^coords strictly preferring
    ``point`` to every vector of ``others``.

    Returns ``(A, margin)`` with ``margin = min_w pair(A, point - w)``; the
    margin is positive exactly when ``point`` is not a convex combination of
    ``others``.
    """
    others = [w for w in others if w != point]
    if not others:
        return SparseVec(), Fraction(1)
    coords = union_support([point] + others)
    delta = (coords[-1] + 1) if coords else 0
    constraints = []
    for w in others:
        row = dict((point - w).items())
        row[delta] = -1
        constraints.append(Constraint(SparseVec(row), GE, 0))
    for k in coords:
        constraints.append(Constraint(SparseVec.basis(k), LE, 1))
        constraints.append(Constraint(SparseVec.basis(k), GE, -1))
    outcome = lp_solve(LpProblem(SparseVec.basis(delta), constraints),
                       MAXIMIZE)
    functional = SparseVec({k: v for k, v in outcome.point.items()
                            if k != delta})
    margin = min(pair(functional, point - w) for w in others)
    return functional, margin


def exposing_functional(point, others):
    """Functional strictly preferring ``point`` to ``others``, read off the
    Farkas certificate of ``point`` not being in conv(others).

    Returns ``(A, margin)`` with A scaled to sup norm 1, or None when
    ``point`` lies in the hull.
    """
    others = [w for w in others if w != point]
    if not others:
        return SparseVec(), Fraction(1)
    constraints, variables = _combination_rows(point, others, ())
    outcome = lp_solve(LpProblem(SparseVec(), constraints, variables))
    if not isinstance(outcome, Infeasible):
        return None
    coords = union_support(others + [point])
    functional = -SparseVec({k: y for k, y in zip(coords, outcome.farkas)})
    functional = functional / sup_norm(functional)
    margin = min(pair(functional, point - w) for w in others)
    return functional, margin
