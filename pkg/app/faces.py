"""Exposed points of polytopes, the extreme-deviation sandwich and the
curved-body polygon families used to exercise them."""
import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from app.numerics import SparseVec, pair, combine, as_rational, format_rational
from app.geometry import (PointSet, Polyhedron, as_polyhedron,
                          closed_convex_hull, exposing_functional,
                          separating_functional)
from app.hypermetrics import MetricConfig, metric_d, pseudometric_dH
from app.exceptions import BadParameter, NotAVertex, UnboundedInput

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExposureCertificate:
    vertex: SparseVec
    functional: SparseVec
    margin: Fraction

    def check(self, vertices):
        others = [w for w in vertices if w != self.vertex]
        if self.vertex not in vertices:
            return False
        if not others:
            return self.margin > 0
        top = pair(self.functional, self.vertex)
        margin = min(top - pair(self.functional, w) for w in others)
        return margin > 0 and margin == self.margin

    def to_dict(self):
        return {'vertex': self.vertex.to_json(),
                'functional': self.functional.to_json(),
                'margin': format_rational(self.margin)}

    @classmethod
    def from_dict(cls, data):
        return cls(SparseVec.from_json(data['vertex']),
                   SparseVec.from_json(data['functional']),
                   as_rational(data['margin']))


def _bounded_polytope(P, name):
    P = as_polyhedron(P)
    if not P.bounded:
        raise UnboundedInput(f'{name} needs a bounded polytope')
    return P


def exposure_certificate(P, v, maximal=True):
    """Functional strictly maximized over P at ``v`` alone.

    With ``maximal`` the functional maximizes the margin inside the box
    [-1, 1]; otherwise it is read off a Farkas certificate (one row per
    coordinate, much smaller) and scaled to sup norm 1.
    """
    P = _bounded_polytope(P, 'exposure_certificate')
    if v not in P.vertices:
        raise NotAVertex(f'{v!r} is not a listed vertex')
    others = [w for w in P.vertices if w != v]
    if not others:
        return ExposureCertificate(v, SparseVec(), Fraction(1))
    if maximal:
        functional, margin = separating_functional(v, others)
    else:
        found = exposing_functional(v, others)
        functional, margin = found if found else (SparseVec(), Fraction(0))
    if margin <= 0:
        raise NotAVertex(f'{v!r} is a convex combination of the other vertices')
    return ExposureCertificate(v, functional, margin)


def exposed_all(P):
    P = _bounded_polytope(P, 'exposed_all')
    hull = closed_convex_hull(P)
    certificates = [exposure_certificate(hull, v) for v in hull.vertices]
    logger.debug('exposed %d vertices', len(certificates))
    return certificates


@dataclass(frozen=True)
class DeviationEstimate:
    lower: Fraction
    upper: Fraction
    samples: int
    m: int = None

    @property
    def in_F_m(self):
        if self.m is None:
            return None
        return self.lower >= Fraction(1, self.m)

    def to_dict(self):
        return {'lower': format_rational(self.lower),
                'upper': format_rational(self.upper),
                'samples': self.samples,
                'm': self.m,
                'in_F_m': self.in_F_m}


def _deviation_candidates(vertices, budget, seed):
    yielded = 0
    center = combine([Fraction(1, len(vertices))] * len(vertices), vertices)
    fixed = [center] + [(v + w) / 2 for i, v in enumerate(vertices)
                        for w in vertices[i + 1:]]
    for point in fixed:
        if yielded == budget:
            return
        yield point
        yielded += 1
    rng = random.Random(seed)
    while yielded < budget:
        weights = [rng.randint(0, 8) for _ in vertices]
        total = sum(weights)
        if not total:
            continue
        yield combine([Fraction(w, total) for w in weights], vertices)
        yielded += 1


def extreme_deviation(P, cfg=None, budget=64, m=None, seed=0):
    """Sandwich estimate of sup over P of the d-distance to the nearest vertex.

    The lower bound is exact at every sampled point (the barycenter, the
    edge midpoints, then seeded random convex combinations, in that order);
    the upper bound is the smallest vertex eccentricity.
    """
    cfg = cfg or MetricConfig()
    P = _bounded_polytope(P, 'extreme_deviation')
    if budget < 0:
        raise BadParameter('sample budget must be nonnegative')
    if m is not None and m < 1:
        raise BadParameter('m must be a positive count')
    vertices = list(closed_convex_hull(P).vertices)
    if len(vertices) == 1:
        return DeviationEstimate(Fraction(0), Fraction(0), 0, m)
    lower = Fraction(0)
    samples = 0
    for point in _deviation_candidates(vertices, budget, seed):
        nearest = min(metric_d(point, v, cfg) for v in vertices)
        lower = max(lower, nearest)
        samples += 1
    upper = min(max(metric_d(v, w, cfg) for w in vertices) for v in vertices)
    return DeviationEstimate(lower, upper, samples, m)


def _plane(x, y):
    return SparseVec({0: x, 1: y})


def _circle_point(p, q):
    """(2pq, q^2 - p^2) / (p^2 + q^2): a rational point on the unit circle."""
    norm = p * p + q * q
    return Fraction(2 * p * q, norm), Fraction(q * q - p * p, norm)


def stadium_family(n):
    """Rational polygon on ``n`` points of the two unit circles centred at
    (-1, 0) and (1, 0), including the four tangency points (+-1, +-1)."""
    if n < 8 or n % 2:
        raise BadParameter('stadium_family needs an even n >= 8')
    half = n // 2
    points = []
    for j in range(half):
        dx, y = _circle_point(j, half - 1 - j)
        points.append(_plane(1 + dx, y))
        points.append(_plane(-1 - dx, y))
    return Polyhedron(points)


def regular_polygon(k):
    """Rational 2^k-gon inscribed in the unit circle with its dihedral
    symmetry kept exact; angles are rounded only inside one octant."""
    if k < 2:
        raise BadParameter('regular_polygon needs k >= 2')
    n = 2 ** k
    precision = 2 ** (k + 12)
    octant = []
    for j in range(n // 8):
        t = Fraction(math.tan(math.pi * j / n)).limit_denominator(precision)
        norm = 1 + t * t
        octant.append(((1 - t * t) / norm, 2 * t / norm))
    diagonal = Fraction(math.sqrt(2) / 2).limit_denominator(precision)
    quadrant = octant + [(diagonal, diagonal)] + \
        [(y, x) for x, y in reversed(octant)]
    points = []
    for x, y in quadrant:
        for sx, sy in ((1, 1), (-1, 1), (1, -1), (-1, -1)):
            points.append(_plane(sx * x, sy * y))
    return Polyhedron(points)


@dataclass(frozen=True)
class SweepRow:
    k: int
    vertices: int
    distance: Fraction
    ratio: Fraction = None
    directions: int = 0

    def to_dict(self):
        return {'k': self.k,
                'vertices': self.vertices,
                'max_distance': format_rational(self.distance),
                'directions': self.directions,
                'bound': 'lower',
                'caveat': f'maximum over {self.directions} sampled '
                          'directions, a lower bound on the supremum over '
                          'all functionals',
                'ratio': None if self.ratio is None
                else format_rational(self.ratio),
                'reaches_two': None if self.ratio is None
                else self.ratio >= 2}


def sweep_directions(count, seed=0):
    directions = [SparseVec.basis(0), SparseVec.basis(1)]
    rng = random.Random(seed)
    while len(directions) < count:
        a, b = rng.randint(-9, 9), rng.randint(-9, 9)
        if a or b:
            directions.append(_plane(a, b) / max(abs(a), abs(b)))
    return directions[:count]


def degeneracy_sweep(ks=(3, 4, 5, 6), directions=20, seed=0):
    sample = sweep_directions(directions, seed)
    rows = []
    previous = None
    for k in ks:
        polygon = regular_polygon(k)
        corners = PointSet(polygon.vertices)
        distance = max(pseudometric_dH(polygon, corners, A) for A in sample)
        ratio = previous / distance if previous is not None else None
        rows.append(SweepRow(k, len(polygon.vertices), distance, ratio,
                             len(sample)))
        previous = distance
    logger.info('degeneracy sweep over k=%s done', list(ks))
    return rows
