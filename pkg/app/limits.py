"""Finite-prefix diagnostics for lower and upper set limits, monotone
hyperconvergence and the compact set whose convex hull escapes."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from app.numerics import SparseVec, l1_norm, as_rational, format_rational
from app.geometry import (Polyhedron, PointSet, as_polyhedron,
                          closed_convex_hull, membership)
from app.hypermetrics import (MetricConfig, distance_to_set, hausdorff_full,
                              metric_d, pseudometric_dH)
from app.exceptions import BadParameter, NotNested

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SequencePrefix:
    sets: tuple
    tolerance: Fraction = Fraction(0)
    stabilization_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'sets', tuple(self.sets))
        object.__setattr__(self, 'tolerance', as_rational(self.tolerance))
        if not self.sets:
            raise BadParameter('a sequence prefix needs at least one set')
        if self.tolerance < 0:
            raise BadParameter('tolerance must be nonnegative')
        if not 0 <= self.stabilization_index < len(self.sets):
            raise BadParameter('stabilization index outside the prefix')


def li_ls_diagnostic(seq, candidates, cfg=None, ls_fraction=Fraction(1, 2)):
    """Flag each candidate as approximately in Li and in Ls.

    Li: within tolerance at every index n >= stabilization_index.
    Ls: within tolerance on at least ``ls_fraction`` of those indices.
    """
    cfg = cfg or MetricConfig()
    ls_fraction = as_rational(ls_fraction)
    if not 0 < ls_fraction <= 1:
        raise BadParameter('the Ls fraction must lie in (0, 1]')
    rows = []
    for sigma in candidates.points:
        distances = [distance_to_set(sigma, F, cfg) for F in seq.sets]
        tail = distances[seq.stabilization_index:]
        close = sum(1 for d in tail if d <= seq.tolerance)
        in_li = close == len(tail)
        in_ls = close >= ls_fraction * len(tail)
        rows.append({'candidate': sigma.to_json(),
                     'distances': [format_rational(d) for d in distances],
                     'close': close,
                     'in_Li_approx': in_li,
                     'in_Ls_approx': in_ls,
                     'converges_approx': in_li == in_ls})
    return {'header': {'ls_rule': f'close on at least {format_rational(ls_fraction)}'
                                  ' of the indices n >= stabilization_index',
                       'ls_fraction': format_rational(ls_fraction),
                       'tolerance': format_rational(seq.tolerance),
                       'stabilization_index': seq.stabilization_index,
                       'length': len(seq.sets)},
            'candidates': rows}


def _check_nested(sets):
    for n, (smaller, larger) in enumerate(zip(sets, sets[1:])):
        for v in smaller.vertices:
            if not membership(v, larger):
                raise NotNested(f'set {n} is not contained in set {n + 1}')


def monotone_limit(seq, cfg=None):
    """K = hull of the union of an increasing prefix, with the distances
    of every F_n to K."""
    cfg = cfg or MetricConfig()
    sets = [as_polyhedron(F) for F in seq.sets]
    _check_nested(sets)
    union = [v for F in sets for v in F.vertices]
    K = closed_convex_hull(Polyhedron(union))
    table = [hausdorff_full(F, K, cfg) for F in sets]
    logger.debug('monotone limit table %s', [format_rational(d) for d in table])
    return K, table


def counterexample_demo(M):
    """sigma_m = 2^m e_m for m = 1..M: weak* null, yet the hull of
    {sigma_m} and 0 has l1 diameter 2^M."""
    if M < 1:
        raise BadParameter('M must be at least 1')
    sigmas = [SparseVec.basis(m, 2 ** m) for m in range(1, M + 1)]
    origin = SparseVec()
    K = PointSet(sigmas + [origin])
    cfg = MetricConfig(K)
    rows = []
    for m, sigma in zip(range(1, M + 1), sigmas):
        rows.append({'m': m,
                     'distance': metric_d(sigma, origin, cfg),
                     'l1_norm': l1_norm(sigma),
                     'direction_value': pseudometric_dH(
                         PointSet([sigma]), PointSet([origin]),
                         SparseVec.basis(m))})
    max_norm = max(l1_norm(v) for v in closed_convex_hull(K).vertices)
    distances = [row['distance'] for row in rows]
    norms = [row['l1_norm'] for row in rows]
    return {'M': M,
            'rows': rows,
            'max_l1_norm': max_norm,
            'distances_decreasing': all(a > b for a, b in
                                        zip(distances, distances[1:])),
            'norms_increasing': all(a < b for a, b in zip(norms, norms[1:]))}


def demo_to_dict(report):
    rows = [{key: format_rational(value) if isinstance(value, Fraction)
             else value for key, value in row.items()}
            for row in report['rows']]
    return dict(report, rows=rows,
                max_l1_norm=format_rational(report['max_l1_norm']))
