import dataclasses
import itertools
import json
import os
import tempfile
import threading
import unittest
from fractions import Fraction
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from app import create_app, db
from app.models import Run
from app.exceptions import (BadParameter, DocumentError, NonConvexInput,
                            NotAVertex, NotNested,
                            NotInNormalizingSet, TargetOutsidePolar,
                            UnboundedInput, VariantPreconditionViolated)
from app.numerics import (SparseVec, INF, as_integer, as_rational,
                          format_rational, json_list, l1_norm, pair,
                          parse_rational, parse_vector, sup_norm)
from app.lp import (Constraint, EQ, GE, LE, MAXIMIZE, MINIMIZE, Infeasible,
                    LpProblem, Optimal, Unbounded, lp_certify, lp_solve)
from app.geometry import (FinitePoints, Interval, PointSet, PolarSpec,
                          Polyhedron, closed_convex_hull, hyperset_classes,
                          in_cone, in_hull, irredundant_vertices, membership,
                          path_combine, path_samples, same_hull,
                          scalar_hull, scalar_image, set_from_dict,
                          support_value)
from app.hypermetrics import (And, Atom, CylinderSpec, DENSE, MetricConfig,
                              Not, Or, clopen_atoms, clopen_eval,
                              clopen_from_dict, comparison_factor,
                              cylinder_bounded, dense_functionals,
                              distance_to_set, hausdorff_full,
                              immeasurable_witness, metric_d,
                              metric_d_bounds, pseudometric_dH,
                              scalar_hausdorff, separating_direction)
from app.faces import (ExposureCertificate, degeneracy_sweep, exposed_all,
                       exposure_certificate, extreme_deviation,
                       regular_polygon, stadium_family)
from app.poulsen import (PLAIN, POSITIVE, STATE, PoulsenTrace,
                         SchedulerState, construct, intermediate_hulls,
                         jordan_decompose, scheduler_next, verify_trace)
from app.limits import (SequencePrefix, counterexample_demo, li_ls_diagnostic,
                        monotone_limit)

settings.register_profile('wstar', derandomize=True, deadline=None,
                          database=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile('wstar')


class TestConfig:
    TESTING = True
    SQLALCHEMY_DATABASE_URI = 'sqlite:///:memory:'
    SQLALCHEMY_TRACK_MODIFICATIONS = False
    WSTAR_POLAR_RADIUS = '1'
    WSTAR_SEED = 0
    WSTAR_LS_FRACTION = '1/2'
    WSTAR_DEVIATION_BUDGET = 16
    WSTAR_OUTPUT_DIR = 'runs'
    WSTAR_RUNS_PER_PAGE = 25
    LOG_TO_STDOUT = None


def e(k, c=1):
    return SparseVec.basis(k, c)


def plane(x, y):
    return SparseVec({0: x, 1: y})


def unit_square():
    return Polyhedron([plane(0, 0), plane(1, 0), plane(0, 1), plane(1, 1)])


@st.composite
def points(draw, coords=4, nonneg=False):
    """At most three nonzero twelfths, so l1 <= 3/4."""
    support = draw(st.lists(st.integers(0, coords - 1), min_size=1,
                            max_size=min(3, coords), unique=True))
    low = 0 if nonneg else -3
    return SparseVec({k: Fraction(draw(st.integers(low, 3)), 12)
                      for k in support})


@st.composite
def probabilities(draw, coords=8):
    support = draw(st.lists(st.integers(0, coords - 1), min_size=1,
                            max_size=3, unique=True))
    weights = [draw(st.integers(1, 5)) for _ in support]
    total = sum(weights)
    return SparseVec({k: Fraction(w, total) for k, w in zip(support, weights)})


@st.composite
def functionals(draw, coords=4):
    A = SparseVec({k: draw(st.integers(-4, 4)) for k in range(coords)})
    return A if A else e(0)


@st.composite
def bounded_programs(draw):
    constraints = []
    for k in range(3):
        constraints.append(Constraint(e(k), LE, draw(st.integers(1, 5))))
        constraints.append(Constraint(e(k), GE, -draw(st.integers(1, 5))))
    for _ in range(draw(st.integers(0, 3))):
        row = SparseVec({k: draw(st.integers(-3, 3)) for k in range(3)})
        constraints.append(Constraint(row, draw(st.sampled_from([LE, GE, EQ])),
                                      draw(st.integers(-4, 4))))
    objective = SparseVec({k: draw(st.integers(-3, 3)) for k in range(3)})
    return LpProblem(objective, constraints)


def point_lists(coords=4, min_size=1, max_size=5):
    return st.lists(points(coords), min_size=min_size, max_size=max_size)


def point_sets(coords=4, min_size=1, max_size=5):
    return point_lists(coords, min_size, max_size).map(PointSet)


def polytopes(coords=4, min_size=1, max_size=5):
    return point_lists(coords, min_size, max_size).map(Polyhedron)


def targets(variant):
    if variant == STATE:
        element = probabilities()
    else:
        element = points(8, nonneg=variant == POSITIVE)
    return st.lists(element, min_size=1, max_size=12).map(PointSet)


scalars = st.fractions(min_value=-5, max_value=5, max_denominator=4)
path_parameters = st.fractions(min_value=0, max_value=1, max_denominator=6)


def brute_force_extreme(vectors, dimension):
    """Points outside the hull of every set of at most dimension + 1
    of the other points."""
    distinct = list(dict.fromkeys(vectors))
    extreme = set()
    for p in distinct:
        others = [q for q in distinct if q != p]
        sizes = range(1, min(dimension + 1, len(others)) + 1)
        if not any(in_hull(p, list(subset)) for r in sizes
                   for subset in itertools.combinations(others, r)):
            extreme.add(p)
    return extreme


class NumericsCase(unittest.TestCase):

    def test_rational_text(self):
        self.assertEqual(parse_rational('-3/4'), Fraction(-3, 4))
        self.assertEqual(parse_rational('5'), Fraction(5))
        self.assertEqual(parse_rational('inf'), INF)
        self.assertEqual(format_rational(Fraction(5)), '5/1')
        self.assertEqual(format_rational(Fraction(-3, 4)), '-3/4')
        self.assertEqual(format_rational(INF), 'inf')
        with self.assertRaises(DocumentError):
            parse_rational('1/0')
        with self.assertRaises(DocumentError):
            as_rational(0.5)

    def test_integer_fields(self):
        self.assertEqual(as_integer('7'), 7)
        self.assertEqual(as_integer(-2, 'seed'), -2)
        for bad in ('x', 1.5, True, None, [1]):
            with self.assertRaises(DocumentError):
                as_integer(bad, 'seed')
        self.assertEqual(json_list({}, 'points'), [])
        with self.assertRaises(DocumentError):
            json_list({'points': 5}, 'points')

    def test_sparse_vectors(self):
        v = SparseVec({3: 2, 1: 0, 0: Fraction(-1, 2)})
        self.assertEqual(list(v), [0, 3])
        self.assertEqual(v.to_json(), [[0, '-1/2'], [3, '2/1']])
        self.assertEqual(SparseVec.from_json(v.to_json()), v)
        self.assertEqual(v - v, SparseVec())
        self.assertEqual(l1_norm(v), Fraction(5, 2))
        self.assertEqual(sup_norm(v), Fraction(2))
        self.assertEqual(pair(e(3, 5), v), Fraction(10))
        with self.assertRaises(DocumentError):
            SparseVec.from_json([[0, '1'], [0, '2']])
        with self.assertRaises(DocumentError):
            SparseVec({-1: 1})

    def test_vector_shorthand(self):
        self.assertEqual(parse_vector('e5'), e(5))
        self.assertEqual(parse_vector('2*e5'), e(5, 2))
        self.assertEqual(parse_vector('e0+2*e1'), plane(1, 2))
        self.assertEqual(parse_vector('-1/2*e3'), e(3, Fraction(-1, 2)))
        self.assertEqual(parse_vector('[[1, "3/1"]]'), e(1, 3))
        with self.assertRaises(DocumentError):
            parse_vector('x7')

    @settings(max_examples=200)
    @given(functionals(6), points(6), points(6), scalars, scalars)
    def test_pair_is_bilinear(self, A, sigma, tau, alpha, beta):
        self.assertEqual(pair(A, sigma * alpha + tau * beta),
                         alpha * pair(A, sigma) + beta * pair(A, tau))
        self.assertEqual(pair(A * alpha, sigma), alpha * pair(A, sigma))
        self.assertLessEqual(abs(pair(A, sigma)), sup_norm(A) * l1_norm(sigma))


class LpCase(unittest.TestCase):

    def test_small_programs(self):
        problem = LpProblem(e(0), [Constraint(e(0), LE, 3)])
        outcome = lp_solve(problem, MAXIMIZE)
        self.assertIsInstance(outcome, Optimal)
        self.assertEqual(outcome.value, 3)
        self.assertEqual(outcome.point, e(0, 3))
        self.assertTrue(lp_certify(problem, MAXIMIZE, outcome))
        triangle = LpProblem(plane(1, 1), [Constraint(plane(1, 1), LE, 1)],
                             nonnegative={0, 1})
        outcome = lp_solve(triangle, MAXIMIZE)
        self.assertIsInstance(outcome, Optimal)
        self.assertEqual(outcome.value, 1)
        self.assertTrue(triangle.feasible(outcome.point))
        self.assertTrue(lp_certify(triangle, MAXIMIZE, outcome))

    def test_optimal_with_duals(self):
        problem = LpProblem(plane(1, 1), [
            Constraint(plane(1, 2), LE, 4),
            Constraint(plane(3, 1), LE, 6),
        ], nonnegative={0, 1})
        outcome = lp_solve(problem, MAXIMIZE)
        self.assertIsInstance(outcome, Optimal)
        self.assertEqual(outcome.value, Fraction(14, 5))
        self.assertTrue(lp_certify(problem, MAXIMIZE, outcome))

    def test_infeasible_farkas(self):
        problem = LpProblem(e(0), [Constraint(e(0), GE, 1),
                                   Constraint(e(0), LE, 0)])
        outcome = lp_solve(problem, MAXIMIZE)
        self.assertIsInstance(outcome, Infeasible)
        self.assertTrue(lp_certify(problem, MAXIMIZE, outcome))

    def test_unbounded_ray(self):
        problem = LpProblem(plane(1, -1), [Constraint(e(1), EQ, 2)], {0})
        outcome = lp_solve(problem, MAXIMIZE)
        self.assertIsInstance(outcome, Unbounded)
        self.assertTrue(lp_certify(problem, MAXIMIZE, outcome))
        self.assertIsInstance(lp_solve(problem, MINIMIZE), Optimal)

    @settings(max_examples=40)
    @given(bounded_programs())
    def test_random_programs_certify(self, problem):
        for sense in (MAXIMIZE, MINIMIZE):
            outcome = lp_solve(problem, sense)
            self.assertNotIsInstance(outcome, Unbounded)
            self.assertTrue(lp_certify(problem, sense, outcome))


class GeometryCase(unittest.TestCase):

    def test_hull_drops_center(self):
        square = unit_square()
        center = plane(Fraction(1, 2), Fraction(1, 2))
        hull = closed_convex_hull(PointSet(list(square.vertices) + [center]))
        self.assertEqual(set(hull.vertices), set(square.vertices))
        self.assertTrue(hull.irredundant)
        self.assertTrue(same_hull(hull, square))

    @settings(max_examples=50)
    @given(point_lists(2, min_size=4, max_size=4))
    def test_hull_matches_brute_force(self, vectors):
        hull = closed_convex_hull(PointSet(vectors))
        self.assertEqual(set(hull.vertices), brute_force_extreme(vectors, 2))

    @settings(max_examples=25)
    @given(point_lists(3, min_size=6, max_size=6))
    def test_extreme_set_matches_brute_force(self, vectors):
        expected = brute_force_extreme(vectors, 3)
        self.assertEqual(set(irredundant_vertices(PointSet(vectors)).points),
                         expected)
        self.assertEqual({c.vertex for c in exposed_all(PointSet(vectors))},
                         expected)

    @settings(max_examples=60)
    @given(point_lists(max_size=5), point_lists(max_size=3, min_size=0))
    def test_hull_closure_laws(self, first, extra):
        hull = closed_convex_hull(PointSet(first))
        for p in first:
            self.assertTrue(membership(p, hull))
        again = closed_convex_hull(Polyhedron(hull.vertices))
        self.assertEqual(set(again.vertices), set(hull.vertices))
        larger = closed_convex_hull(PointSet(first + extra))
        for v in hull.vertices:
            self.assertTrue(membership(v, larger))

    def test_rays_and_support(self):
        P = Polyhedron([SparseVec()], rays=[e(0), e(0, 2), e(1)])
        self.assertTrue(in_cone(plane(3, 1), P.rays))
        self.assertFalse(in_cone(e(0, -1), P.rays))
        self.assertEqual(len(closed_convex_hull(P).rays), 2)
        self.assertEqual(support_value(P, e(0)), INF)
        self.assertEqual(support_value(P, e(0, -1)), 0)
        self.assertEqual(scalar_image(P, e(0)), Interval(Fraction(0), INF))

    @settings(max_examples=100)
    @given(polytopes(), functionals(),
           st.fractions(min_value=Fraction(1, 4), max_value=4,
                        max_denominator=4))
    def test_support_is_positively_homogeneous(self, P, A, alpha):
        self.assertEqual(support_value(P, A * alpha),
                         alpha * support_value(P, A))

    def test_scalar_images(self):
        F = PointSet([e(0), e(0, 3), SparseVec()])
        self.assertEqual(scalar_image(F, e(0)),
                         FinitePoints((Fraction(0), Fraction(1), Fraction(3))))
        self.assertEqual(scalar_image(Polyhedron(F.points), e(0)),
                         Interval(Fraction(0), Fraction(3)))

    def test_path_combine(self):
        P, Q = PointSet([SparseVec()]), PointSet([e(0), e(1)])
        self.assertTrue(same_hull(path_combine(0, P, Q), P))
        self.assertTrue(same_hull(path_combine(1, P, Q), Q))
        half = path_combine(Fraction(1, 2), P, Q)
        self.assertTrue(membership(plane(Fraction(1, 4), Fraction(1, 4)), half))
        with self.assertRaises(BadParameter):
            path_combine(2, P, Q)
        samples = path_samples(P, Q, ['0', '1/2', 1])
        self.assertEqual([lam for lam, _ in samples], [0, Fraction(1, 2), 1])
        self.assertTrue(same_hull(samples[1][1], half))

    @settings(max_examples=40)
    @given(polytopes(3, max_size=3), path_parameters)
    def test_path_from_a_set_to_itself(self, P, lam):
        self.assertTrue(same_hull(path_combine(lam, P, P), P))

    @settings(max_examples=40)
    @given(polytopes(3, max_size=3), polytopes(3, max_size=3), functionals(3),
           path_parameters, path_parameters)
    def test_path_is_lipschitz(self, P, Q, A, first, second):
        spread = max(abs(pair(A, p - q)) for p in P.vertices
                     for q in Q.vertices)
        distance = pseudometric_dH(path_combine(first, P, Q),
                                   path_combine(second, P, Q), A)
        self.assertLessEqual(distance, abs(second - first) * spread)

    def test_hyperset_classes(self):
        polar = PolarSpec()
        self.assertEqual(hyperset_classes(PointSet([e(0)]), polar),
                         frozenset({'F', 'B', 'K', 'U'}))
        ray = Polyhedron([SparseVec()], rays=[e(0)])
        self.assertEqual(hyperset_classes(ray, polar), frozenset({'F', 'CF'}))

    def test_set_documents(self):
        doc = {'kind': 'polyhedron', 'points': [[[0, '1/2']]],
               'rays': [[[1, '1/1']]]}
        P = set_from_dict(doc)
        self.assertEqual(set_from_dict(P.to_dict()), P)
        for bad in ({}, {'kind': 'points', 'points': []},
                    {'kind': 'cloud', 'points': [[]]},
                    {'kind': 'points', 'points': 5},
                    {'kind': 'polyhedron', 'points': [[]], 'rays': 'x'}):
            with self.assertRaises(DocumentError):
                set_from_dict(bad)
        with self.assertRaises(NonConvexInput):
            set_from_dict({'kind': 'points', 'points': [[]],
                           'rays': [[[0, '1']]]})

    def test_irredundant_flag_is_recomputed(self):
        doc = {'kind': 'polyhedron', 'irredundant': True,
               'points': [[], [[0, '1/1']], [[0, '1/2']]]}
        P = set_from_dict(doc)
        self.assertFalse(P.irredundant)
        hull = closed_convex_hull(P)
        self.assertEqual(set(hull.vertices), {SparseVec(), e(0)})
        self.assertEqual(len(exposed_all(P)), 2)


class HypermetricsCase(unittest.TestCase):

    def test_pseudometric_examples(self):
        origin = PointSet([SparseVec()])
        self.assertEqual(pseudometric_dH(origin, PointSet([e(0)]), e(0)), 1)
        self.assertEqual(pseudometric_dH(origin, origin, e(3)), 0)
        self.assertEqual(pseudometric_dH(PointSet([e(5, 32)]), origin, e(5)),
                         32)

    def test_metric_examples(self):
        self.assertEqual(metric_d(e(0), SparseVec()), Fraction(1, 4))
        self.assertEqual(metric_d(e(2, Fraction(1, 2)), e(2, Fraction(1, 2))),
                         0)
        K = PointSet([e(m, 2 ** m) for m in range(1, 6)] + [SparseVec()])
        self.assertEqual(metric_d(e(5, 32), SparseVec(), MetricConfig(K)),
                         Fraction(1, 66))
        self.assertEqual(MetricConfig(K).normalizer(e(5)), 32)
        with self.assertRaises(NotInNormalizingSet):
            metric_d(e(0, 2), SparseVec())

    @settings(max_examples=50)
    @given(points(), points())
    def test_metric_bounded_by_l1(self, s, t):
        self.assertLessEqual(metric_d(s, t), l1_norm(s - t))

    def test_dense_config(self):
        cfg = MetricConfig(enumeration=DENSE, terms=12)
        low, high = metric_d_bounds(e(0), SparseVec(), cfg)
        self.assertLess(low, high)
        self.assertEqual(high - low, Fraction(2, 2 ** 12))
        self.assertEqual(MetricConfig.from_dict(cfg.to_dict()), cfg)
        with self.assertRaises(BadParameter):
            hausdorff_full(PointSet([e(0)]), PointSet([SparseVec()]), cfg)
        for bad in ({'terms': 'x'}, {'terms': [64]}, []):
            with self.assertRaises(DocumentError):
                MetricConfig.from_dict(bad)

    def test_dense_functionals_from_threads(self):
        results = []
        workers = [threading.Thread(
            target=lambda: results.append(dense_functionals(400)))
            for _ in range(4)]
        for worker in workers:
            worker.start()
        for worker in workers:
            worker.join()
        self.assertEqual(len(results), 4)
        for listing in results:
            self.assertEqual(listing, results[0])
        self.assertEqual(len(set(results[0])), 400)

    def test_hausdorff_examples(self):
        origin, unit = PointSet([SparseVec()]), PointSet([e(0)])
        segment = Polyhedron([SparseVec(), e(0)])
        self.assertEqual(hausdorff_full(segment, segment), 0)
        self.assertEqual(hausdorff_full(origin, unit), Fraction(1, 4))
        self.assertEqual(hausdorff_full(segment, origin), Fraction(1, 4))
        self.assertEqual(distance_to_set(e(0), segment), 0)
        with self.assertRaises(UnboundedInput):
            hausdorff_full(Polyhedron([SparseVec()], rays=[e(0)]), origin)

    @settings(max_examples=50)
    @given(polytopes(3, max_size=3), polytopes(3, max_size=3))
    def test_hausdorff_separates_hulls(self, P, Q):
        if same_hull(P, Q):
            self.assertEqual(hausdorff_full(P, Q), 0)
        else:
            self.assertGreater(hausdorff_full(P, Q), 0)

    @settings(max_examples=60)
    @given(point_sets(max_size=3), point_sets(max_size=3),
           point_sets(max_size=3), functionals(), scalars)
    def test_pseudometric_axioms(self, F, G, H, A, alpha):
        dFG = pseudometric_dH(F, G, A)
        self.assertEqual(dFG, pseudometric_dH(G, F, A))
        self.assertEqual(pseudometric_dH(F, F, A), 0)
        self.assertLessEqual(
            dFG, pseudometric_dH(F, H, A) + pseudometric_dH(H, G, A))
        self.assertEqual(pseudometric_dH(F, G, A * alpha), abs(alpha) * dFG)

    @settings(max_examples=40)
    @given(polytopes(max_size=4), polytopes(max_size=3), functionals())
    def test_convex_reduction(self, P, Q, A):
        expected = max(abs(support_value(P, A) - support_value(Q, A)),
                       abs(support_value(P, -A) - support_value(Q, -A)))
        self.assertEqual(pseudometric_dH(P, Q, A), expected)

    @settings(max_examples=200)
    @given(point_sets(), point_sets(), functionals())
    def test_co_contraction(self, F1, F2, A):
        hulls = pseudometric_dH(Polyhedron(F1.points),
                                Polyhedron(F2.points), A)
        self.assertLessEqual(hulls, pseudometric_dH(F1, F2, A))
        self.assertEqual(hulls, scalar_hausdorff(
            scalar_hull(scalar_image(F1, A)),
            scalar_hull(scalar_image(F2, A))))

    def test_separation_examples(self):
        A = separating_direction(PointSet([SparseVec()]), PointSet([e(0)]))
        self.assertEqual(pseudometric_dH(PointSet([SparseVec()]),
                                         PointSet([e(0)]), A), 1)
        square = unit_square()
        centered = Polyhedron(list(square.vertices) +
                              [plane(Fraction(1, 2), Fraction(1, 2))])
        self.assertIsNone(separating_direction(square, centered))
        triangle = Polyhedron([plane(0, 0), plane(1, 0), plane(0, 1)])
        edge = Polyhedron([plane(0, 0), plane(1, 0)])
        A = separating_direction(triangle, edge)
        self.assertGreater(pseudometric_dH(triangle, edge, A), 0)

    @settings(max_examples=100)
    @given(polytopes(3, min_size=3, max_size=3), st.booleans(),
           polytopes(3, min_size=3, max_size=3))
    def test_separation_dichotomy(self, P, shuffled, other):
        if shuffled:
            inner = [(v + w) / 2 for v, w in zip(P.vertices, P.vertices[1:])]
            Q = Polyhedron(list(reversed(P.vertices)) + inner)
        else:
            Q = other
        A = separating_direction(P, Q)
        if A is None:
            self.assertTrue(same_hull(P, Q))
            self.assertEqual(hausdorff_full(P, Q), 0)
        else:
            self.assertFalse(same_hull(P, Q))
            self.assertGreater(pseudometric_dH(P, Q, A), 0)

    @settings(max_examples=50)
    @given(polytopes(max_size=3), polytopes(max_size=2))
    def test_metric_comparison(self, P, Q):
        full = hausdorff_full(P, Q)
        coords = {k for v in P.vertices + Q.vertices for k in v}
        for k in coords:
            self.assertLessEqual(pseudometric_dH(P, Q, e(k)),
                                 comparison_factor(k + 1) * full)

    def test_immeasurable(self):
        segment = Polyhedron([SparseVec(), e(0, Fraction(1, 2))])
        ray = Polyhedron([SparseVec()], rays=[e(0)])
        A = immeasurable_witness(segment, ray)
        self.assertEqual(A, e(0))
        self.assertEqual(pseudometric_dH(segment, ray, A), INF)
        self.assertIsNone(immeasurable_witness(segment, PointSet([e(1)])))

    @settings(max_examples=20)
    @given(functionals(2))
    def test_shared_recession_cone_is_measurable(self, A):
        P = Polyhedron([SparseVec(), e(1)], rays=[e(0)])
        Q = Polyhedron([e(1, Fraction(1, 2))], rays=[e(0)])
        self.assertIsNone(immeasurable_witness(P, Q))
        self.assertNotEqual(pseudometric_dH(P, Q, A), INF)

    def test_cylinders_and_clopen(self):
        P = Polyhedron([SparseVec()], rays=[e(1)])
        over0, over1 = CylinderSpec([e(0)]), CylinderSpec([e(1)])
        self.assertTrue(cylinder_bounded(unit_square(), over1))
        self.assertTrue(cylinder_bounded(P, over0))
        self.assertFalse(cylinder_bounded(P, over1))
        self.assertTrue(clopen_eval(Atom(CylinderSpec()), P))
        expr = clopen_from_dict({'and': [{'atom': [[[0, '1']]]},
                                         {'not': {'atom': [[[1, '1']]]}}]})
        self.assertTrue(clopen_eval(expr, P))
        self.assertEqual(len(clopen_atoms(expr)), 2)

    @settings(max_examples=30)
    @given(st.lists(st.integers(0, 2), min_size=2, max_size=2, unique=True),
           st.lists(st.booleans(), min_size=3, max_size=3))
    def test_de_morgan(self, chosen, directions):
        a, b = (Atom(CylinderSpec([e(k)])) for k in chosen)
        rays = [e(k) for k, used in enumerate(directions) if used]
        P = Polyhedron([SparseVec()], rays=rays)
        left = Not(And((a, b)))
        right = Or((Not(a), Not(b)))
        self.assertEqual(clopen_eval(left, P), clopen_eval(right, P))


class FacesCase(unittest.TestCase):

    def test_square_certificate(self):
        cert = exposure_certificate(unit_square(), plane(1, 1))
        self.assertEqual(cert.functional, plane(1, 1))
        self.assertEqual(cert.margin, 1)
        self.assertTrue(cert.check(unit_square().vertices))
        self.assertEqual(ExposureCertificate.from_dict(cert.to_dict()), cert)

    def test_singleton_and_midpoint(self):
        cert = exposure_certificate(PointSet([e(2)]), e(2))
        self.assertEqual(cert.functional, SparseVec())
        self.assertEqual(cert.margin, 1)
        with self.assertRaises(NotAVertex):
            exposure_certificate(Polyhedron([SparseVec(), e(0, 2), e(0)]), e(0))

    def test_exposed_all(self):
        triangle = Polyhedron([plane(0, 0), plane(1, 0), plane(0, 1)])
        self.assertEqual(len(exposed_all(triangle)), 3)
        centered = PointSet(list(unit_square().vertices) +
                            [plane(Fraction(1, 2), Fraction(1, 2))])
        self.assertEqual(len(exposed_all(centered)), 4)

    @settings(max_examples=20)
    @given(point_sets(3, min_size=8, max_size=8))
    def test_every_vertex_is_exposed(self, P):
        certificates = exposed_all(P)
        self.assertEqual({c.vertex for c in certificates},
                         set(irredundant_vertices(P).points))
        for cert in certificates:
            self.assertTrue(cert.check([c.vertex for c in certificates]))

    def test_stadium(self):
        P = stadium_family(8)
        self.assertEqual(len(P.vertices), 8)
        for x in (-1, 1):
            for y in (-1, 1):
                self.assertIn(plane(x, y), P.vertices)
        self.assertEqual(len(exposed_all(P)), 8)
        margins = [exposure_certificate(stadium_family(n), plane(1, 1)).margin
                   for n in (8, 16, 32)]
        self.assertGreater(margins[0], margins[1])
        self.assertGreater(margins[1], margins[2])
        with self.assertRaises(BadParameter):
            stadium_family(9)

    def test_extreme_deviation(self):
        single = extreme_deviation(PointSet([e(0)]))
        self.assertEqual((single.lower, single.upper), (0, 0))
        segment = extreme_deviation(Polyhedron([SparseVec(), e(0)]), budget=4)
        self.assertEqual(segment.lower, Fraction(1, 8))
        self.assertGreaterEqual(segment.upper, segment.lower)
        half = Fraction(1, 2)
        square = Polyhedron([plane(0, 0), plane(half, 0), plane(0, half),
                             plane(half, half)])
        estimate = extreme_deviation(square, budget=10, m=32)
        self.assertEqual(estimate.lower, Fraction(3, 32))
        self.assertTrue(estimate.in_F_m)

    @settings(max_examples=10)
    @given(polytopes(3, min_size=4, max_size=4))
    def test_deviation_monotone_in_budget(self, P):
        lowers = [extreme_deviation(P, budget=b, seed=5).lower
                  for b in (1, 4, 12)]
        self.assertEqual(lowers, sorted(lowers))
        self.assertLessEqual(lowers[-1], extreme_deviation(P, budget=12).upper)

    def test_degeneracy_sweep(self):
        self.assertEqual(len(regular_polygon(3).vertices), 8)
        rows = degeneracy_sweep(ks=(3, 4, 5, 6), directions=20, seed=0)
        self.assertEqual([r.vertices for r in rows], [8, 16, 32, 64])
        for row in rows[1:]:
            self.assertGreaterEqual(row.ratio, Fraction(3, 2))
        row = rows[0].to_dict()
        self.assertEqual(row['directions'], 20)
        self.assertEqual(row['bound'], 'lower')
        self.assertIn('20 sampled directions', row['caveat'])
        self.assertIsNone(row['reaches_two'])


def check_construction(testcase, U, variant, seed):
    """Construct and verify at both epsilons on one target."""
    for epsilon in (Fraction(1, 2), Fraction(1, 4)):
        result, trace = construct(U, PolarSpec(), epsilon, 16, variant, seed)
        report = verify_trace(U, PolarSpec(), result, trace)
        testcase.assertTrue(report.passed, report.to_dict())
        for step in trace.steps:
            testcase.assertEqual(step.lam, min(1, epsilon / 2 ** (step.n + 1)))
        if variant != PLAIN:
            for v in result.vertices:
                testcase.assertTrue(all(x >= 0 for _, x in v.items()))
        if variant == STATE:
            for v in result.vertices:
                testcase.assertEqual(sum(x for _, x in v.items()), 1)


class PoulsenCase(unittest.TestCase):

    def test_schedule_example(self):
        origin = PointSet([SparseVec()])
        _, trace = construct(origin, PolarSpec(), Fraction(1, 2), 2)
        self.assertEqual(trace.steps[0].lam, Fraction(1, 8))
        self.assertEqual(trace.steps[1].lam, Fraction(1, 16))
        self.assertEqual(trace.steps[1].c, Fraction(1, 16))

    def test_single_step(self):
        result, trace = construct(PointSet([SparseVec()]), PolarSpec(),
                                  Fraction(1, 2), 1)
        step = trace.steps[0]
        self.assertEqual(step.omega, e(step.fresh_coordinate, Fraction(1, 8)))
        self.assertEqual(pair(step.functional, step.omega), Fraction(1, 8))
        self.assertEqual(len(result.vertices), 2)

    def test_state_space_step(self):
        result, trace = construct(PointSet([e(0)]), PolarSpec(),
                                  Fraction(1, 2), 1, STATE)
        omega = trace.steps[0].omega
        self.assertEqual(omega[0], 1 - Fraction(1, 8))
        self.assertEqual(sum(x for _, x in omega.items()), 1)

    def test_preconditions(self):
        with self.assertRaises(TargetOutsidePolar):
            construct(PointSet([e(0, 2)]))
        with self.assertRaises(VariantPreconditionViolated):
            construct(PointSet([e(0, -1)]), variant=POSITIVE)
        with self.assertRaises(VariantPreconditionViolated):
            construct(PointSet([e(0, Fraction(1, 2))]), variant=STATE)

    def test_faults_are_reported(self):
        U = PointSet([SparseVec(), e(0, Fraction(1, 2))])
        result, trace = construct(U, PolarSpec(), Fraction(1, 2), 3)
        self.assertTrue(verify_trace(U, PolarSpec(), result, trace).passed)

        steps = list(trace.steps)
        steps[1] = dataclasses.replace(steps[1],
                                       lam=steps[1].lam + Fraction(1, 1000))
        bad = dataclasses.replace(trace, steps=tuple(steps))
        report = verify_trace(U, PolarSpec(), result, bad)
        self.assertFalse(report.check('schedule').passed)

        barycenter = sum(result.vertices, SparseVec()) / len(result.vertices)
        vertices = list(result.vertices[:-1]) + [barycenter]
        report = verify_trace(U, PolarSpec(), Polyhedron(vertices), trace)
        self.assertFalse(report.check('exposure').passed)

    def test_signed_step_fails_variant_check(self):
        U = PointSet([e(0, Fraction(1, 2))])
        result, trace = construct(U, PolarSpec(), Fraction(1, 2), 2, POSITIVE)
        report = verify_trace(U, PolarSpec(), result, trace)
        self.assertTrue(report.check('variant').passed)
        self.assertEqual(report.check('variant').detail['signed_steps'], [])
        steps = list(trace.steps)
        steps[0] = dataclasses.replace(steps[0], sigma=-steps[0].sigma)
        bad = dataclasses.replace(trace, steps=tuple(steps))
        check = verify_trace(U, PolarSpec(), result, bad).check('variant')
        self.assertFalse(check.passed)
        self.assertEqual(check.detail['signed_steps'], [1])

    def test_unbounded_result_is_reported(self):
        U = PointSet([SparseVec()])
        result, trace = construct(U, PolarSpec(), Fraction(1, 2), 2)
        widened = Polyhedron(result.vertices, rays=[e(0)])
        report = verify_trace(U, PolarSpec(), widened, trace)
        self.assertFalse(report.passed)
        self.assertFalse(report.check('distance_2eps').passed)
        self.assertEqual(report.check('exposure').detail['failed_steps'],
                         [1, 2])

    def test_trace_document(self):
        U = PointSet([e(1, Fraction(1, 3))])
        _, trace = construct(U, PolarSpec(), Fraction(1, 4), 3, seed=9)
        restored = PoulsenTrace.from_dict(json.loads(json.dumps(trace.to_dict())))
        self.assertEqual(restored, trace)
        _, again = construct(U, PolarSpec(), Fraction(1, 4), 3, seed=9)
        self.assertEqual(again.to_dict(), trace.to_dict())

    def test_malformed_trace_documents(self):
        _, trace = construct(PointSet([SparseVec()]), PolarSpec(),
                             Fraction(1, 2), 2)
        document = trace.to_dict()
        for key, value in (('seed', 'x'), ('steps', 5), ('epsilon', None)):
            with self.assertRaises(DocumentError):
                PoulsenTrace.from_dict(dict(document, **{key: value}))
        for key, value in (('n', 'x'), ('fresh_coordinate', 1.5)):
            steps = [dict(document['steps'][0], **{key: value})]
            with self.assertRaises(DocumentError):
                PoulsenTrace.from_dict(dict(document, steps=steps))
        with self.assertRaises(DocumentError):
            PoulsenTrace.from_dict(dict(document, steps=[['n', 1]]))

    def test_scheduler(self):
        state = SchedulerState()
        pool = [e(0), e(1), e(2)]
        state.add_stage(pool)
        first, state = scheduler_next(state)
        self.assertEqual(first, e(0))
        for _ in range(10):
            scheduler_next(state)
        keys = list(state.queue)
        served = []
        for _ in range(3 * len(keys)):
            scheduler_next(state)
            served.append(state.queue[-1])
        for key in keys:
            self.assertGreaterEqual(served.count(key), 2)

    def test_monotone_stages(self):
        U = PointSet([SparseVec(), e(1, Fraction(1, 2))])
        result, trace = construct(U, PolarSpec(), Fraction(1, 2), 4)
        hulls = intermediate_hulls(U, trace)
        self.assertEqual(hulls[-1], result)
        for smaller, larger in zip(hulls, hulls[1:]):
            self.assertTrue(all(membership(v, larger) for v in smaller.vertices))
        distances = [hausdorff_full(H, result) for H in hulls]
        self.assertEqual(distances, sorted(distances, reverse=True))
        self.assertEqual(distances[-1], 0)

    def test_jordan_examples(self):
        self.assertEqual(jordan_decompose(plane(3, -2)), (e(0, 3), e(1, 2)))
        self.assertEqual(jordan_decompose(plane(1, 2)), (plane(1, 2),
                                                         SparseVec()))

    @settings(max_examples=200)
    @given(points(6))
    def test_jordan(self, sigma):
        plus, minus = jordan_decompose(sigma)
        self.assertEqual(plus - minus, sigma)
        self.assertEqual(l1_norm(plus) + l1_norm(minus), l1_norm(sigma))
        self.assertFalse(plus.support() & minus.support())
        self.assertTrue(all(x > 0 for _, x in plus.items()))
        self.assertTrue(all(x > 0 for _, x in minus.items()))
        self.assertLessEqual(l1_norm(plus), 1)

    @settings(max_examples=25)
    @given(targets(PLAIN), st.integers(0, 1000))
    def test_construction_bound_plain(self, U, seed):
        check_construction(self, U, PLAIN, seed)

    @settings(max_examples=25)
    @given(targets(POSITIVE), st.integers(0, 1000))
    def test_construction_bound_positive(self, U, seed):
        check_construction(self, U, POSITIVE, seed)

    @settings(max_examples=25)
    @given(targets(STATE), st.integers(0, 1000))
    def test_construction_bound_state(self, U, seed):
        check_construction(self, U, STATE, seed)


class LimitsCase(unittest.TestCase):

    def test_constant_and_alternating(self):
        P = Polyhedron([SparseVec(), e(0, Fraction(1, 2))])
        seq = SequencePrefix([P, P, P])
        rows = li_ls_diagnostic(seq, PointSet([e(0, Fraction(1, 4))]))
        self.assertTrue(rows['candidates'][0]['in_Li_approx'])
        self.assertTrue(rows['candidates'][0]['in_Ls_approx'])

        alternating = SequencePrefix([PointSet([e(0, (-1) ** n)])
                                      for n in range(6)])
        report = li_ls_diagnostic(alternating, PointSet([e(0), e(0, -1)]))
        for row in report['candidates']:
            self.assertFalse(row['in_Li_approx'])
            self.assertTrue(row['in_Ls_approx'])
        self.assertIn('1/2', report['header']['ls_rule'])

    def test_nested_triangles(self):
        half = Fraction(1, 2)
        sets = [Polyhedron([SparseVec(), e(0, half)]),
                Polyhedron([SparseVec(), e(0, half), e(1, half)]),
                Polyhedron([SparseVec(), e(0, half), e(1, half), e(2, half)])]
        K, _ = monotone_limit(SequencePrefix(sets))
        for index, F in enumerate(sets):
            seq = SequencePrefix(sets, 0, index)
            report = li_ls_diagnostic(seq, PointSet(F.vertices))
            for row in report['candidates']:
                self.assertTrue(row['in_Li_approx'])
                self.assertTrue(row['in_Ls_approx'])
                sigma = SparseVec.from_json(row['candidate'])
                self.assertTrue(membership(sigma, K))
        late = li_ls_diagnostic(SequencePrefix(sets, 0, 0),
                                PointSet([e(2, half)]))
        self.assertFalse(late['candidates'][0]['in_Li_approx'])

    def test_monotone_segments(self):
        sets = [Polyhedron([SparseVec(), e(0, 1 - Fraction(1, 2 ** n))])
                for n in range(1, 5)]
        K, table = monotone_limit(SequencePrefix(sets))
        self.assertEqual(set(K.vertices), {SparseVec(), e(0, Fraction(15, 16))})
        expected = [Fraction(1, 4) * (Fraction(1, 2 ** n) - Fraction(1, 16))
                    for n in range(1, 5)]
        self.assertEqual(table, expected)
        single, table = monotone_limit(SequencePrefix(sets[:1]))
        self.assertEqual(table, [0])
        with self.assertRaises(NotNested):
            monotone_limit(SequencePrefix(list(reversed(sets))))

    def test_monotone_poulsen_hulls(self):
        U = PointSet([SparseVec(), e(0, Fraction(1, 3))])
        _, trace = construct(U, PolarSpec(), Fraction(1, 2), 4)
        _, table = monotone_limit(SequencePrefix(intermediate_hulls(U, trace)))
        self.assertEqual(table, sorted(table, reverse=True))
        self.assertEqual(table[-1], 0)

    def test_counterexample(self):
        one = counterexample_demo(1)
        self.assertEqual(one['rows'][0]['distance'], Fraction(1, 6))
        self.assertEqual(one['max_l1_norm'], 2)
        five = counterexample_demo(5)
        self.assertEqual(five['rows'][-1]['distance'], Fraction(1, 66))
        self.assertEqual(five['rows'][-1]['direction_value'], 32)
        self.assertEqual(five['max_l1_norm'], 32)
        self.assertTrue(five['distances_decreasing'])
        self.assertTrue(five['norms_increasing'])
        with self.assertRaises(BadParameter):
            counterexample_demo(0)


class AppCase(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.app = create_app(TestConfig)
        cls.app_context = cls.app.app_context()
        cls.app_context.push()
        db.create_all()

    @classmethod
    def tearDownClass(cls):
        db.session.remove()
        db.drop_all()
        cls.app_context.pop()

    def setUp(self):
        db.session.rollback()
        db.session.query(Run).delete()
        db.session.commit()
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, name, document):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w') as f:
            json.dump(document, f)
        return path

    def points(self, name, *vectors):
        return self.write(name, PointSet(list(vectors)).to_dict())


class CliCase(AppCase):

    def invoke(self, *args):
        return self.app.test_cli_runner().invoke(args=list(args))

    def report(self, result):
        return json.loads(result.output)['report']

    def manifest(self, result):
        return json.loads(result.output)['manifest']

    def test_distance(self):
        origin = self.points('origin.json', SparseVec())
        unit = self.points('unit.json', e(0))
        result = self.invoke('distance', origin, origin)
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(self.report(result)['distance'], '0/1')
        self.assertEqual(
            self.manifest(result)['effective']['metric_config']['enumeration'],
            'basis')
        result = self.invoke('distance', origin, unit, '--approx')
        self.assertEqual(self.report(result)['distance'], '1/4')
        self.assertEqual(self.report(result)['approx'], '0.25')
        far = self.points('far.json', e(5, 32))
        result = self.invoke('distance', far, origin, '--direction', 'e5')
        self.assertEqual(self.report(result)['distance'], '32/1')
        self.assertEqual(db.session.query(Run).count(), 3)

    def test_exit_codes(self):
        broken = os.path.join(self.tmp.name, 'broken.json')
        with open(broken, 'w') as f:
            f.write('{"kind": ')
        origin = self.points('origin.json', SparseVec())
        self.assertEqual(self.invoke('distance', broken, origin).exit_code, 2)
        ray = self.write('ray.json', Polyhedron([SparseVec()],
                                                rays=[e(0)]).to_dict())
        result = self.invoke('distance', ray, origin)
        self.assertEqual(result.exit_code, 3)
        self.assertIn('error:', result.output)
        run = db.session.query(Run).order_by(Run.id.desc()).first()
        self.assertEqual(run.exit_code, 3)

    def test_malformed_documents(self):
        origin = self.points('origin.json', SparseVec())
        scalar = self.write('scalar.json', {'kind': 'points', 'points': 5})
        result = self.invoke('distance', scalar, origin)
        self.assertEqual(result.exit_code, 2)
        self.assertIn('"points" must be a list', result.output)
        config = self.write('cfg.json', {'kind': 'metric', 'terms': 'x'})
        result = self.invoke('distance', origin, origin,
                             '--metric-config', config)
        self.assertEqual(result.exit_code, 2)
        out = os.path.join(self.tmp.name, 'run')
        self.invoke('poulsen', '--target', origin, '--steps', '2',
                    '--out', out)
        result_path = os.path.join(out, 'result.json')
        with open(os.path.join(out, 'trace.json')) as f:
            trace = json.load(f)
        bad_seed = self.write('seed.json', dict(trace, seed='x'))
        result = self.invoke('verify', '--target', origin,
                             '--result', result_path, '--trace', bad_seed)
        self.assertEqual(result.exit_code, 2)
        trace['steps'][0]['n'] = 'x'
        bad_step = self.write('step.json', trace)
        result = self.invoke('verify', '--target', origin,
                             '--result', result_path, '--trace', bad_step)
        self.assertEqual(result.exit_code, 2)

    def test_hull_expose_vertices(self):
        square = self.points('square.json', *unit_square().vertices,
                             plane(Fraction(1, 2), Fraction(1, 2)))
        out = os.path.join(self.tmp.name, 'hull.json')
        result = self.invoke('hull', square, '--out', out)
        self.assertEqual(result.exit_code, 0)
        with open(out) as f:
            written = json.load(f)
        self.assertEqual(len(set_from_dict(written).vertices), 4)
        self.assertEqual(written['manifest'], self.manifest(result))
        result = self.invoke('expose', square)
        self.assertEqual(len(self.report(result)['certificates']), 4)
        self.assertTrue(self.report(result)['all_checked'])
        cylinder = self.write('cyl.json', CylinderSpec([e(0)]).to_dict())
        result = self.invoke('vertices', square, '--cylinder', cylinder)
        self.assertTrue(self.report(result)['cylinder_bounded'])
        self.assertEqual(self.report(result)['classes'], ['B', 'F', 'K'])
        self.assertEqual(self.manifest(result)['effective']['polar'],
                         {'kind': 'polar', 'radius': '1/1'})

    def test_decompose_and_immeasurable(self):
        result = self.invoke('decompose', '3*e0-2*e1', '--out', self.tmp.name)
        self.assertEqual(self.report(result)['plus'], [[0, '3/1']])
        self.assertEqual(self.report(result)['minus'], [[1, '2/1']])
        self.assertTrue(os.path.exists(os.path.join(self.tmp.name, 'plus.json')))
        segment = self.points('segment.json', SparseVec(), e(0))
        ray = self.write('ray.json', Polyhedron([SparseVec()],
                                                rays=[e(1)]).to_dict())
        result = self.invoke('immeasurable', segment, ray)
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(self.report(result)['witness'], [[1, '1/1']])
        self.assertEqual(self.report(result)['distance'], 'inf')

    def test_clopen_and_limits(self):
        ray = self.write('ray.json', Polyhedron([SparseVec()],
                                                rays=[e(1)]).to_dict())
        document = {'and': [{'atom': [[[0, '1/1']]]},
                            {'not': {'atom': [[[1, '1/1']]]}}]}
        result = self.invoke('clopen', self.write('expr.json', document), ray)
        self.assertTrue(self.report(result)['value'])
        self.assertEqual(self.report(result)['expression'], document)
        self.points('a.json', SparseVec())
        self.points('b.json', SparseVec(), e(0, Fraction(1, 2)))
        manifest = self.write('seq.json', {'sets': ['a.json', 'b.json']})
        candidates = self.points('cand.json', e(0, Fraction(1, 2)))
        result = self.invoke('limits', manifest, '--candidates', candidates,
                             '--stabilization', '1', '--monotone')
        report = self.report(result)
        self.assertTrue(report['diagnostic']['candidates'][0]['in_Li_approx'])
        self.assertEqual(report['table'][-1], '0/1')
        self.assertEqual(self.manifest(result)['effective']['ls_fraction'],
                         '1/2')

    def test_poulsen_and_verify(self):
        origin = self.points('origin.json', SparseVec())
        out = os.path.join(self.tmp.name, 'run')
        result = self.invoke('poulsen', '--target', origin, '--epsilon', '1/2',
                             '--steps', '3', '--seed', '0', '--out', out)
        self.assertEqual(result.exit_code, 0)
        self.assertTrue(self.report(result)['passed'])
        for name in ('result.json', 'trace.json', 'report.json'):
            self.assertTrue(os.path.exists(os.path.join(out, name)))
        trace_path = os.path.join(out, 'trace.json')
        result_path = os.path.join(out, 'result.json')
        ok = self.invoke('verify', '--target', origin, '--result', result_path,
                         '--trace', trace_path)
        self.assertEqual(ok.exit_code, 0)
        with open(trace_path) as f:
            trace = json.load(f)
        trace['steps'][0]['lambda'] = '1/9'
        tampered = self.write('tampered.json', trace)
        bad = self.invoke('verify', '--target', origin, '--result', result_path,
                          '--trace', tampered)
        self.assertEqual(bad.exit_code, 1)

    def test_poulsen_manifest_records_defaults(self):
        origin = self.points('origin.json', SparseVec())
        out = os.path.join(self.tmp.name, 'run')
        result = self.invoke('poulsen', '--target', origin, '--steps', '2',
                             '--out', out)
        self.assertEqual(result.exit_code, 0)
        manifest = self.manifest(result)
        self.assertIsNone(manifest['arguments']['seed'])
        effective = manifest['effective']
        self.assertEqual(effective['seed'], 0)
        self.assertEqual(effective['polar'], {'kind': 'polar', 'radius': '1/1'})
        self.assertEqual(effective['epsilon'], '1/2')
        self.assertEqual(effective['metric_config']['terms'], 64)
        self.assertEqual(db.session.query(Run).one().seed, 0)
        for name in ('result.json', 'trace.json', 'report.json'):
            with open(os.path.join(out, name)) as f:
                self.assertEqual(json.load(f)['manifest'], manifest)

    def test_deviation(self):
        segment = self.points('segment.json', SparseVec(), e(0))
        result = self.invoke('deviation', segment, '--budget', '4', '--m', '8')
        self.assertEqual(result.exit_code, 0)
        report = self.report(result)
        self.assertEqual(report['lower'], '1/8')
        self.assertEqual(report['samples'], 4)
        self.assertTrue(report['in_F_m'])
        self.assertEqual(self.manifest(result)['effective']['seed'], 0)

    def test_demo(self):
        result = self.invoke('demo', '--m', '5')
        self.assertEqual(result.exit_code, 0)
        report = self.report(result)
        self.assertEqual(report['counterexample']['max_l1_norm'], '32/1')
        self.assertEqual(report['counterexample']['rows'][-1]['distance'],
                         '1/66')
        self.assertEqual(len(report['degeneracy']), 4)
        self.assertEqual(report['degeneracy'][0]['bound'], 'lower')


class ApiCase(AppCase):

    def setUp(self):
        super().setUp()
        self.client = self.app.test_client()

    def test_distance(self):
        response = self.client.post('/api/distance', json={
            'left': PointSet([SparseVec()]).to_dict(),
            'right': PointSet([e(0)]).to_dict()})
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.get_json()['distance'], '1/4')
        effective = response.get_json()['manifest']['effective']
        self.assertEqual(effective['metric_config']['enumeration'], 'basis')
        response = self.client.post('/api/distance', json={
            'left': PointSet([e(5, 32)]).to_dict(),
            'right': PointSet([SparseVec()]).to_dict(),
            'direction': e(5).to_json()})
        self.assertEqual(response.get_json()['distance'], '32/1')

    def test_errors(self):
        response = self.client.post('/api/distance', json={
            'left': {'kind': 'cloud'}, 'right': {'kind': 'points'}})
        self.assertEqual(response.status_code, 400)
        response = self.client.post('/api/hull', json={
            'set': {'kind': 'polyhedron', 'points': [[[0, '0.5']]]}})
        self.assertEqual(response.status_code, 400)
        response = self.client.post('/api/distance', json={
            'left': Polyhedron([SparseVec()], rays=[e(0)]).to_dict(),
            'right': PointSet([SparseVec()]).to_dict()})
        self.assertEqual(response.status_code, 422)
        self.assertEqual(self.client.get('/api/runs/999').status_code, 404)

    def test_malformed_documents(self):
        origin = PointSet([SparseVec()]).to_dict()
        response = self.client.post('/api/hull', json={
            'set': {'kind': 'points', 'points': 5}})
        self.assertEqual(response.status_code, 400)
        response = self.client.post('/api/hull', json=['set'])
        self.assertEqual(response.status_code, 400)
        response = self.client.post('/api/distance', json={
            'left': origin, 'right': origin, 'config': {'terms': 'x'}})
        self.assertEqual(response.status_code, 400)
        for field, value in (('seed', 'x'), ('steps', '2.5')):
            response = self.client.post('/api/poulsen', json={
                'target': origin, field: value})
            self.assertEqual(response.status_code, 400)
        self.assertEqual(db.session.query(Run).count(), 0)

    def test_hull(self):
        square = PointSet(list(unit_square().vertices) +
                          [plane(Fraction(1, 2), Fraction(1, 2))])
        response = self.client.post('/api/hull', json={'set': square.to_dict()})
        hull = set_from_dict(response.get_json()['hull'])
        self.assertEqual(set(hull.vertices), set(unit_square().vertices))

    def test_poulsen_and_runs(self):
        response = self.client.post('/api/poulsen', json={
            'target': PointSet([SparseVec()]).to_dict(),
            'epsilon': '1/2', 'steps': 2, 'variant': 'plain', 'seed': 0})
        self.assertEqual(response.status_code, 201)
        self.assertTrue(response.get_json()['report']['passed'])
        location = response.headers['Location']
        self.assertIn('/api/runs/', location)
        run = self.client.get(location).get_json()
        self.assertEqual(run['command'], 'poulsen')
        self.assertEqual(run['exit_code'], 0)
        self.assertEqual(run['manifest'], response.get_json()['manifest'])
        listing = self.client.get('/api/runs').get_json()
        self.assertEqual(listing['_meta']['total_items'], 1)

    def test_poulsen_manifest_records_defaults(self):
        response = self.client.post('/api/poulsen', json={
            'target': PointSet([SparseVec()]).to_dict(), 'steps': 2})
        self.assertEqual(response.status_code, 201)
        effective = response.get_json()['manifest']['effective']
        self.assertEqual(effective['seed'], 0)
        self.assertEqual(effective['epsilon'], '1/2')
        self.assertEqual(effective['polar'], {'kind': 'polar', 'radius': '1/1'})
        run = self.client.get(response.headers['Location']).get_json()
        self.assertEqual(run['seed'], 0)


if __name__ == '__main__':
    loader = unittest.TestLoader()

    test_order = [
        NumericsCase,
        LpCase,
        GeometryCase,
        HypermetricsCase,
        FacesCase,
        PoulsenCase,
        LimitsCase,
        CliCase,
        ApiCase,
    ]

    suite = unittest.TestSuite()

    for case in test_order:
        suite.addTests(loader.loadTestsFromTestCase(case))

    runner = unittest.TextTestRunner(verbosity=2)
    runner.run(suite)
