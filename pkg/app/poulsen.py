"""Densification by new exposed points.

Starting from a target polytope U inside the polar, every step picks a
fresh coordinate k_n above everything used so far, a point varpi_n of the
current hull from a fair scheduler and moves it a distance lambda_n towards
sigma_n = c_n e_{k_n}.  The new vertex omega_n is exposed by
A_n = e_{k_n} / c_n, and the hulls drift at most lambda_n per step.
"""
import logging
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from app.numerics import (SparseVec, pair, combine, as_rational, as_integer,
                          format_rational, json_list, union_support)
from app.geometry import (Polyhedron, PolarSpec, as_polyhedron,
                          closed_convex_hull, polar_contains)
from app.hypermetrics import MetricConfig, hausdorff_full
from app.faces import ExposureCertificate, exposure_certificate
from app.exceptions import (BadParameter, DocumentError, WstarError,
                            TargetOutsidePolar, VariantPreconditionViolated)

logger = logging.getLogger(__name__)

PLAIN = 'plain'
POSITIVE = 'positive'
STATE = 'state'
VARIANTS = (PLAIN, POSITIVE, STATE)


def jordan_decompose(sigma):
    plus = SparseVec({k: v for k, v in sigma.items() if v > 0})
    minus = SparseVec({k: -v for k, v in sigma.items() if v < 0})
    return plus, minus


def schedule_lambda(n, epsilon):
    return min(Fraction(1), epsilon / 2 ** (n + 1))


def schedule_c(n, lambdas, first):
    """c_1 = first; c_n = min{1, c_1, lambda_j / 2 : j < n} afterwards."""
    if n == 1:
        return first
    return min([Fraction(1), first] + [lam / 2 for lam in lambdas[:n - 1]])


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def convex_combination(vertices, k):
    """The k-th (1-based) rational convex combination of ``vertices``:
    weights a_i / D ordered by denominator level D, reduced forms only."""
    if k < 1:
        raise BadParameter('combinations are numbered from 1')
    seen = 0
    level = 1
    while True:
        for weights in _compositions(level, len(vertices)):
            common = 0
            for w in weights:
                common = gcd(common, w)
            if common != 1:
                continue
            seen += 1
            if seen == k:
                return combine([Fraction(w, level) for w in weights], vertices)
        level += 1


def _unpair(t):
    """Inverse of the Cantor pairing, t >= 0 -> (x, y)."""
    w = 0
    while (w + 1) * (w + 2) // 2 <= t:
        w += 1
    y = t - w * (w + 1) // 2
    return w - y, y


@dataclass
class SchedulerState:
    """Round-robin queue over keys (m, k) naming the k-th combination of
    the stage-m vertices; one fresh key is admitted after every full round."""

    stages: list = field(default_factory=list)
    queue: deque = field(default_factory=deque)
    round_left: int = 0
    cursor: int = 0

    def add_stage(self, vertices):
        self.stages.append(tuple(vertices))

    def _admit(self):
        while True:
            m, j = _unpair(self.cursor)
            self.cursor += 1
            if m < len(self.stages):
                self.queue.append((m, j + 1))
                return

    def snapshot(self):
        return {'queue': [list(key) for key in self.queue],
                'round_left': self.round_left,
                'cursor': self.cursor}


def scheduler_next(state):
    if not state.stages:
        raise BadParameter('the scheduler has no generator pool')
    if state.round_left == 0:
        state._admit()
        state.round_left = len(state.queue)
    m, k = state.queue.popleft()
    state.queue.append((m, k))
    state.round_left -= 1
    return convex_combination(state.stages[m], k), state


@dataclass(frozen=True)
class StepRecord:
    n: int
    fresh_coordinate: int
    c: Fraction
    sigma: SparseVec
    functional: SparseVec
    lam: Fraction
    varpi: SparseVec
    omega: SparseVec
    certificate: ExposureCertificate
    source: tuple = ()

    def to_dict(self):
        return {'n': self.n,
                'fresh_coordinate': self.fresh_coordinate,
                'c': format_rational(self.c),
                'sigma': self.sigma.to_json(),
                'functional': self.functional.to_json(),
                'lambda': format_rational(self.lam),
                'varpi': self.varpi.to_json(),
                'omega': self.omega.to_json(),
                'certificate': self.certificate.to_dict(),
                'source': list(self.source)}

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(as_integer(data['n'], 'n'),
                       as_integer(data['fresh_coordinate'], 'fresh_coordinate'),
                       as_rational(data['c']),
                       SparseVec.from_json(data['sigma']),
                       SparseVec.from_json(data['functional']),
                       as_rational(data['lambda']),
                       SparseVec.from_json(data['varpi']),
                       SparseVec.from_json(data['omega']),
                       ExposureCertificate.from_dict(data['certificate']),
                       tuple(data.get('source', ())))
        except (AttributeError, KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f'malformed trace step: {exc}')


@dataclass(frozen=True)
class PoulsenTrace:
    epsilon: Fraction
    variant: str
    radius: Fraction
    seed: int
    steps: tuple
    schedule_state: dict = field(default_factory=dict)

    def to_dict(self):
        return {'kind': 'trace',
                'epsilon': format_rational(self.epsilon),
                'variant': self.variant,
                'radius': format_rational(self.radius),
                'seed': self.seed,
                'steps': [s.to_dict() for s in self.steps],
                'schedule_state': self.schedule_state}

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict) or data.get('kind') != 'trace':
            raise DocumentError('not a trace document')
        if data.get('variant') not in VARIANTS:
            raise DocumentError(f'unknown variant {data.get("variant")!r}')
        return cls(as_rational(data.get('epsilon')), data['variant'],
                   as_rational(data.get('radius', '1')),
                   as_integer(data.get('seed', 0), 'seed'),
                   tuple(StepRecord.from_dict(s)
                         for s in json_list(data, 'steps')),
                   data.get('schedule_state', {}))


def _check_variant(U, polar, variant):
    if variant not in VARIANTS:
        raise BadParameter(f'unknown variant {variant!r}')
    for v in U.vertices:
        if not polar_contains(v, polar):
            raise TargetOutsidePolar(f'{v!r} lies outside the polar')
    if variant in (POSITIVE, STATE):
        for v in U.vertices:
            if any(value < 0 for _, value in v.items()):
                raise VariantPreconditionViolated(
                    f'{v!r} has a negative coordinate')
    if variant == STATE:
        for v in U.vertices:
            if sum((value for _, value in v.items()), Fraction(0)) != 1:
                raise VariantPreconditionViolated(
                    f'{v!r} is not a probability vector')


def first_coefficient(polar, variant):
    if variant == STATE:
        return min(polar.radius, Fraction(1))
    return polar.radius


def combine_step(varpi, sigma, lam, variant):
    if variant == STATE:
        norm = sum((abs(v) for _, v in sigma.items()), Fraction(0))
        return varpi * (1 - lam * norm) + sigma * lam
    return varpi * (1 - lam) + sigma * lam


def construct(U, polar=None, epsilon=Fraction(1, 2), steps=16, variant=PLAIN,
              seed=0):
    """Run ``steps`` densification steps on U; returns (U_N, trace)."""
    polar = polar or PolarSpec()
    epsilon = as_rational(epsilon)
    if epsilon <= 0:
        raise BadParameter('epsilon must be positive')
    if steps < 0:
        raise BadParameter('steps must be a nonnegative count')
    U = as_polyhedron(U)
    if not U.bounded:
        raise BadParameter('the target must be a bounded polytope')
    _check_variant(U, polar, variant)

    rng = random.Random(seed)
    current = closed_convex_hull(U)
    state = SchedulerState()
    state.add_stage(rng.sample(current.vertices, len(current.vertices)))
    used = union_support(current.vertices)
    top = used[-1] if used else -1
    first = first_coefficient(polar, variant)
    lambdas = []
    records = []
    for n in range(1, steps + 1):
        lam = schedule_lambda(n, epsilon)
        c = schedule_c(n, lambdas, first)
        lambdas.append(lam)
        top += 1
        candidate = SparseVec.basis(top, c)
        varpi, state = scheduler_next(state)
        source = tuple(state.queue[-1])
        omega = combine_step(varpi, candidate, lam, variant)
        functional = SparseVec.basis(top, 1 / c)
        vertices = current.vertices + (omega,)
        margin = min(lam - pair(functional, w) for w in current.vertices)
        certificate = ExposureCertificate(omega, functional, margin)
        records.append(StepRecord(n, top, c, candidate, functional, lam,
                                  varpi, omega, certificate, source))
        current = Polyhedron(vertices, irredundant=True)
        state.add_stage(rng.sample(current.vertices, len(current.vertices)))
        logger.debug('step %d: k=%d lambda=%s', n, top, format_rational(lam))

    trace = PoulsenTrace(epsilon, variant, polar.radius, seed, tuple(records),
                         state.snapshot())
    logger.info('construction finished: %d steps, %d vertices',
                steps, len(current.vertices))
    return current, trace


def intermediate_hulls(U, trace):
    hull = closed_convex_hull(as_polyhedron(U))
    hulls = [hull]
    for record in trace.steps:
        hull = Polyhedron(hull.vertices + (record.omega,), irredundant=True)
        hulls.append(hull)
    return hulls


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {'name': self.name, 'passed': self.passed,
                'detail': self.detail}


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def check(self, name):
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_dict(self):
        return {'passed': self.passed,
                'checks': [c.to_dict() for c in self.checks]}


def _check_distance(U, result, trace, cfg):
    try:
        distance = hausdorff_full(U, result, cfg)
    except WstarError as exc:
        return [CheckResult('distance_2eps', False, {'error': str(exc)}),
                CheckResult('distance_eps', False, {'error': str(exc)})]
    detail = {'distance': format_rational(distance),
              'epsilon': format_rational(trace.epsilon)}
    return [CheckResult('distance_2eps', distance <= 2 * trace.epsilon, detail),
            CheckResult('distance_eps', distance <= trace.epsilon, detail)]


def _check_exposure(result, trace):
    failures = []
    margins = []
    for record in trace.steps:
        try:
            certificate = exposure_certificate(result, record.omega,
                                               maximal=False)
            margins.append(format_rational(certificate.margin))
        except WstarError:
            failures.append(record.n)
    return CheckResult('exposure', not failures,
                       {'margins': margins, 'failed_steps': failures})


def _check_cross_pairs(trace):
    violations = []
    for j, early in enumerate(trace.steps):
        if pair(early.functional, early.omega) != early.lam:
            violations.append([early.n, early.n])
        for later in trace.steps[j + 1:]:
            if not pair(early.functional, later.omega) < early.lam:
                violations.append([early.n, later.n])
    return CheckResult('cross_pairs', not violations,
                       {'violations': violations})


def _check_schedule(trace, polar):
    first = first_coefficient(polar, trace.variant)
    lambdas = [r.lam for r in trace.steps]
    bad = []
    used = set()
    for record in trace.steps:
        n = record.n
        expected_c = schedule_c(n, lambdas, first)
        ok = record.lam == schedule_lambda(n, trace.epsilon) and \
            record.c == expected_c and \
            pair(record.functional, record.sigma) == 1 and \
            record.fresh_coordinate not in used
        used.add(record.fresh_coordinate)
        if not ok:
            bad.append(n)
    return CheckResult('schedule', not bad, {'failed_steps': bad})


def _check_combination(trace):
    bad = [r.n for r in trace.steps
           if combine_step(r.varpi, r.sigma, r.lam, trace.variant) != r.omega]
    return CheckResult('combination', not bad, {'failed_steps': bad})


def _check_polar(result, polar):
    outside = [v.to_json() for v in result.vertices
               if not polar_contains(v, polar)]
    return CheckResult('polar', not outside, {'outside': outside})


def _check_variant_shape(result, trace):
    variant = trace.variant
    bad = []
    signed = []
    if variant in (POSITIVE, STATE):
        signed = [r.n for r in trace.steps if jordan_decompose(r.sigma)[1]]
    for v in result.vertices:
        _, minus = jordan_decompose(v)
        total = sum((value for _, value in v.items()), Fraction(0))
        if variant in (POSITIVE, STATE) and minus:
            bad.append(v.to_json())
        elif variant == STATE and total != 1:
            bad.append(v.to_json())
    return CheckResult('variant', not bad and not signed,
                       {'variant': variant, 'violations': bad,
                        'signed_steps': signed})


def verify_trace(U, polar, result, trace, cfg=None):
    polar = polar or PolarSpec(trace.radius)
    cfg = cfg or MetricConfig(polar)
    result = as_polyhedron(result)
    checks = _check_distance(as_polyhedron(U), result, trace, cfg)
    checks += [_check_exposure(result, trace),
               _check_cross_pairs(trace),
               _check_schedule(trace, polar),
               _check_combination(trace),
               _check_polar(result, polar),
               _check_variant_shape(result, trace)]
    report = VerificationReport(tuple(checks))
    logger.info('verification %s', 'passed' if report.passed else 'failed')
    return report
