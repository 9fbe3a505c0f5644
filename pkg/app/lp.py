"""Exact primal simplex over rationals.

Two phases on a dense tableau with one artificial column per row, Bland's
smallest-index rule for both the entering and the leaving variable, so the
method terminates on every input.  Every outcome carries a certificate that
:func:`lp_certify` re-checks with plain rational arithmetic.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from app.numerics import SparseVec, ZERO, pair, as_rational, union_support
from app.exceptions import BadParameter

logger = logging.getLogger(__name__)

LE = '<='
EQ = '='
GE = '>='
MAXIMIZE = 'max'
MINIMIZE = 'min'


@dataclass(frozen=True)
class Constraint:
    row: SparseVec
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in (LE, EQ, GE):
            raise BadParameter(f'unknown relation {self.relation!r}')
        object.__setattr__(self, 'rhs', as_rational(self.rhs))

    def holds(self, point):
        value = pair(self.row, point)
        if self.relation == LE:
            return value <= self.rhs
        if self.relation == GE:
            return value >= self.rhs
        return value == self.rhs


@dataclass(frozen=True)
class LpProblem:
    objective: SparseVec
    constraints: tuple = ()
    nonnegative: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, 'constraints', tuple(self.constraints))
        object.__setattr__(self, 'nonnegative', frozenset(self.nonnegative))

    def variables(self):
        vectors = [self.objective] + [c.row for c in self.constraints]
        return sorted(set(union_support(vectors)) | self.nonnegative)

    def feasible(self, point):
        return all(c.holds(point) for c in self.constraints) and \
            all(point[v] >= 0 for v in self.nonnegative)


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    point: SparseVec
    duals: tuple = field(default=())


@dataclass(frozen=True)
class Unbounded:
    point: SparseVec
    ray: SparseVec


@dataclass(frozen=True)
class Infeasible:
    farkas: tuple


class _Tableau:

    def __init__(self, problem):
        self.problem = problem
        self.columns = []
        for var in problem.variables():
            self.columns.append((var, 1))
            if var not in problem.nonnegative:
                self.columns.append((var, -1))
        self.n_struct = len(self.columns) + sum(
            1 for c in problem.constraints if c.relation != EQ)
        m = len(problem.constraints)
        self.m = m
        self.signs = []
        self.rows = []
        self.rhs = []
        slack = len(self.columns)
        for i, con in enumerate(problem.constraints):
            sign = -1 if con.rhs < 0 else 1
            row = [Fraction(0)] * (self.n_struct + m)
            for j, (var, col_sign) in enumerate(self.columns):
                row[j] = sign * col_sign * con.row[var]
            if con.relation != EQ:
                row[slack] = Fraction(sign if con.relation == LE else -sign)
                slack += 1
            row[self.n_struct + i] = Fraction(1)
            self.signs.append(sign)
            self.rows.append(row)
            self.rhs.append(sign * con.rhs)
        self.basis = [self.n_struct + i for i in range(m)]

    def pivot(self, i, j):
        piv = self.rows[i][j]
        row = [v / piv for v in self.rows[i]]
        self.rows[i] = row
        self.rhs[i] = self.rhs[i] / piv
        nonzero = [col for col, v in enumerate(row) if v]
        for k in range(self.m):
            if k == i:
                continue
            target = self.rows[k]
            factor = target[j]
            if factor:
                for col in nonzero:
                    target[col] -= factor * row[col]
                self.rhs[k] -= factor * self.rhs[i]
        self.basis[i] = j

    def multipliers(self, cost):
        """c_B B^-1, read off the artificial block of the tableau."""
        return [sum((cost[self.basis[i]] * self.rows[i][self.n_struct + k]
                     for i in range(self.m)), Fraction(0))
                for k in range(self.m)]

    def run(self, cost, allowed):
        """Minimize ``cost`` with Bland's rule; returns None or the column of
        an unbounded direction."""
        reduced = list(cost)
        for i, b in enumerate(self.basis):
            if cost[b]:
                reduced = [r - cost[b] * a for r, a in zip(reduced, self.rows[i])]
        pivots = 0
        while True:
            basic = set(self.basis)
            entering = None
            for j in allowed:
                if j not in basic and reduced[j] < 0:
                    entering = j
                    break
            if entering is None:
                logger.debug('simplex optimal after %d pivots', pivots)
                return None
            leaving = None
            best = None
            for i in range(self.m):
                coeff = self.rows[i][entering]
                if coeff > 0:
                    ratio = self.rhs[i] / coeff
                    key = (ratio, self.basis[i])
                    if best is None or key < best:
                        best = key
                        leaving = i
            if leaving is None:
                return entering
            self.pivot(leaving, entering)
            factor = reduced[entering]
            reduced = [r - factor * a
                       for r, a in zip(reduced, self.rows[leaving])]
            pivots += 1

    def point(self, direction=None):
        values = [Fraction(0)] * self.n_struct
        if direction is None:
            for i, j in enumerate(self.basis):
                if j < self.n_struct:
                    values[j] = self.rhs[i]
        else:
            values[direction] = Fraction(1)
            for i, j in enumerate(self.basis):
                if j < self.n_struct:
                    values[j] = -self.rows[i][direction]
        acc = {}
        for j, (var, col_sign) in enumerate(self.columns):
            if values[j]:
                acc[var] = acc.get(var, 0) + col_sign * values[j]
        return SparseVec(acc)


def lp_solve(problem, sense=MAXIMIZE):
    """Solve ``problem`` exactly; the outcome is never an exception."""
    if sense not in (MAXIMIZE, MINIMIZE):
        raise BadParameter(f'unknown sense {sense!r}')
    tab = _Tableau(problem)
    total = tab.n_struct + tab.m
    phase_one = [Fraction(0)] * tab.n_struct + [Fraction(1)] * tab.m
    tab.run(phase_one, range(total))
    infeasibility = sum((tab.rhs[i] for i in range(tab.m)
                         if tab.basis[i] >= tab.n_struct), Fraction(0))
    if infeasibility > 0:
        u = tab.multipliers(phase_one)
        farkas = tuple(-u[i] * tab.signs[i] for i in range(tab.m))
        return Infeasible(farkas)

    for i in range(tab.m):
        if tab.basis[i] >= tab.n_struct:
            for j in range(tab.n_struct):
                if tab.rows[i][j] and j not in tab.basis:
                    tab.pivot(i, j)
                    break

    flip = -1 if sense == MAXIMIZE else 1
    cost = [Fraction(0)] * total
    for j, (var, col_sign) in enumerate(tab.columns):
        cost[j] = flip * col_sign * problem.objective[var]
    direction = tab.run(cost, range(tab.n_struct))
    if direction is not None:
        return Unbounded(tab.point(), tab.point(direction))
    point = tab.point()
    u = tab.multipliers(cost)
    duals = tuple(flip * u[i] * tab.signs[i] for i in range(tab.m))
    return Optimal(pair(problem.objective, point), point, duals)


def minimize(objective, constraints, nonnegative=()):
    return lp_solve(LpProblem(objective, constraints, nonnegative), MINIMIZE)


def feasible(constraints, nonnegative=()):
    return isinstance(lp_solve(LpProblem(ZERO, constraints, nonnegative)),
                      Optimal)


def _dual_signs_ok(problem, duals, sense):
    for con, y in zip(problem.constraints, duals):
        if con.relation == LE and (y < 0 if sense == MAXIMIZE else y > 0):
            return False
        if con.relation == GE and (y > 0 if sense == MAXIMIZE else y < 0):
            return False
    return True


def _dual_row(problem, duals):
    acc = ZERO
    for con, y in zip(problem.constraints, duals):
        acc = acc + con.row * y
    return acc


def lp_certify(problem, sense, outcome):
    constraints = problem.constraints
    if isinstance(outcome, Optimal):
        if not problem.feasible(outcome.point):
            return False
        if pair(problem.objective, outcome.point) != outcome.value:
            return False
        if len(outcome.duals) != len(constraints) or \
                not _dual_signs_ok(problem, outcome.duals, sense):
            return False
        combined = _dual_row(problem, outcome.duals)
        for var in problem.variables():
            gap = combined[var] - problem.objective[var]
            if var in problem.nonnegative:
                if (gap < 0 if sense == MAXIMIZE else gap > 0):
                    return False
            elif gap:
                return False
        dual_value = sum((con.rhs * y for con, y in
                          zip(constraints, outcome.duals)), Fraction(0))
        return dual_value == outcome.value
    if isinstance(outcome, Unbounded):
        if not problem.feasible(outcome.point):
            return False
        for con in constraints:
            slope = pair(con.row, outcome.ray)
            if con.relation == LE and slope > 0:
                return False
            if con.relation == GE and slope < 0:
                return False
            if con.relation == EQ and slope != 0:
                return False
        if any(outcome.ray[v] < 0 for v in problem.nonnegative):
            return False
        gain = pair(problem.objective, outcome.ray)
        return gain > 0 if sense == MAXIMIZE else gain < 0
    if isinstance(outcome, Infeasible):
        y = outcome.farkas
        if len(y) != len(constraints):
            return False
        for con, value in zip(constraints, y):
            if con.relation == LE and value < 0:
                return False
            if con.relation == GE and value > 0:
                return False
        combined = _dual_row(problem, y)
        for var in problem.variables():
            if var in problem.nonnegative:
                if combined[var] < 0:
                    return False
            elif combined[var]:
                return False
        bound = sum((con.rhs * v for con, v in zip(constraints, y)),
                    Fraction(0))
        return bound < 0
    return False
