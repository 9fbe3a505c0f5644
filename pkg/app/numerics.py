"""Exact scalars, finitely supported vectors and the dual pairing.

Every scalar is a :class:`fractions.Fraction`; the only non-rational value
the library ever produces is :data:`INF`, the explicit +infinity used as a
distance.  Vectors are indexed by natural numbers and store no zeros, so the
same type serves as a primal test functional (sup norm) and as a dual point
(l1 norm).
"""
import json
import math
import re
from fractions import Fraction
from app.exceptions import DocumentError

Rational = Fraction
INF = math.inf

_SHORTHAND_TERM = re.compile(
    r'^(?P<sign>[+-]?)(?:(?P<coeff>\d+(?:/\d+)?)\*)?e(?P<index>\d+)$')


def as_rational(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise DocumentError(f'not an exact rational: {value!r}')
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        parsed = parse_rational(value)
        if parsed == INF:
            raise DocumentError('infinity is not a coordinate value')
        return parsed
    raise DocumentError(f'not an exact rational: {value!r}')


def parse_rational(text):
    text = str(text).strip()
    if text in ('inf', '+inf'):
        return INF
    try:
        if '/' in text:
            num, den = text.split('/')
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise DocumentError(f'malformed rational {text!r}')
    return value


def as_integer(value, name='value'):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise DocumentError(f'{name} must be an integer, got {value!r}')
    try:
        return int(value)
    except ValueError:
        raise DocumentError(f'{name} must be an integer, got {value!r}')


def json_list(data, key):
    value = data.get(key, [])
    if not isinstance(value, list):
        raise DocumentError(f'"{key}" must be a list')
    return value


def format_rational(value):
    if value == INF:
        return 'inf'
    value = Fraction(value)
    return f'{value.numerator}/{value.denominator}'


def format_decimal(value, digits=12):
    """Human readable rendering; never used in machine readable fields."""
    if value == INF:
        return 'inf'
    return f'{float(value):.{digits}g}'


class SparseVec:
    """Immutable finitely supported map from naturals to nonzero rationals."""

    __slots__ = ('_entries', '_hash')

    def __init__(self, entries=None):
        cleaned = {}
        if entries is not None:
            items = entries.items() if hasattr(entries, 'items') else entries
            for index, value in items:
                if isinstance(index, bool) or not isinstance(index, int) \
                        or index < 0:
                    raise DocumentError(f'bad coordinate index {index!r}')
                value = as_rational(value)
                if value:
                    cleaned[index] = cleaned.get(index, 0) + value
                    if not cleaned[index]:
                        del cleaned[index]
        self._entries = dict(sorted(cleaned.items()))
        self._hash = None

    @classmethod
    def basis(cls, index, coeff=1):
        return cls({index: coeff})

    @classmethod
    def dense(cls, values):
        return cls(enumerate(values))

    def __getitem__(self, index):
        return self._entries.get(index, Fraction(0))

    def items(self):
        return self._entries.items()

    def support(self):
        return frozenset(self._entries)

    def __len__(self):
        return len(self._entries)

    def __bool__(self):
        return bool(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __add__(self, other):
        merged = dict(self._entries)
        for index, value in other.items():
            merged[index] = merged.get(index, 0) + value
        return SparseVec(merged)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return SparseVec({k: -v for k, v in self._entries.items()})

    def __mul__(self, scalar):
        scalar = as_rational(scalar)
        if not scalar:
            return SparseVec()
        return SparseVec({k: v * scalar for k, v in self._entries.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / as_rational(scalar))

    def __eq__(self, other):
        if not isinstance(other, SparseVec):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._entries.items()))
        return self._hash

    def __repr__(self):
        body = ', '.join(f'{k}: {format_rational(v)}'
                         for k, v in self._entries.items())
        return f'SparseVec({{{body}}})'

    def to_json(self):
        return [[index, format_rational(value)]
                for index, value in self._entries.items()]

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, list):
            raise DocumentError('a vector is a list of [index, "num/den"] pairs')
        pairs = []
        for entry in data:
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise DocumentError(f'malformed vector entry {entry!r}')
            pairs.append((entry[0], as_rational(entry[1])))
        indices = [index for index, _ in pairs]
        if len(set(indices)) != len(indices):
            raise DocumentError('repeated coordinate index in vector')
        return cls(pairs)


ZERO = SparseVec()


def pair(primal, dual):
    if len(primal) > len(dual):
        primal, dual = dual, primal
    return sum((value * dual[index] for index, value in primal.items()),
               Fraction(0))


def l1_norm(vec):
    return sum((abs(v) for _, v in vec.items()), Fraction(0))


def sup_norm(vec):
    return max((abs(v) for _, v in vec.items()), default=Fraction(0))


def combine(weights, vectors):
    acc = {}
    for weight, vec in zip(weights, vectors):
        if not weight:
            continue
        for index, value in vec.items():
            acc[index] = acc.get(index, 0) + weight * value
    return SparseVec(acc)


def union_support(vectors):
    indices = set()
    for vec in vectors:
        indices |= vec.support()
    return sorted(indices)


def parse_vector(text):
    """Parse a vector from JSON pair-list text or the ``2*e5+e0`` shorthand."""
    text = text.strip()
    if text.startswith('['):
        try:
            return SparseVec.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise DocumentError(f'malformed vector JSON: {exc}')
    if text in ('0', ''):
        return ZERO
    terms = re.findall(r'[+-]?[^+-]+', text.replace(' ', ''))
    acc = ZERO
    for term in terms:
        match = _SHORTHAND_TERM.match(term)
        if match is None:
            raise DocumentError(f'malformed vector term {term!r}')
        coeff = parse_rational(match.group('coeff') or '1')
        if match.group('sign') == '-':
            coeff = -coeff
        acc = acc + SparseVec.basis(int(match.group('index')), coeff)
    return acc
