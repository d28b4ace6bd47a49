"""
Rigorous real numbers on top of mpmath interval arithmetic

A Real is an interval enclosure. Arithmetic rounds outward at the current
working precision (``iv.prec``), so every value keeps enclosing the true
number. Parameters are stored as Quantity sources that can be re-enclosed at
any precision, which is what makes precision escalation possible.
"""

import functools
import logging
import operator
import re
from abc import ABC, abstractmethod
from contextlib import contextmanager
from fractions import Fraction
from typing import Callable, Dict, Iterator, Optional, TypeVar, Union

import sympy
from mpmath import iv, libmp, mp

from .errors import DomainError, PrecisionExhausted

logger = logging.getLogger(__name__)

T = TypeVar("T")

_LITERAL = re.compile(r"^(?:[0-9eE.+\-*/()\s]|sqrt)+$")


@contextmanager
def working_precision(bits: int) -> Iterator[int]:
    """Set the binary precision of both mpmath contexts for the block"""
    saved = (iv.prec, mp.prec)
    iv.prec = bits
    mp.prec = bits
    try:
        yield bits
    finally:
        iv.prec, mp.prec = saved


def identification_tolerance(bits: int):
    """Enclosures this tight that overlap are treated as the same point"""
    return mp.ldexp(1, -(bits // 2))


def with_precision(fn: Callable[[int], T], bits: int, cap: int) -> T:
    """Run ``fn(bits)``, doubling the precision on PrecisionExhausted up to ``cap``"""
    current = bits
    while True:
        try:
            return fn(current)
        except PrecisionExhausted:
            if current >= cap:
                raise
            nxt = min(current * 2, cap)
            logger.info("precision exhausted at %d bits, retrying at %d", current, nxt)
            current = nxt


Number = Union["Real", int, Fraction]


class Real:
    """Closed interval enclosing a real number"""

    __slots__ = ("interval",)

    def __init__(self, interval):
        self.interval = iv.mpf(interval)

    @classmethod
    def exact(cls, value: Union[int, Fraction, str]) -> "Real":
        if isinstance(value, int):
            return cls(iv.mpf(value))
        if isinstance(value, str):
            value = Fraction(value)
        return cls(iv.mpf(value.numerator) / value.denominator)

    @classmethod
    def between(cls, lower, upper) -> "Real":
        return cls(iv.mpf([lower, upper]))

    @staticmethod
    def _coerce(other: Number):
        if isinstance(other, Real):
            return other.interval
        if isinstance(other, Fraction):
            return iv.mpf(other.numerator) / other.denominator
        return iv.mpf(other)

    def __add__(self, other: Number) -> "Real":
        return Real(self.interval + self._coerce(other))

    def __radd__(self, other: Number) -> "Real":
        return Real(self._coerce(other) + self.interval)

    def __sub__(self, other: Number) -> "Real":
        return Real(self.interval - self._coerce(other))

    def __rsub__(self, other: Number) -> "Real":
        return Real(self._coerce(other) - self.interval)

    def __mul__(self, other: Number) -> "Real":
        return Real(self.interval * self._coerce(other))

    def __rmul__(self, other: Number) -> "Real":
        return Real(self._coerce(other) * self.interval)

    def __truediv__(self, other: Number) -> "Real":
        return Real(self.interval / self._coerce(other))

    def __rtruediv__(self, other: Number) -> "Real":
        return Real(self._coerce(other) / self.interval)

    def __neg__(self) -> "Real":
        return Real(-self.interval)

    def __abs__(self) -> "Real":
        if self.lower >= 0:
            return self
        if self.upper <= 0:
            return -self
        return Real.between(0, max(-self.lower, self.upper))

    def __pow__(self, n: int) -> "Real":
        if n < 0:
            return 1 / (self ** -n)
        result = iv.mpf(1)
        base = self.interval
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return Real(result)

    def ln(self) -> "Real":
        return Real(iv.ln(self.interval))

    def exp(self) -> "Real":
        return Real(iv.exp(self.interval))

    @property
    def lower(self):
        return mp.make_mpf(self.interval._mpi_[0])

    @property
    def upper(self):
        return mp.make_mpf(self.interval._mpi_[1])

    @property
    def value(self):
        """Midpoint, computed exactly"""
        a, b = self.interval._mpi_
        return mp.make_mpf(libmp.mpf_shift(libmp.mpf_add(a, b), -1))

    @property
    def width(self):
        a, b = self.interval._mpi_
        return mp.make_mpf(libmp.mpf_sub(b, a))

    @property
    def radius(self):
        return self.width / 2

    def less_than(self, other: Number) -> Optional[bool]:
        """True or False when decided, None when the enclosures overlap"""
        return self.interval < self._coerce(other)

    def greater_than(self, other: Number) -> Optional[bool]:
        return self.interval > self._coerce(other)

    def certainly_less(self, other: Number) -> bool:
        return self.less_than(other) is True

    def certainly_greater(self, other: Number) -> bool:
        return self.greater_than(other) is True

    def overlaps(self, other: Number) -> bool:
        o = Real(self._coerce(other))
        return not (self.upper < o.lower or o.upper < self.lower)

    def contains(self, value) -> bool:
        return self.lower <= value <= self.upper

    def hull(self, other: "Real") -> "Real":
        return Real.between(min(self.lower, other.lower), max(self.upper, other.upper))

    def to_decimal(self, digits: int = 20) -> str:
        return mp.nstr(self.value, digits)

    def __float__(self) -> float:
        return float(self.value)

    def __repr__(self) -> str:
        return f"Real({mp.nstr(self.value, 15)} ± {mp.nstr(self.radius, 3)})"


class Quantity(ABC):
    """A real number that can be enclosed at any requested precision"""

    def __init__(self):
        self._cache: Dict[int, Real] = {}

    def enclose(self, bits: int) -> Real:
        if bits not in self._cache:
            with working_precision(bits):
                self._cache[bits] = self._enclose(bits)
        return self._cache[bits]

    @abstractmethod
    def _enclose(self, bits: int) -> Real:
        """Compute the enclosure; the working precision is already set"""
        pass

    @abstractmethod
    def describe(self) -> str:
        """Short human-readable form"""
        pass

    @property
    def expr(self) -> Optional[sympy.Expr]:
        """Exact symbolic value when known"""
        return None

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.describe()})"


class Expression(Quantity):
    """An exact real given by a sympy expression"""

    def __init__(self, value: Union[str, int, Fraction, sympy.Expr]):
        super().__init__()
        self._expr = _to_sympy(value)

    @property
    def expr(self) -> sympy.Expr:
        return self._expr

    def _enclose(self, bits: int) -> Real:
        return Real(_interval_of(self._expr))

    def describe(self) -> str:
        return str(self._expr)

    def __eq__(self, other) -> bool:
        return isinstance(other, Expression) and self._expr == other._expr

    def __hash__(self) -> int:
        return hash(self._expr)


class Computed(Quantity):
    """A real produced by a routine that can rerun at any precision"""

    def __init__(self, label: str, compute: Callable[[int], Real]):
        super().__init__()
        self.label = label
        self._compute = compute

    def _enclose(self, bits: int) -> Real:
        return self._compute(bits)

    def describe(self) -> str:
        return self.label


def _to_sympy(value: Union[str, int, Fraction, sympy.Expr]) -> sympy.Expr:
    if isinstance(value, sympy.Basic):
        expr = value
    elif isinstance(value, Fraction):
        expr = sympy.Rational(value.numerator, value.denominator)
    elif isinstance(value, int):
        expr = sympy.Integer(value)
    elif isinstance(value, str):
        text = value.strip()
        if not text or not _LITERAL.match(text):
            raise DomainError(f"not a numeric literal: {value!r}")
        try:
            expr = sympy.sympify(text, rational=True)
        except (sympy.SympifyError, SyntaxError, TypeError) as e:
            raise DomainError(f"cannot parse {value!r}: {e}") from e
    else:
        raise DomainError(f"unsupported numeric value {value!r}")
    if not expr.is_number or expr.is_real is False:
        raise DomainError(f"{value!r} is not a real number")
    return expr


def parse_quantity(text: str) -> Expression:
    """Parse a decimal, a rational p/q or an expression with sqrt"""
    return Expression(text)


def _interval_of(expr: sympy.Expr):
    """Evaluate a sympy number with outward rounding at the current precision"""
    if expr.is_Integer:
        return iv.mpf(int(expr))
    if expr.is_Rational:
        return iv.mpf(int(expr.p)) / int(expr.q)
    if expr is sympy.S.GoldenRatio:
        return iv.mpf(iv.phi)
    if expr is sympy.S.Pi:
        return iv.mpf(iv.pi)
    if expr is sympy.S.Exp1:
        return iv.mpf(iv.e)
    if expr.is_Add:
        return functools.reduce(operator.add, (_interval_of(a) for a in expr.args))
    if expr.is_Mul:
        return functools.reduce(operator.mul, (_interval_of(a) for a in expr.args))
    if expr.is_Pow:
        base, exponent = expr.args
        b = _interval_of(base)
        if exponent.is_Integer:
            n = int(exponent)
            return (Real(b) ** n).interval
        if exponent == sympy.S.Half:
            return iv.sqrt(b)
        if exponent.is_Rational:
            return iv.exp(iv.ln(b) * _interval_of(exponent))
    raise DomainError(f"cannot enclose {expr}")
