"""
Data models for the intermediate β-shift toolkit
"""

from enum import Enum
from fractions import Fraction
from typing import List, Literal, Optional, Tuple, Union

import sympy
from pydantic import BaseModel, ConfigDict, PlainSerializer, PlainValidator, model_validator
from typing_extensions import Annotated

from betashift.numeric import Computed, Expression, Quantity, Real
from betashift.words import EventuallyPeriodicWord, FiniteWord, parse_finite_word, parse_word


class Side(str, Enum):
    """Which branch value the map takes at the critical point"""

    PLUS = "plus"
    MINUS = "minus"


class ShiftStatus(str, Enum):
    FINITE_TYPE = "finite_type"
    SOFIC = "sofic"
    UNDETERMINED = "undetermined"


def _coerce_word(value) -> EventuallyPeriodicWord:
    if isinstance(value, EventuallyPeriodicWord):
        return value
    if isinstance(value, str):
        return parse_word(value)
    raise ValueError(f"expected an eventually periodic word, got {value!r}")


def _coerce_finite(value) -> FiniteWord:
    if isinstance(value, FiniteWord):
        return value
    if isinstance(value, str):
        return parse_finite_word(value)
    if isinstance(value, (list, tuple)):
        return FiniteWord(value)
    raise ValueError(f"expected a finite word, got {value!r}")


def _coerce_any_word(value) -> Union[EventuallyPeriodicWord, FiniteWord]:
    if isinstance(value, (EventuallyPeriodicWord, FiniteWord)):
        return value
    if isinstance(value, str) and "(" in value:
        return parse_word(value)
    return _coerce_finite(value)


def _coerce_real(value) -> Real:
    if isinstance(value, Real):
        return value
    if isinstance(value, (int, str, Fraction)):
        return Real.exact(value)
    raise ValueError(f"expected a Real, got {value!r}")


def _coerce_quantity(value) -> Quantity:
    if isinstance(value, Quantity):
        return value
    if isinstance(value, (str, int, Fraction, sympy.Basic)):
        return Expression(value)
    raise ValueError(f"expected a real quantity, got {value!r}")


WordField = Annotated[EventuallyPeriodicWord, PlainValidator(_coerce_word), PlainSerializer(str, return_type=str)]
FiniteWordField = Annotated[FiniteWord, PlainValidator(_coerce_finite), PlainSerializer(str, return_type=str)]
AnyWordField = Annotated[
    Union[EventuallyPeriodicWord, FiniteWord],
    PlainValidator(_coerce_any_word),
    PlainSerializer(str, return_type=str),
]
RealField = Annotated[Real, PlainValidator(_coerce_real), PlainSerializer(lambda r: r.to_decimal(), return_type=str)]
QuantityField = Annotated[Quantity, PlainValidator(_coerce_quantity), PlainSerializer(lambda q: q.describe(), return_type=str)]


class Record(BaseModel):
    """Base for all records; words and reals are plain Python types"""

    model_config = ConfigDict(arbitrary_types_allowed=True)


class Params(Record):
    """A point (β, α) of the parameter space Δ"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    beta: QuantityField
    alpha: QuantityField

    @classmethod
    def from_text(cls, beta: str, alpha: str) -> "Params":
        return cls(beta=Expression(beta), alpha=Expression(alpha))

    def enclose(self, bits: int) -> Tuple[Real, Real]:
        return self.beta.enclose(bits), self.alpha.enclose(bits)

    @property
    def boundary(self) -> Optional[str]:
        """'greedy' when α = 0, 'lazy' when α = 2 − β, decided exactly when possible"""
        alpha, beta = self.alpha.expr, self.beta.expr
        if alpha is None:
            return None
        if alpha == 0:
            return "greedy"
        if beta is not None and sympy.simplify(alpha - (2 - beta)) == 0:
            return "lazy"
        return None

    @property
    def is_interior(self) -> bool:
        return self.boundary is None

    def mirror(self) -> "Params":
        """(β, 2 − β − α), the parameter of the conjugate map x ↦ 1 − x"""
        if self.beta.expr is not None and self.alpha.expr is not None:
            return Params(beta=self.beta, alpha=Expression(2 - self.beta.expr - self.alpha.expr))
        beta, alpha = self.beta, self.alpha
        mirrored = Computed(
            f"2 - ({beta.describe()}) - ({alpha.describe()})",
            lambda bits: 2 - beta.enclose(bits) - alpha.enclose(bits),
        )
        return Params(beta=beta, alpha=mirrored)

    def describe(self) -> str:
        return f"(β={self.beta.describe()}, α={self.alpha.describe()})"


class KneadingPair(Record):
    """Lower ω = τ−(p) and upper ν = τ+(p), as prefixes or detected words"""

    lower: AnyWordField
    upper: AnyWordField
    computed_length: int

    @property
    def is_detected(self) -> bool:
        return isinstance(self.lower, EventuallyPeriodicWord) and isinstance(self.upper, EventuallyPeriodicWord)

    @property
    def is_periodic(self) -> bool:
        return self.is_detected and self.lower.is_periodic and self.upper.is_periodic


class AdmissibilityReport(Record):
    lower: WordField
    upper: WordField
    cond1: bool
    cond2: bool
    cond3: bool
    cond4: bool
    entropy: RealField
    witness: Optional[Tuple[FiniteWordField, FiniteWordField]] = None
    admissible: bool
    periodically_admissible: bool

    @model_validator(mode="after")
    def _consistent(self) -> "AdmissibilityReport":
        if self.admissible != (self.cond1 and self.cond2 and self.cond3 and self.cond4):
            raise ValueError("admissible must be the conjunction of the four conditions")
        if self.periodically_admissible and not (
            self.admissible and self.lower.is_periodic and self.upper.is_periodic
        ):
            raise ValueError("periodically admissible pairs are admissible and purely periodic")
        return self


class PrefixReport(Record):
    """Conditions (1) and (2) checked on finite prefixes only"""

    length: int
    cond1: bool
    cond2_not_falsified: bool


class SftCertificate(Record):
    pair: Tuple[WordField, WordField]
    forbidden: List[FiniteWordField]
    memory: int
    entropy: RealField

    @model_validator(mode="after")
    def _minimal(self) -> "SftCertificate":
        texts = [str(w) for w in self.forbidden]
        for i, a in enumerate(texts):
            for j, b in enumerate(texts):
                if i != j and a in b:
                    raise ValueError(f"forbidden word {b} contains forbidden factor {a}")
        if not self.entropy.certainly_greater(0):
            raise ValueError("certified shifts have positive entropy")
        return self


class ShiftClassification(Record):
    status: ShiftStatus
    criterion: Literal["intermediate", "greedy", "lazy"]
    certificate: Optional[SftCertificate] = None
    pair: Optional[Tuple[AnyWordField, AnyWordField]] = None
    prefix_len: Optional[int] = None


class PeriodizationTrace(Record):
    """Record of one periodization: cut n, overlap j, extension k"""

    side: Side
    n: int
    j: int
    k: int
    prefix: FiniteWordField
    result: WordField

    def verify(self) -> bool:
        """Re-check the index equations against the stored prefix"""
        w = self.prefix if self.side is Side.MINUS else self.prefix.complement()
        result = self.result if self.side is Side.MINUS else self.result.complement()
        n, j, k = self.n, self.j, self.k
        if len(w) < k + 1 or not (1 <= j < n <= k):
            return False
        checks = [
            w[n - 1] == 0,
            w[j:n] == w[: n - j],
            w[k] == 0,
            w[k - j] == 1,
            result == EventuallyPeriodicWord.periodic(w[:k]),
            result.prefix(k + 1) == w[: k + 1],
        ]
        return all(checks)


class ValidationOutcome(Record):
    status: Literal["confirmed", "reduced"]
    pair: Tuple[WordField, WordField]
    b: RealField
    a: RealField


class SftApproximation(Record):
    source: Params
    epsilon: str
    target_b: RealField
    target_a: RealField
    pair: Tuple[WordField, WordField]
    certificate: SftCertificate
    err_beta: RealField
    err_alpha: RealField
    error_bound: Optional[RealField] = None
    n_used: int
    reduced: bool = False
    lower_trace: Optional[PeriodizationTrace] = None
    upper_trace: Optional[PeriodizationTrace] = None


class ScanRecord(Record):
    """One cell of a parameter-plane scan, as written to CSV"""

    beta: str
    alpha: str
    status: ShiftStatus
    n_used: Optional[int] = None
    period_lower: Optional[int] = None
    period_upper: Optional[int] = None
    b: Optional[str] = None
    a: Optional[str] = None
    entropy: Optional[str] = None
    err_beta: Optional[str] = None
    err_alpha: Optional[str] = None

    @model_validator(mode="after")
    def _errors_iff_finite_type(self) -> "ScanRecord":
        has_errors = self.err_beta is not None and self.err_alpha is not None
        if has_errors != (self.status is ShiftStatus.FINITE_TYPE):
            raise ValueError("error fields are present exactly for finite_type cells")
        return self
