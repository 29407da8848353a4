from enum import Enum
from fractions import Fraction
from math import prod
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from utils.algebra import GradedPoly
from utils.exceptions import ErrorResponse, SignatureError
from utils.parser import parse_rational
from utils.validation import validate_positive_ints, validate_signature


class EntryKind(str, Enum):
    tp_source = "tp_source"
    tp_target = "tp_target"
    tpsm_closure = "tpsm_closure"
    tpsm_alpha_image = "tpsm_alpha_image"
    tpsm_alpha_image2 = "tpsm_alpha_image2"
    tpsm_alpha_dis = "tpsm_alpha_dis"
    tpsm_target_image = "tpsm_target_image"
    tpsm_target_dis = "tpsm_target_dis"
    tpA = "tpA"
    alpha_coefficients = "alpha_coefficients"


class MilnorKind(str, Enum):
    image = "image"
    image2 = "image2"
    discriminant = "discriminant"


class GermSignature(BaseModel):
    """Weights of the source coordinates and degrees of the target components."""
    model_config = ConfigDict(frozen=True)

    weights: Tuple[int, ...] = Field(..., examples=[[1, 1, 1]])
    degrees: Tuple[int, ...] = Field(..., examples=[[2, 2, 1]])

    @field_validator("weights")
    def validate_weights(cls, v):
        try:
            validate_positive_ints(v, "weight")
        except SignatureError as e:
            raise ValueError(e.message)
        return v

    @field_validator("degrees")
    def validate_degrees(cls, v):
        try:
            validate_positive_ints(v, "degree")
        except SignatureError as e:
            raise ValueError(e.message)
        return v

    @model_validator(mode="after")
    def validate_kappa(self):
        if len(self.degrees) < len(self.weights):
            raise ValueError("Negative relative codimension (n < m) is not supported")
        return self

    @classmethod
    def of(cls, weights, degrees) -> "GermSignature":
        """Construct, raising SignatureError instead of a pydantic error."""
        validate_signature(list(weights), list(degrees))
        try:
            return cls(weights=tuple(weights), degrees=tuple(degrees))
        except ValidationError as e:
            raise SignatureError(str(e), details={"weights": list(weights), "degrees": list(degrees)})

    @property
    def m(self) -> int:
        return len(self.weights)

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def kappa(self) -> int:
        return self.n - self.m

    @property
    def weight_product(self) -> int:
        return prod(self.weights)

    @property
    def degree_product(self) -> int:
        return prod(self.degrees)

    def scaled(self, factor: int) -> "GermSignature":
        return GermSignature.of([factor * w for w in self.weights], [factor * d for d in self.degrees])


class SingularityKey(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = Field(..., examples=["A1A2"])
    kappa: int = Field(..., ge=0, examples=[0])
    kind: EntryKind = Field(EntryKind.tp_source, examples=["tp_source"])

    def __str__(self) -> str:
        return f"{self.name} (kappa={self.kappa}, {self.kind.value})"


class TpEntry(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    key: SingularityKey
    codim: int = Field(..., ge=0)
    deg1: int = Field(1, gt=0)
    aut: int = Field(1, gt=0)
    max_valid_degree: int = Field(..., ge=0)
    citation: str = ""
    polynomial: GradedPoly
    text: str = ""


class InvariantResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    value: Fraction
    integral: bool
    nonnegative: bool
    warnings: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_flags(self):
        if self.integral != (self.value.denominator == 1) or self.nonnegative != (self.value >= 0):
            raise ValueError("integral/nonnegative flags disagree with the value")
        return self

    @classmethod
    def from_value(cls, value: Fraction, warnings: Optional[List[str]] = None) -> "InvariantResult":
        value = Fraction(value)
        return cls(
            value=value,
            integral=value.denominator == 1,
            nonnegative=value >= 0,
            warnings=list(warnings or []),
        )


class GermRecord(BaseModel):
    weights: List[int] = Field(..., examples=[[2, 9, 16]])
    degrees: List[int] = Field(..., examples=[[18, 11, 16]])


class ResultRecord(BaseModel):
    germ: GermRecord
    invariant: str = Field(..., examples=["A3"])
    value: str = Field(..., examples=["16"])
    integral: bool
    warnings: List[str] = Field(default_factory=list)


class BatchErrorRecord(BaseModel):
    line: int
    error: ErrorResponse


class JobRecord(BaseModel):
    """One line of a batch file."""
    weights: Optional[List[int]] = Field(None, examples=[[1, 1, 1]])
    degrees: Optional[List[int]] = Field(None, examples=[[2, 2, 1]])
    map: Optional[str] = Field(None, examples=["x^2+y^2+x*z, x*y, z"])
    invariants: List[str] = Field(default_factory=lambda: ["all"], examples=[["A3", "mu_discriminant"]])

    @model_validator(mode="after")
    def validate_germ(self):
        explicit = self.weights is not None and self.degrees is not None
        if explicit == (self.map is not None):
            raise ValueError("Give either weights and degrees or a monomial map")
        if not self.invariants:
            raise ValueError("At least one invariant is required")
        return self


class IntersectionNumbers(BaseModel):
    """Integrals over the source surface of a map to a threefold."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    c1tm_c1: Fraction = Field(..., description="int c1(TM) c1")
    c2tm: Fraction = Field(..., description="int c2(TM)")
    c1tm_s0: Fraction = Field(..., description="int c1(TM) s0")
    c1_sq: Fraction = Field(..., description="int c1^2")
    c2: Fraction = Field(..., description="int c2")
    c1_s0: Fraction = Field(..., description="int c1 s0")
    s0_sq: Fraction = Field(..., description="int s0^2")
    s1: Fraction = Field(..., description="int s1")

    @field_validator("*", mode="before")
    def parse_exact(cls, v):
        if isinstance(v, bool) or isinstance(v, float):
            raise ValueError("intersection numbers must be exact integers or rationals")
        if isinstance(v, str):
            return parse_rational(v)
        return Fraction(v)


class SurfaceInvariants(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    c1_squared: Fraction
    c2: Fraction
    chi: Fraction
