from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator


class ConstraintKind(str, Enum):
    series = "series"
    euler = "euler"


class Branch(BaseModel):
    """One germ of a model: torus characters of source coordinates and target components."""
    source: List[List[int]] = Field(..., examples=[[[1], [2]]])
    target: List[List[int]] = Field(..., examples=[[[3], [2]]])

    @field_validator("source", "target")
    def validate_characters(cls, v):
        if not v:
            raise ValueError("A branch needs at least one character on each side")
        if len({len(w) for w in v}) != 1:
            raise ValueError("All characters of a branch must have the same length")
        return v


class ModelGerm(BaseModel):
    label: str = Field(..., examples=["A2"])
    torus_rank: int = Field(1, ge=1)
    branches: List[Branch]
    distinguished: int = Field(0, ge=0, description="branch supplying the c-classes")

    @model_validator(mode="after")
    def validate_branches(self):
        if not self.branches:
            raise ValueError("A model needs at least one branch")
        if self.distinguished >= len(self.branches):
            raise ValueError("distinguished branch index out of range")
        for branch in self.branches:
            for w in branch.source + branch.target:
                if len(w) != self.torus_rank:
                    raise ValueError(f"Character {w} does not match torus rank {self.torus_rank}")
        kappas = {len(b.target) - len(b.source) for b in self.branches}
        if len(kappas) != 1 or min(kappas) < 0:
            raise ValueError("All branches must share a non-negative relative codimension")
        if len({len(b.target) for b in self.branches}) != 1:
            raise ValueError("Branches of a multi-germ share one target")
        return self

    @property
    def kappa(self) -> int:
        branch = self.branches[0]
        return len(branch.target) - len(branch.source)

    @property
    def source_dimension(self) -> int:
        return len(self.branches[self.distinguished].source)


class LocusPiece(BaseModel):
    """One smooth stratum in an inclusion-exclusion expression, by its normal characters."""
    normal: List[List[int]] = Field(..., examples=[[[2], [3]]])
    sign: int = Field(1, examples=[1, -1])

    @field_validator("sign")
    def validate_sign(cls, v):
        if v not in (1, -1):
            raise ValueError("sign must be 1 or -1")
        return v


class ConstraintSpec(BaseModel):
    model: str = Field(..., description="label of a model in the job")
    kind: ConstraintKind = ConstraintKind.series
    expected: Optional[str] = Field(None, examples=["6 a^2 - 30 a^3"])
    locus: Optional[List[LocusPiece]] = None
    degrees: List[int] = Field(default_factory=list, examples=[[3]])
    chi: Optional[int] = Field(None, examples=[1])

    @model_validator(mode="after")
    def validate_kind(self):
        if self.kind == ConstraintKind.series:
            if (self.expected is None) == (self.locus is None):
                raise ValueError("A series constraint needs exactly one of expected or locus")
            if not self.degrees or min(self.degrees) < 0:
                raise ValueError("A series constraint needs non-negative degrees to compare")
        elif self.chi is None:
            raise ValueError("An euler constraint needs chi")
        return self


class SolverJob(BaseModel):
    name: str = Field(..., examples=["tpsm_A2_degree3"])
    kappa: int = Field(0, ge=0)
    degree: int = Field(..., ge=1)
    fixed: str = Field("0", description="known part of the candidate")
    basis: List[str] = Field(..., examples=[["c1^3", "c1 c2", "c3"]])
    unknowns: Optional[List[str]] = None
    models: List[ModelGerm]
    constraints: List[ConstraintSpec]

    @model_validator(mode="after")
    def validate_references(self):
        if self.unknowns is not None and len(self.unknowns) != len(self.basis):
            raise ValueError("unknowns and basis must have the same length")
        labels = [m.label for m in self.models]
        if len(set(labels)) != len(labels):
            raise ValueError("model labels must be unique")
        for constraint in self.constraints:
            if constraint.model not in labels:
                raise ValueError(f"constraint refers to unknown model {constraint.model}")
        for model in self.models:
            if model.kappa != self.kappa:
                raise ValueError(f"model {model.label} has kappa {model.kappa}, the job has {self.kappa}")
        return self


class SolveReport(BaseModel):
    job: str
    status: str = Field(..., examples=["unique", "underdetermined", "inconsistent"])
    polynomial: Optional[str] = None
    values: dict = Field(default_factory=dict)
    rank: Optional[int] = None
    free: List[str] = Field(default_factory=list)
    directions: List[dict] = Field(default_factory=list)
