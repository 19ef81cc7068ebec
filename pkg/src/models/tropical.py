from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from src.config.constants import SIGNS
from src.models.polytope import RegularSubdivision, exact_number

Vector = Tuple[int, ...]


class PuiseuxLeadingTerm(BaseModel):
    """Puiseux 級数係数の先頭項（付値と先頭実係数の符号）"""

    valuation: Fraction = Field(description="val(g)（最小の指数）")
    sign: int = Field(default=1, description="先頭実係数の符号（±1）")

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @field_validator("sign")
    @classmethod
    def _sign(cls, value):
        if value not in SIGNS:
            raise ValueError("sign must be +1 or -1")
        return value


class TropicalTerm(BaseModel):
    """熱帯多項式の項（指数・持ち上げ・任意の符号）"""

    exponent: Vector
    lift: Fraction = Field(description="ℓ(ω) = val(c_ω)")
    sign: Optional[int] = Field(default=None, description="実データの符号（±1）")

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @field_validator("sign")
    @classmethod
    def _sign(cls, value):
        if value is not None and value not in SIGNS:
            raise ValueError("sign must be +1 or -1")
        return value


class TropicalPolynomial(BaseModel):
    """熱帯多項式 max_ω (x·ω − ℓ(ω))"""

    ambient_dim: int = Field(ge=0)
    terms: Tuple[TropicalTerm, ...]

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _consistent(self):
        if not self.terms:
            raise ValueError("a tropical polynomial needs at least one term")
        exponents = [t.exponent for t in self.terms]
        if any(len(e) != self.ambient_dim for e in exponents):
            raise ValueError("exponent length differs from ambient_dim")
        if len(set(exponents)) != len(exponents):
            raise ValueError("exponents must be pairwise distinct")
        return self

    @property
    def exponents(self) -> Tuple[Vector, ...]:
        return tuple(t.exponent for t in self.terms)

    @property
    def lifts(self) -> Tuple[Fraction, ...]:
        return tuple(t.lift for t in self.terms)

    @property
    def is_real(self) -> bool:
        return all(t.sign is not None for t in self.terms)

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {
            "ambient_dim": self.ambient_dim,
            "terms": [
                {
                    "exponent": list(t.exponent),
                    "lift": exact_number(t.lift),
                    **({"sign": t.sign} if t.sign is not None else {}),
                }
                for t in self.terms
            ],
        }


class DualCell(BaseModel):
    """双対細分のセル σ と熱帯超曲面のセル ξ の対応"""

    points: Tuple[int, ...] = Field(description="σ の点（項番号）")
    dim_sigma: int = Field(ge=0)
    dim_xi: int = Field(ge=0, description="n − dim σ")
    on_boundary: bool = Field(description="σ ⊂ ∂Δ")
    bounded: bool = Field(description="ξ が有界か")

    class Config:
        frozen = True


class TropicalHypersurfaceData(BaseModel):
    """熱帯超曲面とその双対細分"""

    polynomial: TropicalPolynomial
    dual: RegularSubdivision
    cells: Tuple[DualCell, ...]

    class Config:
        frozen = True

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {
            "dual": self.dual.to_dict(),
            "cells": [
                {
                    "points": list(c.points),
                    "dim_sigma": c.dim_sigma,
                    "dim_xi": c.dim_xi,
                    "bounded": c.bounded,
                }
                for c in self.cells
            ],
        }


class TropicalSystem(BaseModel):
    """共通の格子 M ≅ Z^n 上の熱帯多項式の族"""

    ambient_dim: int = Field(ge=0)
    polynomials: Tuple[TropicalPolynomial, ...]

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _consistent(self):
        if not self.polynomials:
            raise ValueError("a system needs at least one polynomial")
        if any(p.ambient_dim != self.ambient_dim for p in self.polynomials):
            raise ValueError("all polynomials must share the ambient dimension")
        return self

    @property
    def k(self) -> int:
        return len(self.polynomials)

    @property
    def is_real(self) -> bool:
        return all(p.is_real for p in self.polynomials)

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {
            "ambient_dim": self.ambient_dim,
            "polynomials": [p.to_dict() for p in self.polynomials],
        }
