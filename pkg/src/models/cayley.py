from fractions import Fraction
from typing import Any, Dict, List, Tuple

from pydantic import BaseModel, Field, model_validator

from src.models.polytope import exact_number

Vector = Tuple[int, ...]


class CayleyConfiguration(BaseModel):
    """Cayley 配置: f_i の項 ω ごとに点 (ω, e_i) と持ち上げ ℓ_i(ω)"""

    n: int = Field(ge=0, description="格子 M の階数")
    k: int = Field(ge=1, description="多項式の個数")
    points: Tuple[Vector, ...] = Field(description="M ⊕ Z^k の点")
    lifts: Tuple[Fraction, ...]
    markers: Tuple[int, ...] = Field(description="各点の多項式番号 i")
    term_indices: Tuple[int, ...] = Field(description="各点の f_i における項番号")
    dim: int = Field(ge=0, description="Cayley 多面体の次元")

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @model_validator(mode="after")
    def _aligned(self):
        size = len(self.points)
        if not len(self.lifts) == len(self.markers) == len(self.term_indices) == size:
            raise ValueError("points, lifts, markers and term indices must align")
        for p in self.points:
            if len(p) != self.n + self.k or sum(p[self.n :]) != 1:
                raise ValueError("Cayley points must lie on the plane Σ b_i = 1")
        return self

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {
            "n": self.n,
            "k": self.k,
            "dim": self.dim,
            "points": [list(p) for p in self.points],
            "lifts": [exact_number(x) for x in self.lifts],
        }


class MixedCell(BaseModel):
    """混合細分のセル Γ = Γ_1 + ⋯ + Γ_k（特権的表示つき）"""

    cayley_points: Tuple[int, ...] = Field(description="対応する Cayley 細分の面")
    components: Tuple[Tuple[int, ...], ...] = Field(description="各 f_i の項番号 Γ_i")
    dim: int = Field(ge=0, description="dim Γ")
    component_dims: Tuple[int, ...] = Field(description="dim Γ_i")
    is_maximal: bool = False

    class Config:
        frozen = True

    @property
    def is_intersection(self) -> bool:
        """全ての dim Γ_i ≥ 1（交わりのセル）"""
        return all(d >= 1 for d in self.component_dims)

    @property
    def is_transversal(self) -> bool:
        return self.dim == sum(self.component_dims)

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {
            "components": [list(c) for c in self.components],
            "dim": self.dim,
            "component_dims": list(self.component_dims),
            "maximal": self.is_maximal,
        }


class MixedSubdivision(BaseModel):
    """Minkowski 和 Δ = Δ_1 + ⋯ + Δ_k の混合細分"""

    n: int = Field(ge=0)
    k: int = Field(ge=1)
    dim: int = Field(ge=0, description="dim Δ")
    supports: Tuple[Tuple[Vector, ...], ...] = Field(description="各 f_i の指数")
    cells: Tuple[MixedCell, ...]

    class Config:
        frozen = True

    @property
    def maximal_cells(self) -> List[MixedCell]:
        return [c for c in self.cells if c.is_maximal]

    def component_points(self, cell: MixedCell, i: int) -> List[Vector]:
        return [self.supports[i][j] for j in cell.components[i]]

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {
            "n": self.n,
            "k": self.k,
            "dim": self.dim,
            "cells": [c.to_dict() for c in self.cells],
        }


class AdmissibleCollection(BaseModel):
    """許容的な面の族 (Γ_i)_{i∈I}（I は 0 始まりの多項式番号）"""

    indices: Tuple[int, ...] = Field(description="空でない I")
    faces: Tuple[Tuple[int, ...], ...] = Field(description="i ∈ I ごとの項番号")

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _aligned(self):
        if not self.indices:
            raise ValueError("an admissible collection needs a nonempty index set")
        if len(self.indices) != len(self.faces):
            raise ValueError("one face per index is required")
        if any(not face for face in self.faces):
            raise ValueError("faces must be nonempty")
        return self

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {"indices": list(self.indices), "faces": [list(f) for f in self.faces]}
