from fractions import Fraction
from typing import Any, Dict, List, Tuple

from pydantic import BaseModel, Field

from src.config.constants import JSON_SAFE_INTEGER

Vector = Tuple[int, ...]


def exact_number(value) -> Any:
    """Fraction を JSON 用の整数または "p/q" 文字列へ変換"""
    value = Fraction(value)
    if value.denominator == 1:
        number = value.numerator
        return number if abs(number) <= JSON_SAFE_INTEGER else str(number)
    return f"{value.numerator}/{value.denominator}"


class Facet(BaseModel):
    """ファセット不等式 normal·y + offset ≥ 0（y は内在座標）"""

    normal: Vector = Field(description="原始的な整数内法線")
    offset: int = Field(description="定数項")
    vertices: Tuple[int, ...] = Field(description="ファセット上の頂点番号")

    class Config:
        frozen = True


class Face(BaseModel):
    """面（頂点番号の集合と次元）"""

    dim: int = Field(ge=0)
    vertices: Tuple[int, ...]

    class Config:
        frozen = True


class LatticePolytope(BaseModel):
    """格子多面体を表現するモデル

    ファセット不等式と面は内在座標（origin と lattice_basis に関する整数座標）で
    表される。全次元の場合 origin は零ベクトル、lattice_basis は標準基底。
    """

    ambient_dim: int = Field(ge=0, description="周囲格子 M の階数")
    vertices: Tuple[Vector, ...] = Field(description="端点（辞書順）")
    dim: int = Field(ge=0, description="M(Δ) の階数")
    origin: Vector = Field(description="内在座標の基点")
    lattice_basis: Tuple[Vector, ...] = Field(description="飽和格子 M(Δ) の基底")
    vertex_coords: Tuple[Vector, ...] = Field(description="頂点の内在座標")
    facets: Tuple[Facet, ...] = Field(default=())
    faces: Tuple[Face, ...] = Field(default=(), description="空でない全ての面")

    class Config:
        frozen = True
        json_schema_extra = {
            "example": {
                "ambient_dim": 2,
                "vertices": [[0, 0], [0, 1], [1, 0]],
                "dim": 2,
            }
        }

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    def faces_of_dim(self, dim: int) -> List[Face]:
        return [face for face in self.faces if face.dim == dim]

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {
            "ambient_dim": self.ambient_dim,
            "dim": self.dim,
            "vertices": [list(v) for v in self.vertices],
            "f_vector": [len(self.faces_of_dim(j)) for j in range(self.dim + 1)],
        }


class SubdivisionCell(BaseModel):
    """細分のセル（点番号の集合）"""

    points: Tuple[int, ...]
    dim: int = Field(ge=0)

    class Config:
        frozen = True


class RegularSubdivision(BaseModel):
    """持ち上げの下側包から得られる正則細分"""

    points: Tuple[Vector, ...] = Field(description="点配置")
    lifts: Tuple[Fraction, ...] = Field(description="各点の有理数持ち上げ")
    dim: int = Field(ge=0, description="配置の次元")
    origin: Vector
    lattice_basis: Tuple[Vector, ...]
    coords: Tuple[Vector, ...] = Field(description="各点の内在座標")
    cells: Tuple[Tuple[int, ...], ...] = Field(description="極大セル")
    functionals: Tuple[Tuple[int, ...], ...] = Field(
        description="極大セルごとの下側支持関数 (c, h, t)"
    )
    faces: Tuple[SubdivisionCell, ...] = Field(description="全セルの面閉包")

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    def faces_of_dim(self, dim: int) -> List[SubdivisionCell]:
        return [face for face in self.faces if face.dim == dim]

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {
            "dim": self.dim,
            "points": [list(p) for p in self.points],
            "lifts": [exact_number(x) for x in self.lifts],
            "cells": [list(c) for c in self.cells],
            "face_counts": [len(self.faces_of_dim(j)) for j in range(self.dim + 1)],
        }


class EhrhartPolynomial(BaseModel):
    """Ehrhart 多項式（a_l は λ^l の係数）"""

    coefficients: Tuple[Fraction, ...] = Field(description="a_0, …, a_n")

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, value: int) -> Fraction:
        total = Fraction(0)
        for coefficient in reversed(self.coefficients):
            total = total * value + coefficient
        return total

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {"coefficients": [exact_number(a) for a in self.coefficients]}
