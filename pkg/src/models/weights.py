from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

Vector = Tuple[int, ...]


class WeightMethod(str, Enum):
    """重みの計算方法"""

    TRANSVERSAL = "transversal"  # 体積の積 × 格子指数
    GENERAL = "general"  # 合成ごとの混合体積の和
    PERTURBATION = "perturbation"  # 一般的な平行移動による細分


class IntersectionCell(BaseModel):
    """交わりのセル ξ に双対な混合セル σ = σ_1 + ⋯ + σ_k"""

    ambient_dim: int = Field(ge=0)
    components: Tuple[Tuple[Vector, ...], ...] = Field(description="σ_i の格子点")
    dim: int = Field(ge=0, description="dim σ")
    component_dims: Tuple[int, ...] = Field(description="dim σ_i")

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _shape(self):
        if not self.components or any(not c for c in self.components):
            raise ValueError("every component needs at least one point")
        for comp in self.components:
            if any(len(p) != self.ambient_dim for p in comp):
                raise ValueError("component point length differs from ambient_dim")
        if len(self.component_dims) != len(self.components):
            raise ValueError("one dimension per component is required")
        if self.dim > self.ambient_dim or self.dim > sum(self.component_dims):
            raise ValueError("cell dimension exceeds its bounds")
        return self

    @property
    def k(self) -> int:
        return len(self.components)

    def edges(self, i: Optional[int] = None) -> List[Vector]:
        """σ_i（省略時は全成分）の基点からの差ベクトル"""
        comps = self.components if i is None else [self.components[i]]
        return [
            tuple(a - b for a, b in zip(p, comp[0])) for comp in comps for p in comp[1:]
        ]

    @property
    def is_intersection(self) -> bool:
        return all(d >= 1 for d in self.component_dims)

    @property
    def is_transversal(self) -> bool:
        return self.dim == sum(self.component_dims)

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {
            "components": [[list(p) for p in comp] for comp in self.components],
            "dim": self.dim,
            "component_dims": list(self.component_dims),
        }


class WeightRecord(BaseModel):
    """交わりの重み w(ξ) とその内訳"""

    method: WeightMethod
    weight: int = Field(ge=0)
    terms: Tuple[Tuple[Tuple[int, ...], int], ...] = Field(
        default=(), description="(合成 t, MV_d(σ; t)) の組"
    )
    volumes: Tuple[int, ...] = Field(default=(), description="vol(σ_i)（横断的な場合）")
    lattice_index: Optional[int] = Field(
        default=None, description="[M(σ) : ΣM(σ_i)]（横断的な場合）"
    )
    note: str = ""

    class Config:
        frozen = True
        json_schema_extra = {
            "example": {
                "method": "transversal",
                "weight": 2,
                "terms": [[[1, 1], 2]],
                "volumes": [1, 1],
                "lattice_index": 2,
            }
        }

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        data: Dict[str, Any] = {
            "method": self.method.value,
            "weight": self.weight,
            "terms": [{"composition": list(t), "mixed_volume": mv} for t, mv in self.terms],
        }
        if self.volumes:
            data["volumes"] = list(self.volumes)
        if self.lattice_index is not None:
            data["lattice_index"] = self.lattice_index
        if self.note:
            data["note"] = self.note
        return data
