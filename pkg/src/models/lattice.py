from enum import Enum
from typing import Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from src.config.constants import INFINITE_INDEX


class LatticeIndexKind(str, Enum):
    """格子指数の種類を表す列挙型"""

    INFINITE = INFINITE_INDEX  # 部分格子の階数が不足している


class IntMatrix(BaseModel):
    """整数行列を表現するモデル"""

    entries: Tuple[Tuple[int, ...], ...] = Field(description="行ごとの整数成分")

    class Config:
        frozen = True
        json_schema_extra = {"example": {"entries": [[1, 0, 0], [0, 1, 0], [1, 1, 2]]}}

    @field_validator("entries")
    @classmethod
    def _rectangular(cls, value):
        widths = {len(row) for row in value}
        if len(widths) > 1:
            raise ValueError("matrix rows must all have the same length")
        return value

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0


class F2AffineSystem(BaseModel):
    """F₂ 上のアフィン連立方程式 A·ε = b"""

    coefficients: Tuple[Tuple[int, ...], ...] = Field(
        description="係数行列（行 = 制約、列 = 変数）"
    )
    rhs: Tuple[int, ...] = Field(description="右辺のビット列")
    n: int = Field(ge=0, description="変数の個数（周囲次元）")

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _shape(self):
        if len(self.coefficients) != len(self.rhs):
            raise ValueError("one right-hand side bit per constraint is required")
        for row in self.coefficients:
            if len(row) != self.n:
                raise ValueError("coefficient rows must have length n")
        return self
