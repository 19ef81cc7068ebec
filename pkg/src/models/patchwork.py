from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

OrthantCopy = Tuple[int, ...]


class SignDistribution(BaseModel):
    """各多項式の台の点ごとの符号 δ: A_i → {±1}"""

    signs: Tuple[Tuple[int, ...], ...]

    class Config:
        frozen = True

    @field_validator("signs")
    @classmethod
    def _plus_minus(cls, value):
        if any(s not in (1, -1) for row in value for s in row):
            raise ValueError("signs must be +1 or -1")
        return value


class PatchworkCell(BaseModel):
    """コピー ε 内の開セル（混合セル Γ の相対内部にある部分）"""

    components: Tuple[Tuple[int, ...], ...] = Field(description="各 f_i の項番号 Γ_i")
    copy: OrthantCopy = Field(description="ε ∈ {0,1}^n")
    dim: int = Field(ge=0)

    class Config:
        frozen = True

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {
            "components": [list(c) for c in self.components],
            "copy": list(self.copy),
            "dim": self.dim,
        }


class PatchworkComplex(BaseModel):
    """貼り合わせで得られる実熱帯対象の開セル数とオイラー標数"""

    n: int = Field(ge=0)
    counts: Tuple[int, ...] = Field(description="次元 j の開セル数")
    cells: Optional[Tuple[PatchworkCell, ...]] = None

    class Config:
        frozen = True
        json_schema_extra = {"example": {"n": 2, "counts": [0, 3], "euler": -3}}

    @field_validator("counts")
    @classmethod
    def _nonnegative(cls, value):
        if any(c < 0 for c in value):
            raise ValueError("cell counts must be nonnegative")
        return value

    @property
    def euler(self) -> int:
        """開セル数の交代和（コンパクト台の規約）"""
        return sum((-1) ** j * c for j, c in enumerate(self.counts))

    def to_dict(self, include_cells: bool = False) -> Dict[str, Any]:
        """辞書形式に変換"""
        data: Dict[str, Any] = {
            "n": self.n,
            "counts": list(self.counts),
            "euler": self.euler,
        }
        if include_cells and self.cells is not None:
            data["cells"] = [c.to_dict() for c in self.cells]
        return data
