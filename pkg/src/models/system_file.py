from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from src.config.constants import SIGNS


class TermEntry(BaseModel):
    """入力ファイルの項 {exponent, valuation, sign}"""

    exponent: List[int]
    valuation: Union[int, str] = Field(description='有理数（整数または "p/q"）')
    sign: Optional[int] = None

    @field_validator("sign")
    @classmethod
    def _plus_minus(cls, value):
        if value is not None and value not in SIGNS:
            raise ValueError("sign must be +1 or -1")
        return value


class PolynomialEntry(BaseModel):
    terms: List[TermEntry] = Field(min_length=1)


class SystemFile(BaseModel):
    """熱帯系の宣言的な入力ファイル"""

    ambient_dim: int = Field(ge=0)
    polynomials: List[PolynomialEntry] = Field(min_length=1)

    class Config:
        json_schema_extra = {
            "example": {
                "ambient_dim": 2,
                "polynomials": [
                    {
                        "terms": [
                            {"exponent": [0, 0], "valuation": "0", "sign": 1},
                            {"exponent": [1, 0], "valuation": "0", "sign": 1},
                            {"exponent": [0, 1], "valuation": "0", "sign": 1},
                        ]
                    }
                ],
            }
        }

    @model_validator(mode="after")
    def _consistent(self):
        for idx, poly in enumerate(self.polynomials):
            exponents = [tuple(t.exponent) for t in poly.terms]
            if any(len(e) != self.ambient_dim for e in exponents):
                raise ValueError(f"polynomial {idx}: exponent length differs from ambient_dim")
            if len(set(exponents)) != len(exponents):
                raise ValueError(f"polynomial {idx}: duplicate exponents")
        return self


class ResultEnvelope(BaseModel):
    """CLI の出力（コマンド、入力ダイジェスト、結果、判定）"""

    command: str
    input_digest: Optional[str] = None
    outputs: Dict[str, Any] = Field(default_factory=dict)
    verdicts: Dict[str, bool] = Field(default_factory=dict)
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        data: Dict[str, Any] = {
            "command": self.command,
            "input_digest": self.input_digest,
            "outputs": self.outputs,
            "verdicts": self.verdicts,
        }
        if self.error is not None:
            data["error"] = self.error
        return data
