from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, Field

from src.models.polytope import exact_number


class CoefficientTable(BaseModel):
    """係数族 S_{l,n} と C_{l,n}（0 ≤ l ≤ n ≤ N）"""

    max_n: int = Field(ge=1)
    signature: Tuple[Tuple[int, ...], ...] = Field(description="signature[n][l] = S_{l,n}")
    euler: Tuple[Tuple[int, ...], ...] = Field(description="euler[n][l] = C_{l,n}")

    class Config:
        frozen = True

    def s(self, l: int, n: int) -> int:
        return self.signature[n][l]

    def c(self, l: int, n: int) -> int:
        return self.euler[n][l]

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {
            "max_n": self.max_n,
            "S": [[exact_number(x) for x in row] for row in self.signature],
            "C": [[exact_number(x) for x in row] for row in self.euler],
        }


class PhiPolynomial(BaseModel):
    """φ(u) = [(u−1)^n + (−1)^{n+1} S(C,u)] / u"""

    coefficients: Tuple[Fraction, ...] = Field(description="u^0 からの係数")

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    def evaluate(self, u) -> Fraction:
        value = Fraction(0)
        for c in reversed(self.coefficients):
            value = value * u + c
        return value

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {"coefficients": [exact_number(c) for c in self.coefficients]}


class TheoremReport(BaseModel):
    """χ = σ̃ の検証結果と中間データ"""

    chi: int
    sigma: int
    counts: Tuple[int, ...] = Field(description="次元ごとの開セル数")
    subsystem_sigmas: Dict[str, int] = Field(
        default_factory=dict, description="空でない I ごとの σ̃(X_I)"
    )
    hypersurface: Dict[str, Any] = Field(
        default_factory=dict, description="k = 1 の場合の Ehrhart 係数・ψ・閉公式の値"
    )
    compact_chi: Optional[int] = None
    compact_sigma: Optional[int] = None

    class Config:
        frozen = True
        json_schema_extra = {"example": {"chi": -3, "sigma": -3, "equal": True}}

    @property
    def equal(self) -> bool:
        return self.chi == self.sigma

    @property
    def compact_equal(self) -> Optional[bool]:
        if self.compact_chi is None:
            return None
        return self.compact_chi == self.compact_sigma

    @property
    def passed(self) -> bool:
        return self.equal and self.compact_equal is not False

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        data: Dict[str, Any] = {
            "chi": self.chi,
            "sigma": self.sigma,
            "equal": self.equal,
            "counts": list(self.counts),
            "subsystem_sigmas": dict(self.subsystem_sigmas),
        }
        if self.hypersurface:
            data["hypersurface"] = self.hypersurface
        if self.compact_chi is not None:
            data["compact"] = {
                "chi": self.compact_chi,
                "sigma": self.compact_sigma,
                "equal": self.compact_equal,
            }
        data["verdict"] = "pass" if self.passed else "fail"
        return data


class IdentityReport(BaseModel):
    """恒等式ごとの検査件数と成否"""

    max_n: int
    checked: Dict[str, int]
    failures: Dict[str, Tuple[Tuple[int, ...], ...]]

    class Config:
        frozen = True

    @property
    def passed(self) -> bool:
        return not any(self.failures.values())

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        return {
            "max_n": self.max_n,
            "identities": {
                name: {
                    "checked": count,
                    "passed": not self.failures[name],
                    "failures": [list(f) for f in self.failures[name]],
                }
                for name, count in self.checked.items()
            },
            "verdict": "pass" if self.passed else "fail",
        }
