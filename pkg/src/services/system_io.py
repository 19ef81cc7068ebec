"""入力ファイルの読み書きと厳密な JSON 表現"""

import hashlib
import json
import logging
from enum import Enum
from fractions import Fraction
from typing import Any, Union

import pydantic

from src.exceptions import ValidationError
from src.models.polytope import exact_number
from src.models.system_file import (
    PolynomialEntry,
    ResultEnvelope,
    SystemFile,
    TermEntry,
)
from src.models.tropical import TropicalPolynomial, TropicalSystem, TropicalTerm

logger = logging.getLogger(__name__)


def parse_rational(value: Union[int, str]) -> Fraction:
    """整数または "p/q" 文字列を有理数に変換

    Raises:
        ValidationError: 有理数として解釈できない場合
    """
    if isinstance(value, bool):
        raise ValidationError(f"not a rational number: {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise ValidationError(f"not a rational number: {value!r}") from e


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_system_file(text: str) -> SystemFile:
    """JSON テキストを SystemFile として検証

    Raises:
        ValidationError: JSON の構文エラーまたはスキーマ違反
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"invalid JSON: {e}") from e
    try:
        return SystemFile.model_validate(data)
    except pydantic.ValidationError as e:
        raise ValidationError(f"invalid system file: {e}") from e


def to_tropical_system(system_file: SystemFile) -> TropicalSystem:
    """SystemFile から熱帯系を組み立てる（持ち上げ ℓ = val）"""
    polynomials = []
    for entry in system_file.polynomials:
        terms = tuple(
            TropicalTerm(
                exponent=tuple(t.exponent),
                lift=parse_rational(t.valuation),
                sign=t.sign,
            )
            for t in entry.terms
        )
        polynomials.append(
            TropicalPolynomial(ambient_dim=system_file.ambient_dim, terms=terms)
        )
    return TropicalSystem(
        ambient_dim=system_file.ambient_dim, polynomials=tuple(polynomials)
    )


def load_system(text: str) -> TropicalSystem:
    """JSON テキストを熱帯系に変換

    Raises:
        ValidationError: 入力が不正な場合
    """
    system_file = parse_system_file(text)
    try:
        return to_tropical_system(system_file)
    except pydantic.ValidationError as e:
        raise ValidationError(f"invalid system: {e}") from e


def from_tropical_system(system: TropicalSystem) -> SystemFile:
    return SystemFile(
        ambient_dim=system.ambient_dim,
        polynomials=[
            PolynomialEntry(
                terms=[
                    TermEntry(
                        exponent=list(t.exponent),
                        valuation=format_rational(t.lift),
                        sign=t.sign,
                    )
                    for t in f.terms
                ]
            )
            for f in system.polynomials
        ],
    )


def serialize_system_file(system_file: SystemFile) -> str:
    """SystemFile を正規化した JSON テキストに変換"""
    data = {
        "ambient_dim": system_file.ambient_dim,
        "polynomials": [
            {
                "terms": [
                    {
                        "exponent": list(t.exponent),
                        "valuation": format_rational(parse_rational(t.valuation)),
                        **({"sign": t.sign} if t.sign is not None else {}),
                    }
                    for t in poly.terms
                ]
            }
            for poly in system_file.polynomials
        ],
    }
    return json.dumps(data, indent=2, sort_keys=True)


def input_digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def exact_json(value: Any) -> Any:
    """有理数・大きな整数・列挙型を厳密な JSON 値に変換"""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, Fraction)):
        return exact_number(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): exact_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [exact_json(v) for v in value]
    raise ValidationError(f"cannot serialize {type(value).__name__} exactly")


def render_envelope(envelope: ResultEnvelope) -> str:
    return json.dumps(exact_json(envelope.to_dict()), indent=2, sort_keys=True)
