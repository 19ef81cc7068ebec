import os
from dataclasses import dataclass, field, fields
from typing import Dict

from dotenv import load_dotenv

from src.exceptions import ConfigurationError

ENV_PREFIX = "TROPICAL_"


@dataclass
class ComputationConfig:
    perturbation_seed: int = 0  # 摂動オラクルの既定シード
    perturbation_retries: int = 8  # 純な細分が得られるまでの再試行回数
    brute_force_max_dim: int = 16  # 2^n 総当たりを許す最大次元
    hull_max_points: int = 200  # 凸包計算で受け付ける点数の上限
    primitive_search_attempts: int = 40  # 原始的三角形分割の持ち上げ探索回数
    primitive_search_scale: int = 1000  # 二次関数ベースラインの倍率
    svg_padding: int = 2  # SVG のクリップ枠の余白（格子単位）
    svg_scale: int = 40  # 1 単位あたりのピクセル数
    log_level: str = "WARNING"
    identity_max_n: int = 10  # 恒等式検査の上限

    svg_colors: Dict[str, str] = field(
        default_factory=lambda: {
            "curve": "#1f4e79",  # 熱帯曲線
            "dual": "#b0b0b0",  # 双対細分
            "marker": "#c00000",  # 交点マーカー
        }
    )

    @classmethod
    def from_env(cls) -> "ComputationConfig":
        """.env と環境変数 TROPICAL_* から設定を読み込む

        Raises:
            ConfigurationError: 値の型変換に失敗した場合
        """
        load_dotenv()
        overrides = {}
        for f in fields(cls):
            if f.name == "svg_colors":
                continue
            raw = os.getenv(ENV_PREFIX + f.name.upper())
            if raw is None:
                continue
            try:
                overrides[f.name] = int(raw) if f.type in (int, "int") else raw
            except ValueError as e:
                raise ConfigurationError(
                    f"invalid value for {ENV_PREFIX + f.name.upper()}: {raw!r}"
                ) from e
        config = cls(**overrides)
        config.validate()
        return config

    def validate(self) -> None:
        """設定値の範囲を検証"""
        if self.perturbation_retries < 1:
            raise ConfigurationError("perturbation_retries must be positive")
        if not 1 <= self.brute_force_max_dim <= 24:
            raise ConfigurationError("brute_force_max_dim must lie in 1..24")
        if self.hull_max_points < 1:
            raise ConfigurationError("hull_max_points must be positive")
        if self.primitive_search_attempts < 1:
            raise ConfigurationError("primitive_search_attempts must be positive")
        if self.svg_scale < 1 or self.svg_padding < 0:
            raise ConfigurationError("svg_scale/svg_padding out of range")
        if self.log_level.upper() not in {"DEBUG", "INFO", "WARNING", "ERROR"}:
            raise ConfigurationError(f"unknown log level: {self.log_level}")
