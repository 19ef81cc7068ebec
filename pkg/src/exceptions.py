class ComputationError(Exception):
    """計算関連の基本例外クラス"""

    pass


class ValidationError(ComputationError):
    """入力データ検証時のエラー"""

    pass


class DimensionError(ValidationError):
    """次元の不一致・不足によるエラー"""

    pass


class DegenerateInputError(ValidationError):
    """非退化性を前提とする処理に退化した入力が渡されたときのエラー"""

    pass


class LatticeError(ComputationError):
    """格子の外にある生成元などの格子計算エラー"""

    pass


class PerturbationError(ComputationError):
    """摂動・探索がリトライ上限内で収束しなかったときのエラー"""

    pass


class InternalConsistencyError(ComputationError):
    """独立な計算経路の不一致や整数であるべき値が整数でないときのエラー"""

    pass


class TheoremVerificationError(ComputationError):
    """主定理の検証で両辺が一致しなかったときのエラー"""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class ConfigurationError(ComputationError):
    """設定関連のエラー"""

    pass
