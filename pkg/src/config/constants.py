"""定数と設定値の定義"""

# CLI の終了コード
EXIT_CODES = {
    "ok": 0,  # 正常終了（判定 false も含む）
    "theorem_failure": 1,  # 主定理の検証失敗
    "validation_failure": 2,  # 入力検証エラー
}

# JSON で整数のまま出力できる上限（これを超えると文字列化）
JSON_SAFE_INTEGER = 2**53

# 格子指数が無限大のときのタグ
INFINITE_INDEX = "INFINITE"

# 符号の取りうる値
SIGNS = (1, -1)

# SVG 出力の固定値
SVG_CONSTANTS = {
    "version": "1.1",
    "namespace": "http://www.w3.org/2000/svg",
    "float_format": "{:.4f}",  # 座標の書式（出力の決定性のため固定）
}
