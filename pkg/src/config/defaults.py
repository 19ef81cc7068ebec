from src.config.settings import ComputationConfig

DEFAULT_COMPUTATION_CONFIG = ComputationConfig()

DEFAULT_SVG_STYLE = {
    "curve_width": 2,
    "dual_width": 1,
    "marker_radius": 4,
    "font_family": "monospace",
}
