# %%
import argparse
import hashlib
import logging
import sys
from dataclasses import replace
from typing import Any, Callable, Dict, List, Optional, Tuple

import pydantic

from src.config.constants import EXIT_CODES
from src.config.settings import ComputationConfig
from src.exceptions import (
    ComputationError,
    ConfigurationError,
    TheoremVerificationError,
    ValidationError,
)
from src.models.system_file import ResultEnvelope
from src.models.tropical import TropicalSystem
from src.services import (
    cayley,
    invariants,
    multiplicity,
    patchwork,
    polytope,
    system_io,
    tropical,
)
from src.services.svg_renderer import parse_bbox, render_svg

logger = logging.getLogger(__name__)

Outputs = Tuple[Dict[str, Any], Dict[str, bool]]


def setup_logging(level: str) -> None:
    """標準エラー出力へのログ設定（標準出力は結果の JSON 専用）"""
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, level.upper()),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logging.getLogger().setLevel(getattr(logging, level.upper()))


def read_input(path: Optional[str]) -> str:
    """入力ファイル（省略時または "-" は標準入力）を読み込む"""
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e}") from e


def cmd_subdivide(system: TropicalSystem, args, config) -> Outputs:
    """双対細分と混合細分の出力"""
    outputs: Dict[str, Any] = {
        "dual_subdivisions": [
            tropical.dual_subdivision(f).to_dict() for f in system.polynomials
        ]
    }
    verdicts: Dict[str, bool] = {}
    ms = cayley.mixed_subdivision(system)
    pure, tight = cayley.purity_flags(ms)
    outputs["mixed_subdivision"] = ms.to_dict()
    outputs["pure"], outputs["tight"] = pure, tight
    if args.oracle:
        direct = cayley.mixed_subdivision_direct(system)
        verdicts["direct_construction_agrees"] = sorted(
            c.components for c in ms.maximal_cells
        ) == sorted(c.components for c in direct.cells)
    return outputs, verdicts


def cmd_nondegenerate(system: TropicalSystem, args, config) -> Outputs:
    """系の非退化性（判定 false は正常終了）"""
    nondegenerate = cayley.is_nondegenerate_system(system)
    outputs = {
        "nondegenerate": nondegenerate,
        "nonsingular": [tropical.is_nonsingular(f) for f in system.polynomials],
    }
    verdicts = {}
    if args.oracle:
        verdicts["multiplicity_one_agrees"] = (
            multiplicity.verify_multiplicity_one(system) == nondegenerate
        )
    return outputs, verdicts


def cmd_weights(system: TropicalSystem, args, config) -> Outputs:
    """全ての許容的な族の交わりセルと重み"""
    cells = []
    agree = True
    for indices, cell, record in multiplicity.multiplicity_report(system):
        entry = {
            "indices": [i + 1 for i in indices],
            "cell": cell.to_dict(),
            "weight": record.to_dict(),
        }
        if args.oracle:
            perturbed = multiplicity.weight_by_perturbation(cell, config=config)
            entry["perturbation_weight"] = perturbed.weight
            agree = agree and perturbed.weight == record.weight
        cells.append(entry)
    verdicts = {"perturbation_agrees": agree} if args.oracle else {}
    return {"cells": cells}, verdicts


def cmd_bernstein(system: TropicalSystem, args, config) -> Outputs:
    """安定交点数（混合体積との一致は内部で確認済み）"""
    return {"stable_intersection_total": multiplicity.stable_intersection_total(system)}, {}


def cmd_patchwork(system: TropicalSystem, args, config) -> Outputs:
    """貼り合わせのセル数とオイラー標数"""
    complex_ = patchwork.ci_complex(system, with_cells=args.cells, config=config)
    outputs: Dict[str, Any] = {"torus": complex_.to_dict(include_cells=args.cells)}
    verdicts = {}
    if args.compact:
        outputs["compactified_euler"] = patchwork.euler_compactified(system, config)
    if args.oracle and system.k == 1:
        direct = patchwork.hypersurface_complex(system.polynomials[0], config=config)
        verdicts["hypersurface_counts_agree"] = direct.counts == complex_.counts
    return outputs, verdicts


def cmd_signature(system: TropicalSystem, args, config) -> Outputs:
    """Ehrhart 係数・ψ・混合符号数 σ̃"""
    n = system.ambient_dim
    hulls = [polytope.convex_hull(f.exponents) for f in system.polynomials]
    outputs: Dict[str, Any] = {
        "sigma": invariants.sigma_complete_intersection(hulls, n),
        "subsystem_sigmas": {
            ",".join(str(i + 1) for i in subset): value
            for subset, value in invariants.subsystem_sigmas(hulls, n).items()
        },
    }
    verdicts = {}
    if system.k == 1:
        a = polytope.ehrhart(hulls[0])
        phi = invariants.phi_polynomial(a, n)
        outputs.update(
            {
                "ehrhart": a.to_dict()["coefficients"],
                "psi": polytope.psi_from_ehrhart(a.coefficients, n),
                "phi": phi.to_dict()["coefficients"],
                "sigma_hypersurface": invariants.sigma_hypersurface(a, n),
                "euler_formula": invariants.euler_formula_hypersurface(a, n),
                "nb_formula": invariants.nb_k_formula(a, n),
            }
        )
        if args.oracle:
            verdicts["phi_at_minus_one_agrees"] = (
                phi.evaluate(-1) == outputs["sigma_hypersurface"]
            )
            verdicts["cone_series"] = polytope.cone_series_check(hulls[0], n + 2)
    if args.compact:
        outputs["compactified_sigma"] = invariants.sigma_compactified(hulls)
    return outputs, verdicts


def cmd_verify(system: TropicalSystem, args, config) -> Outputs:
    """主定理の検証（不一致は終了コード 1）"""
    report = invariants.verify_main_theorem(
        system, compact=args.compact, strict=False, config=config
    )
    return {"report": report.to_dict()}, {"theorem": report.passed}


def cmd_identities(args, config) -> Outputs:
    report = invariants.identity_suite(args.max_n or config.identity_max_n, config)
    outputs = {
        "report": report.to_dict(),
        "table": invariants.coefficient_table(report.max_n).to_dict(),
    }
    return outputs, {"identities": report.passed}


def cmd_plot(system: TropicalSystem, args, config) -> Outputs:
    """SVG を書き出し、パスとダイジェストを返す"""
    bbox = parse_bbox(args.bbox) if args.bbox else None
    document = render_svg(system, bbox=bbox, dual=args.dual, config=config)
    try:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(document)
    except OSError as e:
        raise ValidationError(f"cannot write {args.output}: {e}") from e
    digest = "sha256:" + hashlib.sha256(document.encode("utf-8")).hexdigest()
    return {"path": args.output, "svg_digest": digest}, {}


COMMANDS: Dict[str, Callable] = {
    "subdivide": cmd_subdivide,
    "nondegenerate": cmd_nondegenerate,
    "weights": cmd_weights,
    "bernstein": cmd_bernstein,
    "patchwork": cmd_patchwork,
    "signature": cmd_signature,
    "verify": cmd_verify,
    "plot": cmd_plot,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropical-patchwork",
        description="Exact tropical geometry: subdivisions, weights, patchworking and signatures.",
    )
    parser.add_argument("--seed", type=int, default=None, help="perturbation oracle seed")
    parser.add_argument(
        "--oracle", action="store_true", help="run independent cross-checks"
    )
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in COMMANDS:
        p = sub.add_parser(name, help=COMMANDS[name].__doc__)
        p.add_argument("input", nargs="?", help="system file (default: stdin)")
        if name in ("patchwork", "signature", "verify"):
            p.add_argument("--compact", action="store_true", help="compactified quantities")
        if name == "patchwork":
            p.add_argument("--cells", action="store_true", help="include the cell inventory")
        if name == "plot":
            p.add_argument("--output", required=True, help="SVG output path")
            p.add_argument("--bbox", help="clipping box x0,y0,x1,y1")
            p.add_argument("--dual", action="store_true", help="overlay dual subdivisions")

    identities = sub.add_parser("identities", help="binomial and coefficient identities")
    identities.add_argument("--max-n", type=int, default=None)
    return parser


def _exit_code(error: Exception) -> int:
    if isinstance(error, (ValidationError, ConfigurationError, pydantic.ValidationError)):
        return EXIT_CODES["validation_failure"]
    return EXIT_CODES["theorem_failure"]


def run_command(argv: List[str], config: Optional[ComputationConfig] = None) -> int:
    """コマンドを実行して結果の JSON を標準出力へ書き、終了コードを返す"""
    args = build_parser().parse_args(argv)
    envelope = ResultEnvelope(command=args.command)
    try:
        config = config or ComputationConfig.from_env()
        if args.seed is not None:
            config = replace(config, perturbation_seed=args.seed)
        setup_logging("DEBUG" if args.verbose else config.log_level)
        if args.command == "identities":
            outputs, verdicts = cmd_identities(args, config)
        else:
            text = read_input(args.input)
            envelope.input_digest = system_io.input_digest(text)
            system = system_io.load_system(text)
            outputs, verdicts = COMMANDS[args.command](system, args, config)
        envelope.outputs, envelope.verdicts = outputs, verdicts
        code = EXIT_CODES["ok"] if all(verdicts.values()) else EXIT_CODES["theorem_failure"]
    except (ComputationError, pydantic.ValidationError) as e:
        logger.error("%s failed: %s", args.command, e)
        envelope.error = str(e)
        if isinstance(e, TheoremVerificationError) and e.report is not None:
            envelope.outputs = {"report": e.report.to_dict()}
        code = _exit_code(e)
    print(system_io.render_envelope(envelope))
    return code


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
