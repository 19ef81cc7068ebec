"""閉公式と恒等式: Stirling 数、係数族 S・C、混合符号数、φ 多項式、主定理の検証"""

import itertools
import logging
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy

from src.config.defaults import DEFAULT_COMPUTATION_CONFIG
from src.config.settings import ComputationConfig
from src.exceptions import (
    DimensionError,
    InternalConsistencyError,
    TheoremVerificationError,
    ValidationError,
)
from src.models.invariants import (
    CoefficientTable,
    IdentityReport,
    PhiPolynomial,
    TheoremReport,
)
from src.models.polytope import EhrhartPolynomial, LatticePolytope
from src.models.tropical import TropicalSystem
from src.services.exact_math import integer_coordinates, saturation
from src.services.patchwork import ci_complex, euler_compactified, nb_k_direct
from src.services.polytope import (
    convex_hull,
    ehrhart,
    intrinsic_polytope,
    minkowski_face_decompositions,
    psi_from_ehrhart,
    regular_subdivision,
)

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]
EhrhartInput = Union[EhrhartPolynomial, Sequence]


def stirling2(i: int, j: int) -> int:
    """第 2 種 Stirling 数 S₂(i, j)"""
    if i < 0 or j < 0:
        raise ValidationError("Stirling numbers need nonnegative indices")
    total = sum((-1) ** (j - t) * comb(j, t) * t**i for t in range(j + 1))
    return total // factorial(j)


@lru_cache(maxsize=None)
def signature_coefficient(l: int, n: int) -> int:
    """S_{l,n} = (−1)^n Σ_{i≤n} Σ_{p≤i} (−1)^p C(n+1, i−p) p^l"""
    total = sum(
        (-1) ** p * comb(n + 1, i - p) * p**l
        for i in range(n + 1)
        for p in range(i + 1)
    )
    return (-1) ** n * total


@lru_cache(maxsize=None)
def euler_coefficient(l: int, n: int) -> int:
    """C_{l,n} = (−1)^{n−l} Σ_{k=1}^{l} (2^n − 2^{n−k})/(k+1) Σ_t (−1)^t C(k+1,t) t^{l+1}"""
    total = 0
    for k in range(1, l + 1):
        inner = sum((-1) ** t * comb(k + 1, t) * t ** (l + 1) for t in range(k + 2))
        if inner % (k + 1):
            raise InternalConsistencyError(
                f"inner sum {inner} not divisible by {k + 1} (l={l}, n={n})"
            )
        total += (2**n - 2 ** (n - k)) * (inner // (k + 1))
    return (-1) ** (n - l) * total


def coefficient_table(max_n: int) -> CoefficientTable:
    if max_n < 1:
        raise ValidationError("coefficient table needs N >= 1")
    return CoefficientTable(
        max_n=max_n,
        signature=tuple(
            tuple(signature_coefficient(l, n) for l in range(n + 1))
            for n in range(max_n + 1)
        ),
        euler=tuple(
            tuple(euler_coefficient(l, n) for l in range(n + 1))
            for n in range(max_n + 1)
        ),
    )


def _coefficients(a: EhrhartInput, n: int) -> List[Fraction]:
    coefficients = a.coefficients if isinstance(a, EhrhartPolynomial) else a
    coefficients = [Fraction(x) for x in coefficients]
    if len(coefficients) != n + 1:
        raise ValidationError(
            f"expected {n + 1} Ehrhart coefficients, got {len(coefficients)}"
        )
    return coefficients


def _as_integer(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise InternalConsistencyError(f"{what} = {value} is not an integer")
    return int(value)


def sigma_hypersurface(a: EhrhartInput, n: int) -> int:
    """σ̃(Z) = −(−2)^n + Σ_l S_{l,n}·a_l

    Raises:
        ValidationError: 係数の個数が n+1 でない場合
        InternalConsistencyError: 結果が整数でない場合
    """
    coefficients = _coefficients(a, n)
    value = -((-2) ** n) + sum(
        signature_coefficient(l, n) * x for l, x in enumerate(coefficients)
    )
    return _as_integer(value, "mixed signature")


def euler_formula_hypersurface(a: EhrhartInput, n: int) -> int:
    """χ(Z) = Σ_l C_{l,n}·a_l"""
    coefficients = _coefficients(a, n)
    value = sum(euler_coefficient(l, n) * x for l, x in enumerate(coefficients))
    return _as_integer(value, "Euler characteristic")


def nb_k_formula(a: EhrhartInput, n: int) -> List[int]:
    """nb_k = Σ_l k!·S₂(l+1, k+1)·(−1)^{n−l}·a_l（k = 0..n）

    Raises:
        InternalConsistencyError: 負または非整数の値が出た場合
    """
    coefficients = _coefficients(a, n)
    counts = []
    for k in range(n + 1):
        value = sum(
            factorial(k) * stirling2(l + 1, k + 1) * (-1) ** (n - l) * x
            for l, x in enumerate(coefficients)
        )
        count = _as_integer(value, f"nb_{k}")
        if count < 0:
            raise InternalConsistencyError(f"nb_{k} = {count} is negative")
        counts.append(count)
    return counts


def euler_from_simplex_counts(nb: Sequence[int], n: int) -> int:
    """χ = Σ_k (−1)^{k−1}(2^n − 2^{n−k})·nb_k"""
    return sum(
        (-1) ** (k - 1) * (2**n - 2 ** (n - k)) * nb[k] for k in range(1, n + 1)
    )


def phi_polynomial(a: EhrhartInput, n: int) -> PhiPolynomial:
    """φ(u) = [(u−1)^n + (−1)^{n+1} Σ ψ_i u^i] / u を厳密に割り算して求める

    Raises:
        InternalConsistencyError: u で割り切れない場合
    """
    psi = psi_from_ehrhart(_coefficients(a, n), n)
    u = sympy.Symbol("u")
    numerator = sympy.Poly(
        (u - 1) ** n + (-1) ** (n + 1) * sum(c * u**i for i, c in enumerate(psi)),
        u,
        domain=sympy.QQ,
    )
    quotient, remainder = numerator.div(sympy.Poly(u, u, domain=sympy.QQ))
    if not remainder.is_zero:
        raise InternalConsistencyError(f"phi numerator not divisible by u: {remainder}")
    coefficients = [
        Fraction(int(c.p), int(c.q)) for c in reversed(quotient.all_coeffs())
    ]
    return PhiPolynomial(coefficients=tuple(coefficients))


def _vertices(polytope: Union[LatticePolytope, Sequence[Sequence[int]]]) -> List[Vector]:
    if isinstance(polytope, LatticePolytope):
        return list(polytope.vertices)
    return [tuple(p) for p in polytope]


def subsystem_sigmas(
    polytopes: Sequence[Union[LatticePolytope, Sequence[Sequence[int]]]], n: int
) -> Dict[Tuple[int, ...], int]:
    """空でない I ごとの σ̃(X_I)，X_I = {Σ_{i∈I} y_i f_i(x) − 1 = 0}

    Q_I が全次元でないときは X_I をトーラス因子 (C*)^r との積とみなし、
    σ̃(X_I) = (−2)^r·σ̃(X_I') とする。

    Raises:
        DimensionError: Δ = ΣΔ_i が全次元でない場合
    """
    point_sets = [_vertices(p) for p in polytopes]
    edges = [
        tuple(a - b for a, b in zip(p, ps[0])) for ps in point_sets for p in ps[1:]
    ]
    if len(saturation(edges, n)) != n:
        raise DimensionError("Minkowski sum of the polytopes is not full-dimensional")
    k = len(point_sets)
    result = {}
    for size in range(1, k + 1):
        for subset in itertools.combinations(range(k), size):
            points = [tuple([0] * (n + size))]
            for j, i in enumerate(subset):
                unit = tuple(int(m == j) for m in range(size))
                points.extend(tuple(p) + unit for p in point_sets[i])
            q = convex_hull(points)
            torus_rank = n + size - q.dim
            value = sigma_hypersurface(ehrhart(intrinsic_polytope(q)), q.dim)
            result[subset] = (-2) ** torus_rank * value
    return result


def sigma_complete_intersection(
    polytopes: Sequence[Union[LatticePolytope, Sequence[Sequence[int]]]], n: int
) -> int:
    """σ̃(Y) = (−2)^n + (−1)^k Σ_I σ̃(X_I)"""
    sigmas = subsystem_sigmas(polytopes, n)
    return (-2) ** n + (-1) ** len(polytopes) * sum(sigmas.values())


def sigma_compactified(
    polytopes: Sequence[Union[LatticePolytope, Sequence[Sequence[int]]]],
) -> int:
    """Δ の全ての面 Γ = ΣΓ_i（格子 M(Γ) で表す）の σ̃ の和

    ある Γ_i が頂点である分解は寄与しない。
    """
    point_sets = [_vertices(p) for p in polytopes]
    n = len(point_sets[0][0])
    total = 0
    for dim, parts in minkowski_face_decompositions(point_sets):
        if dim == 0 or any(len(part) == 1 for part in parts):
            continue
        faces = [[point_sets[i][j] for j in part] for i, part in enumerate(parts)]
        diffs = [
            tuple(a - b for a, b in zip(p, face[0])) for face in faces for p in face[1:]
        ]
        basis = saturation(diffs, n)
        if len(basis) < n:
            faces = [
                [
                    integer_coordinates(basis, tuple(a - b for a, b in zip(p, face[0])))
                    for p in face
                ]
                for face in faces
            ]
        total += sigma_complete_intersection(faces, dim)
    logger.debug("compactified mixed signature %d", total)
    return total


def _hypersurface_extras(system: TropicalSystem) -> Dict:
    f = system.polynomials[0]
    n = system.ambient_dim
    delta = convex_hull(f.exponents)
    a = ehrhart(delta)
    nb_formula = nb_k_formula(a, n)
    nb_direct = nb_k_direct(regular_subdivision(f.exponents, f.lifts), delta)
    euler_formula = euler_formula_hypersurface(a, n)
    euler_counts = euler_from_simplex_counts(nb_formula, n)
    if euler_formula != euler_counts:
        raise InternalConsistencyError(
            f"closed Euler formulas disagree: {euler_formula} vs {euler_counts}"
        )
    return {
        "ehrhart": a.to_dict()["coefficients"],
        "psi": psi_from_ehrhart(a.coefficients, n),
        "phi": phi_polynomial(a, n).to_dict()["coefficients"],
        "sigma_formula": sigma_hypersurface(a, n),
        "euler_formula": euler_formula,
        "nb_formula": nb_formula,
        "nb_direct": nb_direct,
    }


def verify_main_theorem(
    system: TropicalSystem,
    compact: bool = False,
    strict: bool = True,
    config: Optional[ComputationConfig] = None,
) -> TheoremReport:
    """実熱帯完全交叉について χ(ℝY) = σ̃(Y) を確かめる

    Args:
        system: 非退化な符号つき系
        compact: コンパクト化した組も比較するか
        strict: 不一致のとき例外を送出するか

    Raises:
        TheoremVerificationError: strict で不一致の場合（report を保持）
    """
    config = config or DEFAULT_COMPUTATION_CONFIG
    n, k = system.ambient_dim, system.k
    complex_ = ci_complex(system, config=config)
    hulls = [convex_hull(f.exponents) for f in system.polynomials]
    sigmas = subsystem_sigmas(hulls, n)
    sigma = (-2) ** n + (-1) ** k * sum(sigmas.values())
    report = TheoremReport(
        chi=complex_.euler,
        sigma=sigma,
        counts=complex_.counts,
        subsystem_sigmas={
            ",".join(str(i + 1) for i in subset): value
            for subset, value in sigmas.items()
        },
        hypersurface=_hypersurface_extras(system) if k == 1 else {},
        compact_chi=euler_compactified(system, config) if compact else None,
        compact_sigma=sigma_compactified(hulls) if compact else None,
    )
    logger.info(
        "chi=%d sigma=%d%s",
        report.chi,
        report.sigma,
        f" compact=({report.compact_chi}, {report.compact_sigma})" if compact else "",
    )
    if strict and not report.passed:
        raise TheoremVerificationError(
            f"chi {report.chi} != sigma {report.sigma}"
            if not report.equal
            else f"compactified chi {report.compact_chi} != sigma {report.compact_sigma}",
            report=report,
        )
    return report


def identity_suite(
    max_n: int, config: Optional[ComputationConfig] = None
) -> IdentityReport:
    """二項係数と係数族 S・C の恒等式を全添字で検査

    Raises:
        ValidationError: max_n が上限を超える場合
    """
    config = config or DEFAULT_COMPUTATION_CONFIG
    if not 1 <= max_n <= config.identity_max_n:
        raise ValidationError(f"identity suite supports 1 <= N <= {config.identity_max_n}")
    checked = {"alternating_power_sums": 0, "binomial_tail": 0, "recurrence": 0, "diagonal": 0}
    failures: Dict[str, List[Tuple[int, ...]]] = {name: [] for name in checked}

    for i in range(1, max_n + 1):
        for l in range(i):
            sums = [
                sum((-1) ** q * comb(i, q) * q**l for q in range(i + 1)),
                sum((-1) ** q * comb(i, q) * (i - q) ** l for q in range(i + 1)),
            ]
            sums.extend(
                sum((-1) ** q * comb(i, q) * (p - q) ** l for q in range(i + 1))
                for p in range(max_n + 1)
            )
            checked["alternating_power_sums"] += len(sums)
            if any(sums):
                failures["alternating_power_sums"].append((i, l))

    for p in range(max_n + 1):
        for k in range(p + 1):
            lhs = sum(2 ** (p - t) * comb(t, k) for t in range(p + 1))
            rhs = sum(comb(p + 1, l) for l in range(k + 1, p + 2))
            checked["binomial_tail"] += 1
            if lhs != rhs:
                failures["binomial_tail"].append((p, k))

    for n in range(max_n + 1):
        checked["recurrence"] += 1
        if signature_coefficient(0, n) != (-2) ** n:
            failures["recurrence"].append((0, n))
        if n + 1 > max_n:
            continue
        for l in range(1, n + 1):
            checked["recurrence"] += 2
            if signature_coefficient(l, n + 1) != -2 * signature_coefficient(l, n):
                failures["recurrence"].append((l, n))
            if euler_coefficient(l, n + 1) != -2 * euler_coefficient(l, n):
                failures["recurrence"].append((l, n))

    for n in range(1, max_n + 1):
        checked["diagonal"] += 1
        if signature_coefficient(n, n) != euler_coefficient(n, n):
            failures["diagonal"].append((n,))

    report = IdentityReport(
        max_n=max_n,
        checked=checked,
        failures={name: tuple(f) for name, f in failures.items()},
    )
    logger.info("identity suite up to %d: %s", max_n, "pass" if report.passed else "fail")
    return report
