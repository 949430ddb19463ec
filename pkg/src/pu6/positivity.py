"""Positive building blocks, definiteness criteria and region scanning.

Every combined Hamiltonian expands over three rank-2 positive blocks B_jk
(one per unordered frequency pair).  The six linear functionals inside the
blocks form a basis of the dual state space for distinct frequencies, so the
block expansion is a diagonalisation in disguise: the combination is
positive-definite exactly when all three block prefactors are positive
(Sylvester's law), and the eigenvalue route is kept as an independent oracle
for that criterion rather than a fallback.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import DIM, FrequencyTriple, QuadraticForm, params_from_frequencies
from .errors import ConfigError, DegenerateFrequencies, SingularCombination
from .hierarchy import CombinationCoeffs, coeffs_from_tensor, combined_form

_PAIRS = ((1, 2), (1, 3), (2, 3))  # unordered index pairs, 1-based frequency labels


@dataclass(frozen=True)
class PositiveBlock:
    """Sum of two squared functionals: one on odd slots, one (weighted) on even slots."""

    jk: tuple[int, int]
    form: QuadraticForm


@dataclass(frozen=True)
class PositivityVerdict:
    positive: bool
    prefactors: Optional[tuple[float, float, float]]
    witness: Optional[np.ndarray]
    method: str
    min_eigenvalue: Optional[float] = None


def _require_non_degenerate(f: FrequencyTriple) -> None:
    if f.is_degenerate():
        raise DegenerateFrequencies(
            f"positive-block machinery needs pairwise distinct frequencies, got {f.omegas}"
        )


def _pair_data(j: int, k: int, f: FrequencyTriple):
    """(product, sum, remaining square) for the pair of squared frequencies."""
    if j == k or not {j, k} <= {1, 2, 3}:
        raise ValueError(f"block indices must be two distinct labels from 1..3, got ({j},{k})")
    sq = f.squares
    i = ({1, 2, 3} - {j, k}).pop()
    return sq[j - 1] * sq[k - 1], sq[j - 1] + sq[k - 1], sq[i - 1]


def positive_block(j: int, k: int, f: FrequencyTriple) -> PositiveBlock:
    """Block B_jk = [q5t + (wj^2+wk^2) q3t + wj^2 wk^2 qd]^2 + wi^2 [even mirror]^2.

    Indices refer to the descending-sorted triple.  The stored form matrix
    absorbs the factor 2 so that the 1/2-convention evaluation returns the
    full sum of squares.
    """
    prod, ssum, wi2 = _pair_data(j, k, f)
    u = np.zeros(DIM)
    u[1], u[3], u[5] = prod, ssum, 1.0
    v = np.zeros(DIM)
    v[0], v[2], v[4] = prod, ssum, 1.0
    A = 2.0 * (np.outer(u, u) + wi2 * np.outer(v, v))
    return PositiveBlock(jk=(min(j, k), max(j, k)), form=QuadraticForm(A))


def block_symmetry_action(i: int, j: int, k: int, f: FrequencyTriple) -> float:
    """Scalar by which generator X_i rescales block B_jk.

    X1..X3 annihilate every block, X4 fixes it, X5 scales by wj^2 wk^2 and
    X6 by wj^4 wk^4.
    """
    prod, _, _ = _pair_data(j, k, f)
    if i in (1, 2, 3):
        return 0.0
    if i == 4:
        return 1.0
    if i == 5:
        return prod
    if i == 6:
        return prod * prod
    raise ValueError(f"generator index must be 1..6, got {i}")


def hamiltonian_n_blocks(n: int, f: FrequencyTriple) -> QuadraticForm:
    """H_n expanded over the positive blocks (strictly non-degenerate only)."""
    if n < 1:
        raise ValueError(f"the hierarchy starts at n = 1, got {n}")
    _require_non_degenerate(f)
    sq = f.squares
    A = np.zeros((DIM, DIM))
    for (j, k) in _PAIRS:
        i = ({1, 2, 3} - {j, k}).pop()
        prod = sq[j - 1] * sq[k - 1]
        coeff = prod ** (n - 1) / (2.0 * (sq[i - 1] - sq[j - 1]) * (sq[i - 1] - sq[k - 1]))
        A = A + coeff * positive_block(j, k, f).form.matrix
    return QuadraticForm(A)


def hbar_prefactors(c4: float, c5: float, c6: float, f: FrequencyTriple) -> np.ndarray:
    """Block weights of Hbar = c4 H1 + c5 H2 + c6 H3, in pair order (1,2), (1,3), (2,3).

    The weights satisfy sum_jk prefactor_jk * B_jk = Hbar as forms; each one
    is (c4 + c5 m + c6 m^2) / (2 (wj^2-wi^2)(wk^2-wi^2)) with m the pair
    product of squared frequencies.
    """
    _require_non_degenerate(f)
    sq = f.squares
    out = []
    for (j, k) in _PAIRS:
        i = ({1, 2, 3} - {j, k}).pop()
        m = sq[j - 1] * sq[k - 1]
        num = c4 + c5 * m + c6 * m * m
        out.append(num / (2.0 * (sq[j - 1] - sq[i - 1]) * (sq[k - 1] - sq[i - 1])))
    return np.array(out)


def tensor_weight_polynomials(c1: float, c2: float, c3: float, f: FrequencyTriple) -> np.ndarray:
    """P_jk = c3 + c2 m + c1 m^2 at the three pair products, order (1,2), (1,3), (2,3).

    The sign of the block prefactor equals sign(P_jk) / sign of the pair
    denominator, so for a descending triple positivity reads
    P_12 > 0, P_13 < 0, P_23 > 0: an upward parabola in m that dips negative
    exactly at the middle pair product.  No triple with c1, c2 or c3 zero can
    realise that sign pattern.
    """
    _require_non_degenerate(f)
    sq = f.squares
    return np.array(
        [c3 + c2 * (sq[j - 1] * sq[k - 1]) + c1 * (sq[j - 1] * sq[k - 1]) ** 2 for (j, k) in _PAIRS]
    )


def eigenvalue_split(form: QuadraticForm, rel_tol: float = 1e-10):
    """(min eigenvalue, its eigenvector, spectral norm) of a form matrix."""
    vals, vecs = np.linalg.eigh(form.matrix)
    norm = float(np.abs(vals).max())
    idx = int(np.argmin(vals))
    return float(vals[idx]), vecs[:, idx], norm


def positivity_verdict(
    c: CombinationCoeffs, f: FrequencyTriple, method: str = "prefactor"
) -> PositivityVerdict:
    """Decide definiteness of the combined Hamiltonian.

    ``prefactor``: positive iff all three block weights exceed zero (exact by
    Sylvester's law away from the boundary).  ``eigenvalue``: positive iff
    the smallest eigenvalue exceeds 1e-10 times the spectral norm; a
    non-positive direction is returned as witness.
    """
    if method == "prefactor":
        _require_non_degenerate(f)
        poly = tensor_weight_polynomials(*c.poisson_weights, f)
        scale = max(1e-300, float(np.abs(poly).max()))
        if np.abs(poly).min() < 1e-14 * scale:
            raise SingularCombination(
                f"tensor-weight polynomial vanishes for {c.poisson_weights}: {poly}"
            )
        pref = hbar_prefactors(c.c4, c.c5, c.c6, f)
        return PositivityVerdict(
            positive=bool(np.all(pref > 0.0)),
            prefactors=tuple(pref),
            witness=None,
            method="prefactor",
        )
    if method == "eigenvalue":
        p = params_from_frequencies(f)
        form = combined_form(c, p)
        lam, vec, norm = eigenvalue_split(form)
        positive = lam > 1e-10 * norm
        witness = vec if (not positive and lam <= 0.0) else None
        pref = None
        if not f.is_degenerate():
            pref = tuple(hbar_prefactors(c.c4, c.c5, c.c6, f))
        return PositivityVerdict(
            positive=bool(positive),
            prefactors=pref,
            witness=witness,
            method="eigenvalue",
            min_eigenvalue=lam,
        )
    raise ValueError(f"method must be 'prefactor' or 'eigenvalue', got {method!r}")


# ---------------------------------------------------------------------------
# region scanning over tensor-weight space
# ---------------------------------------------------------------------------

_AXIS_NAMES = ("c1", "c2", "c3")


@dataclass(frozen=True)
class AxisSpec:
    name: str
    lo: float
    hi: float
    n: int


@dataclass(frozen=True)
class GridSpec:
    """Two scanned tensor weights plus the fixed third one."""

    axis1: AxisSpec
    axis2: AxisSpec
    fixed_name: str
    fixed_value: float

    def __post_init__(self):
        names = {self.axis1.name, self.axis2.name, self.fixed_name}
        if names != set(_AXIS_NAMES):
            raise ConfigError(f"grid axes must cover c1, c2, c3 exactly once, got {names}")
        for ax in (self.axis1, self.axis2):
            if ax.n < 1 or not (ax.lo <= ax.hi):
                raise ConfigError(f"bad axis {ax}")

    @staticmethod
    def from_json(obj: dict) -> "GridSpec":
        try:
            a1, a2, fx = obj["axis1"], obj["axis2"], obj["fixed"]
            return GridSpec(
                axis1=AxisSpec(a1["name"], float(a1["min"]), float(a1["max"]), int(a1["n"])),
                axis2=AxisSpec(a2["name"], float(a2["min"]), float(a2["max"]), int(a2["n"])),
                fixed_name=fx["name"],
                fixed_value=float(fx["value"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed grid spec: {exc}") from exc


@dataclass(frozen=True)
class CellVerdict:
    c_x: float
    c_y: float
    verdict: str  # positive | not_positive | singular | error:<name>
    min_eigenvalue: float
    prefactors: tuple[float, float, float]
    methods_disagree: bool = False


@dataclass
class RegionScanResult:
    grid: GridSpec
    frequencies: FrequencyTriple
    cells: list[CellVerdict] = field(default_factory=list)

    @property
    def disagreements(self) -> list[CellVerdict]:
        return [c for c in self.cells if c.methods_disagree]

    def positive_count(self) -> int:
        return sum(1 for c in self.cells if c.verdict == "positive")

    def write_csv(self, stream) -> None:
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(
            ["c_x", "c_y", "verdict", "min_eigenvalue", "prefactor_1", "prefactor_2", "prefactor_3"]
        )
        for c in self.cells:
            w.writerow(
                [f"{c.c_x:.17g}", f"{c.c_y:.17g}", c.verdict, f"{c.min_eigenvalue:.17g}"]
                + [f"{v:.17g}" for v in c.prefactors]
            )


def _axis_values(ax: AxisSpec) -> np.ndarray:
    if ax.n == 1:
        return np.array([0.5 * (ax.lo + ax.hi)])
    return np.linspace(ax.lo, ax.hi, ax.n)


def region_scan(grid: GridSpec, f: FrequencyTriple) -> RegionScanResult:
    """Evaluate both positivity routes on every grid cell.

    Cells are visited in row-major axis1-outer order; per-cell failures are
    recorded as a cell status instead of aborting the scan.  Disagreements
    between the two routes are recorded and expected only inside the
    boundary band where a prefactor crosses zero.
    """
    _require_non_degenerate(f)
    p = params_from_frequencies(f)
    result = RegionScanResult(grid=grid, frequencies=f)
    nan3 = (math.nan, math.nan, math.nan)
    for x in _axis_values(grid.axis1):
        for y in _axis_values(grid.axis2):
            weights = {grid.axis1.name: float(x), grid.axis2.name: float(y),
                       grid.fixed_name: grid.fixed_value}
            c1, c2, c3 = (weights[n] for n in _AXIS_NAMES)
            try:
                coeffs = coeffs_from_tensor(c1, c2, c3, p)
                by_pref = positivity_verdict(coeffs, f, method="prefactor")
                by_eig = positivity_verdict(coeffs, f, method="eigenvalue")
            except SingularCombination:
                result.cells.append(CellVerdict(x, y, "singular", math.nan, nan3))
                continue
            except Exception as exc:  # per-cell status, never abort the scan
                result.cells.append(
                    CellVerdict(x, y, f"error:{type(exc).__name__}", math.nan, nan3)
                )
                continue
            verdict = "positive" if by_pref.positive else "not_positive"
            result.cells.append(
                CellVerdict(
                    c_x=float(x),
                    c_y=float(y),
                    verdict=verdict,
                    min_eigenvalue=by_eig.min_eigenvalue,
                    prefactors=by_pref.prefactors,
                    methods_disagree=(by_pref.positive != by_eig.positive),
                )
            )
    return result


def grid_spec_from_json_text(text: str) -> GridSpec:
    try:
        return GridSpec.from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"grid spec is not valid JSON: {exc}") from exc
