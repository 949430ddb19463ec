"""The infinite family H_n of conserved Hamiltonians and combined flows.

Three independent routes produce the same H_n:

* ladder route: the first row of M^(n-1) applied to (H1, H2, H3), where M is
  the 3x3 matrix of the X5 action on the Hamiltonian triple;
* closed-form route: frequency-polynomial coefficients from diagonalising M
  (refused near degeneracy, where the denominators collapse);
* recursion route: A_{n+1} = J2^{-1} J1 A_n, inverting one constant tensor.

Linear combinations Jbar = c1 J1 + c2 J2 + c3 J3 and Hbar = c4 H1 + c5 H2 +
c6 H3 reproduce the original flow exactly when the coefficient triples are
dual to each other; both directions of that duality are provided.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DIM,
    FrequencyTriple,
    PUParams,
    QuadraticForm,
    flow_operator,
    frequencies_from_params,
    hamiltonian_form,
    poisson_tensor,
)
from .errors import DegenerateFrequencies, SingularCombination


@dataclass(frozen=True)
class CombinationCoeffs:
    """Weights of a combined tensor (c1..c3) and combined Hamiltonian (c4..c6)."""

    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float

    @property
    def poisson_weights(self) -> tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)

    @property
    def hamiltonian_weights(self) -> tuple[float, float, float]:
        return (self.c4, self.c5, self.c6)


@dataclass(frozen=True)
class HierarchyMatrix:
    """Ladder matrix M with its eigenvector matrix U and eigenvalue matrix D."""

    m: np.ndarray
    u: np.ndarray
    d: np.ndarray


def hierarchy_matrix(p: PUParams) -> HierarchyMatrix:
    """M acting on (H1,H2,H3) by the scaling symmetry, with M = U D U^-1.

    D carries the pairwise products of squared frequencies in the order
    (w1^2 w2^2, w1^2 w3^2, w2^2 w3^2) for the descending-sorted triple.
    """
    f = frequencies_from_params(p)
    if f.is_degenerate():
        raise DegenerateFrequencies(
            f"eigen-decomposition of the ladder matrix is ill-conditioned at {f.omegas}"
        )
    a, b, c = f.squares
    m = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [p.gamma ** 2, -p.alpha * p.gamma, p.beta]])
    u = np.array(
        [
            [1.0 / (a * b) ** 2, 1.0 / (a * c) ** 2, 1.0 / (b * c) ** 2],
            [1.0 / (a * b), 1.0 / (a * c), 1.0 / (b * c)],
            [1.0, 1.0, 1.0],
        ]
    )
    d = np.diag([a * b, a * c, b * c])
    return HierarchyMatrix(m=m, u=u, d=d)


def hierarchy_coefficients(n: int, p: PUParams) -> np.ndarray:
    """Weights (k1,k2,k3) with H_n = k1 H1 + k2 H2 + k3 H3, via the ladder matrix."""
    if n < 1:
        raise ValueError(f"the hierarchy starts at n = 1, got {n}")
    m = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [p.gamma ** 2, -p.alpha * p.gamma, p.beta]])
    return np.linalg.matrix_power(m, n - 1)[0]


def _closed_coefficients(n: int, f: FrequencyTriple) -> np.ndarray:
    """Frequency-polynomial weights of (H1,H2,H3) in H_n.

    The exponent bookkeeping is anchored so that n = 1, 2, 3 reproduce
    H1, H2, H3 identically (equivalently, the weights equal the first row of
    M^(n-1)); negative powers at small n are harmless for positive
    frequencies.
    """
    a, b, c = f.squares
    m = n - 2
    d13 = (a - c) * (b - c)
    d12 = (a - b) * (a - c)
    d21 = (b - a) * (b - c)
    k1 = (
        c * c * (a * b) ** (m + 1) / d13
        + a * a * (b * c) ** (m + 1) / d12
        + b * b * (a * c) ** (m + 1) / d21
    )
    k2 = (
        b * (a + c) * (a * c) ** m / ((a - b) * (b - c))
        - c * (a + b) * (a * b) ** m / d13
        - a * (b + c) * (b * c) ** m / d12
    )
    k3 = (a * b) ** m / d13 + (b * c) ** m / d12 - (a * c) ** m / ((a - b) * (b - c))
    return np.array([k1, k2, k3])


def hamiltonian_n_closed(n: int, p: PUParams) -> QuadraticForm:
    """H_n from the closed-form frequency coefficients (non-degenerate only)."""
    if n < 1:
        raise ValueError(f"the hierarchy starts at n = 1, got {n}")
    f = frequencies_from_params(p)
    if f.is_degenerate():
        raise DegenerateFrequencies(
            f"closed-form coefficients have vanishing denominators at {f.omegas}"
        )
    k = _closed_coefficients(n, f)
    A = sum(k[i] * hamiltonian_form(i + 1, p).matrix for i in range(3))
    return QuadraticForm(A)


def hamiltonian_n_recursive(n: int, p: PUParams, check_tol: float = 1e-8) -> QuadraticForm:
    """H_n by iterating A_{k+1} = J2^{-1} J1 A_k from A_1.

    Each step checks that J2 A_{k+1} = J1 A_k holds and that the
    pre-symmetrisation matrix is already symmetric (relative to its own
    scale); a violation would mean the recursion structure is broken, not
    just rounded.
    """
    if n < 1:
        raise ValueError(f"the hierarchy starts at n = 1, got {n}")
    p.require_gamma()
    j1 = poisson_tensor(1, p).matrix
    j2 = poisson_tensor(2, p).matrix
    j2inv = np.linalg.inv(j2)
    A = hamiltonian_form(1, p).matrix
    for _ in range(n - 1):
        nxt = j2inv @ (j1 @ A)
        scale = max(1.0, np.abs(nxt).max())
        asym = np.abs(nxt - nxt.T).max()
        if asym > check_tol * scale:
            raise ArithmeticError(
                f"recursion produced a non-symmetric form (asymmetry {asym:.3e}, scale {scale:.3e})"
            )
        nxt = 0.5 * (nxt + nxt.T)
        resid = np.abs(j2 @ nxt - j1 @ A).max()
        if resid > check_tol * max(1.0, np.abs(j1 @ A).max()):
            raise ArithmeticError(f"recursion residual {resid:.3e} exceeds tolerance")
        A = nxt
    return QuadraticForm(A)


def _pair_products(p: PUParams) -> np.ndarray:
    """Pairwise products of squared frequencies, as roots of m^3 - beta m^2 + alpha gamma m - gamma^2."""
    comp = np.array(
        [[0.0, 0.0, p.gamma ** 2], [1.0, 0.0, -p.alpha * p.gamma], [0.0, 1.0, p.beta]]
    )
    return np.linalg.eigvals(comp)


def coeffs_dual(c4: float, c5: float, c6: float, p: PUParams) -> CombinationCoeffs:
    """Tensor weights (c1,c2,c3) dual to given Hamiltonian weights (c4,c5,c6).

    The combined flow of the result equals the original flow F.  The common
    denominator is the product of c6 m^2 + c5 m + c4 over the three pairwise
    products m of squared frequencies; a vanishing factor means the chosen
    Hamiltonian combination is degenerate for that mode pair.
    """
    p.require_gamma()
    al, be, ga = p.alpha, p.beta, p.gamma
    delta = (
        al ** 2 * c4 * c6 ** 2 * ga ** 2
        + al * be * c4 * c5 * c6 * ga
        - 2.0 * al * c4 ** 2 * c6 * ga
        + al * c4 * c5 ** 2 * ga
        + al * c5 * c6 ** 2 * ga ** 3
        + be ** 2 * c4 ** 2 * c6
        + be * c4 ** 2 * c5
        - 2.0 * be * c4 * c6 ** 2 * ga ** 2
        + be * c5 ** 2 * c6 * ga ** 2
        + c4 ** 3
        - 3.0 * c4 * c5 * c6 * ga ** 2
        + c5 ** 3 * ga ** 2
        + c6 ** 3 * ga ** 4
    )
    factors = np.array([c6 * m * m + c5 * m + c4 for m in _pair_products(p)])
    scale = max(abs(c4), abs(c5), abs(c6), float(np.abs(factors).max()))
    if np.abs(factors).min() < 1e-12 * max(scale, 1e-300):
        raise SingularCombination(
            f"denominator factor vanishes for (c4,c5,c6)=({c4},{c5},{c6}): factors {factors}"
        )
    n1 = c4 ** 2 - al * ga * c4 * c6 - ga ** 2 * c5 * c6
    n2 = al * ga * c4 * c5 + ga * (al * be - ga) * c4 * c6 + ga ** 2 * c5 ** 2 + be * ga ** 2 * c5 * c6
    n3 = ga ** 4 * c6 ** 2 - be * ga ** 2 * c4 * c6 - ga ** 2 * c4 * c5
    return CombinationCoeffs(n1 / delta, n2 / delta, n3 / delta, c4, c5, c6)


def coeffs_from_tensor(c1: float, c2: float, c3: float, p: PUParams) -> CombinationCoeffs:
    """Hamiltonian weights (c4,c5,c6) dual to given tensor weights (c1,c2,c3).

    Solves the 3x3 linear system requiring Jbar grad(Hbar) = F s; raises when
    the chosen tensor combination cannot reproduce the flow.
    """
    p.require_gamma()
    jbar = sum(
        c * poisson_tensor(k, p).matrix for k, c in ((1, c1), (2, c2), (3, c3))
    )
    cols = np.stack(
        [(jbar @ hamiltonian_form(k, p).matrix).ravel() for k in (1, 2, 3)], axis=1
    )
    F = flow_operator(p)
    sol, _, rank, _ = np.linalg.lstsq(cols, F.ravel(), rcond=None)
    resid = np.abs(cols @ sol - F.ravel()).max()
    if rank < 3 or resid > 1e-8 * max(1.0, np.abs(F).max()):
        raise SingularCombination(
            f"tensor weights ({c1},{c2},{c3}) cannot reproduce the flow (residual {resid:.3e})"
        )
    return CombinationCoeffs(c1, c2, c3, sol[0], sol[1], sol[2])


def combined_form(c: CombinationCoeffs, p: PUParams) -> QuadraticForm:
    """The combined Hamiltonian c4 H1 + c5 H2 + c6 H3 as a form."""
    A = sum(w * hamiltonian_form(k + 1, p).matrix for k, w in enumerate(c.hamiltonian_weights))
    return QuadraticForm(A)


def combined_flow(c: CombinationCoeffs, p: PUParams) -> np.ndarray:
    """Jbar Abar: the flow generated by the combined tensor and Hamiltonian."""
    p.require_gamma()
    jbar = np.zeros((DIM, DIM))
    for k, w in enumerate(c.poisson_weights):
        jbar += w * poisson_tensor(k + 1, p).matrix
    return jbar @ combined_form(c, p).matrix


def flow_expansion_coefficients(c: CombinationCoeffs, p: PUParams) -> np.ndarray:
    """Weights (e1,e2,e3) with Jbar grad(Hbar) = e1 X1 + e2 X2 + e3 X3.

    The combined flow reproduces the original one exactly when
    (e1, e2, e3) = (1, 0, 0).
    """
    p.require_gamma()
    al, be, ga = p.alpha, p.beta, p.gamma
    c1, c2, c3 = c.poisson_weights
    c4, c5, c6 = c.hamiltonian_weights
    e1 = (
        (al * al - be) / ga ** 2 * c3 * c4
        + al / ga * (c2 * c4 + c3 * c5)
        + c1 * c4
        + c2 * c5
        + c3 * c6
    )
    e2 = -(al / ga ** 2 * c3 * c4 + (c2 * c4 + c3 * c5) / ga + ga * c1 * c6)
    e3 = c3 * c4 / ga ** 2 + be * c6 * c1 + c5 * c1 + c2 * c6
    return np.array([e1, e2, e3])
