"""Mappings of the sixth-order model onto three coupled second-order systems.

A linear projection x_i = mu0 q + mu2 q'' + mu4 q'''' (odd-derivative terms
are forced to vanish) turns the sixth-order equation into three second-order
equations a_i x_i'' + b_i x_i + couplings = 0.  Four named solution families
are built here:

* Ta2 - three decoupled oscillators, one frequency each (all couplings zero);
* Ta1 - all three equations oscillator-equivalent, couplings on;
* Tb1 - two oscillator-equivalent equations, the third an identity;
* Tc1 - one oscillator-equivalent equation, the other two identities.

Each family exists only where its radicands are real; branch signs are
explicit free choices, never silently picked.  Builders validate themselves
through the defining equations (see equivalence_check), and the transformed
Hamiltonian is obtained by pulling the 3D phase-space energy back to the
6-dimensional state and decomposing it over (H1, H2, H3).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    DIM,
    PUParams,
    QuadraticForm,
    flow_operator,
    frequencies_from_params,
    hamiltonian_form,
)
from .errors import (
    ComplexBranch,
    DegenerateFrequencies,
    EquivalenceFailure,
    InvalidPermutation,
    ZeroDenominator,
    ZeroKinetic,
)

KINDS = ("Ta1", "Ta2", "Tb1", "Tc1")

_PATTERNS = {
    "Ta1": ("PU", "PU", "PU"),
    "Ta2": ("PU", "PU", "PU"),
    "Tb1": ("PU", "PU", "trivial"),
    "Tc1": ("PU", "trivial", "trivial"),
}


@dataclass(frozen=True)
class Rep3DParams:
    """Kinetic, potential and coupling coefficients of the 3D Lagrangian."""

    a: tuple[float, float, float]
    b: tuple[float, float, float]
    g: tuple[float, float, float]  # (g1, g2, g3) coupling xy, xz, yz


@dataclass(frozen=True)
class StateProjection:
    """3x6 projection onto (x, y, z); only even-derivative columns are nonzero."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (3, DIM):
            raise ValueError(f"projection must be 3x6, got {m.shape}")
        if np.any(m[:, 1::2] != 0.0):
            raise ValueError("odd-derivative columns of a projection must vanish")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @staticmethod
    def from_rows(rows) -> "StateProjection":
        """Rows are (mu0, mu2, mu4) coefficient triples on (q, q'', q'''')."""
        m = np.zeros((3, DIM))
        for r, (c0, c2, c4) in enumerate(rows):
            m[r, 0], m[r, 2], m[r, 4] = c0, c2, c4
        return StateProjection(m)


@dataclass(frozen=True)
class Representation:
    kind: str
    params3d: Rep3DParams
    projection: StateProjection
    free_choices: dict = field(default_factory=dict)
    auxiliary: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "free_choices": self.free_choices,
            "a": list(self.params3d.a),
            "b": list(self.params3d.b),
            "g": list(self.params3d.g),
            "projection_rows": [
                [self.projection.matrix[r, 0], self.projection.matrix[r, 2],
                 self.projection.matrix[r, 4]]
                for r in range(3)
            ],
            "auxiliary": {k: v for k, v in self.auxiliary.items()},
        }


@dataclass(frozen=True)
class EquivalenceReport:
    pattern: tuple[str, str, str]
    structural_residuals: tuple[float, float, float]
    trajectory_residuals: Optional[tuple[float, float, float]] = None


def _build_ta2(p: PUParams, choices: dict) -> Representation:
    f = frequencies_from_params(p)
    if f.is_degenerate():
        raise DegenerateFrequencies(
            f"the decoupled family needs three distinct frequencies, got {f.omegas}"
        )
    a = tuple(float(v) for v in choices.get("a", (1.0, 1.0, 1.0)))
    # default permutations pair each row with the two frequencies it does not own
    perms = choices.get("perms", ((2, 3, 1), (1, 3, 2), (1, 2, 3)))
    perms = tuple(tuple(int(v) for v in row) for row in perms)
    owns = []
    for row in perms:
        if sorted(row) != [1, 2, 3]:
            raise InvalidPermutation(f"row indices {row} are not a permutation of (1,2,3)")
        owns.append(row[2])
    if sorted(owns) != [1, 2, 3]:
        raise InvalidPermutation(
            f"owned indices {tuple(owns)} must cover 1..3 so the three equations "
            "carry the three distinct frequencies"
        )
    if any(v == 0.0 for v in a):
        raise ZeroKinetic(f"kinetic coefficients must be nonzero, got {a}")
    sq = f.squares
    rows, b = [], []
    for ax, (i, j, k) in zip(a, perms):
        rows.append((sq[i - 1] * sq[j - 1] / ax, (sq[i - 1] + sq[j - 1]) / ax, 1.0 / ax))
        b.append(ax * sq[k - 1])
    return Representation(
        kind="Ta2",
        params3d=Rep3DParams(a=a, b=tuple(b), g=(0.0, 0.0, 0.0)),
        projection=StateProjection.from_rows(rows),
        free_choices={"a": list(a), "perms": [list(r) for r in perms]},
        auxiliary={"omegas": list(f.omegas)},
    )


def ta1_radicand(p: PUParams) -> float:
    al, be, ga = p.alpha, p.beta, p.gamma
    return (
        2.0 * al ** 3 * (9.0 * be + 4.0)
        - al ** 2 * (3.0 * be * (9.0 * be + 10.0) + 18.0 * ga + 8.0)
        + 2.0 * al * (be * (9.0 * be + 27.0 * ga + 8.0) + 12.0 * ga + 2.0)
        - 3.0 * al ** 4
        - 3.0 * (be + 3.0 * ga) ** 2
        - 4.0 * be
        - 8.0 * ga
        - 1.0
    )


def _build_ta1(p: PUParams, choices: dict) -> Representation:
    branch = int(choices.get("branch", +1))
    R = ta1_radicand(p)
    if R < 0.0:
        raise ComplexBranch(f"fully coupled family has negative radicand {R:.6g} at {p}")
    al, be, ga = p.alpha, p.beta, p.gamma
    rho1 = branch * 0.5 * math.sqrt(R)
    rho2 = al - al * al + 3.0 * al * be - 3.0 * ga
    g1 = 0.5 * (rho2 - 1.0 + al - be) - rho1
    g2 = 0.5 + be - rho2
    g3 = 0.5 * (rho2 - 1.0 + al - be) + rho1
    mu0 = 0.5 * (1.0 - rho2 - al + 3.0 * be) + rho1
    tau0 = 0.5 * (1.0 - rho2 - al + 3.0 * be) - rho1
    bx = 0.5 * (rho2 + al - be) + rho1
    by = be - rho2
    bz = 0.5 * (rho2 + al - be) - rho1
    return Representation(
        kind="Ta1",
        params3d=Rep3DParams(a=(1.0, 1.0, 1.0), b=(bx, by, bz), g=(g1, g2, g3)),
        projection=StateProjection.from_rows(
            [(mu0, 0.0, 1.0), (rho2, 1.0, 1.0), (tau0, 0.0, 1.0)]
        ),
        free_choices={"branch": branch},
        auxiliary={"rho1": rho1, "rho2": rho2, "radicand": R},
    )


def _build_tb1(p: PUParams, choices: dict) -> Representation:
    al, be, ga = p.alpha, p.beta, p.gamma
    if al == 0.0:
        raise ZeroDenominator("the scale tau2 = (1 +/- sqrt(...))/(2 alpha) needs alpha != 0")
    tau_branch = int(choices.get("tau2_branch", +1))
    g3_branch = int(choices.get("g3_branch", +1))
    rad1 = 1.0 + 8.0 * al * (-al * be + ga)
    if rad1 < 0.0:
        raise ComplexBranch(
            f"two-equation family needs 1 + 8 alpha (gamma - alpha beta) >= 0, got {rad1:.6g}"
        )
    tau2 = (1.0 + tau_branch * math.sqrt(rad1)) / (2.0 * al)
    if tau2 == 0.0:
        raise ZeroDenominator("tau2 = 0 leaves the coupling g3 undefined")
    rad2 = -2.0 * tau2 ** 2 - 2.0 * be * tau2 ** 4 - tau2 ** 6
    if rad2 < 0.0:
        raise ComplexBranch(
            f"two-equation family needs -2 tau2^2 - 2 beta tau2^4 - tau2^6 >= 0, got {rad2:.6g}"
        )
    g3 = (-tau2 ** 3 + g3_branch * math.sqrt(rad2)) / (2.0 * tau2 ** 2)
    g2 = -g3 - tau2
    g1 = (al * tau2 - 1.0) / (2.0 * tau2)
    mu0 = be + tau2 * (g3 + tau2)
    nu0 = be - g3 * tau2
    bx = (1.0 + al * tau2) / (2.0 * tau2)
    bz = tau2 * (be + 2.0 * g3 ** 2 + 2.0 * g3 * tau2 + tau2 ** 2)
    return Representation(
        kind="Tb1",
        params3d=Rep3DParams(a=(1.0, 1.0, 1.0), b=(bx, bx, bz), g=(g1, g2, g3)),
        projection=StateProjection.from_rows(
            [(mu0, 0.0, 1.0), (nu0, 0.0, 1.0), (1.0, tau2, 0.0)]
        ),
        free_choices={"tau2_branch": tau_branch, "g3_branch": g3_branch},
        auxiliary={"tau2": tau2, "radicand_tau2": rad1, "radicand_g3": rad2},
    )


def tc1_radicand(p: PUParams, mu0: float, nu0: float, tau0: float) -> float:
    """Radicand of the coupling solve; negative means the family does not exist here."""
    k1 = nu0 * nu0 + tau0 * tau0
    mu2 = -(k1 - p.beta * mu0 + mu0 * mu0) / p.gamma
    w = p.gamma - p.alpha * mu0 + mu0 * mu2
    v = mu0 + (p.alpha - mu2) * mu2 - p.beta
    return v * k1 - w * w


def _build_tc1(p: PUParams, choices: dict) -> Representation:
    p.require_gamma()
    mu0 = float(choices.get("mu0", 1.0))
    nu0 = float(choices.get("nu0", 1.0))
    tau0 = float(choices.get("tau0", 1.0))
    branch = int(choices.get("branch", +1))
    if mu0 == 0.0 or nu0 == 0.0 or tau0 == 0.0:
        raise ZeroDenominator(f"mu0, nu0, tau0 must all be nonzero, got {(mu0, nu0, tau0)}")
    al, be, ga = p.alpha, p.beta, p.gamma
    k1 = nu0 * nu0 + tau0 * tau0
    # the identity requirements on rows y and z force mu2, then put (g1, g2)
    # on a line (the oscillator q-condition) intersected with a circle (the
    # oscillator q''-condition); g3 follows linearly.
    mu2 = -(k1 - be * mu0 + mu0 * mu0) / ga
    w = ga - al * mu0 + mu0 * mu2  # g1 nu0 + g2 tau0
    v = mu0 + (al - mu2) * mu2 - be  # g1^2 + g2^2
    rad = v * k1 - w * w
    if rad < 0.0:
        raise ComplexBranch(
            f"single-equation family has negative radicand {rad:.6g} "
            f"at {p} with (mu0,nu0,tau0)=({mu0},{nu0},{tau0})"
        )
    s = branch * math.sqrt(rad) / k1
    g1 = w * nu0 / k1 - s * tau0
    g2 = w * tau0 / k1 + s * nu0
    den = g1 * tau0 - g2 * nu0
    if abs(den) < 1e-12 * max(1.0, abs(g1 * tau0), abs(g2 * nu0)):
        raise ZeroDenominator(
            f"g1 tau0 - g2 nu0 = {den:.3e} vanishes; g3 is undetermined for these choices"
        )
    g3 = -((nu0 * nu0 - tau0 * tau0) + mu0 * (g1 * g1 - g2 * g2) + mu2 * (g1 * nu0 - g2 * tau0)) / (
        2.0 * den
    )
    bx = al - mu2
    by = -(g1 * mu0 + g3 * tau0) / nu0
    bz = -(g2 * mu0 + g3 * nu0) / tau0
    return Representation(
        kind="Tc1",
        params3d=Rep3DParams(a=(1.0, 1.0, 1.0), b=(bx, by, bz), g=(g1, g2, g3)),
        projection=StateProjection.from_rows(
            [(mu0, mu2, 1.0), (nu0, -g1, 0.0), (tau0, -g2, 0.0)]
        ),
        free_choices={"mu0": mu0, "nu0": nu0, "tau0": tau0, "branch": branch},
        auxiliary={
            "kappa1": k1,
            "kappa2": k1 + mu0 * mu0,
            "mu2": mu2,
            "radicand": rad,
        },
    )


_BUILDERS = {"Ta1": _build_ta1, "Ta2": _build_ta2, "Tb1": _build_tb1, "Tc1": _build_tc1}


def build_representation(kind: str, p: PUParams, free_choices: Optional[dict] = None) -> Representation:
    """Construct one of the named families at the given model parameters."""
    if kind not in _BUILDERS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    return _BUILDERS[kind](p, dict(free_choices or {}))


def project_state(r: Representation, p: PUParams, s) -> tuple[np.ndarray, np.ndarray]:
    """Positions (x,y,z) = T s and velocities T F s along the flow."""
    sv = np.asarray(s, dtype=float)
    T = r.projection.matrix
    return T @ sv, T @ (flow_operator(p) @ sv)


def second_order_residual(r: Representation, x, y, z, xdd, ydd, zdd) -> np.ndarray:
    """Residuals of the three coupled second-order equations of motion.

    Scalar arguments give three residuals; equal-length arrays give a
    (3, n) residual array.
    """
    a, b, g = r.params3d.a, r.params3d.b, r.params3d.g
    pos = np.asarray([x, y, z], dtype=float)
    acc = np.asarray([xdd, ydd, zdd], dtype=float)
    G = np.array([[0.0, g[0], g[1]], [g[0], 0.0, g[2]], [g[1], g[2], 0.0]])
    return (acc.T * np.asarray(a)).T + (pos.T * np.asarray(b)).T + G @ pos


def _equation_weight_vectors(r: Representation, p: PUParams) -> np.ndarray:
    """Per equation, the coefficients of (q, q'', q'''', q'''''') after substitution.

    Substituting the projection into equation i and collecting derivatives of
    the arbitrary function q leaves a 4-vector w_i; the equation is
    oscillator-equivalent iff w_i = lambda (gamma, beta, alpha, 1) with
    lambda != 0, and trivially vanishing iff w_i = 0 identically.
    """
    a, b, g = r.params3d.a, r.params3d.b, r.params3d.g
    rows = [
        (r.projection.matrix[i, 0], r.projection.matrix[i, 2], r.projection.matrix[i, 4])
        for i in range(3)
    ]
    G = np.array([[0.0, g[0], g[1]], [g[0], 0.0, g[2]], [g[1], g[2], 0.0]])
    W = np.zeros((3, 4))
    for i in range(3):
        mu0, mu2, mu4 = rows[i]
        # x_i'' = mu0 q'' + mu2 q'''' + mu4 q''''''
        W[i, 1] += a[i] * mu0
        W[i, 2] += a[i] * mu2
        W[i, 3] += a[i] * mu4
        W[i, 0] += b[i] * mu0
        W[i, 1] += b[i] * mu2
        W[i, 2] += b[i] * mu4
        for j in range(3):
            if j == i:
                continue
            n0, n2, n4 = rows[j]
            W[i, 0] += G[i, j] * n0
            W[i, 1] += G[i, j] * n2
            W[i, 2] += G[i, j] * n4
    return W


def equivalence_check(
    r: Representation,
    p: PUParams,
    trajectory=None,
    tol: float = 1e-9,
    traj_tol: float = 1e-7,
) -> EquivalenceReport:
    """Classify each second-order equation and verify the family's pattern.

    Classification is a matrix identity on the weight vectors (so "trivially
    vanishing" means the zero functional, not merely small along one orbit);
    when a trajectory is supplied, the residuals along it are verified as
    well.  A mismatch with the family's declared pattern raises.
    """
    W = _equation_weight_vectors(r, p)
    target = np.array([p.gamma, p.beta, p.alpha, 1.0])
    pattern, resids = [], []
    for i in range(3):
        w = W[i]
        scale = max(1.0, float(np.abs(w).max()))
        if np.abs(w).max() <= tol * scale:
            pattern.append("trivial")
            resids.append(float(np.abs(w).max()))
            continue
        lam = w[3]
        mismatch = float(np.abs(w - lam * target).max())
        if abs(lam) > tol * scale and mismatch <= tol * max(scale, float(np.abs(lam * target).max())):
            pattern.append("PU")
            resids.append(mismatch)
        else:
            raise EquivalenceFailure(i, mismatch)
    expected = _PATTERNS[r.kind]
    if tuple(pattern) != expected:
        worst = int(np.argmax([0 if a == b else 1 for a, b in zip(pattern, expected)]))
        raise EquivalenceFailure(
            worst,
            resids[worst],
            f"pattern {tuple(pattern)} does not match the declared {expected} for {r.kind}",
        )
    traj_resids = None
    if trajectory is not None:
        F = flow_operator(p)
        T = r.projection.matrix
        states = np.asarray(trajectory.states, dtype=float)
        pos = states @ T.T
        acc = states @ (T @ F @ F).T
        res = second_order_residual(
            r, pos[:, 0], pos[:, 1], pos[:, 2], acc[:, 0], acc[:, 1], acc[:, 2]
        )
        res = np.atleast_2d(np.abs(res))
        scale = max(1.0, float(np.abs(pos).max()), float(np.abs(acc).max()))
        traj_resids = tuple(float(res[i].max()) for i in range(3))
        worst = int(np.argmax(traj_resids))
        if traj_resids[worst] > traj_tol * scale:
            raise EquivalenceFailure(worst, traj_resids[worst], "trajectory residual too large")
    return EquivalenceReport(tuple(pattern), tuple(resids), traj_resids)


def legendre_hamiltonian(r: Representation) -> QuadraticForm:
    """3D phase-space energy as a form on (x, y, z, p_x, p_y, p_z).

    H = sum p_i^2 / (2 a_i) + sum b_i x_i^2 / 2 + g1 xy + g2 xz + g3 yz.
    """
    a, b, g = r.params3d.a, r.params3d.b, r.params3d.g
    if any(v == 0.0 for v in a):
        raise ZeroKinetic(f"Legendre transform undefined for kinetic coefficients {a}")
    A = np.zeros((DIM, DIM))
    for i in range(3):
        A[3 + i, 3 + i] = 1.0 / a[i]
        A[i, i] = b[i]
    A[0, 1] = A[1, 0] = g[0]
    A[0, 2] = A[2, 0] = g[1]
    A[1, 2] = A[2, 1] = g[2]
    return QuadraticForm(A)


def phase_space_map(r: Representation, p: PUParams) -> np.ndarray:
    """6x6 map s -> (x, y, z, p_x, p_y, p_z) with p_i = a_i * (d x_i / dt)."""
    T = r.projection.matrix
    vel = T @ flow_operator(p)
    return np.vstack([T, np.diag(r.params3d.a) @ vel])


def transformed_coefficients(
    kind: str, p: PUParams, free_choices: Optional[dict] = None
) -> tuple[float, float, float]:
    """Weights (c4,c5,c6) with the pulled-back 3D energy equal to c4 H1 + c5 H2 + c6 H3.

    The pullback of the phase-space form through the projection/velocity map
    always lands in the span of (H1, H2, H3) for a valid family; the
    decomposition residual is checked, so a transcription error in a builder
    cannot silently produce wrong weights.
    """
    r = build_representation(kind, p, free_choices)
    S = phase_space_map(r, p)
    A6 = S.T @ legendre_hamiltonian(r).matrix @ S
    cols = np.stack([hamiltonian_form(k, p).matrix.ravel() for k in (1, 2, 3)], axis=1)
    sol, _, _, _ = np.linalg.lstsq(cols, A6.ravel(), rcond=None)
    resid = np.abs(cols @ sol - A6.ravel()).max()
    if resid > 1e-8 * max(1.0, np.abs(A6).max()):
        raise EquivalenceFailure(
            -1, float(resid), f"pulled-back energy of {kind} is not a combination of H1..H3"
        )
    return (float(sol[0]), float(sol[1]), float(sol[2]))


def representation_positivity(kind: str, p: PUParams, free_choices: Optional[dict] = None):
    """Definiteness verdict for the family's transformed Hamiltonian.

    Uses the eigenvalue route on the combined form directly, so it also works
    outside the oscillatory parameter regime (where no real frequencies, and
    hence no block prefactors, exist).
    """
    from .errors import ComplexFrequencies
    from .positivity import PositivityVerdict, eigenvalue_split, hbar_prefactors

    c4, c5, c6 = transformed_coefficients(kind, p, free_choices)
    A = sum(w * hamiltonian_form(k, p).matrix for k, w in ((1, c4), (2, c5), (3, c6)))
    lam, vec, norm = eigenvalue_split(QuadraticForm(A))
    positive = lam > 1e-10 * norm
    pref = None
    try:
        f = frequencies_from_params(p)
        if not f.is_degenerate():
            pref = tuple(hbar_prefactors(c4, c5, c6, f))
    except ComplexFrequencies:
        pref = None
    return PositivityVerdict(
        positive=bool(positive),
        prefactors=pref,
        witness=vec if (not positive and lam <= 0.0) else None,
        method="eigenvalue",
        min_eigenvalue=lam,
    )
