"""Exact mode solutions, RK4 integration, drift measurement and interactions.

Exact solutions are mode decompositions over six basis functions t^k sin/cos,
with the basis chosen by degeneracy class; all time derivatives are evaluated
analytically (product/chain rule), never by finite differences, so that the
flow-residual invariant isolates formula errors.

The interacting field adds a potential gradient -W'(s[slot]) to the last
component of the linear flow; its pointwise Jacobian and the induced bracket
residual Jac.J + J.Jac^T quantify where the multi-Hamiltonian structure
survives an interaction (only the first tensor, and only for W of the
position itself).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import (
    DIM,
    Degeneracy,
    FrequencyTriple,
    PoissonTensor,
    PUParams,
    QuadraticForm,
    as_state,
    flow_operator,
    params_from_frequencies,
)
from .errors import NonFinite, SingularModeMatrix


# ---------------------------------------------------------------------------
# exact solutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Mode:
    """Basis function t^power * trig(omega t), trig in {sin, cos}."""

    power: int
    omega: float
    trig: str  # "sin" | "cos"

    def derivative(self, t: float | np.ndarray, order: int) -> np.ndarray:
        """Analytic d^order/dt^order of the mode, via the product rule.

        d^m/dt^m trig(w t) = w^m trig(w t + m pi/2) keeps the trigonometric
        bookkeeping in a single phase shift.
        """
        t = np.asarray(t, dtype=float)
        base = 0.0 if self.trig == "sin" else 0.5 * math.pi
        total = np.zeros_like(t)
        for r in range(min(order, self.power) + 1):
            fall = math.perm(self.power, r)  # falling factorial k(k-1)...(k-r+1)
            binom = math.comb(order, r)
            phase = base + (order - r) * 0.5 * math.pi
            total = total + (
                binom * fall * t ** (self.power - r) * self.omega ** (order - r)
                * np.sin(self.omega * t + phase)
            )
        return total


def _mode_basis(f: FrequencyTriple) -> list[_Mode]:
    w1, w2, w3 = f.omegas
    if f.degeneracy is Degeneracy.NON_DEGENERATE:
        return [
            _Mode(0, w1, "sin"), _Mode(0, w1, "cos"),
            _Mode(0, w2, "sin"), _Mode(0, w2, "cos"),
            _Mode(0, w3, "sin"), _Mode(0, w3, "cos"),
        ]
    if f.degeneracy is Degeneracy.FULLY_DEGENERATE:
        w = (w1 + w2 + w3) / 3.0
        return [
            _Mode(0, w, "sin"), _Mode(0, w, "cos"),
            _Mode(1, w, "sin"), _Mode(1, w, "cos"),
            _Mode(2, w, "sin"), _Mode(2, w, "cos"),
        ]
    # partially degenerate: the repeated pair carries the t-modes
    sq = f.squares
    if sq[0] - sq[1] <= f.tol:
        wrep, wdist = 0.5 * (w1 + w2), w3
    else:
        wrep, wdist = 0.5 * (w2 + w3), w1
    return [
        _Mode(0, wrep, "sin"), _Mode(0, wrep, "cos"),
        _Mode(1, wrep, "sin"), _Mode(1, wrep, "cos"),
        _Mode(0, wdist, "sin"), _Mode(0, wdist, "cos"),
    ]


@dataclass(frozen=True)
class ExactSolution:
    """Mode decomposition matching an initial state at t = 0."""

    frequencies: FrequencyTriple
    modes: tuple[_Mode, ...]
    coefficients: np.ndarray

    def state(self, t: float) -> np.ndarray:
        return self.states(np.array([t]))[0]

    def states(self, times) -> np.ndarray:
        """State vectors (derivative orders 0..5) at the given times."""
        ts = np.asarray(times, dtype=float)
        out = np.zeros((ts.size, DIM))
        for order in range(DIM):
            acc = np.zeros_like(ts)
            for cf, mode in zip(self.coefficients, self.modes):
                if cf != 0.0:
                    acc = acc + cf * mode.derivative(ts, order)
            out[:, order] = acc
        return out

    def sixth_derivative(self, times) -> np.ndarray:
        ts = np.asarray(times, dtype=float)
        acc = np.zeros_like(ts)
        for cf, mode in zip(self.coefficients, self.modes):
            if cf != 0.0:
                acc = acc + cf * mode.derivative(ts, DIM)
        return acc

    def flow_residual(self, times, p: Optional[PUParams] = None) -> float:
        """max over times of ||ds/dt - F s|| / max(||s||), all derivatives analytic."""
        p = p or params_from_frequencies(self.frequencies)
        F = flow_operator(p)
        s = self.states(times)
        sdot = np.column_stack([s[:, 1:], self.sixth_derivative(times)])
        num = np.abs(sdot - s @ F.T).max()
        return float(num / max(np.abs(s).max(), 1e-300))


def solve_exact(f: FrequencyTriple, initial) -> ExactSolution:
    """Coefficients of the degeneracy-matched mode basis fitting the initial state."""
    s0 = as_state(initial)
    modes = _mode_basis(f)
    M = np.zeros((DIM, DIM))
    for col, mode in enumerate(modes):
        for order in range(DIM):
            M[order, col] = float(mode.derivative(0.0, order))
    try:
        coeffs = np.linalg.solve(M, s0)
    except np.linalg.LinAlgError as exc:
        raise SingularModeMatrix(
            f"mode matrix singular for {f}; degeneracy likely misclassified"
        ) from exc
    resid = np.abs(M @ coeffs - s0).max()
    if resid > 1e-9 * max(1.0, np.abs(s0).max()):
        raise SingularModeMatrix(f"mode matching residual {resid:.3e} too large for {f}")
    return ExactSolution(frequencies=f, modes=tuple(modes), coefficients=coeffs)


def divergent_mode_present(sol: ExactSolution, rel_tol: float = 1e-9) -> bool:
    """True when any t- or t^2-multiplied mode carries a nonzero coefficient."""
    scale = max(1e-300, float(np.abs(sol.coefficients).max()))
    return any(
        m.power > 0 and abs(c) > rel_tol * scale
        for m, c in zip(sol.modes, sol.coefficients)
    )


# ---------------------------------------------------------------------------
# interactions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InteractionSpec:
    """Polynomial potential W applied to one derivative slot of the state.

    ``coefficients`` are ascending powers (c0 + c1 x + c2 x^2 + ...); the
    quartic helper builds lam/4 x^4.  Degree below 3 merely shifts the linear
    model and is rejected.
    """

    coefficients: tuple[float, ...]
    variable: int = 0

    def __post_init__(self):
        cs = tuple(float(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", cs)
        degree = max((i for i, c in enumerate(cs) if c != 0.0), default=0)
        if degree < 3:
            raise ValueError(
                f"a genuine interaction needs polynomial degree >= 3, got degree {degree}"
            )
        if not 0 <= self.variable < DIM:
            raise ValueError(f"variable slot must be 0..5, got {self.variable}")

    @staticmethod
    def quartic(lam: float = 1.0, variable: int = 0) -> "InteractionSpec":
        return InteractionSpec(coefficients=(0.0, 0.0, 0.0, 0.0, lam / 4.0), variable=variable)

    def w(self, x: float) -> float:
        return sum(c * x ** i for i, c in enumerate(self.coefficients))

    def w1(self, x: float) -> float:
        return sum(i * c * x ** (i - 1) for i, c in enumerate(self.coefficients) if i >= 1)

    def w2(self, x: float) -> float:
        return sum(i * (i - 1) * c * x ** (i - 2) for i, c in enumerate(self.coefficients) if i >= 2)


def interaction_field(p: PUParams, w: Optional[InteractionSpec]):
    """Right-hand side of ds/dt; the potential gradient enters the last slot."""
    F = flow_operator(p)
    if w is None:
        return lambda s: F @ s
    slot = w.variable

    def field(s):
        out = F @ s
        out[DIM - 1] -= w.w1(s[slot])
        return out

    return field


def interaction_field_jacobian(p: PUParams, w: InteractionSpec, s) -> np.ndarray:
    """Pointwise Jacobian of the interacting field: F minus W'' in the last row."""
    sv = as_state(s)
    J = flow_operator(p)
    J[DIM - 1, w.variable] -= w.w2(sv[w.variable])
    return J


def lie_derivative_residual(jac: np.ndarray, j: PoissonTensor) -> np.ndarray:
    """Jac J + J Jac^T; zero iff the field is a bracket-preserving flow at this point."""
    return jac @ j.matrix + j.matrix @ jac.T


# ---------------------------------------------------------------------------
# trajectories
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    method: str  # "exact" | "rk4"

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        s = np.asarray(self.states, dtype=float)
        if np.any(np.diff(t) <= 0.0):
            raise ValueError("trajectory times must be strictly increasing")
        if s.shape != (t.size, DIM):
            raise ValueError(f"states must be (n_times, 6), got {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("trajectory states must be finite")
        t.flags.writeable = False
        s.flags.writeable = False
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", s)


def integrate_rk4(
    p: PUParams,
    initial,
    t_end: float,
    dt: float,
    interaction: Optional[InteractionSpec] = None,
) -> Trajectory:
    """Classical fixed-step fourth-order integration of the (possibly interacting) flow.

    Deterministic for identical inputs; overflow raises instead of clamping,
    since divergent degenerate modes and unstable interactions are physical
    outcomes to report.
    """
    if dt <= 0.0 or t_end <= 0.0:
        raise ValueError(f"need dt > 0 and t_end > 0, got dt={dt}, t_end={t_end}")
    field = interaction_field(p, interaction)
    n_steps = int(round(t_end / dt))
    times = np.empty(n_steps + 1)
    states = np.empty((n_steps + 1, DIM))
    s = as_state(initial)
    times[0] = 0.0
    states[0] = s
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(n_steps):
            k1 = field(s)
            k2 = field(s + 0.5 * dt * k1)
            k3 = field(s + 0.5 * dt * k2)
            k4 = field(s + dt * k3)
            s = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(s)):
                cause = "interaction term" if interaction is not None else "divergent degenerate mode"
                raise NonFinite(f"state overflowed at t={times[k] + dt:.6g} ({cause})")
            times[k + 1] = (k + 1) * dt
            states[k + 1] = s
    return Trajectory(times=times, states=states, method="rk4")


def exact_trajectory(sol: ExactSolution, t_end: float, dt: float) -> Trajectory:
    n_steps = int(round(t_end / dt))
    times = np.arange(n_steps + 1) * dt
    return Trajectory(times=times, states=sol.states(times), method="exact")


def conservation_drift(traj: Trajectory, forms: Sequence[QuadraticForm]) -> np.ndarray:
    """Per form, max_t |H(s(t)) - H(s(0))| / max(|H(s(0))|, floor)."""
    out = []
    for h in forms:
        vals = 0.5 * np.einsum("ti,ij,tj->t", traj.states, h.matrix, traj.states)
        out.append(float(np.abs(vals - vals[0]).max() / max(abs(vals[0]), 1e-300)))
    return np.array(out)


def trajectory_csv(traj: Trajectory, p: PUParams, stream) -> None:
    """Write t, the six state slots, and the three conserved values per row."""
    from .core import hamiltonian_form

    forms = [hamiltonian_form(k, p) for k in (1, 2, 3)]
    stream.write("t,q,qdot,qddot,q3t,q4t,q5t,H1,H2,H3\n")
    hvals = [
        0.5 * np.einsum("ti,ij,tj->t", traj.states, h.matrix, traj.states) for h in forms
    ]
    for i, t in enumerate(traj.times):
        cells = [f"{t:.17g}"] + [f"{v:.17g}" for v in traj.states[i]]
        cells += [f"{h[i]:.17g}" for h in hvals]
        stream.write(",".join(cells) + "\n")
