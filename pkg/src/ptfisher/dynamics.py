"""Time evolution of a damped qubit under direct non-Hermitian feedback.

Model: amplitude damping at rate gamma with the collapse operator dressed
by the feedback pulse U = exp(-i B dt), B = a sigma_x + i b sigma_z,

    drho/dt = -i [Omega sigma_x, rho]
              + gamma (U sigma_- rho sigma_+ U^dag
                       - {sigma_+ U^dag U sigma_-, rho} / 2).

For Omega = 0 and the initial state (|e> + |g>)/sqrt(2) the solution is
closed-form. Writing q^2 = a^2 - b^2 and

    kappa = cos(q) + (b/q) sin(q),      xi = (a/q) sin(q)

(continued as cosh/sinh of sqrt(b^2 - a^2) for a^2 < b^2, and by series at
the degeneracy a^2 = b^2 where kappa -> 1 + b, xi -> a), the populations
and coherence evolve as

    rho_ee(t) = exp(-gamma kappa^2 t) / 2
    rho_ge(t) = M exp(-gamma kappa^2 t)
                + (1/2 - M) exp(-gamma (kappa^2 + xi^2) t / 2),
    M = i kappa xi / (xi^2 - kappa^2).

kappa^2 is the feedback factor rescaling the effective decay rate; it can
exceed 1 only for b != 0. All of this is cross-checked against direct RK4
integration of the master equation in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .core import (
    SIGMA_MINUS,
    SIGMA_X,
    SIGMA_Z,
    DegenerateCoefficientError,
    DensityMatrix,
    PTRegime,
    Regime,
    TraceDriftError,
    classify_regime,
    dagger,
    mat_exp_2x2,
)

# Switch to series evaluation of kappa, xi below this |a^2 - b^2| (q < 1e-4):
# cos(q) and sin(q)/q lose relative accuracy to cancellation near q = 0.
SERIES_WINDOW = 1e-8

# |xi^2 - kappa^2| below which the coherence coefficient M is rejected.
COEFF_GUARD = 1e-9

DEFAULT_DT = 1e-4
TRACE_DRIFT_TOL = 1e-8


@dataclass(frozen=True)
class FeedbackConfig:
    """Feedback-model parameters. delta_t is the pulse duration (default 1)."""

    a: float
    b: float
    gamma: float
    omega: float = 0.0
    delta_t: float = 1.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if self.omega < 0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")
        if not self.delta_t > 0:
            raise ValueError(f"delta_t must be > 0, got {self.delta_t}")

    @property
    def regime(self) -> PTRegime:
        return classify_regime(self.a, self.b)


def _cos_sinc(s: float) -> tuple[float, float]:
    """cos(sqrt(s)) and sin(sqrt(s))/sqrt(s) as functions of s = q^2.

    Both are entire in s, so the hyperbolic continuation for s < 0 and the
    series inside SERIES_WINDOW join smoothly.
    """
    if s > SERIES_WINDOW:
        q = math.sqrt(s)
        return math.cos(q), math.sin(q) / q
    if s < -SERIES_WINDOW:
        qt = math.sqrt(-s)
        return math.cosh(qt), math.sinh(qt) / qt
    return (1.0 - s / 2.0 + s * s / 24.0,
            1.0 - s / 6.0 + s * s / 120.0)


def decay_factors(a: float, b: float) -> tuple[float, float]:
    """(kappa, xi) for the closed-form solution; see module docstring."""
    c, sc = _cos_sinc(a * a - b * b)
    return c + b * sc, a * sc


def feedback_factor(a: float, b: float) -> float:
    """kappa^2, the multiplier on the bare decay rate gamma."""
    kappa, _ = decay_factors(a, b)
    return kappa * kappa


def feedback_propagator(cfg: FeedbackConfig) -> np.ndarray:
    """U = exp(-i (a sigma_x + i b sigma_z) delta_t); not unitary for b != 0."""
    b_op = cfg.a * SIGMA_X + 1j * cfg.b * SIGMA_Z
    return mat_exp_2x2(-1j * cfg.delta_t * b_op)


def initial_superposition() -> DensityMatrix:
    """(|e> + |g>)/sqrt(2) as a density matrix."""
    return DensityMatrix.from_matrix(0.5 * np.ones((2, 2), dtype=complex))


def _coherence_coeff(kappa: float, xi: float, regime: Regime, b: float) -> complex:
    den = xi * xi - kappa * kappa
    if abs(den) < COEFF_GUARD:
        if regime is Regime.EXCEPTIONAL_POINT:
            raise DegenerateCoefficientError(
                f"coherence coefficient singular at b = {b} "
                "(kappa^2 = xi^2, i.e. 2b + 1 = 0 at the degeneracy)")
        raise DegenerateCoefficientError(
            f"coherence coefficient singular: kappa^2 = xi^2 = {kappa * kappa:g}")
    return 1j * kappa * xi / den


def rho_analytic(cfg: FeedbackConfig, t: float) -> DensityMatrix:
    """Closed-form state at time t from the initial superposition.

    Requires omega = 0 (no closed form with driving; use integrate_master)
    and t >= 0. Dispatches on the symmetry regime of (a, b): trigonometric
    factors for a^2 > b^2, the 1 + b / a limit at a^2 = b^2, hyperbolic
    factors for a^2 < b^2; all three meet continuously (see the regime
    continuity tests).
    """
    if cfg.omega != 0.0:
        raise ValueError("closed-form solution requires omega = 0")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    regime = cfg.regime
    kappa, xi = decay_factors(cfg.a, cfg.b)
    mix = _coherence_coeff(kappa, xi, regime.kind, cfg.b)
    g = cfg.gamma
    fast = math.exp(-g * kappa * kappa * t)
    slow = math.exp(-0.5 * g * (kappa * kappa + xi * xi) * t)
    ee = 0.5 * fast
    ge = mix * fast + (0.5 - mix) * slow
    mat = np.array([[1.0 - ee, ge], [ge.conjugate(), ee]], dtype=complex)
    return DensityMatrix.from_matrix(mat)


def rho_no_feedback(gamma: float, t: float) -> DensityMatrix:
    """Bare amplitude damping of the superposition state (U = identity)."""
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    ee = 0.5 * math.exp(-gamma * t)
    ge = 0.5 * math.exp(-0.5 * gamma * t)
    mat = np.array([[1.0 - ee, ge], [ge, ee]], dtype=complex)
    return DensityMatrix.from_matrix(mat)


def lindblad_rhs(rho: np.ndarray, cfg: FeedbackConfig) -> np.ndarray:
    """Right-hand side of the feedback master equation (reference form).

    Trace-free for any rho; reduces to bare amplitude damping when U = I.
    integrate_master uses an algebraically reduced kernel; agreement of the
    two forms is asserted in the tests.
    """
    rho = np.asarray(rho, dtype=complex)
    u = feedback_propagator(cfg)
    c = u @ SIGMA_MINUS
    cd = dagger(c)
    cdc = cd @ c
    out = cfg.gamma * (c @ rho @ cd - 0.5 * (cdc @ rho + rho @ cdc))
    if cfg.omega != 0.0:
        h = cfg.omega * SIGMA_X
        out = out - 1j * (h @ rho - rho @ h)
    return out


def integrate_master(cfg: FeedbackConfig, rho0: DensityMatrix | np.ndarray,
                     t_final: float, dt: float = DEFAULT_DT) -> DensityMatrix:
    """Classic RK4 integration of the master equation to t_final.

    The state is re-symmetrized after every step; if the trace drifts from
    1 by more than 1e-8 the step size is too large and TraceDriftError is
    raised. Works for omega != 0 (unlike rho_analytic).
    """
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if t_final < 0:
        raise ValueError(f"t_final must be >= 0, got {t_final}")
    mat = rho0.mat if isinstance(rho0, DensityMatrix) else np.asarray(rho0, complex)

    u = feedback_propagator(cfg)
    ug_vec = u @ np.array([1.0, 0.0], dtype=complex)   # U|g>
    p = np.outer(ug_vec, ug_vec.conj())                # U|g><g|U^dag
    ug = float(np.vdot(ug_vec, ug_vec).real)           # <g|U^dag U|g>

    n_steps = int(math.floor(t_final / dt + 1e-12))
    rem = t_final - n_steps * dt
    if rem < 1e-12 * max(1.0, t_final):
        rem = 0.0

    r00, r01, r10, r11, drift, fail_step = _backend.rk4_feedback(
        complex(p[0, 0]), complex(p[0, 1]), complex(p[1, 0]), complex(p[1, 1]),
        ug, cfg.gamma, cfg.omega,
        complex(mat[0, 0]), complex(mat[0, 1]),
        complex(mat[1, 0]), complex(mat[1, 1]),
        n_steps, dt, rem, TRACE_DRIFT_TOL)
    if fail_step >= 0:
        raise TraceDriftError(
            f"trace drifted by {drift:g} at step {fail_step} "
            f"(t ~ {fail_step * dt:g}); reduce dt")
    return DensityMatrix.from_matrix(
        np.array([[r00, r01], [r10, r11]], dtype=complex))
