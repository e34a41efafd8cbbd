"""Fisher information of the damping rate gamma.

Four routes are implemented and cross-checked against each other:

  * qfi_pure          -- pure-state quantum Fisher information
                         4 [<dpsi|dpsi> - |<dpsi|psi>|^2]
  * qfi_spectral      -- spectral form for mixed states,
                         sum (d lambda_k)^2 / lambda_k
                         + sum_{k != k'} 2 |<k|drho|k'>|^2 / (lambda_k + lambda_k')
                         (the eigenvector-derivative form reduced through
                         first-order perturbation theory)
  * qfi_closed_2x2    -- closed 2x2 form
                         Tr[(drho)^2] + Tr[(rho drho)^2] / Det(rho)
  * classical_fisher_projective -- Fisher information of the fixed
                         projective measurement (|e><e|, |g><g|)

Derivatives with respect to gamma are central finite differences on a
state family; step-halving stability is enforced in the tests. Units:
gamma is an inverse time, so Fisher values carry time^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import DensityMatrix, NearSingularError, assert_physical
from .dynamics import FeedbackConfig, decay_factors, rho_analytic, rho_no_feedback

DET_PURE_CUTOFF = 1e-12
SPECTRAL_TOL = 1e-12
PROB_FLOOR = 1e-14


def default_step(gamma: float) -> float:
    """Central-difference step: balances truncation against roundoff."""
    return 1e-5 * max(gamma, 1.0)


@dataclass(frozen=True)
class StateFamily:
    """A gamma- and t-dependent state rho(gamma, t) with a display label."""

    eval: Callable[[float, float], np.ndarray]
    label: str


def feedback_family(a: float, b: float) -> StateFamily:
    def _eval(gamma: float, t: float) -> np.ndarray:
        return rho_analytic(FeedbackConfig(a=a, b=b, gamma=gamma), t).mat

    return StateFamily(_eval, f"feedback a={a:g} b={b:g}")


def no_feedback_family() -> StateFamily:
    def _eval(gamma: float, t: float) -> np.ndarray:
        return rho_no_feedback(gamma, t).mat

    return StateFamily(_eval, "no feedback")


def drho_dgamma(family: StateFamily, gamma: float, t: float,
                h: float | None = None) -> np.ndarray:
    """Central difference d rho / d gamma; Hermitian and traceless output."""
    if h is None:
        h = default_step(gamma)
    if not h > 0:
        raise ValueError(f"h must be > 0, got {h}")
    if not gamma - h > 0:
        raise ValueError(f"gamma - h must stay positive (gamma={gamma}, h={h})")
    hi = np.asarray(family.eval(gamma + h, t), dtype=complex)
    lo = np.asarray(family.eval(gamma - h, t), dtype=complex)
    assert_physical(hi)
    assert_physical(lo)
    d = (hi - lo) / (2.0 * h)
    d = 0.5 * (d + d.conj().T)
    if abs(np.trace(d)) > 1e-8:
        raise NearSingularError(f"derivative trace {np.trace(d):g} not ~0")
    return d


def qfi_closed_2x2(rho: np.ndarray | DensityMatrix, drho: np.ndarray) -> float:
    """Closed 2x2 QFI: Tr[(drho)^2] + Tr[(rho drho)^2] / Det(rho).

    Requires a full-rank state; raises NearSingularError when Det(rho) is
    at or below 1e-12 (route those states through qfi_spectral instead).
    """
    mat = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, complex)
    det = float(np.linalg.det(mat).real)
    if det <= DET_PURE_CUTOFF:
        raise NearSingularError(f"Det(rho) = {det:g} <= {DET_PURE_CUTOFF:g}")
    drho = np.asarray(drho, dtype=complex)
    t1 = float(np.trace(drho @ drho).real)
    rd = mat @ drho
    t2 = float(np.trace(rd @ rd).real)
    return t1 + t2 / det


def qfi_spectral(rho: np.ndarray | DensityMatrix, drho: np.ndarray,
                 tol: float = SPECTRAL_TOL) -> float:
    """Spectral QFI from the eigendecomposition of the 2x2 state.

    Eigenvalue derivatives enter as <k|drho|k> and eigenvector derivatives
    through <k|d k'> = <k|drho|k'> / (lambda_k' - lambda_k), which reduces
    the rotation term 2 (l_k - l_k')^2/(l_k + l_k') |<k|d k'>|^2 to
    2 |<k|drho|k'>|^2 / (l_k + l_k'). Eigenvalues below tol are dropped
    from the population sum, and pairs with l_k + l_k' <= tol from the
    rotation sum (rank-1 handling).
    """
    mat = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, complex)
    drho = np.asarray(drho, dtype=complex)
    lam, vec = np.linalg.eigh(0.5 * (mat + mat.conj().T))
    d = vec.conj().T @ drho @ vec
    total = 0.0
    for k in range(2):
        if lam[k] > tol:
            total += float(d[k, k].real) ** 2 / lam[k]
    for k in range(2):
        for kk in range(2):
            if k != kk and lam[k] + lam[kk] > tol:
                total += 2.0 * abs(d[k, kk]) ** 2 / (lam[k] + lam[kk])
    return total


def qfi_pure(psi_family: Callable[[float], np.ndarray], gamma: float,
             h: float | None = None) -> float:
    """Pure-state QFI 4[<dpsi|dpsi> - |<dpsi|psi>|^2] by central difference.

    The family must return normalized vectors (checked to 1e-10); the
    expression is invariant under any smooth gamma-dependent phase.
    """
    if h is None:
        h = default_step(gamma)
    psi = np.asarray(psi_family(gamma), dtype=complex)
    hi = np.asarray(psi_family(gamma + h), dtype=complex)
    lo = np.asarray(psi_family(gamma - h), dtype=complex)
    for v in (psi, hi, lo):
        nrm = float(np.linalg.norm(v))
        if abs(nrm - 1.0) > 1e-10:
            raise ValueError(f"family not normalized: ||psi|| = {nrm!r}")
    dpsi = (hi - lo) / (2.0 * h)
    return float(4.0 * (np.vdot(dpsi, dpsi).real - abs(np.vdot(dpsi, psi)) ** 2))


@dataclass(frozen=True)
class FisherResult:
    """A Fisher value with the route that produced it."""

    value: float
    method: str  # pure | spectral | closed2x2 | classical
    gamma: float
    t: float


def qfi_of_family(family: StateFamily, gamma: float, t: float,
                  h: float | None = None) -> FisherResult:
    """QFI of rho(gamma, t): closed 2x2 form, or spectral when near-pure."""
    rho = np.asarray(family.eval(gamma, t), dtype=complex)
    drho = drho_dgamma(family, gamma, t, h)
    det = float(np.linalg.det(rho).real)
    if det > DET_PURE_CUTOFF:
        return FisherResult(qfi_closed_2x2(rho, drho), "closed2x2", gamma, t)
    return FisherResult(qfi_spectral(rho, drho), "spectral", gamma, t)


def qfi_series(family: StateFamily, gamma: float, ts: np.ndarray,
               h: float | None = None) -> np.ndarray:
    return np.array([qfi_of_family(family, gamma, t, h).value for t in ts])


def classical_fisher_projective(family: StateFamily, gamma: float, t: float,
                                h: float | None = None) -> float:
    """Fisher information of the measurement (|e><e|, |g><g|).

    f = sum_k p_k (d ln p_k / d gamma)^2 with p_e = rho[1,1], p_g = rho[0,0];
    outcomes with p_k < 1e-14 carry no weight and are excluded.
    """
    if h is None:
        h = default_step(gamma)
    rho = np.asarray(family.eval(gamma, t), dtype=complex)
    drho = drho_dgamma(family, gamma, t, h)
    total = 0.0
    for k in range(2):
        p = float(rho[k, k].real)
        dp = float(drho[k, k].real)
        if p >= PROB_FLOOR:
            total += dp * dp / p
    return total


def fisher_projective_closed(a: float, b: float, gamma: float, t: float) -> float:
    """Closed form of the projective Fisher information for the feedback model:

        f = exp(-gamma t K^2) t^2 K^4 / (2 - exp(-gamma t K^2)),

    with feedback factor K^2 = kappa(a, b)^2, valid in every regime through
    the continued kappa.
    """
    kappa, _ = decay_factors(a, b)
    k2 = kappa * kappa
    e = math.exp(-gamma * t * k2)
    return e * t * t * k2 * k2 / (2.0 - e)


GOLDEN_RATIO = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-12) -> float:
    """Argmax of a unimodal scalar function on [lo, hi]."""
    c = hi - GOLDEN_RATIO * (hi - lo)
    d = lo + GOLDEN_RATIO * (hi - lo)
    fc, fd = f(c), f(d)
    while (hi - lo) > tol * (abs(lo) + abs(hi) + 1e-300):
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN_RATIO * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN_RATIO * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class RatePeak:
    """Approximate and numerically maximized f/t over measurement time."""

    t_star: float          # tabulated approximation 1/(gamma K^2)
    rate: float            # tabulated approximation K^2/((2e - 1) gamma)
    t_star_numeric: float  # golden-section argmax of f(t)/t
    rate_numeric: float    # the maximized value


def fisher_rate_peak(a: float, b: float, gamma: float) -> RatePeak:
    """Peak of f(t)/t: the tabulated approximation next to the exact argmax.

    The approximation evaluates f/t at t = 1/(gamma K^2), giving
    K^2/((2e-1) gamma); the true argmax of u/(2 e^u - 1) sits at
    u ~ 0.768 rather than u = 1, so the two disagree by design.
    """
    k2 = feedback_factor(a, b)
    if not k2 > 0:
        raise ValueError(f"feedback factor K^2 = {k2:g} must be > 0")
    t_star = 1.0 / (gamma * k2)
    rate = k2 / ((2.0 * math.e - 1.0) * gamma)

    def rate_of(t: float) -> float:
        return fisher_projective_closed(a, b, gamma, t) / t

    t_num = golden_section_max(rate_of, t_star * 1e-3, t_star * 20.0)
    return RatePeak(t_star, rate, t_num, rate_of(t_num))


def strict_local_maxima(values: np.ndarray) -> list[int]:
    """Indices i with values[i-1] < values[i] > values[i+1]."""
    v = np.asarray(values)
    return [i for i in range(1, len(v) - 1)
            if v[i] > v[i - 1] and v[i] > v[i + 1]]


def refine_peak(f: Callable[[float], float], t_lo: float, t_hi: float) -> float:
    """Sharpen a grid-located maximum of f inside [t_lo, t_hi]."""
    return golden_section_max(f, t_lo, t_hi, tol=1e-10)
