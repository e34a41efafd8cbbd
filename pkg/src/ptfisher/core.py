"""Complex 2x2 linear algebra and state bookkeeping for a dissipative qubit.

Basis convention used throughout the package: index 0 = |g> (ground),
index 1 = |e> (excited). With this ordering rho[0, 0] is the ground-state
population, which relaxes toward 1, and the closed-form populations read
rho11(t) = 1 - exp(...)/2 directly off the model. SIGMA_Z is diag(1, -1)
in this ordering (+1 on the ground level); the lowering operator
SIGMA_MINUS = |g><e| maps the excited level to the ground level.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |g><e|
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)   # |e><g|
KET_G = np.array([1, 0], dtype=complex)
KET_E = np.array([0, 1], dtype=complex)

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
EIGENVALUE_TOL = 1e-10

# Classification threshold on a^2 - b^2: double-precision roundoff scale.
REGIME_EPS = 1e-12


class NumericError(Exception):
    """Base class for numerical failures with a defined cause."""


class PhysicalityError(NumericError):
    """A matrix failed the density-matrix invariants."""


class DegenerateCoefficientError(NumericError):
    """The coherence coefficient of the closed-form solution is singular."""


class NearSingularError(NumericError):
    """State too close to singular for the determinant-based formula."""


class DivergentBoundError(NumericError):
    """Precision bound undefined because the Fisher information vanishes."""


class ExceptionalPointError(NumericError):
    """Requested quantity diverges at the eigenvalue coalescence point."""


class TraceDriftError(NumericError):
    """Integrator trace drifted beyond tolerance (step size too large)."""


def mat_mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Product of two 2x2 complex matrices; rejects non-finite results."""
    out = np.asarray(x, dtype=complex) @ np.asarray(y, dtype=complex)
    if not np.all(np.isfinite(out.view(float))):
        raise NumericError("non-finite entries in matrix product")
    return out


def dagger(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


def _coshc_sinhc(mu: complex) -> tuple[complex, complex]:
    """cosh(mu) and sinh(mu)/mu, with the mu -> 0 limit handled by series."""
    if abs(mu) < 1e-4:
        mu2 = mu * mu
        return 1 + mu2 / 2 + mu2 * mu2 / 24, 1 + mu2 / 6 + mu2 * mu2 / 120
    return np.cosh(mu), np.sinh(mu) / mu


def mat_exp_2x2(m: np.ndarray) -> np.ndarray:
    """Matrix exponential of a 2x2 complex matrix, in closed form.

    Splitting m = (tr m / 2) I + m0 into scalar and traceless parts, the
    scalar commutes and m0^2 = -det(m0) I, so

        exp(m) = exp(tr m / 2) [cosh(mu) I + sinh(mu)/mu * m0],
        mu = sqrt(-det m0),

    exactly, for either branch of the square root. The mu -> 0 limit is
    evaluated by series.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise NumericError("non-finite entries in matrix exponential input")
    half_tr = 0.5 * (m[0, 0] + m[1, 1])
    m0 = m - half_tr * I2
    mu = np.sqrt(-(m0[0, 0] * m0[1, 1] - m0[0, 1] * m0[1, 0]))
    ch, shc = _coshc_sinhc(mu)
    return np.exp(half_tr) * (ch * I2 + shc * m0)


class Regime(enum.Enum):
    UNBROKEN = "unbroken"
    EXCEPTIONAL_POINT = "exceptional_point"
    BROKEN = "broken"


@dataclass(frozen=True)
class PTRegime:
    """Symmetry phase of the feedback generator a*sigma_x + i*b*sigma_z."""

    kind: Regime
    q_value: float  # sqrt(|a^2 - b^2|)

    def __str__(self) -> str:
        return f"{self.kind.value} (q={self.q_value:g})"


def classify_regime(a: float, b: float, eps: float = REGIME_EPS) -> PTRegime:
    """Classify a^2 - b^2 > eps / within eps / < -eps, with q = sqrt(|a^2-b^2|)."""
    s = a * a - b * b
    q = math.sqrt(abs(s))
    if s > eps:
        kind = Regime.UNBROKEN
    elif s < -eps:
        kind = Regime.BROKEN
    else:
        kind = Regime.EXCEPTIONAL_POINT
    return PTRegime(kind, q)


def assert_physical(mat: np.ndarray,
                    herm_tol: float = HERMITICITY_TOL,
                    trace_tol: float = TRACE_TOL,
                    eig_tol: float = EIGENVALUE_TOL) -> None:
    """Raise PhysicalityError unless mat is a valid qubit density matrix."""
    mat = np.asarray(mat, dtype=complex)
    if mat.shape != (2, 2):
        raise PhysicalityError(f"expected 2x2 matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat.view(float))):
        raise PhysicalityError("non-finite entries")
    herm_defect = np.abs(mat - mat.conj().T).max()
    if herm_defect > herm_tol:
        raise PhysicalityError(f"not Hermitian: defect {herm_defect:g}")
    trace_defect = abs(np.trace(mat) - 1.0)
    if trace_defect > trace_tol:
        raise PhysicalityError(f"trace deviates from 1 by {trace_defect:g}")
    eigs = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))
    if eigs.min() < -eig_tol:
        raise PhysicalityError(f"negative eigenvalue {eigs.min():g}")


@dataclass(frozen=True)
class DensityMatrix:
    """Validated qubit state. Use from_matrix() to construct with checks."""

    mat: np.ndarray

    @classmethod
    def from_matrix(cls, mat: np.ndarray) -> "DensityMatrix":
        mat = np.asarray(mat, dtype=complex)
        assert_physical(mat)
        out = mat.copy()
        out.setflags(write=False)
        return cls(out)

    @property
    def rho11(self) -> float:
        """Ground-state population (entry [0, 0])."""
        return float(self.mat[0, 0].real)

    @property
    def rho12(self) -> complex:
        """Upper off-diagonal <g|rho|e>."""
        return complex(self.mat[0, 1])

    @property
    def excited_population(self) -> float:
        return float(self.mat[1, 1].real)
