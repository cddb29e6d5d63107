"""Two-qubit model with a spatially correlated thermal bath.

The generator is purely dissipative,

    L = sum_i L_ii + alpha * sum_{i!=j} L_ij,
    L_ij = A * Lp_ij + B * Lm_ij,
    Lp_ij(rho) = 2 s+_i rho s-_j - {s-_j s+_i, rho},

with Lm obtained from Lp by swapping s+ <-> s-.  A multiplies the
excitation channel and B the emission channel; with B > A the stationary
state at alpha < 1 is the Gibbs state at beta = ln(B/A)/omega0, which is
the sign convention pinned by the stationarity tests.  sigma_{+-} =
(sigma_x +- i sigma_y)/2 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError
from .linalg import (
    I2,
    I4,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    eig_general,
    kron,
    matexp,
    spre_spost,
    unvec,
    vec,
)
from .states import bell_state, check_state

# |Re lambda| below this counts as a null eigenvalue of L.
ZERO_EIGENVALUE_THRESHOLD = 1e-9

# Physical range of F = sum_j M_jj (singlet gives -3/4, triplet +1/4).
F_MIN, F_MAX = -0.75, 0.25


def inverse_temperature(a: float, b: float, omega0: float = 1.0) -> float:
    """Bath inverse temperature beta = (2/omega0) * atanh((B-A)/(B+A))."""
    if a + b == 0:
        raise ValueError("A + B must be nonzero")
    return (2.0 / omega0) * math.atanh((b - a) / (b + a))


@dataclass(frozen=True)
class BathParams:
    """Bath correlation rates A, B (units of omega0) and spatial correlation alpha."""

    omega0: float = 1.0
    A: float = 0.1
    B: float = 0.9
    alpha: float = 0.5

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")
        if self.A <= 0 or self.B <= 0:
            raise ValueError(f"A and B must be positive, got A={self.A}, B={self.B}")
        if self.B <= self.A:
            raise ValueError(f"B > A required (positive bath temperature), got A={self.A}, B={self.B}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")

    @property
    def beta(self) -> float:
        return inverse_temperature(self.A, self.B, self.omega0)


def hamiltonian(params: BathParams) -> np.ndarray:
    """Zeeman Hamiltonian (omega0/2)(sigma_z x 1 + 1 x sigma_z) = diag(w0, 0, 0, -w0)."""
    return 0.5 * params.omega0 * (kron(SIGMA_Z, I2) + kron(I2, SIGMA_Z))


def _dissipator(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    # rho -> 2 lhs rho rhs - {rhs lhs, rho}, vectorized (column stacking).
    anti = rhs @ lhs
    return 2.0 * spre_spost(lhs, rhs) - spre_spost(anti, I4) - spre_spost(I4, anti)


def build_liouvillian(params: BathParams) -> np.ndarray:
    """16x16 matrix of the generator acting on vec(rho)."""
    sp = [kron(SIGMA_PLUS, I2), kron(I2, SIGMA_PLUS)]
    sm = [kron(SIGMA_MINUS, I2), kron(I2, SIGMA_MINUS)]
    liou = np.zeros((16, 16), dtype=complex)
    for i in range(2):
        for j in range(2):
            weight = 1.0 if i == j else params.alpha
            liou += weight * (
                params.A * _dissipator(sp[i], sm[j]) + params.B * _dissipator(sm[i], sp[j])
            )
    return liou


_TRACE_ROW = vec(I4).conj()


def propagator(liouvillian: np.ndarray, t: float) -> np.ndarray:
    """CPTP map Phi_t = exp(L t) as a 16x16 matrix.

    vec(1)^dag is an exact left null vector of a trace-preserving L, so
    vec(1)^dag Phi_t = vec(1)^dag holds algebraically; the rank-1 correction
    below restores it exactly, removing the O(1e-10) squaring roundoff that
    scaling-and-squaring accumulates for ||L t|| ~ 1e6.
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    phi = matexp(liouvillian, t)
    drift = _TRACE_ROW @ phi - _TRACE_ROW
    if 0.0 < np.max(np.abs(drift)) <= 1e-8:
        # roundoff-level drift only; larger violations are left for the
        # state re-validation to flag (the generator itself is then wrong)
        phi = phi - 0.25 * np.outer(vec(I4), drift)
    return phi


def apply_propagator(phi: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Apply a vectorized map to a 4x4 matrix."""
    return unvec(phi @ vec(rho))


def propagate(liouvillian: np.ndarray, rho0: np.ndarray, t: float) -> np.ndarray:
    """Evolve rho0 for a time t and re-validate the result as a state."""
    out = apply_propagator(propagator(liouvillian, t), rho0)
    return check_state(out, f"propagate(t={t:g})")


class Magnetizations(tuple):
    """(M_xx, M_yy, M_zz, F) with M_jj = Tr[(sigma_j x sigma_j) rho]/4."""

    __slots__ = ()

    def __new__(cls, mxx: float, myy: float, mzz: float):
        return super().__new__(cls, (mxx, myy, mzz, mxx + myy + mzz))

    @property
    def mxx(self) -> float:
        return self[0]

    @property
    def myy(self) -> float:
        return self[1]

    @property
    def mzz(self) -> float:
        return self[2]

    @property
    def f(self) -> float:
        return self[3]


_AXIAL = {j: kron(p, p) for j, p in (("x", SIGMA_X), ("y", SIGMA_Y), ("z", SIGMA_Z))}


def magnetizations(rho: np.ndarray) -> Magnetizations:
    """Axial magnetizations and their sum F."""
    vals = [0.25 * float(np.real(np.trace(_AXIAL[j] @ rho))) for j in "xyz"]
    return Magnetizations(*vals)


def gibbs_state(params: BathParams) -> np.ndarray:
    """exp(-beta H)/Z, diagonal on the computational basis."""
    beta = params.beta
    energies = np.array([params.omega0, 0.0, 0.0, -params.omega0])
    weights = np.exp(-beta * energies)
    return np.diag(weights / weights.sum()).astype(complex)


# Coupled basis columns: |00>, |psi+>, |11> (triplet, energies w0, 0, -w0)
# and |psi-> (singlet).  Both H and sum_j sigma_j x sigma_j are diagonal here.
_SQ2 = 1.0 / np.sqrt(2.0)
_TRIPLET = np.array(
    [[1, 0, 0], [0, _SQ2, 0], [0, _SQ2, 0], [0, 0, 1]], dtype=complex
)
_TRIPLET_ENERGIES = np.array([1.0, 0.0, -1.0])  # units of omega0


def _triplet_gibbs(params: BathParams) -> np.ndarray:
    w = np.exp(-params.beta * params.omega0 * _TRIPLET_ENERGIES)
    return (_TRIPLET * (w / w.sum())) @ _TRIPLET.conj().T


@dataclass(frozen=True)
class GGEResult:
    """Generalized Gibbs steady state at alpha = 1 for a given initial state.

    ``ell`` is the Lagrange multiplier that makes exp[-beta H - (ell/4) K]
    (K = sum_j sigma_j x sigma_j) reproduce the conserved F of the initial
    state; it is the value consistent with the long-time dynamics and the
    one used to build ``state``.  ``ell_printed`` evaluates the published
    closed form, which disagrees with the dynamical value both in the
    interior (1 + cosh vs 1 + 2cosh of beta*omega0) and at the F endpoints;
    ``ell_discrepancy`` reports |ell - ell_printed|.
    """

    state: np.ndarray
    ell: float
    ell_printed: float
    f_value: float

    @property
    def ell_discrepancy(self) -> float:
        if math.isinf(self.ell) or math.isinf(self.ell_printed):
            return math.inf
        return abs(self.ell - self.ell_printed)


def ell_printed(f_value: float, params: BathParams, endpoint_tol: float = 1e-12) -> float:
    """Published branch values of the Lagrange multiplier."""
    c = math.cosh(params.beta * params.omega0)
    if abs(f_value - F_MIN) <= endpoint_tol:
        return 0.0
    if abs(f_value - F_MAX) <= endpoint_tol:
        return math.log(1.0 + c)
    return math.log((1.0 - 4.0 * f_value) / (3.0 + 4.0 * f_value) * (1.0 + c))


def ell_from_f(f_value: float, params: BathParams, endpoint_tol: float = 1e-12) -> float:
    """Multiplier matching the conserved F; +-inf at the singlet/triplet endpoints."""
    if f_value <= F_MIN + endpoint_tol:
        return math.inf
    if f_value >= F_MAX - endpoint_tol:
        return -math.inf
    triplet_sum = 1.0 + 2.0 * math.cosh(params.beta * params.omega0)
    return math.log((1.0 - 4.0 * f_value) / (3.0 + 4.0 * f_value) * triplet_sum)


def gge_state(rho0: np.ndarray, params: BathParams, f_tol: float = 1e-9) -> GGEResult:
    """Steady state of the alpha = 1 dynamics started from rho0.

    Built by exact diagonalization in the coupled (singlet/triplet) basis:
    the stationary manifold is spanned by the singlet projector and the
    Gibbs distribution restricted to the triplet, mixed so that F matches
    the initial state (singlet weight 1/4 - F).
    """
    f_value = magnetizations(rho0).f
    if f_value < F_MIN - f_tol or f_value > F_MAX + f_tol:
        raise ValueError(f"F={f_value:.6g} outside the physical range [{F_MIN}, {F_MAX}]")
    f_clipped = min(max(f_value, F_MIN), F_MAX)
    singlet_weight = 0.25 - f_clipped
    state = singlet_weight * bell_state("psi_minus") + (1.0 - singlet_weight) * _triplet_gibbs(params)
    return GGEResult(
        state=check_state(state, "gge_state"),
        ell=ell_from_f(f_clipped, params),
        ell_printed=ell_printed(f_clipped, params),
        f_value=f_value,
    )


@dataclass(frozen=True)
class ModelSpectrum:
    """Eigenvalues of L sorted by ascending |Re|, spectral gap and 1/gap."""

    eigenvalues: np.ndarray
    gap: float
    equilibration_time: float
    null_dimension: int = field(default=0)


def spectrum(liouvillian: np.ndarray) -> ModelSpectrum:
    """Sorted spectrum, null-space count and asymptotic decay rate of L."""
    eigs = eig_general(liouvillian)
    eigs = eigs[np.argsort(np.abs(eigs.real), kind="stable")]
    abs_re = np.abs(eigs.real)
    if abs_re[0] > ZERO_EIGENVALUE_THRESHOLD:
        raise NumericalError(
            f"no stationary state: smallest |Re lambda| = {abs_re[0]:.3e}"
        )
    nonzero = abs_re[abs_re > ZERO_EIGENVALUE_THRESHOLD]
    null_dim = int(len(eigs) - len(nonzero))
    gap = float(nonzero.min()) if len(nonzero) else 0.0
    teq = 1.0 / gap if gap > 0.0 else math.inf
    return ModelSpectrum(eigenvalues=eigs, gap=gap, equilibration_time=teq, null_dimension=null_dim)
