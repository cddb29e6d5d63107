"""Initial-state constructors and density-matrix validation.

All states are plain 4x4 complex ndarrays on the computational product
basis (|00>, |01>, |10>, |11>), with sigma_z|0> = +|0>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .linalg import I4, PAULI, dagger, hermiticity_defect, kron

# DensityMatrix invariant tolerances (hermiticity, trace, positivity).
STATE_ATOL = 1e-10

KET = {
    "00": np.array([1, 0, 0, 0], dtype=complex),
    "01": np.array([0, 1, 0, 0], dtype=complex),
    "10": np.array([0, 0, 1, 0], dtype=complex),
    "11": np.array([0, 0, 0, 1], dtype=complex),
}

BELL_KINDS = ("phi_plus", "phi_minus", "psi_plus", "psi_minus")


@dataclass(frozen=True)
class StateReport:
    """Worst invariant violations of a candidate density matrix."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    @property
    def ok(self) -> bool:
        return (
            self.hermiticity_defect <= STATE_ATOL
            and self.trace_defect <= STATE_ATOL
            and self.min_eigenvalue >= -STATE_ATOL
        )


def validate(rho: np.ndarray) -> StateReport:
    """Re-check all density-matrix invariants; reporting only, never raises."""
    rho = np.asarray(rho, dtype=complex)
    herm = hermiticity_defect(rho)
    trace = abs(complex(np.trace(rho)) - 1.0)
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (rho + dagger(rho)))))
    return StateReport(herm, trace, min_eig)


def check_state(rho: np.ndarray, context: str = "state") -> np.ndarray:
    """Raise NumericalError unless rho satisfies the density-matrix invariants."""
    report = validate(rho)
    if not report.ok:
        raise NumericalError(
            f"{context} violates density-matrix invariants: "
            f"hermiticity defect {report.hermiticity_defect:.3e}, "
            f"trace defect {report.trace_defect:.3e}, "
            f"min eigenvalue {report.min_eigenvalue:.3e}"
        )
    return rho


def bell_state(kind: str) -> np.ndarray:
    """Projector onto a Bell state: (|00> +- |11>)/sqrt2 or (|01> +- |10>)/sqrt2."""
    try:
        a, b, sign = {
            "phi_plus": ("00", "11", 1.0),
            "phi_minus": ("00", "11", -1.0),
            "psi_plus": ("01", "10", 1.0),
            "psi_minus": ("01", "10", -1.0),
        }[kind]
    except KeyError:
        raise ValueError(f"unknown Bell state {kind!r}, expected one of {BELL_KINDS}") from None
    ket = (KET[a] + sign * KET[b]) / np.sqrt(2.0)
    return np.outer(ket, ket.conj())


def mms_with_coherence(chi: np.ndarray) -> np.ndarray:
    """Maximally mixed state plus a traceless Hermitian coherence block chi."""
    chi = np.asarray(chi, dtype=complex)
    if chi.shape != (4, 4):
        raise ValueError(f"chi must be 4x4, got {chi.shape}")
    if hermiticity_defect(chi) > 1e-12:
        raise ValueError("chi must be Hermitian")
    if abs(complex(np.trace(chi))) > 1e-12:
        raise ValueError("chi must be traceless")
    rho = 0.25 * I4 + chi
    min_eig = float(np.min(np.linalg.eigvalsh(rho)))
    if min_eig < -STATE_ATOL:
        raise ValueError(f"1/4 + chi is not positive semidefinite (min eigenvalue {min_eig:.3e})")
    return check_state(rho, "mms_with_coherence")


def pauli_product_coherence(c1: float, p1: str, c2: float, p2: str) -> np.ndarray:
    """Coherence block (c1*sigma_p1) (x) (c2*sigma_p2)."""
    for p in (p1, p2):
        if p not in ("x", "y", "z"):
            raise ValueError(f"pauli label must be x, y or z, got {p!r}")
    return (c1 * c2) * kron(PAULI[p1], PAULI[p2])


@dataclass(frozen=True)
class CoherenceBlock:
    """Local off-diagonal amplitudes a_j = r_j * exp(i*theta_j) of the two qubits."""

    a1: complex
    a2: complex

    @classmethod
    def from_polar(cls, r1: float, theta1: float = 0.0, r2: float | None = None,
                   theta2: float = 0.0) -> "CoherenceBlock":
        if r2 is None:
            r2 = r1
        return cls(r1 * np.exp(1j * theta1), r2 * np.exp(1j * theta2))


def thermal_coherent_product(beta_s: float, coherence: CoherenceBlock,
                             omega0: float = 1.0) -> np.ndarray:
    """Product of local thermal qubits at inverse temperature beta_s with
    local coherences a_j on the off-diagonal.

    The local partition function is Z = 2*cosh(beta_s*omega0/2); positivity
    requires |a_j| < 1/Z (strict, to keep entropy logarithms finite).
    """
    z = 2.0 * np.cosh(0.5 * beta_s * omega0)
    locals_ = []
    for a in (coherence.a1, coherence.a2):
        if abs(a) >= 1.0 / z:
            raise ValueError(
                f"coherence amplitude |a|={abs(a):.6g} violates positivity bound 1/Z={1.0 / z:.6g}"
            )
        thermal = np.diag([np.exp(-0.5 * beta_s * omega0), np.exp(0.5 * beta_s * omega0)]) / z
        locals_.append(thermal + np.array([[0, a], [np.conj(a), 0]], dtype=complex))
    return check_state(kron(locals_[0], locals_[1]), "thermal_coherent_product")


def random_density_matrix(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    """Random full-rank state from a Ginibre matrix, G G^dag / Tr."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ dagger(g)
    return rho / np.trace(rho)
