"""Dense complex linear algebra sized for 4x4 states and 16x16 superoperators.

Vectorization convention used project-wide: column stacking, i.e.
vec(rho) stacks the columns of rho top to bottom.  With this convention the
map rho -> A rho B has the 16x16 matrix  B^T (x) A  acting on vec(rho).
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

# Pauli matrices and identities (sigma_z|0> = +|0>).
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)   # |1> -> |0>
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |0> -> |1>
I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)

PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z, "i": I2}


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product a (x) b."""
    return np.kron(a, b)


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization of a square matrix."""
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vec` for square matrices."""
    v = np.asarray(v)
    d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise ValueError(f"vector of length {v.size} is not a vectorized square matrix")
    return v.reshape((d, d), order="F")


def spre_spost(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator matrix of the map rho -> a rho b (column stacking)."""
    return np.kron(b.T, a)


def matexp(m: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """exp(scale*m) by scaling-and-squaring (Pade core via scipy).

    Accurate to ~1e-12 relative error for ||scale*m|| <= 100; for the
    much larger ||L*t|| reached in long-time propagation the result is
    validated downstream against stationary-state oracles.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matexp needs a square matrix, got shape {m.shape}")
    return scipy.linalg.expm(scale * m)


def eig_general(m: np.ndarray) -> np.ndarray:
    """All eigenvalues (with multiplicity) of a general complex matrix.

    Uses the dense QR algorithm (LAPACK, internal iteration cap ~30n);
    convergence failure raises numpy.linalg.LinAlgError rather than
    returning garbage.  Order is unspecified; callers sort.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"eig_general needs a square matrix, got shape {m.shape}")
    return np.linalg.eigvals(m)


def eigh_vals(m: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending."""
    return np.linalg.eigvalsh(m)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Trace distance (1/2)*sum|eig(a-b)| between Hermitian unit-trace matrices."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    diff = a - b
    diff = 0.5 * (diff + dagger(diff))  # remove rounding asymmetry
    td = 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))
    return min(max(td, 0.0), 1.0)


def hermiticity_defect(m: np.ndarray) -> float:
    """max |m_ij - conj(m_ji)|."""
    return float(np.max(np.abs(m - dagger(m))))
