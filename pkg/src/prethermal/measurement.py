"""Projective energy measurements: TPM and EPM joint statistics.

Joint tables are kept per projector pair (i, f), not aggregated over the
energy difference: the Hamiltonian is degenerate and the entropy-production
functionals index trajectories by (i, f).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .errors import NumericalError
from .linalg import I4, dagger
from .model import BathParams, apply_propagator, hamiltonian, propagator
from .states import KET, bell_state

Protocol = Literal["TPM", "EPM"]

# A joint probability may round below zero by this much; it is clipped.
NEGATIVITY_TOL = 1e-12
NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True)
class MeasurementBasis:
    """Four rank-1 projectors inside H eigenspaces with their energies."""

    projectors: tuple
    energies: np.ndarray
    label: str

    def populations(self, rho: np.ndarray) -> np.ndarray:
        """Tr[Pi_i rho] for each projector."""
        return np.array([float(np.real(np.trace(p @ rho))) for p in self.projectors])


def _projector(ket: np.ndarray) -> np.ndarray:
    return np.outer(ket, ket.conj())


def computational_basis(params: BathParams) -> MeasurementBasis:
    """|00>, |01>, |10>, |11> with energies (w0, 0, 0, -w0)."""
    w0 = params.omega0
    return MeasurementBasis(
        projectors=tuple(_projector(KET[k]) for k in ("00", "01", "10", "11")),
        energies=np.array([w0, 0.0, 0.0, -w0]),
        label="computational",
    )


def common_basis(params: BathParams) -> MeasurementBasis:
    """|00>, |psi->, |psi+>, |11> with energies (w0, 0, 0, -w0).

    The degenerate zero-energy subspace is spanned by the entangled pair
    instead of the product states; every projector still commutes with H.
    """
    w0 = params.omega0
    return MeasurementBasis(
        projectors=(
            _projector(KET["00"]),
            bell_state("psi_minus"),
            bell_state("psi_plus"),
            _projector(KET["11"]),
        ),
        energies=np.array([w0, 0.0, 0.0, -w0]),
        label="common",
    )


def dephase(rho: np.ndarray, basis: MeasurementBasis) -> np.ndarray:
    """Completely dephasing map sum_i Pi_i rho Pi_i."""
    return sum(p @ rho @ p for p in basis.projectors)


@dataclass(frozen=True)
class JointDistribution:
    """p(i, f) over initial/final projector indices for one protocol at one time."""

    p: np.ndarray
    basis: MeasurementBasis
    protocol: Protocol
    time: float

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if float(p.min()) < -NEGATIVITY_TOL:
            raise NumericalError(
                f"{self.protocol} joint probability {p.min():.3e} below -{NEGATIVITY_TOL}"
            )
        p = np.clip(p, 0.0, None)
        total = float(p.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise NumericalError(
                f"{self.protocol} distribution sums to {total!r}, expected 1"
            )
        object.__setattr__(self, "p", p)

    def marginal_initial(self) -> np.ndarray:
        return self.p.sum(axis=1)

    def marginal_final(self) -> np.ndarray:
        return self.p.sum(axis=0)

    def energy_support(self) -> dict:
        """Aggregated view p(dE); lossy under degeneracy, for display only."""
        out: dict = {}
        e = self.basis.energies
        for i in range(4):
            for f in range(4):
                de = e[f] - e[i]
                out[round(de, 12)] = out.get(round(de, 12), 0.0) + self.p[i, f]
        return out


def tpm_from_propagator(rho0: np.ndarray, phi: np.ndarray, basis: MeasurementBasis,
                        time: float) -> JointDistribution:
    """p(i,f) = Tr[Pi_f Phi(Pi_i rho0 Pi_i) Pi_f]."""
    p = np.empty((4, 4))
    for i, proj_i in enumerate(basis.projectors):
        weight = float(np.real(np.trace(proj_i @ rho0)))
        evolved = apply_propagator(phi, proj_i)
        for f, proj_f in enumerate(basis.projectors):
            p[i, f] = weight * float(np.real(np.trace(proj_f @ evolved)))
    return JointDistribution(p=p, basis=basis, protocol="TPM", time=time)


def epm_from_propagator(rho0: np.ndarray, phi: np.ndarray, basis: MeasurementBasis,
                        time: float) -> JointDistribution:
    """Product of the initial and evolved energy marginals."""
    m_in = basis.populations(rho0)
    m_out = basis.populations(apply_propagator(phi, rho0))
    return JointDistribution(p=np.outer(m_in, m_out), basis=basis, protocol="EPM", time=time)


def tpm_distribution(rho0: np.ndarray, liouvillian: np.ndarray, t: float,
                     basis: MeasurementBasis) -> JointDistribution:
    return tpm_from_propagator(rho0, propagator(liouvillian, t), basis, t)


def epm_distribution(rho0: np.ndarray, liouvillian: np.ndarray, t: float,
                     basis: MeasurementBasis) -> JointDistribution:
    return epm_from_propagator(rho0, propagator(liouvillian, t), basis, t)


def mean_energy_change(dist: JointDistribution) -> float:
    """sum_{i,f} p(i,f) (E_f - E_i)."""
    e = dist.basis.energies
    return float(np.sum(dist.p * (e[np.newaxis, :] - e[:, np.newaxis])))


class CoherentEnergy(NamedTuple):
    """The EPM-TPM mean gap evaluated two ways (they must agree)."""

    direct: float
    via_coherences: float


def coherent_energy_from_propagator(rho0: np.ndarray, phi: np.ndarray,
                                    basis: MeasurementBasis, time: float,
                                    tol: float = 1e-10) -> CoherentEnergy:
    """dE_coh = <dE>_EPM - <dE>_TPM, cross-checked against
    sum_i E_i Tr[Pi_i Phi(chi)] with chi the dephasing-removed part of rho0."""
    direct = mean_energy_change(
        epm_from_propagator(rho0, phi, basis, time)
    ) - mean_energy_change(tpm_from_propagator(rho0, phi, basis, time))
    chi = rho0 - dephase(rho0, basis)
    evolved_chi = apply_propagator(phi, chi)
    via = float(
        sum(
            e * np.real(np.trace(p @ evolved_chi))
            for e, p in zip(basis.energies, basis.projectors)
        )
    )
    if abs(direct - via) > tol:
        raise NumericalError(
            f"coherent energy difference mismatch: direct {direct!r} vs chi-route {via!r}"
        )
    return CoherentEnergy(direct=direct, via_coherences=via)


def coherent_energy_difference(rho0: np.ndarray, liouvillian: np.ndarray, t: float,
                               basis: MeasurementBasis) -> CoherentEnergy:
    return coherent_energy_from_propagator(rho0, propagator(liouvillian, t), basis, t)


def basis_sanity_checks(basis: MeasurementBasis, params: BathParams,
                        atol: float = 1e-12) -> None:
    """Completeness, orthogonality and H-compatibility of a basis (testing aid)."""
    h = hamiltonian(params)
    total = sum(basis.projectors)
    if np.max(np.abs(total - I4)) > atol:
        raise NumericalError(f"{basis.label}: projectors do not sum to identity")
    for i, pi in enumerate(basis.projectors):
        for j, pj in enumerate(basis.projectors):
            expect = pi if i == j else 0.0
            if np.max(np.abs(pi @ pj - expect)) > atol:
                raise NumericalError(f"{basis.label}: projectors {i},{j} not orthogonal")
        if np.max(np.abs(pi @ h - h @ pi)) > atol:
            raise NumericalError(f"{basis.label}: projector {i} does not commute with H")
        if np.max(np.abs(pi @ h @ pi - basis.energies[i] * pi)) > atol:
            raise NumericalError(f"{basis.label}: energy {i} inconsistent with H")
