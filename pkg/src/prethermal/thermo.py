"""Heat-exchange fluctuation functionals and entropy-production dynamics.

Entropy production is indexed per projector pair (i, f): with a degenerate
Hamiltonian, aggregating over the energy difference would merge distinct
trajectories and break the antisymmetry bookkeeping.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import dagger, vec
from .measurement import JointDistribution, MeasurementBasis, dephase, mean_energy_change
from .model import apply_propagator

# Probabilities at or below this are structural zeros, not small numbers.
PROBABILITY_FLOOR = 1e-300


@dataclass(frozen=True)
class EntropyPairTable:
    """Sigma_if = ln[p(i,f)/p(f,i)] with masks for undefined/divergent entries.

    finite_mask marks entries where both probabilities are above the floor;
    infinite_mask marks forward-supported entries whose reverse has none
    (Sigma = +inf there).  Masked entries carry sigma = 0.
    """

    sigma: np.ndarray
    finite_mask: np.ndarray
    infinite_mask: np.ndarray


def pairwise_entropy(dist: JointDistribution) -> EntropyPairTable:
    p = dist.p
    forward = p > PROBABILITY_FLOOR
    backward = forward.T
    finite = forward & backward
    infinite = forward & ~backward
    sigma = np.zeros_like(p)
    sigma[finite] = np.log(p[finite]) - np.log(p.T[finite])
    return EntropyPairTable(sigma=sigma, finite_mask=finite, infinite_mask=infinite)


def average_entropy(dist: JointDistribution) -> float:
    """<Sigma> = sum p(i,f) Sigma_if over defined pairs.

    A divergent pair carrying weight above 1e-12 makes the average +inf;
    this is reported with a warning rather than dropped.
    """
    table = pairwise_entropy(dist)
    divergent_weight = float(dist.p[table.infinite_mask].sum())
    if divergent_weight > 1e-12:
        warnings.warn(
            f"average entropy diverges: weight {divergent_weight:.3e} on pairs "
            "with empty reverse support",
            stacklevel=2,
        )
        return math.inf
    return float(np.sum(dist.p[table.finite_mask] * table.sigma[table.finite_mask]))


def classical_xft(dist: JointDistribution, delta_beta: float) -> float:
    """Standard exchange-fluctuation-theorem value Delta_beta * <dE>."""
    return delta_beta * mean_energy_change(dist)


def gamma_correction(rho_ss: np.ndarray, basis: MeasurementBasis, beta: float) -> np.ndarray:
    """Gamma_if = ln[exp(beta dE_if) * Tr[rho_ss Pi_f] / Tr[rho_ss Pi_i]].

    rho_ss is the state reached at the measurement time; when it is the
    Gibbs state at beta the table vanishes identically.
    """
    pops = basis.populations(rho_ss)
    if np.any(pops <= 0.0):
        raise ValueError(f"steady-state population vanishes: {pops}")
    e = basis.energies
    de = e[np.newaxis, :] - e[:, np.newaxis]
    log_pops = np.log(pops)
    return beta * de + log_pops[np.newaxis, :] - log_pops[:, np.newaxis]


def reverse_normalization_defect(rho0: np.ndarray, liouvillian: np.ndarray, t: float,
                                 basis: MeasurementBasis) -> float:
    """|sum_{f,i} p_rev(f,i) - 1| for the reverse two-point process.

    Recipe: dephase the evolved state, run each projected outcome through
    the Hilbert-Schmidt adjoint of Phi_t (the observable-picture map) and
    read out in the same basis,

        p_rev(f, i) = Tr[Pi_i Phi_t^dag(Pi_f rho_tilde Pi_f) Pi_i].

    The adjoint of a trace-preserving map is unital but conserves trace
    only for unital forward maps, so the defect vanishes exactly in the
    unital limit and measures non-unitality otherwise.
    """
    from .model import propagator  # local import to avoid cycle at module load

    phi = propagator(liouvillian, t)
    rho_tilde = dephase(apply_propagator(phi, rho0), basis)
    phi_adj = dagger(phi)
    total = 0.0
    for proj_f in basis.projectors:
        back = apply_propagator(phi_adj, proj_f @ rho_tilde @ proj_f)
        for proj_i in basis.projectors:
            total += float(np.real(np.trace(proj_i @ back @ proj_i)))
    return abs(total - 1.0)


@dataclass(frozen=True)
class EntropySeries:
    """Trajectory-averaged entropy production and its rate on a time grid."""

    times: np.ndarray
    avg_sigma: dict
    rate: dict


def entropy_rate(times: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """d<Sigma>/dt by central differences (one-sided at the endpoints)."""
    times = np.asarray(times, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if times.size < 3:
        raise ValueError(f"need at least 3 time points, got {times.size}")
    if np.any(np.diff(times) <= 0):
        raise ValueError("time grid must be strictly increasing")
    return np.gradient(sigma, times)


def entropy_series(times: np.ndarray, sigma_by_protocol: dict) -> EntropySeries:
    """Bundle <Sigma>(t) per protocol with finite-difference rates."""
    rates = {name: entropy_rate(times, vals) for name, vals in sigma_by_protocol.items()}
    return EntropySeries(times=np.asarray(times, dtype=float),
                         avg_sigma=dict(sigma_by_protocol), rate=rates)
