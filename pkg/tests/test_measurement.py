"""Measurement bases, TPM/EPM joint distributions and the coherent gap."""

import numpy as np
import pytest

from prethermal.errors import NumericalError
from prethermal.linalg import I4
from prethermal.measurement import (
    basis_sanity_checks,
    coherent_energy_difference,
    coherent_energy_from_propagator,
    common_basis,
    computational_basis,
    dephase,
    epm_distribution,
    epm_from_propagator,
    mean_energy_change,
    tpm_distribution,
    tpm_from_propagator,
)
from prethermal.model import BathParams, build_liouvillian, gibbs_state, propagator
from prethermal.states import (
    bell_state,
    mms_with_coherence,
    pauli_product_coherence,
    random_density_matrix,
)

PARAMS = BathParams(alpha=0.5)
PRETHERMAL = BathParams(alpha=1 - 1e-5)


@pytest.mark.parametrize("factory", [computational_basis, common_basis])
def test_basis_structure(factory):
    basis = factory(PARAMS)
    basis_sanity_checks(basis, PARAMS)
    np.testing.assert_array_equal(basis.energies, [PARAMS.omega0, 0.0, 0.0, -PARAMS.omega0])


def test_computational_ordering():
    # sigma_z|0> = |0>: the |00> projector carries E = +omega0
    basis = computational_basis(PARAMS)
    np.testing.assert_array_equal(basis.projectors[0], np.diag([1, 0, 0, 0]).astype(complex))
    assert basis.energies[0] == PARAMS.omega0


def test_common_basis_entangled_projectors():
    basis = common_basis(PARAMS)
    np.testing.assert_allclose(basis.projectors[1], bell_state("psi_minus"), atol=1e-15)
    comp = computational_basis(PARAMS)
    zero_subspace = comp.projectors[1] + comp.projectors[2]
    np.testing.assert_allclose(basis.projectors[1] + basis.projectors[2], zero_subspace,
                               atol=1e-15)


def test_dephase_diagonal_unchanged():
    basis = computational_basis(PARAMS)
    rho = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
    np.testing.assert_allclose(dephase(rho, basis), rho, atol=1e-15)


def test_dephase_bell_states():
    basis = computational_basis(PARAMS)
    np.testing.assert_allclose(dephase(bell_state("phi_plus"), basis),
                               np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
    np.testing.assert_allclose(dephase(bell_state("psi_plus"), basis),
                               np.diag([0, 0.5, 0.5, 0]), atol=1e-15)


def test_dephase_strips_coherence_block():
    basis = computational_basis(PARAMS)
    rho = mms_with_coherence(pauli_product_coherence(0.2, "x", 0.3, "x"))
    np.testing.assert_allclose(dephase(rho, basis), 0.25 * I4, atol=1e-15)


def test_tpm_zero_time_diagonal_state():
    basis = computational_basis(PARAMS)
    liou = build_liouvillian(PARAMS)
    pops = np.array([0.4, 0.3, 0.2, 0.1])
    dist = tpm_distribution(np.diag(pops).astype(complex), liou, 0.0, basis)
    np.testing.assert_allclose(dist.p, np.diag(pops), atol=1e-12)


def test_tpm_first_marginal_exact():
    rng = np.random.default_rng(3)
    basis = computational_basis(PARAMS)
    liou = build_liouvillian(PARAMS)
    rho0 = random_density_matrix(rng)
    dist = tpm_distribution(rho0, liou, 3.7, basis)
    np.testing.assert_allclose(dist.marginal_initial(), basis.populations(rho0), atol=1e-12)


def test_tpm_thermalized_rows_are_gibbs():
    basis = computational_basis(PARAMS)
    liou = build_liouvillian(PARAMS)
    rho0 = np.diag([1.0, 0, 0, 0]).astype(complex)
    dist = tpm_distribution(rho0, liou, 1e4, basis)
    np.testing.assert_allclose(dist.p[0], basis.populations(gibbs_state(PARAMS)), atol=1e-8)


def test_epm_zero_time_pure_state():
    basis = computational_basis(PARAMS)
    liou = build_liouvillian(PARAMS)
    rho0 = np.diag([1.0, 0, 0, 0]).astype(complex)
    dist = epm_distribution(rho0, liou, 0.0, basis)
    expected = np.zeros((4, 4))
    expected[0, 0] = 1.0
    np.testing.assert_allclose(dist.p, expected, atol=1e-14)


def test_epm_marginals_exact_by_construction():
    rng = np.random.default_rng(5)
    basis = computational_basis(PARAMS)
    liou = build_liouvillian(PARAMS)
    for _ in range(5):
        rho0 = random_density_matrix(rng)
        t = rng.uniform(0, 20)
        phi = propagator(liou, t)
        dist = epm_from_propagator(rho0, phi, basis, t)
        np.testing.assert_allclose(dist.marginal_initial(), basis.populations(rho0),
                                   atol=1e-13)
        from prethermal.model import apply_propagator
        np.testing.assert_allclose(dist.marginal_final(),
                                   basis.populations(apply_propagator(phi, rho0)),
                                   atol=1e-13)


def test_distributions_normalized():
    rng = np.random.default_rng(7)
    basis = computational_basis(PRETHERMAL)
    liou = build_liouvillian(PRETHERMAL)
    for _ in range(5):
        rho0 = random_density_matrix(rng)
        t = rng.uniform(0, 1e3)
        phi = propagator(liou, t)
        for dist in (tpm_from_propagator(rho0, phi, basis, t),
                     epm_from_propagator(rho0, phi, basis, t)):
            assert abs(dist.p.sum() - 1.0) <= 1e-10
            assert dist.p.min() >= 0.0


def test_mean_energy_zero_at_t0():
    rng = np.random.default_rng(9)
    basis = computational_basis(PARAMS)
    liou = build_liouvillian(PARAMS)
    rho0 = random_density_matrix(rng)
    assert mean_energy_change(tpm_distribution(rho0, liou, 0.0, basis)) == pytest.approx(0.0, abs=1e-12)
    assert mean_energy_change(epm_distribution(rho0, liou, 0.0, basis)) == pytest.approx(0.0, abs=1e-12)


def test_mean_energy_stationary_singlet():
    # the singlet is a dark state, so the EPM mean vanishes at every time;
    # the TPM mean does not (its first measurement destroys the singlet),
    # which is exactly the protocol gap probed by the odd-parity Bell runs
    p1 = BathParams(alpha=1.0)
    basis = computational_basis(p1)
    liou = build_liouvillian(p1)
    psi_m = bell_state("psi_minus")
    for t in (1.0, 100.0):
        assert mean_energy_change(epm_distribution(psi_m, liou, t, basis)) == pytest.approx(0.0, abs=1e-10)
        assert abs(mean_energy_change(tpm_distribution(psi_m, liou, t, basis))) > 0.1


def test_epm_mean_is_basis_independent():
    # projector sums inside each degenerate eigenspace coincide
    rng = np.random.default_rng(11)
    liou = build_liouvillian(PRETHERMAL)
    comp = computational_basis(PRETHERMAL)
    comm = common_basis(PRETHERMAL)
    for _ in range(5):
        rho0 = random_density_matrix(rng)
        t = rng.uniform(0, 100)
        phi = propagator(liou, t)
        a = mean_energy_change(epm_from_propagator(rho0, phi, comp, t))
        b = mean_energy_change(epm_from_propagator(rho0, phi, comm, t))
        assert a == pytest.approx(b, abs=1e-12)


def test_tpm_epm_means_coincide_for_diagonal_states():
    rng = np.random.default_rng(13)
    basis = computational_basis(PRETHERMAL)
    liou = build_liouvillian(PRETHERMAL)
    pops = rng.dirichlet(np.ones(4))
    rho0 = np.diag(pops).astype(complex)
    for t in (0.5, 20.0, 400.0):
        phi = propagator(liou, t)
        tpm_mean = mean_energy_change(tpm_from_propagator(rho0, phi, basis, t))
        epm_mean = mean_energy_change(epm_from_propagator(rho0, phi, basis, t))
        assert tpm_mean == pytest.approx(epm_mean, abs=1e-10)


def test_coherent_gap_identity_random_states():
    rng = np.random.default_rng(15)
    basis = computational_basis(PRETHERMAL)
    liou = build_liouvillian(PRETHERMAL)
    for _ in range(10):
        rho0 = random_density_matrix(rng)
        t = rng.uniform(0, 200)
        gap = coherent_energy_difference(rho0, liou, t, basis)
        assert abs(gap.direct - gap.via_coherences) <= 1e-10


def test_coherent_gap_zero_for_commuting_states():
    basis = computational_basis(PRETHERMAL)
    liou = build_liouvillian(PRETHERMAL)
    rho0 = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
    for t in (0.0, 1.0, 50.0, 1e3):
        assert coherent_energy_difference(rho0, liou, t, basis).direct == pytest.approx(0.0, abs=1e-10)


def test_coherent_gap_zero_for_even_parity_bell():
    basis = computational_basis(PRETHERMAL)
    liou = build_liouvillian(PRETHERMAL)
    for kind in ("phi_plus", "phi_minus"):
        rho0 = bell_state(kind)
        for t in (0.5, 30.0, 1e3):
            assert coherent_energy_difference(rho0, liou, t, basis).direct == pytest.approx(0.0, abs=1e-10)


def test_coherent_gap_nonzero_on_plateau_then_vanishes():
    basis = computational_basis(PRETHERMAL)
    liou = build_liouvillian(PRETHERMAL)
    rho0 = mms_with_coherence(pauli_product_coherence(0.2, "x", 0.3, "x"))
    plateau = coherent_energy_difference(rho0, liou, 50.0, basis).direct
    assert abs(plateau) >= 1e-3
    late = coherent_energy_difference(rho0, liou, 1e6, basis).direct
    assert abs(late) <= 1e-6


def test_coherent_gap_internal_consistency_error():
    # a non-trace-preserving propagator breaks the identity and must raise
    basis = computational_basis(PARAMS)
    rho0 = mms_with_coherence(pauli_product_coherence(0.2, "x", 0.3, "x"))
    bogus_phi = 1.01 * np.eye(16, dtype=complex)
    with pytest.raises(NumericalError):
        coherent_energy_from_propagator(rho0, bogus_phi, basis, 0.0)
