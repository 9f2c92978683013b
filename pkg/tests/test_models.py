import numpy as np
import pytest

from nlo_quanta import fock, models
from nlo_quanta.errors import ContractError, ParameterError, TruncationError


def _element(model, bra, ket):
    space = model.space
    return model.hamiltonian.dense()[space.flat_index(bra), space.flat_index(ket)]


class TestTwoModeChi2:
    def setup_method(self):
        self.space = fock.make_space([8, 6])
        self.model = models.h_two_mode_chi2(self.space, omega=1.1, kappa=0.4)

    def test_charge_commutes(self):
        comm = self.model.hamiltonian.commutator(self.model.charge("M")).max_abs()
        assert comm < 1e-10

    def test_kappa_zero_diagonal(self):
        m = models.h_two_mode_chi2(self.space, 1.1, 0.0)
        h = m.hamiltonian.dense()
        assert np.abs(h - np.diag(np.diag(h))).max() == 0.0

    def test_pump_splitting_element(self):
        # <2,0|H_int|0,1> = kappa * sqrt(2)
        off = _element(self.model, (2, 0), (0, 1))
        assert abs(off - 0.4 * np.sqrt(2)) < 1e-12

    def test_free_spectrum(self):
        m = models.h_two_mode_chi2(self.space, 1.1, 0.0)
        e = _element(m, (3, 2), (3, 2)).real
        assert abs(e - (3 * 1.1 + 2 * 2 * 1.1)) < 1e-12

    def test_wrong_mode_count(self):
        with pytest.raises(ContractError):
            models.h_two_mode_chi2(fock.make_space([4]), 1.0, 0.1)


class TestThreeModeChi2:
    def setup_method(self):
        self.space = fock.make_space([6, 5, 5])
        self.model = models.h_three_mode_chi2(self.space, 0.7, 0.5, 0.3)

    def test_charges_commute(self):
        for name in ("M1", "M2"):
            assert self.model.hamiltonian.commutator(self.model.charge(name)).max_abs() < 1e-10

    def test_pump_photon_splitting(self):
        # modes ordered (pump c, signal a, idler b)
        off = _element(self.model, (0, 1, 1), (1, 0, 0))
        assert abs(off - 0.3) < 1e-12

    def test_kappa_zero_free(self):
        m = models.h_three_mode_chi2(self.space, 0.7, 0.5, 0.0)
        e = _element(m, (1, 2, 1), (1, 2, 1)).real
        assert abs(e - (1.2 + 2 * 0.7 + 0.5)) < 1e-12


class TestKerr:
    def test_single_mode_eigenvalues(self):
        space = fock.make_space([9])
        m = models.h_kerr_single(space, omega=0.8, kappa=0.3)
        diag = np.diag(m.hamiltonian.dense()).real
        n = np.arange(9)
        np.testing.assert_allclose(diag, 0.8 * n + 0.5 * 0.3 * n * (n - 1), atol=1e-13)

    def test_kappa_zero_harmonic(self):
        space = fock.make_space([9])
        m = models.h_kerr_single(space, 0.8, 0.0)
        np.testing.assert_allclose(np.diag(m.hamiltonian.dense()).real,
                                   0.8 * np.arange(9), atol=1e-13)

    def test_cross_kerr_eigenvalues(self):
        space = fock.make_space([5, 6])
        m = models.h_kerr_cross(space, 0.8, 0.6, 0.25)
        for n in range(5):
            for k in range(6):
                e = _element(m, (n, k), (n, k)).real
                assert abs(e - (0.8 * n + 0.6 * k + 0.25 * n * k / 2)) < 1e-13

    def test_cross_kerr_is_diagonal(self):
        space = fock.make_space([5, 6])
        h = models.h_kerr_cross(space, 0.8, 0.6, 0.25).hamiltonian.dense()
        assert np.abs(h - np.diag(np.diag(h))).max() == 0.0


class TestNPhoton:
    def test_n2_matches_two_mode_chi2(self):
        space = fock.make_space([8, 6])
        h2 = models.h_two_mode_chi2(space, 1.1, 0.4).hamiltonian.dense()
        hn = models.h_nphoton(space, 1.1, 0.4, 2).hamiltonian.dense()
        np.testing.assert_allclose(hn, h2, atol=1e-14)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_charge_commutes(self, n):
        space = fock.make_space([10, 5])
        m = models.h_nphoton(space, 1.0, 0.2, n)
        assert m.hamiltonian.commutator(m.charge("Mn")).max_abs() < 1e-10

    def test_three_photon_element(self):
        # <3,0|H_int|0,1> = kappa_3 sqrt(3!)
        space = fock.make_space([6, 4])
        m = models.h_nphoton(space, 1.0, 0.2, 3)
        off = _element(m, (3, 0), (0, 1))
        assert abs(off - 0.2 * np.sqrt(6)) < 1e-12

    def test_signal_dim_guard(self):
        with pytest.raises(TruncationError):
            models.h_nphoton(fock.make_space([3, 4]), 1.0, 0.2, 3)

    def test_n_validation(self):
        with pytest.raises(ParameterError):
            models.h_nphoton(fock.make_space([6, 4]), 1.0, 0.2, 1)


class TestParametricPump:
    def test_hermiticity_defect_zero(self):
        space = fock.make_space([12])
        m = models.h_parametric_classical_pump(space, 0.3, 5.0, phi_p=0.7)
        assert m.hamiltonian.hermiticity_defect() == 0.0

    def test_two_photon_element(self):
        # <2|H|0> = i (kappa/2) sqrt(N_p) e^{i phi} sqrt(2)
        space = fock.make_space([12])
        kappa, beta, phi = 0.3, 4.0, 0.45
        m = models.h_parametric_classical_pump(space, kappa, beta, phi_p=phi)
        got = m.hamiltonian.dense()[2, 0]
        want = 1j * (kappa / 2) * beta * np.exp(1j * phi) * np.sqrt(2)
        assert abs(got - want) < 1e-13

    def test_phase_from_complex_beta(self):
        space = fock.make_space([10])
        beta = 3.0 * np.exp(0.6j)
        m1 = models.h_parametric_classical_pump(space, 0.2, beta)
        m2 = models.h_parametric_classical_pump(space, 0.2, 3.0, phi_p=0.6)
        assert (m1.hamiltonian - m2.hamiltonian).max_abs() < 1e-13

    def test_rotating_variant_matches_static_at_t0(self):
        # Eq-(7.50)-style static generator equals the lab-frame H(t=0)
        # minus its free part
        space = fock.make_space([10])
        static = models.h_parametric_classical_pump(space, 0.2, 4.0, rotating_frame=True)
        lab = models.h_parametric_classical_pump(space, 0.2, 4.0, rotating_frame=False,
                                                 omega=0.9)
        h_lab0 = lab.hamiltonian_at(0.0)
        free = 0.9 * fock.number_operator(space, 0)
        assert (h_lab0 - free - static.hamiltonian).max_abs() < 1e-12

    def test_zero_pump_rejected(self):
        with pytest.raises(ParameterError):
            models.h_parametric_classical_pump(fock.make_space([8]), 0.2, 0.0)


class TestDisplacedPump:
    def test_reduces_to_parametric_plus_fluctuation(self):
        space = fock.make_space([8, 6])
        kappa, beta = 0.3, 5.0
        m = models.h_chi2_displaced_pump(space, kappa, beta)
        # signal-only block at zero fluctuation photons: <2,0|H|0,0>
        got = _element(m, (2, 0), (0, 0))
        want = 1j * (kappa / 2) * beta * np.sqrt(2)
        assert abs(got - want) < 1e-13

    def test_hermitian(self):
        m = models.h_chi2_displaced_pump(fock.make_space([8, 6]), 0.3, 5.0)
        assert m.hamiltonian.hermiticity_defect() < 1e-14


class TestDpoModel:
    def test_pure_damping_limit(self):
        space = fock.make_space([5, 5])
        m = models.dpo_model(space, 0.0, 0.0, 0.5, 0.8)
        assert m.hamiltonian.max_abs() == 0.0
        assert len(m.dissipators) == 2

    def test_hermitian(self):
        m = models.dpo_model(fock.make_space([6, 5]), 0.4, 1.5, 0.5, 0.8)
        assert m.hamiltonian.hermiticity_defect() < 1e-14

    def test_drive_element(self):
        space = fock.make_space([5, 5])
        m = models.dpo_model(space, 0.0, 1.5, 0.5, 0.8)
        got = _element(m, (0, 1), (0, 0))
        assert abs(got - 1.5j) < 1e-13

    def test_negative_rate_rejected(self):
        with pytest.raises(ParameterError):
            models.dpo_model(fock.make_space([5, 5]), 0.4, 1.5, -0.1, 0.8)


class TestModelSpecValidation:
    def test_non_hermitian_rejected(self):
        space = fock.make_space([5])
        with pytest.raises(ContractError):
            models.ModelSpec(space, fock.annihilation(space, 0))

    def test_bad_charge_rejected(self):
        space = fock.make_space([5])
        h = fock.number_operator(space, 0)
        bad_charge = fock.quadrature(space, 0, 0.0)
        with pytest.raises(ContractError):
            models.ModelSpec(space, h, charges={"bad": bad_charge})

    def test_time_dependent_hermitian_at_all_times(self):
        space = fock.make_space([8])
        m = models.h_parametric_classical_pump(space, 0.2, 4.0, rotating_frame=False,
                                               omega=0.9)
        for t in (0.0, 0.37, 1.9):
            assert m.hamiltonian_at(t).hermiticity_defect() < 1e-12
