import math

import numpy as np
import pytest

from nlo_quanta import fock
from nlo_quanta.errors import (
    ContractError,
    InvalidSpaceError,
    ModeIndexError,
    OutOfRangeError,
    ParameterError,
    TruncationError,
)


class TestSpace:
    def test_single_mode(self):
        sp = fock.make_space([5])
        assert sp.total_dim == 5
        assert sp.n_modes == 1

    def test_two_mode_product(self):
        assert fock.make_space([3, 4]).total_dim == 12

    def test_index_convention_enumeration(self):
        # row-major, mode 0 slowest: exhaustive check on [2,2,2]
        sp = fock.make_space([2, 2, 2])
        assert sp.total_dim == 8
        expected = 0
        for n0 in range(2):
            for n1 in range(2):
                for n2 in range(2):
                    assert sp.flat_index((n0, n1, n2)) == expected
                    assert sp.occupation_of(expected) == (n0, n1, n2)
                    expected += 1
        assert sp.flat_index((1, 0, 1)) == 5

    @pytest.mark.parametrize("dims", [[1], [0], [2, 1], [-3]])
    def test_invalid_dims(self, dims):
        with pytest.raises(InvalidSpaceError):
            fock.make_space(dims)

    def test_mode_out_of_range(self):
        sp = fock.make_space([3, 3])
        with pytest.raises(ModeIndexError):
            fock.annihilation(sp, 2)


class TestLadderOperators:
    def test_lowering_on_one(self):
        sp = fock.make_space([3])
        a = fock.annihilation(sp, 0)
        out = a.dense() @ fock.fock_state(sp, [1]).data
        np.testing.assert_allclose(out, fock.fock_state(sp, [0]).data)

    def test_lowering_on_two(self):
        sp = fock.make_space([3])
        a = fock.annihilation(sp, 0)
        out = a.dense() @ fock.fock_state(sp, [2]).data
        np.testing.assert_allclose(out, np.sqrt(2) * fock.fock_state(sp, [1]).data)

    def test_coherent_is_eigenstate(self):
        sp = fock.make_space([20])
        st = fock.coherent_state(sp, [1.5])
        a = fock.annihilation(sp, 0)
        assert abs(fock.expectation(st, a) - 1.5) < 1e-9
        # a|alpha> = alpha|alpha> up to the truncation tail
        resid = a.dense() @ st.data - 1.5 * st.data
        assert np.linalg.norm(resid) < 1e-5

    @pytest.mark.parametrize("alpha", [0.5, 1.0 + 0.7j, -1.2j])
    def test_coherent_eigenrelation_sweep(self, alpha):
        sp = fock.make_space([40])
        st = fock.coherent_state(sp, [alpha])
        a = fock.annihilation(sp, 0)
        resid = np.linalg.norm(a.dense() @ st.data - alpha * st.data)
        assert resid < 1e-8

    def test_commutator_truncation_structure(self):
        # [a, a-dag] = 1 except the last diagonal entry (equals -(d-1))
        sp = fock.make_space([7])
        a = fock.annihilation(sp, 0)
        comm = a.commutator(a.dag()).dense()
        expected = np.eye(7, dtype=complex)
        expected[6, 6] = -(7 - 1)
        np.testing.assert_allclose(comm, expected, atol=1e-12)

    def test_number_operator_diagonal(self):
        sp = fock.make_space([4])
        n = fock.number_operator(sp, 0)
        np.testing.assert_allclose(np.diag(n.dense()).real, [0, 1, 2, 3])
        assert n.is_hermitian()

    def test_number_on_fock(self):
        sp = fock.make_space([6])
        st = fock.fock_state(sp, [2])
        assert abs(fock.expectation(st, fock.number_operator(sp, 0)) - 2) < 1e-14
        assert fock.variance(st, fock.number_operator(sp, 0)) < 1e-14

    def test_number_on_truncated_coherent(self):
        sp = fock.make_space([25])
        st = fock.coherent_state(sp, [1.0])
        assert abs(fock.expectation(st, fock.number_operator(sp, 0)).real - 1.0) < 1e-10


class TestQuadrature:
    @pytest.mark.parametrize("phi", [0.0, 0.3, np.pi / 2, 2.2])
    def test_vacuum_variance(self, phi):
        sp = fock.make_space([12])
        vac = fock.vacuum_state(sp)
        assert abs(fock.variance(vac, fock.quadrature(sp, 0, phi)) - 0.25) < 1e-12

    def test_reconstructs_annihilation(self):
        sp = fock.make_space([9])
        x0 = fock.quadrature(sp, 0, 0.0).dense()
        xp = fock.quadrature(sp, 0, np.pi / 2).dense()
        np.testing.assert_allclose(x0 + 1j * xp, fock.annihilation(sp, 0).dense(),
                                   atol=1e-14)

    def test_pi_sign_flip(self):
        sp = fock.make_space([9])
        np.testing.assert_allclose(fock.quadrature(sp, 0, np.pi).dense(),
                                   -fock.quadrature(sp, 0, 0.0).dense(), atol=1e-14)

    def test_expectation_on_coherent(self):
        sp = fock.make_space([30])
        st = fock.coherent_state(sp, [1.0 + 1.0j])
        val = fock.expectation(st, fock.quadrature(sp, 0, 0.0)).real
        assert abs(val - 1.0) < 1e-9


class TestStates:
    def test_coherent_vacuum(self):
        sp = fock.make_space([5])
        st = fock.coherent_state(sp, [0.0])
        np.testing.assert_allclose(st.data, fock.vacuum_state(sp).data)

    def test_coherent_poissonian_variance(self):
        # Poissonian statistics oracle: explicit sum over the distribution
        sp = fock.make_space([40])
        st = fock.coherent_state(sp, [2.0])
        n = np.arange(40)
        pn = np.exp(-4.0) * 4.0 ** n / np.array([math.factorial(int(k)) for k in n])
        mean_ref = float(np.sum(pn * n))
        var_ref = float(np.sum(pn * n ** 2) - mean_ref ** 2)
        nop = fock.number_operator(sp, 0)
        assert abs(fock.variance(st, nop) - var_ref) < 1e-8
        assert abs(var_ref - 4.0) < 1e-8

    def test_coherent_amplitudes_formula(self):
        sp = fock.make_space([18])
        st = fock.coherent_state(sp, [1.0])
        amps = np.array([np.exp(-0.5) / np.sqrt(math.factorial(n)) for n in range(18)])
        np.testing.assert_allclose(st.data.real, amps / np.linalg.norm(amps), atol=1e-12)

    def test_coherent_truncation_error_names_mode(self):
        sp = fock.make_space([4, 4])
        with pytest.raises(TruncationError, match="mode 1"):
            fock.coherent_state(sp, [0.0, 2.0])

    def test_fock_two_mode_vacuum(self):
        sp = fock.make_space([3, 3])
        st = fock.fock_state(sp, (0, 0))
        assert st.data[0] == 1.0
        assert np.linalg.norm(st.data) == 1.0

    def test_fock_flat_index_placement(self):
        sp = fock.make_space([4, 3])
        st = fock.fock_state(sp, (2, 1))
        assert st.data[7] == 1.0
        assert np.count_nonzero(st.data) == 1

    def test_fock_out_of_range(self):
        sp = fock.make_space([4, 3])
        with pytest.raises(OutOfRangeError):
            fock.fock_state(sp, (1, 3))

    def test_thermal_moments(self):
        sp = fock.make_space([60])
        st = fock.thermal_state(sp, [1.5])
        nop = fock.number_operator(sp, 0)
        assert abs(fock.expectation(st, nop).real - 1.5) < 1e-8
        assert abs(fock.variance(st, nop) - (1.5 ** 2 + 1.5)) < 1e-6


class TestExpectationVariance:
    def test_vacuum_number(self):
        sp = fock.make_space([5])
        assert fock.expectation(fock.vacuum_state(sp), fock.number_operator(sp, 0)) == 0

    def test_variance_nonnegative_random_states(self):
        rng = np.random.default_rng(11)
        sp = fock.make_space([9])
        op = fock.quadrature(sp, 0, 0.4)
        for _ in range(25):
            vec = rng.standard_normal(9) + 1j * rng.standard_normal(9)
            st = fock.QuantumState(sp, "pure", vec / np.linalg.norm(vec))
            assert fock.variance(st, op) >= -1e-12

    def test_variance_rejects_non_hermitian(self):
        sp = fock.make_space([5])
        with pytest.raises(ContractError):
            fock.variance(fock.vacuum_state(sp), fock.annihilation(sp, 0))

    def test_density_expectation_matches_pure(self):
        sp = fock.make_space([14])
        st = fock.coherent_state(sp, [0.9])
        rho = st.as_density_state()
        op = fock.number_operator(sp, 0)
        assert abs(fock.expectation(st, op) - fock.expectation(rho, op)) < 1e-12


class TestPartialTrace:
    def test_product_state_recovers_factor(self):
        sp = fock.make_space([12, 8])
        st = fock.coherent_state(sp, [0.7, 0.3])
        reduced = fock.partial_trace(st, [0])
        factor = fock.coherent_state(fock.make_space([12]), [0.7])
        np.testing.assert_allclose(reduced.density(), factor.density(), atol=1e-12)

    def test_bell_pair_reduction(self):
        sp = fock.make_space([2, 2])
        vec = np.zeros(4, dtype=complex)
        vec[sp.flat_index((0, 0))] = 1 / np.sqrt(2)
        vec[sp.flat_index((1, 1))] = 1 / np.sqrt(2)
        st = fock.QuantumState(sp, "pure", vec)
        reduced = fock.partial_trace(st, [1])
        np.testing.assert_allclose(reduced.data, np.eye(2) / 2, atol=1e-12)

    def test_trace_preserved(self):
        rng = np.random.default_rng(3)
        sp = fock.make_space([3, 4, 2])
        vec = rng.standard_normal(24) + 1j * rng.standard_normal(24)
        st = fock.QuantumState(sp, "pure", vec / np.linalg.norm(vec))
        reduced = fock.partial_trace(st, [0, 2])
        assert abs(np.trace(reduced.data) - 1.0) < 1e-12

    def test_empty_keep_rejected(self):
        sp = fock.make_space([3, 3])
        with pytest.raises(ContractError):
            fock.partial_trace(fock.vacuum_state(sp), [])


class TestBeamSplitter:
    def test_unitarity(self):
        sp = fock.make_space([9, 9])
        u = fock.beam_splitter(sp, 0.37)
        prod = (u.dag() @ u).dense()
        assert np.abs(prod - np.eye(sp.total_dim)).max() < 1e-10

    def test_full_transmission_identity_action(self):
        sp = fock.make_space([7, 7])
        u = fock.beam_splitter(sp, 1.0)
        a = fock.annihilation(sp, 0)
        assert (u.dag() @ a @ u - a).max_abs() < 1e-12

    def test_full_reflection_swap_signs(self):
        sp = fock.make_space([7, 7])
        u = fock.beam_splitter(sp, 0.0)
        a = fock.annihilation(sp, 0)
        b = fock.annihilation(sp, 1)
        safe = _safe_columns(sp)
        lhs = (u.dag() @ a @ u).dense()
        np.testing.assert_allclose(lhs[:, safe], b.dense()[:, safe], atol=1e-10)
        lhs_b = (u.dag() @ b @ u).dense()
        np.testing.assert_allclose(lhs_b[:, safe], -a.dense()[:, safe], atol=1e-10)

    @pytest.mark.parametrize("transmissivity", [0.25, 0.5, 0.8])
    def test_conjugation_relation(self, transmissivity):
        sp = fock.make_space([8, 8])
        u = fock.beam_splitter(sp, transmissivity)
        a = fock.annihilation(sp, 0)
        b = fock.annihilation(sp, 1)
        root_t, root_r = np.sqrt(transmissivity), np.sqrt(1 - transmissivity)
        safe = _safe_columns(sp)
        got_a = (u.dag() @ a @ u).dense()[:, safe]
        want_a = (root_t * a + root_r * b).dense()[:, safe]
        np.testing.assert_allclose(got_a, want_a, atol=1e-10)
        got_b = (u.dag() @ b @ u).dense()[:, safe]
        want_b = (-root_r * a + root_t * b).dense()[:, safe]
        np.testing.assert_allclose(got_b, want_b, atol=1e-10)

    def test_coherent_in_coherent_out(self):
        alpha, beta = 0.8 + 0.1j, -0.5 + 0.6j
        sp = fock.make_space([20, 20])
        st = fock.coherent_state(sp, [alpha, beta])
        out = fock.apply_operator(fock.beam_splitter(sp, 0.5), st)
        expect = fock.coherent_state(sp, [(alpha + beta) / np.sqrt(2),
                                          (beta - alpha) / np.sqrt(2)])
        overlap = abs(np.vdot(expect.data, out.data))
        assert overlap > 1 - 1e-8

    def test_transmissivity_bounds(self):
        sp = fock.make_space([4, 4])
        for bad in (-0.1, 1.1):
            with pytest.raises(ParameterError):
                fock.beam_splitter(sp, bad)

    def test_needs_two_modes(self):
        with pytest.raises(ContractError):
            fock.beam_splitter(fock.make_space([4]), 0.5)


def _safe_columns(space):
    """Basis columns whose total-photon sector is complete under truncation."""
    totals = space.number_values(0) + space.number_values(1)
    return totals <= min(space.dims) - 1
