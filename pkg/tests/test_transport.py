import math

import numpy as np
import pytest

from wirescat import (
    DomainError,
    Impurity,
    ThresholdEnergyError,
    longitudinal_wavenumber,
    resonance_parameter,
    solve_scattering,
    sweep,
    threshold_energy,
    threshold_transport,
    transport_at,
)

PI = math.pi
OM_2 = (2 * PI) ** 2


class TestTransportAt:
    def test_weak_coupling_limit_is_identity(self, hard_wall):
        # rho0 = 1e-300 pushes |ln(rho0/rho_bar)| to the float ceiling ~690,
        # leaving |A| ~ 1e-3 and T within ~1e-5 of the identity
        res = transport_at(hard_wall, Impurity(0.3, 1e-300), 1.2 * OM_2)
        for n in range(res.num_propagating):
            assert res.transmission[n, n] == pytest.approx(1.0, abs=2e-5)

    def test_node_decouples_resonant_channel(self, hard_wall):
        res = transport_at(hard_wall, Impurity(0.5, 0.01), 1.2 * OM_2)
        assert res.num_propagating == 2
        # sin(2 pi / 2) = 0: everything involving mode 2 is untouched
        assert res.transmission[1, 1] == pytest.approx(1.0, abs=1e-28)
        assert abs(res.transmission[0, 1]) < 1e-30
        assert abs(res.transmission[1, 0]) < 1e-30
        assert abs(res.reflection[1, 1]) < 1e-30

    def test_matrix_against_amplitude_table(self, hard_wall, canonical_impurity):
        omega = 1.05 * OM_2
        res = transport_at(hard_wall, canonical_impurity, omega)
        sol = solve_scattering(hard_wall, canonical_impurity, 1, omega)
        k1 = longitudinal_wavenumber(1, omega).value.real
        k2 = longitudinal_wavenumber(2, omega).value.real
        assert res.transmission[0, 0] == pytest.approx(abs(sol.transmitted(1)) ** 2, rel=1e-12)
        assert res.transmission[0, 1] == pytest.approx(
            k2 / k1 * abs(sol.transmitted(2)) ** 2, rel=1e-12
        )
        assert res.reflection[0, 0] == pytest.approx(abs(sol.reflected(1)) ** 2, rel=1e-12)

    def test_no_propagating_modes_rejected(self, hard_wall, canonical_impurity):
        with pytest.raises(DomainError):
            transport_at(hard_wall, canonical_impurity, 0.5 * PI**2)

    def test_exact_threshold_rejected(self, hard_wall, canonical_impurity):
        with pytest.raises(ThresholdEnergyError):
            transport_at(hard_wall, canonical_impurity, threshold_energy(2))

    def test_conductance_bounded_by_channel_count(self, hard_wall):
        rng = np.random.default_rng(5)
        for _ in range(25):
            omega = float(rng.uniform(1.2, 8.8)) * PI**2
            if min(abs(omega - threshold_energy(q)) for q in (1, 2, 3)) < 0.1:
                continue
            res = transport_at(hard_wall, Impurity(float(rng.uniform(0.1, 0.9)),
                                                   float(10 ** rng.uniform(-4, -1))), omega)
            bound = res.num_propagating + res.unitarity_defect * res.num_propagating
            assert res.conductance <= bound + 1e-12


class TestThresholdTransport:
    def test_single_channel_quantization(self, hard_wall):
        rng = np.random.default_rng(9)
        for _ in range(5):
            imp = Impurity(float(rng.uniform(0.1, 0.9)), float(10 ** rng.uniform(-5, -1)))
            res = threshold_transport(hard_wall, imp, 2)
            assert res.conductance == 1.0
            assert np.array_equal(res.transmission, np.eye(1))
            assert np.array_equal(res.reflection, np.zeros((1, 1)))

    def test_two_channel_quantization_impurity_independent(self, hard_wall):
        rng = np.random.default_rng(10)
        results = [
            threshold_transport(hard_wall, Impurity(float(rng.uniform(0.1, 0.9)),
                                                    float(10 ** rng.uniform(-5, -1))), 3)
            for _ in range(5)
        ]
        assert all(r.conductance == 2.0 for r in results)

    def test_decoupled_node_same_result(self, hard_wall):
        res = threshold_transport(hard_wall, Impurity(0.5, 0.01), 2)
        assert res.conductance == 1.0

    def test_requires_an_open_channel(self, hard_wall, canonical_impurity):
        with pytest.raises(DomainError):
            threshold_transport(hard_wall, canonical_impurity, 1)

    def test_matches_transport_limit_from_above(self, hard_wall, canonical_impurity):
        # the analytic limit must agree with the numerical approach
        d = resonance_parameter(hard_wall, canonical_impurity, 2)
        omega = threshold_energy(2) + 1e-8 / abs(d) ** 2
        res = transport_at(hard_wall, canonical_impurity, omega)
        lim = threshold_transport(hard_wall, canonical_impurity, 2)
        assert res.transmission[0, 0] == pytest.approx(lim.transmission[0, 0], abs=1e-3)


class TestSweep:
    def test_property_run_unitarity(self, hard_wall, canonical_impurity):
        omegas = np.linspace(1.1, 8.9, 200) * PI**2
        keep = [o for o in omegas
                if min(abs(o - threshold_energy(q)) for q in (1, 2, 3)) > 0.1]
        points = sweep(hard_wall, canonical_impurity, keep)
        assert all(pt.ok for pt in points)
        assert max(pt.result.unitarity_defect for pt in points) < 1e-8

    def test_single_point_equals_direct_call(self, hard_wall, canonical_impurity):
        omega = 1.3 * OM_2
        pt = sweep(hard_wall, canonical_impurity, [omega])[0]
        direct = transport_at(hard_wall, canonical_impurity, omega)
        assert np.array_equal(pt.result.transmission, direct.transmission)
        assert np.array_equal(pt.result.reflection, direct.reflection)
        assert pt.result.conductance == direct.conductance

    def test_monotone_approach_to_quantization(self, hard_wall, canonical_impurity):
        # last decade of the approach to the mode-2 cut-off from above
        offsets = np.geomspace(1e-7, 1e-6, 8) * OM_2
        t11 = []
        for d in offsets:
            res = transport_at(hard_wall, canonical_impurity, OM_2 + d)
            t11.append(res.transmission[0, 0])
        assert all(a > b for a, b in zip(t11, t11[1:]))  # T_11 -> 1 from below

    def test_errors_collected_not_fatal(self, hard_wall, canonical_impurity):
        points = sweep(hard_wall, canonical_impurity,
                       [0.5 * PI**2, 1.3 * OM_2, threshold_energy(2)])
        assert [pt.ok for pt in points] == [False, True, False]
        assert points[0].error and points[2].error


class TestPatternThroughResonanceOnly:
    """The near-cut-off pattern depends on (eps, rho0) only through the
    resonance scale; exactly at the cut-off through eps alone; for wall
    impurities through neither."""

    def test_mirror_impurity_same_resonance_same_pattern(self, hard_wall):
        # eps and 1-eps give identical resonance parameters, hence identical
        # resonant-mode coefficients, for any strength
        imp_a = Impurity(0.3, 0.01)
        imp_b = Impurity(0.7, 0.01)
        d_a = resonance_parameter(hard_wall, imp_a, 2)
        d_b = resonance_parameter(hard_wall, imp_b, 2)
        assert d_a == pytest.approx(d_b, rel=1e-12)
        omega = threshold_energy(2) + 1e-4 / abs(d_a) ** 2
        c_a = solve_scattering(hard_wall, imp_a, 1, omega).amplitudes[2]
        c_b = solve_scattering(hard_wall, imp_b, 1, omega).amplitudes[2]
        assert abs(c_a) == pytest.approx(abs(c_b), rel=1e-10)

    def test_coefficient_is_function_of_resonance_parameter(self, hard_wall):
        # two different strengths: coefficients collapse once expressed
        # through 1/(1 + i k Delta^(-1/2))
        omega = threshold_energy(2) + 3e-4
        k2 = longitudinal_wavenumber(2, omega).value
        for rho0 in (1e-4, 1e-2):
            imp = Impurity(0.3, rho0)
            d = resonance_parameter(hard_wall, imp, 2, omega)
            reduced = (math.sin(0.3 * PI) / math.sin(0.6 * PI)) / (1 + 1j * k2 * d)
            full = solve_scattering(hard_wall, imp, 1, omega, m=2).amplitudes[2]
            assert full == pytest.approx(reduced, abs=2e-6)
