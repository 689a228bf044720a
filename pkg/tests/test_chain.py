import math

import numpy as np
import pytest

from cvrepeater.chain import (
    ChainSpec,
    bell_relay_general,
    chain_cm,
    relay_links,
    swap_once,
)
from cvrepeater.errors import (
    DomainError,
    MeasurementDegeneracyError,
    PhysicalityError,
)
from cvrepeater.gaussian import (
    GeneralCM4,
    TwoModeCM,
    reverse_coherent_information,
    symplectic_eigenvalues,
    tmsv,
)
from cvrepeater.memory import MemoryParams
from helpers import random_physical_triplet, relay_closed_form


class TestSwapOnce:
    def test_pure_tmsv(self):
        out = swap_once(tmsv(3.0))
        assert out.triplet() == pytest.approx((5 / 3, 5 / 3, 4 / 3), abs=1e-15)

    def test_uncorrelated_fixed_point(self):
        out = swap_once(TwoModeCM(3.0, 2.0, 0.0))
        assert out.triplet() == (3.0, 2.0, 0.0)

    def test_loss_link(self):
        out = swap_once(TwoModeCM(3.0, 2.0, 2.0))
        assert out.triplet() == pytest.approx((2.2, 1.2, 0.8), abs=1e-15)

    def test_conservation(self):
        rng = np.random.default_rng(5)
        for _ in range(500):
            a, b, c = random_physical_triplet(rng)
            out = swap_once(TwoModeCM(a, b, c))
            assert abs((out.a + out.c) - a) <= 1e-14 * max(1.0, abs(a))
            assert abs((out.b + out.c) - b) <= 1e-14 * max(1.0, abs(b))

    def test_preserves_symplectic_spectrum(self):
        # the swap map preserves Delta and detV, hence both eigenvalues
        rng = np.random.default_rng(6)
        for _ in range(200):
            a, b, c = random_physical_triplet(rng)
            v = TwoModeCM(a, b, c)
            before = symplectic_eigenvalues(v)
            after = symplectic_eigenvalues(swap_once(v))
            scale = max(1.0, before.nu_plus)
            assert abs(before.nu_minus - after.nu_minus) < 1e-9 * scale
            assert abs(before.nu_plus - after.nu_plus) < 1e-9 * scale

    def test_rci_never_improves(self):
        rng = np.random.default_rng(8)
        for _ in range(300):
            a, b, c = random_physical_triplet(rng, scale_max=50.0)
            v = TwoModeCM(a, b, c)
            assert reverse_coherent_information(
                swap_once(v)
            ) <= reverse_coherent_information(v) + 1e-10


class TestChainCm:
    def test_depth_zero_ideal(self):
        v = TwoModeCM(3.0, 2.0, 2.0)
        spec = ChainSpec(0, v, MemoryParams.ideal(), 0.0)
        assert chain_cm(spec) is v

    def test_depth_one(self):
        spec = ChainSpec(1, TwoModeCM(3.0, 2.0, 2.0), MemoryParams.ideal(), 0.0)
        assert chain_cm(spec).triplet() == pytest.approx((2.2, 1.2, 0.8), abs=1e-15)

    def test_depth_two_pure_tmsv(self):
        # hand-evaluated recursion: (3,3,sqrt(8)) -> (5/3,5/3,4/3)
        # -> k=(16/9)/(10/3)=8/15 -> (17/15, 17/15, 8/15)
        spec = ChainSpec(2, tmsv(3.0), MemoryParams.ideal(), 0.0)
        assert chain_cm(spec).triplet() == pytest.approx(
            (17 / 15, 17 / 15, 8 / 15), abs=1e-14
        )

    def test_decoheres_before_swapping(self):
        link = TwoModeCM(3.0, 2.0, 2.0)
        mem = MemoryParams(1.0, 0.01)
        spec = ChainSpec(1, link, mem, 0.5)
        from cvrepeater.memory import decohere

        expect = swap_once(decohere(link, 0.5, mem))
        assert chain_cm(spec).triplet() == expect.triplet()

    def test_physical_at_depth(self):
        link = TwoModeCM(3.0, 2.0, 2.0)
        for n in range(7):
            out = chain_cm(ChainSpec(n, link, MemoryParams.ideal(), 0.0))
            nm, _ = symplectic_eigenvalues(out)
            assert nm >= 1.0 - 1e-9
            assert out.c >= 0.0

    def test_n_links(self):
        spec = ChainSpec(3, tmsv(2.0), MemoryParams.ideal(), 0.0)
        assert spec.n_links == 8

    def test_rejects_bad_spec(self):
        with pytest.raises((DomainError, ValueError)):
            ChainSpec(-1, tmsv(2.0), MemoryParams.ideal(), 0.0)
        with pytest.raises((DomainError, ValueError)):
            ChainSpec(1, tmsv(2.0), MemoryParams.ideal(), -0.5)


class TestBellRelayGeneral:
    def test_equals_swap_once_on_identical_links(self):
        rng = np.random.default_rng(21)
        for _ in range(2000):
            a, b, c = random_physical_triplet(rng)
            v = TwoModeCM(a, b, c)
            got = bell_relay_general(GeneralCM4.from_links(v, v))
            want = swap_once(v)
            scale = max(1.0, abs(a), abs(b))
            assert abs(got.a - want.a) < 1e-12 * scale
            assert abs(got.b - want.b) < 1e-12 * scale
            assert abs(got.c - want.c) < 1e-12 * scale

    def test_uncorrelated_links(self):
        v = TwoModeCM(3.0, 2.0, 0.0)
        out = bell_relay_general(GeneralCM4.from_links(v, v))
        assert out.triplet() == pytest.approx((3.0, 2.0, 0.0), abs=1e-14)

    def test_unequal_links_frozen_fixtures(self):
        # frozen from a standalone matrix evaluation of the conditional-CM
        # formula over the assembled 8x8 input
        v1 = TwoModeCM(4.0, 3.0, 2.0)
        v2 = TwoModeCM(5.0, 2.0, 2.0)
        out = bell_relay_general(GeneralCM4.from_links(v1, v2))
        assert out.triplet() == pytest.approx((3.5, 1.5, 0.5), abs=1e-12)

        v1 = TwoModeCM(2.5, 1.75, 1.5)
        v2 = TwoModeCM(3.25, 2.5, 2.25)
        out = bell_relay_general(GeneralCM4.from_links(v1, v2))
        assert out.triplet() == pytest.approx((2.05, 1.4875, 0.675), abs=1e-12)

    def test_unequal_links_closed_form_property(self):
        rng = np.random.default_rng(22)
        for _ in range(500):
            t1 = random_physical_triplet(rng, scale_max=100.0)
            t2 = random_physical_triplet(rng, scale_max=100.0)
            out = bell_relay_general(
                GeneralCM4.from_links(TwoModeCM(*t1), TwoModeCM(*t2))
            )
            want = relay_closed_form(t1, t2)
            scale = max(1.0, abs(want[0]), abs(want[1]))
            assert out.triplet() == pytest.approx(want, abs=1e-10 * scale)

    def test_relay_links_helper(self):
        v1 = TwoModeCM(4.0, 3.0, 2.0)
        v2 = TwoModeCM(5.0, 2.0, 2.0)
        assert relay_links(v1, v2).triplet() == pytest.approx(
            (3.5, 1.5, 0.5), abs=1e-12
        )

    def test_degenerate_measurement_rejected(self):
        # raw matrix path: inner-pair blocks engineered so Upsilon = 0;
        # unreachable from physical standard-form links, defensive only
        m = np.eye(8)
        z = np.diag([1.0, -1.0])
        m[4:6, 6:8] = z
        m[6:8, 4:6] = z
        with pytest.raises(MeasurementDegeneracyError):
            bell_relay_general(m)

    def test_raw_matrix_accepted(self):
        v = TwoModeCM(3.0, 2.0, 2.0)
        m = GeneralCM4.from_links(v, v).matrix()
        out = bell_relay_general(m)
        assert out.triplet() == pytest.approx((2.2, 1.2, 0.8), abs=1e-13)

    def test_off_structure_output_rejected(self):
        # correlations that break the standard form of the conditional state
        m = GeneralCM4.from_links(TwoModeCM(3.0, 2.0, 2.0), TwoModeCM(3.0, 2.0, 2.0)).matrix()
        m[0, 3] = 0.4  # a1-q to b2-p coupling
        m[3, 0] = 0.4
        with pytest.raises((PhysicalityError, MeasurementDegeneracyError)):
            bell_relay_general(m)
