"""Tilt elements: seeds, Frobenius compatibility, sharp maps, p-flat division."""

import random

import pytest

from wittforge.errors import ConfigError, InsufficientDepthError, NotDivisibleError
from wittforge.tilt import TiltElement, TiltRing, make_tilt
from wittforge.towers import CYCLOTOMIC, S_PLUS_T, TowerSpec


@pytest.fixture
def spec():
    return TowerSpec(2, 4, S_PLUS_T)


@pytest.fixture
def spec3():
    return TowerSpec(3, 3, S_PLUS_T)


def random_monomial_tilt(spec, D, rng, max_exp=2):
    gens = spec.residue_gens
    exps = {}
    for name in gens:
        if rng.random() < 0.7:
            exps[name] = rng.randrange(0, max_exp + 1)
    coeff = rng.randrange(1, spec.p)
    top_val = spec.monomial("residue", None, coeff, **exps)
    return TiltElement.from_top_seed(spec, D, top_val)


class TestSeeds:
    def test_pflat_coordinates(self, spec):
        D = 3
        pf = make_tilt(spec, "pflat", D)
        for j in range(D + 1):
            assert pf.coords[j] == spec.gen("x", rep="residue", exp=2 ** (4 - j))
        assert pf.top == D and pf.e == 0

    def test_tflat_compatibility(self, spec):
        tf = make_tilt(spec, "Tflat", 3)
        assert tf.frobenius_compatible()
        for j in range(4):
            assert tf.coords[j] == spec.gen("t", rep="residue", exp=2 ** (4 - j))

    def test_sflat_compatibility(self, spec3):
        sf = make_tilt(spec3, "Sflat", 2)
        assert sf.frobenius_compatible()

    def test_minus_one_flat_p2(self):
        spec = TowerSpec(2, 4, CYCLOTOMIC, Dw=4)  # order 2^4, so D = 3
        m = make_tilt(spec, "minus-oneflat", 3)
        assert m.coords[0] == spec.one(rep="residue")  # -1 = 1 mod 2
        # coordinate 1 is the image of a primitive 4th root: 1 + pi^{2^{D-1}}
        expected = spec.one(rep="residue") + spec.gen("pi", rep="residue", exp=2 ** 2)
        assert m.coords[1] == expected
        assert m.frobenius_compatible()

    def test_oneflat_p_odd(self):
        spec = TowerSpec(3, 3, CYCLOTOMIC, Dw=2)
        one_flat = make_tilt(spec, "oneflat", 2)
        assert one_flat.coords[0] == spec.one(rep="residue")
        assert one_flat.frobenius_compatible()

    def test_oneflat_rejected_p2(self):
        spec = TowerSpec(2, 4, CYCLOTOMIC, Dw=4)
        with pytest.raises(ConfigError):
            make_tilt(spec, "oneflat", 3)

    def test_constants(self, spec3):
        c = make_tilt(spec3, -1, 2)
        assert c.frobenius_compatible()
        assert c.coords[0] == spec3.from_int(2, rep="residue")


class TestArith:
    def test_product_componentwise(self, spec):
        D = 3
        tf, sf = make_tilt(spec, "Tflat", D), make_tilt(spec, "Sflat", D)
        prod = tf * sf
        for j in range(D + 1):
            assert prod.coords[j] == tf.coords[j] * sf.coords[j]

    def test_sum_minus_one(self, spec):
        D = 3
        b0 = make_tilt(spec, "Tflat", D) + make_tilt(spec, "Sflat", D) - make_tilt(spec, 1, D)
        for j in range(D + 1):
            expected = spec.monomial("residue", None, 1, u=2 ** (4 - j))
            assert b0.coords[j] == expected
        # coordinate 0 is u^{p^N} = 0 by the defining relation
        assert b0.coords[0].is_zero()

    def test_compatibility_preserved(self, spec, spec3):
        rng = random.Random(12)
        for sp in (spec, spec3):
            D = 2
            a = random_monomial_tilt(sp, D, rng)
            b = random_monomial_tilt(sp, D, rng)
            for result in (a + b, a * b, a - b):
                assert result.frobenius_compatible()

    def test_top_is_min(self, spec):
        D = 3
        a = make_tilt(spec, "Tflat", D)
        b = make_tilt(spec, "Sflat", D).copy_with(top=1)
        assert (a + b).top == 1

    def test_pow_and_frobenius(self, spec):
        D = 3
        tf = make_tilt(spec, "Tflat", D)
        assert tf ** 2 == tf.frobenius()
        assert (tf ** 2).e == 0


class TestSharp:
    def test_pflat_sharp0_is_p(self, spec):
        pf = make_tilt(spec, "pflat", 3)
        for m in (1, 2, 3):
            assert pf.sharp(0, m) == spec.from_int(2, mod=m)

    def test_tflat_sharp1(self, spec):
        tf = make_tilt(spec, "Tflat", 3)
        got = tf.sharp(1, 2)
        assert got == spec.gen("t", exp=2 ** 3, mod=2)

    def test_multiplicativity(self, spec):
        rng = random.Random(9)
        D = 3
        for _ in range(12):
            a = random_monomial_tilt(spec, D, rng)
            b = random_monomial_tilt(spec, D, rng)
            n, m = rng.choice([(0, 2), (1, 2), (0, 3)])
            lhs = (a * b).sharp(n, m)
            rhs = (a.sharp(n, m) * b.sharp(n, m)).reduce_mod(m)
            assert lhs == rhs

    def test_consistency_across_precision(self, spec):
        rng = random.Random(10)
        a = random_monomial_tilt(spec, 3, rng)
        assert a.sharp(0, 2).reduce_mod(1) == a.sharp(0, 1)
        assert a.sharp(1, 2).reduce_mod(1) == a.sharp(1, 1)

    def test_p_sharp_relation(self, spec):
        # sharp_n(a)^p = sharp_{n-1}(a) mod p^m
        rng = random.Random(11)
        for _ in range(8):
            a = random_monomial_tilt(spec, 3, rng)
            m = 2
            lhs = (a.sharp(1, m) ** spec.p).reduce_mod(m)
            assert lhs == a.sharp(0, m)

    def test_depth_guard(self, spec):
        tf = make_tilt(spec, "Tflat", 2)
        with pytest.raises(InsufficientDepthError):
            tf.sharp(0, 4)


class TestDivision:
    def test_pflat_over_pflat(self, spec):
        pf = make_tilt(spec, "pflat", 3)
        q = pf.divide_by_pflat_power(0)
        assert q.e == 0  # cancels cleanly
        assert q == make_tilt(spec, 1, 3)
        assert q.top == 2

    def test_round_trip_with_tflat(self, spec):
        D, k = 3, 1
        tf = make_tilt(spec, "Tflat", D)
        pf = make_tilt(spec, "pflat", D)
        prod = tf * pf ** (spec.p ** k)
        q = prod.divide_by_pflat_power(k)
        assert q == tf
        assert q.top == D - 1

    def test_tflat_not_divisible(self, spec):
        tf = make_tilt(spec, "Tflat", 3)
        with pytest.raises(NotDivisibleError):
            tf.divide_by_pflat_power(0)

    def test_b0_divides_with_pending_denominator(self, spec):
        D = 3
        b0 = make_tilt(spec, "Tflat", D) + make_tilt(spec, "Sflat", D) - make_tilt(spec, 1, D)
        y0 = b0.divide_by_pflat_power(0)
        assert y0.e == 1  # stays a pending fraction
        assert y0.top == D - 1
        # multiply-back: y0 * pflat == b0 up to the reduced ledger
        assert y0 * make_tilt(spec, "pflat", D) == b0

    def test_depth_exhaustion(self, spec):
        pf = make_tilt(spec, "pflat", 2)
        with pytest.raises(InsufficientDepthError):
            pf.divide_by_pflat_power(2)

    def test_zero_divides_to_zero(self, spec):
        z = make_tilt(spec, 0, 3)
        assert z.divide_by_pflat_power(0).is_zero()


class TestPerfectness:
    def test_root_inverts_frobenius(self, spec):
        rng = random.Random(13)
        for _ in range(8):
            a = random_monomial_tilt(spec, 3, rng)
            r = a.root()
            back = r.frobenius()
            assert back.top == a.top - 1
            assert all(back.coords[j] == a.coords[j] for j in range(back.top + 1))

    def test_root_requires_cleared_denominator(self, spec):
        pf = make_tilt(spec, "pflat", 3)
        b0 = make_tilt(spec, "Tflat", 3) + make_tilt(spec, "Sflat", 3) - make_tilt(spec, 1, 3)
        y0 = b0.divide_by_pflat_power(0)
        with pytest.raises(NotDivisibleError):
            y0.root()


class TestTiltRing:
    def test_ring_protocol(self, spec):
        ring = TiltRing(spec, 3)
        one, zero = ring.one(), ring.zero()
        assert (one * one == one) if False else ring.mul(one, one) == one
        assert ring.add(zero, one) == one
        assert ring.pow(one, 5) == one
        assert ring.frobenius(one) == one
