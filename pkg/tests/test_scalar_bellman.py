import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loewner_lab.errors import ParameterError, PreconditionError
from loewner_lab.inequalities import (
    ScalarBellmanInstance,
    check_operator_bellman,
    convexity_step,
    embed_scalars,
    scalar_bellman_gap,
    scalar_bellman_sides,
    transform_mp1_to_mp3,
    transform_mp3_to_mp1,
)
from loewner_lab.means import make_map


def classical(a, b, p=2.0, m1=1.0, m2=1.0):
    return ScalarBellmanInstance(p, tuple(a), tuple(b), m1=m1, m2=m2)


def normalized(a, b, lam, p=2.0):
    return ScalarBellmanInstance(p, tuple(a), tuple(b), lam=lam)


class TestScalarGap:
    def test_proportional_equality(self):
        # 2 sqrt(1 - 0.36) = 1.6 = sqrt(4 - 1.44)
        lhs, rhs = scalar_bellman_sides(classical([0.6], [0.6]), "mp1")
        assert lhs == pytest.approx(1.6, abs=1e-15) and rhs == pytest.approx(1.6, abs=1e-15)
        assert abs(scalar_bellman_gap(classical([0.6], [0.6]), "mp1")) <= 1e-15

    def test_classical_known_values(self):
        lhs, rhs = scalar_bellman_sides(classical([0.6], [0.8]), "mp1")
        assert lhs == pytest.approx(1.4, abs=1e-15)
        assert rhs == pytest.approx(math.sqrt(2.04), abs=1e-15)
        assert scalar_bellman_gap(classical([0.6], [0.8]), "mp1") == pytest.approx(0.0282856857, abs=1e-10)

    def test_normalized_known_values(self):
        lhs, rhs = scalar_bellman_sides(normalized([0.6], [0.8], 0.5), "mp3")
        assert lhs == pytest.approx(0.7, abs=1e-15)
        assert rhs == pytest.approx(math.sqrt(0.51), abs=1e-15)
        assert scalar_bellman_gap(normalized([0.6], [0.8], 0.5), "mp3") == pytest.approx(0.0141428429, abs=1e-10)

    @pytest.mark.parametrize(
        "inst,mode",
        [(normalized([0.9, 0.9], [0.1], 0.5), "mp3"), (normalized([0.6], [0.8], 1.5), "mp3"),
         (classical([1.2], [0.1]), "mp1"), (classical([0.5], [0.5], p=1.0), "mp1"), (classical([-0.1], [0.5]), "mp1")],
    )
    def test_invariant_violations(self, inst, mode):
        with pytest.raises(PreconditionError):
            scalar_bellman_gap(inst, mode)


class TestTransforms:
    def test_unit_weights(self):
        t = transform_mp3_to_mp1(1.0, 1.0, [0.3, 0.4], [0.5, 0.1], 2.0)
        assert t.lam == 0.5 and t.a == (0.3, 0.4) and t.b == (0.5, 0.1)

    def test_rescaling_example(self):
        t = transform_mp3_to_mp1(3.0, 1.0, [0.6], [0.2], 2.0)
        assert t.lam == 0.25 and t.a == pytest.approx((0.2,)) and t.b == pytest.approx((0.2,))
        # Both are equality cases: a/m1 = b/m2, so sqrt(15.36) = sqrt(8.64) + sqrt(0.96).
        gap1 = math.sqrt(16 - 0.64) - math.sqrt(9 - 0.36) - math.sqrt(1 - 0.04)
        assert abs(gap1) <= 1e-15
        assert abs(4.0 * scalar_bellman_gap(t, "mp3") - scalar_bellman_gap(classical([0.6], [0.2], m1=3.0), "mp1")) <= 1e-14

    def test_rescaling_non_equality(self):
        orig = classical([0.6], [0.3], m1=3.0, m2=1.0)
        t = transform_mp3_to_mp1(3.0, 1.0, [0.6], [0.3], 2.0)
        # closed forms: gap1 = sqrt(16 - 0.81) - sqrt(8.64) - sqrt(0.91)
        gap1 = math.sqrt(16 - 0.81) - math.sqrt(8.64) - math.sqrt(0.91)
        gap3 = math.sqrt(1 - (0.75 * 0.2 + 0.25 * 0.3) ** 2) - (0.75 * math.sqrt(0.96) + 0.25 * math.sqrt(0.91))
        assert scalar_bellman_gap(orig, "mp1") == pytest.approx(gap1, rel=1e-12)
        assert scalar_bellman_gap(t, "mp3") == pytest.approx(gap3, rel=1e-12)
        assert 4.0 * gap3 == pytest.approx(gap1, rel=1e-12)

    def test_nonpositive_weight(self):
        with pytest.raises(ParameterError):
            transform_mp3_to_mp1(0.0, 1.0, [0.1], [0.1], 2.0)

    def test_reverse_needs_interior_lambda(self):
        with pytest.raises(ParameterError):
            transform_mp1_to_mp3(normalized([0.3], [0.3], 1.0))

    @settings(max_examples=200, deadline=None)
    @given(
        lam=st.floats(0.01, 0.99),
        p=st.floats(1.01, 6.0),
        a=st.lists(st.floats(0.01, 1.0), min_size=1, max_size=4),
        seed=st.integers(0, 2**32 - 1),
    )
    def test_reverse_round_trip(self, lam, p, a, seed):
        rng = np.random.default_rng(seed)
        a = np.array(a) * (rng.uniform(0.01, 0.99) / sum(x**p for x in a)) ** (1 / p)
        b = rng.uniform(0.05, 1, size=len(a))
        b = b * (rng.uniform(0.01, 0.99) / sum(b**p)) ** (1 / p)
        inst = normalized(a, b, lam, p)
        back = transform_mp3_to_mp1(*(lambda c: (c.m1, c.m2, c.a, c.b, c.p))(transform_mp1_to_mp3(inst)))
        assert back.lam == pytest.approx(inst.lam, rel=1e-12, abs=0)
        np.testing.assert_allclose(back.a + back.b, inst.a + inst.b, rtol=1e-12, atol=0)


@settings(max_examples=200, deadline=None)
@given(
    lam=st.floats(0, 1),
    p=st.floats(1.01, 6.0),
    pairs=st.lists(st.tuples(st.floats(0.0, 2.0), st.floats(0.0, 2.0)), min_size=1, max_size=5),
)
def test_convexity_step(lam, p, pairs):
    a, b = zip(*pairs)
    left, right = convexity_step(ScalarBellmanInstance(p, a, b, lam=lam))
    assert left >= right - 1e-12 * max(1.0, left)


class TestEmbedding:
    def test_known_embedding(self):
        a, b = embed_scalars([0.6], [0.8], 2.0)
        np.testing.assert_allclose(a.entries, np.diag([0.36, 1.0]), atol=1e-16)
        np.testing.assert_allclose(b.entries, np.diag([0.64, 1.0]), atol=1e-16)

    def test_single_small_entry(self):
        eps = 1e-3
        a, _ = embed_scalars([eps], [0.5], 3.0)
        np.testing.assert_allclose(a.entries, np.diag([eps**3, 1.0]), rtol=1e-15)

    def test_rejects_large_sum(self):
        with pytest.raises(PreconditionError):
            embed_scalars([0.8, 0.8], [0.1], 2.0)
        with pytest.raises(PreconditionError):
            embed_scalars([], [0.1], 2.0)

    def test_operator_path_decomposes_scalar_gap(self):
        vec_a, vec_b, lam, p = [0.6], [0.8], 0.5, 2.0
        a, b = embed_scalars(vec_a, vec_b, p)
        r = check_operator_bellman(make_map("identity", 2), a, b, lam, p)
        # (1,1) entry: first inequality of the reduction, evaluated on scalars
        first = math.sqrt(0.5 * 0.64 + 0.5 * 0.36) - (0.5 * 0.8 + 0.5 * 0.6)
        assert r.gap.entries[0, 0].real == pytest.approx(first, abs=1e-15)
        assert r.gap.entries[1, 1] == 0
        # the convexity step supplies the rest of the normalized scalar gap
        convexity = math.sqrt(1 - 0.7**2) - math.sqrt(1 - 0.5)
        gap3 = scalar_bellman_gap(normalized(vec_a, vec_b, lam), "mp3")
        assert r.gap.entries[0, 0].real + convexity == pytest.approx(gap3, abs=1e-15)

    def test_equal_data_operator_gap_is_scalar_gap(self):
        a, b = embed_scalars([0.7], [0.7], 2.0)
        r = check_operator_bellman(make_map("identity", 2), a, b, 0.3, 2.0)
        assert abs(r.gap.entries[0, 0].real - scalar_bellman_gap(normalized([0.7], [0.7], 0.3), "mp3")) <= 1e-15
