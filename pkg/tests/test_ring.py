"""Lee weight/distance, compositions, entropy: examples, metric axioms, symmetries."""

import math

import numpy as np
import pytest

from leecodes.ring import (RingContext, Composition, lee_weight, lee_weight_vec,
                           lee_distance, composition_of, entropy_nats)
from leecodes.rng import stream_rng


def test_lee_weight_examples():
    assert lee_weight(0, RingContext(7)) == 0
    assert lee_weight(5, RingContext(7)) == 2
    assert lee_weight(4, RingContext(8)) == 4  # self-negative element


def test_lee_weight_domain_error():
    with pytest.raises(ValueError):
        lee_weight(7, RingContext(7))
    with pytest.raises(ValueError):
        lee_weight(-1, RingContext(7))


def test_lee_weight_vec_examples():
    assert lee_weight_vec([0, 0, 0], RingContext(5)) == 0
    assert lee_weight_vec([1, 4, 2], RingContext(5)) == 4
    assert lee_weight_vec([3, 3], RingContext(4)) == 2
    with pytest.raises(ValueError):
        lee_weight_vec([0, 5], RingContext(5))


def test_lee_weight_symmetry_all_q():
    # w(a) = w(q - a) for every a in 1..r
    for q in range(2, 65):
        ctx = RingContext(q)
        for a in range(1, ctx.r + 1):
            assert lee_weight(a, ctx) == lee_weight((q - a) % q, ctx)


def test_lee_weight_vec_bound_and_equality():
    for q in (4, 6, 8):
        ctx = RingContext(q)
        n = 5
        rng = stream_rng(1, q)
        x = rng.integers(0, q, size=n)
        assert lee_weight_vec(x, ctx) <= n * ctx.r
        # all-r vector attains the bound when q is even
        assert lee_weight_vec(np.full(n, ctx.r), ctx) == n * ctx.r


def test_lee_distance_examples():
    ctx = RingContext(5)
    x = np.array([1, 0])
    assert lee_distance(x, x, ctx) == 0
    assert lee_distance([1, 0], [4, 0], ctx) == 2
    with pytest.raises(ValueError):
        lee_distance([1, 0], [1], ctx)


def test_lee_distance_bruteforce_oracle():
    ctx = RingContext(6)
    rng = stream_rng(2, 0)
    for _ in range(50):
        x = rng.integers(0, 6, size=4)
        y = rng.integers(0, 6, size=4)
        want = sum(min((int(a) - int(b)) % 6, (int(b) - int(a)) % 6)
                   for a, b in zip(x, y))
        assert lee_distance(x, y, ctx) == want


def test_metric_axioms_random():
    rng = stream_rng(3, 0)
    for _ in range(100):
        q = int(rng.integers(2, 13))
        n = int(rng.integers(1, 9))
        ctx = RingContext(q)
        x, y, z = (rng.integers(0, q, size=n) for _ in range(3))
        dxy = lee_distance(x, y, ctx)
        assert dxy >= 0
        assert dxy == lee_distance(y, x, ctx)
        assert (dxy == 0) == bool((x == y).all())
        assert dxy <= lee_distance(x, z, ctx) + lee_distance(z, y, ctx)


def test_composition_examples():
    ctx = RingContext(3)
    comp = composition_of([0, 0, 0, 0], ctx)
    assert np.allclose(comp.freqs, [1, 0, 0])
    comp = composition_of([0, 1, 1, 2], ctx)
    assert np.allclose(comp.freqs, [0.25, 0.5, 0.25])
    assert comp.n == 4
    rng = stream_rng(4, 0)
    x = rng.integers(0, 3, size=17)
    assert abs(composition_of(x, ctx).freqs.sum() - 1.0) < 1e-12


def test_composition_empty_vector():
    with pytest.raises(ValueError):
        composition_of([], RingContext(3))


def test_composition_invariant():
    with pytest.raises(ValueError):
        Composition(freqs=np.array([0.5, 0.4]), n=10)


def test_entropy_examples():
    assert entropy_nats([1.0, 0, 0]) == 0.0
    assert abs(entropy_nats(np.full(5, 0.2)) - math.log(5)) < 1e-12
    assert abs(entropy_nats([0.5, 0.5, 0, 0]) - math.log(2)) < 1e-12


def test_entropy_bounds_and_permutation_invariance():
    rng = stream_rng(5, 0)
    for _ in range(30):
        q = int(rng.integers(2, 10))
        p = rng.random(q)
        p /= p.sum()
        h = entropy_nats(p)
        assert 0.0 <= h <= math.log(q) + 1e-12
        assert abs(entropy_nats(rng.permutation(p)) - h) < 1e-12


def test_entropy_domain_errors():
    with pytest.raises(ValueError):
        entropy_nats([0.7, 0.4])
    with pytest.raises(ValueError):
        entropy_nats([1.2, -0.2])


def test_units_and_inverses():
    for q in range(2, 20):
        ctx = RingContext(q)
        for u in ctx.units:
            assert (u * ctx.inverse(u)) % q == 1
        for a in range(q):
            if a not in ctx.units:
                with pytest.raises(ValueError):
                    ctx.inverse(a)
        assert ctx.r == q // 2


def test_ring_context_rejects_tiny_modulus():
    with pytest.raises(ValueError):
        RingContext(1)
