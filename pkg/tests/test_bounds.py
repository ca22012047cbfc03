"""RCU bounds, Shannon limit, normal approximation: identities and oracles."""

import math

import numpy as np
import pytest

from leecodes.ring import RingContext, entropy_nats
from leecodes.channels import LeeChannelSpec, beta_from_delta, marginal_phi_star
from leecodes.bounds import (delta_q, h_delta, h_plus_delta, rcu_constant_weight,
                             rcu_memoryless, shannon_limit, symbol_weight_pmf,
                             total_weight_pmf, qfunc, qfunc_inv, capacity_nats,
                             dispersion_nats, na_rate, na_bler)
from leecodes.rng import stream_rng

H_PHI_Q5_D05 = 1.1768539452176797  # entropy of phi*(q=5, delta=0.5), frozen oracle


def test_delta_q_values():
    assert abs(delta_q(RingContext(5)) - 1.2) < 1e-12
    assert abs(delta_q(RingContext(8)) - 2.0) < 1e-12
    assert abs(delta_q(RingContext(2)) - 0.5) < 1e-12


def test_delta_q_is_uniform_mean_weight():
    for q in range(2, 16):
        ctx = RingContext(q)
        assert abs(delta_q(ctx) - ctx.weights().mean()) < 1e-12


def test_h_delta_values():
    ctx = RingContext(5)
    assert abs(h_delta(ctx, 1.2) - math.log(5)) < 1e-7  # uniform marginal
    assert abs(h_delta(ctx, 0.5) - H_PHI_Q5_D05) < 1e-9
    assert h_delta(ctx, 0.0) == 0.0


def test_h_plus_delta_caps_at_log_q():
    ctx = RingContext(5)
    for d in (1.3, 1.7, 2.0):
        assert h_plus_delta(ctx, d) == math.log(5)
    assert h_plus_delta(ctx, 0.5) < math.log(5)


def test_rcu_constant_weight_vacuous_beyond_delta_q():
    ctx = RingContext(5)
    for d in (1.2, 1.5, 2.0):
        assert rcu_constant_weight(ctx, 100, 0.5, d) == 1.0


def test_rcu_constant_weight_example():
    # exp(-100 ((1/2) ln 5 - H_0.1)), H_0.1 reassembled independently
    ctx = RingContext(5)
    beta = beta_from_delta(ctx, 0.1)
    phi = np.exp(-beta * ctx.weights())
    phi /= phi.sum()
    h = float(-(phi[phi > 0] * np.log(phi[phi > 0])).sum())
    want = math.exp(-100 * (0.5 * math.log(5) - h))
    got = rcu_constant_weight(ctx, 100, 0.5, 0.1)
    assert abs(got - want) / want < 1e-9


def test_rcu_exponent_sign_flips_at_shannon_limit():
    ctx = RingContext(5)
    lim = shannon_limit(ctx, 0.5)
    assert rcu_constant_weight(ctx, 50, 0.5, lim - 1e-4) < 1.0
    assert rcu_constant_weight(ctx, 50, 0.5, lim + 1e-4) == 1.0
    # the limit is the zero of the exponent, to bisection accuracy
    f = lambda d: 0.5 * math.log(5) - h_delta(ctx, d)
    assert f(lim - 2e-6) > 0 > f(lim + 2e-6)


def test_shannon_limits_table():
    for q, want in [(5, 0.2684), (7, 0.3560), (8, 0.3950)]:
        got = shannon_limit(RingContext(q), 0.5)
        assert abs(got - want) <= 5e-4, (q, got)


def test_weight_pmf_normalization():
    for q in (5, 7, 8):
        ctx = RingContext(q)
        spec = LeeChannelSpec.from_delta(ctx, 0.37)
        base = symbol_weight_pmf(ctx, spec.beta)
        assert abs(base.sum() - 1.0) < 1e-12
        assert abs(total_weight_pmf(ctx, spec.beta, 64).sum() - 1.0) < 1e-9


def test_weight_pmf_matches_marginal():
    ctx = RingContext(8)
    spec = LeeChannelSpec.from_delta(ctx, 0.6)
    phi = spec.error_pmf()
    base = symbol_weight_pmf(ctx, spec.beta)
    want = np.zeros(ctx.r + 1)
    for a in range(8):
        want[min(a, 8 - a)] += phi[a]
    assert np.allclose(base, want, atol=1e-12)


def test_rcu_memoryless_degenerate_limit():
    # beta large: weight 0 dominates, bound -> exp(-n (1-R) ln q)
    ctx = RingContext(5)
    got = rcu_memoryless(ctx, 20, 0.5, 1e-12)
    want = math.exp(-20 * 0.5 * math.log(5))
    assert abs(got - want) / want < 1e-6


def test_rcu_memoryless_monte_carlo_light():
    # 1e5-draw spot check of the Corollary expectation (full check in acceptance)
    ctx = RingContext(7)
    n, rate, d = 64, 0.5, 0.2
    exact = rcu_memoryless(ctx, n, rate, d)
    spec = LeeChannelSpec.from_delta(ctx, d)
    wpmf = symbol_weight_pmf(ctx, spec.beta)
    rng = stream_rng(20, 0)
    draws = rng.choice(len(wpmf), size=(10**5, n), p=wpmf).sum(axis=1)
    vals = np.array([math.exp(-n * max(0.0, 0.5 * math.log(7) - h_plus_delta(ctx, dd / n)))
                     for dd in range(n * ctx.r + 1)])
    mc = float(vals[draws].mean())
    assert abs(exact - mc) / exact < 0.03


def test_qfunc_inv_accuracy():
    for eps in (1e-12, 1e-9, 1e-6, 1e-3, 0.01, 0.1, 0.25, 0.5 - 1e-9):
        x = qfunc_inv(eps)
        assert abs(qfunc(x) - eps) / eps < 1e-10
    with pytest.raises(ValueError):
        qfunc_inv(0.0)


def test_na_limits():
    ctx = RingContext(7)
    spec = LeeChannelSpec.from_delta(ctx, 0.3)
    c = capacity_nats(spec)
    # dispersion term vanishes with n
    assert abs(na_rate(spec, 10**8, 1e-3) - c / math.log(7)) < 1e-3
    # noiseless channel: C -> ln q, V -> 0
    clean = LeeChannelSpec.from_beta(ctx, 60.0)
    assert abs(capacity_nats(clean) - math.log(7)) < 1e-12
    assert dispersion_nats(clean) < 1e-12
    assert na_bler(clean, 256, 0.99) == 0.0


def test_na_bler_transition_across_shannon_limit():
    ctx = RingContext(7)
    lim = shannon_limit(ctx, 0.5)
    deltas = np.linspace(0.25, 0.45, 9)
    blers = [na_bler(LeeChannelSpec.from_delta(ctx, d), 256, 0.5) for d in deltas]
    assert all(a <= b + 1e-12 for a, b in zip(blers, blers[1:]))  # monotone sweep
    assert na_bler(LeeChannelSpec.from_delta(ctx, lim - 0.08), 256, 0.5) < 0.01
    assert na_bler(LeeChannelSpec.from_delta(ctx, lim + 0.08), 256, 0.5) > 0.95


def test_na_rate_bler_consistency():
    ctx = RingContext(5)
    spec = LeeChannelSpec.from_delta(ctx, 0.2)
    for eps in (0.5, 0.1, 1e-2, 1e-4):
        r = na_rate(spec, 256, eps)
        assert abs(na_bler(spec, 256, r) - eps) / eps < 1e-6


def test_entropy_of_marginal_consistency():
    # h_delta is literally the entropy of the phi* marginal
    ctx = RingContext(8)
    for d in (0.3, 0.9, 1.7):
        assert abs(h_delta(ctx, d) - entropy_nats(marginal_phi_star(ctx, d))) < 1e-12


def test_query_validation():
    ctx = RingContext(5)
    with pytest.raises(ValueError):
        rcu_constant_weight(ctx, 0, 0.5, 0.1)
    with pytest.raises(ValueError):
        rcu_memoryless(ctx, 10, 1.5, 0.1)
    with pytest.raises(ValueError):
        shannon_limit(ctx, 0.0)
