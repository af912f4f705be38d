"""Quantum seed mutation: Laurent data, bar-invariance, exchange shape."""

import random

import pytest

from qcluster.errors import FrozenMutation
from qcluster.glnsatake import EXAMPLE_ORDER_GL2, build_gln_pair
from qcluster.qseed import QuantumSeed


@pytest.fixture
def seed2_example_order():
    return QuantumSeed.initial(build_gln_pair(2).reorder(EXAMPLE_ORDER_GL2))


@pytest.fixture
def seed3():
    return QuantumSeed.initial(build_gln_pair(3))


def test_initial_seed(seed3):
    assert all(len(v) == 1 for v in seed3.vars)
    report = seed3.verify_consistency()
    assert report["passed"], report
    # Lambda matrix of the initial seed is -L entrywise
    for i in range(6):
        for j in range(6):
            lam = seed3.vars[i].lambda_halves(seed3.vars[j])
            assert lam == -2 * seed3.pair.L[i][j]


def test_gl2_mutation_example(seed2_example_order):
    # order (1,1),(1,0),(2,0),(2,1): mutating the first slot gives the
    # two-monomial variable with exponents (-1,0,1,0) and (-1,2,0,0)
    s = seed2_example_order.mutate((1, 1))
    torus = s.torus
    assert s.variable((1, 1)) == torus.monomial((-1, 0, 1, 0)) + torus.monomial((-1, 2, 0, 0))
    report = s.verify_consistency()
    assert report["passed"], report


def test_mutation_involution(seed2_example_order, seed3):
    for seed, k in ((seed2_example_order, (1, 1)), (seed3, (2, 0))):
        back = seed.mutate(k).mutate(k)
        assert back == seed
        assert back.history == [k, k]


def test_frozen_mutation(seed3):
    with pytest.raises(FrozenMutation):
        seed3.mutate((3, 0))


def test_exchange_two_term_shape(seed2_example_order):
    # x_k mu_k(x_k) = q^(-a) M+ + q^(-a-1) M- with gap d_k/2 = 1 q-unit
    s = seed2_example_order
    ap, an, sp, sn = s.exchange_parts((1, 1))
    assert (-sp) - (-sn) == 2  # half-units: positive side higher by d_k/2
    x = s.variable((1, 1))
    xp = s.mutate((1, 1)).variable((1, 1))
    prod = x * xp
    assert prod == ap.q_shift(-sp) + an.q_shift(-sn)
    # the GL_2 identity: q^2 x x' = q M+ + M- with monomial images
    assert prod.q_shift(2 * 2) == ap.q_shift(2) + an
    assert ap == s.torus.monomial((0, 0, 1, 0))
    assert an == s.torus.monomial((0, 2, 0, 0))


def test_exchange_shape_along_walk(seed3):
    rng = random.Random(11)
    s = seed3
    for _ in range(6):
        k = rng.choice(s.pair.b.exchangeable())
        ap, an, sp, sn = s.exchange_parts(k)
        d_k = s.pair.check_compatible()[s.pair.b.exchangeable().index(k)]
        assert (-sp) - (-sn) == d_k
        s2 = s.mutate(k)
        assert s.variable(k) * s2.variable(k) == ap.q_shift(-sp) + an.q_shift(-sn)
        s = s2


def test_run_sequence(seed3):
    assert seed3.run_sequence([]) == seed3
    assert seed3.run_sequence([(1, 0), (1, 0)]) == seed3
    out = seed3.run_sequence([(1, 0), (2, 0), (1, 1)])
    assert out.history == [(1, 0), (2, 0), (1, 1)]
    with pytest.raises(FrozenMutation):
        seed3.run_sequence([(1, 0), (3, 1)])


def test_cluster_monomial(seed3):
    for i, ix in enumerate(seed3.pair.b.indices):
        a = [0] * 6
        a[i] = 1
        assert seed3.cluster_monomial(a) == seed3.vars[i]
    a = [1, 0, 0, 1, 0, 0]
    m = seed3.cluster_monomial(a)
    assert m == seed3.vars[0].odot(seed3.vars[3])
    assert m.is_bar_invariant()
    # squares collapse to plain monomials
    a = [2, 0, 0, 0, 0, 0]
    assert seed3.cluster_monomial(a) == seed3.torus.monomial((2, 0, 0, 0, 0, 0))
    # order independence on a mutated seed
    s = seed3.mutate((1, 0))
    m2 = s.cluster_monomial([1, 1, 0, 0, 0, 0])
    assert m2 == s.vars[1].odot(s.vars[0])


def test_consistency_detects_corruption(seed2_example_order):
    # two mutations leave two genuinely polynomial variables; dropping a term
    # from one breaks its q-commutation with the other (in a one-mutation
    # seed the terms of x' commute uniformly with every monomial, so that
    # corruption would pass the Lambda check)
    s = seed2_example_order.mutate((1, 1)).mutate((1, 0))
    pos = s.pair.b._pos[(1, 0)]
    v = s.vars[pos]
    assert len(v) > 1
    low = min(v.exponents(), key=lambda w: (sum(w), w))
    broken_vars = list(s.vars)
    broken_vars[pos] = v - s.torus.element({low: v.coefficient(low)})
    broken = QuantumSeed(s.pair, s.torus, broken_vars)
    report = broken.verify_consistency()
    assert not report["passed"]
    assert any(f["check"] == "lambda" for f in report["failures"])


def test_random_walk_consistency(seed3):
    rng = random.Random(13)
    s = seed3
    for _ in range(12):
        k = rng.choice(s.pair.b.exchangeable())
        s = s.mutate(k)
    report = s.verify_consistency()
    assert report["passed"], report["failures"][:2]


def test_fingerprint_and_json(seed3):
    s = seed3.mutate((1, 0))
    data = s.to_json()
    restored = QuantumSeed.from_json(data)
    assert restored == s
    assert restored.fingerprint() == s.fingerprint()
    assert seed3.fingerprint() != s.fingerprint()


def test_full_check_mode():
    s = QuantumSeed.initial(build_gln_pair(2), check="full")
    s.mutate((1, 0)).mutate((1, 1))


def test_initial_seeds_consistent_up_to_n5():
    for n in range(2, 6):
        report = QuantumSeed.initial(build_gln_pair(n)).verify_consistency()
        assert report["passed"], (n, report["failures"][:2])


def test_fifty_step_walk_stays_consistent():
    # a long random walk, steered away from the doubly-exponential regime by
    # capping the exchange degree of the mutated column
    rng = random.Random(17)
    s = QuantumSeed.initial(build_gln_pair(3))
    for _ in range(50):
        options = []
        for k in s.pair.b.exchangeable():
            col = s.pair.b.column(k)
            deg = max(sum(c for c in col if c > 0), -sum(c for c in col if c < 0))
            if deg <= 6:
                options.append(k)
        s = s.mutate(rng.choice(options))
    report = s.verify_consistency()
    assert report["passed"], report["failures"][:2]
