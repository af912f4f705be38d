"""Independent commutative oracle for quantum mutation.

Setting q = 1 (frozen variables kept) must turn every quantum exchange into
the classical two-term relation

    spec(x_k) * spec(x'_k) = prod spec(x_i)^[b_ik]+  +  prod spec(x_i)^[-b_ik]+

with the current exchange matrix.  The right-hand side uses only plain
commutative dict arithmetic, so this cross-checks the torus machinery
(twists, normalization, division) against something that never touches it.
"""

import random

from hypothesis import given, strategies as st

from qcluster.glnsatake import build_gln_pair
from qcluster.qseed import QuantumSeed
from qcluster.qtorus import CommLaurent, QScalar, QuantumTorus


def comm_pow(base: CommLaurent, n: int) -> CommLaurent:
    out = CommLaurent.constant(base.nvars, 1)
    for _ in range(n):
        out = out * base
    return out


def classical_exchange_holds(seed: QuantumSeed, k) -> bool:
    b = seed.pair.b
    col = b.column(k)
    ki = b._pos[k]
    spec = [v.specialize([]) for v in seed.vars]
    mutated = seed.mutate(k)
    lhs = spec[ki] * mutated.vars[ki].specialize([])
    pos = CommLaurent.constant(spec[0].nvars, 1)
    neg = CommLaurent.constant(spec[0].nvars, 1)
    for i, c in enumerate(col):
        if c > 0:
            pos = pos * comm_pow(spec[i], c)
        elif c < 0:
            neg = neg * comm_pow(spec[i], -c)
    return lhs == pos + neg


def capped_walk(seed: QuantumSeed, rng: random.Random, length: int):
    for _ in range(length):
        options = []
        for k in seed.pair.b.exchangeable():
            col = seed.pair.b.column(k)
            deg = max(sum(c for c in col if c > 0), -sum(c for c in col if c < 0))
            if deg <= 6:
                options.append(k)
        k = rng.choice(options)
        yield seed, k
        seed = seed.mutate(k)


def test_exchange_specializes_to_classical_rule():
    rng = random.Random(23)
    for n in (2, 3):
        seed = QuantumSeed.initial(build_gln_pair(n))
        for s, k in capped_walk(seed, rng, 12):
            assert classical_exchange_holds(s, k), (n, s.history, k)


def test_window_walk_specializes_to_classical_rule():
    seed = QuantumSeed.initial(build_gln_pair(3))
    seed.slot_labels = {ix: ix for ix in seed.pair.b.indices}
    for m in range(0, 4):
        for j in (1, 2):
            slot = next(s for s, lab in seed.slot_labels.items() if lab == (j, m))
            assert classical_exchange_holds(seed, slot)
            seed = seed.mutate(slot)
            seed.slot_labels = dict(seed.slot_labels)
            seed.slot_labels[slot] = (j, m + 2)


elements = st.dictionaries(
    st.tuples(*([st.integers(-3, 3)] * 4)),
    st.dictionaries(st.integers(-4, 4), st.integers(-9, 9), min_size=1, max_size=3),
    min_size=1,
    max_size=6,
)

TORUS = QuantumTorus([[0, -2, -2, 0], [2, 0, 0, 2], [2, 0, 0, 4], [0, -2, -4, 0]])


@given(elements, st.integers(-5, 5))
def test_bar_normalize_recovers_shift(terms, s):
    base = TORUS.element({v: QScalar(c) for v, c in terms.items()})
    symmetric = base + base.bar()
    if not symmetric:
        return
    shifted = symmetric.q_shift(-2 * s)
    shift, result = shifted.bar_normalize()
    assert shift == 2 * s
    assert result == symmetric
    assert result.is_bar_invariant()


@given(elements, elements)
def test_specialize_is_multiplicative_at_q_one(terms_a, terms_b):
    a = TORUS.element({v: QScalar(c) for v, c in terms_a.items()})
    b = TORUS.element({v: QScalar(c) for v, c in terms_b.items()})
    assert (a * b).specialize([]) == a.specialize([]) * b.specialize([])
