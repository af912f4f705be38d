"""Framed quivers, green sequences, DT permutations."""

import random

import pytest

from qcluster.errors import NotSkewSymmetric, RedVertexMutation
from qcluster.exchange import ExchangeData
from qcluster.glnsatake import build_gln_pair
from qcluster.green import FramedQuiver, is_maximal_green, kedem_sequence, run_green


@pytest.fixture
def framed2():
    return FramedQuiver.frame(build_gln_pair(2).b)


def test_frame_initial_state(framed2):
    assert framed2.vertices == [(1, 0), (1, 1)]
    assert all(framed2.is_green(v) for v in framed2.vertices)
    m = framed2.m
    for i in range(m):
        # exactly one framing arrow v -> v'
        assert framed2.state[i][m + i] == -1
        assert framed2.state[m + i][i] == 1


def test_frame_empty():
    fq = FramedQuiver.frame(ExchangeData([], (), []))
    assert fq.vertices == []
    assert fq.is_maximal_green() == {}


def test_frame_requires_skew_symmetric():
    with pytest.raises(NotSkewSymmetric):
        FramedQuiver.frame(ExchangeData([1, 2], (), [[0, 2], [-1, 0]], validate=False))


def test_mutation_flips_to_red(framed2):
    after = framed2.mutate((1, 0))
    assert after.is_red((1, 0))
    assert after.is_green((1, 1))


def test_kedem_sequences():
    assert kedem_sequence(2) == [(1, 0), (1, 1)]
    assert kedem_sequence(3) == [(1, 0), (2, 0), (1, 1), (2, 1), (1, 0), (2, 0)]
    for n in range(2, 6):
        assert len(kedem_sequence(n)) == n * (n - 1)


def test_kedem_is_maximal_green():
    for n in range(2, 6):
        fq = FramedQuiver.frame(build_gln_pair(n).b)
        final = fq.run_green(kedem_sequence(n))
        assert final.all_red()
        perm = final.is_maximal_green()
        assert perm is not None
        # recorded observation: the permutation is an involution composed
        # with the column swap (k,0) <-> (k,1) depending on the parity of n
        swap = {v: perm[v] for v in perm}
        assert all(swap[swap[v]] == v for v in swap)


def test_red_vertex_rejected(framed2):
    with pytest.raises(RedVertexMutation):
        framed2.run_green([(1, 0), (1, 0)])
    assert run_green(framed2, []) is framed2 or run_green(framed2, []).state == framed2.state


def test_not_maximal_without_all_red():
    b = ExchangeData(["a", "b"], (), [[0, 1], [-1, 0]])
    fq = FramedQuiver.frame(b)
    assert is_maximal_green(fq, ["a"]) is None


def test_green_red_partition_along_random_green_runs():
    rng = random.Random(0)
    for _ in range(20):
        n = rng.choice([2, 3, 4])
        fq = FramedQuiver.frame(build_gln_pair(n).b)
        for _ in range(rng.randint(1, 10)):
            greens = [v for v in fq.vertices if fq.is_green(v)]
            if not greens:
                break
            fq = fq.mutate(rng.choice(greens))
            for v in fq.vertices:
                assert fq.is_green(v) != fq.is_red(v) or fq.framing_arrows_into(v) == 0


def test_wrong_order_spirals_on_double_arrow():
    # the affine double-arrow pair admits an infinite green sequence when
    # started at the wrong column: (1,1) turns green again and the walk
    # never reaches the co-framed state
    fq = FramedQuiver.frame(build_gln_pair(2).b)
    spiral = fq.run_green([(1, 1), (1, 0)])
    assert spiral.is_green((1, 1))
    assert not spiral.all_red()
    assert spiral.is_maximal_green() is None


def test_dot_export(framed2):
    dot = framed2.to_dot()
    assert "palegreen" in dot
    after = framed2.mutate((1, 0))
    assert "lightcoral" in after.to_dot()
