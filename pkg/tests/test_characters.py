"""Schur rectangle characters and the Q-system identities."""

import random

import pytest

from qcluster.characters import (
    SymPoly,
    classical_cluster_q_system,
    complete_homogeneous,
    dimension_of,
    q_system_check,
    schur_rect,
    schur_rect_by_tableaux,
)
from qcluster.errors import OutOfRange
from qcluster.glnsatake import GLnContext


def test_complete_homogeneous():
    h2 = complete_homogeneous(2, 2)
    assert h2 == SymPoly(2, {(2, 0): 1, (1, 1): 1, (0, 2): 1})
    assert complete_homogeneous(3, 0) == SymPoly.constant(3, 1)
    assert not complete_homogeneous(3, -1)


def test_schur_small():
    assert schur_rect(2, 1, 1) == SymPoly(2, {(1, 0): 1, (0, 1): 1})
    assert schur_rect(3, 2, 0) == SymPoly.constant(3, 1)
    assert schur_rect(2, 2, 3) == SymPoly(2, {(3, 3): 1})
    assert schur_rect(3, 0, 5) == SymPoly.constant(3, 1)


def test_schur_matches_tableaux():
    for n in range(2, 5):
        for k in range(0, n + 1):
            for l in range(0, 4):
                assert schur_rect(n, k, l) == schur_rect_by_tableaux(n, k, l), (n, k, l)


def test_schur_symmetric():
    rng = random.Random(0)
    for n, k, l in [(3, 1, 2), (4, 2, 2), (4, 3, 3), (5, 2, 3)]:
        s = schur_rect(n, k, l)
        for _ in range(20):
            i, j = rng.sample(range(n), 2)
            assert s.swap_variables(i, j) == s


def test_dimensions():
    assert dimension_of(4, 2, 2) == 20
    for l in range(0, 5):
        assert dimension_of(2, 1, l) == l + 1
    for n in range(2, 6):
        for k in range(0, n + 1):
            assert dimension_of(n, k, 0) == 1


def test_q_system_grid():
    assert q_system_check(2, 1, 1)[0]
    assert q_system_check(3, 1, 2)[0]
    for n in range(2, 6):
        for k in range(1, n):
            for l in range(1, 5):
                ok, witness = q_system_check(n, k, l)
                assert ok, (n, k, l, witness)


def test_q_system_range_checks():
    with pytest.raises(OutOfRange):
        q_system_check(3, 3, 1)
    with pytest.raises(OutOfRange):
        schur_rect(3, 4, 1)


def test_cluster_q_system():
    for n in (2, 3):
        ctx = GLnContext(n)
        for k in range(1, n):
            for l in range(0, 4):
                assert classical_cluster_q_system(ctx, k, l), (n, k, l)
