import random
from fractions import Fraction as F
from math import comb

import pytest
from hypothesis import given, strategies as st

from ampleness.certify import sparse_solve
from ampleness.datum import ShimuraDatum
from ampleness.hasse import hasse_inverse_closed_form, hasse_matrix, identity, matmul
from ampleness.oracle import (
    InconsistentSystem,
    SingularMatrixError,
    UnderdeterminedSystem,
    enumerate_strata,
    gauss_inverse,
    solve_linear,
    solve_sparse_directly,
)
from ampleness.strata import StratumClass, classify_stratum

from conftest import E, block_data, hilbert, random_ample_mixed, weights


def test_gauss_inverse_examples():
    assert gauss_inverse([[-1, 2], [2, -1]]) == [[F(1, 3), F(2, 3)], [F(2, 3), F(1, 3)]]
    assert gauss_inverse(identity(3)) == [list(r) for r in identity(3)]
    with pytest.raises(SingularMatrixError):
        gauss_inverse([[1, 1], [1, 1]])


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_gauss_inverse_is_an_inverse(m):
    try:
        inv = gauss_inverse(m)
    except SingularMatrixError:
        return
    assert matmul(m, inv) == identity(len(m))
    assert matmul(inv, m) == identity(len(m))


def test_solve_linear_reports_rank_problems():
    assert solve_linear([[1, 1], [1, -1], [2, 0]], [3, 1, 4]) == [2, 1]
    with pytest.raises(InconsistentSystem):
        solve_linear([[1, 1], [1, 1]], [1, 2])
    with pytest.raises(UnderdeterminedSystem):
        solve_linear([[1, 1]], [1])


def test_solve_sparse_directly_examples():
    d = hilbert(2, 4)
    sol = solve_sparse_directly(d, weights(d, [4, 3, 4, 3]), 0, {E(1), E(3)})
    assert (sol.A, sol.B, sol.U, sol.V) == ({E(1): 1, E(3): 1}, {}, {}, {})
    d = hilbert(2, 3)
    sol = solve_sparse_directly(d, weights(d, [4, 3, 4]), 0, {E(1)})
    assert (sol.A, sol.B) == ({E(1): F(21, 16)}, {E(3): F(5, 4)})
    d = hilbert(2, 2)
    with pytest.raises(InconsistentSystem):
        solve_sparse_directly(d, weights(d, [1, 1]), 0, {E(1)})


@given(block_data(max_n=8, max_gap=4))
def test_closed_form_agrees_with_oracle(d):
    assert gauss_inverse(hasse_matrix(d, 0).entries) == [list(r) for r in hasse_inverse_closed_form(d, 0).entries]


@given(block_data(max_n=8, max_gap=3, min_n=3), st.integers(0, 2 ** 32))
def test_sparse_solve_agrees_with_oracle(d, seed):
    rng = random.Random(seed)
    t = random_ample_mixed(rng, d)
    cyc = d.signature_one_cycle(0)
    start = rng.randrange(len(cyc))
    T = {cyc[(start + 2 * k) % len(cyc)] for k in range(rng.randint(1, len(cyc) // 2))}
    if classify_stratum(d, 0, T) is not StratumClass.SPARSE:
        return
    fast, slow = sparse_solve(d, t, 0, T), solve_sparse_directly(d, t, 0, T)
    assert (fast.S, fast.A, fast.B) == (slow.S, slow.A, slow.B)


def test_enumerate_strata_counts(example_datum):
    kinds = [e.kind for e in enumerate_strata(hilbert(2, 3)) if e.T]
    assert kinds.count(StratumClass.SPARSE) == 3
    assert kinds.count(StratumClass.ADJACENT) == 3
    assert kinds.count(StratumClass.FULL) == 1
    empty = enumerate_strata(ShimuraDatum.build(2, [("p1", (0, 2, 0))]))
    assert [e.T for e in empty] == [frozenset()]
    small = [e for e in enumerate_strata(example_datum, max_size=2) if e.T]
    assert len(small) == comb(6, 1) + comb(6, 2) == 21


def test_enumerate_strata_order_and_summaries():
    entries = enumerate_strata(hilbert(2, 3))
    assert [sorted(tau.slot for tau in e.T) for e in entries] == [[], [1], [2], [3], [1, 2], [1, 3], [2, 3], [1, 2, 3]]
    assert entries[-1].summary is None
    assert entries[1].summary["I_T"] == "p1.2"


@given(block_data(max_n=7))
def test_enumerate_matches_classifier_and_binomials(d):
    entries = enumerate_strata(d)
    N = len(d.signature_one_cycle(0))
    for k in range(N + 1):
        assert sum(1 for e in entries if len(e.T) == k) == comb(N, k)
    for e in entries:
        assert e.kind is classify_stratum(d, 0, e.T)
