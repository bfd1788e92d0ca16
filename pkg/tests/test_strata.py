import itertools

import pytest
from hypothesis import given, strategies as st

from ampleness.datum import DatumError
from ampleness.strata import (
    StratumClass,
    StratumError,
    adjacent_pairs,
    classify_stratum,
    cycle_decomposition,
    delta_set,
    describe_stratum,
    extend_to_even,
    induced_datum,
    pair_datum,
    restriction_relations,
)

from conftest import E, block_data, hilbert

EXAMPLE_T = {E(2), E(7), E(10)}


def test_cycle_decomposition(example_datum):
    assert cycle_decomposition(example_datum, 0, EXAMPLE_T) == [(E(2),), (E(7), E(10))]
    assert cycle_decomposition(example_datum, 0, ()) == []
    assert cycle_decomposition(hilbert(2, 4), 0, {E(1), E(2), E(3)}) == [(E(1), E(2), E(3))]


def test_chain_wraps_around_the_cycle():
    assert cycle_decomposition(hilbert(2, 4), 0, {E(4), E(1), E(2)}) == [(E(4), E(1), E(2))]


def test_full_cycle_has_no_chains():
    with pytest.raises(StratumError):
        cycle_decomposition(hilbert(2, 3), 0, {E(1), E(2), E(3)})
    with pytest.raises(StratumError):
        induced_datum(hilbert(2, 3), {E(1), E(2), E(3)})


def test_extend_to_even(example_datum):
    cycles = cycle_decomposition(example_datum, 0, EXAMPLE_T)
    assert extend_to_even(example_datum, cycles) == ({E(2), E(5), E(7), E(10)}, {E(5)})
    assert extend_to_even(example_datum, [(E(7), E(10))]) == ({E(7), E(10)}, frozenset())
    assert extend_to_even(example_datum, []) == (frozenset(), frozenset())


def test_delta_set(example_datum):
    assert delta_set(example_datum, 0, EXAMPLE_T) == {E(s) for s in (2, 3, 4, 7, 8, 9)}
    assert delta_set(example_datum, 0, ()) == frozenset()
    assert delta_set(hilbert(2, 4), 0, {E(1)}) == {E(1)}


def test_induced_datum_example(example_datum):
    new, padding = induced_datum(example_datum, EXAMPLE_T)
    assert padding == {E(5)}
    by_sig = {s: {tau.slot for tau in new.embeddings() if new.sig(tau) == s} for s in (0, 1, 2)}
    assert by_sig == {0: {2, 3, 4, 7, 9, 12}, 1: {1, 11}, 2: {5, 6, 8, 10}}


def test_induced_datum_small_cases():
    d = hilbert(2, 2)
    new, padding = induced_datum(d, {E(1)})
    assert (new.sig(E(1)), new.sig(E(2)), padding) == (0, 2, {E(2)})
    same, nothing = induced_datum(d, ())
    assert same == d and nothing == frozenset()


def test_describe_stratum_example(example_datum):
    s = describe_stratum(example_datum, EXAMPLE_T).summary()
    assert s == {
        "T": "p1.2,p1.7,p1.10",
        "cycles": ["{p1.2}", "{p1.7,p1.10}"],
        "T'": "p1.2,p1.5,p1.7,p1.10",
        "T'_0": "p1.2,p1.7",
        "T'_2": "p1.5,p1.10",
        "I_T": "p1.5",
        "Delta(T)": "p1.2,p1.3,p1.4,p1.7,p1.8,p1.9",
        "Sigma'_0": "p1.2,p1.3,p1.4,p1.7,p1.9,p1.12",
        "Sigma'_1": "p1.1,p1.11",
        "Sigma'_2": "p1.5,p1.6,p1.8,p1.10",
    }
    assert describe_stratum(example_datum, EXAMPLE_T).bundle_rank == 1


def test_classify():
    d = hilbert(2, 4)
    assert classify_stratum(d, 0, {E(1), E(2)}) is StratumClass.ADJACENT
    assert classify_stratum(d, 0, {E(1), E(3)}) is StratumClass.SPARSE
    assert classify_stratum(d, 0, {E(1), E(4)}) is StratumClass.ADJACENT
    assert classify_stratum(d, 0, set(d.signature_one)) is StratumClass.FULL
    assert classify_stratum(d, 0, ()) is StratumClass.EMPTY


def test_adjacent_pairs_tie_break():
    d = hilbert(2, 5)
    assert adjacent_pairs(d, 0, {E(2), E(3), E(4)})[0] == (E(2), E(3))
    assert adjacent_pairs(d, 0, {E(5), E(1), E(3)}) == [(E(5), E(1))]


def test_restriction_relations(example_datum):
    assert restriction_relations(hilbert(2, 2), {E(1)}).relations == {E(1): (E(2), 2)}
    assert restriction_relations(example_datum, ()).relations == {}
    powers = [p for _, p in restriction_relations(example_datum, EXAMPLE_T).relations.values()]
    assert powers == [8, 8, 2]
    with pytest.raises(DatumError):
        restriction_relations(example_datum, {E(3)})


def test_pair_datum_covers_two_slot_blocks():
    d = hilbert(3, 2)
    new = pair_datum(d, E(2))
    assert (new.sig(E(2)), new.sig(E(1))) == (0, 2)
    assert not new.signature_one


@given(block_data(max_n=6, max_gap=3), st.data())
def test_induced_datum_invariants(d, data):
    cyc = d.signature_one_cycle(0)
    if len(cyc) < 2:
        return
    T = data.draw(st.sets(st.sampled_from(cyc), max_size=len(cyc) - 1))
    desc = describe_stratum(d, T)
    # the signature-1 count drops by |T'|, an even number
    assert len(d.signature_one) - len(desc.induced.signature_one) == len(desc.T_prime)
    assert len(desc.T_prime) % 2 == 0
    assert desc.T_prime == desc.T_prime_0 | desc.T_prime_2
    assert desc.I_T == desc.T_prime - frozenset(T)
    assert desc.induced.signature_one == d.signature_one - desc.T_prime
    # slots outside T' keep their signature
    for tau in d.embeddings():
        if tau not in desc.T_prime:
            assert desc.induced.sig(tau) == d.sig(tau)


@given(block_data(max_n=7, max_gap=3))
def test_classification_counts(d):
    cyc = d.signature_one_cycle(0)
    N = len(cyc)
    counts = {k: 0 for k in StratumClass}
    for r in range(N + 1):
        for T in itertools.combinations(cyc, r):
            counts[classify_stratum(d, 0, T)] += 1
    assert counts[StratumClass.EMPTY] == 1
    assert counts[StratumClass.FULL] == 1
    assert sum(counts.values()) == 2 ** N
    # independent sets of an N-cycle number L_N (Lucas); drop the empty one
    if N >= 2:
        lucas = [2, 1]
        for _ in range(N):
            lucas.append(lucas[-1] + lucas[-2])
        assert counts[StratumClass.SPARSE] == lucas[N] - 1
