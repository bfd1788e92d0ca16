"""Goren-Oort stratum combinatorics.

For ``T`` a set of signature-1 embeddings: its decomposition into successor
chains ("cycles"), the even extension ``T'`` with padding set ``I_T``, the
segment set ``Delta(T)``, and the induced datum over which the stratum is a
``(P^1)^{I_T}``-bundle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .datum import DatumError, EmbeddingId, ShimuraDatum
from .picard import RelationSet


class StratumError(ValueError):
    """The stratum violates a precondition, typically a full signature-1 cycle in one block."""


class StratumClass(enum.Enum):
    EMPTY = "empty"
    FULL = "full"
    ADJACENT = "adjacent"
    SPARSE = "sparse"


Cycle = tuple[EmbeddingId, ...]


def _block_subset(datum: ShimuraDatum, block: int, taus: Iterable[EmbeddingId]) -> frozenset[EmbeddingId]:
    taus = frozenset(taus)
    for tau in taus:
        if tau.block != block:
            raise StratumError(f"{tau!r} is not in block {block}")
        if datum.sig(tau) != 1:
            raise StratumError(f"{datum.label(tau)} does not have signature 1")
    return taus


def _split_by_block(datum: ShimuraDatum, T: Iterable[EmbeddingId]) -> dict[int, frozenset[EmbeddingId]]:
    out: dict[int, set] = {}
    for tau in T:
        datum.check(tau)
        out.setdefault(tau.block, set()).add(tau)
    return {b: _block_subset(datum, b, taus) for b, taus in sorted(out.items())}


def is_full(datum: ShimuraDatum, block: int, T_block: frozenset[EmbeddingId]) -> bool:
    cyc = datum.signature_one_cycle(block)
    return bool(cyc) and len(T_block) == len(cyc)


def cycle_decomposition(datum: ShimuraDatum, block: int, T_block: Iterable[EmbeddingId]) -> list[Cycle]:
    """Maximal successor chains inside ``T_block``, ordered by head slot."""
    T_block = _block_subset(datum, block, T_block)
    if not T_block:
        return []
    if is_full(datum, block, T_block):
        raise StratumError(
            f"T covers the whole signature-1 cycle of block {datum.blocks[block].label!r}; chains are undefined"
        )
    heads = sorted(tau for tau in T_block if _predecessor_outside(datum, tau, T_block))
    cycles = []
    for head in heads:
        chain = [head]
        nxt = datum.successor(head)
        while nxt in T_block:
            chain.append(nxt)
            nxt = datum.successor(nxt)
        cycles.append(tuple(chain))
    return cycles


def _predecessor_outside(datum: ShimuraDatum, tau: EmbeddingId, T_block: frozenset) -> bool:
    cyc = datum.signature_one_cycle(tau.block)
    pred = cyc[cyc.index(tau) - 1]
    return pred not in T_block


def even_cycles(datum: ShimuraDatum, cycles: Iterable[Cycle]) -> list[Cycle]:
    """Pad every odd-length chain with the successor of its last element."""
    cycles = list(cycles)
    members = {tau for c in cycles for tau in c}
    out = []
    for c in cycles:
        if len(c) % 2:
            extra = datum.successor(c[-1])
            if extra in members:
                raise StratumError(f"padding element {datum.label(extra)} already lies in T")
            c = c + (extra,)
        out.append(c)
    return out


def extend_to_even(
    datum: ShimuraDatum, cycles: Iterable[Cycle]
) -> tuple[frozenset[EmbeddingId], frozenset[EmbeddingId]]:
    """Return ``(T', I_T)``."""
    cycles = list(cycles)
    original = {tau for c in cycles for tau in c}
    extended = even_cycles(datum, cycles)
    t_prime = frozenset(tau for c in extended for tau in c)
    return t_prime, t_prime - original


def delta_set(datum: ShimuraDatum, block: int, T_block: Iterable[EmbeddingId]) -> frozenset[EmbeddingId]:
    out = set()
    for c in even_cycles(datum, cycle_decomposition(datum, block, T_block)):
        for tau in c[::2]:
            out.update(datum.sigma_inverse(tau, m) for m in range(datum.n_gap(tau)))
    return frozenset(out)


def _alternating_changes(cycles: Iterable[Cycle]) -> dict[EmbeddingId, int]:
    changes = {}
    for c in cycles:
        for pos, tau in enumerate(c):
            changes[tau] = 0 if pos % 2 == 0 else 2
    return changes


def induced_datum(datum: ShimuraDatum, T: Iterable[EmbeddingId]) -> tuple[ShimuraDatum, frozenset[EmbeddingId]]:
    """The datum of the base of the stratum ``X_T``, and the bundle index set ``I_T``.

    Odd positions of each padded chain move to signature 0, even positions to 2.
    Raises StratumError if ``T`` contains a whole signature-1 cycle of a block.
    """
    changes: dict[EmbeddingId, int] = {}
    padding: set[EmbeddingId] = set()
    for b, T_block in _split_by_block(datum, T).items():
        cycles = cycle_decomposition(datum, b, T_block)
        extended = even_cycles(datum, cycles)
        padding.update(tau for c in extended for tau in c if tau not in T_block)
        changes.update(_alternating_changes(extended))
    return datum.replace_signatures(changes), frozenset(padding)


def pair_datum(datum: ShimuraDatum, tau: EmbeddingId) -> ShimuraDatum:
    """Datum after removing ``tau`` (to signature 0) and its successor (to signature 2).

    Agrees with ``induced_datum`` for ``T = {tau}`` and ``T = {tau, succ tau}``
    whenever those are admissible, and also covers a block whose whole cycle is
    that pair.
    """
    succ = datum.successor(tau)
    if succ == tau:
        raise StratumError(f"{datum.label(tau)} is the only signature-1 slot of its block")
    return datum.replace_signatures({tau: 0, succ: 2})


@dataclass(frozen=True)
class StratumDescriptor:
    datum: ShimuraDatum
    T: frozenset[EmbeddingId]
    cycles: tuple[Cycle, ...]
    extended_cycles: tuple[Cycle, ...]
    T_prime: frozenset[EmbeddingId]
    T_prime_0: frozenset[EmbeddingId]
    T_prime_2: frozenset[EmbeddingId]
    I_T: frozenset[EmbeddingId]
    delta: frozenset[EmbeddingId]
    induced: ShimuraDatum

    @property
    def bundle_rank(self) -> int:
        return len(self.I_T)

    def summary(self) -> dict:
        d, lab = self.induced, self.datum.format_stratum
        return {
            "T": lab(self.T),
            "cycles": ["{" + ",".join(self.datum.label(t) for t in c) + "}" for c in self.cycles],
            "T'": lab(self.T_prime),
            "T'_0": lab(self.T_prime_0),
            "T'_2": lab(self.T_prime_2),
            "I_T": lab(self.I_T),
            "Delta(T)": lab(self.delta),
            "Sigma'_0": lab(t for t in d.embeddings() if d.sig(t) == 0),
            "Sigma'_1": lab(t for t in d.embeddings() if d.sig(t) == 1),
            "Sigma'_2": lab(t for t in d.embeddings() if d.sig(t) == 2),
        }


def describe_stratum(datum: ShimuraDatum, T: Iterable[EmbeddingId]) -> StratumDescriptor:
    T = frozenset(T)
    cycles: list[Cycle] = []
    delta: set[EmbeddingId] = set()
    for b, T_block in _split_by_block(datum, T).items():
        cycles.extend(cycle_decomposition(datum, b, T_block))
        delta |= delta_set(datum, b, T_block)
    extended = even_cycles(datum, cycles)
    t_prime = frozenset(tau for c in extended for tau in c)
    induced, padding = induced_datum(datum, T)
    return StratumDescriptor(
        datum=datum,
        T=T,
        cycles=tuple(cycles),
        extended_cycles=tuple(extended),
        T_prime=t_prime,
        T_prime_0=frozenset(tau for c in extended for tau in c[::2]),
        T_prime_2=frozenset(tau for c in extended for tau in c[1::2]),
        I_T=padding,
        delta=frozenset(delta),
        induced=induced,
    )


def chosen_labels(datum: ShimuraDatum, block: int, T_block: Iterable[EmbeddingId]) -> list[int]:
    """0-based positions of ``T_block`` in the block's signature-1 cycle."""
    T_block = _block_subset(datum, block, T_block)
    return [i for i, tau in enumerate(datum.signature_one_cycle(block)) if tau in T_block]


def classify_stratum(datum: ShimuraDatum, block: int, T_block: Iterable[EmbeddingId]) -> StratumClass:
    T_block = _block_subset(datum, block, T_block)
    N = len(datum.signature_one_cycle(block))
    if not T_block:
        return StratumClass.EMPTY
    if len(T_block) == N:
        return StratumClass.FULL
    chosen = set(chosen_labels(datum, block, T_block))
    if any((i + 1) % N in chosen for i in chosen):
        return StratumClass.ADJACENT
    return StratumClass.SPARSE


def adjacent_pairs(datum: ShimuraDatum, block: int, T_block: Iterable[EmbeddingId]) -> list[tuple[EmbeddingId, EmbeddingId]]:
    """Chosen pairs ``(tau_a, tau_{a+1})`` with both labels in ``T_block``, by first label."""
    cyc = datum.signature_one_cycle(block)
    N = len(cyc)
    chosen = set(chosen_labels(datum, block, T_block))
    if N < 2:
        return []
    return [(cyc[i], cyc[(i + 1) % N]) for i in sorted(chosen) if (i + 1) % N in chosen]


def restriction_relations(datum: ShimuraDatum, T: Iterable[EmbeddingId]) -> RelationSet:
    T = frozenset(T)
    for tau in T:
        if datum.sig(tau) != 1:
            raise DatumError(f"{datum.label(tau)} does not have signature 1")
    return RelationSet(datum, T)
