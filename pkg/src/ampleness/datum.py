"""Combinatorial Shimura data: Frobenius-cyclic blocks of embeddings with a 0/1/2 signature.

Each prime above p contributes one block of ``f`` embeddings labelled by slots
``1..f``.  Inverse Frobenius acts on a block by ``slot -> slot + 1`` (wrapping
``f -> 1``).  Only signature-1 embeddings carry Picard generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple


class DatumError(ValueError):
    """Malformed datum or an embedding that does not belong to it."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class EmbeddingId(NamedTuple):
    """A p-adic embedding, addressed by block index and 1-based slot."""

    block: int
    slot: int

    def __repr__(self) -> str:
        return f"tau[{self.block}.{self.slot}]"


@dataclass(frozen=True)
class PrimeBlock:
    label: str
    inertia_degree: int

    def __post_init__(self):
        if self.inertia_degree < 1:
            raise DatumError(f"block {self.label!r}: inertia degree must be >= 1")
        if not self.label or any(c in self.label for c in ".,") or self.label != self.label.strip():
            raise DatumError(f"block label {self.label!r} must be non-empty without '.', ',' or padding")


@dataclass(frozen=True)
class ShimuraDatum:
    """The prime ``p``, its blocks, and the signature of every slot.

    ``signature[b][j - 1]`` is the signature (0, 1 or 2) of slot ``j`` of block ``b``.
    """

    p: int
    blocks: tuple[PrimeBlock, ...]
    signature: tuple[tuple[int, ...], ...] = field(repr=False)

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise DatumError(f"p = {self.p!r} is not a prime")
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(self, "signature", tuple(tuple(s) for s in self.signature))
        if len(self.blocks) != len(self.signature):
            raise DatumError("one signature row per block is required")
        labels = [b.label for b in self.blocks]
        if len(set(labels)) != len(labels):
            raise DatumError(f"duplicate block labels in {labels}")
        for blk, row in zip(self.blocks, self.signature):
            if len(row) != blk.inertia_degree:
                raise DatumError(
                    f"block {blk.label!r}: signature has {len(row)} entries, expected {blk.inertia_degree}"
                )
            if any(s not in (0, 1, 2) for s in row):
                raise DatumError(f"block {blk.label!r}: signatures must be 0, 1 or 2, got {row}")

    @classmethod
    def build(cls, p: int, blocks: Iterable[tuple[str, Iterable[int]]]) -> "ShimuraDatum":
        """Construct from ``(label, signature_row)`` pairs; inertia degrees are the row lengths."""
        rows = [(label, tuple(row)) for label, row in blocks]
        return cls(p, tuple(PrimeBlock(label, len(row)) for label, row in rows), tuple(row for _, row in rows))

    @classmethod
    def hilbert(cls, p: int, degrees: Iterable[int]) -> "ShimuraDatum":
        """All-signature-1 datum: the Hilbert modular specialization."""
        return cls.build(p, ((f"p{i + 1}", (1,) * f) for i, f in enumerate(degrees)))

    # --- lookups -------------------------------------------------------------

    def block_index(self, label: str) -> int:
        for i, blk in enumerate(self.blocks):
            if blk.label == label:
                return i
        raise DatumError(f"unknown block {label!r}")

    def check(self, tau: EmbeddingId) -> EmbeddingId:
        if not isinstance(tau, EmbeddingId) or not 0 <= tau.block < len(self.blocks):
            raise DatumError(f"unknown embedding {tau!r}")
        if not 1 <= tau.slot <= self.blocks[tau.block].inertia_degree:
            raise DatumError(f"slot out of range: {tau!r}")
        return tau

    def sig(self, tau: EmbeddingId) -> int:
        self.check(tau)
        return self.signature[tau.block][tau.slot - 1]

    def embeddings(self, block: int | None = None) -> list[EmbeddingId]:
        blocks = range(len(self.blocks)) if block is None else [block]
        return [EmbeddingId(b, j) for b in blocks for j in range(1, self.blocks[b].inertia_degree + 1)]

    @cached_property
    def signature_one(self) -> frozenset[EmbeddingId]:
        return frozenset(
            EmbeddingId(b, j + 1)
            for b, row in enumerate(self.signature)
            for j, s in enumerate(row)
            if s == 1
        )

    @cached_property
    def _gaps(self) -> dict[EmbeddingId, int]:
        gaps = {}
        for b in range(len(self.blocks)):
            cyc = self.signature_one_cycle(b)
            f = self.blocks[b].inertia_degree
            for i, tau in enumerate(cyc):
                nxt = cyc[(i + 1) % len(cyc)]
                gaps[tau] = (nxt.slot - tau.slot) % f or f
        return gaps

    def label(self, tau: EmbeddingId) -> str:
        """The ``block.slot`` token of an embedding."""
        return f"{self.blocks[tau.block].label}.{tau.slot}"

    def parse_embedding(self, token: str) -> EmbeddingId:
        label, sep, slot = token.strip().rpartition(".")
        if not sep or not slot.isdigit():
            raise DatumError(f"bad embedding token {token!r}; expected 'block.slot'")
        return self.check(EmbeddingId(self.block_index(label), int(slot)))

    def parse_stratum(self, text: str) -> frozenset[EmbeddingId]:
        tokens = [t for t in text.split(",") if t.strip()]
        return frozenset(self.parse_embedding(t) for t in tokens)

    def format_stratum(self, taus: Iterable[EmbeddingId]) -> str:
        return ",".join(self.label(t) for t in sorted(taus))

    # --- Frobenius combinatorics ----------------------------------------------

    def sigma_inverse(self, tau: EmbeddingId, times: int = 1) -> EmbeddingId:
        self.check(tau)
        f = self.blocks[tau.block].inertia_degree
        return EmbeddingId(tau.block, (tau.slot - 1 + times) % f + 1)

    def signature_one_cycle(self, block: int) -> tuple[EmbeddingId, ...]:
        """Signature-1 slots of ``block`` in sigma^{-1} order, from the lowest slot."""
        if not 0 <= block < len(self.blocks):
            raise DatumError(f"unknown block index {block}")
        return tuple(EmbeddingId(block, j + 1) for j, s in enumerate(self.signature[block]) if s == 1)

    def n_gap(self, tau: EmbeddingId) -> int:
        """Smallest n >= 1 with sigma^{-n} tau of signature 1."""
        if self.sig(tau) != 1:
            raise DatumError(f"{self.label(tau)} does not have signature 1")
        return self._gaps[tau]

    def successor(self, tau: EmbeddingId) -> EmbeddingId:
        """The next signature-1 embedding, ``sigma^{-n_gap(tau)} tau``."""
        succ = self._successors.get(tau)
        if succ is None:
            return self.sigma_inverse(tau, self.n_gap(tau))
        return succ

    @cached_property
    def _successors(self) -> dict[EmbeddingId, EmbeddingId]:
        return {tau: self.sigma_inverse(tau, n) for tau, n in self._gaps.items()}

    # --- derived data ---------------------------------------------------------

    def replace_signatures(self, changes: Mapping[EmbeddingId, int]) -> "ShimuraDatum":
        rows = [list(r) for r in self.signature]
        for tau, s in changes.items():
            self.check(tau)
            rows[tau.block][tau.slot - 1] = s
        return ShimuraDatum(self.p, self.blocks, tuple(tuple(r) for r in rows))

    def block_view(self, block: int) -> "ShimuraDatum":
        """The single-block datum carrying only ``block``."""
        return ShimuraDatum(self.p, (self.blocks[block],), (self.signature[block],))

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "blocks": [
                {"name": blk.label, "f": blk.inertia_degree, "signature": list(row)}
                for blk, row in zip(self.blocks, self.signature)
            ],
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "ShimuraDatum":
        try:
            p = doc["p"]
            blocks = doc["blocks"]
            if not isinstance(p, int) or isinstance(p, bool) or not isinstance(blocks, list):
                raise DatumError("'p' must be an integer and 'blocks' a list")
            parsed = []
            for entry in blocks:
                name, f, row = entry["name"], entry["f"], entry["signature"]
                if not isinstance(name, str) or not isinstance(f, int) or not isinstance(row, list):
                    raise DatumError(f"malformed block entry {entry!r}")
                if len(row) != f:
                    raise DatumError(f"block {name!r}: signature length {len(row)} != f = {f}")
                if any(not isinstance(s, int) or isinstance(s, bool) for s in row):
                    raise DatumError(f"block {name!r}: signature entries must be integers")
                parsed.append((name, row))
        except (KeyError, TypeError) as exc:
            raise DatumError(f"malformed datum document: {exc}") from exc
        return cls.build(p, parsed)


def sigma_inverse(datum: ShimuraDatum, tau: EmbeddingId) -> EmbeddingId:
    return datum.sigma_inverse(tau)


def signature_one_cycle(datum: ShimuraDatum, block: int) -> tuple[EmbeddingId, ...]:
    return datum.signature_one_cycle(block)


def n_gap(datum: ShimuraDatum, tau: EmbeddingId) -> int:
    return datum.n_gap(tau)
