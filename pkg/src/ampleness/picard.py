"""Rational Picard classes in the basis ``[omega_tau]`` of signature-1 embeddings.

Classes are finitely supported maps ``EmbeddingId -> Fraction`` tied to a datum.
Restriction to a Goren-Oort stratum is a quotient by the relations
``[omega_tau] + p^{n_tau} [omega_{succ tau}] = 0`` for ``tau`` in the stratum,
computed as a normal form by oriented substitution.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Union

from .datum import DatumError, EmbeddingId, ShimuraDatum

RationalLike = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(value: RationalLike) -> Fraction:
    """Parse ``"a/b"`` or ``"a"`` (or an int / Fraction) exactly.  Floats are rejected."""
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError(f"not a rational: {value!r}")
    m = _RATIONAL_RE.match(value)
    if not m:
        raise ValueError(f"not a rational: {value!r}")
    num, den = m.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {value!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class PicardClass:
    """A formal combination ``sum c_tau [omega_tau]`` over a fixed datum."""

    __slots__ = ("datum", "_coeffs")

    def __init__(self, datum: ShimuraDatum, coeffs: Mapping[EmbeddingId, RationalLike] | None = None):
        self.datum = datum
        clean = {}
        sig1 = datum.signature_one
        for tau, c in (coeffs or {}).items():
            if tau not in sig1:
                raise DatumError(f"{tau!r} is not a signature-1 embedding of the datum")
            c = parse_rational(c)
            if c:
                clean[tau] = c
        self._coeffs = clean

    @classmethod
    def _trusted(cls, datum, coeffs):
        obj = cls.__new__(cls)
        obj.datum = datum
        obj._coeffs = {k: v for k, v in coeffs.items() if v}
        return obj

    @property
    def coeffs(self) -> dict[EmbeddingId, Fraction]:
        return dict(self._coeffs)

    def __getitem__(self, tau: EmbeddingId) -> Fraction:
        return self._coeffs.get(tau, Fraction(0))

    def items(self):
        return sorted(self._coeffs.items())

    def support(self) -> frozenset[EmbeddingId]:
        return frozenset(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other):
        if not isinstance(other, PicardClass):
            return NotImplemented
        return self.datum == other.datum and self._coeffs == other._coeffs

    __hash__ = None

    def __add__(self, other: "PicardClass") -> "PicardClass":
        if not isinstance(other, PicardClass):
            return NotImplemented
        if other.datum is not self.datum and other.datum != self.datum:
            raise DatumError("Picard classes live on different data")
        out = dict(self._coeffs)
        for tau, c in other._coeffs.items():
            out[tau] = out.get(tau, 0) + c
        return PicardClass._trusted(self.datum, out)

    def __neg__(self) -> "PicardClass":
        return PicardClass._trusted(self.datum, {k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other: "PicardClass") -> "PicardClass":
        return self + (-other)

    def __rmul__(self, c: RationalLike) -> "PicardClass":
        c = parse_rational(c)
        return PicardClass._trusted(self.datum, {k: c * v for k, v in self._coeffs.items()})

    def __repr__(self) -> str:
        if not self._coeffs:
            return "0"
        return " + ".join(f"{format_rational(c)}*[w_{self.datum.label(t)}]" for t, c in self.items())

    def to_labels(self) -> dict[str, str]:
        return {self.datum.label(t): format_rational(c) for t, c in self.items()}


def add(a: PicardClass, b: PicardClass) -> PicardClass:
    return a + b


def scale(c: RationalLike, a: PicardClass) -> PicardClass:
    return c * a


def zero_class(datum: ShimuraDatum) -> PicardClass:
    return PicardClass._trusted(datum, {})


def omega_class(datum: ShimuraDatum, weights: Mapping[EmbeddingId, RationalLike]) -> PicardClass:
    """``[omega^t] = sum t_tau [omega_tau]``."""
    return PicardClass(datum, weights)


def hasse_class(datum: ShimuraDatum, tau: EmbeddingId) -> PicardClass:
    """``[h_tau] = p^{n_tau} [omega_{succ tau}] - [omega_tau]``.

    With a single signature-1 slot in the block the two terms collide and the
    class is ``(p^{n_tau} - 1) [omega_tau]``.
    """
    power = datum.p ** datum.n_gap(tau)
    succ = datum.successor(tau)
    if succ == tau:
        return PicardClass._trusted(datum, {tau: Fraction(power - 1)})
    return PicardClass._trusted(datum, {succ: Fraction(power), tau: Fraction(-1)})


def det_omega_class(datum: ShimuraDatum) -> PicardClass:
    return PicardClass._trusted(datum, {tau: Fraction(2) for tau in datum.signature_one})


def block_part(cls: PicardClass, block: int) -> PicardClass:
    return PicardClass._trusted(cls.datum, {t: c for t, c in cls._coeffs.items() if t.block == block})


@dataclass(frozen=True)
class RelationSet:
    """The oriented relations ``[omega_tau] -> -p^{n_tau} [omega_{succ tau}]`` for ``tau`` in T."""

    datum: ShimuraDatum
    stratum: frozenset[EmbeddingId]

    def __post_init__(self):
        object.__setattr__(self, "stratum", frozenset(self.stratum))
        bad = self.stratum - self.datum.signature_one
        if bad:
            raise DatumError(f"stratum elements without signature 1: {sorted(bad)}")

    @cached_property
    def relations(self) -> dict[EmbeddingId, tuple[EmbeddingId, int]]:
        """``tau -> (succ tau, p^{n_tau})``."""
        return {
            tau: (self.datum.successor(tau), self.datum.p ** self.datum.n_gap(tau))
            for tau in sorted(self.stratum)
        }

    @cached_property
    def full_blocks(self) -> frozenset[int]:
        """Blocks whose whole signature-1 cycle lies in the stratum."""
        by_block = {}
        for tau in self.stratum:
            by_block.setdefault(tau.block, set()).add(tau)
        return frozenset(
            b for b, taus in by_block.items() if len(taus) == len(self.datum.signature_one_cycle(b))
        )

    @cached_property
    def _chain_end(self) -> dict[EmbeddingId, tuple[EmbeddingId, Fraction]]:
        # Outside full blocks every substitution chain leaves T after finitely many steps.
        ends = {}
        for tau in self.stratum:
            if tau.block in self.full_blocks:
                continue
            factor = Fraction(1)
            cur = tau
            while cur in self.stratum:
                succ, power = self.relations[cur]
                factor *= -power
                cur = succ
            ends[tau] = (cur, factor)
        return ends

    def relation_class(self, tau: EmbeddingId) -> PicardClass:
        """``[omega_tau] + p^{n_tau} [omega_{succ tau}]``, the class killed on the stratum."""
        succ, power = self.relations[tau]
        if succ == tau:
            return PicardClass._trusted(self.datum, {tau: Fraction(1 + power)})
        return PicardClass._trusted(self.datum, {tau: Fraction(1), succ: Fraction(power)})


def restrict(cls: PicardClass, rel: RelationSet) -> PicardClass:
    """Normal form of ``cls`` on the stratum of ``rel``.

    Every generator in the stratum is rewritten along its substitution chain
    until it leaves the stratum; generators of a block whose full cycle lies in
    the stratum vanish, since the cyclic substitution gives
    ``(1 - (-1)^N p^{sum n}) [omega] = 0``.
    """
    if cls.datum is not rel.datum and cls.datum != rel.datum:
        raise DatumError("class and relations live on different data")
    out: dict[EmbeddingId, Fraction] = {}
    full = rel.full_blocks
    ends = rel._chain_end
    for tau, c in cls._coeffs.items():
        if tau.block in full:
            continue
        if tau in ends:
            tau, factor = ends[tau]
            c = c * factor
        out[tau] = out.get(tau, 0) + c
    return PicardClass._trusted(cls.datum, out)


def relations_of(datum: ShimuraDatum, stratum: Iterable[EmbeddingId]) -> RelationSet:
    return RelationSet(datum, frozenset(stratum))
