"""Ample and nef cone predicates, and the Hodge epsilon-shift.

Both cones are cut out by one inequality per signature-1 embedding,
``p^{n_tau} t_tau > t_{succ tau}`` (ample, strict) or ``>=`` (nef).  The
non-strict inequalities are known to be sufficient for nefness; ``nef_check``
treats them as the nef criterion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .datum import DatumError, EmbeddingId, ShimuraDatum
from .picard import RationalLike, format_rational, parse_rational

WeightTuple = dict[EmbeddingId, Fraction]


class ConeError(ValueError):
    """A tuple outside the region an operation requires."""


def weight_tuple(datum: ShimuraDatum, t: Mapping[EmbeddingId, RationalLike]) -> WeightTuple:
    """Validate ``t`` as a total map on the signature-1 embeddings and normalise to Fractions."""
    sig1 = datum.signature_one
    extra = set(t) - sig1
    if extra:
        raise DatumError(f"weights on embeddings without signature 1: {sorted(extra)}")
    missing = sig1 - set(t)
    if missing:
        raise DatumError(f"missing weights for {datum.format_stratum(missing)}")
    return {tau: parse_rational(t[tau]) for tau in sorted(sig1)}


@dataclass(frozen=True)
class Constraint:
    tau: EmbeddingId
    target: EmbeddingId
    n: int
    lhs: Fraction
    rhs: Fraction
    strict: bool

    @property
    def holds(self) -> bool:
        return self.lhs > self.rhs if self.strict else self.lhs >= self.rhs

    @property
    def slack(self) -> Fraction:
        return self.lhs - self.rhs

    def render(self, datum: ShimuraDatum) -> str:
        op = ">" if self.strict else ">="
        t = format_rational(self.lhs / datum.p ** self.n)
        return (
            f"{datum.p}^{self.n}*t[{datum.label(self.tau)}] {op} t[{datum.label(self.target)}]: "
            f"{datum.p}^{self.n}*{t} = {format_rational(self.lhs)} {op} {format_rational(self.rhs)}"
            f" -> {'ok' if self.holds else 'VIOLATED'}"
        )


@dataclass(frozen=True)
class ConeCheck:
    constraints: tuple[Constraint, ...]

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.constraints)

    @property
    def violations(self) -> tuple[Constraint, ...]:
        return tuple(c for c in self.constraints if not c.holds)

    def __bool__(self) -> bool:
        return self.holds


def _constraints(datum: ShimuraDatum, t: Mapping[EmbeddingId, RationalLike], strict: bool) -> ConeCheck:
    w = weight_tuple(datum, t)
    out = []
    for tau in sorted(datum.signature_one):
        n = datum.n_gap(tau)
        succ = datum.successor(tau)
        out.append(Constraint(tau, succ, n, datum.p ** n * w[tau], w[succ], strict))
    return ConeCheck(tuple(out))


def ample_check(datum: ShimuraDatum, t: Mapping[EmbeddingId, RationalLike]) -> ConeCheck:
    return _constraints(datum, t, strict=True)


def nef_check(datum: ShimuraDatum, t: Mapping[EmbeddingId, RationalLike]) -> ConeCheck:
    return _constraints(datum, t, strict=False)


def epsilon_max(datum: ShimuraDatum, t: Mapping[EmbeddingId, RationalLike], require_ample: bool = True) -> Fraction:
    """Largest ``eps`` with ``t - 2*eps`` still nef.

    Per constraint the bound is ``(p^n t_tau - t_succ) / (2 (p^n - 1))``.
    """
    check = ample_check(datum, t)
    if require_ample and not check:
        raise ConeError("epsilon_max requires a tuple in the ample cone")
    if not check.constraints:
        raise ConeError("no signature-1 embeddings: the shift is unbounded")
    return min(c.slack / (2 * (datum.p ** c.n - 1)) for c in check.constraints)


def hodge_split(datum: ShimuraDatum, t: Mapping[EmbeddingId, RationalLike]) -> tuple[Fraction, WeightTuple]:
    """Write ``[omega^t] = eps [det omega] + [omega^{t'}]`` with ``t'`` nef and ``eps > 0``.

    ``eps`` is half of ``epsilon_max`` so ``t'`` stays off the cone boundary.
    """
    eps = epsilon_max(datum, t) / 2
    w = weight_tuple(datum, t)
    return eps, {tau: x - 2 * eps for tau, x in w.items()}


def block_weights(t: Mapping[EmbeddingId, Fraction], block: int) -> WeightTuple:
    return {tau: x for tau, x in t.items() if tau.block == block}
