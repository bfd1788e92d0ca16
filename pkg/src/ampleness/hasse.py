"""Per-block Hasse transition matrix, its closed-form inverse, and lambda coefficients.

For a block with signature-1 cycle ``tau_1, ..., tau_N`` and gaps ``n_i`` the
matrix ``H`` has ``-1`` on the diagonal and ``p^{n_i}`` in position
``(i + 1, i)`` (cyclically), so that ``H @ lambda = t`` is the statement
``sum lambda_i [h_{tau_i}] = sum t_i [omega_{tau_i}]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .datum import DatumError, EmbeddingId, ShimuraDatum
from .picard import RationalLike, format_rational, parse_rational

Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class HasseMatrix:
    block: int
    labels: tuple[EmbeddingId, ...]
    entries: Matrix

    @property
    def order(self) -> int:
        return len(self.labels)

    def rows(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.entries]

    def render(self) -> str:
        cells = self.rows()
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0])))
        for i in range(len(a))
    )


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def _cycle(datum: ShimuraDatum, block: int) -> tuple[EmbeddingId, ...]:
    cyc = datum.signature_one_cycle(block)
    if not cyc:
        raise DatumError(f"block {datum.blocks[block].label!r} has no signature-1 slots")
    return cyc


def hasse_matrix(datum: ShimuraDatum, block: int) -> HasseMatrix:
    cyc = _cycle(datum, block)
    N = len(cyc)
    p = datum.p
    if N == 1:
        return HasseMatrix(block, cyc, ((Fraction(p ** datum.n_gap(cyc[0]) - 1),),))
    rows = [[Fraction(0)] * N for _ in range(N)]
    for i, tau in enumerate(cyc):
        rows[i][i] = Fraction(-1)
        rows[(i + 1) % N][i] = Fraction(p ** datum.n_gap(tau))
    return HasseMatrix(block, cyc, tuple(tuple(r) for r in rows))


def hasse_inverse_closed_form(datum: ShimuraDatum, block: int) -> HasseMatrix:
    """Entry ``(i, j)`` is ``P/(P-1) * p^{-(n_i + n_{i+1} + ... + n_{j-1})}``.

    ``P = p^{n_1 + ... + n_N}`` and the exponent runs cyclically from ``i`` up
    to ``j - 1``; for ``i >= j`` it wraps past ``N`` (all ``N`` gaps when
    ``i == j``).
    """
    cyc = _cycle(datum, block)
    N = len(cyc)
    p = datum.p
    gaps = [datum.n_gap(tau) for tau in cyc]
    total = p ** sum(gaps)
    lead = Fraction(total, total - 1)
    rows = []
    for i in range(N):
        row = []
        for j in range(N):
            length = j - i if i < j else N + j - i
            exponent = sum(gaps[(i + m) % N] for m in range(length))
            row.append(lead / p ** exponent)
        rows.append(tuple(row))
    return HasseMatrix(block, cyc, tuple(rows))


def lambda_coefficients(
    datum: ShimuraDatum, block: int, t: Mapping[EmbeddingId, RationalLike] | Sequence[RationalLike]
) -> dict[EmbeddingId, Fraction]:
    """``lambda = H^{-1} t`` keyed by the block's signature-1 embeddings.

    ``t`` is either a mapping over (at least) the block's signature-1 slots or
    a sequence in cyclic order.
    """
    inv = hasse_inverse_closed_form(datum, block)
    cyc = inv.labels
    if isinstance(t, Mapping):
        vec = [parse_rational(t[tau]) for tau in cyc]
    else:
        if len(t) != len(cyc):
            raise DatumError(f"expected {len(cyc)} weights for the block, got {len(t)}")
        vec = [parse_rational(x) for x in t]
    return {
        tau: sum((inv.entries[i][k] * vec[k] for k in range(len(cyc))), Fraction(0))
        for i, tau in enumerate(cyc)
    }
