"""Brute-force reference computations used to cross-check the main modules.

Nothing here calls the closed-form inverse, ``sparse_solve`` or the strata
classifier; everything is plain exact elimination or direct enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .certify import SparseSolution
from .datum import EmbeddingId, ShimuraDatum
from .picard import PicardClass, RationalLike, hasse_class, omega_class, parse_rational, relations_of, restrict
from .strata import StratumClass, describe_stratum


class OracleError(ValueError):
    pass


class SingularMatrixError(OracleError):
    pass


class InconsistentSystem(OracleError):
    pass


class UnderdeterminedSystem(OracleError):
    pass


def _as_matrix(rows: Sequence[Sequence[RationalLike]]) -> list[list[Fraction]]:
    return [[parse_rational(x) for x in row] for row in rows]


def gauss_inverse(matrix: Sequence[Sequence[RationalLike]]) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan elimination with full pivoting."""
    a = _as_matrix(matrix)
    n = len(a)
    if any(len(row) != n for row in a):
        raise OracleError("matrix is not square")
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    cols = list(range(n))  # cols[k] = original column now at position k
    for k in range(n):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                if a[i][j] and (best is None or abs(a[i][j]) > abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            raise SingularMatrixError("matrix is singular")
        i, j = best
        a[k], a[i] = a[i], a[k]
        inv[k], inv[i] = inv[i], inv[k]
        if j != k:
            for row in a:
                row[k], row[j] = row[j], row[k]
            cols[k], cols[j] = cols[j], cols[k]
        piv = a[k][k]
        a[k] = [x / piv for x in a[k]]
        inv[k] = [x / piv for x in inv[k]]
        for r in range(n):
            if r != k and a[r][k]:
                factor = a[r][k]
                a[r] = [x - factor * y for x, y in zip(a[r], a[k])]
                inv[r] = [x - factor * y for x, y in zip(inv[r], inv[k])]
    # a is now the identity in permuted column order: row k solves for original column cols[k]
    out = [None] * n
    for k in range(n):
        out[cols[k]] = inv[k]
    return out


def solve_linear(matrix: Sequence[Sequence[RationalLike]], rhs: Sequence[RationalLike]) -> list[Fraction]:
    """Unique exact solution of ``M x = b`` for a possibly non-square ``M``."""
    a = _as_matrix(matrix)
    b = [parse_rational(x) for x in rhs]
    m = len(a)
    n = len(a[0]) if a else 0
    rows = [row + [rhs_i] for row, rhs_i in zip(a, b)]
    pivots = []
    r = 0
    for c in range(n):
        pick = next((i for i in range(r, m) if rows[i][c]), None)
        if pick is None:
            continue
        rows[r], rows[pick] = rows[pick], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[n] for row in rows[r:]):
        raise InconsistentSystem("the coefficient-matching system has no solution")
    if len(pivots) < n:
        raise UnderdeterminedSystem(f"rank {len(pivots)} < {n} unknowns")
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = rows[i][n]
    return x


def solve_sparse_directly(
    datum: ShimuraDatum, t: Mapping[EmbeddingId, RationalLike], block: int, T: Iterable[EmbeddingId]
) -> SparseSolution:
    """Match coefficients of ``[omega^t] = sum A_j [omega^{s(j)}] + sum B_a [h_a]`` on ``X_T``.

    The unknowns are one ``A`` per element of ``T`` and one ``B`` per
    signature-1 slot of the block that is neither in ``T`` nor right after an
    element of ``T``.  ``U`` and ``V`` are left empty.
    """
    T = sorted(frozenset(T))
    cyc = datum.signature_one_cycle(block)
    after = {datum.successor(tau) for tau in T}
    aux = [tau for tau in cyc if tau not in T and tau not in after]
    w = {tau: parse_rational(t[tau]) for tau in cyc}
    rel = relations_of(datum, T)

    columns: list[PicardClass] = []
    for tau in T:
        s = {x: y for x, y in w.items() if x not in (tau, datum.successor(tau))}
        columns.append(restrict(omega_class(datum, s), rel))
    for tau in aux:
        columns.append(restrict(hasse_class(datum, tau), rel))
    target = restrict(omega_class(datum, w), rel)

    generators = [tau for tau in cyc if tau not in T]
    matrix = [[col[g] for col in columns] for g in generators]
    x = solve_linear(matrix, [target[g] for g in generators]) if columns else []
    if not columns and not target.is_zero():
        raise InconsistentSystem("no unknowns and a nonzero target")
    A = dict(zip(T, x[: len(T)]))
    B = dict(zip(aux, x[len(T):]))
    return SparseSolution(U={}, V={}, S=sum(A.values(), Fraction(0)), A=A, B=B)


@dataclass(frozen=True)
class StratumEntry:
    block: int
    T: frozenset[EmbeddingId]
    kind: StratumClass
    summary: dict | None


def _brute_class(datum: ShimuraDatum, cyc: Sequence[EmbeddingId], T: frozenset) -> StratumClass:
    if not T:
        return StratumClass.EMPTY
    if len(T) == len(cyc):
        return StratumClass.FULL
    if any(datum.successor(tau) in T for tau in T):
        return StratumClass.ADJACENT
    return StratumClass.SPARSE


def enumerate_strata(datum: ShimuraDatum, max_size: int | None = None) -> list[StratumEntry]:
    """Every subset of each block's signature-1 slots up to ``max_size``.

    Order: block by block, then by size, then lexicographically by slot.  Full
    strata have no induced datum, so their summary is ``None``.
    """
    out = []
    for b in range(len(datum.blocks)):
        cyc = datum.signature_one_cycle(b)
        top = len(cyc) if max_size is None else min(max_size, len(cyc))
        for size in range(top + 1):
            for combo in itertools.combinations(cyc, size):
                T = frozenset(combo)
                kind = _brute_class(datum, cyc, T)
                summary = None if kind is StratumClass.FULL else describe_stratum(datum, T).summary()
                out.append(StratumEntry(b, T, kind, summary))
    return out
