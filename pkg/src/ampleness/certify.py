"""Nefness certificates: the inductive reduction over Goren-Oort strata, made checkable.

A certificate for ``(datum, t)`` holds, for every block, a tree of nodes:

* ``GenericCurve``: ``lambda = H^{-1} t >= 0`` with
  ``sum lambda_i [h_i] = [omega^t]_block``, covering curves outside every stratum.
* one entry per nonempty stratum ``T`` of the block's signature-1 slots:

  - ``FullVanishing``: ``T`` is the whole cycle and the class restricts to zero.
  - ``AdjacentReduction``: ``T`` contains a consecutive pair; the class on that
    pair's stratum is a nef class on a smaller datum (child node).
  - ``SparseDecomposition``: the class on ``X_T`` is
    ``sum A_j [omega^{s(j)}] + sum B_a [h_a]`` with nonnegative coefficients,
    the ``s(j)`` being certified on smaller data (child nodes).
  - ``FiberLeaf``: sparse ``T`` whose coefficient system is degenerate; records
    the fibre degrees ``p^n t_tau - t_{succ tau} >= 0`` and a child on the
    induced datum with ``t`` copied.

Children always have fewer signature-1 slots.  Identical sub-certificates are
shared, so the serialized form stores a node table with references.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .cone import ConeError, ample_check, hodge_split, nef_check, weight_tuple
from .datum import DatumError, EmbeddingId, ShimuraDatum
from .hasse import lambda_coefficients
from .picard import (
    PicardClass,
    RationalLike,
    det_omega_class,
    format_rational,
    hasse_class,
    omega_class,
    parse_rational,
    restrict,
)
from .strata import (
    StratumClass,
    StratumError,
    adjacent_pairs,
    chosen_labels,
    classify_stratum,
    induced_datum,
    pair_datum,
    restriction_relations,
)

FORMAT = "ampleness-certificate"
VERSION = 1
DEFAULT_MAX_BLOCK_SIZE = 12


class CertificationError(ValueError):
    pass


class DegenerateSystem(CertificationError):
    """The sparse coefficient system has no solution (``W = 1``)."""


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


PASS = Verdict(True)


def _fail(reason: str) -> Verdict:
    return Verdict(False, reason)


# --------------------------------------------------------------------------
# local reductions
# --------------------------------------------------------------------------


def _restrict_to(datum: ShimuraDatum, w: Mapping[EmbeddingId, Fraction], keep: Iterable[EmbeddingId]) -> dict:
    return {tau: w[tau] for tau in sorted(keep)}


def adjacent_reduce(
    datum: ShimuraDatum,
    t: Mapping[EmbeddingId, RationalLike],
    block: int,
    pair: tuple[EmbeddingId, EmbeddingId],
) -> tuple[ShimuraDatum, dict[EmbeddingId, Fraction]]:
    """Pass to the stratum of a consecutive pair ``(tau_1, tau_2)``.

    The new datum drops the pair from signature 1; the weight of the pair's
    successor ``tau_3`` becomes ``p^{n_1 + n_2} t_1 - p^{n_2} t_2 + t_3`` and all
    other weights are copied.  When the pair is the whole cycle nothing of the
    block survives.
    """
    first, second = pair
    if first.block != block or second.block != block or datum.sig(first) != 1 or datum.successor(first) != second:
        raise StratumError(f"{pair!r} is not a pair of consecutive signature-1 labels in block {block}")
    if first == second:
        raise StratumError("a pair needs two distinct labels")
    check = nef_check(datum, t)
    if not check:
        raise ConeError(f"tuple is not nef: {len(check.violations)} violated constraint(s)")
    w = weight_tuple(datum, t)
    p = datum.p
    n1, n2 = datum.n_gap(first), datum.n_gap(second)
    third = datum.successor(second)
    reduced = pair_datum(datum, first)
    new_w = _restrict_to(reduced, w, reduced.signature_one)
    if third != first:
        new_w[third] = p ** (n1 + n2) * w[first] - p ** n2 * w[second] + w[third]
    return reduced, new_w


@dataclass(frozen=True)
class SparseSolution:
    """Coefficients of a sparse-stratum decomposition, keyed by embeddings.

    ``U``, ``V``, ``A`` are keyed by the chosen embeddings of ``T``; ``B`` by the
    Hasse indices of the gap segments.
    """

    U: dict[EmbeddingId, Fraction]
    V: dict[EmbeddingId, Fraction]
    S: Fraction
    A: dict[EmbeddingId, Fraction]
    B: dict[EmbeddingId, Fraction]


def _frame(datum: ShimuraDatum, block: int):
    cyc = datum.signature_one_cycle(block)
    return cyc, len(cyc), [datum.n_gap(tau) for tau in cyc]


def _segments(N: int, chosen: list[int]) -> list[list[int]]:
    """For each chosen label ``i_j``: labels ``i_{j-1} + 2, ..., i_j - 1`` (mod N)."""
    out = []
    for j, i in enumerate(chosen):
        prev = chosen[j - 1] if j else chosen[-1] - N
        out.append([a % N for a in range(prev + 2, i)])
    return out


def _u_v(datum: ShimuraDatum, block: int, w: Mapping[EmbeddingId, Fraction], chosen: list[int]):
    cyc, N, gaps = _frame(datum, block)
    p = datum.p
    U, V = [], []
    for i, seg in zip(chosen, _segments(N, chosen)):
        u = Fraction(0)
        for pos, a in enumerate(seg):
            u += p ** sum(gaps[b] for b in seg[pos:]) * w[cyc[a]]
        U.append(u)
        V.append(w[cyc[i]] - Fraction(w[cyc[(i + 1) % N]], p ** gaps[i]))
    return U, V


def sparse_solve(
    datum: ShimuraDatum, t: Mapping[EmbeddingId, RationalLike], block: int, T: Iterable[EmbeddingId]
) -> SparseSolution:
    T = frozenset(T)
    if classify_stratum(datum, block, T) is not StratumClass.SPARSE:
        raise CertificationError("sparse_solve needs a sparse stratum")
    w = {tau: parse_rational(t[tau]) for tau in datum.signature_one_cycle(block)}
    cyc, N, gaps = _frame(datum, block)
    p = datum.p
    chosen = chosen_labels(datum, block, T)
    U, V = _u_v(datum, block, w, chosen)
    for i, v in zip(chosen, V):
        if v <= 0:
            raise ConeError(f"strict inequality fails at {datum.label(cyc[i])}: V = {format_rational(v)}")
    W = sum((u + v) / v for u, v in zip(U, V))
    if W == 1:
        raise DegenerateSystem("W = 1: one chosen label and an empty gap segment")
    S = W / (W - 1)
    A = [(u + v) * (S - 1) / v for u, v in zip(U, V)]
    B = {}
    for seg in _segments(N, chosen):
        prev = None
        for a in seg:
            b = (S - 1) * w[cyc[a]]
            if prev is not None:
                b += p ** gaps[prev] * B[cyc[prev]]
            B[cyc[a]] = b
            prev = a
    keys = [cyc[i] for i in chosen]
    return SparseSolution(dict(zip(keys, U)), dict(zip(keys, V)), S, dict(zip(keys, A)), B)


def sparse_identity_sides(
    datum: ShimuraDatum,
    t: Mapping[EmbeddingId, RationalLike],
    block: int,
    T: Iterable[EmbeddingId],
    A: Mapping[EmbeddingId, Fraction],
    B: Mapping[EmbeddingId, Fraction],
) -> tuple[PicardClass, PicardClass]:
    """Both sides of ``[omega^t] = sum A_j [omega^{s(j)}] + sum B_a [h_a]`` on ``X_T``."""
    T = frozenset(T)
    rel = restriction_relations(datum, T)
    w = {tau: parse_rational(t[tau]) for tau in datum.signature_one_cycle(block)}
    lhs = restrict(omega_class(datum, w), rel)
    rhs = PicardClass(datum)
    for tau, a in A.items():
        dropped = {tau, datum.successor(tau)}
        s = {x: y for x, y in w.items() if x not in dropped}
        rhs = rhs + a * restrict(omega_class(datum, s), rel)
    for tau, b in B.items():
        rhs = rhs + b * restrict(hasse_class(datum, tau), rel)
    return lhs, rhs


def verify_sparse(
    datum: ShimuraDatum,
    t: Mapping[EmbeddingId, RationalLike],
    block: int,
    T: Iterable[EmbeddingId],
    sol: SparseSolution,
) -> Verdict:
    T = frozenset(T)
    try:
        if classify_stratum(datum, block, T) is not StratumClass.SPARSE:
            return _fail("stratum is not sparse")
    except (StratumError, DatumError) as exc:
        return _fail(str(exc))
    cyc, N, _ = _frame(datum, block)
    chosen = chosen_labels(datum, block, T)
    keys = [cyc[i] for i in chosen]
    hasse_keys = {cyc[a] for seg in _segments(N, chosen) for a in seg}
    for name, m in (("U", sol.U), ("V", sol.V), ("A", sol.A)):
        if set(m) != set(keys):
            return _fail(f"{name} is not keyed by the chosen labels")
    if set(sol.B) != hasse_keys:
        return _fail("B is not keyed by the gap-segment Hasse indices")
    w = {tau: parse_rational(t[tau]) for tau in cyc}
    U, V = _u_v(datum, block, w, chosen)
    S = sol.S
    for tau, u, v in zip(keys, U, V):
        lab = datum.label(tau)
        if sol.U[tau] != u:
            return _fail(f"U[{lab}] = {format_rational(sol.U[tau])}, expected {format_rational(u)}")
        if sol.V[tau] != v:
            return _fail(f"V[{lab}] = {format_rational(sol.V[tau])}, expected {format_rational(v)}")
    if sum(sol.A.values(), Fraction(0)) != S:
        return _fail("sum of A differs from S")
    if not S > 1:
        return _fail("S <= 1")
    for tau, u, v in zip(keys, U, V):
        a, lab = sol.A[tau], datum.label(tau)
        if u * a != (u + v) * (1 + a - S) or v * a != (u + v) * (S - 1):
            return _fail(f"U/V equations fail at {lab}")
        if not a > 0:
            return _fail(f"A[{lab}] <= 0")
        if 1 + a - S < 0:
            return _fail(f"1 + A[{lab}] - S < 0")
    for tau, b in sol.B.items():
        if b < 0:
            return _fail(f"B[{datum.label(tau)}] < 0")
    lhs, rhs = sparse_identity_sides(datum, t, block, T, sol.A, sol.B)
    if lhs != rhs:
        return _fail(f"decomposition identity fails: {lhs!r} != {rhs!r}")
    return PASS


# --------------------------------------------------------------------------
# certificate tree
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GenericCurve:
    lambdas: dict[EmbeddingId, Fraction]


@dataclass(frozen=True, eq=False)
class FullVanishing:
    stratum: frozenset[EmbeddingId]


@dataclass(frozen=True, eq=False)
class AdjacentReduction:
    stratum: frozenset[EmbeddingId]
    pair: tuple[EmbeddingId, EmbeddingId]
    child: "BlockCertificate"


@dataclass(frozen=True, eq=False)
class SparseDecomposition:
    stratum: frozenset[EmbeddingId]
    solution: SparseSolution
    children: dict[EmbeddingId, "BlockCertificate"]


@dataclass(frozen=True, eq=False)
class FiberLeaf:
    stratum: frozenset[EmbeddingId]
    fiber_degrees: dict[EmbeddingId, Fraction]
    child: "BlockCertificate"


StratumNode = Union[FullVanishing, AdjacentReduction, SparseDecomposition, FiberLeaf]


@dataclass(frozen=True, eq=False)
class BlockCertificate:
    """Nefness of ``[omega^t]`` on a single-block datum."""

    datum: ShimuraDatum
    weights: dict[EmbeddingId, Fraction]
    generic: GenericCurve | None
    strata: tuple[StratumNode, ...] = field(default=())


@dataclass(frozen=True, eq=False)
class Certificate:
    datum: ShimuraDatum
    weights: dict[EmbeddingId, Fraction]
    claim: str
    blocks: tuple[BlockCertificate, ...]
    epsilon: Fraction | None = None
    shifted: dict[EmbeddingId, Fraction] | None = None

    def to_dict(self) -> dict:
        return _serialize(self)

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent, separators=None if indent else (",", ":"))


CertificateNode = Union[Certificate, BlockCertificate, StratumNode]


class _Builder:
    def __init__(self, max_block_size: int):
        self.max_block_size = max_block_size
        self.memo: dict = {}

    def block(self, datum: ShimuraDatum, w: dict[EmbeddingId, Fraction]) -> BlockCertificate:
        key = (datum, tuple(sorted(w.items())))
        node = self.memo.get(key)
        if node is None:
            node = self.memo[key] = self._build(datum, w)
        return node

    def _build(self, datum: ShimuraDatum, w: dict[EmbeddingId, Fraction]) -> BlockCertificate:
        cyc = datum.signature_one_cycle(0)
        if not cyc:
            return BlockCertificate(datum, {}, None, ())
        if len(cyc) > self.max_block_size:
            raise CertificationError(
                f"block has {len(cyc)} signature-1 slots; limit is {self.max_block_size}"
            )
        lambdas = lambda_coefficients(datum, 0, w)
        if any(x < 0 for x in lambdas.values()):
            raise CertificationError("negative Hasse coefficient for a nef tuple")
        strata: list[StratumNode] = []
        for size in range(1, len(cyc) + 1):
            for T in itertools.combinations(cyc, size):
                strata.append(self._stratum(datum, w, frozenset(T)))
        return BlockCertificate(datum, dict(w), GenericCurve(lambdas), tuple(strata))

    def _stratum(self, datum, w, T) -> StratumNode:
        kind = classify_stratum(datum, 0, T)
        if kind is StratumClass.FULL:
            if not restrict(omega_class(datum, w), restriction_relations(datum, T)).is_zero():
                raise CertificationError("full stratum class does not vanish")
            return FullVanishing(T)
        if kind is StratumClass.ADJACENT:
            pair = adjacent_pairs(datum, 0, T)[0]
            child_datum, child_w = adjacent_reduce(datum, w, 0, pair)
            return AdjacentReduction(T, pair, self.block(child_datum, child_w))
        try:
            sol = sparse_solve(datum, w, 0, T)
        except (DegenerateSystem, ConeError):
            p = datum.p
            degrees = {tau: p ** datum.n_gap(tau) * w[tau] - w[datum.successor(tau)] for tau in sorted(T)}
            child_datum, _ = induced_datum(datum, T)
            child = self.block(child_datum, _restrict_to(child_datum, w, child_datum.signature_one))
            return FiberLeaf(T, degrees, child)
        children = {}
        for tau in sol.A:
            child_datum = pair_datum(datum, tau)
            children[tau] = self.block(child_datum, _restrict_to(child_datum, w, child_datum.signature_one))
        return SparseDecomposition(T, sol, children)


def build_certificate(
    datum: ShimuraDatum,
    t: Mapping[EmbeddingId, RationalLike],
    ample: bool = False,
    max_block_size: int = DEFAULT_MAX_BLOCK_SIZE,
) -> Certificate:
    """Certify that ``[omega^t]`` is nef (or, with ``ample=True``, ample).

    For ``ample=True`` the tuple is first split as ``eps [det omega] + [omega^{t'}]``
    and the block trees certify the nef part ``t'``.
    """
    w = weight_tuple(datum, t)
    check = ample_check(datum, w) if ample else nef_check(datum, w)
    if not check:
        bad = "; ".join(c.render(datum) for c in check.violations)
        raise ConeError(f"tuple is not {'ample' if ample else 'nef'}: {bad}")
    eps = shifted = None
    certified = w
    if ample:
        eps, shifted = hodge_split(datum, w)
        certified = shifted
    builder = _Builder(max_block_size)
    blocks = []
    for b in range(len(datum.blocks)):
        view = datum.block_view(b)
        blocks.append(builder.block(view, {EmbeddingId(0, tau.slot): x for tau, x in certified.items() if tau.block == b}))
    return Certificate(datum, w, "ample" if ample else "nef", tuple(blocks), eps, shifted)


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------


def _labels(datum: ShimuraDatum, m: Mapping[EmbeddingId, Fraction]) -> dict[str, str]:
    return {datum.label(tau): format_rational(x) for tau, x in sorted(m.items())}


def _serialize(cert: Certificate) -> dict:
    ids: dict[int, str] = {}
    nodes: dict[str, dict] = {}
    queue: list[BlockCertificate] = []

    def ref(node: BlockCertificate) -> str:
        if id(node) not in ids:
            ids[id(node)] = f"n{len(ids)}"
            queue.append(node)
        return ids[id(node)]

    root = {
        "datum": cert.datum.to_dict(),
        "weights": _labels(cert.datum, cert.weights),
        "claim": cert.claim,
        "blocks": {blk.label: ref(node) for blk, node in zip(cert.datum.blocks, cert.blocks)},
    }
    if cert.claim == "ample":
        root["epsilon"] = format_rational(cert.epsilon)
        root["shifted"] = _labels(cert.datum, cert.shifted)

    while queue:
        node = queue.pop(0)
        d = node.datum
        entry = {
            "datum": d.to_dict(),
            "weights": _labels(d, node.weights),
            "lambda": _labels(d, node.generic.lambdas) if node.generic else {},
            "strata": [],
        }
        for s in node.strata:
            item = {"T": [d.label(tau) for tau in sorted(s.stratum)]}
            if isinstance(s, FullVanishing):
                item["kind"] = "full"
            elif isinstance(s, AdjacentReduction):
                item.update(kind="adjacent", pair=[d.label(tau) for tau in s.pair], child=ref(s.child))
            elif isinstance(s, SparseDecomposition):
                sol = s.solution
                item.update(
                    kind="sparse",
                    U=_labels(d, sol.U),
                    V=_labels(d, sol.V),
                    S=format_rational(sol.S),
                    A=_labels(d, sol.A),
                    B=_labels(d, sol.B),
                    children={d.label(tau): ref(c) for tau, c in sorted(s.children.items())},
                )
            else:
                item.update(kind="fiber", degrees=_labels(d, s.fiber_degrees), child=ref(s.child))
            entry["strata"].append(item)
        nodes[ids[id(node)]] = entry
    return {"format": FORMAT, "version": VERSION, "root": root, "nodes": nodes}


def dump_certificate(cert: Certificate, path) -> None:
    with open(path, "w") as fh:
        fh.write(cert.to_json())
        fh.write("\n")


def load_certificate(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


# --------------------------------------------------------------------------
# verification (reads only the serialized form)
# --------------------------------------------------------------------------


class _Malformed(Exception):
    pass


def _weights_from(datum: ShimuraDatum, raw) -> dict[EmbeddingId, Fraction]:
    if not isinstance(raw, dict):
        raise _Malformed("weights must be an object")
    try:
        return {datum.parse_embedding(k): parse_rational(v) for k, v in raw.items()}
    except (DatumError, ValueError) as exc:
        raise _Malformed(str(exc)) from exc


class _Verifier:
    def __init__(self, doc: Mapping):
        self.nodes = doc.get("nodes")
        if not isinstance(self.nodes, dict):
            raise _Malformed("missing node table")
        self.done: dict[str, tuple] = {}

    def node(self, node_id) -> tuple[ShimuraDatum, dict]:
        """Verify a node; return its datum and weights."""
        if node_id in self.done:
            return self.done[node_id]
        raw = self.nodes.get(node_id) if isinstance(node_id, str) else None
        if not isinstance(raw, dict):
            raise _Malformed(f"dangling node reference {node_id!r}")
        try:
            datum = ShimuraDatum.from_dict(raw["datum"])
        except (DatumError, KeyError, TypeError) as exc:
            raise _Malformed(f"{node_id}: bad datum: {exc}") from exc
        if len(datum.blocks) != 1:
            raise _Malformed(f"{node_id}: node datum must have one block")
        w = _weights_from(datum, raw.get("weights"))
        self._check_node(node_id, datum, w, raw)
        self.done[node_id] = (datum, w)
        return datum, w

    def _child(self, here: str, parent_size: int, child_id) -> tuple[ShimuraDatum, dict]:
        raw = self.nodes.get(child_id) if isinstance(child_id, str) else None
        try:
            size = sum(1 for s in raw["datum"]["blocks"][0]["signature"] if s == 1)
        except (KeyError, IndexError, TypeError) as exc:
            raise _Malformed(f"{here}: child {child_id!r} unreadable") from exc
        if size >= parent_size:
            raise _Rejected(f"{here}: child {child_id} does not have fewer signature-1 slots")
        return self.node(child_id)

    def _check_node(self, node_id: str, datum: ShimuraDatum, w: dict, raw: dict) -> None:
        cyc = datum.signature_one_cycle(0)
        N = len(cyc)
        if set(w) != set(cyc):
            raise _Rejected(f"{node_id}: weights are not total on the signature-1 slots")
        if not nef_check(datum, w):
            raise _Rejected(f"{node_id}: weights violate the nef inequalities")
        lam = _weights_from(datum, raw.get("lambda"))
        strata = raw.get("strata")
        if not isinstance(strata, list):
            raise _Malformed(f"{node_id}: strata must be a list")
        if N == 0:
            if lam or strata:
                raise _Rejected(f"{node_id}: empty block must carry no data")
            return
        if set(lam) != set(cyc):
            raise _Rejected(f"{node_id}: lambda is not total")
        if any(x < 0 for x in lam.values()):
            raise _Rejected(f"{node_id}: negative lambda")
        combo = PicardClass(datum)
        for tau, x in lam.items():
            combo = combo + x * hasse_class(datum, tau)
        if combo != omega_class(datum, w):
            raise _Rejected(f"{node_id}: sum lambda_i [h_i] differs from [omega^t]")

        seen = set()
        for item in strata:
            if not isinstance(item, dict) or not isinstance(item.get("T"), list):
                raise _Malformed(f"{node_id}: bad stratum entry")
            try:
                T = frozenset(datum.parse_embedding(x) for x in item["T"])
            except DatumError as exc:
                raise _Malformed(f"{node_id}: {exc}") from exc
            if T in seen:
                raise _Rejected(f"{node_id}: stratum {sorted(item['T'])} listed twice")
            seen.add(T)
            where = f"{node_id}[{datum.format_stratum(T)}]"
            try:
                self._check_stratum(where, datum, w, N, T, item)
            except (StratumError, DatumError, ConeError, KeyError, TypeError, ValueError) as exc:
                raise _Rejected(f"{where}: {type(exc).__name__}: {exc}") from exc
        if len(seen) != 2 ** N - 1 or not all(T <= set(cyc) and T for T in seen):
            raise _Rejected(f"{node_id}: strata do not enumerate every nonempty subset")

    def _check_stratum(self, where, datum, w, N, T, item) -> None:
        kind = classify_stratum(datum, 0, T)
        tag = item.get("kind")
        rel = restriction_relations(datum, T)
        expected = {
            StratumClass.FULL: {"full"},
            StratumClass.ADJACENT: {"adjacent"},
            StratumClass.SPARSE: {"sparse", "fiber"},
        }[kind]
        if tag not in expected:
            raise _Rejected(f"{where}: kind {tag!r} but the stratum is {kind.value}")
        if tag == "full":
            if not restrict(omega_class(datum, w), rel).is_zero():
                raise _Rejected(f"{where}: class does not vanish on the full stratum")
            return
        if tag == "adjacent":
            pair = [datum.parse_embedding(x) for x in item["pair"]]
            if len(pair) != 2 or not set(pair) <= T or datum.successor(pair[0]) != pair[1]:
                raise _Rejected(f"{where}: invalid adjacent pair")
            child_datum, child_w = self._child(where, N, item["child"])
            if child_datum != pair_datum(datum, pair[0]):
                raise _Rejected(f"{where}: child datum is not the pair's induced datum")
            expected_w = restrict(omega_class(datum, w), restriction_relations(datum, pair))
            if child_w != {tau: expected_w[tau] for tau in child_datum.signature_one}:
                raise _Rejected(f"{where}: child weights differ from the restricted class")
            return
        if tag == "sparse":
            sol = SparseSolution(
                U=_weights_from(datum, item["U"]),
                V=_weights_from(datum, item["V"]),
                S=parse_rational(item["S"]),
                A=_weights_from(datum, item["A"]),
                B=_weights_from(datum, item["B"]),
            )
            verdict = verify_sparse(datum, w, 0, T, sol)
            if not verdict:
                raise _Rejected(f"{where}: {verdict.reason}")
            children = item["children"]
            if not isinstance(children, dict) or {datum.parse_embedding(k) for k in children} != T:
                raise _Rejected(f"{where}: one child per chosen label is required")
            for key, child_id in sorted(children.items()):
                tau = datum.parse_embedding(key)
                child_datum, child_w = self._child(where, N, child_id)
                if child_datum != pair_datum(datum, tau):
                    raise _Rejected(f"{where}: child for {key} has the wrong datum")
                if child_w != {x: w[x] for x in child_datum.signature_one}:
                    raise _Rejected(f"{where}: child for {key} does not copy t")
            return
        # fiber leaf: only admissible when the sparse system is degenerate
        chosen = chosen_labels(datum, 0, T)
        U, V = _u_v(datum, 0, w, chosen)
        if all(v > 0 for v in V) and sum((u + v) / v for u, v in zip(U, V)) != 1:
            raise _Rejected(f"{where}: fibre leaf used where the sparse system is solvable")
        degrees = _weights_from(datum, item["degrees"])
        if set(degrees) != T:
            raise _Rejected(f"{where}: one fibre degree per element of T is required")
        for tau, deg in degrees.items():
            if deg != datum.p ** datum.n_gap(tau) * w[tau] - w[datum.successor(tau)]:
                raise _Rejected(f"{where}: wrong fibre degree at {datum.label(tau)}")
            if deg < 0:
                raise _Rejected(f"{where}: negative fibre degree at {datum.label(tau)}")
        child_datum, child_w = self._child(where, N, item["child"])
        if child_datum != induced_datum(datum, T)[0]:
            raise _Rejected(f"{where}: child datum is not the induced datum")
        if child_w != {x: w[x] for x in child_datum.signature_one}:
            raise _Rejected(f"{where}: child weights do not copy t")


class _Rejected(Exception):
    pass


def _verify_root(doc: Mapping) -> None:
    if doc.get("format") != FORMAT or doc.get("version") != VERSION:
        raise _Malformed("unknown certificate format or version")
    root = doc.get("root")
    if not isinstance(root, dict):
        raise _Malformed("missing root")
    try:
        datum = ShimuraDatum.from_dict(root["datum"])
    except (DatumError, KeyError, TypeError) as exc:
        raise _Malformed(f"bad root datum: {exc}") from exc
    w = _weights_from(datum, root.get("weights"))
    if set(w) != datum.signature_one:
        raise _Rejected("root weights are not total on the signature-1 embeddings")
    claim = root.get("claim")
    if claim == "nef":
        if not nef_check(datum, w):
            raise _Rejected("root weights are not nef")
        certified = w
    elif claim == "ample":
        if not ample_check(datum, w):
            raise _Rejected("root weights are not ample")
        try:
            eps = parse_rational(root["epsilon"])
        except (KeyError, ValueError) as exc:
            raise _Malformed("ample claim without epsilon") from exc
        shifted = _weights_from(datum, root.get("shifted"))
        if not eps > 0:
            raise _Rejected("epsilon must be positive")
        if set(shifted) != datum.signature_one:
            raise _Rejected("shifted weights are not total")
        if eps * det_omega_class(datum) + omega_class(datum, shifted) != omega_class(datum, w):
            raise _Rejected("eps [det omega] + [omega^t'] differs from [omega^t]")
        certified = shifted
    else:
        raise _Malformed(f"unknown claim {claim!r}")
    blocks = root.get("blocks")
    if not isinstance(blocks, dict) or set(blocks) != {b.label for b in datum.blocks}:
        raise _Rejected("root must reference one node per block")
    verifier = _Verifier(doc)
    for b, blk in enumerate(datum.blocks):
        node_datum, node_w = verifier.node(blocks[blk.label])
        if node_datum != datum.block_view(b):
            raise _Rejected(f"node for block {blk.label} has the wrong datum")
        if node_w != {EmbeddingId(0, tau.slot): x for tau, x in certified.items() if tau.block == b}:
            raise _Rejected(f"node for block {blk.label} certifies different weights")


def verify_certificate(cert: Certificate | Mapping | str) -> Verdict:
    """Re-check every node of a certificate from its serialized form.

    Accepts a ``Certificate``, its ``to_dict()`` form, or JSON text.
    """
    if isinstance(cert, Certificate):
        doc = cert.to_dict()
    elif isinstance(cert, str):
        try:
            doc = json.loads(cert)
        except json.JSONDecodeError as exc:
            return _fail(f"malformed: {exc}")
    else:
        doc = cert
    if not isinstance(doc, Mapping):
        return _fail("malformed: certificate must be a JSON object")
    try:
        _verify_root(doc)
    except _Malformed as exc:
        return _fail(f"malformed: {exc}")
    except _Rejected as exc:
        return _fail(str(exc))
    return PASS
