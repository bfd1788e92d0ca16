"""Command-line front end.

Input is a JSON document, from ``--input FILE`` or standard input::

    {"p": 2,
     "blocks": [{"name": "p1", "f": 2, "signature": [1, 1]}],
     "weights": {"p1.1": "1", "p1.2": "1"}}

Exit status: 0 pass, 1 predicate or verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import certify, cone, hasse, strata
from .datum import DatumError, EmbeddingId, ShimuraDatum
from .oracle import enumerate_strata
from .picard import format_rational, parse_rational

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read_document(path: str | None) -> dict:
    try:
        if path is None or path == "-":
            text = sys.stdin.read()
        else:
            with open(path) as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("input must be a JSON object")
    return doc


def load_input(path: str | None, need_weights: bool = False) -> tuple[ShimuraDatum, dict[EmbeddingId, object]]:
    doc = _read_document(path)
    try:
        datum = ShimuraDatum.from_dict(doc)
        raw = doc.get("weights", {})
        if not isinstance(raw, dict):
            raise InputError("'weights' must be an object")
        weights = {}
        for key, value in raw.items():
            tau = datum.parse_embedding(key)
            if datum.sig(tau) != 1:
                raise InputError(f"weight key {key} is not a signature-1 slot")
            weights[tau] = parse_rational(value)
        if need_weights:
            missing = datum.signature_one - set(weights)
            if missing:
                raise InputError(f"missing weights for {datum.format_stratum(missing)}")
    except (DatumError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    return datum, weights


def _block_arg(datum: ShimuraDatum, name: str | None) -> int:
    if name is None:
        if len(datum.blocks) == 1:
            return 0
        raise InputError("--block is required when the datum has several blocks")
    try:
        return datum.block_index(name)
    except DatumError as exc:
        raise InputError(str(exc)) from exc


def cmd_check(args) -> int:
    datum, t = load_input(args.input, need_weights=True)
    mode = "nef" if args.nef else "ample"
    result = (cone.nef_check if args.nef else cone.ample_check)(datum, t)
    for c in result.constraints:
        print(c.render(datum))
    print(f"{mode}: {'PASS' if result else 'FAIL'}")
    return EXIT_OK if result else EXIT_FAIL


def cmd_matrix(args) -> int:
    datum, _ = load_input(args.input)
    b = _block_arg(datum, args.block)
    try:
        h = hasse.hasse_matrix(datum, b)
    except DatumError as exc:
        raise InputError(str(exc)) from exc
    inv = hasse.hasse_inverse_closed_form(datum, b)
    print("order: " + " ".join(datum.label(tau) for tau in h.labels))
    print("H =")
    print(h.render())
    print("H^-1 =")
    print(inv.render())
    return EXIT_OK


def cmd_lambda(args) -> int:
    datum, t = load_input(args.input)
    b = _block_arg(datum, args.block)
    cyc = datum.signature_one_cycle(b)
    missing = [tau for tau in cyc if tau not in t]
    if missing:
        raise InputError(f"missing weights for {datum.format_stratum(missing)}")
    if not cyc:
        raise InputError(f"block {datum.blocks[b].label!r} has no signature-1 slots")
    for tau, lam in hasse.lambda_coefficients(datum, b, t).items():
        print(f"lambda[{datum.label(tau)}] = {format_rational(lam)}")
    return EXIT_OK


def cmd_strata(args) -> int:
    datum, _ = load_input(args.input)
    entries = enumerate_strata(datum, args.max_size)
    for b, blk in enumerate(datum.blocks):
        print(f"block {blk.label}:")
        mine = [e for e in entries if e.block == b and e.T]
        if not mine:
            print("  ∅ only")
            continue
        for e in mine:
            line = f"  {{{datum.format_stratum(e.T)}}}: {e.kind.value}"
            if e.summary is not None:
                remaining, padding = e.summary["Sigma'_1"], e.summary["I_T"]
                line += f"; Sigma'_1 = {{{remaining}}}; I_T = {{{padding}}}"
            print(line)
    return EXIT_OK


def cmd_induce(args) -> int:
    datum, _ = load_input(args.input)
    try:
        T = datum.parse_stratum(args.stratum)
        desc = strata.describe_stratum(datum, T)
    except (DatumError, strata.StratumError) as exc:
        raise InputError(str(exc)) from exc
    for key, value in desc.summary().items():
        if isinstance(value, list):
            for i, c in enumerate(value, 1):
                print(f"C_{i} = {c}")
        else:
            print(f"{key} = {{{value}}}")
    return EXIT_OK


def cmd_certify(args) -> int:
    datum, t = load_input(args.input, need_weights=True)
    check = (cone.ample_check if args.ample else cone.nef_check)(datum, t)
    if not check:
        for c in check.violations:
            print(c.render(datum))
        print("certify: FAIL (tuple outside the cone)")
        return EXIT_FAIL
    try:
        cert = certify.build_certificate(datum, t, ample=args.ample, max_block_size=args.max_block_size)
    except (certify.CertificationError, cone.ConeError) as exc:
        print(f"certify: FAIL ({exc})")
        return EXIT_FAIL
    text = cert.to_json()
    verdict = certify.verify_certificate(text)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc.strerror}") from exc
    else:
        print(text)
    status = "certify: PASS" if verdict else f"certify: FAIL ({verdict.reason})"
    print(status, file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_verify(args) -> int:
    try:
        with open(args.cert) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.cert}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != certify.FORMAT:
        raise InputError("not a certificate document")
    verdict = certify.verify_certificate(doc)
    print("verify: PASS" if verdict else f"verify: FAIL ({verdict.reason})")
    return EXIT_OK if verdict else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", metavar="FILE", help="input JSON (default: standard input)")

    parser = argparse.ArgumentParser(prog="ampleness", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="test the ample or nef inequalities")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--ample", action="store_true", help="strict inequalities (default)")
    mode.add_argument("--nef", action="store_true", help="non-strict inequalities")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("matrix", parents=[common], help="print a block's Hasse matrix and its inverse")
    p.add_argument("--block", metavar="NAME")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("lambda", parents=[common], help="print lambda = H^-1 t for a block")
    p.add_argument("--block", metavar="NAME")
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("strata", parents=[common], help="list and classify strata")
    p.add_argument("--max-size", type=int, metavar="K")
    p.set_defaults(func=cmd_strata)

    p = sub.add_parser("induce", parents=[common], help="describe a stratum and its induced datum")
    p.add_argument("--stratum", required=True, metavar="b.s,b.s,...")
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("certify", parents=[common], help="build and self-check a nefness certificate")
    p.add_argument("--out", "-o", metavar="FILE")
    p.add_argument("--ample", action="store_true", help="certify ampleness via the Hodge split")
    p.add_argument("--max-block-size", type=int, default=certify.DEFAULT_MAX_BLOCK_SIZE, metavar="N")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="re-check a stored certificate")
    p.add_argument("--cert", required=True, metavar="FILE")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
