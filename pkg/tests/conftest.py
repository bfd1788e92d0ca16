import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from ampleness.datum import EmbeddingId, ShimuraDatum
from ampleness.picard import format_rational, parse_rational

# the 12-slot block used throughout as the reference worked example
EXAMPLE_ROW = (1, 1, 0, 0, 1, 2, 1, 2, 0, 1, 1, 0)


def E(slot, block=0):
    return EmbeddingId(block, slot)


@pytest.fixture
def example_datum():
    return ShimuraDatum.build(2, [("p1", EXAMPLE_ROW)])


def hilbert(p, f):
    return ShimuraDatum.hilbert(p, [f])


def weights(datum, values, block=0):
    """Weights listed in the block's cyclic order."""
    cyc = datum.signature_one_cycle(block)
    assert len(cyc) == len(values)
    return {tau: Fraction(v) for tau, v in zip(cyc, values)}


def block_row(gaps, rng, offset=0):
    """A signature row whose signature-1 slots have the given gaps (cyclically)."""
    row = []
    for n in gaps:
        row.append(1)
        row.extend(rng.choice((0, 2)) for _ in range(n - 1))
    return row[offset:] + row[:offset]


def random_block_datum(rng, max_n=8, max_gap=4, primes=(2, 3, 5), min_n=1):
    N = rng.randint(min_n, max_n)
    gaps = [rng.randint(1, max_gap) for _ in range(N)]
    row = block_row(gaps, rng, rng.randrange(sum(gaps)))
    return ShimuraDatum.build(rng.choice(primes), [("p1", row)])


def random_ample(rng, datum):
    """A strictly ample tuple: entries in [a, 2a) satisfy every strict inequality."""
    a = Fraction(rng.randint(1, 20), rng.randint(1, 5))
    out = {}
    for tau in sorted(datum.signature_one):
        out[tau] = a + a * Fraction(rng.randint(0, 99), 100)
    return out


def random_ample_mixed(rng, datum, tries=200):
    """Rejection sample from small integers; fall back to the banded construction."""
    for _ in range(tries):
        t = {tau: Fraction(rng.randint(1, 12)) for tau in datum.signature_one}
        if all(datum.p ** datum.n_gap(tau) * t[tau] > t[datum.successor(tau)] for tau in t):
            return t
    return random_ample(rng, datum)


def geometric_boundary(datum, block=0, start=1):
    """t_{i+1} = p^{n_i} t_i along the cycle: every constraint but the last is tight."""
    cyc = datum.signature_one_cycle(block)
    t = {}
    x = Fraction(start)
    for tau in cyc:
        t[tau] = x
        x *= datum.p ** datum.n_gap(tau)
    return t


@st.composite
def block_data(draw, max_n=6, max_gap=3, primes=(2, 3, 5), min_n=1):
    seed = draw(st.integers(0, 2 ** 32))
    return random_block_datum(random.Random(seed), max_n, max_gap, primes, min_n)


@st.composite
def multi_block_data(draw, max_blocks=3, max_f=6, primes=(2, 3, 5)):
    p = draw(st.sampled_from(primes))
    n = draw(st.integers(1, max_blocks))
    rows = [draw(st.lists(st.sampled_from((0, 1, 2)), min_size=1, max_size=max_f)) for _ in range(n)]
    return ShimuraDatum.build(p, [(f"p{i + 1}", row) for i, row in enumerate(rows)])


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


RATIONAL_FIELDS = {"weights", "lambda", "U", "V", "A", "B", "degrees", "shifted"}


def rational_paths(doc):
    """Every location of a serialized rational in a certificate document."""
    out = []
    root = doc["root"]
    for key in ("weights", "shifted"):
        for label in root.get(key, {}):
            out.append(("root", key, label))
    if "epsilon" in root:
        out.append(("root", "epsilon"))
    for node_id, node in doc["nodes"].items():
        for key in ("weights", "lambda"):
            for label in node[key]:
                out.append(("nodes", node_id, key, label))
        for i, item in enumerate(node["strata"]):
            for key in RATIONAL_FIELDS & set(item):
                for label in item[key]:
                    out.append(("nodes", node_id, "strata", i, key, label))
            if "S" in item:
                out.append(("nodes", node_id, "strata", i, "S"))
    return out


def mutate(doc, path, delta):
    """Add ``delta`` to the rational at ``path`` (in place)."""
    target = doc
    for key in path[:-1]:
        target = target[key]
    target[path[-1]] = format_rational(parse_rational(target[path[-1]]) + delta)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
