import itertools
import math

import numpy as np
import pytest

from permsum.circuit import amplitude_direct, read_circuit
from permsum.encode import (
    EncodedGraph,
    NodeCount,
    amplitude_via_graph,
    encode_polynomial,
    encode_zero_zero,
    export_graph,
    load_graph,
    predicted_node_count,
)
from permsum.errors import DomainError, UnsupportedError
from permsum.poly import Polynomial, canonicalize, exp_sum

from conftest import EXAMPLE_AMPLITUDE

PI = math.pi


def _random_poly(rng, max_deg=3):
    n = int(rng.integers(1, 6))
    raw = []
    for _ in range(int(rng.integers(0, 7))):
        d = int(rng.integers(1, min(max_deg, n) + 1))
        raw.append((float(rng.uniform(0, 2 * PI)), rng.choice(n, d, replace=False).tolist()))
    return canonicalize(raw, n)


def test_example_graph(example_circuit):
    g, scale = encode_zero_zero(example_circuit)
    assert g.n == 12
    assert scale == 1 / 8
    assert scale * g.value() == pytest.approx(EXAMPLE_AMPLITUDE, abs=1e-12)
    assert predicted_node_count(example_circuit) == NodeCount(12, 19)


def test_layout(example_circuit):
    g, _ = encode_zero_zero(example_circuit)
    meta = g.meta
    assert meta["anchors"] == {"0": 0, "1": 1, "2": 2}
    starts = [(gm["start"], gm["stop"]) for gm in meta["gadgets"]]
    assert starts == [(3, 4), (4, 7), (7, 12)]
    for v, cyc in meta["cycles"].items():
        assert cyc[0] == meta["anchors"][v]
        for u, w in zip(cyc, cyc[1:] + cyc[:1]):
            assert g.adjacency[u, w] != 0


def test_empty_and_trivial():
    g = encode_polynomial(Polynomial(0))
    assert g.n == 0 and g.value() == 1
    g = encode_polynomial(Polynomial(3))
    assert g.value() == 8
    g = encode_polynomial(Polynomial(3), keep_clause_free=True)
    assert g.n == 3 and g.value() == 8


def test_constant_phase_in_multiplier():
    p = canonicalize([(0.5, []), (PI, [0])], 2)
    g = encode_polynomial(p)
    assert g.multiplier == pytest.approx(2 * complex(math.cos(0.5), math.sin(0.5)))
    assert g.value() == pytest.approx(exp_sum(p), abs=1e-12)


def test_identity_random_repaired():
    rng = np.random.default_rng(21)
    for _ in range(150):
        p = _random_poly(rng)
        g = encode_polynomial(p)
        assert abs(g.value() - exp_sum(p)) < 1e-8 * 2**p.num_vars


def test_identity_methods_agree():
    rng = np.random.default_rng(22)
    for _ in range(20):
        p = _random_poly(rng, max_deg=2)
        g = encode_polynomial(p)
        if g.n <= 20:
            assert g.value("ryser") == pytest.approx(g.value("sparse"), abs=1e-8)


def test_published_cubic_breaks_identity():
    p = canonicalize([(1.0, [0, 1, 2])], 3)
    g = encode_polynomial(p, cubic_variant="published")
    assert abs(g.value() - exp_sum(p)) > 1e-3


def test_degree_four_unsupported():
    with pytest.raises(UnsupportedError):
        encode_polynomial(canonicalize([(1.0, [0, 1, 2, 3])], 4))


def test_export_round_trip(example_circuit):
    g, _ = encode_zero_zero(example_circuit)
    text = export_graph(g)
    assert '"n":12' in text and ", " not in text
    assert load_graph(text) == g
    dense = load_graph(export_graph(g, "dense"))
    assert np.array_equal(dense.adjacency, g.adjacency)
    with pytest.raises(DomainError):
        export_graph(g, "xml")


def test_graph_is_read_only(example_circuit):
    g, _ = encode_zero_zero(example_circuit)
    with pytest.raises(ValueError):
        g.adjacency[0, 0] = 2
    with pytest.raises(DomainError):
        EncodedGraph(np.ones((2, 3)))


@pytest.mark.parametrize("name", ["example.iqp", "example.ht", "cz_pair.iqp", "random_pi.iqp"])
def test_graph_path_matches_direct(data_dir, name):
    c = read_circuit((data_dir / name).read_text())
    for a in itertools.product((0, 1), repeat=c.q):
        for b in itertools.product((0, 1), repeat=c.q):
            assert amplitude_via_graph(c, a, b) == pytest.approx(amplitude_direct(c, a, b), abs=1e-8)


def test_node_count_formula_random():
    rng = np.random.default_rng(4)
    from permsum.circuit import IqpCircuit, PhaseGate

    for _ in range(20):
        q = int(rng.integers(1, 6))
        gates = [
            PhaseGate(float(rng.uniform(0.1, 3)), s)
            for r in (1, 2, 3)
            for s in itertools.combinations(range(q), r)
            if rng.random() < 0.5
        ]
        c = IqpCircuit(q, (tuple(gates),))
        g, _ = encode_zero_zero(c)
        assert g.n == predicted_node_count(c).M
