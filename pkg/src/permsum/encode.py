"""Graph encoding of phase polynomials: sum_x exp(i f(x)) = multiplier * per(G).

Vertex layout: one anchor per variable first (ascending variable index), then
one gadget block per clause in clause order. A variable's weight-1 cycle runs
from its anchor through the outer vertex it owns in each containing gadget and
back. A cover that uses the cycle sets the variable to 0; a cover that uses
the anchor self-loop instead leaves the gadget outer vertices to be covered
from inside, which sets it to 1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._numeric import unit_phase
from .circuit import HtCircuit, IqpCircuit, extract, extract_iqp, gate_counts
from .errors import DomainError, UnsupportedError
from .gadgets import gadget_matrix
from .permanent import permanent
from .poly import Polynomial


@dataclass(frozen=True, eq=False)
class EncodedGraph:
    adjacency: np.ndarray
    multiplier: complex = 1 + 0j
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        a = np.array(self.adjacency, dtype=np.complex128)
        if a.size == 0:
            a = a.reshape(0, 0)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError("adjacency must be square")
        a.setflags(write=False)
        object.__setattr__(self, "adjacency", a)
        object.__setattr__(self, "multiplier", complex(self.multiplier))

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    def value(self, method: str = "sparse") -> complex:
        """multiplier * per(adjacency)."""
        return self.multiplier * permanent(self.adjacency, method)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, EncodedGraph)
            and np.array_equal(self.adjacency, other.adjacency)
            and self.multiplier == other.multiplier
            and self.meta == other.meta
        )


def encode_polynomial(
    poly: Polynomial, *, cubic_variant: str = "repaired", keep_clause_free: bool = False
) -> EncodedGraph:
    """Encode a polynomial with clauses of degree at most 3.

    Clause-free variables contribute a factor 2 each to the multiplier. With
    ``keep_clause_free`` they also get an isolated anchor (self-loop only),
    which leaves the permanent unchanged.
    """
    for idx, c in enumerate(poly.clauses):
        if c.degree > 3:
            raise UnsupportedError(f"clause {idx} ({c.theta} on vars {list(c.vars)}) has degree {c.degree} > 3")
    occurring = set(poly.occurring_vars())
    anchored = list(range(poly.num_vars)) if keep_clause_free else sorted(occurring)
    anchors = {v: i for i, v in enumerate(anchored)}
    blocks = [gadget_matrix(c.degree, c.theta, variant=cubic_variant) for c in poly.clauses]
    n = len(anchored) + sum(b.order for b in blocks)
    a = np.zeros((n, n), dtype=np.complex128)
    for i in anchors.values():
        a[i, i] = 1.0
    gadget_meta = []
    visits: dict[int, list[int]] = {v: [] for v in occurring}
    start = len(anchored)
    for idx, (c, g) in enumerate(zip(poly.clauses, blocks)):
        stop = start + g.order
        a[start:stop, start:stop] = g.matrix
        for pos, v in enumerate(c.vars):
            visits[v].append(start + pos)
        gadget_meta.append(
            {"clause": idx, "vars": list(c.vars), "theta": c.theta, "start": start, "stop": stop}
        )
        start = stop
    cycles = {}
    for v, outs in visits.items():
        cyc = [anchors[v]] + outs
        for u, w in zip(cyc, cyc[1:] + cyc[:1]):
            a[u, w] = 1.0
        cycles[str(v)] = cyc
    free = poly.num_vars - len(occurring)
    mult = unit_phase(poly.constant_phase) * 2.0**free
    meta = {
        "num_vars": poly.num_vars,
        "anchors": {str(v): i for v, i in anchors.items()},
        "cycles": cycles,
        "gadgets": gadget_meta,
    }
    return EncodedGraph(a, mult, meta)


def encode_zero_zero(
    circuit: IqpCircuit, *, cubic_variant: str = "repaired"
) -> tuple[EncodedGraph, float]:
    """Graph and scale with <0|C|0> = scale * multiplier * per(G)."""
    sop = extract_iqp(circuit, [0] * circuit.q, [0] * circuit.q)
    g = encode_polynomial(sop.poly, cubic_variant=cubic_variant, keep_clause_free=True)
    return g, sop.scale


class NodeCount(NamedTuple):
    M: int
    rudolph: int


def predicted_node_count(circuit: IqpCircuit) -> NodeCount:
    """Vertex count of the zero-zero graph of a single-layer IQP circuit.

    Assumes no two gates act on the same qubit set (otherwise their clauses
    merge and the graph is smaller).
    """
    c = gate_counts(circuit)
    return NodeCount(c.q + c.x + 3 * c.y + 5 * c.z, 2 * c.q + c.x + 3 * c.y + 9 * c.z)


def graph_to_json(g: EncodedGraph) -> dict:
    rows, cols = np.nonzero(g.adjacency)
    entries = [
        [int(i), int(j), float(g.adjacency[i, j].real), float(g.adjacency[i, j].imag)]
        for i, j in sorted(zip(rows.tolist(), cols.tolist()))
    ]
    return {
        "n": g.n,
        "entries": entries,
        "multiplier": [g.multiplier.real, g.multiplier.imag],
        "meta": g.meta,
    }


def export_graph(g: EncodedGraph, fmt: str = "json") -> str:
    """Serialise as sparse JSON or as dense matrix text (the latter drops multiplier and meta)."""
    if fmt == "json":
        return json.dumps(graph_to_json(g), separators=(",", ":"))
    if fmt == "dense":
        from .permanent import write_matrix

        return write_matrix(g.adjacency)
    raise DomainError(f"unknown graph format {fmt!r}")


def load_graph(text: str) -> EncodedGraph:
    """Inverse of :func:`export_graph` for either format."""
    stripped = text.strip()
    if not stripped.startswith("{"):
        from .permanent import read_matrix

        return EncodedGraph(read_matrix(stripped))
    data = json.loads(stripped)
    n = int(data["n"])
    a = np.zeros((n, n), dtype=np.complex128)
    for i, j, re, im in data.get("entries", []):
        a[int(i), int(j)] = complex(re, im)
    mre, mim = data.get("multiplier", [1.0, 0.0])
    return EncodedGraph(a, complex(mre, mim), data.get("meta", {}))


def amplitude_via_graph(
    circuit: IqpCircuit | HtCircuit, a=None, b=None, *, method: str = "sparse"
) -> complex:
    """<b|C|a> (default all zeros) from the permanent of the encoded path polynomial."""
    zeros = [0] * circuit.q
    sop = extract(circuit, zeros if a is None else a, zeros if b is None else b)
    if not sop.feasible:
        return 0j
    g = encode_polynomial(sop.poly, keep_clause_free=True)
    return sop.scale * g.value(method)
