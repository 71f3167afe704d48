"""Circuits, sum-over-paths extraction and amplitude oracles.

Variables are numbered as they are created: inputs ``0..q-1`` first, then one
fresh variable per Hadamard in gate order. Wire contents are tracked as F2
polynomials (sets of monomials, each monomial a frozenset of variables).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ._numeric import unit_phase
from .errors import DomainError, UnsupportedError
from .poly import Polynomial, canonicalize, exp_sum, substitute, wrap_angle
from .resources import GateCounts

Monomial = frozenset
F2Poly = frozenset  # frozenset of Monomial, read as an XOR of products


@dataclass(frozen=True)
class PhaseGate:
    theta: float
    qubits: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(int(w) for w in self.qubits))
        if not 1 <= len(self.qubits) <= 3:
            raise DomainError("phase gates act on 1 to 3 qubits")
        if len(set(self.qubits)) != len(self.qubits) or min(self.qubits) < 0:
            raise DomainError(f"bad phase-gate qubits {self.qubits}")


@dataclass(frozen=True)
class H:
    wire: int


@dataclass(frozen=True)
class Toffoli:
    c1: int
    c2: int
    target: int

    def __post_init__(self) -> None:
        if len({self.c1, self.c2, self.target}) != 3:
            raise DomainError("Toffoli wires must be distinct")


Op = Union[H, Toffoli, PhaseGate]


@dataclass(frozen=True)
class HtCircuit:
    q: int
    ops: tuple[Op, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ops", tuple(self.ops))
        if self.q < 1:
            raise DomainError("circuit needs at least one qubit")
        for op in self.ops:
            wires = _wires(op)
            if max(wires) >= self.q or min(wires) < 0:
                raise DomainError(f"{op} touches a wire outside 0..{self.q - 1}")

    @property
    def hadamard_count(self) -> int:
        return sum(isinstance(op, H) for op in self.ops)


@dataclass(frozen=True)
class IqpCircuit:
    """H layer, then alternating diagonal layers and H layers."""

    q: int
    layers: tuple[tuple[PhaseGate, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "layers", tuple(tuple(layer) for layer in self.layers))
        if self.q < 1:
            raise DomainError("circuit needs at least one qubit")
        if not self.layers:
            raise DomainError("an IQP circuit has at least one diagonal layer")
        for layer in self.layers:
            for g in layer:
                if max(g.qubits) >= self.q:
                    raise DomainError(f"gate {g} touches a qubit outside 0..{self.q - 1}")

    @property
    def hadamard_count(self) -> int:
        return self.q * (len(self.layers) + 1)

    def gates(self) -> list[PhaseGate]:
        return [g for layer in self.layers for g in layer]

    def to_ht(self) -> HtCircuit:
        ops: list[Op] = [H(w) for w in range(self.q)]
        for layer in self.layers:
            ops.extend(layer)
            ops.extend(H(w) for w in range(self.q))
        return HtCircuit(self.q, tuple(ops))


@dataclass(frozen=True)
class SumOverPaths:
    """Amplitude <b|C|a> = sum_x exp(i f(x)) / sqrt(2)^h over the free variables.

    ``poly`` is the reduced polynomial after boundary substitution and
    ``full_poly`` the polynomial over all ``q + h`` path variables.
    ``free_vars[k]`` is the path variable behind reduced variable ``k``.
    When ``feasible`` is false the boundary conditions contradict each
    other and the amplitude is zero.
    """

    poly: Polynomial
    h: int
    input_vars: tuple[int, ...]
    output_conditions: tuple[tuple[tuple[int, ...], ...], ...]
    var_labels: dict[int, str]
    full_poly: Polynomial
    free_vars: tuple[int, ...]
    feasible: bool = True

    @property
    def scale(self) -> float:
        return 2.0 ** (-self.h / 2.0)


def _wires(op: Op) -> tuple[int, ...]:
    if isinstance(op, H):
        return (op.wire,)
    if isinstance(op, Toffoli):
        return (op.c1, op.c2, op.target)
    return op.qubits


def _f2_mul(p: F2Poly, r: F2Poly) -> F2Poly:
    out: set = set()
    for a in p:
        for b in r:
            out ^= {a | b}
    return frozenset(out)


def _bits(bits: str | Sequence[int], q: int, what: str) -> tuple[int, ...]:
    vals = tuple(int(ch) for ch in bits)
    if len(vals) != q or any(v not in (0, 1) for v in vals):
        raise DomainError(f"{what} must be {q} bits, got {bits!r}")
    return vals


def _sorted_expr(expr: F2Poly) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(m)) for m in expr))


def extract_ht(circuit: HtCircuit, input_bits, output_bits) -> SumOverPaths:
    """Sum-over-paths polynomial of a circuit over {H, Toffoli, phase}."""
    q = circuit.q
    a = _bits(input_bits, q, "input bits")
    b = _bits(output_bits, q, "output bits")
    wires: list[F2Poly] = [frozenset({Monomial({j})}) for j in range(q)]
    labels = {j: f"in[{j}]" for j in range(q)}
    raw: list[tuple[float, tuple[int, ...]]] = []
    nv = q
    for op in circuit.ops:
        if isinstance(op, H):
            y = nv
            nv += 1
            labels[y] = f"H#{y - q} on wire {op.wire}"
            for m in wires[op.wire]:
                raw.append((math.pi, tuple(m | {y})))
            wires[op.wire] = frozenset({Monomial({y})})
        elif isinstance(op, Toffoli):
            wires[op.target] = wires[op.target] ^ _f2_mul(wires[op.c1], wires[op.c2])
        else:
            theta = wrap_angle(op.theta)
            if theta == 0.0:
                continue
            if theta == wrap_angle(math.pi):
                prod: F2Poly = frozenset({Monomial()})
                for w in op.qubits:
                    prod = _f2_mul(prod, wires[w])
                raw.extend((math.pi, tuple(m)) for m in prod)
                continue
            vs = []
            for w in op.qubits:
                expr = wires[w]
                if len(expr) != 1 or len(next(iter(expr))) != 1:
                    raise UnsupportedError(
                        f"phase {op.theta} on wire {w} holding composite expression "
                        f"{_sorted_expr(expr)}"
                    )
                vs.append(next(iter(next(iter(expr)))))
            raw.append((theta, tuple(vs)))
    full = canonicalize(raw, nv)

    fixed = {j: a[j] for j in range(q)}
    feasible = True
    for j, expr in enumerate(wires):
        if not expr:
            feasible &= b[j] == 0
            continue
        if len(expr) != 1 or len(next(iter(expr))) != 1:
            raise UnsupportedError(
                f"output wire {j} holds composite expression {_sorted_expr(expr)}"
            )
        (v,) = next(iter(expr))
        if fixed.get(v, b[j]) != b[j]:
            feasible = False
        fixed[v] = b[j]
    reduced, keep = substitute(full, fixed, return_map=True)
    return SumOverPaths(
        poly=reduced,
        h=nv - q,
        input_vars=tuple(range(q)),
        output_conditions=tuple(_sorted_expr(e) for e in wires),
        var_labels=labels,
        full_poly=full,
        free_vars=keep,
        feasible=feasible,
    )


def extract_iqp(circuit: IqpCircuit, input_bits, output_bits) -> SumOverPaths:
    """Sum-over-paths polynomial of an IQP circuit with fixed boundary bits."""
    return extract_ht(circuit.to_ht(), input_bits, output_bits)


def extract(circuit: IqpCircuit | HtCircuit, input_bits, output_bits) -> SumOverPaths:
    if isinstance(circuit, IqpCircuit):
        return extract_iqp(circuit, input_bits, output_bits)
    return extract_ht(circuit, input_bits, output_bits)


def amplitude_direct(
    circuit: IqpCircuit | HtCircuit, a, b, *, max_vars: int | None = None, threads: int = 1
) -> complex:
    """<b|C|a> from the brute-force exponential sum of the path polynomial."""
    sop = extract(circuit, a, b)
    if not sop.feasible:
        return 0j
    return sop.scale * exp_sum(sop.poly, max_vars=max_vars, threads=threads)


def gate_counts(circuit: IqpCircuit) -> GateCounts:
    """Occurrences of 1-, 2- and 3-qubit phase gates (duplicates counted)."""
    deg = [0, 0, 0, 0]
    for g in circuit.gates():
        deg[len(g.qubits)] += 1
    return GateCounts(q=circuit.q, x=deg[1], y=deg[2], z=deg[3], layers=len(circuit.layers))


def statevector(circuit: IqpCircuit | HtCircuit, input_bits) -> np.ndarray:
    """Dense simulation; basis index bit j is qubit j. Test oracle for q <= 12."""
    ht = circuit.to_ht() if isinstance(circuit, IqpCircuit) else circuit
    q = ht.q
    if q > 12:
        raise DomainError("dense simulation is limited to 12 qubits")
    a = _bits(input_bits, q, "input bits")
    dim = 1 << q
    psi = np.zeros(dim, dtype=np.complex128)
    psi[sum(bit << j for j, bit in enumerate(a))] = 1.0
    idx = np.arange(dim)
    s = 1.0 / math.sqrt(2.0)
    for op in ht.ops:
        if isinstance(op, H):
            m = 1 << op.wire
            lo = idx[(idx & m) == 0]
            x0, x1 = psi[lo].copy(), psi[lo | m].copy()
            psi[lo], psi[lo | m] = s * (x0 + x1), s * (x0 - x1)
        elif isinstance(op, Toffoli):
            c = (1 << op.c1) | (1 << op.c2)
            t = 1 << op.target
            sel = idx[((idx & c) == c) & ((idx & t) == 0)]
            psi[sel], psi[sel | t] = psi[sel | t].copy(), psi[sel].copy()
        else:
            m = sum(1 << w for w in op.qubits)
            psi[(idx & m) == m] *= unit_phase(op.theta)
    return psi


def amplitude_statevector(circuit: IqpCircuit | HtCircuit, a, b) -> complex:
    q = circuit.q
    bb = _bits(b, q, "output bits")
    return complex(statevector(circuit, a)[sum(bit << j for j, bit in enumerate(bb))])


_SHORTHAND = {"z": 1, "cz": 2, "ccz": 3}


def _parse_gate(toks: list[str], lineno: int) -> Op:
    name = toks[0].lower()
    try:
        if name == "p":
            return PhaseGate(float(toks[1]), tuple(int(t) for t in toks[2:]))
        if name in _SHORTHAND:
            ws = tuple(int(t) for t in toks[1:])
            if len(ws) != _SHORTHAND[name]:
                raise DomainError(f"line {lineno}: {name} takes {_SHORTHAND[name]} wires")
            return PhaseGate(math.pi, ws)
        if name == "h":
            (w,) = toks[1:]
            return H(int(w))
        if name == "ccx":
            c1, c2, t = (int(x) for x in toks[1:])
            return Toffoli(c1, c2, t)
    except (ValueError, IndexError) as exc:
        raise DomainError(f"line {lineno}: cannot parse {' '.join(toks)!r}") from exc
    raise DomainError(f"line {lineno}: unknown gate {toks[0]!r}")


def read_circuit(text: str) -> IqpCircuit | HtCircuit:
    """Parse the ``iqp q=<int>`` or ``ht q=<int>`` text formats."""
    rows = []
    for lineno, ln in enumerate(text.splitlines(), 1):
        ln = ln.split("#", 1)[0].strip()
        if ln:
            rows.append((lineno, ln.split()))
    if not rows:
        raise DomainError("empty circuit text")
    kind, *rest = rows[0][1]
    try:
        (q,) = [int(tok[2:]) for tok in rest if tok.startswith("q=")]
    except ValueError as exc:
        raise DomainError(f"bad circuit header {' '.join(rows[0][1])!r}") from exc
    body = rows[1:]
    if kind == "iqp":
        layers: list[list[PhaseGate]] = [[]]
        for i, (lineno, toks) in enumerate(body):
            if toks[0] == "layer":
                if i > 0:
                    layers.append([])
                continue
            g = _parse_gate(toks, lineno)
            if not isinstance(g, PhaseGate):
                raise DomainError(f"line {lineno}: IQP layers hold phase gates only")
            layers[-1].append(g)
        return IqpCircuit(q, tuple(tuple(layer) for layer in layers))
    if kind == "ht":
        return HtCircuit(q, tuple(_parse_gate(toks, lineno) for lineno, toks in body))
    raise DomainError(f"unknown circuit kind {kind!r}")


def _format_gate(op: Op) -> str:
    if isinstance(op, H):
        return f"h {op.wire}"
    if isinstance(op, Toffoli):
        return f"ccx {op.c1} {op.c2} {op.target}"
    return " ".join(["p", repr(float(op.theta))] + [str(w) for w in op.qubits])


def write_circuit(circuit: IqpCircuit | HtCircuit) -> str:
    if isinstance(circuit, IqpCircuit):
        out = [f"iqp q={circuit.q}"]
        for i, layer in enumerate(circuit.layers):
            if i:
                out.append("layer")
            out.extend(_format_gate(g) for g in layer)
    else:
        out = [f"ht q={circuit.q}"] + [_format_gate(op) for op in circuit.ops]
    return "\n".join(out) + "\n"
