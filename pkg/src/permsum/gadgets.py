"""Clause gadgets and their cycle-cover constraint systems.

A gadget of degree d with k inner vertices is a (d+k)x(d+k) matrix whose
first d rows/columns are the outer vertices. It is valid for phase theta
when

* for every s in {0,1}^d, the permanent of the submatrix on the outer
  vertices with s_i = 1 plus all inner vertices equals e^{i theta} if s is
  all ones and 1 otherwise ("nonzero" equations), and
* for every ordered pair (x, y) of outer vertices and subset o of the other
  outer vertices, the weighted sum of partial covers of {x, y} + o + inner
  that enter at x and leave at y vanishes ("zero" equations). This sum is
  the permanent of the submatrix on {x, y} + o + inner after replacing
  row y by the unit row e_x.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._numeric import unit_phase
from .errors import DomainError, ResourceError, UnsupportedError
from .permanent import permanent

SYMBOLIC_CAP = 6
VARIANTS = ("published", "repaired")


@dataclass(frozen=True)
class Gadget:
    d: int
    k: int
    matrix: np.ndarray
    theta: float | None = None
    variant: str = "published"

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.complex128)
        if self.d < 1 or self.k < 0 or m.shape != (self.d + self.k, self.d + self.k):
            raise DomainError(f"gadget matrix must be {(self.d + self.k,) * 2}, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def order(self) -> int:
        return self.d + self.k


def _eta(e: complex) -> complex:
    return cmath.sqrt(3.0 * (1 + 1j) * (1 - e)) / 6.0


def gadget_matrix(d: int, theta: float, variant: str = "published") -> Gadget:
    """Gadget for the clause theta * x_0 ... x_{d-1}, d in {1, 2, 3}.

    ``variant="published"`` gives the reference matrices entry for entry with
    principal square roots. For d = 3 its entry (4, 0) does not satisfy the
    constraint system; ``variant="repaired"`` replaces it by entry (0, 4),
    which makes every equation hold. For d < 3 both variants coincide.
    """
    if variant not in VARIANTS:
        raise DomainError(f"unknown gadget variant {variant!r}")
    e = unit_phase(theta)
    if d == 1:
        m = [[e]]
    elif d == 2:
        m = [[(1 + e) / 2, (e - 1) / 2, (1 - e) / 2], [-1, 0, 1], [1, 1, 1]]
    elif d == 3:
        eta = _eta(e)
        r2 = math.sqrt(2.0)
        w1, w3 = cmath.exp(1j * math.pi / 4), cmath.exp(3j * math.pi / 4)
        if variant == "published":
            m40 = -cmath.sqrt((1 - e) / (24 * (1 + 1j)))
        else:
            m40 = -eta / r2
        m = [
            [(e - (1 + 12j)) / (-12j), -eta, -eta, eta * w1 / r2, -eta / r2],
            [-eta, 1j, -1 + 1j, 1, w3],
            [-eta, -1 + 1j, 1j, 1, w3],
            [eta * w1 / r2, 1, 1, 1, 0],
            [m40, w3, w3, 0, 1],
        ]
    else:
        raise UnsupportedError(f"no gadget for clause degree {d}; degrees 1..3 are available")
    k = {1: 0, 2: 1, 3: 2}[d]
    return Gadget(d, k, np.array(m, dtype=np.complex128), float(theta), variant if d == 3 else "published")


# --- symbolic algebra ----------------------------------------------------------


class SymbolicPolynomial:
    """Multilinear polynomial: sorted tuple of symbol indices -> complex coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, ...], complex] | None = None) -> None:
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def constant(cls, c: complex) -> "SymbolicPolynomial":
        return cls({(): complex(c)})

    @classmethod
    def symbol(cls, s: int) -> "SymbolicPolynomial":
        return cls({(s,): 1 + 0j})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "SymbolicPolynomial") -> "SymbolicPolynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return SymbolicPolynomial(out)

    def __mul__(self, other: "SymbolicPolynomial") -> "SymbolicPolynomial":
        out: dict[tuple[int, ...], complex] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if set(m1) & set(m2):
                    raise DomainError("product would repeat a symbol; not multilinear")
                m = tuple(sorted(m1 + m2))
                out[m] = out.get(m, 0) + c1 * c2
        return SymbolicPolynomial(out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SymbolicPolynomial) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"SymbolicPolynomial({self.terms!r})"

    def evaluate(self, values: Sequence[complex]) -> complex:
        total = 0j
        for m, c in self.terms.items():
            p = c
            for s in m:
                p *= values[s]
            total += p
        return total

    def format(self, order: int) -> str:
        if not self.terms:
            return "(0,0)"
        parts = []
        for m in sorted(self.terms, key=lambda t: (len(t), t)):
            c = self.terms[m]
            syms = [f"x_{s // order}_{s % order}" for s in m]
            if c == 1 and syms:
                parts.append("*".join(syms))
            else:
                parts.append("*".join([_fmt_coeff(c)] + syms))
        return " + ".join(parts)


def _clean(v: float) -> float:
    r = round(v)
    return float(r) if abs(v - r) < 1e-15 else v


def _fmt_coeff(c: complex) -> str:
    re, im = _clean(c.real), _clean(c.imag)
    g = lambda v: format(v, ".17g")  # noqa: E731
    return f"({g(re + 0.0)},{g(im + 0.0)})"


Entry = SymbolicPolynomial


def symbolic_permanent(entries: Sequence[Sequence[Entry]]) -> SymbolicPolynomial:
    """Permanent of a matrix of symbolic entries by Laplace expansion along rows.

    Minors are memoised on the set of columns still free.
    """
    m = len(entries)
    if m > SYMBOLIC_CAP:
        raise ResourceError(f"symbolic permanent limited to order {SYMBOLIC_CAP}, got {m}")
    if any(len(r) != m for r in entries):
        raise DomainError("symbolic matrix must be square")
    memo: dict[int, SymbolicPolynomial] = {}

    def minor(cols: int) -> SymbolicPolynomial:
        if cols == 0:
            return SymbolicPolynomial.constant(1)
        if cols in memo:
            return memo[cols]
        row = m - bin(cols).count("1")
        acc = SymbolicPolynomial()
        for j in range(m):
            if cols >> j & 1 and not entries[row][j].is_zero():
                acc = acc + entries[row][j] * minor(cols & ~(1 << j))
        memo[cols] = acc
        return acc

    return minor((1 << m) - 1)


# --- constraint systems --------------------------------------------------------


@dataclass(frozen=True)
class Equation:
    """One constraint: per(submatrix on ``vertices``) = rhs.

    For a zero equation, row ``replaced[1]`` is replaced by the unit row
    pointing at ``replaced[0]``. ``rhs`` is "phase", "one" or "zero".
    """

    tag: str
    kind: str
    vertices: tuple[int, ...]
    replaced: tuple[int, int] | None
    lhs: SymbolicPolynomial
    rhs: str

    def rhs_value(self, theta: float) -> complex:
        return {"phase": unit_phase(theta), "one": 1 + 0j, "zero": 0j}[self.rhs]


@dataclass(frozen=True)
class ConstraintSystem:
    d: int
    k: int
    equations: tuple[Equation, ...]

    @property
    def order(self) -> int:
        return self.d + self.k

    @property
    def num_symbols(self) -> int:
        return self.order**2


def equation_count(d: int) -> int:
    """2^d nonzero equations plus d(d-1) 2^(d-2) zero equations."""
    return 2**d + (d * (d - 1) * 2**d) // 4


def _index_layout(d: int, k: int) -> list[tuple[str, tuple[int, ...], tuple[int, int] | None, str]]:
    inner = tuple(range(d, d + k))
    out = []
    for s in itertools.product((1, 0), repeat=d):
        verts = tuple(i for i in range(d) if s[i]) + inner
        rhs = "phase" if all(s) else "one"
        out.append(("nonzero s=" + "".join(map(str, s)), verts, None, rhs))
    for x, y in itertools.permutations(range(d), 2):
        rest = [i for i in range(d) if i not in (x, y)]
        for r in range(len(rest) + 1):
            for o in itertools.combinations(rest, r):
                verts = tuple(sorted((x, y) + o)) + inner
                tag = f"zero x={x} y={y} o={{{','.join(map(str, o))}}}"
                out.append((tag, verts, (x, y), "zero"))
    return out


def _submatrix(get, verts: Sequence[int], replaced, one, zero):
    rows = []
    for vi in verts:
        if replaced is not None and vi == replaced[1]:
            rows.append([one if vj == replaced[0] else zero for vj in verts])
        else:
            rows.append([get(vi, vj) for vj in verts])
    return rows


def generate_constraints(d: int, k: int) -> ConstraintSystem:
    """Symbolic constraint system in the (d+k)^2 entries x_i_j of an unknown gadget."""
    if d < 1 or k < 0:
        raise DomainError("need d >= 1 and k >= 0")
    m = d + k
    if m > SYMBOLIC_CAP:
        raise ResourceError(f"d + k limited to {SYMBOLIC_CAP}, got {m}")
    sym = lambda i, j: SymbolicPolynomial.symbol(i * m + j)  # noqa: E731
    one, zero = SymbolicPolynomial.constant(1), SymbolicPolynomial()
    eqs = []
    for tag, verts, repl, rhs in _index_layout(d, k):
        lhs = symbolic_permanent(_submatrix(sym, verts, repl, one, zero))
        eqs.append(Equation(tag, tag.split()[0], verts, repl, lhs, rhs))
    return ConstraintSystem(d, k, tuple(eqs))


@dataclass(frozen=True)
class Residual:
    tag: str
    kind: str
    value: complex
    target: complex
    residual: float


@dataclass(frozen=True)
class VerificationReport:
    d: int
    k: int
    theta: float
    tol: float
    residuals: tuple[Residual, ...]

    @property
    def max_nonzero_residual(self) -> float:
        return max((r.residual for r in self.residuals if r.kind == "nonzero"), default=0.0)

    @property
    def max_zero_residual(self) -> float:
        return max((r.residual for r in self.residuals if r.kind == "zero"), default=0.0)

    @property
    def passed(self) -> bool:
        return all(r.residual < self.tol for r in self.residuals)

    def failing(self) -> list[Residual]:
        return [r for r in self.residuals if r.residual >= self.tol]

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "k": self.k,
            "theta": self.theta,
            "tol": self.tol,
            "passed": self.passed,
            "max_nonzero_residual": self.max_nonzero_residual,
            "max_zero_residual": self.max_zero_residual,
            "equations": [
                {
                    "tag": r.tag,
                    "value": [r.value.real, r.value.imag],
                    "target": [r.target.real, r.target.imag],
                    "residual": r.residual,
                    "ok": r.residual < self.tol,
                }
                for r in self.residuals
            ],
        }


def verify_gadget(g: Gadget, theta: float, tol: float = 1e-9) -> VerificationReport:
    """Evaluate every constraint numerically; failures are reported, never raised."""
    a = g.matrix
    out = []
    for tag, verts, repl, rhs in _index_layout(g.d, g.k):
        sub = np.array(_submatrix(lambda i, j: a[i, j], verts, repl, 1.0, 0.0), dtype=np.complex128)
        value = permanent(sub.reshape(len(verts), len(verts)), "naive")
        target = {"phase": unit_phase(theta), "one": 1 + 0j, "zero": 0j}[rhs]
        out.append(Residual(tag, tag.split()[0], value, target, abs(value - target)))
    return VerificationReport(g.d, g.k, float(theta), tol, tuple(out))


def system_residuals(system: ConstraintSystem, matrix, theta: float) -> list[float]:
    """Residuals obtained by substituting matrix entries into the symbolic system."""
    vals = np.asarray(matrix, dtype=np.complex128).reshape(-1)
    return [abs(eq.lhs.evaluate(vals) - eq.rhs_value(theta)) for eq in system.equations]


def partial_cover_sum(g: Gadget, x: int, y: int, o: Iterable[int]) -> complex:
    """Total weight of partial covers of {x, y} + o + inner that enter at x and leave at y.

    Enumerates every simple path x -> ... -> y inside that vertex set and
    multiplies its weight by the permanent of the vertices the path misses,
    which must be covered by cycles inside the gadget.
    """
    if g.d < 2:
        raise DomainError("a gadget with one outer vertex has no crossing pairs")
    o = tuple(sorted(set(o)))
    outer = set(range(g.d))
    if x == y or x not in outer or y not in outer or not set(o) <= outer - {x, y}:
        raise DomainError(f"bad crossing specification x={x}, y={y}, o={o}")
    a = g.matrix
    middle = set(o) | set(range(g.d, g.order))
    total = 0j

    def walk(v: int, visited: frozenset, w: complex) -> None:
        nonlocal total
        if a[v, y] != 0:
            rest = sorted(middle - visited)
            total += w * a[v, y] * permanent(a[np.ix_(rest, rest)], "naive")
        for u in sorted(middle - visited):
            if a[v, u] != 0:
                walk(u, visited | {u}, w * a[v, u])

    walk(x, frozenset({x}), 1 + 0j)
    return total


def export_constraints(system: ConstraintSystem, theta: float | None = None) -> str:
    """Plain-text system: a ``# tag`` line, then ``<lhs> = <rhs>``, per equation.

    With ``theta=None`` the phase right-hand side is written as the symbol T.
    """
    lines = []
    for eq in system.equations:
        if eq.rhs == "phase" and theta is None:
            rhs = "T"
        else:
            rhs = _fmt_coeff(eq.rhs_value(0.0 if theta is None else theta))
        lines.append(f"# {eq.tag}")
        lines.append(f"{eq.lhs.format(system.order)} = {rhs}")
    return "\n".join(lines) + ("\n" if lines else "")
