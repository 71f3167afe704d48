"""Closed-form resource counts, sample budgets and exact ensemble probabilities.

The ensemble I_q holds every circuit whose diagonal part is a subset of the
q single-qubit Z, C(q,2) CZ and C(q,3) CCZ gates, so counting circuits with a
property reduces to sums of products of binomial coefficients.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, ResourceError

#: Reference coefficients (c_x, c_y, c_q), rounded to two decimals.
PUBLISHED_COEFFICIENTS = (5.68, 12.14, 3.07)
#: The varsigma at which the derived coefficients round to the reference values.
ROUNDED_VARSIGMA = 4.52
EXACT_Q_CAP = 50


@dataclass(frozen=True)
class GateCounts:
    """q qubits with x one-qubit, y two-qubit and z three-qubit phase gates."""

    q: int
    x: int = 0
    y: int = 0
    z: int = 0
    layers: int = 1

    def __post_init__(self) -> None:
        if min(self.q, self.x, self.y, self.z) < 0:
            raise DomainError("gate counts must be non-negative")


@dataclass(frozen=True)
class SchemeParams:
    p_cz: float = 2.0 / 27.0
    cz_per_ccz: int = 6
    varsigma: float = 4.53

    def __post_init__(self) -> None:
        if not 0.0 < self.p_cz < 1.0:
            raise DomainError("p_cz must lie in (0, 1)")
        if self.varsigma <= 0.0 or self.gamma >= 1.0:
            raise DomainError("need gamma = p_cz^12 * varsigma^20 < 1")

    @property
    def gamma(self) -> float:
        return self.p_cz**12 * self.varsigma**20


class Threshold(NamedTuple):
    t: int
    c_x: float
    c_y: float
    c_q: float


class NormBound(NamedTuple):
    lower: float
    observed: float
    upper: float
    passed: bool


@dataclass(frozen=True)
class EnsembleStats:
    size: int
    log2_size: int
    expected_photons: float


@dataclass(frozen=True)
class EstimationPlan:
    epsilon_target: float
    delta: float
    eps_graph: float
    eps_klm: float
    n_graph: int
    n_klm: int

    @property
    def alpha(self) -> float:
        return self.n_graph / self.n_klm


def success_prob_klm(counts: GateCounts, params: SchemeParams = SchemeParams()) -> tuple[float, float]:
    """Heralding probability of the non-adaptive KLM circuit and its log2."""
    log2 = (counts.y + params.cz_per_ccz * counts.z) * math.log2(params.p_cz)
    return 2.0**log2, log2


def log2_alpha(
    counts: GateCounts, graph_norm: float, M: int, params: SchemeParams = SchemeParams()
) -> float:
    """log2 of the sample-budget ratio between the graph and KLM schemes."""
    if graph_norm <= 0:
        raise DomainError("graph norm must be positive")
    _, log2_ps = success_prob_klm(counts, params)
    return 2.0 * log2_ps + 4.0 * M * math.log2(graph_norm) - 4.0 * counts.q


def threshold_coefficients(params: SchemeParams = SchemeParams()) -> tuple[float, float, float]:
    """(c_x, c_y, c_q) such that alpha < 1 iff z > c_x x + c_y y + c_q q at norm varsigma."""
    lg = math.log(params.gamma)
    ls = math.log(params.varsigma)
    c_q = -4.0 * (ls - math.log(2.0)) / lg
    c_x = -4.0 * ls / lg
    c_y = -(2.0 * math.log(params.p_cz) + 12.0 * ls) / lg
    return c_x, c_y, c_q


def ccz_threshold(
    q: int, x: int, y: int, params: SchemeParams = SchemeParams(), *, coefficients: str = "derived"
) -> Threshold:
    """t = ceil(c_x x + c_y y + c_q q).

    ``coefficients="derived"`` recomputes them from ``params``;
    ``"published"`` uses the two-decimal values.
    """
    if coefficients == "derived":
        c_x, c_y, c_q = threshold_coefficients(params)
    elif coefficients == "published":
        c_x, c_y, c_q = PUBLISHED_COEFFICIENTS
    else:
        raise DomainError(f"unknown coefficient set {coefficients!r}")
    return Threshold(math.ceil(c_x * x + c_y * y + c_q * q), c_x, c_y, c_q)


# --- exact ensemble sums -------------------------------------------------------


@lru_cache(maxsize=8)
def _binom_row(n: int) -> tuple[int, ...]:
    row = [1] * (n + 1)
    for k in range(n):
        row[k + 1] = row[k] * (n - k) // (k + 1)
    return tuple(row)


@lru_cache(maxsize=4)
def _suffix_sums(n: int) -> tuple[int, ...]:
    """s[t] = sum_{z >= t} C(n, z) for t = 0..n+1."""
    row = _binom_row(n)
    out = [0] * (n + 2)
    for k in range(n, -1, -1):
        out[k] = out[k + 1] + row[k]
    return tuple(out)


def _log_binom(n: int, k: np.ndarray) -> np.ndarray:
    k = np.asarray(k, dtype=np.float64)
    return math.lgamma(n + 1) - np.array([math.lgamma(v + 1) for v in k]) - np.array(
        [math.lgamma(n - v + 1) for v in k]
    )


def _log_suffix(n: int) -> np.ndarray:
    """Natural log of sum_{z >= t} C(n, z), t = 0..n+1 (last entry -inf)."""
    lb = _log_binom(n, np.arange(n + 1))
    out = np.full(n + 2, -np.inf)
    out[:-1] = np.logaddexp.accumulate(lb[::-1])[::-1]
    return out


def _ensemble_fraction(
    q: int, threshold: Callable[[int, int], int], mode: str, complement: bool
) -> float | Fraction:
    """Fraction of I_q whose CCZ count z satisfies z >= threshold(x, y).

    Modes: "exact" sums big integers and rounds once; "fraction" returns the
    exact rational; "log" works with log-binomials in floating point.
    """
    if q < 0:
        raise DomainError("q must be non-negative")
    n1, n2, n3 = q, math.comb(q, 2), math.comb(q, 3)
    clamp = lambda t: min(max(t, 0), n3 + 1)  # noqa: E731
    if mode in ("exact", "exact_bigint", "fraction"):
        if q > EXACT_Q_CAP:
            raise ResourceError(f"exact mode supports q <= {EXACT_Q_CAP}, got {q}")
        r1, r2, suf = _binom_row(n1), _binom_row(n2), _suffix_sums(n3)
        total = 1 << (n1 + n2 + n3)
        hits = 0
        for x in range(n1 + 1):
            inner = 0
            for y in range(n2 + 1):
                inner += r2[y] * suf[clamp(threshold(x, y))]
            hits += r1[x] * inner
        frac = Fraction(total - hits if complement else hits, total)
        return frac if mode == "fraction" else float(frac)
    if mode in ("log", "log_float"):
        lsuf = _log_suffix(n3)
        lpre = None
        if complement:
            lb = _log_binom(n3, np.arange(n3 + 1))
            lpre = np.concatenate([[-np.inf], np.logaddexp.accumulate(lb)])
        l1 = _log_binom(n1, np.arange(n1 + 1))
        l2 = _log_binom(n2, np.arange(n2 + 1))
        terms = []
        for x in range(n1 + 1):
            ts = np.array([clamp(threshold(x, y)) for y in range(n2 + 1)])
            tail = lpre[ts] if complement else lsuf[ts]
            terms.append(l1[x] + l2 + tail)
        logs = np.concatenate(terms)
        top = np.max(logs)
        if not np.isfinite(top):
            return 0.0
        log_hits = top + math.log(np.sum(np.exp(logs - top)))
        return min(1.0, math.exp(log_hits - (n1 + n2 + n3) * math.log(2.0)))
    raise DomainError(f"unknown mode {mode!r}")


def prob_alpha_lt_1(
    q: int,
    mode: str = "exact_bigint",
    params: SchemeParams = SchemeParams(),
    *,
    coefficients: str = "derived",
    complement: bool = False,
) -> float:
    """Fraction of I_q with alpha < 1, taking the graph norm equal to varsigma.

    A circuit counts when z >= ccz_threshold(q, x, y).t. With the derived
    coefficients this is exactly z > c_x x + c_y y + c_q q for non-integer
    right-hand sides.
    """
    if coefficients not in ("derived", "published"):
        raise DomainError(f"unknown coefficient set {coefficients!r}")
    c_x, c_y, c_q = (
        threshold_coefficients(params) if coefficients == "derived" else PUBLISHED_COEFFICIENTS
    )
    return _ensemble_fraction(
        q, lambda x, y: math.ceil(c_x * x + c_y * y + c_q * q), mode, complement
    )


def prob_fewer_photons(
    q: int, mode: str = "exact_bigint", *, variant: str = "proof", complement: bool = False
) -> float:
    """Fraction of I_q where the graph scheme needs fewer photons than KLM.

    ``variant="proof"`` uses z > x + y, ``variant="seven"`` uses x + y < 7 z.
    """
    if variant == "proof":
        rule = lambda x, y: x + y + 1  # noqa: E731
    elif variant == "seven":
        rule = lambda x, y: (x + y) // 7 + 1  # noqa: E731
    else:
        raise DomainError(f"unknown variant {variant!r}")
    return _ensemble_fraction(q, rule, mode, complement)


def binary_entropy(p: float) -> float:
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def entropy_bound_check(n: int, d: int) -> float:
    """Upper bound 2^{n H(d/n)} on sum_{k <= d} C(n, k), valid for d <= n/2."""
    if n < 0 or d < 0 or 2 * d > n:
        raise DomainError(f"bound needs 0 <= d <= n/2, got n={n}, d={d}")
    if n == 0:
        return 1.0
    return 2.0 ** (n * binary_entropy(d / n))


def resource_table(counts: GateCounts) -> dict[str, dict[str, int]]:
    q, x, y, z = counts.q, counts.x, counts.y, counts.z
    return {
        "klm": {"photons": q + 2 * y + 12 * z, "modes": 2 * q + 2 * y + 12 * z},
        "graph": {"photons": q + x + 3 * y + 5 * z, "modes": 2 * q + 2 * x + 6 * y + 10 * z},
    }


def ensemble_stats(q: int) -> EnsembleStats:
    """Size of I_q and the mean vertex count of its encoded graphs."""
    if q < 0:
        raise DomainError("q must be non-negative")
    c2, c3 = math.comb(q, 2), math.comb(q, 3)
    log2_size = c3 + c2 + q
    return EnsembleStats(1 << log2_size, log2_size, q + 0.5 * (q + 3 * c2 + 5 * c3))


def _check_unit_interval(name: str, v: float) -> None:
    if not 0.0 < v < 1.0:
        raise DomainError(f"{name} must lie in (0, 1), got {v}")


def hoeffding_samples(epsilon: float, delta: float) -> int:
    """Samples so that a [0,1]-valued mean is within epsilon w.p. >= 1 - delta."""
    _check_unit_interval("epsilon", epsilon)
    _check_unit_interval("delta", delta)
    return math.ceil(math.log(2.0 / delta) / (2.0 * epsilon**2))


def epsilon_for(n: int, delta: float) -> float:
    if n < 1:
        raise DomainError("sample count must be at least 1")
    _check_unit_interval("delta", delta)
    return math.sqrt(math.log(2.0 / delta) / (2.0 * n))


def plan_estimation(
    epsilon_target: float,
    delta: float,
    counts: GateCounts,
    graph_norm: float,
    M: int,
    params: SchemeParams = SchemeParams(),
) -> EstimationPlan:
    """Raw per-scheme accuracies and sample counts for a target accuracy on |<0|C|0>|^2."""
    if epsilon_target <= 0:
        raise DomainError("epsilon must be positive")
    _check_unit_interval("delta", delta)
    p_s, _ = success_prob_klm(counts, params)
    rescale_g = math.exp(2 * M * math.log(graph_norm) - 2 * counts.q * math.log(2.0))
    eps_g = epsilon_target / rescale_g
    eps_k = epsilon_target * p_s
    n = lambda e: max(1, math.ceil(math.log(2.0 / delta) / (2.0 * e * e)))  # noqa: E731
    return EstimationPlan(epsilon_target, delta, eps_g, eps_k, n(eps_g), n(eps_k))


def norm_bound_check(graph, counts: GateCounts, *, cubic_variant: str = "repaired") -> NormBound:
    """Compare the spectral norm of a pi-phase encoded graph with the gadget bounds."""
    from .gadgets import gadget_matrix
    from .permanent import spectral_norm

    observed = spectral_norm(graph.adjacency) if graph.n else 0.0
    degree = 3 if counts.z else 2 if counts.y else 1 if counts.x else 0
    if degree == 0:
        lower = upper = 1.0
    else:
        g = gadget_matrix(degree, math.pi, variant=cubic_variant if degree == 3 else "published")
        a = spectral_norm(g.matrix)
        lower, upper = max(1.0, a - 1.0), a + 1.0
    tol = 1e-9
    passed = lower - tol <= observed <= upper + tol
    return NormBound(lower, observed, upper, passed)
