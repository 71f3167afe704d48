"""Classical stand-ins for the two post-selected estimation schemes, and boosting.

Both schemes estimate |<0|C|0>|^2 from N shots: the graph scheme accepts a
shot with probability |per G|^2 / ||G||^{2M}, the KLM scheme with
probability |<0|C|0>|^2 p_s. Shots are Bernoulli draws against those exact
probabilities.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import IqpCircuit, amplitude_direct, gate_counts
from .encode import encode_zero_zero
from .errors import DomainError, NumericError, ResourceError
from .permanent import as_matrix, permanent, spectral_norm
from .resources import SchemeParams, success_prob_klm

EPS_POLY_CAP = 10
ILL_CONDITIONED = 1e12


class SchemeKind(enum.Enum):
    GRAPH = "graph"
    KLM = "klm"

    @classmethod
    def parse(cls, value: "SchemeKind | str") -> "SchemeKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError as exc:
            raise DomainError(f"unknown scheme {value!r}; use 'graph' or 'klm'") from exc


@dataclass(frozen=True)
class SchemeModel:
    """Acceptance probability of one shot and the factor turning the rate into |amp|^2."""

    scheme: SchemeKind
    p_accept: float
    rescale: float
    target: float


@dataclass(frozen=True)
class Estimate:
    estimate: float
    n_post: int
    shots: int
    rescale: float


def scheme_model(
    scheme: SchemeKind | str, circuit: IqpCircuit, params: SchemeParams = SchemeParams()
) -> SchemeModel:
    scheme = SchemeKind.parse(scheme)
    if scheme is SchemeKind.KLM:
        amp = amplitude_direct(circuit, [0] * circuit.q, [0] * circuit.q)
        p_s, _ = success_prob_klm(gate_counts(circuit), params)
        target = abs(amp) ** 2
        p, rescale = target * p_s, 1.0 / p_s
    else:
        g, scale = encode_zero_zero(circuit)
        per = permanent(g.adjacency, "sparse")
        norm = spectral_norm(g.adjacency) if g.n else 1.0
        M = g.n
        log_norm_pow = 2 * M * math.log(norm) if M else 0.0
        p = abs(per) ** 2 * math.exp(-log_norm_pow)
        rescale = math.exp(log_norm_pow) * abs(scale * g.multiplier) ** 2
        target = p * rescale
    if p > 1.0 + 1e-9:
        raise NumericError(f"acceptance probability {p} exceeds 1")
    return SchemeModel(scheme, min(p, 1.0), rescale, target)


def true_postselect_prob(
    scheme: SchemeKind | str, circuit: IqpCircuit, params: SchemeParams = SchemeParams()
) -> float:
    """Exact probability that one shot passes the scheme's post-selection."""
    return scheme_model(scheme, circuit, params).p_accept


def simulate_estimation(
    scheme: SchemeKind | str,
    circuit: IqpCircuit,
    shots: int,
    seed: int = 0,
    params: SchemeParams = SchemeParams(),
    *,
    model: SchemeModel | None = None,
) -> Estimate:
    """Draw ``shots`` Bernoulli outcomes and rescale the acceptance rate."""
    if shots < 1:
        raise DomainError("need at least one shot")
    model = model or scheme_model(scheme, circuit, params)
    rng = np.random.default_rng(seed)
    n_post = int(rng.binomial(shots, model.p_accept))
    return Estimate(n_post / shots * model.rescale, n_post, shots, model.rescale)


# --- boosting ------------------------------------------------------------------


def eps_poly_coeffs(m) -> list[complex]:
    """Coefficients c_0..c_M of per(A + eps I) = sum_i c_i eps^i.

    c_i sums the permanents of A with an i-subset of rows and the matching
    columns removed, so c_0 = per(A) and c_M = 1.
    """
    a = as_matrix(m)
    M = a.shape[0]
    if M > EPS_POLY_CAP:
        raise ResourceError(f"eps_poly_coeffs limited to order {EPS_POLY_CAP}, got {M}")
    coeffs = [0j] * (M + 1)
    for r in range(M + 1):
        for removed in itertools.combinations(range(M), r):
            keep = [i for i in range(M) if i not in removed]
            coeffs[r] += permanent(a[np.ix_(keep, keep)], "ryser")
    return coeffs


def chebyshev_points(count: int, lo: float = 0.0, hi: float = 2.0) -> list[float]:
    """Chebyshev nodes of the first kind mapped to [lo, hi], increasing."""
    k = np.arange(count)
    x = np.cos((2 * k + 1) * np.pi / (2 * count))
    return sorted((lo + hi) / 2 + (hi - lo) / 2 * x)


@dataclass(frozen=True)
class BoostSetup:
    matrix: np.ndarray
    epsilons: tuple[float, ...]

    def __post_init__(self) -> None:
        a = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", a)
        eps = tuple(float(e) for e in self.epsilons)
        if len(set(eps)) != len(eps):
            raise DomainError("boosting epsilons must be distinct")
        if any(e < 0 for e in eps):
            raise DomainError("boosting epsilons must be non-negative")
        if len(eps) < 2 * a.shape[0] + 1:
            raise DomainError(f"need at least {2 * a.shape[0] + 1} epsilons for order {a.shape[0]}")
        object.__setattr__(self, "epsilons", eps)

    @classmethod
    def default(cls, m) -> "BoostSetup":
        a = as_matrix(m)
        return cls(a, tuple(chebyshev_points(2 * a.shape[0] + 1)))


@dataclass(frozen=True)
class BoostResult:
    value: float
    coefficients: tuple[float, ...]
    condition: float
    warning: str | None = None


def boost_evaluations(setup: BoostSetup) -> list[float]:
    """Exact |per(A + eps I)|^2 at every epsilon of the setup."""
    eye = np.eye(setup.matrix.shape[0])
    return [abs(permanent(setup.matrix + e * eye, "ryser")) ** 2 for e in setup.epsilons]


def boost_recover(setup: BoostSetup, evaluations: Sequence[float] | None = None) -> BoostResult:
    """Recover |per A|^2 as the constant term of the degree-2M fit of |per(A + eps I)|^2."""
    ys = np.asarray(boost_evaluations(setup) if evaluations is None else evaluations, dtype=float)
    if ys.shape != (len(setup.epsilons),):
        raise DomainError("need one evaluation per epsilon")
    degree = 2 * setup.matrix.shape[0]
    eps = np.asarray(setup.epsilons)
    v = np.vander(eps, degree + 1, increasing=True)
    if len(eps) == degree + 1:
        b = np.linalg.solve(v, ys)
    else:
        b = np.linalg.lstsq(v, ys, rcond=None)[0]
    cond = float(np.linalg.cond(v))
    warn = None
    if cond > ILL_CONDITIONED:
        warn = f"Vandermonde condition number {cond:.3g} exceeds {ILL_CONDITIONED:.0e}"
    return BoostResult(float(b[0]), tuple(float(x) for x in b), cond, warn)


@dataclass(frozen=True)
class BoostNormBounds:
    lower: float
    observed: float
    upper: float
    passed: bool


def boosted_norm_bounds(m, eps: float) -> BoostNormBounds:
    """Check 1 + eps <= ||A + eps I||_2 <= ||A||_inf + eps for an encoded-graph adjacency."""
    a = as_matrix(m)
    if eps < 0:
        raise DomainError("eps must be non-negative")
    n = a.shape[0]
    observed = spectral_norm(a + eps * np.eye(n))
    lower = 1.0 + eps
    upper = float(np.max(np.sum(np.abs(a), axis=1))) + eps
    tol = 1e-9 * max(1.0, upper)
    return BoostNormBounds(lower, observed, upper, lower - tol <= observed <= upper + tol)
