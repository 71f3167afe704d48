import math

import numpy as np
import pytest

from permsum.errors import DomainError, ResourceError, UnsupportedError
from permsum.gadgets import (
    SymbolicPolynomial,
    equation_count,
    export_constraints,
    gadget_matrix,
    generate_constraints,
    partial_cover_sum,
    symbolic_permanent,
    system_residuals,
    verify_gadget,
)
from permsum.permanent import permanent, spectral_norm

PI = math.pi
GRID = (0.0, PI / 8, PI / 4, PI / 2, PI, 1.234)

PUBLISHED_A3_FAILURES = [
    "nonzero s=111", "nonzero s=110", "nonzero s=101", "nonzero s=100",
    "zero x=1 y=0 o={}", "zero x=1 y=0 o={2}", "zero x=1 y=2 o={0}",
    "zero x=2 y=0 o={}", "zero x=2 y=0 o={1}", "zero x=2 y=1 o={0}",
]

EXPORT_D2 = """\
# nonzero s=11
x_0_0*x_1_1*x_2_2 + x_0_0*x_1_2*x_2_1 + x_0_1*x_1_0*x_2_2 + x_0_1*x_1_2*x_2_0 + x_0_2*x_1_0*x_2_1 + x_0_2*x_1_1*x_2_0 = T
# nonzero s=10
x_0_0*x_2_2 + x_0_2*x_2_0 = (1,0)
# nonzero s=01
x_1_1*x_2_2 + x_1_2*x_2_1 = (1,0)
# nonzero s=00
x_2_2 = (1,0)
# zero x=0 y=1 o={}
x_0_1*x_2_2 + x_0_2*x_2_1 = (0,0)
# zero x=1 y=0 o={}
x_1_0*x_2_2 + x_1_2*x_2_0 = (0,0)
"""


def test_equation_counts():
    assert [equation_count(d) for d in (1, 2, 3)] == [2, 6, 20]
    for d, k in ((1, 0), (2, 1), (3, 2)):
        assert len(generate_constraints(d, k).equations) == equation_count(d)


def test_export_d1_numeric():
    text = export_constraints(generate_constraints(1, 0), PI)
    assert text == "# nonzero s=1\nx_0_0 = (-1,0)\n# nonzero s=0\n(1,0) = (1,0)\n"


def test_export_d2_symbolic():
    assert export_constraints(generate_constraints(2, 1)) == EXPORT_D2


@pytest.mark.parametrize("theta", GRID)
@pytest.mark.parametrize("d", [1, 2])
def test_small_gadgets_pass(d, theta):
    rep = verify_gadget(gadget_matrix(d, theta), theta)
    assert rep.passed
    assert len(rep.residuals) == equation_count(d)
    assert max(rep.max_nonzero_residual, rep.max_zero_residual) < 1e-9


@pytest.mark.parametrize("theta", GRID)
def test_repaired_cubic_passes(theta):
    rep = verify_gadget(gadget_matrix(3, theta, "repaired"), theta)
    assert rep.passed, rep.failing()


@pytest.mark.parametrize("theta", GRID[1:])
def test_published_cubic_failures(theta):
    rep = verify_gadget(gadget_matrix(3, theta, "published"), theta)
    assert [r.tag for r in rep.failing()] == PUBLISHED_A3_FAILURES


def test_published_cubic_at_zero_is_fine():
    assert verify_gadget(gadget_matrix(3, 0.0, "published"), 0.0).passed


def test_variants_differ_only_in_one_entry():
    a = gadget_matrix(3, 1.0, "published").matrix
    b = gadget_matrix(3, 1.0, "repaired").matrix
    diff = np.argwhere(~np.isclose(a, b))
    assert diff.tolist() == [[4, 0]]
    assert b[4, 0] == b[0, 4]


def test_norms_at_pi():
    assert spectral_norm(gadget_matrix(2, PI).matrix) == pytest.approx(math.sqrt(3), abs=1e-9)
    assert spectral_norm(gadget_matrix(3, PI, "repaired").matrix) == pytest.approx(3.523101095390806, abs=1e-9)
    assert spectral_norm(gadget_matrix(3, PI, "published").matrix) == pytest.approx(3.507068923426442, abs=1e-9)


def test_symbolic_matches_numeric():
    for d, k in ((1, 0), (2, 1), (3, 2)):
        system = generate_constraints(d, k)
        g = gadget_matrix(d, 0.7, "repaired")
        numeric = [r.residual for r in verify_gadget(g, 0.7).residuals]
        assert system_residuals(system, g.matrix, 0.7) == pytest.approx(numeric, abs=1e-12)


def test_symbolic_permanent():
    s = [SymbolicPolynomial.symbol(i) for i in range(4)]
    p = symbolic_permanent([[s[0], s[1]], [s[2], s[3]]])
    assert p.format(2) == "x_0_0*x_1_1 + x_0_1*x_1_0"
    assert p.evaluate([1.0, 2.0, 3.0, 4.0]) == pytest.approx(10)
    with pytest.raises(DomainError):
        s[0] * s[0]


def test_partial_cover_sum_vanishes():
    for d, variant in ((2, "published"), (3, "repaired")):
        g = gadget_matrix(d, 1.1, variant)
        for x in range(d):
            for y in range(d):
                if x == y:
                    continue
                rest = [v for v in range(d) if v not in (x, y)]
                for o in ([], rest):
                    assert abs(partial_cover_sum(g, x, y, o)) < 1e-12


def test_partial_cover_sum_matches_row_replacement():
    g = gadget_matrix(3, 0.9, "published")
    a = np.array(g.matrix)
    verts = [0, 1, 3, 4]
    sub = a[np.ix_(verts, verts)].copy()
    sub[1] = [1, 0, 0, 0]
    assert partial_cover_sum(g, 0, 1, []) == pytest.approx(permanent(sub, "naive"), abs=1e-14)


def test_errors():
    with pytest.raises(UnsupportedError):
        gadget_matrix(4, 1.0)
    with pytest.raises(DomainError):
        gadget_matrix(2, 1.0, "other")
    with pytest.raises(ResourceError):
        generate_constraints(4, 3)
    with pytest.raises(DomainError):
        partial_cover_sum(gadget_matrix(1, 1.0), 0, 0, [])


def test_gadget_is_read_only():
    g = gadget_matrix(2, 1.0)
    with pytest.raises(ValueError):
        g.matrix[0, 0] = 5
