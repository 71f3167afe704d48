import math
from fractions import Fraction

import pytest

from permsum.errors import DomainError, ResourceError
from permsum.resources import (
    ROUNDED_VARSIGMA,
    PUBLISHED_COEFFICIENTS,
    GateCounts,
    SchemeParams,
    binary_entropy,
    ccz_threshold,
    ensemble_stats,
    entropy_bound_check,
    epsilon_for,
    hoeffding_samples,
    log2_alpha,
    plan_estimation,
    prob_alpha_lt_1,
    prob_fewer_photons,
    resource_table,
    success_prob_klm,
    threshold_coefficients,
)

P = 2 / 27


def test_success_prob():
    assert success_prob_klm(GateCounts(2, y=1))[0] == pytest.approx(P)
    assert success_prob_klm(GateCounts(3)) == (1.0, 0.0)
    p, l2 = success_prob_klm(GateCounts(3, z=1))
    assert p == pytest.approx(P**6) and p == pytest.approx(1.654e-7, rel=2e-3)
    assert l2 == pytest.approx(-22.53, abs=0.01)
    p, l2 = success_prob_klm(GateCounts(3, y=400))
    assert p == 0.0 and l2 == pytest.approx(400 * math.log2(P))


def test_resource_table():
    t = resource_table(GateCounts(3, 1, 1, 1))
    assert t["klm"]["photons"] == 17 and t["graph"]["photons"] == 12
    assert resource_table(GateCounts(3)) == {
        "klm": {"photons": 3, "modes": 6},
        "graph": {"photons": 3, "modes": 6},
    }
    t = resource_table(GateCounts(3, z=1))
    assert (t["klm"]["photons"], t["graph"]["photons"]) == (15, 8)
    assert (t["klm"]["modes"], t["graph"]["modes"]) == (18, 16)


def test_log2_alpha():
    assert log2_alpha(GateCounts(0), 1.0, 0) == 0.0
    assert log2_alpha(GateCounts(3), 1.0, 3) == -12.0
    assert log2_alpha(GateCounts(3, z=1), 4.53, 8) == pytest.approx(12.685703582726703, rel=1e-12)
    with pytest.raises(DomainError):
        log2_alpha(GateCounts(3), 0.0, 3)


def test_coefficients():
    derived = threshold_coefficients()
    assert derived == pytest.approx((5.936987133318193, 12.696805455522753, 3.2129875772807974))
    rounded = threshold_coefficients(SchemeParams(varsigma=ROUNDED_VARSIGMA))
    for a, b in zip(rounded, PUBLISHED_COEFFICIENTS):
        assert abs(a - b) < 0.01


def test_ccz_threshold():
    assert ccz_threshold(3, 0, 0, coefficients="published").t == 10
    assert ccz_threshold(0, 0, 0).t == 0
    with pytest.raises(DomainError):
        ccz_threshold(1, 0, 0, coefficients="other")


def test_threshold_agrees_with_alpha_sign():
    # q = 0 is skipped: its right-hand side is exactly 0 and alpha = 1 there
    params = SchemeParams()
    for q in range(1, 7):
        for x in range(q + 1):
            for y in range(math.comb(q, 2) + 1):
                t = ccz_threshold(q, x, y, params).t
                for z in range(math.comb(q, 3) + 1):
                    M = q + x + 3 * y + 5 * z
                    neg = log2_alpha(GateCounts(q, x, y, z), params.varsigma, M) < 0
                    assert neg == (z >= t), (q, x, y, z)


def test_params_validation():
    with pytest.raises(DomainError):
        SchemeParams(p_cz=1.5)
    with pytest.raises(DomainError):
        SchemeParams(varsigma=100.0)


def test_prob_alpha_oracles():
    assert prob_alpha_lt_1(3) == 0.0
    assert prob_alpha_lt_1(10) == pytest.approx(2.979e-13, rel=0.01)
    assert abs(prob_alpha_lt_1(44) - 0.954082) < 1e-3
    with pytest.raises(ResourceError):
        prob_alpha_lt_1(51)
    with pytest.raises(DomainError):
        prob_alpha_lt_1(5, "fast")


def test_prob_alpha_published_coefficients_recorded():
    # frozen values of the rounded-coefficient curve
    assert prob_alpha_lt_1(10, coefficients="published") == pytest.approx(6.236249128852396e-13, rel=1e-9)
    assert prob_alpha_lt_1(44, coefficients="published") == pytest.approx(0.999209047080598, rel=1e-9)


@pytest.mark.parametrize("q", [4, 8, 10, 16, 24, 32, 40])
def test_exact_and_log_agree(q):
    exact, logv = prob_alpha_lt_1(q), prob_alpha_lt_1(q, "log")
    assert logv == pytest.approx(exact, rel=1e-6, abs=0)
    assert prob_fewer_photons(q, "log") == pytest.approx(prob_fewer_photons(q), rel=1e-6)


def test_complement_is_exact():
    f = prob_alpha_lt_1(12, "fraction")
    g = prob_alpha_lt_1(12, "fraction", complement=True)
    assert isinstance(f, Fraction) and f + g == 1


def test_photon_oracles():
    assert prob_fewer_photons(3, "fraction") == Fraction(1, 128)
    assert prob_fewer_photons(2) == 0.0
    assert prob_fewer_photons(1) == 0.0
    assert prob_fewer_photons(3, variant="seven") == pytest.approx(64 / 128)
    with pytest.raises(DomainError):
        prob_fewer_photons(3, variant="eight")


def test_photon_seven_variant_by_enumeration():
    # q=3: x in 0..3, y in 0..3, z in 0..1; x + y < 7z
    hits = sum(
        math.comb(3, x) * math.comb(3, y)
        for x in range(4)
        for y in range(4)
        if x + y < 7
    )
    assert prob_fewer_photons(3, variant="seven") == hits / 128


def test_entropy_bound():
    assert entropy_bound_check(10, 5) == pytest.approx(1024)
    assert entropy_bound_check(4, 0) == 1
    for n in range(31):
        for d in range(n // 2 + 1):
            exact = sum(math.comb(n, k) for k in range(d + 1))
            assert exact <= entropy_bound_check(n, d) * (1 + 1e-12)
    with pytest.raises(DomainError):
        entropy_bound_check(10, 6)
    assert binary_entropy(0.5) == 1.0


def test_ensemble_stats():
    s = ensemble_stats(3)
    assert (s.size, s.log2_size, s.expected_photons) == (128, 7, 11.5)
    s = ensemble_stats(1)
    assert (s.size, s.expected_photons) == (2, 1.5)
    assert ensemble_stats(50).size == 2 ** (19600 + 1225 + 50)


def test_hoeffding():
    assert hoeffding_samples(0.1, 0.05) == 185
    assert epsilon_for(185, 0.05) <= 0.1
    assert hoeffding_samples(0.01, 0.05) == 18445
    for bad in ((0.1, 2), (0, 0.05), (1.5, 0.1)):
        with pytest.raises(DomainError):
            hoeffding_samples(*bad)
    with pytest.raises(DomainError):
        epsilon_for(0, 0.05)


def test_plan_estimation():
    plan = plan_estimation(0.01, 0.05, GateCounts(2, y=1), 1.0, 2)
    assert plan.eps_klm == pytest.approx(0.01 * P)
    assert plan.eps_graph == pytest.approx(0.01 * 16)
    assert plan.n_klm == hoeffding_samples(0.01 * P, 0.05)
