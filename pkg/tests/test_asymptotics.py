import math

import numpy as np
import pytest

from zalcman import asymptotics as asy
from zalcman.classes import HURWITZ, NW, HULL_CONVEX, HULL_STARLIKE, hull_convex_alpha, sample_many
from zalcman.errors import DomainError, ExcludedPair, HypothesisViolated, InvalidArgument
from zalcman.series import TruncatedSeries, koebe


def test_max_modulus_examples():
    assert asy.max_modulus(asy.koebe_handle, 0.5) == pytest.approx(2.0, rel=1e-12)
    assert asy.max_modulus(asy.half_plane_handle, 0.9) == pytest.approx(9.0, rel=1e-12)
    for r in (0.1, 0.5, 0.97):
        assert asy.max_modulus(asy.identity_handle, r) == pytest.approx(r, rel=1e-12)
    with pytest.raises(DomainError):
        asy.max_modulus(asy.koebe_handle, 1.0)


def test_max_modulus_refines_off_grid_maximum():
    # rotation puts the maximum between grid points; the refinement recovers it
    c = np.exp(1j * np.pi / 1024)
    h = asy.rotated(asy.koebe_handle, c)
    assert asy.max_modulus(h, 0.9, K=16) == pytest.approx(90.0, rel=1e-9)


def test_max_modulus_accepts_truncated_series():
    assert asy.max_modulus(koebe(60), 0.5) == pytest.approx(2.0, abs=1e-6)


def test_hayman_examples():
    est = asy.hayman_index(asy.koebe_handle, J=20)
    assert np.allclose(est.values, est.radii, rtol=1e-9)
    assert np.all(np.diff(est.values) > 0)
    assert est.alpha_hat >= 0.999 and est.alpha_hat <= 1 + 1e-6
    assert asy.hayman_index(asy.identity_handle).alpha_hat < 1e-5
    odd = asy.hayman_index(asy.odd_geometric_handle)
    r = odd.radii[-1]
    assert odd.alpha_hat == pytest.approx(r * (1 - r) / (1 + r), rel=1e-6)
    assert odd.alpha_hat <= 1e-3


def test_ratio_examples():
    assert asy.ratio_convergence(asy.koebe_coefficient, 2, [(100, 100)]) == [1.0]
    got = asy.ratio_convergence(asy.odd_geometric_coefficient, 1, [(200, 200)])[0]
    assert got == pytest.approx(1 / 39601, rel=1e-14)
    assert asy.ratio_convergence(asy.identity_coefficient, 3 - 1j, [(5, 7), (9, 2)]) == [0.0, 0.0]


def test_koebe_ratio_identically_one():
    for lam in (2, 0.5, -3, 1 + 1j, 1.25):
        for pairs in asy.scan_paths(2, 60).values():
            assert asy.ratio_convergence(asy.koebe_coefficient, lam, pairs) == [1.0] * len(pairs)


def test_excluded_pair_is_named():
    # lam mn - m - n + 1 vanishes at lam = 3/4, m = n = 2
    with pytest.raises(ExcludedPair) as info:
        asy.ratio_convergence(asy.koebe_coefficient, 0.75, [(3, 3), (2, 2)])
    assert (info.value.m, info.value.n) == (2, 2)


def test_ratio_accepts_truncated_series():
    f = TruncatedSeries([1.0, 0, 1, 0, 1, 0, 1])
    assert asy.ratio_convergence(f, 1, [(3, 3)]) == pytest.approx([0.0])


def test_corollary_witness():
    pairs = asy.scan_paths(2, 80)["diagonal"]
    est = asy.hayman_index(asy.odd_geometric_handle)
    w = asy.corollary_witness(asy.odd_geometric_coefficient, 1, est.alpha_hat, 0.5, pairs)
    assert w is not None
    m, n = w
    tail = asy.ratio_convergence(asy.odd_geometric_coefficient, 1, [p for p in pairs if p[0] >= m])
    assert max(tail) <= 0.5
    with pytest.raises(InvalidArgument):
        asy.corollary_witness(asy.koebe_coefficient, 1, 1.0, 0.1, pairs)


def test_audit_examples():
    for n in range(2, 11):
        res = asy.zalcman_equivalence_audit(n, 2 * n - 1, n)
        assert res.agree and res.a and res.equality_a
    res = asy.zalcman_equivalence_audit(0, 0, 4)
    assert (res.a, res.b, res.c, res.d) == (True, True, True, True)
    with pytest.raises(HypothesisViolated):
        asy.zalcman_equivalence_audit(1, 2 * 3 - 1 + 0.5, 3)


def test_audit_statements_agree_on_random_pairs():
    rng = np.random.default_rng(12)
    seen = set()
    for n in range(2, 11):
        for _ in range(300):
            res = asy.zalcman_equivalence_audit(*asy.random_admissible_pair(n, rng), n)
            assert res.agree
            seen.add(res.a)
    assert seen == {True, False}  # the sampler exercises both outcomes


def test_audit_grid_preconditions():
    with pytest.raises(InvalidArgument):
        asy.zalcman_equivalence_audit(1, 1, 3, t_grid=(0.0, 0.5))
    with pytest.raises(InvalidArgument):
        asy.zalcman_equivalence_audit(1, 1, 3, r_grid=(1.0,))


def test_d_holds_on_negative_reals_whenever_a_holds():
    rng = np.random.default_rng(4)
    for _ in range(500):
        n = int(rng.integers(2, 9))
        an, a2n1 = asy.random_admissible_pair(n, rng)
        if abs(an * an - a2n1) > (n - 1) ** 2:
            continue
        for M in (0.0, 0.3, 1.0, 7.0):
            lhs = abs(an * an + M * a2n1)
            assert lhs <= (n - 1) ** 2 + (1 + M) * (2 * n - 1) + 1e-9


SUBCLASSES = [HURWITZ, NW, HULL_CONVEX, hull_convex_alpha(0.25), HULL_STARLIKE]


@pytest.mark.parametrize("spec", SUBCLASSES, ids=lambda s: s.name)
def test_b0_never_violated(spec):
    samples = [TruncatedSeries(row) for row in sample_many(spec, 19, 300, seed=6)]
    report = asy.conjecture_scan(samples, "B", 0.0, range(2, 11))
    assert report.violations == 0 and report.witness is None
    assert len(report.rows) == 300 * 9
    assert [r.sample_index for r in report.rows] == sorted(r.sample_index for r in report.rows)


def test_b_slack_is_concave_in_t():
    # the set of admissible t is convex: slack(mid) >= min(slack(s), slack(t))
    rng = np.random.default_rng(8)
    for _ in range(2000):
        n = int(rng.integers(2, 10))
        an, a2n1 = asy.random_admissible_pair(n, rng)
        s, t = sorted(rng.uniform(0, 1, size=2))
        lo = asy.predicate_slack("B", s, an, a2n1, n)
        hi = asy.predicate_slack("B", t, an, a2n1, n)
        mid = asy.predicate_slack("B", (s + t) / 2, an, a2n1, n)
        if lo >= 0 and hi >= 0:
            assert mid >= -1e-12
        assert mid >= (lo + hi) / 2 - 1e-9


def test_c1_on_hurwitz():
    samples = [TruncatedSeries(row) for row in sample_many(HURWITZ, 15, 500, seed=9)]
    report = asy.conjecture_scan(samples, "C", 1.0, range(2, 9))
    assert report.min_slack > 0


def test_scan_detects_planted_violation():
    # a_2 = 3 breaks (B_0) at n = 2 since |a_2|^2 = 9 > 4
    bad = TruncatedSeries([1, 3, 0])
    report = asy.conjecture_scan([koebe(3), bad], "B", 0.0, [2])
    assert report.violations == 1
    assert report.witness.sample_index == 1
    assert report.min_slack == pytest.approx(-5.0)


def test_scan_errors():
    with pytest.raises(InvalidArgument):
        asy.conjecture_scan([koebe(3)], "B", 0.0, [3])
    with pytest.raises(InvalidArgument):
        asy.predicate_slack("E", 0.0, 1, 1, 2)
    with pytest.raises(InvalidArgument):
        asy.predicate_slack("B", 1.5, 1, 1, 2)


def test_d_predicate_on_koebe():
    for n in range(2, 8):
        assert asy.predicate_slack("D", 1.0, n, 2 * n - 1, n) >= -1e-9


def test_bieberbach_iterate():
    seq = asy.bieberbach_iterate(math.e, 40)
    assert seq[1] == pytest.approx(1.6487212707, rel=1e-10)
    assert all(a > b for a, b in zip(seq, seq[1:]))
    assert all(c > 1 for c in seq)
    assert seq[-1] - 1 < 1e-11
    assert asy.first_below(seq, 1.01) == 7
    with pytest.raises(InvalidArgument):
        asy.bieberbach_iterate(1.0, 3)


def test_iteration_step():
    assert asy.iteration_step_holds(2, 1.0, math.e)
    assert 4 + (math.e - 1) * 3 == pytest.approx(9.155, abs=1e-3)
    for n in range(2, 51):
        for t in (0.0, 0.5, 1.0):
            for C in (1.01, 2.0, math.e):
                assert asy.iteration_step_holds(n, t, C)
