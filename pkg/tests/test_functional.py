import cmath

import numpy as np
import pytest

from zalcman.classes import (
    HULL_CONVEX,
    HULL_STARLIKE,
    HURWITZ,
    KOEBE_FAMILY,
    NW,
    coefficient_A,
    extremal,
    hull_convex_alpha,
    sample_many,
)
from zalcman.errors import InsufficientTruncation, InvalidArgument, Unsupported
from zalcman.functional import (
    EquivalenceInstance,
    FunctionalSpec,
    bound_report,
    caratheodory_checks,
    critical_lambda,
    extremal_branches,
    lambda_grid,
    lemma_critical_lambda,
    lemma_equivalence,
    parse_lambda_grid,
    sharp_bound,
    sharp_bounds,
    sum_form_check,
    sum_form_slacks,
    zalcman,
    zalcman_values,
)
from zalcman.series import TruncatedSeries, identity, koebe, rotate

BOUND_CLASSES = [HURWITZ, NW, HULL_CONVEX, hull_convex_alpha(-0.5), hull_convex_alpha(0.25),
                 hull_convex_alpha(0.5), HULL_STARLIKE]
PAIRS = [(m, n) for m in range(2, 6) for n in range(2, 6)]


def test_zalcman_examples():
    assert zalcman(identity(5), FunctionalSpec(3 + 1j, 2, 3)) == 0
    assert zalcman(koebe(3), FunctionalSpec(1, 2, 2)) == 1
    f = TruncatedSeries([1, 0, 1 / 3])
    assert abs(zalcman(f, FunctionalSpec(2, 2, 2))) == pytest.approx(1 / 3)
    with pytest.raises(InsufficientTruncation):
        zalcman(koebe(3), FunctionalSpec(1, 2, 3))
    with pytest.raises(InvalidArgument):
        FunctionalSpec(1, 1, 3)


def test_sharp_bound_examples():
    assert sharp_bound(HURWITZ, FunctionalSpec(1, 2, 2)) == pytest.approx(1 / 3)
    assert sharp_bound(HURWITZ, FunctionalSpec(24, 2, 3)) == pytest.approx(1.0)
    assert sharp_bound(HULL_STARLIKE, FunctionalSpec(1, 2, 2)) == pytest.approx(3.0)
    for lam in (0.5, 1, 1.5 + 0.5j, 1 + 1j, 2):
        assert abs(1 - lam) <= 1
        assert sharp_bound(HULL_CONVEX, FunctionalSpec(lam, 3, 4)) == 1.0
    with pytest.raises(Unsupported):
        sharp_bound(KOEBE_FAMILY, FunctionalSpec(1, 2, 2))


def test_starlike_lambda_one_bound():
    # lam = 1 reduces to max{m+n-1, (m-1)(n-1)}
    for m, n in PAIRS + [(7, 9), (10, 10)]:
        assert sharp_bound(HULL_STARLIKE, FunctionalSpec(1, m, n)) == pytest.approx(max(m + n - 1, (m - 1) * (n - 1)))


def test_sum_form_examples():
    half_plane = TruncatedSeries(np.ones(10))
    for m, n in PAIRS:
        assert sum_form_check(HULL_CONVEX, half_plane, m, n) == pytest.approx(0.0, abs=1e-15)
        assert sum_form_check(HURWITZ, identity(10), m, n) == 1.0
    assert sum_form_check(HULL_STARLIKE, koebe(3), 2, 2) == pytest.approx(0.0, abs=1e-15)


def test_bound_report():
    r = bound_report(HULL_STARLIKE, koebe(5), FunctionalSpec(0, 2, 3))
    assert (r.value, r.bound, r.slack) == (4.0, 4.0, 0.0)


def test_lemma_examples():
    r = lemma_equivalence(EquivalenceInstance(0, 1, 2, 1))
    assert r.sum_holds and r.max_holds_on_grid
    assert abs(r.worst_lambda) == pytest.approx(2.0)
    r = lemma_equivalence(EquivalenceInstance(1, 0, 1, 1))
    assert r.sum_holds and r.max_holds_on_grid
    assert r.worst_ratio == pytest.approx(1.0)


def test_lemma_random_instances_agree():
    rng = np.random.default_rng(0)
    outcomes = set()
    for _ in range(1000):
        a = complex(*rng.standard_normal(2))
        b = complex(*rng.standard_normal(2))
        C = float(np.exp(rng.uniform(-2, 2)))
        M = (abs(a) + abs(b) * C) / C * rng.uniform(0.5, 1.5)
        r = lemma_equivalence(EquivalenceInstance(a, b, C, M))
        assert r.sum_holds == r.max_holds_on_grid
        outcomes.add(r.sum_holds)
    assert outcomes == {True, False}


def test_lemma_critical_lambda_attains_sum():
    rng = np.random.default_rng(1)
    for _ in range(200):
        a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        C = float(rng.uniform(0.1, 5))
        lam = lemma_critical_lambda(EquivalenceInstance(a, b, C, 1.0))
        assert abs(a + lam * b) == pytest.approx(abs(a) + abs(b) * C, abs=1e-12)


def test_caratheodory_check_examples():
    p = TruncatedSeries(np.full(8, 2.0))
    first, second = caratheodory_checks(p, 5, 2, 0.5)
    assert first == pytest.approx(2.0) and abs(second) <= 1e-15
    zero = TruncatedSeries(np.zeros(8))
    for w in (0, 1 + 1j, -3):
        first, second = caratheodory_checks(zero, 6, 3, w)
        assert first == pytest.approx(2 * max(1, abs(1 - 2 * w)))
        assert second == 2
    with pytest.raises(InvalidArgument):
        caratheodory_checks(p, 5, 5, 0.5)
    with pytest.raises(InvalidArgument):
        caratheodory_checks(p, 9, 2, 0.5)


def test_rotation_invariance():
    rng = np.random.default_rng(2)
    f = TruncatedSeries(sample_many(HULL_STARLIKE, 10, 1, 3)[0])
    for _ in range(20):
        c = cmath.exp(1j * rng.uniform(0, 2 * np.pi))
        lam = complex(*rng.standard_normal(2))
        for m, n in PAIRS:
            spec = FunctionalSpec(lam, m, n)
            assert abs(zalcman(rotate(f, c), spec)) == pytest.approx(abs(zalcman(f, spec)), rel=1e-14, abs=1e-14)


def test_lambda_grid_contents():
    grid = lambda_grid(HULL_CONVEX, 2, 2)
    assert grid.size >= 96
    assert np.any(grid == 0) and np.any(grid == 1)
    assert np.any(np.isclose(np.abs(1 - grid), 1.0)) and np.any(np.abs(1 - grid) < 1) and np.any(np.abs(1 - grid) > 1)
    assert parse_lambda_grid("0,0.5,1 x 16") == ([0.0, 0.5, 1.0], 16)
    with pytest.raises(InvalidArgument):
        parse_lambda_grid("0,0.5")


@pytest.mark.parametrize("spec", BOUND_CLASSES, ids=lambda s: s.name)
def test_max_and_sum_forms_agree_on_samples(spec):
    coeffs = sample_many(spec, 10, 500, seed=5)
    for m, n in PAIRS:
        grid = lambda_grid(spec, m, n)
        slack = sharp_bounds(spec, grid, m, n)[None, :] - zalcman_values(coeffs, grid, m, n)
        sums = sum_form_slacks(spec, coeffs, m, n)
        assert slack.min() >= -1e-9
        assert sums.min() >= -1e-9


def _lemma_scale(spec, m, n):
    """(bound - |Phi|) at the critical lambda equals this times the sum-form slack."""
    t = m + n - 1
    tag = spec.tag.value
    if tag == "hurwitz":
        return 1 / (2 * n - 1) if m == n else 1 / t
    if tag == "hull_convex_alpha":
        return coefficient_A(t, spec.alpha)
    if tag == "hull_starlike":
        return t
    return 1.0


@pytest.mark.parametrize("spec", BOUND_CLASSES, ids=lambda s: s.name)
def test_sum_form_iff_max_form_including_nonmembers(spec):
    """Both directions of the lemma, with the critical lambda added per function."""
    rng = np.random.default_rng(6)
    members = sample_many(spec, 10, 200, seed=7)
    # scale some samples up to push them out of the class
    scaled = members.copy()
    scaled[:, 1:] *= rng.uniform(0.5, 2.5, size=(200, 1))
    outcomes = set()
    for row in scaled:
        f = TruncatedSeries(row)
        for m, n in PAIRS:
            s = sum_form_check(spec, f, m, n)
            grid = lambda_grid(spec, m, n)
            lam_star = critical_lambda(spec, f, m, n)
            if lam_star is not None:
                grid = np.concatenate((grid, [lam_star]))
                gap = sharp_bound(spec, FunctionalSpec(lam_star, m, n)) - abs(zalcman(f, FunctionalSpec(lam_star, m, n)))
                assert gap == pytest.approx(_lemma_scale(spec, m, n) * s, abs=1e-10)
            max_ok = bool(np.all(zalcman_values(f.coeffs, grid, m, n)[0] <= sharp_bounds(spec, grid, m, n) + 1e-9))
            assert (s >= -1e-9) == max_ok
            outcomes.add(max_ok)
    assert outcomes == {True, False}


def test_hurwitz_proof_chain():
    coeffs = sample_many(HURWITZ, 10, 5000, seed=8)
    for m, n in PAIRS:
        x = m * np.abs(coeffs[:, m - 1])
        y = n * np.abs(coeffs[:, n - 1])
        assert np.all(4 * x * y <= (x + y) ** 2 + 1e-15)
        assert np.all((x + y) ** 2 <= x + y + 1e-15)


def test_bound_symmetries():
    rng = np.random.default_rng(9)
    for _ in range(100):
        r, t1, t2 = rng.uniform(0, 10), rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi)
        for m, n in PAIRS:
            assert sharp_bounds(HURWITZ, [r * np.exp(1j * t1)], m, n)[0] == pytest.approx(
                sharp_bounds(HURWITZ, [r * np.exp(1j * t2)], m, n)[0], rel=1e-15
            )
            lam1, lam2 = 1 - r * np.exp(1j * t1), 1 - r * np.exp(1j * t2)
            assert sharp_bounds(HULL_CONVEX, [lam1], m, n)[0] == pytest.approx(sharp_bounds(HULL_CONVEX, [lam2], m, n)[0])


def _regime_lambdas(spec, m, n):
    """lam strictly in the generic regime, strictly in the resonant regime, and on the threshold."""
    from zalcman.functional import critical_circle

    out = {}
    for label, scale in (("generic", 2.0), ("resonant", 0.5), ("threshold", 1.0)):
        out[label] = list(critical_circle(spec, m, n, angles=8, scale=scale))
    out["resonant"].append(0.0 if spec.tag.value == "hurwitz" else complex(critical_circle(spec, m, n, 1, 0.0)[0]))
    return out


@pytest.mark.parametrize("spec", BOUND_CLASSES, ids=lambda s: s.name)
def test_extremals_attain_bound_in_their_regime(spec):
    for m, n in PAIRS:
        for regime, lams in _regime_lambdas(spec, m, n).items():
            for lam in lams:
                fspec = FunctionalSpec(lam, m, n)
                branches = extremal_branches(spec, fspec)
                expected = ["generic", "resonant"] if regime == "threshold" else [regime]
                assert branches == expected
                bound = sharp_bound(spec, fspec)
                for b in branches:
                    value = abs(zalcman(extremal(spec, m, n, b), fspec))
                    assert abs(value - bound) <= 1e-12
                # the other extremal falls strictly short off the threshold
                if regime != "threshold":
                    other = "resonant" if regime == "generic" else "generic"
                    assert abs(zalcman(extremal(spec, m, n, other), fspec)) < bound - 1e-9


def test_cli_extremal_examples():
    f = extremal(HULL_STARLIKE, 2, 2, "resonant")
    assert abs(zalcman(f, FunctionalSpec(0, 2, 2))) == 3 == sharp_bound(HULL_STARLIKE, FunctionalSpec(0, 2, 2))
    g = extremal(NW, 2, 2, "generic")
    assert abs(zalcman(g, FunctionalSpec(2, 2, 2))) == pytest.approx(4 / 3, abs=1e-15)
    assert sharp_bound(NW, FunctionalSpec(2, 2, 2)) == pytest.approx(4 / 3, abs=1e-15)
    lam = 4 / 3
    for b in ("generic", "resonant"):
        assert abs(zalcman(extremal(HURWITZ, 2, 2, b), FunctionalSpec(lam, 2, 2))) == pytest.approx(1 / 3, abs=1e-15)
