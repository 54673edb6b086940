import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permcap.capfun import cap_area
from permcap.discrepancy import (
    CapSpec,
    cap_fraction,
    empty_cap_certificate,
    lecd_report,
    marginal_distance,
    nscd_lower_bound,
    orbit_threshold,
    orbit_threshold_oracle,
)
from permcap.families import common_norm, configuration, maximal, maximal_weights, regular
from permcap.geometry import CenteredConfiguration, center_project, orbit_matrix, simplex_vertex


def test_threshold_simplex_direction():
    for q in range(3, 51):
        y = CenteredConfiguration(simplex_vertex(q, q).entries)
        thr = orbit_threshold(y)
        assert abs(thr.t - 1.0 / (q - 1)) <= 1e-12


def test_threshold_regular():
    for q in (4, 10, 100):
        thr = orbit_threshold(regular(q))
        assert abs(thr.t - math.sqrt(3.0 / (q + 1))) <= 1e-12
        assert thr.argmin == (1, q - 1)


def test_threshold_regular_scaling_limit():
    q = 10**4
    t = orbit_threshold(regular(q)).t
    assert abs(t * math.sqrt(q) - math.sqrt(3.0)) <= 0.01


def test_threshold_maximal_all_rays_tie():
    for q in (4, 7, 40):
        y, w = maximal(q)
        thr = orbit_threshold(y)
        assert abs(thr.t - math.sqrt(3.0 / (q + 1)) / w.norm_a) <= 1e-12
        assert thr.argmin == tuple(range(1, q))


def _spread(vals):
    return max(vals) - min(vals) > 1e-3


@given(
    st.lists(st.floats(-100, 100), min_size=3, max_size=9).filter(_spread),
    st.floats(1e-3, 1e3),
)
def test_threshold_scale_invariance(vals, c):
    y = center_project(np.array(vals))
    t1 = orbit_threshold(y).t
    t2 = orbit_threshold(CenteredConfiguration(c * y.entries)).t
    assert abs(t1 - t2) <= 1e-12 * max(1.0, abs(t1))


def test_oracle_regular_q4():
    y = regular(4)
    got = orbit_threshold_oracle(y, directions=100_000, seed=3)
    t = math.sqrt(3.0 / 5.0)
    assert t - 1e-12 <= got <= t + 0.01


def test_oracle_maximal_q4():
    y, _ = maximal(4)
    t = orbit_threshold(y).t
    got = orbit_threshold_oracle(y, directions=100_000, seed=4)
    assert t - 1e-12 <= got <= t + 0.01


def test_oracle_never_undercuts():
    rng = np.random.default_rng(9)
    for _ in range(5):
        y = center_project(rng.normal(size=5))
        assert orbit_threshold_oracle(y, directions=20_000, seed=7) >= orbit_threshold(y).t - 1e-12


def test_lecd_report_regular_q1000():
    rep = lecd_report(regular(1000), family="regular")
    assert abs(rep.lecd - 0.0416) <= 0.005
    assert rep.lecd <= 0.5
    assert abs(rep.lecad - math.acos(rep.t_star)) <= 1e-12
    assert abs(rep.lecd - float(cap_area(1000, rep.t_star))) <= 1e-12
    assert rep.gaussian_lower <= rep.lecd <= rep.wendel_upper


def test_lecd_report_maximal_q100():
    rep = lecd_report(maximal(100)[0], family="maximal")
    assert rep.lecd <= 1e-4


def test_lecd_report_simplex_direction_large_q():
    # the two-valued direction keeps a near-hemisphere empty cap; at q = 1000
    # the exact area is still 0.4874, only at q = 10^4 does it reach 0.5-0.01
    y4 = CenteredConfiguration(simplex_vertex(10**4, 10**4).entries)
    rep = lecd_report(y4, family="simplex")
    assert abs(rep.lecd - 0.5) <= 0.01
    y3 = CenteredConfiguration(simplex_vertex(1000, 1000).entries)
    assert abs(lecd_report(y3).lecd - 0.48739) <= 5e-4


def test_lecd_report_small_q_has_no_gaussian_bound():
    rep = lecd_report(regular(4))
    assert rep.gaussian_lower is None
    with pytest.raises(ValueError):
        lecd_report(center_project([0.0, 1.0]))


def test_cap_fraction_contains_configuration():
    y = regular(5)
    t = orbit_threshold(y).t
    cap = CapSpec(center=y.entries.copy(), t=t - 1e-6)
    assert cap_fraction(y, cap, mode="exhaustive").value > 0


def test_cap_fraction_certified_cap_is_empty():
    q = 6
    y = regular(q)
    center = -common_norm(q) * simplex_vertex(q, 1).entries
    cap = CapSpec(center=center, t=math.sqrt(3.0 / (q + 1)))
    assert cap_fraction(y, cap, mode="exhaustive").value == 0.0


def test_cap_fraction_full_sphere():
    y = regular(4)
    # generic center on the orbit's sphere: no orbit point is exactly antipodal
    rng = np.random.default_rng(1)
    w = rng.normal(size=4)
    w -= w.mean()
    w *= y.norm / np.linalg.norm(w)
    cap = CapSpec(center=w, t=-1.0)
    assert cap_fraction(y, cap, mode="exhaustive").value == 1.0


def test_cap_fraction_open_boundary():
    # centering the full cap at an orbit point leaves exactly its antipode out
    y = regular(4)
    cap = CapSpec(center=y.entries.copy(), t=-1.0)
    n = orbit_matrix(y).shape[0]
    assert cap_fraction(y, cap, mode="exhaustive").value == 1.0 - 1.0 / n


def test_cap_fraction_sampled_matches_exhaustive():
    y = regular(5)
    rng = np.random.default_rng(2)
    w = rng.normal(size=5)
    w -= w.mean()
    cap = CapSpec(center=w, t=0.2)
    exact = cap_fraction(y, cap, mode="exhaustive")
    est = cap_fraction(y, cap, mode="sampled", n=40_000, seed=5)
    assert abs(est.value - exact.value) <= 3.0 * max(est.std_error, 1e-3)


def test_cap_fraction_guards():
    from permcap.geometry import OrbitTooLargeError

    y = regular(4)
    with pytest.raises(ValueError):
        cap_fraction(y, CapSpec(center=np.array([1.0, 0.0, -1.0]), t=0.0))
    big = center_project(np.arange(10.0))
    with pytest.raises(OrbitTooLargeError):
        cap_fraction(big, CapSpec(center=big.entries.copy(), t=0.0), mode="exhaustive")
    with pytest.raises(OrbitTooLargeError):
        nscd_lower_bound(center_project(np.arange(9.0)), directions=10, seed=0)


def test_nscd_hexagon_lower_bound():
    y = regular(3)
    est = nscd_lower_bound(y, directions=500, seed=1)
    # the empty-cap center already certifies |0 - 1/6|
    assert est.value >= 1.0 / 6.0 - 1e-12
    assert est.value <= 1.0


def test_nscd_at_least_lecd():
    for fam in ("regular", "maximal"):
        y = configuration(fam, 5)
        rep = lecd_report(y, family=fam)
        est = nscd_lower_bound(y, directions=200, seed=2)
        assert est.value >= rep.lecd - 1e-12


def test_nscd_seed_stability():
    y = regular(4)
    a = nscd_lower_bound(y, directions=10_000, seed=11)
    b = nscd_lower_bound(y, directions=10_000, seed=12)
    assert abs(a.value - b.value) <= 0.005
    again = nscd_lower_bound(y, directions=10_000, seed=11)
    assert again.value == a.value


def test_marginal_distance_regular_limit():
    # limiting value: KS distance between Uniform(-sqrt3, sqrt3) and N(0,1),
    # 0.057207 by direct optimization of the two CDFs
    assert abs(marginal_distance("regular", 10**4) - 0.057207) <= 0.005


def test_marginal_distance_maximal_concentration():
    # exact scan value 0.15089 at q=100, growing slowly (0.19106 at q=10^4):
    # concentration of the coordinate near 0 is only sqrt(log q)-fast
    d100 = marginal_distance("maximal", 100)
    assert abs(d100 - 0.15089) <= 1e-4
    assert d100 > marginal_distance("regular", 100) > marginal_distance("normal", 100)
    assert marginal_distance("maximal", 10**4) > d100


def test_marginal_distance_normal_small():
    assert marginal_distance("normal", 1000) <= 0.02


def test_marginal_distance_is_probability():
    for fam in ("regular", "maximal", "normal"):
        d = marginal_distance(fam, 12)
        assert 0.0 <= d <= 1.0
    with pytest.raises(ValueError):
        marginal_distance("simplex", 10)


def test_certificate_regular_q5():
    cert = empty_cap_certificate(regular(5))
    assert cert.ray_index == 1
    assert abs(cert.cap.t - math.sqrt(3.0 / 6.0)) <= 1e-12
    assert cert.verified


def test_certificate_maximal_all_rays():
    y, _ = maximal(5)
    thr = orbit_threshold(y)
    assert thr.argmin == (1, 2, 3, 4)
    cert = empty_cap_certificate(y)
    assert cert.verified


@settings(max_examples=30)
@given(st.lists(st.floats(-50, 50), min_size=3, max_size=8).filter(_spread))
def test_certificate_equality_always(vals):
    y = center_project(np.array(vals))
    cert = empty_cap_certificate(y)
    assert cert.verified
    assert abs(cert.equality_gap) <= 1e-12 * max(1.0, abs(cert.bound))


def test_capspec_validation():
    with pytest.raises(ValueError):
        CapSpec(center=np.array([1.0, 1.0]), t=0.0)   # not zero-sum
    with pytest.raises(ValueError):
        CapSpec(center=np.array([-1.0, 1.0]), t=1.0)  # t out of range
    with pytest.raises(ValueError):
        CapSpec(center=np.zeros(3), t=0.0)
