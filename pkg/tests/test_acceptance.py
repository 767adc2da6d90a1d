"""Acceptance criteria, each at its stated tolerance; prints one PASS/FAIL line apiece."""

import numpy as np
import pytest

from sasaki import charts, fd
from sasaki.bundle import (TangentPoint, TTVector, canonical_flip, connection_map,
                           covdev_via_connection, psi, sasaki_metric, vertical_lift,
                           whitney_metric, xi, xi_inverse)
from sasaki.core import check_levi_civita, covariant_derivative, metric_at
from sasaki.immersion import NOT_TOTALLY_GEODESIC, TOTALLY_GEODESIC, second_fundamental_form
from sasaki.report import to_json
from sasaki.runner import ScenarioSpec, run_scenario
from sasaki.scenarios import SCENARIOS, build_map, get_scenario

from conftest import record_criterion

pytestmark = pytest.mark.acceptance

LC_MANIFOLDS = ["euclidean:2", "euclidean:3", "sphere2:1", "halfplane", "sphere3:1"]
BUILTIN = [m.name for m in charts.builtin_manifolds()]
MODES = ("analytic", "fd")
SWEEP_SAMPLES = 200
SEED = 0


@pytest.fixture(scope="module")
def sweep():
    """Every builtin scenario in both modes, 200 samples each."""
    return {(name, mode): run_scenario(ScenarioSpec(scenario=name, samples=SWEEP_SAMPLES,
                                                    seed=SEED, mode=mode))
            for name in SCENARIOS for mode in MODES}


def worst(sweep, check, mode, names=None):
    """Largest residual of one check over scenarios, with sample-count sanity."""
    out = 0.0
    for name in names or SCENARIOS:
        rec = next(c for c in sweep[name, mode].checks if c.check == check)
        assert rec.n_samples == SWEEP_SAMPLES and rec.errors == 0, (name, mode, check)
        out = max(out, rec.max_residual)
    return out


def random_tt(rng, M):
    n = M.dim
    u = TangentPoint(M.sample(rng, margin=0.05), rng.standard_normal(n), M)
    return u, TTVector(u, rng.standard_normal(n), rng.standard_normal(n))


def test_criterion_01_levi_civita(rng):
    worst_by_mode = {}
    for mode in MODES:
        m = 0.0
        for name in LC_MANIFOLDS:
            M = charts.manifold(name)
            M = M if mode == "analytic" else M.without_partials()
            for _ in range(100):
                m = max(m, *check_levi_civita(M, M.sample(rng, margin=0.05)))
        worst_by_mode[mode] = m
    ok = worst_by_mode["analytic"] < 1e-10 and worst_by_mode["fd"] < 1e-6
    record_criterion(1, "Levi-Civita torsion / compatibility", ok,
                     f"analytic {worst_by_mode['analytic']:.1e}, fd {worst_by_mode['fd']:.1e}")
    assert ok


def test_criterion_02_flip(rng):
    ok = True
    for i in range(1000):
        M = charts.manifold(BUILTIN[i % len(BUILTIN)])
        u, X = random_tt(rng, M)
        F = canonical_flip(X)
        ok &= np.array_equal(canonical_flip(F).slots(), X.slots())
        ok &= (np.array_equal(F.at.x, u.x) and np.array_equal(F.at.v, X.a)
               and np.array_equal(F.a, u.v) and np.array_equal(F.b, X.b))
    record_criterion(2, "canonical flip involution and intertwining (bitwise)", bool(ok),
                     "1000 TT vectors")
    assert ok


def test_criterion_03_splitting(rng):
    m = 0.0
    for name in BUILTIN:
        M = charts.manifold(name)
        for _ in range(500):
            u, X = random_tt(rng, M)
            h, w = rng.standard_normal((2, M.dim))
            back = xi_inverse(xi(u, h, w))
            s = xi_inverse(X)
            again = xi(u, s.h, s.w)
            m = max(m, np.abs(back.h - h).max(), np.abs(back.w - w).max(),
                    np.abs(again.components() - X.components()).max())
    ok = m < 1e-12
    record_criterion(3, "splitting round trip", ok, f"max {m:.1e}")
    assert ok


def test_criterion_04_sasaki_blocks(rng):
    m = 0.0
    for name in BUILTIN:
        M = charts.manifold(name)
        for _ in range(200):
            u, _ = random_tt(rng, M)
            g = metric_at(M, u.x)
            f1, f2, d1, d2 = rng.standard_normal((4, M.dim))
            V1, V2 = vertical_lift(u, f1), vertical_lift(u, f2)
            H1, H2 = connection_map(u, d1), connection_map(u, d2)
            m = max(m, abs(sasaki_metric(u, V1, V2) - f1 @ g @ f2),
                    abs(sasaki_metric(u, H1, H2) - d1 @ g @ d2),
                    abs(sasaki_metric(u, V1, H2)), abs(sasaki_metric(u, H1, V2)))
    ok = m < 1e-10
    record_criterion(4, "Sasaki block structure", ok, f"max {m:.1e}")
    assert ok


def test_criterion_05_psi_isometry(rng):
    m = 0.0
    for name in BUILTIN:
        M = charts.manifold(name)
        for _ in range(500):
            u, X = random_tt(rng, M)
            Y = TTVector(u, *rng.standard_normal((2, M.dim)))
            m = max(m, abs(whitney_metric(psi(X), psi(Y)) - sasaki_metric(u, X, Y)))
    ok = m < 1e-12
    record_criterion(5, "Whitney-sum map is an isometry", ok, f"max {m:.1e}")
    assert ok


def test_criterion_06_covdev_consistency(rng):
    m = 0.0
    for name in BUILTIN:
        M = charts.manifold(name)
        n = M.dim
        for _ in range(50):
            x0 = M.sample(rng, margin=0.05)
            c0, c1, c2 = rng.standard_normal(n), rng.standard_normal((n, n)), \
                rng.standard_normal((n, n, n))
            field = lambda x: (c0 + c1 @ (x - x0)
                               + 0.5 * np.einsum("kij,i,j->k", c2, x - x0, x - x0))
            d = rng.standard_normal(n)
            m = max(m, np.abs(covdev_via_connection(M, field, x0, d)
                              - covariant_derivative(M, x0, field, d)).max())
    ok = m < 1e-6
    record_criterion(6, "covariant derivative via the connection map", ok, f"max {m:.1e}")
    assert ok


def test_criterion_07_vertical_naturality(sweep):
    m = max(worst(sweep, "vertical-naturality", mode) for mode in MODES)
    ok = m < 1e-6
    record_criterion(7, "vertical naturality, all scenarios", ok, f"max {m:.1e}")
    assert ok


def test_criterion_08_connection_pushforward(sweep):
    fd_max = worst(sweep, "connection-pushforward", "fd")
    an_max = worst(sweep, "connection-pushforward", "analytic")
    ok = fd_max < 1e-4 and an_max < 1e-8
    record_criterion(8, "pushforward of the connection map", ok,
                     f"fd {fd_max:.1e}, analytic {an_max:.1e}")
    assert ok


def test_criterion_09_theorem(sweep):
    fd_max = worst(sweep, "theorem-pullback", "fd")
    an_max = worst(sweep, "theorem-pullback", "analytic")
    ok = fd_max < 1e-4 and an_max < 1e-8
    record_criterion(9, "pullback of the Sasaki metric, all scenarios", ok,
                     f"fd {fd_max:.1e}, analytic {an_max:.1e}")
    assert ok


def test_criterion_10_classifier(sweep):
    tg = {"plane-in-e3", "equator-in-sphere2", "equatorial-sphere2-in-sphere3"}
    not_tg = {"latitude-in-sphere2", "sphere2-in-e3", "clifford-in-sphere3", "paraboloid-in-e3",
              "helix-in-e3", "small-sphere-in-sphere3"}
    ok = True
    for (name, mode), r in sweep.items():
        cl = r.classification
        if name in tg:
            ok &= cl["verdict"] == TOTALLY_GEODESIC
        elif name in not_tg:
            ok &= cl["verdict"] == NOT_TOTALLY_GEODESIC
        ok &= cl["verdict"] == cl["verdict_by_deviation"] and cl["consistent"]
    record_criterion(10, "totally-geodesic classifier", bool(ok),
                     f"{len(SCENARIOS)} scenarios x {len(MODES)} modes")
    assert ok


def test_criterion_11_sff_structure(sweep):
    m = max(worst(sweep, check, mode) for check in ("sff-symmetry", "sff-normality")
            for mode in MODES)
    # north pole: the spherical chart is singular there, so use the stereographic one
    s = get_scenario("sphere2stereo-in-e3")
    f, *_ = build_map(s.map_kind, s.params)
    x = np.zeros(2)
    u = np.array([0.5, 0.0])  # orthonormal: g = 4 I at the origin
    J, H = fd.jacobian(f, x), fd.hessian(f, x)
    second = np.einsum("aij,i,j->a", H, u, u)
    oracle = second - J @ np.linalg.solve(J.T @ J, J.T @ second)
    rel = max(np.linalg.norm(second_fundamental_form(s.immersion(mode), x, u, u) - oracle)
              / np.linalg.norm(oracle) for mode in MODES)
    ok = m < 1e-6 and rel < 1e-6
    record_criterion(11, "second fundamental form structure and north-pole value", ok,
                     f"sym/normal {m:.1e}, north pole rel {rel:.1e}")
    assert ok


def test_criterion_12_chart_independence(sweep):
    charts_ = ["sphere2-in-e3", "sphere2stereo-in-e3"]
    ok, parts = True, []
    for name in charts_:
        fd_max = worst(sweep, "theorem-pullback", "fd", [name])
        an_max = worst(sweep, "theorem-pullback", "analytic", [name])
        ok &= fd_max < 1e-4 and an_max < 1e-8
        parts.append(f"{name}: fd {fd_max:.1e} analytic {an_max:.1e}")
    record_criterion(12, "sphere theorem check in two charts", bool(ok), "; ".join(parts))
    assert ok


def test_criterion_13_determinism():
    ok = True
    for name in SCENARIOS:
        spec = ScenarioSpec(scenario=name, samples=10, seed=5)
        ok &= to_json(run_scenario(spec)) == to_json(run_scenario(spec))
    spec = ScenarioSpec(scenario="clifford-in-sphere3", samples=10, seed=9, mode="cross-check")
    ok &= to_json(run_scenario(spec)) == to_json(run_scenario(spec))
    record_criterion(13, "byte-identical reports for a fixed seed", bool(ok))
    assert ok


def test_full_reports_pass(sweep):
    failed = [(n, m) for (n, m), r in sweep.items() if not r.passed]
    assert not failed
