"""Smoke tests for the ncrat python module."""

import math

import numpy as np
import pytest

import ncrat


def ginibre(n, seed, index=1, trial=0):
    return ncrat.sample("ginibre", n, seed=seed, index=index, trial=trial)


def test_parse_level_inventory_pretty():
    e = ncrat.parse("y^-1 * (x^-1 + y^-1)^-1 * x^-1 - (x + y)^-1")
    assert e.level == 2
    assert e.num_variables == 2
    assert ncrat.parse(str(e)) == e

    adj = ncrat.parse("(x2' + x1)^-1")
    assert adj.adjoint_variables == [2]
    assert adj.ast()["kind"] == "inverse"


def test_parse_error_is_a_value_error():
    with pytest.raises(ValueError):
        ncrat.parse("x1 + * x2")


def test_evaluate_matches_numpy():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    e = ncrat.parse("x1 * x2' - 2 * x1")
    got = ncrat.evaluate(e, [a, b])
    want = a @ b.conj().T - 2 * a
    assert np.allclose(got, want, atol=1e-12)


def test_domain_error_raises():
    with pytest.raises(ncrat.DomainError):
        ncrat.evaluate(ncrat.parse("x1^-1"), [np.zeros((3, 3), dtype=complex)])
    ok, diags = ncrat.in_domain(ncrat.parse("x1^-1"), [np.zeros((3, 3), dtype=complex)])
    assert not ok
    assert diags[0]["sigma_min"] == 0.0


def test_realization_agrees_with_direct_evaluation():
    e = ncrat.parse("(x1 * x2)^-1 * x1")
    r = ncrat.realize(e)
    assert r.dim == 4  # 2 for the product, +1 for the inverse, +1 for x1
    report = r.verify(trials=25, dim=4, seed=11)
    assert report["eval_only"] == 0 and report["realization_only"] == 0
    assert report["max_rel_error"] < 1e-8

    a, b = ginibre(4, 7, 1), ginibre(4, 7, 2)
    direct = ncrat.evaluate(e, [a, b])
    realized = r.evaluate([a, b])
    assert np.allclose(direct, realized, atol=1e-9)


def test_identity_fixtures():
    eq = ncrat.test_identity(ncrat.parse("(x1 * x2)^-1"), ncrat.parse("x2^-1 * x1^-1"))
    assert eq["verdict"] == "probably_equal"

    distinct = ncrat.test_identity(ncrat.parse("x1 * x2"), ncrat.parse("x2 * x1"))
    assert distinct["verdict"] == "distinct"
    assert distinct["witness"]["size"] >= 2

    empty = ncrat.test_identity(
        ncrat.parse("(1 - x2 * (x1 * x2)^-1 * x1)^-1"), ncrat.parse("x1")
    )
    assert empty["verdict"] == "no_common_domain_point"

    zero = ncrat.zero_test(ncrat.parse("y^-1 * (x^-1 + y^-1)^-1 * x^-1 - (x + y)^-1"))
    assert zero["verdict"] == "probably_equal"


def test_gue_sampling_and_moments():
    x = ncrat.sample("gue", 128, seed=3)
    assert np.array_equal(x, x.conj().T)  # exactly Hermitian
    m2 = float(np.mean([(np.linalg.norm(ncrat.sample("gue", 128, seed=3, trial=t)) ** 2) / 128
                        for t in range(10)]))
    assert 0.85 < m2 < 1.15

    u = ncrat.sample("haar", 8, seed=1)
    assert np.linalg.norm(u.conj().T @ u - np.eye(8)) < 1e-12


def test_matrix_helpers():
    m = np.diag([3.0, -4.0j]).astype(complex)
    assert ncrat.operator_norm(m) == pytest.approx(4.0)
    assert ncrat.normalized_trace(np.eye(5, dtype=complex)) == pytest.approx(1.0)

    inv, sigma_min, rcond = ncrat.invert(np.eye(2, dtype=complex) * 2)
    assert np.allclose(inv, np.eye(2) / 2)
    assert sigma_min == pytest.approx(2.0)
    assert rcond == pytest.approx(1.0)
    with pytest.raises(ncrat.SingularMatrixError):
        ncrat.invert(np.zeros((2, 2), dtype=complex))

    g = ginibre(6, 9)
    p = g @ g.conj().T
    smin = np.linalg.svd(g, compute_uv=False)[-1]
    assert ncrat.smallest_spectral_point_psd(p) == pytest.approx(smin**2, rel=1e-8)

    blocks = [ginibre(3, 13, i) for i in (1, 2, 3)]
    d = ginibre(2, 13, 4)[:2, :2] + 3 * np.eye(2)
    inv = ncrat.schur_block_inverse(blocks[0], blocks[1][:, :2], blocks[2][:2, :], d)
    assembled = np.block([[blocks[0], blocks[1][:, :2]], [blocks[2][:2, :], d]])
    assert np.linalg.norm(inv @ assembled - np.eye(5)) < 1e-10


def test_spectral_gap_identity():
    a = 3 * np.eye(6) + ginibre(6, 21)
    got = ncrat.inverse_norm_via_gap(ncrat.parse("x1"), [a])
    want = 1.0 / np.linalg.svd(a, compute_uv=False)[-1]
    assert got == pytest.approx(want, rel=1e-8)


def test_stieltjes_semicircle():
    g3 = ncrat.stieltjes_semicircle(3.0 + 0j)
    assert g3.real == pytest.approx((3 - math.sqrt(5)) / 2, abs=1e-12)
    with pytest.raises(ValueError):
        ncrat.stieltjes_semicircle(0.5 + 0j)


def test_run_convergence_report():
    report = ncrat.run_convergence(
        {
            "expression": "(3 - x1)^-1",
            "ensembles": [{"kind": "gue"}],
            "sizes": [16, 32],
            "trials": 4,
            "seed": 5,
        }
    )
    assert report["format_version"] == 1
    assert len(report["rows"]) == 8
    assert report["per_size"][1]["in_domain"] == 4
    again = ncrat.run_convergence(
        {
            "expression": "(3 - x1)^-1",
            "ensembles": [{"kind": "gue"}],
            "sizes": [16, 32],
            "trials": 4,
            "seed": 5,
        }
    )
    assert report == again  # deterministic

    curve = ncrat.eventual_domain_curve(
        {
            "expression": "(3 - x1)^-1",
            "ensembles": [{"kind": "gue"}],
            "sizes": [16, 64],
            "trials": 5,
            "seed": 5,
        }
    )
    assert [p["n"] for p in curve["curve"]] == [16, 64]


def test_outlier_experiment():
    report = ncrat.run_outlier_experiment(
        {
            "expression": "3 + x1",
            "ensembles": [{"kind": "gue"}],
            "sizes": [32],
            "trials": 3,
            "seed": 5,
        }
    )
    summary = report["per_size"][0]
    assert summary["outlier_norm_oracle"] == pytest.approx(33.0)
    assert summary["mean_outlier_norm"] == pytest.approx(33.0, rel=1e-9)
    assert summary["mean_outlier_trace_re"] == pytest.approx(
        1.0 + summary["mean_base_trace_re"], abs=0.15
    )


def test_fixture_catalog_exposed():
    names = {f["name"] for f in ncrat.fixture_catalog()}
    assert "resolvent_at_3" in names
    assert "hua_zero" in names
    assert len(ncrat.realization_fixtures()) >= 8
