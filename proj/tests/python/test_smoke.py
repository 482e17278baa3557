"""Smoke tests for the Python bindings.

These exercise the binding layer end to end on small cases; the heavy
numerical validation lives in the C++ unit and acceptance suites.
"""

import math

import pytest

import oujump


def reference_model():
    return oujump.make_model(
        kappa=1.0,
        lambda_=1.0,
        p=2.0 / 3.0,
        alphas=[1.0],
        mus=[1.0],
        betas=[1.0],
        nus=[1.0],
    )


def test_model_properties():
    m = reference_model()
    assert m.kappa == 1.0
    assert m.r == 1
    assert m.s == 1


def test_psi_closed_form_value():
    # psi(2) = 1/2 * 3^{-1/3} for the reference model
    m = reference_model()
    v = oujump.psi(m, 2.0 + 0.0j)
    assert abs(v - 0.5 * 3.0 ** (-1.0 / 3.0)) < 1e-12


def test_classify_points():
    pts = oujump.classify_points(reference_model())
    assert [p[0] for p in pts] == [-1.0, 0.0, 1.0]
    assert all(p[2] == "singularity" for p in pts)


def test_ruin_probability_in_range():
    m = reference_model()
    r = oujump.ruin_probability(m, 1.0, -1.0)
    assert 0.0 <= r["value"] <= 1.0
    assert r["imag_residual"] < 1e-8
    assert 0.0 <= r["continuous_part"] <= r["value"]


def test_laplace_monotone_in_zeta():
    m = reference_model()
    vals = [
        oujump.laplace_undershoot(m, 2.0, 0.5, z)["value"] for z in (0.0, 0.5, 1.0)
    ]
    assert vals[0] >= vals[1] >= vals[2] >= 0.0


def test_undershoot_limit_closed_form():
    m = oujump.make_model(
        kappa=-1.0, lambda_=1.0, p=1.0, alphas=[1.0], mus=[2.0]
    )
    assert math.isclose(
        oujump.undershoot_limit(m, 1.0), 2.0 / 3.0, rel_tol=1e-12
    )


def test_recurrent_split_sums_to_one():
    m = oujump.make_model(
        kappa=-0.5, lambda_=1.0, p=2.0 / 3.0, alphas=[1.0], mus=[1.0],
        betas=[1.0], nus=[1.0],
    )
    cont, jump = oujump.recurrent_split(m, 2.0, 0.5)
    assert cont["value"] >= 0.0 and jump["value"] >= 0.0
    assert math.isclose(cont["value"] + jump["value"], 1.0, abs_tol=1e-8)


def test_monte_carlo_agrees_with_analytic():
    m = reference_model()
    est = oujump.estimate_ruin(m, 1.0, -1.0, seed=7, paths=20000)
    r = oujump.ruin_probability(m, 1.0, -1.0)
    tol = 4.0 * est["stderr"] + est["bias_bound"] + 1e-3
    assert abs(est["mean"] - r["value"]) < tol


def test_error_translation():
    with pytest.raises(oujump.OUJumpError):
        oujump.make_model(
            kappa=0.0, lambda_=1.0, p=1.0, alphas=[1.0], mus=[1.0]
        )


def test_cli_roundtrip():
    code, text = oujump.run_cli(
        [
            "undershoot-limit",
            "--kappa", "-1", "--lambda", "1", "--p", "1",
            "--alphas", "1", "--mus", "2", "--zeta", "1",
        ]
    )
    assert code == 0
    assert "0.66666666666666" in text
