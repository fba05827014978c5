"""Tests for the bilinear pairings, the gap variation I(z, b), and the
closed-form verification table."""
import math

import numpy as np
import pytest

from spheregap.quadrature import gauss_legendre
from spheregap.variation import (
    C1,
    C2,
    C3,
    AppendixReport,
    BilinearTermTable,
    PairingSpec,
    gap_slope_reference,
    gap_variation_I,
    gap_variation_I_closed,
    lambda1_dot,
    minimize_gap_variation,
    pairing_terms,
    remark_gap_curve,
    second_eigenvalue_form,
    verify_appendix,
)

PI = math.pi
SQ23 = math.sqrt(C2 * C3)


# ------------------------------------------------------------ term values


def test_first_mode_pairing_terms():
    table = pairing_terms(PairingSpec("u1", "u1", (0.0, 1.0)))
    assert abs(table["I"] - (-C1 * 1408.0 / (1575.0 * PI))) < 1e-9
    assert abs(table["II"] - (C1 * 64.0 / (1575.0 * PI))) < 1e-9
    assert abs(table.total - (-28.0 / PI)) < 1e-9
    table_a = pairing_terms(PairingSpec("u1", "u1", (1.0, 0.0)))
    assert abs(table_a["V"] - (-C1 * 8.0 / 15.0)) < 1e-9
    assert abs(table_a.total - (-28.0 / PI)) < 1e-9


def test_pairing_totals_match_closed_forms():
    expected = {
        ("u1", "u1"): lambda a, b: -28.0 * (a + b) / PI,
        ("u2_1", "u2_1"): lambda a, b: -77.0 * b / PI - 44.0 * a / PI,
        ("u2_2", "u2_1"): lambda a, b: 11.0 * math.sqrt(3.0) * b / PI,
        ("u2_1", "u2_2"): lambda a, b: 11.0 * math.sqrt(3.0) * b / PI,
        ("u2_2", "u2_2"): lambda a, b: -55.0 * b / PI - 88.0 * a / PI,
    }
    directions = [(0.0, 1.0), (1.0, 0.0), (1 / math.sqrt(2), 1 / math.sqrt(2)), (0.6, 0.8)]
    for pair, ref in expected.items():
        for a, b in directions:
            total = pairing_terms(PairingSpec(*pair, (a, b))).total
            assert abs(total - ref(a, b)) < 1e-9


def test_mixed_pairing_equals_sqrtC2C3_form():
    # sqrt(C2 C3) * 16/105 is the same closed value as 11 sqrt(3)/pi
    assert abs(SQ23 * 16.0 / 105.0 - 11.0 * math.sqrt(3.0) / PI) < 1e-14
    total = pairing_terms(PairingSpec("u2_1", "u2_2", (0.0, 1.0))).total
    assert abs(total - SQ23 * 16.0 / 105.0) < 1e-9


def test_term_v_vanishes_for_mixed_pairings():
    for pair in (("u2_2", "u2_1"), ("u2_1", "u2_2")):
        table = pairing_terms(PairingSpec(*pair, (1.0, 0.0)))
        assert abs(table["V"]) < 1e-12


def test_terms_separability_against_2d_quadrature():
    """Each separated term must agree with the plain 2D tensor integral."""
    from spheregap.variation import _MODES

    rq, rw = gauss_legendre(0.0, PI / 2, 64)
    tq, tw = gauss_legendre(0.0, PI / 2, 64)
    R, T = np.meshgrid(rq, tq, indexing="ij")
    W = np.outer(rw, tw)
    for left, right in [("u1", "u1"), ("u2_2", "u2_1"), ("u2_2", "u2_2")]:
        ml, mr = _MODES[left], _MODES[right]
        u_l = ml.norm * ml.R(R) * ml.S(T)
        sin_r, cos_r = np.sin(R), np.cos(R)
        d_r = mr.norm * mr.dR(R) * mr.S(T)
        d_rr = mr.norm * mr.d2R(R) * mr.S(T)
        d_rt = mr.norm * mr.dR(R) * mr.dS(T)
        d_tt = mr.norm * mr.R(R) * mr.d2S(T)
        b_terms = (
            (4 / PI) * np.sum(W * u_l * np.sin(T) * d_rr * sin_r),
            (2 / PI) * np.sum(W * u_l * np.sin(T) * cos_r / sin_r * d_r * sin_r),
            (4 / PI) * np.sum(W * u_l * R * np.cos(T) / sin_r**2 * d_rt * sin_r),
            (4 / PI) * np.sum(W * u_l * R * np.sin(T) * cos_r / sin_r**3 * d_tt * sin_r),
        )
        a_term = (4 / PI) * np.sum(W * u_l / sin_r**2 * d_tt * sin_r)
        table_b = pairing_terms(PairingSpec(left, right, (0.0, 1.0)))
        table_a = pairing_terms(PairingSpec(left, right, (1.0, 0.0)))
        for sep, full in zip(table_b.terms[:4], b_terms):
            assert abs(sep - full) < 1e-9
        assert abs(table_a.terms[4] - a_term) < 1e-9


def test_quadrature_already_converged():
    for pair in (("u1", "u1"), ("u2_2", "u2_2"), ("u2_1", "u2_2")):
        t64 = pairing_terms(PairingSpec(*pair, (0.6, 0.8)), nodes=64).total
        t128 = pairing_terms(PairingSpec(*pair, (0.6, 0.8)), nodes=128).total
        assert abs(t64 - t128) < 1e-11


def test_bilinear_table_validation():
    with pytest.raises(ValueError):
        BilinearTermTable((1.0, 0.0, 0.0, 0.0, 0.0), 2.0)
    with pytest.raises(ValueError):
        PairingSpec("u1", "nope")
    with pytest.raises(ValueError):
        PairingSpec("u1", "u1", (1.0, 1.0))


# ------------------------------------------------------------ lambda1 dot


def test_lambda1_dot_values():
    assert abs(lambda1_dot((0.0, 1.0)) - 28.0 / PI) < 1e-10
    assert abs(lambda1_dot((1.0, 0.0)) - 28.0 / PI) < 1e-10
    s = 1.0 / math.sqrt(2.0)
    assert abs(lambda1_dot((s, s)) - 28.0 * math.sqrt(2.0) / PI) < 1e-10


def test_second_eigenvalue_form_eigenvalues():
    # direction (0, 1): eigenvalues of the 2x2 form are 44/pi and 88/pi
    q = second_eigenvalue_form((0.0, 1.0))
    vals = np.sort(np.linalg.eigvalsh(q))
    assert abs(vals[0] - 44.0 / PI) < 1e-9
    assert abs(vals[1] - 88.0 / PI) < 1e-9


# ------------------------------------------------------------ I(z, b)


def test_gap_variation_matches_closed_form():
    rng = np.random.default_rng(79)
    for _ in range(200):
        z = float(rng.uniform(0.0, 2.0 * PI))
        b = float(rng.uniform(0.0, 1.0))
        a = math.sqrt(1.0 - b * b)
        assert abs(gap_variation_I(z, (a, b)) - gap_variation_I_closed(z, b)) < 1e-10


def test_gap_variation_direction_validation():
    with pytest.raises(ValueError):
        gap_variation_I(0.3, (0.9, 0.9))


def test_minimum_on_the_pure_a_branch():
    # b = 0 and sin(z) = 0 realizes the minimum 16/pi
    for z in (0.0, PI, 2.0 * PI):
        assert abs(gap_variation_I(z, (1.0, 0.0)) - 16.0 / PI) < 1e-12


def test_grid_minimum():
    result = minimize_gap_variation(400, 400)
    assert abs(result.value - 16.0 / PI) < 1e-6
    assert result.value >= 16.0 / PI - 1e-9


def test_variation_lower_bound_everywhere():
    rng = np.random.default_rng(83)
    floor = 16.0 / PI - 1e-9
    for _ in range(500):
        z = float(rng.uniform(0.0, 2.0 * PI))
        b = float(rng.uniform(0.0, 1.0))
        assert gap_variation_I_closed(z, b) >= floor
        assert gap_variation_I(z, (math.sqrt(1 - b * b), b)) >= floor


def test_slope_reference_consistency():
    ref = gap_slope_reference()
    assert abs(ref - 16.0 / PI) < 1e-12
    assert abs(minimize_gap_variation(500, 500).value - ref) < 1e-12
    # finite-difference slope of the exact one-sided gap curve
    h = 1e-6
    fd = (remark_gap_curve(h) - remark_gap_curve(-h)) / (2 * h)
    assert abs(fd - ref) < 1e-4
    assert remark_gap_curve(0.0) == 18.0


# ------------------------------------------------------------ verification


def test_verify_appendix_passes():
    report = verify_appendix()
    assert isinstance(report, AppendixReport)
    assert len(report.entries) == 30  # 25 term rows + 5 total rows
    assert report.passed
    assert max(e.abs_err for e in report.entries) < 1e-9
    labels = [e.label for e in report.entries]
    assert "u1*u1:I" in labels and "u2_2*u2_2:total" in labels


def test_verify_appendix_reports_failures_instead_of_passing_silently():
    report = verify_appendix(tol=1e-18)
    assert not report.passed
    assert len(report.failures()) > 0


def test_verify_appendix_csv_shape():
    text = verify_appendix().to_csv()
    lines = text.strip().split("\n")
    assert lines[0] == "label,computed,expected,abs_err"
    assert len(lines) == 31
    row = lines[1].split(",")
    assert len(row) == 4
    float(row[1]), float(row[2]), float(row[3])
