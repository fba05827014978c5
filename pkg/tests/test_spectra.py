"""Tests for the closed-form spectra, gaps, eigenfunctions and normalization."""
import math

import numpy as np
import pytest

from spheregap.errors import DomainError
from spheregap.quadrature import gauss_legendre
from spheregap.spectra import (
    LuneSpec,
    ModeIndex,
    TriangleSpec,
    eigenfunction_eval,
    eigenvalue,
    gap,
    gap_closed_form,
    gap_regime,
    legendre_params_for,
    lune_eigenvalue,
    normalization_constant,
    spectrum,
    triangle_eigenvalue,
)

PI = math.pi


# ------------------------------------------------------------ eigenvalues


def test_lune_eigenvalue_examples():
    assert lune_eigenvalue(LuneSpec(PI), ModeIndex(1, 0)) == 2.0
    assert lune_eigenvalue(LuneSpec(PI / 2), ModeIndex(1, 1)) == 12.0
    # beta = 2*pi itself is outside the open angle interval; the formula
    # limit (1/2)(3/2) = 3/4 is approached from inside
    near = lune_eigenvalue(LuneSpec(2.0 * PI * (1.0 - 1e-12)), ModeIndex(1, 0))
    assert abs(near - 0.75) < 1e-10


def test_triangle_eigenvalue_examples():
    tri = TriangleSpec(PI / 2)
    assert triangle_eigenvalue(tri, ModeIndex(1, 0)) == 12.0
    assert triangle_eigenvalue(tri, ModeIndex(1, 1)) == 30.0
    assert triangle_eigenvalue(tri, ModeIndex(2, 0)) == 30.0
    assert triangle_eigenvalue(TriangleSpec(PI), ModeIndex(1, 0)) == 6.0


def test_spec_validation():
    with pytest.raises(ValueError):
        LuneSpec(0.0)
    with pytest.raises(ValueError):
        LuneSpec(2.0 * PI)
    with pytest.raises(ValueError):
        TriangleSpec(-0.1)
    with pytest.raises(ValueError):
        ModeIndex(0, 0)
    with pytest.raises(ValueError):
        ModeIndex(1, -1)


# ------------------------------------------------------------ spectrum


def _brute_force_spectrum(spec, count, kmax=40, jmax=40):
    vals = sorted(
        (eigenvalue(spec, ModeIndex(k, j)), k, j)
        for k in range(1, kmax + 1)
        for j in range(0, jmax + 1)
    )
    entries = []
    for lam, k, j in vals:
        if entries and lam - entries[-1][0] <= 1e-9 * max(1.0, lam):
            entries[-1][1].append((k, j))
        else:
            entries.append((lam, [(k, j)]))
    return [(lam, sorted(modes)) for lam, modes in entries[:count]]


def _as_tuples(entries):
    return [(e.eigenvalue, [(m.k, m.j) for m in e.modes]) for e in entries]


def test_spectrum_triangle_equilateral():
    got = _as_tuples(spectrum(TriangleSpec(PI / 2), 2))
    assert got == [(12.0, [(1, 0)]), (30.0, [(1, 1), (2, 0)])]


def test_spectrum_lune_examples_against_brute_force():
    got = _as_tuples(spectrum(LuneSpec(PI / 2), 3))
    assert got == [(6.0, [(1, 0)]), (12.0, [(1, 1)]), (20.0, [(1, 2), (2, 0)])]
    got = _as_tuples(spectrum(LuneSpec(PI), 2))
    assert got == [(2.0, [(1, 0)]), (6.0, [(1, 1), (2, 0)])]


@pytest.mark.parametrize("spec", [LuneSpec(PI / 2), LuneSpec(1.2345), LuneSpec(5.0),
                                  TriangleSpec(PI / 2), TriangleSpec(0.7), TriangleSpec(4.4)])
def test_spectrum_matches_brute_force(spec):
    got = _as_tuples(spectrum(spec, 12))
    ref = _brute_force_spectrum(spec, 12)
    assert len(got) == 12
    for (lam_a, modes_a), (lam_b, modes_b) in zip(got, ref):
        assert abs(lam_a - lam_b) < 1e-9 * max(1.0, lam_b)
        assert modes_a == modes_b


def test_spectrum_count_validation():
    with pytest.raises(ValueError):
        spectrum(TriangleSpec(PI / 2), 0)


# ------------------------------------------------------------ gap


def test_gap_examples():
    assert gap(LuneSpec(PI)) == 4.0
    assert gap(TriangleSpec(PI / 2)) == 18.0
    t = 0.01
    expected = 4.0 * PI / (PI / 2 - t) + 10.0
    assert abs(gap(TriangleSpec(PI / 2 - t)) - expected) < 1e-12 * expected


def test_gap_matches_piecewise_closed_form():
    rng = np.random.default_rng(23)
    for beta in rng.uniform(0.02, 2.0 * PI - 0.02, size=50):
        for spec in (LuneSpec(float(beta)), TriangleSpec(float(beta))):
            g = gap(spec)
            ref = gap_closed_form(spec)
            assert abs(g - ref) <= 1e-12 * ref


def test_gap_regime_crossover():
    eps = 1e-9
    assert gap_regime(LuneSpec(PI - eps)) == "beta<=pi"
    assert gap_regime(LuneSpec(PI + eps)) == "beta>pi"
    assert gap_regime(TriangleSpec(PI / 2 - eps)) == "beta<=pi/2"
    assert gap_regime(TriangleSpec(PI / 2 + eps)) == "beta>pi/2"
    # the two branches agree at the crossover angle
    assert abs((3.0 + 1.0) - gap(LuneSpec(PI))) < 1e-12
    assert abs((3.0 * 4.0 + 3.0 * 2.0) - gap(TriangleSpec(PI / 2))) < 1e-12


def test_gap_divergence_as_angle_shrinks():
    betas = np.logspace(math.log10(3.0), -4, 30)
    gaps = np.array([gap(LuneSpec(float(b))) for b in betas])
    assert np.all(np.diff(gaps) > 0.0)  # decreasing beta, increasing gap
    # tolerance leaves room for the eigenvalue cancellation at tiny beta,
    # where lambda ~ 1e9 but the gap is only ~1e5
    for b, g in zip(betas, gaps):
        if b <= PI:
            assert abs(g - (2.0 * PI / b + 2.0)) <= 1e-9 * g
    assert gaps[-1] > 2.0 * PI * 1e4


def test_triangle_spectrum_within_lune_spectrum():
    for beta in (PI / 2, 1.1, 2.8):
        lune_vals = [e.eigenvalue for e in spectrum(LuneSpec(beta), 80)]
        tri_vals = [e.eigenvalue for e in spectrum(TriangleSpec(beta), 20)]
        for lam in tri_vals:
            assert any(abs(lam - lv) <= 1e-9 * max(1.0, lam) for lv in lune_vals)


# ------------------------------------------------------------ eigenfunctions


def test_eigenfunction_triangle_closed_forms():
    tri = TriangleSpec(PI / 2)
    rng = np.random.default_rng(29)
    closed = {
        ModeIndex(1, 0): lambda r, t: math.sin(r) ** 2 * math.cos(r) * math.sin(2 * t),
        ModeIndex(1, 1): lambda r, t: (3 * math.cos(r) ** 5 - 4 * math.cos(r) ** 3
                                       + math.cos(r)) * math.sin(2 * t),
        ModeIndex(2, 0): lambda r, t: math.cos(r) * math.sin(r) ** 4 * math.sin(4 * t),
    }
    for mode, ref in closed.items():
        for _ in range(50):
            r = float(rng.uniform(0.05, PI / 2 - 0.05))
            t = float(rng.uniform(0.05, PI / 2 - 0.05))
            assert abs(eigenfunction_eval(tri, mode, r, t) - ref(r, t)) < 1e-10


def test_eigenfunction_dirichlet_edges():
    tri = TriangleSpec(PI / 2)
    mode = ModeIndex(1, 0)
    assert eigenfunction_eval(tri, mode, 0.7, 0.0) == 0.0
    assert abs(eigenfunction_eval(tri, mode, PI / 2, 0.9)) < 1e-12
    rng = np.random.default_rng(31)
    for spec in (TriangleSpec(1.3), LuneSpec(2.1)):
        for entry in spectrum(spec, 3):
            for mode in entry.modes:
                r_max = PI / 2 if isinstance(spec, TriangleSpec) else PI
                for _ in range(100):
                    r = float(rng.uniform(0.0, r_max))
                    assert abs(eigenfunction_eval(spec, mode, r, 0.0)) < 1e-8
                    assert abs(eigenfunction_eval(spec, mode, r, spec.beta)) < 1e-8
                if isinstance(spec, TriangleSpec):
                    for _ in range(100):
                        t = float(rng.uniform(0.0, spec.beta))
                        assert abs(eigenfunction_eval(spec, mode, PI / 2, t)) < 1e-8


def test_eigenfunction_domain_error():
    tri = TriangleSpec(PI / 2)
    with pytest.raises(DomainError):
        eigenfunction_eval(tri, ModeIndex(1, 0), PI / 2 + 0.1, 0.3)
    with pytest.raises(DomainError):
        eigenfunction_eval(tri, ModeIndex(1, 0), 0.3, -0.1)


def _fd_sphere_laplacian(spec, mode, r, theta, h=1e-4):
    """Round-sphere Laplacian via central differences of the eigenfunction."""
    u = lambda rr, tt: eigenfunction_eval(spec, mode, rr, tt)
    u0 = u(r, theta)
    u_r = (u(r + h, theta) - u(r - h, theta)) / (2 * h)
    u_rr = (u(r + h, theta) - 2 * u0 + u(r - h, theta)) / h**2
    u_tt = (u(r, theta + h) - 2 * u0 + u(r, theta - h)) / h**2
    return u_rr + math.cos(r) / math.sin(r) * u_r + u_tt / math.sin(r) ** 2, u0


# count kept low enough that the central-difference truncation, which grows
# like degree^4 * h^2, stays inside the 1e-6 residual budget
@pytest.mark.parametrize("spec,count", [(TriangleSpec(PI / 2), 2),
                                        (TriangleSpec(1.3), 3),
                                        (LuneSpec(2.2), 3)])
def test_spectrum_soundness_pointwise_residual(spec, count):
    rng = np.random.default_rng(37)
    r_max = PI / 2 if isinstance(spec, TriangleSpec) else PI
    for entry in spectrum(spec, count):
        lam = entry.eigenvalue
        for mode in entry.modes:
            for _ in range(100):
                r = float(rng.uniform(0.2, r_max - 0.2))
                t = float(rng.uniform(0.05, spec.beta - 0.05))
                lap, u0 = _fd_sphere_laplacian(spec, mode, r, t)
                assert abs(lap + lam * u0) < 1e-6


# ------------------------------------------------------------ normalization


def test_normalization_constants_equilateral():
    tri = TriangleSpec(PI / 2)
    expected = {
        ModeIndex(1, 0): math.sqrt(105.0 / (2.0 * PI)),
        ModeIndex(1, 1): math.sqrt(1155.0 / (8.0 * PI)),
        ModeIndex(2, 0): math.sqrt(3465.0 / (32.0 * PI)),
    }
    for mode, ref in expected.items():
        got = normalization_constant(tri, mode)
        assert abs(got - ref) <= 1e-8 * ref


def test_normalization_lune_against_tensor_quadrature():
    spec = LuneSpec(PI)
    mode = ModeIndex(1, 0)
    got = normalization_constant(spec, mode)
    # independent oracle: full 2D tensor rule over pointwise evaluations
    rq, rw = gauss_legendre(0.0, PI, 200)
    tq, tw = gauss_legendre(0.0, PI, 200)
    total = 0.0
    for r, wr in zip(rq, rw):
        row = sum(wt * eigenfunction_eval(spec, mode, float(r), float(t)) ** 2
                  for t, wt in zip(tq, tw))
        total += wr * math.sin(r) * row
    assert abs(got - 1.0 / math.sqrt(total)) < 1e-10
    # for this mode the radial factor is sin(r)/2, so the norm is pi/6
    assert abs(got - math.sqrt(6.0 / PI)) < 1e-10


def test_normalized_eigenfunction_has_unit_norm():
    spec = TriangleSpec(1.1)
    mode = ModeIndex(2, 1)
    c = normalization_constant(spec, mode)
    rq, rw = gauss_legendre(0.0, PI / 2, 120)
    tq, tw = gauss_legendre(0.0, spec.beta, 120)
    total = 0.0
    for r, wr in zip(rq, rw):
        row = sum(wt * eigenfunction_eval(spec, mode, float(r), float(t)) ** 2
                  for t, wt in zip(tq, tw))
        total += wr * math.sin(r) * row
    assert abs(c * c * total - 1.0) < 1e-9


def test_legendre_params_for_modes():
    params = legendre_params_for(TriangleSpec(PI / 2), ModeIndex(1, 0))
    assert (params.degree, params.order) == (3.0, -2.0)
    params = legendre_params_for(LuneSpec(PI / 2), ModeIndex(2, 1))
    assert (params.degree, params.order) == (5.0, -4.0)
