"""2x2 Temple-class systems: eigenstructure certification, invariant
transport, and the transformed-profile diagnostics.

The Langmuir closures are checked against a symbolic oracle built from
nothing but the flux, so every certified identity has an independent
derivation in this file.
"""

import dataclasses
import math

import numpy as np
import pytest

from charax import scalar1d, temple
from charax.errors import ConfigError, SolverAbort
from charax.grids import Grid1D, GridFunction, ddx
from charax.problems import (burgers_dflux, burgers_flux,
                             chromatography_wave_u0, diagonal_sine_u0)

sympy = pytest.importorskip("sympy")


@pytest.fixture(scope="module")
def chrom():
    return temple.langmuir_chromatography(chromatography_wave_u0,
                                          Grid1D(n=512), 4e-3)


@pytest.fixture(scope="module")
def diag():
    return temple.diagonal_system(burgers_flux, burgers_dflux, burgers_flux,
                                  burgers_dflux, diagonal_sine_u0,
                                  Grid1D(n=256), 4e-3,
                                  box=((-1.0, 1.0), (-1.0, 1.0)))


def langmuir_symbols():
    u, v = sympy.symbols("u v", positive=True)
    w = 1 + u + v
    flux = sympy.Matrix([u / w, v / w])
    lam = [1 / w ** 2, 1 / w]
    r = [sympy.Matrix([u, v]) / (u + v),
         (v ** 2 / (u + v)) * sympy.Matrix([1, -1])]
    ell = [sympy.Matrix([1, 1]), sympy.Matrix([1 / v, -u / v ** 2])]
    R = [u + v, u / v]
    return u, v, flux, lam, r, ell, R


def test_symbolic_oracle_certifies_langmuir_eigenstructure():
    u, v, flux, lam, r, ell, R = langmuir_symbols()
    A = flux.jacobian([u, v])
    zero = sympy.zeros(2, 1)
    for i in range(2):
        for j in range(2):
            expect = 1 if i == j else 0
            assert sympy.simplify(ell[i].dot(r[j]) - expect) == 0
        assert sympy.simplify(A * r[i] - lam[i] * r[i]) == zero
        grad = sympy.Matrix([sympy.diff(R[i], u), sympy.diff(R[i], v)])
        assert sympy.simplify(grad - ell[i]) == zero
    # strict hyperbolicity: the gap is (u+v)/w^2, positive on the box
    assert sympy.simplify(lam[1] - lam[0] - (u + v) / (1 + u + v) ** 2) == 0


def test_symbolic_oracle_derives_coupling_coefficients():
    # Temple condition <l_i, (Dr_j) r_j> = 0 for i != j, then the full D
    # table: only the fast family couples, D21 = 2/(u+v), D22 = -2v/(u+v).
    u, v, flux, lam, r, ell, R = langmuir_symbols()
    Dr = [r[j].jacobian([u, v]) for j in range(2)]
    for i in range(2):
        assert sympy.simplify(ell[i].dot(Dr[1 - i] * r[1 - i])) == 0
    expected = {(0, 0): 0, (0, 1): 0,
                (1, 0): 2 / (u + v), (1, 1): -2 * v / (u + v)}
    for i in range(2):
        for j in range(2):
            if i == j:
                got = ell[i].dot(Dr[i] * r[i])
            else:
                got = ell[i].dot(Dr[i] * r[j]) + ell[i].dot(Dr[j] * r[i])
            assert sympy.simplify(got - expected[(i, j)]) == 0
    # invariant inversion used by umap: R1 = u+v, R2 = u/v
    R1, R2 = sympy.symbols("R1 R2", positive=True)
    vs = R1 / (1 + R2)
    us = vs * R2
    assert sympy.simplify(us + vs - R1) == 0
    assert sympy.simplify(us / vs - R2) == 0


def test_code_closures_match_symbolic_oracle(chrom):
    u, v, flux, lam, r, ell, R = langmuir_symbols()
    A = flux.jacobian([u, v])
    us, vs = chrom.box_samples(7)
    got_A = chrom.jacobian(us, vs)
    for a in range(2):
        for b in range(2):
            fab = sympy.lambdify((u, v), A[a, b], "numpy")
            np.testing.assert_allclose(got_A[:, a, b], fab(us, vs),
                                       rtol=0, atol=1e-14)
    def eval_vec(exprs):
        comps = [sympy.lambdify((u, v), e, "numpy")(us, vs) for e in exprs]
        return np.stack([np.broadcast_to(np.asarray(c, dtype=np.float64),
                                         us.shape) for c in comps], axis=1)

    for i in range(2):
        flam = sympy.lambdify((u, v), lam[i], "numpy")
        np.testing.assert_allclose(chrom.lam[i](us, vs), flam(us, vs),
                                   rtol=0, atol=1e-14)
        np.testing.assert_allclose(chrom.rvec[i](us, vs), eval_vec(r[i]),
                                   rtol=0, atol=1e-14)
        np.testing.assert_allclose(chrom.lvec[i](us, vs), eval_vec(ell[i]),
                                   rtol=0, atol=1e-14)
    D = chrom.Dij(us, vs)
    np.testing.assert_allclose(D[:, 1, 0], 2.0 / (us + vs), rtol=1e-14)
    np.testing.assert_allclose(D[:, 1, 1], -2.0 * vs / (us + vs), rtol=1e-14)
    assert np.all(D[:, 0, :] == 0.0)


def test_certification_diagonal_residuals_exactly_zero(diag):
    report = temple.certify_eigenstructure(diag)
    assert report.biorthogonality == 0.0
    assert report.eigen_equation == 0.0
    assert report.invariant_alignment == 0.0
    assert report.temple_condition == 0.0
    assert report.umap_roundtrip == 0.0
    assert report.ok


def test_certification_chromatography_within_thresholds(chrom):
    report = temple.certify_eigenstructure(chrom)
    assert report.ok
    for name, value, threshold in report.rows():
        assert value <= threshold, name
    # the alignment residual is a genuine finite-difference floor, not zero
    assert 0.0 < report.invariant_alignment < 1e-6


def test_validate_dij(chrom, diag):
    assert temple.validate_Dij(chrom) < 1e-9
    assert temple.validate_Dij(diag) == 0.0


def test_require_certified_rejects_wrong_eigenvalues(diag):
    bad = dataclasses.replace(
        diag, lam=(lambda u, v: burgers_dflux(u) + 0.01 + 0.0 * v,
                   diag.lam[1]))
    with pytest.raises(ConfigError, match="eigen_equation"):
        temple.require_certified(bad)
    assert temple.require_certified(diag).ok


def test_problem_validation():
    grid = Grid1D(n=64)
    with pytest.raises(ConfigError):
        temple.langmuir_chromatography(chromatography_wave_u0, grid, 0.0)
    with pytest.raises(ConfigError):
        temple.diagonal_system(burgers_flux, burgers_dflux, burgers_flux,
                               burgers_dflux, diagonal_sine_u0, grid, 1e-2,
                               box=((0.5, 0.5), (0.1, 1.0)))


def test_init_rejects_wrong_u0_shape():
    grid = Grid1D(n=64)
    problem = temple.langmuir_chromatography(lambda x: np.sin(x), grid, 1e-2)
    with pytest.raises(ConfigError):
        temple.init_temple_state(problem)


def test_state_guards(chrom):
    state = temple.init_temple_state(chrom)
    g = chrom.grid
    with pytest.raises(SolverAbort, match="positivity"):
        dataclasses.replace(state, theta1=GridFunction.constant(g, -1.0))
    with pytest.raises(SolverAbort, match="increasing"):
        dataclasses.replace(state, alpha2=GridFunction.constant(g, 0.5))


def test_mollify_contracts():
    n = 128
    dx = 1.0 / n
    rng = np.random.default_rng(7)
    vals = rng.uniform(0.2, 0.9, n)
    # below one cell the mollifier is the identity
    np.testing.assert_array_equal(temple.mollify(vals, 0.5 * dx, dx, True),
                                  vals)
    out = temple.mollify(vals, 4.5 * dx, dx, True)
    assert abs(np.mean(out) - np.mean(vals)) <= 1e-12
    assert np.max(out) <= np.max(vals) + 1e-12
    assert np.min(out) >= np.min(vals) - 1e-12
    spike = np.zeros(n)
    spike[n // 2] = 1.0
    assert np.max(temple.mollify(spike, 8.5 * dx, dx, True)) < 0.2


def test_constant_state_translates_alpha_exactly():
    problem = temple.diagonal_system(
        burgers_flux, burgers_dflux, burgers_flux, burgers_dflux,
        lambda x: np.stack([0.3 + 0.0 * x, 0.7 + 0.0 * x], axis=1),
        Grid1D(n=64), 1e-2, box=((0.1, 1.0), (0.1, 1.0)))
    state = temple.init_temple_state(problem)
    for _ in range(20):
        state = temple.advance_temple(state, problem, 1e-3)
    x = problem.grid.nodes()
    # speeds are the constant components themselves; alpha rides along
    np.testing.assert_allclose(state.alpha1.values, x - 0.3 * state.t,
                               rtol=0, atol=1e-14)
    np.testing.assert_allclose(state.alpha2.values, x - 0.7 * state.t,
                               rtol=0, atol=1e-14)
    assert np.all(state.u1.values == 0.3)
    assert np.all(state.u2.values == 0.7)
    assert np.all(state.theta1.values == 1.0)


def test_diagonal_system_matches_scalar_components(diag):
    # Two decoupled Burgers components stepped as a system must reproduce
    # the scalar solver componentwise to rounding accumulation.
    state = temple.init_temple_state(diag)
    grid = Grid1D(n=256)
    p1 = scalar1d.ScalarProblem1D(burgers_flux, burgers_dflux,
                                  lambda x: diagonal_sine_u0(x)[:, 0],
                                  grid, diag.eps)
    p2 = scalar1d.ScalarProblem1D(burgers_flux, burgers_dflux,
                                  lambda x: diagonal_sine_u0(x)[:, 1],
                                  grid, diag.eps)
    s1 = scalar1d.init_state(p1)
    s2 = scalar1d.init_state(p2)
    dt0 = temple.temple_stable_dt(state, diag)
    nsteps = math.ceil(0.1 / dt0)
    dt = 0.1 / nsteps
    for _ in range(nsteps):
        state = temple.advance_temple(state, diag, dt)
        s1 = scalar1d.advance(s1, p1, dt)
        s2 = scalar1d.advance(s2, p2, dt)
    for got, ref in ((state.u1, s1.u), (state.u2, s2.u),
                     (state.R1, s1.u), (state.alpha1, s1.alpha),
                     (state.theta1, s1.theta), (state.alpha2, s2.alpha),
                     (state.theta2, s2.theta)):
        np.testing.assert_allclose(got.values, ref.values, rtol=0,
                                   atol=1e-11)


def test_chromatography_run_contracts(chrom):
    state = temple.init_temple_state(chrom)
    w0 = {(i, p): temple.transformed_w_lp_norm(state, i, p)
          for i in range(2) for p in (2.0, 4.0)}
    ranges = [(float(np.min(state.riemann(i).values)),
               float(np.max(state.riemann(i).values))) for i in range(2)]
    c3 = temple.max_modified_speed(state, chrom)
    dt0 = temple.temple_stable_dt(state, chrom)
    nsteps = math.ceil(0.2 / dt0)
    dt = 0.2 / nsteps
    for _ in range(nsteps):
        state = temple.advance_temple(state, chrom, dt)
        c3 = max(c3, temple.max_modified_speed(state, chrom))
        for (i, p), init in w0.items():
            # transformed derivative norms never grow for either family
            assert temple.transformed_w_lp_norm(state, i, p) \
                <= init * (1 + 1e-12)
    for i in range(2):
        report = temple.r_range_check(state, ranges[i][0], ranges[i][1], i)
        assert report.passed
        lo, hi = temple.alpha_envelope_margins(state, i, c3)
        assert lo > 0.0 and hi > 0.0
        assert abs(np.mean(state.theta(i).values) - 1.0) <= 1e-12
        profile = temple.reconstruct_W(state, i)
        quotient, norm = temple.holder_quotient(profile, 2.0)
        assert quotient <= norm
        assert np.all(np.diff(profile.alphas) > 0.0)


def test_cross_mode_agreement_within_one_step(chrom):
    state = temple.init_temple_state(chrom)
    dt = temple.temple_stable_dt(state, chrom)
    for _ in range(50):
        state = temple.advance_temple(state, chrom, dt, mode="u")
    a = temple.advance_temple(state, chrom, dt, mode="u")
    b = temple.advance_temple(state, chrom, dt, mode="riemann")
    for i in range(2):
        drift = float(np.max(np.abs(a.riemann(i).values
                                    - b.riemann(i).values)))
        assert drift < 5e-6, f"family {i + 1} drift {drift}"
    with pytest.raises(ConfigError):
        temple.advance_temple(state, chrom, dt, mode="lagrangian")


def test_norm_and_quotient_validation(chrom):
    state = temple.init_temple_state(chrom)
    with pytest.raises(ConfigError):
        temple.transformed_w_lp_norm(state, 0, 0.5)
    ratio = np.abs(ddx(state.R1).values) / state.theta1.values
    assert temple.transformed_w_lp_norm(state, 0, math.inf) \
        == float(np.max(ratio))
    with pytest.raises(ConfigError):
        temple.holder_quotient(temple.reconstruct_W(state, 0), 1.0)


def test_gradient_scaling_study_contract():
    mk = lambda eps: temple.langmuir_chromatography(
        chromatography_wave_u0, Grid1D(n=1024), eps)
    with pytest.raises(ConfigError):
        temple.gradient_scaling_study([mk(8e-3), mk(4e-3)], 0.05)
    coarse = temple.langmuir_chromatography(chromatography_wave_u0,
                                            Grid1D(n=64), 1e-3)
    with pytest.raises(ConfigError, match="unresolved"):
        temple.gradient_scaling_study([coarse, coarse, coarse], 0.05)
    rows = temple.gradient_scaling_study([mk(8e-3), mk(5.657e-3), mk(4e-3)],
                                         0.05)
    assert [row.eps for row in rows] == [8e-3, 5.657e-3, 4e-3]
    assert all(row.product == row.eps * row.sup_ux for row in rows)
    assert temple.scaling_ratios_bounded(rows)
    assert not temple.scaling_ratios_bounded(
        [rows[0], dataclasses.replace(rows[1], product=rows[0].product * 3),
         rows[2]])
