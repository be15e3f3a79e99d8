import math

import numpy as np
import pytest

from fracfront import (
    DegenerateCoefficientsError,
    FractionalParams,
    Grid1D,
    UnsupportedError,
    apply_riesz_feller,
    assemble_operator_matrix,
    classical_laplacian_apply,
    free_space_reference,
    grunwald_letnikov_apply,
    grunwald_letnikov_weights,
    quadrature_coefficients,
    riesz_feller_symbol,
    spectral_apply,
)
from fracfront.selftest import admissible_lattice

GAUSS = lambda x: np.exp(-x ** 2)


# ---------------------------------------------------------------------------
# symbol
# ---------------------------------------------------------------------------

class TestSymbol:
    def test_classical_reduction(self):
        assert riesz_feller_symbol(FractionalParams(2.0, 0.0), 3.0) == pytest.approx(
            -9.0 + 0j, abs=1e-14)

    def test_symmetric_case_is_real(self):
        val = riesz_feller_symbol(FractionalParams(1.5, 0.0), -2.0)
        assert val == pytest.approx(-(2.0 ** 1.5), abs=1e-12)
        assert val.imag == 0.0

    def test_skewed_value(self):
        val = riesz_feller_symbol(FractionalParams(1.5, 0.5), 1.0)
        expected = -np.exp(1j * np.pi / 4)
        assert val == pytest.approx(expected, abs=1e-12)

    def test_dissipative_and_conjugate_symmetric(self):
        xi = np.linspace(-40, 40, 1001)
        for alpha, theta in admissible_lattice(5, 5):
            psi = riesz_feller_symbol(FractionalParams(alpha, theta), xi)
            assert np.all(psi.real <= 0)
            psi_neg = riesz_feller_symbol(FractionalParams(alpha, theta), -xi)
            assert np.allclose(psi_neg, np.conj(psi), atol=1e-14)


# ---------------------------------------------------------------------------
# integral-representation coefficients
# ---------------------------------------------------------------------------

class TestCoefficients:
    def test_symmetric_value(self):
        c1, c2 = quadrature_coefficients(FractionalParams(1.5, 0.0))
        # Gamma(2.5) sin(3 pi/4) / pi, frozen from a 30-digit evaluation
        assert c1 == pytest.approx(0.29920671030107451, abs=1e-15)
        assert c1 == c2

    def test_fully_skewed_value(self):
        c1, c2 = quadrature_coefficients(FractionalParams(1.5, 0.5))
        assert abs(c1) < 1e-15                      # sin(pi) = 0
        assert c2 == pytest.approx(0.42314218766081722, abs=1e-15)

    def test_representative_values(self):
        c1, c2 = quadrature_coefficients(FractionalParams(1.8, 0.1))
        assert c1 == pytest.approx(0.08348024981186786, abs=1e-14)
        assert c2 == pytest.approx(0.24226912094291634, abs=1e-14)

    def test_degenerate_at_two(self):
        with pytest.raises(DegenerateCoefficientsError):
            quadrature_coefficients(FractionalParams(2.0, 0.0))

    def test_lattice_identities(self):
        for alpha, theta in admissible_lattice():
            c1, c2 = quadrature_coefficients(FractionalParams(alpha, theta))
            assert c1 >= 0 and c2 >= 0 and c1 + c2 > 0
            c2m, c1m = quadrature_coefficients(FractionalParams(alpha, -theta))
            assert c1 == c1m and c2 == c2m          # exact exchange symmetry
            edge, _ = quadrature_coefficients(FractionalParams(alpha, 2 - alpha))
            assert abs(edge) <= 1e-12


# ---------------------------------------------------------------------------
# quadrature scheme
# ---------------------------------------------------------------------------

class TestQuadratureApply:
    def test_constant_annihilation(self):
        g = Grid1D(30.0, 181)
        for alpha, theta in ((1.5, 0.0), (1.8, 0.1), (1.2, -0.6)):
            v = apply_riesz_feller(np.full(g.n, 0.7), g, FractionalParams(alpha, theta))
            assert np.max(np.abs(v)) <= 1e-13
            v = apply_riesz_feller(np.full(g.n, 0.7), g,
                                   FractionalParams(alpha, theta),
                                   tail_correction=True)
            assert np.max(np.abs(v)) <= 1e-13

    def test_affine_annihilation_free_space(self):
        g = Grid1D(30.0, 181)
        affine = lambda x: 0.3 + 0.7 * x
        for alpha, theta in ((1.5, 0.3), (1.9, -0.1), (1.2, 0.7)):
            v = apply_riesz_feller(affine(g.x), g, FractionalParams(alpha, theta),
                                   ghosts=affine)
            assert np.max(np.abs(v)) <= 1e-10

    def test_rejects_classical_order(self):
        g = Grid1D(10.0, 21)
        with pytest.raises(DegenerateCoefficientsError):
            apply_riesz_feller(np.zeros(g.n), g, FractionalParams(2.0, 0.0))

    def test_gaussian_matches_oracle(self):
        # free-space comparison at the resolution of the operator example
        g = Grid1D(30.0, 1601)
        p = FractionalParams(1.6, 0.3)
        ref = free_space_reference(GAUSS, g, p)
        got = apply_riesz_feller(GAUSS(g.x), g, p, ghosts=GAUSS,
                                 tail_correction=True)
        rel = np.max(np.abs(got - ref)) / np.max(np.abs(ref))
        assert rel <= 0.02

    def test_oracle_error_decreases(self):
        p = FractionalParams(1.6, 0.3)
        errs = []
        for n in (201, 401, 801):
            g = Grid1D(30.0, n)
            ref = free_space_reference(GAUSS, g, p)
            got = apply_riesz_feller(GAUSS(g.x), g, p, ghosts=GAUSS,
                                     tail_correction=True)
            errs.append(np.max(np.abs(got - ref)) / np.max(np.abs(ref)))
        assert errs[0] > errs[1] > errs[2]


class TestAssembledMatrix:
    def test_annihilates_ones(self):
        A = assemble_operator_matrix(Grid1D(30.0, 181), FractionalParams(1.8, 0.1))
        assert np.max(np.abs(A.entries @ np.ones(181))) <= 1e-12

    def test_row_sums_vanish(self):
        for tail in (False, True):
            A = assemble_operator_matrix(Grid1D(10.0, 101),
                                         FractionalParams(1.4, -0.3),
                                         tail_correction=tail)
            rows = np.abs(A.entries).max(axis=1)
            assert np.max(np.abs(A.entries.sum(axis=1)) / rows) <= 1e-12

    @pytest.mark.parametrize("tail", [False, True])
    def test_matches_matrix_free(self, tail):
        g = Grid1D(30.0, 181)
        p = FractionalParams(1.6, 0.25)
        A = assemble_operator_matrix(g, p, tail_correction=tail)
        rng = np.random.default_rng(42)
        for _ in range(20):
            u = rng.standard_normal(g.n)
            direct = apply_riesz_feller(u, g, p, tail_correction=tail)
            via = A.entries @ u
            assert np.max(np.abs(via - direct)) <= 1e-12 * np.max(np.abs(via))

    def test_symmetric_when_unskewed(self):
        # boundary clamping funnels extra kernel mass into the first and
        # last columns, so symmetry holds on the interior block
        A = assemble_operator_matrix(Grid1D(1.0, 5), FractionalParams(1.5, 0.0))
        inner = A.entries[1:-1, 1:-1]
        scale = np.abs(A.entries).max()
        assert np.max(np.abs(inner - inner.T)) <= 1e-13 * scale
        # and exactly as a reflection equivariance of the whole matrix
        assert np.max(np.abs(A.entries[::-1, ::-1] - A.entries)) <= 1e-13 * scale

    def test_reflection_maps_skew_to_opposite(self):
        # reversing rows and columns of A(theta) gives A(-theta); the scheme
        # is exactly reflection-equivariant
        g = Grid1D(1.0, 5)
        A_pos = assemble_operator_matrix(g, FractionalParams(1.5, 0.3)).entries
        A_neg = assemble_operator_matrix(g, FractionalParams(1.5, -0.3)).entries
        scale = np.abs(A_pos).max()
        assert np.max(np.abs(A_pos[::-1, ::-1] - A_neg)) <= 1e-13 * scale

    def test_classical_endpoint_routes_to_laplacian(self):
        g = Grid1D(2.0, 9)
        A = assemble_operator_matrix(g, FractionalParams(2.0, 0.0))
        u = np.sin(g.x)
        assert np.allclose(A.entries @ u, classical_laplacian_apply(u, g),
                           atol=1e-13)


# ---------------------------------------------------------------------------
# fractional-difference backend
# ---------------------------------------------------------------------------

def _gl_brute_force(u, h, alpha, r_far=500):
    """Literal double loop: one-sided sums written as differences against
    the flat far field (terms vanish identically once an index clamps)."""
    n = len(u)
    norm = -1.0 / (2 * math.cos(alpha * math.pi / 2))

    def at(i):  # projection ghosts
        return u[min(max(i, 1), n) - 1]

    g = grunwald_letnikov_weights(alpha, r_far)
    v = np.zeros(n)
    for i in range(1, n + 1):
        acc = 0.0
        for r in range(0, r_far):
            acc += g[r] * (at(i - r + 1) - u[0])     # left tail -> u_1
            acc += g[r] * (at(i + r - 1) - u[-1])    # right tail -> u_N
        v[i - 1] = norm * acc / h ** alpha
    return v


class TestGrunwaldLetnikov:
    def test_leading_weights(self):
        g = grunwald_letnikov_weights(1.5, 3)
        assert g[0] == 1.0
        assert g[1] == -1.5
        assert g[2] == 0.375

    def test_matches_brute_force(self):
        rng = np.random.default_rng(3)
        u = rng.standard_normal(13)
        grid = Grid1D(1.8, 13)
        for alpha in (1.2, 1.5, 1.8):
            fast = grunwald_letnikov_apply(u, grid, alpha)
            slow = _gl_brute_force(u, grid.h, alpha)
            assert np.max(np.abs(fast - slow)) <= 1e-12

    def test_constant_annihilation(self):
        # the ghost-tail completion cancels the weight sums on constants;
        # without it a fixed O(b^-alpha) defect survives all refinement
        for n in (181, 721):
            grid = Grid1D(30.0, n)
            v = grunwald_letnikov_apply(np.full(n, 1.0), grid, 1.5)
            assert np.max(np.abs(v)) * grid.h ** 1.5 <= 1e-12

    def test_agrees_with_quadrature_backend(self):
        grid = Grid1D(10.0, 801)
        p = FractionalParams(1.5, 0.0)
        u = GAUSS(grid.x)
        v_quad = apply_riesz_feller(u, grid, p, tail_correction=True)
        v_gl = grunwald_letnikov_apply(u, grid, 1.5)
        mask = np.abs(grid.x) <= 5.0
        rel = np.max(np.abs(v_gl - v_quad)[mask]) / np.max(np.abs(v_quad[mask]))
        assert rel <= 0.05

    def test_requires_strictly_fractional_order(self):
        grid = Grid1D(1.0, 5)
        with pytest.raises(UnsupportedError):
            grunwald_letnikov_apply(np.zeros(5), grid, 2.0)


# ---------------------------------------------------------------------------
# spectral backend
# ---------------------------------------------------------------------------

class TestSpectral:
    def test_laplacian_eigenfunction(self):
        n, period = 256, 2 * np.pi
        x = period * np.arange(n) / n
        k = 3.0
        out = spectral_apply(np.cos(k * x), period, FractionalParams(2.0, 0.0))
        assert np.max(np.abs(out + k ** 2 * np.cos(k * x))) <= 1e-10

    def test_fractional_mode_scaling(self):
        n, period = 256, 2 * np.pi
        x = period * np.arange(n) / n
        k = 4.0
        out = spectral_apply(np.sin(k * x), period, FractionalParams(1.5, 0.0))
        assert np.max(np.abs(out + k ** 1.5 * np.sin(k * x))) <= 1e-10

    def test_matches_second_derivative_of_gaussian(self):
        g = Grid1D(30.0, 801)
        ref = free_space_reference(GAUSS, g, FractionalParams(2.0, 0.0))
        exact = (4 * g.x ** 2 - 2) * GAUSS(g.x)
        assert np.max(np.abs(ref - exact)) <= 1e-9


# ---------------------------------------------------------------------------
# classical backend
# ---------------------------------------------------------------------------

class TestClassicalLaplacian:
    def test_constant(self):
        g = Grid1D(5.0, 21)
        assert np.all(classical_laplacian_apply(np.full(21, 3.3), g) == 0.0)

    def test_exact_on_quadratics(self):
        g = Grid1D(5.0, 21)
        sq = lambda x: x ** 2
        v = classical_laplacian_apply(sq(g.x), g, ghosts=sq)
        assert np.max(np.abs(v - 2.0)) <= 1e-9

    def test_discrete_symbol(self):
        g = Grid1D(np.pi, 41)
        k = 2.0
        wave = lambda x: np.sin(k * x)
        v = classical_laplacian_apply(wave(g.x), g, ghosts=wave)
        expected = -(4 / g.h ** 2) * np.sin(k * g.h / 2) ** 2 * wave(g.x)
        assert np.max(np.abs(v - expected)) <= 1e-9
