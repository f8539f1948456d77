"""Tests for the four group operations and their spectral data."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupconv import (
    IncompatibleSignalError,
    GroupSignal,
    OperationVariant,
    check_equivariance,
    condition_data,
    convolve_direct,
    convolve_fourier,
    fourier_apply,
    fourier_matrix,
    left_regular,
    make_cyclic,
    make_dihedral,
    make_product,
    operation_matrix,
    right_regular,
    translate_right,
    variant_coefficients,
)

from d3_fixtures import (
    EXAMPLE_CONV,
    EXAMPLE_CONV_HAT_2D,
    EXAMPLE_M,
    EXAMPLE_M_HAT_2D,
)

VARIANTS = list(OperationVariant)


def rng_signal(group, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal(group.order) + 1j * rng.standard_normal(group.order)


class TestDirect:
    def test_worked_example(self):
        g = make_dihedral(3)
        out = convolve_direct(g, EXAMPLE_M, EXAMPLE_M, OperationVariant.CONVOLUTION)
        assert np.allclose(out.values, EXAMPLE_CONV, atol=1e-12)

    def test_cyclic_convolution_is_circular(self):
        g = make_cyclic(8)
        m = rng_signal(g, 0)
        x = rng_signal(g, 1)
        expected = np.array([sum(m[(u - v) % 8] * x[v] for v in range(8)) for u in range(8)])
        out = convolve_direct(g, m, x, OperationVariant.CONVOLUTION)
        assert np.allclose(out.values, expected, atol=1e-12)

    def test_cross_correlation_flips_argument(self):
        g = make_cyclic(8)
        m = rng_signal(g, 2)
        x = rng_signal(g, 3)
        expected = np.array([sum(m[(v - u) % 8] * x[v] for v in range(8)) for u in range(8)])
        out = convolve_direct(g, m, x, OperationVariant.CROSS_CORRELATION)
        assert np.allclose(out.values, expected, atol=1e-12)

    def test_defining_sums_all_variants(self):
        g = make_dihedral(4)
        t, inv = g.compose_table, g.inverse_table
        m = rng_signal(g, 4)
        x = rng_signal(g, 5)
        defs = {
            OperationVariant.CONVOLUTION: lambda u, v: t[u, inv[v]],
            OperationVariant.RIGHT_CONVOLUTION: lambda u, v: t[inv[v], u],
            OperationVariant.CROSS_CORRELATION: lambda u, v: t[v, inv[u]],
            OperationVariant.RIGHT_CROSS_CORRELATION: lambda u, v: t[inv[u], v],
        }
        for variant, arg in defs.items():
            expected = np.array([
                sum(m[arg(u, v)] * x[v] for v in range(g.order)) for u in range(g.order)])
            out = convolve_direct(g, m, x, variant)
            assert np.allclose(out.values, expected, atol=1e-12), variant


class TestOperationMatrix:
    def test_matrix_matches_direct(self):
        g = make_dihedral(3)
        m = rng_signal(g, 6)
        x = rng_signal(g, 7)
        for variant in VARIANTS:
            mat = operation_matrix(g, m, variant)
            direct = convolve_direct(g, m, x, variant)
            assert np.allclose(mat.matrix @ x, direct.values, atol=1e-12)

    def test_matrix_is_regular_representation_sum(self):
        g = make_dihedral(3)
        m = rng_signal(g, 8)
        builders = {
            OperationVariant.CONVOLUTION: lambda i: left_regular(g, i).dense(),
            OperationVariant.RIGHT_CONVOLUTION: lambda i: right_regular(g, i).dense(),
            OperationVariant.CROSS_CORRELATION:
                lambda i: left_regular(g, g.inverse_table[i]).dense(),
            OperationVariant.RIGHT_CROSS_CORRELATION:
                lambda i: right_regular(g, g.inverse_table[i]).dense(),
        }
        for variant, build in builders.items():
            expected = sum(m[i] * build(i) for i in range(g.order))
            assert np.allclose(operation_matrix(g, m, variant).matrix, expected, atol=1e-12)

    def test_cyclic_convolution_matrix_is_circulant(self):
        g = make_cyclic(5)
        m = rng_signal(g, 9)
        mat = operation_matrix(g, m, OperationVariant.CONVOLUTION).matrix
        for u in range(5):
            for v in range(5):
                assert mat[u, v] == m[(u - v) % 5]

    def test_spectral_properties(self):
        g = make_cyclic(4)
        m = np.zeros(4)
        m[0] = 2.0
        mat = operation_matrix(g, m, OperationVariant.CONVOLUTION)
        assert mat.norm == pytest.approx(2.0)
        assert mat.sigma_min == pytest.approx(2.0)
        assert mat.kappa == pytest.approx(1.0)

    def test_singular_matrix_reports_inf(self):
        g = make_cyclic(3)
        m = np.ones(3)
        mat = operation_matrix(g, m, OperationVariant.CONVOLUTION)
        assert mat.kappa == math.inf
        assert mat.sigma_min == pytest.approx(0.0, abs=1e-12)


class TestFourierPath:
    def test_worked_example_coefficients(self):
        g = make_dihedral(3)
        c = variant_coefficients(g, EXAMPLE_M, OperationVariant.CONVOLUTION)
        assert np.allclose(c["sigma_h1"], EXAMPLE_M_HAT_2D, atol=1e-12)
        conv = convolve_direct(g, EXAMPLE_M, EXAMPLE_M, OperationVariant.CONVOLUTION)
        c2 = variant_coefficients(g, conv, OperationVariant.CONVOLUTION)
        assert np.allclose(c2["sigma_h1"], EXAMPLE_CONV_HAT_2D, atol=1e-12)

    @pytest.mark.parametrize("factory", [
        lambda: make_cyclic(8),
        lambda: make_dihedral(5),
        lambda: make_product([make_cyclic(3), make_cyclic(3)]),
        lambda: make_product([make_cyclic(2), make_dihedral(3)]),
    ])
    def test_fourier_matches_direct(self, factory):
        g = factory()
        m = rng_signal(g, 10)
        x = rng_signal(g, 11)
        for variant in VARIANTS:
            direct = convolve_direct(g, m, x, variant)
            spectral = convolve_fourier(g, m, x, variant)
            assert np.allclose(spectral.values, direct.values, atol=1e-9), variant

    def test_complex_filter_cross_correlation(self):
        # the inverse-argument transform, not the conjugate transpose of
        # m_hat, is what block-diagonalizes the correlation variants once
        # the filter is complex
        g = make_dihedral(4)
        rng = np.random.default_rng(12)
        m = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        x = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        for variant in (OperationVariant.CROSS_CORRELATION,
                        OperationVariant.RIGHT_CROSS_CORRELATION):
            direct = convolve_direct(g, m, x, variant)
            spectral = convolve_fourier(g, m, x, variant)
            assert np.allclose(spectral.values, direct.values, atol=1e-9)

    def test_block_diagonal_form(self):
        # F M F^dagger of a convolution matrix has the filter coefficients
        # repeated along the diagonal blocks
        g = make_dihedral(3)
        m = rng_signal(g, 13)
        fm = fourier_matrix(g)
        mat = operation_matrix(g, m, OperationVariant.CONVOLUTION).matrix
        block = fm.matrix @ mat @ fm.matrix.conj().T
        c = variant_coefficients(g, m, OperationVariant.CONVOLUTION)
        expected = np.zeros((6, 6), dtype=complex)
        expected[0, 0] = c["sigma_tt"][0, 0]
        expected[1, 1] = c["sigma_ts"][0, 0]
        expected[2:6, 2:6] = np.kron(c["sigma_h1"], np.eye(2))
        assert np.allclose(block, expected, atol=1e-10)

    def test_block_diagonal_form_right_variant(self):
        g = make_dihedral(3)
        m = rng_signal(g, 14)
        fm = fourier_matrix(g)
        mat = operation_matrix(g, m, OperationVariant.RIGHT_CONVOLUTION).matrix
        block = fm.matrix @ mat @ fm.matrix.conj().T
        c = variant_coefficients(g, m, OperationVariant.RIGHT_CONVOLUTION)
        expected = np.zeros((6, 6), dtype=complex)
        expected[0, 0] = c["sigma_tt"][0, 0]
        expected[1, 1] = c["sigma_ts"][0, 0]
        expected[2:6, 2:6] = np.kron(np.eye(2), c["sigma_h1"].T)
        assert np.allclose(block, expected, atol=1e-10)


class TestConditionData:
    def test_identity_filter(self):
        g = make_dihedral(3)
        m = GroupSignal.delta(g)
        kappa, norm, sigma_min = condition_data(g, m, OperationVariant.CONVOLUTION)
        assert kappa == pytest.approx(1.0)
        assert norm == pytest.approx(1.0)
        assert sigma_min == pytest.approx(1.0)

    def test_matches_dense_svd(self):
        for g in (make_cyclic(6), make_dihedral(4),
                  make_product([make_cyclic(2), make_cyclic(4)])):
            m = rng_signal(g, 15)
            for variant in VARIANTS:
                kappa, norm, sigma_min = condition_data(g, m, variant)
                mat = operation_matrix(g, m, variant)
                assert norm == pytest.approx(mat.norm, rel=1e-10)
                assert sigma_min == pytest.approx(mat.sigma_min, abs=1e-10)
                if math.isfinite(kappa):
                    assert kappa == pytest.approx(mat.kappa, rel=1e-8)

    def test_rank_deficient_filter(self):
        # constant filter on a nonabelian group annihilates every
        # nontrivial irrep component
        g = make_dihedral(3)
        m = np.ones(6)
        kappa, norm, sigma_min = condition_data(g, m, OperationVariant.CONVOLUTION)
        assert kappa == math.inf
        assert norm == pytest.approx(6.0)
        assert sigma_min == pytest.approx(0.0, abs=1e-12)

    def test_generic_group_falls_back_to_dense(self):
        from groupconv import load_cayley
        g3 = make_dihedral(3)
        g = load_cayley(np.asarray(g3.compose_table))
        m = rng_signal(g3, 16)
        a = condition_data(g, m, OperationVariant.CONVOLUTION)
        b = condition_data(g3, m, OperationVariant.CONVOLUTION)
        assert a.norm == pytest.approx(b.norm, rel=1e-10)
        assert a.sigma_min == pytest.approx(b.sigma_min, abs=1e-10)


class TestEquivariance:
    @pytest.mark.parametrize("variant", [
        OperationVariant.CONVOLUTION, OperationVariant.CROSS_CORRELATION])
    def test_left_variants_commute_with_right_translation(self, variant):
        for g in (make_cyclic(7), make_dihedral(4)):
            m = rng_signal(g, 17)
            x = rng_signal(g, 18)
            for elem in range(g.order):
                result = check_equivariance(g, m, variant, elem, x)
                assert result.ok, (variant, elem, result.max_deviation)

    def test_right_variant_rejected(self):
        g = make_cyclic(4)
        m = rng_signal(g, 19)
        with pytest.raises(ValueError):
            check_equivariance(g, m, OperationVariant.RIGHT_CONVOLUTION, 1, m)

    def test_right_variants_commute_with_left_translation(self):
        # sanity check on the mirror statement, computed by hand here
        g = make_dihedral(3)
        m = rng_signal(g, 20)
        x = rng_signal(g, 21)
        for elem in range(g.order):
            shift = g.compose_table[elem, :]
            for variant in (OperationVariant.RIGHT_CONVOLUTION,
                            OperationVariant.RIGHT_CROSS_CORRELATION):
                lhs = convolve_direct(g, m, x[shift], variant).values
                rhs = convolve_direct(g, m, x, variant).values[shift]
                assert np.allclose(lhs, rhs, atol=1e-10)

    def test_deviation_reported_for_broken_symmetry(self):
        # a right-translated filter does not commute in general, so the
        # deviation should be visibly nonzero for some pair
        g = make_dihedral(3)
        rng = np.random.default_rng(22)
        found = False
        for _ in range(5):
            m = rng.standard_normal(6)
            x = rng.standard_normal(6)
            result = check_equivariance(
                g, m, OperationVariant.CONVOLUTION, 3,
                x, tolerance=1e-10)
            assert result.ok
        # now break it on purpose: compare against left translation instead
        m = rng.standard_normal(6)
        x = rng.standard_normal(6)
        left_shift = g.compose_table[3, :]
        lhs = convolve_direct(g, m, x[left_shift], OperationVariant.CONVOLUTION).values
        rhs = convolve_direct(g, m, x, OperationVariant.CONVOLUTION).values[left_shift]
        found = not np.allclose(lhs, rhs, atol=1e-8)
        assert found


class TestSignals:
    def test_length_mismatch(self):
        g = make_cyclic(4)
        with pytest.raises(IncompatibleSignalError):
            GroupSignal(g, np.ones(5))

    def test_delta_and_norm(self):
        g = make_cyclic(4)
        d = GroupSignal.delta(g, 2)
        assert d.values[2] == 1 and np.sum(np.abs(d.values)) == 1
        assert d.norm(1) == pytest.approx(1.0)

    def test_values_read_only(self):
        g = make_cyclic(3)
        s = GroupSignal(g, np.arange(3))
        with pytest.raises(ValueError):
            s.values[0] = 5


@st.composite
def group_and_signals(draw):
    kind = draw(st.sampled_from(["cyclic", "dihedral", "product"]))
    if kind == "cyclic":
        g = make_cyclic(draw(st.integers(1, 10)))
    elif kind == "dihedral":
        g = make_dihedral(draw(st.integers(1, 5)))
    else:
        g = make_product([make_cyclic(draw(st.integers(1, 3))),
                          make_cyclic(draw(st.integers(1, 3)))])
    seed = draw(st.integers(0, 2**31))
    rng = np.random.default_rng(seed)
    m = rng.standard_normal(g.order) + 1j * rng.standard_normal(g.order)
    x = rng.standard_normal(g.order) + 1j * rng.standard_normal(g.order)
    return g, m, x


@settings(max_examples=40, deadline=None)
@given(group_and_signals(), st.sampled_from(VARIANTS))
def test_delta_filter_is_identity(gmx, variant):
    g, _, x = gmx
    out = convolve_direct(g, GroupSignal.delta(g), x, variant)
    assert np.allclose(out.values, x, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(group_and_signals())
def test_right_convolution_swaps_arguments(gmx):
    g, m, x = gmx
    lhs = convolve_direct(g, m, x, OperationVariant.RIGHT_CONVOLUTION)
    rhs = convolve_direct(g, x, m, OperationVariant.CONVOLUTION)
    assert np.allclose(lhs.values, rhs.values, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(group_and_signals(), st.sampled_from(VARIANTS))
def test_norm_bounded_by_l1(gmx, variant):
    g, m, _ = gmx
    _, norm, _ = condition_data(g, m, variant)
    assert norm <= np.sum(np.abs(m)) + 1e-9


@settings(max_examples=40, deadline=None)
@given(group_and_signals(), st.sampled_from(VARIANTS))
def test_fourier_path_equivalence(gmx, variant):
    g, m, x = gmx
    direct = convolve_direct(g, m, x, variant)
    spectral = convolve_fourier(g, m, x, variant)
    assert np.allclose(spectral.values, direct.values, atol=1e-8)
