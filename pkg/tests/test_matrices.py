"""Exponentials, ordered products, and the 3x3 Hermitian eigensolver."""

import numpy as np
import pytest

from lambda_holonomy.matrices import (
    eigh3,
    expm,
    expm_su2,
    expm_su2_batch,
    expmi_hermitian,
    hermiticity_defect,
    is_unitary,
    ordered_product,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)


def taylor_expm(m, terms=60):
    # independent oracle: plain power series, no scaling tricks
    out = np.eye(m.shape[0], dtype=complex)
    term = np.eye(m.shape[0], dtype=complex)
    for k in range(1, terms + 1):
        term = term @ m / k
        out = out + term
    return out


def test_expm_matches_power_series():
    rng = np.random.default_rng(7)
    for _ in range(20):
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        m *= 0.8  # keep the plain series convergent to machine precision
        np.testing.assert_allclose(expm(m), taylor_expm(m), atol=1e-13)


def test_expm_inverse_pairs():
    rng = np.random.default_rng(11)
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    np.testing.assert_allclose(expm(m) @ expm(-m), np.eye(3), atol=1e-12)
    # large generators only in the anti-Hermitian (well-conditioned) case
    h = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    g = 10.0 * (h - h.conj().T)
    np.testing.assert_allclose(expm(g) @ expm(-g), np.eye(3), atol=1e-11)


def test_expm_pauli_half_turn():
    np.testing.assert_allclose(expm(0.5j * np.pi * SX), 1j * SX, atol=1e-14)


def test_expm_rejects_bad_input():
    with pytest.raises(ValueError, match="square"):
        expm(np.zeros((2, 3)))
    with pytest.raises(ValueError, match="non-finite"):
        expm(np.array([[np.nan, 0], [0, 0]]))


def test_expm_su2_matches_expm():
    rng = np.random.default_rng(3)
    for _ in range(30):
        a = rng.normal(size=4) * 2.0
        m = 1j * np.array(
            [[a[0] + a[3], a[1] - 1j * a[2]], [a[1] + 1j * a[2], a[0] - a[3]]]
        )
        np.testing.assert_allclose(expm_su2(m), expm(m), atol=1e-12)


def test_expm_su2_zero_generator():
    np.testing.assert_allclose(expm_su2(np.zeros((2, 2))), np.eye(2), atol=0)


def test_expm_su2_batch_matches_pointwise():
    rng = np.random.default_rng(5)
    h = rng.normal(size=(8, 2, 2)) + 1j * rng.normal(size=(8, 2, 2))
    m = 0.5 * (h - np.conj(np.swapaxes(h, -1, -2)))
    batch = expm_su2_batch(m)
    for k in range(8):
        np.testing.assert_allclose(batch[k], expm_su2(m[k]), atol=1e-14)
        assert is_unitary(batch[k])


def test_expmi_hermitian_unitary_at_large_norm():
    rng = np.random.default_rng(13)
    h = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    h = 500.0 * (h + h.conj().T)
    u = expmi_hermitian(h)
    assert is_unitary(u, tol=1e-12)


def test_expmi_hermitian_matches_expm():
    rng = np.random.default_rng(17)
    h = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    h = h + h.conj().T
    np.testing.assert_allclose(expmi_hermitian(h), expm(-1j * h), atol=1e-12)


def test_ordered_product_applies_later_factors_on_the_left():
    a = expm(0.3j * SX)
    b = np.diag([1.0, 1j])
    mats = np.stack([a, b])
    np.testing.assert_allclose(ordered_product(mats), b @ a, atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 16, 33])
def test_ordered_product_matches_sequential_loop(n):
    rng = np.random.default_rng(100 + n)
    h = rng.normal(size=(n, 2, 2)) + 1j * rng.normal(size=(n, 2, 2))
    mats = expm_su2_batch(0.3 * (h - np.conj(np.swapaxes(h, -1, -2))))
    ref = np.eye(2, dtype=complex)
    for k in range(n):
        ref = mats[k] @ ref
    np.testing.assert_allclose(ordered_product(mats), ref, atol=1e-13)


def test_eigh3_matches_characteristic_polynomial():
    rng = np.random.default_rng(23)
    for _ in range(10):
        h = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        h = h + h.conj().T
        dec = eigh3(h)
        coeffs = np.poly(h)  # characteristic polynomial, roots are eigenvalues
        roots = np.sort(np.roots(coeffs).real)
        np.testing.assert_allclose(dec.eigenvalues, roots, atol=1e-9)
        for k in range(3):
            resid = h @ dec.eigenvectors[:, k] - dec.eigenvalues[k] * dec.eigenvectors[:, k]
            assert np.linalg.norm(resid) < 1e-12 * max(1.0, np.linalg.norm(h))


def test_eigh3_phase_convention_is_deterministic():
    rng = np.random.default_rng(29)
    h = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    h = h + h.conj().T
    dec = eigh3(h)
    for k in range(3):
        col = dec.eigenvectors[:, k]
        lead = col[np.argmax(np.abs(col))]
        assert abs(lead.imag) < 1e-14 and lead.real > 0
    # rebuilding from scratch gives bit-identical vectors
    again = eigh3(h.copy())
    assert np.array_equal(dec.eigenvectors, again.eigenvectors)


def test_eigh3_orders_ascending():
    dec = eigh3(np.diag([1.0, -9.0, 0.0]))
    np.testing.assert_allclose(dec.eigenvalues, [-9.0, 0.0, 1.0], atol=0)


def test_eigh3_rejects_non_hermitian_naming_entries():
    m = np.eye(3, dtype=complex)
    m[0, 2] = 0.5
    with pytest.raises(ValueError, match=r"\(0,2\)/\(2,0\)"):
        eigh3(m)


def test_hermiticity_defect_locates_worst_pair():
    m = np.eye(3, dtype=complex)
    m[1, 2] = 1.0 + 2.0j
    defect, pair = hermiticity_defect(m)
    assert pair in ((1, 2), (2, 1))
    assert defect == pytest.approx(abs(m[1, 2] - np.conj(m[2, 1])))
