"""Dense complex matrix kernel for 2x2 and 3x3 problems.

Everything downstream (connections, holonomies, propagators) reduces to
Pauli algebra, small matrix exponentials and a 3x3 Hermitian eigensolver,
so those live here with deterministic conventions:

* ``eigh3`` returns eigenvalues ascending and fixes each eigenvector's
  phase so that its largest-magnitude component is real and positive.
* ``expm`` is scaling-and-squaring with a fixed high-order Taylor core,
  accurate to machine precision for the matrix sizes used here.
* ``expm_su2`` is an independent closed form for 2x2 anti-Hermitian
  generators and doubles as a cross-check oracle for ``expm``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
IDENTITY_3 = np.eye(3, dtype=complex)

# Taylor order for the expm core; 0.5^19/19! ~ 1.6e-23 keeps the truncation
# below double rounding once the argument is scaled under 1/2.
_TAYLOR_ORDER = 18
_SCALE_TARGET = 0.5


def hermiticity_defect(m: np.ndarray) -> tuple[float, tuple[int, int]]:
    """Largest |m - m^dag| entry and the index pair where it occurs."""
    d = np.abs(m - m.conj().T)
    flat = int(np.argmax(d))
    idx = np.unravel_index(flat, d.shape)
    return float(d[idx]), (int(idx[0]), int(idx[1]))


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    return hermiticity_defect(m)[0] <= tol


def is_anti_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    return float(np.max(np.abs(m + m.conj().T))) <= tol


def is_unitary(m: np.ndarray, tol: float = 1e-12) -> bool:
    eye = np.eye(m.shape[0], dtype=complex)
    return float(np.max(np.abs(m.conj().T @ m - eye))) <= tol


def expm(m: np.ndarray, tol: float = 1e-13) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a Taylor core.

    Parameters
    ----------
    m : complex square matrix
    tol : requested relative accuracy against the plain power series; the
        fixed-order core delivers near machine precision, so any tol down
        to ~1e-15 is honored.  Values below that floor are clamped.

    Raises
    ------
    ValueError : on non-finite entries or a non-square argument.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expm needs a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("expm: non-finite entries in input")
    if tol < 1e-15:
        tol = 1e-15

    norm = float(np.linalg.norm(m, 1))
    squarings = 0
    if norm > _SCALE_TARGET:
        squarings = int(np.ceil(np.log2(norm / _SCALE_TARGET)))
    a = m / (2.0**squarings)

    eye = np.eye(m.shape[0], dtype=complex)
    result = eye.copy()
    term = eye.copy()
    for k in range(1, _TAYLOR_ORDER + 1):
        term = term @ a / k
        result += term

    for _ in range(squarings):
        result = result @ result
    return result


def expm_su2(m: np.ndarray) -> np.ndarray:
    """Closed-form exponential of a single 2x2 anti-Hermitian matrix."""
    out = expm_su2_batch(np.asarray(m, dtype=complex)[None, :, :])
    return out[0]


def expm_su2_batch(m: np.ndarray) -> np.ndarray:
    """Exponentials of a stack (n,2,2) of anti-Hermitian matrices.

    Decomposes m = i(a0 + a.sigma) and applies
    exp(m) = e^{i a0} (cos|a| + i sin|a| a.sigma/|a|), which is exact and
    cheap enough for integrator hot loops.
    """
    m = np.asarray(m, dtype=complex)
    a0 = 0.5 * (m[..., 0, 0] + m[..., 1, 1]).imag
    az = 0.5 * (m[..., 0, 0] - m[..., 1, 1]).imag
    # upper-right entry is i*ax + ay for anti-Hermitian input
    ax = m[..., 0, 1].imag
    ay = m[..., 0, 1].real
    r = np.sqrt(ax * ax + ay * ay + az * az)
    cr = np.cos(r)
    snc = np.sinc(r / np.pi)  # sin(r)/r without the r=0 special case
    phase = np.exp(1j * a0)
    out = np.empty(m.shape, dtype=complex)
    out[..., 0, 0] = phase * (cr + 1j * az * snc)
    out[..., 1, 1] = phase * (cr - 1j * az * snc)
    out[..., 0, 1] = phase * (1j * ax + ay) * snc
    out[..., 1, 0] = phase * (1j * ax - ay) * snc
    return out


def expmi_hermitian(h: np.ndarray) -> np.ndarray:
    """exp(-i h) for a Hermitian matrix or stack of them, via eigh.

    The eigendecomposition route keeps the result unitary to rounding for
    arbitrarily large ||h||, which the propagator relies on.
    """
    h = np.asarray(h, dtype=complex)
    w, v = np.linalg.eigh(h)
    phases = np.exp(-1j * w)
    return np.einsum("...ik,...k,...jk->...ij", v, phases, v.conj())


def ordered_product(mats: np.ndarray) -> np.ndarray:
    """Later-factors-on-the-left product of a stack of matrices.

    mats[k] is the k-th factor applied, so the result is
    mats[n-1] @ ... @ mats[1] @ mats[0].  Pairwise tree reduction keeps
    the work vectorized and the rounding growth ~sqrt(n).
    """
    p = np.asarray(mats)
    if p.ndim != 3:
        raise ValueError("ordered_product expects a (n, d, d) stack")
    while p.shape[0] > 1:
        n = p.shape[0]
        if n % 2:
            p = np.concatenate([np.matmul(p[1:-1:2], p[0:-1:2]), p[-1:]])
        else:
            p = np.matmul(p[1::2], p[0::2])
    return p[0]


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigensystem of a Hermitian 3x3 matrix.

    eigenvalues are ascending; eigenvectors[:, k] belongs to
    eigenvalues[k] with the deterministic phase convention described in
    the module docstring.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eigh3(m: np.ndarray, tol: float = 1e-12) -> EigenDecomposition:
    """Hermitian 3x3 eigensolver with a fixed phase convention.

    Raises
    ------
    ValueError : if the input is not Hermitian within tol; the message
        names the worst-offending entry pair.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (3, 3):
        raise ValueError(f"eigh3 needs a 3x3 matrix, got shape {m.shape}")
    defect, (i, j) = hermiticity_defect(m)
    if defect > tol:
        raise ValueError(
            f"eigh3: input not Hermitian, entries ({i},{j})/({j},{i}) "
            f"disagree by {defect:.3e} (tol {tol:.1e})"
        )
    w, v = np.linalg.eigh(m)
    v = v.copy()
    for k in range(3):
        col = v[:, k]
        lead = int(np.argmax(np.abs(col)))  # ties resolve to lowest index
        z = col[lead]
        if z != 0:
            v[:, k] = col * (np.conj(z) / np.abs(z))
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)
