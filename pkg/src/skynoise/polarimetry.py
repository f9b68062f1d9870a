"""Jones/Mueller calculus on the polarization qubit.

Stokes index convention: vectors are ordered (S0, S1, S2, S3) with

    S0 = Tr(rho sigma_0),  S1 = Tr(rho sigma_3),
    S2 = Tr(rho sigma_1),  S3 = Tr(rho sigma_2),

encoded once and for all by the permutation matrix A below through
rho = (1/2) sum_mu sigma_mu (A S)_mu.  The topology layer instead works
with the Pauli-ordered triple (sx, sy, sz) = (Tr rho sigma_1, Tr rho
sigma_2, Tr rho sigma_3); the two labelings are bridged exclusively by
:func:`stokes_vector_from_bloch` / :func:`bloch_from_stokes_vector`.
"""

from __future__ import annotations

import numpy as np

SIGMA = np.array([
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=np.complex128)

# Stokes <-> Pauli index permutation: column mu of A says which S-component
# multiplies sigma_mu.
A_MATRIX = np.array([
    [1, 0, 0, 0],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [0, 1, 0, 0],
], dtype=np.float64)

# 3x3 block of A: S-index <- Bloch(sigma)-index, (S1,S2,S3) = (bz, bx, by)
_P3 = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=np.float64)


class PolarimetryError(ValueError):
    pass


def stokes_vector_from_bloch(s0, bx, by, bz):
    """(S0,S1,S2,S3) from the Pauli-ordered components used by topology."""
    return np.stack(np.broadcast_arrays(s0, bz, bx, by), axis=-1)


def bloch_from_stokes_vector(S):
    """(s0, bx, by, bz) from a (S0,S1,S2,S3) vector (inverse adapter)."""
    S = np.asarray(S)
    return S[..., 0], S[..., 2], S[..., 3], S[..., 1]


def jones_retarder(theta: float, varphi: float, psi: float) -> np.ndarray:
    """SU(2) retarder Jones matrix in the Euler-angle parameterization.

    Entries: [[e^{-i(varphi+psi)/2} cos(theta/2), e^{-i(varphi-psi)/2} sin(theta/2)],
              [-e^{i(varphi-psi)/2} sin(theta/2), e^{i(varphi+psi)/2} cos(theta/2)]].
    Unitary with unit determinant for any angles.
    """
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([
        [np.exp(-0.5j * (varphi + psi)) * c, np.exp(-0.5j * (varphi - psi)) * s],
        [-np.exp(0.5j * (varphi - psi)) * s, np.exp(0.5j * (varphi + psi)) * c],
    ])


def jones_diattenuator(theta: float, psi: float, q: float, r: float) -> np.ndarray:
    """Hermitian diattenuator Jones matrix with eigenvalues sqrt(q), sqrt(r).

    q and r are intensity transmittances along the two diattenuation
    eigenaxes; theta, psi orient the axis.
    """
    if not (0 < q <= 1) or not (0 < r <= 1):
        raise PolarimetryError(f"transmittances must be in (0, 1], got q={q}, r={r}")
    sq, sr = np.sqrt(q), np.sqrt(r)
    ct, st = np.cos(theta), np.sin(theta)
    return 0.5 * np.array([
        [sq + sr + (sq - sr) * ct, np.exp(1j * psi) * (sq - sr) * st],
        [np.exp(-1j * psi) * (sq - sr) * st, sq + sr - (sq - sr) * ct],
    ])


def mueller_from_jones(J: np.ndarray, imag_tol: float = 1e-12) -> np.ndarray:
    """Mueller matrix of a deterministic element: M = (1/2) A^T T A.

    T_{nu alpha} = Tr(sigma_nu J sigma_alpha J^dagger).  The result must
    be real; a larger imaginary residue indicates a broken J.
    """
    J = np.asarray(J, dtype=np.complex128)
    Jd = J.conj().T
    T = np.empty((4, 4), dtype=np.complex128)
    for nu in range(4):
        for al in range(4):
            T[nu, al] = np.trace(SIGMA[nu] @ J @ SIGMA[al] @ Jd)
    M = 0.5 * A_MATRIX.T @ T @ A_MATRIX
    resid = float(np.max(np.abs(M.imag)))
    scale = max(1.0, float(np.max(np.abs(M.real))))
    if resid > imag_tol * scale:
        raise PolarimetryError(f"imaginary residue {resid:.3e} exceeds tolerance")
    return np.ascontiguousarray(M.real)


def retarder_rotation_block(theta: float, varphi: float, psi: float) -> np.ndarray:
    """Closed-form 3x3 rotation block of the retarder Mueller matrix.

    In Pauli-ordered Bloch coordinates the retarder acts as
    Rz(varphi) Ry(-theta) Rz(psi); conjugating with the A-matrix
    permutation gives the (S1,S2,S3) block returned here.  Equals
    ``mueller_from_jones(jones_retarder(...))[1:, 1:]``.
    """
    def rz(a):
        ca, sa = np.cos(a), np.sin(a)
        return np.array([[ca, -sa, 0], [sa, ca, 0], [0, 0, 1.0]])

    def ry(a):
        ca, sa = np.cos(a), np.sin(a)
        return np.array([[ca, 0, sa], [0, 1.0, 0], [-sa, 0, ca]])

    bloch = rz(varphi) @ ry(-theta) @ rz(psi)
    return _P3 @ bloch @ _P3.T


def mueller_retarder(theta: float, varphi: float, psi: float) -> np.ndarray:
    """Retarder Mueller matrix [[1, 0], [0^T, R]]."""
    M = np.eye(4)
    M[1:, 1:] = retarder_rotation_block(theta, varphi, psi)
    return M


def mueller_diattenuator(q: float, r: float) -> np.ndarray:
    """Canonical diattenuator Mueller matrix for axis-aligned q, r."""
    if not (0 < q <= 1) or not (0 < r <= 1):
        raise PolarimetryError(f"transmittances must be in (0, 1], got q={q}, r={r}")
    h, d, g = 0.5 * (q + r), 0.5 * (q - r), np.sqrt(q * r)
    return np.array([
        [h, d, 0, 0],
        [d, h, 0, 0],
        [0, 0, g, 0],
        [0, 0, 0, g],
    ])


def mueller_depolarizer(m: np.ndarray) -> np.ndarray:
    """Depolarizer Mueller matrix [[1, 0], [0^T, m]].

    m must be symmetric with eigenvalues in [-1, 1] (intensity is kept,
    polarization degree may shrink).
    """
    m = np.asarray(m, dtype=np.float64)
    if m.shape != (3, 3):
        raise PolarimetryError(f"m must be 3x3, got {m.shape}")
    if np.max(np.abs(m - m.T)) > 1e-12:
        raise PolarimetryError("m must be symmetric")
    ev = np.linalg.eigvalsh(m)
    if ev.min() < -1 - 1e-12 or ev.max() > 1 + 1e-12:
        raise PolarimetryError(f"eigenvalues {ev} outside [-1, 1]")
    M = np.eye(4)
    M[1:, 1:] = m
    return M


def apply_mueller(M: np.ndarray, S):
    """Linear Stokes action S -> M S (vectors ordered S0..S3)."""
    return np.asarray(M) @ np.asarray(S, dtype=np.float64)
