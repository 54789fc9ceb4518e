"""Dense complex linear algebra for multipartite operators.

Eigen-decomposition (deterministic cyclic Jacobi), tensor composition,
partial trace / partial transposition, and base-2 entropies.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence, Tuple

import numpy as np

from .core import (
    BadSubsystemIndex,
    DensityMatrix,
    DimensionMismatch,
    NoConvergence,
    NonHermitian,
    NotAProbabilityVector,
    ProductBasis,
    Spectrum,
    ValidationFailure,
)

HERMITICITY_TOL = 1e-10
JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_TOL = 1e-13
# clamping policy: density eigenvalues in [-1e-8, 0) are round-off, below is invalid
DENSITY_NEG_TOL = 1e-8
PROB_NEG_TOL = 1e-10


def herm_eig(H: np.ndarray, max_sweeps: int = JACOBI_MAX_SWEEPS) -> Tuple[Spectrum, np.ndarray]:
    """Diagonalize a Hermitian matrix with cyclic Jacobi rotations.

    Returns eigenvalues sorted descending and the matching eigenvector
    columns.  Output is deterministic: fixed sweep order, stable sort, and
    each eigenvector is phased so its largest-magnitude component is real
    and non-negative.
    """
    A = np.array(H, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    scale = float(np.max(np.abs(A))) if n else 0.0
    if scale == 0.0:
        return Spectrum(np.zeros(n)), np.eye(n, dtype=np.complex128)
    herm_dev = float(np.max(np.abs(A - A.conj().T)))
    if herm_dev > HERMITICITY_TOL * scale:
        raise NonHermitian(f"max |H - H^dag| = {herm_dev:.3e} exceeds {HERMITICITY_TOL:.0e} * max|H|")
    A = (A + A.conj().T) / 2.0
    norm_f = float(np.linalg.norm(A))
    V = np.eye(n, dtype=np.complex128)

    if n == 1:
        vals = np.array([A[0, 0].real])
        return Spectrum(vals), V

    tiny = 1e-15 * norm_f
    converged = False
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, norm_f_off_sq(A)))
        if off <= JACOBI_OFF_TOL * norm_f:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = A[p, q]
                absh = abs(h)
                if absh <= tiny:
                    continue
                a = A[p, p].real
                b = A[q, q].real
                w = h / absh
                tau = (b - a) / (2.0 * absh)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                wc = w.conjugate()
                # A <- Q^dag A Q with Q acting on columns (p, q)
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = c * colp - (s * wc) * colq
                A[:, q] = s * colp + (c * wc) * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = c * rowp - (s * w) * rowq
                A[q, :] = s * rowp + (c * w) * rowq
                A[p, p] = a - t * absh
                A[q, q] = b + t * absh
                A[p, q] = 0.0
                A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - (s * wc) * vq
                V[:, q] = s * vp + (c * wc) * vq
    else:
        converged = math.sqrt(max(0.0, norm_f_off_sq(A))) <= JACOBI_OFF_TOL * norm_f
    if not converged:
        raise NoConvergence(f"Jacobi sweep limit ({max_sweeps}) reached")

    vals = np.real(np.diag(A)).copy()
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    V = V[:, order]
    for j in range(n):
        col = V[:, j]
        i = int(np.argmax(np.abs(col)))
        ph = col[i]
        m = abs(ph)
        if m > 0.0:
            V[:, j] = col * (ph.conjugate() / m)
    return Spectrum(vals), V


def norm_f_off_sq(A: np.ndarray) -> float:
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off) ** 2)


def density_spectrum(rho: DensityMatrix) -> Spectrum:
    """Spectrum of a density matrix with the round-off clamping policy applied."""
    spec, _ = herm_eig(rho.mat)
    vals = spec.values.copy()
    if vals.size and vals.min() < -DENSITY_NEG_TOL:
        raise ValidationFailure(f"eigenvalue {vals.min():.3e} below -{DENSITY_NEG_TOL:.0e}")
    neg = vals < 0.0
    vals[neg] = 0.0
    return Spectrum(vals, clamped_count=int(neg.sum()))


def tensor(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product; the first argument is the slower index."""
    return np.kron(np.asarray(A, dtype=np.complex128), np.asarray(B, dtype=np.complex128))


def _check_subsystems(dims: Sequence[int], idx: Iterable[int]) -> Tuple[int, ...]:
    idx = tuple(int(k) for k in idx)
    m = len(dims)
    for k in idx:
        if k < 0 or k >= m:
            raise BadSubsystemIndex(f"subsystem index {k} out of range for {m} subsystems")
    if len(set(idx)) != len(idx):
        raise BadSubsystemIndex(f"duplicate subsystem index in {idx}")
    return idx


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in `keep` (original order kept)."""
    keep = _check_subsystems(rho.dims, keep)
    if not keep:
        raise BadSubsystemIndex("keep set must be nonempty")
    keep_sorted = sorted(keep)
    m = rho.n_subsystems
    T = rho.mat.reshape(rho.dims + rho.dims)
    row = list(range(m))
    col = [i if i not in keep_sorted else m + i for i in range(m)]
    out = keep_sorted + [m + i for i in keep_sorted]
    red = np.einsum(T, row + col, out)
    new_dims = tuple(rho.dims[i] for i in keep_sorted)
    d = int(np.prod(new_dims))
    return DensityMatrix(new_dims, red.reshape(d, d))


def partial_transpose(rho: DensityMatrix, side: Iterable[int]) -> np.ndarray:
    """Transpose the listed subsystems; returns a plain matrix."""
    side = _check_subsystems(rho.dims, side)
    m = rho.n_subsystems
    T = rho.mat.reshape(rho.dims + rho.dims)
    axes = list(range(2 * m))
    for k in side:
        axes[k], axes[m + k] = axes[m + k], axes[k]
    d = rho.d_tot
    return np.transpose(T, axes).reshape(d, d).copy()


def _clamp_probs(p: np.ndarray, neg_tol: float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    mn = float(p.min()) if p.size else 0.0
    if mn < -neg_tol:
        raise NotAProbabilityVector(f"entry {mn:.3e} below -{neg_tol:.0e}")
    return np.where(p < 0.0, 0.0, p)


def shannon_entropy(p: np.ndarray) -> float:
    """Base-2 Shannon entropy with the 0 log 0 = 0 convention."""
    p = np.asarray(p, dtype=float)
    total = float(p.sum())
    if abs(total - 1.0) > 1e-8:
        raise NotAProbabilityVector(f"probabilities sum to {total!r}")
    p = _clamp_probs(p, PROB_NEG_TOL)
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Base-2 von Neumann entropy via the deterministic eigensolver."""
    return shannon_entropy(density_spectrum(rho).values)


def product_basis_matrix(basis: ProductBasis) -> np.ndarray:
    B = np.eye(1, dtype=np.complex128)
    for f in basis.factors:
        B = np.kron(B, f)
    return B


def diag_probs(rho: DensityMatrix, basis: ProductBasis) -> np.ndarray:
    """Diagonal of rho in the given product basis, as a probability vector."""
    if basis.dims != rho.dims:
        raise DimensionMismatch(f"basis dims {basis.dims} != state dims {rho.dims}")
    B = product_basis_matrix(basis)
    p = np.einsum("ic,ic->c", B.conj(), rho.mat @ B).real
    p = _clamp_probs(p, PROB_NEG_TOL)
    total = float(p.sum())
    if abs(total - 1.0) > 1e-9:
        raise NotAProbabilityVector(f"diagonal probabilities sum to {total!r}")
    return p
