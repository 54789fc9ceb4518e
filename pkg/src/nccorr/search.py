"""Minimization of the product-basis diagonal entropy.

Random search over Haar product bases with two deterministic seed
candidates (computational basis and the marginal eigenbases) and an
optional hill-climb refinement.  All randomness is counter-based: the
basis for sample i depends only on (seed, i), so results are independent
of batching and monotone in the number of samples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import DensityMatrix, ProductBasis
from . import qmat

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_C1 = np.uint64(0xBF58476D1CE4E5B9)
_C2 = np.uint64(0x94D049BB133111EB)
_REFINE_TAG = 0x5EEDFACE


@dataclass(frozen=True)
class SearchConfig:
    n_samples: int = 40000
    seed: int = 1
    refine_steps: int = 200
    refine_step: float = 0.1
    include_deterministic_candidates: bool = True
    chunk_size: int = 8192  # evaluation batch size; never affects results

    def __post_init__(self):
        if self.n_samples < 0 or self.refine_steps < 0:
            raise ValueError("n_samples and refine_steps must be >= 0")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")


def mix64(x) -> np.ndarray:
    """Splitmix64 finalizer, vectorized over uint64 arrays."""
    with np.errstate(over="ignore"):
        x = np.asarray(x, dtype=np.uint64)
        x = (x ^ (x >> np.uint64(30))) * _C1
        x = (x ^ (x >> np.uint64(27))) * _C2
        return x ^ (x >> np.uint64(31))


def sample_key(seed: int, index) -> np.ndarray:
    """Per-sample key: a 64-bit mix of the master seed and the sample index."""
    with np.errstate(over="ignore"):
        s = np.uint64(seed % (1 << 64))
        idx = np.asarray(index, dtype=np.uint64)
        return mix64(mix64(s) ^ (idx + _GAMMA))


def _normals(keys: np.ndarray, count: int) -> np.ndarray:
    """(len(keys), count) standard normals from counter-based uniforms."""
    n_u = count + (count % 2)
    with np.errstate(over="ignore"):
        offs = (np.arange(1, n_u + 1, dtype=np.uint64)) * _GAMMA
        z = mix64(keys[:, None] + offs[None, :])
    u = ((z >> np.uint64(11)).astype(np.float64) + 1.0) * (2.0 ** -53)  # (0, 1]
    r = np.sqrt(-2.0 * np.log(u[:, 0::2]))
    theta = (2.0 * math.pi) * u[:, 1::2]
    out = np.empty_like(u)
    out[:, 0::2] = r * np.cos(theta)
    out[:, 1::2] = r * np.sin(theta)
    return out[:, :count]


def _haar_batch(dims: Sequence[int], keys: np.ndarray) -> List[np.ndarray]:
    """One Haar-random unitary per subsystem per key; stacks of shape (S, d, d)."""
    counts = [2 * d * d for d in dims]
    N = _normals(keys, sum(counts))
    factors = []
    off = 0
    for d, cnt in zip(dims, counts):
        block = N[:, off : off + cnt].reshape(-1, d, d, 2)
        off += cnt
        G = (block[..., 0] + 1j * block[..., 1]) / math.sqrt(2.0)
        Q, R = np.linalg.qr(G)
        diag = R[:, np.arange(d), np.arange(d)]
        mag = np.abs(diag)
        ph = np.where(mag > 0.0, diag / np.where(mag > 0.0, mag, 1.0), 1.0)
        factors.append(Q * ph[:, None, :])
    return factors


def haar_random_product_basis(dims: Sequence[int], sample_seed: int) -> ProductBasis:
    """Haar-uniform local basis per subsystem, deterministic per sample_seed."""
    keys = mix64(np.array([sample_seed % (1 << 64)], dtype=np.uint64) + _GAMMA)
    facs = _haar_batch(tuple(int(d) for d in dims), keys)
    return ProductBasis(tuple(f[0] for f in facs))


def _batched_kron(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    S, a, b = A.shape
    _, c, d = B.shape
    return (A[:, :, None, :, None] * B[:, None, :, None, :]).reshape(S, a * c, b * d)


def _batch_entropies(rho_mat: np.ndarray, factor_stacks: List[np.ndarray]) -> np.ndarray:
    B = factor_stacks[0]
    for F in factor_stacks[1:]:
        B = _batched_kron(B, F)
    M = np.einsum("ik,skc->sic", rho_mat, B)
    P = np.einsum("sic,sic->sc", B.conj(), M).real
    P = np.where(P > 0.0, P, 0.0)
    logs = np.log2(np.where(P > 0.0, P, 1.0))
    return -(P * logs).sum(axis=1)


def unitary_from_antiherm(A: np.ndarray) -> np.ndarray:
    """exp(A) for anti-Hermitian A via the eigendecomposition of -iA."""
    Hm = -1j * A
    Hm = (Hm + Hm.conj().T) / 2.0
    w, V = np.linalg.eigh(Hm)
    return (V * np.exp(1j * w)) @ V.conj().T


def marginal_eigenbasis(rho: DensityMatrix) -> ProductBasis:
    """Product basis formed from each single-subsystem marginal eigenbasis."""
    facs = []
    for k in range(rho.n_subsystems):
        marg = qmat.partial_trace(rho, [k])
        _, V = qmat.herm_eig(marg.mat)
        facs.append(V)
    return ProductBasis(tuple(facs))


def computational_basis(dims: Sequence[int]) -> ProductBasis:
    return ProductBasis(tuple(np.eye(int(d), dtype=np.complex128) for d in dims))


# cache of sampled basis factors keyed by (dims, seed, n_samples); the samples
# do not depend on the state, so sweeps over a family reuse them
_SAMPLE_CACHE: Dict[tuple, List[np.ndarray]] = {}
_SAMPLE_CACHE_MAX = 4


def _sampled_factors(dims: Tuple[int, ...], seed: int, n_samples: int) -> List[np.ndarray]:
    key = (dims, seed, n_samples)
    if key not in _SAMPLE_CACHE:
        if len(_SAMPLE_CACHE) >= _SAMPLE_CACHE_MAX:
            _SAMPLE_CACHE.pop(next(iter(_SAMPLE_CACHE)))
        keys = sample_key(seed, np.arange(n_samples, dtype=np.uint64))
        _SAMPLE_CACHE[key] = _haar_batch(dims, keys) if n_samples else []
    return _SAMPLE_CACHE[key]


def min_diag_entropy(
    rho: DensityMatrix,
    cfg: SearchConfig,
    extra_candidates: Sequence[ProductBasis] = (),
) -> Tuple[float, ProductBasis, dict]:
    """Smallest diagonal entropy found over candidate and sampled product bases.

    Returns (entropy in bits, witness basis, diagnostics).  The result is an
    upper bound on the true minimum and is bit-identical for identical cfg,
    regardless of chunk size.
    """
    dims = rho.dims
    best = math.inf
    best_basis: Optional[ProductBasis] = None
    best_source = "none"

    candidates: List[Tuple[str, ProductBasis]] = []
    if cfg.include_deterministic_candidates:
        candidates.append(("computational", computational_basis(dims)))
        candidates.append(("marginal-eigenbasis", marginal_eigenbasis(rho)))
    for i, basis in enumerate(extra_candidates):
        candidates.append((f"extra:{i}", basis))

    for source, basis in candidates:
        h = qmat.shannon_entropy(qmat.diag_probs(rho, basis))
        if h < best:
            best, best_basis, best_source = h, basis, source

    n = cfg.n_samples
    if n > 0:
        stacks = _sampled_factors(dims, cfg.seed, n)
        for lo in range(0, n, cfg.chunk_size):
            hi = min(lo + cfg.chunk_size, n)
            chunk = [F[lo:hi] for F in stacks]
            ent = _batch_entropies(rho.mat, chunk)
            i = int(np.argmin(ent))
            if ent[i] < best:
                best = float(ent[i])
                best_basis = ProductBasis(tuple(F[i] for F in chunk))
                best_source = f"sample:{lo + i}"

    accepts = 0
    if cfg.refine_steps > 0 and best_basis is not None:
        rng = np.random.default_rng(
            np.random.SeedSequence([cfg.seed % (1 << 64), _REFINE_TAG])
        )
        factors = [f.copy() for f in best_basis.factors]
        step = cfg.refine_step
        m = len(dims)
        for _ in range(cfg.refine_steps):
            k = int(rng.integers(0, m))
            d = dims[k]
            X = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            A = (X - X.conj().T) / 2.0
            nrm = float(np.linalg.norm(A))
            if nrm == 0.0:
                continue
            trial = list(factors)
            trial[k] = factors[k] @ unitary_from_antiherm(A * (step / nrm))
            basis = ProductBasis(tuple(trial))
            h = qmat.shannon_entropy(qmat.diag_probs(rho, basis))
            if h < best:
                best = h
                factors = trial
                best_basis = basis
                best_source = "refine"
                accepts += 1
            else:
                step *= 0.9

    diagnostics = {
        "samples_evaluated": n,
        "deterministic_candidates": cfg.include_deterministic_candidates,
        "refine_steps": cfg.refine_steps,
        "refine_accepts": accepts,
        "best_source": best_source,
    }
    return best, best_basis, diagnostics
