"""The five correlation quantifiers: D, G, D_G, K and negativity N."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import DensityMatrix, PartitionCapExceeded, ProductBasis
from . import qmat
from .search import SearchConfig, marginal_eigenbasis, min_diag_entropy

DEFAULT_PARTITION_CAP = 1 << 24
_ENUM_CHUNK = 1 << 16


@dataclass(frozen=True)
class Partition:
    """Bin index per total-system eigenvalue, for subsystem k."""

    k: int
    assignment: Tuple[int, ...]


@dataclass(frozen=True)
class MeasureReport:
    measure: str
    value: float
    witness: object
    diagnostics: dict = field(default_factory=dict)


def _neg_entropy_seq(vals: np.ndarray) -> np.float64:
    """Sum of x log2 x accumulated in index order (0 log 0 = 0).

    The fixed accumulation order makes the value bit-reproducible against a
    naive per-assignment loop.
    """
    acc = np.float64(0.0)
    for x in vals:
        if x > 0.0:
            acc += x * np.log2(x)
    return acc


def _min_balanced_partition(
    e_tot: np.ndarray, e_red: np.ndarray, d: int, cap: int
) -> Tuple[np.float64, Tuple[int, ...]]:
    """Minimize |sum etilde log etilde - sum e_red log e_red| over partitions.

    Partitions place the d_tot total eigenvalues into d equal-size bins
    (d_tot/d each); bin sums are the mimic eigenvalues.  Assignments are
    enumerated as a base-d counter (eigenvalue 0 is the most significant
    digit) and the first minimum encountered is kept.
    """
    d_tot = len(e_tot)
    total = d ** d_tot
    if total > cap:
        raise PartitionCapExceeded(f"{d}^{d_tot} = {total} exceeds cap {cap}")
    bin_size = d_tot // d
    s_red = _neg_entropy_seq(e_red)
    powers = np.array([d ** (d_tot - 1 - j) for j in range(d_tot)], dtype=np.int64)

    best_val: Optional[np.float64] = None
    best_idx = -1
    for lo in range(0, total, _ENUM_CHUNK):
        hi = min(lo + _ENUM_CHUNK, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % d
        balanced = np.ones(len(idx), dtype=bool)
        for b in range(d):
            balanced &= (digits == b).sum(axis=1) == bin_size
        if not balanced.any():
            continue
        idx = idx[balanced]
        digits = digits[balanced]
        n = len(idx)
        etilde = np.zeros((n, d))
        rows = np.arange(n)
        for j in range(d_tot):
            etilde[rows, digits[:, j]] += e_tot[j]
        T = np.zeros(n)
        for b in range(d):
            x = etilde[:, b]
            T += np.where(x > 0.0, x, 0.0) * np.log2(np.where(x > 0.0, x, 1.0))
        vals = np.abs(T - s_red)
        i = int(np.argmin(vals))
        if best_val is None or vals[i] < best_val:
            best_val = np.float64(vals[i])
            best_idx = int(idx[i])
    assert best_val is not None and best_idx >= 0
    digits = tuple(int((best_idx // int(p)) % d) for p in powers)
    return best_val, digits


def _bipartite_splittings(m: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """All 2^(m-1) - 1 splittings, subsystem 0 always on side A."""
    out = []
    for mask in range(1 << (m - 1)):
        side_a = [0] + [k for k in range(1, m) if mask & (1 << (k - 1))]
        if len(side_a) == m:
            continue
        side_b = [k for k in range(1, m) if k not in side_a]
        out.append((tuple(side_a), tuple(side_b)))
    return out


def measure_D(
    rho: DensityMatrix,
    cfg: SearchConfig = SearchConfig(),
    extra_candidates: Sequence[ProductBasis] = (),
) -> MeasureReport:
    """Minimum product-basis diagonal entropy minus the von Neumann entropy.

    Search-based: the reported value is an upper bound on the true D.
    """
    h_min, basis, diag = min_diag_entropy(rho, cfg, extra_candidates)
    s_vn = qmat.von_neumann_entropy(rho)
    diag = dict(diag, min_diag_entropy=h_min, von_neumann_entropy=s_vn)
    return MeasureReport("D", h_min - s_vn, basis, diag)


def measure_G(rho: DensityMatrix, partition_cap: int = DEFAULT_PARTITION_CAP) -> MeasureReport:
    """max over subsystems k of the minimal mimic-eigenvalue discrepancy F_k."""
    e_tot = qmat.density_spectrum(rho).values
    f_values = {}
    witnesses = []
    for k in range(rho.n_subsystems):
        e_red = qmat.density_spectrum(qmat.partial_trace(rho, [k])).values
        fk, assignment = _min_balanced_partition(e_tot, e_red, rho.dims[k], partition_cap)
        f_values[k] = float(fk)
        witnesses.append(Partition(k, assignment))
    value = max(f_values.values())
    return MeasureReport("G", value, witnesses, {"F_k": f_values})


def measure_DG(rho: DensityMatrix) -> MeasureReport:
    """Entropy gained by dephasing in the product basis of the marginal eigenbases."""
    basis = marginal_eigenbasis(rho)
    h = qmat.shannon_entropy(qmat.diag_probs(rho, basis))
    s_vn = qmat.von_neumann_entropy(rho)
    return MeasureReport(
        "DG", h - s_vn, basis, {"dephased_entropy": h, "von_neumann_entropy": s_vn}
    )


def _splitting_spectral_distance(rho: DensityMatrix, side_b: Tuple[int, ...]) -> float:
    e, _ = qmat.herm_eig(rho.mat)
    pt = qmat.partial_transpose(rho, side_b)
    et, _ = qmat.herm_eig(pt)
    return float(np.sum(np.abs(e.values - et.values)))


def measure_K(rho: DensityMatrix) -> MeasureReport:
    """L1 distance between the sorted spectra of rho and its partial transpose.

    Multipartite inputs take the minimum over all bipartite splittings.
    """
    best = None
    witness = None
    per_split = {}
    for side_a, side_b in _bipartite_splittings(rho.n_subsystems):
        val = _splitting_spectral_distance(rho, side_b)
        per_split[f"{side_a}|{side_b}"] = val
        if best is None or val < best:
            best = val
            witness = (side_a, side_b)
    return MeasureReport("K", best, witness, {"per_splitting": per_split})


def negativity(rho: DensityMatrix) -> MeasureReport:
    """Absolute sum of the negative partial-transpose eigenvalues (no factor 2)."""
    best = None
    witness = None
    per_split = {}
    for side_a, side_b in _bipartite_splittings(rho.n_subsystems):
        pt = qmat.partial_transpose(rho, side_b)
        spec, _ = qmat.herm_eig(pt)
        neg = spec.values[spec.values < 0.0]
        val = float(-neg.sum()) if neg.size else 0.0
        per_split[f"{side_a}|{side_b}"] = val
        if best is None or val < best:
            best = val
            witness = (side_a, side_b)
    return MeasureReport("N", best, witness, {"per_splitting": per_split})


def recompute_K_at_witness(rho: DensityMatrix, witness) -> float:
    """Spectral distance at a stored splitting; reproduces the report exactly."""
    _, side_b = witness
    return _splitting_spectral_distance(rho, tuple(side_b))
