"""Shared domain types and exception hierarchy."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np


class NccorrError(Exception):
    """Base class for all library errors."""


class NonHermitian(NccorrError):
    pass


class NoConvergence(NccorrError):
    pass


class BadSubsystemIndex(NccorrError):
    pass


class NotAProbabilityVector(NccorrError):
    pass


class DimensionMismatch(NccorrError):
    pass


class ParamOutOfRange(NccorrError):
    pass


class ParseError(NccorrError):
    pass


class ValidationFailure(NccorrError):
    pass


class DegenerateSpectrum(NccorrError):
    pass


class PartitionCapExceeded(NccorrError):
    pass


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues sorted descending.

    clamped_count records how many small negative values were lifted to 0
    (only nonzero for density-matrix spectra).
    """

    values: np.ndarray
    clamped_count: int = 0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class DensityMatrix:
    """Multipartite state: subsystem dimensions plus the full matrix."""

    dims: Tuple[int, ...]
    mat: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 2 for d in dims):
            raise DimensionMismatch(f"subsystem dims must all be >= 2, got {dims}")
        mat = np.asarray(self.mat, dtype=np.complex128)
        d_tot = int(np.prod(dims))
        if mat.shape != (d_tot, d_tot):
            raise DimensionMismatch(
                f"matrix shape {mat.shape} does not match dims {dims} (d_tot={d_tot})"
            )
        if not np.all(np.isfinite(mat.view(float))):
            raise ValidationFailure("matrix contains non-finite entries")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @property
    def d_tot(self) -> int:
        return self.mat.shape[0]

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)


@dataclass(frozen=True)
class ProductBasis:
    """One local orthonormal basis per subsystem (columns of each unitary)."""

    factors: Tuple[np.ndarray, ...]

    def __post_init__(self):
        facs = tuple(np.asarray(f, dtype=np.complex128) for f in self.factors)
        for f in facs:
            if f.ndim != 2 or f.shape[0] != f.shape[1]:
                raise DimensionMismatch("basis factors must be square matrices")
        object.__setattr__(self, "factors", facs)

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(f.shape[0] for f in self.factors)

    def unitarity_residual(self) -> float:
        res = 0.0
        for f in self.factors:
            d = f.shape[0]
            res = max(res, float(np.max(np.abs(f.conj().T @ f - np.eye(d)))))
        return res
