"""Dense complex linear algebra helpers shared by every other module.

States and operators are plain numpy arrays of dtype complex. Eigenbases of
Hermitian matrices come from LAPACK via numpy.linalg.eigh and are always
sorted by ascending eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import DimensionMismatchError, NonHermitianError, PositivityError

# -- constant single-qubit operators ----------------------------------------

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def hermitize(m: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (m + m†)/2."""
    return 0.5 * (m + m.conj().T)


def max_abs(m: np.ndarray) -> float:
    """Largest entry magnitude; zero for empty input."""
    return float(np.abs(m).max()) if m.size else 0.0


def hermiticity_defect(m: np.ndarray) -> float:
    """max |m - m†| relative to the largest entry of m."""
    scale = max_abs(m)
    if scale == 0.0:
        return 0.0
    return max_abs(m - m.conj().T) / scale


def require_square(m: np.ndarray, name: str = "matrix") -> int:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {m.shape}")
    return m.shape[0]


def require_hermitian(m: np.ndarray, tol: float = 1e-10, name: str = "matrix") -> None:
    require_square(m, name)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NonHermitianError(
            f"{name} is not Hermitian: relative asymmetry {defect:.3e} exceeds {tol:.1e}"
        )


def kron(a: np.ndarray, *rest: np.ndarray) -> np.ndarray:
    """Kronecker product of two or more operators, left to right."""
    out = np.asarray(a, dtype=complex)
    for b in rest:
        out = np.kron(out, b)
    return out


def embed(op: np.ndarray, index: int, dims: list[int]) -> np.ndarray:
    """Lift a single-factor operator into the full tensor-product space.

    `op` acts on factor `index` of a product space with factor dimensions
    `dims`; identities fill the remaining slots.
    """
    if not 0 <= index < len(dims):
        raise DimensionMismatchError(
            f"factor index {index} out of range for {len(dims)} factors"
        )
    d = require_square(op, f"operator for factor {index}")
    if d != dims[index]:
        raise DimensionMismatchError(
            f"operator for factor {index} has dimension {d}, expected {dims[index]}"
        )
    before = prod(dims[:index])
    after = prod(dims[index + 1 :])
    return kron(np.eye(before, dtype=complex), op, np.eye(after, dtype=complex))


def partial_trace(rho: np.ndarray, dims: list[int], keep: list[int]) -> np.ndarray:
    """Trace out all tensor factors not listed in `keep`.

    The result is ordered by the kept factors in their original order, and
    satisfies trace(result) == trace(rho).
    """
    dims = list(dims)
    n = len(dims)
    full = prod(dims)
    if rho.shape != (full, full):
        raise DimensionMismatchError(
            f"state has shape {rho.shape} but factor dimensions {dims} imply {full}"
        )
    keep = sorted(set(keep))
    if not keep:
        raise DimensionMismatchError("keep must name at least one factor")
    for k in keep:
        if not 0 <= k < n:
            raise DimensionMismatchError(f"keep names factor {k}, valid range 0..{n - 1}")

    t = rho.reshape(dims + dims)
    removed = 0
    for ax in sorted(set(range(n)) - set(keep), reverse=True):
        t = np.trace(t, axis1=ax, axis2=ax + n - removed)
        removed += 1
    d_keep = prod(dims[k] for k in keep)
    return t.reshape(d_keep, d_keep)


@dataclass(frozen=True)
class HermitianEigenSystem:
    """Eigenvalues (ascending, real) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        v, w = self.eigenvectors, self.eigenvalues
        return (v * w) @ v.conj().T


def hermitian_eig(h: np.ndarray, tol: float = 1e-10) -> HermitianEigenSystem:
    """Diagonalize a Hermitian matrix; rejects non-Hermitian input."""
    require_hermitian(h, tol=tol, name="eigensolver input")
    w, v = np.linalg.eigh(h)
    return HermitianEigenSystem(eigenvalues=w, eigenvectors=v)


def herm_exp(h: np.ndarray) -> np.ndarray:
    """exp(h) for Hermitian h via its eigendecomposition."""
    es = hermitian_eig(h)
    v = es.eigenvectors
    return (v * np.exp(es.eigenvalues)) @ v.conj().T


def von_neumann_entropy(rho: np.ndarray, positivity_tol: float = 1e-9) -> float:
    """-tr(rho ln rho) in nats, with 0 ln 0 taken as 0.

    Eigenvalues in [-positivity_tol, 0) are clipped to zero; anything more
    negative raises PositivityError.
    """
    require_hermitian(rho, tol=1e-8, name="density matrix")
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > 1e-8:
        raise DimensionMismatchError(f"density matrix trace {tr!r} is not 1 within 1e-8")
    p = np.linalg.eigvalsh(rho)
    if p.min() < -positivity_tol:
        raise PositivityError(
            f"density matrix has eigenvalue {p.min():.3e} below -{positivity_tol:.1e}"
        )
    p = np.clip(p, 0.0, None)
    nz = p[p > 0.0]
    return float(-(nz * np.log(nz)).sum())
