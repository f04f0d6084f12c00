"""Construction of local GKLS generators for bath-coupled subsystem networks.

The modified local generator acts as

    d rho / dt = -i [H_s + alpha * F(H_int), rho] + beta^2 * sum_i D_i[rho]

where H_s is the sum of embedded subsystem Hamiltonians, F is the secular
filter keeping only the part of the interaction that commutes with H_s, and
each D_i is a GKLS dissipator whose jump operators are the Bohr components of
bath i's coupling operator in its own subsystem eigenbasis, embedded into the
product space. The naive variant keeps the full interaction in the
commutator; its dissipators are identical.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import isqrt, prod

import numpy as np

from .baths import BathSpec, rate
from .errors import DenseSpectrumError, DimensionMismatchError
from .linalg import embed, hermitian_eig, kron, require_hermitian, require_square
from .spectral import (
    EnergyLevels,
    decompose_operator,
    default_grouping_tol,
    group_levels,
    secular_filter,
    sparse_spectrum_diagnostics,
    SpectrumDiagnostics,
)

log = logging.getLogger("lindloc")


@dataclass(frozen=True)
class Subsystem:
    label: str
    hamiltonian: np.ndarray
    dim: int

    def __post_init__(self):
        d = require_square(self.hamiltonian, f"subsystem {self.label!r} Hamiltonian")
        if d != self.dim:
            raise DimensionMismatchError(
                f"subsystem {self.label!r}: Hamiltonian is {d}x{d} but dim = {self.dim}"
            )
        require_hermitian(self.hamiltonian, name=f"subsystem {self.label!r} Hamiltonian")


@dataclass
class SystemSpec:
    """A network of subsystems, their couplings, and one bath per subsystem."""

    subsystems: list[Subsystem]
    interactions: list[np.ndarray]
    alpha: float
    baths: list[BathSpec]
    beta_coupling: float
    grouping_tol: float | None = None

    def __post_init__(self):
        if not self.subsystems:
            raise DimensionMismatchError("a system needs at least one subsystem")
        if self.alpha < 0.0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha!r}")
        if self.beta_coupling < 0.0:
            raise ValueError(f"beta_coupling must be >= 0, got {self.beta_coupling!r}")
        if len(self.baths) != len(self.subsystems):
            raise DimensionMismatchError(
                f"{len(self.baths)} baths for {len(self.subsystems)} subsystems; "
                "baths pair one-to-one with subsystems"
            )
        full = self.dimension
        for k, h in enumerate(self.interactions):
            d = require_square(h, f"interaction term {k}")
            if d != full:
                raise DimensionMismatchError(
                    f"interaction term {k} has dimension {d}, full space has {full}"
                )
            require_hermitian(h, name=f"interaction term {k}")
        for sub, bath in zip(self.subsystems, self.baths):
            d = bath.coupling_op.shape[0]
            if d != sub.dim:
                raise DimensionMismatchError(
                    f"bath {bath.label!r} coupling op has dimension {d}, "
                    f"subsystem {sub.label!r} has {sub.dim}"
                )
        if self.grouping_tol is not None and self.grouping_tol <= 0.0:
            raise ValueError(f"grouping_tol must be positive, got {self.grouping_tol!r}")

    @property
    def dims(self) -> list[int]:
        return [s.dim for s in self.subsystems]

    @property
    def dimension(self) -> int:
        return prod(self.dims)

    def free_hamiltonian(self) -> np.ndarray:
        """Sum of the embedded subsystem Hamiltonians."""
        dims = self.dims
        h = np.zeros((self.dimension, self.dimension), dtype=complex)
        for k, sub in enumerate(self.subsystems):
            h = h + embed(sub.hamiltonian, k, dims)
        return h

    def interaction_sum(self) -> np.ndarray:
        h = np.zeros((self.dimension, self.dimension), dtype=complex)
        for term in self.interactions:
            h = h + term
        return h


@dataclass(frozen=True)
class Channel:
    """One jump operator with its (beta^2-scaled) rate."""

    omega: float
    op: np.ndarray
    rate: float
    op_dag: np.ndarray = field(repr=False)
    op_dag_op: np.ndarray = field(repr=False)


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Column-stack a matrix: [[a, b], [c, d]] -> (a, c, b, d)."""
    require_square(rho, "state")
    return np.asarray(rho, dtype=complex).flatten(order="F")


def unvectorize(v: np.ndarray) -> np.ndarray:
    """Inverse of vectorize."""
    v = np.asarray(v)
    if v.ndim != 1:
        raise DimensionMismatchError(f"expected a vector, got shape {v.shape}")
    d = isqrt(v.size)
    if d * d != v.size:
        raise DimensionMismatchError(f"vector length {v.size} is not a perfect square")
    return v.reshape((d, d), order="F")


def _hamiltonian_superop(h: np.ndarray) -> np.ndarray:
    """Matrix of -i [h, .] under column stacking."""
    eye = np.eye(h.shape[0], dtype=complex)
    return -1j * (np.kron(eye, h) - np.kron(h.T, eye))


def _dissipator_superop(ch: Channel) -> np.ndarray:
    eye = np.eye(ch.op.shape[0], dtype=complex)
    return ch.rate * (
        np.kron(ch.op.conj(), ch.op)
        - 0.5 * np.kron(eye, ch.op_dag_op)
        - 0.5 * np.kron(ch.op_dag_op.T, eye)
    )


class Generator:
    """A built local generator: Hamiltonian pieces plus per-bath jump channels.

    apply() evaluates the full generator on a matrix; apply_partial() leaves
    out the interaction commutator (the partial generator whose fixed point
    is the product of local Gibbs states). Dense superoperator matrices are
    built on first use and cached.
    """

    def __init__(
        self,
        spec: SystemSpec,
        kind: str,
        h_free: np.ndarray,
        h_interaction: np.ndarray,
        channels: list[list[Channel]],
        levels: EnergyLevels,
        diagnostics: SpectrumDiagnostics | None,
    ):
        self.spec = spec
        self.kind = kind
        self.h_free = h_free
        self.h_interaction = h_interaction  # already scaled by alpha
        self.channels = channels
        self.levels = levels
        self.diagnostics = diagnostics
        self._superop: np.ndarray | None = None
        self._partial_superop: np.ndarray | None = None
        self._h_total = h_free + h_interaction

    @property
    def dimension(self) -> int:
        return self.h_free.shape[0]

    @property
    def hamiltonian(self) -> np.ndarray:
        """H_s plus the (filtered or full) interaction term."""
        return self._h_total

    def dissipator(self, bath_index: int, rho: np.ndarray) -> np.ndarray:
        """beta^2-scaled dissipator of one bath applied to a matrix."""
        out = np.zeros_like(rho, dtype=complex)
        for ch in self.channels[bath_index]:
            sandwich = ch.op @ rho @ ch.op_dag
            anti = ch.op_dag_op @ rho + rho @ ch.op_dag_op
            out = out + ch.rate * (sandwich - 0.5 * anti)
        return out

    def _check_dim(self, rho: np.ndarray) -> None:
        if rho.shape != (self.dimension, self.dimension):
            raise DimensionMismatchError(
                f"state shape {rho.shape} does not match generator dimension {self.dimension}"
            )

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Full generator action on a matrix (need not be a state)."""
        self._check_dim(rho)
        h = self._h_total
        out = -1j * (h @ rho - rho @ h)
        for i in range(len(self.channels)):
            out = out + self.dissipator(i, rho)
        return out

    def apply_partial(self, rho: np.ndarray) -> np.ndarray:
        """Generator action without the interaction commutator."""
        self._check_dim(rho)
        h = self.h_free
        out = -1j * (h @ rho - rho @ h)
        for i in range(len(self.channels)):
            out = out + self.dissipator(i, rho)
        return out

    def _dissipator_matrix(self) -> np.ndarray:
        d2 = self.dimension**2
        m = np.zeros((d2, d2), dtype=complex)
        for channels in self.channels:
            for ch in channels:
                m = m + _dissipator_superop(ch)
        return m

    @property
    def superop(self) -> np.ndarray:
        if self._superop is None:
            diss = self._dissipator_matrix()
            self._superop = _hamiltonian_superop(self._h_total) + diss
            self._partial_superop = _hamiltonian_superop(self.h_free) + diss
        return self._superop

    @property
    def partial_superop(self) -> np.ndarray:
        if self._partial_superop is None:
            self.superop
        return self._partial_superop

    def superop_inf_norm(self) -> float:
        return float(np.abs(self.superop).sum(axis=1).max())

    def min_rate(self) -> float:
        """Smallest scaled channel rate; +inf when there are no channels."""
        rates = [ch.rate for channels in self.channels for ch in channels]
        return min(rates) if rates else float("inf")


def apply(gen: Generator, rho: np.ndarray) -> np.ndarray:
    return gen.apply(rho)


def _bath_channels(spec: SystemSpec) -> list[list[Channel]]:
    dims = spec.dims
    per_bath: list[list[Channel]] = []
    for index, (sub, bath) in enumerate(zip(spec.subsystems, spec.baths)):
        local_eig = hermitian_eig(sub.hamiltonian)
        tol = spec.grouping_tol or default_grouping_tol(local_eig.eigenvalues)
        local_levels = group_levels(local_eig, tol)
        decomp = decompose_operator(bath.coupling_op, local_levels)
        channels = []
        for omega, comp in decomp.terms:
            g = rate(omega, bath)
            if g == 0.0:
                continue
            op = embed(comp, index, dims)
            op_dag = op.conj().T
            channels.append(
                Channel(
                    omega=omega,
                    op=op,
                    rate=spec.beta_coupling**2 * g,
                    op_dag=op_dag,
                    op_dag_op=op_dag @ op,
                )
            )
        per_bath.append(channels)
    return per_bath


def _build(spec: SystemSpec, filtered: bool) -> Generator:
    h_free = spec.free_hamiltonian()
    eig = hermitian_eig(h_free)
    tol = spec.grouping_tol or default_grouping_tol(eig.eigenvalues)
    levels = group_levels(eig, tol)

    diagnostics = None
    strength = max(spec.alpha, spec.beta_coupling)
    if strength > 0.0:
        diagnostics = sparse_spectrum_diagnostics(levels, strength)
        if diagnostics.status == "FAIL":
            raise DenseSpectrumError(
                "Bohr spectrum too dense for the coupling: min nonzero frequency "
                f"{diagnostics.min_nonzero_frequency:.3e}, min spacing "
                f"{diagnostics.min_frequency_spacing:.3e}, coupling {strength:.3e}"
            )
        if diagnostics.status == "WARN":
            log.warning(
                "Bohr spectrum margin is thin: min(frequency, spacing)/coupling = %.3g",
                min(diagnostics.frequency_ratio, diagnostics.spacing_ratio),
            )

    h_int_bare = spec.interaction_sum()
    if filtered:
        h_int = spec.alpha * secular_filter(h_int_bare, levels)
        kind = "modified"
    else:
        h_int = spec.alpha * h_int_bare
        kind = "naive"

    return Generator(
        spec=spec,
        kind=kind,
        h_free=h_free,
        h_interaction=h_int,
        channels=_bath_channels(spec),
        levels=levels,
        diagnostics=diagnostics,
    )


def build_modified_local(spec: SystemSpec) -> Generator:
    """Local generator with the secular-filtered interaction commutator."""
    return _build(spec, filtered=True)


def build_naive_local(spec: SystemSpec) -> Generator:
    """Baseline local generator keeping the full interaction commutator."""
    return _build(spec, filtered=False)


def product_gibbs(spec: SystemSpec) -> np.ndarray:
    """Tensor product of local Gibbs states at each bath's temperature."""
    factors = []
    for sub, bath in zip(spec.subsystems, spec.baths):
        es = hermitian_eig(sub.hamiltonian)
        w = -bath.beta * es.eigenvalues
        w = w - w.max()  # avoid overflow; normalization removes the shift
        p = np.exp(w)
        p = p / p.sum()
        v = es.eigenvectors
        factors.append((v * p) @ v.conj().T)
    return kron(*factors) if len(factors) > 1 else factors[0]
