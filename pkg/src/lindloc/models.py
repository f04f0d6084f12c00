"""Ready-made SystemSpec builders for qubit networks.

Each qubit has H = (E/2) sigma_z, couples to its neighbours through
sigma_x sigma_x terms, and sees its own bath through sigma_x. Temperatures
are entered as T and stored as beta = 1/T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .baths import BathSpec, SpectralModel
from .errors import DimensionMismatchError
from .linalg import SIGMA_X, SIGMA_Z, embed
from .liouvillian import Subsystem, SystemSpec

DEFAULT_SPECTRAL = SpectralModel(kind="flat", coupling_scale=1.0 / (2.0 * math.pi))


def _qubit(label: str, energy: float) -> Subsystem:
    return Subsystem(label=label, hamiltonian=0.5 * energy * SIGMA_Z, dim=2)


@dataclass(frozen=True)
class TwoQubitParams:
    e1: float = 1.0
    e2: float = 1.0
    alpha: float = 0.01
    beta_coupling: float = 0.01
    t1: float = 2.0
    t2: float = 1.0
    spectral: SpectralModel = DEFAULT_SPECTRAL
    grouping_tol: float | None = None

    def __post_init__(self):
        for name in ("e1", "e2", "t1", "t2", "beta_coupling"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if self.alpha < 0.0:
            raise ValueError("alpha must be >= 0")


def two_qubit_model(params: TwoQubitParams) -> SystemSpec:
    """Two bath-contacted qubits exchanging energy through sigma_x sigma_x."""
    subs = [_qubit("q1", params.e1), _qubit("q2", params.e2)]
    dims = [2, 2]
    interaction = embed(SIGMA_X, 0, dims) @ embed(SIGMA_X, 1, dims)
    baths = [
        BathSpec.from_temperature("b1", params.t1, params.spectral, SIGMA_X),
        BathSpec.from_temperature("b2", params.t2, params.spectral, SIGMA_X),
    ]
    return SystemSpec(
        subsystems=subs,
        interactions=[interaction],
        alpha=params.alpha,
        baths=baths,
        beta_coupling=params.beta_coupling,
        grouping_tol=params.grouping_tol,
    )


def single_qubit_model(
    energy: float = 1.0,
    temperature: float = 1.0,
    spectral: SpectralModel = DEFAULT_SPECTRAL,
    beta_coupling: float = 0.01,
    grouping_tol: float | None = None,
) -> SystemSpec:
    """One qubit thermalizing against one bath; no interactions, alpha = 0."""
    if energy <= 0.0:
        raise ValueError("energy must be strictly positive")
    return SystemSpec(
        subsystems=[_qubit("q1", energy)],
        interactions=[],
        alpha=0.0,
        baths=[BathSpec.from_temperature("b1", temperature, spectral, SIGMA_X)],
        beta_coupling=beta_coupling,
        grouping_tol=grouping_tol,
    )


MAX_CHAIN_LENGTH = 8  # keeps the superoperator at or below 65536 rows


def qubit_chain_model(
    n: int,
    energies: list[float],
    temperatures: list[float],
    alpha: float = 0.01,
    beta_coupling: float = 0.01,
    spectral: SpectralModel = DEFAULT_SPECTRAL,
    grouping_tol: float | None = None,
) -> SystemSpec:
    """Open chain of n qubits with nearest-neighbour sigma_x sigma_x couplings."""
    if n < 1:
        raise ValueError(f"chain length must be >= 1, got {n}")
    if n > MAX_CHAIN_LENGTH:
        raise DimensionMismatchError(
            f"chain length {n} exceeds the supported maximum {MAX_CHAIN_LENGTH}"
        )
    if len(energies) != n or len(temperatures) != n:
        raise DimensionMismatchError(
            f"need {n} energies and {n} temperatures, got {len(energies)} and {len(temperatures)}"
        )
    subs = [_qubit(f"q{k + 1}", energies[k]) for k in range(n)]
    dims = [2] * n
    interactions = [
        embed(SIGMA_X, k, dims) @ embed(SIGMA_X, k + 1, dims) for k in range(n - 1)
    ]
    baths = [
        BathSpec.from_temperature(f"b{k + 1}", temperatures[k], spectral, SIGMA_X)
        for k in range(n)
    ]
    return SystemSpec(
        subsystems=subs,
        interactions=interactions,
        alpha=alpha,
        baths=baths,
        beta_coupling=beta_coupling,
        grouping_tol=grouping_tol,
    )
