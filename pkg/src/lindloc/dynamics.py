"""Time evolution and steady states of built generators.

Evolution uses classical fixed-step fourth-order Runge-Kutta. Because the
generator is linear, one RK4 step is exactly the matrix

    S = I + h L + (h L)^2 / 2 + (h L)^3 / 6 + (h L)^4 / 24

applied to the column-stacked state, so strides between recorded points are
taken as matrix powers of S. Steady states come from the SVD null space of
the dense superoperator.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConfigError,
    DimensionMismatchError,
    IntegrationError,
    LindlocError,
    NonUniqueSteadyStateError,
    PositivityError,
)
from .linalg import hermiticity_defect, max_abs
from .liouvillian import Generator, unvectorize, vectorize

log = logging.getLogger("lindloc")

# dt * ||L||_inf above this risks RK4 instability.
STABILITY_LIMIT = 0.1
# Singular values below this fraction of the largest count as null directions.
NULL_SCALE = 1e-10
# Smallest acceptable ratio between the two smallest singular values.
SEPARATION_FACTOR = 1e3


@dataclass(frozen=True)
class SolverConfig:
    dt: float
    t_max: float
    record_stride: int = 1
    positivity_tol: float = 1e-9

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ConfigError(f"dt must be positive, got {self.dt!r}")
        if self.t_max <= 0.0:
            raise ConfigError(f"t_max must be positive, got {self.t_max!r}")
        if self.record_stride < 1:
            raise ConfigError(f"record_stride must be >= 1, got {self.record_stride!r}")
        if self.positivity_tol < 0.0:
            raise ConfigError(f"positivity_tol must be >= 0, got {self.positivity_tol!r}")


@dataclass
class Trajectory:
    """Recorded times and states; thermodynamic reports are attached separately."""

    times: np.ndarray
    states: list[np.ndarray]
    reports: list | None = None

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class SteadyStateResult:
    rho_ss: np.ndarray
    residual: float
    null_dim: int
    singular_values: np.ndarray = field(repr=False)


def rk4_step_matrix(superop: np.ndarray, dt: float) -> np.ndarray:
    """One fixed-step RK4 update as a matrix: degree-4 Taylor polynomial of exp(dt L)."""
    a = dt * superop
    eye = np.eye(a.shape[0], dtype=complex)
    s = eye + 0.25 * a
    s = eye + (a @ s) / 3.0
    s = eye + 0.5 * (a @ s)
    return eye + a @ s


def _check_density_matrix(rho: np.ndarray, dim: int, positivity_tol: float, where: str) -> None:
    if rho.shape != (dim, dim):
        raise DimensionMismatchError(
            f"{where}: state shape {rho.shape} does not match generator dimension {dim}"
        )
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > 1e-8:
        raise IntegrationError(f"{where}: trace {tr!r} deviates from 1 beyond 1e-8")
    if max_abs(rho - rho.conj().T) > 1e-9:
        raise IntegrationError(f"{where}: state is not Hermitian within 1e-9")
    lo = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if lo < -positivity_tol:
        raise IntegrationError(
            f"{where}: positivity violated, min eigenvalue {lo:.3e} < -{positivity_tol:.1e}"
        )


def evolve(gen: Generator, rho0: np.ndarray, config: SolverConfig) -> Trajectory:
    """Integrate d rho / dt = L[rho] from rho0, recording every record_stride steps.

    Recorded states are checked for trace, Hermiticity, and positivity;
    violations raise IntegrationError with the offending time.
    """
    d = gen.dimension
    _check_density_matrix(rho0, d, config.positivity_tol, "initial state")

    norm = gen.superop_inf_norm()
    if config.dt * norm > STABILITY_LIMIT:
        raise ConfigError(
            f"dt = {config.dt!r} too large for stability: dt * ||L||_inf = "
            f"{config.dt * norm:.3e} exceeds {STABILITY_LIMIT}"
        )
    alpha = gen.spec.alpha
    if alpha > 0.0 and config.t_max >= STABILITY_LIMIT / alpha**2:
        log.warning(
            "t_max = %.3g reaches the weak-coupling validity window ~%.3g = 0.1/alpha^2; "
            "long-time results should be read as the generator's own dynamics",
            config.t_max,
            STABILITY_LIMIT / alpha**2,
        )

    n_steps = max(1, int(round(config.t_max / config.dt)))
    step_matrix = rk4_step_matrix(gen.superop, config.dt)
    stride = min(config.record_stride, n_steps)
    stride_matrix = np.linalg.matrix_power(step_matrix, stride)

    v = vectorize(np.asarray(rho0, dtype=complex))
    times = [0.0]
    states = [unvectorize(v.copy())]
    step = 0
    while step < n_steps:
        jump = min(stride, n_steps - step)
        if jump == stride:
            v = stride_matrix @ v
        else:
            v = np.linalg.matrix_power(step_matrix, jump) @ v
        step += jump
        t = step * config.dt
        rho = unvectorize(v)
        _check_density_matrix(rho, d, config.positivity_tol, f"t = {t:.6g}")
        times.append(t)
        states.append(rho.copy())
    return Trajectory(times=np.array(times), states=states)


def steady_state(gen: Generator) -> SteadyStateResult:
    """Null-space steady state of the generator via SVD.

    Raises NonUniqueSteadyStateError when more than one singular value is
    numerically zero; logs a warning when the smallest two singular values
    are separated by less than SEPARATION_FACTOR.
    """
    m = gen.superop
    _, s, vh = np.linalg.svd(m)
    s_max = float(s[0])
    if s_max == 0.0:
        raise NonUniqueSteadyStateError(len(s))
    null_tol = NULL_SCALE * s_max
    null_dim = int(np.count_nonzero(s <= null_tol))
    if null_dim > 1:
        raise NonUniqueSteadyStateError(null_dim)
    if s[-1] > 0.0 and s[-2] / s[-1] < SEPARATION_FACTOR:
        log.warning(
            "steady state may be ill-conditioned: smallest singular values "
            "%.3e and %.3e are separated by less than a factor %g",
            s[-2],
            s[-1],
            SEPARATION_FACTOR,
        )

    raw = unvectorize(vh[-1].conj())
    rho = 0.5 * (raw + raw.conj().T)
    tr = float(np.trace(rho).real)
    if abs(tr) < 1e-10:
        raise LindlocError(
            "null vector is traceless; no normalizable steady state in this direction"
        )
    rho = rho / tr

    lo = float(np.linalg.eigvalsh(rho).min())
    if lo < -1e-9:
        raise PositivityError(
            f"steady-state candidate has eigenvalue {lo:.3e} below -1e-9"
        )
    if hermiticity_defect(rho) > 1e-9:
        raise LindlocError("steady-state candidate failed the Hermiticity check")

    residual = max_abs(gen.apply(rho))
    if residual > 1e-8:
        raise LindlocError(
            f"steady-state residual {residual:.3e} exceeds 1e-8; generator may be defective"
        )
    return SteadyStateResult(rho_ss=rho, residual=residual, null_dim=null_dim, singular_values=s)


def relaxation_time(gen: Generator) -> float:
    """Crude relaxation timescale: inverse of the smallest scaled channel rate."""
    r = gen.min_rate()
    return 1.0 / r if np.isfinite(r) and r > 0.0 else float("inf")
