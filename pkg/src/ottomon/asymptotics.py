"""Cycle superoperators, invariant states, spectral gaps and asymptotic rates.

The accumulated effect of one full cycle on the working substance is a 4x4
superoperator; with monitoring it additionally carries partial dephasing at
every contact.  Its fixed point is the engine's periodic asymptotic state and
its second-largest eigenvalue modulus sets the geometric convergence rate of
all per-cycle averages.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .engine import (
    EngineConfig,
    EngineModel,
    LandauZenerStroke,
    LindbladThermo,
    build_model,
    contact_suppression,
    group_heat_transfers,
    group_work_transfers,
    tabulate_cycle_branches,
)
from .qubit import gibbs_population, validate_density_matrix
from .superop import conjugation, dephasing, trace_of_vec, hermitize, vec, unvec
from .thermal import BathSpec, generalized_gibbs

FIXED_POINT_TOL = 1e-10
DEGENERACY_TOL = 1e-9

_KIND_ALIASES = {"RM": "RM", "RC": "RC", "RC1": "RC", "RC2": "RC"}


class DegenerateFixedPointError(ValueError):
    """The cycle map has more than one eigenvalue at 1."""


@dataclass(frozen=True)
class CycleSuperoperator:
    """Matrix of the full-cycle channel acting on column-stacked states."""

    matrix: np.ndarray
    kind: str


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues of a cycle superoperator sorted by decreasing modulus."""

    eigenvalues: np.ndarray
    lambda2: float

    @property
    def lambda1(self) -> float:
        return float(abs(self.eigenvalues[0]))


def _as_model(engine: EngineConfig | EngineModel) -> EngineModel:
    if isinstance(engine, EngineModel):
        return engine
    return build_model(engine)


def build_cycle_superoperator(
    engine: EngineConfig | EngineModel, kind: str
) -> CycleSuperoperator:
    """Compose the four strokes, with contact dephasing for the RM kind.

    The RC kind is the unmonitored cycle channel: the accumulating pointers
    leave the reduced dynamics untouched.  The RM kind damps off-diagonals by
    the pointer overlap factor at each of the four contacts.
    """
    kind = _KIND_ALIASES.get(kind.upper())
    if kind is None:
        raise ValueError("kind must be RM or RC")
    model = _as_model(engine)
    forward = conjugation(model.forward_unitary)
    reverse = conjugation(model.reverse_unitary)
    hot = model.hot_channel.superoperator()
    cold = model.cold_channel.superoperator()
    if kind == "RC":
        matrix = cold @ reverse @ hot @ forward
    else:
        deph_c = dephasing(contact_suppression(model.h_cold.epsilon, model.sigma))
        deph_h = dephasing(contact_suppression(model.h_hot.epsilon, model.sigma))
        matrix = cold @ deph_c @ reverse @ deph_h @ hot @ deph_h @ forward @ deph_c
    return CycleSuperoperator(matrix=matrix, kind=kind)


def spectrum(sop: CycleSuperoperator) -> SpectrumReport:
    """All four eigenvalues and the second-largest modulus."""
    eigvals = np.linalg.eigvals(sop.matrix)
    order = np.argsort(-np.abs(eigvals))
    eigvals = eigvals[order]
    return SpectrumReport(eigenvalues=eigvals, lambda2=float(abs(eigvals[1])))


def invariant_state(sop: CycleSuperoperator) -> np.ndarray:
    """Unit-trace fixed point of the cycle channel.

    Raises :class:`DegenerateFixedPointError` when the eigenvalue 1 is not
    simple (this happens exactly when the cycle contains no dissipation).
    """
    eigvals, eigvecs = np.linalg.eig(sop.matrix)
    near_one = np.abs(eigvals - 1.0) <= DEGENERACY_TOL
    if near_one.sum() > 1:
        raise DegenerateFixedPointError(
            "cycle map has a degenerate eigenvalue 1; no unique invariant state"
        )
    idx = int(np.argmin(np.abs(eigvals - 1.0)))
    if abs(eigvals[idx] - 1.0) > FIXED_POINT_TOL:
        raise RuntimeError(
            f"no eigenvalue at 1 (closest: {eigvals[idx]}); channel is not trace-preserving"
        )
    rho = hermitize(unvec(eigvecs[:, idx]))
    rho /= np.trace(rho).real
    residual = np.abs(unvec(sop.matrix @ vec(rho)) - rho).max()
    if residual > 1e-12:
        raise RuntimeError(f"fixed-point residual {residual:.3e} exceeds 1e-12")
    validate_density_matrix(rho)
    return rho


def initial_state(
    config: EngineConfig, model: EngineModel | None = None
) -> np.ndarray:
    """Resolve the configured initial density matrix.

    ``invariant`` refers to the fixed point of the unmonitored cycle channel,
    the state the engine relaxes to when run without any readout.
    """
    if model is None:
        model = build_model(config)
    if config.init == "invariant":
        return invariant_state(build_cycle_superoperator(model, "RC"))
    if config.init == "custom":
        return config.init_custom.matrix
    thermo = config.thermo
    if config.init == "gibbs_cold":
        d = gibbs_population(thermo.beta_c, config.eps_c)
        return np.array([[1.0 - d, 0.0], [0.0, d]], dtype=complex)
    omega_d = getattr(thermo, "omega_d", 0.2)
    bath = BathSpec(thermo.beta_c, thermo.gamma, omega_d, "cold")
    return generalized_gibbs(bath, model.h_cold).matrix


def asymptotic_work_per_cycle(engine: EngineConfig | EngineModel, kind: str) -> float:
    """Mean work extracted per cycle once the invariant state is reached.

    Sums the per-branch work centers weighted by the branch traces evaluated
    at the fixed point of the corresponding cycle superoperator; the RM kind
    includes the per-contact suppression factors in its branch weights.
    """
    model = _as_model(engine)
    kind = _KIND_ALIASES.get(kind.upper())
    if kind is None:
        raise ValueError("kind must be RM or RC")
    scheme = "RM" if kind == "RM" else "RC2"
    rho = invariant_state(build_cycle_superoperator(model, kind))
    rho_vec = vec(rho)
    groups = group_work_transfers(model, tabulate_cycle_branches(model), scheme)
    total = 0.0 + 0.0j
    for (da, db), op in groups.items():
        center = da * model.h_cold.epsilon + db * model.h_hot.epsilon
        total += center * trace_of_vec(op @ rho_vec)
    if abs(total.imag) > 1e-12:
        raise RuntimeError(f"asymptotic work has imaginary residue {total.imag:.3e}")
    return float(total.real)


def asymptotic_heat_per_cycle(engine: EngineConfig | EngineModel, kind: str) -> float:
    """Mean heat drawn from the hot bath per cycle in the invariant state."""
    model = _as_model(engine)
    kind = _KIND_ALIASES.get(kind.upper())
    if kind is None:
        raise ValueError("kind must be RM or RC")
    scheme = "RM" if kind == "RM" else "RC2"
    rho = invariant_state(build_cycle_superoperator(model, kind))
    rho_vec = vec(rho)
    groups = group_heat_transfers(model, tabulate_cycle_branches(model), scheme)
    total = 0.0 + 0.0j
    for dq, op in groups.items():
        total += dq * model.h_hot.epsilon * trace_of_vec(op @ rho_vec)
    if abs(total.imag) > 1e-12:
        raise RuntimeError(f"asymptotic heat has imaginary residue {total.imag:.3e}")
    return float(total.real)


def theta_from_thermal_duration(t2: float, eps_c: float, eps_h: float) -> float:
    """Invert T2 = theta * (1/eps_h + 1/eps_c) for the dimensionless theta."""
    if t2 <= 0:
        raise ValueError("thermal stroke duration must be positive")
    return t2 * eps_c * eps_h / (eps_c + eps_h)


def thermal_duration_from_theta(theta: float, eps_c: float, eps_h: float) -> float:
    """Total duration of both thermalization strokes for a given theta."""
    return theta * (1.0 / eps_h + 1.0 / eps_c)


def derive_timed_config(config: EngineConfig, t1: float, t2: float) -> EngineConfig:
    """Rebuild a config with stroke durations (t1, t2) driving its parameters.

    A linear-sweep stroke takes its transition probability and phase from t1;
    finite-time thermalization takes its dimensionless duration from t2.
    """
    if t1 <= 0 or t2 <= 0:
        raise ValueError("durations must be positive")
    updates: dict = {}
    if isinstance(config.stroke, LandauZenerStroke):
        updates["stroke"] = LandauZenerStroke(t1=t1)
    if isinstance(config.thermo, LindbladThermo):
        theta = theta_from_thermal_duration(t2, config.eps_c, config.eps_h)
        updates["thermo"] = dataclasses.replace(config.thermo, theta=theta)
    return dataclasses.replace(config, **updates) if updates else config


def asymptotic_power(
    engine: EngineConfig, kind: str, t1: float, t2: float
) -> float:
    """Asymptotic output power -<W>/(T1 + T2); negative values mark a dud."""
    timed = derive_timed_config(engine, t1, t2)
    work = asymptotic_work_per_cycle(timed, kind)
    return -work / (t1 + t2)


def fit_geometric_ratio(
    deviations: np.ndarray, order: int = 3, noise_floor: float | None = None
) -> float:
    """Dominant decay ratio of a (possibly oscillating) geometric tail.

    Fits a linear recurrence of the given order to the sequence and returns
    the largest root modulus, which for a mixture of modes c_i * z_i^n is the
    modulus of the slowest-decaying mode even when it is a complex pair.

    Entries whose magnitude has fallen to the numeric noise floor carry no
    information about the decay and would bias the fit, so the sequence is
    truncated at the first entry below the floor. By default the floor is
    max(1e-12, 1e-9 * max|deviation|).
    """
    d = np.asarray(deviations, dtype=float)
    if noise_floor is None:
        noise_floor = max(1e-12, 1e-9 * float(np.abs(d).max(initial=0.0)))
    below = np.nonzero(np.abs(d) < noise_floor)[0]
    if below.size:
        d = d[: below[0]]
    if d.shape[0] < 3:
        raise ValueError("need at least 3 points above the noise floor")

    # A sequence with fewer active modes than the requested order makes the
    # least-squares system rank-deficient and its minimum-norm recurrence
    # grows spurious roots, so accept the smallest order that already fits.
    best: float | None = None
    best_residual = np.inf
    for k in range(1, order + 1):
        if d.shape[0] < 2 * k + 1:
            break
        rows = np.stack([d[j : j + d.shape[0] - k] for j in range(k)], axis=1)
        target = d[k:]
        coeffs, *_ = np.linalg.lstsq(rows, target, rcond=None)
        residual = np.linalg.norm(target - rows @ coeffs)
        relative = residual / max(np.linalg.norm(target), np.finfo(float).tiny)
        poly = np.concatenate(([1.0], -coeffs[::-1]))
        ratio = float(np.abs(np.roots(poly)).max())
        if relative < 1e-8:
            return ratio
        if relative < best_residual:
            best_residual = relative
            best = ratio
    if best is None:
        raise ValueError("not enough points above the noise floor to fit")
    return best
