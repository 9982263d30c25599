"""Engine configuration and the single-cycle branch decomposition.

A cycle consists of four projective energy contacts interleaved with the two
work strokes and the two thermalization strokes.  Expanding every contact on
both sides of the density matrix yields 2^8 branch operators per cycle; each
branch is stored as a 4x4 superoperator together with its integer work-lattice
increments and its contact mismatch counts, from which every monitoring
scheme's weights follow.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .qubit import (
    StrokeHamiltonian,
    WorkStrokeParams,
    build_forward_unitary,
    build_reverse_unitary,
    gibbs_population,
    landau_zener_params,
    projector,
)
from .superop import sandwich
from .thermal import BathSpec, LindbladMap, PerfectMap, ThermalState, generalized_gibbs

SCHEMES = ("RM", "RC1", "RC2")
INIT_KINDS = ("invariant", "gibbs_cold", "generalized_gibbs_cold", "custom")


@dataclass(frozen=True)
class DirectStroke:
    """Work stroke specified directly by transition probability and phase."""

    alpha: float
    phi: float = 0.0


@dataclass(frozen=True)
class LandauZenerStroke:
    """Work stroke of a linear sweep with total work-stroke duration ``t1``."""

    t1: float


@dataclass(frozen=True)
class PerfectThermo:
    """Perfect thermalization onto fixed target states.

    ``targets`` selects bare Gibbs states, the finite-coupling generalized
    Gibbs states, or explicitly supplied custom states.
    """

    beta_c: float
    beta_h: float
    gamma: float = 0.0
    omega_d: float = 0.2
    targets: str = "gibbs"
    custom_cold: ThermalState | None = None
    custom_hot: ThermalState | None = None

    def __post_init__(self) -> None:
        if self.targets not in ("gibbs", "generalized_gibbs", "custom"):
            raise ValueError("targets must be gibbs, generalized_gibbs or custom")
        if self.targets == "custom" and (
            self.custom_cold is None or self.custom_hot is None
        ):
            raise ValueError("custom targets require custom_cold and custom_hot")


@dataclass(frozen=True)
class LindbladThermo:
    """Imperfect thermalization of dimensionless duration ``theta`` per stroke."""

    beta_c: float
    beta_h: float
    gamma: float
    theta: float

    def __post_init__(self) -> None:
        if self.theta < 0:
            raise ValueError("theta must be non-negative")


@dataclass(frozen=True)
class EngineConfig:
    """Complete set of engine parameters consumed by every computational front end."""

    eps_c: float = 1.0
    eps_h: float = 3.7
    stroke: DirectStroke | LandauZenerStroke = DirectStroke(alpha=0.05, phi=0.0)
    thermo: PerfectThermo | LindbladThermo = LindbladThermo(
        beta_c=0.25, beta_h=0.025, gamma=0.025, theta=8.0
    )
    sigma: float = 0.2
    cycles: int = 1
    scheme: str = "RM"
    init: str = "invariant"
    init_custom: ThermalState | None = None

    def __post_init__(self) -> None:
        if not self.eps_h > self.eps_c > 0:
            raise ValueError("need eps_h > eps_c > 0")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")
        if self.cycles < 1:
            raise ValueError("cycles must be at least 1")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if self.init not in INIT_KINDS:
            raise ValueError(f"init must be one of {INIT_KINDS}")
        if self.init == "custom" and self.init_custom is None:
            raise ValueError("custom init requires init_custom")


@dataclass
class EngineModel:
    """Numeric objects resolved from an :class:`EngineConfig`."""

    config: EngineConfig
    h_cold: StrokeHamiltonian
    h_hot: StrokeHamiltonian
    stroke_params: WorkStrokeParams
    forward_unitary: np.ndarray
    reverse_unitary: np.ndarray
    cold_channel: PerfectMap | LindbladMap
    hot_channel: PerfectMap | LindbladMap

    @property
    def sigma(self) -> float:
        return self.config.sigma


def resolve_stroke_params(config: EngineConfig) -> WorkStrokeParams:
    if isinstance(config.stroke, DirectStroke):
        return WorkStrokeParams(alpha=config.stroke.alpha, phi=config.stroke.phi)
    return landau_zener_params(config.eps_c, config.eps_h, config.stroke.t1)


def perfect_targets(
    thermo: PerfectThermo, h_cold: StrokeHamiltonian, h_hot: StrokeHamiltonian
) -> tuple[ThermalState, ThermalState]:
    if thermo.targets == "custom":
        return thermo.custom_cold, thermo.custom_hot
    if thermo.targets == "gibbs":
        return (
            ThermalState(d=gibbs_population(thermo.beta_c, h_cold.epsilon)),
            ThermalState(d=gibbs_population(thermo.beta_h, h_hot.epsilon)),
        )
    cold_bath = BathSpec(thermo.beta_c, thermo.gamma, thermo.omega_d, "cold")
    hot_bath = BathSpec(thermo.beta_h, thermo.gamma, thermo.omega_d, "hot")
    return generalized_gibbs(cold_bath, h_cold), generalized_gibbs(hot_bath, h_hot)


def build_model(config: EngineConfig) -> EngineModel:
    """Resolve stroke parameters, unitaries and thermal channels."""
    h_cold = StrokeHamiltonian(config.eps_c, "cold")
    h_hot = StrokeHamiltonian(config.eps_h, "hot")
    params = resolve_stroke_params(config)
    if isinstance(config.thermo, PerfectThermo):
        target_cold, target_hot = perfect_targets(config.thermo, h_cold, h_hot)
        cold_channel = PerfectMap(target_cold)
        hot_channel = PerfectMap(target_hot)
    else:
        t = config.thermo
        cold_channel = LindbladMap(BathSpec(t.beta_c, t.gamma, label="cold"), h_cold, t.theta)
        hot_channel = LindbladMap(BathSpec(t.beta_h, t.gamma, label="hot"), h_hot, t.theta)
    return EngineModel(
        config=config,
        h_cold=h_cold,
        h_hot=h_hot,
        stroke_params=params,
        forward_unitary=build_forward_unitary(params),
        reverse_unitary=build_reverse_unitary(params),
        cold_channel=cold_channel,
        hot_channel=hot_channel,
    )


@dataclass(frozen=True)
class CycleBranch:
    """One of the 256 per-cycle contact-outcome branch operators.

    Work centers shift by ``da * eps_c + db * eps_h`` per cycle and heat
    centers by ``-db * eps_h``; ``mismatch_cold``/``mismatch_hot`` count the
    contacts where the two sides of the branch picked different energy levels.
    """

    superoperator: np.ndarray = field(repr=False)
    da: int
    db: int
    da_diff: int
    db_diff: int
    mismatch_cold: int
    mismatch_hot: int

    @property
    def dq(self) -> int:
        return -self.db


def tabulate_cycle_branches(model: EngineModel) -> list[CycleBranch]:
    """Build all 256 single-cycle branch superoperators."""
    proj = (projector(0), projector(1))
    sign = (-1, 1)
    u = model.forward_unitary
    ur = model.reverse_unitary
    hot_sop = model.hot_channel.superoperator()
    cold_sop = model.cold_channel.superoperator()
    branches = []
    for m1, m2, m3, m4 in itertools.product(range(2), repeat=4):
        left_first = proj[m2] @ u @ proj[m1]
        left_second = proj[m4] @ ur @ proj[m3]
        for n1, n2, n3, n4 in itertools.product(range(2), repeat=4):
            right_first = proj[n2] @ u @ proj[n1]
            right_second = proj[n4] @ ur @ proj[n3]
            sop = cold_sop @ sandwich(left_second, right_second) @ hot_sop @ sandwich(
                left_first, right_first
            )
            h1 = (sign[m1] + sign[n1]) // 2
            h2 = (sign[m2] + sign[n2]) // 2
            h3 = (sign[m3] + sign[n3]) // 2
            h4 = (sign[m4] + sign[n4]) // 2
            g1 = (sign[m1] - sign[n1]) // 2
            g2 = (sign[m2] - sign[n2]) // 2
            g3 = (sign[m3] - sign[n3]) // 2
            g4 = (sign[m4] - sign[n4]) // 2
            branches.append(
                CycleBranch(
                    superoperator=sop,
                    da=h4 - h1,
                    db=h2 - h3,
                    da_diff=g4 - g1,
                    db_diff=g2 - g3,
                    mismatch_cold=int(m1 != n1) + int(m4 != n4),
                    mismatch_hot=int(m2 != n2) + int(m3 != n3),
                )
            )
    return branches


def contact_suppression(epsilon: float, sigma: float) -> float:
    """Pointer overlap factor of one mismatched contact at half-gap epsilon."""
    if sigma == 0.0:
        return 0.0
    return float(np.exp(-(epsilon**2) / (2.0 * sigma**2)))


def per_cycle_suppression(model: EngineModel, branch: CycleBranch) -> float:
    """Per-cycle readout suppression of a branch (per-contact scheme)."""
    if branch.mismatch_cold == 0 and branch.mismatch_hot == 0:
        return 1.0
    if model.sigma == 0.0:
        return 0.0
    exponent = (
        branch.mismatch_cold * model.h_cold.epsilon**2
        + branch.mismatch_hot * model.h_hot.epsilon**2
    ) / (2.0 * model.sigma**2)
    return float(np.exp(-exponent))


def group_work_transfers(
    model: EngineModel, branches: list[CycleBranch], scheme: str
) -> dict[tuple[int, int], np.ndarray]:
    """Sum branch superoperators by work-lattice increment (da, db).

    Per-contact suppression weights are included for the per-stroke readout
    scheme and absent for the accumulated-pointer schemes, whose suppression
    reduces to the initial-state fold.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    groups: dict[tuple[int, int], np.ndarray] = {}
    for branch in branches:
        weight = per_cycle_suppression(model, branch) if scheme == "RM" else 1.0
        if weight == 0.0:
            continue
        key = (branch.da, branch.db)
        if key not in groups:
            groups[key] = np.zeros((4, 4), dtype=complex)
        groups[key] += weight * branch.superoperator
    return groups


def group_heat_transfers(
    model: EngineModel, branches: list[CycleBranch], scheme: str
) -> dict[int, np.ndarray]:
    """Sum branch superoperators by heat-lattice increment dq."""
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    groups: dict[int, np.ndarray] = {}
    for branch in branches:
        weight = per_cycle_suppression(model, branch) if scheme == "RM" else 1.0
        if weight == 0.0:
            continue
        if branch.dq not in groups:
            groups[branch.dq] = np.zeros((4, 4), dtype=complex)
        groups[branch.dq] += weight * branch.superoperator
    return groups


def work_variance(scheme: str, cycles: int, sigma: float) -> float:
    """Per-component work variance of the assembled mixture."""
    return 4.0 * cycles * sigma**2 if scheme == "RM" else sigma**2


def heat_variance(scheme: str, cycles: int, sigma: float) -> float:
    """Per-component heat variance of the assembled mixture."""
    return 2.0 * cycles * sigma**2 if scheme == "RM" else sigma**2


def joint_covariance(scheme: str, cycles: int, sigma: float) -> np.ndarray:
    """Shared (work, heat) covariance matrix of the joint mixture components."""
    if scheme == "RM":
        return 2.0 * cycles * sigma**2 * np.array([[2.0, -1.0], [-1.0, 1.0]])
    return sigma**2 * np.eye(2)
