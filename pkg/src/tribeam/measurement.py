"""Detection models for Alice's two placements, the sum-projector control and
the double-slit screen, plus the renormalization rule and the causality audit.

Outcome labels follow the detector regions: ``l`` and ``m`` are the separate
a and b detectors of DA1, ``k`` the interference region of DA2, ``p`` Bob's
detector on arm h, ``screen`` the double-slit screen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from tribeam.errors import ConfigurationError, ContractViolation, NoDetectionError
from tribeam.hilbert import (
    MODES,
    TOL,
    LinearOperator,
    StateVector,
    completeness_deviation,
    expectation,
    ket,
    operator_sum,
    ray_projector,
)
from tribeam.optics import coherent_mode


@dataclass(frozen=True)
class CompleteDA1:
    """Separate detectors on arms a and b (regions l and m)."""


@dataclass(frozen=True)
class CoherentIncompleteDA2:
    """Single detector at region k where a and b meet with relative phase ``phi``."""

    phi: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.phi):
            raise ValueError(f"phi must be finite, got {self.phi}")


@dataclass(frozen=True)
class StandardSumControl:
    """Region k modeled by the incoherent sum ``P_l + P_m`` (no cross terms)."""


@dataclass(frozen=True)
class DoubleSlitScreen:
    """Young screen behind slits on a and b, sampled at ``n_points`` phases."""

    n_points: int = 1024

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ConfigurationError(f"double-slit screen needs n_points >= 2, got {self.n_points}")


MeasurementModel = Union[CompleteDA1, CoherentIncompleteDA2, StandardSumControl, DoubleSlitScreen]


def model_name(model: MeasurementModel) -> str:
    return {
        CompleteDA1: "DA1",
        CoherentIncompleteDA2: "DA2",
        StandardSumControl: "sum-control",
        DoubleSlitScreen: "double-slit",
    }[type(model)]


@dataclass(frozen=True)
class OutcomeDistribution:
    """Unnormalized outcome weights and their renormalized probabilities."""

    outcomes: dict[str, float]
    renorm_beta: float
    probabilities: dict[str, float] = field(init=False)

    def __post_init__(self):
        if not self.renorm_beta > 0:
            raise NoDetectionError("no outcome of the model has nonzero weight")
        if any(w < 0 for w in self.outcomes.values()):
            raise ContractViolation(f"negative outcome weight in {self.outcomes}")
        probs = {x: w / self.renorm_beta for x, w in self.outcomes.items()}
        if abs(sum(probs.values()) - 1.0) > 1e-12:
            raise ContractViolation(f"probabilities sum to {sum(probs.values())!r}")
        object.__setattr__(self, "probabilities", probs)

    @classmethod
    def from_probabilities(cls, probs: dict[str, float]) -> "OutcomeDistribution":
        return cls(dict(probs), 1.0)


# region operators -----------------------------------------------------------

P_L = ray_projector(ket("a"))
P_M = ray_projector(ket("b"))
P_P = ray_projector(ket("h"))


def coherent_projector(phi: float = 0.0) -> LinearOperator:
    """Region-k weight ``(alpha|a> + beta|b>)(alpha*<a| + beta*<b|)``, trace 2."""
    return ray_projector(coherent_mode(phi), normalize=False)


def screen_phases(n_points: int) -> np.ndarray:
    """Relative a-b phase at each screen point: one full period, uniform."""
    if n_points < 2:
        raise ConfigurationError(f"double-slit screen needs n_points >= 2, got {n_points}")
    return 2.0 * np.pi * np.arange(n_points) / n_points


def screen_projectors(n_points: int) -> list[LinearOperator]:
    """Per-point weight operators ``P_k(y) / N`` of the double-slit screen."""
    return [coherent_projector(d) * (1.0 / n_points) for d in screen_phases(n_points)]


def weight_operators(model: MeasurementModel) -> dict[str, list[LinearOperator]]:
    """Operators behind each outcome label; a label may aggregate several."""
    if isinstance(model, CompleteDA1):
        return {"l": [P_L], "m": [P_M], "p": [P_P]}
    if isinstance(model, CoherentIncompleteDA2):
        return {"k": [coherent_projector(model.phi)], "p": [P_P]}
    if isinstance(model, StandardSumControl):
        return {"k": [P_L + P_M], "p": [P_P]}
    if isinstance(model, DoubleSlitScreen):
        return {"screen": screen_projectors(model.n_points), "p": [P_P]}
    raise TypeError(f"unknown measurement model {model!r}")


def model_completeness_deviation(model: MeasurementModel) -> float:
    ops = [op for group in weight_operators(model).values() for op in group]
    return completeness_deviation(ops)


def _require_normalized(state: StateVector) -> None:
    if state.labels != MODES:
        raise ContractViolation(f"state must be on the beam modes {MODES}, got {state.labels}")
    if not state.is_normalized():
        raise ContractViolation(f"state is not normalized (norm^2 = {state.norm() ** 2!r})")


def outcome_distribution(state: StateVector, model: MeasurementModel, tol: float = TOL) -> OutcomeDistribution:
    """Weights of each outcome and the renormalized probabilities.

    Complete operator sets leave ``renorm_beta = 1``. Incomplete sets (the
    coherent region-k weight) take ``renorm_beta`` as the sum of the weights.
    """
    _require_normalized(state)
    groups = weight_operators(model)
    weights = {}
    for label, ops in groups.items():
        w = sum(expectation(op, state) for op in ops)
        # clip roundoff below zero (e.g. the dark fringe at phi = pi)
        weights[label] = 0.0 if -tol < w < 0.0 else w
    if model_completeness_deviation(model) <= tol:
        beta = 1.0
    else:
        beta = sum(weights.values())
    if beta <= 0.0:
        raise NoDetectionError(f"state has zero weight on every outcome of {model_name(model)}")
    return OutcomeDistribution(weights, beta)


def bob_rate(state: StateVector, model: MeasurementModel, input_rate: float = 1.0) -> float:
    """Count rate at Bob's detector on arm h."""
    if not input_rate > 0:
        raise ContractViolation(f"input rate must be positive, got {input_rate}")
    return input_rate * outcome_distribution(state, model).probabilities["p"]


@dataclass(frozen=True)
class ScreenPattern:
    phases: np.ndarray
    intensities: np.ndarray
    integrated_weight: float


def double_slit_screen(state: StateVector, n_points: int) -> ScreenPattern:
    """Fringe intensity per screen point and its sum over the screen.

    For balanced a/b amplitudes the per-point value is ``(1 + cos delta) / (2N)``
    times the a/b population; the sum reproduces ``<P_l + P_m>``.
    """
    phases = screen_phases(n_points)
    ops = screen_projectors(n_points)
    intens = np.array([expectation(op, state) for op in ops])
    return ScreenPattern(phases, intens, float(intens.sum()))


def screen_completeness_deviation(n_points: int) -> float:
    """Frobenius distance between the summed screen operators and ``P_l + P_m``."""
    total = operator_sum(screen_projectors(n_points))
    return float(np.linalg.norm(total.matrix - (P_L + P_M).matrix, "fro"))


@dataclass(frozen=True)
class CausalityAudit:
    """Counterfactual bookkeeping when Bob's rate is pinned to its DA1 value."""

    alice_weight: float
    bob_pinned_weight: float
    total: float
    excess: float
    violates_conservation: bool


def causality_audit(state: StateVector, phi: float = 0.0, input_rate: float = 1.0, tol: float = TOL) -> CausalityAudit:
    """Total output if Alice keeps her unrenormalized region-k weight while
    Bob keeps his complete-basis rate. Any excess over the input rate would
    break energy conservation."""
    _require_normalized(state)
    alice = max(expectation(coherent_projector(phi), state), 0.0)
    bob = expectation(P_P, state)
    total = input_rate * (alice + bob)
    excess = total - input_rate
    return CausalityAudit(
        alice_weight=input_rate * alice,
        bob_pinned_weight=input_rate * bob,
        total=total,
        excess=excess,
        violates_conservation=excess > tol * input_rate,
    )
