"""Interferometer output state, detector field modes, and the weak-source
first-order correlation engine.

Beams are idealized as top-hat profiles: amplitude is uniform across the
width, so every z-integral reduces to ``|amplitude|**2 * width``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from tribeam.circuitspec import DEFAULT_FOLD_ANGLE, CircuitSpec
from tribeam.errors import BasisMismatchError, ConfigurationError
from tribeam.hilbert import (
    FOCK_MODES,
    MODES,
    LinearOperator,
    StateVector,
    expectation,
    ket,
    ray_projector,
)

DEFAULT_EPSILON = 0.01


@dataclass(frozen=True)
class BeamGeometry:
    """Beam width ``w`` and the fold angle of the outer mirrors (degrees).

    Region k is the footprint of a beam folded by ``fold_angle``; its vertical
    extent is ``w * sec(90 - fold_angle)``, i.e. ``w sec 30`` for the 60
    degree mirrors of the reference setup.
    """

    w: float = 1.0
    fold_angle: float = DEFAULT_FOLD_ANGLE

    def __post_init__(self):
        if not self.w > 0:
            raise ValueError(f"beam width must be positive, got {self.w}")
        if not 0.0 < self.fold_angle < 90.0:
            raise ValueError(f"fold_angle must lie in (0, 90) degrees, got {self.fold_angle}")

    @property
    def w_prime(self) -> float:
        return self.w / math.cos(math.radians(90.0 - self.fold_angle))

    @property
    def lambda_(self) -> float:
        return 1.0 / math.sqrt(self.w)

    @property
    def lambda_prime(self) -> float:
        return 1.0 / math.sqrt(self.w_prime)

    def width(self, mode: str) -> float:
        """Integration width of the detector region seen by ``mode``."""
        return self.w if mode == "h" else self.w_prime


@dataclass(frozen=True)
class WeakSourceState:
    """``|vac> + epsilon * sum_X c_X |X>`` truncated at one photon.

    ``excitation`` holds the relative amplitudes ``c_X``; for the reference
    circuit these are ``(1, 1, sqrt 2)`` on ``(a, b, h)``.
    """

    epsilon: float = DEFAULT_EPSILON
    excitation: StateVector = field(
        default_factory=lambda: StateVector(MODES, [1.0, 1.0, math.sqrt(2.0)])
    )

    @classmethod
    def from_output_state(cls, psi: StateVector, epsilon: float = DEFAULT_EPSILON) -> "WeakSourceState":
        # c = 2 psi reproduces (1, 1, sqrt 2) from (1/2, 1/2, 1/sqrt 2)
        return cls(epsilon=epsilon, excitation=2.0 * psi)

    def as_state_vector(self) -> StateVector:
        """Unnormalized vector on ``(vac, a, b, h)``."""
        amps = {"vac": 1.0}
        amps.update({x: self.epsilon * c for x, c in self.excitation.as_dict().items()})
        return StateVector.from_dict(amps, FOCK_MODES)


@dataclass(frozen=True)
class PathConfig:
    """Wavenumber, per-leg path lengths to the detector, and the extra phase
    ``phi`` of the phase shifter on leg a."""

    k: float = 2.0 * math.pi
    path_lengths: Mapping[str, float] = field(default_factory=lambda: {"a": 0.0, "b": 0.0, "h": 0.0})
    phi: float = 0.0

    @classmethod
    def from_circuit(cls, circuit: CircuitSpec) -> "PathConfig":
        # unit wavelength; the compensator residual is the a-b path difference
        return cls(
            k=2.0 * math.pi,
            path_lengths={"a": circuit.path_difference, "b": 0.0, "h": 0.0},
            phi=circuit.relative_phase,
        )


def build_output_state(circuit: CircuitSpec) -> StateVector:
    """Normalized single-photon state on ``(a, b, h)`` after the splitters.

    Reflection phases are global per arm and are absorbed by the path length
    compensator, so amplitudes are real. Phase shifters are not applied here;
    they act through the detector field mode.
    """
    splitters = circuit.splitters
    if not splitters or len(splitters) > 2:
        raise ConfigurationError(f"expected one or two splitters, got {len(splitters)}")
    for s in splitters:
        if not 0.0 < s.ratio < 1.0:
            raise ConfigurationError(f"splitter {s.id}: ratio {s.ratio} is not unitary")
    upper = splitters[0].ratio
    into_a = splitters[1].ratio if len(splitters) == 2 else 1.0
    return StateVector(
        MODES,
        [math.sqrt(upper * into_a), math.sqrt(upper * (1.0 - into_a)), math.sqrt(1.0 - upper)],
    )


def detector_field_mode(placement: str, cfg: PathConfig = PathConfig()) -> tuple[StateVector, ...]:
    """Mode vectors whose annihilation operators make up each detector's field.

    DA2 gives one vector ``alpha|a> + beta|b>`` with the global phase of leg b
    removed, so only ``k (r_a - r_b) + phi`` survives. DA1 gives the separate
    singletons ``|a>`` and ``|b>``.
    """
    if placement == "DA1":
        return ket("a"), ket("b")
    if placement != "DA2":
        raise ConfigurationError(f"unknown placement {placement!r}")
    missing = [leg for leg in ("a", "b") if leg not in cfg.path_lengths]
    if missing:
        raise ConfigurationError(f"DA2 needs legs a and b; missing {', '.join(missing)}")
    rel = cfg.k * (cfg.path_lengths["a"] - cfg.path_lengths["b"]) + cfg.phi
    return (StateVector(MODES, [np.exp(1j * rel), 1.0, 0.0]),)


def coherent_mode(phi: float) -> StateVector:
    """DA2 field mode for a compensated interferometer with extra phase ``phi``."""
    return detector_field_mode("DA2", PathConfig(phi=phi))[0]


def field_operator(field: StateVector, width: float) -> LinearOperator:
    """Positive-frequency field ``lambda * sum_X f_X X`` on ``(vac, a, b, h)``.

    Each annihilation operator maps the single-excitation ket ``|X>`` to the
    vacuum, so the matrix has one nonzero row.
    """
    if field.labels != MODES:
        raise ConfigurationError(f"field must be expressed on {MODES}")
    if not width > 0:
        raise ValueError(f"width must be positive, got {width}")
    mat = np.zeros((len(FOCK_MODES), len(FOCK_MODES)), dtype=complex)
    for x, f in field.as_dict().items():
        mat[0, FOCK_MODES.index(x)] = f / math.sqrt(width)
    return LinearOperator(FOCK_MODES, mat)


def first_order_correlation(state: WeakSourceState, field: StateVector, width: float) -> float:
    """Count rate ``integral <E- E+> dz`` over a detector of the given width.

    The amplitude density is ``1/sqrt(width)``, so the width factors cancel
    under the top-hat idealization.
    """
    if field.labels != state.excitation.labels:
        raise BasisMismatchError(f"field basis {field.labels} != state basis {state.excitation.labels}")
    e_plus = field_operator(field, width)
    intensity = expectation(e_plus.dagger() @ e_plus, state.as_state_vector())
    return intensity * width


def field_projector(field: StateVector) -> LinearOperator:
    """First-quantized weight operator equivalent to ``E- E+`` for ``field``.

    The field multiplies annihilation operators, so the matching ray is the
    complex conjugate of the field vector.
    """
    return ray_projector(field.conj(), normalize=False)


def paper_circuit_state() -> StateVector:
    """``(|a> + |b> + sqrt2 |h>) / 2``."""
    return StateVector(MODES, [0.5, 0.5, 1.0 / math.sqrt(2.0)])

