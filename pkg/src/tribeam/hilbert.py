"""Exact complex linear algebra over the small labeled mode space.

States and operators carry their basis as a tuple of mode labels so that
mixing vectors from different bases fails loudly instead of silently
misaligning components.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from tribeam.errors import BasisMismatchError, ContractViolation, DegenerateInputError

TOL = 1e-12

#: Beam modes of the three-arm interferometer.
MODES: tuple[str, ...] = ("a", "b", "h")
#: Beam modes plus the vacuum slot used by the weak-source state.
FOCK_MODES: tuple[str, ...] = ("vac", "a", "b", "h")


def _check_labels(labels: Sequence[str]) -> tuple[str, ...]:
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate mode labels in basis {labels}")
    if not labels:
        raise ValueError("basis must contain at least one mode")
    return labels


def _same_basis(x: tuple[str, ...], y: tuple[str, ...]) -> None:
    if x != y:
        raise BasisMismatchError(f"basis {x} does not match {y}")


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over an ordered tuple of mode labels."""

    labels: tuple[str, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        labels = _check_labels(self.labels)
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (len(labels),):
            raise ValueError(f"{amps.size} amplitudes for {len(labels)} modes")
        amps.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_dict(cls, amps: Mapping[str, complex], basis: Sequence[str] = MODES) -> "StateVector":
        unknown = set(amps) - set(basis)
        if unknown:
            raise BasisMismatchError(f"modes {sorted(unknown)} not in basis {tuple(basis)}")
        return cls(tuple(basis), [amps.get(x, 0.0) for x in basis])

    def __getitem__(self, label: str) -> complex:
        return complex(self.amplitudes[self.labels.index(label)])

    def __add__(self, other: "StateVector") -> "StateVector":
        _same_basis(self.labels, other.labels)
        return StateVector(self.labels, self.amplitudes + other.amplitudes)

    def __rmul__(self, scalar: complex) -> "StateVector":
        return StateVector(self.labels, scalar * self.amplitudes)

    def conj(self) -> "StateVector":
        return StateVector(self.labels, self.amplitudes.conj())

    def norm(self) -> float:
        return float(np.sqrt(inner_product(self, self).real))

    def is_normalized(self, tol: float = TOL) -> bool:
        return abs(inner_product(self, self).real - 1.0) <= tol

    def as_dict(self) -> dict[str, complex]:
        return {x: complex(c) for x, c in zip(self.labels, self.amplitudes)}

    def allclose(self, other: "StateVector", tol: float = TOL) -> bool:
        return self.labels == other.labels and bool(
            np.allclose(self.amplitudes, other.amplitudes, rtol=0, atol=tol)
        )


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """Dense complex matrix indexed by ``labels x labels``."""

    labels: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        labels = _check_labels(self.labels)
        mat = np.array(self.matrix, dtype=complex)
        if mat.shape != (len(labels), len(labels)):
            raise ValueError(f"matrix shape {mat.shape} does not fit {len(labels)} modes")
        mat.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def identity(cls, basis: Sequence[str] = MODES) -> "LinearOperator":
        return cls(tuple(basis), np.eye(len(basis)))

    @classmethod
    def zeros(cls, basis: Sequence[str] = MODES) -> "LinearOperator":
        return cls(tuple(basis), np.zeros((len(basis), len(basis))))

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        _same_basis(self.labels, other.labels)
        return LinearOperator(self.labels, self.matrix + other.matrix)

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        _same_basis(self.labels, other.labels)
        return LinearOperator(self.labels, self.matrix - other.matrix)

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            _same_basis(self.labels, other.labels)
            return StateVector(self.labels, self.matrix @ other.amplitudes)
        _same_basis(self.labels, other.labels)
        return LinearOperator(self.labels, self.matrix @ other.matrix)

    def __mul__(self, scalar: complex) -> "LinearOperator":
        return LinearOperator(self.labels, scalar * self.matrix)

    __rmul__ = __mul__

    def dagger(self) -> "LinearOperator":
        return LinearOperator(self.labels, self.matrix.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def is_hermitian(self, tol: float = TOL) -> bool:
        return bool(np.allclose(self.matrix, self.matrix.conj().T, rtol=0, atol=tol))

    def is_projector(self, tol: float = TOL) -> bool:
        m = self.matrix
        return self.is_hermitian(tol) and bool(np.allclose(m @ m, m, rtol=0, atol=tol))

    def is_ray_weight(self, tol: float = TOL) -> bool:
        """True if ``P @ P == tr(P) * P``, the unnormalized ray convention."""
        m = self.matrix
        return self.is_hermitian(tol) and bool(
            np.allclose(m @ m, np.trace(m) * m, rtol=0, atol=tol)
        )

    def restrict(self, basis: Sequence[str]) -> "LinearOperator":
        """Sub-block on the given labels (which must all be present)."""
        missing = [x for x in basis if x not in self.labels]
        if missing:
            raise BasisMismatchError(f"modes {missing} not in basis {self.labels}")
        idx = [self.labels.index(x) for x in basis]
        return LinearOperator(tuple(basis), self.matrix[np.ix_(idx, idx)])

    def allclose(self, other: "LinearOperator", tol: float = TOL) -> bool:
        return self.labels == other.labels and bool(
            np.allclose(self.matrix, other.matrix, rtol=0, atol=tol)
        )


def ket(label: str, basis: Sequence[str] = MODES) -> StateVector:
    """Unit vector on a single mode."""
    if label not in basis:
        raise BasisMismatchError(f"mode {label!r} not in basis {tuple(basis)}")
    return StateVector.from_dict({label: 1.0}, basis)


def inner_product(u: StateVector, v: StateVector) -> complex:
    """``<u|v>``, antilinear in ``u``."""
    _same_basis(u.labels, v.labels)
    return complex(np.vdot(u.amplitudes, v.amplitudes))


def ray_projector(v: StateVector, normalize: bool = False) -> LinearOperator:
    """Outer product ``|v><v|``.

    With ``normalize=False`` the operator keeps the squared norm of ``v`` as
    its trace. This is the convention used for the coherent region-k weight,
    where ``v = alpha|a> + beta|b>`` with unit-modulus phases gives trace 2
    and an expectation of 1 on the balanced output state. ``normalize=True``
    divides by ``<v|v>`` and yields a strict rank-one projector.
    """
    nrm2 = inner_product(v, v).real
    if nrm2 == 0.0:
        raise DegenerateInputError("cannot build a ray projector from the zero vector")
    mat = np.outer(v.amplitudes, v.amplitudes.conj())
    if normalize:
        mat = mat / nrm2
    return LinearOperator(v.labels, mat)


def expectation(op: LinearOperator, s: StateVector, tol: float = TOL) -> float:
    """Real expectation value ``<s|op|s>`` of a Hermitian operator."""
    _same_basis(op.labels, s.labels)
    if not op.is_hermitian(tol):
        raise ContractViolation("expectation requires a Hermitian operator")
    val = complex(np.vdot(s.amplitudes, op.matrix @ s.amplitudes))
    scale = max(1.0, float(np.linalg.norm(op.matrix)) * float(np.vdot(s.amplitudes, s.amplitudes).real))
    if abs(val.imag) > tol * scale:
        raise ContractViolation(f"expectation has imaginary residue {val.imag:.3e}")
    return val.real


def operator_sum(ops: Iterable[LinearOperator]) -> LinearOperator:
    ops = list(ops)
    if not ops:
        raise ValueError("empty operator list")
    total = LinearOperator.zeros(ops[0].labels)
    for op in ops:
        total = total + op
    return total


def completeness_deviation(projs: Sequence[LinearOperator], span: Sequence[str] = MODES) -> float:
    """Frobenius norm of ``sum(projs) - I`` on the beam modes; 0 means complete."""
    total = operator_sum(projs).restrict(span)
    return float(np.linalg.norm(total.matrix - np.eye(len(span)), "fro"))
