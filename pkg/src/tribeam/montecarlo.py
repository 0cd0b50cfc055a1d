"""Seeded click sampling and Bob's one-bit decision rule.

Randomness comes from the Philox-4x64 counter-based generator keyed by the
64-bit seed, with the stream index placed in the top counter word so streams
never overlap. Only the raw 64-bit outputs are used; they are mapped to
uniforms as ``(x >> 11) * 2**-53`` and to outcomes by inverse CDF in the
distribution's label order. Both steps are fixed here, so counts do not
depend on how numpy's higher-level samplers evolve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from tribeam.errors import ContractViolation
from tribeam.hilbert import StateVector
from tribeam.measurement import (
    CoherentIncompleteDA2,
    CompleteDA1,
    OutcomeDistribution,
    outcome_distribution,
)
from tribeam.optics import paper_circuit_state

GENERATOR = "philox4x64/raw53-inverse-cdf"
DA1_RATE = 0.5
DA2_RATE = 1.0 / 3.0
THRESHOLD = (DA1_RATE + DA2_RATE) / 2  # 5/12
_GAP = DA1_RATE - THRESHOLD  # 1/12


def uniforms(seed: int, n: int, stream: int = 0) -> np.ndarray:
    """``n`` doubles in [0, 1) from the keyed Philox stream."""
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    if not 0 <= stream < 2**64:
        raise ValueError(f"stream must be an unsigned 64-bit integer, got {stream}")
    bg = np.random.Philox(key=seed, counter=[0, 0, 0, stream])
    raw = bg.random_raw(n)
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53


@dataclass(frozen=True)
class CountSummary:
    counts: dict[str, int]
    n_trials: int
    seed: int
    stream: int = 0

    def frequencies(self) -> dict[str, float]:
        return {x: c / self.n_trials for x, c in self.counts.items()}


def sample_clicks(dist: OutcomeDistribution, n: int, seed: int, stream: int = 0) -> CountSummary:
    """``n`` independent categorical clicks drawn from ``dist.probabilities``."""
    if n < 1:
        raise ContractViolation(f"need at least one trial, got n={n}")
    labels = list(dist.probabilities)
    edges = np.cumsum([dist.probabilities[x] for x in labels])[:-1]
    idx = np.searchsorted(edges, uniforms(seed, n, stream), side="right")
    counts = np.bincount(idx, minlength=len(labels))
    return CountSummary({x: int(c) for x, c in zip(labels, counts)}, n, seed, stream)


@dataclass(frozen=True)
class SignalDecision:
    decided_bit: int
    log_likelihood_ratio: float
    threshold: float
    error_bound: float


def hoeffding_bound(n: int) -> float:
    """Upper bound on the misread probability at ``n`` clicks."""
    return math.exp(-2.0 * n * _GAP**2)


def distinguish_bit(bob_counts: int, n: int) -> SignalDecision:
    """Read Alice's placement from Bob's click count.

    Bit 0 (DA1, Bob at 1/2) if the click fraction exceeds 5/12, bit 1 (DA2,
    Bob at 1/3) otherwise. The log-likelihood ratio is
    ``log P(counts | 1/2) - log P(counts | 1/3)``, positive favoring bit 0.
    """
    if n < 1:
        raise ContractViolation(f"need at least one click, got n={n}")
    if not 0 <= bob_counts <= n:
        raise ContractViolation(f"bob_counts={bob_counts} outside [0, {n}]")
    llr = bob_counts * math.log(DA1_RATE / DA2_RATE) + (n - bob_counts) * math.log(
        (1 - DA1_RATE) / (1 - DA2_RATE)
    )
    bit = 0 if bob_counts / n > THRESHOLD else 1
    return SignalDecision(bit, llr, THRESHOLD, hoeffding_bound(n))


def placement_model(bit: int):
    if bit == 0:
        return CompleteDA1()
    if bit == 1:
        return CoherentIncompleteDA2(0.0)
    raise ValueError(f"bit must be 0 or 1, got {bit!r}")


@dataclass(frozen=True)
class TransmittedBit:
    sent: int
    placement: str
    bob_counts: int
    n: int
    decision: SignalDecision


def transmit(bits: str, n: int, seed: int, state: StateVector | None = None) -> list[TransmittedBit]:
    """Send each bit by Alice's placement choice; Bob decodes from his clicks.

    Bit ``i`` uses stream ``i`` of ``seed``.
    """
    if not bits:
        raise ValueError("empty message")
    if set(bits) - {"0", "1"}:
        raise ValueError(f"message must contain only 0 and 1, got {bits!r}")
    state = paper_circuit_state() if state is None else state
    dists = {b: outcome_distribution(state, placement_model(b)) for b in (0, 1)}
    out = []
    for i, ch in enumerate(bits):
        bit = int(ch)
        summary = sample_clicks(dists[bit], n, seed, stream=i)
        bob = summary.counts["p"]
        out.append(TransmittedBit(bit, "DA1" if bit == 0 else "DA2", bob, n, distinguish_bit(bob, n)))
    return out


def bit_error_rate(transcript: Sequence[TransmittedBit]) -> float:
    return sum(t.sent != t.decision.decided_bit for t in transcript) / len(transcript)


@dataclass(frozen=True)
class SweepRow:
    phi: float
    analytic_bob_rate: float
    empirical_bob_rate: float
    stderr: float


def phase_sweep(phis: Sequence[float], n: int, seed: int, state: StateVector | None = None) -> list[SweepRow]:
    """Bob's rate versus the DA2 phase: the analytic probability (which is
    ``1/(2 + cos phi)`` for the reference state) against clicks sampled from
    the DA2(phi) distribution. Point ``i`` uses stream ``i``; ``stderr`` is the
    binomial standard error at the analytic rate.
    """
    if len(phis) == 0:
        raise ValueError("empty phase grid")
    state = paper_circuit_state() if state is None else state
    rows = []
    for i, phi in enumerate(phis):
        dist = outcome_distribution(state, CoherentIncompleteDA2(float(phi)))
        summary = sample_clicks(dist, n, seed, stream=i)
        rate = dist.probabilities["p"]
        rows.append(
            SweepRow(
                phi=float(phi),
                analytic_bob_rate=rate,
                empirical_bob_rate=summary.counts["p"] / n,
                stderr=math.sqrt(rate * (1.0 - rate) / n),
            )
        )
    return rows
