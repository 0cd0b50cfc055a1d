"""Print every closed-form number of the three-beam setup next to the value
computed by the simulator."""

import math

from tribeam.circuitspec import paper_preset
from tribeam.hilbert import completeness_deviation, ket
from tribeam.measurement import (
    P_L,
    P_M,
    P_P,
    CoherentIncompleteDA2,
    CompleteDA1,
    DoubleSlitScreen,
    StandardSumControl,
    bob_rate,
    causality_audit,
    coherent_projector,
    outcome_distribution,
)
from tribeam.optics import BeamGeometry, WeakSourceState, build_output_state, coherent_mode, first_order_correlation

EPS = 0.01


def row(name, expected, got):
    flag = "ok " if abs(expected - got) <= 1e-12 * max(1.0, abs(expected)) else "BAD"
    print(f"{flag} {name:<42} expected {expected:<22.16g} got {got:.16g}")


def main():
    psi = build_output_state(paper_preset())
    g = BeamGeometry()
    ws = WeakSourceState.from_output_state(psi, EPS)

    row("w' / w", 1 / math.cos(math.radians(30)), g.w_prime / g.w)
    da1 = outcome_distribution(psi, CompleteDA1())
    row("DA1 P(l)", 0.25, da1.probabilities["l"])
    row("DA1 P(m)", 0.25, da1.probabilities["m"])
    row("DA1 P(p)", 0.5, da1.probabilities["p"])
    da2 = outcome_distribution(psi, CoherentIncompleteDA2(0.0))
    row("DA2 unnormalized weight k", 1.0, da2.outcomes["k"])
    row("DA2 renorm beta", 1.5, da2.renorm_beta)
    row("DA2 P(k)", 2 / 3, da2.probabilities["k"])
    row("DA2 P(p)", 1 / 3, da2.probabilities["p"])
    row("sum control P(p)", 0.5, outcome_distribution(psi, StandardSumControl()).probabilities["p"])
    row("double slit P(p), N=1024", 0.5, outcome_distribution(psi, DoubleSlitScreen(1024)).probabilities["p"])
    row("C(a) / eps^2", 1.0, first_order_correlation(ws, ket("a"), g.w_prime) / EPS**2)
    row("C(h) / eps^2", 2.0, first_order_correlation(ws, ket("h"), g.w) / EPS**2)
    row("C(k) / eps^2", 4.0, first_order_correlation(ws, coherent_mode(0.0), g.w_prime) / EPS**2)
    row("causality audit total / C", 1.5, causality_audit(psi, 0.0).total)
    for phi in (0.0, math.pi / 3, math.pi / 2, math.pi):
        row(f"Bob rate at phi={phi:.4f}", 1 / (2 + math.cos(phi)), bob_rate(psi, CoherentIncompleteDA2(phi)))
    row("completeness {P_l, P_m, P_p}", 0.0, completeness_deviation([P_L, P_M, P_P]))
    row("completeness {P_k, P_p}", math.sqrt(2), completeness_deviation([coherent_projector(0.0), P_P]))


if __name__ == "__main__":
    main()
