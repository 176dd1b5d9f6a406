"""Golden values for the cloning machines and the QKD thresholds.

Each check evaluates one quantity through the library and compares it with
the closed-form number it must reproduce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import analysis
from .analysis import INF
from .cloners import KNOWN_PHASE, SYMMETRIC, CloneParams, clone
from .montecarlo import McConfig, mc_fidelity


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    expected: float
    tol: float
    relation: str = "=="

    @property
    def passed(self) -> bool:
        if self.relation == ">":
            return self.value > self.expected
        return abs(self.value - self.expected) <= self.tol

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.relation == ">":
            want, tol = f"> {self.expected:.12g}", "-"
        else:
            want, tol = f"{self.expected:.12g}", f"{self.tol:.1e}"
        return f"{status}  {self.name:<44} {self.value:<20.12g} {want:<20} {tol}"


def _both(label: str, machine: str, params: CloneParams, expected: float, tol: float = 1e-10):
    rep = clone(machine, params)
    yield Check(f"{label} analytic", rep.fidelity_analytic, expected, tol)
    if rep.fidelity_circuit is not None:
        yield Check(f"{label} circuit", rep.fidelity_circuit, expected, tol)


def golden_checks() -> list[Check]:
    checks: list[Check] = []
    add = checks.extend

    add(_both("F sym 1->2", SYMMETRIC, CloneParams(1, 2), 2 / 3))
    add(_both("F sym 2->3", SYMMETRIC, CloneParams(2, 3), 6 / 7))
    add(_both("F sym 1->inf", SYMMETRIC, CloneParams(1, INF), 1 / 2))
    add(_both("F kp 1->2 r=0", KNOWN_PHASE, CloneParams(1, 2), math.sqrt(4 / 5)))
    add(_both("F kp 1->2 r=r_o", KNOWN_PHASE, CloneParams(1, 2, squeeze="optimal"), 2 * math.sqrt(2) / 3))
    add(_both("F kp 1->2 r=r_*", KNOWN_PHASE, CloneParams(1, 2, squeeze="symmetric-noise"), 4 / (3 + math.sqrt(3))))
    add(_both("F kp 1->inf r=0", KNOWN_PHASE, CloneParams(1, INF), math.sqrt(2 / 3)))
    checks.append(Check("kp_bound(1,2)", analysis.kp_bound(1, 2), 2 * math.sqrt(2) / 3, 1e-12))

    for name, value in [
        ("kp_bound(1,2) beats 4/5", analysis.kp_bound(1, 2)),
        ("F kp 1->2 r=r_* beats 4/5", analysis.fidelity_kp_symmetric_noise(1, 2)),
        ("F kp 1->inf r=0 beats 4/5", analysis.fidelity_kp_unsqueezed(1, INF)),
    ]:
        checks.append(Check(name, value, analysis.FOUR_WAVE_MIXING_FIDELITY, 0.0, ">"))

    sym = clone(SYMMETRIC, CloneParams(1, 2))
    checks.append(Check("var_x sym 1->2", sym.var_x, 0.5, 1e-10))
    checks.append(Check("var_p sym 1->2", sym.var_p, 0.5, 1e-10))
    checks.append(Check("clone gain sym 1->2", sym.clone_gain, math.sqrt(0.5), 1e-12))
    kp = clone(KNOWN_PHASE, CloneParams(1, 2))
    checks.append(Check("var_x kp 1->2 r=0", kp.var_x, 3 / 8, 1e-10))
    checks.append(Check("var_p kp 1->2 r=0", kp.var_p, 1 / 4, 1e-10))
    kp_inf = clone(KNOWN_PHASE, CloneParams(1, INF, squeeze="symmetric-noise"))
    golden_var = (math.sqrt(5) + 1) / 8
    checks.append(Check("var_x kp 1->inf r=r_*", kp_inf.var_x, golden_var, 1e-10))
    checks.append(Check("var_p kp 1->inf r=r_*", kp_inf.var_p, golden_var, 1e-10))
    checks.append(Check("r_o(1,2)", analysis.optimal_squeezing(1, 2), math.log(2) / 2, 1e-12))

    checks.append(Check("delta classical unknown phase", analysis.excess_noise_classical(False), 2.0, 1e-12))
    checks.append(Check("delta classical known phase", analysis.excess_noise_classical(True), (math.sqrt(5) - 1) / 2, 1e-12))
    checks.append(Check("delta from kp 1->inf variance", analysis.excess_noise(kp_inf.var_x), (math.sqrt(5) - 1) / 2, 1e-12))
    checks.append(Check("delta from sym 1->inf variance", analysis.excess_noise(clone(SYMMETRIC, CloneParams(1, INF)).var_x), 2.0, 1e-12))
    for eta in (0.25, 0.5, 1.0):
        checks.append(Check(f"delta_max unknown eta={eta}", analysis.qkd_threshold(eta, False).delta_max, 2 * eta, 1e-12))
        checks.append(Check(f"delta_max known eta={eta}", analysis.qkd_threshold(eta, True).delta_max, (math.sqrt(5) - 1) / 2 * eta, 1e-12))
    ratio = analysis.qkd_threshold(1.0, False).delta_max / analysis.qkd_threshold(1.0, True).delta_max
    checks.append(Check("threshold ratio unknown/known", ratio, 3.0, 0.0, ">"))
    return checks


MC_CASES = [
    (SYMMETRIC, CloneParams(1, 2)),
    (SYMMETRIC, CloneParams(2, 3)),
    (KNOWN_PHASE, CloneParams(1, 2)),
    (KNOWN_PHASE, CloneParams(2, 3)),
]


def mc_checks(seed: int, trajectories: int, workers: int = 1) -> list[Check]:
    """Monte Carlo fidelity within 4 standard errors of the closed form."""
    checks = []
    for machine, params in MC_CASES:
        est = mc_fidelity(McConfig(params, machine, trajectories, seed), workers)
        expected = clone(machine, params).fidelity_analytic
        label = f"MC F {machine} {params.N}->{params.M}"
        checks.append(Check(label, est.mean, expected, max(4 * est.stderr, 1e-12)))
    return checks
