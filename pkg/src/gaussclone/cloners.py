"""The symmetric N->M coherent-state cloner and the known-phase N->M cloner.

Both machines are built as explicit linear-optics circuits and propagated
exactly in the covariance-matrix picture. Every report also carries the
closed-form fidelity so the two routes can be compared.

Mode layout of every circuit, before measurement::

    0 .. N-1        input copies (mode 0 becomes the concentrated signal)
    N               measured arm
    N+1 .. N+M-1    vacuum modes that receive the distributed clones
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import analysis
from .analysis import INF, ParameterError, check_nm
from .gaussian import (
    GaussianState,
    SymplecticOp,
    apply,
    beam_splitter,
    coherent_state,
    concentrate,
    concentration_network,
    distribute,
    overlap_with_coherent,
    partial_trace,
    squeezer,
)
from .measurement import HETERODYNE, HOMODYNE_X, MeasurementModel, ensemble_after_feedforward, measure

SYMMETRIC = "symmetric"
KNOWN_PHASE = "known-phase"
POLICIES = ("none", "optimal", "symmetric-noise")
JOINT = "joint"
INDIVIDUAL = "individual"

_AMPLITUDE_TOL = 1e-9


@dataclass(frozen=True)
class CloneParams:
    """Inputs of one cloning run.

    ``epsilon=None`` selects the gain-minimizing split. ``squeeze`` is one of
    ``POLICIES`` or an explicit float ``r`` (known-phase only).
    """

    N: int
    M: int | float
    alpha: complex = 1.0
    epsilon: float | None = None
    squeeze: str | float = "none"
    displacement: str = JOINT


@dataclass(frozen=True, eq=False)
class CloneCircuit:
    """A cloning circuit stopped just before its measurement.

    ``gain`` maps the outcome onto the unmeasured modes; ``post`` (if any) acts
    on the unmeasured modes after feed-forward; ``clones`` indexes the clone
    modes among the unmeasured ones.
    """

    state: GaussianState
    measured: int
    kind: str
    gain: np.ndarray
    clones: tuple[int, ...]
    post: SymplecticOp | None = None

    def model(self) -> MeasurementModel:
        return measure(self.state, self.measured, self.kind)

    def output_state(self) -> GaussianState:
        """Outcome-averaged joint state of the M clones."""
        out = ensemble_after_feedforward(self.model(), self.gain)
        if self.post is not None:
            out = apply(self.post, out)
        return partial_trace(out, self.clones)


@dataclass(frozen=True, eq=False)
class CloneReport:
    params: CloneParams
    machine: str
    epsilon: float
    r: float
    gain: float
    clone_gain: float
    var_x: float
    var_p: float
    fidelity_analytic: float
    fidelity_circuit: float | None = None
    clone_state: GaussianState | None = None
    output_state: GaussianState | None = None
    circuit: CloneCircuit | None = field(default=None, repr=False)
    fidelity_mc: object | None = None


def resolve_squeezing(N: int, M, policy: str | float) -> float:
    check_nm(N, M)
    if isinstance(policy, str):
        if policy == "none":
            return 0.0
        if policy == "optimal":
            return analysis.optimal_squeezing(N, M)
        if policy == "symmetric-noise":
            return analysis.symmetric_noise_squeezing(N, M)
        raise ParameterError(f"unknown squeeze policy {policy!r}")
    return float(policy)


def _expect_amplitude(s: GaussianState, mode: int, amplitude: complex, stage: str) -> None:
    want = np.array([amplitude.real, amplitude.imag])
    got = s.mean[2 * mode : 2 * mode + 2]
    if not np.allclose(got, want, rtol=0, atol=_AMPLITUDE_TOL):
        raise RuntimeError(f"amplitude bookkeeping failed after {stage}: {got} != {want}")


def _split_signal(N: int, M: int, alpha: complex, epsilon: float) -> GaussianState:
    """Concentrate N copies and split off the measured arm with reflection epsilon."""
    s = coherent_state([alpha] * N + [0] * M)
    s = concentrate(s, range(N))
    _expect_amplitude(s, 0, math.sqrt(N) * alpha, "concentration")
    s = apply(beam_splitter(epsilon, N, 0, s.n_modes), s)
    _expect_amplitude(s, 0, math.sqrt(epsilon * N) * alpha, "epsilon split")
    _expect_amplitude(s, N, math.sqrt((1 - epsilon) * N) * alpha, "epsilon split")
    return s


def _arms(N: int, M: int) -> list[int]:
    return [0, *range(N + 1, N + M)]


def _after_measurement(modes, measured: int) -> tuple[int, ...]:
    return tuple(k - (k > measured) for k in modes)


def _distribute_arms(s: GaussianState, N: int, M: int, alpha: complex, epsilon: float) -> GaussianState:
    s = distribute(s, 0, M, targets=range(N + 1, N + M))
    for k in _arms(N, M):
        _expect_amplitude(s, k, math.sqrt(epsilon * N / M) * alpha, "distribution")
    return s


def symmetric_circuit(N: int, M: int, alpha: complex, epsilon: float, displacement: str = JOINT) -> CloneCircuit:
    g = analysis.symmetric_gain(N, M, epsilon)
    s = _split_signal(N, M, alpha, epsilon)
    arms = _after_measurement(_arms(N, M), N)
    n_rest = s.n_modes - 1
    gain = np.zeros((2 * n_rest, 2))
    if displacement == JOINT:
        gain[0:2, :] = g * np.eye(2)
        post = concentration_network(arms, n_rest).inverse()
        return CloneCircuit(s, N, HETERODYNE, gain, arms, post)
    if displacement == INDIVIDUAL:
        s = _distribute_arms(s, N, M, alpha, epsilon)
        for k in arms:
            gain[2 * k : 2 * k + 2, :] = g / math.sqrt(M) * np.eye(2)
        return CloneCircuit(s, N, HETERODYNE, gain, arms)
    raise ParameterError(f"unknown displacement mode {displacement!r}")


def known_phase_circuit(N: int, M: int, alpha: float, epsilon: float, r: float) -> CloneCircuit:
    g = analysis.kp_gain(N, M, r, epsilon)
    s = _split_signal(N, M, alpha, epsilon)
    s = _distribute_arms(s, N, M, alpha, epsilon)
    for k in _arms(N, M):
        s = apply(squeezer(r, k, s.n_modes), s)
    arms = _after_measurement(_arms(N, M), N)
    gain = np.zeros((2 * (s.n_modes - 1), 1))
    for k in arms:
        gain[2 * k, 0] = g
    return CloneCircuit(s, N, HOMODYNE_X, gain, arms)


def _finish(report: CloneReport) -> CloneReport:
    """Fill the circuit-route fields of a report from its circuit."""
    circuit = report.circuit
    if circuit is None:
        return report
    output = circuit.output_state()
    clone = partial_trace(output, [0])
    return replace(
        report,
        output_state=output,
        clone_state=clone,
        var_x=float(clone.cov[0, 0]),
        var_p=float(clone.cov[1, 1]),
        fidelity_circuit=overlap_with_coherent(clone, report.params.alpha),
    )


def symmetric_clone(p: CloneParams) -> CloneReport:
    """Run the symmetric cloner; ``M=INF`` gives an analytic-only report."""
    check_nm(p.N, p.M)
    if p.displacement not in (JOINT, INDIVIDUAL):
        raise ParameterError(f"unknown displacement mode {p.displacement!r}")
    auto = p.epsilon is None
    epsilon = p.N * analysis.inv_m(p.M) if auto else float(p.epsilon)
    g = analysis.symmetric_gain(p.N, p.M, epsilon)
    if p.M == INF:
        clone_gain = analysis.symmetric_clone_gain(p.N, p.M)
    else:
        clone_gain = g / math.sqrt(p.M)
    var = analysis.symmetric_variance(p.N, p.M, None if auto else epsilon)
    report = CloneReport(
        params=p,
        machine=SYMMETRIC,
        epsilon=epsilon,
        r=0.0,
        gain=g,
        clone_gain=clone_gain,
        var_x=var,
        var_p=var,
        fidelity_analytic=analysis.fidelity_symmetric(p.N, p.M, None if auto else epsilon),
    )
    if p.M != INF:
        circuit = symmetric_circuit(p.N, p.M, complex(p.alpha), epsilon, p.displacement)
        report = _finish(replace(report, circuit=circuit))
    return report


def known_phase_clone(p: CloneParams) -> CloneReport:
    """Run the known-phase cloner; ``M=INF`` gives an analytic-only report."""
    check_nm(p.N, p.M)
    alpha = complex(p.alpha)
    if alpha.imag != 0:
        raise ParameterError(f"known-phase cloning requires a real amplitude, got {p.alpha}")
    r = resolve_squeezing(p.N, p.M, p.squeeze)
    auto = p.epsilon is None
    epsilon = analysis.kp_epsilon(p.N, p.M, r) if auto else float(p.epsilon)
    if epsilon > 1.0:
        raise ParameterError(f"requires N e^{{2r}} <= M (N={p.N}, M={p.M}, r={r:.6g})")
    given = None if auto else epsilon
    g = analysis.kp_gain(p.N, p.M, r, given)
    var_x, var_p = analysis.kp_variances(p.N, p.M, r, given)
    report = CloneReport(
        params=p,
        machine=KNOWN_PHASE,
        epsilon=epsilon,
        r=r,
        gain=g,
        clone_gain=g,
        var_x=var_x,
        var_p=var_p,
        fidelity_analytic=analysis.fidelity_kp(p.N, p.M, r, given),
    )
    if p.M != INF:
        circuit = known_phase_circuit(p.N, p.M, alpha.real, epsilon, r)
        report = _finish(replace(report, circuit=circuit))
    return report


def clone(machine: str, p: CloneParams) -> CloneReport:
    if machine == SYMMETRIC:
        return symmetric_clone(p)
    if machine == KNOWN_PHASE:
        return known_phase_clone(p)
    raise ParameterError(f"unknown machine {machine!r}")
