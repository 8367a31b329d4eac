"""Trajectory execution, randomized scheduling, measurements, and protocols.

A trajectory applies one neighborhood channel per step, either cycling
through a fixed order or drawing neighborhoods i.i.d. from a probability
distribution, and logs purity, the conserved-observable expectation, the
Lyapunov values of both consensus families, and the relevant populations.
Monte-Carlo estimation uses per-trial random streams derived from a master
seed, so results are reproducible and independent of trial execution order.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dynamics import ChannelFamily, build_channels
from .network import NetworkTopology, is_connected
from .qcore import apply_channel, purity, validate_density_matrix
from .symmetry import (
    dicke_ket,
    excitation_indices,
    global_observable,
    gossip_fixed_point,
    v_smc,
    v_total,
)

__all__ = [
    "Schedule",
    "TrajectoryRecord",
    "RunResult",
    "random_density",
    "run",
    "lyapunov_gap",
    "convergence_probability",
    "measure_local_z",
    "measure_global_observable",
    "apply_flip",
    "MeasurementEvent",
    "PreparationResult",
    "prepare_dicke",
    "trajectory_csv_lines",
    "write_trajectory_csv",
]

MEASUREMENT_PROBABILITY_FLOOR = 1e-12


@dataclass(frozen=True)
class Schedule:
    """Neighborhood selection rule: a fixed cyclic order or seeded i.i.d. draws.

    Cyclic mode repeats `order` (indices into the topology's neighborhood
    list); the order must cover every neighborhood at least once, and `None`
    means plain round robin.  Random mode draws independently each step from
    `probabilities` (falling back to the topology's weights, then uniform),
    using a generator seeded with `seed`.
    """

    mode: str
    order: tuple[int, ...] | None = None
    probabilities: tuple[float, ...] | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.mode not in ("cyclic", "random"):
            raise ValueError(f"unknown schedule mode {self.mode!r}")
        if self.mode == "cyclic":
            if self.order is not None:
                order = tuple(int(i) for i in self.order)
                if not order:
                    raise ValueError("cyclic order must be nonempty")
                object.__setattr__(self, "order", order)
        else:
            if self.seed is None:
                raise ValueError("random schedules need a seed")
            if self.probabilities is not None:
                q = tuple(float(p) for p in self.probabilities)
                if any(p <= 0 for p in q):
                    raise ValueError("schedule probabilities must be positive")
                if abs(sum(q) - 1.0) > 1e-12:
                    raise ValueError(f"schedule probabilities sum to {sum(q)!r}, not 1")
                object.__setattr__(self, "probabilities", q)

    @classmethod
    def cyclic(cls, order=None) -> "Schedule":
        return cls(mode="cyclic", order=None if order is None else tuple(order))

    @classmethod
    def random(cls, probabilities=None, seed: int = 0) -> "Schedule":
        return cls(
            mode="random",
            probabilities=None if probabilities is None else tuple(probabilities),
            seed=int(seed),
        )


@dataclass(frozen=True)
class TrajectoryRecord:
    """Per-step diagnostics logged after each channel application."""

    step: int
    purity: float
    s_expectation: float
    v_total: float
    v_smc: float
    dicke_populations: tuple[float, ...]
    smc_population: float


@dataclass
class RunResult:
    records: list[TrajectoryRecord]
    final_state: np.ndarray


def random_density(seed: int, dim: int) -> np.ndarray:
    """Random density matrix: uniform simplex spectrum in a Haar-random basis.

    The spectrum is drawn uniformly from the probability simplex and the
    eigenbasis from the rotation-invariant distribution on unitaries
    (QR orthonormalization of a complex Gaussian matrix with the standard
    phase fix).  Deterministic for a given seed.
    """
    if dim < 2:
        raise ValueError(f"need dim >= 2, got {dim}")
    rng = np.random.default_rng(seed)
    spectrum = rng.dirichlet(np.ones(dim))
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    q = q * phases.conj()
    rho = (q * spectrum) @ q.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return validate_density_matrix(rho)


def _selection_probabilities(schedule: Schedule, topology: NetworkTopology) -> np.ndarray:
    n = len(topology.neighborhoods)
    if schedule.probabilities is not None:
        q = np.array(schedule.probabilities, dtype=float)
    elif topology.probabilities is not None:
        q = np.array(topology.probabilities, dtype=float)
    else:
        q = np.full(n, 1.0 / n)
    if q.shape != (n,):
        raise ValueError(f"{q.shape[0]} probabilities for {n} neighborhoods")
    return q


def _cyclic_order(schedule: Schedule, n_neighborhoods: int) -> tuple[int, ...]:
    order = schedule.order if schedule.order is not None else tuple(range(n_neighborhoods))
    if any(i < 0 or i >= n_neighborhoods for i in order):
        raise ValueError(f"cyclic order {order} has indices outside 0..{n_neighborhoods - 1}")
    if set(order) != set(range(n_neighborhoods)):
        raise ValueError("cyclic order must cover every neighborhood at least once")
    return order


def _record(step: int, rho: np.ndarray, m: int, s_diag: np.ndarray, dickes: list[np.ndarray]) -> TrajectoryRecord:
    diag = np.real(np.diag(rho))
    pops = tuple(float(np.real(d.conj() @ rho @ d)) for d in dickes)
    smc_pop = float(rho[0, 0].real + rho[-1, -1].real)
    return TrajectoryRecord(
        step=step,
        purity=purity(rho),
        s_expectation=float(np.dot(s_diag, diag)),
        v_total=float(m + 1 - sum(pops)),
        v_smc=1.0 - smc_pop,
        dicke_populations=pops,
        smc_population=smc_pop,
    )


def lyapunov_gap(family: ChannelFamily, rho: np.ndarray, m: int, *, gossip_target: np.ndarray | None = None) -> float:
    """Distance-to-target value that the family's dynamics drive to zero.

    ssc: v_total - m (zero iff supported on the Dicke span); smc: v_smc.
    For gossip the target set is a single state (the permutation average of
    the initial state), so the squared Hilbert-Schmidt distance to
    `gossip_target` is used and the caller must supply it.
    """
    if family.kind == "ssc":
        return v_total(rho, m) - m
    if family.kind == "smc":
        return v_smc(rho, m)
    if gossip_target is None:
        raise ValueError("gossip convergence needs the permutation-average target state")
    delta = np.asarray(rho, dtype=complex) - gossip_target
    return float(np.real(np.trace(delta @ delta.conj().T)))


def run(
    rho0: np.ndarray,
    topology: NetworkTopology,
    family: ChannelFamily,
    schedule: Schedule,
    steps: int,
    *,
    validate: bool = True,
    early_stop: bool = False,
    early_stop_threshold: float = 1e-10,
) -> RunResult:
    """Evolve an initial state for `steps` single-neighborhood channel steps.

    Parameters
    ----------
    rho0 : initial density matrix on 2**m dimensions
    topology : interaction graph; a disconnected graph triggers a warning
        (the run proceeds but convergence is not guaranteed)
    family : which channel family to apply
    schedule : cyclic or random neighborhood selection
    steps : number of channel applications (>= 1)
    validate : re-check density-matrix invariants after every step; disable
        for benchmark runs
    early_stop : stop once the family's Lyapunov gap stays below
        `early_stop_threshold` for 2*m consecutive steps

    Returns
    -------
    RunResult with one TrajectoryRecord per executed step and the final state.
    """
    if steps < 1:
        raise ValueError(f"need steps >= 1, got {steps}")
    m = topology.m
    rho = validate_density_matrix(rho0) if validate else np.asarray(rho0, dtype=complex)
    if rho.shape != (1 << m, 1 << m):
        raise ValueError(f"state shape {rho.shape} does not match m={m}")
    if not is_connected(topology):
        warnings.warn("interaction graph is not connected; convergence is not guaranteed")
    channels = build_channels(family, topology)

    if schedule.mode == "cyclic":
        order = _cyclic_order(schedule, len(channels))
        picks = None
    else:
        q = _selection_probabilities(schedule, topology)
        rng = np.random.default_rng(schedule.seed)
        picks = rng.choice(len(channels), size=steps, p=q)
        order = None

    gossip_target = None
    if early_stop and family.kind == "gossip":
        gossip_target = gossip_fixed_point(rho, m)

    s_diag = np.real(np.diag(global_observable(m)))
    dickes = [dicke_ket(m, k) for k in range(m + 1)]
    records: list[TrajectoryRecord] = []
    quiet = 0
    for t in range(1, steps + 1):
        idx = order[(t - 1) % len(order)] if picks is None else int(picks[t - 1])
        rho = apply_channel(channels[idx], rho, validate=validate)
        records.append(_record(t, rho, m, s_diag, dickes))
        if early_stop:
            gap = lyapunov_gap(family, rho, m, gossip_target=gossip_target)
            quiet = quiet + 1 if gap < early_stop_threshold else 0
            if quiet >= 2 * m:
                break
    return RunResult(records=records, final_state=rho)


def convergence_probability(
    rho0: np.ndarray,
    topology: NetworkTopology,
    family: ChannelFamily,
    gamma: float,
    horizon: int,
    trials: int,
    seed: int,
) -> float:
    """Fraction of randomized trials whose Lyapunov gap is below gamma.

    Each trial draws its neighborhood sequence i.i.d. from the topology's
    selection distribution (uniform if unset) using a stream derived from
    (seed, trial index), runs for `horizon` steps, and tests whether the
    family's Lyapunov gap at the horizon is below gamma.
    """
    if gamma <= 0:
        raise ValueError(f"need gamma > 0, got {gamma}")
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    if horizon < 0:
        raise ValueError(f"need horizon >= 0, got {horizon}")
    m = topology.m
    rho0 = validate_density_matrix(rho0)
    gossip_target = gossip_fixed_point(rho0, m) if family.kind == "gossip" else None
    if horizon == 0:
        gap = lyapunov_gap(family, rho0, m, gossip_target=gossip_target)
        return 1.0 if gap < gamma else 0.0
    children = np.random.SeedSequence(seed).spawn(trials)
    hits = 0
    for child in children:
        trial_seed = int(child.generate_state(1)[0])
        schedule = Schedule.random(seed=trial_seed)
        result = run(rho0, topology, family, schedule, horizon, validate=False)
        gap = lyapunov_gap(family, result.final_state, m, gossip_target=gossip_target)
        if gap < gamma:
            hits += 1
    return hits / trials


def _site_masks(site: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    if not 1 <= site <= m:
        raise ValueError(f"site {site} out of range 1..{m}")
    n = np.arange(1 << m)
    bit = (n >> (m - site)) & 1
    return (bit == 0).astype(float), (bit == 1).astype(float)


def measure_local_z(rho: np.ndarray, site: int, m: int, rng: np.random.Generator) -> tuple[int, np.ndarray]:
    """Projective sigma_z measurement of one site.

    Returns (outcome, post_state) with outcome +1 for |0> and -1 for |1>,
    sampled by the Born rule.  Outcomes with probability below 1e-12 are
    never sampled.
    """
    rho = np.asarray(rho, dtype=complex)
    mask0, mask1 = _site_masks(site, m)
    p_plus = float(np.clip(np.dot(mask0, np.real(np.diag(rho))), 0.0, 1.0))
    if p_plus < MEASUREMENT_PROBABILITY_FLOOR:
        outcome = -1
    elif p_plus > 1.0 - MEASUREMENT_PROBABILITY_FLOOR:
        outcome = +1
    else:
        outcome = +1 if rng.random() < p_plus else -1
    mask = mask0 if outcome == +1 else mask1
    prob = p_plus if outcome == +1 else 1.0 - p_plus
    post = rho * np.outer(mask, mask) / prob
    return outcome, post


def measure_global_observable(rho: np.ndarray, m: int, rng: np.random.Generator) -> tuple[int, np.ndarray]:
    """Projective measurement of the conserved observable m*I + sum sigma_z.

    Samples an excitation subspace k (eigenvalue 2*(m-k)) with the Born-rule
    probability and returns (k, renormalized projected state).
    """
    rho = np.asarray(rho, dtype=complex)
    dim = 1 << m
    if rho.shape != (dim, dim):
        raise ValueError(f"state shape {rho.shape} does not match m={m}")
    diag = np.real(np.diag(rho))
    probs = np.empty(m + 1)
    masks = []
    for k in range(m + 1):
        mask = np.zeros(dim)
        mask[excitation_indices(m, k)] = 1.0
        masks.append(mask)
        probs[k] = max(float(np.dot(mask, diag)), 0.0)
    probs /= probs.sum()
    k = int(rng.choice(m + 1, p=probs))
    mask = masks[k]
    post = rho * np.outer(mask, mask) / float(np.dot(mask, diag))
    return k, post


def apply_flip(rho: np.ndarray, site: int, m: int) -> np.ndarray:
    """Conjugate by sigma_x on one site (exact basis relabeling)."""
    if not 1 <= site <= m:
        raise ValueError(f"site {site} out of range 1..{m}")
    rho = np.asarray(rho, dtype=complex)
    idx = np.arange(1 << m) ^ (1 << (m - site))
    return rho[np.ix_(idx, idx)]


@dataclass(frozen=True)
class MeasurementEvent:
    """One entry of a preparation protocol's measurement log.

    kind is "global" (value = measured excitation count), "site"
    (value = +/-1 outcome of a sigma_z measurement), or "flip" (sigma_x
    applied to the site; value 0).
    """

    kind: str
    site: int | None
    value: int


@dataclass
class PreparationResult:
    final_state: np.ndarray
    records: list[TrajectoryRecord]
    fidelity: float
    measurement_log: list[MeasurementEvent]


def prepare_dicke(
    rho0: np.ndarray,
    target_k: int,
    topology: NetworkTopology,
    rng: np.random.Generator,
    *,
    use_s_measurement: bool = False,
    steps: int = 300,
) -> PreparationResult:
    """Two-stage measurement-and-dissipation preparation of a Dicke state.

    Stage 1 places the state in the target excitation subspace: if
    `use_s_measurement`, measure the global observable first and skip the
    rest when the outcome already matches; otherwise measure every site in
    sigma_z and flip (sigma_x) as many qubits as needed to reach `target_k`
    excitations, choosing the lowest-indexed sites with the appropriate
    outcome.  Stage 2 runs the ssc family cyclically for `steps` steps, which
    drives the subspace to its unique symmetric pure state.

    Returns the final state, the stage-2 trajectory, the final fidelity with
    the target Dicke ket, and the measurement log.
    """
    m = topology.m
    if not 0 <= target_k <= m:
        raise ValueError(f"target excitation {target_k} out of range 0..{m}")
    if not is_connected(topology):
        raise ValueError("preparation requires a connected interaction graph")
    state = validate_density_matrix(rho0)
    log: list[MeasurementEvent] = []

    needs_initialization = True
    if use_s_measurement:
        k_meas, state = measure_global_observable(state, m, rng)
        log.append(MeasurementEvent(kind="global", site=None, value=k_meas))
        needs_initialization = k_meas != target_k

    if needs_initialization:
        outcomes = {}
        for site in range(1, m + 1):
            outcome, state = measure_local_z(state, site, m, rng)
            outcomes[site] = outcome
            log.append(MeasurementEvent(kind="site", site=site, value=outcome))
        ones = sum(1 for v in outcomes.values() if v == -1)
        if ones < target_k:
            flip_sites = [s for s in range(1, m + 1) if outcomes[s] == +1][: target_k - ones]
        elif ones > target_k:
            flip_sites = [s for s in range(1, m + 1) if outcomes[s] == -1][: ones - target_k]
        else:
            flip_sites = []
        for site in flip_sites:
            state = apply_flip(state, site, m)
            log.append(MeasurementEvent(kind="flip", site=site, value=0))

    result = run(state, topology, ChannelFamily.ssc(), Schedule.cyclic(), steps)
    target = dicke_ket(m, target_k)
    fidelity = float(np.real(target.conj() @ result.final_state @ target))
    return PreparationResult(
        final_state=result.final_state,
        records=result.records,
        fidelity=fidelity,
        measurement_log=log,
    )


def trajectory_csv_lines(records: list[TrajectoryRecord], m: int) -> list[str]:
    """CSV rows (header first) for a trajectory; 12 significant digits."""
    header = "step,purity,s_expectation,v_total,v_smc,smc_population," + ",".join(
        f"pop_dicke_{k}" for k in range(m + 1)
    )
    lines = [header]
    for rec in records:
        if len(rec.dicke_populations) != m + 1:
            raise ValueError("record population count does not match m")
        fields = [str(rec.step)] + [
            format(x, ".12g")
            for x in (rec.purity, rec.s_expectation, rec.v_total, rec.v_smc, rec.smc_population)
            + rec.dicke_populations
        ]
        lines.append(",".join(fields))
    return lines


def write_trajectory_csv(records: list[TrajectoryRecord], m: int, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(trajectory_csv_lines(records, m)))
        fh.write("\n")
