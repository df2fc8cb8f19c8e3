"""Coherence witnesses: validation, lower bounds, and device-data programs.

A coherence witness W is a Hermitian observable whose diagonal is entrywise
nonnegative and whose largest eigenvalue is at most 1.  For any such W and
any state, max(0, -Tr[rho W]) never exceeds the robustness of coherence, so
a measured expectation certifies coherence quantitatively.

Two data-driven programs operate on expectation datasets: the best witness
that is a linear combination of the measured observables (a lower bound from
data alone), and the exact minimum robustness among all states consistent
with the data.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sdp
from .linalg import as_density, as_hermitian, dephase, jacobi_eigvalsh

DIAG_TOL = 1e-10
EIG_TOL = 1e-10
COEFF_BOX = 1e6
FEASIBILITY_TOL = 1e-7
VALUE_FLOOR = 1e-9


class InfeasibleDataError(ValueError):
    """No quantum state reproduces the measured expectations within tolerance."""

    def __init__(self, deviation: float):
        super().__init__(
            f"no state matches the expectations: smallest achievable "
            f"worst-case deviation is {deviation:.3e}"
        )
        self.deviation = deviation


# -- validation and direct bounds -------------------------------------------------


@dataclass(frozen=True)
class WitnessReport:
    """Diagnostics from witness validation.

    diag_min: smallest diagonal entry (must be >= -1e-10).
    eig_excess: largest eigenvalue minus 1 (must be <= 1e-10).
    """

    valid: bool
    diag_min: float
    eig_excess: float


def validate_witness(witness) -> WitnessReport:
    """Check the two witness conditions: nonnegative diagonal, eigenvalues <= 1."""
    w = as_hermitian(witness)
    diag_min = float(np.min(np.diag(w).real))
    eig_excess = float(jacobi_eigvalsh(w)[-1]) - 1.0
    return WitnessReport(
        valid=diag_min >= -DIAG_TOL and eig_excess <= EIG_TOL,
        diag_min=diag_min,
        eig_excess=eig_excess,
    )


def witness_lower_bound(rho, witness, check: bool = True) -> float:
    """Lower bound max(0, -Tr[rho W]) on the robustness of coherence of rho."""
    rho = as_density(rho)
    w = as_hermitian(witness)
    if w.shape != rho.shape:
        raise ValueError(f"dimension mismatch: state {rho.shape} vs witness {w.shape}")
    if check:
        report = validate_witness(w)
        if not report.valid:
            raise ValueError(
                f"invalid witness: diag_min={report.diag_min:.3e}, "
                f"eig_excess={report.eig_excess:.3e}"
            )
    return max(0.0, -float(np.trace(rho @ w).real))


def population_gap_witness(rho) -> np.ndarray:
    """The witness (dephase(rho) - rho) / max population.

    Always valid: its diagonal is zero and its largest eigenvalue is at most
    1 because the dephased part dominates and the state is PSD.  Its bound
    equals the squared off-diagonal weight over the peak population.
    """
    rho = as_density(rho)
    peak = float(np.max(np.diag(rho).real))
    return (dephase(rho) - rho) / peak


# -- datasets ---------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessDataset:
    """Measured expectations o_i = Tr[O_i rho] of Hermitian observables O_i."""

    dim: int
    observables: tuple
    expectations: tuple

    @staticmethod
    def build(observables, expectations) -> "WitnessDataset":
        obs = tuple(as_hermitian(o) for o in observables)
        if not obs:
            raise ValueError("at least one observable is required")
        d = obs[0].shape[0]
        if any(o.shape != (d, d) for o in obs):
            raise ValueError("observables must share one dimension")
        vals = tuple(float(e) for e in expectations)
        if len(vals) != len(obs):
            raise ValueError(
                f"{len(obs)} observables but {len(vals)} expectations"
            )
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("expectations must be finite reals")
        return WitnessDataset(dim=d, observables=obs, expectations=vals)

    @staticmethod
    def from_state(rho, observables) -> "WitnessDataset":
        rho = as_density(rho)
        obs = tuple(as_hermitian(o) for o in observables)
        vals = [float(np.trace(o @ rho).real) for o in obs]
        return WitnessDataset.build(obs, vals)


# -- best witness compatible with a dataset --------------------------------------


@dataclass(frozen=True)
class WitnessFit:
    """Best data-built witness: W = sum_i c_i O_i + m * identity."""

    bound: float
    coefficients: np.ndarray
    offset: float
    witness: np.ndarray
    box_active: bool


def best_witness_from_data(data: WitnessDataset, tol: float = 1e-8) -> WitnessFit:
    """Maximize -(sum_i c_i o_i + m) over valid witnesses sum c_i O_i + m*1.

    The witness coefficients live in the solver's dual vector: each equality
    row corresponds to one coefficient, the PSD block enforces W <= 1, the
    first nonnegative block enforces the nonnegative diagonal, and two box
    blocks cap |c_i|, |m| at 1e6 for numerical safety (flagged if active).
    """
    d, k = data.dim, len(data.observables)
    basis_rows = list(data.observables) + [np.eye(d, dtype=np.complex128)]
    rhs = np.array([-o for o in data.expectations] + [-1.0])

    psd_stack = np.stack(basis_rows)
    diag_stack = -np.stack([np.diag(o).real for o in basis_rows])
    box_up = np.eye(k + 1)
    box_dn = -np.eye(k + 1)

    problem = sdp.ConicProblem.build(
        blocks=[(sdp.PSD, d), (sdp.NONNEG, d), (sdp.NONNEG, k + 1), (sdp.NONNEG, k + 1)],
        cost=[np.eye(d, dtype=np.complex128), np.zeros(d),
              np.full(k + 1, COEFF_BOX), np.full(k + 1, COEFF_BOX)],
        rhs=rhs,
        stacks=(psd_stack, diag_stack, box_up, box_dn),
        validate=False,
    )

    # strictly interior, equality-feasible start
    traces = np.array([float(np.trace(o).real) for o in data.observables] + [float(d)])
    resid = traces + rhs            # value of x3 - x4 needed at X1 = identity, x2 = 2
    x3 = np.maximum(resid, 0.0) + 1.0
    x4 = x3 - resid
    y0 = np.zeros(k + 1)
    y0[k] = 0.5
    start = (
        [np.eye(d, dtype=np.complex128), 2.0 * np.ones(d), x3, x4],
        y0,
        [0.5 * np.eye(d, dtype=np.complex128), 0.5 * np.ones(d),
         np.full(k + 1, COEFF_BOX) - y0, np.full(k + 1, COEFF_BOX) + y0],
    )
    sol = sdp.solve_or_raise(problem, sdp.SolveOptions(tol=tol, start=start))

    coeffs = sol.y[:k].copy()
    offset = float(sol.y[k])
    witness = sum(c * o for c, o in zip(coeffs, data.observables))
    witness = as_hermitian(witness + offset * np.eye(d))
    box_active = bool(np.max(np.abs(sol.y)) >= 0.999 * COEFF_BOX)
    return WitnessFit(
        bound=max(0.0, float(sol.dual_value)),
        coefficients=coeffs,
        offset=offset,
        witness=witness,
        box_active=box_active,
    )


# -- minimal robustness compatible with a dataset ---------------------------------


@dataclass(frozen=True)
class DataRocResult:
    """Minimum robustness among states matching the data, with a minimizer."""

    value: float
    state: np.ndarray
    deviation: float


def _phase1_deviation(data: WitnessDataset, slack: np.ndarray, tol: float) -> float:
    """Smallest worst-case |Tr[O_i rho'] - o_i| - slack_i over states rho'."""
    d, k = data.dim, len(data.observables)
    m = 2 * k + 1
    psd_stack = np.zeros((m, d, d), dtype=np.complex128)
    u_stack = np.zeros((m, k))
    v_stack = np.zeros((m, k))
    eta_stack = np.zeros((m, 1))
    rhs = np.zeros(m)
    for i, (obs, o_val) in enumerate(zip(data.observables, data.expectations)):
        psd_stack[i] = obs
        u_stack[i, i] = 1.0
        eta_stack[i, 0] = -1.0
        rhs[i] = o_val + slack[i]
        psd_stack[k + i] = obs
        v_stack[k + i, i] = -1.0
        eta_stack[k + i, 0] = 1.0
        rhs[k + i] = o_val - slack[i]
    psd_stack[2 * k] = np.eye(d)
    rhs[2 * k] = 1.0

    problem = sdp.ConicProblem.build(
        blocks=[(sdp.PSD, d), (sdp.NONNEG, k), (sdp.NONNEG, k), (sdp.NONNEG, 1)],
        cost=[np.zeros((d, d), dtype=np.complex128), np.zeros(k), np.zeros(k), np.ones(1)],
        rhs=rhs,
        stacks=(psd_stack, u_stack, v_stack, eta_stack),
        validate=False,
    )
    resid = np.array([r - float(np.trace(o).real) / d
                      for r, o in zip(rhs[:k], data.observables)])
    resid2 = np.array([r - float(np.trace(o).real) / d
                       for r, o in zip(rhs[k:2 * k], data.observables)])
    eta0 = float(max(np.max(np.abs(resid)), np.max(np.abs(resid2)))) + 1.0
    eps = min(0.1, 0.25 / k)
    y0 = np.concatenate([-eps * np.ones(k), eps * np.ones(k), [-1.0]])
    start = (
        [np.eye(d, dtype=np.complex128) / d, resid + eta0, eta0 - resid2, np.array([eta0])],
        y0,
        [np.eye(d, dtype=np.complex128), eps * np.ones(k), eps * np.ones(k),
         np.array([1.0 - 2 * k * eps])],
    )
    sol = sdp.solve_or_raise(problem, sdp.SolveOptions(tol=tol, start=start))
    return max(0.0, float(sol.primal_value))


def min_roc_from_data(data: WitnessDataset, slack=0.0, tol: float = 1e-8) -> DataRocResult:
    """Exact minimum robustness of coherence among states matching the data.

    Runs a feasibility pre-pass (raising InfeasibleDataError if even the
    best state misses some expectation by more than the tolerance), then
    minimizes the diagonal-majorant trace jointly over the state and the
    majorant under the expectation constraints.  `slack` relaxes each
    equality to an interval of that half-width (scalar or per-observable).
    """
    d, k = data.dim, len(data.observables)
    slack_arr = np.broadcast_to(np.asarray(slack, dtype=float), (k,)).copy()
    if np.any(slack_arr < 0.0):
        raise ValueError("slack must be nonnegative")

    deviation = _phase1_deviation(data, slack_arr, tol)
    if deviation > FEASIBILITY_TOL:
        raise InfeasibleDataError(deviation)

    basis = sdp.hermitian_basis(d)
    n_entry = d * d
    relaxed = bool(np.any(slack_arr > 0.0))
    n_obs_rows = 2 * k if relaxed else k
    m = n_entry + 1 + n_obs_rows

    z_stack = np.zeros((m, d, d), dtype=np.complex128)
    z_stack[:n_entry] = -basis
    rho_stack = np.zeros((m, d, d), dtype=np.complex128)
    rho_stack[:n_entry] = -basis
    rho_stack[n_entry] = np.eye(d)
    t_stack = np.zeros((m, d))
    t_stack[:d, :] = np.eye(d)
    rhs = np.zeros(m)
    rhs[n_entry] = 1.0

    blocks = [(sdp.PSD, d), (sdp.PSD, d), (sdp.NONNEG, d)]
    cost = [np.zeros((d, d), dtype=np.complex128),
            np.zeros((d, d), dtype=np.complex128), np.ones(d)]
    stacks = [z_stack, rho_stack, t_stack]
    if relaxed:
        a_stack = np.zeros((m, k))
        b_stack = np.zeros((m, k))
        for i, (obs, o_val) in enumerate(zip(data.observables, data.expectations)):
            rho_stack[n_entry + 1 + i] = obs
            a_stack[n_entry + 1 + i, i] = 1.0
            rhs[n_entry + 1 + i] = o_val + slack_arr[i]
            rho_stack[n_entry + 1 + k + i] = obs
            b_stack[n_entry + 1 + k + i, i] = -1.0
            rhs[n_entry + 1 + k + i] = o_val - slack_arr[i]
        blocks += [(sdp.NONNEG, k), (sdp.NONNEG, k)]
        cost += [np.zeros(k), np.zeros(k)]
        stacks += [a_stack, b_stack]
    else:
        for i, (obs, o_val) in enumerate(zip(data.observables, data.expectations)):
            rho_stack[n_entry + 1 + i] = obs
            rhs[n_entry + 1 + i] = o_val

    problem = sdp.ConicProblem.build(
        blocks=blocks, cost=cost, rhs=rhs, stacks=tuple(stacks), validate=False,
    )
    sol = sdp.solve_or_raise(problem, sdp.SolveOptions(tol=tol))
    if sol.primal_value - 1.0 < 1e-6 and tol > 1e-10:
        refined = sdp.solve(problem, sdp.SolveOptions(tol=1e-10))
        if refined.status is sdp.SolveStatus.OPTIMAL:
            sol = refined

    value = max(0.0, float(sol.primal_value) - 1.0)
    if value < VALUE_FLOOR:
        value = 0.0
    state = as_density(sol.x[1] / float(np.trace(sol.x[1]).real))
    return DataRocResult(value=value, state=state, deviation=deviation)
