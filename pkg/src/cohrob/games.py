"""Phase- and channel-discrimination games and their coherence advantage.

A phase game applies one of several diagonal phase unitaries exp(i N phi_k)
(N the number operator) to a probe state, a channel game applies one of
several trace-preserving channels; the player then measures to guess which
one acted.  The best success probability is a semidefinite program over
measurements, solved here along two independent routes that must agree.
The advantage over the best incoherent probe is capped by one plus the
robustness of coherence, with equality at the canonical uniform-phase game.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sdp
from .linalg import as_density, as_hermitian, basis_projector
from .roc import roc_exact

PRIOR_SUM_TOL = 1e-12
PHASE_DISTINCT_TOL = 1e-12
TRACE_PRESERVING_TOL = 1e-10
CROSS_CHECK_TOL = 1e-7
POVM_ELEMENT_FLOOR = -1e-9
POVM_COMPLETENESS_TOL = 1e-9
BRANCH_DROP_TOL = 1e-12


# -- channels ---------------------------------------------------------------------


def phase_channel(d: int, phi: float) -> np.ndarray:
    """Diagonal unitary exp(i N phi) with N = sum_j j |j><j|."""
    if d < 1:
        raise ValueError("dimension must be positive")
    return np.diag(np.exp(1j * float(phi) * np.arange(d)))


def generalized_phase(d: int, k: int) -> np.ndarray:
    """k-th power of the clock unitary: diag entries exp(i 2 pi j k / d)."""
    return phase_channel(d, 2.0 * np.pi * int(k) / d)


def _check_priors(priors) -> tuple:
    p = tuple(float(x) for x in priors)
    if any(x < -PRIOR_SUM_TOL or x > 1.0 + PRIOR_SUM_TOL for x in p):
        raise ValueError("priors must lie in [0, 1]")
    if abs(sum(p) - 1.0) > PRIOR_SUM_TOL:
        raise ValueError(f"priors sum to {sum(p)!r}, not 1")
    return tuple(max(0.0, x) for x in p)


@dataclass(frozen=True)
class PhaseGame:
    """Ensemble of phase unitaries: entries (prior, phase) on dimension dim."""

    dim: int
    entries: tuple  # of (prior, phase in [0, 2pi))

    @staticmethod
    def build(dim: int, entries) -> "PhaseGame":
        if dim < 2:
            raise ValueError("dimension must be at least 2")
        raw = list(entries)
        if not raw:
            raise ValueError("at least one game entry is required")
        priors = _check_priors([e[0] for e in raw])
        phases = [float(e[1]) % (2.0 * np.pi) for e in raw]
        for a in range(len(phases)):
            for b in range(a + 1, len(phases)):
                delta = abs(phases[a] - phases[b])
                delta = min(delta, 2.0 * np.pi - delta)
                if delta <= PHASE_DISTINCT_TOL:
                    raise ValueError(
                        f"phases {a} and {b} coincide within {PHASE_DISTINCT_TOL}"
                    )
        return PhaseGame(dim=int(dim), entries=tuple(zip(priors, phases)))

    @property
    def priors(self) -> np.ndarray:
        return np.array([p for p, _ in self.entries])

    def states(self, rho) -> list:
        rho = as_density(rho)
        if rho.shape[0] != self.dim:
            raise ValueError(f"state dimension {rho.shape[0]} != game dimension {self.dim}")
        out = []
        for _, phi in self.entries:
            u = phase_channel(self.dim, phi)
            out.append(u @ rho @ u.conj().T)
        return out


@dataclass(frozen=True)
class ChannelGame:
    """Ensemble of trace-preserving channels given by Kraus lists."""

    dim: int
    entries: tuple  # of (prior, tuple of Kraus matrices)

    @staticmethod
    def build(dim: int, entries) -> "ChannelGame":
        if dim < 2:
            raise ValueError("dimension must be at least 2")
        raw = list(entries)
        if not raw:
            raise ValueError("at least one game entry is required")
        priors = _check_priors([e[0] for e in raw])
        channels = []
        for idx, (_, kraus) in enumerate(raw):
            ops = tuple(np.asarray(k, dtype=np.complex128) for k in kraus)
            if not ops or any(k.shape != (dim, dim) for k in ops):
                raise ValueError(f"channel {idx}: Kraus operators must be {dim}x{dim}")
            total = sum(k.conj().T @ k for k in ops)
            dev = float(np.max(np.abs(total - np.eye(dim))))
            if dev > TRACE_PRESERVING_TOL:
                raise ValueError(
                    f"channel {idx} is not trace preserving: deviation {dev:.3e}"
                )
            channels.append(ops)
        return ChannelGame(dim=int(dim), entries=tuple(zip(priors, channels)))

    @property
    def priors(self) -> np.ndarray:
        return np.array([p for p, _ in self.entries])

    def states(self, rho) -> list:
        rho = as_density(rho)
        if rho.shape[0] != self.dim:
            raise ValueError(f"state dimension {rho.shape[0]} != game dimension {self.dim}")
        out = []
        for _, kraus in self.entries:
            out.append(as_hermitian(sum(k @ rho @ k.conj().T for k in kraus)))
        return out


def canonical_game(d: int) -> PhaseGame:
    """The uniform game over the d clock phases 2 pi k / d with priors 1/d."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return PhaseGame.build(d, [(1.0 / d, 2.0 * np.pi * k / d) for k in range(d)])


# -- optimal discrimination -------------------------------------------------------


def validate_povm(elements, d: int | None = None) -> None:
    """Raise unless elements are near-PSD and sum to the identity."""
    mats = [as_hermitian(m) for m in elements]
    if not mats:
        raise ValueError("empty measurement")
    n = mats[0].shape[0]
    if d is not None and n != d:
        raise ValueError("measurement dimension mismatch")
    for idx, m in enumerate(mats):
        low = float(np.linalg.eigvalsh(m)[0])
        if low < POVM_ELEMENT_FLOOR:
            raise ValueError(f"measurement element {idx} has eigenvalue {low:.3e}")
    dev = float(np.max(np.abs(sum(mats) - np.eye(n))))
    if dev > POVM_COMPLETENESS_TOL:
        raise ValueError(f"measurement elements sum to identity only within {dev:.3e}")


def _povm_route(weighted, tol: float):
    """max sum_k <A_k, M_k> over POVMs, plus the optimal measurement."""
    m, d = len(weighted), weighted[0].shape[0]
    basis = sdp.hermitian_basis(d)
    eye = np.eye(d, dtype=np.complex128)
    problem = sdp.ConicProblem.build(
        blocks=[(sdp.PSD, d)] * m,
        cost=[-a for a in weighted],
        rhs=sdp.entry_coords(eye),
        stacks=(basis,) * m,
        validate=False,
    )
    y0 = sdp.entry_coords(-1.5 * eye)
    start = (
        [eye / m] * m,
        y0,
        [as_hermitian(1.5 * eye - a) for a in weighted],
    )
    sol = sdp.solve_or_raise(problem, sdp.SolveOptions(tol=tol, start=start))
    povm = [as_hermitian(x) for x in sol.x]
    correction = (eye - sum(povm)) / m
    povm = [as_hermitian(p + correction) for p in povm]
    return -float(sol.primal_value), povm


def _majorant_route(weighted, tol: float) -> float:
    """min Tr Q over Q dominating every weighted ensemble member."""
    m, d = len(weighted), weighted[0].shape[0]
    basis = sdp.hermitian_basis(d)
    eye = np.eye(d, dtype=np.complex128)
    n = d * d
    q_stack = np.tile(basis, (m, 1, 1))
    z_stacks = []
    rhs = np.zeros(m * n)
    for k, a in enumerate(weighted):
        z = np.zeros((m * n, d, d), dtype=np.complex128)
        z[k * n:(k + 1) * n] = -basis
        z_stacks.append(z)
        rhs[k * n:(k + 1) * n] = sdp.entry_coords(a)
    problem = sdp.ConicProblem.build(
        blocks=[(sdp.PSD, d)] * (m + 1),
        cost=[eye] + [np.zeros((d, d), dtype=np.complex128)] * m,
        rhs=rhs,
        stacks=tuple([q_stack] + z_stacks),
        validate=False,
    )
    y_one = sdp.entry_coords(eye / (2 * m))
    start = (
        [1.5 * eye] + [as_hermitian(1.5 * eye - a) for a in weighted],
        np.tile(y_one, m),
        [0.5 * eye] + [eye / (2 * m)] * m,
    )
    sol = sdp.solve_or_raise(problem, sdp.SolveOptions(tol=tol, start=start))
    return float(sol.primal_value)


def success_probability(game, rho, tol: float = 1e-8):
    """Optimal guessing probability for the game on probe rho, with a POVM.

    Solves the measurement program two independent ways (direct POVM
    maximization and the smallest dominating operator) and requires the
    values to agree within 1e-7 before returning.
    """
    states = game.states(rho)
    weighted = [p * s for p, s in zip(game.priors, states)]
    value, povm = _povm_route(weighted, tol)
    check = _majorant_route(weighted, tol)
    if abs(value - check) > CROSS_CHECK_TOL:
        raise sdp.SolverError(
            f"discrimination routes disagree: {value!r} vs {check!r}"
        )
    return value, povm


def incoherent_baseline(game, tol: float = 1e-8) -> float:
    """Best success probability achievable with an incoherent probe.

    Phase channels fix every diagonal state, so for phase games the answer
    is the largest prior.  For channel games the success probability is
    convex in the probe, so the maximum over the incoherent simplex sits at
    a basis projector; all d are evaluated.
    """
    if isinstance(game, PhaseGame):
        return float(np.max(game.priors))
    best = 0.0
    for j in range(game.dim):
        value, _ = success_probability(game, basis_projector(game.dim, j), tol=tol)
        best = max(best, value)
    return best


def advantage_ratio(rho, game, tol: float = 1e-8) -> float:
    """Success probability of the probe divided by the incoherent baseline."""
    value, _ = success_probability(game, rho, tol=tol)
    return value / incoherent_baseline(game, tol=tol)


# -- the operational theorem ------------------------------------------------------


@dataclass(frozen=True)
class TheoremReport:
    """Advantage-ratio audit of one state: equality at the canonical game,
    inequality on sampled games."""

    roc: float
    canonical_ratio: float
    equality_gap: float
    equality_ok: bool
    phase_ratios: tuple
    channel_ratios: tuple
    bounds_ok: bool


def verify_operational_theorem(
    rho,
    phase_samples: int = 5,
    channel_samples: int = 2,
    seed: int = 0,
    equality_tol: float = 1e-5,
    bound_slack: float = 1e-6,
    tol: float = 1e-8,
) -> TheoremReport:
    """Check that the canonical-game ratio equals 1 + robustness, and that
    sampled games never beat that cap."""
    rho = as_density(rho)
    d = rho.shape[0]
    value = roc_exact(rho, tol=tol).value
    cap = 1.0 + value

    canonical_ratio = advantage_ratio(rho, canonical_game(d), tol=tol)
    equality_gap = abs(canonical_ratio - cap)

    rng = np.random.default_rng(seed)
    phase_ratios = []
    for _ in range(phase_samples):
        game = random_phase_game(d, outcomes=int(rng.integers(2, d + 2)),
                                 seed=int(rng.integers(2 ** 31)))
        phase_ratios.append(advantage_ratio(rho, game, tol=tol))
    channel_ratios = []
    for _ in range(channel_samples):
        game = random_channel_game(d, outcomes=int(rng.integers(2, 4)),
                                   kraus_count=2, seed=int(rng.integers(2 ** 31)))
        channel_ratios.append(advantage_ratio(rho, game, tol=tol))

    bounds_ok = all(r <= cap + bound_slack for r in phase_ratios + channel_ratios)
    return TheoremReport(
        roc=value,
        canonical_ratio=canonical_ratio,
        equality_gap=equality_gap,
        equality_ok=equality_gap <= equality_tol,
        phase_ratios=tuple(phase_ratios),
        channel_ratios=tuple(channel_ratios),
        bounds_ok=bounds_ok,
    )


# -- random games and incoherent instruments --------------------------------------


def random_phase_game(d: int, outcomes: int, seed: int = 0) -> PhaseGame:
    """Random priors (flat simplex) and distinct uniform phases."""
    if outcomes < 1:
        raise ValueError("outcomes must be positive")
    rng = np.random.default_rng(seed)
    priors = rng.exponential(size=outcomes)
    priors /= priors.sum()
    while True:
        phases = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=outcomes))
        gaps = np.diff(np.concatenate([phases, [phases[0] + 2.0 * np.pi]]))
        if outcomes == 1 or float(np.min(gaps)) > 1e-6:
            break
    return PhaseGame.build(d, list(zip(priors, phases)))


def random_channel_game(d: int, outcomes: int, kraus_count: int = 2,
                        seed: int = 0) -> ChannelGame:
    """Random priors and Haar-style channels from isometry slices."""
    if outcomes < 1 or kraus_count < 1:
        raise ValueError("outcomes and kraus_count must be positive")
    rng = np.random.default_rng(seed)
    priors = rng.exponential(size=outcomes)
    priors /= priors.sum()
    entries = []
    for k in range(outcomes):
        g = rng.normal(size=(kraus_count * d, d)) + 1j * rng.normal(size=(kraus_count * d, d))
        q, _ = np.linalg.qr(g)
        kraus = [q[a * d:(a + 1) * d, :] for a in range(kraus_count)]
        entries.append((priors[k], kraus))
    return ChannelGame.build(d, entries)


def random_incoherent_instrument(d: int, m: int, seed: int = 0) -> list:
    """Random instrument whose Kraus operators are column-sparse.

    Each branch places one amplitude per column, with the target rows of a
    branch forming a permutation so the branch Gram matrix stays diagonal;
    per-column normalization across branches then gives exact trace
    preservation.  Every branch maps diagonal matrices to diagonal matrices.
    """
    if d < 1 or m < 1:
        raise ValueError("dimension and branch count must be positive")
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=(m, d)) + 1j * rng.normal(size=(m, d))
    amps /= np.sqrt(np.sum(np.abs(amps) ** 2, axis=0, keepdims=True))
    kraus = []
    for l in range(m):
        rows = rng.permutation(d)
        k = np.zeros((d, d), dtype=np.complex128)
        k[rows, np.arange(d)] = amps[l]
        kraus.append(k)
    return kraus


def apply_instrument(kraus, rho) -> list:
    """Branch outcomes [(weight, normalized state)], dropping weights < 1e-12."""
    rho = as_density(rho)
    out = []
    for k in kraus:
        k = np.asarray(k, dtype=np.complex128)
        branch = k @ rho @ k.conj().T
        weight = float(np.trace(branch).real)
        if weight < BRANCH_DROP_TOL:
            continue
        out.append((weight, as_hermitian(branch / weight)))
    return out


def is_incoherent_instrument(kraus, tol: float = 1e-10) -> bool:
    """True when the Kraus list is trace preserving and column-sparse."""
    mats = [np.asarray(k, dtype=np.complex128) for k in kraus]
    if not mats:
        return False
    d = mats[0].shape[0]
    if any(k.shape != (d, d) for k in mats):
        return False
    total = sum(k.conj().T @ k for k in mats)
    if float(np.max(np.abs(total - np.eye(d)))) > tol:
        return False
    for k in mats:
        if np.any(np.sum(np.abs(k) > 1e-12, axis=0) > 1):
            return False
    return True
