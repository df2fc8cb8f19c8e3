"""Dense complex Hermitian matrix tools.

Validating constructors, the dephasing map, coherence norms, spectral
routines and seeded random generation.  Matrices are numpy complex128
arrays throughout; constructors return fresh arrays and never mutate
their input.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10


def as_complex(m) -> np.ndarray:
    """Return a fresh square complex128 array, rejecting non-finite entries."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix contains non-finite entries")
    return a


def as_hermitian(m, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate Hermiticity within `tol` (max-norm) and return (M + M†)/2."""
    a = as_complex(m)
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian: max |M - M†| = {dev:.3e}")
    return 0.5 * (a + a.conj().T)


def as_density(m) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, spectrum >= -1e-10.

    Eigenvalues in [-1e-10, 0) are clamped to zero and the trace
    renormalized, so the returned matrix is exactly positive semidefinite.
    """
    a = as_hermitian(m)
    tr = np.trace(a).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"trace {tr!r} is not 1 within {TRACE_TOL}")
    w, v = jacobi_eigh(a)
    if w[0] < EIGENVALUE_FLOOR:
        raise ValueError(f"matrix is not positive semidefinite: min eigenvalue {w[0]:.3e}")
    if w[0] < 0.0:
        w = np.clip(w, 0.0, None)
        a = (v * w) @ v.conj().T
        a = 0.5 * (a + a.conj().T)
        a /= np.trace(a).real
    return a


def as_pure(vec) -> np.ndarray:
    """Validate a pure-state amplitude vector (unit norm within 1e-12)."""
    arr = np.array(vec, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"amplitude vector must be one-dimensional, got shape {arr.shape}")
    v = arr.reshape(-1)
    if v.size == 0 or not np.all(np.isfinite(v.real) & np.isfinite(v.imag)):
        raise ValueError("invalid amplitude vector")
    n2 = float(np.vdot(v, v).real)
    if abs(n2 - 1.0) > 1e-12:
        raise ValueError(f"squared norm {n2!r} is not 1 within 1e-12")
    return v.copy()


def density_of(vec) -> np.ndarray:
    """Rank-one projector |v><v| of a unit vector."""
    v = as_pure(vec)
    return np.outer(v, v.conj())


def dephase(m) -> np.ndarray:
    """Diagonal part of a matrix in the fixed reference basis."""
    a = np.asarray(m, dtype=np.complex128)
    return np.diag(np.diag(a))


def is_diagonal(m, tol: float = 1e-12) -> bool:
    a = np.asarray(m)
    off = a - np.diag(np.diag(a))
    return bool(np.max(np.abs(off)) <= tol) if a.size else True


def l1_coherence(rho) -> float:
    """Sum of off-diagonal entry moduli (exactly zero for diagonal input)."""
    a = np.asarray(rho, dtype=np.complex128)
    off = a - np.diag(np.diag(a))
    return float(np.sum(np.abs(off)))


def purity(rho) -> float:
    a = np.asarray(rho)
    return float(np.trace(a @ a).real)


def shannon_entropy(p) -> float:
    """Base-2 entropy of a nonnegative vector; zero entries contribute zero."""
    q = np.clip(np.asarray(p, dtype=float), 0.0, None)
    q = q[q > 1e-15]
    return float(-np.sum(q * np.log2(q)))


def von_neumann_entropy(rho) -> float:
    """Base-2 entropy of the spectrum."""
    return shannon_entropy(jacobi_eigvalsh(np.asarray(rho, dtype=np.complex128)))


def relative_entropy_coherence(rho) -> float:
    """Entropy of the dephased state minus entropy of the state (base 2)."""
    a = np.asarray(rho, dtype=np.complex128)
    return shannon_entropy(np.diag(a).real) - von_neumann_entropy(a)


class Norms(NamedTuple):
    two_norm: float
    op_norm: float
    max_abs: float


def matrix_norms(m) -> Norms:
    """Frobenius norm, operator norm (largest |eigenvalue|) and entry max-norm."""
    a = as_hermitian(m, tol=np.inf)  # symmetrize; callers pass Hermitian data
    w = jacobi_eigvalsh(a)
    return Norms(
        two_norm=float(np.linalg.norm(a)),
        op_norm=float(np.max(np.abs(w))) if w.size else 0.0,
        max_abs=float(np.max(np.abs(a))) if a.size else 0.0,
    )


# -- spectral routine ---------------------------------------------------------

def jacobi_eigh(m, tol: float = 1e-13, max_sweeps: int = 60):
    """Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi.

    Returns (w, V) with eigenvalues ascending and M ~= V diag(w) V†.
    Intended for the dense d <= 64 matrices this package works with.
    """
    a = np.array(m, dtype=np.complex128)
    d = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(d, dtype=np.complex128)
    if d == 1:
        return a.real.reshape(1).copy(), v
    scale = max(float(np.linalg.norm(a)), 1e-300)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-18 * scale:
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = 1.0 if tau == 0.0 else np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # columns: U = [[c*phase, s*phase], [-s, c]] on (p, q)
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * phase * cp - s * cq
                a[:, q] = s * phase * cp + c * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * np.conj(phase) * rp - s * rq
                a[q, :] = s * np.conj(phase) * rp + c * rq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * phase * vp - s * vq
                v[:, q] = s * phase * vp + c * vq
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def jacobi_eigvalsh(m, tol: float = 1e-13) -> np.ndarray:
    w, _ = jacobi_eigh(m, tol=tol)
    return w


# -- swap-operator purity identities -----------------------------------------

SWAP_DIM_LIMIT = 4096  # composite dimension d*d


def swap_operator(d: int) -> np.ndarray:
    """Exchange operator on the d*d composite space."""
    if d * d > SWAP_DIM_LIMIT:
        raise ValueError(f"composite dimension {d * d} exceeds {SWAP_DIM_LIMIT}")
    v = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            v[i * d + j, j * d + i] = 1.0
    return v


class SwapPurityCheck(NamedTuple):
    purity_pair: tuple[float, float]
    dephased_pair: tuple[float, float]


def swap_purity_check(rho) -> SwapPurityCheck:
    """Purity and dephased purity computed two ways.

    First entry of each pair contracts rho x rho against the exchange
    operator (dephased entrywise for the second pair); the second entry is
    the direct trace of the squared matrix.  The pairs agree to 1e-10 for
    valid states.
    """
    a = np.asarray(rho, dtype=np.complex128)
    d = a.shape[0]
    v = swap_operator(d)
    rr = np.kron(a, a)
    lhs = float(np.trace(rr @ v).real)
    rhs = float(np.trace(a @ a).real)
    v_deph = dephase(v)
    lhs_d = float(np.trace(rr @ v_deph).real)
    rhs_d = float(np.sum(np.diag(a).real ** 2))
    return SwapPurityCheck((lhs, rhs), (lhs_d, rhs_d))


# -- seeded random generation -------------------------------------------------

def random_unitary(d: int, seed: int) -> np.ndarray:
    """Haar-distributed unitary from a QR-corrected Gaussian matrix."""
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    ph = np.diag(r).copy()
    ph /= np.abs(ph)
    return q * ph.conj()


def random_pure(d: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_state(d: int, rank: int | None = None, seed: int = 0) -> np.ndarray:
    """Random density matrix G G† / Tr with a d x rank Gaussian factor."""
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise ValueError(f"rank must be in 1..{d}, got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return 0.5 * (rho + rho.conj().T)


# -- named states --------------------------------------------------------------

def basis_projector(d: int, j: int) -> np.ndarray:
    p = np.zeros((d, d), dtype=np.complex128)
    p[j, j] = 1.0
    return p


def maximally_coherent_state(d: int) -> np.ndarray:
    """Projector onto the uniform-superposition unit vector."""
    v = np.full(d, 1.0 / np.sqrt(d), dtype=np.complex128)
    return np.outer(v, v.conj())


def minimal_roc_mixture(d: int, p: float) -> np.ndarray:
    """Mixture (1+p) I/d - p |u><u| with u the uniform superposition.

    Valid for 0 <= p <= 1/(d-1); its robustness of coherence equals p while
    its off-diagonal l1 norm equals p (d - 1), saturating the dimensional
    lower bound.
    """
    if not 0.0 <= p <= 1.0 / (d - 1) + 1e-15:
        raise ValueError(f"p={p} outside [0, 1/(d-1)] for d={d}")
    rho = (1.0 + p) * np.eye(d, dtype=np.complex128) / d - p * maximally_coherent_state(d)
    return 0.5 * (rho + rho.conj().T)
