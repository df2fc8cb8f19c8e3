"""Self-contained dense semidefinite programming engine.

Solves   min  sum_b <C_b, X_b>
         s.t. sum_b <A_ib, X_b> = rhs_i   (i = 1..m)
              X_b in PSD cone or nonnegative orthant, per block

by a primal-dual path-following method with Nesterov-Todd scaling and a
Mehrotra predictor-corrector step.  Complex Hermitian blocks are mapped to
real symmetric blocks of twice the size; the factor-2 value inflation this
introduces is divided out when the solution is extracted.

The engine is deliberately small: dense linear algebra, a Cholesky-factored
Schur complement with a ridge fallback, and no infeasibility certificates
(every problem built by this package is constructed feasible).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .linalg import as_hermitian

PSD = "psd"
NONNEG = "nonneg"


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    MAX_ITER = "max_iter"
    NUMERICAL_FAILURE = "numerical_failure"


class SolverError(RuntimeError):
    """Raised by solve_or_raise when a solve does not reach OPTIMAL."""


# -- realification -------------------------------------------------------------

def realify(h) -> np.ndarray:
    """Real symmetric image [[A, -B], [B, A]] of a Hermitian matrix A + iB.

    Eigenvalues are preserved with multiplicity doubled, so positive
    semidefiniteness and traces (up to the factor 2) carry over.
    """
    a = np.asarray(h, dtype=np.complex128)
    re, im = a.real, a.imag
    return np.block([[re, -im], [im, re]])


def _realify_stack(stack: np.ndarray) -> np.ndarray:
    m, n = stack.shape[0], stack.shape[1]
    out = np.empty((m, 2 * n, 2 * n))
    re, im = stack.real, stack.imag
    out[:, :n, :n] = re
    out[:, n:, n:] = re
    out[:, :n, n:] = -im
    out[:, n:, :n] = im
    return out


def unrealify(m) -> np.ndarray:
    """Hermitian matrix recovered from a real symmetric 2d x 2d block.

    Orthogonally projects onto the image of `realify`, which maps feasible
    points of the realified problem to feasible points of the complex one.
    """
    a = np.asarray(m, dtype=float)
    d = a.shape[0] // 2
    p, r = a[:d, :d], a[d:, d:]
    s = a[:d, d:]
    out = 0.5 * (p + r) + 0.5j * (s.T - s)
    return 0.5 * (out + out.conj().T)


# -- problem container ----------------------------------------------------------

GRAM_RANK_TOL = 1e-8


@dataclass(frozen=True)
class ConicProblem:
    """Standard-form conic problem over PSD and nonnegative blocks.

    blocks: sequence of (kind, size) with kind "psd" (complex Hermitian,
        size d) or "nonneg" (vector, size n).
    cost: per block, a Hermitian (d, d) array or a real (n,) array.
    stacks: per block, the m constraint coefficients stacked along axis 0,
        shaped (m, d, d) complex or (m, n) real.
    rhs: real vector, one entry per constraint.
    """

    blocks: tuple
    cost: tuple
    stacks: tuple
    rhs: np.ndarray

    @staticmethod
    def build(blocks, cost, rhs, coeffs=None, stacks=None, validate=True) -> "ConicProblem":
        """Assemble and check a problem.

        Constraints are given either as `coeffs` (list over constraints of
        per-block entries, None meaning zero) or as pre-stacked per-block
        arrays `stacks`.  With validate=False the per-entry Hermiticity
        checks are skipped (for internally generated, structurally
        Hermitian data); the constraint independence check always runs.
        """
        blocks = tuple((str(k), int(n)) for k, n in blocks)
        if not blocks:
            raise ValueError("at least one block is required")
        for k, n in blocks:
            if k not in (PSD, NONNEG):
                raise ValueError(f"unknown block kind {k!r}")
            if n < 1:
                raise ValueError("block sizes must be positive")
        rhs = np.asarray(rhs, dtype=float).reshape(-1)
        m = rhs.size
        if m < 1:
            raise ValueError("at least one constraint is required")

        def check_entry(entry, kind, n):
            if kind == PSD:
                if entry is None:
                    return np.zeros((n, n), dtype=np.complex128)
                a = as_hermitian(entry) if validate else np.asarray(entry, dtype=np.complex128)
                if a.shape != (n, n):
                    raise ValueError("block data shape mismatch")
                return a
            if entry is None:
                return np.zeros(n)
            a = np.asarray(entry, dtype=float).reshape(-1)
            if a.shape != (n,):
                raise ValueError("block data shape mismatch")
            return a

        cost = tuple(check_entry(c, k, n) for c, (k, n) in zip(cost, blocks, strict=True))
        if stacks is None:
            if coeffs is None or len(coeffs) != m:
                raise ValueError("provide coeffs (one row per constraint) or stacks")
            stacks = tuple(
                np.stack([check_entry(row[bi], k, n) for row in coeffs])
                for bi, (k, n) in enumerate(blocks)
            )
        else:
            checked = []
            for st, (k, n) in zip(stacks, blocks, strict=True):
                if k == PSD:
                    a = np.asarray(st, dtype=np.complex128)
                    if a.shape != (m, n, n):
                        raise ValueError("stack shape mismatch")
                    if validate:
                        dev = np.max(np.abs(a - a.conj().transpose(0, 2, 1))) if a.size else 0.0
                        if dev > 1e-12:
                            raise ValueError(f"constraint data not Hermitian: {dev:.3e}")
                else:
                    a = np.asarray(st, dtype=float)
                    if a.shape != (m, n):
                        raise ValueError("stack shape mismatch")
                checked.append(a)
            stacks = tuple(checked)
        problem = ConicProblem(blocks=blocks, cost=cost, stacks=stacks, rhs=rhs)
        problem._check_independent()
        return problem

    def _check_independent(self):
        m = self.rhs.size
        gram = np.zeros((m, m))
        for (kind, _), st in zip(self.blocks, self.stacks):
            f = st.reshape(m, -1)
            if kind == PSD:
                gram += (f @ f.conj().T).real
            else:
                gram += f @ f.T
        # cheap sufficient test first: lambda_min > tol * trace >= tol * lambda_max
        thr = GRAM_RANK_TOL * max(float(np.trace(gram)), 1e-300)
        try:
            np.linalg.cholesky(gram - thr * np.eye(m))
            return
        except np.linalg.LinAlgError:
            pass
        w = np.linalg.eigvalsh(gram)
        top = max(float(w[-1]), 1e-300)
        rank = int(np.sum(w > GRAM_RANK_TOL * top))
        if rank < m:
            raise ValueError(f"constraints are linearly dependent (rank {rank} < {m})")


@dataclass
class SolveOptions:
    tol: float = 1e-8
    max_iter: int = 200
    fraction_to_boundary: float = 0.98
    ridge: float = 1e-12
    record_history: bool = True
    log_path: str | None = None
    # optional strictly interior starting point (x blocks, y, s blocks) in the
    # complex convention; identity / zero when None.  A feasible start keeps
    # every iterate feasible, so weak duality holds along the whole path.
    start: tuple | None = None


@dataclass
class ConicSolution:
    status: SolveStatus
    x: list
    y: np.ndarray
    s: list
    primal_value: float
    dual_value: float
    gap: float
    iterations: int
    history: list = field(default_factory=list)


# -- internal real-arithmetic core ----------------------------------------------

def _chol(m, ridge_scale=1.0):
    for jitter in (0.0, 1e-14, 1e-12, 1e-10, 1e-8):
        try:
            return np.linalg.cholesky(m if jitter == 0.0 else m + jitter * ridge_scale * np.eye(m.shape[0]))
        except np.linalg.LinAlgError:
            continue
    return None


def _nt_scaling(x, s):
    """NT scaling of a PSD block: returns (R, Rinv, W, lam) with
    Rinv x Rinv.T = R.T s R = diag(lam) and W = R R.T."""
    lx = _chol(x, max(float(np.max(np.diag(x))), 1e-300))
    ls = _chol(s, max(float(np.max(np.diag(s))), 1e-300))
    if lx is None or ls is None:
        return None
    u, lam, vt = np.linalg.svd(ls.T @ lx)
    if lam[-1] <= 0.0:
        return None
    inv_sqrt = 1.0 / np.sqrt(lam)
    r = lx @ vt.T * inv_sqrt
    rinv = (inv_sqrt[:, None] * u.T) @ ls.T
    return r, rinv, r @ r.T, lam


def _max_step_psd(lx, dx):
    z = np.linalg.solve(lx, dx)
    n = np.linalg.solve(lx, z.T)
    wmin = float(np.linalg.eigvalsh(0.5 * (n + n.T))[0])
    if wmin >= -1e-14:
        return np.inf
    return 1.0 / (-wmin)


def _max_step_nonneg(x, dx):
    neg = dx < 0
    if not np.any(neg):
        return np.inf
    return float(np.min(-x[neg] / dx[neg]))


def solve(problem: ConicProblem, options: SolveOptions | None = None) -> ConicSolution:
    opts = options or SolveOptions()
    kinds = [k for k, _ in problem.blocks]
    m = problem.rhs.size

    # realified data; the uniform factor 2 on rhs keeps PSD and nonneg
    # blocks consistent and is divided out at extraction
    astacks, costs, sizes = [], [], []
    for (kind, n), st, c in zip(problem.blocks, problem.stacks, problem.cost):
        if kind == PSD:
            astacks.append(_realify_stack(st))
            costs.append(realify(c))
            sizes.append(2 * n)
        else:
            astacks.append(2.0 * st)
            costs.append(2.0 * c)
            sizes.append(n)
    flats = [a.reshape(m, -1) for a in astacks]
    rhs = 2.0 * problem.rhs
    nu = float(sum(sizes))
    cnorm = np.sqrt(sum(float(np.sum(c * c)) for c in costs))
    bnorm = float(np.linalg.norm(rhs))

    if opts.start is None:
        xs = [np.eye(n) if k == PSD else np.ones(n) for k, n in zip(kinds, sizes)]
        ss = [np.eye(n) if k == PSD else np.ones(n) for k, n in zip(kinds, sizes)]
        y = np.zeros(m)
    else:
        x0, y0, s0 = opts.start
        xs = [realify(v) if k == PSD else np.asarray(v, dtype=float).copy()
              for k, v in zip(kinds, x0)]
        ss = [realify(v) if k == PSD else 2.0 * np.asarray(v, dtype=float)
              for k, v in zip(kinds, s0)]
        y = np.asarray(y0, dtype=float).copy()

    def apply_a(vals):
        out = np.zeros(m)
        for f, v in zip(flats, vals):
            out += f @ v.reshape(-1)
        return out

    def apply_at(vec):
        return [
            np.tensordot(vec, a, axes=1) if k == PSD else vec @ a
            for k, a in zip(kinds, astacks)
        ]

    history = []
    log_fh = open(opts.log_path, "w") if opts.log_path else None
    status = SolveStatus.MAX_ITER
    it = 0
    try:
        for it in range(opts.max_iter + 1):
            pobj = sum(float(np.sum(c * x)) for c, x in zip(costs, xs))
            dobj = float(rhs @ y)
            rp = rhs - apply_a(xs)
            aty = apply_at(y)
            rds = [c - at - s for c, at, s in zip(costs, aty, ss)]
            compl = sum(
                float(np.sum(x * s)) if k == PSD else float(x @ s)
                for k, x, s in zip(kinds, xs, ss)
            )
            mu = compl / nu

            p_ext, d_ext = 0.5 * pobj, 0.5 * dobj
            gap_rel = abs(p_ext - d_ext) / (1.0 + abs(p_ext))
            rp_rel = float(np.linalg.norm(rp)) / (1.0 + bnorm)
            rd_rel = np.sqrt(sum(float(np.sum(r * r)) for r in rds)) / (1.0 + cnorm)
            compl_rel = 0.5 * compl / (1.0 + abs(p_ext))
            if opts.record_history:
                entry = {"iteration": it, "primal": p_ext, "dual": d_ext, "gap": gap_rel}
                history.append(entry)
                if log_fh:
                    log_fh.write(json.dumps(entry) + "\n")

            if rp_rel <= opts.tol and rd_rel <= opts.tol and gap_rel <= opts.tol and compl_rel <= opts.tol:
                status = SolveStatus.OPTIMAL
                break
            if it == opts.max_iter:
                status = SolveStatus.MAX_ITER
                break

            # NT scalings
            scal = []
            ok = True
            for k, x, s in zip(kinds, xs, ss):
                if k == PSD:
                    nt = _nt_scaling(x, s)
                    if nt is None:
                        ok = False
                        break
                    scal.append(nt)
                else:
                    scal.append((None, None, np.sqrt(x / s), np.sqrt(x * s)))
            if not ok:
                status = SolveStatus.NUMERICAL_FAILURE
                break

            # Schur complement  M = A(W A^T(.) W)
            schur = np.zeros((m, m))
            for k, a, f, sc in zip(kinds, astacks, flats, scal):
                w = sc[2]
                if k == PSD:
                    t = np.matmul(np.matmul(w[None], a), w[None])
                    schur += f @ t.reshape(m, -1).T
                else:
                    schur += (a * (w * w)) @ a.T
            ridge_scale = max(1.0, float(np.max(np.diag(schur))))
            lm = None
            for jitter in (0.0, opts.ridge, 1e-10, 1e-8, 1e-6):
                try:
                    lm = np.linalg.cholesky(
                        schur if jitter == 0.0 else schur + jitter * ridge_scale * np.eye(m)
                    )
                    break
                except np.linalg.LinAlgError:
                    continue
            if lm is None:
                status = SolveStatus.NUMERICAL_FAILURE
                break

            def newton(sigma_mu, corr):
                ks = []
                for k, x, s, sc, e in zip(kinds, xs, ss, scal, corr):
                    if k == PSD:
                        r, _, _, lam = sc
                        rhs_sym = -np.diag(lam * lam)
                        if sigma_mu:
                            rhs_sym = rhs_sym + sigma_mu * np.eye(lam.size)
                        if e is not None:
                            rhs_sym = rhs_sym - e
                        g = rhs_sym * (2.0 / np.add.outer(lam, lam))
                        ks.append(r @ g @ r.T)
                    else:
                        num = sigma_mu - x * s
                        if e is not None:
                            num = num - e
                        ks.append(num / s)
                vec = rp - apply_a(ks)
                for k, sc, rd, f in zip(kinds, scal, rds, flats):
                    w = sc[2]
                    if k == PSD:
                        vec += f @ (w @ rd @ w).reshape(-1)
                    else:
                        vec += f @ (w * w * rd)
                dy = np.linalg.solve(lm.T, np.linalg.solve(lm, vec))
                atdy = apply_at(dy)
                dss, dxs = [], []
                for k, sc, rd, at, kk in zip(kinds, scal, rds, atdy, ks):
                    ds = rd - at
                    if k == PSD:
                        w = sc[2]
                        dx = kk - w @ ds @ w
                        dx = 0.5 * (dx + dx.T)
                        ds = 0.5 * (ds + ds.T)
                    else:
                        dx = kk - sc[2] ** 2 * ds
                    dss.append(ds)
                    dxs.append(dx)
                return dxs, dy, dss

            def max_steps(dxs, dss):
                ap = ad = np.inf
                for k, x, s, sc, dx, ds in zip(kinds, xs, ss, scal, dxs, dss):
                    if k == PSD:
                        lx = _chol(x, max(float(np.max(np.diag(x))), 1e-300))
                        lsf = _chol(s, max(float(np.max(np.diag(s))), 1e-300))
                        if lx is None or lsf is None:
                            return None, None
                        ap = min(ap, _max_step_psd(lx, dx))
                        ad = min(ad, _max_step_psd(lsf, ds))
                    else:
                        ap = min(ap, _max_step_nonneg(x, dx))
                        ad = min(ad, _max_step_nonneg(s, ds))
                return ap, ad

            none_corr = [None] * len(kinds)
            dxa, dya, dsa = newton(0.0, none_corr)
            ap_aff, ad_aff = max_steps(dxa, dsa)
            if ap_aff is None:
                status = SolveStatus.NUMERICAL_FAILURE
                break
            ap_aff, ad_aff = min(1.0, ap_aff), min(1.0, ad_aff)
            compl_aff = 0.0
            for k, x, s, dx, ds in zip(kinds, xs, ss, dxa, dsa):
                xa, sa = x + ap_aff * dx, s + ad_aff * ds
                compl_aff += float(np.sum(xa * sa)) if k == PSD else float(xa @ sa)
            sigma = float(np.clip((max(compl_aff, 0.0) / nu / mu) ** 3, 0.0, 1.0)) if mu > 0 else 0.0

            corr = []
            for k, sc, dx, ds in zip(kinds, scal, dxa, dsa):
                if k == PSD:
                    r, rinv, _, _ = sc
                    dxh = rinv @ dx @ rinv.T
                    dsh = r.T @ ds @ r
                    corr.append(0.5 * (dxh @ dsh + dsh @ dxh))
                else:
                    corr.append(dx * ds)
            dxs, dy, dss = newton(sigma * mu, corr)
            ap, ad = max_steps(dxs, dss)
            if ap is None:
                status = SolveStatus.NUMERICAL_FAILURE
                break
            tau = opts.fraction_to_boundary
            ap = min(1.0, tau * ap)
            ad = min(1.0, tau * ad)
            if max(ap, ad) < 1e-14:
                status = SolveStatus.NUMERICAL_FAILURE
                break
            for bi, k in enumerate(kinds):
                xs[bi] = xs[bi] + ap * dxs[bi]
                ss[bi] = ss[bi] + ad * dss[bi]
                if k == PSD:
                    xs[bi] = 0.5 * (xs[bi] + xs[bi].T)
                    ss[bi] = 0.5 * (ss[bi] + ss[bi].T)
            y = y + ad * dy
    finally:
        if log_fh:
            log_fh.close()

    x_out, s_out = [], []
    for k, x, s in zip(kinds, xs, ss):
        if k == PSD:
            x_out.append(unrealify(x))
            s_out.append(unrealify(s))
        else:
            x_out.append(x.copy())
            s_out.append(0.5 * s)
    pobj = 0.5 * sum(float(np.sum(c * x)) for c, x in zip(costs, xs))
    dobj = 0.5 * float(rhs @ y)
    return ConicSolution(
        status=status,
        x=x_out,
        y=y.copy(),
        s=s_out,
        primal_value=pobj,
        dual_value=dobj,
        gap=abs(pobj - dobj) / (1.0 + abs(pobj)),
        iterations=it,
        history=history,
    )


def solve_or_raise(problem: ConicProblem, options: SolveOptions | None = None) -> ConicSolution:
    sol = solve(problem, options)
    if sol.status is not SolveStatus.OPTIMAL:
        raise SolverError(f"solve ended with status {sol.status.value}")
    return sol


# -- Hermitian coordinate helpers -----------------------------------------------

@lru_cache(maxsize=32)
def hermitian_basis(d: int) -> np.ndarray:
    """Stack of d^2 Hermitian matrices spanning entrywise equality constraints.

    Order: E_jj for each j, then for each pair k < l the real-part matrix
    (E_kl + E_lk) and the imaginary-part matrix i(E_kl - E_lk).
    """
    mats = []
    for j in range(d):
        e = np.zeros((d, d), dtype=np.complex128)
        e[j, j] = 1.0
        mats.append(e)
    for k in range(d):
        for l in range(k + 1, d):
            h = np.zeros((d, d), dtype=np.complex128)
            h[k, l] = 1.0
            h[l, k] = 1.0
            mats.append(h)
            g = np.zeros((d, d), dtype=np.complex128)
            g[k, l] = 1.0j
            g[l, k] = -1.0j
            mats.append(g)
    out = np.stack(mats)
    out.setflags(write=False)
    return out


def entry_coords(mat) -> np.ndarray:
    """Coordinates b with <basis_i, M> = b_i for the hermitian_basis order."""
    a = np.asarray(mat, dtype=np.complex128)
    d = a.shape[0]
    out = np.empty(d * d)
    out[:d] = np.diag(a).real
    idx = d
    for k in range(d):
        for l in range(k + 1, d):
            out[idx] = 2.0 * a[k, l].real
            out[idx + 1] = 2.0 * a[k, l].imag
            idx += 2
    return out


def hermitian_from_coords(y, d: int) -> np.ndarray:
    """Hermitian matrix sum_i y_i basis_i (inverse map used for dual reads)."""
    y = np.asarray(y, dtype=float)
    return np.tensordot(y, hermitian_basis(d), axes=1)
