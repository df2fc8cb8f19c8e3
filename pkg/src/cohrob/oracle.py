"""Independent reference computations used to gate the main code paths.

These deliberately avoid the semidefinite engine: the robustness oracle is a
penalized derivative-free descent, and the two-outcome discrimination oracle
is a closed-form eigenvalue expression.  Slower and less accurate than the
engine, but failures cannot be correlated with it.
"""
from __future__ import annotations

import numpy as np

from .linalg import as_hermitian, jacobi_eigvalsh

PENALTY_LADDER = tuple(10.0 ** k for k in range(2, 11))  # 1e2 .. 1e10


def _penalized(g, rho, mu) -> float:
    """sum exp(g) + mu * max(0, -min eig(diag(e^g) - rho))^2.

    The hinge on the smallest eigenvalue is nonsmooth wherever eigenvalues
    cross, so minimization uses a derivative-free simplex descent.
    """
    e = np.exp(g)
    w0 = float(np.linalg.eigvalsh(np.diag(e) - rho)[0])
    viol = max(0.0, -w0)
    return float(np.sum(e)) + mu * viol * viol


def _simplex_descend(fun, x0, scale: float, iters: int = 400,
                     ftol: float = 1e-13, xtol: float = 1e-9):
    """Nelder-Mead simplex descent (reflection 1, expansion 2, contraction 1/2)."""
    n = x0.size
    pts = np.vstack([x0] + [x0 + scale * np.eye(n)[i] for i in range(n)])
    vals = np.array([fun(p) for p in pts])
    for _ in range(iters):
        order = np.argsort(vals)
        pts, vals = pts[order], vals[order]
        if vals[-1] - vals[0] < ftol and np.max(np.abs(pts[-1] - pts[0])) < xtol:
            break
        centroid = np.mean(pts[:-1], axis=0)
        worst = pts[-1]
        refl = centroid + (centroid - worst)
        f_refl = fun(refl)
        if f_refl < vals[0]:
            exp_pt = centroid + 2.0 * (centroid - worst)
            f_exp = fun(exp_pt)
            pts[-1], vals[-1] = (exp_pt, f_exp) if f_exp < f_refl else (refl, f_refl)
        elif f_refl < vals[-2]:
            pts[-1], vals[-1] = refl, f_refl
        else:
            if f_refl < vals[-1]:
                contr = centroid + 0.5 * (refl - centroid)
                f_contr = fun(contr)
                better = f_contr <= f_refl
            else:
                contr = centroid + 0.5 * (worst - centroid)
                f_contr = fun(contr)
                better = f_contr < vals[-1]
            if better:
                pts[-1], vals[-1] = contr, f_contr
            else:
                pts[1:] = pts[0] + 0.5 * (pts[1:] - pts[0])
                vals[1:] = [fun(p) for p in pts[1:]]
    best = int(np.argmin(vals))
    return pts[best], float(vals[best])


def roc_descent_oracle(rho, restarts: int = 6, seed: int = 0) -> float:
    """Upper bound on the robustness by penalized multiplicative descent.

    Parameterizes the diagonal majorant as D = diag(e^g) and minimizes
    sum e^g plus a squared-hinge penalty on the smallest eigenvalue of
    D - rho, tightening the penalty weight tenfold per round from 1e2 up
    to 1e10.  Each restart's final iterate is lifted back into feasibility,
    so the returned value is always a valid upper bound on the exact one.
    Deterministic for a given seed.
    """
    rho = as_hermitian(rho)
    d = rho.shape[0]
    rng = np.random.default_rng(seed)
    base = np.log(np.diag(rho).real + 1.0)
    best = np.inf
    for restart in range(max(1, restarts)):
        g = base + (0.4 * rng.normal(size=d) if restart else 0.0)
        scale = 0.5
        for mu in PENALTY_LADDER:
            g, _ = _simplex_descend(lambda x, m=mu: _penalized(x, rho, m), g, scale)
            scale = max(0.02, scale * 0.5)
        # lift uniformly until diag(e^g) - rho is PSD within 1e-10
        e = np.exp(g)
        wmin = float(np.linalg.eigvalsh(np.diag(e) - rho)[0])
        if wmin < 0.0:
            e = e * (1.0 + (-wmin + 1e-12) / float(np.min(e)))
        best = min(best, float(np.sum(e)) - 1.0)
    return max(0.0, best)


def helstrom_two_outcome(priors, states) -> float:
    """Exact optimal success probability for two-outcome qubit discrimination.

    Computes (1 + trace norm of p0 rho0 - p1 rho1) / 2.  Only the
    two-outcome qubit case is supported; anything else is rejected.
    """
    priors = np.asarray(priors, dtype=float).reshape(-1)
    if priors.size != 2 or len(states) != 2:
        raise ValueError("unsupported ensemble shape: exactly two outcomes required")
    if np.any(priors < -1e-12) or abs(float(np.sum(priors)) - 1.0) > 1e-12:
        raise ValueError("priors must be nonnegative and sum to 1")
    mats = [as_hermitian(s) for s in states]
    if any(m.shape != (2, 2) for m in mats):
        raise ValueError("unsupported ensemble shape: qubit states required")
    diff = priors[0] * mats[0] - priors[1] * mats[1]
    tn = float(np.sum(np.abs(jacobi_eigvalsh(diff))))
    return 0.5 * (1.0 + tn)
