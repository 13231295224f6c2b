"""Damped Newton solver for preimages ``f(z) = w`` inside the ball."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .points import DomainError, as_point, norm

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 50
MAX_HALVINGS = 20
COND_MAX = 1e12


@dataclass
class NewtonResult:
    converged: bool
    z: np.ndarray
    residual: float
    iterations: int
    reason: str = ""
    cond: Optional[float] = None

    @property
    def interior(self):
        return bool(self.converged and norm(self.z) ** 2 < 1.0 - 1e-14)


def _residual(f, z, w):
    return float(np.linalg.norm(f(z) - w))


def newton_preimage(f, w, seed, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                    max_halvings=MAX_HALVINGS, cond_max=COND_MAX):
    """Solve ``f(z) = w`` from ``seed`` with backtracking Newton steps.

    Each step is halved until the residual decreases and the iterate stays
    in ``f``'s domain.  A Jacobian with condition number above ``cond_max``
    ends the run as a failure; failures carry the best residual seen.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    w = as_point(w)
    z = as_point(seed)
    if not np.all(f.in_domain(z)):
        raise DomainError("seed outside the map's domain")
    res = _residual(f, z, w)
    best = NewtonResult(False, z, res, 0, "max_iter")
    for it in range(1, max_iter + 1):
        if res < tol:
            return NewtonResult(True, z, res, it - 1, "converged")
        J = f.jacobian(z)
        cond = float(np.linalg.cond(J))
        if not np.isfinite(cond) or cond > cond_max:
            return NewtonResult(False, z, res, it - 1, "singular Jacobian", cond)
        step = np.linalg.solve(J, w - f(z))
        lam = 1.0
        for _ in range(max_halvings + 1):
            cand = z + lam * step
            if np.all(f.in_domain(cand)):
                r = _residual(f, cand, w)
                if r < res:
                    break
            lam *= 0.5
        else:
            return NewtonResult(False, z, res, it, "line search stalled", cond)
        z, res = cand, r
        if res < best.residual:
            best = NewtonResult(False, z, res, it, "max_iter", cond)
    if res < tol:
        return NewtonResult(True, z, res, max_iter, "converged")
    return best


def continuation_preimage(f, w, seed, stages=4, **kw):
    """Newton along ``f(seed) -> w`` in ``stages`` steps, warm-starting each."""
    w = as_point(w)
    start = f(as_point(seed))
    z = as_point(seed)
    result = None
    for k in range(1, stages + 1):
        target = start + (k / stages) * (w - start)
        result = newton_preimage(f, target, z, **kw)
        if not result.converged:
            return result
        z = result.z
    return result


def solve_preimage(f, w, seed, fallback=None, **kw):
    """Direct Newton, then continuation, then the fallback seed if given."""
    result = newton_preimage(f, w, seed, **kw)
    if result.converged:
        return result, "direct"
    cont = continuation_preimage(f, w, seed, **kw)
    if cont.converged:
        return cont, "continuation"
    if fallback is not None:
        alt = newton_preimage(f, w, fallback, **kw)
        if alt.converged:
            return alt, "fallback"
    return (result if result.residual <= cont.residual else cont), "failed"
