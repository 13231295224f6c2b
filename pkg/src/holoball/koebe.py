"""Probing the uniform covering radius of normalized families.

For maps ``f`` of the ball with ``f(0) = 0`` and ``|det df_0| >= c`` there is
an ``r' > 0`` with ``B(0, r')`` inside ``f(B(0, t'))`` for the whole family.
Here ``r'`` is lower-bounded on a finite probe set by continuing Newton
preimages outward along sampled directions.
"""

from dataclasses import dataclass, field

import numpy as np

from .maps import HoloMap
from .newton import newton_preimage
from .points import norm

ORIGIN_TOL = 1e-12
RADIUS_TOL = 1e-4


@dataclass
class KoebeProbe:
    c: float
    t_prime: float
    maps: list
    r_prime_hat: float = float("nan")
    per_map: dict = field(default_factory=dict)
    origin_tol: float = ORIGIN_TOL

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("determinant floor c must be positive")
        if not 0 < self.t_prime < 1:
            raise ValueError("t' must lie in (0, 1)")
        if not self.maps:
            raise ValueError("no probed maps")
        for f in self.maps:
            zero = np.zeros(f.dim, dtype=complex)
            if norm(f(zero)) > self.origin_tol:
                raise ValueError(f"{f.gallery_id}: f(0) != 0")
            if abs(f.jacobian_det(zero)) < self.c:
                raise ValueError(f"{f.gallery_id}: |det df_0| < c")

    @property
    def kobayashi_radius(self):
        """Kobayashi radius ``atanh(r')`` of the Euclidean ball ``B(0, r')``."""
        return float(np.arctanh(self.r_prime_hat))


def sphere_directions(count, n, rng):
    g = rng.standard_normal((count, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g[:, :n] + 1j * g[:, n:]


def _inside(f, w, seed, t_prime):
    res = newton_preimage(f, w, seed)
    ok = res.converged and norm(res.z) < t_prime
    return ok, res.z


def exit_radius(f, direction, t_prime, steps=32, cap=1.0 - 1e-6):
    """Largest ``tau`` such that ``tau * direction`` keeps a continued preimage in ``B(0, t')``."""
    z = np.zeros(f.dim, dtype=complex)
    good = 0.0
    taus = np.linspace(0.0, cap, steps + 1)[1:]
    for tau in taus:
        ok, zt = _inside(f, tau * direction, z, t_prime)
        if not ok:
            lo, hi, zlo = good, tau, z
            while hi - lo > RADIUS_TOL:
                mid = 0.5 * (lo + hi)
                ok, zm = _inside(f, mid * direction, zlo, t_prime)
                if ok:
                    lo, zlo = mid, zm
                else:
                    hi = mid
            return lo
        good, z = tau, zt
    return good


def koebe_radius_probe(probe, boundary_samples=32, seed=0, steps=32):
    """``min`` over maps and sampled directions of the continuation exit radius."""
    rng = np.random.default_rng(seed)
    n = probe.maps[0].dim
    dirs = sphere_directions(boundary_samples, n, rng)
    probe.per_map = {}
    for i, f in enumerate(probe.maps):
        radius = min(exit_radius(f, u, probe.t_prime, steps) for u in dirs)
        probe.per_map[f"{i}:{f.gallery_id}"] = radius
    probe.r_prime_hat = float(min(probe.per_map.values()))
    return probe.r_prime_hat


def quadratic_family_map(lam=2.0 / 3.0, n=2):
    """``((z1 + z1^2/2) lam, z''/2)``: a self-map of the ball for ``|lam| <= 2/3``."""
    if abs(lam) > 2.0 / 3.0:
        raise ValueError("|lam| must be at most 2/3")

    def f(z):
        z = np.asarray(z, dtype=complex)
        out = 0.5 * z
        out[..., 0] = lam * (z[..., 0] + 0.5 * z[..., 0] ** 2)
        return out

    def jac(z):
        z = np.asarray(z, dtype=complex)
        J = np.zeros(z.shape + (n,), dtype=complex)
        J[..., 0, 0] = lam * (1.0 + z[..., 0])
        for j in range(1, n):
            J[..., j, j] = 0.5
        return J

    return HoloMap(evaluator=f, dim=n, analytic_jacobian=jac, gallery_id=f"quadratic[{lam:.4g}]")
