"""Renormalized maps ``g = Phi_{t1}^-1 o T o f o S^-1 o Phi_{t0}`` and their determinant floors.

For ``zeta`` in a Stolz angle, ``S`` and ``T`` are the normalizing parabolics
of ``zeta e1`` and ``f(zeta e1)`` and ``Phi_{t0}``, ``Phi_{t1}`` the hyperbolic
automorphisms sending 0 to ``r(zeta e1) e1`` and ``r(f(zeta e1)) e1``.  Then
``g(0) = 0`` and ``det dg_0`` factors into five determinants.
"""

from dataclasses import dataclass

import numpy as np

from .automorphisms import (
    HyperbolicAutomorphism,
    LinearFractionalMap,
    boundary_ratio,
    normalizing_parabolic,
)
from .maps import HoloMap, cauchy_jacobian, super_regularity_estimate, dilation_estimate
from .points import DomainError, axis_point, check_interior, is_interior, norm2
from .regions import StolzSpec, in_stolz, stolz_aperture

FACTOR_NAMES = ("dPhi_t1^-1", "dT", "df", "dS^-1", "dPhi_t0")


def _lfm(aut):
    return lambda z: LinearFractionalMap.apply(aut, z)


@dataclass
class RenormalizedMap:
    base: HoloMap
    zeta: complex
    M: float
    s: float
    S: object
    T: object
    phi0: HyperbolicAutomorphism
    phi1: HyperbolicAutomorphism
    R_zeta: float
    R_f: float
    point: np.ndarray
    image: np.ndarray

    @property
    def t0(self):
        return self.phi0.t0

    @property
    def t1(self):
        return self.phi1.t0

    @property
    def dim(self):
        return self.base.dim

    def __call__(self, u):
        u = np.asarray(u, dtype=complex)
        s_inv, phi1_inv = self.S.inverse(), self.phi1.inverse()
        z = _lfm(s_inv)(_lfm(self.phi0)(u))
        return _lfm(phi1_inv)(_lfm(self.T)(self.base(z)))

    def as_holomap(self):
        return HoloMap(evaluator=self, dim=self.dim, gallery_id=f"g[{self.base.gallery_id}]")

    def chain_factors(self):
        """The five determinant factors of ``det dg_0`` in composition order."""
        n = self.dim
        r_f = np.tanh(self.t1)
        r_z = np.tanh(self.t0)
        return {
            "dPhi_t1^-1": complex(self.phi1.inverse().jacobian_det(axis_point(r_f, n))),
            "dT": complex(self.T.jacobian_det(self.image)),
            "df": complex(self.base.jacobian_det(self.point)),
            "dS^-1": complex(self.S.inverse().jacobian_det(axis_point(r_z, n))),
            "dPhi_t0": complex(self.phi0.jacobian_det(np.zeros(n, dtype=complex))),
        }

    def chain_det(self):
        return complex(np.prod(list(self.chain_factors().values())))

    def direct_det(self, radius=0.25, nodes=64):
        """``det dg_0`` from a Cauchy-integral Jacobian of the composed evaluator."""
        J = cauchy_jacobian(self.as_holomap(), np.zeros(self.dim, dtype=complex), radius, nodes)
        return complex(np.linalg.det(J))


def build_renormalized(f, zeta, M, s):
    zeta = complex(zeta)
    if not in_stolz(StolzSpec(M, s), zeta):
        raise ValueError(f"zeta = {zeta} is outside K({M}, {s})")
    n = f.dim
    point = axis_point(zeta, n)
    image = f(point)
    if not (np.all(np.isfinite(image)) and is_interior(image)):
        raise DomainError("f(zeta e1) is not an interior point")
    R_zeta = float(boundary_ratio(point))
    R_f = float(boundary_ratio(image))
    for R in (R_zeta, R_f):
        if not (np.isfinite(R) and R > 0):
            raise ValueError("degenerate boundary ratio")
    phi0 = HyperbolicAutomorphism(-0.5 * np.log(R_zeta), n)
    phi1 = HyperbolicAutomorphism(-0.5 * np.log(R_f), n)
    return RenormalizedMap(
        base=f, zeta=zeta, M=M, s=s,
        S=normalizing_parabolic(point), T=normalizing_parabolic(image),
        phi0=phi0, phi1=phi1, R_zeta=R_zeta, R_f=R_f,
        point=point, image=check_interior(image, "f(zeta e1)"),
    )


def renorm_grid(M, s, k_min=4, k_max=12, rays=3):
    """``zeta = 1 - 2^-k e^{i theta}`` for ``k_min..k_max``, kept inside ``K(M, s)``.

    An odd ray count puts one ray on the real axis.
    """
    half = stolz_aperture(M)
    theta = -half + (np.arange(rays) + 0.5) * (2.0 * half / rays)
    k = np.arange(k_min, k_max + 1)
    zeta = (1.0 - 2.0 ** (-k)[:, None] * np.exp(1j * theta[None, :])).ravel()
    zeta = zeta[in_stolz(StolzSpec(M, s), zeta)]
    if zeta.size == 0:
        raise ValueError("renormalization grid is empty")
    return zeta


@dataclass
class RenormRecord:
    zeta: complex
    t0: float
    t1: float
    g0: float
    factors: dict
    chain_det: complex
    direct_det: complex
    det_S: float
    det_T: float
    theta: float
    ratio: float
    chain_steps: tuple
    alpha_conditions: tuple


@dataclass
class RenormReport:
    dim: int
    M: float
    s: float
    c: float
    alpha_hat: float
    super_regular: bool
    c_prime: float
    c_second: float
    records: list
    chain_tol: float

    @property
    def max_chain_error(self):
        return max(abs(r.chain_det - r.direct_det) for r in self.records)

    @property
    def max_g0(self):
        return max(r.g0 for r in self.records)

    @property
    def floors_hold(self):
        """``|det dS| <= 2`` and ``|det dT| >= 1/2`` on every grid point."""
        return all(r.det_S <= 2.0 and r.det_T >= 0.5 for r in self.records)

    @property
    def floors_hold_radial(self):
        """The same floors restricted to real ``zeta``."""
        radial = [r for r in self.records if r.theta == 0.0]
        return bool(radial) and all(r.det_S <= 2.0 and r.det_T >= 0.5 for r in radial)

    @property
    def secant_law_error(self):
        """Largest relative gap between ``|det dS_{zeta e1}|`` and ``sec(theta)^(n+1)``.

        The normalizing parabolic of ``zeta e1`` has this determinant for
        every ``zeta = 1 - rho e^{i theta}``, whatever ``rho``.
        """
        return max(abs(r.det_S * np.cos(r.theta) ** (self.dim + 1) - 1.0) for r in self.records)

    @property
    def bound_holds(self):
        """``|det dg_0| >= (c/4)(cosh t1 / cosh t0)^(n+1)`` with relative slack 1e-6."""
        return all(abs(r.chain_det) >= self._lower(r) * (1 - 1e-6) for r in self.records)

    def _lower(self, r):
        return self.c / 4.0 * r.ratio ** (self.dim + 1)

    @property
    def chain_steps_hold(self):
        """The lower-bound chain for ``cosh t1 / cosh t0`` holds step by step."""
        ok = True
        for r in self.records:
            exact, *steps = r.chain_steps
            ok &= abs(steps[0] - exact) <= 1e-9 * exact
            ok &= all(b <= a * (1 + 1e-12) for a, b in zip(steps, steps[1:]))
        return bool(ok)

    @property
    def alpha_conditions_hold(self):
        return all(all(r.alpha_conditions) for r in self.records)

    @property
    def floor_holds(self):
        return all(abs(r.chain_det) >= self.c_second * (1 - 1e-6) for r in self.records)


def _ratio_chain(g, M, s, alpha):
    zeta, f = g.zeta, g.image
    one_z = abs(1.0 - zeta)
    one_f = abs(1.0 - f[0])
    q = (1.0 - norm2(f)) / (1.0 - abs(zeta) ** 2)
    exact = np.cosh(g.t1) / np.cosh(g.t0)
    s0 = (1.0 + g.R_f) / (1.0 + g.R_zeta) * np.sqrt(g.R_zeta / g.R_f)
    s1 = 1.0 / (1.0 + M * one_z) * one_z / one_f * np.sqrt(q)
    s2 = 1.0 / (1.0 + M * s) * one_z / one_f * np.sqrt(q)
    s3 = 1.0 / ((1.0 + M * s) * 2.0 * alpha) * np.sqrt(alpha / 4.0)
    conditions = (bool(q >= alpha / 4.0), bool(one_f / one_z <= 2.0 * alpha))
    return (float(exact), float(s0), float(s1), float(s2), float(s3)), conditions


def renorm_determinant_bound(f, M, s, grid=None, k_max=30, rays=5, chain_tol=1e-6):
    """Per-``zeta`` determinant factors, chain-rule cross-check and floors."""
    if grid is None:
        grid = renorm_grid(M, s)
    sr = super_regularity_estimate(f, M, k_max, rays)
    alpha = dilation_estimate(f, k_max).alpha_hat
    n1 = f.dim + 1
    records = []
    for zeta in np.asarray(grid, dtype=complex):
        g = build_renormalized(f, zeta, M, s)
        factors = g.chain_factors()
        chain = complex(np.prod(list(factors.values())))
        steps, conditions = _ratio_chain(g, M, s, alpha)
        records.append(RenormRecord(
            zeta=complex(zeta), t0=g.t0, t1=g.t1,
            g0=float(np.linalg.norm(g(np.zeros(f.dim, dtype=complex)))),
            factors=factors, chain_det=chain, direct_det=g.direct_det(),
            det_S=float(abs(g.S.jacobian_det(g.point))),
            det_T=float(abs(factors["dT"])),
            theta=float(np.angle(1.0 - zeta)),
            ratio=steps[0], chain_steps=steps, alpha_conditions=conditions,
        ))
    c = min(abs(r.factors["df"]) for r in records)
    c_prime = records[0].chain_steps[-1] ** n1
    return RenormReport(
        dim=f.dim, M=M, s=s, c=float(c), alpha_hat=float(alpha), super_regular=sr.verdict,
        c_prime=float(c_prime), c_second=float(c * c_prime / 4.0),
        records=records, chain_tol=chain_tol,
    )
