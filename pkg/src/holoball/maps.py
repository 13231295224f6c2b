"""Holomorphic maps, their Jacobians and boundary estimators at ``e1``.

A ``HoloMap`` wraps a vectorised evaluator ``(..., n) -> (..., n)``.  The
boundary quantities (dilation coefficient, super-regularity floor, the
Julia-Wolff-Caratheodory limits) are liminfs and limits; here they are
measured on dyadic grids and reported as the value at the deepest
generation together with the trend across generations.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .points import (
    DomainError,
    as_point,
    axis_point,
    e1,
    is_interior,
    norm,
    norm2,
)
from .regions import StolzSpec, stolz_grid

DEFAULT_FLOOR = 1e-3
MAX_STEP_HALVINGS = 5


def _ball_guard(z):
    return is_interior(z)


@dataclass(frozen=True, eq=False)
class HoloMap:
    """A holomorphic map with optional analytic Jacobian and metadata.

    ``inverse`` is an optional closed-form inverse used only as an
    independent oracle; ``expected`` records the boundary behaviour the
    map is known to have (``regular``, ``super_regular``, ``alpha``).
    """

    evaluator: Callable
    dim: int = 2
    analytic_jacobian: Optional[Callable] = None
    gallery_id: str = "custom"
    domain_guard: Callable = _ball_guard
    codomain_guard: Optional[Callable] = None
    inverse: Optional[Callable] = None
    expected: dict = field(default_factory=dict)

    def __call__(self, z):
        return self.evaluator(np.asarray(z, dtype=complex))

    def in_domain(self, z):
        return self.domain_guard(z)

    def in_codomain(self, z):
        guard = self.codomain_guard or self.domain_guard
        return guard(z)

    def jacobian(self, z, h=None):
        if self.analytic_jacobian is not None:
            return self.analytic_jacobian(np.asarray(z, dtype=complex))
        return numeric_jacobian(self, z, h)

    def jacobian_det(self, z):
        return np.linalg.det(self.jacobian(z))


def evaluate(f, z):
    """Evaluate ``f`` at ``z`` with domain and codomain guards."""
    z = as_point(z)
    if not np.all(f.in_domain(z)):
        raise DomainError(f"{f.gallery_id}: point outside the map's domain")
    out = f(z)
    if not np.all(np.isfinite(out)):
        raise DomainError(f"{f.gallery_id}: non-finite output")
    if not np.all(f.in_codomain(out)):
        raise DomainError(f"{f.gallery_id}: image left the target domain")
    return out


def default_step(z):
    """Stencil step ``min(1e-6, (1 - |z|) / 10)`` (per point for batches)."""
    return np.minimum(1e-6, np.maximum(1.0 - norm(z), 0.0) / 10.0)


def numeric_jacobian(f, z, h=None):
    """Central-difference complex Jacobian.

    Holomorphy lets one real step per coordinate recover the complex
    partial ``df/dz_j``.  If any stencil point leaves the domain the step
    is halved (at most five times) before giving up.
    """
    z = as_point(z)
    n = z.shape[-1]
    if h is None:
        h = default_step(z) if f.domain_guard is _ball_guard else np.full(z.shape[:-1], 1e-6)
    h = np.broadcast_to(np.asarray(h, dtype=float), z.shape[:-1]).copy()
    for _ in range(MAX_STEP_HALVINGS + 1):
        stencil_ok = np.ones(z.shape[:-1], dtype=bool)
        cols = []
        for j in range(n):
            step = np.zeros_like(z)
            step[..., j] = h
            zp, zm = z + step, z - step
            stencil_ok &= f.in_domain(zp) & f.in_domain(zm)
            cols.append((zp, zm))
        if np.all(stencil_ok) and np.all(h > 0):
            break
        h = np.where(stencil_ok, h, h / 2)
    else:
        raise DomainError("Jacobian stencil leaves the domain after 5 halvings")
    J = np.empty(z.shape + (n,), dtype=complex)
    for j, (zp, zm) in enumerate(cols):
        J[..., :, j] = (f(zp) - f(zm)) / (2.0 * h[..., None])
    return J


def cauchy_jacobian(f, z, radius=0.25, nodes=64):
    """Jacobian from the Cauchy integral on circles in each coordinate.

    Spectrally accurate for maps holomorphic on a neighbourhood of the
    closed polydisc slice; used where central differences lose too many
    digits to roundoff.
    """
    z = as_point(z)
    n = z.shape[-1]
    omega = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    J = np.empty(z.shape + (n,), dtype=complex)
    for j in range(n):
        pts = np.repeat(z[..., None, :], nodes, axis=-2)
        pts[..., j] += radius * omega
        vals = f(pts)
        J[..., :, j] = np.mean(vals * np.conj(omega)[:, None], axis=-2) / radius
    return J


@dataclass
class DilationEstimate:
    alpha_hat: float
    grid: np.ndarray
    per_radius: np.ndarray
    radial_gap: np.ndarray
    radial_limit_e1: bool
    trend: np.ndarray

    @property
    def finite(self):
        return bool(np.isfinite(self.alpha_hat))


def dilation_estimate(f, k_max=30, tail=3):
    """Radial boundary dilation quotient ``(1 - |f(r e1)|) / (1 - r)``.

    Radii ``1 - 2^-k`` for ``k = 1..k_max``; ``alpha_hat`` is the minimum
    over the deepest ``tail`` generations (``grid``), ``trend`` keeps every
    generation.  The radial limit is accepted when ``|f(r e1) - e1|`` is
    non-increasing over the tail and below ``1e-3`` at the deepest radius.
    """
    if not 1 <= k_max <= 40:
        raise ValueError("k_max must be in 1..40")
    k = np.arange(1, k_max + 1)
    r = 1.0 - 2.0 ** (-k)
    z = axis_point(r, f.dim)
    fz = f(z)
    if not np.all(np.isfinite(fz)):
        raise DomainError("map evaluation failed on the radial ray")
    quotients = (1.0 - norm(fz)) / (1.0 - r)
    gap = norm(fz - e1(f.dim))
    tail = min(tail, k_max)
    grid = r[-tail:]
    alpha_hat = float(np.min(quotients[-tail:]))
    tail_gap = gap[-tail:]
    limit_ok = bool(np.all(np.diff(tail_gap) <= 1e-15) and tail_gap[-1] < 1e-3)
    return DilationEstimate(
        alpha_hat=alpha_hat,
        grid=grid,
        per_radius=quotients[-tail:],
        radial_gap=gap,
        radial_limit_e1=limit_ok,
        trend=quotients,
    )


@dataclass
class SuperRegularityEstimate:
    c_hat: float
    M: float
    grid: np.ndarray
    levels: np.ndarray
    per_sample_det: np.ndarray
    dilation: DilationEstimate
    floor: float

    @property
    def verdict(self):
        return bool(
            self.c_hat > self.floor
            and self.dilation.finite
            and self.dilation.radial_limit_e1
        )


def super_regularity_estimate(f, M, k_max=30, rays=5, floor=DEFAULT_FLOOR):
    """Floor of ``|det df|`` on ``K(M, 2) e1`` at the deepest dyadic generation."""
    zeta, level = stolz_grid(StolzSpec(M, 2.0), k_max, rays)
    dets = np.abs(f.jacobian_det(axis_point(zeta, f.dim)))
    deepest = level == level.max()
    return SuperRegularityEstimate(
        c_hat=float(np.min(dets[deepest])),
        M=M,
        grid=zeta,
        levels=level,
        per_sample_det=dets,
        dilation=dilation_estimate(f, k_max),
        floor=floor,
    )


JWC_ITEMS = ("1'", "1''", "1'''", "2", "3", "4", "5", "6")
_LIMIT_ITEMS = {"2", "3", "4", "5", "6"}


@dataclass
class JWCItem:
    name: str
    kind: str
    target: Optional[complex]
    per_level_max: np.ndarray
    last_value: float
    grid_max: float
    verdict: bool


@dataclass
class JWCReport:
    M: float
    s: float
    family: str
    levels: np.ndarray
    alpha: float
    items: dict
    values: dict

    @property
    def passed(self):
        return all(item.verdict for item in self.items.values())


def jwc_sequence(M, s, k_max, rays, n, family="axis", scale=0.5, exponent=0.75):
    """Sample sequences approaching ``e1``.

    ``axis`` uses ``K(M, s) e1``; ``admissible`` adds a complex-tangential
    offset ``scale (1 - zeta)^exponent`` in the second coordinate, which is
    admissible for ``exponent > 1/2``.
    """
    zeta, level = stolz_grid(StolzSpec(M, s), k_max, rays)
    z = axis_point(zeta, n)
    if family == "admissible":
        if n < 2:
            raise ValueError("admissible family needs n >= 2")
        z[:, 1] = scale * (1.0 - zeta) ** exponent
        keep = is_interior(z)
        z, level = z[keep], level[keep]
    elif family != "axis":
        raise ValueError(f"unknown sequence family {family!r}")
    return z, level


def jwc_limit_checks(f, M, k_max=30, s=0.5, rays=5, alpha=None, tol=1e-3,
                     bound=1e6, family="axis"):
    """Numeric counterparts of the boundary JWC statements at ``e1``.

    Boundedness items report the largest modulus on the grid; limit items
    the deviation from their target at the deepest generation.  ``alpha``
    defaults to the radial dilation estimate.
    """
    n = f.dim
    if alpha is None:
        est = dilation_estimate(f, min(k_max, 40))
        if not est.finite:
            raise ValueError("e1 is not a boundary regular fixed point candidate")
        alpha = est.alpha_hat
    z, level = jwc_sequence(M, s, k_max, rays, n, family)
    fz = f(z)
    J = f.jacobian(z)
    gap = 1.0 - z[:, 0]
    root = np.sqrt(gap)[:, None]

    def worst(arr):
        return np.max(np.abs(arr), axis=-1, initial=0.0)

    row = J[:, 0, 1:]
    col = J[:, 1:, 0]
    inner = J[:, 1:, 1:].reshape(len(z), -1)
    values = {
        "1'": np.maximum(np.abs(J[:, 0, 0]), worst(inner)),
        "1''": worst(row / root),
        "1'''": worst(root * col),
        "2": (1.0 - fz[:, 0]) / gap,
        "3": J[:, 0, 0],
        "4": worst(row),
        "5": worst(fz[:, 1:] / root),
        "6": worst(root * col),
    }
    targets = {"2": alpha, "3": alpha, "4": 0.0, "5": 0.0, "6": 0.0}
    levels = np.unique(level)
    items = {}
    for name in JWC_ITEMS:
        vals = values[name]
        if name in _LIMIT_ITEMS:
            dev = np.abs(vals - targets[name])
            per_level = np.array([dev[level == lv].max() for lv in levels])
            last = float(per_level[-1])
            items[name] = JWCItem(name, "limit", targets[name], per_level, last,
                                  float(dev.max()), last < tol)
        else:
            mag = np.abs(vals)
            per_level = np.array([mag[level == lv].max() for lv in levels])
            gmax = float(mag.max())
            items[name] = JWCItem(name, "bounded", None, per_level, float(per_level[-1]),
                                  gmax, bool(np.isfinite(gmax) and gmax < bound))
    return JWCReport(M=M, s=s, family=family, levels=levels, alpha=float(np.real(alpha)),
                     items=items, values=values)


def compose(outer, inner, gallery_id=None):
    """Composite ``outer o inner`` with chain-rule Jacobian when both have one."""
    jac = None
    if outer.analytic_jacobian is not None and inner.analytic_jacobian is not None:
        def jac(z):
            return outer.analytic_jacobian(inner(z)) @ inner.analytic_jacobian(z)
    return HoloMap(
        evaluator=lambda z: outer(inner(z)),
        dim=inner.dim,
        analytic_jacobian=jac,
        gallery_id=gallery_id or f"{outer.gallery_id}*{inner.gallery_id}",
        domain_guard=inner.domain_guard,
        codomain_guard=outer.codomain_guard or outer.domain_guard,
    )


def spot_check(f, count=10_000, jac_count=100, rng=None, sampler=None, jac_tol=1e-6):
    """Construction-time sanity checks: images stay in the target domain and
    the analytic Jacobian (if any) agrees with central differences.

    Returns ``(image_ok, jacobian_err)``.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    if sampler is None:
        z = random_ball_points(count, f.dim, rng)
    else:
        z = sampler(count, rng)
    image_ok = bool(np.all(f.in_codomain(f(z))))
    err = 0.0
    if f.analytic_jacobian is not None:
        zj = z[:jac_count] if sampler is not None else random_ball_points(jac_count, f.dim, rng, 0.9)
        Ja = f.analytic_jacobian(zj)
        Jn = numeric_jacobian(HoloMap(f.evaluator, f.dim, domain_guard=f.domain_guard), zj)
        err = float(np.max(np.abs(Ja - Jn)))
        if err > jac_tol:
            raise ValueError(f"{f.gallery_id}: analytic Jacobian disagrees ({err:.2e})")
    if not image_ok:
        raise ValueError(f"{f.gallery_id}: evaluator leaves the target domain")
    return image_ok, err


def random_ball_points(count, n, rng, max_norm=1.0):
    """Uniform samples of the Euclidean ball of radius ``max_norm`` in C^n."""
    g = rng.standard_normal((count, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    rad = max_norm * rng.random(count) ** (1.0 / (2 * n))
    z = (g[:, :n] + 1j * g[:, n:]) * rad[:, None]
    bad = norm2(z) > 1.0 - 1e-12
    z[bad] *= 0.999
    return z
