"""Kobayashi distance on the unit ball and Kobayashi balls."""

from dataclasses import dataclass

import numpy as np

from .automorphisms import MobiusTranslation
from .points import (
    DimensionError,
    as_point,
    check_interior,
    hermitian_inner,
    norm,
    norm2,
    project_axis,
)

__all__ = [
    "KobayashiBallSpec",
    "distance_to_sample_set",
    "hermitian_inner",
    "in_kobayashi_ball",
    "kobayashi_distance",
    "poincare_radius",
    "sample_kobayashi_ball",
    "special_projection_norm",
    "translate",
]


def translate(a, b):
    """``T_a(b)`` for broadcastable batches of ``a`` and ``b``."""
    a = check_interior(a, "a")
    b = check_interior(b, "b")
    if a.shape[-1] != b.shape[-1]:
        raise DimensionError("points live in different dimensions")
    if a.ndim == 1:
        return MobiusTranslation(a).apply(b, check=False)
    # batched centres: expand the closed form directly
    aa = norm2(a)[..., None]
    ba = hermitian_inner(b, a)[..., None]
    safe = np.where(aa > 0, aa, 1.0)
    pb = np.where(aa > 0, ba / safe, 0.0) * a
    qb = b - pb
    s = np.sqrt(1.0 - aa)
    return (a - pb - s * qb) / (1.0 - ba)


def kobayashi_distance(a, b):
    """Kobayashi distance ``k(a, b) = atanh |T_a(b)|`` on B^n."""
    t = norm(translate(a, b))
    return np.arctanh(np.minimum(t, 1.0))


def poincare_radius(euclidean_radius):
    """Kobayashi radius of the Euclidean ball ``B(0, a')``."""
    return np.arctanh(euclidean_radius)


def special_projection_norm(a):
    """``|a - pi(a)|^2 / (1 - |pi(a)|^2)``, i.e. ``|T_a(pi(a))|^2``."""
    a = check_interior(a, "a")
    return norm2(a[..., 1:]) / (1.0 - np.abs(a[..., 0]) ** 2)


def distance_to_sample_set(z, samples):
    """Minimum Kobayashi distance from ``z`` to a finite sample of a set.

    This upper-bounds the distance to the continuum the samples come from;
    how good the bound is depends entirely on the sampling density.
    """
    samples = as_point(samples)
    if samples.ndim == 1:
        samples = samples[None, :]
    if samples.shape[0] == 0:
        raise ValueError("sample set is empty")
    return float(np.min(kobayashi_distance(z, samples)))


@dataclass(frozen=True)
class KobayashiBallSpec:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", check_interior(self.center, "center"))
        if not self.radius >= 0:
            raise ValueError("radius must be nonnegative")

    def contains(self, z):
        return kobayashi_distance(self.center, z) < self.radius


def in_kobayashi_ball(spec, z):
    return spec.contains(z)


def sample_kobayashi_ball(center, radius, count, rng):
    """Uniform Euclidean samples of ``B(0, tanh radius)`` pushed to ``center``.

    Automorphisms are Kobayashi isometries, so ``T_x`` maps the Euclidean
    ball ``B(0, tanh R)`` onto the Kobayashi ball ``B_k(x, R)``.  Returns the
    pushed points and the source points.
    """
    center = check_interior(center, "center")
    n = center.shape[-1]
    g = rng.standard_normal((count, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    rad = np.tanh(radius) * rng.random(count) ** (1.0 / (2 * n))
    u = (g[:, :n] + 1j * g[:, n:]) * rad[:, None]
    return MobiusTranslation(center).apply(u, check=False), u


def axis_projection_distance(z):
    """``k(z, pi(z))`` through the explicit automorphism."""
    return kobayashi_distance(z, project_axis(z))
