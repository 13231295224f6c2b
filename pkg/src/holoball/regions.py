"""Approach regions at ``e1``: cones, Koranyi regions, Stolz angles.

Also the admissibility check for sampled sets and the cone samplers
used by the admissibility and coverage suites.
"""

from dataclasses import dataclass, field

import numpy as np

from .ball import kobayashi_distance
from .points import (
    DomainError,
    as_point,
    check_interior,
    norm,
    norm2,
    project_axis,
)


@dataclass(frozen=True)
class ConeSpec:
    """Cone ``C(M) = {|e1 - z| < M (1 - |z|)}``."""

    M: float

    def __post_init__(self):
        if not self.M > 1:
            raise ValueError("cone amplitude must exceed 1")


@dataclass(frozen=True)
class KoranyiSpec:
    """Koranyi region ``{|1 - z1| <= R (1 - |z|)}``."""

    R: float

    def __post_init__(self):
        if not self.R >= 1:
            raise ValueError("Koranyi amplitude must be at least 1")


@dataclass(frozen=True)
class StolzSpec:
    """Stolz angle ``K(M, s)`` in the unit disc.

    ``s`` may go up to 2: at ``s = 2`` the diameter constraint is void,
    which is the form the super-regularity definition uses.
    """

    M: float
    s: float

    def __post_init__(self):
        if not self.M > 1:
            raise ValueError("Stolz amplitude must exceed 1")
        if not 0 < self.s <= 2:
            raise ValueError("Stolz diameter must lie in (0, 2]")


@dataclass(frozen=True)
class AdmissibleWitness:
    epsilon: float
    delta: float
    M: float

    def __post_init__(self):
        if not (self.epsilon > 0 and self.delta > 0):
            raise ValueError("epsilon and delta must be positive")
        if not self.M > 1:
            raise ValueError("M must exceed 1")


def _distance_to_e1(z):
    d = np.array(z, dtype=complex)
    d[..., 0] -= 1.0
    return norm(d)


def in_cone(spec, z):
    z = as_point(z)
    return _distance_to_e1(z) < spec.M * (1.0 - norm(z))


def in_koranyi(spec, z):
    z = as_point(z)
    return np.abs(1.0 - z[..., 0]) <= spec.R * (1.0 - norm(z))


def in_stolz(spec, zeta):
    zeta = np.asarray(zeta, dtype=complex)
    gap = np.abs(1.0 - zeta)
    inside = np.abs(zeta) < 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(inside, gap / (1.0 - np.abs(zeta)), np.inf)
    return inside & (ratio < spec.M) & (gap < spec.s)


def stolz_aperture(M):
    """Half-angle of the asymptotic sector of ``K(M, .)`` at 1."""
    return np.arccos(1.0 / M)


def stolz_grid(spec, k_max, rays, per_octave=1):
    """Deterministic grid ``1 - rho e^{i theta}`` inside ``K(M, s)``.

    ``rho = s 2^(-j / per_octave)`` for ``j = per_octave .. per_octave * k_max``
    and ``rays`` angles at the midpoints of a uniform partition of the
    aperture.  Ordered by depth, then angle.  Returns ``(zeta, level)``
    where ``level`` is the dyadic generation of each point (1-based).
    """
    if k_max < 1 or rays < 1 or per_octave < 1:
        raise ValueError("k_max, rays and per_octave must be positive")
    half = stolz_aperture(spec.M)
    theta = -half + (np.arange(rays) + 0.5) * (2.0 * half / rays)
    j = np.arange(per_octave, per_octave * k_max + 1)
    rho = spec.s * 2.0 ** (-j / per_octave)
    zeta = (1.0 - rho[:, None] * np.exp(1j * theta[None, :])).ravel()
    level = np.repeat(np.ceil(j / per_octave).astype(int), rays)
    keep = in_stolz(spec, zeta)
    if not np.any(keep):
        raise ValueError("Stolz grid is empty for these parameters")
    return zeta[keep], level[keep]


def stolz_points(spec, k_max, rays, per_octave=1):
    return stolz_grid(spec, k_max, rays, per_octave)[0]


def cone_admissibility_margin(spec, z):
    """``|z - z1 e1|^2 / (1 - |z1|^2)``, bounded by ``M |e1 - z|`` on ``C(M)``."""
    z = as_point(z)
    z1 = np.abs(z[..., 0])
    if np.any(z1 >= 1.0):
        raise DomainError("first coordinate must lie in the unit disc")
    return norm2(z[..., 1:]) / (1.0 - z1**2)


def lemma_delta(epsilon, M):
    """A radius that forces ``k(z, pi(z)) < epsilon`` on ``C(M) n B(e1, delta)``.

    ``k < eps`` iff ``|T_z(pi z)|^2 < tanh(eps)^2``, and on the cone that
    quantity is at most ``M |e1 - z| < M delta``.
    """
    return np.tanh(epsilon) ** 2 / M


@dataclass
class AdmissibilityResult:
    passed: bool
    in_range: np.ndarray
    projection_in_cone: np.ndarray
    distances: np.ndarray
    smallest_amplitude: float
    failures: list = field(default_factory=list)


def admissibility_check(witness, samples):
    """Check both admissibility conditions on the samples within ``B(e1, delta)``.

    ``smallest_amplitude`` is the least cone amplitude that contains every
    in-range projection on this sample (it is only a sample statistic).
    """
    samples = as_point(samples)
    if samples.ndim == 1:
        samples = samples[None, :]
    if np.any(np.abs(samples[:, 0]) >= 1.0):
        raise DomainError("sample with |z1| >= 1")
    check_interior(samples, "samples")
    in_range = _distance_to_e1(samples) < witness.delta
    proj = project_axis(samples)
    cone_ok = in_cone(ConeSpec(witness.M), proj)
    dist = kobayashi_distance(samples, proj)
    ok = ~in_range | (cone_ok & (dist < witness.epsilon))
    gap = np.abs(1.0 - proj[:, 0])
    amp = gap / (1.0 - np.abs(proj[:, 0]))
    smallest = float(np.max(amp[in_range])) if np.any(in_range) else float("nan")
    return AdmissibilityResult(
        passed=bool(np.all(ok)),
        in_range=in_range,
        projection_in_cone=cone_ok,
        distances=dist,
        smallest_amplitude=smallest,
        failures=[int(i) for i in np.flatnonzero(~ok)],
    )


def sample_cone(M, delta, count, rng, n=2, scales=True):
    """Points of ``C(M) n B(e1, delta)`` by rejection.

    Half the radii are uniform-in-volume, half log-uniform over six
    decades when ``scales`` is set, so the vertex is probed at every scale.
    """
    out = np.empty((0, n), dtype=complex)
    spec = ConeSpec(M)
    while out.shape[0] < count:
        need = count - out.shape[0]
        batch = max(4 * need, 1024)
        g = rng.standard_normal((batch, 2 * n))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        u = g[:, :n] + 1j * g[:, n:]
        if scales:
            half = batch // 2
            d = np.empty(batch)
            d[:half] = delta * rng.random(half) ** (1.0 / (2 * n))
            d[half:] = delta * 10.0 ** (-6.0 * rng.random(batch - half))
        else:
            d = delta * rng.random(batch) ** (1.0 / (2 * n))
        z = -d[:, None] * u
        z[:, 0] += 1.0
        good = (norm2(z) < 1.0 - 1e-14) & in_cone(spec, z) & (_distance_to_e1(z) < delta)
        out = np.concatenate([out, z[good][:need]])
    return out


def sample_radial(delta, count, rng, n=2):
    r = 1.0 - delta * 10.0 ** (-6.0 * rng.random(count))
    z = np.zeros((count, n), dtype=complex)
    z[:, 0] = r
    return z


def sample_tangential_curve(delta, count, rng, n=2, exponent=0.5, scale=1.2):
    """Points ``(r, scale (1 - r)^exponent)`` approaching ``e1`` tangentially.

    With ``exponent = 1/2`` and ``scale < sqrt(2)`` the curve stays in the
    ball while ``k(z, pi(z))`` tends to ``atanh(scale / sqrt(2))``, so it is
    not admissible.  Smaller exponents leave the ball near ``e1``.
    """
    if n < 2:
        raise ValueError("needs n >= 2")
    out = []
    total = 0
    for _ in range(100):
        one_minus_r = delta * 10.0 ** (-6.0 * rng.random(count))
        z = np.zeros((count, n), dtype=complex)
        z[:, 0] = 1.0 - one_minus_r
        z[:, 1] = scale * one_minus_r**exponent
        good = (norm2(z) < 1.0 - 1e-14) & (_distance_to_e1(z) < delta)
        out.append(z[good])
        total += int(good.sum())
        if total >= count:
            break
    else:
        raise ValueError("tangential curve does not meet B(e1, delta) inside the ball")
    return np.concatenate(out)[:count]
