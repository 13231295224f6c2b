"""Two-variable construction on the Siegel domain and its inequality checks.

Given a one-variable holomorphic ``phi`` on the right half-plane with
``Re phi > 3`` and boundary dilation ``alpha`` at infinity,

    Phi(z, w) = (phi(z), sqrt(alpha) delta w / (1 + phi(z)) + eps z / (1 + z))

maps the Siegel domain ``{Re z > |w|^2}`` into itself when ``eps^2 < 3/4``
and ``delta < 2``.  Conjugating by the Cayley transform gives a self-map
of the ball.  The actual ``phi`` that makes the map non-univalent at two
boundary points has no closed form, so any ``phi`` satisfying the used
hypotheses can be plugged in; ``STANDIN_PHI`` is ``4 + zeta``.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .automorphisms import (
    cayley,
    cayley_inverse,
    cayley_inverse_jacobian,
    cayley_jacobian,
    in_siegel,
)
from .maps import HoloMap, spot_check


class HypothesisViolation(ValueError):
    """A construction hypothesis fails on a sampled point."""

    def __init__(self, hypothesis, detail=""):
        self.hypothesis = hypothesis
        super().__init__(f"hypothesis violated: {hypothesis}" + (f" ({detail})" if detail else ""))


@dataclass(frozen=True)
class OneVariableMap:
    func: Callable
    deriv: Optional[Callable] = None
    alpha: Optional[float] = None
    name: str = "phi"

    def __call__(self, zeta):
        return self.func(np.asarray(zeta, dtype=complex))

    def derivative(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        if self.deriv is not None:
            return self.deriv(zeta)
        h = 1e-6 * np.maximum(1.0, np.abs(zeta))
        return (self(zeta + h) - self(zeta - h)) / (2.0 * h)


STANDIN_PHI = OneVariableMap(
    func=lambda z: 4.0 + z,
    deriv=lambda z: np.ones_like(z),
    alpha=1.0,
    name="4 + zeta",
)


def estimate_alpha(phi, k=30):
    """``lim phi(r)/r`` as ``r -> +inf``, Richardson-extrapolated at ``r = 2^k``."""
    r = 2.0**k
    q1 = phi(r) / r
    q2 = phi(2 * r) / (2 * r)
    return float(np.real(2 * q2 - q1))


def sample_half_plane(count, rng):
    x = 10.0 ** rng.uniform(-6, 6, count)
    y = np.sinh(rng.uniform(-14, 14, count))
    return x + 1j * y


def sample_siegel(count, rng):
    """Random points of the Siegel domain over many scales."""
    w = (rng.standard_normal(count) + 1j * rng.standard_normal(count)) * 10.0 ** rng.uniform(-4, 3, count)
    z = np.abs(w) ** 2 + sample_half_plane(count, rng)
    return np.stack([z, w], axis=-1)


def validate_phi(phi, alpha, rng=None, count=10_000):
    """Check the hypotheses the containment chain uses on sampled points."""
    rng = np.random.default_rng(0) if rng is None else rng
    if not (np.isfinite(alpha) and alpha > 0):
        raise HypothesisViolation("alpha finite and positive", f"alpha = {alpha}")
    zeta = sample_half_plane(count, rng)
    vals = phi(zeta)
    bad = ~(vals.real > 3)
    if np.any(bad):
        raise HypothesisViolation("Re phi > 3", f"at zeta = {zeta[bad][0]}")
    slack = 1e-12 * np.maximum(1.0, alpha * zeta.real)
    bad = vals.real < alpha * zeta.real - slack
    if np.any(bad):
        raise HypothesisViolation("Re phi(zeta) >= alpha Re zeta", f"at zeta = {zeta[bad][0]}")


@dataclass
class BoundsReport:
    steps: dict
    aux: dict
    containment: np.ndarray
    count: int

    @property
    def passed(self):
        return bool(
            all(np.all(v) for v in self.steps.values())
            and all(np.all(v) for v in self.aux.values())
            and np.all(self.containment)
        )

    def failures(self):
        out = {}
        for name, ok in {**self.steps, **self.aux, "containment": self.containment}.items():
            bad = int(np.count_nonzero(~ok))
            if bad:
                out[name] = bad
        return out


@dataclass(frozen=True)
class SeparationCertificate:
    r_minus: object
    r_plus: object
    eps: object
    delta: object
    R0: object
    R_inf: object
    factor: object
    closed_form: object
    quantity: object

    @property
    def certified(self):
        return self.quantity > 0


class SiegelConstruction:
    def __init__(self, phi=STANDIN_PHI, delta=1.0, eps=0.5, alpha=None, validate=True):
        if not 0 < delta < 2:
            raise HypothesisViolation("0 < delta < 2", f"delta = {delta}")
        if not (eps > 0 and eps**2 < 0.75):
            raise HypothesisViolation("eps > 0 and eps^2 < 3/4", f"eps = {eps}")
        if alpha is None:
            alpha = phi.alpha if phi.alpha is not None else estimate_alpha(phi)
        if validate:
            validate_phi(phi, alpha)
        self.phi = phi
        self.delta = float(delta)
        self.eps = float(eps)
        self.alpha = float(alpha)

    def second_coordinate_terms(self, p):
        z, w = p[..., 0], p[..., 1]
        fz = self.phi(z)
        first = np.sqrt(self.alpha) * self.delta * w / (1.0 + fz)
        second = self.eps * z / (1.0 + z)
        return fz, first, second

    def siegel_apply(self, p):
        p = np.asarray(p, dtype=complex)
        fz, first, second = self.second_coordinate_terms(p)
        return np.stack([fz, first + second], axis=-1)

    def siegel_jacobian(self, p):
        p = np.asarray(p, dtype=complex)
        z, w = p[..., 0], p[..., 1]
        fz = self.phi(z)
        dphi = self.phi.derivative(z)
        k = np.sqrt(self.alpha) * self.delta
        J = np.zeros(p.shape + (2,), dtype=complex)
        J[..., 0, 0] = dphi
        J[..., 1, 0] = -k * w * dphi / (1.0 + fz) ** 2 + self.eps / (1.0 + z) ** 2
        J[..., 1, 1] = k / (1.0 + fz)
        return J

    def siegel_map(self, validate=True):
        f = HoloMap(
            evaluator=self.siegel_apply,
            dim=2,
            analytic_jacobian=self.siegel_jacobian,
            gallery_id="siegel_pair_h",
            domain_guard=in_siegel,
            expected={"delta": self.delta, "eps": self.eps, "alpha": self.alpha},
        )
        if validate:
            spot_check(f, sampler=sample_siegel)
        return f

    def ball_apply(self, z):
        return cayley_inverse(self.siegel_apply(cayley(z)))

    def ball_jacobian(self, z):
        w = cayley(z)
        v = self.siegel_apply(w)
        return cayley_inverse_jacobian(v) @ self.siegel_jacobian(w) @ cayley_jacobian(z)

    def ball_map(self):
        return HoloMap(
            evaluator=self.ball_apply,
            dim=2,
            analytic_jacobian=self.ball_jacobian,
            gallery_id="siegel_pair",
            expected={"regular": True, "super_regular": False, "alpha": None},
        )

    def bounds_check(self, samples):
        """Verify the containment inequality chain term by term on ``samples``."""
        p = np.asarray(samples, dtype=complex)
        z, w = p[..., 0], p[..., 1]
        a, d, e = self.alpha, self.delta, self.eps
        fz, first, second = self.second_coordinate_terms(p)
        w2 = np.abs(w) ** 2
        chain = [
            np.abs(first + second) ** 2,
            2.0 * (np.abs(first) ** 2 + np.abs(second) ** 2),
            2.0 * (a * d**2 * w2 / 16.0 + e**2),
            a * w2 / 2.0 + 1.5,
            a * w2 / 2.0 + fz.real / 2.0,
            a * z.real / 2.0 + fz.real / 2.0,
            fz.real,
        ]
        names = ["parallelogram", "denominator bounds", "eps and delta limits",
                 "Re phi > 3", "|w|^2 < Re z", "Re phi >= alpha Re z"]
        steps = {}
        for name, lo, hi in zip(names, chain[:-1], chain[1:]):
            steps[name] = lo <= hi * (1.0 + 1e-12) + 1e-300
        aux = {
            "|1 + phi| >= 4": np.abs(1.0 + fz) >= 4.0 * (1.0 - 1e-15),
            "|z| / |1 + z| <= 1": np.abs(z) <= np.abs(1.0 + z) * (1.0 + 1e-15),
        }
        containment = fz.real > np.abs(first + second) ** 2
        return BoundsReport(steps=steps, aux=aux, containment=containment, count=int(z.size))


def siegel_phi_map(phi=STANDIN_PHI, delta=1.0, eps=0.5, alpha=None):
    return SiegelConstruction(phi, delta, eps, alpha).siegel_map()


def siegel_bounds_check(construction, samples):
    return construction.bounds_check(samples)


def _exact(x):
    if isinstance(x, (Fraction, int, str)):
        return Fraction(x)
    return float(x)


def separation_certificate(r_minus, r_plus, eps, delta):
    """Sign of ``eps (R_inf/(1 + R_inf) - R0/(1 - R0)) - 2 delta``.

    ``R0 = r_minus/(2 - r_minus)`` and ``R_inf = (2 - r_plus)/r_plus`` are the
    Cayley images of the two excluded boundary discs.  A positive value
    rules out two points with equal image.  Exact when every input is a
    ``Fraction``, ``int`` or ``str``.
    """
    rm, rp, e, d = (_exact(x) for x in (r_minus, r_plus, eps, delta))
    for r in (rm, rp):
        if not 0 < r < Fraction(1, 2):
            raise ValueError("disc radii must lie in (0, 1/2)")
    R0 = rm / (2 - rm)
    R_inf = (2 - rp) / rp
    factor = R_inf / (1 + R_inf) - R0 / (1 - R0)
    closed = 1 - rp / 2 - rm / (2 - 2 * rm)
    return SeparationCertificate(
        r_minus=rm, r_plus=rp, eps=e, delta=d, R0=R0, R_inf=R_inf,
        factor=factor, closed_form=closed, quantity=e * factor - 2 * d,
    )
