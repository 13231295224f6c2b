"""Named holomorphic self-maps of the ball used by the suites and the CLI."""

import numpy as np

from .automorphisms import (
    HyperbolicAutomorphism,
    LinearFractionalMap,
    MobiusTranslation,
    ParabolicAutomorphism,
)
from .maps import HoloMap, spot_check


def automorphism_map(aut, gallery_id, expected=None):
    """Wrap a linear-fractional automorphism as a ``HoloMap``."""
    inv = aut.inverse()
    return HoloMap(
        evaluator=lambda z: LinearFractionalMap.apply(aut, z),
        dim=aut.dim,
        analytic_jacobian=aut.jacobian,
        gallery_id=gallery_id,
        inverse=lambda w: LinearFractionalMap.apply(inv, w),
        expected=dict(expected or {}),
    )


def identity(n=2):
    def jac(z):
        return np.broadcast_to(np.eye(n, dtype=complex), z.shape + (n,)).copy()

    return HoloMap(
        evaluator=lambda z: np.array(z, dtype=complex),
        dim=n,
        analytic_jacobian=jac,
        gallery_id="identity",
        inverse=lambda w: np.array(w, dtype=complex),
        expected={"regular": True, "super_regular": True, "alpha": 1.0},
    )


def mobius(n=2, a=None):
    a = np.array([0.3, 0.2j] + [0.0] * (n - 2) if a is None else a, dtype=complex)
    return automorphism_map(
        MobiusTranslation(a), "mobius",
        {"regular": False, "super_regular": False, "alpha": None},
    )


def hyperbolic(n=2, t0=1.0):
    aut = HyperbolicAutomorphism(t0, n)
    return automorphism_map(
        aut, "hyperbolic",
        {"regular": True, "super_regular": True, "alpha": float(aut.boundary_dilation)},
    )


def parabolic(n=2, a=None, im_c=0.5):
    a = np.array([0.3 + 0.1j] + [0.0] * (n - 2) if a is None else a, dtype=complex)
    return automorphism_map(
        ParabolicAutomorphism(a, im_c), "parabolic",
        {"regular": True, "super_regular": True, "alpha": 1.0},
    )


def thin_proj(n=2):
    """``(z1, 0, ..., 0)``: regular at ``e1`` with a degenerate Jacobian."""
    def f(z):
        out = np.zeros_like(z, dtype=complex)
        out[..., 0] = z[..., 0]
        return out

    def jac(z):
        J = np.zeros(z.shape + (n,), dtype=complex)
        J[..., 0, 0] = 1.0
        return J

    return HoloMap(
        evaluator=f, dim=n, analytic_jacobian=jac, gallery_id="thin_proj",
        expected={"regular": True, "super_regular": False, "alpha": 1.0},
    )


def thin_sq(n=2):
    """``(z1, z''(1 - z1)^2 / 4)``: univalent, regular, not super-regular."""
    def f(z):
        z = np.asarray(z, dtype=complex)
        out = np.array(z)
        out[..., 1:] = 0.25 * z[..., 1:] * ((1.0 - z[..., 0]) ** 2)[..., None]
        return out

    def jac(z):
        z = np.asarray(z, dtype=complex)
        J = np.zeros(z.shape + (n,), dtype=complex)
        g = 1.0 - z[..., 0]
        J[..., 0, 0] = 1.0
        for j in range(1, n):
            J[..., j, 0] = -0.5 * z[..., j] * g
            J[..., j, j] = 0.25 * g**2
        return J

    def inv(w):
        w = np.asarray(w, dtype=complex)
        out = np.array(w)
        out[..., 1:] = 4.0 * w[..., 1:] / ((1.0 - w[..., 0]) ** 2)[..., None]
        return out

    return HoloMap(
        evaluator=f, dim=n, analytic_jacobian=jac, gallery_id="thin_sq", inverse=inv,
        expected={"regular": True, "super_regular": False, "alpha": 1.0},
    )


def half_shrink(n=2):
    """``(z1, z''/2)``: linear, super-regular at ``e1`` with ``det = 2^-(n-1)``."""
    scale = np.ones(n)
    scale[1:] = 0.5

    def jac(z):
        return np.broadcast_to(np.diag(scale).astype(complex), np.shape(z) + (n,)).copy()

    return HoloMap(
        evaluator=lambda z: np.asarray(z, dtype=complex) * scale,
        dim=n, analytic_jacobian=jac, gallery_id="half_shrink",
        inverse=lambda w: np.asarray(w, dtype=complex) / scale,
        expected={"regular": True, "super_regular": True, "alpha": 1.0},
    )


def siegel_pair(n=2, delta=1.0, eps=0.5):
    from .siegel import STANDIN_PHI, SiegelConstruction

    if n != 2:
        raise ValueError("the Siegel construction lives in dimension 2")
    return SiegelConstruction(STANDIN_PHI, delta, eps).ball_map()


GALLERY = {
    "identity": (identity, "identity map"),
    "mobius": (mobius, "Mobius translation T_a, a = (0.3, 0.2i); does not fix e1"),
    "hyperbolic": (hyperbolic, "hyperbolic automorphism fixing +-e1 (t0 = 1)"),
    "parabolic": (parabolic, "parabolic automorphism fixing e1"),
    "thin_proj": (thin_proj, "(z1, 0): thin image, Jacobian identically 0"),
    "thin_sq": (thin_sq, "(z1, z2 (1 - z1)^2 / 4): univalent, thin image at e1"),
    "half_shrink": (half_shrink, "(z1, z2 / 2): super-regular linear map"),
    "siegel_pair": (siegel_pair, "Cayley-conjugated two-variable construction, stand-in phi"),
}


def list_gallery():
    return {name: desc for name, (_, desc) in GALLERY.items()}


def get_map(gallery_id, n=2, validate=True, **params):
    try:
        factory, _ = GALLERY[gallery_id]
    except KeyError:
        raise KeyError(f"unknown gallery map {gallery_id!r}") from None
    f = factory(n=n, **params)
    if validate:
        spot_check(f)
    return f
