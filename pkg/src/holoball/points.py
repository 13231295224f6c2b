"""Complex points of C^n and the guards shared by every module.

Points are plain complex ``ndarray`` objects whose last axis holds the
coordinates, so every helper here broadcasts over leading batch axes.
"""

import numpy as np

DEFAULT_DIM = 2

# Points with 1 - |z|^2 below this are treated as boundary points.
INTERIOR_GUARD = 1e-14


class DomainError(ValueError):
    """A point lies outside the domain an operation is defined on."""


class PoleError(ArithmeticError):
    """A linear-fractional denominator vanished."""


class DimensionError(ValueError):
    pass


def as_point(z):
    """Coerce ``z`` to a complex array and check it is finite."""
    arr = np.asarray(z, dtype=complex)
    if arr.ndim == 0 or arr.shape[-1] < 1:
        raise DimensionError("a point needs at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise DomainError("point has non-finite coordinates")
    return arr


def e1(n=DEFAULT_DIM):
    out = np.zeros(n, dtype=complex)
    out[0] = 1.0
    return out


def axis_point(zeta, n=DEFAULT_DIM):
    """``zeta * e1`` for a scalar or an array of scalars."""
    zeta = np.asarray(zeta, dtype=complex)
    out = np.zeros(zeta.shape + (n,), dtype=complex)
    out[..., 0] = zeta
    return out


def norm2(z):
    z = np.asarray(z)
    return np.sum(z.real**2 + z.imag**2, axis=-1)


def norm(z):
    return np.sqrt(norm2(z))


def hermitian_inner(a, b):
    """Return ``sum(a_i * conj(b_i))`` over the last axis."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[-1] != b.shape[-1]:
        raise DimensionError(
            f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}"
        )
    return np.sum(a * np.conj(b), axis=-1)


def project_axis(z):
    """First-coordinate projection ``(z1, 0, ..., 0)``."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    out[..., 0] = z[..., 0]
    return out


def interior_margin(z):
    return 1.0 - norm2(z)


def is_interior(z):
    return interior_margin(z) >= INTERIOR_GUARD


def check_interior(z, name="z"):
    """Validate ``z`` and raise ``DomainError`` unless it is in the open ball."""
    z = as_point(z)
    if not np.all(is_interior(z)):
        raise DomainError(f"{name} is not strictly inside the unit ball")
    return z
