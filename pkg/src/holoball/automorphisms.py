"""Automorphisms of the unit ball and the Cayley transform.

Every automorphism of B^n is linear fractional,

    z  ->  (A z + p) / (<z, conj(b)> + d),

and is stored as the (n+1) x (n+1) block matrix ``[[A, p], [b, d]]``.
Composition is then a matrix product and the inverse a matrix inverse;
the family subclasses add their parameters and closed-form Jacobian
determinants on top.
"""

import numpy as np

from .points import (
    INTERIOR_GUARD,
    DimensionError,
    DomainError,
    PoleError,
    as_point,
    check_interior,
    hermitian_inner,
    norm2,
)

POLE_GUARD = 1e-14
UNITARY_TOL = 1e-12


class LinearFractionalMap:
    """A linear-fractional map of C^n given by its projective matrix."""

    def __init__(self, matrix):
        matrix = np.array(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 2:
            raise DimensionError("projective matrix must be square of size n+1 >= 2")
        self._matrix = matrix
        self._matrix.setflags(write=False)

    @property
    def matrix(self):
        return self._matrix

    @property
    def dim(self):
        return self._matrix.shape[0] - 1

    def _parts(self):
        m = self._matrix
        return m[:-1, :-1], m[:-1, -1], m[-1, :-1], m[-1, -1]

    def _num_den(self, z):
        z = as_point(z)
        if z.shape[-1] != self.dim:
            raise DimensionError(f"expected {self.dim} coordinates, got {z.shape[-1]}")
        A, p, b, d = self._parts()
        num = z @ A.T + p
        den = z @ b + d
        if np.any(np.abs(den) < POLE_GUARD):
            raise PoleError("denominator vanishes at the given point")
        return num, den

    def apply(self, z):
        num, den = self._num_den(z)
        return num / den[..., None]

    __call__ = apply

    def jacobian(self, z):
        """Complex Jacobian matrix ``d f_z`` (batch shape ``(..., n, n)``)."""
        num, den = self._num_den(z)
        A, _, b, _ = self._parts()
        den = den[..., None, None]
        return (A * den - num[..., :, None] * b) / den**2

    def jacobian_det(self, z):
        return np.linalg.det(self.jacobian(z))

    def inverse(self):
        return LinearFractionalMap(np.linalg.inv(self._matrix))

    def compose(self, other):
        """The map ``self o other``."""
        if other.dim != self.dim:
            raise DimensionError("cannot compose maps of different dimensions")
        return LinearFractionalMap(self._matrix @ other.matrix)

    def __matmul__(self, other):
        return self.compose(other)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


def identity_map(n=2):
    return LinearFractionalMap(np.eye(n + 1))


class MobiusTranslation(LinearFractionalMap):
    """The involutive automorphism ``T_a`` exchanging ``a`` and ``0``.

    T_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z, a>) with P_a the orthogonal
    projection onto span{a}, Q_a = id - P_a and s_a = sqrt(1 - |a|^2).
    """

    def __init__(self, a):
        a = check_interior(a, "a")
        if a.ndim != 1:
            raise DimensionError("a must be a single point")
        n = a.shape[0]
        aa = norm2(a)
        s = np.sqrt(1.0 - aa)
        P = np.outer(a, np.conj(a)) / aa if aa > 0 else np.zeros((n, n), dtype=complex)
        L = P + s * (np.eye(n) - P)
        matrix = np.zeros((n + 1, n + 1), dtype=complex)
        matrix[:n, :n] = -L
        matrix[:n, n] = a
        matrix[n, :n] = -np.conj(a)
        matrix[n, n] = 1.0
        super().__init__(matrix)
        self.a = a
        self.a.setflags(write=False)

    def apply(self, z, check=True):
        if check:
            z = check_interior(z)
        return super().apply(z)

    __call__ = apply

    def jacobian_det(self, z):
        n = self.dim
        s = np.sqrt(1.0 - norm2(self.a))
        den = 1.0 - hermitian_inner(as_point(z), self.a)
        return (-1) ** n * s ** (n + 1) / den ** (n + 1)

    def inverse(self):
        return self


class HyperbolicAutomorphism(LinearFractionalMap):
    """Hyperbolic automorphism fixing ``e1`` and ``-e1``.

    z -> (cosh t z1 + sinh t, z2, ..., zn) / (sinh t z1 + cosh t).
    ``t0 = 0`` gives the identity.
    """

    def __init__(self, t0, n=2):
        t0 = float(t0)
        ch, sh = np.cosh(t0), np.sinh(t0)
        matrix = np.eye(n + 1, dtype=complex)
        matrix[0, 0] = ch
        matrix[0, n] = sh
        matrix[n, 0] = sh
        matrix[n, n] = ch
        super().__init__(matrix)
        self.t0 = t0

    @classmethod
    def through(cls, r, n=2):
        """The automorphism with ``Phi(0) = r e1`` for real ``r`` in (-1, 1)."""
        return cls(np.arctanh(r), n)

    @property
    def boundary_dilation(self):
        return np.exp(-2.0 * self.t0)

    def jacobian_det(self, z):
        z = as_point(z)
        den = np.sinh(self.t0) * z[..., 0] + np.cosh(self.t0)
        return den ** (-(self.dim + 1))

    def inverse(self):
        return HyperbolicAutomorphism(-self.t0, self.dim)


class ParabolicAutomorphism(LinearFractionalMap):
    """Parabolic automorphism fixing ``e1``, specified in Siegel coordinates.

    Conjugated by the Cayley transform it acts on the Siegel domain as
    ``(w1, w'') -> (w1 + 2<U w'', a> + c, U w'' + a)`` with ``Re c = |a|^2``.
    The real part of ``c`` is fixed by construction; only ``im_c`` is free.
    """

    def __init__(self, a, im_c=0.0, U=None):
        a = np.atleast_1d(np.asarray(a, dtype=complex))
        if a.ndim != 1:
            raise DimensionError("a must be a vector of C^(n-1)")
        m = a.shape[0]
        U = np.eye(m, dtype=complex) if U is None else np.asarray(U, dtype=complex)
        if U.shape != (m, m):
            raise DimensionError("U must be (n-1) x (n-1)")
        if np.max(np.abs(U @ U.conj().T - np.eye(m))) > UNITARY_TOL:
            raise ValueError("U is not unitary")
        c = complex(norm2(a), float(im_c))
        n = m + 1
        Ua = U.T @ np.conj(a)
        matrix = np.zeros((n + 1, n + 1), dtype=complex)
        matrix[0, 0] = 2.0 - c
        matrix[0, 1:n] = 2.0 * Ua
        matrix[0, n] = c
        matrix[1:n, 0] = -2.0 * a
        matrix[1:n, 1:n] = 2.0 * U
        matrix[1:n, n] = 2.0 * a
        matrix[n, 0] = -c
        matrix[n, 1:n] = 2.0 * Ua
        matrix[n, n] = 2.0 + c
        super().__init__(matrix)
        self.a = a
        self.U = U
        self.c = c
        for arr in (self.a, self.U):
            arr.setflags(write=False)

    def siegel_apply(self, w):
        w = as_point(w)
        tail = w[..., 1:] @ self.U.T
        out = np.empty_like(w)
        out[..., 0] = w[..., 0] + 2.0 * hermitian_inner(tail, self.a) + self.c
        out[..., 1:] = tail + self.a
        return out

    def apply(self, z, check=True):
        if check:
            z = check_interior(z)
        return super().apply(z)

    __call__ = apply

    def apply_via_cayley(self, z):
        """Evaluate as ``C^-1 o (Siegel map) o C``; the slow reference route."""
        return cayley_inverse(self.siegel_apply(cayley(z)))

    def jacobian_det(self, z):
        z = as_point(z)
        _, _, b, d = self._parts()
        den = z @ b + d
        return np.linalg.det(self.U) * (2.0 / den) ** (self.dim + 1)

    def inverse(self):
        Uh = self.U.conj().T
        return ParabolicAutomorphism(-Uh @ self.a, -self.c.imag, Uh)


def mobius_apply(T, z):
    return T.apply(z)


def hyperbolic_apply(phi, z):
    return phi.apply(z)


def parabolic_apply(T, z):
    return T.apply(z)


def jacobian_det(automorphism, z):
    """Closed-form complex Jacobian determinant of an automorphism at ``z``."""
    return automorphism.jacobian_det(z)


def in_siegel(w):
    w = np.asarray(w, dtype=complex)
    return w[..., 0].real - norm2(w[..., 1:]) > 0


def cayley(z):
    """Cayley transform B^n -> Siegel domain, ``(1 + z1, z'') / (1 - z1)``."""
    z = as_point(z)
    den = 1.0 - z[..., 0]
    if np.any(np.abs(den) < POLE_GUARD):
        raise PoleError("Cayley transform has a pole at z1 = 1")
    out = np.empty_like(z)
    out[..., 0] = (1.0 + z[..., 0]) / den
    out[..., 1:] = z[..., 1:] / den[..., None]
    return out


def cayley_inverse(w):
    w = as_point(w)
    if not np.all(in_siegel(w)):
        raise DomainError("point is not in the Siegel domain")
    den = w[..., 0] + 1.0
    out = np.empty_like(w)
    out[..., 0] = (w[..., 0] - 1.0) / den
    out[..., 1:] = 2.0 * w[..., 1:] / den[..., None]
    if np.any(1.0 - norm2(out) < INTERIOR_GUARD):
        raise DomainError("preimage is numerically on the sphere")
    return out


def _cayley_lfm(n):
    m = np.eye(n + 1, dtype=complex)
    m[0, n] = 1.0
    m[n, 0] = -1.0
    return LinearFractionalMap(m)


def _cayley_inverse_lfm(n):
    m = 2.0 * np.eye(n + 1, dtype=complex)
    m[0, 0] = 1.0
    m[0, n] = -1.0
    m[n, 0] = 1.0
    m[n, n] = 1.0
    return LinearFractionalMap(m)


def cayley_jacobian(z):
    z = as_point(z)
    return _cayley_lfm(z.shape[-1]).jacobian(z)


def cayley_inverse_jacobian(w):
    w = as_point(w)
    return _cayley_inverse_lfm(w.shape[-1]).jacobian(w)


def normalizing_parabolic(z0):
    """Parabolic ``T`` with ``T(z0) = (1 - R)/(1 + R) e1``, ``R = R(z0)``."""
    z0 = check_interior(z0, "z0")
    w0 = cayley(z0)
    return ParabolicAutomorphism(-w0[1:], im_c=-w0[0].imag)


def boundary_ratio(z):
    """``R(z) = |1 - z1|^2 / (1 - |z|^2)``."""
    z = as_point(z)
    return np.abs(1.0 - z[..., 0]) ** 2 / (1.0 - norm2(z))


def normalized_radius(z):
    """``r(z) = (1 - R(z)) / (1 + R(z))``."""
    R = boundary_ratio(z)
    return (1.0 - R) / (1.0 + R)


def random_unitary(m, rng):
    """Haar-random unitary via QR with phase correction."""
    g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))
