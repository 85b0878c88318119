"""Closed-form paraxial solutions and field assembly from a coefficient table.

Everything here solves the paraxial wave equation with unit wavenumber,

    (d^2/dx^2 + d^2/dy^2) Psi + 2i dPsi/dz = 0.

P_{n,l} is the unique solution equal to R^n e^{i l phi} at z = 0; it is a
polynomial in (R, z), evaluated through a singularity-free finite double sum
(the textbook closed form with a Laguerre factor of argument R^2/(-2iz) has a
removable singularity at z = 0).  Q_{n,l}(.;w) is the unique solution that
restricts to e^{-R^2/(2w^2)} (R/w)^n e^{i l phi}; it is expanded over
standard Laguerre-Gaussian modes using the monomial-to-Laguerre inversion

    x^d = d! sum_i (-1)^i C(d+a, d-i) L_i^(a)(x),

with each mode carrying its own Gouy factor (1-iz/w^2)^i/(1+iz/w^2)^(i+|l|+1).
Both restriction contracts and the scaling identity
Q(R,phi,z;w) = Q(R/w,phi,z/w^2;1) are exact in this representation and are
enforced by the test suite together with a finite-difference residual check.

Assembled fields collapse the (n,l) sum into per-l coefficient tables once at
construction, so evaluation on tracing grids is a couple of matrix products
rather than a sum over hundreds of basis beams.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .field import CoefficientField

MACHINE_FLOOR = 1e-300


def laguerre(d: int, alpha: int, x):
    """Generalized Laguerre polynomial L_d^(alpha)(x) by the three-term recurrence.

    L_0 = 1, L_1 = 1 + alpha - x,
    (d+1) L_{d+1} = (2d+1+alpha-x) L_d - (d+alpha) L_{d-1}.
    Accepts real or complex scalars and arrays.
    """
    if d < 0 or alpha < 0:
        raise ValueError("laguerre requires d >= 0 and alpha >= 0")
    x = np.asarray(x)
    prev = np.ones_like(x)
    if d == 0:
        return prev
    cur = 1 + alpha - x
    for i in range(1, d):
        prev, cur = cur, ((2 * i + 1 + alpha - x) * cur - (i + alpha) * prev) / (i + 1)
    return cur


def _check_mode(n: int, ell: int):
    if n < abs(ell):
        raise ValueError(f"mode (n={n}, l={ell}) requires n >= |l|")
    if (n - ell) % 2 != 0:
        raise ValueError(f"mode (n={n}, l={ell}) violates the parity condition n - l even")


def P_beam(n: int, ell: int, R, phi, z):
    """Polynomial beam: the paraxial solution equal to R^n e^{i l phi} at z = 0.

    P_{n,l} = R^|l| e^{i l phi} d! sum_{i=0}^{d} C(d+|l|, d-i) R^{2i} (2iz)^{d-i} / i!
    with d = (n - |l|)/2.
    """
    _check_mode(n, ell)
    R = np.asarray(R, dtype=float)
    phi = np.asarray(phi, dtype=float)
    z = np.asarray(z, dtype=float)
    al = abs(ell)
    d = (n - al) // 2
    zz = 2j * z
    acc = np.zeros(np.broadcast(R, phi, z).shape, dtype=complex)
    for i in range(d + 1):
        acc = acc + comb(d + al, d - i) / factorial(i) * R ** (2 * i) * zz ** (d - i)
    return factorial(d) * R**al * np.exp(1j * ell * phi) * acc


def Q_beam(n: int, ell: int, R, phi, z, w: float = 1.0):
    """Laguerre-Gaussian beam restricting to e^{-R^2/(2w^2)} (R/w)^n e^{i l phi} at z=0.

    Satisfies the scaling identity Q(R,phi,z;w) = Q(R/w,phi,z/w^2;1) exactly.
    """
    _check_mode(n, ell)
    if w <= 0:
        raise ValueError(f"beam width must be positive, got {w}")
    R = np.asarray(R, dtype=float) / w
    phi = np.asarray(phi, dtype=float)
    z = np.asarray(z, dtype=float) / w**2
    al = abs(ell)
    d = (n - al) // 2
    qp = 1.0 + 1j * z
    ratio = (1.0 - 1j * z) / qp
    x = R * R / (1.0 + z * z)
    acc = np.zeros(np.broadcast(R, phi, z).shape, dtype=complex)
    rpow = np.ones_like(qp)
    for i in range(d + 1):
        acc = acc + (-1) ** i * comb(d + al, d - i) * rpow * laguerre(i, al, x)
        rpow = rpow * ratio
    envelope = np.exp(-R * R / (2.0 * qp))
    return factorial(d) * R**al * np.exp(1j * ell * phi) * acc * envelope / qp ** (al + 1)


# --- assembled fields ----------------------------------------------------------

class _SliceProfile:
    """Per-l radial profiles G_l on a fixed point set; a slice is one matvec."""

    def __init__(self, ells: np.ndarray, profiles: np.ndarray, shape):
        self.ells = ells               # (L,)
        self.profiles = profiles       # (L, P) complex
        self.shape = shape

    def at(self, phi: float) -> np.ndarray:
        vals = np.exp(1j * self.ells * phi) @ self.profiles
        return vals.reshape(self.shape)


@dataclass(frozen=True)
class PolynomialBeamField:
    """Psi = sum c_{n,l} P_{n,l}: polynomial solution matching F on z = 0.

    The (n,l) sum is collapsed at construction into one 2D coefficient table
    per l over the monomials R^{2i} (2iz)^j.
    """

    source: CoefficientField

    def __post_init__(self):
        tables = {}
        for (n, ell), c in self.source.coeffs.items():
            al = abs(ell)
            d = (n - al) // 2
            tab = tables.setdefault(ell, {})
            fd = factorial(d)
            for i in range(d + 1):
                key = (i, d - i)
                tab[key] = tab.get(key, 0) + c * fd * comb(d + al, d - i) / factorial(i)
        packed = {}
        for ell, tab in tables.items():
            imax = max(i for i, _ in tab)
            jmax = max(j for _, j in tab)
            C = np.zeros((imax + 1, jmax + 1), dtype=complex)
            for (i, j), v in tab.items():
                C[i, j] = v
            packed[ell] = C
        object.__setattr__(self, "_tables", packed)

    def _radial(self, R: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """G_l(R,z) with the R^{|l|} factor folded in; returns (ells, (L,P))."""
        R2 = R * R
        Z = 2j * z
        ells = np.array(sorted(self._tables))
        out = np.empty((len(ells), R.size), dtype=complex)
        for row, ell in enumerate(ells):
            C = self._tables[ell]
            rp = np.vander(R2, C.shape[0], increasing=True).T     # (imax+1, P)
            zp = np.vander(Z, C.shape[1], increasing=True).T      # (jmax+1, P)
            out[row] = np.einsum("ij,ip,jp->p", C, rp, zp) * R ** abs(ell)
        return ells, out

    def eval(self, R, phi, z):
        R, phi, z = np.broadcast_arrays(np.asarray(R, dtype=float),
                                        np.asarray(phi, dtype=float),
                                        np.asarray(z, dtype=float))
        shape = R.shape
        ells, G = self._radial(R.ravel(), z.ravel())
        vals = np.einsum("lp,lp->p", np.exp(1j * np.outer(ells, phi.ravel())), G)
        return vals.reshape(shape) if shape else complex(vals[0])

    def __call__(self, R, phi, z):
        return self.eval(R, phi, z)

    def slice_profile(self, R: np.ndarray, z: np.ndarray) -> _SliceProfile:
        """Precompute radial profiles for repeated constant-phi evaluation."""
        R = np.asarray(R, dtype=float)
        shape = R.shape
        ells, G = self._radial(R.ravel(), np.asarray(z, dtype=float).ravel())
        return _SliceProfile(ells, G, shape)

    def nodal_form(self) -> "PolynomialBeamField":
        """Evaluator with the same zeros, scaled for root finding (identity here)."""
        return self


@dataclass(frozen=True)
class GaussianBeamField:
    """Psi_mu = sum c_{n,l} mu^n Q_{n,l}(.;w): narrow-Gaussian propagated field.

    The z=0 restriction is e^{-R^2/(2w^2)} sum c_{n,l} (mu R / w)^n e^{i l phi}.
    With `envelope=False` the common Gaussian factor exp(-R^2/(2w^2(1+iz/w^2)))
    is dropped: the zeros are unchanged and the magnitudes stay of polynomial
    size, which matters because the knot lives far out in the envelope tail.
    """

    source: CoefficientField
    mu: float
    w: float = 1.0
    envelope: bool = True

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError(f"radial scale mu must be positive, got {self.mu}")
        if self.w <= 0:
            raise ValueError(f"beam width must be positive, got {self.w}")
        coeff_d = {}
        dmax = {}
        for (n, ell), c in self.source.coeffs.items():
            al = abs(ell)
            d = (n - al) // 2
            dmax[ell] = max(dmax.get(ell, 0), d)
            coeff_d.setdefault(ell, []).append((d, c * self.mu**n))
        tables = {}
        for ell, terms in coeff_d.items():
            al = abs(ell)
            D = np.zeros(dmax[ell] + 1, dtype=complex)
            for d, c in terms:
                fd = factorial(d)
                for i in range(d + 1):
                    D[i] += c * fd * (-1) ** i * comb(d + al, d - i)
            tables[ell] = D
        object.__setattr__(self, "_tables", tables)

    def _radial(self, R: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        Rs = R / self.w
        zs = z / self.w**2
        qp = 1.0 + 1j * zs
        ratio = (1.0 - 1j * zs) / qp
        x = Rs * Rs / (1.0 + zs * zs)
        ells = np.array(sorted(self._tables))
        imax = max(len(D) for D in self._tables.values()) - 1
        # Laguerre rows for each alpha actually used
        lag = {}
        for al in sorted({abs(e) for e in ells}):
            rows = np.empty((imax + 1, R.size), dtype=float)
            rows[0] = 1.0
            if imax >= 1:
                rows[1] = 1 + al - x
            for i in range(1, imax):
                rows[i + 1] = ((2 * i + 1 + al - x) * rows[i] - (i + al) * rows[i - 1]) / (i + 1)
            lag[al] = rows
        out = np.empty((len(ells), R.size), dtype=complex)
        for row, ell in enumerate(ells):
            al = abs(ell)
            D = self._tables[ell]
            acc = np.zeros(R.size, dtype=complex)
            rpow = np.ones(R.size, dtype=complex)
            for i, Di in enumerate(D):
                if Di != 0:
                    acc += Di * rpow * lag[al][i]
                rpow = rpow * ratio
            out[row] = acc * Rs**al / qp ** (al + 1)
        if self.envelope:
            out = out * np.exp(-Rs * Rs / (2.0 * qp))
        return ells, out

    def eval(self, R, phi, z):
        R, phi, z = np.broadcast_arrays(np.asarray(R, dtype=float),
                                        np.asarray(phi, dtype=float),
                                        np.asarray(z, dtype=float))
        shape = R.shape
        ells, G = self._radial(R.ravel(), z.ravel())
        vals = np.einsum("lp,lp->p", np.exp(1j * np.outer(ells, phi.ravel())), G)
        return vals.reshape(shape) if shape else complex(vals[0])

    def __call__(self, R, phi, z):
        return self.eval(R, phi, z)

    def slice_profile(self, R: np.ndarray, z: np.ndarray) -> _SliceProfile:
        R = np.asarray(R, dtype=float)
        shape = R.shape
        ells, G = self._radial(R.ravel(), np.asarray(z, dtype=float).ravel())
        return _SliceProfile(ells, G, shape)

    def nodal_form(self) -> "GaussianBeamField":
        """Envelope-free evaluator with identical zeros, for robust tracing."""
        if not self.envelope:
            return self
        return GaussianBeamField(self.source, self.mu, self.w, envelope=False)


def assemble_polynomial_beam(c: CoefficientField) -> PolynomialBeamField:
    """Lazy evaluator for Psi = sum c_{n,l} P_{n,l}; coincides with F on z = 0."""
    return PolynomialBeamField(c)


def assemble_gaussian_beam(c: CoefficientField, mu: float, w: float = 1.0) -> GaussianBeamField:
    """Lazy evaluator for Psi_mu = sum c_{n,l} mu^n Q_{n,l}(.;w)."""
    return GaussianBeamField(c, mu, w)


def paraxial_residual(field, point: tuple[float, float, float], h: float,
                      order: int = 4) -> float:
    """Relative paraxial residual |lap_perp Psi + 2i dPsi/dz| / (|Psi| + floor).

    Central finite differences in Cartesian x, y and in z with step h;
    order 4 (default) uses five-point stencils, order 2 three-point ones.
    """
    if h <= 0:
        raise ValueError(f"step h must be positive, got {h}")
    if order not in (2, 4):
        raise ValueError("order must be 2 or 4")
    R0, phi0, z0 = point
    x0, y0 = R0 * np.cos(phi0), R0 * np.sin(phi0)

    def f(x, y, z):
        return field.eval(np.hypot(x, y), np.arctan2(y, x), z)

    if order == 2:
        lap = (f(x0 + h, y0, z0) + f(x0 - h, y0, z0)
               + f(x0, y0 + h, z0) + f(x0, y0 - h, z0) - 4 * f(x0, y0, z0)) / h**2
        dz = (f(x0, y0, z0 + h) - f(x0, y0, z0 - h)) / (2 * h)
    else:
        def lap1(vm2, vm1, v0, vp1, vp2):
            return (-vm2 + 16 * vm1 - 30 * v0 + 16 * vp1 - vp2) / (12 * h**2)
        v0 = f(x0, y0, z0)
        lap = (lap1(f(x0 - 2*h, y0, z0), f(x0 - h, y0, z0), v0, f(x0 + h, y0, z0), f(x0 + 2*h, y0, z0))
               + lap1(f(x0, y0 - 2*h, z0), f(x0, y0 - h, z0), v0, f(x0, y0 + h, z0), f(x0, y0 + 2*h, z0)))
        dz = (f(x0, y0, z0 - 2*h) - 8 * f(x0, y0, z0 - h)
              + 8 * f(x0, y0, z0 + h) - f(x0, y0, z0 + 2*h)) / (12 * h)
    residual = lap + 2j * dz
    return float(abs(residual) / (abs(f(x0, y0, z0)) + MACHINE_FLOOR))
