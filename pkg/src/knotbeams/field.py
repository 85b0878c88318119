"""From (p, Gamma_trig, a) to a polynomial on R^3 and its z=0 coefficient table.

Substituting e^{it} -> v, e^{-it} -> conj(v) in the loop of polynomials gives
a semiholomorphic f(u, v, vbar).  Composing with inverse stereographic
projection and clearing the denominator with (x^2+y^2+z^2+1)^k gives a
complex polynomial F on R^3 whose zeros close the braid.  Restricted to the
z=0 plane, F is a finite sum  sum c_{n,l} R^n e^{i l phi}  with c_{n,l} = 0
for n - l odd; that coefficient table is the sole input to propagation.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .construct import BasePolynomial, TrigLoop


@dataclass(frozen=True)
class SemiholomorphicPoly:
    """Sparse polynomial in (u, v, vbar), holomorphic in u by representation.

    terms maps (p_u, q_v, r_vbar) -> complex coefficient.  scale is the root
    scaling a used to build it (kept for reporting only).
    """

    terms: dict[tuple[int, int, int], complex] = field(default_factory=dict)
    scale: float = 1.0

    def __post_init__(self):
        clean = {k: complex(v) for k, v in self.terms.items() if v != 0}
        object.__setattr__(self, "terms", clean)
        if not clean:
            raise ValueError("semiholomorphic polynomial must be nonzero")

    @property
    def degree(self) -> int:
        """Total degree, which is also the denominator-clearing exponent k."""
        return max(pu + qv + rv for (pu, qv, rv) in self.terms)

    def __call__(self, u, v):
        u = np.asarray(u, dtype=complex)
        v = np.asarray(v, dtype=complex)
        vb = np.conj(v)
        out = np.zeros(np.broadcast(u, v).shape, dtype=complex)
        for (pu, qv, rv), c in self.terms.items():
            out = out + c * u**pu * v**qv * vb**rv
        return out

    def eval_on_torus(self, u, t):
        """f(u, e^{it}); equal to the loop of polynomials that built f."""
        return self(u, np.exp(1j * np.asarray(t, dtype=float)))


def build_semiholomorphic(p: BasePolynomial, trig: TrigLoop, a: float) -> SemiholomorphicPoly:
    """f(u, v, vbar) = a^s * (p(u/a) - Gamma_trig(v, vbar)).

    Scaling u by a shrinks the braid radially (the closure type is unchanged);
    the overall factor a^s makes f monic-free but keeps the displayed
    coefficient sizes of the construction, and of course does not move zeros.
    On |v| = 1 this is exactly a^s * g_t(u/a).
    """
    if not 0 < a <= 1:
        raise ValueError(f"scale a must be in (0, 1], got {a}")
    s = p.degree
    terms: dict[tuple[int, int, int], complex] = {}
    coeffs = p.coefficients          # monic, highest first
    for idx, c in enumerate(coeffs):
        deg = s - idx
        if c != 0:
            terms[(deg, 0, 0)] = complex(c) * a ** (s - deg)
    for q in range(-trig.order, trig.order + 1):
        d = trig.coefficient(q)
        if d == 0:
            continue
        key = (0, q, 0) if q >= 0 else (0, 0, -q)
        terms[key] = terms.get(key, 0) - a**s * d
    return SemiholomorphicPoly(terms, scale=a)


@dataclass(frozen=True)
class CoefficientField:
    """Sparse table c_{n,l} of F(R, phi, 0) = sum c_{n,l} R^n e^{i l phi}.

    Invariants: c_{n,l} = 0 whenever n - l is odd, and |l| <= n.  n_max is
    2k where k is the total degree of the source polynomial.
    """

    coeffs: dict[tuple[int, int], complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (n, ell), c in self.coeffs.items():
            if c == 0:
                continue
            if (n - ell) % 2 != 0:
                raise ValueError(f"parity violation: c_({n},{ell}) nonzero with n-l odd")
            if abs(ell) > n:
                raise ValueError(f"invalid entry ({n},{ell}): |l| > n")
            clean[(n, ell)] = complex(c)
        object.__setattr__(self, "coeffs", clean)

    @property
    def n_max(self) -> int:
        return max((n for n, _ in self.coeffs), default=0)

    def eval_z0(self, R, phi):
        R = np.asarray(R, dtype=float)
        phi = np.asarray(phi, dtype=float)
        out = np.zeros(np.broadcast(R, phi).shape, dtype=complex)
        for (n, ell), c in self.coeffs.items():
            out = out + c * R**n * np.exp(1j * ell * phi)
        return out

    def to_text(self) -> str:
        """Deterministic text table, one `n l re im` row per entry."""
        buf = io.StringIO()
        buf.write("# knotbeams coefficient table v1\n")
        buf.write("# n l re im\n")
        for (n, ell) in sorted(self.coeffs):
            c = self.coeffs[(n, ell)]
            buf.write(f"{n} {ell} {c.real!r} {c.imag!r}\n")
        return buf.getvalue()

    @classmethod
    def from_text(cls, text: str) -> "CoefficientField":
        coeffs = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            n_s, l_s, re_s, im_s = line.split()
            coeffs[(int(n_s), int(l_s))] = complex(float(re_s), float(im_s))
        return cls(coeffs)


def restrict_z0_cylindrical(f: SemiholomorphicPoly) -> CoefficientField:
    """Exact z=0 cylindrical expansion of F = (R^2+1)^k f(u, v, vbar).

    At z = 0 the projection substitutes u = (R^2-1)/(R^2+1) and
    v = 2 R e^{i phi} / (R^2+1), so a monomial u^pu v^qv vbar^rv contributes
    (R^2-1)^pu (2R)^(qv+rv) (R^2+1)^(k-pu-qv-rv) e^{i (qv-rv) phi}, expanded
    by polynomial convolution in R^2.  The parity invariant n - l even holds
    term by term.
    """
    k = f.degree
    poly = np.polynomial.polynomial
    acc: dict[tuple[int, int], complex] = {}
    for (pu, qv, rv), c in f.terms.items():
        ell = qv - rv
        base = qv + rv
        radial = poly.polymul(poly.polypow([-1.0, 1.0], pu),
                              poly.polypow([1.0, 1.0], k - pu - base))
        for i, coef in enumerate(np.atleast_1d(radial)):
            if coef == 0:
                continue
            key = (2 * i + base, ell)
            acc[key] = acc.get(key, 0) + c * coef * 2.0**base
    return CoefficientField(acc)


def eval_F(f: SemiholomorphicPoly, x, y, z):
    """F(x,y,z) = (x^2+y^2+z^2+1)^k f(u, v) under inverse stereographic projection."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    rho2 = x * x + y * y + z * z
    denom = rho2 + 1.0
    u = (rho2 - 1.0 + 2j * z) / denom
    v = 2.0 * (x + 1j * y) / denom
    return denom ** f.degree * f(u, v)
