"""Base polynomial, basic loops, loop concatenation, and the loop of polynomials.

The construction starts from a monic real polynomial p with distinct real
roots (one of them zero).  Its critical points c_j interlace the roots and its
critical values v_j = p(c_j) are distinct.  For each j a basic loop gamma_j,
based at the origin, winds once counterclockwise around v_j and around no
other critical value.  A braid word selects a concatenation Gamma(t) of these
loops, and the loop of polynomials g_t(u) = p(u) - Gamma(t) has roots tracing
the desired braid.

Two independent diagnostics certify a construction: tracking the roots of g_t
and reading off their braid word, and counting the winding of v_j - Gamma(t)
on each letter interval, which must reproduce the word letter for letter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .braid import BraidWord

TWO_PI = 2.0 * np.pi


class RootCollisionError(RuntimeError):
    """Two tracked roots approached within the collision tolerance."""

    def __init__(self, t: float, separation: float):
        super().__init__(
            f"root collision at t={t:.6f}: separation {separation:.3e} "
            "(the loop passes too close to a critical value)")
        self.t = t
        self.separation = separation


@dataclass(frozen=True)
class BasePolynomial:
    """Monic real polynomial p(u) = prod (u - z_j) with distinct real roots.

    Roots are stored sorted ascending; one root must be zero.  Construction
    checks that the critical points are real and distinct and the critical
    values are distinct, since the loop construction is meaningless otherwise.
    """

    roots: tuple[float, ...]

    def __post_init__(self):
        roots = tuple(sorted(float(r) for r in self.roots))
        object.__setattr__(self, "roots", roots)
        if len(roots) < 2:
            raise ValueError("base polynomial needs degree >= 2")
        scale = max(abs(r) for r in roots) or 1.0
        if min(np.diff(roots)) <= 1e-9 * scale:
            raise ValueError("roots must be distinct")
        if min(abs(r) for r in roots) > 1e-9 * scale:
            raise ValueError("one root must be zero")
        # fail early if the critical data is degenerate
        critical_data(self)

    @property
    def degree(self) -> int:
        return len(self.roots)

    @property
    def coefficients(self) -> np.ndarray:
        """Monic coefficients, highest power first."""
        return np.poly(np.asarray(self.roots))

    def __call__(self, u):
        return np.polyval(self.coefficients, u)

    def derivative(self, u):
        return np.polyval(np.polyder(self.coefficients), u)


def critical_data(p: BasePolynomial) -> tuple[np.ndarray, np.ndarray]:
    """Critical points and critical values of p, ordered by critical point.

    The critical points of a real-rooted polynomial interlace its roots, so
    each is bracketed in (z_j, z_{j+1}).  Simultaneous iteration on p' with a
    Newton polish is used first; any interval it misses falls back to
    bracketed root finding, which cannot fail.
    """
    roots = np.asarray(p.roots)
    dp = np.polyder(p.coefficients)
    scale = max(1.0, float(np.abs(dp).max()))

    guesses = 0.5 * (roots[:-1] + roots[1:]).astype(complex)
    crit = _aberth(dp, guesses)
    crit = crit.real.astype(float)
    # Newton polish and bracket validation, interval by interval
    out = []
    for j, c in enumerate(np.sort(crit)):
        lo, hi = roots[j], roots[j + 1]
        for _ in range(8):
            d1 = np.polyval(dp, c)
            d2 = np.polyval(np.polyder(dp), c)
            if d2 == 0:
                break
            c = c - d1 / d2
        if not (lo < c < hi) or abs(np.polyval(dp, c)) > 1e-12 * scale:
            c = brentq(lambda u: np.polyval(dp, u), lo + 1e-14, hi - 1e-14)
        if abs(np.polyval(dp, c)) > 1e-12 * scale:
            raise ArithmeticError(f"critical point residual too large in ({lo}, {hi})")
        out.append(c)
    crit = np.array(out)
    values = np.polyval(p.coefficients, crit)
    vtol = 1e-8 * max(1.0, float(np.abs(values).max()))
    for a in range(len(values)):
        for b in range(a + 1, len(values)):
            if abs(values[a] - values[b]) < vtol:
                raise ArithmeticError(
                    f"critical values v_{a+1}={values[a]:.6g} and v_{b+1}={values[b]:.6g} coincide")
    return crit, values


# --- basic loops ---------------------------------------------------------------

#: term order for loop piece coefficients: constant, cos, sin, cos(2x), sin(2x)
N_LOOP_TERMS = 5


@dataclass(frozen=True)
class LoopPiece:
    """Closed-form loop segment on a sub-interval of [0, 2pi].

    lo/hi are fractions of a full turn; re/im are coefficient 5-vectors over
    (1, cos chi, sin chi, cos 2chi, sin 2chi).
    """

    lo: float
    hi: float
    re: tuple[float, ...]
    im: tuple[float, ...]

    def __post_init__(self):
        if not (0.0 <= self.lo < self.hi <= 1.0):
            raise ValueError(f"bad piece interval [{self.lo}, {self.hi}]")
        if len(self.re) != N_LOOP_TERMS or len(self.im) != N_LOOP_TERMS:
            raise ValueError(f"piece coefficients must have {N_LOOP_TERMS} terms")


@dataclass(frozen=True)
class BasicLoop:
    """Piecewise trigonometric loop gamma: [0, 2pi] -> C based at the origin."""

    pieces: tuple[LoopPiece, ...]

    def __post_init__(self):
        cover = 0.0
        for pc in self.pieces:
            if abs(pc.lo - cover) > 1e-12:
                raise ValueError("loop pieces must cover [0,1] contiguously")
            cover = pc.hi
        if abs(cover - 1.0) > 1e-12:
            raise ValueError("loop pieces must cover the full interval")
        ends = self(np.array([0.0, TWO_PI]))
        if np.abs(ends).max() > 1e-9:
            raise ValueError("loop must be based at the origin")

    def __call__(self, chi):
        chi = np.asarray(chi, dtype=float)
        frac = chi / TWO_PI
        out = np.zeros(chi.shape, dtype=complex)
        basis = None
        for pc in self.pieces:
            mask = (frac >= pc.lo - 1e-15) & (frac <= pc.hi + 1e-15) if len(self.pieces) > 1 \
                else np.ones(chi.shape, dtype=bool)
            if not mask.any():
                continue
            x = chi[mask]
            basis = np.stack([np.ones_like(x), np.cos(x), np.sin(x),
                              np.cos(2 * x), np.sin(2 * x)])
            out[mask] = np.asarray(pc.re) @ basis + 1j * (np.asarray(pc.im) @ basis)
        return out

    def winding_number(self, point: complex, samples: int = 4096) -> int:
        """Discrete winding count of the loop about `point`."""
        chi = np.linspace(0.0, TWO_PI, samples + 1)
        path = self(chi) - point
        if np.abs(path).min() < 1e-9:
            raise ArithmeticError(f"loop passes through {point}; winding undefined")
        dang = np.diff(np.angle(path))
        dang = (dang + np.pi) % TWO_PI - np.pi
        return int(round(dang.sum() / TWO_PI))


def check_basic_loops(p: BasePolynomial, loops: dict[int, BasicLoop]) -> None:
    """Validate the winding contract: gamma_j winds v_j once and nothing else."""
    _, values = critical_data(p)
    for j, loop in loops.items():
        for i, v in enumerate(values, start=1):
            expected = 1 if i == j else 0
            got = loop.winding_number(complex(v))
            if got != expected:
                raise ValueError(
                    f"loop gamma_{j} has winding {got} about v_{i}={v:.6g}, expected {expected}")


@dataclass(frozen=True)
class PiecewiseLoop:
    """The concatenated loop Gamma(t) determined by a braid word.

    On the k-th of ell equal sub-intervals of [0, 2pi] (k = 1..ell), Gamma
    traverses gamma_{j_k}^{eps_k}, i.e. Gamma(t) = gamma_{j_k}^{eps_k}(ell*t - 2(k-1)pi).
    Inverse letters traverse the same path in the opposite direction.
    """

    word: BraidWord
    loops: dict[int, BasicLoop] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        missing = {j for j, _ in self.word.letters} - set(self.loops)
        if missing:
            raise ValueError(f"no basic loop supplied for generator index(es) {sorted(missing)}")

    @property
    def ell(self) -> int:
        return len(self.word.letters)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        ell = self.ell
        if ell == 0:
            return out
        tt = np.mod(t, TWO_PI)
        k = np.minimum((tt * ell / TWO_PI).astype(int), ell - 1)
        chi = ell * tt - TWO_PI * k
        for ki, (j, sign) in enumerate(self.word.letters):
            mask = k == ki
            if not mask.any():
                continue
            x = chi[mask]
            out[mask] = self.loops[j](x if sign > 0 else TWO_PI - x)
        return out


@dataclass(frozen=True)
class TrigLoop:
    """Finite Fourier series Gamma_trig(t) = sum_{|q| <= m} d_q e^{iqt}."""

    order: int
    coeffs: tuple[complex, ...]            # d_q for q = -m..m
    n_intervals: int | None = None         # letter count of the source loop, if any

    def __post_init__(self):
        if len(self.coeffs) != 2 * self.order + 1:
            raise ValueError("coefficient count must be 2*order + 1")

    def coefficient(self, q: int) -> complex:
        if abs(q) > self.order:
            return 0.0 + 0.0j
        return self.coeffs[q + self.order]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        q = np.arange(-self.order, self.order + 1)
        return np.exp(1j * np.multiply.outer(t, q)) @ np.asarray(self.coeffs)


def fourier_approximate(gamma: PiecewiseLoop, m: int, samples: int = 4096,
                        fix_basepoint: bool = True) -> TrigLoop:
    """Degree-m trigonometric approximation of a loop by uniform-grid quadrature.

    d_q = (1/N) sum_r Gamma(2 pi r / N) e^{-i q 2 pi r / N}, truncated to
    |q| <= m.  `samples` must be a power of two and at least 8*m.

    With fix_basepoint (the default) the constant term is shifted by
    -Gamma_trig(0) so the truncated series is exactly zero at t = 0; the roots
    of p - Gamma_trig then start exactly at the roots of p.
    """
    if samples < 8 * m:
        raise ValueError(f"samples={samples} must be at least 8*m = {8*m}")
    if samples & (samples - 1):
        raise ValueError(f"samples={samples} must be a power of two")
    t = TWO_PI * np.arange(samples) / samples
    spectrum = np.fft.fft(gamma(t)) / samples
    d = np.concatenate([spectrum[-m:], spectrum[:m + 1]]) if m > 0 else spectrum[:1]
    if fix_basepoint:
        d[m] -= d.sum()
    ell = gamma.ell if isinstance(gamma, PiecewiseLoop) else None
    return TrigLoop(m, tuple(d.tolist()), n_intervals=ell or None)


def concatenate_loops(b: BraidWord, loops: dict[int, BasicLoop]) -> PiecewiseLoop:
    return PiecewiseLoop(b, dict(loops))


def g_eval(p: BasePolynomial, trig: TrigLoop, u, t):
    """The loop of polynomials g_t(u) = p(u) - Gamma_trig(t)."""
    return p(u) - trig(t)


# --- root tracking -------------------------------------------------------------

@dataclass(frozen=True)
class RootBraid:
    """Roots of g_t sampled over a full period, matched into strands.

    strands[i, j] is the j-th strand at t = grid[i]; strands[-1] equals
    strands[0] up to the closure permutation.
    """

    grid: np.ndarray
    strands: np.ndarray
    min_separation: float
    closure: tuple[int, ...]

    @property
    def n_strands(self) -> int:
        return self.strands.shape[1]


def _aberth(coeffs: np.ndarray, guesses: np.ndarray, tol: float = 1e-13,
            max_iter: int = 80) -> np.ndarray:
    """Aberth-Ehrlich simultaneous iteration for all roots of a polynomial."""
    coeffs = np.asarray(coeffs, dtype=complex)
    dcoeffs = np.polyder(coeffs)
    z = np.asarray(guesses, dtype=complex).copy()
    scale = max(1.0, float(np.abs(z).max()))
    for _ in range(max_iter):
        pv = np.polyval(coeffs, z)
        dv = np.polyval(dcoeffs, z)
        dv = np.where(dv == 0, 1e-300, dv)
        w = pv / dv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = (1.0 / diff).sum(axis=1)
        step = w / (1.0 - w * s)
        z = z - step
        if np.abs(step).max() < tol * scale:
            return z
    raise ArithmeticError("root finder did not converge")


def track_roots(p: BasePolynomial, trig: TrigLoop, steps: int | None = None) -> RootBraid:
    """Track all roots of g_t over t in [0, 2pi] by warm-started simultaneous iteration.

    Roots at consecutive steps are matched greedily by nearest neighbour; a
    pairwise separation below 1e-8 raises RootCollisionError with the
    offending t.  The returned strands close up to a permutation, which is
    reported so it can be checked against the braid word's closure.
    """
    ell = trig.n_intervals or 1
    if steps is None:
        steps = 64 * max(ell, 1)
    if trig.n_intervals and steps < 64 * trig.n_intervals:
        raise ValueError(f"steps={steps} below minimum 64*ell = {64 * trig.n_intervals}")
    coeffs = p.coefficients.astype(complex)
    grid = np.linspace(0.0, TWO_PI, steps + 1)
    gamma_vals = trig(grid)
    s = p.degree
    strands = np.empty((steps + 1, s), dtype=complex)
    current = np.asarray(p.roots, dtype=complex)
    min_sep = np.inf
    min_crit_sep = np.inf
    crit, _ = critical_data(p)
    for i, g in enumerate(gamma_vals):
        c = coeffs.copy()
        c[-1] -= g
        found = _aberth(c, current)
        # greedy nearest-neighbour matching to the previous configuration
        order = np.full(s, -1)
        dist = np.abs(current[:, None] - found[None, :])
        flat = np.argsort(dist, axis=None)
        used_prev, used_new = set(), set()
        for f in flat:
            a, b = divmod(int(f), s)
            if a in used_prev or b in used_new:
                continue
            used_prev.add(a)
            used_new.add(b)
            order[a] = b
            if len(used_prev) == s:
                break
        current = found[order]
        strands[i] = current
        pair = np.abs(current[:, None] - current[None, :])
        np.fill_diagonal(pair, np.inf)
        sep = float(pair.min())
        if sep < 1e-8:
            raise RootCollisionError(float(grid[i]), sep)
        min_sep = min(min_sep, sep)
        min_crit_sep = min(min_crit_sep, float(np.abs(current[:, None] - crit[None, :]).min()))
    # closure permutation: strand j ends where strand perm[j] began
    dist = np.abs(strands[-1][:, None] - strands[0][None, :])
    closure = tuple(int(np.argmin(dist[j])) for j in range(s))
    if sorted(closure) != list(range(s)):
        raise ArithmeticError("tracked strands do not close to a permutation")
    return RootBraid(grid, strands, min_sep, closure)


def root_braid_word(rb: RootBraid) -> BraidWord:
    """Read the braid word off tracked root strands.

    Strands are ordered by Re(u) at each step; a crossing is recorded when two
    adjacent strands swap order.  Sign convention (frozen by calibrating the
    trefoil construction): the crossing is positive when the strand arriving
    from larger Re(u) has the larger Im(u) at the swap.
    """
    strands = rb.strands
    steps, s = strands.shape[0] - 1, strands.shape[1]
    letters = []
    for i in range(steps):
        a, b = strands[i], strands[i + 1]
        ra = np.argsort(np.argsort(a.real))
        rbk = np.argsort(np.argsort(b.real))
        swaps = [(x, y) for x in range(s) for y in range(x + 1, s)
                 if (ra[x] - ra[y]) * (rbk[x] - rbk[y]) < 0]
        for x, y in swaps:
            right, left = (x, y) if ra[x] > ra[y] else (y, x)
            im_right = 0.5 * (a[right].imag + b[right].imag)
            im_left = 0.5 * (a[left].imag + b[left].imag)
            sign = 1 if im_right > im_left else -1
            letters.append((int(min(ra[x], ra[y])) + 1, sign))
    return BraidWord(s, tuple(letters))


def winding_diagnostic(p: BasePolynomial, trig: TrigLoop, j: int, k: int,
                       n_intervals: int | None = None, samples: int = 2048) -> int:
    """Winding number of t -> v_j - Gamma_trig(t) about 0 on the k-th letter interval.

    For a sound construction this equals eps_k when j = j_k and 0 otherwise,
    which reproduces the braid word letter for letter.  Requires Gamma_trig to
    nearly vanish at the interval endpoints (tolerance 0.05 * min_j |v_j|).
    """
    ell = n_intervals or trig.n_intervals
    if not ell:
        raise ValueError("interval count unknown; pass n_intervals")
    if not 1 <= k <= ell:
        raise ValueError(f"interval index k={k} out of range 1..{ell}")
    crit, values = critical_data(p)
    if not 1 <= j <= len(values):
        raise ValueError(f"critical index j={j} out of range 1..{len(values)}")
    vmin = float(np.abs(values).min())
    ends = np.abs(trig(np.array([TWO_PI * (k - 1) / ell, TWO_PI * k / ell])))
    if ends.max() > 0.05 * vmin:
        raise ArithmeticError(
            f"Gamma_trig does not vanish at interval endpoints (|value| = {ends.max():.3g})")
    t = np.linspace(TWO_PI * (k - 1) / ell, TWO_PI * k / ell, samples + 1)
    path = values[j - 1] - trig(t)
    if np.abs(path).min() < 1e-6:
        raise ArithmeticError("path passes through 0; winding undefined")
    dang = np.diff(np.angle(path))
    dang = (dang + np.pi) % TWO_PI - np.pi
    return int(round(dang.sum() / TWO_PI))


def winding_word(p: BasePolynomial, trig: TrigLoop, n_intervals: int | None = None) -> BraidWord:
    """Braid word reconstructed from the full winding diagnostic table.

    Letter k is sigma_j^eps for the unique j with nonzero winding on interval
    k; an interval with no nonzero winding or more than one is an error.
    """
    ell = n_intervals or trig.n_intervals
    if not ell:
        raise ValueError("interval count unknown; pass n_intervals")
    _, values = critical_data(p)
    letters = []
    for k in range(1, ell + 1):
        hits = [(j, winding_diagnostic(p, trig, j, k, n_intervals=ell))
                for j in range(1, len(values) + 1)]
        nonzero = [(j, w) for j, w in hits if w != 0]
        if len(nonzero) != 1 or abs(nonzero[0][1]) != 1:
            raise ArithmeticError(f"interval {k}: ambiguous winding pattern {hits}")
        letters.append(nonzero[0])
    return BraidWord(len(values) + 1, tuple(letters))
