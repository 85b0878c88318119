"""Zero location on constant-azimuth half-planes and linking into nodal curves.

Zeros are found per slice by scanning an (R, z) grid for cells where both the
real and the imaginary part change sign, then polishing each candidate with a
two-variable Newton iteration.  Consecutive slices are matched greedily by
nearest neighbour; chains that return to their starting point after a full
turn are closed nodal curves, everything else is reported as an open chain
(open chains are the primary diagnostic when a construction parameter is bad,
so they are never dropped silently).

Gaussian fields are traced through their envelope-free form: the zeros are
the same, but in the region of interest (radius ~ 1/mu) the envelope factor
can be as small as e^{-300}, far below double-precision range.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

NEWTON_MAX_ITER = 50
NEWTON_RESIDUAL = 1e-9     # |Psi| <= NEWTON_RESIDUAL * local scale
MERGE_TOL = 1e-6           # dedup distance as a fraction of the window size
LINK_FACTOR = 5.0          # linking threshold = LINK_FACTOR * median displacement
AMBIGUITY_RATIO = 0.1      # a runner-up candidate within 10% is logged
MACHINE_TINY = 1e-280


@dataclass(frozen=True)
class Window:
    """Search rectangle in the (R, z) half-plane."""

    r_min: float
    r_max: float
    z_min: float
    z_max: float

    def __post_init__(self):
        if not (0 <= self.r_min < self.r_max and self.z_min < self.z_max):
            raise ValueError(f"empty window {self}")

    @classmethod
    def around_radius(cls, R0: float) -> "Window":
        """Default torus-neighbourhood window around the circle R = R0."""
        return cls(0.25 * R0, 2.0 * R0, -0.75 * R0, 0.75 * R0)

    @property
    def span(self) -> float:
        return max(self.r_max - self.r_min, self.z_max - self.z_min)


@dataclass(frozen=True)
class SliceZeroSet:
    """Zeros of the field on one phi = const half-plane."""

    phi: float
    points: np.ndarray          # (k, 2) columns (R, z)
    residuals: np.ndarray       # |Psi| / local scale at each point
    jacobian_conds: np.ndarray  # condition estimate of the 2x2 Newton Jacobian
    n_failed: int = 0


@dataclass(frozen=True)
class NodalCurve:
    """Closed (or open) polyline of field zeros ordered along increasing phi.

    The chain visits points_per_slice strands; following successors from any
    point walks the whole curve, each slice hop advancing phi by one step.
    """

    phis: np.ndarray            # (n_slices,)
    slice_points: list          # per slice: (k, 2) array of this curve's points
    successors: dict            # (slice, local idx) -> (next slice, local idx)
    closed: bool

    @property
    def n_slices(self) -> int:
        return len(self.phis)

    @property
    def points_per_slice(self) -> int:
        """Common per-slice point count, or -1 if it varies."""
        counts = {len(p) for p in self.slice_points}
        return counts.pop() if len(counts) == 1 else -1

    @property
    def axis_winding(self) -> int:
        """Net turns around the z-axis (signed by increasing phi orientation)."""
        if not self.closed or self.n_slices == 0:
            return 0
        return sum(len(p) for p in self.slice_points) // self.n_slices

    @property
    def samples(self) -> np.ndarray:
        """(N, 3) array of (R, phi, z) ordered along the curve."""
        start = next(((j, i) for j in range(self.n_slices)
                      for i in range(len(self.slice_points[j]))), None)
        if start is None:
            return np.empty((0, 3))
        out = []
        node, seen = start, set()
        while node not in seen:
            seen.add(node)
            j, i = node
            R, z = self.slice_points[j][i]
            out.append((R, self.phis[j], z))
            if node not in self.successors:
                break
            node = self.successors[node]
        return np.array(out)

    def mean_radius(self) -> float:
        rs = np.concatenate([p[:, 0] for p in self.slice_points if len(p)])
        return float(rs.mean())


@dataclass(frozen=True)
class TraceResult:
    curves: list                 # closed NodalCurve list
    open_chains: list            # open NodalCurve list
    slice_counts: np.ndarray
    newton_failures: int
    ambiguous_links: int


def slice_zeros(fld, phi: float, window: Window, grid: int = 96,
                _profile=None) -> SliceZeroSet:
    """All zeros of the field on the half-plane of azimuth phi inside the window.

    Samples Re and Im on a grid x grid lattice; every cell whose corners
    change sign in both parts seeds a Newton iteration (finite-difference
    Jacobian, step 1e-6 of the window size) from the cell centre.  Converged
    points are deduplicated within 1e-6 of the window size; non-convergent
    seeds are counted and logged, not raised.
    """
    if grid < 32:
        raise ValueError(f"grid must be at least 32, got {grid}")
    if hasattr(fld, "nodal_form"):
        fld = fld.nodal_form()
    Rg = np.linspace(window.r_min, window.r_max, grid)
    zg = np.linspace(window.z_min, window.z_max, grid)
    if _profile is None:
        RR, ZZ = np.meshgrid(Rg, zg, indexing="ij")
        _profile = fld.slice_profile(RR, ZZ)
    W = _profile.at(phi)

    sr, si = np.signbit(W.real), np.signbit(W.imag)
    flip_r = ((sr[:-1, :-1] != sr[1:, :-1]) | (sr[:-1, :-1] != sr[:-1, 1:])
              | (sr[:-1, :-1] != sr[1:, 1:]))
    flip_i = ((si[:-1, :-1] != si[1:, :-1]) | (si[:-1, :-1] != si[:-1, 1:])
              | (si[:-1, :-1] != si[1:, 1:]))
    cells = np.argwhere(flip_r & flip_i)
    if len(cells) == 0:
        return SliceZeroSet(phi, np.empty((0, 2)), np.empty(0), np.empty(0))

    span = window.span
    hs = 1e-6 * span
    iR, iz = cells[:, 0], cells[:, 1]
    corner_mag = np.stack([np.abs(W[iR, iz]), np.abs(W[iR + 1, iz]),
                           np.abs(W[iR, iz + 1]), np.abs(W[iR + 1, iz + 1])])
    scale = np.maximum(corner_mag.max(axis=0), MACHINE_TINY)
    R = 0.5 * (Rg[iR] + Rg[iR + 1])
    z = 0.5 * (zg[iz] + zg[iz + 1])
    conds = np.zeros(len(R))
    converged = np.zeros(len(R), dtype=bool)
    active = np.ones(len(R), dtype=bool)
    limit = span / 10.0
    for _ in range(NEWTON_MAX_ITER):
        idx = np.where(active)[0]
        if len(idx) == 0:
            break
        Ra, za = R[idx], z[idx]
        pa = np.full_like(Ra, phi)
        # one batched evaluation for the centre and the four stencil points
        k = len(idx)
        Rs = np.concatenate([Ra, Ra + hs, Ra - hs, Ra, Ra])
        zs = np.concatenate([za, za, za, za + hs, za - hs])
        vals = np.atleast_1d(fld.eval(Rs, np.tile(pa, 5), zs))
        f0 = vals[:k]
        done = np.abs(f0) <= NEWTON_RESIDUAL * scale[idx]
        converged[idx[done]] = True
        active[idx[done]] = False
        keep = ~done
        idx, f0 = idx[keep], f0[keep]
        if len(idx) == 0:
            continue
        fR = (vals[k:2 * k][keep] - vals[2 * k:3 * k][keep]) / (2 * hs)
        fz = (vals[3 * k:4 * k][keep] - vals[4 * k:5 * k][keep]) / (2 * hs)
        det = fR.real * fz.imag - fz.real * fR.imag
        singular = det == 0
        det = np.where(singular, 1.0, det)
        dR = (-f0.real * fz.imag + f0.imag * fz.real) / det
        dz = (fR.imag * f0.real - fR.real * f0.imag) / det
        R[idx] += np.clip(dR, -limit, limit)
        z[idx] += np.clip(dz, -limit, limit)
        norm2 = (np.abs(fR) + np.abs(fz)) ** 2
        conds[idx] = norm2 / np.maximum(np.abs(det), MACHINE_TINY)
        escaped = ((R[idx] < window.r_min - span) | (R[idx] > window.r_max + span)
                   | (z[idx] < window.z_min - span) | (z[idx] > window.z_max + span)
                   | singular)
        active[idx[escaped]] = False

    n_failed = int(len(cells) - converged.sum())
    if n_failed:
        log.warning("slice phi=%.4f: %d Newton seed(s) discarded", phi, n_failed)
    pts: list = []
    res: list = []
    cnd: list = []
    for i in np.where(converged)[0]:
        if any(np.hypot(R[i] - p[0], z[i] - p[1]) <= MERGE_TOL * span for p in pts):
            continue
        pts.append((R[i], z[i]))
        res.append(float(abs(fld.eval(R[i], phi, z[i])) / scale[i]))
        cnd.append(conds[i])
    return SliceZeroSet(phi, np.array(pts).reshape(-1, 2), np.array(res),
                        np.array(cnd), n_failed)


def trace_nodal_curves(fld, n_slices: int = 840, window: Window | None = None,
                       grid: int = 96, expected_letters: int | None = None) -> TraceResult:
    """Locate zeros on n_slices azimuthal half-planes and link them into curves.

    Matching between consecutive slices is greedy nearest-neighbour in (R, z)
    with threshold LINK_FACTOR times the median consecutive displacement;
    near-ties (a runner-up within 10%) are resolved by distance and counted.
    Chains closing through slice n_slices-1 back to slice 0 become closed
    NodalCurves; open chains are returned separately.
    """
    if window is None:
        raise ValueError("a search window is required")
    if expected_letters is not None and n_slices < 8 * expected_letters:
        raise ValueError(f"n_slices={n_slices} below minimum 8*letters = {8 * expected_letters}")
    tracer = fld.nodal_form() if hasattr(fld, "nodal_form") else fld
    Rg = np.linspace(window.r_min, window.r_max, grid)
    zg = np.linspace(window.z_min, window.z_max, grid)
    RR, ZZ = np.meshgrid(Rg, zg, indexing="ij")
    profile = tracer.slice_profile(RR, ZZ)
    phis = 2.0 * np.pi * np.arange(n_slices) / n_slices
    slices = [slice_zeros(tracer, phi, window, grid, _profile=profile) for phi in phis]
    counts = np.array([len(s.points) for s in slices])
    failures = sum(s.n_failed for s in slices)

    all_pairs = [_greedy_pairs(slices[j].points, slices[(j + 1) % n_slices].points)
                 for j in range(n_slices)]
    displacements = [d for pairs in all_pairs for (d, _, _) in pairs]
    if not displacements:
        return TraceResult([], [], counts, failures, 0)
    threshold = LINK_FACTOR * float(np.median(displacements))

    successors: dict = {}
    ambiguous = 0
    for j in range(n_slices):
        a, b = slices[j].points, slices[(j + 1) % n_slices].points
        for dist, ia, ib in all_pairs[j]:
            if dist > threshold:
                continue
            others = np.hypot(a[ia, 0] - b[:, 0], a[ia, 1] - b[:, 1])
            others[ib] = np.inf
            runner_up = others.min() if len(others) > 1 else np.inf
            if np.isfinite(runner_up) and runner_up - dist < AMBIGUITY_RATIO * runner_up:
                ambiguous += 1
            successors[(j, ia)] = ((j + 1) % n_slices, ib)

    closed_curves, open_chains = [], []
    visited: set = set()
    for j0 in range(n_slices):
        for i0 in range(len(slices[j0].points)):
            start = (j0, i0)
            if start in visited:
                continue
            chain = [start]
            visited.add(start)
            node, closed = start, False
            while node in successors:
                node = successors[node]
                if node == start:
                    closed = True
                    break
                if node in visited:
                    break
                visited.add(node)
                chain.append(node)
            curve = _chain_to_curve(chain, slices, phis, closed)
            (closed_curves if closed else open_chains).append(curve)
    if ambiguous:
        log.info("trace: %d ambiguous link(s) resolved by distance", ambiguous)
    return TraceResult(closed_curves, open_chains, counts, failures, ambiguous)


def select_component(result: TraceResult, expected_strands: int) -> NodalCurve:
    """The closed curve realizing the braid: expected per-slice count and winding.

    Ties are broken by smallest spread of R around the component's own mean
    radius (the knot hugs a circle; stray components do not).
    """
    candidates = [c for c in result.curves
                  if c.points_per_slice == expected_strands
                  and c.axis_winding == expected_strands]
    if not candidates:
        stats = [(c.points_per_slice, c.axis_winding, c.closed) for c in result.curves]
        raise ValueError(
            f"no closed curve with {expected_strands} strands; "
            f"closed components (pts/slice, winding, closed): {stats}, "
            f"open chains: {len(result.open_chains)}")
    if len(candidates) == 1:
        return candidates[0]

    def radial_spread(c: NodalCurve) -> float:
        rs = np.concatenate([p[:, 0] for p in c.slice_points])
        return float(np.mean(np.abs(rs - rs.mean())))

    return min(candidates, key=radial_spread)


def _greedy_pairs(a: np.ndarray, b: np.ndarray) -> list:
    """Greedy nearest-neighbour matching; returns (distance, idx_a, idx_b) triples."""
    if len(a) == 0 or len(b) == 0:
        return []
    dist = np.hypot(a[:, None, 0] - b[None, :, 0], a[:, None, 1] - b[None, :, 1])
    order = np.argsort(dist, axis=None)
    used_a: set = set()
    used_b: set = set()
    out = []
    for f in order:
        ia, ib = divmod(int(f), len(b))
        if ia in used_a or ib in used_b:
            continue
        used_a.add(ia)
        used_b.add(ib)
        out.append((float(dist[ia, ib]), ia, ib))
        if len(out) == min(len(a), len(b)):
            break
    return out


def _chain_to_curve(chain: list, slices: list, phis: np.ndarray, closed: bool) -> NodalCurve:
    n = len(phis)
    per_slice: list = [[] for _ in range(n)]
    local = {}
    for (j, i) in chain:
        local[(j, i)] = len(per_slice[j])
        per_slice[j].append(slices[j].points[i])
    succ = {}
    links = list(zip(chain, chain[1:]))
    if closed and chain:
        links.append((chain[-1], chain[0]))
    for a, b in links:
        succ[(a[0], local[a])] = (b[0], local[b])
    pts = [np.asarray(p).reshape(-1, 2) for p in per_slice]
    return NodalCurve(phis, pts, succ, closed)
