"""Monte Carlo verification layer: scale-embedded random walks.

The chain grid is uniform in the scale coordinate, so interior jump
probabilities are exactly 1/2 and the walk's exit distribution matches the
diffusion's hitting probabilities exactly at grid points; all approximation
sits in the time clock (holding weights from speed-measure cell masses).

Randomness is counter-based: bit t of path p is a pure function of
(seed, p, t), so results are bit-identical no matter how paths are chunked
across workers, and common seeds give the monotone coupling for free.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dirichlet import DiffusionSpec
from .measures import Interval
from .xreal import INF

_MASK64 = (1 << 64) - 1
_K1 = np.uint64(0x9E3779B97F4A7C15)
_K2 = np.uint64(0xD1B54A32D192ED03)
_SEED_MIX = 0x632BE59BD9B4E019


class ChainError(ValueError):
    pass


def _splitmix64(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def _bit_words(seed: int, ids: np.ndarray, word: int) -> np.ndarray:
    """64 fresh bits per path for step block ``word`` (steps 64w..64w+63)."""
    with np.errstate(over="ignore"):
        z = ids * _K1 + np.uint64((seed * _SEED_MIX) & _MASK64)
        z = _splitmix64(z)
        z = z + np.uint64(((word + 1) * 0xD1B54A32D192ED03) & _MASK64)
        return _splitmix64(z)


@dataclass(frozen=True)
class SimConfig:
    delta_s: float | None = None  # default: 1/1000 of the window's scale gap
    n_paths: int = 10_000
    rng_seed: int = 1
    max_steps: int = 1_000_000
    workers: int = 1

    def __post_init__(self):
        if self.n_paths <= 0 or self.max_steps <= 0 or self.workers <= 0:
            raise ValueError("simulation sizes must be positive")
        if self.delta_s is not None and self.delta_s <= 0:
            raise ValueError("delta_s must be positive")


@dataclass(frozen=True, eq=False)
class EmbeddedChain:
    interval_index: int
    grid_x: np.ndarray  # M+1 points, ascending
    grid_y: np.ndarray  # scale values, uniform spacing
    delta_s: float
    left_boundary: str  # "absorbing" | "reflecting"
    right_boundary: str
    cell_mass: np.ndarray  # speed mass of the cell around each grid point
    hold: np.ndarray  # mean holding weight per grid point
    cell_edges: np.ndarray  # M+2 cell boundaries in x

    @property
    def n_cells(self) -> int:
        return len(self.grid_x)


def build_chain(spec: DiffusionSpec, n: int, window: Interval, cfg: SimConfig) -> EmbeddedChain:
    """Uniform-in-scale grid on a window of effective interval n.  Window
    endpoints equal to member endpoints of the interval become reflecting
    rows; all other window endpoints are absorbing.  Windows touching an
    endpoint with infinite scale limit are rejected (shrink the window)."""
    ei = spec.intervals[n]
    iv, s = ei.interval, ei.scale
    if not (iv.closure_contains(window.a) and iv.closure_contains(window.b)):
        raise ChainError(f"window {window} not inside effective interval {iv}")
    y_lo, y_hi = s.eval(window.a), s.eval(window.b)
    if not (math.isfinite(y_lo) and math.isfinite(y_hi)):
        raise ChainError(
            "window touches an endpoint with infinite scale limit (unreachable);"
            " shrink the window away from it"
        )
    gap = y_hi - y_lo
    delta = cfg.delta_s if cfg.delta_s is not None else gap / 1000.0
    m_cells = max(2, round(gap / delta))
    ys = np.linspace(y_lo, y_hi, m_cells + 1)
    xs = np.empty_like(ys)
    xs[0], xs[-1] = window.a, window.b
    for k in range(1, m_cells):
        xs[k] = s.inverse(float(ys[k]))

    left_kind = "reflecting" if (window.a == iv.a and iv.left_closed) else "absorbing"
    right_kind = "reflecting" if (window.b == iv.b and iv.right_closed) else "absorbing"

    mid_y = 0.5 * (ys[:-1] + ys[1:])
    mid_x = np.array([s.inverse(float(y)) for y in mid_y])
    edges = np.concatenate(([window.a], mid_x, [window.b]))
    cell_mass = np.empty(m_cells + 1)
    for k in range(m_cells + 1):
        lo, hi = float(edges[k]), float(edges[k + 1])
        cell_mass[k] = spec.speed.measure_of(
            Interval(lo, hi, k == 0 and iv.left_closed, k == m_cells and iv.right_closed)
        )
    ds = float(ys[1] - ys[0])
    hold = cell_mass * ds * 0.5
    if left_kind == "reflecting":
        hold[0] = cell_mass[0] * ds
    if right_kind == "reflecting":
        hold[-1] = cell_mass[-1] * ds
    return EmbeddedChain(
        interval_index=n,
        grid_x=xs,
        grid_y=ys,
        delta_s=ds,
        left_boundary=left_kind,
        right_boundary=right_kind,
        cell_mass=cell_mass,
        hold=hold,
        cell_edges=edges,
    )


def grid_index(chain: EmbeddedChain, x: float) -> int:
    k = int(np.argmin(np.abs(chain.grid_x - x)))
    span = float(chain.grid_x[-1] - chain.grid_x[0])
    if abs(float(chain.grid_x[k]) - x) > 1e-9 * max(1.0, span):
        raise ChainError(f"{x} is not a grid point of the chain")
    return k


# ---------------------------------------------------------------------------
# Hitting estimation


@dataclass(frozen=True)
class HittingResult:
    exact: float  # tridiagonal harmonic solve of the chain itself
    estimate: float  # Monte Carlo frequency
    stderr: float  # binomial standard error
    n_paths: int
    n_unresolved: int
    seed: int


def _harmonic_solve(n_interior: int) -> np.ndarray:
    """Solve h_i = (h_{i-1} + h_{i+1})/2 with h_0 = 0, h_{n+1} = 1 by the
    Thomas algorithm (an independent route to the exit distribution)."""
    n = n_interior
    diag = np.full(n, 1.0)
    off = -0.5
    rhs = np.zeros(n)
    rhs[-1] = 0.5
    cp = np.empty(n)
    dp = np.empty(n)
    cp[0] = off / diag[0]
    dp[0] = rhs[0] / diag[0]
    for i in range(1, n):
        denom = diag[i] - off * cp[i - 1]
        cp[i] = off / denom
        dp[i] = (rhs[i] - off * dp[i - 1]) / denom
    h = np.empty(n)
    h[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        h[i] = dp[i] - cp[i] * h[i + 1]
    return h


def _simulate_chunk(seed, lo, hi, start, left, right, max_steps):
    size = hi - lo
    ids = np.arange(lo, hi, dtype=np.uint64)
    local = np.arange(size)
    pos = np.full(size, start, dtype=np.int64)
    hits = np.zeros(size, dtype=bool)
    resolved = np.zeros(size, dtype=bool)
    t = 0
    words = None
    while ids.size and t < max_steps:
        if (t & 63) == 0:
            words = _bit_words(seed, ids, t >> 6)
        bits = (words >> np.uint64(t & 63)) & np.uint64(1)
        pos += np.where(bits.astype(bool), 1, -1)
        done_r = pos >= right
        done_l = pos <= left
        done = done_r | done_l
        if done.any():
            hits[local[done_r]] = True
            resolved[local[done]] = True
            keep = ~done
            ids, local, pos, words = ids[keep], local[keep], pos[keep], words[keep]
        t += 1
    return hits, resolved


def estimate_hitting(
    chain: EmbeddedChain, start: float, left_target: float, right_target: float, cfg: SimConfig
) -> HittingResult:
    """Monte Carlo frequency of touching the right target before the left,
    plus the chain's exact answer from the tridiagonal harmonic solve.
    Targets are grid points flanking the start; both act absorbing here."""
    i0 = grid_index(chain, start)
    il = grid_index(chain, left_target)
    ir = grid_index(chain, right_target)
    if not il < i0 < ir:
        raise ChainError("need left_target < start < right_target on the grid")

    h = _harmonic_solve(ir - il - 1)
    exact = float(h[i0 - il - 1])

    n = cfg.n_paths
    w = min(cfg.workers, n)
    bounds = [(k * n) // w for k in range(w + 1)]
    if w == 1:
        parts = [_simulate_chunk(cfg.rng_seed, 0, n, i0, il, ir, cfg.max_steps)]
    else:
        with ThreadPoolExecutor(max_workers=w) as pool:
            parts = list(
                pool.map(
                    lambda k: _simulate_chunk(
                        cfg.rng_seed, bounds[k], bounds[k + 1], i0, il, ir, cfg.max_steps
                    ),
                    range(w),
                )
            )
    hits = np.concatenate([p[0] for p in parts])
    resolved = np.concatenate([p[1] for p in parts])
    n_res = int(resolved.sum())
    est = float(hits.sum() / n_res) if n_res else float("nan")
    se = math.sqrt(est * (1.0 - est) / n_res) if n_res else float("nan")
    return HittingResult(exact, est, se, n, n - n_res, cfg.rng_seed)


# ---------------------------------------------------------------------------
# Occupation profiles (reflecting chains)


@dataclass(frozen=True, eq=False)
class OccupationResult:
    time_share: np.ndarray  # normalized holding-time histogram per grid point
    expected_share: np.ndarray  # speed-cell masses, normalized
    batch_shares: np.ndarray  # (B, M+1) per-batch normalized histograms
    steps: int
    seed: int

    def cell_stderr(self) -> np.ndarray:
        b = self.batch_shares.shape[0]
        return self.batch_shares.std(axis=0, ddof=1) / math.sqrt(b)


def occupation_profile(
    chain: EmbeddedChain, start: float, horizon_steps: int, cfg: SimConfig, batches: int = 50
) -> OccupationResult:
    """Holding-time occupation of one long reflecting trajectory.  The free
    walk is folded into the reflecting strip, which reproduces the boundary
    rows exactly for +-1 steps."""
    if chain.left_boundary != "reflecting" or chain.right_boundary != "reflecting":
        raise ChainError("occupation profiles need two reflecting boundaries")
    i0 = grid_index(chain, start)
    m = len(chain.grid_x) - 1
    if m < 1:
        raise ChainError("degenerate chain")

    n_words = (horizon_steps + 63) // 64
    with np.errstate(over="ignore"):
        z = np.full(n_words, np.uint64(0)) * _K1 + np.uint64((cfg.rng_seed * _SEED_MIX) & _MASK64)
        z = _splitmix64(z)
        z = z + (np.arange(1, n_words + 1, dtype=np.uint64)) * _K2
        words = _splitmix64(z)
    bits = (
        (words[:, None] >> np.arange(64, dtype=np.uint64)[None, :]) & np.uint64(1)
    ).astype(np.int64).reshape(-1)[:horizon_steps]
    steps = 2 * bits - 1
    free = i0 + np.cumsum(steps)
    r = np.mod(free, 2 * m)
    pos = np.minimum(r, 2 * m - r)

    counts = np.bincount(pos, minlength=m + 1).astype(float)
    time = counts * chain.hold
    total = time.sum()

    b = batches
    edges = [(k * horizon_steps) // b for k in range(b + 1)]
    batch = np.empty((b, m + 1))
    for k in range(b):
        c = np.bincount(pos[edges[k] : edges[k + 1]], minlength=m + 1).astype(float)
        tk = c * chain.hold
        batch[k] = tk / tk.sum()
    return OccupationResult(time / total, chain.cell_mass / chain.cell_mass.sum(), batch, horizon_steps, cfg.rng_seed)


def mass_share_right(chain: EmbeddedChain, result: OccupationResult, split: float, speed) -> tuple[float, float, float]:
    """(estimate, expected, stderr) of the holding-time share spent right of
    ``split``; each grid point's time is weighted by the speed-mass fraction
    of its cell right of the split, so the expectation telescopes to the
    exact speed-mass share."""
    m = len(chain.grid_x) - 1
    frac = np.zeros(m + 1)
    for k in range(m + 1):
        lo, hi = float(chain.cell_edges[k]), float(chain.cell_edges[k + 1])
        if hi <= split:
            frac[k] = 0.0
        elif lo >= split:
            frac[k] = 1.0
        else:
            right_mass = speed.measure_of(Interval(split, hi))
            frac[k] = right_mass / chain.cell_mass[k] if chain.cell_mass[k] else 0.0
    est = float((result.time_share * frac).sum())
    expected = float((result.expected_share * frac).sum())
    batch_stat = (result.batch_shares * frac[None, :]).sum(axis=1)
    se = float(batch_stat.std(ddof=1) / math.sqrt(batch_stat.shape[0]))
    return est, expected, se


# ---------------------------------------------------------------------------
# Trap checks


@dataclass(frozen=True)
class TrapReport:
    is_trap: bool
    classification: str

    def __bool__(self):
        return self.is_trap


def trap_check(spec: DiffusionSpec, x: float, cfg: SimConfig | None = None) -> TrapReport:
    """Whether the spec classifies x as a trap (the simulator refuses to move
    such points).  Points inside family supports are resolved against the
    construction: deeper-than-truncation gaps are effective, limit-set points
    are traps to evaluation resolution."""
    if not spec.state.closure_contains(x):
        raise ValueError(f"{x} outside the state interval {spec.state}")
    n = spec.locate(x)
    if n is not None:
        return TrapReport(False, f"inside effective interval {n}")
    for fam in spec.families:
        kind = fam.classify_point(x)
        if kind == "node-gap":
            return TrapReport(False, "inside an effective interval beyond the truncation depth")
        if kind == "limit-set":
            return TrapReport(True, "limit-set point of the gap construction (trap)")
        if kind == "enumerated-gap":
            return TrapReport(False, "inside an enumerated gap interval")
    return TrapReport(True, "outside every effective interval")
