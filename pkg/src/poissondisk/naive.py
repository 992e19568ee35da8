"""Reference dart-throwing sampler.

Darts are drawn uniformly on the unit square; a dart lands iff it is at
least r from every point accepted so far.  Two stopping rules exist:

* a consecutive-rejection cutoff (``stop_after_rejections``), the classic
  heuristic; note that a residual landing slot of area a still survives a
  cutoff C with probability e^(-C*a), so small cutoffs measurably
  under-fill tight patterns, and
* ``until_maximal``: keep throwing until an exact largest-empty-circle
  check proves that no dart can ever land again.  This reproduces the
  infinite-cutoff limit pattern exactly (the skipped tail contains only
  rejections) and usually needs fewer darts than a cutoff conservative
  enough to match it.  The wait for a landing slot of area a is Geometric(a)
  and slot areas have a density near zero, so a fallback stop after 3e7
  consecutive rejections bounds the heavy tail; it concedes only slots below
  ~1e-7 in area, an under-fill probability of order 1e-4 per run.

Three interchangeable distance-check backends exist, all making identical
accept/reject decisions on the identical dart stream:

* ``brute``  - per dart, scan every accepted point; the auditable reference.
* ``grid``   - per dart, scan only the 3x3 ring of an r-spaced cell map.
* ``vector`` - process darts in numpy chunks; the default, fast enough for
  thousands of runs at a 1e5 rejection cutoff.

Dart i consumes the stream's uniforms 2i and 2i+1 as (x, y) in every
backend, so accepted points agree byte for byte across backends (in
until_maximal mode the dart total at which the stop is detected may differ
by backend; the points never do).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import Pattern
from .rng import make_rng

_CHUNK = 32768
_KDTREE_THRESHOLD = 64
_MAXIMAL_CHECK_EVERY = 65536
_MAXIMAL_FALLBACK_REJECTIONS = 30_000_000


def _is_maximal(accepted, r: float) -> bool:
    """True iff no point of the unit square is at least r from every
    accepted point (up to a relative 1e-12 slack on the worst gap, below
    which the landing set has vanishing measure)."""
    if not accepted:
        return False
    from .stats import largest_empty_circle_radius

    pts = np.array([(x, y) for x, y, _ in accepted])
    return largest_empty_circle_radius(pts) <= r * (1.0 + 1e-12)


@dataclass(frozen=True)
class NaiveConfig:
    r: float
    seed: int = 0
    stop_after_rejections: int = 100_000

    def __post_init__(self):
        if self.r <= 0.0:
            raise ValueError(f"exclusion radius must be positive, got {self.r}")
        if self.stop_after_rejections < 1:
            raise ValueError("rejection cutoff must be at least 1")


def naive_run(cfg: NaiveConfig, check: str = "vector",
              until_maximal: bool = False) -> Pattern:
    """Dart-throw until stop_after_rejections consecutive misses, or (with
    until_maximal) until provable maximality; the cutoff is ignored then."""
    if check == "vector":
        points, darts = _run_vector(cfg, until_maximal)
    elif check == "grid":
        points, darts = _run_grid(cfg, until_maximal)
    elif check == "brute":
        points, darts = _run_brute(cfg, until_maximal)
    else:
        raise ValueError(f"unknown check backend {check!r}")
    return Pattern(
        points=points,
        r=cfg.r,
        k=None,
        seed=cfg.seed,
        generated_count=darts,
        method="naive",
    )


def _scalar_loop(cfg: NaiveConfig, until_maximal: bool, rejects, accepted):
    """Shared driver for the per-dart backends.

    `rejects(x, y)` answers whether the dart conflicts with an accepted
    point, recording any backend bookkeeping for accepted darts itself;
    `accepted` is the shared output list the driver appends to."""
    rng = make_rng(cfg.seed)
    cutoff = _MAXIMAL_FALLBACK_REJECTIONS if until_maximal else cfg.stop_after_rejections
    consec = 0
    dart = 0
    verdict_stale = True  # maximality can only change after an acceptance
    while consec < cutoff:
        x = rng.random()
        y = rng.random()
        if rejects(x, y):
            consec += 1
            dart += 1
            if (until_maximal and verdict_stale
                    and consec % _MAXIMAL_CHECK_EVERY == 0):
                if _is_maximal(accepted, cfg.r):
                    break
                verdict_stale = False
        else:
            accepted.append((x, y, float(dart)))
            consec = 0
            dart += 1
            verdict_stale = True
    return accepted, dart


def _run_brute(cfg: NaiveConfig, until_maximal: bool = False):
    r2 = cfg.r * cfg.r
    accepted: list[tuple[float, float, float]] = []

    def rejects(x: float, y: float) -> bool:
        for qx, qy, _ in accepted:
            if (qx - x) ** 2 + (qy - y) ** 2 < r2:
                return True
        return False

    return _scalar_loop(cfg, until_maximal, rejects, accepted)


def _run_grid(cfg: NaiveConfig, until_maximal: bool = False):
    r = cfg.r
    r2 = r * r
    # Cell side 1/m >= r, so any point within r of a dart lives in the
    # 3x3 ring around the dart's cell.
    m = max(1, int(1.0 / r))
    cellmap: dict[tuple[int, int], list[tuple[float, float]]] = {}
    accepted: list[tuple[float, float, float]] = []

    def rejects(x: float, y: float) -> bool:
        gi = min(int(x * m), m - 1)
        gj = min(int(y * m), m - 1)
        for ci in range(gi - 1, gi + 2):
            if ci < 0 or ci >= m:
                continue
            for cj in range(gj - 1, gj + 2):
                if cj < 0 or cj >= m:
                    continue
                for qx, qy in cellmap.get((ci, cj), ()):
                    if (qx - x) ** 2 + (qy - y) ** 2 < r2:
                        return True
        cellmap.setdefault((gi, gj), []).append((x, y))
        return False

    return _scalar_loop(cfg, until_maximal, rejects, accepted)


def _chunk_mask(xs, ys, accepted, r2):
    """Darts at least r from every already-accepted point (vectorized)."""
    if not accepted:
        return np.ones(len(xs), dtype=bool)
    if len(accepted) <= _KDTREE_THRESHOLD:
        mask = np.ones(len(xs), dtype=bool)
        for qx, qy, _ in accepted:
            dx = xs - qx
            dy = ys - qy
            mask &= dx * dx + dy * dy >= r2
        return mask
    from scipy.spatial import cKDTree

    pts = np.array([(qx, qy) for qx, qy, _ in accepted])
    tree = cKDTree(pts)
    _, idx = tree.query(np.column_stack((xs, ys)), k=1)
    near = pts[idx]
    dx = xs - near[:, 0]
    dy = ys - near[:, 1]
    return dx * dx + dy * dy >= r2


def _run_vector(cfg: NaiveConfig, until_maximal: bool = False):
    rng = make_rng(cfg.seed)
    r2 = cfg.r * cfg.r
    cutoff = _MAXIMAL_FALLBACK_REJECTIONS if until_maximal else cfg.stop_after_rejections
    accepted: list[tuple[float, float, float]] = []
    consec = 0
    base = 0
    verdict_stale = True  # maximality can only change after an acceptance
    while True:
        darts = rng.random((_CHUNK, 2))
        xs = darts[:, 0]
        ys = darts[:, 1]
        mask = _chunk_mask(xs, ys, accepted, r2)
        pos = 0
        stopped = None
        while pos < _CHUNK:
            rel = int(mask[pos:].argmax())
            idx = pos + rel
            if not mask[idx]:
                # No surviving dart left in this chunk.
                consec += _CHUNK - pos
                if until_maximal and verdict_stale:
                    if _is_maximal(accepted, cfg.r):
                        stopped = _CHUNK
                    else:
                        verdict_stale = False
                if stopped is None and consec >= cutoff:
                    stopped = _CHUNK - (consec - cutoff)
                break
            if consec + rel >= cutoff:
                stopped = pos + (cutoff - consec)
                break
            consec = 0
            x = float(xs[idx])
            y = float(ys[idx])
            accepted.append((x, y, float(base + idx)))
            verdict_stale = True
            if idx + 1 < _CHUNK:
                dx = xs[idx + 1 :] - x
                dy = ys[idx + 1 :] - y
                mask[idx + 1 :] &= dx * dx + dy * dy >= r2
            pos = idx + 1
        if stopped is not None:
            return accepted, base + stopped
        base += _CHUNK
