"""Sound certification and refutation of topological transitivity.

Nothing here guesses.  ``Certified`` is backed by an argument that forces
every open interval's forward images to fill [0, 1]; ``Refuted`` carries a
proper closed invariant window with interior, re-verified exactly; when
neither argument lands within budget the verdict is ``Inconclusive``.

Three certificate/refuter mechanisms plus a combining pipeline:

* ``leo_certify`` -- for piecewise-linear maps with every |slope| > 2:
  exact image iteration of every dyadic grid cell.  Any open interval
  grows under iteration (its largest breakpoint-free part is at least
  half of it and stretches by more than 2) until it swallows a grid cell,
  whose forward images provably reach [0, 1].
* ``box_chain_certify`` -- for concatenations of box maps built by this
  package: re-derives the construction from the attached record, verifies
  it reproduces the map exactly, then certifies via band coverage.  This
  scales to maps with thousands of laps where grid iteration would not.
* ``invariant_region_refute`` / ``ball_refute`` -- search for invariant
  windows, the latter robust under a sup-metric perturbation radius.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .boxmap import BoxChain, box_vertices
from .errors import ParameterError, PreconditionError
from .exact import (
    FULL,
    FULL_SET,
    CurveMap,
    Interval,
    IntervalSet,
    image_set,
    pl_from_vertices,
    range_on,
)
from .rational import ONE, Q, ZERO, as_scalar, ceil_to_grid, floor_to_grid

__all__ = [
    "Verdict",
    "reach_check",
    "leo_certify",
    "invariant_region_refute",
    "ball_refute",
    "box_chain_certify",
    "coverage_closure_full",
    "PipelineBudget",
    "is_transitive_pipeline",
    "min_abs_slope",
    "min_breakpoint_gap",
]

CERTIFIED = "certified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Optional[IntervalSet] = None
    budget: Optional[int] = None

    def __post_init__(self):
        if self.status not in (CERTIFIED, REFUTED, INCONCLUSIVE):
            raise ParameterError(f"unknown verdict status {self.status!r}")
        if (self.witness is not None) != (self.status == REFUTED):
            raise ParameterError("witness present iff refuted")

    @staticmethod
    def certified() -> "Verdict":
        return Verdict(CERTIFIED)

    @staticmethod
    def refuted(witness: IntervalSet) -> "Verdict":
        return Verdict(REFUTED, witness=witness)

    @staticmethod
    def inconclusive(budget: int) -> "Verdict":
        return Verdict(INCONCLUSIVE, budget=budget)

    @property
    def is_certified(self) -> bool:
        return self.status == CERTIFIED

    @property
    def is_refuted(self) -> bool:
        return self.status == REFUTED


def _check_witness(f: CurveMap, c: IntervalSet) -> None:
    """A refutation witness must be proper, fat, and exactly invariant."""
    if c.is_empty() or c == FULL_SET:
        raise ParameterError("witness must be a proper nonempty region")
    if all(comp.is_degenerate() for comp in c.components):
        raise ParameterError("witness needs nonempty interior")
    if not c.contains_set(image_set(f, c)):
        raise ParameterError("witness is not invariant")


def reach_check(f: CurveMap, u: Interval, v: Interval, n: int) -> bool:
    """Whether the n-th forward image of u meets v, exactly."""
    if n < 1:
        raise ParameterError("need at least one iteration")
    if u.is_degenerate() or v.is_degenerate():
        raise ParameterError("need nondegenerate intervals")
    s = IntervalSet((u,))
    for _ in range(n):
        s = image_set(f, s)
    return s.intersects_interval(v)


def min_abs_slope(f: CurveMap) -> Q:
    if not f.is_pl:
        raise PreconditionError("slope floor defined for piecewise-linear maps")
    return min(abs(p.c1) for p in f.pieces)


def min_breakpoint_gap(f: CurveMap) -> Q:
    return min(p.domain.width for p in f.pieces)


def leo_certify(f: CurveMap, grid_level: int, n_max: int) -> Verdict:
    """Certify transitivity by iterating every dyadic grid cell to [0, 1].

    Preconditions (violations raise, they are not verdicts): the map is
    piecewise linear with every |slope| > 2, and two grid cells fit in the
    narrowest lap.  Under those, any open interval U either contains a
    breakpoint-free half of length |U|/2 or is breakpoint-free itself, so
    its image is longer by a factor slope/2 > 1; lengths grow until U
    contains a whole grid cell, and every grid cell is checked to reach
    image [0, 1] within n_max exact iterations.
    """
    if grid_level < 1:
        raise ParameterError("grid level must be positive")
    if n_max < 1:
        raise ParameterError("need a positive iteration budget")
    if not f.is_pl:
        raise PreconditionError("certificate requires a piecewise-linear map")
    floor = min_abs_slope(f)
    if floor <= 2:
        raise PreconditionError(f"slope floor {floor} is not > 2")
    gap = min_breakpoint_gap(f)
    if Q(2, 1 << grid_level) > gap:
        raise PreconditionError(
            f"grid too coarse: need 2^(1-level) <= {gap}, level {grid_level}"
        )
    cells = 1 << grid_level
    for k in range(cells):
        s = IntervalSet.single(Q(k, cells), Q(k + 1, cells))
        for _ in range(n_max):
            if s == FULL_SET:
                break
            s = image_set(f, s)
        if s != FULL_SET:
            return Verdict.inconclusive(n_max)
    return Verdict.certified()


def _round_outward(s: IntervalSet, level: int) -> IntervalSet:
    return IntervalSet.from_intervals(
        Interval(floor_to_grid(c.lo, level), ceil_to_grid(c.hi, level))
        for c in s.components
    )


def invariant_region_refute(f: CurveMap, grid_level: int, n_max: int) -> Verdict:
    """Hunt for a proper closed invariant region with interior.

    From each grid-cell seed, grow C by unioning its exact image and
    rounding outward to the grid; growth adds whole cells, so a fixpoint
    arrives within 2^level steps.  A proper fixpoint is then re-verified
    exactly (no rounding) before it is returned as a witness; the interior
    of such a C traps every orbit entering it, so no orbit is dense.

    Seeds are tried in a deterministic order that puts cells with the
    narrowest images first, since contraction is where invariant regions
    live.
    """
    if grid_level < 1:
        raise ParameterError("grid level must be positive")
    cells = 1 << grid_level
    seeds = []
    for k in range(cells):
        cell = Interval(Q(k, cells), Q(k + 1, cells))
        seeds.append((range_on(f, cell).width, k, cell))
    seeds.sort(key=lambda item: (item[0], item[1]))
    for _, _, cell in seeds:
        c = IntervalSet((cell,))
        for _ in range(n_max):
            grown = _round_outward(c.union(image_set(f, c)), grid_level)
            if grown == c:
                break
            c = grown
            if c == FULL_SET:
                break
        if c == FULL_SET or c != _round_outward(c.union(image_set(f, c)), grid_level):
            continue
        if c.contains_set(image_set(f, c)):
            _check_witness(f, c)
            return Verdict.refuted(c)
    return Verdict.inconclusive(n_max)


def ball_refute(
    f: CurveMap, rho, grid_level: int
) -> Optional[tuple[Interval, Q]]:
    """A window that stays invariant for every map rho-close to f.

    Returns a proper dyadic-endpoint window J with
    [max(0, min f(J) - rho), min(1, max f(J) + rho)] inside J and positive
    slack on every side that is not already an endpoint of [0, 1]; any g
    within rho of f then maps J into J, so the whole closed rho-ball
    around f misses the transitive maps.  Among admissible windows the
    first one attaining the maximal slack (scan order: left endpoint, then
    right) is returned; None when no window qualifies.
    """
    rho = as_scalar(rho)
    if rho <= ZERO:
        raise ParameterError("perturbation radius must be positive")
    if grid_level < 1:
        raise ParameterError("grid level must be positive")
    cells = 1 << grid_level
    best: Optional[tuple[Interval, Q]] = None
    for i in range(cells):
        for j in range(i + 1, cells + 1):
            if i == 0 and j == cells:
                continue
            window = Interval(Q(i, cells), Q(j, cells))
            r = range_on(f, window)
            slacks = []
            if window.lo > ZERO:
                slacks.append(r.lo - rho - window.lo)
            if window.hi < ONE:
                slacks.append(window.hi - (r.hi + rho))
            margin = min(slacks)
            if margin > ZERO and (best is None or margin > best[1]):
                best = (window, margin)
    return best


# -- provenance-backed certificate -----------------------------------------


def _rebuild_chain(f: CurveMap, chain: BoxChain) -> Optional[list[list[tuple[Q, Q]]]]:
    """Vertices per box if the chain reproduces f exactly, else None."""
    all_verts: list[tuple[Q, Q]] = []
    per_box: list[list[tuple[Q, Q]]] = []
    for window, params in chain.boxes:
        verts = box_vertices(window, params)
        per_box.append(verts)
        all_verts.extend(verts if not all_verts else verts[1:])
    rebuilt = pl_from_vertices(all_verts)
    if not f.is_pl or rebuilt.pieces != f.pieces:
        return None
    return per_box


def box_chain_certify(f: CurveMap) -> Verdict:
    """Certify a concatenation of box maps from its construction record.

    The record is never trusted: the chain is rebuilt from its parameters
    and must reproduce the map piece for piece.  Certification then needs

    1. slope floor: every leg's |slope| is at least M + 3, where M is the
       longest run of consecutive legs that are not full band sweeps.  An
       interval without a complete full sweep inside spans at most M
       complete legs, hence at most M + 2 laps, so its longest lap-free
       part is |U|/(M+2) and its image grows by slope/(M+2) > 1; growth
       cannot continue forever, so some forward image contains a full
       sweep and therefore a whole band.
    2. coverage: from every box, repeatedly adding the bands of all boxes
       whose windows a collected band covers must reach all of [0, 1].
       Once an image contains band J, later images contain every band
       collected from J, so the union of forward images is [0, 1].

    Inconclusive when the record is absent, stale, or the checks fail;
    never Refuted (this routine has no refutation power).
    """
    chain = f.provenance
    if not isinstance(chain, BoxChain):
        return Verdict.inconclusive(0)
    per_box = _rebuild_chain(f, chain)
    if per_box is None:
        return Verdict.inconclusive(0)

    windows = [w for w, _ in chain.boxes]
    bands = [Interval(p.bottom, p.top) for _, p in chain.boxes]

    # classify every leg; track the longest run of partial (non-sweep) legs
    longest_partial_run = 0
    run = 0
    min_slope: Optional[Q] = None
    for verts, (window, params) in zip(per_box, chain.boxes):
        height = params.top - params.bottom
        slope = params.expansion * height / window.width
        if min_slope is None or slope < min_slope:
            min_slope = slope
        for (x0, y0), (x1, y1) in zip(verts, verts[1:]):
            full_sweep = abs(y1 - y0) == height
            if full_sweep:
                run = 0
            else:
                run += 1
                if run > longest_partial_run:
                    longest_partial_run = run
    if min_slope is None or min_slope <= longest_partial_run + 2:
        return Verdict.inconclusive(0)

    if not coverage_closure_full(windows, bands):
        return Verdict.inconclusive(0)
    return Verdict.certified()


def _window_runs(
    windows: Sequence[Interval], bands: Sequence[Interval]
) -> list[tuple[int, int]]:
    """Per box, the index run [a, z) of windows its band contains.

    Window lows and highs are both increasing, so the contained indices
    are a suffix of one monotone condition intersected with a prefix of
    the other: always contiguous.
    """
    los = [w.lo for w in windows]
    his = [w.hi for w in windows]
    return [
        (bisect_left(los, b.lo), bisect_right(his, b.hi)) for b in bands
    ]


def _range_query(values: list, better) -> "Callable[[int, int], object]":
    """O(1) min/max over [lo, hi) after doubling-table preprocessing."""
    table = [list(values)]
    span = 1
    while 2 * span <= len(values):
        prev = table[-1]
        table.append(
            [better(prev[i], prev[i + span]) for i in range(len(prev) - span)]
        )
        span *= 2

    def query(lo: int, hi: int):
        k = (hi - lo).bit_length() - 1
        row = table[k]
        return better(row[lo], row[hi - (1 << k)])

    return query


def coverage_closure_full(
    windows: Sequence[Interval], bands: Sequence[Interval]
) -> bool:
    """Whether the band-coverage closure from every box fills [0, 1].

    A box reaches exactly the boxes whose windows its band contains; a
    start is good when the bands collected by the closure of that
    relation union to all of [0, 1].  All starts must be good.

    Preconditions: the windows tile [0, 1] in order and adjacent boxes
    share a junction value lying in both bands (chain validity), which
    makes the band union over any contiguous index run a single
    interval.  When additionally every band contains a window and
    adjacent containment runs overlap, closures stay short lists of
    index runs and each expansion is a range min/max, so all n starts
    cost about n log n; otherwise a plain per-start search decides.
    """
    n = len(windows)
    if n == 0 or n != len(bands):
        raise ParameterError("need equally many windows and bands")
    runs = _window_runs(windows, bands)
    fast = all(a < z for a, z in runs) and all(
        max(runs[k][0], runs[k + 1][0]) < min(runs[k][1], runs[k + 1][1])
        for k in range(n - 1)
    )
    if not fast:
        return _coverage_closure_slow(windows, bands, runs)

    run_lo = _range_query([a for a, _ in runs], min)
    run_hi = _range_query([z for _, z in runs], max)
    band_lo = _range_query([b.lo for b in bands], min)
    band_hi = _range_query([b.hi for b in bands], max)

    for start in range(n):
        segs = [runs[start]]
        while True:
            grown = list(segs)
            for a, z in segs:
                grown.append((run_lo(a, z), run_hi(a, z)))
            grown.sort()
            merged = [grown[0]]
            for a, z in grown[1:]:
                la, lz = merged[-1]
                if a <= lz:
                    if z > lz:
                        merged[-1] = (la, z)
                else:
                    merged.append((a, z))
            if merged == segs:
                break
            segs = merged
        covered = [Interval(band_lo(a, z), band_hi(a, z)) for a, z in segs]
        covered.append(bands[start])
        covered.sort(key=lambda iv: iv.lo)
        reach = ZERO
        for iv in covered:
            if iv.lo > reach:
                break
            if iv.hi > reach:
                reach = iv.hi
        if reach != ONE:
            return False
    return True


def _coverage_closure_slow(
    windows: Sequence[Interval],
    bands: Sequence[Interval],
    runs: Sequence[tuple[int, int]],
) -> bool:
    n = len(windows)
    for start in range(n):
        reached = [False] * n
        reached[start] = True
        frontier = [start]
        while frontier:
            a, z = runs[frontier.pop()]
            for k in range(a, z):
                if not reached[k]:
                    reached[k] = True
                    frontier.append(k)
        covered = IntervalSet.from_intervals(
            bands[k] for k in range(n) if reached[k]
        )
        if covered != FULL_SET:
            return False
    return True


# -- combining pipeline ------------------------------------------------------


@dataclass(frozen=True)
class PipelineBudget:
    refute_levels: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    refute_steps: int = 200
    leo_max_level: int = 12
    leo_steps: int = 400


def _non_surjective_witness(f: CurveMap) -> Optional[IntervalSet]:
    r = range_on(f, FULL)
    if r == FULL:
        return None
    if r.is_degenerate():
        pad = Q(1, 4)
        c = Interval(max(ZERO, r.lo - pad), min(ONE, r.hi + pad))
    else:
        c = r
    return IntervalSet((c,))


def is_transitive_pipeline(
    f: CurveMap, budget: PipelineBudget = PipelineBudget()
) -> Verdict:
    """Combine the certificates and refuters soundly.

    Order: non-surjectivity (instant refutation), the construction-record
    certificate, invariant-region search at escalating grid levels, then
    the grid certificate for steep piecewise-linear maps whose lap widths
    admit an affordable grid.  Certified and Refuted cannot both occur:
    certificates prove every open region spreads everywhere, refuters
    exhibit a region that never leaves itself.
    """
    witness = _non_surjective_witness(f)
    if witness is not None:
        _check_witness(f, witness)
        return Verdict.refuted(witness)

    verdict = box_chain_certify(f)
    if verdict.is_certified:
        return verdict

    for level in budget.refute_levels:
        verdict = invariant_region_refute(f, level, budget.refute_steps)
        if verdict.is_refuted:
            return verdict

    if f.is_pl and min_abs_slope(f) > 2:
        gap = min_breakpoint_gap(f)
        level = 1
        while Q(2, 1 << level) > gap:
            level += 1
        if level <= budget.leo_max_level:
            return leo_certify(f, level, budget.leo_steps)
    return Verdict.inconclusive(budget.refute_steps)
