"""Reference maps and operations on the space of interval surjections.

The catalog half supplies the standard actors: identity, constants, the
square map, sawtooth zigzags (plain and phase-shifted) and the ladder
family of near-identity transitive maps.  The operations half works on
the surjective class: detecting surjectivity with an attainment witness,
renormalising a non-surjective map onto its value range, and the
quadratic fixed-point perturbation that pushes any piecewise-linear
surjection a controlled distance away from every transitive map.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, ParameterError, PreconditionError
from .exact import (
    FULL,
    CurveMap,
    Interval,
    PLMap,
    Piece,
    affine_transform,
    pl_from_vertices,
    range_on,
    sup_distance,
)
from .rational import ONE, Q, ZERO, as_scalar, is_dyadic, largest_dyadic_where
from .transitivity import PipelineBudget, Verdict, is_transitive_pipeline

__all__ = [
    "identity_map",
    "constant_map",
    "square_map",
    "one_minus",
    "sawtooth",
    "phase_sawtooth",
    "ladder_map",
    "SurjectionWitness",
    "is_surjective",
    "normalize_to_surjection",
    "fixed_points",
    "PerturbationRecord",
    "nowhere_dense_perturbation",
    "nonconvexity_witness",
]


# ---------------------------------------------------------------------------
# reference maps


def identity_map() -> PLMap:
    return pl_from_vertices([(ZERO, ZERO), (ONE, ONE)])


def constant_map(c) -> PLMap:
    c = as_scalar(c)
    if not (ZERO <= c <= ONE):
        raise ParameterError(f"constant value {c} outside [0,1]")
    return PLMap((Piece(FULL, c, ZERO, ZERO),))


def square_map() -> CurveMap:
    return CurveMap((Piece(FULL, ZERO, ZERO, ONE),))


def one_minus(f: CurveMap) -> CurveMap:
    """Reflection x -> 1 - f(x)."""
    return affine_transform(f, -1, 1)


def sawtooth(m: int) -> PLMap:
    """Zigzag through (k/m, k mod 2): m affine laps of slope +-m."""
    if m < 2:
        raise ParameterError("a sawtooth needs at least two laps")
    return pl_from_vertices([(Q(k, m), Q(k % 2)) for k in range(m + 1)])


def phase_sawtooth(m: int, theta) -> PLMap:
    """The m-sawtooth translated by theta in its argument.

    Takes x to p(x + theta) where p is the periodic extension of the
    sawtooth wave (period 2/m).  Slopes stay exactly +-m for every phase
    and the map remains onto [0, 1], so the whole phase circle lives
    among the steep surjections; phase 0 is sawtooth(m) itself.
    """
    if m < 2:
        raise ParameterError("a sawtooth needs at least two laps")
    period = Q(2, m)
    theta = as_scalar(theta)
    # reduce theta into [0, period)
    ratio = theta / period
    theta = theta - period * (int(ratio.numerator) // int(ratio.denominator))

    def wave(u) -> Q:
        ratio = u / period
        u = u - period * (int(ratio.numerator) // int(ratio.denominator))
        return m * u if u * m <= ONE else 2 - m * u

    verts: list[tuple[Q, Q]] = [(ZERO, wave(theta))]
    # interior vertices sit where x + theta crosses a multiple of 1/m
    j = int((theta * m).numerator) // int((theta * m).denominator) + 1
    while Q(j, m) - theta < ONE:
        x = Q(j, m) - theta
        if x > ZERO:
            verts.append((x, Q(j % 2)))
        j += 1
    verts.append((ONE, wave(ONE + theta)))
    return pl_from_vertices(verts)


def ladder_map(n: int) -> PLMap:
    """Transitive zigzag fixing every k/n, at distance 8/(5n) from identity.

    Each cell [k/n, (k+1)/n] is crossed by three slope +-5 legs whose
    image is exactly [(k-1)/n, (k+2)/n] clipped to [0,1], so consecutive
    cells overlap and orbits climb the ladder in both directions.
    """
    if n < 5:
        raise ParameterError("ladder needs at least five cells")
    w = Q(1, 5 * n)
    verts: list[tuple[Q, Q]] = [(ZERO, ZERO), (2 * w, Q(2, n)), (4 * w, ZERO), (Q(1, n), Q(1, n))]
    for k in range(1, n - 1):
        base = Q(k, n)
        verts += [
            (base + w, Q(k - 1, n)),
            (base + 4 * w, Q(k + 2, n)),
            (base + 5 * w, Q(k + 1, n)),
        ]
    base = Q(n - 1, n)
    verts += [(base + w, ONE), (base + 3 * w, Q(n - 2, n)), (ONE, ONE)]
    return pl_from_vertices(verts)


# ---------------------------------------------------------------------------
# surjectivity


@dataclass(frozen=True)
class SurjectionWitness:
    """Points where a surjection attains 0 and 1 (leftmost such points)."""

    min_attained_at: Q
    max_attained_at: Q


def is_surjective(f: CurveMap) -> Optional[SurjectionWitness]:
    """Attainment witness if f is onto [0, 1], else None.

    Extrema of a piecewise-quadratic occur at piece endpoints or interior
    parabola vertices, so scanning those finitely many points is exact.
    The witness records the first attaining point left to right.
    """
    min_val, min_at = f.pieces[0].value_at(ZERO), ZERO
    max_val, max_at = min_val, ZERO
    for p in f.pieces:
        xs = [p.domain.lo, p.domain.hi]
        v = p.vertex()
        if v is not None:
            xs.insert(1, v)
        for x in xs:
            y = p.value_at(x)
            if y < min_val:
                min_val, min_at = y, x
            if y > max_val:
                max_val, max_at = y, x
    if min_val == ZERO and max_val == ONE:
        return SurjectionWitness(min_at, max_at)
    return None


def normalize_to_surjection(f: CurveMap) -> tuple[tuple[Q, Q], CurveMap]:
    """Rescale values onto [0, 1]; returns ((min f, max f), rescaled map).

    Constant maps have no surjective rescaling and raise DomainError.
    """
    r = range_on(f, FULL)
    if r.is_degenerate():
        raise DomainError("constant map cannot be rescaled onto [0,1]")
    scale = 1 / r.width
    return (r.lo, r.hi), affine_transform(f, scale, -r.lo * scale)


def fixed_points(f: PLMap) -> tuple[Q, ...]:
    """Solutions of f(x) = x, one representative per diagonal segment.

    A piece lying on the diagonal (slope 1 through the origin line) is a
    continuum of fixed points; its midpoint stands in for the segment.
    """
    if not f.is_pl:
        raise PreconditionError("fixed-point scan requires a piecewise-linear map")
    found: list[Q] = []
    for p in f.pieces:
        if p.c1 == ONE:
            if p.c0 == ZERO:
                found.append((p.domain.lo + p.domain.hi) / 2)
            continue
        x = p.c0 / (1 - p.c1)
        if p.domain.contains(x):
            found.append(x)
    out: list[Q] = []
    for x in sorted(found):
        if not out or out[-1] != x:
            out.append(x)
    return tuple(out)


# ---------------------------------------------------------------------------
# nowhere-dense perturbation


@dataclass(frozen=True)
class PerturbationRecord:
    """Construction record of a quadratic fixed-point perturbation.

    The perturbed map h agrees with the seed outside ``window``, equals
    the tangent parabola on ``core`` and is linear in between.  ``core``
    maps exactly onto itself with h <= x inside, which is what the
    refutation verdict certifies.  ``ball_window``/``ball_radius`` (when
    present) name a window that every map within ball_radius of h keeps
    invariant, so that whole ball misses the transitive maps.
    """

    fixed_point: Q
    delta: Q
    window: Interval
    core: Interval
    distance: Q
    verdict: Verdict
    refute_level: int
    ball_window: Optional[Interval]
    ball_radius: Optional[Q]
    ball_slack: Optional[Q]


def _dyadic_level(x) -> int:
    d = int(Q(x).denominator)
    return d.bit_length() - 1


def _trimmed_pieces(g: CurveMap, lo, hi) -> list[Piece]:
    out: list[Piece] = []
    window = Interval(lo, hi)
    for p in g.pieces:
        d = p.domain.intersect(window)
        if d is not None and not d.is_degenerate():
            out.append(Piece(d, p.c0, p.c1, p.c2))
    return out


def _build_perturbed(g: PLMap, x0: Q, delta: Q) -> CurveMap:
    """h = g outside (x0-delta, x0+delta), parabola fixing [x0 +- delta/2]."""
    pieces: list[Piece] = []
    if x0 == ZERO:
        # one-sided: parabola 2x^2/delta on [0, delta/2], then a connector
        pieces.append(Piece(Interval(ZERO, delta / 2), ZERO, ZERO, 2 / delta))
        y0, y1 = delta / 2, g.value_at(delta)
        slope = (y1 - y0) / (delta / 2)
        pieces.append(
            Piece(Interval(delta / 2, delta), y0 - slope * (delta / 2), slope, ZERO)
        )
        pieces += _trimmed_pieces(g, delta, ONE)
    elif x0 == ONE:
        pieces += _trimmed_pieces(g, ZERO, 1 - delta)
        y0, y1 = g.value_at(1 - delta), 1 - delta / 2
        slope = (y1 - y0) / (delta / 2)
        pieces.append(
            Piece(Interval(1 - delta, 1 - delta / 2), y0 - slope * (1 - delta), slope, ZERO)
        )
        # 1 - (2/delta)(1-x)^2, increasing onto [1 - delta/2, 1]
        c2 = -2 / delta
        pieces.append(
            Piece(Interval(1 - delta / 2, ONE), ONE + c2, -2 * c2, c2)
        )
    else:
        a = x0 - delta / 2
        pieces += _trimmed_pieces(g, ZERO, x0 - delta)
        y0 = g.value_at(x0 - delta)
        slope = (a - y0) / (delta / 2)
        pieces.append(
            Piece(Interval(x0 - delta, a), y0 - slope * (x0 - delta), slope, ZERO)
        )
        # (1/delta)(x - a)^2 + a: fixes both core endpoints, h <= x inside
        pieces.append(
            Piece(Interval(a, x0 + delta / 2), a * a / delta + a, -2 * a / delta, 1 / delta)
        )
        y1 = g.value_at(x0 + delta)
        slope = (y1 - (x0 + delta / 2)) / (delta / 2)
        pieces.append(
            Piece(
                Interval(x0 + delta / 2, x0 + delta),
                y1 - slope * (x0 + delta),
                slope,
                ZERO,
            )
        )
        pieces += _trimmed_pieces(g, x0 + delta, ONE)
    return CurveMap(tuple(pieces))


def _core_of(x0: Q, delta: Q) -> Interval:
    if x0 == ZERO:
        return Interval(ZERO, delta / 2)
    if x0 == ONE:
        return Interval(1 - delta / 2, ONE)
    return Interval(x0 - delta / 2, x0 + delta / 2)


def _window_of(x0: Q, delta: Q) -> Interval:
    if x0 == ZERO:
        return Interval(ZERO, delta)
    if x0 == ONE:
        return Interval(1 - delta, ONE)
    return Interval(x0 - delta, x0 + delta)


def _ball_certificate(
    h: CurveMap, core: Interval, delta: Q
) -> tuple[Optional[Interval], Optional[Q], Optional[Q]]:
    """A window around the core that rho-perturbations of h keep invariant.

    Widening the core by s keeps the connectors' climb inside as long as
    s is small against delta; the first dyadic widening whose exact range
    clears both sides by s/2 is kept.  Every map within s/2 of h then
    maps the window into itself.
    """
    s = delta / 8
    for _ in range(8):
        lo = max(ZERO, core.lo - s) if core.lo > ZERO else ZERO
        hi = min(ONE, core.hi + s) if core.hi < ONE else ONE
        w = Interval(lo, hi)
        r = range_on(h, w)
        ok = True
        if w.lo > ZERO and r.lo - s / 2 < w.lo:
            ok = False
        if w.hi < ONE and w.hi < r.hi + s / 2:
            ok = False
        if ok:
            slack_candidates = []
            if w.lo > ZERO:
                slack_candidates.append(r.lo - w.lo)
            if w.hi < ONE:
                slack_candidates.append(w.hi - r.hi)
            return w, s / 2, min(slack_candidates)
        s = s / 2
    return None, None, None


def nowhere_dense_perturbation(g: PLMap, epsilon) -> CurveMap:
    """A surjection within epsilon of g that no transitive map approximates.

    Flattens g onto the tangent parabola across a small window around a
    fixed point: the parabola maps its core interval onto itself, so the
    core is an invariant proper window and the result is certifiably not
    transitive, with slack enough that a whole ball around the output
    misses the transitive maps.  The construction is verified post hoc
    (exact distance, surjectivity, refutation verdict) and retries with a
    smaller window or the next fixed point when a check fails; fixed
    points off the dyadic grid are skipped because the invariance
    certificate needs grid-aligned windows.
    """
    epsilon = as_scalar(epsilon)
    if epsilon <= ZERO:
        raise ParameterError("perturbation size must be positive")
    if not g.is_pl:
        raise PreconditionError("perturbation seed must be piecewise linear")
    if is_surjective(g) is None:
        raise DomainError("perturbation seed must be onto [0,1]")

    cands = sorted(fixed_points(g), key=lambda x: (-min(x, 1 - x), x))
    if not cands:
        raise PreconditionError("continuous self-map with no fixed point (broken seed)")

    quarter = epsilon / 4
    for x0 in cands:
        if not is_dyadic(x0):
            continue
        if x0 == ZERO or x0 == ONE:
            bound = min(quarter, ONE)
        else:
            bound = min(quarter, x0, 1 - x0)

        def small_enough(d) -> bool:
            if d >= bound:
                return False
            r = range_on(g, _window_of(x0, d))
            return x0 - quarter < r.lo and r.hi < x0 + quarter

        try:
            delta0 = largest_dyadic_where(small_enough, k_max=60)
        except DomainError:
            continue

        delta = delta0
        for _ in range(7):
            h = _build_perturbed(g, x0, delta)
            core = _core_of(x0, delta)
            dist = sup_distance(g, h)
            level = max(_dyadic_level(core.lo), _dyadic_level(core.hi))
            if dist < epsilon and is_surjective(h) is not None and level >= 1:
                verdict = is_transitive_pipeline(
                    h, PipelineBudget(refute_levels=(level,))
                )
                if verdict.is_refuted:
                    bw, br, bs = _ball_certificate(h, core, delta)
                    record = PerturbationRecord(
                        fixed_point=x0,
                        delta=delta,
                        window=_window_of(x0, delta),
                        core=core,
                        distance=dist,
                        verdict=verdict,
                        refute_level=level,
                        ball_window=bw,
                        ball_radius=br,
                        ball_slack=bs,
                    )
                    return CurveMap(h.pieces, provenance=record)
            delta = delta / 2
    raise PreconditionError(
        "no refutable perturbation window: every fixed point sits off the "
        "dyadic grid or resists the invariance certificate"
    )


def nonconvexity_witness() -> tuple[PLMap, CurveMap, CurveMap]:
    """Two transitive maps whose midpoint average is constant 1/2.

    Exhibits the failure of convexity: the first two maps are certifiably
    transitive while their pointwise average, the constant map, is not
    even surjective, and an entire ball around it misses the transitive
    maps.
    """
    f = sawtooth(3)
    return f, one_minus(f), constant_map(Q(1, 2))
