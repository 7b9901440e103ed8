import pytest
from hypothesis import given, settings, strategies as st

from transmaps.corpus import random_pl_map, random_surjective_pl
from transmaps.errors import DomainError, ParameterError, PreconditionError
from transmaps.exact import (
    FULL,
    Interval,
    IntervalSet,
    evaluate,
    modality,
    pl_from_vertices,
    range_on,
    sup_distance,
)
from transmaps.rational import ONE, Q, ZERO
from transmaps.spaces import (
    PerturbationRecord,
    constant_map,
    fixed_points,
    identity_map,
    is_surjective,
    ladder_map,
    nonconvexity_witness,
    normalize_to_surjection,
    nowhere_dense_perturbation,
    one_minus,
    phase_sawtooth,
    sawtooth,
    square_map,
)
from transmaps.transitivity import ball_refute, is_transitive_pipeline, leo_certify


def iv(a, b):
    return Interval(Q(a), Q(b))


class TestCatalog:
    def test_identity(self):
        f = identity_map()
        assert f.value_at(Q(3, 7)) == Q(3, 7)
        assert len(f.pieces) == 1

    def test_constant_bounds(self):
        assert constant_map(Q(1, 2)).value_at(ZERO) == Q(1, 2)
        with pytest.raises(ParameterError):
            constant_map(Q(3, 2))

    def test_square_map_values(self):
        f = square_map()
        assert f.value_at(Q(1, 2)) == Q(1, 4)
        # squaring [0,1/3] lands exactly on [0,1/9]
        assert range_on(f, iv("0", "1/3")) == iv("0", "1/9")

    def test_sawtooth_vertices(self):
        f = sawtooth(3)
        assert f.value_at(ZERO) == ZERO
        assert f.value_at(Q(1, 3)) == ONE
        assert f.value_at(Q(2, 3)) == ZERO
        assert f.value_at(ONE) == ONE
        assert len(f.pieces) == 3

    def test_sawtooth_two_is_tent(self):
        tent = pl_from_vertices([(ZERO, ZERO), (Q(1, 2), ONE), (ONE, ZERO)])
        assert sawtooth(2).pieces == tent.pieces

    def test_sawtooth_needs_teeth(self):
        with pytest.raises(ParameterError):
            sawtooth(1)

    def test_one_minus_reflects(self):
        g = one_minus(sawtooth(3))
        assert g.value_at(ZERO) == ONE
        assert g.value_at(Q(1, 3)) == ZERO
        assert g.is_pl


class TestPhaseSawtooth:
    def test_zero_phase_is_plain(self):
        assert phase_sawtooth(3, ZERO).pieces == sawtooth(3).pieces

    def test_half_period_is_reflection(self):
        assert phase_sawtooth(3, Q(1, 3)).pieces == one_minus(sawtooth(3)).pieces

    def test_full_period_wraps(self):
        assert phase_sawtooth(3, Q(2, 3)).pieces == sawtooth(3).pieces
        assert phase_sawtooth(3, Q(5, 3)).pieces == one_minus(sawtooth(3)).pieces

    def test_generic_phase_frozen(self):
        f = phase_sawtooth(3, Q(1, 8))
        expected = pl_from_vertices(
            [
                (ZERO, Q(3, 8)),
                (Q(5, 24), ONE),
                (Q(13, 24), ZERO),
                (Q(7, 8), ONE),
                (ONE, Q(5, 8)),
            ]
        )
        assert f.pieces == expected.pieces

    @given(st.integers(0, 127), st.integers(0, 127))
    @settings(max_examples=30, deadline=None)
    def test_phase_modulus_and_onto(self, a, b):
        ta, tb = Q(a, 192), Q(b, 192)
        fa, fb = phase_sawtooth(3, ta), phase_sawtooth(3, tb)
        assert is_surjective(fa)
        for p in fa.pieces:
            assert abs(p.c1) == 3
        shift = abs(ta - tb)
        period = Q(2, 3)
        shift = min(shift, period - shift)
        assert sup_distance(fa, fb) <= 3 * shift


class TestLadder:
    def test_minimum_size(self):
        with pytest.raises(ParameterError):
            ladder_map(4)

    def test_shape_frozen(self):
        f = ladder_map(5)
        assert len(f.pieces) == 13
        assert modality(f) == 12
        for p in f.pieces:
            assert abs(p.c1) == 5

    def test_rung_fixed_points(self):
        f = ladder_map(5)
        for k in range(6):
            assert f.value_at(Q(k, 5)) == Q(k, 5)
        pts = fixed_points(f)
        for k in range(6):
            assert Q(k, 5) in pts
        for x in pts:
            assert f.value_at(x) == x

    def test_identity_distance_exact(self):
        assert sup_distance(ladder_map(5), identity_map()) == Q(8, 25)
        last = None
        for n in range(5, 10):
            d = sup_distance(ladder_map(n), identity_map())
            assert d == Q(8, 5 * n)
            assert d <= Q(3, n)
            if last is not None:
                assert d < last
            last = d

    def test_cell_images_overlap_neighbours(self):
        for n in (5, 7):
            f = ladder_map(n)
            for k in range(n):
                cell = Interval(Q(k, n), Q(k + 1, n))
                lo = max(ZERO, Q(k - 1, n))
                hi = min(ONE, Q(k + 2, n))
                assert range_on(f, cell) == Interval(lo, hi)

    def test_certified_transitive(self):
        assert leo_certify(ladder_map(5), 6, 60).is_certified
        assert is_surjective(ladder_map(5))


class TestSurjectivity:
    def test_frozen_witnesses(self):
        w = is_surjective(identity_map())
        assert (w.min_attained_at, w.max_attained_at) == (ZERO, ONE)
        w = is_surjective(sawtooth(2))
        assert (w.min_attained_at, w.max_attained_at) == (ZERO, Q(1, 2))
        w = is_surjective(sawtooth(3))
        assert (w.min_attained_at, w.max_attained_at) == (ZERO, Q(1, 3))
        w = is_surjective(one_minus(sawtooth(3)))
        assert (w.min_attained_at, w.max_attained_at) == (Q(1, 3), ZERO)
        w = is_surjective(square_map())
        assert (w.min_attained_at, w.max_attained_at) == (ZERO, ONE)

    def test_not_onto(self):
        assert is_surjective(constant_map(Q(1, 2))) is None
        shrunk = pl_from_vertices([(ZERO, Q(1, 4)), (ONE, Q(3, 4))])
        assert is_surjective(shrunk) is None

    @given(st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_witness_attains(self, seed):
        import random

        f = random_surjective_pl(random.Random(seed))
        w = is_surjective(f)
        assert w is not None
        assert f.value_at(w.min_attained_at) == ZERO
        assert f.value_at(w.max_attained_at) == ONE


class TestNormalize:
    def test_affine_seed_recovers_identity(self):
        f = pl_from_vertices([(ZERO, Q(1, 4)), (ONE, Q(3, 4))])
        (a, b), g = normalize_to_surjection(f)
        assert (a, b) == (Q(1, 4), Q(3, 4))
        assert g.pieces == identity_map().pieces

    def test_surjection_unchanged(self):
        (a, b), g = normalize_to_surjection(square_map())
        assert (a, b) == (ZERO, ONE)
        assert g.pieces == square_map().pieces

    def test_constant_rejected(self):
        with pytest.raises(DomainError):
            normalize_to_surjection(constant_map(Q(2, 5)))

    @given(st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_output_is_onto(self, seed):
        import random

        f = random_pl_map(random.Random(seed))
        r = range_on(f, FULL)
        if r.is_degenerate():
            return
        (a, b), g = normalize_to_surjection(f)
        assert (a, b) == (r.lo, r.hi)
        assert is_surjective(g) is not None
        assert g.is_pl


class TestFixedPoints:
    def test_diagonal_crossings(self):
        assert fixed_points(sawtooth(3)) == (ZERO, Q(1, 2), ONE)
        assert fixed_points(sawtooth(2)) == (ZERO, Q(2, 3))

    def test_diagonal_plateau_midpoint(self):
        assert fixed_points(identity_map()) == (Q(1, 2),)

    def test_requires_pl(self):
        with pytest.raises(PreconditionError):
            fixed_points(square_map())


class TestPerturbation:
    def test_sawtooth_seed_frozen(self):
        g = sawtooth(3)
        h = nowhere_dense_perturbation(g, Q(1, 10))
        rec = h.provenance
        assert isinstance(rec, PerturbationRecord)
        assert rec.fixed_point == Q(1, 2)
        assert rec.delta == Q(1, 128)
        assert rec.window == iv("63/128", "65/128")
        assert rec.core == iv("127/256", "129/256")
        # untouched outside the window
        for x in (ZERO, Q(1, 4), Q(63, 128), Q(65, 128), Q(3, 4), ONE):
            assert h.value_at(x) == g.value_at(x)
        # parabola values on the core
        assert h.value_at(Q(127, 256)) == Q(127, 256)
        assert h.value_at(Q(129, 256)) == Q(129, 256)
        assert h.value_at(Q(1, 2)) == Q(255, 512)
        for x in (Q(255, 512), Q(1, 2), Q(257, 512)):
            assert h.value_at(x) < x
        assert not h.is_pl

    def test_sawtooth_seed_certificates(self):
        h = nowhere_dense_perturbation(sawtooth(3), Q(1, 10))
        rec = h.provenance
        assert rec.distance == Q(1, 64)
        assert sup_distance(sawtooth(3), h) == Q(1, 64)
        assert rec.verdict.is_refuted
        assert rec.refute_level == 8
        assert rec.verdict.witness == IntervalSet.single(Q(127, 256), Q(1, 2))
        assert rec.ball_window == iv("507/1024", "517/1024")
        assert rec.ball_radius == Q(1, 2048)
        assert rec.ball_slack == Q(1, 1024)
        assert is_surjective(h) is not None
        # the core really is invariant for h
        assert range_on(h, rec.core) == rec.core

    def test_endpoint_fixed_point(self):
        # only dyadic fixed point of this seed is x = 0
        g = pl_from_vertices([(ZERO, ZERO), (Q(1, 3), ONE), (ONE, ZERO)])
        h = nowhere_dense_perturbation(g, Q(1, 5))
        rec = h.provenance
        assert rec.fixed_point == ZERO
        assert rec.core.lo == ZERO
        assert h.value_at(ZERO) == ZERO
        assert rec.verdict.is_refuted
        assert is_surjective(h) is not None
        assert sup_distance(g, h) < Q(1, 5)

    def test_bad_inputs(self):
        with pytest.raises(ParameterError):
            nowhere_dense_perturbation(sawtooth(3), ZERO)
        with pytest.raises(DomainError):
            nowhere_dense_perturbation(constant_map(Q(1, 2)), Q(1, 10))
        with pytest.raises(PreconditionError):
            nowhere_dense_perturbation(square_map(), Q(1, 10))

    @pytest.mark.parametrize("eps", [Q(1, 10), Q(1, 4)])
    @pytest.mark.parametrize(
        "seed_name", ["saw3", "saw4", "saw5", "ladder"]
    )
    def test_guarantees_across_seeds(self, seed_name, eps):
        g = {
            "saw3": sawtooth(3),
            "saw4": sawtooth(4),
            "saw5": sawtooth(5),
            "ladder": ladder_map(5),
        }[seed_name]
        h = nowhere_dense_perturbation(g, eps)
        rec = h.provenance
        assert sup_distance(g, h) < eps
        assert is_surjective(h) is not None
        assert rec.verdict.is_refuted
        assert range_on(h, rec.core) == rec.core
        # agreement outside the window
        w = rec.window
        if w.lo > ZERO:
            assert h.value_at(w.lo / 2) == g.value_at(w.lo / 2)
        if w.hi < ONE:
            x = (w.hi + ONE) / 2
            assert h.value_at(x) == g.value_at(x)
        if rec.ball_window is not None:
            r = range_on(h, rec.ball_window)
            assert rec.ball_slack >= rec.ball_radius
            if rec.ball_window.lo > ZERO:
                assert r.lo - rec.ball_window.lo >= rec.ball_slack
            if rec.ball_window.hi < ONE:
                assert rec.ball_window.hi - r.hi >= rec.ball_slack


class TestNonconvexity:
    def test_witness_triple(self):
        f, g, mid = nonconvexity_witness()
        # mid is the pointwise average of f and g
        for x in (ZERO, Q(1, 6), Q(1, 3), Q(1, 2), ONE):
            assert (f.value_at(x) + g.value_at(x)) / 2 == mid.value_at(x)
        assert is_transitive_pipeline(f).is_certified
        assert is_transitive_pipeline(g).is_certified
        v = is_transitive_pipeline(mid)
        assert v.is_refuted
        assert v.witness == IntervalSet.single(Q(1, 4), Q(3, 4))
        assert ball_refute(mid, Q(1, 8), 2) == (iv("0", "3/4"), Q(1, 8))
