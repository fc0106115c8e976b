import random
from fractions import Fraction

import pytest

from pwrot.casestudy import golden_context, golden_rescale, hexagon_context
from pwrot.dynamics import minimal_period, step
from pwrot.errors import BudgetExceededError, CriticalLineError
from pwrot.geometry import Box, Location, polygon_contains, polygon_is_regular
from pwrot.tiles import (
    _least_rotation,
    interior_samples,
    scan_region,
    slope_census,
    tile_from_seed,
    tile_images,
    verify_rotation_structure,
    verify_polygon_bounds,
)


@pytest.fixture(scope="module")
def gc():
    return golden_context()


@pytest.fixture(scope="module")
def hexagon_tile():
    hc = hexagon_context()
    return tile_from_seed(hc.center, 100)


@pytest.fixture(scope="module")
def p0_tile(gc):
    return tile_from_seed(gc.P0, 10)


@pytest.fixture(scope="module")
def p1_tile(gc):
    return tile_from_seed(golden_rescale(gc, gc.P0), 100)


class TestLeastRotation:
    def test_brute_force_agreement(self):
        rng = random.Random(5)
        for _ in range(200):
            n = rng.randint(1, 12)
            word = tuple(rng.choice([1, -1]) for _ in range(n))
            best = min(word[i:] + word[:i] for i in range(n))
            assert _least_rotation(word) == best


class TestTileFromSeed:
    def test_fixed_pentagon(self, p0_tile, gc):
        t = p0_tile
        assert (t.ell, t.k, t.sides) == (1, 5, 5)
        assert t.rotational
        assert polygon_is_regular(t.polygon)
        assert t.center == gc.P0
        assert polygon_contains(t.polygon, gc.P0) == Location.INTERIOR

    def test_seven_cycle_pentagon(self, p1_tile, gc):
        t = p1_tile
        p1 = golden_rescale(gc, gc.P0)
        assert (t.ell, t.k, t.sides) == (7, 5, 5)
        assert t.center == p1
        assert polygon_is_regular(t.polygon)

    def test_interior_points_have_full_period(self, p1_tile):
        for sample in interior_samples(p1_tile, 4, seed=11):
            rec = minimal_period(sample, 36)
            assert rec.period == 35
            assert not rec.iterates_on_line

    def test_hexagon(self, hexagon_tile):
        t = hexagon_tile
        assert (t.ell, t.k, t.sides) == (20, 3, 6)
        assert not polygon_is_regular(t.polygon)
        hc = hexagon_context()
        assert t.polygon.key() == hc.hexagon.key()

    def test_seed_on_critical_line_rejected(self, gc):
        with pytest.raises(CriticalLineError):
            tile_from_seed(gc.Q, 300)

    def test_budget_exhaustion(self, gc):
        z = gc.ctx.point(Fraction(1, 4), Fraction(1, 4))
        rec = minimal_period(z, 10 ** 4)
        if rec.period is None or rec.period > 3:
            with pytest.raises((BudgetExceededError, CriticalLineError)):
                tile_from_seed(z, 3)

    def test_vertices_reach_the_line(self, p1_tile):
        # tile boundaries belong to the critical set: every vertex's forward
        # orbit must hit the line within a small number of steps
        for v in p1_tile.polygon.vertices:
            w = v
            hit = False
            for _ in range(p1_tile.ell * p1_tile.k):
                if w.imag().is_zero():
                    hit = True
                    break
                w = step(w)
            assert hit

    def test_stepped_seed_gives_next_image(self, p1_tile, gc):
        # the tile of F(seed) is the first affine image of the tile of seed
        images, _ = tile_images(p1_tile)
        stepped = tile_from_seed(step(p1_tile.seed), 100)
        assert stepped.polygon.key() == images[1].key()

    def test_same_tile_two_seeds_identical_polygon(self, p1_tile, gc):
        other_seed = interior_samples(p1_tile, 1, seed=23)[0]
        other = tile_from_seed(other_seed, 100)
        assert other.polygon.key() == p1_tile.polygon.key()
        assert other.key() == p1_tile.key()


class TestVerification:
    def test_rotation_structure_on_known_tiles(self, p0_tile, p1_tile, hexagon_tile):
        for tile in (p0_tile, p1_tile, hexagon_tile):
            report = verify_rotation_structure(tile, samples=3, seed=1)
            assert report.passed, report.failures()

    def test_polygon_bounds_on_known_tiles(self, p0_tile, p1_tile, hexagon_tile):
        for tile in (p0_tile, p1_tile, hexagon_tile):
            report = verify_polygon_bounds(tile)
            assert report.passed, report.failures()

    def test_hexagon_numbers(self, hexagon_tile):
        report = verify_rotation_structure(hexagon_tile, samples=2, seed=2)
        assert report.passed
        # gcd(20, 12) = 4, so the coprime dichotomy must not be claimed
        labels = [label for label, _, _ in verify_polygon_bounds(hexagon_tile).checks]
        assert "coprime dichotomy" not in labels

    def test_coprime_dichotomy_applies(self, p1_tile):
        labels = [label for label, _, _ in verify_polygon_bounds(p1_tile).checks]
        assert "coprime dichotomy" in labels

    def test_slope_census_bound(self, p0_tile, p1_tile, hexagon_tile):
        assert len(slope_census(p0_tile)) <= 5
        assert len(slope_census(p1_tile)) <= 5
        assert len(slope_census(hexagon_tile)) <= 6


class TestScan:
    def test_scan_golden_region(self, gc):
        report = scan_region(gc.ctx, Box(-1, -1, 1, 1), Fraction(1, 2), 2000)
        kinds = {o.kind for o in report.outcomes}
        assert "period" in kinds
        # grid points on the axis are critical-set hits at index 0
        on_axis = [o for o in report.outcomes if o.y == 0]
        assert all(o.kind == "critical" and o.touch_index == 0 for o in on_axis)
        assert len(report.tiles) >= 2
        for tile, mult in report.tiles.values():
            assert mult >= 1
            assert verify_polygon_bounds(tile).passed

    def test_scan_histogram_counts_periodic_samples(self, gc):
        report = scan_region(gc.ctx, Box(-1, -1, 1, 1), Fraction(1, 2), 2000)
        assert sum(report.histogram.values()) == sum(
            1 for o in report.outcomes if o.kind == "period"
        )

    def test_hexagon_inventory(self):
        hc = hexagon_context()
        report = scan_region(hc.ctx, Box(Fraction(3, 2), 0, 3, 1), Fraction(1, 4), 200)
        irregular_hexes = [
            t for t, _ in report.tiles.values() if t.sides == 6 and not polygon_is_regular(t.polygon)
        ]
        assert irregular_hexes, "expected an irregular hexagon in the inventory"
