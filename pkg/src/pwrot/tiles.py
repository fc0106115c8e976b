"""Regular-set tiles: extract the convex polygon cell of a periodic seed,
classify it, verify the permutation/rotation structure on it, and scan
rational grids for an inventory of tiles.

A periodic seed off the critical line determines a minimal itinerary block of
length ell; the cell is the intersection of the k*ell half-plane constraints
pulled back along the block (k the order of the block's rotation part), and
the block map's fixed point is the cell's rotation center.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cyclo import CycloNum, FieldContext
from .dynamics import (
    AffineMap,
    Itinerary,
    affine_along,
    itinerary,
    itinerary_period,
    minimal_period,
    rotation_center,
    rotation_order,
)
from .errors import (
    BudgetExceededError,
    CriticalLineError,
    InternalInconsistencyError,
)
from .geometry import (
    Box,
    ConvexPolygon,
    Location,
    apply_affine,
    edge_direction_power,
    halfplane_from_constraint,
    intersect_halfplanes,
    polygon_contains,
    polygon_is_regular,
)


@dataclass(frozen=True)
class Tile:
    """One connected component of the regular set, with its symbolic data."""

    polygon: ConvexPolygon
    word: Itinerary          # minimal block, length ell
    ell: int
    k: int
    center: CycloNum
    seed: CycloNum
    rotational: bool = True

    @property
    def ctx(self) -> FieldContext:
        return self.seed.ctx

    @property
    def sides(self) -> int:
        return len(self.polygon)

    def key(self):
        block = tuple(self.word.word)
        return (_least_rotation(block), self.center.coeffs)


@dataclass
class CheckReport:
    """Outcome of a verification run; ``passed`` is the conjunction."""

    name: str
    checks: list = field(default_factory=list)

    def record(self, label: str, ok: bool, detail: str = ""):
        self.checks.append((label, bool(ok), detail))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failures(self):
        return [(label, detail) for label, ok, detail in self.checks if not ok]


def _least_rotation(word: tuple) -> tuple:
    """Lexicographically least cyclic rotation (Booth's algorithm)."""
    n = len(word)
    if n == 0:
        return word
    s = word + word
    f = [-1] * len(s)
    kk = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - kk - 1]
        while i != -1 and sj != s[kk + i + 1]:
            if sj < s[kk + i + 1]:
                kk = j - i - 1
            i = f[i]
        if sj != s[kk + i + 1]:
            if sj < s[kk]:
                kk = j
            f[j - kk] = -1
        else:
            f[j - kk] = i + 1
    return tuple(s[kk:kk + n])


def _block_constraints(ctx: FieldContext, block: tuple[int, ...], horizon: int):
    """Half-planes {w : s_j * Im(G_j(w)) > 0} for j = 0 .. horizon-1."""
    constraints = []
    g = AffineMap(0, ctx.zero())
    lam = ctx.lambda_
    ell = len(block)
    for j in range(horizon):
        s = block[j % ell]
        constraints.append(halfplane_from_constraint(g, s))
        branch = AffineMap(1, -lam if s > 0 else lam)
        g = branch.compose_after(g)
    return constraints, g


def _symbolic_data(z: CycloNum, budget: int):
    """(block, ell, k, center, rotational) of the tile owning a periodic seed."""
    ctx = z.ctx
    rec = minimal_period(z, budget)
    if rec.iterates_on_line:
        raise CriticalLineError(rec.iterates_on_line[0][0])
    if rec.period is None:
        raise BudgetExceededError(budget)
    n = rec.period
    word_n = itinerary(z, n)
    ell = itinerary_period(word_n)
    block = word_n.word[:ell]

    if ell % ctx.q == 0:
        # the block map's linear part is 1, hence the identity on the tile;
        # there is no unique center and the full period is the tile period
        return word_n.word, n, 1, z, False

    k = rotation_order(ctx, ell)
    center = rotation_center(affine_along(ctx, block))
    if n not in (ell, k * ell):
        raise InternalInconsistencyError(
            f"period {n} is neither ell={ell} nor k*ell={k * ell}"
        )
    return block, ell, k, center, True


def _build_tile(z: CycloNum, block, ell, k, center, rotational) -> Tile:
    ctx = z.ctx
    constraints, _ = _block_constraints(ctx, block, k * ell)
    poly = intersect_halfplanes(constraints)
    if not isinstance(poly, ConvexPolygon):
        raise InternalInconsistencyError(
            f"constraint intersection degenerated to {poly!r} for a periodic seed"
        )
    if polygon_contains(poly, z) != Location.INTERIOR:
        raise InternalInconsistencyError("seed is not interior to its own tile")
    if polygon_contains(poly, center) != Location.INTERIOR:
        raise InternalInconsistencyError("center is not interior to the tile")
    return Tile(
        polygon=poly,
        word=Itinerary(block, periodic=True, ell=len(block)),
        ell=ell,
        k=k,
        center=center,
        seed=z,
        rotational=rotational,
    )


def tile_from_seed(z: CycloNum, budget: int) -> Tile:
    """The tile containing a periodic seed that stays off the critical line.

    Detects the exact period, extracts the minimal itinerary block, intersects
    the k*ell pulled-back half-plane constraints, and locates the rotation
    center of the block map.
    """
    return _build_tile(z, *_symbolic_data(z, budget))


def tile_images(t: Tile):
    """The ell polygons visited by the tile, in orbit order."""
    ctx = t.ctx
    out = []
    g = AffineMap(0, ctx.zero())
    lam = ctx.lambda_
    for j in range(t.ell):
        out.append(apply_affine(t.polygon, g) if j else t.polygon)
        s = t.word.word[j % len(t.word.word)]
        branch = AffineMap(1, -lam if s > 0 else lam)
        g = branch.compose_after(g)
    return out, g  # g = block map after ell steps


def interior_samples(t: Tile, count: int, seed: int = 0):
    """Rational convex combinations of the vertices, strictly interior."""
    rng = random.Random(seed)
    verts = t.polygon.vertices
    out = []
    while len(out) < count:
        weights = [Fraction(rng.randint(1, 5)) for _ in verts]
        total = sum(weights)
        sample = t.ctx.zero()
        for w, v in zip(weights, verts):
            sample = sample + v * (w / total)
        if sample == t.center:
            continue
        out.append(sample)
    return out


def verify_rotation_structure(t: Tile, samples: int = 5, seed: int = 0) -> CheckReport:
    """Exact checks of the permutation/rotation structure on one tile:
    distinct images returning at ell, the block map rotating the vertex set
    about the center, the center's minimal period ell, and interior samples
    of minimal period k*ell."""
    report = CheckReport(name="component permutation and rotation structure")
    images, block_map = tile_images(t)

    keys = {img.key() for img in images}
    report.record(
        "images pairwise distinct",
        len(keys) == t.ell,
        f"{len(keys)} distinct of {t.ell}",
    )
    back = apply_affine(t.polygon, block_map)
    report.record("exact return at ell", back.key() == t.polygon.key(), "")

    verts = t.polygon.vertices
    nv = len(verts)
    mapped = [block_map(v) for v in verts]
    offset = next((r for r in range(nv) if mapped[0] == verts[r]), None)
    cyclic = offset is not None and all(
        mapped[i] == verts[(i + offset) % nv] for i in range(nv)
    )
    report.record("block map rotates the vertex cycle", cyclic, f"offset {offset}")
    report.record(
        "block map fixes the center", block_map(t.center) == t.center, ""
    )

    rec = minimal_period(t.center, t.k * t.ell + 1)
    report.record(
        "center has minimal period ell", rec.period == t.ell, f"got {rec.period}"
    )

    expected = t.ell if not t.rotational else t.k * t.ell
    for idx, sample in enumerate(interior_samples(t, samples, seed)):
        rec = minimal_period(sample, expected + 1)
        report.record(
            f"interior sample {idx} has period k*ell",
            rec.period == expected and not rec.iterates_on_line,
            f"got {rec.period}",
        )
    return report


def slope_census(t: Tile) -> set[int]:
    """Distinct edge direction classes among the rotated copies of the real
    axis; for even q antiparallel powers share a slope."""
    ctx = t.ctx
    census = set()
    for a, b in t.polygon.edges():
        power = edge_direction_power(ctx, b - a)
        if power is None:
            raise InternalInconsistencyError("tile edge off the slope grid")
        census.add(power % (ctx.q // 2) if ctx.q % 2 == 0 else power)
    return census


def verify_polygon_bounds(t: Tile) -> CheckReport:
    """Side-count bound, edge slope census, and the coprime dichotomy."""
    ctx = t.ctx
    q = ctx.q
    report = CheckReport(name="tile geometry bounds")
    bound = q if q % 2 == 0 else 2 * q
    report.record(
        "side count within bound", t.sides <= bound, f"{t.sides} <= {bound}"
    )
    try:
        census = slope_census(t)
        slope_bound = q // 2 if q % 2 == 0 else q
        report.record(
            "edge slopes on the rotation grid",
            len(census) <= slope_bound,
            f"{sorted(census)}",
        )
    except InternalInconsistencyError as err:
        report.record("edge slopes on the rotation grid", False, str(err))
    if math.gcd(t.ell, q) == 1:
        regular = polygon_is_regular(t.polygon)
        ok = (t.sides == q and regular) or (q % 2 == 1 and t.sides == 2 * q)
        report.record(
            "coprime dichotomy",
            ok,
            f"sides={t.sides}, regular={regular}, q={q}",
        )
    return report


@dataclass(frozen=True)
class ScanOutcome:
    x: Fraction
    y: Fraction
    kind: str                      # "period" | "budget" | "critical"
    period: Optional[int] = None
    touch_index: Optional[int] = None


@dataclass
class ScanReport:
    box: Box
    step: Fraction
    budget: int
    outcomes: list
    tiles: dict                    # tile key -> (Tile, multiplicity)
    histogram: dict                # period -> sample count

    @property
    def tile_list(self):
        return [t for t, _ in self.tiles.values()]


def scan_region(
    ctx: FieldContext,
    box: Box,
    step: Fraction,
    budget: int,
    max_tile_period: Optional[int] = None,
) -> ScanReport:
    """Exact periods over a rational grid, with a deduplicated tile inventory.

    Samples whose orbit touches the line are classified as critical-set hits;
    periodic samples are resolved to their tile (skipping polygon extraction
    when the period exceeds ``max_tile_period``).
    """
    step = Fraction(step)
    if step <= 0:
        raise ValueError("step must be positive")
    outcomes = []
    tiles: dict = {}
    histogram: dict = {}
    y = box.y0
    while y <= box.y1:
        x = box.x0
        while x <= box.x1:
            z = ctx.point(x, y)
            rec = minimal_period(z, budget)
            if rec.iterates_on_line:
                outcomes.append(
                    ScanOutcome(x, y, "critical", touch_index=rec.iterates_on_line[0][0])
                )
            elif rec.period is None:
                outcomes.append(ScanOutcome(x, y, "budget"))
            else:
                outcomes.append(ScanOutcome(x, y, "period", period=rec.period))
                histogram[rec.period] = histogram.get(rec.period, 0) + 1
                if max_tile_period is None or rec.period <= max_tile_period:
                    _absorb_tile(tiles, z, budget)
            x += step
        y += step
    return ScanReport(box, step, budget, outcomes, tiles, histogram)


def _absorb_tile(tiles: dict, z: CycloNum, budget: int):
    block, ell, k, center, rotational = _symbolic_data(z, budget)
    key = (_least_rotation(tuple(block)), center.coeffs)
    if key in tiles:
        t, mult = tiles[key]
        tiles[key] = (t, mult + 1)
    else:
        t = _build_tile(z, block, ell, k, center, rotational)
        tiles[key] = (t, 1)
