"""The two fully worked rotation cases.

Golden case (rotation by -2*pi/5): the fixed pentagon center P0, the affine
contraction r with ratio 1/phi^3 = 2*phi - 3 whose iterates P_n = r^n(P0) form
a family of pentagon centers with rapidly growing periods, and the orbit of
the on-line point Q = (-phi, 0) whose critical-line returns stay in Z[phi].

Dodecagon case (rotation by 11*pi/6): the irregular hexagon tile with
20-periodic center C = (sqrt(3)/3 + 3/2, sqrt(3)/6).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .cyclo import (
    CycloNum,
    FieldContext,
    golden_coords,
    golden_elements,
    make_field,
    sign_of_real,
)
from .dynamics import minimal_period
from .errors import WrongContextError
from .geometry import ConvexPolygon, apply_affine, make_polygon, polygon_is_regular
from .stepper import run_signs
from .tiles import CheckReport, tile_from_seed, tile_images


@dataclass(frozen=True)
class GoldenContext:
    """Named exact data of the golden-ratio case."""

    ctx: FieldContext
    phi: CycloNum
    sqrt2phi: CycloNum
    r_scale: CycloNum            # 2*phi - 3 = 1/phi^3
    r_shift: CycloNum            # 2 - 2*phi
    P0: CycloNum
    Q: CycloNum
    R: CycloNum
    S: CycloNum

    def triangle(self) -> ConvexPolygon:
        return make_polygon([self.Q, self.S, self.R])


@lru_cache(maxsize=1)
def golden_context() -> GoldenContext:
    ctx = make_field(4, 5)
    phi, s, _ = golden_elements(ctx)
    p0 = ctx.from_rational(Fraction(1, 2)) + ctx.i_unit * ((phi + 2) * s / 10)
    r_scale = 2 * phi - 3
    assert r_scale * phi ** 3 == 1
    return GoldenContext(
        ctx=ctx,
        phi=phi,
        sqrt2phi=s,
        r_scale=r_scale,
        r_shift=2 - 2 * phi,
        P0=p0,
        Q=-phi,
        R=ctx.from_rational(Fraction(1, 2)) + ctx.i_unit * ((1 + 2 * phi) * phi / 2 * s),
        S=1 + phi,
    )


def golden_rescale(gc: GoldenContext, z: CycloNum) -> CycloNum:
    """The contraction r(x, y) = ((2*phi-3)x + 2 - 2*phi, (2*phi-3)y).

    As a complex map this is z -> (2*phi-3) z + (2 - 2*phi) since both
    coefficients are real.
    """
    if z.ctx is not gc.ctx:
        raise WrongContextError("golden_rescale needs a point of the golden case field")
    return gc.r_scale * z + gc.r_shift


def pentagon_centers(gc: GoldenContext, max_n: int) -> list[CycloNum]:
    """P_0 .. P_max_n with P_{n+1} = r(P_n)."""
    out = [gc.P0]
    for _ in range(max_n):
        out.append(golden_rescale(gc, out[-1]))
    return out


def pentagon_center_periods(
    gc: GoldenContext, max_n: int, budget: int
) -> list[tuple[int, CycloNum, Optional[int]]]:
    """(n, P_n, minimal period or None when the budget ran out)."""
    rows = []
    for n, p in enumerate(pentagon_centers(gc, max_n)):
        rec = minimal_period(p, budget)
        rows.append((n, p, rec.period))
    return rows


def q_orbit_returns(gc: GoldenContext, nsteps: int):
    """Critical-line returns of the orbit of Q within ``nsteps`` steps.

    Returns (index, exact value, phi-coordinates or None); the value's
    phi-coordinates are (a, b) with value = a + b*phi whenever the return is
    real with no irrational height part, which holds for every observed
    return.
    """
    _, _, touches = run_signs(gc.Q, nsteps, include_final=True)
    out = []
    for idx, val in touches:
        coords = golden_coords(val)
        pair = None
        if coords is not None and not coords[2] and not coords[3]:
            pair = (coords[0], coords[1])
        out.append((idx, val, pair))
    return out


# -- dodecagon case ---------------------------------------------------------------


@dataclass(frozen=True)
class HexagonContext:
    ctx: FieldContext
    sqrt3: CycloNum
    center: CycloNum
    hexagon: ConvexPolygon


@lru_cache(maxsize=1)
def hexagon_context() -> HexagonContext:
    ctx = make_field(11, 12)
    r3 = ctx.zeta_pow(1) + ctx.zeta_pow(1).conj()
    i = ctx.i_unit

    def pt(x_plain, x_r3, y_plain, y_r3):
        return (
            ctx.from_rational(x_plain)
            + r3 * x_r3
            + i * (ctx.from_rational(y_plain) + r3 * y_r3)
        )

    h = Fraction(1, 2)
    quarter = Fraction(1, 4)
    vertices = [
        pt(2, 0, 0, 0),
        pt(Fraction(3, 2), h, 0, 0),
        pt(Fraction(3, 2), h, -h, h),
        pt(Fraction(7, 4), quarter, quarter, quarter),
        pt(1, h, h, 0),
        pt(Fraction(5, 4), quarter, -quarter, quarter),
    ]
    center = r3 / 3 + Fraction(3, 2) + i * (r3 / 6)
    return HexagonContext(ctx, r3, center, make_polygon(vertices))


def hexagon_case(budget: int = 100) -> CheckReport:
    """End-to-end verification of the irregular hexagon tile.

    Checks: the center is 20-periodic, the extracted tile equals the known
    six-vertex hexagon, the hexagon fails exact regularity, the 20 images are
    pairwise distinct with an exact return, and no open image crosses the
    discontinuity line.
    """
    hc = hexagon_context()
    report = CheckReport(name="irregular hexagon tile")

    rec = minimal_period(hc.center, budget)
    report.record("center is 20-periodic", rec.period == 20, f"got {rec.period}")
    if rec.period != 20:
        return report

    tile = tile_from_seed(hc.center, budget)
    report.record(
        "tile polygon equals the known hexagon",
        tile.polygon.key() == hc.hexagon.key(),
        f"{tile.sides} sides",
    )
    report.record(
        "hexagon is not regular", not polygon_is_regular(tile.polygon), ""
    )

    images, block_map = tile_images(tile)
    keys = {img.key() for img in images}
    report.record(
        "20 images pairwise distinct", len(keys) == 20, f"{len(keys)} distinct"
    )
    back = apply_affine(tile.polygon, block_map)
    report.record("image 20 equals image 0", back.key() == tile.polygon.key(), "")

    crossings = []
    for n, img in enumerate(images):
        signs = {int(sign_of_real(v.imag())) for v in img.vertices}
        if 1 in signs and -1 in signs:
            crossings.append(n)
    report.record(
        "no open image meets the line", not crossings, f"crossing images: {crossings}"
    )
    return report
