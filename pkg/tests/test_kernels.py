"""The compiled and pure orbit kernels must be observationally identical."""

import random
from fractions import Fraction

import pytest

from pwrot import stepper
from pwrot.cyclo import golden_elements, make_field
from pwrot.dynamics import minimal_period, orbit, step
from pwrot.stepper import decompose, run_period, run_signs


@pytest.fixture(scope="module")
def ctx():
    return make_field(4, 5)


def test_decompose_round_trip(ctx):
    z = ctx.point(Fraction(3, 10), Fraction(-7, 6))
    v, denom = decompose(z)
    assert denom == 30
    assert ctx.num([Fraction(x, denom) for x in v]) == z


def test_pure_kernel_matches_field_arithmetic(ctx):
    # the integer-lattice step must equal the CycloNum step, value for value
    plan = stepper._plan(ctx)
    z = ctx.point(Fraction(1, 3), Fraction(2, 7))
    v, denom = decompose(z)
    kern = plan.pure_kernel(denom)
    values = orbit(z, 25)
    cur = list(v)
    for val in values[1:]:
        _, signs, _, cur = kern.sign_walk(cur, 1)
        assert ctx.num([Fraction(x, denom) for x in cur]) == val


@pytest.mark.skipif(not stepper.HAVE_COMPILED, reason="compiled kernel not built")
class TestCompiledAgreesWithPure:
    def _compare(self, ctx, z, budget):
        plan = stepper._plan(ctx)
        v, denom = decompose(z)
        pure = plan.pure_kernel(denom)
        comp = plan.compiled_kernel(denom)
        rp = pure.period_search(list(v), list(v), budget)
        rc = comp.period_search(list(v), list(v), budget)
        assert rp == rc
        sp = pure.sign_walk(list(v), min(budget, 300), include_final=True)
        sc = comp.sign_walk(list(v), min(budget, 300), include_final=True)
        assert sp == sc

    def test_fixed_point(self, ctx):
        phi, s, _ = golden_elements(ctx)
        p0 = ctx.from_rational(Fraction(1, 2)) + ctx.i_unit * ((phi + 2) * s / 10)
        self._compare(ctx, p0, 10)

    def test_seven_cycle(self, ctx):
        phi, s, _ = golden_elements(ctx)
        p0 = ctx.from_rational(Fraction(1, 2)) + ctx.i_unit * ((phi + 2) * s / 10)
        p1 = (2 * phi - 3) * p0 + (2 - 2 * phi)
        self._compare(ctx, p1, 100)

    def test_line_walker(self, ctx):
        phi, _, _ = golden_elements(ctx)
        self._compare(ctx, -phi, 240)

    def test_random_points(self, ctx):
        rng = random.Random(77)
        for _ in range(8):
            z = ctx.point(
                Fraction(rng.randint(-20, 20), rng.randint(1, 8)),
                Fraction(rng.randint(-20, 20), rng.randint(1, 8)),
            )
            self._compare(ctx, z, 400)

    def test_other_fields(self):
        for p, q in [(11, 12), (3, 7)]:
            c = make_field(p, q)
            self._compare(c, c.point(Fraction(1, 3), Fraction(1, 5)), 300)


@pytest.mark.skipif(not stepper.HAVE_COMPILED, reason="compiled kernel not built")
def test_overflow_hands_off_to_pure(ctx, monkeypatch):
    # shrink the guard so the compiled walk overflows mid-orbit, then check
    # the resumed result still matches an all-pure run
    phi, _, _ = golden_elements(ctx)
    q0 = -phi
    plan = stepper._plan(ctx)
    monkeypatch.setattr(plan, "int64_threshold", lambda denom: 25)
    rec_mixed = run_period(q0, 240)
    monkeypatch.setattr(stepper, "_compiled_enabled", lambda: False)
    rec_pure = run_period(q0, 240)
    assert rec_mixed.period == rec_pure.period
    assert [i for i, _ in rec_mixed.iterates_on_line] == [
        i for i, _ in rec_pure.iterates_on_line
    ]
    mixed_signs = run_signs(q0, 240, include_final=True)
    assert mixed_signs[0] == run_signs(q0, 240, include_final=True)[0]


@pytest.mark.skipif(not stepper.HAVE_COMPILED, reason="compiled kernel not built")
def test_huge_denominator_uses_pure_path(ctx):
    z = ctx.point(Fraction(1, 2 ** 61), Fraction(1, 3))
    rec = minimal_period(z, 50)  # must not crash or misbehave
    assert rec.budget_used <= 50


def test_env_override_forces_pure(ctx, monkeypatch):
    monkeypatch.setenv("PWROT_PURE", "1")
    assert stepper.active_impl() == "pure"
    phi, s, _ = golden_elements(ctx)
    p0 = ctx.from_rational(Fraction(1, 2)) + ctx.i_unit * ((phi + 2) * s / 10)
    assert minimal_period(p0, 5).period == 1
