"""Named measures used by the CLI, the tests and the acceptance run."""
from __future__ import annotations

from .measures import (CoshExpDensity, ExponentialDensity, ExpPowerDensity, LogDensity,
                       MeasureSpec, OscillatoryDensity, PointMass, PowerDensity,
                       ShiftedPowerDensity, TabulatedDensity, combine, zero_measure)


def lebesgue() -> MeasureSpec:
    return MeasureSpec.of(PowerDensity(0.0), name="leb")


def exponential(a: float) -> MeasureSpec:
    return MeasureSpec.of(ExponentialDensity(a), name=f"exp_a{a:g}")


def point_mass(c: float, w: float = 1.0) -> MeasureSpec:
    return MeasureSpec.of(PointMass(c, w), name=f"delta_{c:g}")


def power(p: float) -> MeasureSpec:
    return MeasureSpec.of(PowerDensity(p), name=f"power_{p:g}")


def lebesgue_head_exp_tail(a: float = 1.0) -> MeasureSpec:
    """Lebesgue on ``[0, 1)`` followed by ``e^{-at} dt`` on ``[1, inf)``."""
    return MeasureSpec.of(TabulatedDensity(((0.0, 1.0), (1.0, 1.0)), 1.0, a),
                          name=f"leb_head_exp_a{a:g}")


def builtin() -> dict:
    specs = [
        zero_measure(),
        lebesgue(),
        exponential(0.1), exponential(1.0), exponential(10.0),
        point_mass(0.5), point_mass(1.0),
        power(1.0), power(5.0), power(-0.5),
        MeasureSpec.of(ShiftedPowerDensity(1.0, -1), name="shifted_inv_1"),
        MeasureSpec.of(ShiftedPowerDensity(2.0, 1), name="shifted_pos_2"),
        MeasureSpec.of(CoshExpDensity(2.0, 1.0), name="cosh_exp_2_1"),
        MeasureSpec.of(LogDensity(), name="log1p"),
        MeasureSpec.of(ExpPowerDensity(1.0, 0.5), name="exp_power_1_0.5"),
        MeasureSpec.of(OscillatoryDensity(1.0, "sin"), name="osc_sin_1"),
        MeasureSpec.of(OscillatoryDensity(1.0, "cos"), name="osc_cos_1"),
        lebesgue_head_exp_tail(1.0),
        MeasureSpec(((1.0, PowerDensity(0.0)), (1.0, PowerDensity(0.5))), name="one_plus_sqrt"),
        MeasureSpec(combine(exponential(1.0), exponential(3.0), 0.5).terms, name="convex_exp_1_3"),
    ]
    out = {}
    for s in specs:
        out[s.name or "zero"] = s
    return out
