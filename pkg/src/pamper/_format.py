"""Shared number formatting for human-facing output."""
import math


def sig4(x: float) -> str:
    """Four significant digits, trailing zeros kept (0.0526 -> '0.05260')."""
    return format(x, "#.4g")


def round_half_away(x: float, ndigits: int = 0) -> float:
    """Round with halves going away from zero (0.5 -> 1, -0.5 -> -1)."""
    scale = 10.0 ** ndigits
    scaled = abs(x) * scale
    rounded = math.floor(scaled + 0.5)
    return math.copysign(rounded / scale, x)


def pct1(x: float) -> str:
    """Percent with one decimal, half away from zero."""
    return f"{round_half_away(x, 1):.1f}"


def pct0(x: float) -> str:
    """Percent rounded to an integer, half away from zero."""
    return str(int(round_half_away(x, 0)))


def quantize_percents(values, ndigits: int = 1) -> list[float]:
    """Round a full percent breakdown so the rounded values sum to 100.

    Largest-remainder quantization: floor every value at the target
    precision, then hand the missing units to the entries with the biggest
    remainders (ties to earlier entries). Each result is its exact value
    rounded down or up at the last decimal, so it never strays a full unit,
    and the column total stays exactly 100. Inputs that do not sum to 100
    (within float dust) are rounded independently instead.
    """
    values = list(values)
    if not values:
        return []
    scale = 10 ** ndigits
    if abs(sum(values) - 100.0) > 1e-6:
        return [round_half_away(v, ndigits) for v in values]
    # percents are multiples of 100/total with total far below 1e9, so a
    # 1e-7 nudge only ever absorbs float dust, never a genuine remainder
    floors = [math.floor(v * scale + 1e-7) for v in values]
    leftover = 100 * scale - sum(floors)
    order = sorted(
        range(len(values)),
        key=lambda i: (-(values[i] * scale - floors[i]), i),
    )
    for i in order[:leftover]:
        floors[i] += 1
    return [f / scale for f in floors]
