"""Step-by-step simulators for three Euclidean algorithm variants.

* ``sub``: subtract the smaller coordinate from the larger one (ties reduce
  the second coordinate, so (1, 1) -> (1, 0)).
* ``div``: reduce the larger coordinate modulo the smaller one.
* ``excess``: by-excess division, (a, b) -> (b, ceil(a/b)*b - a).

Each run stops as soon as one coordinate is zero; the other one is the gcd.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import BothZero

DEFAULT_STATE_CAP = 10_000


class Variant(str, Enum):
    SUB = "sub"
    DIV = "div"
    EXCESS = "excess"


@dataclass
class StepTrace:
    variant: Variant
    states: list[tuple[int, int]] = field(default_factory=list)
    steps: int = 0
    gcd: int = 0
    truncated: bool = False


def _step(variant: Variant, a: int, b: int) -> tuple[int, int]:
    if variant is Variant.SUB:
        return (a - b, b) if a > b else (a, b - a)
    if variant is Variant.DIV:
        return (a % b, b) if a >= b else (a, b % a)
    return b, -(-a // b) * b - a


def _jump_sub(a: int, b: int) -> tuple[int, int, int]:
    """Apply a whole run of identical subtractions; returns (a, b, count)."""
    if a > b:
        k = (a - 1) // b  # keeps a - k*b >= 1, ties are handled by the other branch
        return a - k * b, b, k
    k = b // a
    return a, b - k * a, k


def run_euclid(a: int, b: int, variant: Variant | str = Variant.DIV, *,
               state_cap: int = DEFAULT_STATE_CAP) -> StepTrace:
    """Run one variant on (a, b), recording at most ``state_cap`` states.

    Steps beyond the cap are still counted exactly; ``truncated`` flags that
    the state list is incomplete.
    """
    variant = Variant(variant)
    if a < 0 or b < 0:
        raise ValueError(f"inputs must be non-negative, got ({a}, {b})")
    if a == 0 and b == 0:
        raise BothZero("Euclid on (0, 0) has no gcd")
    trace = StepTrace(variant, [(a, b)])
    while a and b:
        if variant is Variant.SUB and len(trace.states) >= state_cap:
            a, b, k = _jump_sub(a, b)
            trace.steps += k
            trace.truncated = True
            continue
        a, b = _step(variant, a, b)
        trace.steps += 1
        if len(trace.states) < state_cap:
            trace.states.append((a, b))
        else:
            trace.truncated = True
    trace.gcd = a or b
    return trace
