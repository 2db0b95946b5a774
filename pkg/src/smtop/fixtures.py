"""Bundled example spaces and the bundled marked-set écart.

These are the working examples every golden test runs against: the two-point
coin-toss space, the six-point dice space with the line metric, a ramp-kind
space on an initial window of the positive integers, and the écart over the
positive integers with marked subset {1, 2, 3}.
"""

from __future__ import annotations

from .distfn import step
from .neighborhood import DEFAULT_WINDOW, MarkedNatEcart, NaturalsPoset
from .smspace import SMSpace, build, from_metric

#: value table on the marked subset {1,2,3} (rows = first argument)
ECART_TABLE = {
    (1, 1): 0, (1, 2): 2, (1, 3): 3,
    (2, 1): 4, (2, 2): 0, (2, 3): 6,
    (3, 1): 1, (3, 2): 2, (3, 3): 0,
}


def coin_space() -> SMSpace:
    """Two outcomes 0/1, distance distribution step(1) between them."""
    return build(["0", "1"], {("0", "1"): step(1)})


def dice_space() -> SMSpace:
    """Outcomes 1..6 with the line metric |p - q|, step-kind distributions."""
    pts = [str(k) for k in range(1, 7)]
    return from_metric(pts, lambda p, q: abs(int(p) - int(q)), kind="step")


def ramp_space(window: int = DEFAULT_WINDOW) -> SMSpace:
    """Points 1..window with the line metric, ramp-kind distributions."""
    pts = [str(k) for k in range(1, window + 1)]
    return from_metric(pts, lambda p, q: abs(int(p) - int(q)), kind="ramp")


def example_ecart() -> MarkedNatEcart:
    """Écart on the positive integers: 0 between unmarked points, 1 between a
    marked and an unmarked point, explicit table on the marked subset."""
    return MarkedNatEcart(
        marked=frozenset({1, 2, 3}),
        table=tuple(sorted(ECART_TABLE.items())),
        mixed_default=1,
        outside_default=0,
        poset=NaturalsPoset(),
    )
