"""Named basic sets used by the tests and the command line."""
from __future__ import annotations

from .patterns import BasicSet, Pattern2x2

GM_H2 = [
    [1, 1, 1, 0],
    [1, 0, 1, 0],
    [1, 1, 0, 0],
    [0, 0, 0, 0],
]

HARD_HEXAGON_H2 = [
    [1, 1, 1, 0],
    [1, 0, 1, 0],
    [1, 0, 0, 0],
    [0, 0, 0, 0],
]

SGM_H2 = [
    [1, 1, 1, 0],
    [1, 0, 0, 0],
    [1, 0, 0, 0],
    [0, 0, 0, 0],
]

REDUCIBLE_V2 = [
    [1, 0, 0, 1],
    [1, 1, 1, 1],
    [1, 1, 1, 1],
    [1, 0, 0, 1],
]

RANDOM_SEEDS = tuple(range(20))


def golden_mean() -> BasicSet:
    return BasicSet.from_h2(GM_H2)


def hard_hexagon() -> BasicSet:
    return BasicSet.from_h2(HARD_HEXAGON_H2)


def simplified_golden_mean() -> BasicSet:
    return BasicSet.from_h2(SGM_H2)


def reducible() -> BasicSet:
    return BasicSet.from_v2(REDUCIBLE_V2)


def checkerboard() -> BasicSet:
    """Two patterns; every admissible row alternates, so each ``T_m`` acts as
    a permutation on its support."""
    return BasicSet(2, [Pattern2x2(0, 1, 1, 0), Pattern2x2(1, 0, 0, 1)])


def parity_analogue() -> BasicSet:
    """Three symbols: columns alternate between free columns over {0, 1} and
    columns of the rigid symbol 2."""
    pats = []
    for a in range(2):
        for b in range(2):
            pats.append(Pattern2x2(a, 2, b, 2))
            pats.append(Pattern2x2(2, a, 2, b))
    return BasicSet(3, pats)


def random_set(seed: int) -> BasicSet:
    """Seeds 0-9 give r = 2, seeds 10-19 give r = 3; density 1/2."""
    return BasicSet.random(2 if seed < 10 else 3, 0.5, seed)


NAMED = {
    "gm": golden_mean,
    "hh": hard_hexagon,
    "sgm": simplified_golden_mean,
    "reducible": reducible,
    "full2": lambda: BasicSet.full(2),
    "empty2": lambda: BasicSet.empty(2),
    "checkerboard": checkerboard,
    "parity": parity_analogue,
}


def all_fixtures() -> dict[str, BasicSet]:
    """Every named set except the two special-purpose ones, plus the 20 random sets."""
    out = {name: make() for name, make in NAMED.items() if name not in ("checkerboard", "parity")}
    for s in RANDOM_SEEDS:
        out[f"random{s}"] = random_set(s)
    return out
