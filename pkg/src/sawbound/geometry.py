"""Integer lattice primitives: directions, metrics, turns, rigid transforms."""

from __future__ import annotations

from dataclasses import dataclass

Point = tuple[int, int]

# Direction codes, counterclockwise from Down. With this ordering a left
# (counterclockwise) turn is +1 mod 4 and a right (clockwise) turn is -1.
DOWN, RIGHT, UP, LEFT = 0, 1, 2, 3

DIR_VEC: tuple[Point, ...] = ((0, -1), (1, 0), (0, 1), (-1, 0))
DIR_CHAR = "DRUL"
CHAR_DIR = {c: i for i, c in enumerate(DIR_CHAR)}

# Translation tables for bytes of direction codes, used by canonicalization.
# ROT_SUB[r] rotates every code clockwise by r quarter turns; REFLECT_TABLE
# mirrors across the horizontal axis (swaps Up/Down, fixes Right/Left).
ROT_SUB = tuple(
    bytes((c - r) % 4 if c < 4 else c for c in range(256)) for r in range(4)
)
REFLECT_TABLE = bytes((2 - c) % 4 if c < 4 else c for c in range(256))


def reverse(c: int) -> int:
    return (c + 2) % 4


def perp(a: int, b: int) -> bool:
    return (a - b) % 2 == 1


def step_point(p: Point, c: int) -> Point:
    v = DIR_VEC[c]
    return (p[0] + v[0], p[1] + v[1])


def l1_distance(p: Point, q: Point) -> int:
    return abs(p[0] - q[0]) + abs(p[1] - q[1])


def linf_distance(p: Point, q: Point) -> int:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def turn_sign(incoming: int, outgoing: int) -> int:
    """Sign of the turn between consecutive steps.

    +1 for a right (clockwise) turn, -1 for a left turn, 0 for straight.
    Walking around a simple clockwise loop the signs add up to +4.
    """
    d = (outgoing - incoming) % 4
    if d == 0:
        return 0
    if d == 1:
        return -1
    if d == 3:
        return 1
    raise ValueError("reversal between consecutive steps is not a turn")


@dataclass(frozen=True)
class Transform:
    """Rotation by quarter turns followed by an optional horizontal reflection."""

    rotation: int
    reflect: bool

    def apply(self, p: Point) -> Point:
        x, y = p
        for _ in range(self.rotation % 4):
            x, y = -y, x
        if self.reflect:
            y = -y
        return (x, y)

    def apply_dir(self, c: int) -> int:
        c = (c + self.rotation) % 4
        if self.reflect:
            c = (2 - c) % 4
        return c

    def compose(self, other: Transform) -> Transform:
        """Transform equal to applying `other` first, then self."""
        if other.reflect:
            rot = (other.rotation - self.rotation) % 4
        else:
            rot = (self.rotation + other.rotation) % 4
        return Transform(rot, self.reflect ^ other.reflect)

    def invert(self) -> Transform:
        if self.reflect:
            return Transform(self.rotation % 4, True)
        return Transform((-self.rotation) % 4, False)


IDENTITY = Transform(0, False)
ALL_TRANSFORMS = tuple(
    Transform(r, f) for f in (False, True) for r in range(4)
)
