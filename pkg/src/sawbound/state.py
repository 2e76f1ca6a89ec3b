"""Walk suffix states: canonical frame, size-loop arithmetic, stepping.

A walk is an ordered vertex list from the oldest vertex B to the newest
vertex A. States are stored as direction-code byte strings read from B;
the canonical frame puts A at the origin with the final step pointing
Right, and of the two reflection images keeps the lexicographically
smaller byte string (which forces the first vertical step downward).
"""

from __future__ import annotations

from .geometry import (
    DIR_VEC,
    DIR_CHAR,
    CHAR_DIR,
    RIGHT,
    REFLECT_TABLE,
    ROT_SUB,
    Point,
)


def dirs_of(points: list[Point]) -> bytes:
    out = bytearray()
    px, py = points[0]
    for qx, qy in points[1:]:
        dx, dy = qx - px, qy - py
        out.append(DIR_VEC.index((dx, dy)))
        px, py = qx, qy
    return bytes(out)


def points_of(dirs: bytes, head: Point = (0, 0)) -> list[Point]:
    """Vertices from B to A with A anchored at `head`."""
    x, y = head
    rev = [(x, y)]
    for c in reversed(dirs):
        dx, dy = DIR_VEC[c]
        x, y = x - dx, y - dy
        rev.append((x, y))
    rev.reverse()
    return rev


def tail_offset(dirs: bytes) -> Point:
    """Position of B relative to A."""
    x = y = 0
    for c in dirs:
        dx, dy = DIR_VEC[c]
        x -= dx
        y -= dy
    return (x, y)


def size_loop(dirs: bytes) -> int:
    """Vertex count plus the L1 distance from A back to B, minus one."""
    bx, by = tail_offset(dirs)
    return len(dirs) + abs(bx) + abs(by)


def size_loop_points(points: list[Point]) -> int:
    ax, ay = points[-1]
    bx, by = points[0]
    return len(points) - 1 + abs(ax - bx) + abs(ay - by)


def is_saw(points: list[Point]) -> bool:
    if len(set(points)) != len(points):
        return False
    for p, q in zip(points, points[1:]):
        if abs(p[0] - q[0]) + abs(p[1] - q[1]) != 1:
            return False
    return True


def canonical(dirs: bytes) -> bytes:
    """Normal form under the rotation fixing the last step and reflection."""
    r = (dirs[-1] - RIGHT) % 4
    t = dirs.translate(ROT_SUB[r]) if r else dirs
    u = t.translate(REFLECT_TABLE)
    return t if t <= u else u


def canonical_flagged(dirs: bytes) -> tuple[bytes, bool]:
    """Canonical form plus whether the reflected image was the one kept."""
    r = (dirs[-1] - RIGHT) % 4
    t = dirs.translate(ROT_SUB[r]) if r else dirs
    u = t.translate(REFLECT_TABLE)
    if u < t:
        return u, True
    return t, False


def from_text(text: str) -> bytes:
    """Parse a direction string such as "RRRRRU" (read from B)."""
    try:
        return bytes(CHAR_DIR[ch] for ch in text.strip().upper())
    except KeyError as exc:
        raise ValueError(f"bad direction character: {exc.args[0]!r}") from None


def to_text(dirs: bytes) -> str:
    """Canonical direction string from B."""
    return "".join(DIR_CHAR[c] for c in canonical(dirs))


class Walk:
    """A concrete walk with cached geometry, anchored with A at the origin."""

    __slots__ = ("dirs", "points", "vset")

    def __init__(self, dirs: bytes, points: list[Point] | None = None):
        self.dirs = dirs
        self.points = points if points is not None else points_of(dirs)
        self.vset = set(self.points)

    @property
    def head(self) -> Point:
        return self.points[-1]

    @property
    def tail(self) -> Point:
        return self.points[0]

    def size_loop(self) -> int:
        return size_loop_points(self.points)

    def occupied(self, p: Point) -> bool:
        return p in self.vset

    def stepped(self, move: int) -> Walk:
        """Walk extended by one absolute step from A. No size check here."""
        hx, hy = self.points[-1]
        dx, dy = DIR_VEC[move]
        target = (hx + dx, hy + dy)
        if target in self.vset:
            raise ValueError("blocked: target vertex is occupied")
        return Walk(self.dirs + bytes((move,)), self.points + [target])


def line_walk(edges: int) -> Walk:
    """The straight walk of `edges` Right steps ending at the origin."""
    return Walk(bytes((RIGHT,)) * edges)
