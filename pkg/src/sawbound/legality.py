"""Move filtering: occupancy plus the planar pruning rules around A and B."""

from __future__ import annotations

from .geometry import DIR_VEC, DOWN, RIGHT, UP, turn_sign
from .state import Walk

# Relative moves from A in the canonical frame, in the fixed order used for
# children tables everywhere (the frame arrives at A moving Right, so Left
# would be a reversal).
MOVES = (UP, RIGHT, DOWN)
MOVE_INDEX = {UP: 0, RIGHT: 1, DOWN: 2}

_NEIGHBOR_STEPS = ((0, -1), (1, 0), (0, 1), (-1, 0))


def corner_sum(dirs: bytes, i: int, j: int) -> int:
    """Algebraic corner count over the walk portion from vertex i to vertex j."""
    return sum(turn_sign(dirs[t - 1], dirs[t]) for t in range(i + 1, j))


def planar_a_exclusions(walk: Walk, index: dict | None = None) -> set[int]:
    """Moves ruled out because the walk wraps around A.

    When a vertex right of A (or diagonally right) is occupied, the sign of
    the corner sum from that vertex to A tells on which side the enclosed
    pocket lies, and moves into the pocket can never close a legal loop.
    A zero corner sum excludes nothing (it cannot occur for the adjacent
    case, and for the diagonals nothing can be concluded).
    """
    points = walk.points
    m = len(points) - 1
    if index is None:
        index = {p: t for t, p in enumerate(points)}
    ax, ay = points[-1]
    dirs = walk.dirs
    excl: set[int] = set()

    i = index.get((ax + 1, ay))
    if i is not None:
        cs = corner_sum(dirs, i, m)
        if cs > 0:
            excl.add(DOWN)
        elif cs < 0:
            excl.add(UP)

    i = index.get((ax + 1, ay + 1))
    if i is not None:
        cs = corner_sum(dirs, i, m)
        if cs > 0:
            excl.update((RIGHT, DOWN))
        elif cs < 0:
            excl.add(UP)

    i = index.get((ax + 1, ay - 1))
    if i is not None:
        cs = corner_sum(dirs, i, m)
        if cs < 0:
            excl.update((RIGHT, UP))
        elif cs > 0:
            excl.add(DOWN)

    return excl


def b_escapes(walk: Walk, candidate=None) -> bool:
    """Whether B still has a free path to infinity.

    Flood fill from B's unoccupied neighbors over cells outside the walk
    (plus the optional candidate vertex). Escaping the obstacle bounding
    box is equivalent to escaping the box inflated by one, and to reaching
    infinity, because everything beyond the box is free.
    """
    obstacles = walk.vset
    if candidate is not None:
        obstacles = obstacles | {candidate}
    xs = [p[0] for p in obstacles]
    ys = [p[1] for p in obstacles]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)

    bx, by = walk.points[0]
    stack = []
    seen = set()
    for dx, dy in _NEIGHBOR_STEPS:
        p = (bx + dx, by + dy)
        if p not in obstacles:
            stack.append(p)
            seen.add(p)
    while stack:
        x, y = stack.pop()
        if x < lo_x or x > hi_x or y < lo_y or y > hi_y:
            return True
        for dx, dy in _NEIGHBOR_STEPS:
            p = (x + dx, y + dy)
            if p not in seen and p not in obstacles:
                seen.add(p)
                stack.append(p)
    return False


def allowed_moves(walk: Walk, planar_a: bool = True, planar_b: bool = True) -> list[int]:
    """The permitted relative moves from A, in (Up, Right, Down) order."""
    excl = planar_a_exclusions(walk) if planar_a else ()
    hx, hy = walk.points[-1]
    out = []
    for mv in MOVES:
        if mv in excl:
            continue
        dx, dy = DIR_VEC[mv]
        target = (hx + dx, hy + dy)
        if target in walk.vset:
            continue
        if planar_b and not b_escapes(walk, target):
            continue
        out.append(mv)
    return out
