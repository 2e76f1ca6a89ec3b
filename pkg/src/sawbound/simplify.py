"""Reduction of oversized walks to admissible states.

A move can push a walk past its size budget. Rather than dropping it, the
walk is replaced by a set of shorter walks that dominate every continuation
it could have had: an unconditional fallback that erases vertices from the
B end, plus pattern rewrites (bridges and loop shifts) that keep more of the
recent geometry. The budget itself depends on the walk through allowance
classes, so that walks which no rewrite can shorten get a little extra room.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

from .geometry import DIR_VEC, Point, l1_distance, linf_distance, perp, reverse, turn_sign
from .legality import corner_sum
from .state import Walk, canonical, dirs_of, is_saw

# Allowance classes; a walk of class c may hold up to k + 2*c vertices-plus-gap.
NORMAL, EXTENDED, DOUBLE = 0, 1, 2

# Replacement recursion is bounded: every rewrite shrinks size_loop by two
# and a stepped walk overshoots its budget by at most six.
MAX_EXPAND_DEPTH = 8

_NEIGHBOR_STEPS = ((0, -1), (1, 0), (0, 1), (-1, 0))


@dataclass(frozen=True)
class Options:
    """Build feature toggles. The bit layout is part of the graph file format."""

    line_like: bool = True
    lacking_simpl: bool = True
    small_bridges: bool = True
    large_bridges: bool = True
    small_loops: bool = True
    two_pass: bool = True
    staged_children: bool = False
    planar_a: bool = True
    planar_b: bool = True

    _BIT_FIELDS = (
        "line_like",
        "lacking_simpl",
        "small_bridges",
        "large_bridges",
        "small_loops",
        "two_pass",
        "staged_children",
        "planar_a",
        "planar_b",
    )

    def to_bits(self) -> int:
        mask = 0
        for bit, name in enumerate(self._BIT_FIELDS):
            if getattr(self, name):
                mask |= 1 << bit
        return mask

    @classmethod
    def from_bits(cls, mask: int) -> "Options":
        if mask >> len(cls._BIT_FIELDS):
            raise ValueError(f"unknown option bits in mask {mask:#x}")
        return cls(**{name: bool(mask >> bit & 1) for bit, name in enumerate(cls._BIT_FIELDS)})


def allowance_limit(cls: int, k: int) -> int:
    return k + 2 * cls


def line_like_class(walk: Walk, k: int) -> int:
    """Extra room for walks whose B side is nearly straight.

    The first k//2 steps must make at most two turns, all in the same
    rotational sense, so the oldest portion is a line or a staircase bend
    that cannot curl back on itself. Such walks get Extended room; if A is
    additionally at L1 distance 3 or more from B they get Double.
    """
    prefix = walk.dirs[: k // 2]
    turns = [turn_sign(a, b) for a, b in zip(prefix, prefix[1:]) if a != b]
    if len(turns) > 2 or len(set(turns)) > 1:
        return NORMAL
    if l1_distance(walk.points[-1], walk.points[0]) >= 3:
        return DOUBLE
    return EXTENDED


def monotone_clear_path(walk: Walk) -> bool:
    """Whether some axis-monotone lattice path joins A to B off the walk.

    Dynamic program over the A-B bounding rectangle; interior path vertices
    must avoid every walk vertex.
    """
    ax, ay = walk.points[-1]
    bx, by = walk.points[0]
    dx, dy = bx - ax, by - ay
    sx = 1 if dx >= 0 else -1
    sy = 1 if dy >= 0 else -1
    nx, ny = abs(dx), abs(dy)
    vset = walk.vset
    prev = [False] * (ny + 1)
    for i in range(nx + 1):
        cur = [False] * (ny + 1)
        for j in range(ny + 1):
            if i == 0 and j == 0:
                cur[0] = True
                continue
            if not ((i > 0 and prev[j]) or (j > 0 and cur[j - 1])):
                continue
            if (ax + sx * i, ay + sy * j) in vset and (i, j) != (nx, ny):
                continue
            cur[j] = True
        prev = cur
    return prev[ny]


def small_bridge_sites(dirs: bytes) -> list[int]:
    """Start steps i of U-shaped detours: perpendicular step then a reversal."""
    return [
        i
        for i in range(len(dirs) - 2)
        if perp(dirs[i], dirs[i + 1]) and dirs[i + 2] == reverse(dirs[i])
    ]


def small_bridges(walk: Walk) -> list[list[Point]]:
    """Rewrites dropping the two inner vertices of each U detour. Always SAWs."""
    pts = walk.points
    return [pts[: i + 1] + pts[i + 3 :] for i in small_bridge_sites(walk.dirs)]


def large_bridge_sites(walk: Walk) -> list[tuple[int, Point]]:
    """Start steps of S-shaped detours together with the free shortcut vertex."""
    dirs = walk.dirs
    pts = walk.points
    out = []
    for i in range(1, len(dirs) - 4):
        a = dirs[i]
        b = dirs[i + 1]
        if not perp(a, b) or dirs[i + 2] != b or dirs[i + 3] != reverse(a):
            continue
        vx, vy = pts[i]
        ox, oy = DIR_VEC[b]
        cross = (vx + ox, vy + oy)
        if cross not in walk.vset:
            out.append((i, cross))
    return out


def large_bridges(walk: Walk) -> list[list[Point]]:
    """Rewrites replacing the three inner vertices of an S detour by the shortcut.

    The shortcut vertex has three neighbors on the shortened walk, so any
    continuation that touches it is already trapped against the walk; the
    rewrite therefore loses no continuations. Results are always SAWs.
    """
    pts = walk.points
    return [pts[: i + 1] + [cross] + pts[i + 4 :] for i, cross in large_bridge_sites(walk)]


@dataclass
class LoopShift:
    """One loop-shift rewrite: the new walk, its fresh vertices, and the two
    near-touching portion endpoints whose gap is the only way into the pocket."""

    points: list[Point]
    extras: tuple[Point, ...]
    gap_a: Point
    gap_b: Point


def _clear_ray_count(walk: Walk) -> int:
    """Axis rays from A that meet no other walk vertex."""
    ax, ay = walk.points[-1]
    hit = [False, False, False, False]
    for x, y in walk.points[:-1]:
        if y == ay:
            if x > ax:
                hit[0] = True
            else:
                hit[1] = True
        elif x == ax:
            if y > ay:
                hit[2] = True
            else:
                hit[3] = True
    return 4 - sum(hit)


def small_loops(walk: Walk) -> list[LoopShift]:
    """Rewrites that squash a long near-loop by sliding one straight side inward.

    A portion of nine or more steps whose endpoints nearly touch encloses a
    region; a maximal straight side of three or more edges strictly inside the
    portion, turning into the region at both ends, can be shifted one unit
    inward, shortening the walk by two. Emissions are in scan order from B and
    deduplicated; anything that fails to be a self-avoiding walk is dropped.

    Walks with fewer than two clear axis rays from A never qualify.
    """
    if _clear_ray_count(walk) < 2:
        return []
    dirs = walk.dirs
    pts = walk.points
    m = len(dirs)
    runs = []
    s = 0
    for t in range(1, m + 1):
        if t == m or dirs[t] != dirs[s]:
            runs.append((s, t))
            s = t
    out: list[LoopShift] = []
    seen: set[tuple[Point, ...]] = set()
    for i in range(m - 8):
        pi = pts[i]
        for j in range(i + 9, m + 1):
            gap = linf_distance(pi, pts[j])
            if gap > 2 or (gap == 2 and j == m):
                continue
            cs = corner_sum(dirs, i, j)
            if cs == 0:
                continue
            orient = 1 if cs > 0 else -1
            for a, b in runs:
                if b - a < 3 or a < i + 1 or b > j - 1:
                    continue
                if turn_sign(dirs[a - 1], dirs[a]) != orient:
                    continue
                if turn_sign(dirs[b - 1], dirs[b]) != orient:
                    continue
                # shift toward the enclosed side: clockwise of the run
                # direction for a clockwise portion, counterclockwise else
                px, py = DIR_VEC[(dirs[a] - orient) % 4]
                cand = (
                    pts[:a]
                    + [(x + px, y + py) for x, y in pts[a + 1 : b]]
                    + pts[b + 1 :]
                )
                if not is_saw(cand):
                    continue
                key = tuple(cand)
                if key in seen:
                    continue
                seen.add(key)
                extras = tuple(p for p in cand[a : b - 1] if p not in walk.vset)
                out.append(LoopShift(cand, extras, pi, pts[j]))
    return out


def loop_shift_safe(walk: Walk, shift: LoopShift) -> bool:
    """Whether a loop shift provably forbids no continuation of `walk`.

    A continuation is lost only if it can touch a fresh vertex and still
    escape to infinity afterwards. Safe if the fresh vertices sit in a region
    sealed by the walk itself, or in a region sealed once a single free gate
    vertex near the portion gap is closed; entering through the gate means
    leaving would revisit it, and A must not open into the region directly.
    """
    extras = shift.extras
    if not extras:
        return True
    obstacles = walk.vset
    xs = [p[0] for p in obstacles] + [p[0] for p in extras]
    ys = [p[1] for p in obstacles] + [p[1] for p in extras]
    lo_x, hi_x = min(xs) - 1, max(xs) + 1
    lo_y, hi_y = min(ys) - 1, max(ys) + 1

    def sealed(gate: Point | None) -> set[Point] | None:
        seen = {extras[0]}
        stack = [extras[0]]
        while stack:
            x, y = stack.pop()
            for ox, oy in _NEIGHBOR_STEPS:
                p = (x + ox, y + oy)
                if p in seen or p in obstacles or p == gate:
                    continue
                if p[0] < lo_x or p[0] > hi_x or p[1] < lo_y or p[1] > hi_y:
                    return None
                seen.add(p)
                stack.append(p)
        return seen

    if sealed(None) is not None:
        return True

    gax, gay = shift.gap_a
    gates = []
    for ox in range(-2, 3):
        for oy in range(-2, 3):
            g = (gax + ox, gay + oy)
            if linf_distance(g, shift.gap_b) <= 2 and g not in obstacles and g not in extras:
                gates.append(g)
    ax, ay = walk.points[-1]
    for g in sorted(gates):
        comp = sealed(g)
        if comp is None:
            continue
        if any((ax + ox, ay + oy) in comp for ox, oy in _NEIGHBOR_STEPS):
            continue
        return True
    return False


def lacks_simplifications(walk: Walk) -> bool:
    """Whether no rewrite can relieve the walk, so it earns extra allowance.

    Requires: no bridge site starting in the B-side half of the walk, no loop
    shift at all, and some monotone staircase from A to B clear of the walk
    (without one, erasing from B frees no room near A for a long time).
    """
    dirs = walk.dirs
    half = (len(dirs) + 2) // 2
    if any(i < half for i in small_bridge_sites(dirs)):
        return False
    if any(i < half for i, _ in large_bridge_sites(walk)):
        return False
    if small_loops(walk):
        return False
    return monotone_clear_path(walk)


def allowance_class(walk: Walk, k: int, opts: Options) -> int:
    cls = NORMAL
    if opts.line_like:
        cls = line_like_class(walk, k)
    if cls == NORMAL and opts.lacking_simpl and lacks_simplifications(walk):
        cls = EXTENDED
    return cls


class ExpandContext:
    """Shared state for one build: membership, admission, and allowance cache.

    `member_allowance` maps a canonical key to the stored allowance class of a
    known state (None if unknown). `admit` is called exactly once per newly
    accepted state, in discovery order, with (walk, key, allowance).
    """

    def __init__(
        self,
        k: int,
        opts: Options,
        member_allowance: Callable[[bytes], int | None],
        admit: Callable[[Walk, bytes, int], None],
    ):
        if k % 2 or not 4 <= k <= 40:
            raise ValueError(f"k must be even and within [4, 40], got {k}")
        self.k = k
        self.opts = opts
        self.strip_opts = replace(opts, line_like=False, lacking_simpl=False)
        self.member_allowance = member_allowance
        self.admit = admit
        self._cache: dict[tuple[bytes, bool], int] = {}

    def allowance(self, walk: Walk, key: bytes, strip: bool) -> int:
        ck = (key, strip)
        cls = self._cache.get(ck)
        if cls is None:
            opts = self.strip_opts if strip else self.opts
            cls = allowance_class(walk, self.k, opts)
            self._cache[ck] = cls
        return cls

    def limit(self, walk: Walk, key: bytes, strip: bool) -> int:
        return allowance_limit(self.allowance(walk, key, strip), self.k)


def erase_oldest(walk: Walk, ctx: ExpandContext, strip: bool = False) -> tuple[Walk, bytes]:
    """Drop vertices from the B end until the remainder is admissible.

    A remainder is admissible once it is a known state whose stored allowance
    covers it, or once it fits the base budget k. Oversized remainders that
    merely qualify for an allowance class do not stop the erasure; they enter
    the graph only by being stepped into, after which later erasures can stop
    on them as members. Terminates because a two-vertex walk has size_loop 2,
    below any limit.
    """
    dirs = walk.dirs
    pts = walk.points
    while True:
        if len(pts) <= 2:
            raise ValueError("cannot erase the oldest vertex of a two-vertex walk")
        dirs = dirs[1:]
        pts = pts[1:]
        w = Walk(dirs, pts)
        key = canonical(dirs)
        sl = w.size_loop()
        stored = ctx.member_allowance(key)
        if stored is not None and sl <= allowance_limit(0 if strip else stored, ctx.k):
            return w, key
        if sl <= ctx.k:
            return w, key


def _expand(walk: Walk, ctx: ExpandContext, strip: bool, depth: int, out: list) -> None:
    key = canonical(walk.dirs)
    stored = ctx.member_allowance(key)
    if stored is not None:
        # A stripped expansion treats every allowance as Normal, so an
        # oversized member is still reduced rather than accepted.
        if walk.size_loop() <= allowance_limit(0 if strip else stored, ctx.k):
            out.append((key, walk))
            return
    elif walk.size_loop() <= ctx.limit(walk, key, strip):
        ctx.admit(walk, key, ctx.allowance(walk, key, False))
        out.append((key, walk))
        return
    if depth >= MAX_EXPAND_DEPTH:
        raise RuntimeError("walk replacement recursion exceeded its depth bound")

    ew, ekey = erase_oldest(walk, ctx, strip)
    if ctx.member_allowance(ekey) is None:
        ctx.admit(ew, ekey, ctx.allowance(ew, ekey, False))
    out.append((ekey, ew))

    opts = ctx.opts
    if opts.small_bridges:
        for pts in small_bridges(walk):
            _expand(Walk(dirs_of(pts), pts), ctx, strip, depth + 1, out)
    if opts.large_bridges:
        for pts in large_bridges(walk):
            _expand(Walk(dirs_of(pts), pts), ctx, strip, depth + 1, out)
    if opts.small_loops:
        for shift in small_loops(walk):
            if loop_shift_safe(walk, shift):
                _expand(Walk(dirs_of(shift.points), shift.points), ctx, strip, depth + 1, out)


def candidate_children(walk: Walk, move: int, ctx: ExpandContext, dedupe: bool = True) -> list[tuple[bytes, Walk]]:
    """All replacement states for one move of `walk`, in emission order.

    Each element pairs the canonical key with a representative walk in the
    stepped walk's frame. An admissible stepped walk is its own single child.
    With staged children enabled the expansion runs twice, first with the
    allowance rules stripped, and the emissions are concatenated.
    """
    stepped = walk.stepped(move)
    out: list[tuple[bytes, Walk]] = []
    if ctx.opts.staged_children:
        _expand(stepped, ctx, True, 0, out)
    _expand(stepped, ctx, False, 0, out)
    if not dedupe:
        return out
    seen: set[bytes] = set()
    uniq = []
    for key, w in out:
        if key not in seen:
            seen.add(key)
            uniq.append((key, w))
    return uniq
