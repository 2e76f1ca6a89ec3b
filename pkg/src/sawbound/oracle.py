"""Reference counters and exhaustive cross-checks.

The counters enumerate walks directly from the lattice definitions, without
touching the automaton code paths they are meant to validate. The two
self-avoiding counters deliberately use different traversals and different
occupancy tests so a shared bug cannot hide.
"""

from __future__ import annotations

from bisect import bisect_left

import numpy as np

from .automaton import GraphClosureError, StateGraph, graph_ctx
from .geometry import DIR_VEC, DOWN, REFLECT_TABLE, RIGHT, UP, reverse
from .legality import MOVE_INDEX, allowed_moves
from .simplify import candidate_children
from .spectral import choice_matrix, first_choice
from .state import Walk, canonical_flagged


def count_saw(n: int) -> int:
    """Number of n-step self-avoiding walks from the origin, by depth-first
    search over a hashed occupancy set."""
    if not 1 <= n <= 18:
        raise ValueError("n must be within [1, 18]")
    visited = {(0, 0)}

    def rec(x: int, y: int, left: int) -> int:
        if left == 0:
            return 1
        total = 0
        for dx, dy in DIR_VEC:
            p = (x + dx, y + dy)
            if p not in visited:
                visited.add(p)
                total += rec(x + dx, y + dy, left - 1)
                visited.remove(p)
        return total

    return rec(0, 0, n)


def count_saw_frontier(n: int) -> int:
    """The same count, grown breadth-first as direction strings with sorted
    point lists probed by bisection."""
    if not 1 <= n <= 18:
        raise ValueError("n must be within [1, 18]")
    frontier = [bytes((d,)) for d in range(4)]
    for _ in range(n - 1):
        nxt = []
        for dirs in frontier:
            pts = [(0, 0)]
            x = y = 0
            for c in dirs:
                dx, dy = DIR_VEC[c]
                x += dx
                y += dy
                pts.append((x, y))
            pts.sort()
            for d in range(4):
                if d == reverse(dirs[-1]):
                    continue
                dx, dy = DIR_VEC[d]
                p = (x + dx, y + dy)
                i = bisect_left(pts, p)
                if i < len(pts) and pts[i] == p:
                    continue
                nxt.append(dirs + bytes((d,)))
        frontier = nxt
    return len(frontier)


def count_canonical(n: int) -> int:
    """Walks counted once per symmetry class: first step Right, first vertical
    step (if any) Down."""
    if not 1 <= n <= 18:
        raise ValueError("n must be within [1, 18]")
    visited = {(0, 0), (1, 0)}

    def rec(x: int, y: int, left: int, vertical_seen: bool) -> int:
        if left == 0:
            return 1
        total = 0
        for d, (dx, dy) in enumerate(DIR_VEC):
            if d == UP and not vertical_seen:
                continue
            p = (x + dx, y + dy)
            if p in visited:
                continue
            visited.add(p)
            total += rec(x + dx, y + dy, left - 1, vertical_seen or d in (UP, DOWN))
            visited.remove(p)
        return total

    return rec(1, 0, n - 1, False)


def count_loop_free(n: int, k: int) -> int:
    """Walks allowed to revisit a vertex when the loop closed is longer than k,
    same symmetry convention as count_canonical. Coincides with
    count_canonical whenever k >= n."""
    if not 1 <= n <= 16:
        raise ValueError("n must be within [1, 16]")
    if k % 2 or not 2 <= k <= 12:
        raise ValueError("k must be even and within [2, 12]")
    last = {(0, 0): 0, (1, 0): 1}

    def rec(x: int, y: int, t: int, vertical_seen: bool) -> int:
        if t == n:
            return 1
        total = 0
        for d, (dx, dy) in enumerate(DIR_VEC):
            if d == UP and not vertical_seen:
                continue
            p = (x + dx, y + dy)
            s = last.get(p)
            if s is not None and t + 1 - s <= k:
                continue
            last[p] = t + 1
            total += rec(x + dx, y + dy, t + 1, vertical_seen or d in (UP, DOWN))
            if s is None:
                del last[p]
            else:
                last[p] = s
        return total

    return rec(1, 0, 1, False)


def count_line_extensions(n: int, k: int) -> int:
    """Loop-free n-step extensions of the straight k/2-edge walk, counted raw
    with no symmetry quotient. Mirrors unroll on an erasure-only graph."""
    if n < 0 or n > 16:
        raise ValueError("n must be within [0, 16]")
    if k % 2 or not 4 <= k <= 12:
        raise ValueError("k must be even and within [4, 12]")
    half = k // 2
    last = {(i - half, 0): i for i in range(half + 1)}

    def rec(x: int, y: int, t: int) -> int:
        if t == half + n:
            return 1
        total = 0
        for d, (dx, dy) in enumerate(DIR_VEC):
            p = (x + dx, y + dy)
            s = last.get(p)
            if s is not None and t + 1 - s <= k:
                continue
            last[p] = t + 1
            total += rec(x + dx, y + dy, t + 1)
            if s is None:
                del last[p]
            else:
                last[p] = s
        return total

    return rec(0, 0, half)


def count_line_continuations(k: int, n: int) -> int:
    """Self-avoiding continuations of the k/2 line of every length up to n."""
    half = k // 2
    vset = {(i - half, 0) for i in range(half + 1)}

    def rec(x: int, y: int, lastd: int, depth: int) -> int:
        if depth == n:
            return 0
        total = 0
        for d, (dx, dy) in enumerate(DIR_VEC):
            if d == reverse(lastd):
                continue
            p = (x + dx, y + dy)
            if p in vset:
                continue
            vset.add(p)
            total += 1 + rec(x + dx, y + dy, d, depth + 1)
            vset.remove(p)
        return total

    return rec(0, 0, RIGHT, 0)


def unroll(g: StateGraph, n: int) -> int:
    """Number of length-n paths from the root under first choices, children
    counted with multiplicity."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    m = choice_matrix(g, first_choice(g), dtype=np.int64)
    u = np.ones(len(g), dtype=np.int64)
    for _ in range(n):
        u = m @ u
    return int(u[g.root])


def never_undercount_check(g: StateGraph, n_max: int) -> tuple[int, list[bytes]]:
    """Follow every self-avoiding continuation of the root line, tracking the
    set of (state, mirrored) descriptions the automaton keeps alive for it.

    A continuation that empties the set would be missed by the count, which
    would break the upper bound; it is returned as a witness direction string.
    Also cross-checks every recomputed child against the stored child lists.
    Returns (continuations followed, witnesses).
    """
    index = g.key_index()
    ctx = graph_ctx(g)
    memo: dict[tuple[int, int], list[tuple[int, bool, bool]]] = {}

    def transitions(sid: int, rel: int) -> list[tuple[int, bool, bool]]:
        out = memo.get((sid, rel))
        if out is None:
            out = []
            w = g.walk(sid)
            if rel in allowed_moves(w, g.options.planar_a, g.options.planar_b):
                stored = set(g.children[sid][MOVE_INDEX[rel]])
                for key, cw in candidate_children(w, rel, ctx, dedupe=False):
                    ckey, phi = canonical_flagged(cw.dirs)
                    sid2 = index[ckey]
                    if sid2 not in stored:
                        raise GraphClosureError(
                            f"recomputed child {sid2} of state {sid} move {rel} "
                            "is missing from the stored children"
                        )
                    symmetric = ckey.translate(REFLECT_TABLE) == ckey
                    out.append((sid2, phi, symmetric))
            memo[(sid, rel)] = out
        return out

    half = g.k // 2
    vset = {(i - half, 0) for i in range(half + 1)}
    witnesses: list[bytes] = []
    prefix = bytearray()
    checked = 0

    def rec(x: int, y: int, lastd: int, pairs: set, depth: int) -> None:
        nonlocal checked
        if depth == n_max:
            return
        for d, (dx, dy) in enumerate(DIR_VEC):
            if d == reverse(lastd):
                continue
            p = (x + dx, y + dy)
            if p in vset:
                continue
            nxt = set()
            for sid, flip in pairs:
                rel = (2 - (d - lastd + 1)) % 4 if flip else (d - lastd + 1) % 4
                for sid2, phi, symmetric in transitions(sid, rel):
                    nxt.add((sid2, flip ^ phi))
                    if symmetric:
                        nxt.add((sid2, not (flip ^ phi)))
            checked += 1
            prefix.append(d)
            if not nxt:
                witnesses.append(bytes(prefix))
            else:
                vset.add(p)
                rec(x + dx, y + dy, d, nxt, depth + 1)
                vset.remove(p)
            prefix.pop()

    rec(0, 0, RIGHT, {(g.root, False)}, 0)
    return checked, witnesses


def _escaping_touch(stepped: Walk, extras: set, limit: int) -> bool:
    """Whether some continuation of `stepped` touches an extra vertex and
    still escapes the local bounding box afterwards."""
    obstacles = stepped.vset
    xs = [p[0] for p in obstacles] + [p[0] for p in extras]
    ys = [p[1] for p in obstacles] + [p[1] for p in extras]
    lo_x, hi_x = min(xs) - 1, max(xs) + 1
    lo_y, hi_y = min(ys) - 1, max(ys) + 1
    path: set = set()

    def rec(x: int, y: int, depth: int, touched: bool) -> bool:
        if touched and (x < lo_x or x > hi_x or y < lo_y or y > hi_y):
            return True
        if depth == limit:
            return False
        for dx, dy in DIR_VEC:
            p = (x + dx, y + dy)
            if p in obstacles or p in path:
                continue
            path.add(p)
            hit = rec(x + dx, y + dy, depth + 1, touched or p in extras)
            path.remove(p)
            if hit:
                return True
        return False

    ax, ay = stepped.points[-1]
    return rec(ax, ay, 0, False)


def soundness_check(g: StateGraph, max_len: int | None = None) -> list[tuple[int, int, bytes]]:
    """Hunt for a rewrite that forbids a live continuation.

    Vertices present only in a candidate may block continuations of the
    stepped walk; that is harmless exactly when every continuation touching
    one is trapped. Touches of a vertex with three walk neighbors are trapped
    outright; otherwise continuations up to `max_len` (default k) steps are
    enumerated. Returns violating (state id, move, candidate key) triples.
    """
    ctx = graph_ctx(g)
    limit = max_len if max_len is not None else g.k
    bad = []
    for sid in range(len(g)):
        w = g.walk(sid)
        for mv in allowed_moves(w, g.options.planar_a, g.options.planar_b):
            stepped = w.stepped(mv)
            for key, cw in candidate_children(w, mv, ctx, dedupe=False):
                extras = [p for p in cw.points if p not in stepped.vset]
                if not extras:
                    continue
                if all(
                    sum((px + dx, py + dy) in stepped.vset for dx, dy in DIR_VEC) >= 3
                    for px, py in extras
                ):
                    continue
                if _escaping_touch(stepped, set(extras), limit):
                    bad.append((sid, mv, key))
    return bad
