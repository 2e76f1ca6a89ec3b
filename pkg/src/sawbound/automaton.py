"""State graph construction and its binary file format.

States are walks in canonical form, identified by their direction strings
read from B. The root is the straight walk of k/2 edges. Ids are assigned in
first-admission order by a sequential FIFO exploration, so builds with the
same k and options are bit-for-bit reproducible.
"""

from __future__ import annotations

import hashlib
import struct
from collections import deque

from .legality import MOVE_INDEX, allowed_moves
from .simplify import ExpandContext, Options, candidate_children
from .state import Walk, canonical, line_walk

MAGIC = b"SAWG"
VERSION = 1


class GraphClosureError(RuntimeError):
    """A recomputed child fell outside the frozen state set."""


class GraphFileError(Exception):
    """Base class for graph file problems."""


class GraphMagicError(GraphFileError):
    """The file does not start with the graph magic bytes."""


class GraphVersionError(GraphFileError):
    """The file uses an unsupported format version."""


class GraphTruncatedError(GraphFileError):
    """The file is shorter than its own structure claims."""


class GraphChecksumError(GraphFileError):
    """The trailing checksum does not match the file contents."""


class StateGraph:
    """An immutable build result: states, allowances, and children per move.

    `children[s]` holds three id lists in (Up, Right, Down) order; a blocked
    move has an empty list.
    """

    __slots__ = ("k", "options", "states", "allowances", "children", "_index")

    root = 0

    def __init__(
        self,
        k: int,
        options: Options,
        states: list[bytes],
        allowances: list[int],
        children: list[tuple[list[int], list[int], list[int]]],
    ):
        self.k = k
        self.options = options
        self.states = states
        self.allowances = allowances
        self.children = children
        self._index: dict[bytes, int] | None = None

    def __len__(self) -> int:
        return len(self.states)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StateGraph):
            return NotImplemented
        return (
            self.k == other.k
            and self.options == other.options
            and self.states == other.states
            and self.allowances == other.allowances
            and self.children == other.children
        )

    def walk(self, sid: int) -> Walk:
        """The state's walk in the canonical frame."""
        return Walk(self.states[sid])

    def key_index(self) -> dict[bytes, int]:
        if self._index is None:
            self._index = {key: sid for sid, key in enumerate(self.states)}
        return self._index


def graph_ctx(g: StateGraph) -> ExpandContext:
    """Expansion context over a frozen graph; any new state is a closure error."""
    index = g.key_index()
    allowances = g.allowances

    def member_allowance(key: bytes) -> int | None:
        sid = index.get(key)
        return None if sid is None else allowances[sid]

    def admit(walk: Walk, key: bytes, cls: int) -> None:
        raise GraphClosureError(f"candidate state {key.hex()} is not in the graph")

    return ExpandContext(g.k, g.options, member_allowance, admit)


def build(k: int, options: Options = Options()) -> StateGraph:
    states: list[bytes] = []
    allowances: list[int] = []
    members: dict[bytes, int] = {}
    queue: deque[int] = deque()

    def member_allowance(key: bytes) -> int | None:
        sid = members.get(key)
        return None if sid is None else allowances[sid]

    def admit(walk: Walk, key: bytes, cls: int) -> None:
        members[key] = len(states)
        states.append(key)
        allowances.append(cls)
        queue.append(len(states) - 1)

    ctx = ExpandContext(k, options, member_allowance, admit)
    root = line_walk(k // 2)
    rkey = canonical(root.dirs)
    admit(root, rkey, ctx.allowance(root, rkey, False))

    children: list[tuple[list[int], list[int], list[int]]] = []
    record_now = not options.two_pass

    while queue:
        sid = queue.popleft()
        w = Walk(states[sid])
        lists: tuple[list[int], list[int], list[int]] = ([], [], [])
        for mv in allowed_moves(w, options.planar_a, options.planar_b):
            pairs = candidate_children(w, mv, ctx)
            if record_now:
                lists[MOVE_INDEX[mv]].extend(members[key] for key, _ in pairs)
        if record_now:
            children.append(lists)

    if options.two_pass:
        current = [0, 0]

        def admit_frozen(walk: Walk, key: bytes, cls: int) -> None:
            raise GraphClosureError(
                f"state {current[0]} move {current[1]} produced the unknown "
                f"candidate {key.hex()}"
            )

        ctx.admit = admit_frozen
        for sid in range(len(states)):
            w = Walk(states[sid])
            lists = ([], [], [])
            for mv in allowed_moves(w, options.planar_a, options.planar_b):
                current[0], current[1] = sid, mv
                pairs = candidate_children(w, mv, ctx)
                lists[MOVE_INDEX[mv]].extend(members[key] for key, _ in pairs)
            children.append(lists)

    return StateGraph(k, options, states, allowances, children)


def _checksum(data: bytes) -> int:
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")


def _pack_dirs(dirs: bytes) -> bytes:
    out = bytearray((len(dirs) + 3) // 4)
    for t, c in enumerate(dirs):
        out[t >> 2] |= c << ((t & 3) * 2)
    return bytes(out)


def _unpack_dirs(buf: bytes, n: int) -> bytes:
    return bytes((buf[t >> 2] >> ((t & 3) * 2)) & 3 for t in range(n))


def save_graph(g: StateGraph, path: str) -> int:
    """Write the graph; returns the number of bytes written.

    Layout (little-endian): magic, u16 version, u16 k, u32 option bits,
    u64 state count; per state u8 allowance, u16 step count, dirs packed two
    bits per step; then per state three child lists in (Up, Right, Down)
    order, each a u32 count plus u32 ids; finally a u64 checksum of all
    preceding bytes.
    """
    parts = [MAGIC, struct.pack("<HHIQ", VERSION, g.k, g.options.to_bits(), len(g.states))]
    for dirs, cls in zip(g.states, g.allowances):
        parts.append(struct.pack("<BH", cls, len(dirs)))
        parts.append(_pack_dirs(dirs))
    for lists in g.children:
        for ids in lists:
            parts.append(struct.pack(f"<I{len(ids)}I", len(ids), *ids))
    body = b"".join(parts)
    blob = body + struct.pack("<Q", _checksum(body))
    with open(path, "wb") as fh:
        fh.write(blob)
    return len(blob)


def load_graph(path: str) -> StateGraph:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 4:
        raise GraphTruncatedError(f"{path}: too short for a header")
    if data[:4] != MAGIC:
        raise GraphMagicError(f"{path}: bad magic {data[:4]!r}")
    if len(data) < 20 + 8:
        raise GraphTruncatedError(f"{path}: too short for a header")
    version, k, mask, nstates = struct.unpack_from("<HHIQ", data, 4)
    if version != VERSION:
        raise GraphVersionError(f"{path}: unsupported version {version}")

    end = len(data) - 8
    off = 20

    def take(size: int) -> int:
        nonlocal off
        if off + size > end:
            raise GraphTruncatedError(f"{path}: body ends early at offset {off}")
        off += size
        return off - size

    states: list[bytes] = []
    allowances: list[int] = []
    for _ in range(nstates):
        at = take(3)
        cls, nsteps = struct.unpack_from("<BH", data, at)
        at = take((nsteps + 3) // 4)
        states.append(_unpack_dirs(data[at:off], nsteps))
        allowances.append(cls)
    children: list[tuple[list[int], list[int], list[int]]] = []
    for _ in range(nstates):
        lists = []
        for _ in range(3):
            at = take(4)
            (count,) = struct.unpack_from("<I", data, at)
            at = take(4 * count)
            lists.append(list(struct.unpack_from(f"<{count}I", data, at)))
        children.append((lists[0], lists[1], lists[2]))
    if off != end:
        raise GraphTruncatedError(f"{path}: {end - off} unexpected trailing bytes")
    (stored,) = struct.unpack_from("<Q", data, end)
    if stored != _checksum(data[:end]):
        raise GraphChecksumError(f"{path}: checksum mismatch")
    return StateGraph(k, Options.from_bits(mask), states, allowances, children)
