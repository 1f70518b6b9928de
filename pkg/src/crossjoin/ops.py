"""Cross-join moves, the cross-join graph C(N, d) and its connectivity.

All move positions are 1-based, matching the x_1..x_N indexing of an
aligned cycle. Every operation here requires d | N.
"""

from __future__ import annotations

import json
import logging
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .cycles import DeBruijnCycle, common_prefix_length, distance, enumerate_cycles
from .errors import DomainError, InvalidMoveError, InvariantViolationError
from .graph import DigraphParams

log = logging.getLogger(__name__)

__all__ = [
    "CrossJoinMove",
    "CrossJoinGraph",
    "Connectivity",
    "conjugate_position_pairs",
    "split",
    "check_move",
    "apply_move",
    "move_from_vertices",
    "enumerate_moves",
    "neighbors",
    "neighbor_moves",
    "are_adjacent",
    "neighbor_count",
    "neighbor_histogram",
    "dense_histogram",
    "histogram_csv",
    "build_crossjoin_graph",
    "is_connected",
    "crossjoin_path",
    "DEFAULT_GRAPH_BUDGET",
]

DEFAULT_GRAPH_BUDGET = 50_000


@dataclass(frozen=True, order=True)
class CrossJoinMove:
    """A cross pair (a, b) followed by a join pair (p_in, p_out).

    ``p_in`` lies on the inner cycle ``a+1..b`` produced by the cross swap,
    ``p_out`` on the outer one.
    """

    cross: tuple[int, int]
    join: tuple[int, int]

    def __str__(self) -> str:
        a, b = self.cross
        p, q = self.join
        return f"cross={a},{b};join={p},{q}"

    @classmethod
    def parse(cls, text: str) -> "CrossJoinMove":
        try:
            fields = dict(part.split("=", 1) for part in text.strip().split(";"))
            a, b = (int(t) for t in fields["cross"].split(","))
            p, q = (int(t) for t in fields["join"].split(","))
        except (KeyError, ValueError) as exc:
            raise DomainError(f"malformed move {text!r}") from exc
        return cls((a, b), (p, q))


# -- primitive helpers on raw aligned tuples ---------------------------------

def _conjugate_pairs(verts: Sequence[int], m: int) -> list[tuple[int, int]]:
    """Ascending 1-based position pairs (a, b), a < b, holding conjugate vertices."""
    groups: dict[int, list[int]] = {}
    for pos, x in enumerate(verts, 1):
        groups.setdefault(x % m, []).append(pos)
    pairs = [
        (ps[i], ps[j])
        for ps in groups.values()
        for i in range(len(ps))
        for j in range(i + 1, len(ps))
    ]
    pairs.sort()
    return pairs


def _successor_array(verts: Sequence[int]) -> list[int]:
    n = len(verts)
    succ = [0] * n
    for i in range(n - 1):
        succ[verts[i]] = verts[i + 1]
    succ[verts[n - 1]] = verts[0]
    return succ


def _swap_and_walk(
    verts: Sequence[int], succ: list[int], a: int, b: int, p: int, q: int
) -> tuple[int, ...] | None:
    """Swap successors at positions (a, b) then (p, q); walk from 0.

    Returns None if the result is not a single Hamiltonian cycle.
    """
    s = succ[:]
    xa, xb = verts[a - 1], verts[b - 1]
    s[xa], s[xb] = s[xb], s[xa]
    xp, xq = verts[p - 1], verts[q - 1]
    s[xp], s[xq] = s[xq], s[xp]
    n = len(verts)
    out = [0]
    x = s[0]
    while x != 0:
        if len(out) == n:
            return None
        out.append(x)
        x = s[x]
    return tuple(out) if len(out) == n else None


def _raw_moves(verts: Sequence[int], m: int) -> list[tuple[int, int, int, int]]:
    pairs = _conjugate_pairs(verts, m)
    moves = []
    for a, b in pairs:
        for p, q in pairs:
            if (p, q) == (a, b):
                continue
            p_inside = a < p <= b
            q_inside = a < q <= b
            if p_inside and not q_inside:
                moves.append((a, b, p, q))
            elif q_inside and not p_inside:
                moves.append((a, b, q, p))
    moves.sort()
    return moves


def _neighbor_map(verts: tuple[int, ...], m: int) -> dict[tuple[int, ...], tuple[int, int, int, int]]:
    """Distinct neighbor tuples, each mapped to the first move producing it."""
    succ = _successor_array(verts)
    out: dict[tuple[int, ...], tuple[int, int, int, int]] = {}
    for mv in _raw_moves(verts, m):
        w = _swap_and_walk(verts, succ, *mv)
        if w is None:
            raise InvariantViolationError(f"move {mv} on {verts} did not yield a cycle")
        out.setdefault(w, mv)
    return out


# -- public operations -------------------------------------------------------

def conjugate_position_pairs(u: DeBruijnCycle) -> list[tuple[int, int]]:
    u.params.require_divisible("conjugate position pairs")
    return _conjugate_pairs(u.vertices, u.params.modulus)


def _require_cross(u: DeBruijnCycle, a: int, b: int) -> None:
    params = u.params
    params.require_divisible("cross-join")
    N = params.N
    if not 1 <= a < b <= N:
        raise InvalidMoveError(f"cross positions must satisfy 1 <= a < b <= {N}, got ({a}, {b})")
    xa, xb = u.vertices[a - 1], u.vertices[b - 1]
    if (xa - xb) % params.modulus:
        raise InvalidMoveError(f"cross vertices {xa} and {xb} (positions {a}, {b}) are not conjugate")


def split(u: DeBruijnCycle, a: int, b: int) -> tuple[list[int], list[int]]:
    """Swap the successors at positions ``a < b``; return (outer, inner) cycles.

    The outer cycle is x_1..x_a, x_{b+1}..x_N and the inner one x_{a+1}..x_b.
    """
    _require_cross(u, a, b)
    verts = list(u.vertices)
    return verts[:a] + verts[b:], verts[a:b]


def check_move(u: DeBruijnCycle, m: CrossJoinMove) -> None:
    """Raise :class:`InvalidMoveError` naming the first violated precondition."""
    a, b = m.cross
    _require_cross(u, a, b)
    N = u.params.N
    p_in, p_out = m.join
    if not a < p_in <= b:
        raise InvalidMoveError(f"join position p_in={p_in} is not on the inner cycle [{a + 1}, {b}]")
    if not (1 <= p_out <= a or b < p_out <= N):
        raise InvalidMoveError(f"join position p_out={p_out} is not on the outer cycle")
    if {p_in, p_out} == {a, b}:
        raise InvalidMoveError("join pair equals the cross pair")
    xp, xq = u.vertices[p_in - 1], u.vertices[p_out - 1]
    if (xp - xq) % u.params.modulus:
        raise InvalidMoveError(
            f"join vertices {xp} and {xq} (positions {p_in}, {p_out}) are not conjugate"
        )


def apply_move(u: DeBruijnCycle, m: CrossJoinMove) -> DeBruijnCycle:
    """Swap successors at the cross pair, then at the join pair."""
    check_move(u, m)
    verts = u.vertices
    w = _swap_and_walk(verts, _successor_array(verts), *m.cross, *m.join)
    if w is None:
        raise InvalidMoveError(f"join pair {m.join} does not reconnect the split cycles")
    return DeBruijnCycle(u.params, w)


def move_from_vertices(u: DeBruijnCycle, cross: Sequence[int], join: Sequence[int]) -> CrossJoinMove:
    """Translate vertex-valued cross and join pairs into a positional move."""
    if len(cross) != 2 or len(join) != 2:
        raise InvalidMoveError("cross and join pairs need exactly two vertices each")
    a, b = sorted(u.position_of(x) for x in cross)
    if a == b:
        raise InvalidMoveError("cross pair repeats a vertex")
    ps = [u.position_of(x) for x in join]
    inside = [a < p <= b for p in ps]
    if inside[0] == inside[1]:
        raise InvalidMoveError(
            f"join vertices {tuple(join)} do not span the two cycles produced by the cross pair"
        )
    p_in, p_out = (ps[0], ps[1]) if inside[0] else (ps[1], ps[0])
    return CrossJoinMove((a, b), (p_in, p_out))


def enumerate_moves(u: DeBruijnCycle) -> list[CrossJoinMove]:
    """All valid moves on ``u``, ascending by (a, b, p_in, p_out)."""
    u.params.require_divisible("cross-join")
    return [
        CrossJoinMove((a, b), (p, q))
        for a, b, p, q in _raw_moves(u.vertices, u.params.modulus)
    ]


def neighbors(u: DeBruijnCycle) -> list[DeBruijnCycle]:
    """Distinct cycles one cross-join away from ``u``, sorted."""
    u.params.require_divisible("cross-join")
    nbrs = _neighbor_map(u.vertices, u.params.modulus)
    return [DeBruijnCycle(u.params, w) for w in sorted(nbrs)]


def neighbor_moves(u: DeBruijnCycle) -> list[tuple[CrossJoinMove, DeBruijnCycle]]:
    """Each distinct neighbor with the first move (in enumeration order) reaching it."""
    u.params.require_divisible("cross-join")
    nbrs = _neighbor_map(u.vertices, u.params.modulus)
    return [
        (CrossJoinMove((a, b), (p, q)), DeBruijnCycle(u.params, w))
        for w, (a, b, p, q) in sorted(nbrs.items())
    ]


def are_adjacent(u: DeBruijnCycle, w: DeBruijnCycle) -> bool:
    if u.params != w.params:
        raise DomainError(f"parameter mismatch: {u.params} vs {w.params}")
    u.params.require_divisible("cross-join")
    return w.vertices in _neighbor_map(u.vertices, u.params.modulus)


def neighbor_count(u: DeBruijnCycle) -> int:
    u.params.require_divisible("cross-join")
    return len(_neighbor_map(u.vertices, u.params.modulus))


def _count_job(args: tuple[int, list[tuple[int, ...]]]) -> list[int]:
    m, chunk = args
    return [len(_neighbor_map(v, m)) for v in chunk]


def _chunks(items: list, size: int) -> list[list]:
    return [items[i:i + size] for i in range(0, len(items), size)]


def _map_ordered(fn, jobs: list, workers: int) -> Iterable:
    if workers <= 1 or len(jobs) <= 1:
        return map(fn, jobs)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def neighbor_histogram(
    params: DigraphParams, budget: int | None = None, workers: int = 1
) -> dict[int, int]:
    """Map neighbor count n to the number of cycles with exactly n neighbors."""
    params.require_divisible("neighbor census")
    m = params.modulus
    tuples = [c.vertices for c in enumerate_cycles(params, budget, workers)]
    jobs = [(m, chunk) for chunk in _chunks(tuples, 64)]
    hist: Counter[int] = Counter()
    for counts in _map_ordered(_count_job, jobs, workers):
        hist.update(counts)
    return dict(sorted(hist.items()))


def dense_histogram(hist: dict[int, int]) -> dict[int, int]:
    """Fill the gaps between the smallest and largest n with zero frequencies."""
    if not hist:
        return {}
    lo, hi = min(hist), max(hist)
    return {n: hist.get(n, 0) for n in range(lo, hi + 1)}


def histogram_csv(hist: dict[int, int]) -> str:
    return "n,f\n" + "".join(f"{n},{f}\n" for n, f in sorted(hist.items()))


# -- the cross-join graph ----------------------------------------------------

@dataclass(frozen=True)
class CrossJoinGraph:
    params: DigraphParams
    nodes: tuple[DeBruijnCycle, ...]
    adjacency: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.nodes)

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def index(self) -> dict[tuple[int, ...], int]:
        return {c.vertices: i for i, c in enumerate(self.nodes)}

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, adj in enumerate(self.adjacency) for j in adj if i < j]

    def to_json(self) -> str:
        return json.dumps({
            "N": self.params.N,
            "d": self.params.d,
            "nodes": [list(c.vertices) for c in self.nodes],
            "edges": [list(e) for e in self.edges()],
        })

    def to_dot(self) -> str:
        lines = [f'graph "C({self.params.N},{self.params.d})" {{']
        for i, c in enumerate(self.nodes):
            lines.append(f'  {i} [label="{c.to_text()}"];')
        for i, j in self.edges():
            lines.append(f"  {i} -- {j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _adjacency_job(args: tuple[int, list[tuple[int, ...]]]) -> list[list[tuple[int, ...]]]:
    m, chunk = args
    return [list(_neighbor_map(v, m)) for v in chunk]


def build_crossjoin_graph(
    params: DigraphParams, budget: int = DEFAULT_GRAPH_BUDGET, workers: int = 1
) -> CrossJoinGraph:
    """Build C(N, d). Raises BudgetExceededError past ``budget`` cycles."""
    params.require_divisible("the cross-join graph")
    m = params.modulus
    nodes = tuple(enumerate_cycles(params, budget, workers))
    index = {c.vertices: i for i, c in enumerate(nodes)}
    jobs = [(m, chunk) for chunk in _chunks([c.vertices for c in nodes], 64)]
    adjacency: list[tuple[int, ...]] = []
    for nbr_lists in _map_ordered(_adjacency_job, jobs, workers):
        for nbrs in nbr_lists:
            try:
                adjacency.append(tuple(sorted(index[w] for w in nbrs)))
            except KeyError as exc:
                raise InvariantViolationError(f"neighbor {exc} missing from enumeration") from exc
    for i, adj in enumerate(adjacency):
        for j in adj:
            if j == i:
                raise InvariantViolationError(f"self-loop at node {i}")
            if i not in adjacency[j]:
                raise InvariantViolationError(f"adjacency not symmetric between {i} and {j}")
    return CrossJoinGraph(params, nodes, tuple(adjacency))


class Connectivity(NamedTuple):
    connected: bool
    components: int


def is_connected(g: CrossJoinGraph) -> Connectivity:
    """Breadth-first search; an empty graph counts as connected with 0 components."""
    n = len(g.nodes)
    if n == 0:
        log.warning("C(%d,%d) has no vertices; reporting connected by convention",
                    g.params.N, g.params.d)
        return Connectivity(True, 0)
    seen = [False] * n
    components = 0
    for start in range(n):
        if seen[start]:
            continue
        components += 1
        seen[start] = True
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in g.adjacency[i]:
                if not seen[j]:
                    seen[j] = True
                    queue.append(j)
    return Connectivity(components == 1, components)


# -- distance-decreasing paths -----------------------------------------------

def _prefix_step(u: DeBruijnCycle, v: DeBruijnCycle) -> tuple[CrossJoinMove, DeBruijnCycle] | None:
    """One move that keeps u's common prefix with v and extends it.

    Cross at the end of the common prefix and at the predecessor (in u) of
    v's next vertex, then join the split-off cycle back through a vertex
    beyond the outer cycle's new common prefix with v.
    """
    verts = u.vertices
    N = u.params.N
    m = u.params.modulus
    L0 = common_prefix_length(verts, v.vertices)
    a = L0
    b = u.position_of(v.vertices[L0]) - 1
    if b <= a or (verts[a - 1] - verts[b - 1]) % m:
        return None
    outer = verts[:a] + verts[b:]
    L1 = common_prefix_length(outer, v.vertices)
    succ = _successor_array(verts)
    d0 = N - L0
    for p_in in range(a + 1, b + 1):
        for p_out in list(range(1, a + 1)) + list(range(b + 1, N + 1)):
            if {p_in, p_out} == {a, b} or (verts[p_in - 1] - verts[p_out - 1]) % m:
                continue
            outer_pos = p_out if p_out <= a else p_out - (b - a)
            if outer_pos < L1:
                continue
            w = _swap_and_walk(verts, succ, a, b, p_in, p_out)
            if w is not None and N - common_prefix_length(w, v.vertices) < d0:
                return CrossJoinMove((a, b), (p_in, p_out)), DeBruijnCycle(u.params, w)
    return None


def _fallback_step(u: DeBruijnCycle, v: DeBruijnCycle) -> tuple[CrossJoinMove, DeBruijnCycle] | None:
    d0 = distance(u, v)
    best = None
    for w, mv in _neighbor_map(u.vertices, u.params.modulus).items():
        if u.params.N - common_prefix_length(w, v.vertices) < d0 and (best is None or w < best[0]):
            best = (w, mv)
    if best is None:
        return None
    w, (a, b, p, q) = best
    return CrossJoinMove((a, b), (p, q)), DeBruijnCycle(u.params, w)


def crossjoin_path(
    u: DeBruijnCycle, v: DeBruijnCycle, stats: Counter | None = None
) -> list[tuple[CrossJoinMove, DeBruijnCycle]]:
    """Cross-join moves leading from ``u`` to ``v`` with strictly falling distance.

    ``stats``, when given, counts how many steps came from the constructive
    procedure (``"constructive"``) versus the exhaustive neighbor scan (``"fallback"``).
    """
    if u.params != v.params:
        raise DomainError(f"parameter mismatch: {u.params} vs {v.params}")
    u.params.require_divisible("crossjoin_path")
    path: list[tuple[CrossJoinMove, DeBruijnCycle]] = []
    cur = u
    while cur != v:
        step = _prefix_step(cur, v)
        kind = "constructive"
        if step is None:
            step = _fallback_step(cur, v)
            kind = "fallback"
        if step is None or distance(step[1], v) >= distance(cur, v):
            raise InvariantViolationError(f"no distance-decreasing neighbor of {cur} towards {v}")
        if stats is not None:
            stats[kind] += 1
        path.append(step)
        cur = step[1]
        if len(path) > u.params.N:
            raise InvariantViolationError("path longer than N steps")
    return path
