"""De Bruijn cycles: Hamiltonian cycles of G_B(N, d).

A cycle is always stored in aligned form, i.e. rotated so that vertex 0
comes first; the aligned vertex tuple is its identity.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Iterator, Literal, Sequence

from .errors import BudgetExceededError, DomainError, InvalidCycleError
from .graph import DigraphParams

__all__ = [
    "DeBruijnCycle",
    "validate",
    "align",
    "distance",
    "common_prefix_length",
    "enumerate_cycles",
    "count_cycles",
    "count_formula",
    "chang_count",
    "greedy_generate",
    "power_exponent",
]

Preference = Literal["largest", "smallest"]


@dataclass(frozen=True)
class DeBruijnCycle:
    """An aligned Hamiltonian cycle of G_B(N, d).

    Construct through :func:`validate` unless the vertices are already known
    to be aligned and valid; the constructor re-checks the invariants anyway.
    """

    params: DigraphParams
    vertices: tuple[int, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        verts = tuple(self.vertices)
        object.__setattr__(self, "vertices", verts)
        _check_cycle(self.params, verts)
        object.__setattr__(self, "_index", {x: i for i, x in enumerate(verts)})

    @property
    def N(self) -> int:
        return self.params.N

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def __getitem__(self, i):
        return self.vertices[i]

    def __lt__(self, other: "DeBruijnCycle") -> bool:
        return (self.params, self.vertices) < (other.params, other.vertices)

    def vertex_at(self, position: int) -> int:
        """Vertex at a 1-based position."""
        if not 1 <= position <= self.params.N:
            raise DomainError(f"position {position} out of range [1, {self.params.N}]")
        return self.vertices[position - 1]

    def position_of(self, x: int) -> int:
        """1-based position of vertex ``x``."""
        self.params.check_vertex(x)
        return self._index[x] + 1

    def successor(self, x: int) -> int:
        """The successor of ``x`` along this cycle."""
        i = self._index[x] + 1
        return self.vertices[i % self.params.N]

    def to_text(self) -> str:
        return ",".join(map(str, self.vertices))

    def __str__(self) -> str:
        return self.to_text()


def _check_entries(N: int, verts: Sequence[int]) -> None:
    if len(verts) != N:
        raise InvalidCycleError(f"expected {N} vertices, got {len(verts)}")
    seen = [False] * N
    for pos, x in enumerate(verts, 1):
        if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < N:
            raise InvalidCycleError(f"vertex {x!r} at position {pos} out of range", pos)
        if seen[x]:
            raise InvalidCycleError(f"vertex {x} repeated at position {pos}", pos)
        seen[x] = True


def _check_cycle(params: DigraphParams, verts: Sequence[int]) -> None:
    N, d = params.N, params.d
    _check_entries(N, verts)
    if verts[0] != 0:
        raise InvalidCycleError("cycle is not aligned: first vertex must be 0", 1)
    for pos in range(N):
        head = (pos + 1) % N
        x, y = verts[pos], verts[head]
        if (y - d * x) % N >= d:
            raise InvalidCycleError(
                f"{x} -> {y} entering position {head + 1} is not an edge of G_B({N},{d})",
                head + 1,
            )


def align(raw: Sequence[int]) -> list[int]:
    """Rotate ``raw`` cyclically so that 0 comes first."""
    raw = list(raw)
    zeros = [i for i, x in enumerate(raw) if x == 0]
    if not zeros:
        raise InvalidCycleError("vertex 0 is absent")
    if len(zeros) > 1:
        raise InvalidCycleError(f"vertex 0 repeated at position {zeros[1] + 1}", zeros[1] + 1)
    k = zeros[0]
    return raw[k:] + raw[:k]


def validate(params: DigraphParams, raw: Sequence[int]) -> DeBruijnCycle:
    """Align ``raw`` and check it is a de Bruijn cycle of ``params``.

    Raises :class:`InvalidCycleError` naming the offending position.
    """
    raw = list(raw)
    _check_entries(params.N, raw)
    return DeBruijnCycle(params, tuple(align(raw)))


def common_prefix_length(u: Sequence[int], v: Sequence[int]) -> int:
    n = 0
    for a, b in zip(u, v):
        if a != b:
            break
        n += 1
    return n


def distance(u: DeBruijnCycle, v: DeBruijnCycle) -> int:
    """N minus the length of the longest common prefix of the aligned cycles."""
    if u.params != v.params:
        raise DomainError(f"parameter mismatch: {u.params} vs {v.params}")
    return u.params.N - common_prefix_length(u.vertices, v.vertices)


# -- enumeration -------------------------------------------------------------

def _extend(
    N: int,
    d: int,
    path: list[int],
    visited: list[bool],
    order: range | Sequence[int],
    emit: Callable[[tuple[int, ...]], bool],
) -> bool:
    """Depth-first completion of ``path``; ``emit`` returns True to stop."""
    x = path[-1]
    if len(path) == N:
        if (0 - d * x) % N < d:
            return emit(tuple(path))
        return False
    base = d * x
    for r in order:
        y = (base + r) % N
        if not visited[y]:
            visited[y] = True
            path.append(y)
            stop = _extend(N, d, path, visited, order, emit)
            path.pop()
            visited[y] = False
            if stop:
                return True
    return False


def _prefixes(N: int, d: int, depth: int) -> list[tuple[int, ...]]:
    """Simple paths from 0 of length ``depth`` (or shorter complete ones), in DFS order."""
    out: list[tuple[int, ...]] = []

    def rec(path: list[int], visited: list[bool]) -> None:
        if len(path) == depth or len(path) == N:
            out.append(tuple(path))
            return
        base = d * path[-1]
        for r in range(d):
            y = (base + r) % N
            if not visited[y]:
                visited[y] = True
                path.append(y)
                rec(path, visited)
                path.pop()
                visited[y] = False

    visited = [False] * N
    visited[0] = True
    rec([0], visited)
    return out


def _complete_prefix(args: tuple[int, int, tuple[int, ...]]) -> list[tuple[int, ...]]:
    N, d, prefix = args
    visited = [False] * N
    for x in prefix:
        visited[x] = True
    found: list[tuple[int, ...]] = []

    def emit(t: tuple[int, ...]) -> bool:
        found.append(t)
        return False

    _extend(N, d, list(prefix), visited, range(d), emit)
    return found


def _raw_cycles(params: DigraphParams, workers: int = 1) -> Iterator[tuple[int, ...]]:
    N, d = params.N, params.d
    if workers <= 1:
        # Generator wrapper around the recursive search via an explicit stack of
        # residue iterators, so consumers can stop early without threads.
        path = [0]
        visited = [False] * N
        visited[0] = True
        stack = [0]  # next residue to try at each depth
        while stack:
            r = stack[-1]
            x = path[-1]
            if len(path) == N:
                if (0 - d * x) % N < d:
                    yield tuple(path)
                stack.pop()
                visited[path.pop()] = False
                continue
            if r == d:
                stack.pop()
                if len(path) > 1:
                    visited[path.pop()] = False
                continue
            stack[-1] = r + 1
            y = (d * x + r) % N
            if not visited[y]:
                visited[y] = True
                path.append(y)
                stack.append(0)
        return
    depth = min(N, max(2, _split_depth(d, workers)))
    prefixes = _prefixes(N, d, depth)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for chunk in pool.map(_complete_prefix, [(N, d, p) for p in prefixes]):
            yield from chunk


def _split_depth(d: int, workers: int) -> int:
    depth, width = 1, 1
    while width < 8 * workers:
        width *= d
        depth += 1
    return depth


def enumerate_cycles(
    params: DigraphParams,
    budget: int | None = None,
    workers: int = 1,
) -> Iterator[DeBruijnCycle]:
    """Every de Bruijn cycle of ``params`` in canonical order.

    Backtracking search from 0 extending by unvisited successors in
    ascending residue order. ``workers > 1`` splits the search tree by
    prefix across processes; the merged stream is identical to the serial
    one. Raises :class:`BudgetExceededError` once more than ``budget``
    cycles would be produced.
    """
    count = 0
    for t in _raw_cycles(params, workers):
        count += 1
        if budget is not None and count > budget:
            raise BudgetExceededError(
                f"G_B({params.N},{params.d}) has more than {budget} de Bruijn cycles"
            )
        yield DeBruijnCycle(params, t)


def count_cycles(params: DigraphParams, budget: int | None = None, workers: int = 1) -> int:
    count = 0
    for _ in _raw_cycles(params, workers):
        count += 1
        if budget is not None and count > budget:
            raise BudgetExceededError(
                f"G_B({params.N},{params.d}) has more than {budget} de Bruijn cycles"
            )
    return count


def greedy_generate(params: DigraphParams, preference: Preference = "largest") -> DeBruijnCycle | None:
    """First Hamiltonian cycle found by backtracking with a residue preference.

    ``largest`` tries successor ``d*x + d-1`` first; for N = 2**k this is
    the prefer-one sequence. Returns None when no cycle exists.
    """
    if preference not in ("largest", "smallest"):
        raise DomainError(f"unknown preference {preference!r}")
    N, d = params.N, params.d
    order = range(d - 1, -1, -1) if preference == "largest" else range(d)
    visited = [False] * N
    visited[0] = True
    found: list[tuple[int, ...]] = []

    def emit(t: tuple[int, ...]) -> bool:
        found.append(t)
        return True

    _extend(N, d, [0], visited, order, emit)
    return DeBruijnCycle(params, found[0]) if found else None


# -- closed-form counts ------------------------------------------------------

def count_formula(d: int, k: int) -> int:
    """Number of d-ary de Bruijn cycles of order k: (d!)^(d^(k-1)) / d^k."""
    if d < 2 or k < 1:
        raise DomainError(f"count_formula needs d >= 2 and k >= 1, got d={d}, k={k}")
    num = factorial(d) ** (d ** (k - 1))
    q, rem = divmod(num, d**k)
    assert rem == 0
    return q


def chang_count(k: int) -> int:
    """Cross-join pair count of a maximal-period binary LFSR of order k."""
    if k < 2:
        raise DomainError(f"chang_count needs k >= 2, got {k}")
    h = 2 ** (k - 1)
    q, rem = divmod((h - 1) * (h - 2), 6)
    assert rem == 0
    return q


def power_exponent(N: int, d: int) -> int | None:
    """k with d**k == N, or None."""
    k, p = 0, 1
    while p < N:
        p *= d
        k += 1
    return k if p == N and k >= 1 else None
