"""Algorithm H: a Hamiltonian path through the cross-join graph.

Starting from a seed cycle, the scan tries conjugate position pairs (i, i')
from the lexicographically largest down. For each, it tries join pairs
(j, j') with i+1 <= j' <= i' < j, largest first (or smallest first under the
``smallest`` join rule). The first cross-joined cycle not yet output becomes
the next output, and the scan restarts. The run halts when a full scan
produces nothing new.
"""

from __future__ import annotations

import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, Sequence, TextIO

from .cycles import DeBruijnCycle, enumerate_cycles
from .errors import DomainError, InvariantViolationError
from .graph import DigraphParams
from .ops import CrossJoinMove, _neighbor_map, apply_move

__all__ = [
    "HamiltonPathResult",
    "JoinRule",
    "largest_i",
    "largest_j",
    "smallest_j",
    "run_algorithm_h",
    "is_hamiltonian_path",
    "check_result",
    "find_cycle_seed",
    "DEFAULT_SEED_BUDGET",
]

JoinRule = Literal["largest", "smallest"]
DEFAULT_SEED_BUDGET = 100_000


@dataclass(frozen=True)
class HamiltonPathResult:
    params: DigraphParams
    join_rule: str
    cycles: tuple[DeBruijnCycle, ...]
    moves: tuple[CrossJoinMove, ...]
    closed: bool
    exhausted: bool

    def __len__(self) -> int:
        return len(self.cycles)

    # -- serialization -------------------------------------------------------

    def header(self) -> dict:
        return {
            "N": self.params.N,
            "d": self.params.d,
            "join_rule": self.join_rule,
            "closed": self.closed,
            "exhausted": self.exhausted,
            "length": len(self.cycles),
        }

    def write_jsonl(self, fh: TextIO) -> None:
        fh.write(json.dumps(self.header()) + "\n")
        incoming: list[CrossJoinMove | None] = [None, *self.moves]
        for c, mv in zip(self.cycles, incoming):
            fh.write(json.dumps({"cycle": list(c.vertices),
                                 "move": None if mv is None else str(mv)}) + "\n")

    def to_jsonl(self) -> str:
        buf = io.StringIO()
        self.write_jsonl(buf)
        return buf.getvalue()

    @classmethod
    def from_jsonl(cls, lines: Iterable[str]) -> "HamiltonPathResult":
        it = (ln for ln in lines if ln.strip())
        try:
            head = json.loads(next(it))
            params = DigraphParams(int(head["N"]), int(head["d"]))
        except (StopIteration, KeyError, TypeError, json.JSONDecodeError) as exc:
            raise DomainError("missing or malformed result header") from exc
        cycles: list[DeBruijnCycle] = []
        moves: list[CrossJoinMove] = []
        for lineno, ln in enumerate(it, 2):
            try:
                rec = json.loads(ln)
            except json.JSONDecodeError as exc:
                raise DomainError(f"line {lineno}: not JSON") from exc
            if isinstance(rec, list):
                rec = {"cycle": rec, "move": None}
            cycles.append(DeBruijnCycle(params, tuple(rec["cycle"])))
            if rec.get("move") is not None:
                moves.append(CrossJoinMove.parse(rec["move"]))
        if moves and len(moves) != len(cycles) - 1:
            raise DomainError(f"{len(moves)} moves recorded for {len(cycles)} cycles")
        return cls(params, head.get("join_rule", "largest"), tuple(cycles), tuple(moves),
                   bool(head.get("closed", False)), bool(head.get("exhausted", True)))

    def to_table(self) -> str:
        """Fixed-width listing with i, i' marked ``^`` and j, j' marked ``_`` below each row."""
        w = len(str(self.params.N - 1))
        lw = len(str(len(self.cycles)))
        out = []
        for k, c in enumerate(self.cycles):
            cells = [f"{x:>{w}}" for x in c.vertices]
            out.append(f"{k + 1:>{lw}}) " + ", ".join(cells))
            if k < len(self.moves):
                mv = self.moves[k]
                marks = [" " * w for _ in cells]
                for p in mv.cross:
                    marks[p - 1] = " " * (w - 1) + "^"
                for p in mv.join:
                    marks[p - 1] = " " * (w - 1) + "_"
                out.append(" " * (lw + 2) + "  ".join(marks).rstrip())
        out.append(f"closed: {str(self.closed).lower()}")
        return "\n".join(out) + "\n"


# -- scan primitives ---------------------------------------------------------
# Positions are 1-based; verts is the aligned vertex tuple.

def _conj(verts: Sequence[int], m: int, p: int, q: int) -> bool:
    return (verts[p - 1] - verts[q - 1]) % m == 0


def _largest_i(verts: Sequence[int], m: int, i1: int, i2: int) -> tuple[int, int] | None:
    N = len(verts)
    while i1 > 0:
        while i2 > i1:
            if _conj(verts, m, i1, i2):
                return i1, i2
            i2 -= 1
        i1 -= 1
        # position N never serves as i' since a join needs some j > i'
        i2 = N - 1
    return None


def _largest_j(verts: Sequence[int], m: int, i: tuple[int, int], j1: int, j2: int) -> tuple[int, int] | None:
    lo, hi = i
    while j1 > hi:
        while j2 > lo:
            if _conj(verts, m, j1, j2):
                return j1, j2
            j2 -= 1
        j1 -= 1
        j2 = hi
    return None


def _smallest_j(verts: Sequence[int], m: int, i: tuple[int, int], j1: int, j2: int) -> tuple[int, int] | None:
    N = len(verts)
    lo, hi = i
    while j1 <= N:
        while j2 <= hi:
            if _conj(verts, m, j1, j2):
                return j1, j2
            j2 += 1
        j1 += 1
        j2 = lo + 1
    return None


def _modulus(u: DeBruijnCycle) -> int:
    u.params.require_divisible("Algorithm H")
    return u.params.modulus


def largest_i(u: DeBruijnCycle, start: tuple[int, int]) -> tuple[int, int] | None:
    """Largest conjugate position pair (i, i') <= ``start`` with i' < N."""
    i1, i2 = start
    if not 1 <= i1 < i2 <= u.params.N:
        raise DomainError(f"start pair must satisfy 1 <= i < i' <= N, got {start}")
    return _largest_i(u.vertices, _modulus(u), i1, min(i2, u.params.N - 1))


def largest_j(u: DeBruijnCycle, i_pair: tuple[int, int],
              start: tuple[int, int] | None = None) -> tuple[int, int] | None:
    """Largest conjugate (j, j') <= ``start`` with i' < j <= N and i < j' <= i'."""
    m = _modulus(u)
    i, ip = i_pair
    if not _conj(u.vertices, m, i, ip) or i >= ip:
        raise DomainError(f"{i_pair} is not a conjugate position pair")
    j1, j2 = start if start is not None else (u.params.N, ip)
    return _largest_j(u.vertices, m, i_pair, min(j1, u.params.N), min(j2, ip))


def smallest_j(u: DeBruijnCycle, i_pair: tuple[int, int],
               start: tuple[int, int] | None = None) -> tuple[int, int] | None:
    """Smallest conjugate (j, j') >= ``start`` with i' < j <= N and i < j' <= i'."""
    m = _modulus(u)
    i, ip = i_pair
    if not _conj(u.vertices, m, i, ip) or i >= ip:
        raise DomainError(f"{i_pair} is not a conjugate position pair")
    j1, j2 = start if start is not None else (ip + 1, i + 1)
    return _smallest_j(u.vertices, m, i_pair, max(j1, ip + 1), max(j2, i + 1))


def _cross_join(verts: Sequence[int], i: int, ip: int, j: int, jp: int) -> tuple[int, ...]:
    # x_1..x_i, x_{i'+1}..x_j, x_{j'+1}..x_{i'}, x_{i+1}..x_{j'}, x_{j+1}..x_N
    return (*verts[:i], *verts[ip:j], *verts[jp:ip], *verts[i:jp], *verts[j:])


def _join_candidates(verts: Sequence[int], m: int, i_pair: tuple[int, int],
                     rule: str) -> Iterator[tuple[int, int]]:
    N = len(verts)
    i, ip = i_pair
    if rule == "largest":
        j = _largest_j(verts, m, i_pair, N, ip)
        while j is not None:
            yield j
            j1, j2 = j
            j = _largest_j(verts, m, i_pair, j1, j2 - 1) if j2 > i + 1 else \
                _largest_j(verts, m, i_pair, j1 - 1, ip)
    else:
        j = _smallest_j(verts, m, i_pair, ip + 1, i + 1)
        while j is not None:
            yield j
            j1, j2 = j
            j = _smallest_j(verts, m, i_pair, j1, j2 + 1) if j2 < ip else \
                _smallest_j(verts, m, i_pair, j1 + 1, i + 1)


def _next_i(N: int, i1: int, i2: int) -> tuple[int, int]:
    return (i1, i2 - 1) if i2 > i1 + 1 else (i1 - 1, N - 1)


def _step(verts: tuple[int, ...], m: int, rule: str,
          seen: set[tuple[int, ...]]) -> tuple[tuple[int, ...], CrossJoinMove] | None:
    N = len(verts)
    i1, i2 = N - 2, N - 1
    while i1 > 0:
        i_pair = _largest_i(verts, m, i1, i2)
        if i_pair is None:
            return None
        i, ip = i_pair
        for j, jp in _join_candidates(verts, m, i_pair, rule):
            w = _cross_join(verts, i, ip, j, jp)
            if w not in seen:
                return w, CrossJoinMove((i, ip), (jp, j))
        i1, i2 = _next_i(N, i, ip)
    return None


def run_algorithm_h(seed: DeBruijnCycle, join_rule: JoinRule = "largest",
                    max_steps: int | None = None) -> HamiltonPathResult:
    """Run Algorithm H from ``seed``.

    ``max_steps`` caps the number of emitted cycles; a capped run reports
    ``exhausted=False``.
    """
    if join_rule not in ("largest", "smallest"):
        raise DomainError(f"unknown join rule {join_rule!r}")
    m = _modulus(seed)
    params = seed.params
    out = [seed.vertices]
    moves: list[CrossJoinMove] = []
    seen = {seed.vertices}
    exhausted = True
    while True:
        if max_steps is not None and len(out) >= max_steps:
            exhausted = False
            break
        nxt = _step(out[-1], m, join_rule, seen)
        if nxt is None:
            break
        w, mv = nxt
        out.append(w)
        moves.append(mv)
        seen.add(w)
    closed = len(out) >= 2 and out[0] in _neighbor_map(out[-1], m)
    cycles = tuple(DeBruijnCycle(params, t) for t in out)
    return HamiltonPathResult(params, join_rule, cycles, tuple(moves), closed, exhausted)


def check_result(result: HamiltonPathResult) -> None:
    """Assert the two result invariants: distinct outputs, recorded moves link them."""
    keys = [c.vertices for c in result.cycles]
    if len(set(keys)) != len(keys):
        raise InvariantViolationError("Algorithm H emitted a cycle twice")
    if result.moves and len(result.moves) != len(keys) - 1:
        raise InvariantViolationError("move list does not match cycle list")
    for k, mv in enumerate(result.moves):
        if apply_move(result.cycles[k], mv) != result.cycles[k + 1]:
            raise InvariantViolationError(f"move {mv} does not lead from output {k + 1} to {k + 2}")


def is_hamiltonian_path(result: HamiltonPathResult, params: DigraphParams | None = None,
                        budget: int | None = DEFAULT_SEED_BUDGET) -> bool:
    """True iff the result visits every de Bruijn cycle once along cross-join edges."""
    params = params or result.params
    if any(c.params != params for c in result.cycles):
        return False
    keys = [c.vertices for c in result.cycles]
    if len(set(keys)) != len(keys):
        return False
    every = {c.vertices for c in enumerate_cycles(params, budget)}
    if set(keys) != every:
        return False
    m = params.modulus
    return all(b in _neighbor_map(a, m) for a, b in zip(keys, keys[1:]))


def _seed_job(args: tuple[DigraphParams, tuple[int, ...], str, int]) -> bool:
    params, verts, rule, total = args
    res = run_algorithm_h(DeBruijnCycle(params, verts), rule)
    return res.closed and len(res.cycles) == total


def find_cycle_seed(params: DigraphParams, join_rule: JoinRule = "largest",
                    budget: int = DEFAULT_SEED_BUDGET, workers: int = 1) -> DeBruijnCycle | None:
    """First seed, in canonical order, whose Algorithm H run is a closed Hamiltonian path."""
    params.require_divisible("find_cycle_seed")
    seeds = [c.vertices for c in enumerate_cycles(params, budget)]
    total = len(seeds)
    jobs = [(params, s, join_rule, total) for s in seeds]
    if workers <= 1:
        for s, job in zip(seeds, jobs):
            if _seed_job(job):
                return DeBruijnCycle(params, s)
        return None
    batch = 4 * workers
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for start in range(0, total, batch):
            chunk = jobs[start:start + batch]
            for s, ok in zip(seeds[start:start + batch], pool.map(_seed_job, chunk)):
                if ok:
                    return DeBruijnCycle(params, s)
    return None
