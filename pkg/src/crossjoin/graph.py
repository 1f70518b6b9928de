"""Generalized de Bruijn digraphs G_B(N, d).

Vertices are the integers ``0..N-1`` and ``x -> (d*x + r) mod N`` is an edge
for every residue ``r`` in ``0..d-1``.
"""

from __future__ import annotations

import json
from math import gcd
from dataclasses import dataclass

from .errors import DomainError, UnsupportedOperationError

__all__ = [
    "DigraphParams",
    "successors",
    "predecessors",
    "is_edge",
    "are_conjugate",
    "are_companion",
    "edge_table",
    "conjugate_classes",
    "format_edge_table",
    "edge_table_json",
    "edge_table_dot",
]


@dataclass(frozen=True, order=True)
class DigraphParams:
    """The pair (N, d) defining G_B(N, d)."""

    N: int
    d: int

    def __post_init__(self) -> None:
        for name in ("N", "d"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise DomainError(f"{name} must be an integer, got {value!r}")
        if self.d < 2:
            raise DomainError(f"d must be at least 2, got d={self.d}")
        if self.N < self.d:
            raise DomainError(f"N must be at least d, got N={self.N}, d={self.d}")

    @property
    def divides(self) -> bool:
        """True when d divides N (conjugacy is then an equivalence relation)."""
        return self.N % self.d == 0

    @property
    def modulus(self) -> int:
        """N/d, the modulus of complete conjugacy. Only defined when d | N."""
        if not self.divides:
            raise UnsupportedOperationError(
                f"N/d is not an integer for N={self.N}, d={self.d}"
            )
        return self.N // self.d

    def check_vertex(self, x: int) -> int:
        if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < self.N:
            raise DomainError(f"vertex {x!r} out of range [0, {self.N - 1}]")
        return x

    def require_divisible(self, what: str = "this operation") -> None:
        if not self.divides:
            raise UnsupportedOperationError(
                f"{what} requires d | N, got N={self.N}, d={self.d}"
            )


def successors(params: DigraphParams, x: int) -> list[int]:
    """Successors of ``x`` in residue order r = 0..d-1."""
    params.check_vertex(x)
    N, d = params.N, params.d
    base = d * x
    return [(base + r) % N for r in range(d)]


def predecessors(params: DigraphParams, y: int) -> set[int]:
    """The d predecessors of ``y``.

    Uses the closed form ``floor(y/d) + t*N/d`` when d | N and solves
    ``d*x = y - r (mod N)`` over every residue otherwise.
    """
    params.check_vertex(y)
    N, d = params.N, params.d
    if params.divides:
        m = N // d
        return {y // d + t * m for t in range(d)}
    result: set[int] = set()
    for r in range(d):
        result.update(_solve_linear(d, (y - r) % N, N))
    return result


def _solve_linear(a: int, b: int, n: int) -> list[int]:
    """All x in [0, n) with a*x = b (mod n)."""
    g = gcd(a, n)
    if b % g:
        return []
    a2, b2, n2 = a // g, b // g, n // g
    x0 = (b2 * pow(a2, -1, n2)) % n2 if n2 > 1 else 0
    return [x0 + k * n2 for k in range(g)]


def is_edge(params: DigraphParams, x: int, y: int) -> bool:
    params.check_vertex(y)
    return y in successors(params, x)


def are_conjugate(params: DigraphParams, x1: int, x2: int) -> bool:
    """True iff ``x1`` and ``x2`` share at least two successors."""
    params.check_vertex(x1)
    params.check_vertex(x2)
    if x1 == x2:
        raise DomainError(f"vertex {x1} is not its own conjugate")
    if params.divides:
        return (x1 - x2) % params.modulus == 0
    common = set(successors(params, x1)) & set(successors(params, x2))
    return len(common) >= 2


def are_companion(params: DigraphParams, y1: int, y2: int) -> bool:
    """True iff ``y1`` and ``y2`` share at least two predecessors."""
    params.check_vertex(y1)
    params.check_vertex(y2)
    if y1 == y2:
        raise DomainError(f"vertex {y1} is not its own companion")
    return len(predecessors(params, y1) & predecessors(params, y2)) >= 2


def edge_table(params: DigraphParams) -> list[list[int]]:
    """Row ``x`` holds the successors of ``x`` in residue order."""
    return [successors(params, x) for x in range(params.N)]


def conjugate_classes(params: DigraphParams) -> list[list[int]]:
    """The N/d conjugacy classes ``{v : v = c mod N/d}``, each of size d."""
    if not params.divides:
        raise UnsupportedOperationError(
            f"conjugacy is not transitive for N={params.N}, d={params.d}; "
            "use are_conjugate pairwise"
        )
    m = params.modulus
    return [list(range(c, params.N, m)) for c in range(m)]


# -- serialization -----------------------------------------------------------

def format_edge_table(params: DigraphParams) -> str:
    return "".join(
        f"{x} -> {', '.join(map(str, row))}\n"
        for x, row in enumerate(edge_table(params))
    )


def edge_table_json(params: DigraphParams) -> str:
    return json.dumps({"N": params.N, "d": params.d, "rows": edge_table(params)})


def edge_table_dot(params: DigraphParams) -> str:
    lines = [f'digraph "G_B({params.N},{params.d})" {{']
    for x, row in enumerate(edge_table(params)):
        for r, y in enumerate(row):
            lines.append(f'  {x} -> {y} [label="{r}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
