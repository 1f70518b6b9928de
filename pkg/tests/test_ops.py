from collections import Counter
from itertools import combinations

import pytest

from crossjoin.cycles import distance, enumerate_cycles, validate
from crossjoin.errors import (
    DomainError,
    InvalidMoveError,
    UnsupportedOperationError,
)
from crossjoin.graph import DigraphParams
from crossjoin.ops import (
    CrossJoinMove,
    apply_move,
    are_adjacent,
    build_crossjoin_graph,
    check_move,
    conjugate_position_pairs,
    crossjoin_path,
    dense_histogram,
    enumerate_moves,
    histogram_csv,
    is_connected,
    move_from_vertices,
    neighbor_count,
    neighbor_histogram,
    neighbor_moves,
    neighbors,
    split,
)

from conftest import all_cycles, golden, successor_oracle, walk_successor_map

U8 = [0, 1, 3, 7, 6, 5, 2, 4]
U63 = [0, 2, 1, 5, 3, 4]


def double_swap_oracle(u):
    """Every cycle reachable by swapping successors of two conjugate vertex pairs.

    Works on vertex pairs and a plain dict, independent of the positional
    bookkeeping in the library.
    """
    N, d = u.params.N, u.params.d
    verts = u.vertices
    succ = {verts[i]: verts[(i + 1) % N] for i in range(N)}

    def conj(a, b):
        return len(set(successor_oracle(N, d, a)) & set(successor_oracle(N, d, b))) >= 2

    pairs = [(a, b) for a, b in combinations(range(N), 2) if conj(a, b)]
    found = set()
    for c in pairs:
        s1 = dict(succ)
        s1[c[0]], s1[c[1]] = s1[c[1]], s1[c[0]]
        if len(walk_successor_map(s1)) == N:
            continue  # the first swap must split the cycle
        for j in pairs:
            if j == c:
                continue
            s2 = dict(s1)
            s2[j[0]], s2[j[1]] = s2[j[1]], s2[j[0]]
            walk = walk_successor_map(s2)
            if len(walk) == N:
                found.add(tuple(walk))
    return found


# -- split -------------------------------------------------------------------

@pytest.mark.parametrize("N,d,u,a,b,outer,inner", [
    (8, 2, U8, 2, 6, [0, 1, 2, 4], [3, 7, 6, 5]),
    (6, 3, U63, 2, 6, [0, 2], [1, 5, 3, 4]),
    (4, 2, [0, 1, 3, 2], 2, 3, [0, 1, 2], [3]),
])
def test_split_examples(N, d, u, a, b, outer, inner):
    assert split(validate(DigraphParams(N, d), u), a, b) == (outer, inner)


def test_split_errors():
    u = validate(DigraphParams(8, 2), U8)
    with pytest.raises(InvalidMoveError, match="not conjugate"):
        split(u, 2, 5)
    with pytest.raises(InvalidMoveError):
        split(u, 6, 2)
    c = next(enumerate_cycles(DigraphParams(10, 4)))
    with pytest.raises(UnsupportedOperationError):
        split(c, 1, 2)


@pytest.mark.parametrize("N,d", [(8, 2), (16, 2), (9, 3), (12, 3), (8, 4)])
def test_split_partitions_into_valid_cycles(N, d):
    p = DigraphParams(N, d)
    for u in all_cycles(N, d)[:40]:
        for a, b in conjugate_position_pairs(u):
            outer, inner = split(u, a, b)
            assert sorted(outer + inner) == list(range(N))
            for part in (outer, inner):
                assert all(
                    part[(i + 1) % len(part)] in successor_oracle(N, d, part[i])
                    for i in range(len(part))
                )


# -- apply_move --------------------------------------------------------------

@pytest.mark.parametrize("N,d,u,move,expected", [
    (8, 2, U8, ((2, 6), (5, 7)), [0, 1, 2, 5, 3, 7, 6, 4]),
    (6, 3, U63, ((2, 6), (6, 1)), [0, 1, 5, 3, 4, 2]),
    (16, 2, [0, 1, 3, 7, 15, 14, 13, 11, 6, 12, 9, 2, 5, 10, 4, 8], ((7, 13), (10, 15)),
     [0, 1, 3, 7, 15, 14, 13, 10, 4, 9, 2, 5, 11, 6, 12, 8]),
])
def test_apply_move_examples(N, d, u, move, expected):
    src = validate(DigraphParams(N, d), u)
    assert list(apply_move(src, CrossJoinMove(*move))) == expected


def test_move_from_vertices():
    u = validate(DigraphParams(8, 2), U8)
    m = move_from_vertices(u, (1, 5), (6, 2))
    assert m == CrossJoinMove((2, 6), (5, 7))
    assert str(apply_move(u, m)) == "0,1,2,5,3,7,6,4"
    u63 = validate(DigraphParams(6, 3), U63)
    assert move_from_vertices(u63, (2, 4), (4, 0)) == CrossJoinMove((2, 6), (6, 1))
    with pytest.raises(InvalidMoveError, match="span"):
        move_from_vertices(u, (1, 5), (0, 4))


def test_move_text_round_trip():
    m = CrossJoinMove((7, 13), (10, 15))
    assert str(m) == "cross=7,13;join=10,15"
    assert CrossJoinMove.parse(str(m)) == m
    with pytest.raises(DomainError):
        CrossJoinMove.parse("cross=1;join=2,3")


@pytest.mark.parametrize("move,msg", [
    (((2, 5), (3, 7)), "cross vertices"),
    (((2, 6), (2, 7)), "p_in"),
    (((2, 6), (5, 4)), "p_out"),
    (((2, 6), (4, 7)), "join vertices"),
])
def test_check_move_names_violation(move, msg):
    u = validate(DigraphParams(8, 2), U8)
    with pytest.raises(InvalidMoveError, match=msg):
        check_move(u, CrossJoinMove(*move))


# -- enumerate_moves / neighbors --------------------------------------------

def test_enumerate_moves_examples():
    assert enumerate_moves(validate(DigraphParams(4, 2), [0, 1, 3, 2])) == []
    assert CrossJoinMove((2, 6), (5, 7)) in enumerate_moves(validate(DigraphParams(8, 2), U8))
    assert CrossJoinMove((2, 6), (6, 1)) in enumerate_moves(validate(DigraphParams(6, 3), U63))


def test_enumerate_moves_sorted_and_valid(p16):
    for u in all_cycles(16, 2):
        moves = enumerate_moves(u)
        keys = [(*m.cross, *m.join) for m in moves]
        assert keys == sorted(keys) and len(set(keys)) == len(keys)
        for m in moves:
            w = apply_move(u, m)
            assert w != u
            assert validate(p16, list(w)) == w


@pytest.mark.parametrize("N,d", [(4, 2), (8, 2), (16, 2), (6, 3), (9, 3), (8, 4), (12, 4)])
def test_neighbors_match_double_swap_oracle(N, d):
    for u in all_cycles(N, d)[:30]:
        assert {w.vertices for w in neighbors(u)} == double_swap_oracle(u)


def test_neighbor_moves_reach_their_cycle(p16):
    for u in all_cycles(16, 2):
        pairs = neighbor_moves(u)
        assert [w for _, w in pairs] == neighbors(u)
        for m, w in pairs:
            assert apply_move(u, m) == w


def test_binary_moves_use_four_positions():
    for N in (8, 16, 32):
        for u in all_cycles(N, 2)[:64]:
            for m in enumerate_moves(u):
                assert len({*m.cross, *m.join}) == 4


def test_involution_all_moves_16():
    # The result's cross positions are the original join positions and vice versa.
    for u in all_cycles(16, 2):
        for m in enumerate_moves(u):
            w = apply_move(u, m)
            a, b = sorted(w.position_of(u.vertices[p - 1]) for p in m.join)
            back = [x for x in enumerate_moves(w) if x.cross == (a, b)]
            assert back, (u, m)
            inv = [
                x for x in back
                if {w.vertex_at(p) for p in x.join} == {u.vertices[p - 1] for p in m.cross}
            ]
            assert len(inv) == 1 and apply_move(w, inv[0]) == u


@pytest.mark.parametrize("N,d", [(8, 2), (16, 2), (9, 3), (12, 3)])
def test_adjacency_symmetric(N, d):
    cs = all_cycles(N, d)
    for u in cs:
        for w in neighbors(u):
            assert are_adjacent(w, u)


def test_neighbor_count_binary_16():
    assert sorted(neighbor_count(u) for u in all_cycles(16, 2)) == [7] * 8 + [10] * 8


def test_histograms():
    assert neighbor_histogram(DigraphParams(16, 2)) == {7: 8, 10: 8}
    dense = dense_histogram({7: 8, 10: 8})
    assert dense == {7: 8, 8: 0, 9: 0, 10: 8}
    assert histogram_csv(dense) == "n,f\n7,8\n8,0\n9,0\n10,8\n"
    assert neighbor_histogram(DigraphParams(9, 3)) == {11: 24}


def test_histogram_parallel_matches_serial():
    p = DigraphParams(16, 2)
    assert neighbor_histogram(p, workers=3) == neighbor_histogram(p)


def test_census_golden_is_well_formed():
    rows = [ln.split(",") for ln in golden("census_N32_d2.csv").splitlines()[1:]]
    ns = [int(n) for n, _ in rows]
    assert ns == list(range(31, 65))
    assert sum(int(f) for _, f in rows) == 2048


# -- cross-join graph --------------------------------------------------------

def _components_union_find(N, d):
    cs = [c.vertices for c in all_cycles(N, d)]
    parent = list(range(len(cs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    index = {c: i for i, c in enumerate(cs)}
    for i, c in enumerate(cs):
        for w in double_swap_oracle(all_cycles(N, d)[i]):
            parent[find(i)] = find(index[w])
    return len({find(i) for i in range(len(cs))})


@pytest.mark.parametrize("N,d", [(4, 2), (6, 2), (8, 2), (10, 2), (6, 3), (9, 3), (8, 4)])
def test_connectivity_against_union_find(N, d):
    g = build_crossjoin_graph(DigraphParams(N, d))
    conn = is_connected(g)
    assert conn.components == _components_union_find(N, d)
    assert conn.connected


def test_graph_structure_16(p16):
    g = build_crossjoin_graph(p16)
    assert len(g) == 16
    assert sorted(g.degree(i) for i in range(16)) == [7] * 8 + [10] * 8
    assert all(i not in g.adjacency[i] for i in range(16))
    assert len(g.edges()) == (8 * 7 + 8 * 10) // 2
    assert g.to_dot().startswith("graph")
    assert '"edges"' in g.to_json()


def test_graph_small_cases():
    g4 = build_crossjoin_graph(DigraphParams(4, 2))
    assert len(g4) == 1 and is_connected(g4) == (True, 1)
    assert len(build_crossjoin_graph(DigraphParams(8, 2))) == 2
    assert len(build_crossjoin_graph(DigraphParams(6, 3))) == 4


def test_graph_budget():
    from crossjoin.errors import BudgetExceededError

    with pytest.raises(BudgetExceededError):
        build_crossjoin_graph(DigraphParams(32, 2), budget=100)


def test_empty_graph_is_connected_by_convention():
    g = build_crossjoin_graph(DigraphParams(4, 2))
    empty = type(g)(g.params, [], [])
    assert is_connected(empty) == (True, 0)


# -- distance-decreasing paths -----------------------------------------------

def test_path_examples():
    p = DigraphParams(8, 2)
    u, v = validate(p, U8), validate(p, [0, 1, 2, 5, 3, 7, 6, 4])
    assert crossjoin_path(u, u) == []
    path = crossjoin_path(u, v)
    assert len(path) == 1 and path[0][1] == v
    assert apply_move(u, path[0][0]) == v


@pytest.mark.parametrize("N,d", [(8, 2), (16, 2), (9, 3), (12, 3)])
def test_path_exhaustive(N, d):
    stats = Counter()
    cs = all_cycles(N, d)
    for u in cs:
        for v in cs:
            path = crossjoin_path(u, v, stats)
            assert len(path) <= N
            cur = u
            for m, w in path:
                assert apply_move(cur, m) == w
                assert distance(w, v) < distance(cur, v)
                cur = w
            assert cur == v
    assert stats["fallback"] == 0


def test_path_rejects_mismatch():
    a = all_cycles(8, 2)[0]
    b = all_cycles(16, 2)[0]
    with pytest.raises(DomainError):
        crossjoin_path(a, b)


def test_ops_require_divisibility():
    c = next(enumerate_cycles(DigraphParams(10, 4)))
    for fn in (enumerate_moves, neighbors):
        with pytest.raises(UnsupportedOperationError):
            fn(c)
    with pytest.raises(UnsupportedOperationError):
        crossjoin_path(c, c)
    with pytest.raises(UnsupportedOperationError):
        neighbor_histogram(DigraphParams(10, 4))
