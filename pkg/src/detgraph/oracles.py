"""Independent brute-force references for testing the algebraic algorithms.

Everything here works on plain integers over explicit edge lists, shares no
arithmetic with the subject modules, and favors obviousness over speed.
Sizes are capped because several routines are exponential by design.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .graphs import Graph

INF = float("inf")


class TooLarge(ValueError):
    """Instance exceeds the oracle's deliberate size cap."""


@dataclass
class OracleReport:
    instance: str
    quantity: str
    oracle_value: object
    subject_value: object

    @property
    def match(self) -> bool:
        return self.oracle_value == self.subject_value

    def to_json(self) -> str:
        return json.dumps(
            {"instance": self.instance, "quantity": self.quantity,
             "oracle": self.oracle_value, "subject": self.subject_value,
             "match": self.match},
            sort_keys=True, default=str)


# -- shortest paths ------------------------------------------------------------


def bellman_ford(g: Graph, s: int) -> Optional[list]:
    """Distances from s (index 0 unused, None = unreachable), or None when a
    negative cycle is reachable from s.  Undirected graphs are bidirected,
    which is only meaningful for nonnegative weights."""
    arcs = list(g.edges)
    if not g.directed:
        arcs = arcs + [(v, u, w) for u, v, w in g.edges]
    dist: list = [None] * (g.n + 1)
    dist[s] = 0
    for _ in range(g.n - 1):
        changed = False
        for u, v, w in arcs:
            if dist[u] is not None and (dist[v] is None or dist[u] + w < dist[v]):
                dist[v] = dist[u] + w
                changed = True
        if not changed:
            break
    for u, v, w in arcs:
        if dist[u] is not None and (dist[v] is None or dist[u] + w < dist[v]):
            return None
    return dist


def floyd_warshall(g: Graph) -> Optional[list]:
    """All-pairs distance table, or None when any negative cycle exists."""
    n = g.n
    d = [[INF] * (n + 1) for _ in range(n + 1)]
    for v in range(1, n + 1):
        d[v][v] = 0
    for u, v, w in g.edges:
        d[u][v] = min(d[u][v], w)
        if not g.directed:
            d[v][u] = min(d[v][u], w)
    for k in range(1, n + 1):
        dk = d[k]
        for i in range(1, n + 1):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(1, n + 1):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    for v in range(1, n + 1):
        if d[v][v] < 0:
            return None
    return [[None if x == INF else x for x in row] for row in d]


def simple_path_distances(g: Graph) -> list:
    """All-pairs minimum-weight *simple* path distances for an undirected
    graph, by DP over (vertex subset, last vertex).  This is the meaningful
    notion of distance when negative edges are present (walks could repeat a
    negative edge back and forth)."""
    if g.directed:
        raise ValueError("simple_path_distances wants an undirected graph")
    if g.n > 13:
        raise TooLarge(f"n={g.n} exceeds the subset-DP cap of 13")
    n = g.n
    nbrs: list[list[tuple[int, int]]] = [[] for _ in range(n + 1)]
    for u, v, w in g.edges:
        nbrs[u].append((v, w))
        nbrs[v].append((u, w))
    out = [[None] * (n + 1) for _ in range(n + 1)]
    full = (1 << n) - 1
    for s in range(1, n + 1):
        sbit = 1 << (s - 1)
        best = [[INF] * (n + 1) for _ in range(full + 1)]
        best[sbit][s] = 0
        for mask in range(sbit, full + 1):
            if not mask & sbit:
                continue
            row = best[mask]
            for last in range(1, n + 1):
                cost = row[last]
                if cost == INF:
                    continue
                for v, w in nbrs[last]:
                    bit = 1 << (v - 1)
                    if mask & bit:
                        continue
                    nmask = mask | bit
                    if cost + w < best[nmask][v]:
                        best[nmask][v] = cost + w
        orow = out[s]
        orow[s] = 0
        for mask in range(sbit, full + 1):
            if not mask & sbit:
                continue
            row = best[mask]
            for last in range(1, n + 1):
                if row[last] != INF and (orow[last] is None or row[last] < orow[last]):
                    orow[last] = row[last]
    return out


# -- cycles ---------------------------------------------------------------------


def enumerate_cycles(g: Graph, size_cap: int = 12) -> list[tuple[int, list[int]]]:
    """All simple cycles as (weight, vertex list), sorted by weight.

    Directed cycles (length >= 2) are listed once, rooted at their smallest
    vertex.  Undirected cycles need length >= 3 and are listed once by
    forcing the second vertex below the last.
    """
    if g.n > size_cap:
        raise TooLarge(f"n={g.n} exceeds the enumeration cap of {size_cap}")
    nbrs: list[list[tuple[int, int]]] = [[] for _ in range(g.n + 1)]
    for u, v, w in g.edges:
        nbrs[u].append((v, w))
        if not g.directed:
            nbrs[v].append((u, w))
    cycles: list[tuple[int, list[int]]] = []
    for start in range(1, g.n + 1):
        stack = [(start, [start], 0)]
        while stack:
            node, path, cost = stack.pop()
            for v, w in nbrs[node]:
                if v == start:
                    if g.directed:
                        if len(path) >= 2:
                            cycles.append((cost + w, list(path)))
                    else:
                        if len(path) >= 3 and path[1] < path[-1]:
                            cycles.append((cost + w, list(path)))
                    continue
                if v < start or v in path:
                    continue
                stack.append((v, path + [v], cost + w))
    cycles.sort(key=lambda t: (t[0], t[1]))
    return cycles


def min_cycle_weight(g: Graph) -> Optional[int]:
    cycles = enumerate_cycles(g)
    return cycles[0][0] if cycles else None


def has_negative_cycle(g: Graph) -> bool:
    if g.directed:
        return floyd_warshall(g) is None
    w = min_cycle_weight(g)
    return w is not None and w < 0


def vertices_on_cycles_up_to(g: Graph, t: int) -> set[int]:
    out: set[int] = set()
    for w, cyc in enumerate_cycles(g):
        if w <= t:
            out.update(cyc)
    return out


# -- matchings --------------------------------------------------------------------


@dataclass
class MatchingOracle:
    min_weight: Optional[int]
    second_weight: Optional[int]          # multiset convention
    allowed_edges: frozenset[tuple[int, int]]
    avoid_weight: dict[int, Optional[int]]  # v -> w(M(v))
    min_matchings: list[frozenset[tuple[int, int]]]


def matching_dp(g: Graph, enumerate_optima: bool = True,
                optima_cap: int = 100000) -> MatchingOracle:
    """Exact matching quantities by bitmask DP over vertex subsets."""
    if g.directed:
        raise ValueError("matching oracle wants an undirected graph")
    if g.n > 16:
        raise TooLarge(f"n={g.n} exceeds the bitmask-DP cap of 16")
    n = g.n
    full = (1 << n) - 1
    wmat = [[None] * n for _ in range(n)]
    adj_bits = [0] * n
    for u, v, w in g.edges:
        wmat[u - 1][v - 1] = w
        wmat[v - 1][u - 1] = w
        adj_bits[u - 1] |= 1 << (v - 1)
        adj_bits[v - 1] |= 1 << (u - 1)

    dp1 = [INF] * (full + 1)
    dp2 = [INF] * (full + 1)
    dp1[0] = 0
    for mask in range(3, full + 1):
        if bin(mask).count("1") % 2:
            continue
        v = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << v)
        cand = rest & adj_bits[v]
        b1 = b2 = INF
        wrow = wmat[v]
        while cand:
            ubit = cand & -cand
            cand ^= ubit
            u = ubit.bit_length() - 1
            sub = rest ^ ubit
            base = wrow[u]
            s1 = dp1[sub]
            if s1 != INF:
                x = base + s1
                if x < b1:
                    b1, b2 = x, b1
                elif x < b2:
                    b2 = x
                s2 = dp2[sub]
                if s2 != INF:
                    x = base + s2
                    if x < b1:
                        b1, b2 = x, b1
                    elif x < b2:
                        b2 = x
        dp1[mask] = b1
        dp2[mask] = b2

    if n % 2 or dp1[full] == INF:
        return MatchingOracle(min_weight=None, second_weight=None,
                              allowed_edges=frozenset(),
                              avoid_weight={v: None for v in range(1, n + 1)},
                              min_matchings=[])

    min_weight = dp1[full]
    second = dp2[full] if dp2[full] != INF else None

    allowed = frozenset(
        (u, v) for u, v, w in g.edges
        if dp1[full ^ (1 << (u - 1)) ^ (1 << (v - 1))] != INF
        and w + dp1[full ^ (1 << (u - 1)) ^ (1 << (v - 1))] == min_weight)

    avoid: dict[int, Optional[int]] = {}
    for v in range(1, n + 1):
        best = INF
        for u in range(1, n + 1):
            if u == v:
                continue
            x = dp1[full ^ (1 << (v - 1)) ^ (1 << (u - 1))]
            if x < best:
                best = x
        avoid[v] = None if best == INF else best

    optima: list[frozenset[tuple[int, int]]] = []
    if enumerate_optima:
        def rec(mask: int, acc: list[tuple[int, int]], cost: int):
            if len(optima) >= optima_cap:
                raise TooLarge("too many optimal matchings")
            if mask == 0:
                optima.append(frozenset(acc))
                return
            v = (mask & -mask).bit_length() - 1
            rest = mask ^ (1 << v)
            cand = rest & adj_bits[v]
            while cand:
                ubit = cand & -cand
                cand ^= ubit
                u = ubit.bit_length() - 1
                sub = rest ^ ubit
                if dp1[sub] != INF and cost + wmat[v][u] + dp1[sub] == min_weight:
                    rec(sub, acc + [(v + 1, u + 1)], cost + wmat[v][u])

        rec(full, [], 0)

    return MatchingOracle(min_weight=min_weight, second_weight=second,
                          allowed_edges=allowed, avoid_weight=avoid,
                          min_matchings=optima)


def enumerate_perfect_matchings(g: Graph, size_cap: int = 8) -> list[int]:
    """Sorted weights of every perfect matching, by plain recursion.

    Deliberately written without the DP above so the two matching oracles
    can check each other.
    """
    if g.directed:
        raise ValueError("matching enumeration wants an undirected graph")
    if g.n > size_cap:
        raise TooLarge(f"n={g.n} exceeds the recursion cap of {size_cap}")
    if g.n % 2:
        return []
    nbrs: dict[int, list[tuple[int, int]]] = {v: [] for v in range(1, g.n + 1)}
    for u, v, w in g.edges:
        nbrs[u].append((v, w))
        nbrs[v].append((u, w))
    weights: list[int] = []

    def rec(remaining: frozenset[int], cost: int):
        if not remaining:
            weights.append(cost)
            return
        v = min(remaining)
        for u, w in nbrs[v]:
            if u in remaining and u != v:
                rec(remaining - {v, u}, cost + w)

    rec(frozenset(range(1, g.n + 1)), 0)
    return sorted(weights)
