"""Weighted graph model, file formats, and graph-to-matrix encoders.

Vertices are 1-based everywhere in the public API.  Undirected edges are
stored once with u < v.  Parallel edges collapse to the minimum-weight one
at construction time and self-loops are rejected; the algorithms in this
package assume simple graphs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dataclass_field
from typing import Iterable, Optional

from .field_poly import PrimeField
from .polymatrix import PolyMatrix
from .seeding import sigma_value


class GraphFormatError(ValueError):
    """Unparseable or inconsistent graph input."""


class NegativeCycleInNegativeEdges(ValueError):
    """The negative-weight edges alone contain a cycle, which is already a
    negative cycle; the split-graph construction refuses such inputs."""


class InvalidK(ValueError):
    """Cardinality parameter outside [0, n/2]."""


@dataclass(frozen=True)
class Graph:
    directed: bool
    n: int
    edges: tuple[tuple[int, int, int], ...]
    W: int

    @staticmethod
    def make(directed: bool, n: int, edges: Iterable[tuple[int, int, int]],
             W: Optional[int] = None) -> "Graph":
        """Validate, normalize (u < v when undirected), and dedupe edges."""
        if n < 1:
            raise GraphFormatError("graph needs at least one vertex")
        best: dict[tuple[int, int], int] = {}
        for u, v, w in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"edge ({u},{v}) out of range 1..{n}")
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u} not supported")
            if not directed and u > v:
                u, v = v, u
            key = (u, v)
            if key not in best or w < best[key]:
                best[key] = w
        edge_list = tuple(sorted((u, v, w) for (u, v), w in best.items()))
        max_abs = max((abs(w) for _, _, w in edge_list), default=0)
        if W is None:
            W = max_abs
        elif W < max_abs:
            raise GraphFormatError(f"declared weight bound {W} below max |w| {max_abs}")
        return Graph(directed=directed, n=n, edges=edge_list, W=W)

    # -- convenience views ----------------------------------------------------

    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        """Out-neighbors as v -> [(u, w)]; symmetric when undirected."""
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(1, self.n + 1)}
        for u, v, w in self.edges:
            adj[u].append((v, w))
            if not self.directed:
                adj[v].append((u, w))
        return adj

    def weight_map(self) -> dict[tuple[int, int], int]:
        return {(u, v): w for u, v, w in self.edges}

    def negative_edges(self) -> list[tuple[int, int, int]]:
        return [e for e in self.edges if e[2] < 0]

    def has_negative_weight(self) -> bool:
        return any(w < 0 for _, _, w in self.edges)


# -- file formats ---------------------------------------------------------------


def parse_graph_json(text: str) -> Graph:
    """{"directed": bool, "n": int, "edges": [[u, v, w], ...]}"""
    try:
        doc = json.loads(text)
        directed = bool(doc["directed"])
        n = int(doc["n"])
        edges = [(int(u), int(v), int(w)) for u, v, w in doc["edges"]]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"bad JSON graph: {exc}") from exc
    return Graph.make(directed, n, edges)


def parse_graph_text(text: str) -> Graph:
    """Header "n m directed|undirected", then m lines "u v w"."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines())
             if ln and not ln.startswith("#")]
    if not lines:
        raise GraphFormatError("empty graph file")
    head = lines[0].split()
    if len(head) != 3 or head[2] not in ("directed", "undirected"):
        raise GraphFormatError(f"bad header {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphFormatError(f"bad header {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise GraphFormatError(f"header promises {m} edges, file has {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise GraphFormatError(f"bad edge line {ln!r}")
        try:
            edges.append((int(parts[0]), int(parts[1]), int(parts[2])))
        except ValueError as exc:
            raise GraphFormatError(f"bad edge line {ln!r}") from exc
    return Graph.make(head[2] == "directed", n, edges)


def load_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_graph_json(text)
    return parse_graph_text(text)


def graph_to_json(g: Graph) -> str:
    return json.dumps(
        {"directed": g.directed, "n": g.n, "edges": [list(e) for e in g.edges]},
        sort_keys=True)


# -- variable numbering ----------------------------------------------------------


def edge_var(n: int, u: int, v: int) -> int:
    """Stable variable id for the (ordered) vertex pair (u, v)."""
    return u * n + v


def zvar_base(n: int) -> int:
    """First id of the auxiliary all-entries variable block (disjoint from
    every edge_var id, which is at most n*n + n)."""
    return n * n + n + 1


def zvar(n: int, i: int, j: int) -> int:
    return zvar_base(n) + (i - 1) * n + (j - 1)


# -- encoders ---------------------------------------------------------------------


@dataclass
class Encoding:
    """A PolyMatrix for a graph plus the bookkeeping to read results back."""

    matrix: PolyMatrix
    var_edge: dict[int, tuple[int, int]]
    shift: int          # exponent added to every edge entry
    graph: Graph
    seed: int


def _zero_base(n: int) -> list[list[list[int]]]:
    return [[[] for _ in range(n)] for _ in range(n)]


def encode_directed(g: Graph, seed: int, fld: Optional[PrimeField] = None) -> Encoding:
    """Entry (u, v) = sigma(x_uv) * y**(w + W) for each directed edge.

    The +W shift keeps exponents nonnegative; identity terms are added by
    callers via with_identity so the whole matrix carries a uniform y**W.
    """
    if not g.directed:
        raise ValueError("encode_directed wants a directed graph")
    fld = fld or PrimeField()
    n = g.n
    links: dict[int, list[tuple[int, int, int, int]]] = {}
    values: dict[int, int] = {}
    var_edge: dict[int, tuple[int, int]] = {}
    for u, v, w in g.edges:

        var = edge_var(n, u, v)
        links[var] = [(u - 1, v - 1, 1, w + g.W)]
        values[var] = sigma_value(seed, var, fld.p)
        var_edge[var] = (u, v)
    deg = max((w + g.W for _, _, w in g.edges), default=0)
    matrix = PolyMatrix(field=fld, n=n, base=_zero_base(n), deg_bound=max(deg, g.W),
                        var_links=links, var_values=values)
    return Encoding(matrix=matrix, var_edge=var_edge, shift=g.W, graph=g, seed=seed)


def encode_undirected_bidirected(g: Graph, seed: int,
                                 fld: Optional[PrimeField] = None) -> Encoding:
    """Both orientations of every undirected edge, with independent variables.

    Weights must be nonnegative, so no exponent shift is applied; degree d
    of the determinant directly encodes total cycle weight d.
    """
    if g.directed:
        raise ValueError("encode_undirected_bidirected wants an undirected graph")
    if g.has_negative_weight():
        raise ValueError("bidirected encoding requires nonnegative weights")
    fld = fld or PrimeField()
    n = g.n
    links: dict[int, list[tuple[int, int, int, int]]] = {}
    values: dict[int, int] = {}
    var_edge: dict[int, tuple[int, int]] = {}
    for u, v, w in g.edges:
        for a, b in ((u, v), (v, u)):
            var = edge_var(n, a, b)
            links[var] = [(a - 1, b - 1, 1, w)]
            values[var] = sigma_value(seed, var, fld.p)
            var_edge[var] = (a, b)
    deg = max((w for _, _, w in g.edges), default=0)
    matrix = PolyMatrix(field=fld, n=n, base=_zero_base(n), deg_bound=deg,
                        var_links=links, var_values=values)
    return Encoding(matrix=matrix, var_edge=var_edge, shift=0, graph=g, seed=seed)


def encode_tutte(g: Graph, seed: int, fld: Optional[PrimeField] = None) -> Encoding:
    """Skew-symmetric matching matrix: x at (u, v), -x at (v, u), for u < v.

    Negative weights are removed by a uniform +W exponent shift; every
    perfect matching then gains exactly (n/2) * W weight, every determinant
    monomial n * W, and callers subtract the shift back out.
    """
    if g.directed:
        raise ValueError("encode_tutte wants an undirected graph")
    fld = fld or PrimeField()
    n = g.n
    shift = g.W if g.has_negative_weight() else 0
    links: dict[int, list[tuple[int, int, int, int]]] = {}
    values: dict[int, int] = {}
    var_edge: dict[int, tuple[int, int]] = {}
    deg = 0
    for u, v, w in g.edges:
        var = edge_var(n, u, v)
        exp = w + shift
        deg = max(deg, exp)
        links[var] = [(u - 1, v - 1, 1, exp), (v - 1, u - 1, -1, exp)]
        values[var] = sigma_value(seed, var, fld.p)
        var_edge[var] = (u, v)
    matrix = PolyMatrix(field=fld, n=n, base=_zero_base(n), deg_bound=deg,
                        var_links=links, var_values=values)
    return Encoding(matrix=matrix, var_edge=var_edge, shift=shift, graph=g, seed=seed)


def add_z_links(enc: Encoding, pairs: Iterable[tuple[int, int]],
                exponent: int) -> dict[tuple[int, int], int]:
    """Graft zero-valued probe variables onto entries (i, j) of the encoding.

    The matrix values are unchanged (the probes substitute to 0), but the
    gradient machinery now exposes d det / d entry(i, j), i.e. adjugate
    entries, through the ordinary variable interface.  Returns the map
    (i, j) -> variable id.  Must be called before the matrix is analyzed.
    """
    M = enc.matrix
    n = M.n
    out = {}
    for i, j in pairs:
        var = zvar(n, i, j)
        M.var_links[var] = [(i - 1, j - 1, 1, exponent)]
        M.var_values[var] = 0
        out[(i, j)] = var
    return out


# -- split graph -------------------------------------------------------------------


@dataclass
class SplitGraph:
    """Gadget graph whose almost-perfect matchings model paths of the base
    graph, used for undirected graphs with negative weights.

    Each base vertex v becomes the pair v1, v2 joined by a zero-weight edge;
    each negative edge e = uv becomes a pair e1, e2 where the u-side edges
    u1 e1, u2 e1 carry w(e) and e1 e2, v1 e2, v2 e2 are free.  Nonnegative
    edges uv expand to the four cross edges u1v2, u2v1, u1v1, u2v2.
    """

    base: Graph
    graph: Graph
    vertex_map: dict[int, tuple[int, int]]
    neg_edge_map: dict[tuple[int, int], tuple[int, int]] = dataclass_field(default_factory=dict)


def _negative_edges_acyclic(g: Graph) -> bool:
    parent = list(range(g.n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, w in g.edges:
        if w >= 0:
            continue
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def build_split_graph(g: Graph) -> SplitGraph:
    if g.directed:
        raise ValueError("split graph wants an undirected graph")
    if not _negative_edges_acyclic(g):
        raise NegativeCycleInNegativeEdges(
            "negative edges contain a cycle (a negative cycle)")
    neg = g.negative_edges()
    n2 = 2 * g.n + 2 * len(neg)
    vertex_map = {v: (2 * v - 1, 2 * v) for v in range(1, g.n + 1)}
    neg_edge_map: dict[tuple[int, int], tuple[int, int]] = {}
    for k, (u, v, w) in enumerate(neg):
        base_idx = 2 * g.n + 2 * k
        neg_edge_map[(u, v)] = (base_idx + 1, base_idx + 2)
    edges: list[tuple[int, int, int]] = []
    for v in range(1, g.n + 1):
        v1, v2 = vertex_map[v]
        edges.append((v1, v2, 0))
    for u, v, w in g.edges:
        u1, u2 = vertex_map[u]
        v1, v2 = vertex_map[v]
        if w >= 0:
            edges.extend([(u1, v2, w), (u2, v1, w), (u1, v1, w), (u2, v2, w)])
        else:
            e1, e2 = neg_edge_map[(u, v)]
            edges.extend([(u1, e1, w), (u2, e1, w), (e1, e2, 0), (v1, e2, 0), (v2, e2, 0)])
    graph = Graph.make(directed=False, n=n2, edges=edges, W=g.W)
    return SplitGraph(base=g, graph=graph, vertex_map=vertex_map, neg_edge_map=neg_edge_map)


# -- matching problem reductions ------------------------------------------------------


@dataclass
class MatchingRecipe:
    """How to map a minimum-weight perfect matching of the transformed graph
    back to an optimum of the requested variant."""

    variant: str
    original: Graph
    negate: bool = False
    artificial: frozenset[int] = frozenset()
    synthetic_pairs: frozenset[tuple[int, int]] = frozenset()

    def unmap(self, edges: Iterable[tuple[int, int]]) -> tuple[set[tuple[int, int]], int]:
        """Strip artificial structure and restore original weights."""
        weights = self.original.weight_map()
        kept = set()
        for u, v in edges:
            if u > v:
                u, v = v, u
            if u in self.artificial or v in self.artificial:
                continue
            if (u, v) in self.synthetic_pairs:
                continue
            kept.add((u, v))
        total = sum(weights[e] for e in kept)
        return kept, total


def reduce_matching_variant(g: Graph, variant: str,
                            k: Optional[int] = None) -> tuple[Graph, MatchingRecipe]:
    """Rewrite a matching variant as a minimum-weight perfect matching input.

    Variants: "max-weight-perfect" (negate weights),
    "min-weight-cardinality-k" (n - 2k artificial vertices joined to every
    original vertex at weight 0), "max-weight" (pad to even order, complete
    with zero-weight edges, negate).
    """
    if g.directed:
        raise ValueError("matching variants want undirected graphs")
    if variant == "max-weight-perfect":
        flipped = Graph.make(False, g.n, [(u, v, -w) for u, v, w in g.edges])
        return flipped, MatchingRecipe(variant=variant, original=g, negate=True)

    if variant == "min-weight-cardinality-k":
        if k is None or not 0 <= 2 * k <= g.n:
            raise InvalidK(f"k must satisfy 0 <= 2k <= n, got {k}")
        extra = g.n - 2 * k
        if extra == 0:
            return g, MatchingRecipe(variant=variant, original=g)
        n_new = g.n + extra
        edges = list(g.edges)
        artificial = frozenset(range(g.n + 1, n_new + 1))
        for a in artificial:
            for v in range(1, g.n + 1):
                edges.append((v, a, 0))
        return (Graph.make(False, n_new, edges),
                MatchingRecipe(variant=variant, original=g, artificial=artificial))

    if variant == "max-weight":
        n_new = g.n + (g.n % 2)
        artificial = frozenset(range(g.n + 1, n_new + 1))
        present = {(u, v) for u, v, _ in g.edges}
        edges = [(u, v, -w) for u, v, w in g.edges]
        synthetic = set()
        for u in range(1, n_new + 1):
            for v in range(u + 1, n_new + 1):
                if (u, v) not in present:
                    edges.append((u, v, 0))
                    if v <= g.n:
                        synthetic.add((u, v))
        return (Graph.make(False, n_new, edges),
                MatchingRecipe(variant=variant, original=g, negate=True,
                               artificial=artificial,
                               synthetic_pairs=frozenset(synthetic)))

    raise ValueError(f"unknown matching variant {variant!r}")
