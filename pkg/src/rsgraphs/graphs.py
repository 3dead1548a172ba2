"""Graphs, induced matchings, matching covers, and their verifiers.

Adjacency is stored as one Python-int bitmask per vertex, which keeps all
set algebra exact and makes the induced-matching checks O(|M| * N/64)
instead of O(|M|^2).  An induced matching M in G is a matching such that no
edge of G joins endpoints of two distinct edges of M; a cover is a list of
matchings that partitions E(G).
"""

from dataclasses import dataclass, field

from .errors import InternalCheckError, ParameterError

Edge = tuple[int, int]
Matching = list[Edge]


def bits_of(mask: int):
    """Yield set-bit positions of mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Undirected graph on vertex ids 0..n-1 with bitmask adjacency rows."""

    __slots__ = ("n", "_rows", "_m")

    def __init__(self, n: int, rows: list[int], edge_count: int | None = None):
        # Internal constructor; rows are trusted.  Use from_edges / from_adjacency_rows.
        self.n = n
        self._rows = rows
        if edge_count is None:
            edge_count = sum(r.bit_count() for r in rows) // 2
        self._m = edge_count

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        if n < 0:
            raise ParameterError("vertex count must be nonnegative")
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u},{v}) outside vertex range 0..{n - 1}")
            if u == v:
                raise ParameterError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows)

    @classmethod
    def from_adjacency_rows(cls, rows: list[int]) -> "Graph":
        n = len(rows)
        full = (1 << n) - 1
        for u, r in enumerate(rows):
            if r & ~full:
                raise ParameterError(f"adjacency row {u} has bits outside 0..{n - 1}")
            if (r >> u) & 1:
                raise ParameterError(f"self-loop at vertex {u}")
        for u in range(n):
            for v in bits_of(rows[u]):
                if not (rows[v] >> u) & 1:
                    raise ParameterError(f"asymmetric adjacency between {u} and {v}")
        return cls(n, list(rows))

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and 0 <= v < self.n and bool((self._rows[u] >> v) & 1)

    def neighbors_mask(self, u: int) -> int:
        return self._rows[u]

    def neighbors(self, u: int) -> list[int]:
        return list(bits_of(self._rows[u]))

    def degree(self, u: int) -> int:
        return self._rows[u].bit_count()

    def max_degree(self) -> int:
        return max((r.bit_count() for r in self._rows), default=0)

    @property
    def edge_count(self) -> int:
        return self._m

    def edges(self):
        """Yield edges (u, v) with u < v in ascending lexicographic order."""
        for u in range(self.n):
            for v in bits_of(self._rows[u] >> (u + 1)):
                yield (u, u + 1 + v)

    def __eq__(self, other):
        return (
            isinstance(other, Graph) and self.n == other.n and self._rows == other._rows
        )

    def __repr__(self):
        return f"Graph(n={self.n}, m={self._m})"


class BipartiteGraph:
    """Bipartite graph; edges are ordered (left, right) pairs with independent id spaces."""

    __slots__ = ("left_n", "right_n", "_rows", "_cols", "_m")

    def __init__(self, left_n: int, right_n: int, rows: list[int]):
        self.left_n = left_n
        self.right_n = right_n
        self._rows = rows
        cols = [0] * right_n
        for u, r in enumerate(rows):
            for v in bits_of(r):
                cols[v] |= 1 << u
        self._cols = cols
        self._m = sum(r.bit_count() for r in rows)

    @classmethod
    def from_edges(cls, left_n: int, right_n: int, edges) -> "BipartiteGraph":
        rows = [0] * left_n
        for u, v in edges:
            if not (0 <= u < left_n and 0 <= v < right_n):
                raise ParameterError(f"bipartite edge ({u},{v}) out of range")
            rows[u] |= 1 << v
        return cls(left_n, right_n, rows)

    def has_edge(self, u: int, v: int) -> bool:
        return (
            0 <= u < self.left_n
            and 0 <= v < self.right_n
            and bool((self._rows[u] >> v) & 1)
        )

    def right_neighbors_mask(self, u: int) -> int:
        return self._rows[u]

    def left_neighbors_mask(self, v: int) -> int:
        return self._cols[v]

    @property
    def edge_count(self) -> int:
        return self._m

    def edges(self):
        for u in range(self.left_n):
            for v in bits_of(self._rows[u]):
                yield (u, v)

    def __eq__(self, other):
        return (
            isinstance(other, BipartiteGraph)
            and (self.left_n, self.right_n) == (other.left_n, other.right_n)
            and self._rows == other._rows
        )

    def __repr__(self):
        return f"BipartiteGraph({self.left_n}x{self.right_n}, m={self._m})"


@dataclass
class MatchingCover:
    """A list of matchings with a derived edge -> matching-ordinal index.

    The index always reflects the first occurrence of each edge, so it stays
    consistent even while a defective cover is being inspected.
    """

    matchings: list[Matching]
    edge_index: dict[Edge, int] = field(init=False, repr=False)

    def __post_init__(self):
        index: dict[Edge, int] = {}
        for i, m in enumerate(self.matchings):
            for e in m:
                index.setdefault(e, i)
        self.edge_index = index

    @classmethod
    def from_matchings(cls, matchings, normalize: bool = True) -> "MatchingCover":
        ms = []
        for m in matchings:
            if normalize:
                ms.append([(u, v) if u <= v else (v, u) for u, v in m])
            else:
                ms.append([(u, v) for u, v in m])
        return cls(ms)

    @property
    def t(self) -> int:
        return len(self.matchings)

    def sizes(self) -> list[int]:
        return [len(m) for m in self.matchings]


@dataclass
class CoverReport:
    valid: bool
    violations: list[tuple]
    r_min: int
    r_max: int
    t: int


def is_induced_matching(g: Graph, m: Matching) -> bool:
    """True iff m is a matching in g and no g-edge joins distinct edges of m.

    Every listed edge must be an edge of g; anything else signals a malformed
    cover and raises ParameterError rather than returning False.
    """
    seen = 0
    for u, v in m:
        if not g.has_edge(u, v):
            raise ParameterError(f"pair ({u},{v}) is not an edge of the graph")
        if (seen >> u) & 1 or (seen >> v) & 1:
            return False
        seen |= (1 << u) | (1 << v)
    for u, v in m:
        # Within the endpoint set, each endpoint may see only its partner.
        if g.neighbors_mask(u) & seen != 1 << v:
            return False
        if g.neighbors_mask(v) & seen != 1 << u:
            return False
    return True


def is_induced_matching_bipartite(bg: BipartiteGraph, m: Matching) -> bool:
    """Bipartite analogue: no bg-edge may join endpoints of distinct edges of m."""
    left = right = 0
    for u, v in m:
        if not bg.has_edge(u, v):
            raise ParameterError(f"pair ({u},{v}) is not an edge of the bipartite graph")
        if (left >> u) & 1 or (right >> v) & 1:
            return False
        left |= 1 << u
        right |= 1 << v
    for u, v in m:
        if bg.right_neighbors_mask(u) & right != 1 << v:
            return False
        if bg.left_neighbors_mask(v) & left != 1 << u:
            return False
    return True


def _matching_violations(i: int, m: Matching, neighbor_mask, has_edge, violations):
    """Collect shared-endpoint and cross-edge defects of matching i."""
    owner: dict[int, Edge] = {}
    pmask = 0
    for e in m:
        for x in e:
            if x in owner and owner[x] != e:
                violations.append(("shared-endpoint", (i, x)))
            owner.setdefault(x, e)
            pmask |= 1 << x
    if any(e[0] == e[1] for e in m):  # self-pairs never arise from valid graphs
        return
    reported = set()
    for u, v in m:
        if not has_edge(u, v):
            continue
        for a, b in ((u, v), (v, u)):
            stray = neighbor_mask(a) & pmask & ~(1 << b) & ~(1 << a)
            for c in bits_of(stray):
                other = owner[c]
                if other == (u, v):
                    continue
                key = (i, min((u, v), other), max((u, v), other))
                if key not in reported:
                    reported.add(key)
                    violations.append(("cross-edge", (i, key[1], key[2])))


def verify_cover(g: Graph, c: MatchingCover) -> CoverReport:
    """Check that c's matchings are induced in g and partition E(g) exactly.

    All defects are reported as (kind, witness) tuples; nothing raises.
    Kinds: shared-endpoint, cross-edge, multiply-covered, uncovered-edge,
    edge-not-in-graph.
    """
    violations: list[tuple] = []
    locs: dict[Edge, list[int]] = {}
    for i, m in enumerate(c.matchings):
        for u, v in m:
            e = (u, v) if u <= v else (v, u)
            if not g.has_edge(*e):
                violations.append(("edge-not-in-graph", (i, e)))
            else:
                locs.setdefault(e, []).append(i)
        _matching_violations(i, m, g.neighbors_mask, g.has_edge, violations)
    for e, where in sorted(locs.items()):
        if len(where) > 1:
            violations.append(("multiply-covered", (e, tuple(where))))
    for e in g.edges():
        if e not in locs:
            violations.append(("uncovered-edge", e))
    sizes = c.sizes()
    return CoverReport(
        valid=not violations,
        violations=violations,
        r_min=min(sizes, default=0),
        r_max=max(sizes, default=0),
        t=c.t,
    )


def verify_cover_bipartite(bg: BipartiteGraph, c: MatchingCover) -> CoverReport:
    """verify_cover for bipartite graphs; matchings hold ordered (left, right) pairs."""
    violations: list[tuple] = []
    locs: dict[Edge, list[int]] = {}
    for i, m in enumerate(c.matchings):
        owner_l: dict[int, Edge] = {}
        owner_r: dict[int, Edge] = {}
        lmask = rmask = 0
        for e in m:
            u, v = e
            if not bg.has_edge(u, v):
                violations.append(("edge-not-in-graph", (i, e)))
            else:
                locs.setdefault(e, []).append(i)
            if u in owner_l and owner_l[u] != e:
                violations.append(("shared-endpoint", (i, ("left", u))))
            if v in owner_r and owner_r[v] != e:
                violations.append(("shared-endpoint", (i, ("right", v))))
            owner_l.setdefault(u, e)
            owner_r.setdefault(v, e)
            lmask |= 1 << u
            rmask |= 1 << v
        reported = set()
        for u, v in m:
            if not bg.has_edge(u, v):
                continue
            for c_r in bits_of(bg.right_neighbors_mask(u) & rmask & ~(1 << v)):
                other = owner_r[c_r]
                key = (i, min((u, v), other), max((u, v), other))
                if key not in reported:
                    reported.add(key)
                    violations.append(("cross-edge", (i, key[1], key[2])))
            for c_l in bits_of(bg.left_neighbors_mask(v) & lmask & ~(1 << u)):
                other = owner_l[c_l]
                key = (i, min((u, v), other), max((u, v), other))
                if key not in reported:
                    reported.add(key)
                    violations.append(("cross-edge", (i, key[1], key[2])))
    for e, where in sorted(locs.items()):
        if len(where) > 1:
            violations.append(("multiply-covered", (e, tuple(where))))
    for e in bg.edges():
        if e not in locs:
            violations.append(("uncovered-edge", e))
    sizes = c.sizes()
    return CoverReport(
        valid=not violations,
        violations=violations,
        r_min=min(sizes, default=0),
        r_max=max(sizes, default=0),
        t=c.t,
    )


def greedy_induced_matching_cover(g: Graph) -> MatchingCover:
    """First-fit cover of E(g) by induced matchings.

    Edges are processed in ascending (min, max) order; each goes to the
    lowest-index matching it does not conflict with.  An edge conflicts with
    a matching if it shares an endpoint with it or a g-edge joins them, so at
    most 2d-2 + (2d-2)(d-1) < 2d^2 matchings are ever blocked and the result
    uses at most 2 * max_degree^2 matchings.
    """
    matchings: list[Matching] = []
    masks: list[int] = []  # endpoint bitmask per matching
    for u, v in g.edges():
        conflict = g.neighbors_mask(u) | g.neighbors_mask(v) | (1 << u) | (1 << v)
        for i, pm in enumerate(masks):
            if pm & conflict == 0:
                matchings[i].append((u, v))
                masks[i] |= (1 << u) | (1 << v)
                break
        else:
            matchings.append([(u, v)])
            masks.append((1 << u) | (1 << v))
    d = g.max_degree()
    if len(matchings) > 2 * d * d:
        raise InternalCheckError(
            f"greedy cover used {len(matchings)} matchings, above the 2d^2 bound {2 * d * d}"
        )
    return MatchingCover.from_matchings(matchings)


def complement_degree(g: Graph, v: int) -> int:
    """Degree of v in the complement graph: n - 1 - deg(v)."""
    if not 0 <= v < g.n:
        raise ParameterError(f"vertex {v} out of range")
    return g.n - 1 - g.degree(v)


def bipartite_double(g: Graph) -> BipartiteGraph:
    """Left/right duplication of g: (u_left, v_right) is an edge iff uv in E(g)."""
    return BipartiteGraph(g.n, g.n, [g.neighbors_mask(u) for u in range(g.n)])


def doubled_matchings(c: MatchingCover) -> list[Matching]:
    """Image of each matching under duplication: uv becomes (u,v) and (v,u)."""
    out = []
    for m in c.matchings:
        bm = []
        for u, v in m:
            bm.append((u, v))
            bm.append((v, u))
        out.append(sorted(bm))
    return out


# ---------------------------------------------------------------------------
# text formats

def write_edge_list(g: Graph, path: str) -> None:
    """First line "N M", then one "u v" line per edge with u < v, ascending."""
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.edge_count}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def read_edge_list(path: str) -> Graph:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ParameterError(f"{path}: malformed header, expected 'N M'")
        n, m = int(header[0]), int(header[1])
        edges = []
        for line in fh:
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParameterError(f"{path}: malformed edge line {line!r}")
            u, v = int(parts[0]), int(parts[1])
            if not u < v:
                raise ParameterError(f"{path}: edge ({u},{v}) must satisfy u < v")
            edges.append((u, v))
    if len(edges) != m:
        raise ParameterError(f"{path}: header claims {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def write_cover(c: MatchingCover, path: str) -> None:
    """One line per matching: "i: u1-v1 u2-v2 ..." with i the ordinal."""
    with open(path, "w") as fh:
        for i, m in enumerate(c.matchings):
            fh.write(f"{i}:" + "".join(f" {u}-{v}" for u, v in m) + "\n")


def read_cover(path: str) -> MatchingCover:
    matchings = []
    with open(path) as fh:
        for lineno, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            head, _, rest = line.partition(":")
            if int(head) != len(matchings):
                raise ParameterError(f"{path}:{lineno + 1}: matching ordinals must be sequential")
            m = []
            for tok in rest.split():
                us, _, vs = tok.partition("-")
                m.append((int(us), int(vs)))
            matchings.append(m)
    return MatchingCover.from_matchings(matchings, normalize=False)
