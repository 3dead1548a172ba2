"""Evaluation of a local-density sum against the N k / log N conjecture threshold.

For a partition P of the complete bipartite N x k edge set, with p_i the
degree of vertex i inside part p, the quantity

    sum_{i in U, j in V} min(1, sum_p p_i p_j / |p|)

is conjectured to be Omega(N k / log N).  Duplicating the code-based graph
into a bipartite graph H and taking its induced-matching cover plus singleton
parts for all non-H pairs keeps the sum near t + |non-H pairs|, far below the
threshold for good parameters: every induced-matching part contributes
exactly 1 to the H-restricted sum.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .codegraph import CodeGraphParams, two_channel_split
from .errors import InternalCheckError, ParameterError
from .graphs import BipartiteGraph, is_induced_matching_bipartite


@dataclass
class EdgePartition:
    """Partition of the complete bipartite edge set [N] x [k] into parts."""

    left_n: int
    right_n: int
    parts: list[list[tuple[int, int]]]

    def __post_init__(self):
        seen = set()
        for part in self.parts:
            if not part:
                raise ParameterError("empty parts are not allowed")
            for i, j in part:
                if not (0 <= i < self.left_n and 0 <= j < self.right_n):
                    raise ParameterError(f"pair ({i},{j}) outside {self.left_n}x{self.right_n}")
                if (i, j) in seen:
                    raise ParameterError(f"pair ({i},{j}) appears in two parts")
                seen.add((i, j))
        if len(seen) != self.left_n * self.right_n:
            raise ParameterError(
                f"parts cover {len(seen)} of {self.left_n * self.right_n} pairs"
            )

    def degree_tables(self):
        """Per-part sparse degree tables: (left: {i: deg}, right: {j: deg})."""
        tables = []
        for part in self.parts:
            ld: dict[int, int] = {}
            rd: dict[int, int] = {}
            for i, j in part:
                ld[i] = ld.get(i, 0) + 1
                rd[j] = rd.get(j, 0) + 1
            tables.append((ld, rd))
        return tables


def vempala_sum(ep: EdgePartition) -> Fraction:
    """sum_{i,j} min(1, sum_p deg_p(i) deg_p(j) / |p|) in exact rationals."""
    tables = ep.degree_tables()
    sizes = [len(part) for part in ep.parts]
    left_incidence: list[list[tuple[int, int]]] = [[] for _ in range(ep.left_n)]
    right_incidence: list[dict[int, int]] = [dict() for _ in range(ep.right_n)]
    for pid, (ld, rd) in enumerate(tables):
        for i, deg in ld.items():
            left_incidence[i].append((pid, deg))
        for j, deg in rd.items():
            right_incidence[j][pid] = deg
    one = Fraction(1)
    total = Fraction(0)
    for i in range(ep.left_n):
        inc = left_incidence[i]
        for j in range(ep.right_n):
            rj = right_incidence[j]
            s = Fraction(0)
            for pid, deg_i in inc:
                deg_j = rj.get(pid)
                if deg_j:
                    s += Fraction(deg_i * deg_j, sizes[pid])
            total += min(one, s)
    return total


def conjecture_threshold(N: int, k: int) -> float:
    """Threshold N k / ln N (leading constant set to 1, natural log; heuristic)."""
    if N < 2 or k < 1:
        raise ParameterError(f"need N >= 2 and k >= 1, got N={N}, k={k}")
    return N * k / math.log(N)


@dataclass
class CounterexampleParts:
    """Duplication graph H, its matching-derived parts, and singleton fill."""

    partition: EdgePartition
    h: BipartiteGraph
    matching_parts: int
    missing_pairs: int


def counterexample_partition(p: CodeGraphParams) -> CounterexampleParts:
    """Parts = doubled flip-class matchings of the code graph + singleton non-H pairs."""
    split = two_channel_split(p)
    h = split.covered
    parts: list[list[tuple[int, int]]] = [list(m) for m in split.cover.matchings]
    for m in parts:
        if not is_induced_matching_bipartite(h, m):
            raise InternalCheckError("matching part lost inducedness in H")
    singles = [[e] for e in split.remainder.edges()]
    ep = EdgePartition(h.left_n, h.right_n, parts + singles)
    return CounterexampleParts(
        partition=ep,
        h=h,
        matching_parts=len(parts),
        missing_pairs=len(singles),
    )


def per_part_identity(ep: EdgePartition, h: BipartiteGraph) -> list[Fraction]:
    """H-restricted contribution sum_{(i,j) in H} deg_p(i) deg_p(j) / |p| per part.

    For a part that is an induced matching of H this is exactly 1.
    """
    out = []
    for part, (ld, rd) in zip(ep.parts, ep.degree_tables()):
        s = Fraction(0)
        for i, deg_i in ld.items():
            for j, deg_j in rd.items():
                if h.has_edge(i, j):
                    s += Fraction(deg_i * deg_j, len(part))
        out.append(s)
    return out


@dataclass
class ConjectureVerdict:
    total: Fraction
    threshold: float
    refutes: bool  # total < threshold: the partition beats the conjectured bound


def conjecture_verdict(ep: EdgePartition) -> ConjectureVerdict:
    """Compare the exact sum against N k / ln N; requires square instances."""
    if ep.left_n != ep.right_n:
        raise ParameterError("the verdict is defined for N = k instances")
    thr = conjecture_threshold(ep.left_n, ep.right_n)
    total = vempala_sum(ep)
    return ConjectureVerdict(total=total, threshold=thr, refutes=total < thr)


def write_partition(ep: EdgePartition, path: str) -> None:
    """One line per part: "part <id>: u>v u>v ..."."""
    with open(path, "w") as fh:
        for pid, part in enumerate(ep.parts):
            fh.write(f"part {pid}:" + "".join(f" {u}>{v}" for u, v in part) + "\n")
