"""Shared-channel scheduling: N stations must deliver all N^2 directed messages.

K_{N,N} is partitioned into subchannels, each subchannel's edges covered by
bipartite induced matchings; one matching is broadcast per round.  A receiver
hears cleanly iff exactly one scheduled transmitter targets it this round and
no other scheduled transmitter is its in-neighbor within the subchannel
graph, which is exactly what inducedness guarantees.
"""

import random
from dataclasses import dataclass, field

from .codegraph import CodeGraphParams, two_channel_split
from .errors import InternalCheckError, ParameterError
from .geometric import GeomParams, build_geometric_graph, decompose_geometric
from .graphs import (
    BipartiteGraph,
    MatchingCover,
    bipartite_double,
    bits_of,
    doubled_matchings,
    is_induced_matching_bipartite,
    verify_cover_bipartite,
)

Matching = list[tuple[int, int]]


@dataclass
class ChannelPartition:
    """Subchannels (graph, cover) whose edge sets partition K_{N,N} exactly."""

    n_stations: int
    subchannels: list[tuple[BipartiteGraph, MatchingCover]]
    overflow_index: int | None = None  # subchannel holding unassigned pairs, if any
    attempts_used: int | None = None
    right_permutations: list[list[int]] | None = None

    def round_counts(self) -> list[int]:
        return [cover.t for _, cover in self.subchannels]


def validate_partition(cp: ChannelPartition) -> None:
    """Each subchannel cover must be valid and the edge sets must tile K_{N,N}."""
    n = cp.n_stations
    acc = [0] * n
    for idx, (bg, cover) in enumerate(cp.subchannels):
        if bg.left_n != n or bg.right_n != n:
            raise ParameterError(f"subchannel {idx} is not on {n}x{n} stations")
        rep = verify_cover_bipartite(bg, cover)
        if not rep.valid:
            raise ParameterError(
                f"subchannel {idx} cover invalid ({len(rep.violations)} violations)"
            )
        for u in range(n):
            row = bg.right_neighbors_mask(u)
            if acc[u] & row:
                raise ParameterError(f"subchannel {idx} overlaps an earlier one at left {u}")
            acc[u] |= row
    full = (1 << n) - 1
    for u in range(n):
        if acc[u] != full:
            raise ParameterError(f"left station {u} is missing pairs; not a partition")


def partition_two(p: CodeGraphParams) -> ChannelPartition:
    """Two subchannels: the doubled code graph with its flip-class cover, and
    the remainder (diagonal plus high-agreement pairs) as singleton rounds."""
    split = two_channel_split(p)
    singles = MatchingCover.from_matchings(
        [[e] for e in split.remainder.edges()], normalize=False
    )
    cp = ChannelPartition(
        n_stations=split.covered.left_n,
        subchannels=[(split.covered, split.cover), (split.remainder, singles)],
        overflow_index=1,
    )
    validate_partition(cp)
    return cp


def _assign_shifts(g, perms: list[list[int]]):
    """Assign each K_{N,N} pair to the lowest-index shift containing it.

    Pair (u, v) lies in shift i iff (u, perm_i^-1(v)) is a graph edge.  Returns
    per-shift assigned-row masks and the leftover (overflow) row masks.
    """
    n = g.n
    full = (1 << n) - 1
    taken = [0] * n
    assigned = []
    for perm in perms:
        rows = []
        for u in range(n):
            row = 0
            for v in bits_of(g.neighbors_mask(u)):
                row |= 1 << perm[v]
            rows.append(row & ~taken[u])
            taken[u] |= rows[-1]
        assigned.append(rows)
    overflow = [full & ~taken[u] for u in range(n)]
    return assigned, overflow


def partition_shifts(
    p: GeomParams,
    num_channels: int,
    seed: int,
    max_attempts: int = 1,
    g=None,
    cover: MatchingCover | None = None,
) -> ChannelPartition:
    """Partition K_{N,N} by random right-label shifts of the doubled band graph.

    Each channel is an independently drawn permutation of the right labels;
    pairs go to the lowest-index shift that contains them, and the shifted
    matchings of the geometric cover, restricted to each channel's assigned
    pairs, cover it.  Pairs in no shift go to a trailing overflow subchannel
    of singleton rounds.  Full draws are retried up to max_attempts seeking an
    empty overflow; on exhaustion the draw with the fewest overflow pairs is
    returned with overflow flagged.
    """
    if num_channels < 1:
        raise ParameterError(f"need num_channels >= 1, got {num_channels}")
    if max_attempts < 1:
        raise ParameterError(f"need max_attempts >= 1, got {max_attempts}")
    if g is None:
        g = build_geometric_graph(p)
    if cover is None:
        cover = decompose_geometric(p, g)
    base = doubled_matchings(cover)
    n = g.n
    rng = random.Random(seed)
    best = None  # (overflow_size, attempt_index, perms, assigned, overflow)
    for attempt in range(max_attempts):
        perms = []
        for _ in range(num_channels):
            perm = list(range(n))
            rng.shuffle(perm)
            perms.append(perm)
        assigned, overflow = _assign_shifts(g, perms)
        ov_size = sum(r.bit_count() for r in overflow)
        if best is None or ov_size < best[0]:
            best = (ov_size, attempt, perms, assigned, overflow)
        if ov_size == 0:
            break
    ov_size, attempt, perms, assigned, overflow = best
    subchannels = []
    for i, perm in enumerate(perms):
        bg = BipartiteGraph(n, n, assigned[i])
        matchings = []
        for m in base:
            rest = [(u, perm[v]) for u, v in m if (assigned[i][u] >> perm[v]) & 1]
            if rest:
                rest.sort()
                if not is_induced_matching_bipartite(bg, rest):
                    raise InternalCheckError("restricted shifted matching not induced")
                matchings.append(rest)
        subchannels.append((bg, MatchingCover.from_matchings(matchings, normalize=False)))
    overflow_index = None
    if ov_size:
        bg = BipartiteGraph(n, n, overflow)
        singles = MatchingCover.from_matchings([[e] for e in bg.edges()], normalize=False)
        overflow_index = len(subchannels)
        subchannels.append((bg, singles))
    cp = ChannelPartition(
        n_stations=n,
        subchannels=subchannels,
        overflow_index=overflow_index,
        attempts_used=attempt + 1,
        right_permutations=perms,
    )
    validate_partition(cp)
    return cp


@dataclass
class Schedule:
    """Ordered rounds of (subchannel id, matching of (transmitter, receiver) pairs)."""

    n_stations: int
    num_subchannels: int
    rounds: list[tuple[int, Matching]]

    def per_subchannel_rounds(self) -> list[int]:
        counts = [0] * self.num_subchannels
        for i, _ in self.rounds:
            counts[i] += 1
        return counts

    def parallel_round_count(self) -> int:
        """Rounds needed if distinct subchannels may broadcast concurrently."""
        return max(self.per_subchannel_rounds(), default=0)


def build_schedule(cp: ChannelPartition, policy: str = "sequential") -> Schedule:
    """Flatten a partition into rounds; total rounds = sum of cover sizes either way."""
    if policy not in ("sequential", "round-robin"):
        raise ParameterError(f"unknown policy {policy!r}")
    rounds: list[tuple[int, Matching]] = []
    if policy == "sequential":
        for i, (_, cover) in enumerate(cp.subchannels):
            for m in cover.matchings:
                rounds.append((i, list(m)))
    else:
        queues = [list(cover.matchings) for _, cover in cp.subchannels]
        pos = 0
        while any(queues):
            if queues[pos]:
                rounds.append((pos, list(queues[pos].pop(0))))
            pos = (pos + 1) % len(queues)
    return Schedule(cp.n_stations, len(cp.subchannels), rounds)


@dataclass
class SimReport:
    delivered: int
    garbled_events: list[tuple]  # (round, subchannel, receiver, transmitters)
    rounds_used: int
    per_subchannel_rounds: list[int]
    double_deliveries: list[tuple] = field(default_factory=list)  # (round, u, v)


def simulate(s: Schedule, n_stations: int | None = None) -> SimReport:
    """Replay a schedule and count clean deliveries.

    Each subchannel's edge set is taken to be the union of its own rounds
    (for a valid partition schedule that is exactly the subchannel graph).
    Within a round, receiver v hears cleanly iff exactly one scheduled
    transmitter targets v and no other scheduled transmitter u' has (u', v)
    in the subchannel's edge set.
    """
    n = s.n_stations if n_stations is None else n_stations
    chan_cols: dict[int, list[int]] = {}
    for i, m in s.rounds:
        cols = chan_cols.setdefault(i, [0] * n)
        for u, v in m:
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"scheduled pair ({u},{v}) outside {n} stations")
            cols[v] |= 1 << u
    delivered: set[tuple[int, int]] = set()
    garbled: list[tuple] = []
    doubles: list[tuple] = []
    for rnd, (i, m) in enumerate(s.rounds):
        cols = chan_cols[i]
        targets: dict[int, set[int]] = {}
        tmask = 0
        for u, v in m:
            targets.setdefault(v, set()).add(u)
            tmask |= 1 << u
        for v in sorted(targets):
            us = sorted(targets[v])
            if len(us) > 1:
                garbled.append((rnd, i, v, tuple(us)))
                continue
            u = us[0]
            interferers = tmask & cols[v] & ~(1 << u)
            if interferers:
                garbled.append((rnd, i, v, (u, *bits_of(interferers))))
                continue
            if (u, v) in delivered:
                doubles.append((rnd, u, v))
            else:
                delivered.add((u, v))
    return SimReport(
        delivered=len(delivered),
        garbled_events=garbled,
        rounds_used=len(s.rounds),
        per_subchannel_rounds=s.per_subchannel_rounds(),
        double_deliveries=doubles,
    )


def meshulam_lower_bound(N: int, C: int) -> float:
    """Round lower bound N^(1 + 1/(2^C - 1)) for C channels (constant set to 1)."""
    if N < 1 or C < 1:
        raise ParameterError(f"need N, C >= 1, got N={N}, C={C}")
    return float(N) ** (1.0 + 1.0 / (2.0**C - 1.0))


def write_schedule(s: Schedule, path: str) -> None:
    """One line per round: "round <idx> chan <i>: u1>v1 u2>v2 ..."."""
    with open(path, "w") as fh:
        for idx, (i, m) in enumerate(s.rounds):
            fh.write(f"round {idx} chan {i}:" + "".join(f" {u}>{v}" for u, v in m) + "\n")


def read_schedule(path: str, n_stations: int | None = None) -> Schedule:
    rounds: list[tuple[int, Matching]] = []
    max_id = -1
    max_chan = -1
    with open(path) as fh:
        for lineno, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            head, _, rest = line.partition(":")
            parts = head.split()
            if len(parts) != 4 or parts[0] != "round" or parts[2] != "chan":
                raise ParameterError(f"{path}:{lineno + 1}: malformed round header")
            if int(parts[1]) != len(rounds):
                raise ParameterError(f"{path}:{lineno + 1}: round indices must be sequential")
            chan = int(parts[3])
            m = []
            for tok in rest.split():
                us, _, vs = tok.partition(">")
                u, v = int(us), int(vs)
                m.append((u, v))
                max_id = max(max_id, u, v)
            max_chan = max(max_chan, chan)
            rounds.append((chan, m))
    if n_stations is None:
        n_stations = max_id + 1
    return Schedule(n_stations, max_chan + 1, rounds)
