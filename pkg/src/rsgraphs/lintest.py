"""Graph-based linearity testing for Boolean functions on F_2^m.

One uniform point is drawn per vertex of a test graph; the test accepts iff
f(x_u) + f(x_v) = f(x_u + x_v) over every edge.  With the test graph an
(r, t)-induced-matching-cover graph, the acceptance probability of a function
at correlation d(f) from the linear functions is at most
exp(-r t / 8) + d(f)^(r/4).
"""

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ParameterError, ResourceLimitError
from .graphs import Graph

MAX_TRANSFORM_DIM = 24


@dataclass(frozen=True)
class BooleanFunction:
    """Truth table over F_2^m; table[x] is f at the point with bit i = x_i."""

    m: int
    table: np.ndarray

    def __post_init__(self):
        if self.m < 1:
            raise ParameterError(f"need m >= 1, got {self.m}")
        t = np.asarray(self.table, dtype=np.uint8)
        if t.shape != (1 << self.m,):
            raise ParameterError(f"table must have 2^{self.m} entries")
        if not np.isin(t, (0, 1)).all():
            raise ParameterError("table entries must be 0 or 1")
        object.__setattr__(self, "table", t)

    def __call__(self, x: int) -> int:
        return int(self.table[x])


def linear_function(m: int, coeffs: int) -> BooleanFunction:
    """f(x) = <coeffs, x> over F_2 (coeffs = 0 gives the zero function)."""
    xs = np.arange(1 << m, dtype=np.int64)
    table = np.zeros(1 << m, dtype=np.uint8)
    for i in range(m):
        if (coeffs >> i) & 1:
            table ^= ((xs >> i) & 1).astype(np.uint8)
    return BooleanFunction(m, table)


def and_function(m: int, arity: int = 2) -> BooleanFunction:
    """AND of the first `arity` coordinates, padded to m variables."""
    if not 1 <= arity <= m:
        raise ParameterError(f"need 1 <= arity <= m, got arity={arity}")
    xs = np.arange(1 << m, dtype=np.int64)
    mask = (1 << arity) - 1
    return BooleanFunction(m, ((xs & mask) == mask).astype(np.uint8))


def random_function(m: int, seed: int) -> BooleanFunction:
    rng = random.Random(seed)
    return BooleanFunction(
        m, np.array([rng.getrandbits(1) for _ in range(1 << m)], dtype=np.uint8)
    )


def walsh_correlation(f: BooleanFunction) -> Fraction:
    """d(f): the largest |correlation| of f with any linear function, exactly.

    Computed by a fast Walsh-Hadamard transform of (-1)^f; the result is
    max_a |W[a]| / 2^m as an exact rational.
    """
    if f.m > MAX_TRANSFORM_DIM:
        raise ResourceLimitError(f"m={f.m} exceeds the transform gate {MAX_TRANSFORM_DIM}")
    w = 1 - 2 * f.table.astype(np.int64)
    h = 1
    size = 1 << f.m
    while h < size:
        w = w.reshape(-1, 2 * h)
        a = w[:, :h].copy()
        b = w[:, h:].copy()
        w[:, :h] = a + b
        w[:, h:] = a - b
        h *= 2
    return Fraction(int(np.abs(w).max()), size)


def blr_trial(f: BooleanFunction, x: int, y: int) -> bool:
    """Single additivity probe: f(x) + f(y) == f(x + y)."""
    size = 1 << f.m
    if not (0 <= x < size and 0 <= y < size):
        raise ParameterError("probe points outside the domain")
    return (f(x) ^ f(y)) == f(x ^ y)


def graph_test(g: Graph, f: BooleanFunction, seed: int) -> bool:
    """One run of the graph test: uniform point per vertex, all edges must pass.

    Points are drawn from random.Random(seed) in ascending vertex order, so
    a run is reproducible from (graph, f, seed) alone.  An edgeless graph
    accepts vacuously.
    """
    rng = random.Random(seed)
    pts = [rng.getrandbits(f.m) for _ in range(g.n)]
    for u, v in g.edges():
        if (f(pts[u]) ^ f(pts[v])) != f(pts[u] ^ pts[v]):
            return False
    return True


def estimate_soundness(
    g: Graph, f: BooleanFunction, trials: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo acceptance frequency of the graph test, with binomial stderr.

    Vectorized over trials with numpy's seeded PCG64 stream; results replay
    bit-exact for a fixed (graph, f, trials, seed).
    """
    if trials < 1:
        raise ParameterError(f"need trials >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    pts = rng.integers(0, 1 << f.m, size=(trials, g.n), dtype=np.int64)
    acc = np.ones(trials, dtype=bool)
    table = f.table
    for u, v in g.edges():
        xu = pts[:, u]
        xv = pts[:, v]
        acc &= (table[xu] ^ table[xv]) == table[xu ^ xv]
        if not acc.any():
            break
    p_hat = float(acc.sum()) / trials
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / trials)
    return p_hat, stderr


def hw_bound(r: int, t: int, d_f) -> float:
    """Soundness bound exp(-r t / 8) + d_f^(r/4) for an (r, t) test graph.

    Floating point; comparisons against it should allow ~1e-12 slack.
    """
    if r < 1 or t < 1:
        raise ParameterError(f"need r, t >= 1, got r={r}, t={t}")
    d = float(d_f)
    if not 0.0 <= d <= 1.0:
        raise ParameterError(f"correlation must lie in [0, 1], got {d}")
    return math.exp(-r * t / 8.0) + d ** (r / 4.0)


def min_bound(N: int, d_f, r: int, t: int) -> float:
    """Best available soundness bound at concrete parameters.

    Minimum of the complete-graph term 2^(-C(N,2)) + d_f and the
    induced-matching-graph term hw_bound(r, t, d_f).  (With concrete r, t
    substituted for their asymptotic exponents, the two graph-based terms
    coincide.)
    """
    if N < 2:
        raise ParameterError(f"need N >= 2, got {N}")
    d = float(d_f)
    if not 0.0 <= d <= 1.0:
        raise ParameterError(f"correlation must lie in [0, 1], got {d}")
    complete = 2.0 ** -float(math.comb(N, 2)) + d
    return min(complete, hw_bound(r, t, d_f))


def load_table(path: str, m: int) -> BooleanFunction:
    """Read a truth table of 2^m characters '0'/'1' (whitespace ignored)."""
    with open(path) as fh:
        text = "".join(fh.read().split())
    if len(text) != 1 << m or set(text) - {"0", "1"}:
        raise ParameterError(f"{path}: expected 2^{m} characters of 0/1")
    return BooleanFunction(m, np.frombuffer(text.encode(), dtype=np.uint8) - ord("0"))
