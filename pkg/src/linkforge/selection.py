"""Arithmetic selection engines.

* residue-class pigeonhole on prefix sums of integer vectors;
* the shift search: given ``f`` with no zero entry and vectors
  ``v_0..v_N`` with ``N >= 2**d``, find ``j < k`` with ``f + v_k - v_j``
  nonzero in every coordinate.

All tie-breaking is by least index so callers can record and replay choices.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence


class SelectionNotFound(LookupError):
    pass


@dataclass(frozen=True)
class WindowSelection:
    """Indices ``base < offsets[0] < ...`` whose prefix sums agree mod q."""
    base: int
    offsets: tuple[int, ...]
    residue: tuple[int, ...]

    @property
    def indices(self) -> tuple[int, ...]:
        return (self.base,) + self.offsets


def prefix_sums(vectors: Sequence[Sequence[int]], d: int | None = None) -> list[tuple[int, ...]]:
    if d is None:
        d = len(vectors[0]) if vectors else 0
    acc = (0,) * d
    out = [acc]
    for v in vectors:
        if len(v) != d:
            raise ValueError("all vectors must have the same length")
        acc = tuple(a + b for a, b in zip(acc, v))
        out.append(acc)
    return out


def zero_sum_window(values: Sequence[int], q: int) -> tuple[int, int]:
    """Least ``b``, then least ``a``, with ``sum(values[a:b]) % q == 0`` and ``0 <= a < b <= q``."""
    if q < 1:
        raise ValueError("q must be positive")
    if len(values) < q:
        raise ValueError(f"need at least q={q} values, got {len(values)}")
    first_seen = {0: 0}
    acc = 0
    for b in range(1, q + 1):
        acc = (acc + values[b - 1]) % q
        if acc in first_seen:
            return first_seen[acc], b
        first_seen[acc] = b
    raise AssertionError("pigeonhole guarantees a window")


def find_equal_residue_indices(vectors: Sequence[Sequence[int]], q: int, k: int,
                               d: int | None = None) -> WindowSelection:
    """First residue class of prefix sums ``s_0..s_M`` to collect ``k + 1`` members.

    Guaranteed to succeed when ``M + 1 > k * q**d``.
    """
    if q < 1 or k < 1:
        raise ValueError("q and k must be positive")
    buckets: dict[tuple[int, ...], list[int]] = {}
    for alpha, s in enumerate(prefix_sums(vectors, d)):
        r = tuple(x % q for x in s)
        members = buckets.setdefault(r, [])
        members.append(alpha)
        if len(members) == k + 1:
            return WindowSelection(members[0], tuple(members[1:]), r)
    raise SelectionNotFound(f"no residue class of prefix sums reaches {k + 1} members")


def _two_colour_keep(indices: list[int], values: list[int], forbidden: int) -> list[int]:
    """Larger colour class of the graph joining ``j < k`` when ``values[k] - values[j] == forbidden``."""
    m = len(indices)
    adj: list[list[int]] = [[] for _ in range(m)]
    for a in range(m):
        for b in range(a + 1, m):
            if values[b] - values[a] == forbidden:
                adj[a].append(b)
                adj[b].append(a)
    colour: list[int | None] = [None] * m
    for root in range(m):
        if colour[root] is not None:
            continue
        colour[root] = 0
        todo = deque([root])
        while todo:
            a = todo.popleft()
            for b in adj[a]:
                if colour[b] is None:
                    colour[b] = 1 - colour[a]
                    todo.append(b)
                elif colour[b] == colour[a]:
                    raise AssertionError("forbidden-difference graph is not bipartite")
    zeros = [indices[a] for a in range(m) if colour[a] == 0]
    ones = [indices[a] for a in range(m) if colour[a] == 1]
    # colour 0 always holds the smallest vertex, so ties go to it
    return zeros if len(zeros) >= len(ones) else ones


def find_nonvanishing_shift(f: Sequence[int], v: Sequence[Sequence[int]]) -> tuple[int, int]:
    """Indices ``j < k`` with every entry of ``f + v[k] - v[j]`` nonzero.

    Peels the highest coordinate first: keep the larger side of a 2-colouring
    of the forbidden-difference graph, then recurse; the last coordinate is
    settled among the first three surviving indices.
    """
    d = len(f)
    N = len(v) - 1
    if d < 1:
        raise ValueError("f must have at least one entry")
    if any(x == 0 for x in f):
        raise ValueError("every entry of f must be nonzero")
    if any(len(x) != d for x in v):
        raise ValueError("vectors must have the same length as f")
    if N < 2 ** d:
        raise ValueError(f"need N >= 2**d = {2 ** d}, got N = {N}")
    alive = list(range(N + 1))
    for c in range(d - 1, 0, -1):
        alive = _two_colour_keep(alive, [v[i][c] for i in alive], -f[c])
        assert len(alive) >= 2 ** c + 1
    i0, i1, i2 = alive[:3]
    # at most one of the three differences can equal -f[0]
    j, k = next(((j, k) for j, k in ((i0, i1), (i1, i2), (i0, i2)) if f[0] + v[k][0] - v[j][0] != 0), (None, None))
    if j is None:
        raise AssertionError("base case cannot fail for nonzero f")
    assert all(f[c] + v[k][c] - v[j][c] != 0 for c in range(d))
    return j, k


def brute_force_shift_oracle(f: Sequence[int], v: Sequence[Sequence[int]]) -> set[tuple[int, int]]:
    """Every valid ``(j, k)`` by exhaustive scan."""
    d = len(f)
    return {(j, k)
            for j in range(len(v)) for k in range(j + 1, len(v))
            if all(f[c] + v[k][c] - v[j][c] != 0 for c in range(d))}
