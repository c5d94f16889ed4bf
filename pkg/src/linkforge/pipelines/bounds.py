"""Vertex-count bounds."""
from __future__ import annotations

from ..simplicial import vsphere_upper_counts


def bound_key_q(q: int, n: int) -> int:
    """Vertices forcing a two-component link with linking number a nonzero multiple of q."""
    if q < 1 or n < 1:
        raise ValueError("q and n must be positive")
    if n == 1:
        return 24 * q * q
    return 4 * q * q * (2 * n + 4) + n + -(-(4 * q * q - 2) // n) + 1


def bound_keydisc(r: int, n: int, d: int, t: int) -> int:
    """Key-ring bound for a disc with ``d`` vertices and ``t`` boundary ridges.

    ``4 r^2 (2n + 4)`` vertices for the Hopf-linked pairs plus a sphere that
    is large for the disc and has ``4 r^2`` spare facets.
    """
    if min(r, n, d, t) < 1:
        raise ValueError("inputs must be positive")
    return 4 * r * r * (2 * n + 4) + vsphere_upper_counts(d, t, n, 4 * r * r)


def bipartite_stage_sizes(r: int, max_bits: int = 1 << 22) -> list[int]:
    """``m_k = (4r)^(2^(r-k)) / 4`` for ``k = 0..r``; ``m_0`` is the number of key rings."""
    if r < 1:
        raise ValueError("r must be positive")
    if (2 ** r) * (4 * r).bit_length() > max_bits:
        raise OverflowError(f"stage sizes for r = {r} are too large to materialise")
    return [(4 * r) ** (2 ** (r - k)) // 4 for k in range(r + 1)]


def bound_bipartite(r: int, n: int, d: int, t: int) -> int:
    """``m * keydisc(D, r) + r * vsphere(D, m)`` with ``m = m_0``."""
    m = bipartite_stage_sizes(r)[0]
    return m * bound_keydisc(r, n, d, t) + r * vsphere_upper_counts(d, t, n, m)


def vertex_budget_check(q: int, n: int) -> tuple[bool, int]:
    """Spare vertices per unused Hopf pair versus what enlarging one key needs.

    Compares ``(4q - 1)(n + 2)`` with ``2d - (n + 1)`` for a path of length q
    on ``d = q + n`` vertices; returns ``(holds, margin)``.
    """
    if q < 1 or n < 1:
        raise ValueError("q and n must be positive")
    d = q + n
    margin = (4 * q - 1) * (n + 2) - (2 * d - (n + 1))
    return margin >= 0, margin
