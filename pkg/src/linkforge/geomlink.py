"""Straight-line embeddings of complete graphs in R^3 and linking numbers.

All predicates use exact rationals (:class:`fractions.Fraction`).  The
crossing count projects along +z after an optional rational rotation and sums
the signs of crossings where the first cycle passes over the second.  The
Gauss-integral oracle is the only floating point code path.
"""
from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

Point = tuple[Fraction, Fraction, Fraction]


class DegenerateProjection(ValueError):
    """Raised when the projection direction is not generic for a cycle pair."""


class OracleInconclusive(ArithmeticError):
    pass


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def collinear(a, b, c) -> bool:
    return _cross(_sub(b, a), _sub(c, a)) == (0, 0, 0)


def orient3d(a, b, c, d) -> int:
    det = _dot(_sub(b, a), _cross(_sub(c, a), _sub(d, a)))
    return (det > 0) - (det < 0)


def orient2d(a, b, c) -> int:
    det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (det > 0) - (det < 0)


def _as_point(p) -> Point:
    return tuple(Fraction(x) for x in p)


@dataclass(frozen=True)
class PLEmbedding:
    """Vertex ``i`` of K_N sits at ``coords[i]``; edges are straight segments."""
    coords: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_as_point(p) for p in self.coords))
        if len(set(self.coords)) != len(self.coords):
            raise ValueError("embedding points must be pairwise distinct")

    @property
    def N(self) -> int:
        return len(self.coords)

    def general_position_violation(self) -> tuple[int, ...] | None:
        """First collinear triple or coplanar quadruple, if any."""
        pts = self.coords
        for i, j, k in itertools.combinations(range(len(pts)), 3):
            if collinear(pts[i], pts[j], pts[k]):
                return (i, j, k)
        for quad in itertools.combinations(range(len(pts)), 4):
            if orient3d(*(pts[i] for i in quad)) == 0:
                return quad
        return None

    def in_general_position(self) -> bool:
        return self.general_position_violation() is None

    def to_json(self) -> dict:
        return {"N": self.N, "coords": [[str(x) for x in p] for p in self.coords]}

    @classmethod
    def from_json(cls, obj: dict) -> "PLEmbedding":
        coords = tuple(tuple(Fraction(x) for x in p) for p in obj["coords"])
        if "N" in obj and int(obj["N"]) != len(coords):
            raise ValueError("N does not match number of coordinates")
        return cls(coords)

    @classmethod
    def load(cls, path: str) -> "PLEmbedding":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def random_general_position_embedding(N: int, seed: int) -> PLEmbedding:
    """Seeded points on the integer grid ``[0, 64 N^2]^3`` in general position.

    Points are drawn one at a time; a draw is rejected if it repeats a point,
    is collinear with two earlier points, or coplanar with three.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    rng = random.Random(seed)
    hi = 64 * N * N
    pts: list[Point] = []
    while len(pts) < N:
        p = tuple(Fraction(rng.randint(0, hi)) for _ in range(3))
        if p in pts:
            continue
        if any(collinear(a, b, p) for a, b in itertools.combinations(pts, 2)):
            continue
        if any(orient3d(a, b, c, p) == 0 for a, b, c in itertools.combinations(pts, 3)):
            continue
        pts.append(p)
    return PLEmbedding(tuple(pts))


# Integer quaternions; each gives an exactly rational rotation matrix.
ROTATION_SCHEDULE: tuple[tuple[int, int, int, int], ...] = (
    (1, 0, 0, 0),
    (2, 1, 1, 1),
    (3, 1, 2, 1),
    (4, 1, 1, 3),
    (5, 2, 3, 1),
    (7, 3, 1, 2),
    (6, 1, 4, 5),
    (9, 2, 7, 4),
)


def rotation_matrix(quat: Sequence[int]) -> tuple[tuple[Fraction, ...], ...]:
    a, b, c, d = quat
    s = a * a + b * b + c * c + d * d
    rows = (
        (a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)),
        (2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)),
        (2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d),
    )
    return tuple(tuple(Fraction(x, s) for x in row) for row in rows)


def _rotate(R, p):
    return tuple(R[i][0] * p[0] + R[i][1] * p[1] + R[i][2] * p[2] for i in range(3))


def _on_segment_2d(p, a, b) -> bool:
    # p is already known collinear with a, b in the projection plane
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def _crossing_sign(a0, a1, b0, b1) -> int:
    """Signed contribution of edge ``a`` passing over edge ``b`` (projected on z).

    Returns 0 when the projections miss or ``a`` is below ``b``.
    """
    da = (a1[0] - a0[0], a1[1] - a0[1])
    db = (b1[0] - b0[0], b1[1] - b0[1])
    if da == (0, 0) or db == (0, 0):
        # a vertical edge projects to a point
        if da == (0, 0) and db == (0, 0):
            if a0[:2] == b0[:2]:
                raise DegenerateProjection(f"vertical edges project to the same point {a0[:2]}")
            return 0
        p, (s0, s1) = (a0, (b0, b1)) if da == (0, 0) else (b0, (a0, a1))
        if orient2d(s0, s1, p) == 0 and _on_segment_2d(p, s0, s1):
            raise DegenerateProjection(f"vertical edge projects onto an edge at {p[:2]}")
        return 0
    o1, o2 = orient2d(a0, a1, b0), orient2d(a0, a1, b1)
    o3, o4 = orient2d(b0, b1, a0), orient2d(b0, b1, a1)
    for o, p, (s0, s1) in ((o1, b0, (a0, a1)), (o2, b1, (a0, a1)),
                           (o3, a0, (b0, b1)), (o4, a1, (b0, b1))):
        if o == 0 and _on_segment_2d(p, s0, s1):
            raise DegenerateProjection(f"vertex projects onto an edge at {p[:2]}")
    if not (o1 * o2 < 0 and o3 * o4 < 0):
        return 0
    denom = da[0] * db[1] - da[1] * db[0]
    w = (b0[0] - a0[0], b0[1] - a0[1])
    s = (w[0] * db[1] - w[1] * db[0]) / denom
    t = (w[0] * da[1] - w[1] * da[0]) / denom
    za = a0[2] + s * (a1[2] - a0[2])
    zb = b0[2] + t * (b1[2] - b0[2])
    if za == zb:
        raise DegenerateProjection("edges intersect in space")
    if za < zb:
        return 0
    return 1 if denom > 0 else -1


def polygon_linking_number(p1: Sequence, p2: Sequence, rotation: Sequence[int] | None = None) -> int:
    """Linking number of two closed polygons via one projection.

    Raises :class:`DegenerateProjection` when the (rotated) z-projection is
    not generic for the pair.
    """
    p1 = [_as_point(p) for p in p1]
    p2 = [_as_point(p) for p in p2]
    if rotation is not None and tuple(rotation) != (1, 0, 0, 0):
        R = rotation_matrix(rotation)
        p1 = [_rotate(R, p) for p in p1]
        p2 = [_rotate(R, p) for p in p2]
    total = 0
    for i in range(len(p1)):
        a0, a1 = p1[i], p1[(i + 1) % len(p1)]
        for j in range(len(p2)):
            total += _crossing_sign(a0, a1, p2[j], p2[(j + 1) % len(p2)])
    return total


def polygon_linking_number_robust(p1: Sequence, p2: Sequence) -> int:
    """Try each rotation of :data:`ROTATION_SCHEDULE` until one is generic."""
    errors = []
    for quat in ROTATION_SCHEDULE:
        try:
            return polygon_linking_number(p1, p2, quat)
        except DegenerateProjection as exc:
            errors.append(f"{quat}: {exc}")
    raise DegenerateProjection("every scheduled rotation is degenerate: " + "; ".join(errors))


def _check_cycle(cycle: Sequence[int], N: int) -> None:
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        raise ValueError(f"cycle needs at least 3 distinct vertices: {list(cycle)}")
    if any(not 0 <= v < N for v in cycle):
        raise ValueError(f"cycle vertex out of range 0..{N - 1}: {list(cycle)}")


def linking_number(e: PLEmbedding, c1: Sequence[int], c2: Sequence[int],
                   rotation: Sequence[int] | None = None) -> int:
    """Exact linking number of two vertex-disjoint cycles of the embedding.

    With ``rotation=None`` the rotation schedule is walked until a generic
    projection is found; an explicit quaternion pins the projection and lets
    :class:`DegenerateProjection` propagate.
    """
    _check_cycle(c1, e.N)
    _check_cycle(c2, e.N)
    if set(c1) & set(c2):
        raise ValueError(f"cycles share vertices {sorted(set(c1) & set(c2))}")
    p1 = [e.coords[v] for v in c1]
    p2 = [e.coords[v] for v in c2]
    if rotation is None:
        return polygon_linking_number_robust(p1, p2)
    return polygon_linking_number(p1, p2, rotation)


def _segment_pair_solid_angle(p1, p2, p3, p4) -> float:
    # Klenin-Langowski closed form for the Gauss double integral over two segments.
    r13, r14 = _fsub(p3, p1), _fsub(p4, p1)
    r23, r24 = _fsub(p3, p2), _fsub(p4, p2)
    ns = [_fcross(r13, r14), _fcross(r14, r24), _fcross(r24, r23), _fcross(r23, r13)]
    unit = []
    for v in ns:
        norm = math.sqrt(_fdot(v, v))
        if norm == 0.0:
            return 0.0
        unit.append(tuple(x / norm for x in v))
    omega = 0.0
    for i in range(4):
        c = max(-1.0, min(1.0, _fdot(unit[i], unit[(i + 1) % 4])))
        omega += math.asin(c)
    orient = _fdot(_fcross(_fsub(p4, p3), _fsub(p2, p1)), r13)
    if orient == 0.0:
        return 0.0
    return omega if orient > 0 else -omega


def _fsub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _fcross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _fdot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def gauss_linking_value(p1: Sequence, p2: Sequence) -> float:
    """Floating point Gauss linking integral of two closed polygons."""
    f1 = [tuple(float(x) for x in p) for p in p1]
    f2 = [tuple(float(x) for x in p) for p in p2]
    total = 0.0
    for i in range(len(f1)):
        for j in range(len(f2)):
            total += _segment_pair_solid_angle(f1[i], f1[(i + 1) % len(f1)],
                                               f2[j], f2[(j + 1) % len(f2)])
    return total / (4 * math.pi)


def gauss_linking_oracle(e: PLEmbedding | None, c1: Sequence, c2: Sequence, guard: float = 0.25) -> int:
    """Round the Gauss integral; refuse if it sits more than ``guard`` from an integer.

    With ``e=None`` the cycles are taken to be point lists.
    """
    p1 = c1 if e is None else [e.coords[v] for v in c1]
    p2 = c2 if e is None else [e.coords[v] for v in c2]
    value = gauss_linking_value(p1, p2)
    nearest = round(value)
    if abs(value - nearest) > guard:
        raise OracleInconclusive(f"Gauss integral {value:.6f} is not within {guard} of an integer")
    return int(nearest)


# ---------------------------------------------------------------------------
# cycles of K_N


def _cycles_on(vertex_set: Sequence[int]) -> Iterator[tuple[int, ...]]:
    # canonical: least vertex first, second entry smaller than the last
    first, rest = vertex_set[0], vertex_set[1:]
    for perm in itertools.permutations(rest):
        if perm[0] < perm[-1]:
            yield (first,) + perm


def iter_cycles(vertices: Sequence[int], k: int) -> Iterator[tuple[int, ...]]:
    for combo in itertools.combinations(sorted(vertices), k):
        yield from _cycles_on(combo)


def iter_disjoint_cycle_pairs(N: int, k1: int, k2: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    if k1 < 3 or k2 < 3:
        raise ValueError("cycle lengths must be at least 3")
    if k1 + k2 > N:
        return
    for c1 in iter_cycles(range(N), k1):
        rest = [v for v in range(N) if v not in c1]
        for c2 in iter_cycles(rest, k2):
            if k1 == k2 and c2 < c1:
                continue
            yield c1, c2


def enumerate_disjoint_cycle_pairs(N: int, k1: int, k2: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All unordered pairs of vertex-disjoint cycles of lengths ``k1``, ``k2`` in K_N."""
    return list(iter_disjoint_cycle_pairs(N, k1, k2))


def iter_all_cycle_pairs(N: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Disjoint cycle pairs of every length combination, ``k1 <= k2`` ascending."""
    for k1 in range(3, N // 2 + 1):
        for k2 in range(k1, N - k1 + 1):
            yield from iter_disjoint_cycle_pairs(N, k1, k2)


def conway_gordon_invariant(e: PLEmbedding) -> int:
    """Sum of linking numbers mod 2 over the ten disjoint triangle pairs of K_6."""
    if e.N != 6:
        raise ValueError("Conway-Gordon invariant is defined for K_6 embeddings")
    return sum(linking_number(e, c1, c2) for c1, c2 in iter_disjoint_cycle_pairs(6, 3, 3)) % 2


def search_mod_q_link(e: PLEmbedding, q: int, budget: int):
    """First cycle pair (in canonical order) whose linking number is a nonzero multiple of q.

    Returns ``(c1, c2, lk)`` or ``None`` when ``budget`` pairs are exhausted.
    """
    if q < 1:
        raise ValueError("q must be positive")
    for count, (c1, c2) in enumerate(iter_all_cycle_pairs(e.N)):
        if count >= budget:
            break
        lk = linking_number(e, c1, c2)
        if lk != 0 and lk % q == 0:
            return c1, c2, lk
    return None
