"""Deterministic suppliers of segment linking vectors.

A supplier stands in for the linking numbers ``lk(P_l, X u Y)`` of the
stitching spheres between two consecutive components.  The arithmetic of the
pipelines must hold for any integers a supplier returns, so suppliers are
seeded or tabulated inputs, never derived from geometry.

``pair`` is the 1-based index of the consecutive component pair and
``segments(pair, count)`` returns the first ``count`` vectors for that pair.
"""
from __future__ import annotations

import random
from typing import Sequence


class SeededSupplier:
    def __init__(self, seed: int, dim: int, low: int = -5, high: int = 5):
        if low > high:
            raise ValueError("low must not exceed high")
        self.seed, self.dim, self.low, self.high = seed, dim, low, high

    def segments(self, pair: int, count: int) -> list[tuple[int, ...]]:
        rng = random.Random(f"{self.seed}/{pair}")
        return [tuple(rng.randint(self.low, self.high) for _ in range(self.dim)) for _ in range(count)]

    def to_json(self) -> dict:
        return {"kind": "seeded", "seed": self.seed, "dim": self.dim, "low": self.low, "high": self.high}


class TableSupplier:
    """Explicit vectors per pair; pairs missing from the table yield zeros."""

    def __init__(self, table: dict[int, Sequence[Sequence[int]]], dim: int):
        self.table = {int(k): [tuple(v) for v in rows] for k, rows in table.items()}
        self.dim = dim
        for rows in self.table.values():
            if any(len(v) != dim for v in rows):
                raise ValueError(f"table vectors must have length {dim}")

    def segments(self, pair: int, count: int) -> list[tuple[int, ...]]:
        rows = self.table.get(pair, [])
        if rows and len(rows) < count:
            raise ValueError(f"pair {pair} has {len(rows)} segments, {count} requested")
        return rows[:count] if rows else [(0,) * self.dim] * count

    def to_json(self) -> dict:
        return {"kind": "table", "dim": self.dim,
                "table": {str(k): [list(v) for v in rows] for k, rows in sorted(self.table.items())}}


class ConstantSupplier:
    def __init__(self, vector: Sequence[int]):
        self.vector = tuple(vector)
        self.dim = len(self.vector)

    def segments(self, pair: int, count: int) -> list[tuple[int, ...]]:
        return [self.vector] * count

    def to_json(self) -> dict:
        return {"kind": "constant", "vector": list(self.vector)}


def supplier_from_json(obj: dict):
    kind = obj.get("kind")
    if kind == "seeded":
        return SeededSupplier(int(obj["seed"]), int(obj["dim"]), int(obj.get("low", -5)), int(obj.get("high", 5)))
    if kind == "table":
        return TableSupplier({int(k): v for k, v in obj["table"].items()}, int(obj["dim"]))
    if kind == "constant":
        return ConstantSupplier(obj["vector"])
    raise ValueError(f"unknown supplier kind {kind!r}")
