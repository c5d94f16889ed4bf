"""Key rings at the level of mod-2 linking data, and the bipartite induction.

:func:`keyring_search` solves the key-ring lemma as a search problem on desk
sized instances: with ring residues ``s_j = lk2(S, X_j)`` and
``M[i][j] = lk2(J_i, X_j)`` (ones on the diagonal), choose a subset ``A`` of
the ``J_i`` so that the sphere built from ``S`` and ``A`` links many ``X_j``
mod 2.  The residues of that sphere are ``s_j + sum_{i in A} M[i][j]``.

:func:`bipartite_orchestrate` runs the stage-by-stage index bookkeeping that
turns key rings into a link whose mod-2 pattern contains ``K_{r,r}``.
Index sets may be ``range`` objects so that astronomically large stages stay
lazy.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass, field
from math import isqrt
from typing import Callable, Sequence

from ..linkalg import LinkSystem
from .bounds import bipartite_stage_sizes


class KeyRingModelFailure(LookupError):
    def __init__(self, message: str, instance: "KeyRingInstance"):
        super().__init__(message)
        self.instance = instance


class StageShortfall(RuntimeError):
    def __init__(self, stage: int, size: int, required: int):
        super().__init__(f"stage {stage}: oracle returned {size} indices, need {required}")
        self.stage, self.size, self.required = stage, size, required


@dataclass(frozen=True)
class KeyRingInstance:
    m: int
    s: tuple[int, ...]
    M: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = self.m * self.m
        object.__setattr__(self, "s", tuple(int(x) % 2 for x in self.s))
        object.__setattr__(self, "M", tuple(tuple(int(x) % 2 for x in r) for r in self.M))
        if self.m < 1:
            raise ValueError("m must be positive")
        if len(self.s) != n or len(self.M) != n or any(len(r) != n for r in self.M):
            raise ValueError(f"need m^2 = {n} residues and an {n} x {n} matrix")
        if any(self.M[i][i] != 1 for i in range(n)):
            raise ValueError("diagonal of M must be all ones")

    def to_json(self) -> dict:
        return {"m": self.m, "s": list(self.s), "M": [list(r) for r in self.M]}

    @classmethod
    def from_json(cls, obj: dict) -> "KeyRingInstance":
        return cls(int(obj["m"]), tuple(obj["s"]), tuple(tuple(r) for r in obj["M"]))


@dataclass(frozen=True)
class KeyRingResult:
    A: tuple[int, ...]
    I: tuple[int, ...]


def keyring_search(inst: KeyRingInstance, max_pairs: int = 16) -> KeyRingResult:
    """Subset ``A`` maximising ``|I|``; ties go to the smaller, then lex-least ``A``.

    Indices in the result are 1-based.  Raises :class:`KeyRingModelFailure`
    when even the best subset links fewer than ``m/2`` of the ``X_j``.
    """
    n = inst.m * inst.m
    if n > max_pairs:
        raise ValueError(f"exhaustive search limited to m^2 <= {max_pairs}")
    s_mask = sum(1 << j for j in range(n) if inst.s[j])
    rows = [sum(1 << j for j in range(n) if inst.M[i][j]) for i in range(n)]
    best, best_count = (), -1
    for size in range(n + 1):
        for A in itertools.combinations(range(n), size):
            t = s_mask
            for i in A:
                t ^= rows[i]
            count = t.bit_count()
            if count > best_count:
                best, best_count = A, count
                if count == n:
                    break
        if best_count == n:
            break
    if 2 * best_count < inst.m:
        raise KeyRingModelFailure(f"best subset links only {best_count} of {n}", inst)
    t = s_mask
    for i in best:
        t ^= rows[i]
    return KeyRingResult(tuple(i + 1 for i in best), tuple(j + 1 for j in range(n) if t >> j & 1))


def lemma_guarantee(pairs: int) -> int:
    """Least k with ``2k >= sqrt(pairs)``: the index set size the lemma promises."""
    k = isqrt(pairs) // 2
    while 4 * k * k < pairs:
        k += 1
    return k


def _size(idx: Sequence[int]) -> int:
    if isinstance(idx, range):
        return max(0, (idx.stop - idx.start + idx.step - 1) // idx.step) if idx.step > 0 else 0
    return len(idx)


def _subset(a: Sequence[int], b: Sequence[int]) -> bool:
    if isinstance(a, range) and isinstance(b, range) and a.step == b.step == 1:
        return _size(a) == 0 or (b.start <= a.start and a.stop <= b.stop)
    if isinstance(b, range):
        return all(x in b for x in a)
    return set(a) <= set(b)


class SymbolicKeyRingOracle:
    """Returns exactly the guaranteed number of indices, taken from the front."""

    def __call__(self, stage: int, indices: Sequence[int]) -> Sequence[int]:
        return indices[:lemma_guarantee(_size(indices))]


class SearchKeyRingOracle:
    """Runs :func:`keyring_search` on seeded random mod-2 data over the given indices.

    Uses the first ``isqrt(n)**2`` indices as the key/ring pairs.
    """

    def __init__(self, seed: int):
        self.seed = seed
        self.instances: list[KeyRingInstance] = []

    def __call__(self, stage: int, indices: Sequence[int]) -> Sequence[int]:
        idx = list(indices)
        m = isqrt(len(idx))
        rng = random.Random(f"{self.seed}/{stage}")
        n = m * m
        s = tuple(rng.randint(0, 1) for _ in range(n))
        M = tuple(tuple(1 if i == j else rng.randint(0, 1) for j in range(n)) for i in range(n))
        inst = KeyRingInstance(m, s, M)
        self.instances.append(inst)
        res = keyring_search(inst)
        return [idx[j - 1] for j in res.I]


def _encode(idx: Sequence[int]):
    if isinstance(idx, range):
        return {"range": [idx.start, idx.stop]}
    return list(idx)


def _decode(obj) -> Sequence[int]:
    if isinstance(obj, dict):
        return range(*obj["range"])
    return list(obj)


@dataclass
class BipartiteTrace:
    r: int
    stage_sizes: list[int]
    stages: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "BipartiteTrace":
        return cls(**obj)


def _bipartite_system(r: int, final: Sequence[int], path_length: int) -> LinkSystem:
    zs = [f"Z{j}" for j in range(1, r + 1)]
    rs = [f"R{i}" for i in final[:r]]
    lk = {(z, x): 1 for z in zs for x in rs}
    return LinkSystem.build(zs + rs, lk, {c: path_length for c in zs + rs})


def bipartite_orchestrate(r: int, oracle: Callable[[int, Sequence[int]], Sequence[int]],
                          path_length: int = 0) -> tuple[LinkSystem, BipartiteTrace]:
    """Stage k asks the oracle for ``I_k`` inside ``I_{k-1}`` with ``|I_k| >= m_k``.

    Returns the mod-2 system on ``Z_1..Z_r`` and the first ``r`` rings of
    ``I_r``; every ``Z_j``-``R_i`` pair links mod 2.
    """
    sizes = bipartite_stage_sizes(r)
    trace = BipartiteTrace(r, sizes)
    current: Sequence[int] = range(1, sizes[0] + 1)
    for k in range(1, r + 1):
        nxt = oracle(k, current)
        if not _subset(nxt, current):
            raise ValueError(f"stage {k}: oracle returned indices outside I_{k - 1}")
        if _size(nxt) < sizes[k]:
            raise StageShortfall(k, _size(nxt), sizes[k])
        trace.stages.append({"stage": k, "required": sizes[k], "size": _size(nxt), "indices": _encode(nxt)})
        current = nxt
    final = list(current[:r])
    return _bipartite_system(r, final, path_length), trace


def replay_bipartite(trace: BipartiteTrace, path_length: int = 0) -> LinkSystem:
    sizes = bipartite_stage_sizes(trace.r)
    if sizes != list(trace.stage_sizes):
        raise ValueError("stage sizes do not match r")
    current: Sequence[int] = range(1, sizes[0] + 1)
    for k, rec in enumerate(trace.stages, start=1):
        nxt = _decode(rec["indices"])
        if rec["stage"] != k or not _subset(nxt, current) or _size(nxt) < sizes[k]:
            raise ValueError(f"stage {k} of the trace is inconsistent")
        current = nxt
    if len(trace.stages) != trace.r:
        raise ValueError("trace is missing stages")
    return _bipartite_system(trace.r, list(current[:trace.r]), path_length)
