"""Two-component links with linking number a nonzero multiple of q.

Starts from a key ring ``R u Z_1 u .. u Z_q`` given by the linking numbers
``lk(R, Z_i)``; stitching spheres between consecutive keys are supplied as
scalar linking numbers with ``R``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

from ..linkalg import Chain
from ..selection import zero_sum_window


def enlarge_key(lkXY: int, lkXS: int, mod2: bool = False) -> tuple[str, int]:
    """Choose the prism sphere ``S`` or the sum ``S + Y`` so the ring still links.

    ``[S + Y] - [S] = [Y]`` is nonzero, so at most one of the two can vanish.
    """
    if mod2:
        lkXY, lkXS = lkXY % 2, lkXS % 2
    if lkXY == 0:
        raise ValueError("the key must link the ring")
    if lkXS != 0:
        return "S", lkXS
    total = lkXS + lkXY
    return "S+Y", total % 2 if mod2 else total


@dataclass
class TwoComponentTrace:
    q: int
    orientation: int
    window: list[int]
    stitches: list[dict] = field(default_factory=list)
    outcome: str = ""
    chain: dict[str, int] = field(default_factory=dict)
    lk: int = 0

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "TwoComponentTrace":
        return cls(**obj)


def _scalars(supplier, pair: int, q: int) -> list[int]:
    return [v[0] for v in supplier.segments(pair, q)]


def _check_keys(keys: Sequence[int], q: int) -> int:
    if q < 1:
        raise ValueError("q must be positive")
    if len(keys) < q:
        raise ValueError(f"need at least q = {q} keys")
    keys = list(keys)[:q]
    if any(k == 0 for k in keys):
        raise ValueError("every key must link the ring")
    if not (all(k > 0 for k in keys) or all(k < 0 for k in keys)):
        raise ValueError("keys must all link the ring with the same sign")
    return 1 if keys[0] > 0 else -1


def two_component_pipeline(keys: Sequence[int], q: int, supplier) -> tuple[Chain, int, TwoComponentTrace]:
    """Returns ``(chain, lk(R, chain), trace)`` with ``lk`` a nonzero multiple of q.

    ``trace.outcome`` is ``"key"`` (one key already works), ``"stitch"`` (a
    stitching sphere links ``R`` on its own) or ``"connect-sum"``.
    """
    flip = _check_keys(keys, q)
    oriented = [flip * k for k in keys[:q]]
    a, b = zero_sum_window(oriented, q)
    trace = TwoComponentTrace(q, flip, [a, b])
    if b - a == 1:
        chain, lk = Chain({f"Z{b}": flip}), oriented[b - 1]
        trace.outcome = "key"
    else:
        spheres = []
        for pair in range(a + 1, b):
            segs = _scalars(supplier, pair, q)
            lo, hi = zero_sum_window(segs, q)
            value = sum(segs[lo:hi])
            spheres.append((pair, lo + 1, hi, value))
            trace.stitches.append({"pair": pair, "segment_range": [lo + 1, hi], "lk": value})
        linking = next((s for s in spheres if s[3] != 0), None)
        if linking is not None:
            pair, lo, hi, lk = linking
            chain = Chain({f"P{pair}.{l}": 1 for l in range(lo, hi + 1)})
            trace.outcome = "stitch"
        else:
            chain = Chain({f"Z{i}": flip for i in range(a + 1, b + 1)})
            for pair, lo, hi, _ in spheres:
                chain = chain + Chain({f"P{pair}.{l}": 1 for l in range(lo, hi + 1)})
            lk = sum(oriented[a:b])
            trace.outcome = "connect-sum"
    assert lk != 0 and lk % q == 0
    trace.chain = dict(sorted(chain.items()))
    trace.lk = lk
    return chain, lk, trace


def replay_two_component(keys: Sequence[int], q: int, supplier, trace: TwoComponentTrace) -> tuple[Chain, int]:
    """Rebuild the output from the recorded window and segment ranges."""
    flip = _check_keys(keys, q)
    if trace.orientation != flip or trace.q != q:
        raise ValueError("trace does not belong to these keys")
    oriented = [flip * k for k in keys[:q]]
    a, b = trace.window
    if not 0 <= a < b <= q or sum(oriented[a:b]) % q:
        raise ValueError("recorded window does not sum to zero mod q")
    if trace.outcome == "key":
        if b - a != 1:
            raise ValueError("key outcome needs a single-key window")
        return Chain({f"Z{b}": flip}), oriented[b - 1]
    values = {}
    for rec in trace.stitches:
        lo, hi = rec["segment_range"]
        segs = _scalars(supplier, rec["pair"], q)
        value = sum(segs[lo - 1:hi])
        if value % q:
            raise ValueError(f"stitch {rec['pair']} is not zero mod q")
        values[rec["pair"]] = (lo, hi, value)
    if sorted(values) != list(range(a + 1, b)):
        raise ValueError("stitches do not cover the window")
    if trace.outcome == "stitch":
        pair = next(p for p in sorted(values) if values[p][2] != 0)
        lo, hi, lk = values[pair]
        return Chain({f"P{pair}.{l}": 1 for l in range(lo, hi + 1)}), lk
    if any(v[2] for v in values.values()):
        raise ValueError("connect-sum outcome recorded although a stitch links the ring")
    chain = Chain({f"Z{i}": flip for i in range(a + 1, b + 1)})
    for pair, (lo, hi, _) in sorted(values.items()):
        chain = chain + Chain({f"P{pair}.{l}": 1 for l in range(lo, hi + 1)})
    return chain, sum(oriented[a:b])
