"""Stitching many linked components into one sphere whose linking numbers
with every target are nonzero multiples of q.

Inputs are linking matrices ``JX`` (A x S), ``JY`` (A x T), ``LX`` (B x S),
``LY`` (B x T) against targets ``X_1..X_S``, ``Y_1..Y_T``, plus a supplier of
segment vectors for the stitching spheres between consecutive chosen
components.  The run is:

1. keep ``q**d`` rows of ``J`` sharing one sign pattern against ``X`` and
   reverse ``X`` columns to make that block positive (``d = S + T``);
2. keep rows of ``L`` with one sign pattern against ``Y`` (reverse ``Y`` to
   make it positive), then ``d * q**d`` of them with one ``+-0`` pattern
   against ``X``;
3. a window of ``J`` rows summing to zero mod q, and ``d + 1`` prefix
   indices of ``L`` rows in one residue class;
4. the first candidate among ``j, j + l_1, .., j + l_d`` with no zero entry;
5. for each consecutive pair of chosen components, a contiguous run of
   segments keeping the running vector nonzero and zero mod q.

Every choice is recorded in a :class:`PipelineTrace` and
:func:`replay_stitch` rebuilds the output from input and trace alone.
"""
from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Sequence

from ..linkalg import Chain, LinkSystem, sign_pattern, verify_conclusion
from ..selection import SelectionNotFound, find_equal_residue_indices, find_nonvanishing_shift, prefix_sums
from .suppliers import SeededSupplier, supplier_from_json

Matrix = tuple[tuple[int, ...], ...]


class ReplayError(ValueError):
    pass


def _matrix(rows, width: int, name: str) -> Matrix:
    out = tuple(tuple(int(x) for x in r) for r in rows)
    if any(len(r) != width for r in out):
        raise ValueError(f"{name} rows must have {width} entries")
    return out


def minimal_sizes(S: int, T: int, q: int) -> tuple[int, int, int]:
    """Smallest ``(A, B, lambda)`` meeting the size hypotheses."""
    d = S + T
    return 2 ** S * q ** d, 3 ** S * 2 ** T * d * q ** d, (2 * q) ** d


@dataclass(frozen=True)
class StitchInput:
    S: int
    T: int
    q: int
    JX: Matrix
    JY: Matrix
    LX: Matrix
    LY: Matrix
    lam: int
    supplier: object = field(compare=False)

    @property
    def A(self) -> int:
        return len(self.JX)

    @property
    def B(self) -> int:
        return len(self.LX)

    @property
    def d(self) -> int:
        return self.S + self.T

    def validate(self) -> None:
        S, T, q = self.S, self.T, self.q
        if S < 0 or T < 0 or S + T < 1:
            raise ValueError("need S, T >= 0 with S + T >= 1")
        if q < 1:
            raise ValueError("q must be positive")
        for name, m, rows, width in (("JX", self.JX, self.A, S), ("JY", self.JY, self.A, T),
                                     ("LX", self.LX, self.B, S), ("LY", self.LY, self.B, T)):
            if len(m) != rows:
                raise ValueError(f"{name} must have {rows} rows")
            _matrix(m, width, name)
        A_min, B_min, lam_min = minimal_sizes(S, T, q)
        if self.A < A_min:
            raise ValueError(f"A = {self.A} < 2^S q^(S+T) = {A_min}")
        if self.B < B_min:
            raise ValueError(f"B = {self.B} < 3^S 2^T (S+T) q^(S+T) = {B_min}")
        if any(x == 0 for r in self.JX for x in r):
            raise ValueError("JX must be nonvanishing")
        if any(x == 0 for r in self.LY for x in r):
            raise ValueError("LY must be nonvanishing")
        if self.lam < lam_min:
            raise ValueError(f"lambda = {self.lam} < (2q)^(S+T) = {lam_min}")
        if getattr(self.supplier, "dim", S + T) != S + T:
            raise ValueError("supplier dimension must equal S + T")

    def to_json(self) -> dict:
        return {"S": self.S, "T": self.T, "q": self.q, "lambda": self.lam,
                "JX": [list(r) for r in self.JX], "JY": [list(r) for r in self.JY],
                "LX": [list(r) for r in self.LX], "LY": [list(r) for r in self.LY],
                "supplier": self.supplier.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "StitchInput":
        S, T = int(obj["S"]), int(obj["T"])
        return cls(S, T, int(obj["q"]),
                   _matrix(obj["JX"], S, "JX"), _matrix(obj["JY"], T, "JY"),
                   _matrix(obj["LX"], S, "LX"), _matrix(obj["LY"], T, "LY"),
                   int(obj["lambda"]), supplier_from_json(obj["supplier"]))


@dataclass
class PipelineTrace:
    x_signs: list[int]
    y_signs: list[int]
    j_rows: list[int]
    l_rows: list[int]
    alpha: list[int]
    beta: list[int]
    base_index: int
    components: list[str]
    z0: list[int]
    stitches: list[dict] = field(default_factory=list)
    chain: dict[str, int] = field(default_factory=dict)
    z: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "PipelineTrace":
        return cls(**obj)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


class StitchStep(NamedTuple):
    segment_range: tuple[int, int]
    z: tuple[int, ...]
    mu: tuple[int, ...]
    shift: tuple[int, int]


def _add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _scale_columns(m: Matrix, signs: Sequence[int]) -> Matrix:
    return tuple(tuple(x * s for x, s in zip(r, signs)) for r in m)


def _largest_bucket(patterns: list[str]) -> tuple[str, list[int]]:
    buckets: dict[str, list[int]] = {}
    for i, p in enumerate(patterns):
        buckets.setdefault(p, []).append(i)
    best = min(buckets, key=lambda p: (-len(buckets[p]), p))
    return best, buckets[best]


def select_sign_uniform_sublink(M: Sequence[Sequence[int]], quota: int) -> tuple[list[int], list[int]]:
    """Rows sharing the most common ``+-`` pattern, and column signs making them positive.

    Ties between equally large buckets go to the lexicographically least
    pattern (``+`` sorts before ``-``).  At least ``quota * 2^S`` rows
    guarantee success; with fewer rows a bucket may still reach the quota.
    """
    if any(x == 0 for r in M for x in r):
        raise ValueError("matrix must be nonvanishing")
    if not M:
        raise SelectionNotFound("empty matrix")
    pattern, rows = _largest_bucket([sign_pattern(r, 2) for r in M])
    if len(rows) < quota:
        raise SelectionNotFound(f"largest sign bucket has {len(rows)} rows, quota {quota}")
    return rows, [1 if c == "+" else -1 for c in pattern]


def select_three_valued_sublink(M: Sequence[Sequence[int]], quota: int) -> list[int]:
    """Rows sharing the most common ``+-0`` pattern (``quota * 3^S`` rows suffice)."""
    if not M:
        raise SelectionNotFound("empty matrix")
    _, rows = _largest_bucket([sign_pattern(r, 3) for r in M])
    if len(rows) < quota:
        raise SelectionNotFound(f"largest pattern bucket has {len(rows)} rows, quota {quota}")
    return rows


def choose_nonvanishing_base(j: Sequence[int], ells: Sequence[Sequence[int]]) -> int:
    """First index ``i`` with ``j`` (i = 0) or ``j + ells[i-1]`` free of zeros."""
    for i, cand in enumerate([tuple(j)] + [_add(j, l) for l in ells]):
        if all(x != 0 for x in cand):
            return i
    raise AssertionError("every candidate vanishes somewhere; sign structure violated")


def stitch_consecutive(z: Sequence[int], segments: Sequence[Sequence[int]], q: int) -> StitchStep:
    """Pick segments ``mu_j+1 .. mu_k`` keeping ``z`` nonzero and zero mod q."""
    d = len(z)
    if not verify_conclusion(z, q):
        raise ValueError("z must be entrywise nonzero and divisible by q")
    if len(segments) < (2 * q) ** d:
        raise ValueError(f"need at least (2q)^d = {(2 * q) ** d} segments")
    sel = find_equal_residue_indices(segments, q, 2 ** d, d)
    sums = prefix_sums(segments, d)
    base = sums[sel.base]
    p = [tuple(x - y for x, y in zip(sums[mu], base)) for mu in sel.indices]
    j, k = find_nonvanishing_shift(z, p)
    mu = sel.indices
    z_new = tuple(a + b - c for a, b, c in zip(z, p[k], p[j]))
    assert verify_conclusion(z_new, q)
    return StitchStep((mu[j] + 1, mu[k]), z_new, mu, (j, k))


def _orient_segments(segments, signs):
    return [tuple(x * s for x, s in zip(v, signs)) for v in segments]


def stitch_links(inp: StitchInput) -> tuple[Chain, tuple[int, ...], PipelineTrace]:
    """Run the stitching construction; returns ``(Z, lk(Z, X u Y), trace)``.

    Linking numbers in the output use the original orientation of the targets.
    """
    inp.validate()
    S, T, q, d = inp.S, inp.T, inp.q, inp.d
    qd = q ** d

    j_rows, x_signs = select_sign_uniform_sublink(inp.JX, qd)
    j_rows = j_rows[:qd]
    JX = _scale_columns(inp.JX, x_signs)
    LX = _scale_columns(inp.LX, x_signs)

    l_first, y_signs = select_sign_uniform_sublink(inp.LY, 3 ** S * d * qd)
    l_first = l_first[:3 ** S * d * qd]
    JY = _scale_columns(inp.JY, y_signs)
    LY = _scale_columns(inp.LY, y_signs)
    picked = select_three_valued_sublink([LX[b] for b in l_first], d * qd)
    l_rows = [l_first[i] for i in picked][:d * qd]

    jvecs = [JX[a] + JY[a] for a in j_rows]
    lvecs = [LX[b] + LY[b] for b in l_rows]
    wj = find_equal_residue_indices(jvecs, q, 1, d)
    alpha = wj.indices
    jsum = prefix_sums(jvecs, d)
    j = tuple(x - y for x, y in zip(jsum[alpha[1]], jsum[alpha[0]]))
    wl = find_equal_residue_indices(lvecs, q, d, d)
    beta = wl.indices
    lsum = prefix_sums(lvecs, d)
    ells = [tuple(x - y for x, y in zip(lsum[b], lsum[beta[0]])) for b in beta[1:]]
    base = choose_nonvanishing_base(j, ells)

    components = [f"J{a + 1}" for a in j_rows[alpha[0]:alpha[1]]]
    z = j
    if base:
        components += [f"L{b + 1}" for b in l_rows[beta[0]:beta[base]]]
        z = _add(j, ells[base - 1])
    signs = list(x_signs) + list(y_signs)
    trace = PipelineTrace(list(x_signs), list(y_signs), list(j_rows), list(l_rows),
                          list(alpha), list(beta), base, components,
                          [x * s for x, s in zip(z, signs)])
    chain = Chain.of(*components)
    for pair in range(1, len(components)):
        segs = _orient_segments(inp.supplier.segments(pair, inp.lam), signs)
        step = stitch_consecutive(z, segs, q)
        z = step.z
        lo, hi = step.segment_range
        chain = chain + Chain({f"P{pair}.{l}": 1 for l in range(lo, hi + 1)})
        trace.stitches.append({"pair": pair, "mu": list(step.mu), "shift": list(step.shift),
                               "segment_range": [lo, hi], "z": [x * s for x, s in zip(z, signs)]})
    z_out = tuple(x * s for x, s in zip(z, signs))
    assert verify_conclusion(z_out, q)
    trace.chain = dict(sorted(chain.items()))
    trace.z = list(z_out)
    return chain, z_out, trace


def replay_stitch(inp: StitchInput, trace: PipelineTrace) -> tuple[Chain, tuple[int, ...]]:
    """Rebuild ``(Z, z)`` from the recorded choices, checking each one."""
    inp.validate()
    S, q, d = inp.S, inp.q, inp.d
    qd = q ** d
    x_signs, y_signs = list(trace.x_signs), list(trace.y_signs)
    if len(x_signs) != inp.S or len(y_signs) != inp.T or any(s not in (1, -1) for s in x_signs + y_signs):
        raise ReplayError("reversal signs do not match the targets")
    JX, LX = _scale_columns(inp.JX, x_signs), _scale_columns(inp.LX, x_signs)
    JY, LY = _scale_columns(inp.JY, y_signs), _scale_columns(inp.LY, y_signs)
    j_rows, l_rows = list(trace.j_rows), list(trace.l_rows)
    if len(j_rows) != qd or len(l_rows) != d * qd:
        raise ReplayError("sublink sizes differ from the quotas")
    if any(x <= 0 for a in j_rows for x in JX[a]) or any(x <= 0 for b in l_rows for x in LY[b]):
        raise ReplayError("recorded rows are not positive after reversal")
    if len({sign_pattern(LX[b], 3) for b in l_rows}) > 1:
        raise ReplayError("recorded L rows do not share one sign pattern")

    jvecs = [JX[a] + JY[a] for a in j_rows]
    lvecs = [LX[b] + LY[b] for b in l_rows]
    jsum, lsum = prefix_sums(jvecs, d), prefix_sums(lvecs, d)
    a0, a1 = trace.alpha
    j = tuple(x - y for x, y in zip(jsum[a1], jsum[a0]))
    beta = list(trace.beta)
    if not (0 <= a0 < a1 <= qd) or any(x % q for x in j):
        raise ReplayError("alpha window is not zero mod q")
    if len(beta) != d + 1 or any(b1 >= b2 for b1, b2 in zip(beta, beta[1:])):
        raise ReplayError("beta indices malformed")
    ells = [tuple(x - y for x, y in zip(lsum[b], lsum[beta[0]])) for b in beta[1:]]
    if any(x % q for l in ells for x in l):
        raise ReplayError("beta windows are not zero mod q")
    base = trace.base_index
    z = j if base == 0 else _add(j, ells[base - 1])
    if any(x == 0 for x in z):
        raise ReplayError("recorded base candidate vanishes")
    components = [f"J{a + 1}" for a in j_rows[a0:a1]]
    if base:
        components += [f"L{b + 1}" for b in l_rows[beta[0]:beta[base]]]
    if components != list(trace.components):
        raise ReplayError("component list differs from trace")
    signs = x_signs + y_signs
    chain = Chain.of(*components)
    if len(trace.stitches) != len(components) - 1:
        raise ReplayError("wrong number of stitches")
    for pair, rec in enumerate(trace.stitches, start=1):
        segs = _orient_segments(inp.supplier.segments(pair, inp.lam), signs)
        lo, hi = rec["segment_range"]
        if not 1 <= lo <= hi <= inp.lam:
            raise ReplayError(f"stitch {pair}: bad segment range")
        for v in segs[lo - 1:hi]:
            z = _add(z, v)
        if not verify_conclusion(z, q):
            raise ReplayError(f"stitch {pair}: running vector fails the divisibility condition")
        chain = chain + Chain({f"P{pair}.{l}": 1 for l in range(lo, hi + 1)})
    return chain, tuple(x * s for x, s in zip(z, signs))


def replay_matches(inp: StitchInput, trace: PipelineTrace) -> bool:
    chain, z = replay_stitch(inp, trace)
    return dict(sorted(chain.items())) == trace.chain and list(z) == trace.z


def stitch_link_system(inp: StitchInput, chain: Chain) -> LinkSystem:
    """Link system of components, targets and the segments used by ``chain``."""
    X = [f"X{s + 1}" for s in range(inp.S)]
    Y = [f"Y{t + 1}" for t in range(inp.T)]
    targets = X + Y
    comps = [f"J{a + 1}" for a in range(inp.A)] + [f"L{b + 1}" for b in range(inp.B)] + targets
    lk = {}
    for a in range(inp.A):
        for i, t in enumerate(targets):
            lk[(f"J{a + 1}", t)] = (inp.JX[a] + inp.JY[a])[i]
    for b in range(inp.B):
        for i, t in enumerate(targets):
            lk[(f"L{b + 1}", t)] = (inp.LX[b] + inp.LY[b])[i]
    pairs = sorted({int(c[1:].split(".")[0]) for c in chain if c.startswith("P")})
    for pair in pairs:
        for l, v in enumerate(inp.supplier.segments(pair, inp.lam), start=1):
            cid = f"P{pair}.{l}"
            comps.append(cid)
            for i, t in enumerate(targets):
                lk[(cid, t)] = v[i]
    return LinkSystem.build(comps, lk)


def random_stitch_input(S: int, T: int, q: int, seed: int, low: int = -5, high: int = 5,
                        zero_weight: float = 0.0) -> StitchInput:
    """Minimal-size input with entries in ``[low, high]``.

    ``zero_weight`` biases the unconstrained blocks (JY, LX) toward zero,
    which exercises the mixed sign patterns.
    """
    rng = random.Random(seed)
    A, B, lam = minimal_sizes(S, T, q)
    nonzero = [x for x in range(low, high + 1) if x]

    def free():
        return 0 if rng.random() < zero_weight else rng.randint(low, high)

    JX = tuple(tuple(rng.choice(nonzero) for _ in range(S)) for _ in range(A))
    JY = tuple(tuple(free() for _ in range(T)) for _ in range(A))
    LX = tuple(tuple(free() for _ in range(S)) for _ in range(B))
    LY = tuple(tuple(rng.choice(nonzero) for _ in range(T)) for _ in range(B))
    return StitchInput(S, T, q, JX, JY, LX, LY, lam, SeededSupplier(rng.randrange(2 ** 32), S + T, low, high))
