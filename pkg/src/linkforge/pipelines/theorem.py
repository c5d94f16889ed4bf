"""Induction on u for links whose pattern contains H(u, v).

An :class:`HSystem` is a link system with two parts ``P1``, ``P2`` of ``v``
components each and ``u`` singleton parts collected in ``Q``.  Property
``(u, v, l)`` asks for

* (L1) nonzero linking between components in different parts,
* (L2) linking numbers between ``Q`` components that are nonzero multiples of q,
* (L3) ``path_length >= l`` on every component of ``P1`` and ``P2``.

One step consumes a system with property ``(u, w, lambda)`` and stitches the
``J`` and ``L`` components into a new ``Q`` component ``Z``.
"""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Callable, Sequence

from ..linkalg import LinkSystem, verify_conclusion
from .keyring import bipartite_orchestrate
from .stitch import PipelineTrace, StitchInput, replay_stitch, stitch_links


@dataclass(frozen=True)
class HSystem:
    system: LinkSystem
    P1: tuple[str, ...]
    P2: tuple[str, ...]
    Q: tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("P1", "P2", "Q"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        ids = self.P1 + self.P2 + self.Q
        if len(set(ids)) != len(ids):
            raise ValueError("parts must be disjoint")
        missing = set(ids) - set(self.system.components)
        if missing:
            raise ValueError(f"parts name unknown components {sorted(missing)}")

    def to_json(self) -> dict:
        return {"system": self.system.to_json(), "P1": list(self.P1), "P2": list(self.P2), "Q": list(self.Q)}

    @classmethod
    def from_json(cls, obj: dict) -> "HSystem":
        return cls(LinkSystem.from_json(obj["system"]), obj["P1"], obj["P2"], obj.get("Q", ()))


def check_property(hs: HSystem, u: int, v: int, ell: int, q: int) -> str | None:
    """Name of the first violated condition, or None when property (u, v, ell) holds."""
    if len(hs.Q) != u or len(hs.P1) != v or len(hs.P2) != v:
        return f"shape: expected parts of sizes ({v}, {v}) and {u} singletons"
    sys = hs.system
    parts = [hs.P1, hs.P2] + [(c,) for c in hs.Q]
    for p1, p2 in combinations(parts, 2):
        for a in p1:
            for b in p2:
                if sys.lk(a, b) == 0:
                    return f"L1: lk({a}, {b}) = 0"
    for a, b in combinations(hs.Q, 2):
        if sys.lk(a, b) % q:
            return f"L2: lk({a}, {b}) = {sys.lk(a, b)} is not a multiple of {q}"
    for c in hs.P1 + hs.P2:
        if sys.path_length[c] < ell:
            return f"L3: {c} has path length {sys.path_length[c]} < {ell}"
    return None


def modq_step_parameters(u: int, v: int, ell: int, q: int) -> dict[str, int]:
    """Sizes needed from a property ``(u, w, lambda)`` system to reach ``(u + 1, v, ell)``."""
    if u < 0 or min(v, ell, q) < 1:
        raise ValueError("need u >= 0 and v, ell, q >= 1")
    S, T = v, u + v
    A = 2 ** T * 3 ** S * (S + T) * q ** (S + T)
    lam = max(ell, (2 * q) ** (S + T))
    return {"S": S, "T": T, "A": A, "B": A, "lambda": lam, "w": S + A}


def synthesize_h_system(u: int, v: int, ell: int, q: int, seed: int,
                        low: int = -5, high: int = 5, max_components: int = 5000) -> HSystem:
    """Random system with property ``(u, v, ell)``.

    Pairs inside ``P1`` or ``P2`` get arbitrary values (zero allowed), pairs
    across parts nonzero values in ``[low, high]`` and ``Q`` pairs small
    nonzero multiples of q.
    """
    if 2 * v + u > max_components:
        raise OverflowError(f"{2 * v + u} components exceed the limit of {max_components}")
    rng = random.Random(seed)
    P1 = [f"a{i}" for i in range(1, v + 1)]
    P2 = [f"b{i}" for i in range(1, v + 1)]
    Q = [f"q{i}" for i in range(1, u + 1)]
    nonzero = [x for x in range(low, high + 1) if x]
    lk = {}
    parts = [P1, P2] + [[c] for c in Q]
    for part in (P1, P2):
        for a, b in combinations(part, 2):
            lk[(a, b)] = rng.randint(low, high)
    for p1, p2 in combinations(parts, 2):
        for a in p1:
            for b in p2:
                lk[(a, b)] = rng.choice(nonzero)
    for a, b in combinations(Q, 2):
        lk[(a, b)] = q * rng.choice([-3, -2, -1, 1, 2, 3])
    lengths = {c: ell for c in P1 + P2}
    return HSystem(LinkSystem.build(P1 + P2 + Q, lk, lengths), P1, P2, Q)


def _stitch_input(hs: HSystem, params: dict, q: int, supplier) -> tuple[StitchInput, dict[str, list[str]]]:
    S, A, B = params["S"], params["A"], params["B"]
    sys = hs.system
    X, L = list(hs.P1[:S]), list(hs.P1[S:S + B])
    Y, J = list(hs.P2[:S]) + list(hs.Q), list(hs.P2[S:S + A])

    def block(rows, cols):
        return tuple(tuple(sys.lk(r, c) for c in cols) for r in rows)

    inp = StitchInput(S, len(Y), q, block(J, X), block(J, Y), block(L, X), block(L, Y),
                      params["lambda"], supplier)
    return inp, {"X": X, "Y": Y, "J": J, "L": L}


def _next_system(hs: HSystem, roles: dict, z: Sequence[int], zid: str, v: int) -> HSystem:
    X, Y = roles["X"], roles["Y"]
    targets = X + Y
    sys = hs.system.restrict(targets).with_component(zid, dict(zip(targets, z)), 0)
    return HSystem(sys, X, Y[:v], tuple(hs.Q) + (zid,))


def _fresh_id(hs: HSystem, u: int) -> str:
    zid = f"Z{u + 1}"
    while zid in hs.system.path_length:
        zid += "'"
    return zid


def theorem_modq_step(hs: HSystem, u: int, v: int, ell: int, q: int, supplier) -> tuple[HSystem, dict]:
    """One induction step from property ``(u, w, lambda)`` to ``(u + 1, v, ell)``."""
    params = modq_step_parameters(u, v, ell, q)
    problem = check_property(hs, u, params["w"], params["lambda"], q)
    if problem:
        raise ValueError(f"input system lacks property ({u}, {params['w']}, {params['lambda']}): {problem}")
    inp, roles = _stitch_input(hs, params, q, supplier)
    chain, z, trace = stitch_links(inp)
    zid = _fresh_id(hs, u)
    nxt = _next_system(hs, roles, z, zid, v)
    name = {f"J{i}": c for i, c in enumerate(roles["J"], start=1)}
    name.update({f"L{i}": c for i, c in enumerate(roles["L"], start=1)})
    step = {"u": u, "v": v, "ell": ell, "q": q, "params": params, "z_id": zid,
            "z_components": [name[c] for c in trace.components], "z": list(z),
            "stitch": trace.to_json()}
    return nxt, step


def replay_modq_step(hs: HSystem, step: dict, supplier) -> HSystem:
    u, v, ell, q = step["u"], step["v"], step["ell"], step["q"]
    params = modq_step_parameters(u, v, ell, q)
    if params != step["params"]:
        raise ValueError("recorded parameters differ from the formulas")
    problem = check_property(hs, u, params["w"], params["lambda"], q)
    if problem:
        raise ValueError(problem)
    inp, roles = _stitch_input(hs, params, q, supplier)
    _, z = replay_stitch(inp, PipelineTrace.from_json(step["stitch"]))
    if list(z) != step["z"]:
        raise ValueError("replayed linking vector differs from the trace")
    return _next_system(hs, roles, z, step["z_id"], v)


def modq_schedule(r: int, v: int, ell: int, q: int, start_u: int | None = None) -> list[tuple[int, int, int]]:
    """``(u, v_u, ell_u)`` from ``start_u`` up to ``(r, v, ell)``."""
    if r < 1:
        raise ValueError("r must be positive")
    start = r - 1 if start_u is None else start_u
    if not 0 <= start <= r:
        raise ValueError("start_u must lie in 0..r")
    sched = [(r, v, ell)]
    for u in range(r - 1, start - 1, -1):
        p = modq_step_parameters(u, sched[-1][1], sched[-1][2], q)
        sched.append((u, p["w"], p["lambda"]))
    return sched[::-1]


@dataclass
class TheoremTrace:
    r: int
    q: int
    schedule: list[list[int]]
    steps: list[dict] = field(default_factory=list)
    q_pairs: list[list] = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "TheoremTrace":
        return cls(**obj)


def _q_pairs(hs: HSystem) -> list[list]:
    return [[a, b, hs.system.lk(a, b)] for a, b in combinations(hs.Q, 2)]


def theorem_modq_orchestrate(r: int, v: int, ell: int, q: int,
                             base_provider: Callable[[int, int, int, int], HSystem],
                             supplier_factory: Callable[[int, int], object],
                             start_u: int | None = None) -> tuple[HSystem, TheoremTrace]:
    """Run the induction from ``start_u`` (default ``r - 1``) up to ``u = r``.

    ``base_provider(u, v_u, ell_u, q)`` supplies the starting system and
    ``supplier_factory(u, dim)`` the segment supplier of step u.  Every pair of
    ``Q`` components in the result is checked to link by a nonzero multiple of q.
    """
    sched = modq_schedule(r, v, ell, q, start_u)
    u0, v0, ell0 = sched[0]
    hs = base_provider(u0, v0, ell0, q)
    problem = check_property(hs, u0, v0, ell0, q)
    if problem:
        raise ValueError(f"base system lacks property ({u0}, {v0}, {ell0}): {problem}")
    trace = TheoremTrace(r, q, [list(s) for s in sched])
    for u, vu, ellu in sched[1:]:
        prev = u - 1
        hs, step = theorem_modq_step(hs, prev, vu, ellu, q, supplier_factory(prev, 2 * vu + prev))
        trace.steps.append(step)
    if check_property(hs, r, v, ell, q) is not None:
        raise AssertionError(check_property(hs, r, v, ell, q))
    trace.q_pairs = _q_pairs(hs)
    if not verify_conclusion([p[2] for p in trace.q_pairs], q):
        raise AssertionError("a Q pair fails the divisibility conclusion")
    return hs, trace


def replay_theorem(base: HSystem, trace: TheoremTrace,
                   supplier_factory: Callable[[int, int], object]) -> HSystem:
    hs = base
    for step in trace.steps:
        hs = replay_modq_step(hs, step, supplier_factory(step["u"], 2 * step["v"] + step["u"]))
    if _q_pairs(hs) != trace.q_pairs:
        raise ValueError("replayed Q linking numbers differ from the trace")
    return hs


def bipartite_base_provider(oracle, seed: int = 0, low: int = -5, high: int = 5):
    """Base case ``u = 0`` from the mod-2 bipartite system.

    Each ``Z``-``R`` pair is lifted to a random odd integer; pairs inside a
    part get arbitrary values.
    """
    def provider(u: int, v: int, ell: int, q: int) -> HSystem:
        if u != 0:
            raise ValueError("the bipartite base case has u = 0")
        sys2, _ = bipartite_orchestrate(v, oracle, ell)
        rng = random.Random(seed)
        zs = [c for c in sys2.components if c.startswith("Z")]
        rs = [c for c in sys2.components if c.startswith("R")]
        odd = [x for x in range(low, high + 1) if x % 2]
        lk = {k: rng.choice(odd) for k in sys2.entries}
        for part in (zs, rs):
            for a, b in combinations(part, 2):
                lk[(a, b)] = rng.randint(low, high)
        return HSystem(LinkSystem.build(sys2.components, lk, sys2.path_length), zs, rs)
    return provider
