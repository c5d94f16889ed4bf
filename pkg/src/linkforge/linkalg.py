"""Oriented link systems described only by their linking numbers.

Components carry string ids.  Linking numbers are stored sparsely on
unordered pairs; a missing pair means linking number zero.  Self-linking is
not represented.  Chains are integer combinations of components and pair
bilinearly with the linking matrix.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

LinkingVector = tuple[int, ...]


def _key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class LinkSystem:
    components: tuple[str, ...]
    entries: Mapping[tuple[str, str], int] = field(default_factory=dict)
    path_length: Mapping[str, int] = field(default_factory=dict)
    orientation: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if len(set(comps)) != len(comps):
            raise ValueError("component ids must be distinct")
        known = set(comps)
        entries = {}
        for (a, b), v in dict(self.entries).items():
            if a == b:
                raise ValueError(f"self-linking of {a!r} is not represented")
            if a not in known or b not in known:
                raise ValueError(f"unknown component in pair ({a!r}, {b!r})")
            if v:
                entries[_key(a, b)] = int(v)
        object.__setattr__(self, "entries", entries)
        pl = {c: int(dict(self.path_length).get(c, 0)) for c in comps}
        if any(v < 0 for v in pl.values()):
            raise ValueError("path_length metadata must be non-negative")
        object.__setattr__(self, "path_length", pl)
        object.__setattr__(self, "orientation", {c: int(dict(self.orientation).get(c, 1)) for c in comps})

    __hash__ = None

    @classmethod
    def build(cls, components: Iterable[str], lk: Mapping[tuple[str, str], int] | None = None,
              path_length: Mapping[str, int] | None = None) -> "LinkSystem":
        comps = tuple(components)
        entries: dict[tuple[str, str], int] = {}
        for (a, b), v in (lk or {}).items():
            k = _key(a, b)
            if k in entries and entries[k] != v:
                raise ValueError(f"asymmetric linking numbers given for {k}")
            entries[k] = v
        return cls(comps, entries, dict(path_length or {}))

    def _require(self, *ids: str) -> None:
        for c in ids:
            if c not in self.path_length:
                raise KeyError(f"unknown component {c!r}")

    def lk(self, a: str, b: str) -> int:
        self._require(a, b)
        if a == b:
            raise ValueError(f"self-linking of {a!r} is undefined")
        return self.entries.get(_key(a, b), 0)

    def with_component(self, cid: str, lk: Mapping[str, int], path_length: int = 0) -> "LinkSystem":
        if cid in self.path_length:
            raise ValueError(f"component {cid!r} already present")
        entries = dict(self.entries)
        for other, v in lk.items():
            self._require(other)
            entries[_key(cid, other)] = v
        pl = dict(self.path_length)
        pl[cid] = path_length
        orient = dict(self.orientation)
        return LinkSystem(self.components + (cid,), entries, pl, orient)

    def restrict(self, ids: Sequence[str]) -> "LinkSystem":
        self._require(*ids)
        keep = set(ids)
        return LinkSystem(tuple(ids),
                          {k: v for k, v in self.entries.items() if k[0] in keep and k[1] in keep},
                          {c: self.path_length[c] for c in ids},
                          {c: self.orientation[c] for c in ids})

    def to_json(self) -> dict:
        pos = {c: i for i, c in enumerate(self.components)}
        triples = sorted([min(pos[a], pos[b]), max(pos[a], pos[b]), v] for (a, b), v in self.entries.items())
        return {"components": [{"id": c, "path_length": self.path_length[c]} for c in self.components],
                "lk": triples}

    @classmethod
    def from_json(cls, obj: dict) -> "LinkSystem":
        comps = tuple(c["id"] for c in obj["components"])
        entries = {}
        for i, j, v in obj["lk"]:
            if not i < j:
                raise ValueError("linking triples must have i < j")
            entries[(comps[i], comps[j])] = v
        return cls.build(comps, entries, {c["id"]: c.get("path_length", 0) for c in obj["components"]})

    @classmethod
    def load(cls, path: str) -> "LinkSystem":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


class Chain(dict):
    """Finitely supported integer combination of component ids (zeros dropped)."""

    def __init__(self, coeffs: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        super().__init__()
        for c, v in dict(coeffs).items():
            if v:
                self[c] = int(v)

    @classmethod
    def of(cls, *ids: str) -> "Chain":
        out = cls()
        for c in ids:
            out = out + cls({c: 1})
        return out

    def support(self) -> set[str]:
        return set(self)

    def __add__(self, other: Mapping[str, int]) -> "Chain":
        out = dict(self)
        for c, v in other.items():
            out[c] = out.get(c, 0) + v
        return Chain(out)

    def __neg__(self) -> "Chain":
        return Chain({c: -v for c, v in self.items()})

    def __sub__(self, other: Mapping[str, int]) -> "Chain":
        return self + Chain(other).__neg__()

    def __rmul__(self, k: int) -> "Chain":
        return Chain({c: k * v for c, v in self.items()})

    __mul__ = __rmul__


def submatrix(sys: LinkSystem, rows: Sequence[str], cols: Sequence[str]) -> list[list[int]]:
    """Linking matrix ``[lk(r, c)]`` of two disjoint ordered families."""
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        raise ValueError("row and column ids must be distinct")
    return [[sys.lk(r, c) for c in cols] for r in rows]


def reverse_orientation(sys: LinkSystem, c: str) -> LinkSystem:
    sys._require(c)
    entries = {k: (-v if c in k else v) for k, v in sys.entries.items()}
    orient = dict(sys.orientation)
    orient[c] = -orient[c]
    return LinkSystem(sys.components, entries, sys.path_length, orient)


def chain_lk(sys: LinkSystem, z: Mapping[str, int], target: str) -> int:
    if target in z and z[target]:
        raise ValueError(f"target {target!r} lies in the support of the chain")
    sys._require(target, *z)
    return sum(v * sys.lk(c, target) for c, v in z.items())


def chain_vector(sys: LinkSystem, z: Mapping[str, int], targets: Sequence[str]) -> LinkingVector:
    return tuple(chain_lk(sys, z, t) for t in targets)


def sign_pattern(v: Sequence[int], alphabet: int = 3) -> str:
    """Per-entry sign string over ``+-`` (alphabet 2) or ``+-0`` (alphabet 3)."""
    if alphabet not in (2, 3):
        raise ValueError("alphabet must be 2 or 3")
    if alphabet == 2 and any(x == 0 for x in v):
        raise ValueError("zero entry cannot be encoded in the two-valued alphabet")
    return "".join("+" if x > 0 else "-" if x < 0 else "0" for x in v)


def mod2_reduce(sys: LinkSystem) -> LinkSystem:
    """Same components, linking numbers replaced by their residues mod 2."""
    return LinkSystem(sys.components, {k: v % 2 for k, v in sys.entries.items()},
                      sys.path_length, sys.orientation)


def linking_pattern(sys: LinkSystem, modulus: int | None = None) -> set[frozenset[str]]:
    """Edges of the (mod ``modulus``) linking pattern graph."""
    return {frozenset(k) for k, v in sys.entries.items() if (v if modulus is None else v % modulus)}


def is_generalised_key_ring(sys: LinkSystem, ring: str, keys: Sequence[str], modulus: int | None = None) -> bool:
    """True when the pattern contains the star centred at ``ring`` with leaves ``keys``."""
    edges = linking_pattern(sys, modulus)
    return all(frozenset((ring, k)) in edges for k in keys)


def contains_complete_bipartite(sys: LinkSystem, left: Sequence[str], right: Sequence[str],
                                modulus: int | None = None) -> bool:
    edges = linking_pattern(sys, modulus)
    return all(frozenset((a, b)) in edges for a in left for b in right)


def verify_conclusion(vec: Sequence[int], q: int) -> bool:
    """Every entry is a nonzero multiple of ``q``."""
    if q < 1:
        raise ValueError("q must be positive")
    return all(e != 0 and e % q == 0 for e in vec)
