"""Abstract triangulated complexes stored as oriented facets.

A complex is pure: every facet is an ``n``-simplex, and lower faces are
implied.  Orientation is a sign relative to the sorted vertex order of each
facet; the face obtained by deleting position ``i`` inherits ``sign * (-1)**i``.

The module builds n-paths (stacked discs whose contiguous facet ranges are
discs), prism spheres ``boundary(D x I)`` with the staircase triangulation,
connect sums, and searches spheres for pairs of oppositely oriented copies
of a disc.
"""
from __future__ import annotations

import itertools
import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from math import ceil
from typing import Iterable, Iterator, Sequence


@dataclass(frozen=True, order=True)
class Simplex:
    vertices: tuple[int, ...]

    def __post_init__(self):
        vs = tuple(self.vertices)
        object.__setattr__(self, "vertices", vs)
        if not vs:
            raise ValueError("simplex must have at least one vertex")
        if any(not isinstance(v, int) or v < 0 for v in vs):
            raise ValueError(f"vertex ids must be non-negative integers: {vs}")
        if any(a >= b for a, b in zip(vs, vs[1:])):
            raise ValueError(f"simplex vertices must be strictly increasing: {vs}")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True, order=True)
class OrientedFacet:
    simplex: Simplex
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"orientation sign must be +1 or -1, got {self.sign}")

    @classmethod
    def of(cls, vertices: Iterable[int], sign: int = 1) -> "OrientedFacet":
        return cls(Simplex(tuple(vertices)), sign)

    @property
    def vertices(self) -> tuple[int, ...]:
        return self.simplex.vertices

    def boundary(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """Yield ``(face, induced_sign)`` for each codimension-one face."""
        vs = self.vertices
        for i in range(len(vs)):
            yield vs[:i] + vs[i + 1:], self.sign * (-1) ** i


def _permutation_parity(seq: Sequence[int]) -> int:
    """Sign of the permutation that sorts ``seq`` (entries distinct)."""
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class SimplicialComplex:
    n: int
    facets: tuple[OrientedFacet, ...]

    def __post_init__(self):
        object.__setattr__(self, "facets", tuple(self.facets))
        if self.n < 0:
            raise ValueError("dimension must be non-negative")
        seen = set()
        for f in self.facets:
            if f.simplex.dim != self.n:
                raise ValueError(f"facet {f.vertices} is not {self.n}-dimensional")
            if f.vertices in seen:
                raise ValueError(f"duplicate facet {f.vertices}")
            seen.add(f.vertices)

    @classmethod
    def from_lists(cls, n: int, facets: Iterable[Sequence[int]], signs: Iterable[int] | None = None):
        facets = [tuple(sorted(f)) for f in facets]
        signs = list(signs) if signs is not None else [1] * len(facets)
        return cls(n, tuple(OrientedFacet.of(f, s) for f, s in zip(facets, signs)))

    def __len__(self) -> int:
        return len(self.facets)

    def vertex_set(self) -> set[int]:
        return {v for f in self.facets for v in f.vertices}

    def num_vertices(self) -> int:
        return len(self.vertex_set())

    def facet_index(self) -> dict[tuple[int, ...], int]:
        return {f.vertices: i for i, f in enumerate(self.facets)}

    def faces(self, k: int) -> set[tuple[int, ...]]:
        out = set()
        for f in self.facets:
            out.update(itertools.combinations(f.vertices, k + 1))
        return out

    def f_vector(self) -> list[int]:
        return [len(self.faces(k)) for k in range(self.n + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.f_vector()))

    def ridge_incidence(self) -> dict[tuple[int, ...], list[tuple[int, int]]]:
        """Map each (n-1)-face to the ``(facet index, induced sign)`` pairs containing it."""
        inc: dict[tuple[int, ...], list[tuple[int, int]]] = defaultdict(list)
        for i, f in enumerate(self.facets):
            for face, s in f.boundary():
                inc[face].append((i, s))
        return inc

    def boundary_ridges(self) -> list[OrientedFacet]:
        """Boundary (n-1)-simplices with their induced orientations, sorted."""
        if self.n == 0:
            return []
        out = [OrientedFacet.of(r, occ[0][1])
               for r, occ in self.ridge_incidence().items() if len(occ) == 1]
        return sorted(out)

    def is_connected(self) -> bool:
        """Strong connectivity: facets linked through shared (n-1)-faces."""
        if not self.facets:
            return False
        if self.n == 0:
            return len(self.facets) == 1
        adj = defaultdict(set)
        for occ in self.ridge_incidence().values():
            for a, _ in occ:
                for b, _ in occ:
                    if a != b:
                        adj[a].add(b)
        seen = {0}
        todo = [0]
        while todo:
            for b in adj[todo.pop()]:
                if b not in seen:
                    seen.add(b)
                    todo.append(b)
        return len(seen) == len(self.facets)

    def is_pseudomanifold(self) -> bool:
        return all(len(occ) <= 2 for occ in self.ridge_incidence().values())

    def is_consistently_oriented(self) -> bool:
        for occ in self.ridge_incidence().values():
            if len(occ) == 2 and occ[0][1] == occ[1][1]:
                return False
        return True

    def relabel(self, mapping: dict[int, int]) -> "SimplicialComplex":
        """Apply an injective vertex map, re-sorting vertices and adjusting signs."""
        facets = []
        for f in self.facets:
            image = [mapping[v] for v in f.vertices]
            facets.append(OrientedFacet.of(sorted(image), f.sign * _permutation_parity(image)))
        return SimplicialComplex(self.n, tuple(facets))

    def reversed(self) -> "SimplicialComplex":
        return SimplicialComplex(self.n, tuple(OrientedFacet(f.simplex, -f.sign) for f in self.facets))

    def to_json(self) -> dict:
        return {"n": self.n, "facets": [{"v": list(f.vertices), "sign": f.sign} for f in self.facets]}

    @classmethod
    def from_json(cls, obj: dict) -> "SimplicialComplex":
        return cls(int(obj["n"]), tuple(OrientedFacet.of(f["v"], int(f.get("sign", 1)))
                                        for f in obj["facets"]))


def orient_consistently(n: int, simplices: Sequence[Sequence[int]], first_sign: int = 1) -> SimplicialComplex | None:
    """Assign facet signs so that shared ridges get opposite induced signs.

    Returns ``None`` when no consistent orientation exists.  Each strongly
    connected component is seeded from its lowest-index facet with
    ``first_sign``.
    """
    verts = [tuple(sorted(s)) for s in simplices]
    inc: dict[tuple[int, ...], list[tuple[int, int]]] = defaultdict(list)
    for i, vs in enumerate(verts):
        for j in range(len(vs)):
            inc[vs[:j] + vs[j + 1:]].append((i, (-1) ** j))
    signs: list[int | None] = [None] * len(verts)
    for root in range(len(verts)):
        if signs[root] is not None:
            continue
        signs[root] = first_sign
        todo = deque([root])
        while todo:
            a = todo.popleft()
            vs = verts[a]
            for j in range(len(vs)):
                occ = inc[vs[:j] + vs[j + 1:]]
                if len(occ) > 2:
                    return None
                pa = dict(occ)[a]
                for b, pb in occ:
                    if b == a:
                        continue
                    want = -signs[a] * pa * pb
                    if signs[b] is None:
                        signs[b] = want
                        todo.append(b)
                    elif signs[b] != want:
                        return None
    return SimplicialComplex(n, tuple(OrientedFacet.of(v, s) for v, s in zip(verts, signs)))


# ---------------------------------------------------------------------------
# n-paths


@dataclass(frozen=True)
class NPath:
    complex: SimplicialComplex
    order: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        if sorted(self.order) != list(range(len(self.complex.facets))):
            raise ValueError("order must be a permutation of the facet indices")

    @property
    def n(self) -> int:
        return self.complex.n

    @property
    def length(self) -> int:
        return len(self.order)

    def facet(self, i: int) -> OrientedFacet:
        """The ``i``-th facet of the path, 1-based."""
        return self.complex.facets[self.order[i - 1]]

    def to_json(self) -> dict:
        obj = self.complex.to_json()
        obj["order"] = list(self.order)
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "NPath":
        c = SimplicialComplex.from_json(obj)
        return cls(c, tuple(obj.get("order", range(len(c.facets)))))


def build_path(n: int, length: int) -> NPath:
    """Stacked n-path: facet i spans vertices ``i-1 .. i-1+n``.

    Consecutive facets share the n vertices ``i .. i+n-1``, so the glued disc
    has ``length + n`` vertices.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"path dimension must be a positive integer, got {n!r}")
    if not isinstance(length, int) or length < 1:
        raise ValueError(f"path length must be a positive integer, got {length!r}")
    simplices = [range(i, i + n + 1) for i in range(length)]
    c = orient_consistently(n, simplices)
    assert c is not None
    return NPath(c, tuple(range(length)))


def path_subrange(p: NPath, a: int, b: int) -> SimplicialComplex:
    """Union of facets ``a..b`` (1-based, inclusive) with inherited orientation."""
    if not (1 <= a <= b <= p.length):
        raise ValueError(f"need 1 <= a <= b <= {p.length}, got ({a}, {b})")
    return SimplicialComplex(p.n, tuple(p.facet(i) for i in range(a, b + 1)))


def _vertex_links_ok(c: SimplicialComplex) -> bool:
    # n = 2 only: every vertex link must be a single path or cycle.
    links: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for f in c.facets:
        for v in f.vertices:
            links[v].append(tuple(w for w in f.vertices if w != v))
    for edges in links.values():
        deg = defaultdict(int)
        adj = defaultdict(set)
        for a, b in edges:
            deg[a] += 1
            deg[b] += 1
            adj[a].add(b)
            adj[b].add(a)
        if any(d > 2 for d in deg.values()):
            return False
        start = next(iter(adj))
        seen = {start}
        todo = [start]
        while todo:
            for w in adj[todo.pop()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        if len(seen) != len(adj):
            return False
    return True


def is_disc_candidate(c: SimplicialComplex) -> bool:
    """Checkable necessary conditions for a disc.

    Connected, pseudomanifold with nonempty boundary, orientable, Euler
    characteristic 1, and for n = 2 manifold vertex links.  For n <= 2 these
    conditions are also sufficient.
    """
    if not c.facets or not c.is_connected() or not c.is_pseudomanifold():
        return False
    if c.euler_characteristic() != 1:
        return False
    if orient_consistently(c.n, [f.vertices for f in c.facets]) is None:
        return False
    if c.n >= 1 and not c.boundary_ridges():
        return False
    if c.n == 2 and not _vertex_links_ok(c):
        return False
    return True


def validate_path(p: NPath) -> bool:
    n = p.n
    for i in range(1, p.length):
        shared = set(p.facet(i).vertices) & set(p.facet(i + 1).vertices)
        if len(shared) != n:
            return False
    for a in range(1, p.length + 1):
        for b in range(a, p.length + 1):
            if not is_disc_candidate(path_subrange(p, a, b)):
                return False
    return True


def boundary_complex(c: SimplicialComplex) -> SimplicialComplex:
    """Boundary of a pure complex as an oriented (n-1)-complex."""
    return SimplicialComplex(c.n - 1, tuple(c.boundary_ridges()))


def boundary_of_simplex(n: int, offset: int = 0) -> "TriangulatedSphere":
    """The n-sphere bounding an (n+1)-simplex on vertices ``offset..offset+n+1``."""
    top = OrientedFacet.of(range(offset, offset + n + 2), 1)
    return TriangulatedSphere(SimplicialComplex(n, tuple(sorted(
        OrientedFacet.of(face, s) for face, s in top.boundary()))))


# ---------------------------------------------------------------------------
# spheres


@dataclass(frozen=True)
class DiscCopyPair:
    """Two vertex-disjoint copies of a disc inside a sphere.

    ``maps[i]`` sends disc vertex ids to sphere vertex ids; ``signs[i]`` is +1
    when the copy is orientation preserving, -1 when reversing.
    """
    maps: tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]]
    signs: tuple[int, int]

    def __post_init__(self):
        a, b = (dict(m) for m in self.maps)
        if set(a.values()) & set(b.values()):
            raise ValueError("disc copies must be vertex-disjoint")
        if sorted(self.signs) != [-1, 1]:
            raise ValueError("disc copies must be oppositely oriented")

    def map(self, i: int) -> dict[int, int]:
        return dict(self.maps[i])


@dataclass(frozen=True)
class TriangulatedSphere:
    complex: SimplicialComplex
    copies: DiscCopyPair | None = field(default=None, compare=False)

    def __post_init__(self):
        problems = sphere_problems(self.complex)
        if problems:
            raise ValueError("not a triangulated sphere: " + "; ".join(problems))

    @property
    def n(self) -> int:
        return self.complex.n

    @property
    def facets(self) -> tuple[OrientedFacet, ...]:
        return self.complex.facets

    def num_vertices(self) -> int:
        return self.complex.num_vertices()


def sphere_problems(c: SimplicialComplex) -> list[str]:
    problems = []
    for r, occ in c.ridge_incidence().items():
        if len(occ) != 2:
            problems.append(f"ridge {r} lies in {len(occ)} facets")
            break
        if occ[0][1] == occ[1][1]:
            problems.append(f"ridge {r} receives equal induced orientations")
            break
    if not c.is_connected():
        problems.append("not connected")
    chi = c.euler_characteristic()
    if chi != 1 + (-1) ** c.n:
        problems.append(f"Euler characteristic {chi} != {1 + (-1) ** c.n}")
    return problems


def _disc_complex(D: NPath | SimplicialComplex) -> SimplicialComplex:
    if isinstance(D, NPath):
        if not validate_path(D):
            raise ValueError("invalid path")
        return D.complex
    if not is_disc_candidate(D):
        raise ValueError("complex is not a disc")
    if not D.is_consistently_oriented():
        raise ValueError("disc must be consistently oriented")
    return D


def _copy_orientation(disc: SimplicialComplex, mapping: dict[int, int],
                      target_signs: dict[tuple[int, ...], int]) -> int | None:
    """+1/-1 if ``mapping`` embeds ``disc`` preserving/reversing orientation."""
    orient = None
    for f in disc.facets:
        image = [mapping[v] for v in f.vertices]
        key = tuple(sorted(image))
        if key not in target_signs:
            return None
        o = f.sign * _permutation_parity(image) * target_signs[key]
        if orient is None:
            orient = o
        elif o != orient:
            return None
    return orient


def connect_sum_spheres(s1: TriangulatedSphere, d1: Sequence[int],
                        s2: TriangulatedSphere, d2: Sequence[int]) -> TriangulatedSphere:
    """Glue ``s1 - d1`` and ``s2 - d2`` along the boundaries of the removed facets.

    ``s2`` is shifted past the largest id of ``s1``; the i-th vertex of ``d2``
    is identified with the i-th vertex of ``d1``.  ``s2`` is reversed first if
    needed so the result is consistently oriented.
    """
    if s1.n != s2.n:
        raise ValueError("spheres must have equal dimension")
    d1, d2 = tuple(sorted(d1)), tuple(sorted(d2))
    idx1, idx2 = s1.complex.facet_index(), s2.complex.facet_index()
    if d1 not in idx1:
        raise ValueError(f"{d1} is not a facet of the first sphere")
    if d2 not in idx2:
        raise ValueError(f"{d2} is not a facet of the second sphere")
    shift = max(s1.complex.vertex_set()) + 1
    mapping = {v: v + shift for v in s2.complex.vertex_set()}
    mapping.update(zip(d2, d1))
    c2 = s2.complex
    if s1.facets[idx1[d1]].sign == c2.facets[idx2[d2]].sign:
        c2 = c2.reversed()
    facets = [f for f in s1.facets if f.vertices != d1]
    facets += [f for f in c2.relabel(mapping).facets if f.vertices != d1]
    return TriangulatedSphere(SimplicialComplex(s1.n, tuple(facets)), s1.copies)


def _deficit_path_length(n: int, t: int, m: int) -> int:
    # boundary of an (n+1)-path of length L has L*n + 2 facets
    return ceil((m - n * t + 1) / n)


def build_prism_sphere(D: NPath | SimplicialComplex, m: int = 0) -> TriangulatedSphere:
    """``boundary(D x I)`` with the staircase triangulation, enlarged if needed.

    Vertex ``v_i`` (i-th smallest vertex of D) becomes ``i`` on the bottom
    layer and ``d + i`` on the top layer.  The n*t side facets are the extra
    facets; when ``n*t < m`` the boundary of a long enough (n+1)-path is
    connect-summed onto the first side facet.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    disc = _disc_complex(D)
    n = disc.n
    verts = sorted(disc.vertex_set())
    d = len(verts)
    pos = {v: i for i, v in enumerate(verts)}

    counts: dict[tuple[int, ...], int] = defaultdict(int)
    for f in disc.facets:
        idx = [pos[v] for v in f.vertices]
        for j in range(n + 1):
            prism_simplex = tuple(idx[:j + 1]) + tuple(d + i for i in idx[j:])
            for k in range(n + 2):
                counts[prism_simplex[:k] + prism_simplex[k + 1:]] += 1
    faces = sorted(face for face, c in counts.items() if c == 1)

    bottom = {v: pos[v] for v in verts}
    top = {v: d + pos[v] for v in verts}
    c = orient_consistently(n, faces)
    assert c is not None
    signs = {f.vertices: f.sign for f in c.facets}
    if _copy_orientation(disc, bottom, signs) != 1:
        c = c.reversed()
        signs = {f.vertices: f.sign for f in c.facets}
    assert _copy_orientation(disc, top, signs) == -1
    copies = DiscCopyPair((tuple(sorted(bottom.items())), tuple(sorted(top.items()))), (1, -1))
    sphere = TriangulatedSphere(c, copies)

    t = len(disc.boundary_ridges())
    if n * t >= m:
        return sphere
    L = _deficit_path_length(n, t, m)
    ball = build_path(n + 1, L).complex
    filler = TriangulatedSphere(boundary_complex(ball))
    copy_facets = {f.vertices for f in disc.relabel(bottom).facets}
    copy_facets |= {f.vertices for f in disc.relabel(top).facets}
    side = next(f.vertices for f in c.facets if f.vertices not in copy_facets)
    return connect_sum_spheres(sphere, side, filler, filler.facets[0].vertices)


def vsphere_upper_counts(d: int, t: int, n: int, m: int) -> int:
    """Vertex count of ``build_prism_sphere`` for a disc with d vertices and t boundary ridges."""
    if n * t >= m:
        return 2 * d
    return 2 * d + _deficit_path_length(n, t, m)


def vsphere_upper(D: NPath | SimplicialComplex, m: int) -> int:
    disc = D.complex if isinstance(D, NPath) else D
    return vsphere_upper_counts(disc.num_vertices(), len(disc.boundary_ridges()), disc.n, m)


def extra_facet_count(s: TriangulatedSphere) -> int:
    """Facets of ``s`` outside both recorded disc copies."""
    if s.copies is None:
        raise ValueError("sphere carries no disc copies")
    images = [set(s.copies.map(i).values()) for i in (0, 1)]
    return sum(1 for f in s.facets if not any(set(f.vertices) <= im for im in images))


# ---------------------------------------------------------------------------
# D-largeness


def _bfs_facet_order(disc: SimplicialComplex) -> list[int]:
    inc = disc.ridge_incidence()
    order, seen = [0], {0}
    q = deque([0])
    while q:
        a = q.popleft()
        for face, _ in disc.facets[a].boundary():
            for b, _ in inc[face]:
                if b not in seen:
                    seen.add(b)
                    order.append(b)
                    q.append(b)
    return order


def iter_disc_embeddings(s: SimplicialComplex, disc: SimplicialComplex) -> Iterator[tuple[dict[int, int], int]]:
    """All simplicial embeddings of ``disc`` into ``s`` with their orientation sign.

    Search order: root facet of ``s`` in lexicographic order, then vertex
    bijections in lexicographic permutation order, then extension along
    shared ridges.
    """
    order = _bfs_facet_order(disc)
    target_signs = {f.vertices: f.sign for f in s.facets}
    completions: dict[tuple[int, ...], list[int]] = defaultdict(list)
    for f in s.facets:
        for i, v in enumerate(f.vertices):
            completions[f.vertices[:i] + f.vertices[i + 1:]].append(v)
    facets = [disc.facets[i].vertices for i in order]

    def extend(k: int, mapping: dict[int, int], used: set[int]):
        if k == len(facets):
            o = _copy_orientation(disc, mapping, target_signs)
            if o is not None:
                yield dict(mapping), o
            return
        vs = facets[k]
        free = [v for v in vs if v not in mapping]
        if not free:
            if tuple(sorted(mapping[v] for v in vs)) in target_signs:
                yield from extend(k + 1, mapping, used)
            return
        (x,) = free
        ridge = tuple(sorted(mapping[v] for v in vs if v != x))
        for y in sorted(completions.get(ridge, ())):
            if y in used:
                continue
            mapping[x] = y
            used.add(y)
            yield from extend(k + 1, mapping, used)
            del mapping[x]
            used.discard(y)

    root = facets[0]
    for f in sorted(s.facets):
        for perm in itertools.permutations(f.vertices):
            mapping = dict(zip(root, perm))
            yield from extend(1, mapping, set(perm))


def is_D_large(s: TriangulatedSphere, D: NPath | SimplicialComplex) -> DiscCopyPair | None:
    """First-fit witness of two disjoint, oppositely oriented copies of ``D`` in ``s``."""
    disc = D.complex if isinstance(D, NPath) else D
    if disc.n != s.n:
        raise ValueError(f"dimension mismatch: sphere {s.n}, disc {disc.n}")
    if 2 * len(disc.facets) > len(s.facets):
        return None
    found: dict[int, list[tuple[dict[int, int], frozenset[int]]]] = {1: [], -1: []}
    for mapping, o in iter_disc_embeddings(s.complex, disc):
        image = frozenset(mapping.values())
        for other, other_image in found[-o]:
            if not image & other_image:
                pos, neg = (mapping, other) if o == 1 else (other, mapping)
                return DiscCopyPair((tuple(sorted(pos.items())), tuple(sorted(neg.items()))), (1, -1))
        found[o].append((mapping, image))
    return None


def dump_complex(obj: SimplicialComplex | NPath, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj.to_json(), fh)


def load_disc(path: str) -> NPath | SimplicialComplex:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    return NPath.from_json(obj) if "order" in obj else SimplicialComplex.from_json(obj)
