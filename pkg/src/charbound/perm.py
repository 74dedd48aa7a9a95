"""Finite permutation groups by full enumeration.

Permutations are tuples of 0-based images, ``p[i]`` being the image of
point ``i``.  Products compose right-to-left: ``mul(p, q)`` applies ``q``
first, so ``mul(p, q)[i] == p[q[i]]``.  Cycle notation used by
:func:`from_cycles` is 1-based to match the usual mathematical writing.
"""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

Perm = tuple[int, ...]

DEFAULT_CAP = 100_000


class GroupError(ValueError):
    """Invalid group data: malformed permutations, cap overflow, bad maps."""


def identity(degree: int) -> Perm:
    return tuple(range(degree))


def mul(p: Perm, q: Perm) -> Perm:
    return tuple(p[i] for i in q)


def inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def conj(g: Perm, x: Perm) -> Perm:
    """Return ``g x g^-1``."""
    return mul(mul(g, x), inv(g))


def perm_order(p: Perm) -> int:
    seen = [False] * len(p)
    order = 1
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = p[i]
            length += 1
        order = order * length // math.gcd(order, length)
    return order


def check_perm(p: Sequence[int], degree: int) -> Perm:
    p = tuple(int(i) for i in p)
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise GroupError(f"not a permutation of {degree} points: {p!r}")
    return p


def from_cycles(cycles: Iterable[Sequence[int]], degree: int) -> Perm:
    """Build a permutation from 1-based cycles, e.g. ``[(1, 2, 3)]``."""
    out = list(range(degree))
    seen: set[int] = set()
    for cyc in cycles:
        pts = [int(c) - 1 for c in cyc]
        for a in pts:
            if not 0 <= a < degree:
                raise GroupError(f"point {a + 1} outside 1..{degree}")
            if a in seen:
                raise GroupError(f"point {a + 1} repeated in cycles")
            seen.add(a)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            out[a] = b
    return tuple(out)


def to_cycles(p: Perm) -> list[tuple[int, ...]]:
    """1-based nontrivial cycles of ``p``."""
    seen: set[int] = set()
    out = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = []
        i = start
        while i not in seen:
            seen.add(i)
            cyc.append(i + 1)
            i = p[i]
        out.append(tuple(cyc))
    return out


def fmt_perm(p: Perm) -> str:
    cycles = to_cycles(p)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


@dataclass(frozen=True, eq=False)
class ConjClassData:
    representatives: tuple[Perm, ...]
    class_sizes: tuple[int, ...]
    class_of: Mapping[Perm, int]
    members: tuple[tuple[Perm, ...], ...]

    def __len__(self) -> int:
        return len(self.representatives)


@dataclass(frozen=True, eq=False)
class PermGroup:
    """A permutation group together with its full element list.

    Elements are stored sorted, so ``elements[0]`` is the identity.
    """

    degree: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]
    name: str = ""
    _index: dict[Perm, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self._index:
            self._index.update((g, i) for i, g in enumerate(self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return identity(self.degree)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g: object) -> bool:
        return g in self._index

    def index(self, g: Perm) -> int:
        return self._index[g]

    def __repr__(self) -> str:
        label = self.name or "PermGroup"
        return f"<{label} of order {self.order} on {self.degree} points>"

    @cached_property
    def classes(self) -> ConjClassData:
        return conjugacy_classes(self)

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return self.degree == other.degree and all(g in other for g in self.elements)

    def is_abelian(self) -> bool:
        return all(mul(a, b) == mul(b, a) for a in self.generators for b in self.generators)

    def centralizer_order(self, x: Perm) -> int:
        return sum(1 for g in self.elements if mul(g, x) == mul(x, g))


def enumerate_group(
    generators: Iterable[Sequence[int]],
    degree: int,
    cap: int = DEFAULT_CAP,
    name: str = "",
) -> PermGroup:
    """Close ``generators`` under composition by breadth-first search."""
    if degree < 1:
        raise GroupError("degree must be positive")
    gens = tuple(check_perm(g, degree) for g in generators)
    e = identity(degree)
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = mul(s, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise GroupError(f"group exceeds the enumeration cap of {cap} elements")
                queue.append(y)
    return PermGroup(degree, gens, tuple(sorted(seen)), name=name)


def subgroup(G: PermGroup, generators: Iterable[Perm], name: str = "") -> PermGroup:
    gens = tuple(generators)
    for g in gens:
        if g not in G:
            raise GroupError(f"{fmt_perm(g)} is not an element of {G!r}")
    return enumerate_group(gens, G.degree, name=name)


def conjugacy_classes(G: PermGroup) -> ConjClassData:
    """Partition ``G`` into conjugacy classes.

    The identity class comes first; each representative is the smallest
    element of its class, and classes are ordered by representative.
    """
    class_of: dict[Perm, int] = {}
    raw: list[tuple[Perm, ...]] = []
    inverses = [inv(g) for g in G.elements]
    for x in G.elements:
        if x in class_of:
            continue
        orbit = {mul(mul(g, x), gi) for g, gi in zip(G.elements, inverses)}
        members = tuple(sorted(orbit))
        for y in members:
            class_of[y] = len(raw)
        raw.append(members)
    # elements are sorted, so raw is already ordered by minimal member
    sizes = tuple(len(m) for m in raw)
    for s in sizes:
        if G.order % s:
            raise GroupError("class size does not divide the group order")
    return ConjClassData(
        representatives=tuple(m[0] for m in raw),
        class_sizes=sizes,
        class_of=class_of,
        members=tuple(raw),
    )


# --- automorphisms ---------------------------------------------------------


def automorphism_from_images(G: PermGroup, images: Sequence[Perm]) -> dict[Perm, Perm]:
    """Extend generator images to a map on all of ``G``; reject non-automorphisms."""
    if len(images) != len(G.generators):
        raise GroupError("need one image per generator")
    for y in images:
        if y not in G:
            raise GroupError("generator image outside the group")
    e = G.identity
    phi = {e: e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for s, t in zip(G.generators, images):
            y = mul(s, x)
            fy = mul(t, phi[x])
            if y in phi:
                if phi[y] != fy:
                    raise GroupError("generator images do not define a homomorphism")
            else:
                phi[y] = fy
                queue.append(y)
    _check_automorphism(G, phi)
    return phi


def inner_automorphism(G: PermGroup, g: Perm) -> dict[Perm, Perm]:
    """Conjugation by ``g``; ``g`` may live in a larger group normalizing ``G``."""
    phi = {x: conj(g, x) for x in G.elements}
    _check_automorphism(G, phi)
    return phi


def as_mapping(G: PermGroup, phi: Mapping[Perm, Perm] | Callable[[Perm], Perm]) -> dict[Perm, Perm]:
    if callable(phi) and not isinstance(phi, Mapping):
        return {x: tuple(phi(x)) for x in G.elements}
    return {x: tuple(phi[x]) for x in G.elements}


def _check_automorphism(G: PermGroup, phi: Mapping[Perm, Perm]) -> None:
    if set(phi) != set(G.elements):
        raise GroupError("map is not defined on every element")
    if set(phi.values()) != set(G.elements):
        raise GroupError("map is not a bijection of the group")
    # generators x all elements suffices for the homomorphism property
    for s in G.generators:
        for y in G.elements:
            if phi[mul(s, y)] != mul(phi[s], phi[y]):
                raise GroupError("map is not a homomorphism")


def automorphism_order(G: PermGroup, phi: Mapping[Perm, Perm]) -> int:
    order = 1
    for s in G.generators:
        k, x = 1, phi[s]
        while x != s:
            x = phi[x]
            k += 1
        order = order * k // math.gcd(order, k)
    return order


def compose_maps(phi: Mapping[Perm, Perm], psi: Mapping[Perm, Perm]) -> dict[Perm, Perm]:
    """``phi o psi``."""
    return {x: phi[y] for x, y in psi.items()}


# --- semidirect products with a cyclic group of automorphisms ---------------


@dataclass(frozen=True, eq=False)
class SemidirectGroup:
    """``G x| <phi>`` realized on the set ``G x {0..m-1}``.

    ``(g, phi^j)`` acts by ``(x, i) -> (g phi^j(x), i + j mod m)``; point
    ``(x, i)`` has index ``G.index(x) + i * |G|``.
    """

    base: PermGroup
    phi: Mapping[Perm, Perm]
    auto_order: int
    realized: PermGroup
    embed: Mapping[Perm, Perm]
    phi_image: Perm
    _pairs: dict[Perm, tuple[Perm, int]] = field(repr=False)

    def pair(self, z: Perm) -> tuple[Perm, int]:
        """Decompose a realized element as ``(g, j)`` with ``z = g phi^j``."""
        return self._pairs[z]

    def element(self, g: Perm, j: int) -> Perm:
        z = self.embed[g]
        for _ in range(j % self.auto_order):
            z = mul(z, self.phi_image)
        return z

    @cached_property
    def embedded_base(self) -> PermGroup:
        return PermGroup(
            self.realized.degree,
            tuple(self.embed[s] for s in self.base.generators),
            tuple(sorted(self.embed.values())),
            name=f"embedded {self.base.name}".strip(),
        )

    @cached_property
    def slice(self) -> CosetSlice:
        elems = tuple(sorted(mul(self.embed[g], self.phi_image) for g in self.base.elements))
        return CosetSlice(self, elems)


@dataclass(frozen=True, eq=False)
class CosetSlice:
    """The coset ``G.phi = {g phi : g in G}`` inside the realized semidirect product."""

    parent: SemidirectGroup
    elements: tuple[Perm, ...]

    def act(self, g: Perm, x: Perm) -> Perm:
        """Conjugation of a slice element by ``g`` in the base group."""
        return conj(self.parent.embed[g], x)


def semidirect_with_automorphism(
    G: PermGroup,
    phi: Mapping[Perm, Perm] | Callable[[Perm], Perm],
    m: int,
    cap: int = DEFAULT_CAP,
) -> SemidirectGroup:
    if m < 1:
        raise GroupError("automorphism order must be at least 1")
    phi = as_mapping(G, phi)
    _check_automorphism(G, phi)
    phim = {x: x for x in G.elements}
    for _ in range(m):
        phim = compose_maps(phi, phim)
    if any(phim[x] != x for x in G.elements):
        raise GroupError(f"phi^{m} is not the identity")

    n = G.order
    elems = G.elements
    idx = G._index

    def point_perm(g: Perm, j: int) -> Perm:
        # image of (x, i) under (g, phi^j)
        phij = {x: x for x in elems}
        for _ in range(j):
            phij = compose_maps(phi, phij)
        out = [0] * (n * m)
        for i in range(m):
            for a, x in enumerate(elems):
                out[a + i * n] = idx[mul(g, phij[x])] + ((i + j) % m) * n
        return tuple(out)

    embed = {g: point_perm(g, 0) for g in elems}
    phi_image = point_perm(G.identity, 1)
    gens = [embed[s] for s in G.generators] + ([phi_image] if m > 1 else [])
    realized = enumerate_group(gens, n * m, cap=cap, name=f"{G.name}x|phi".strip())
    if realized.order != n * m:
        raise GroupError("realized semidirect product has the wrong order")
    pairs = {}
    for z in realized.elements:
        pt = z[0]  # image of (identity, 0)
        pairs[z] = (elems[pt % n], pt // n)
    return SemidirectGroup(G, phi, m, realized, embed, phi_image, pairs)


# --- subgroups ----------------------------------------------------------------


def all_subgroups(G: PermGroup) -> list[PermGroup]:
    """Every subgroup of ``G``, found by joining cyclic subgroups to closure."""
    found: dict[frozenset, PermGroup] = {}

    def add(gens: Sequence[Perm]) -> PermGroup:
        H = enumerate_group(gens, G.degree)
        key = frozenset(H.elements)
        if key not in found:
            found[key] = H
        return found[key]

    cyclic = []
    for g in G.elements:
        H = add([g])
        if H not in cyclic:
            cyclic.append(H)
    frontier = list(found.values())
    while frontier:
        new = []
        for H in frontier:
            for C in cyclic:
                if all(x in H for x in C.generators):
                    continue
                key_before = len(found)
                J = add(list(H.generators) + list(C.generators))
                if len(found) > key_before:
                    new.append(J)
        frontier = new
    return sorted(found.values(), key=lambda H: (H.order, H.elements))


def subgroup_classes(G: PermGroup) -> list[PermGroup]:
    """One representative per conjugacy class of subgroups."""
    reps: list[PermGroup] = []
    seen: set[frozenset] = set()
    for H in all_subgroups(G):
        key = frozenset(H.elements)
        if key in seen:
            continue
        reps.append(H)
        for g in G.elements:
            seen.add(frozenset(conj(g, h) for h in H.elements))
    return reps


# --- named groups ---------------------------------------------------------------


def symmetric_group(n: int) -> PermGroup:
    if n == 1:
        return enumerate_group([], 1, name="S1")
    gens = [from_cycles([(1, 2)], n)]
    if n > 2:
        gens.append(from_cycles([tuple(range(1, n + 1))], n))
    return enumerate_group(gens, n, name=f"S{n}")


def alternating_group(n: int) -> PermGroup:
    gens = [from_cycles([(1, 2, i)], n) for i in range(3, n + 1)]
    return enumerate_group(gens, n, name=f"A{n}")


def cyclic_group(n: int) -> PermGroup:
    return enumerate_group([from_cycles([tuple(range(1, n + 1))], n)] if n > 1 else [], n, name=f"C{n}")


def dihedral_group(order: int) -> PermGroup:
    """Dihedral group of the given order acting on ``order // 2`` points."""
    k = order // 2
    if order % 2 or k < 3:
        raise GroupError("dihedral order must be an even number >= 6")
    r = from_cycles([tuple(range(1, k + 1))], k)
    s = from_cycles([(i, k + 2 - i) for i in range(2, k // 2 + 2) if i < k + 2 - i], k)
    return enumerate_group([r, s], k, name=f"D{order}")


def quaternion_group() -> PermGroup:
    """Q8 via its left regular representation on 8 points."""
    # element (sign, unit) with unit 0..3 = 1, i, j, k; point index = unit + 4 * (sign < 0)
    table = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def left(unit: int) -> Perm:
        out = []
        for pt in range(8):
            u, neg = pt % 4, pt // 4
            sign, w = table[unit, u]
            out.append(w + 4 * ((sign < 0) != bool(neg)))
        return tuple(out)

    return enumerate_group([left(1), left(2)], 8, name="Q8")


def direct_product(G: PermGroup, H: PermGroup) -> PermGroup:
    n, m = G.degree, H.degree
    gens = [g + tuple(range(n, n + m)) for g in G.generators]
    gens += [tuple(range(n)) + tuple(n + i for i in h) for h in H.generators]
    return enumerate_group(gens, n + m, name=f"{G.name}x{H.name}")


def named_group(spec: str) -> PermGroup:
    """Parse names like ``S4``, ``A4``, ``C6``, ``D8``, ``Q8`` or products ``S3xC2``."""
    spec = spec.strip()
    if "x" in spec:
        parts = [named_group(p) for p in spec.split("x")]
        out = parts[0]
        for p in parts[1:]:
            out = direct_product(out, p)
        return out
    if spec.upper() == "Q8":
        return quaternion_group()
    kind, num = spec[:1].upper(), spec[1:]
    if not num.isdigit():
        raise GroupError(f"cannot parse group {spec!r}")
    k = int(num)
    if kind == "S":
        return symmetric_group(k)
    if kind == "A":
        return alternating_group(k)
    if kind == "C":
        return cyclic_group(k)
    if kind == "D":
        return dihedral_group(k)
    raise GroupError(f"cannot parse group {spec!r}")


def parse_generators(text: str) -> list[list[tuple[int, ...]]]:
    """Parse ``"(1 2);(1 2 3)"`` into lists of 1-based cycles per generator."""
    gens = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        cycles = []
        for piece in chunk.replace(")", ")|").split("|"):
            piece = piece.strip().strip("()").replace(",", " ")
            if piece:
                cycles.append(tuple(int(t) for t in piece.split()))
        gens.append(cycles)
    return gens


def group_from_spec(spec: str) -> PermGroup:
    """Named group, or ``"deg:(1 2);(1 2 3)"`` generator syntax."""
    if ":" in spec:
        deg, gens = spec.split(":", 1)
        degree = int(deg)
        perms = [from_cycles(c, degree) for c in parse_generators(gens)]
        return enumerate_group(perms, degree, name=spec)
    return named_group(spec)

