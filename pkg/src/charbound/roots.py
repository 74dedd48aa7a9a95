"""Root systems, Weyl groups and Levi subsystems.

Simple roots use Bourbaki numbering (0-based here).  Cartan entries are
``a[i][j] = <alpha_i^vee, alpha_j>``, so ``s_i(alpha_j) = alpha_j - a[i][j] alpha_i``.
Roots are integer tuples in the basis of simple roots.
"""

from __future__ import annotations

import json
import math
import re
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cache, cached_property
from importlib import resources

from . import perm

MAX_RANK = 8
MATERIALIZE_MAX_RANK = 6

SimpleType = tuple[str, int]


class RootSystemError(ValueError):
    pass


def parse_type(label: str | Sequence[SimpleType]) -> tuple[SimpleType, ...]:
    """``"A3"``, ``"A1xG2"`` or ``[("A", 1), ("G", 2)]``."""
    if not isinstance(label, str):
        out = tuple((str(t).upper(), int(n)) for t, n in label)
    else:
        out = []
        for part in re.split(r"[x*×]", label.replace(" ", "")):
            m = re.fullmatch(r"([A-Ga-g])(\d+)", part)
            if not m:
                raise RootSystemError(f"cannot parse Cartan type {part!r}")
            out.append((m.group(1).upper(), int(m.group(2))))
        out = tuple(out)
    for t, n in out:
        _check_simple(t, n)
    return out


def _check_simple(t: str, n: int) -> None:
    ok = {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 2,
        "D": n >= 3,
        "E": n in (6, 7, 8),
        "F": n == 4,
        "G": n == 2,
    }.get(t, False)
    if not ok or n > MAX_RANK:
        raise RootSystemError(f"invalid simple type {t}{n}")


def type_name(label: Sequence[SimpleType]) -> str:
    return "x".join(f"{t}{n}" for t, n in label) if label else "T"


def cartan_matrix_simple(t: str, n: int) -> list[list[int]]:
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i: int, j: int, aij: int = -1, aji: int = -1) -> None:
        a[i][j], a[j][i] = aij, aji

    if t in "ABCD":
        chain = n - 1 if t != "D" else n - 2
        for i in range(chain):
            link(i, i + 1)
        if t == "B":
            link(n - 2, n - 1, -1, -2)  # alpha_n short
        elif t == "C":
            link(n - 2, n - 1, -2, -1)  # alpha_n long
        elif t == "D":
            link(n - 3, n - 1)
    elif t == "G":
        link(0, 1, -3, -1)  # alpha_1 short
    elif t == "F":
        link(0, 1)
        link(1, 2, -1, -2)  # alpha_3, alpha_4 short
        link(2, 3)
    elif t == "E":
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    return a


def _block_diag(blocks: Sequence[list[list[int]]]) -> list[list[int]]:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[off + i][off + j] = v
        off += len(b)
    return out


def reflect(cartan: Sequence[Sequence[int]], i: int, beta: Sequence[int]) -> tuple[int, ...]:
    c = sum(b * cartan[i][j] for j, b in enumerate(beta))
    out = list(beta)
    out[i] -= c
    return tuple(out)


@cache
def _data_file() -> dict:
    text = resources.files("charbound.data").joinpath("weyl_types.json").read_text()
    return json.loads(text)


def degrees_of(t: str, n: int) -> list[int]:
    for entry in _data_file()["entries"]:
        if entry["type"] == t and entry["rank"] == n:
            return list(entry["degrees"])
    raise RootSystemError(f"no degree data for {t}{n}")


def diagram_automorphisms(t: str, n: int) -> list[list[int]]:
    for entry in _data_file()["entries"]:
        if entry["type"] == t and entry["rank"] == n:
            return [list(a) for a in entry["automorphisms"]]
    raise RootSystemError(f"no diagram data for {t}{n}")


@dataclass(frozen=True, eq=False)
class RootSystem:
    type_label: tuple[SimpleType, ...]
    cartan_matrix: tuple[tuple[int, ...], ...]
    roots: tuple[tuple[int, ...], ...]
    twist: tuple[int, ...]
    offsets: tuple[int, ...] = field(default=())

    @property
    def rank(self) -> int:
        return len(self.cartan_matrix)

    @property
    def name(self) -> str:
        return type_name(self.type_label)

    @property
    def simple_roots(self) -> list[int]:
        return [self.root_index[tuple(1 if j == i else 0 for j in range(self.rank))] for i in range(self.rank)]

    @cached_property
    def root_index(self) -> dict[tuple[int, ...], int]:
        return {r: i for i, r in enumerate(self.roots)}

    @property
    def positive_roots(self) -> list[tuple[int, ...]]:
        return [r for r in self.roots if sum(r) > 0]

    @property
    def dimension(self) -> int:
        """Dimension of a group of this type: roots plus rank."""
        return len(self.roots) + self.rank

    def factor_of(self, i: int) -> int:
        for k in range(len(self.offsets) - 1, -1, -1):
            if i >= self.offsets[k]:
                return k
        raise IndexError(i)

    def reflection_perm(self, i: int) -> perm.Perm:
        idx = self.root_index
        return tuple(idx[reflect(self.cartan_matrix, i, r)] for r in self.roots)

    def components(self, subset: Iterable[int]) -> list[list[int]]:
        """Connected components of the Dynkin subdiagram on ``subset``."""
        rest = set(subset)
        out = []
        while rest:
            start = min(rest)
            comp, queue = {start}, deque([start])
            while queue:
                i = queue.popleft()
                for j in list(rest):
                    if j not in comp and self.cartan_matrix[i][j] != 0:
                        comp.add(j)
                        queue.append(j)
            rest -= comp
            out.append(sorted(comp))
        return sorted(out)


def build_root_system(type_label, twist: Sequence[int] | None = None) -> RootSystem:
    """Generate all roots by reflection closure of the simple roots."""
    label = parse_type(type_label)
    blocks = [cartan_matrix_simple(t, n) for t, n in label]
    cartan = tuple(tuple(r) for r in _block_diag(blocks))
    n = len(cartan)
    offsets, off = [], 0
    for _, k in label:
        offsets.append(off)
        off += k
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    seen = set(simple)
    queue = deque(simple)
    while queue:
        beta = queue.popleft()
        for i in range(n):
            gamma = reflect(cartan, i, beta)
            if gamma not in seen:
                seen.add(gamma)
                queue.append(gamma)
    roots = tuple(sorted(seen, key=lambda r: (sum(r) < 0, abs(sum(r)), r)))
    sigma = tuple(range(n)) if twist is None else tuple(int(i) for i in twist)
    if sorted(sigma) != list(range(n)):
        raise RootSystemError("twist must permute the simple roots")
    if any(cartan[sigma[i]][sigma[j]] != cartan[i][j] for i in range(n) for j in range(n)):
        raise RootSystemError("twist does not preserve the Cartan matrix")
    R = RootSystem(label, cartan, roots, sigma, tuple(offsets))
    expected = sum(root_count(t, k) for t, k in label)
    if len(roots) != expected:
        raise RootSystemError(f"generated {len(roots)} roots, expected {expected}")
    return R


def root_count(t: str, n: int) -> int:
    return {
        "A": n * (n + 1),
        "B": 2 * n * n,
        "C": 2 * n * n,
        "D": 2 * n * (n - 1),
        "G": 12,
        "F": 48,
        "E": {6: 72, 7: 126, 8: 240}.get(n, 0),
    }[t]


def standard_twist(type_label, order: int = 2) -> tuple[int, ...]:
    """The diagram automorphism of the given order on a simple type."""
    label = parse_type(type_label)
    if len(label) != 1:
        raise RootSystemError("standard twists are defined for simple types")
    t, n = label[0]
    for a in diagram_automorphisms(t, n):
        if perm.perm_order(tuple(a)) == order:
            return tuple(a)
    raise RootSystemError(f"{t}{n} has no diagram automorphism of order {order}")


@dataclass(frozen=True, eq=False)
class WeylGroup:
    rootsystem: RootSystem
    degrees: tuple[int, ...]

    @property
    def order(self) -> int:
        return math.prod(self.degrees)

    @cached_property
    def elements(self) -> perm.PermGroup:
        """The group as permutations of the roots (rank <= 6 only)."""
        R = self.rootsystem
        if R.rank > MATERIALIZE_MAX_RANK:
            raise RootSystemError("explicit Weyl groups are materialized only up to rank 6")
        gens = [R.reflection_perm(i) for i in range(R.rank)]
        return perm.enumerate_group(gens, len(R.roots), name=f"W({R.name})")


def weyl_group(R: RootSystem, check: bool | None = None) -> WeylGroup:
    degs = tuple(d for t, n in R.type_label for d in degrees_of(t, n))
    W = WeylGroup(R, degs)
    if check is None:
        check = R.rank <= 4
    if check and W.elements.order != W.order:
        raise RootSystemError(f"enumerated |W| = {W.elements.order} but degree product is {W.order}")
    return W


# --- Levi subsystems -----------------------------------------------------------


def _w0_word(cartan: Sequence[Sequence[int]], nodes: Sequence[int]) -> list[int]:
    """A reduced word for the longest element of the parabolic subgroup on ``nodes``."""
    x = {j: 1 for j in nodes}  # pairing of a strictly dominant coweight with alpha_j
    word = []
    while True:
        pos = [j for j in nodes if x[j] > 0]
        if not pos:
            return word
        j = pos[0]
        xj = x[j]
        for k in nodes:
            x[k] -= cartan[j][k] * xj
        word.append(j)


def opposition(R: RootSystem, nodes: Sequence[int]) -> dict[int, int]:
    """The involution ``i -> iota(i)`` with ``-w0(alpha_i) = alpha_iota(i)`` on ``nodes``."""
    return _opposition(R.cartan_matrix, tuple(sorted(nodes)))


@cache
def _opposition(cartan, nodes: tuple[int, ...]) -> dict[int, int]:
    word = _w0_word(cartan, nodes)
    n = len(cartan)
    out = {}
    for i in nodes:
        beta = tuple(1 if j == i else 0 for j in range(n))
        for j in word:
            beta = reflect(cartan, j, beta)
        neg = tuple(-b for b in beta)
        if sum(neg) != 1 or min(neg) < 0:
            raise RootSystemError("longest element does not send simple roots to negative simple roots")
        out[i] = neg.index(1)
    return out


def elementary_conjugates(R: RootSystem, J: frozenset[int]) -> Iterable[frozenset[int]]:
    """Subsets reached from ``J`` by one move ``J -> iota_L(J)``, ``L = J + {a}``."""
    for a in range(R.rank):
        if a in J:
            continue
        comp = next(c for c in R.components(J | {a}) if a in c)
        iota = opposition(R, comp)
        moved = {iota[j] for j in J if j in comp}
        yield frozenset((J - set(comp)) | moved)


def subset_classes(R: RootSystem) -> list[list[frozenset[int]]]:
    """Partition all subsets of simple roots into W-conjugacy classes."""
    classes: list[list[frozenset[int]]] = []
    seen: set[frozenset[int]] = set()
    for size in range(R.rank + 1):
        for combo in _combinations(R.rank, size):
            J = frozenset(combo)
            if J in seen:
                continue
            orbit, queue = {J}, deque([J])
            while queue:
                K = queue.popleft()
                for L in elementary_conjugates(R, K):
                    if L not in orbit:
                        orbit.add(L)
                        queue.append(L)
            seen |= orbit
            classes.append(sorted(orbit, key=_subset_key))
    return classes


def _combinations(n: int, k: int):
    from itertools import combinations

    return combinations(range(n), k)


def _subset_key(J: Iterable[int]) -> tuple:
    s = sorted(J)
    return (len(s), s)


@dataclass(frozen=True, eq=False)
class LeviSubsystem:
    simple_subset: tuple[int, ...]
    ambient: RootSystem
    conjugacy_id: str
    twist_stable: bool
    members: tuple[tuple[int, ...], ...] = ()

    @property
    def is_torus(self) -> bool:
        return not self.simple_subset

    @property
    def is_full(self) -> bool:
        return len(self.simple_subset) == self.ambient.rank

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple_subset)

    @property
    def levi_type(self) -> str:
        return levi_type_name(self.ambient, self.simple_subset)


def subset_label(J: Iterable[int]) -> str:
    return "{" + ",".join(str(j + 1) for j in sorted(J)) + "}"


def levi_type_name(R: RootSystem, J: Iterable[int]) -> str:
    comps = R.components(J)
    if not comps:
        return "T"
    names = []
    for c in comps:
        names.append(_component_type(R, c))
    return "x".join(sorted(names))


def _component_type(R: RootSystem, comp: Sequence[int]) -> str:
    k = len(comp)
    sub = [[R.cartan_matrix[i][j] for j in comp] for i in comp]
    entries = {v for row in sub for v in row}
    if -3 in entries:
        return "G2"
    if -2 in entries:
        if k == 2:
            return "B2"
        i, j = next((i, j) for i in range(k) for j in range(k) if sub[i][j] == -2)
        # a[i][j] = -2 means alpha_j is the long root of the double bond
        if not _is_end(sub, i) and not _is_end(sub, j):
            return "F4"
        return f"C{k}" if _is_end(sub, j) else f"B{k}"
    degree = max((len(_neighbours(sub, i)) for i in range(k)), default=0)
    if degree <= 2:
        return f"A{k}"
    arms = sorted(_arm_lengths(sub))
    return f"D{k}" if arms[:2] == [1, 1] else f"E{k}"


def _neighbours(sub, i) -> list[int]:
    return [j for j in range(len(sub)) if j != i and sub[i][j]]


def _is_end(sub, i) -> bool:
    return len(_neighbours(sub, i)) <= 1


def _arm_lengths(sub) -> list[int]:
    k = len(sub)
    adj = {i: [j for j in range(k) if j != i and sub[i][j]] for i in range(k)}
    center = next(i for i in range(k) if len(adj[i]) == 3)
    arms = []
    for start in adj[center]:
        length, prev, cur = 1, center, start
        while True:
            nxt = [j for j in adj[cur] if j != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    return arms


def levi_classes(R: RootSystem) -> list[LeviSubsystem]:
    """Levi subsystems up to W-conjugacy, one per class of simple-root subsets."""
    if R.rank > MAX_RANK:
        raise RootSystemError(f"rank {R.rank} exceeds the cap of {MAX_RANK}")
    classes = subset_classes(R)
    where = {J: k for k, cls in enumerate(classes) for J in cls}
    out = []
    for cls in classes:
        rep = cls[0]
        image = frozenset(R.twist[j] for j in rep)
        stable = where[image] == where[rep]
        out.append(
            LeviSubsystem(
                simple_subset=tuple(sorted(rep)),
                ambient=R,
                conjugacy_id=subset_label(rep),
                twist_stable=stable,
                members=tuple(tuple(sorted(J)) for J in cls),
            )
        )
    return out


def levi_from_subset(R: RootSystem, subset: Iterable[int]) -> LeviSubsystem:
    """The Levi subsystem on an arbitrary subset, labelled by its conjugacy class."""
    J = frozenset(subset)
    if any(not 0 <= j < R.rank for j in J):
        raise RootSystemError("simple root index out of range")
    for L in levi_classes(R):
        if tuple(sorted(J)) in L.members:
            return LeviSubsystem(tuple(sorted(J)), R, L.conjugacy_id, L.twist_stable, L.members)
    raise RootSystemError("subset not found in any Levi class")


def gl_blocks_subset(n: int, blocks: Sequence[int]) -> tuple[int, ...]:
    """Simple-root subset of ``A_{n-1}`` for the block-diagonal Levi with these block sizes."""
    if sum(blocks) != n or any(b < 1 for b in blocks):
        raise RootSystemError(f"block sizes {list(blocks)} do not partition {n}")
    J, start = [], 0
    for b in blocks:
        J.extend(range(start, start + b - 1))
        start += b
    return tuple(J)


def torus_stabilizer_order(labels: Iterable) -> int:
    """Order of the Young subgroup fixing a multiset of eigenvalue labels: ``prod m_i!``."""
    counts: dict = {}
    for x in labels:
        counts[x] = counts.get(x, 0) + 1
    if not counts:
        raise ValueError("empty eigenvalue profile")
    return math.prod(math.factorial(m) for m in counts.values())


def stabilizer_order_of_profile(profile: Iterable[int]) -> int:
    """Same as :func:`torus_stabilizer_order` from multiplicities like ``(2, 1)``."""
    labels = [i for i, m in enumerate(profile) for _ in range(m)]
    return torus_stabilizer_order(labels)
