"""Finite G-sets and the calculus of invariant functions on them.

A :class:`GSet` stores its action as an integer table ``act[g, x]`` (group
element index by point index).  Invariant functions are spanned by the
orbit indicators ``pi_x``, which take the value ``|Stab(x)|`` on the orbit
of ``x``.  Induction along an equivariant map ``psi: Y -> X`` is

    psi_*(f)(x) = (1/|H|) * sum over (g, y) with g.x = psi(y) of f(y),

and restriction is ``psi^*(f) = f o psi``; the two are adjoint for the
form ``<f, f'> = (1/|G|) sum_x f(x) conj(f'(x))``.
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .perm import Perm, PermGroup, conj

TOL = 1e-9


class GSetError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GSet:
    group: PermGroup
    points: tuple
    act: np.ndarray  # act[g_index, x_index] -> point index

    @cached_property
    def point_index(self) -> dict:
        return {x: i for i, x in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)

    def image(self, g: Perm, x: Hashable) -> Hashable:
        return self.points[self.act[self.group.index(g), self.point_index[x]]]

    @cached_property
    def _orbits(self) -> tuple[np.ndarray, list[int]]:
        orbit_of = np.full(len(self.points), -1, dtype=int)
        reps: list[int] = []
        # points are sorted, so the first unvisited point is the orbit minimum
        for i in range(len(self.points)):
            if orbit_of[i] >= 0:
                continue
            orbit_of[np.unique(self.act[:, i])] = len(reps)
            reps.append(i)
        return orbit_of, reps

    @property
    def orbit_index(self) -> np.ndarray:
        return self._orbits[0]

    @property
    def orbit_representatives(self) -> list[int]:
        """Index of the minimal point of each orbit."""
        return self._orbits[1]

    @cached_property
    def orbit_sizes(self) -> np.ndarray:
        return np.bincount(self.orbit_index, minlength=len(self.orbit_representatives))

    @cached_property
    def stabilizer_orders(self) -> np.ndarray:
        idx = np.arange(len(self.points))
        return np.sum(self.act == idx[None, :], axis=0)

    def num_orbits(self) -> int:
        return len(self.orbit_representatives)


def build_gset(
    G: PermGroup,
    points: Iterable[Hashable],
    action: Callable[[Perm, Hashable], Hashable],
) -> GSet:
    """Tabulate ``action`` on ``points`` and check the action axioms."""
    pts = tuple(sorted(set(points)))
    index = {x: i for i, x in enumerate(pts)}
    act = np.empty((G.order, len(pts)), dtype=np.int64)
    for gi, g in enumerate(G.elements):
        for xi, x in enumerate(pts):
            y = action(g, x)
            if y not in index:
                raise GSetError(f"action maps {x!r} outside the point set")
            act[gi, xi] = index[y]
    X = GSet(G, pts, act)
    _check_action(X)
    return X


def _check_action(X: GSet) -> None:
    G = X.group
    n = len(X.points)
    if not np.array_equal(X.act[0], np.arange(n)):
        raise GSetError("identity does not act trivially")
    for row in X.act:
        if len(np.unique(row)) != n:
            raise GSetError("a group element does not act bijectively")
    for s in G.generators:
        si = G.index(s)
        for hi, h in enumerate(G.elements):
            sh = G.index(_mul(s, h))
            if not np.array_equal(X.act[si][X.act[hi]], X.act[sh]):
                raise GSetError("action is not compatible with the group law")
    counts = X.orbit_sizes[X.orbit_index] * X.stabilizer_orders
    if not np.all(counts == G.order):
        raise GSetError("orbit-stabilizer identity fails")


def _mul(p: Perm, q: Perm) -> Perm:
    return tuple(p[i] for i in q)


def conjugation_gset(G: PermGroup, points: Iterable[Perm] | None = None, actor: Callable | None = None) -> GSet:
    """``G`` acting by conjugation on ``points`` (default: on ``G`` itself)."""
    pts = G.elements if points is None else points
    if actor is None:
        return build_gset(G, pts, conj)
    return build_gset(G, pts, lambda g, x: conj(actor(g), x))


def trivial_gset(G: PermGroup, n: int) -> GSet:
    return build_gset(G, range(n), lambda g, x: x)


@dataclass(frozen=True, eq=False)
class GFunction:
    gset: GSet
    values: np.ndarray
    invariant: bool = False

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (len(self.gset.points),):
            raise GSetError("need one value per point")
        object.__setattr__(self, "values", vals)
        if self.invariant and not is_invariant(self.gset, vals):
            raise GSetError("function is not invariant under the group action")

    @classmethod
    def from_mapping(cls, X: GSet, values: Mapping, invariant: bool = True) -> GFunction:
        return cls(X, np.array([values[x] for x in X.points]), invariant)

    def __call__(self, x: Hashable) -> complex:
        return complex(self.values[self.gset.point_index[x]])

    def _check(self, other: GFunction) -> None:
        if other.gset is not self.gset:
            raise GSetError("functions live on different G-sets")

    def __add__(self, other: GFunction) -> GFunction:
        self._check(other)
        return GFunction(self.gset, self.values + other.values, self.invariant and other.invariant)

    def __sub__(self, other: GFunction) -> GFunction:
        self._check(other)
        return GFunction(self.gset, self.values - other.values, self.invariant and other.invariant)

    def __mul__(self, c: complex) -> GFunction:
        return GFunction(self.gset, self.values * c, self.invariant)

    __rmul__ = __mul__

    def max_abs_diff(self, other: GFunction) -> float:
        self._check(other)
        return float(np.max(np.abs(self.values - other.values), initial=0.0))


def is_invariant(X: GSet, values: np.ndarray, tol: float = TOL) -> bool:
    return bool(np.max(np.abs(values[X.act] - values[None, :]), initial=0.0) <= tol)


def invariant_function(X: GSet, values: Sequence[complex] | np.ndarray) -> GFunction:
    return GFunction(X, np.asarray(values), invariant=True)


def indicator_pi(X: GSet, x: Hashable) -> GFunction:
    if x not in X.point_index:
        raise GSetError(f"{x!r} is not a point of the G-set")
    i = X.point_index[x]
    orbit = X.orbit_index == X.orbit_index[i]
    vals = np.where(orbit, float(X.stabilizer_orders[i]), 0.0)
    return GFunction(X, vals, invariant=True)


def gset_inner_product(f: GFunction, fp: GFunction) -> complex:
    f._check(fp)
    return complex(np.sum(f.values * fp.values.conj()) / f.gset.group.order)


@dataclass(frozen=True, eq=False)
class GMap:
    """An ``H``-equivariant map from an ``H``-set to a ``G``-set, ``H <= G``."""

    source: GSet
    target: GSet
    mapping: np.ndarray  # source point index -> target point index

    def __post_init__(self) -> None:
        H, G = self.source.group, self.target.group
        if not H.is_subgroup_of(G):
            raise GSetError("source group is not a subgroup of the target group")
        m = np.asarray(self.mapping, dtype=np.int64)
        object.__setattr__(self, "mapping", m)
        if m.shape != (len(self.source.points),):
            raise GSetError("map must be defined on every source point")
        # alpha_h o psi == psi o beta_h for all h in H
        g_rows = np.array([G.index(h) for h in H.elements])
        if not np.array_equal(self.target.act[g_rows][:, m], m[self.source.act]):
            raise GSetError("map is not equivariant")

    def __call__(self, y: Hashable) -> Hashable:
        return self.target.points[self.mapping[self.source.point_index[y]]]

    @property
    def is_injective(self) -> bool:
        return len(np.unique(self.mapping)) == len(self.mapping)


def gmap_from_callable(source: GSet, target: GSet, fn: Callable[[Hashable], Hashable]) -> GMap:
    idx = target.point_index
    try:
        m = [idx[fn(y)] for y in source.points]
    except KeyError as exc:
        raise GSetError(f"map leaves the target point set: {exc}") from None
    return GMap(source, target, np.array(m, dtype=np.int64))


def compose(psi: GMap, lam: GMap) -> GMap:
    """``psi o lam`` for ``lam: Z -> Y`` and ``psi: Y -> X``."""
    if lam.target is not psi.source:
        raise GSetError("maps are not composable")
    return GMap(lam.source, psi.target, psi.mapping[lam.mapping])


def induce_along(psi: GMap, f: GFunction) -> GFunction:
    """Induction by the full double sum over pairs ``(g, y)`` with ``g.x = psi(y)``."""
    if f.gset is not psi.source:
        raise GSetError("function is not defined on the source of the map")
    if not is_invariant(psi.source, f.values):
        raise GSetError("function is not invariant under the source group")
    X = psi.target
    # hits[g, x, y] = [alpha_g(x) == psi(y)]
    hits = X.act[:, :, None] == psi.mapping[None, None, :]
    vals = np.einsum("gxy,y->x", hits, f.values) / psi.source.group.order
    return GFunction(X, vals, invariant=True)


def induce_injective(psi: GMap, f: GFunction) -> GFunction:
    """Fast path for injective ``psi``: ``(1/|H|) sum_{g: g.x in psi(Y)} f(psi^-1(g.x))``."""
    if not psi.is_injective:
        raise GSetError("map is not injective")
    if f.gset is not psi.source:
        raise GSetError("function is not defined on the source of the map")
    X = psi.target
    lifted = np.zeros(len(X.points), dtype=complex)
    lifted[psi.mapping] = f.values
    vals = lifted[X.act].sum(axis=0) / psi.source.group.order
    return GFunction(X, vals, invariant=True)


def restrict_along(psi: GMap, fp: GFunction) -> GFunction:
    if fp.gset is not psi.target:
        raise GSetError("function is not defined on the target of the map")
    if not is_invariant(psi.target, fp.values):
        raise GSetError("function is not invariant under the target group")
    return GFunction(psi.source, fp.values[psi.mapping], invariant=True)


def decompose_in_pi_basis(f: GFunction) -> dict[Hashable, complex]:
    """Coefficients ``c`` with ``f = sum_x c_x pi_x`` over minimal orbit points."""
    X = f.gset
    if not is_invariant(X, f.values):
        raise GSetError("function is not invariant")
    return {
        X.points[i]: complex(f.values[i] / X.stabilizer_orders[i])
        for i in X.orbit_representatives
    }


def reconstruct(X: GSet, coeffs: Mapping[Hashable, complex]) -> GFunction:
    out = np.zeros(len(X.points), dtype=complex)
    for x, c in coeffs.items():
        out += c * indicator_pi(X, x).values
    return GFunction(X, out, invariant=True)


def orbit_sum_function(X: GSet, values: Sequence[complex]) -> GFunction:
    """Invariant function taking ``values[k]`` on the ``k``-th orbit."""
    vals = np.asarray(values, dtype=complex)[X.orbit_index]
    return GFunction(X, vals, invariant=True)

