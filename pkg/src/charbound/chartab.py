"""Character tables and class-function algebra for enumerated groups.

Tables come from simultaneous eigenvectors of the class-multiplication
matrices (the Burnside/Dixon approach over the complex numbers).  Values are
complex floats; every quantity compared downstream is an integer, so inner
products are checked against the nearest Gaussian integer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .perm import GroupError, Perm, PermGroup, conj, inv, mul

TOL = 1e-6


class CharacterTableError(RuntimeError):
    """The eigenvector method failed to separate the irreducible characters."""


def round_gaussian(z: complex, tol: float = TOL) -> complex:
    """Round to the nearest Gaussian integer, insisting it is within ``tol``."""
    r = complex(round(z.real), round(z.imag))
    if abs(z - r) > tol:
        raise ValueError(f"{z} is not within {tol} of an integer")
    return r


@dataclass(frozen=True, eq=False)
class ClassFunction:
    """A function constant on conjugacy classes, stored one value per class."""

    group: PermGroup
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (len(self.group.classes),):
            raise ValueError("need exactly one value per conjugacy class")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, group: PermGroup, fn) -> ClassFunction:
        return cls(group, np.array([fn(r) for r in group.classes.representatives], dtype=complex))

    def __call__(self, g: Perm) -> complex:
        return complex(self.values[self.group.classes.class_of[g]])

    @property
    def degree(self) -> complex:
        return complex(self.values[0])

    def _check(self, other: ClassFunction) -> None:
        if other.group is not self.group:
            raise GroupError("class functions live on different groups")

    def __add__(self, other: ClassFunction) -> ClassFunction:
        self._check(other)
        return ClassFunction(self.group, self.values + other.values)

    def __sub__(self, other: ClassFunction) -> ClassFunction:
        self._check(other)
        return ClassFunction(self.group, self.values - other.values)

    def __mul__(self, other) -> ClassFunction:
        if isinstance(other, ClassFunction):
            self._check(other)
            return ClassFunction(self.group, self.values * other.values)
        return ClassFunction(self.group, self.values * other)

    __rmul__ = __mul__

    def conjugate(self) -> ClassFunction:
        return ClassFunction(self.group, self.values.conj())

    def allclose(self, other: ClassFunction, tol: float = TOL) -> bool:
        self._check(other)
        return bool(np.max(np.abs(self.values - other.values), initial=0.0) < tol)


def inner_product(f: ClassFunction, fp: ClassFunction) -> complex:
    """``(1/|G|) sum_x f(x) conj(f'(x))``, summed class by class."""
    if f.group is not fp.group:
        raise GroupError("class functions live on different groups")
    sizes = np.asarray(f.group.classes.class_sizes, dtype=float)
    return complex(np.sum(sizes * f.values * fp.values.conj()) / f.group.order)


def multiplicity(f: ClassFunction, fp: ClassFunction) -> int:
    """Inner product of two virtual characters, as an exact integer."""
    z = round_gaussian(inner_product(f, fp))
    if z.imag:
        raise ValueError("inner product of virtual characters is not real")
    return int(z.real)


@dataclass(frozen=True, eq=False)
class CharacterTable:
    group: PermGroup
    rows: tuple[ClassFunction, ...]

    @property
    def degrees(self) -> list[int]:
        return [int(round(r.degree.real)) for r in self.rows]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, i: int) -> ClassFunction:
        return self.rows[i]

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.array([r.values for r in self.rows])

    def decompose(self, f: ClassFunction) -> list[int]:
        return [multiplicity(f, chi) for chi in self.rows]

    def regular_character(self) -> ClassFunction:
        vals = np.zeros(len(self.group.classes), dtype=complex)
        vals[0] = self.group.order
        return ClassFunction(self.group, vals)

    def trivial(self) -> ClassFunction:
        for row in self.rows:
            if np.allclose(row.values, 1.0):
                return row
        raise CharacterTableError("table has no trivial character")

    def to_json(self) -> dict:
        return {
            "group_order": self.group.order,
            "class_sizes": list(self.group.classes.class_sizes),
            "rows": [[[float(z.real), float(z.imag)] for z in r.values] for r in self.rows],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def class_structure_constants(G: PermGroup) -> np.ndarray:
    """``c[j, l, k]`` = number of ``(x, y)`` in ``C_j x C_l`` with ``x y = g_k``."""
    cls = G.classes
    r = len(cls)
    c = np.zeros((r, r, r))
    for k, gk in enumerate(cls.representatives):
        for x in G.elements:
            y = mul(inv(x), gk)
            c[cls.class_of[x], cls.class_of[y], k] += 1
    return c


def _canonical_key(values: np.ndarray) -> tuple:
    out = []
    for z in values:
        out.append(round(z.real, 6) + 0.0)
        out.append(round(z.imag, 6) + 0.0)
    return (round(values[0].real),) + tuple(out)


def character_table(G: PermGroup, seed: int = 20240601, attempts: int = 8) -> CharacterTable:
    """Irreducible characters of ``G``, ordered by degree then by values.

    Raises :class:`CharacterTableError` if no random combination of class
    matrices splits the eigenspaces within ``attempts`` tries, or if the
    resulting table fails orthogonality.
    """
    cls = G.classes
    r = len(cls)
    sizes = np.asarray(cls.class_sizes, dtype=float)
    consts = class_structure_constants(G)
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        coeffs = rng.normal(size=r)
        # M[l, k] = sum_j coeff_j c[j, l, k]; central characters omega are right eigenvectors
        M = np.einsum("j,jlk->lk", coeffs, consts)
        evals, evecs = np.linalg.eig(M)
        gaps = np.abs(evals[:, None] - evals[None, :]) + np.eye(r) * 1e9
        if r > 1 and gaps.min() < 1e-4:
            continue
        rows = []
        for i in range(r):
            omega = evecs[:, i] / evecs[0, i]
            # omega_k = |C_k| chi(g_k) / chi(1); sum_k |omega_k|^2 / |C_k| = |G| / chi(1)^2
            norm = np.sum(np.abs(omega) ** 2 / sizes)
            deg = np.sqrt(G.order / norm)
            if abs(deg - round(deg)) > 1e-4:
                break
            deg = round(deg)
            vals = omega * deg / sizes
            rows.append(vals)
        else:
            rows = [_clean(v) for v in rows]
            rows.sort(key=_canonical_key)
            table = CharacterTable(G, tuple(ClassFunction(G, v) for v in rows))
            check_table(table)
            return table
    raise CharacterTableError(f"could not separate the characters of {G!r}")


def _clean(v: np.ndarray) -> np.ndarray:
    re = np.where(np.abs(v.real) < 1e-12, 0.0, v.real)
    im = np.where(np.abs(v.imag) < 1e-12, 0.0, v.imag)
    v = re + 1j * im
    snapped = np.round(re) + 1j * np.round(im)
    return np.where(np.abs(v - snapped) < 1e-9, snapped, v)


def check_table(table: CharacterTable, tol: float = TOL) -> None:
    """Row and column orthogonality plus the degree-square identity, or raise."""
    G = table.group
    X = table.matrix
    sizes = np.asarray(G.classes.class_sizes, dtype=float)
    r = len(sizes)
    if X.shape != (r, r):
        raise CharacterTableError("number of characters differs from number of classes")
    gram = (X * sizes) @ X.conj().T / G.order
    if np.max(np.abs(gram - np.eye(r))) > tol:
        raise CharacterTableError("row orthogonality fails")
    cols = X.conj().T @ X
    expected = np.diag(G.order / sizes)
    if np.max(np.abs(cols - expected)) > tol * G.order:
        raise CharacterTableError("column orthogonality fails")
    if sum(d * d for d in table.degrees) != G.order:
        raise CharacterTableError("degree squares do not sum to the group order")


def induce_class_function(H: PermGroup, f: ClassFunction, G: PermGroup) -> ClassFunction:
    """``Ind_H^G f(g) = (1/|H|) sum_{x in G, x g x^-1 in H} f(x g x^-1)``."""
    if f.group is not H:
        raise GroupError("class function is not defined on H")
    if not H.is_subgroup_of(G):
        raise GroupError("H is not a subgroup of G")
    vals = []
    for g in G.classes.representatives:
        total = 0j
        for x in G.elements:
            y = conj(x, g)
            if y in H:
                total += f(y)
        vals.append(total / H.order)
    return ClassFunction(G, np.array(vals))


def restrict_class_function(f: ClassFunction, H: PermGroup) -> ClassFunction:
    if not H.is_subgroup_of(f.group):
        raise GroupError("H is not a subgroup of the function's group")
    return ClassFunction(H, np.array([f(h) for h in H.classes.representatives]))
