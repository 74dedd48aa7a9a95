"""The constant ledger: alpha exponents, D and B maxima, and the f constants.

Irrational constants are kept exactly as ``c * sqrt(r)`` with ``r`` squarefree
and compared by squaring, so maxima never depend on float rounding.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache, total_ordering

from . import unipotent as up
from .roots import (
    RootSystem,
    RootSystemError,
    build_root_system,
    degrees_of,
    levi_from_subset,
    parse_type,
    subset_label,
    type_name,
)

MAX_RANK = 8


# --- exact radicals -----------------------------------------------------------------


def _squarefree_split(n: int) -> tuple[int, int]:
    """``n = a^2 * b`` with ``b`` squarefree; returns ``(a, b)``."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, 1
    a, b, p = 1, n, 2
    while p * p <= b:
        while b % (p * p) == 0:
            b //= p * p
            a *= p
        p += 1
    return a, b


@total_ordering
@dataclass(frozen=True)
class Radical:
    """The non-negative real ``coeff * sqrt(radicand)``, ``radicand`` squarefree."""

    coeff: int
    radicand: int = 1

    def __post_init__(self) -> None:
        if self.coeff < 0 or self.radicand < 1:
            raise ValueError("radicals here are non-negative with positive radicand")
        a, b = _squarefree_split(self.radicand)
        if a != 1:
            object.__setattr__(self, "coeff", self.coeff * a)
            object.__setattr__(self, "radicand", b)

    @classmethod
    def sqrt(cls, n: int) -> Radical:
        a, b = _squarefree_split(n)
        return cls(a, b)

    @classmethod
    def half_power(cls, base: int, k: int) -> Radical:
        """``base^(k/2)``."""
        return cls.sqrt(base**k)

    def __mul__(self, other: Radical | int) -> Radical:
        if isinstance(other, int):
            return Radical(self.coeff * other, self.radicand)
        g = math.gcd(self.radicand, other.radicand)
        return Radical(self.coeff * other.coeff * g, self.radicand // g * (other.radicand // g))

    __rmul__ = __mul__

    @property
    def square(self) -> int:
        return self.coeff * self.coeff * self.radicand

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Radical(other)
        if not isinstance(other, Radical):
            return NotImplemented
        return self.square == other.square

    def __hash__(self) -> int:
        return hash(self.square)

    def __lt__(self, other) -> bool:
        if isinstance(other, int):
            other = Radical(other)
        return self.square < other.square

    def __float__(self) -> float:
        return self.coeff * math.sqrt(self.radicand)

    def ceil(self) -> int:
        v = self.square
        s = math.isqrt(v)
        return s if s * s == v else s + 1

    def __str__(self) -> str:
        if self.radicand == 1:
            return str(self.coeff)
        return f"{self.coeff}*sqrt({self.radicand})"


# --- rank constants ------------------------------------------------------------------


def simple_types(max_rank: int = MAX_RANK) -> list[str]:
    """Simple simply connected types up to isomorphism (``B2 = C2``, ``D3 = A3``)."""
    out = [f"A{k}" for k in range(1, max_rank + 1)]
    out += [f"B{k}" for k in range(2, max_rank + 1)]
    out += [f"C{k}" for k in range(3, max_rank + 1)]
    out += [f"D{k}" for k in range(4, max_rank + 1)]
    out += [t for t, k in (("G2", 2), ("F4", 4), ("E6", 6), ("E7", 7), ("E8", 8)) if k <= max_rank]
    return out


def _rank(label: str) -> int:
    return sum(n for _, n in parse_type(label))


@cache
def simple_maxima(label: str) -> tuple[int, int]:
    """``(max dim u^H, max |A_H(u)|)`` for one simple type."""
    classes = up.unipotent_classes(label)
    return max(u.dim for u in classes), max(u.comp_order for u in classes)


def type_multisets(total: int, exact: bool = False) -> list[tuple[str, ...]]:
    """Multisets of simple types of total rank ``<= total`` (or ``== total``)."""
    types = simple_types(total)
    out: list[tuple[str, ...]] = []

    def rec(start: int, left: int, acc: tuple[str, ...]) -> None:
        if acc and (not exact or left == 0):
            out.append(acc)
        for i in range(start, len(types)):
            k = _rank(types[i])
            if k <= left:
                rec(i, left - k, acc + (types[i],))

    rec(0, total, ())
    return out


@dataclass(frozen=True)
class RankConstants:
    rank: int
    D: int
    B: int
    D_witness: str
    B_witness: str


@cache
def rank_constants(r: int) -> RankConstants:
    """``D(r)`` and ``B(r)``: maxima over semisimple simply connected groups of rank ``<= r``.

    Over a product the class dimensions add and the component group orders
    multiply.  Rank 0 (a torus) gives ``D = 0`` and ``B = 1``.
    """
    if not 0 <= r <= MAX_RANK:
        raise RootSystemError(f"rank must lie in 0..{MAX_RANK}")
    if r == 0:
        return RankConstants(0, 0, 1, "T", "T")
    best_d, best_b = (0, ""), (1, "")
    for ms in type_multisets(r):
        d = sum(simple_maxima(t)[0] for t in ms)
        b = math.prod(simple_maxima(t)[1] for t in ms)
        name = "x".join(ms)
        if d > best_d[0]:
            best_d = (d, name)
        if b > best_b[0]:
            best_b = (b, name)
    return RankConstants(r, best_d[0], best_b[0], best_d[1], best_b[1])


def weyl_order(label: str) -> int:
    return math.prod(d for t, n in parse_type(label) for d in degrees_of(t, n))


@dataclass(frozen=True)
class BoundConstants:
    type_label: str
    rank: int
    weyl_order: int
    D: int
    B: int
    f1: int
    f2_prime: int
    f2: Radical
    f3: Radical
    f: Radical

    @property
    def f_float(self) -> float:
        return float(self.f)

    @property
    def f_ceil(self) -> int:
        return self.f.ceil()

    def to_json(self) -> dict:
        return {
            "type": self.type_label,
            "rank": self.rank,
            "W": self.weyl_order,
            "D": self.D,
            "B": self.B,
            "f1": self.f1,
            "f2_prime": self.f2_prime,
            "f2": str(self.f2),
            "f3": str(self.f3),
            "f_exact": str(self.f),
            "f_float": self.f_float,
            "f_ceil": self.f_ceil,
        }


def f_of_group(type_label: str) -> BoundConstants:
    """The full ledger for a semisimple type, using the rank maxima ``D(r)``, ``B(r)``."""
    label = type_name(parse_type(type_label))
    r = _rank(label)
    if r > MAX_RANK:
        raise RootSystemError(f"rank {r} exceeds the cap of {MAX_RANK}")
    rc = rank_constants(r)
    W, D, B = weyl_order(label), rc.D, rc.B
    f1 = W * W
    f2p = B**4 * W
    f2 = Radical.sqrt(f2p)
    f3 = Radical.half_power(3, D) * B
    f = Radical.half_power(3, D) * (B**3) * Radical.half_power(W, 5)
    if f1 * f2 * f3 != f:
        raise ArithmeticError("f1 * f2 * f3 does not reproduce f")
    return BoundConstants(label, r, W, D, B, f1, f2p, f2, f3, f)


@dataclass(frozen=True)
class RankBound:
    rank: int
    value: Radical
    witness_type: str

    @property
    def ceil(self) -> int:
        return self.value.ceil()


@cache
def f_of_rank(r: int) -> RankBound:
    """Maximum of ``f(G)`` over semisimple simply connected types of rank exactly ``r``."""
    if not 1 <= r <= MAX_RANK:
        raise RootSystemError(f"rank must lie in 1..{MAX_RANK}")
    best: BoundConstants | None = None
    for ms in type_multisets(r, exact=True):
        c = f_of_group("x".join(ms))
        if best is None or c.f > best.f:
            best = c
    assert best is not None
    return RankBound(r, best.f, best.type_label)


def series_size_bound(stabilizer_order: int) -> int:
    if stabilizer_order < 1:
        raise ValueError("stabilizer order must be positive")
    return stabilizer_order * stabilizer_order


def multiplicity_constant(levi_rank: int, ambient_type: str) -> int:
    """``B(M)^4 |W_G|`` for a Levi of semisimple rank ``levi_rank``."""
    return rank_constants(levi_rank).B ** 4 * weyl_order(ambient_type)


# --- alpha -----------------------------------------------------------------------------


@dataclass(frozen=True)
class AlphaResult:
    value: Fraction
    witness: tuple  # (levi class labels, ambient class label, (dim u^M, dim u^G))
    levi_ref: str
    ambient_ref: str
    candidates: int = 0
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        w = self.witness
        return {
            "alpha": {"num": self.value.numerator, "den": self.value.denominator},
            "witness": None if not w else {"levi": list(w[0]), "ambient": w[1], "dims": list(w[2])},
            "levi": self.levi_ref,
            "ambient": self.ambient_ref,
        }


def _stable_levi_tuple(shape: up.LeviShape, sigma_fixes_j: bool, sigma, classes, R: RootSystem, J) -> bool:
    """Twist stability of a tuple of Levi factor classes (standard F-structure)."""
    if not sigma_fixes_j or sigma == tuple(range(R.rank)):
        return True
    (t, n), = R.type_label
    order = _perm_order(sigma)
    if t == "A":
        parts = [c.partition for c in classes]
        return parts == parts[::-1]
    if t == "D" and order == 3:
        if set(J) == {0, 2, 3}:
            gl, tail = classes
            return (gl.partition == (2,) and tail.partition == (3, 1)) or (gl.dim == 0 and tail.dim == 0)
        return True
    if t == "D" and shape.tail and shape.tail >= 2:
        return not classes[-1].variant
    return True


def _perm_order(p) -> int:
    k, q = 1, tuple(p)
    while q != tuple(range(len(p))):
        q = tuple(p[i] for i in q)
        k += 1
    return k


def alpha(R: RootSystem, levi: tuple[int, ...] | list[int]) -> AlphaResult:
    """``max dim u^M / dim u^G`` over non-identity twist-stable unipotent classes of the Levi."""
    J = tuple(sorted(set(levi)))
    L = levi_from_subset(R, J)
    if not L.twist_stable:
        raise RootSystemError(f"Levi {L.conjugacy_id} is not stable under the twist")
    ambient_ref = R.name
    levi_ref = f"{L.conjugacy_id}:{L.levi_type}"
    if not J:
        return AlphaResult(Fraction(0), (), levi_ref, ambient_ref)
    if len(J) == R.rank:
        return _alpha_full(R, levi_ref)
    if len(R.type_label) != 1 or R.type_label[0][0] not in "ABCD":
        raise RootSystemError("alpha for a proper non-torus Levi needs a simple classical ambient")
    (t, n), = R.type_label
    if t == "D" and n == 3:
        raise RootSystemError("D3 is A3; use type A")
    shape = up.levi_shape(R.name, J)
    sigma = R.twist
    fixes = {sigma[j] for j in J} == set(J)
    order = _perm_order(sigma)
    best: tuple[Fraction, tuple] | None = None
    count = 0
    for combo in itertools.product(*up.levi_factor_classes(shape)):
        dim_m = sum(c.dim for c in combo)
        if dim_m == 0:
            continue
        fused = up.fuse_to_ambient(list(combo), shape, R.name)
        if order > 1:
            if not up._with_stability(fused, t, n, order).frob_stable:
                continue
            if not _stable_levi_tuple(shape, fixes, sigma, combo, R, J):
                continue
        count += 1
        if fused.dim < dim_m:
            raise ArithmeticError("a Levi class is larger than its ambient class")
        if fused.dim == dim_m:
            raise ArithmeticError("proper Levi class has the same dimension as its ambient class")
        ratio = Fraction(dim_m, fused.dim)
        if best is None or ratio > best[0]:
            best = (ratio, (tuple(c.label for c in combo), fused.label, (dim_m, fused.dim)))
    if best is None:
        raise RootSystemError("no twist-stable non-identity unipotent class in the Levi")
    return AlphaResult(best[0], best[1], levi_ref, ambient_ref, count)


def _alpha_full(R: RootSystem, levi_ref: str) -> AlphaResult:
    top = sum(up.max_dim(f"{t}{n}") for t, n in R.type_label)
    return AlphaResult(Fraction(1), (("regular",), "regular", (top, top)), levi_ref, R.name)


def alpha_report(type_label: str, levi: tuple[int, ...], twist=None) -> dict:
    """The JSON report for one ``(M <= G)`` pair, constants included."""
    R = build_root_system(type_label, twist)
    res = alpha(R, levi)
    consts = f_of_group(R.name)
    levi_rank = len(set(levi))
    out = {"rank": R.rank, "type": R.name, "levi": subset_label(levi)}
    out.update(res.to_json())
    out["levi"] = res.levi_ref
    out["constants"] = {
        "W": consts.weyl_order,
        "D": consts.D,
        "B": consts.B,
        "f1": consts.f1,
        "f2_prime": consts.f2_prime,
        "f3": str(consts.f3),
        "f_exact": str(consts.f),
        "f_ceil": consts.f_ceil,
    }
    out["multiplicity_constant"] = multiplicity_constant(levi_rank, R.name)
    return out


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)
