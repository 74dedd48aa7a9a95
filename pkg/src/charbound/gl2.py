"""The GL_2(q) harness: generic character table and the bound checks built on it.

Field elements are integers ``0 .. q^2 - 1`` in ``F_{q^2}``, stored as base-``p``
digit vectors of polynomials modulo an irreducible polynomial.  ``F_q`` is the
fixed field of ``x -> x^q``.  All multiplication goes through discrete
logarithms of a primitive element ``zeta``; ``F_q^x`` is generated by
``eps = zeta^(q+1)``.
"""

from __future__ import annotations

import cmath
import itertools
import math
from collections.abc import Iterator
from dataclasses import asdict, dataclass, field
from functools import cache, cached_property

import numpy as np

from .bounds import f_of_rank, multiplicity_constant, series_size_bound
from .roots import torus_stabilizer_order

TOL = 1e-6
SUPPORTED_Q = (3, 5, 7, 9, 11, 13)


class HarnessError(RuntimeError):
    pass


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            k, m = 0, q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, k
    raise ValueError(f"{q} is not a prime power")


class Field:
    """``F_Q`` with ``Q = p^d``, small enough for full log tables."""

    def __init__(self, p: int, d: int) -> None:
        self.p, self.d, self.size = p, d, p**d
        self.add = np.array([[self._add(a, b) for b in range(self.size)] for a in range(self.size)])
        self.neg = np.array([self._neg(a) for a in range(self.size)])
        # a reducible modulus has zero divisors, so no element of order size - 1
        for modulus in self._candidates():
            self.modulus = modulus
            tables = self._log_tables()
            if tables is not None:
                self.exp, self.log = tables
                break
        else:
            raise HarnessError(f"could not construct F_{self.size}")

    def _digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.d)]

    def _from_digits(self, ds) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(ds))

    def _add(self, a: int, b: int) -> int:
        return self._from_digits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _neg(self, a: int) -> int:
        return self._from_digits([(-x) % self.p for x in self._digits(a)])

    def _polymul(self, a: int, b: int, modulus: list[int]) -> int:
        x, y = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.d - 1)
        for i, u in enumerate(x):
            for j, v in enumerate(y):
                prod[i + j] = (prod[i + j] + u * v) % self.p
        # reduce by the monic modulus of degree d
        for k in range(len(prod) - 1, self.d - 1, -1):
            c = prod[k]
            if c:
                for i in range(self.d + 1):
                    prod[k - self.d + i] = (prod[k - self.d + i] - c * modulus[i]) % self.p
        return self._from_digits(prod[: self.d])

    def _candidates(self) -> Iterator[list[int]]:
        for tail in itertools.product(range(self.p), repeat=self.d):
            poly = list(tail) + [1]
            if poly[0] == 0:
                continue
            if any(sum(c * pow(x, i, self.p) for i, c in enumerate(poly)) % self.p == 0 for x in range(self.p)):
                continue
            yield poly

    def _log_tables(self) -> tuple[np.ndarray, np.ndarray] | None:
        n = self.size - 1
        for g in range(2, self.size):
            powers, x = [], 1
            for _ in range(n):
                powers.append(x)
                x = self._polymul(x, g, self.modulus)
                if x == 1:
                    break
            if len(powers) == n and len(set(powers)) == n:
                exp = np.array(powers + powers)
                log = np.full(self.size, -1)
                log[exp[:n]] = np.arange(n)
                return exp, log
        return None

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return int(self.exp[(self.size - 1 - self.log[a]) % (self.size - 1)])

    def power(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k else 1
        return int(self.exp[(self.log[a] * k) % (self.size - 1)])

    def sub(self, a: int, b: int) -> int:
        return int(self.add[a, self.neg[b]])

    def plus(self, a: int, b: int) -> int:
        return int(self.add[a, b])


@dataclass(frozen=True)
class FieldPair:
    q: int
    K: Field  # F_{q^2}

    @cached_property
    def subfield(self) -> list[int]:
        """Elements of ``F_q`` inside ``F_{q^2}``, 0 first."""
        return [0] + [int(self.K.exp[(self.q + 1) * i]) for i in range(self.q - 1)]

    @cached_property
    def units(self) -> list[int]:
        return self.subfield[1:]

    def frob(self, z: int) -> int:
        return self.K.power(z, self.q)

    def log_eps(self, x: int) -> int:
        """Discrete log of ``x in F_q^x`` to base ``eps = zeta^(q+1)``."""
        lz = int(self.K.log[x])
        if x == 0 or lz % (self.q + 1):
            raise ValueError("not a unit of F_q")
        return lz // (self.q + 1)

    def norm(self, z: int) -> int:
        return self.K.power(z, self.q + 1)

    def trace(self, z: int) -> int:
        return self.K.plus(z, self.frob(z))


@cache
def field_pair(q: int) -> FieldPair:
    p, k = _prime_power(q)
    return FieldPair(q, Field(p, 2 * k))


# --- matrices ---------------------------------------------------------------------------

Mat = tuple[int, int, int, int]  # (a, b, c, d) for [[a, b], [c, d]]


def mat_mul(F: Field, x: Mat, y: Mat) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    m, p = F.mul, F.plus
    return (p(m(a, e), m(b, g)), p(m(a, f), m(b, h)), p(m(c, e), m(d, g)), p(m(c, f), m(d, h)))


def mat_det(F: Field, x: Mat) -> int:
    a, b, c, d = x
    return F.sub(F.mul(a, d), F.mul(b, c))


def mat_inv(F: Field, x: Mat) -> Mat:
    a, b, c, d = x
    di = F.inv(mat_det(F, x))
    return (F.mul(d, di), F.mul(F.neg[b], di), F.mul(F.neg[c], di), F.mul(a, di))


def gl2_elements(fp: FieldPair) -> Iterator[Mat]:
    k = fp.subfield
    for m in itertools.product(k, repeat=4):
        if mat_det(fp.K, m):
            yield m


def gl2_order(q: int) -> int:
    return (q * q - 1) * (q * q - q)


# --- classes and characters --------------------------------------------------------


@dataclass(frozen=True)
class GL2Class:
    kind: str  # "a" central, "b" non-semisimple, "c" split regular, "d" nonsplit regular
    params: tuple[int, ...]  # field elements: (x,), (x,), (x, y), (z,)
    size: int
    rep: Mat


@dataclass(frozen=True)
class GL2Character:
    family: str  # "U", "V", "W", "X"
    params: tuple[int, ...]  # exponents of the multiplicative characters
    degree: int
    series: str  # semisimple parameter class


@dataclass
class GL2Table:
    q: int
    fields: FieldPair
    classes: list[GL2Class]
    characters: list[GL2Character]
    values: np.ndarray  # values[row, class]

    @property
    def order(self) -> int:
        return gl2_order(self.q)

    @property
    def degrees(self) -> list[int]:
        return [c.degree for c in self.characters]

    @cached_property
    def series_of(self) -> dict[int, str]:
        return {i: c.series for i, c in enumerate(self.characters)}

    @cached_property
    def _class_lookup(self) -> dict:
        return {(c.kind, c.params): i for i, c in enumerate(self.classes)}

    def class_index(self, g: Mat) -> int:
        return self._class_lookup[classify(self.fields, g)]

    def value(self, row: int, g: Mat) -> complex:
        return complex(self.values[row, self.class_index(g)])


def classify(fp: FieldPair, g: Mat) -> tuple[str, tuple[int, ...]]:
    """Class label of ``g`` from its characteristic polynomial and whether it is scalar."""
    K = fp.K
    a, b, c, d = g
    tr, det = K.plus(a, d), mat_det(K, g)
    roots = [z for z in range(1, K.size) if K.plus(K.sub(K.mul(z, z), K.mul(tr, z)), det) == 0]
    if len(roots) == 1:
        x = roots[0]
        if b == 0 and c == 0:
            return "a", (x,)
        return "b", (x,)
    x, y = roots
    if x in fp.subfield:
        return "c", (min(x, y), max(x, y))
    return "d", (min(x, y),)


def _classes(fp: FieldPair) -> list[GL2Class]:
    q, K = fp.q, fp.K
    units = sorted(fp.units)
    out = []
    for x in units:
        out.append(GL2Class("a", (x,), 1, (x, 0, 0, x)))
    for x in units:
        out.append(GL2Class("b", (x,), q * q - 1, (x, 1, 0, x)))
    for x, y in itertools.combinations(units, 2):
        out.append(GL2Class("c", (x, y), q * (q + 1), (x, 0, 0, y)))
    seen = set()
    for z in range(1, K.size):
        if z in fp.subfield or z in seen:
            continue
        zq = fp.frob(z)
        seen |= {z, zq}
        # companion matrix of t^2 - tr t + N
        rep = (0, K.neg[fp.norm(z)], 1, fp.trace(z))
        out.append(GL2Class("d", (min(z, zq),), q * (q - 1), tuple(int(v) for v in rep)))
    return out


def _root(k: int, n: int) -> complex:
    return cmath.exp(2j * math.pi * k / n)


def gl2_character_table(q: int) -> GL2Table:
    """The four-family generic table, validated before it is returned."""
    if q not in SUPPORTED_Q:
        raise HarnessError(f"q must be an odd prime power in {SUPPORTED_Q}")
    fp = field_pair(q)
    classes = _classes(fp)
    Q1 = q * q - 1

    def alpha(k: int, x: int) -> complex:
        return _root(k * fp.log_eps(x), q - 1)

    def phi(j: int, z: int) -> complex:
        return _root(j * int(fp.K.log[z]), Q1)

    chars: list[GL2Character] = []
    rows = []
    for k in range(q - 1):
        for fam, deg in (("U", 1), ("V", q)):
            chars.append(GL2Character(fam, (k,), deg, f"s(a{k},a{k})"))
            row = []
            for c in classes:
                if c.kind in "ab":
                    (x,) = c.params
                    v = alpha(k, x) ** 2
                    row.append(v * deg if c.kind == "a" else (v if fam == "U" else 0))
                elif c.kind == "c":
                    x, y = c.params
                    row.append(alpha(k, x) * alpha(k, y))
                else:
                    (z,) = c.params
                    v = alpha(k, fp.norm(z))
                    row.append(v if fam == "U" else -v)
            rows.append(row)
    for k, m in itertools.combinations(range(q - 1), 2):
        chars.append(GL2Character("W", (k, m), q + 1, f"s(a{k},a{m})"))
        row = []
        for c in classes:
            if c.kind == "a":
                (x,) = c.params
                row.append((q + 1) * alpha(k, x) * alpha(m, x))
            elif c.kind == "b":
                (x,) = c.params
                row.append(alpha(k, x) * alpha(m, x))
            elif c.kind == "c":
                x, y = c.params
                row.append(alpha(k, x) * alpha(m, y) + alpha(k, y) * alpha(m, x))
            else:
                row.append(0)
        rows.append(row)
    done = set()
    for j in range(Q1):
        jq = (j * q) % Q1
        if j == jq or j in done:
            continue
        done |= {j, jq}
        chars.append(GL2Character("X", (j,), q - 1, f"t(p{min(j, jq)})"))
        row = []
        for c in classes:
            if c.kind == "a":
                (x,) = c.params
                row.append((q - 1) * phi(j, x))
            elif c.kind == "b":
                (x,) = c.params
                row.append(-phi(j, x))
            elif c.kind == "c":
                row.append(0)
            else:
                (z,) = c.params
                row.append(-(phi(j, z) + phi(j, fp.frob(z))))
        rows.append(row)
    table = GL2Table(q, fp, classes, chars, np.array(rows, dtype=complex))
    validate_table(table)
    return table


def validate_table(t: GL2Table, tol: float = TOL) -> None:
    q = t.q
    sizes = np.array([c.size for c in t.classes], dtype=float)
    if int(sizes.sum()) != t.order:
        raise HarnessError("class sizes do not sum to |GL_2(q)|")
    if len(t.classes) != q * q - 1 or len(t.characters) != q * q - 1:
        raise HarnessError("expected q^2 - 1 classes and characters")
    if sum(d * d for d in t.degrees) != t.order:
        raise HarnessError("degree squares do not sum to |GL_2(q)|")
    X = t.values
    gram = (X * sizes) @ X.conj().T / t.order
    if np.max(np.abs(gram - np.eye(len(X)))) > tol:
        raise HarnessError("row orthogonality fails")
    cols = X.conj().T @ X
    if np.max(np.abs(cols - np.diag(t.order / sizes))) > tol * t.order:
        raise HarnessError("column orthogonality fails")


# --- reports ------------------------------------------------------------------------------


@dataclass
class VerifyReport:
    check_name: str
    instances: int = 0
    failures: int = 0
    worst_margin: float = 0.0
    details: list[dict] = field(default_factory=list)

    def record(self, ok: bool, margin: float, **detail) -> None:
        self.instances += 1
        self.worst_margin = max(self.worst_margin, margin)
        if not ok:
            self.failures += 1
            self.details.append(detail)

    def to_json(self) -> dict:
        return asdict(self)

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _torus_elements(t: GL2Table, torus: str) -> list[Mat]:
    """Regular elements of the split (diagonal) or nonsplit (class ``d``) torus."""
    fp = t.fields
    if torus == "split":
        return [(x, 0, 0, y) for x in fp.units for y in fp.units if x != y]
    if torus == "nonsplit":
        return [c.rep for c in t.classes if c.kind == "d" for _ in range(2)]
    raise ValueError(torus)


def check_character_bound(t: GL2Table, levi: str = "split") -> VerifyReport:
    """``|chi(g)| <= f(1) * chi(1)^alpha`` with ``alpha = 0`` on tori and ``1`` for the full group."""
    bound = f_of_rank(1).ceil
    rep = VerifyReport(f"character_bound[{levi}]")
    if levi == "full":
        elements = [c.rep for c in t.classes]
        a = 1
    else:
        elements = _torus_elements(t, levi)
        a = 0
    worst = 0.0
    for g in elements:
        j = t.class_index(g)
        for i, ch in enumerate(t.characters):
            v = abs(t.values[i, j])
            worst = max(worst, v)
            rep.record(v <= bound * ch.degree**a + TOL, v, chi=i, cls=j)
    rep.worst_margin = worst
    return rep


def check_restriction_identity(t: GL2Table) -> VerifyReport:
    """``chi(t) = (1/q) sum_u chi(t u)`` over the upper unitriangular group, ``t`` regular split."""
    fp, K = t.fields, t.fields.K
    rep = VerifyReport("restriction_identity")
    for g in _torus_elements(t, "split"):
        cols = [t.class_index(mat_mul(K, g, (1, b, 0, 1))) for b in fp.subfield]
        j = t.class_index(g)
        avg = t.values[:, cols].mean(axis=1)
        dev = np.abs(avg - t.values[:, j])
        for i in range(len(t.characters)):
            rep.record(dev[i] < TOL, float(dev[i]), chi=i, t=g)
    return rep


def semisimple_parameters(t: GL2Table) -> dict[str, tuple]:
    """Each semisimple parameter and its eigenvalue labels (characters of ``F_q^x`` or ``F_{q^2}^x``)."""
    out = {}
    for ch in t.characters:
        if ch.family in "UV":
            k = ch.params[0]
            out[ch.series] = (("a", k), ("a", k))
        elif ch.family == "W":
            k, m = ch.params
            out[ch.series] = (("a", k), ("a", m))
        else:
            j = ch.params[0]
            out[ch.series] = (("p", j), ("p", (j * t.q) % (t.q * t.q - 1)))
    return out


def check_series_bound(t: GL2Table) -> VerifyReport:
    rep = VerifyReport("series_bound")
    sizes: dict[str, int] = {}
    for s in t.series_of.values():
        sizes[s] = sizes.get(s, 0) + 1
    for s, labels in semisimple_parameters(t).items():
        bound = series_size_bound(torus_stabilizer_order(labels))
        rep.record(sizes[s] <= bound, sizes[s] / bound, series=s, size=sizes[s], bound=bound)
    return rep


def centralizer_order(fp: FieldPair, g: Mat, group: list[Mat]) -> int:
    K = fp.K
    return sum(1 for x in group if mat_mul(K, x, g) == mat_mul(K, g, x))


def centralizer_in_torus(fp: FieldPair, g: Mat, group: list[Mat]) -> bool:
    K = fp.K
    return all(x[1] == 0 and x[2] == 0 for x in group if mat_mul(K, x, g) == mat_mul(K, g, x))


def commutant_dimension(fp: FieldPair, g: Mat) -> int:
    """``dim_{F_q}`` of the matrices commuting with ``g``, by counting all of ``M_2(F_q)``."""
    K = fp.K
    count = sum(
        1 for x in itertools.product(fp.subfield, repeat=4) if mat_mul(K, x, g) == mat_mul(K, g, x)
    )
    dim = round(math.log(count, fp.q))
    if fp.q**dim != count:
        raise HarnessError("commutant size is not a power of q")
    return dim


def check_centralizer_lemma(qs: tuple[int, ...] = (3, 5)) -> VerifyReport:
    """The four centralizer conditions agree on every element of the diagonal torus.

    (iii) and (iv) are decided by enumerating centralizers in ``GL_2(q)``.
    (i) and (ii) use the algebraic proxy: ``C(g)`` lies in the torus iff its
    dimension, read off as the ``q``-degree of the commutant size, is 2, and the
    same for the semisimple part (here ``g`` is semisimple, so ``s = g``).
    """
    rep = VerifyReport("centralizer_lemma")
    for q in qs:
        fp = field_pair(q)
        group = list(gl2_elements(fp))
        for x in fp.units:
            for y in fp.units:
                g = (x, 0, 0, y)
                s = g  # elements of the torus are semisimple
                i_cond = commutant_dimension(fp, s) == 2
                ii_cond = commutant_dimension(fp, g) == 2
                iii_cond = centralizer_in_torus(fp, s, group)
                iv_cond = centralizer_in_torus(fp, g, group)
                agree = i_cond == ii_cond == iii_cond == iv_cond
                rep.record(agree, 0.0, q=q, g=g, conditions=(i_cond, ii_cond, iii_cond, iv_cond))
    return rep


def harish_chandra_norms(t: GL2Table) -> VerifyReport:
    """``<R(theta), R(theta)> = |Stab_W(theta)|`` for induction from the split Borel.

    ``R(theta)`` is computed from scratch by inducing ``theta`` inflated to the
    upper triangular group, then decomposed against the table.
    """
    fp, K, q = t.fields, t.fields.K, t.q
    if q > 7:
        raise HarnessError("the brute-force induction is limited to q <= 7")
    group = list(gl2_elements(fp))
    borel_order = (q - 1) ** 2 * q
    sizes = np.array([c.size for c in t.classes], dtype=float)
    constant = multiplicity_constant(0, "A1")
    rep = VerifyReport("multiplicity_norm")
    conj_images = []
    for c in t.classes:
        imgs = []
        for x in group:
            y = mat_mul(K, mat_mul(K, x, c.rep), mat_inv(K, x))
            if y[2] == 0:
                imgs.append((fp.log_eps(y[0]), fp.log_eps(y[3])))
        conj_images.append(imgs)
    for k in range(q - 1):
        for m in range(q - 1):
            vals = np.array(
                [sum(_root(k * a + m * d, q - 1) for a, d in imgs) / borel_order for imgs in conj_images]
            )
            norm = float(np.real(np.sum(sizes * vals * vals.conj())) / t.order)
            mults = (t.values.conj() * sizes) @ vals / t.order
            integral = np.max(np.abs(mults - np.round(mults.real))) < TOL and np.min(mults.real) > -TOL
            stab = 2 if k == m else 1
            ok = abs(norm - stab) < TOL and integral and norm <= constant + TOL
            rep.record(ok, norm / constant, theta=(k, m), norm=norm, constant=constant)
    return rep


def run_gl2_suite(q: int, with_norms: bool = True) -> list[VerifyReport]:
    t = gl2_character_table(q)
    reports = [VerifyReport("table_invariants", instances=1)]
    reports += [check_character_bound(t, "split"), check_character_bound(t, "nonsplit"), check_character_bound(t, "full")]
    reports.append(check_restriction_identity(t))
    reports.append(check_series_bound(t))
    reports.append(check_centralizer_lemma((3, 5) if q in (3, 5) else (3, 5, q) if q <= 7 else (3, 5)))
    if with_norms and q <= 7:
        reports.append(harish_chandra_norms(t))
    return reports
