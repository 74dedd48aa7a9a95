"""Unipotent classes: class dimensions and component group orders.

Classical types are handled by partition combinatorics (good characteristic,
simply connected groups unless the ``gl`` convention is requested).  The
exceptional types are read from a bundled JSON table whose SHA-256 digest is
checked against a manifest at load time; set ``CHARBOUND_DATA`` to point at a
replacement table (a manifest next to it is honoured if present).
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from collections import Counter
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import cache
from importlib import resources
from pathlib import Path

from .roots import RootSystemError, parse_type

Partition = tuple[int, ...]

CONVENTIONS = ("sc", "gl")


class UnipotentDataError(RuntimeError):
    pass


@dataclass(frozen=True)
class UnipClass:
    ambient_type: str  # e.g. "C3"
    label: str  # partition like "4,2" or a Bala-Carter label
    dim: int  # dimension of the class u^G
    comp_order: int  # |C_G(u) / C_G(u)^0|
    frob_stable: bool = True
    partition: Partition = ()
    variant: int = 0  # 1 or 2 for the two classes of a very even partition in type D


def partitions(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of ``n`` in non-increasing order, largest first."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def conjugate_partition(lam: Sequence[int]) -> Partition:
    lam = [p for p in lam if p > 0]
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > i) for i in range(lam[0]))


def fmt_partition(lam: Sequence[int]) -> str:
    return ",".join(map(str, lam)) if lam else "-"


def _sq(lam: Sequence[int]) -> int:
    return sum(p * p for p in conjugate_partition(lam))


def _odd_parts(lam: Sequence[int]) -> int:
    return sum(1 for p in lam if p % 2)


def is_symplectic(lam: Sequence[int]) -> bool:
    c = Counter(lam)
    return all(m % 2 == 0 for p, m in c.items() if p % 2)


def is_orthogonal(lam: Sequence[int]) -> bool:
    c = Counter(lam)
    return all(m % 2 == 0 for p, m in c.items() if p % 2 == 0)


def is_very_even(lam: Sequence[int]) -> bool:
    c = Counter(lam)
    return bool(lam) and all(p % 2 == 0 and m % 2 == 0 for p, m in c.items())


def dim_centralizer_gl(lam: Sequence[int]) -> int:
    return _sq(lam)


def dim_centralizer_sp(lam: Sequence[int]) -> int:
    return (_sq(lam) + _odd_parts(lam)) // 2


def dim_centralizer_o(lam: Sequence[int]) -> int:
    return (_sq(lam) - _odd_parts(lam)) // 2


def comp_order_sl(lam: Sequence[int]) -> int:
    return math.gcd(*lam) if lam else 1


def comp_order_sp(lam: Sequence[int]) -> int:
    return 2 ** len({p for p in lam if p % 2 == 0})


def comp_order_so(lam: Sequence[int]) -> int:
    b = len({p for p in lam if p % 2})
    return 2 ** max(b - 1, 0)


def comp_order_spin(lam: Sequence[int]) -> int:
    c = Counter(lam)
    a = comp_order_so(lam)
    # the kernel of Spin -> SO lies in C(u)^0 exactly when an odd part repeats
    if any(m >= 2 for p, m in c.items() if p % 2):
        return a
    return 2 * a


def group_dimension(t: str, n: int) -> int:
    return {
        "A": n * (n + 2),
        "B": n * (2 * n + 1),
        "C": n * (2 * n + 1),
        "D": n * (2 * n - 1),
        "G": 14,
        "F": 52,
        "E": {6: 78, 7: 133, 8: 248}.get(n, 0),
    }[t]


def _classical(t: str, n: int, convention: str) -> list[UnipClass]:
    name = f"{t}{n}"
    out = []
    if t == "A":
        m = n + 1
        for lam in partitions(m):
            comp = comp_order_sl(lam) if convention == "sc" else 1
            out.append(UnipClass(name, fmt_partition(lam), m * m - _sq(lam), comp, partition=lam))
        return out
    if convention != "sc" and t != "B":
        raise RootSystemError("the gl convention is only provided for types A and B")
    dim_g = group_dimension(t, n)
    if t == "B":
        for lam in partitions(2 * n + 1):
            if is_orthogonal(lam):
                comp = comp_order_spin(lam) if convention == "sc" else comp_order_so(lam)
                out.append(UnipClass(name, fmt_partition(lam), dim_g - dim_centralizer_o(lam), comp, partition=lam))
    elif t == "C":
        for lam in partitions(2 * n):
            if is_symplectic(lam):
                dim = dim_g - dim_centralizer_sp(lam)
                out.append(UnipClass(name, fmt_partition(lam), dim, comp_order_sp(lam), partition=lam))
    elif t == "D":
        for lam in partitions(2 * n):
            if not is_orthogonal(lam):
                continue
            dim, comp = dim_g - dim_centralizer_o(lam), comp_order_spin(lam)
            if is_very_even(lam):
                for v, tag in ((1, "I"), (2, "II")):
                    out.append(UnipClass(name, fmt_partition(lam) + tag, dim, comp, partition=lam, variant=v))
            else:
                out.append(UnipClass(name, fmt_partition(lam), dim, comp, partition=lam))
    else:
        raise RootSystemError(f"{name} is not classical")
    return out


# --- exceptional table ---------------------------------------------------------------


def _default_table() -> tuple[bytes, dict]:
    pkg = resources.files("charbound.data")
    raw = pkg.joinpath("exceptional_unipotent.json").read_bytes()
    manifest = json.loads(pkg.joinpath("exceptional_unipotent.manifest.json").read_text())
    return raw, manifest


def _override_table(path: str) -> tuple[bytes, dict | None]:
    p = Path(path)
    raw = p.read_bytes()
    mpath = p.with_name(p.stem + ".manifest.json")
    manifest = json.loads(mpath.read_text()) if mpath.exists() else None
    return raw, manifest


@cache
def exceptional_table(path: str | None = None) -> dict:
    """Load, checksum and validate the exceptional table.

    Returns ``{"rows": {type: [UnipClass]}, "coverage": {type: "complete" | "partial"}}``.
    """
    if path is None:
        path = os.environ.get("CHARBOUND_DATA") or None
    if path is None:
        raw, manifest = _default_table()
    else:
        raw, manifest = _override_table(path)
    digest = hashlib.sha256(raw).hexdigest()
    if manifest is not None and manifest.get("sha256") != digest:
        raise UnipotentDataError("exceptional unipotent table does not match its manifest checksum")
    try:
        records = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UnipotentDataError(f"malformed exceptional table: {exc}") from None
    if not isinstance(records, list) or not records:
        raise UnipotentDataError("exceptional table must be a non-empty JSON array")
    coverage = dict(manifest.get("coverage", {})) if manifest else {}
    rows: dict[str, list[UnipClass]] = {}
    for rec in records:
        try:
            t = str(rec["type"])
            row = UnipClass(t, str(rec["label"]), int(rec["dim"]), int(rec["comp_order"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise UnipotentDataError(f"malformed row {rec!r}: {exc}") from None
        rows.setdefault(t, []).append(row)
    for t, rs in rows.items():
        _validate_exceptional(t, rs)
        coverage.setdefault(t, "partial")
    return {"rows": rows, "coverage": coverage, "sha256": digest}


def load_exceptional_tables(path: str | os.PathLike) -> dict:
    """Load a specific table file, bypassing ``CHARBOUND_DATA``."""
    p = Path(path)
    if not p.exists():
        raise UnipotentDataError(f"no such table: {p}")
    return exceptional_table(str(p))


def _validate_exceptional(t: str, rows: list[UnipClass]) -> None:
    try:
        (letter, n), = parse_type(t)
    except (RootSystemError, ValueError) as exc:
        raise UnipotentDataError(f"unknown type {t!r} in exceptional table") from exc
    top = group_dimension(letter, n) - n
    labels = [r.label for r in rows]
    if len(set(labels)) != len(labels):
        raise UnipotentDataError(f"duplicate labels in the {t} table")
    by_label = {r.label: r for r in rows}
    triv = by_label.get("1")
    if triv is None or triv.dim != 0 or triv.comp_order != 1:
        raise UnipotentDataError(f"{t}: trivial class must have dim 0 and trivial component group")
    reg = by_label.get(t)
    if reg is None or reg.dim != top:
        raise UnipotentDataError(f"{t}: regular class must be present with dim {top}")
    for r in rows:
        if r.comp_order < 1 or not 0 <= r.dim <= top:
            raise UnipotentDataError(f"{t}: row {r.label} out of range")
        if r is not reg and r.dim == top:
            raise UnipotentDataError(f"{t}: the regular class must be the unique maximum")


def unipotent_classes(
    type_label: str,
    rank: int | None = None,
    twist: int | Sequence[int] | None = None,
    convention: str = "sc",
) -> list[UnipClass]:
    """Unipotent classes of a simple group with class dimensions and component orders.

    ``type_label`` is ``"C3"`` or just ``"C"`` with ``rank=3``.  ``twist`` is a
    diagram automorphism (as a permutation of simple roots) or its order; only
    the very even pairs in type D and the triality orbits in ``D4`` move.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    label = type_label if rank is None else f"{type_label}{rank}"
    (t, n), = parse_type(label)
    if t in "ABCD":
        if t == "D" and n == 3:
            raise RootSystemError("D3 is A3; use type A")
        out = _classical(t, n, convention)
    else:
        table = exceptional_table()
        if f"{t}{n}" not in table["rows"]:
            raise UnipotentDataError(f"no table for {t}{n}")
        out = list(table["rows"][f"{t}{n}"])
    order = _twist_order(twist)
    if order == 1:
        return out
    return [_with_stability(u, t, n, order) for u in out]


def _twist_order(twist) -> int:
    if twist is None:
        return 1
    if isinstance(twist, int):
        return twist
    p = tuple(twist)
    k, q = 1, p
    while q != tuple(range(len(p))):
        q = tuple(p[i] for i in q)
        k += 1
    return k


def _with_stability(u: UnipClass, t: str, n: int, order: int) -> UnipClass:
    stable = True
    if t == "D" and u.variant:
        stable = False
    if t == "D" and n == 4 and order == 3 and u.partition in ((3, 1, 1, 1, 1, 1), (5, 1, 1, 1)):
        stable = False
    return UnipClass(u.ambient_type, u.label, u.dim, u.comp_order, stable, u.partition, u.variant)


def coverage(type_label: str) -> str:
    (t, n), = parse_type(type_label)
    if t in "ABCD":
        return "complete"
    return exceptional_table()["coverage"].get(f"{t}{n}", "missing")


def max_dim(type_label: str) -> int:
    """Largest class dimension, attained by the regular class: ``dim G - rank``."""
    (t, n), = parse_type(type_label)
    return group_dimension(t, n) - n


def max_comp_order(type_label: str) -> int:
    return max(u.comp_order for u in unipotent_classes(type_label))


# --- Levi subgroups of classical groups and fusion ------------------------------


@dataclass(frozen=True)
class LeviShape:
    """Block structure of a classical Levi on the natural module.

    ``blocks`` are the ``GL_a`` factor sizes in chain order.  ``tail`` is the
    rank of the classical factor at the end of the diagram (``None`` for type A
    ambients); a rank 0 tail is not a factor.  ``tail_kind`` is ``"B"``,
    ``"C"`` or ``"D"``.
    """

    ambient: str
    blocks: tuple[int, ...]
    tail_kind: str | None
    tail: int | None
    other_end: bool = False  # type D: the GL chain runs through alpha_n rather than alpha_{n-1}

    @property
    def factor_count(self) -> int:
        return len(self.blocks) + bool(self.tail)


def _chain_blocks(positions: int, linked: Sequence[bool]) -> tuple[int, ...]:
    """Split ``positions`` consecutive slots; ``linked[i]`` joins slot ``i`` to ``i + 1``."""
    blocks, size = [], 1
    for i in range(positions - 1):
        if linked[i]:
            size += 1
        else:
            blocks.append(size)
            size = 1
    blocks.append(size)
    return tuple(blocks)


def levi_shape(type_label: str, subset: Sequence[int]) -> LeviShape:
    """Natural-module block structure of the standard Levi on ``subset`` (0-based)."""
    (t, n), = parse_type(type_label)
    J = set(subset)
    if any(not 0 <= j < n for j in J):
        raise RootSystemError("simple root index out of range")
    name = f"{t}{n}"
    if t == "A":
        return LeviShape(name, _chain_blocks(n + 1, [i in J for i in range(n)]), None, None)
    if t in "BC":
        m = 0
        while m < n and (n - 1 - m) in J:
            m += 1
        rest = n - m
        return LeviShape(name, _chain_blocks(rest, [i in J for i in range(rest - 1)]) if rest else (), t, m)
    if t == "D":
        a, b = n - 2, n - 1
        if a in J and b in J:
            m = 2
            while m < n and (n - 1 - m) in J:
                m += 1
            rest = n - m
            blocks = _chain_blocks(rest, [i in J for i in range(rest - 1)]) if rest else ()
            return LeviShape(name, blocks, "D", m)
        # without the fork, the last two slots are joined by whichever of alpha_{n-1}, alpha_n is present
        linked = [i in J for i in range(n - 2)] + [a in J or b in J]
        return LeviShape(name, _chain_blocks(n, linked), "D", 0, other_end=b in J)
    raise RootSystemError(f"fusion is only defined for classical ambients, not {name}")


def tail_classes(kind: str, m: int) -> list[UnipClass]:
    """Unipotent classes of ``SO_{2m+1}``, ``Sp_{2m}`` or ``SO_{2m}`` for small ``m`` too."""
    name = f"{kind}{m}"
    if kind == "B":
        dim_g, size, ok, cdim = m * (2 * m + 1), 2 * m + 1, is_orthogonal, dim_centralizer_o
    elif kind == "C":
        dim_g, size, ok, cdim = m * (2 * m + 1), 2 * m, is_symplectic, dim_centralizer_sp
    elif kind == "D":
        dim_g, size, ok, cdim = m * (2 * m - 1), 2 * m, is_orthogonal, dim_centralizer_o
    else:
        raise ValueError(kind)
    out = []
    for lam in partitions(size):
        if not ok(lam):
            continue
        dim = dim_g - cdim(lam)
        comp = comp_order_sp(lam) if kind == "C" else comp_order_spin(lam)
        if kind == "D" and m >= 1 and is_very_even(lam):
            for v, tag in ((1, "I"), (2, "II")):
                out.append(UnipClass(name, fmt_partition(lam) + tag, dim, comp, partition=lam, variant=v))
        else:
            out.append(UnipClass(name, fmt_partition(lam), dim, comp, partition=lam))
    return out


def gl_classes(a: int) -> list[UnipClass]:
    return [UnipClass(f"GL{a}", fmt_partition(lam), a * a - _sq(lam), 1, partition=lam) for lam in partitions(a)]


def levi_factor_classes(shape: LeviShape) -> list[list[UnipClass]]:
    """Per-factor class lists: the ``GL`` blocks first, then the classical tail."""
    out = [gl_classes(a) for a in shape.blocks]
    if shape.tail:
        out.append(tail_classes(shape.tail_kind, shape.tail))
    return out


def ambient_class(type_label: str, lam: Sequence[int], variant: int = 0) -> UnipClass:
    """The class of ``type_label`` with Jordan type ``lam`` (and twin ``variant`` in type D)."""
    lam = tuple(sorted(lam, reverse=True))
    for u in unipotent_classes(type_label, convention="sc"):
        if u.partition == lam and (not u.variant or u.variant == (variant or 1)):
            return u
    raise RootSystemError(f"{fmt_partition(lam)} is not a unipotent class of {type_label}")


def fuse_to_ambient(
    levi_class_data: Sequence[UnipClass | Sequence[int]],
    levi: Sequence[int] | LeviShape,
    ambient: str,
) -> UnipClass:
    """Ambient class of a Levi class, from the block-diagonal embedding on the natural module.

    ``levi_class_data`` lists one class (or bare partition) per factor in the
    order of :func:`levi_factor_classes`.  ``levi`` is the simple-root subset or
    a precomputed shape.
    """
    (t, n), = parse_type(ambient)
    if t not in "ABCD":
        raise RootSystemError("fusion is out of scope for exceptional ambients")
    shape = levi if isinstance(levi, LeviShape) else levi_shape(ambient, levi)
    data = list(levi_class_data)
    if len(data) != shape.factor_count:
        raise RootSystemError(f"expected {shape.factor_count} factor classes, got {len(data)}")
    parts: list[int] = []
    variant = 0
    for k, a in enumerate(shape.blocks):
        lam = _as_partition(data[k])
        if sum(lam) != a:
            raise RootSystemError(f"factor {k} is GL{a} but got partition {fmt_partition(lam)}")
        parts.extend(lam if t == "A" else lam + lam)
    if shape.tail == 0 and shape.tail_kind == "B":
        parts.append(1)  # SO_1
    if shape.tail:
        tail = data[-1]
        lam = _as_partition(tail)
        size = 2 * shape.tail + (shape.tail_kind == "B")
        if sum(lam) != size:
            raise RootSystemError(f"tail needs a partition of {size}, got {fmt_partition(lam)}")
        ok = is_symplectic if shape.tail_kind == "C" else is_orthogonal
        if not ok(lam):
            raise RootSystemError(f"{fmt_partition(lam)} is not a valid tail partition")
        parts.extend(lam)
        variant = getattr(tail, "variant", 0)
    if t == "D" and not variant:
        variant = 2 if shape.other_end else 1
    return ambient_class(ambient, parts, variant)


def _as_partition(x: UnipClass | Sequence[int]) -> tuple[int, ...]:
    if isinstance(x, UnipClass):
        return x.partition
    return tuple(sorted((int(p) for p in x if int(p) > 0), reverse=True))
