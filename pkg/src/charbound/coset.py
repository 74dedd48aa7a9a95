"""Characters of a coset ``G.phi`` and induction from subcosets ``H.g phi``.

Coset irreducibles are restrictions to the slice ``G.phi`` of those
irreducible characters of ``G x| <phi>`` that stay irreducible on ``G``.
A subcoset ``H.g phi`` lives in its own semidirect product
``H x| <iota_g o phi>`` and is carried into ``G.phi`` by the injective
``H``-map ``h (iota_g phi) -> h g phi``.
"""

from __future__ import annotations

import json
import weakref
from collections.abc import Iterator, Mapping
from dataclasses import asdict, dataclass
from functools import cached_property

import numpy as np

from . import perm
from .chartab import (
    ClassFunction,
    character_table,
    induce_class_function,
    inner_product,
    multiplicity,
)
from .gset import GFunction, GMap, GSet, gset_inner_product, induce_along, is_invariant
from .perm import GroupError, Perm, PermGroup, SemidirectGroup, conj, mul

TOL = 1e-6

_slice_cache: weakref.WeakKeyDictionary[SemidirectGroup, GSet] = weakref.WeakKeyDictionary()


def slice_gset(S: SemidirectGroup) -> GSet:
    """The base group acting on ``G.phi`` by conjugation."""
    hit = _slice_cache.get(S)
    if hit is not None:
        return hit
    G = S.base
    pts = S.slice.elements
    index = {x: i for i, x in enumerate(pts)}
    act = np.empty((G.order, len(pts)), dtype=np.int64)
    for gi, g in enumerate(G.elements):
        e = S.embed[g]
        for xi, x in enumerate(pts):
            act[gi, xi] = index[conj(e, x)]
    X = GSet(G, pts, act)
    _slice_cache[S] = X
    return X


@dataclass(frozen=True, eq=False)
class CosetCharacter:
    slice_ref: SemidirectGroup
    values: GFunction
    parent_character: ClassFunction
    base_restriction: ClassFunction

    def __call__(self, x: Perm) -> complex:
        return self.values(x)


def restrict_to_base(S: SemidirectGroup, eta: ClassFunction) -> ClassFunction:
    return ClassFunction.from_callable(S.base, lambda g: eta(S.embed[g]))


def irr_coset(S: SemidirectGroup) -> list[CosetCharacter]:
    """One coset character per irreducible of ``G x| <phi>`` irreducible on ``G``."""
    table = character_table(S.realized)
    X = slice_gset(S)
    out = []
    for eta in table:
        rho = restrict_to_base(S, eta)
        if abs(inner_product(rho, rho) - 1) > TOL:
            continue
        vals = np.array([eta(x) for x in X.points])
        out.append(CosetCharacter(S, GFunction(X, vals, invariant=True), eta, rho))
    return out


def _value_key(z: complex) -> tuple[float, float]:
    return (round(z.real, 9) + 0.0, round(z.imag, 9) + 0.0)


def coset_basis(S: SemidirectGroup) -> list[CosetCharacter]:
    """One canonical extension per ``phi``-invariant irreducible of ``G``.

    Among extensions with the same restriction to ``G``, keep the one whose
    value at ``phi`` is smallest in (real, imag) order.
    """
    groups: dict[tuple, list[CosetCharacter]] = {}
    for c in irr_coset(S):
        key = tuple(_value_key(z) for z in c.base_restriction.values)
        groups.setdefault(key, []).append(c)
    return [
        min(cs, key=lambda c: _value_key(c.parent_character(S.phi_image)))
        for _, cs in sorted(groups.items())
    ]


def phi_invariant_characters(S: SemidirectGroup) -> list[ClassFunction]:
    G = S.base
    cls = G.classes
    table = character_table(G)
    out = []
    for chi in table:
        twisted = np.array([chi(S.phi[r]) for r in cls.representatives])
        if np.max(np.abs(twisted - chi.values)) < TOL:
            out.append(chi)
    return out


@dataclass(frozen=True, eq=False)
class Subcoset:
    """The data ``(H, g)`` for a subcoset ``H.g phi`` of ``G.phi``."""

    parent: SemidirectGroup
    H: PermGroup
    g: Perm
    local: SemidirectGroup  # H x| <iota_g o phi>
    gamma: GMap

    @cached_property
    def characters(self) -> list[CosetCharacter]:
        return irr_coset(self.local)

    @property
    def label(self) -> str:
        return f"H={len(self.H)}:{perm.fmt_perm(self.g)}"


def stabilizes(S: SemidirectGroup, H: PermGroup, g: Perm) -> bool:
    """``iota_g phi (H) == H``."""
    return all(conj(g, S.phi[h]) in H for h in H.generators)


def twist_bijection(S: SemidirectGroup, H: PermGroup, g: Perm) -> Subcoset:
    """Build ``H x| <iota_g phi>`` and the ``H``-map ``H.g phi -> G.phi``."""
    G = S.base
    if not H.is_subgroup_of(G):
        raise GroupError("H is not a subgroup of G")
    if g not in G:
        raise GroupError("g is not an element of G")
    if not stabilizes(S, H, g):
        raise GroupError("iota_g o phi does not map H onto itself")
    psi = {h: conj(g, S.phi[h]) for h in H.elements}
    m = perm.automorphism_order(H, psi)
    local = perm.semidirect_with_automorphism(H, psi, m)
    source = slice_gset(local)
    target = slice_gset(S)
    tindex = target.point_index
    mapping = []
    for z in source.points:
        h, j = local.pair(z)
        assert j == 1 % m
        mapping.append(tindex[S.element(mul(h, g), 1)])
    gamma = GMap(source, target, np.array(mapping, dtype=np.int64))
    return Subcoset(S, H, g, local, gamma)


def coset_induce(sub: Subcoset, chi: CosetCharacter | GFunction) -> GFunction:
    f = chi.values if isinstance(chi, CosetCharacter) else chi
    if not is_invariant(f.gset, f.values):
        raise GroupError("function on the subcoset is not H-invariant")
    return induce_along(sub.gamma, f)


@dataclass(frozen=True)
class MultiplicityReport:
    lhs: float
    rhs: int
    holds: bool
    group: str = ""
    automorphism: str = ""
    subcoset: str = ""
    chi_index: int = -1
    rho_index: int = -1

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def verify_multiplicity_lemma(
    sub: Subcoset, chi: CosetCharacter, rho: CosetCharacter, **labels
) -> MultiplicityReport:
    """Compare ``|<rho~, Ind chi~>|`` on the coset with ``<rho, Ind_H^G chi>`` on ``G``."""
    if rho.slice_ref is not sub.parent or chi.slice_ref is not sub.local:
        raise GroupError("characters do not belong to this subcoset data")
    induced = coset_induce(sub, chi)
    lhs = abs(gset_inner_product(rho.values, induced))
    ind = induce_class_function(sub.H, chi.base_restriction, sub.parent.base)
    rhs = multiplicity(rho.base_restriction, ind)
    return MultiplicityReport(lhs, rhs, lhs <= rhs + TOL, subcoset=sub.label, **labels)


def coset_norm_bound_check(
    sub1: Subcoset, chi1: CosetCharacter, sub2: Subcoset, chi2: CosetCharacter
) -> tuple[float, int, bool]:
    if sub1.parent is not sub2.parent:
        raise GroupError("subcosets live in different cosets")
    a = coset_induce(sub1, chi1)
    b = coset_induce(sub2, chi2)
    value = abs(gset_inner_product(a, b))
    bound = sub1.parent.base.order
    return value, bound, value <= bound + TOL


def subcoset_data(S: SemidirectGroup, H: PermGroup) -> list[Subcoset]:
    """All subcosets ``H.g phi`` with ``g`` running over ``H``-coset representatives."""
    out = []
    seen: set[frozenset] = set()
    for g in S.base.elements:
        if not stabilizes(S, H, g):
            continue
        coset = frozenset(mul(h, g) for h in H.elements)
        if coset in seen:
            continue
        seen.add(coset)
        out.append(twist_bijection(S, H, g))
    return out


# --- the verification corpus ---------------------------------------------------


def corpus_automorphisms(G: PermGroup) -> list[tuple[str, dict[Perm, Perm], int]]:
    """Identity plus order-2 automorphisms used by the coset suite."""
    ident = {x: x for x in G.elements}
    out = [("id", ident, 1)]
    name = G.name
    fc = perm.from_cycles
    if name == "C6":
        r = G.generators[0]
        out.append(("inversion", perm.automorphism_from_images(G, [perm.inv(r)]), 2))
    elif name in ("S3", "S4", "A4"):
        t = fc([(1, 2)], G.degree)
        label = "conj(1 2)" + (" outer" if name == "A4" else "")
        out.append((label, perm.inner_automorphism(G, t), 2))
        if name == "S4":
            out.append(("conj(1 2)(3 4)", perm.inner_automorphism(G, fc([(1, 2), (3, 4)], 4)), 2))
    elif name == "D8":
        r, s = G.generators
        out.append(("conj s", perm.inner_automorphism(G, s), 2))
        out.append(("r->r^-1, s->rs", perm.automorphism_from_images(G, [perm.inv(r), mul(r, s)]), 2))
    elif name == "Q8":
        i, j = G.generators
        out.append(("swap i,j", perm.automorphism_from_images(G, [j, i]), 2))
        out.append(("conj i", perm.inner_automorphism(G, i), 2))
    return out


CORPUS_GROUPS = ("C6", "S3", "A4", "S4", "D8", "Q8")


def corpus(names=CORPUS_GROUPS) -> Iterator[tuple[PermGroup, str, SemidirectGroup]]:
    for name in names:
        G = perm.named_group(name)
        for label, phi, m in corpus_automorphisms(G):
            if perm.automorphism_order(G, phi) != m:
                raise GroupError(f"automorphism {label} of {name} has the wrong order")
            yield G, label, perm.semidirect_with_automorphism(G, phi, m)


def run_coset_suite(names=CORPUS_GROUPS) -> dict:
    """Exhaustive multiplicity and norm-bound checks over the corpus."""
    reports: list[MultiplicityReport] = []
    norm_checks = norm_failures = 0
    worst_norm_ratio = 0.0
    equality_failures = 0
    for G, label, S in corpus(names):
        rhos = irr_coset(S)
        data = []
        for H in perm.subgroup_classes(G):
            for sub in subcoset_data(S, H):
                for ci, chi in enumerate(sub.characters):
                    data.append((sub, chi, coset_induce(sub, chi)))
                    for ri, rho in enumerate(rhos):
                        rep = verify_multiplicity_lemma(
                            sub, chi, rho, group=G.name, automorphism=label, chi_index=ci, rho_index=ri
                        )
                        reports.append(rep)
                        if S.auto_order == 1 and sub.g == G.identity and abs(rep.lhs - rep.rhs) > TOL:
                            equality_failures += 1
        for i in range(len(data)):
            for j in range(i, len(data)):
                value = abs(gset_inner_product(data[i][2], data[j][2]))
                norm_checks += 1
                worst_norm_ratio = max(worst_norm_ratio, value / G.order)
                if value > G.order + TOL:
                    norm_failures += 1
    failures = sum(not r.holds for r in reports)
    return {
        "reports": reports,
        "lemma_instances": len(reports),
        "lemma_failures": failures,
        "equality_failures": equality_failures,
        "norm_instances": norm_checks,
        "norm_failures": norm_failures,
        "worst_norm_ratio": worst_norm_ratio,
    }


def pi_image_check(S: SemidirectGroup, g: Perm) -> Mapping[str, float]:
    """Induce the constant 1 from the trivial subcoset at ``g``; it must equal ``pi_{g phi}``."""
    from .gset import indicator_pi

    H = perm.enumerate_group([], S.base.degree)
    sub = twist_bijection(S, H, g)
    one = GFunction(sub.gamma.source, np.ones(1), invariant=True)
    induced = coset_induce(sub, one)
    pi = indicator_pi(sub.gamma.target, S.element(g, 1))
    return {"max_diff": induced.max_abs_diff(pi), "norm": gset_inner_product(induced, induced).real}
