import hashlib
import json
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from charbound import unipotent as up
from charbound.roots import RootSystemError
from charbound.unipotent import UnipotentDataError, fuse_to_ambient, unipotent_classes
from modp import (
    centralizer_dim,
    isometry_algebra,
    jordan_type,
    rational_unipotent_classes,
    symplectic_transvections,
)

P = 7  # good characteristic for every classical type


def by_partition(label, **kw):
    return {(u.partition, u.variant): u for u in unipotent_classes(label, **kw)}


def test_a3_classes():
    cls = by_partition("A3")
    assert len(cls) == 5
    assert cls[((2, 1, 1), 0)].dim == 6
    assert cls[((4,), 0)].dim == 12 and cls[((4,), 0)].comp_order == 4
    assert cls[((2, 2), 0)].comp_order == 2


def test_a1_regular():
    reg = by_partition("A1")[((2,), 0)]
    assert (reg.dim, reg.comp_order) == (2, 2)


@pytest.mark.parametrize(
    "label,count",
    [("A1", 2), ("A4", 7), ("B2", 4), ("B3", 7), ("C2", 4), ("C3", 8), ("D4", 12), ("D5", 16), ("G2", 5), ("F4", 16)],
)
def test_class_counts(label, count):
    assert len(unipotent_classes(label)) == count


def test_trivial_and_regular_rows():
    for label in ["A3", "B3", "C4", "D5", "G2", "F4", "E6", "E7", "E8"]:
        rows = unipotent_classes(label)
        top = up.max_dim(label)
        dims = sorted(u.dim for u in rows)
        assert dims[0] == 0 and dims[-1] == top
        assert dims.count(top) == 1
        triv = min(rows, key=lambda u: u.dim)
        assert triv.comp_order == 1


def test_subregular_below_regular():
    for label in ["A2", "B2", "C3", "D4", "G2", "F4"]:
        dims = sorted({u.dim for u in unipotent_classes(label)}, reverse=True)
        assert dims[1] < dims[0]


def _profile(label):
    return Counter((u.dim, u.comp_order) for u in unipotent_classes(label))


def test_isomorphic_types_agree():
    assert _profile("B2") == _profile("C2")
    # Spin6 = SL4
    d3 = Counter()
    for lam in up.partitions(6):
        if up.is_orthogonal(lam):
            k = 2 if up.is_very_even(lam) else 1
            d3[(15 - up.dim_centralizer_o(lam), up.comp_order_spin(lam))] += k
    assert d3 == _profile("A3")


def test_triality_orbits_agree():
    cls = by_partition("D4")
    orbits = [
        [((5, 1, 1, 1), 0), ((4, 4), 1), ((4, 4), 2)],
        [((3, 1, 1, 1, 1, 1), 0), ((2, 2, 2, 2), 1), ((2, 2, 2, 2), 2)],
    ]
    for orbit in orbits:
        assert len({(cls[k].dim, cls[k].comp_order) for k in orbit}) == 1


@pytest.mark.parametrize(
    "label,kind,size",
    [("B2", "O", 5), ("C2", "S", 4), ("B3", "O", 7), ("C3", "S", 6), ("D4", "O", 8), ("B4", "O", 9), ("C4", "S", 8)],
)
def test_class_dims_match_lie_algebra_centralizers(label, kind, size):
    g = isometry_algebra(kind, size, P)
    nil = isometry_algebra(kind, size, P, nilpotent=True)
    assert len(g) == up.group_dimension(label[0], int(label[1:]))
    rng = np.random.default_rng(5)
    seen = {}
    for _ in range(500):
        mask = rng.random(len(nil)) < rng.uniform(0.05, 0.6)
        coef = rng.integers(1, P, len(nil)) * mask
        N = sum(c * B for c, B in zip(coef, nil)) % P
        lam = jordan_type(N, P)
        if lam not in seen:
            seen[lam] = len(g) - centralizer_dim(g, N, P)
    ours = {u.partition: u.dim for u in unipotent_classes(label)}
    assert set(seen) == set(ours)
    assert all(ours[lam] == d for lam, d in seen.items())


def test_sp4_component_orders_match_rational_class_counts():
    order, counts = rational_unipotent_classes(symplectic_transvections(4, 3), 3)
    assert order == 51840
    ours = {u.partition: u.comp_order for u in unipotent_classes("C2")}
    assert counts == ours


@pytest.mark.parametrize("q", [3, 5])
def test_sl2_regular_centralizer_is_2q(q):
    order, counts = rational_unipotent_classes(symplectic_transvections(2, q), q)
    assert order == q * (q * q - 1)
    assert counts[(2,)] == 2
    # each of the two classes has (q^2 - 1) / 2 elements, so |C(u)| = 2q
    assert order // ((q * q - 1) // 2) == 2 * q


def test_type_a_component_orders():
    for n in range(2, 7):
        for u in unipotent_classes(f"A{n - 1}"):
            assert n % u.comp_order == 0
        assert all(u.comp_order == 1 for u in unipotent_classes(f"A{n - 1}", convention="gl"))


def test_gl_convention_only_for_a_and_b():
    assert {u.comp_order for u in unipotent_classes("B2", convention="gl")} <= {1, 2}
    with pytest.raises(RootSystemError):
        unipotent_classes("C2", convention="gl")
    with pytest.raises(ValueError):
        unipotent_classes("A2", convention="adjoint")


def test_d3_redirects_to_a3():
    with pytest.raises(RootSystemError):
        unipotent_classes("D3")


def test_twist_stability():
    assert all(u.frob_stable for u in unipotent_classes("D4"))
    # no very even partitions of 10, so the graph twist fixes every class of D5
    assert all(u.frob_stable for u in unipotent_classes("D5", twist=2))
    moved = sorted(u.label for u in unipotent_classes("D4", twist=2) if not u.frob_stable)
    assert moved == ["2,2,2,2I", "2,2,2,2II", "4,4I", "4,4II"]
    d4 = [u for u in unipotent_classes("D4", twist=3) if not u.frob_stable]
    assert len(d4) == 6
    assert all(u.frob_stable for u in unipotent_classes("A3", twist=2))


def test_very_even_twins_exactly():
    for n in (4, 6):
        twins = [u for u in unipotent_classes(f"D{n}", twist=2) if not u.frob_stable]
        assert twins and all(up.is_very_even(u.partition) for u in twins)
        assert len(twins) == 2 * sum(1 for lam in up.partitions(2 * n) if up.is_very_even(lam))


def test_g2_table_has_regular_row():
    assert 12 in {u.dim for u in unipotent_classes("G2")}
    assert up.coverage("G2") == "complete"
    assert up.coverage("E8") == "partial"
    assert up.coverage("C3") == "complete"


# --- table loading -------------------------------------------------------------------


def _write_table(tmp_path, rows, manifest=True, name="table.json"):
    path = tmp_path / name
    raw = json.dumps(rows).encode()
    path.write_bytes(raw)
    if manifest:
        (tmp_path / (path.stem + ".manifest.json")).write_text(
            json.dumps({"sha256": hashlib.sha256(raw).hexdigest(), "coverage": {}})
        )
    return path


G2_ROWS = [
    {"type": "G2", "label": "1", "dim": 0, "comp_order": 1},
    {"type": "G2", "label": "A1", "dim": 6, "comp_order": 1},
    {"type": "G2", "label": "G2", "dim": 12, "comp_order": 1},
]


def test_load_custom_table(tmp_path):
    table = up.load_exceptional_tables(_write_table(tmp_path, G2_ROWS))
    assert [u.dim for u in table["rows"]["G2"]] == [0, 6, 12]


def test_checksum_mismatch(tmp_path):
    path = _write_table(tmp_path, G2_ROWS)
    path.write_text(json.dumps(G2_ROWS[::-1]))
    with pytest.raises(UnipotentDataError, match="checksum"):
        up.load_exceptional_tables(path)


def test_empty_file(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("")
    with pytest.raises(UnipotentDataError):
        up.load_exceptional_tables(path)
    with pytest.raises(UnipotentDataError):
        up.load_exceptional_tables(_write_table(tmp_path, [], name="empty_list.json"))


def test_tampered_regular_row(tmp_path):
    rows = [dict(r) for r in G2_ROWS]
    rows[-1]["dim"] = 10
    with pytest.raises(UnipotentDataError, match="regular"):
        up.load_exceptional_tables(_write_table(tmp_path, rows, name="tampered.json"))


def test_missing_trivial_row(tmp_path):
    with pytest.raises(UnipotentDataError, match="trivial"):
        up.load_exceptional_tables(_write_table(tmp_path, G2_ROWS[1:], name="no_triv.json"))


def test_missing_file(tmp_path):
    with pytest.raises(UnipotentDataError):
        up.load_exceptional_tables(tmp_path / "nope.json")


def test_shipped_checksum_matches():
    from importlib import resources

    pkg = resources.files("charbound.data")
    raw = pkg.joinpath("exceptional_unipotent.json").read_bytes()
    manifest = json.loads(pkg.joinpath("exceptional_unipotent.manifest.json").read_text())
    assert manifest["sha256"] == hashlib.sha256(raw).hexdigest()


# --- fusion --------------------------------------------------------------------------


def test_fusion_type_a_examples():
    assert fuse_to_ambient([(2,), (2,)], (0, 2), "A3").partition == (2, 2)
    assert fuse_to_ambient([(2,), (1,)], (0,), "A2").partition == (2, 1)


def test_fusion_gl1_in_sp4():
    # J = {alpha_1}: GL2 block, no tail; a GL1 torus factor is the shape with J empty
    shape = up.levi_shape("C2", ())
    assert shape.blocks == (1, 1) and shape.tail == 0
    u = fuse_to_ambient([(1,), (1,)], shape, "C2")
    assert u.partition == (1, 1, 1, 1)
    assert fuse_to_ambient([(2,)], (0,), "C2").partition == (2, 2)


def test_fusion_gl1_in_sp4_explicit_matrix():
    # GL1 x Sp2 inside Sp4 over F3: a in GL1 acts as diag(a, a^-1) on a hyperbolic pair
    p = 3
    M = np.array([[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]]) % p
    j2 = np.array([[1, 1], [0, 1]])
    g = np.eye(4, dtype=np.int64)
    g[1:3, 1:3] = j2  # unipotent in the Sp2 tail on the middle hyperbolic pair
    assert ((g.T @ M @ g - M) % p == 0).all()
    assert jordan_type((g - np.eye(4, dtype=np.int64)) % p, p) == (2, 1, 1)
    # the GL1 factor with label (1) contributes the two outer 1's
    assert fuse_to_ambient([(1,), (2,)], (1,), "C2").partition == (2, 1, 1)


def test_fusion_orthogonal_tails():
    # B3 Levi GL1 x B2: (1) doubled plus (3,1,1) in SO5
    assert fuse_to_ambient([(1,), (3, 1, 1)], (1, 2), "B3").partition == (3, 1, 1, 1, 1)
    # D4 with both fork nodes and alpha_2: GL1 x D3 tail
    u = fuse_to_ambient([(1,), (3, 1, 1, 1)], (1, 2, 3), "D4")
    assert u.partition == (3, 1, 1, 1, 1, 1)


def test_fusion_very_even_variant_follows_end():
    a = fuse_to_ambient([(2,), (2,)], (0, 2), "D4")
    b = fuse_to_ambient([(2,), (2,)], (0, 3), "D4")
    assert a.partition == b.partition == (2, 2, 2, 2)
    assert {a.variant, b.variant} == {1, 2}


def test_fusion_errors():
    with pytest.raises(RootSystemError):
        fuse_to_ambient([(2,)], (0,), "G2")
    with pytest.raises(RootSystemError):
        fuse_to_ambient([(3,)], (0,), "A2")
    with pytest.raises(RootSystemError):
        fuse_to_ambient([(2,), (2,), (1,)], (0, 2), "A3")
    with pytest.raises(RootSystemError):
        fuse_to_ambient([(1,), (2, 1, 1, 1)], (1, 2), "B3")  # (2,1,1,1) is not orthogonal


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3))
@settings(max_examples=60, deadline=None)
def test_type_a_fusion_is_multiset_union(blocks):
    n = sum(blocks)
    if n < 2:
        return
    from charbound.roots import gl_blocks_subset

    J = gl_blocks_subset(n, blocks)
    parts = [(b,) for b in blocks]
    u = fuse_to_ambient(parts, J, f"A{n - 1}")
    assert u.partition == tuple(sorted(blocks, reverse=True))
    v = fuse_to_ambient(parts[::-1], gl_blocks_subset(n, blocks[::-1]), f"A{n - 1}")
    assert v.partition == u.partition


@given(st.integers(1, 9))
@settings(max_examples=20, deadline=None)
def test_type_a_dim_formula(n):
    for u in unipotent_classes(f"A{n - 1}") if n > 1 else []:
        lam = u.partition
        conj = up.conjugate_partition(lam)
        assert u.dim == n * n - sum(c * c for c in conj)
        assert u.dim == n * n - sum((2 * i + 1) * x for i, x in enumerate(lam))
