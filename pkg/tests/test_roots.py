import pytest

from charbound import roots
from charbound.roots import RootSystemError, build_root_system, levi_classes, weyl_group

SMALL_TYPES = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2", "F4",
               "A1xA1", "A1xG2", "A2xB2", "A1xA1xA1"]


def support_roots(R, J):
    J = set(J)
    return frozenset(i for i, r in enumerate(R.roots) if all(c == 0 or k in J for k, c in enumerate(r)))


def brute_force_classes(R):
    W = weyl_group(R).elements
    subsets = [frozenset(j for j in range(R.rank) if mask >> j & 1) for mask in range(1 << R.rank)]
    phi = {J: support_roots(R, J) for J in subsets}
    by_roots = {}
    for J in subsets:
        by_roots.setdefault(phi[J], []).append(J)
    parent = {J: J for J in subsets}

    def find(J):
        while parent[J] != J:
            J = parent[J]
        return J

    for J in subsets:
        for w in W.elements:
            image = frozenset(w[i] for i in phi[J])
            for K in by_roots.get(image, []):
                parent[find(K)] = find(J)
    return {frozenset(K for K in subsets if find(K) == find(J)) for J in subsets}


@pytest.mark.parametrize("label", SMALL_TYPES)
def test_weyl_order_matches_enumeration(label):
    R = build_root_system(label)
    W = weyl_group(R, check=False)
    assert W.elements.order == W.order


@pytest.mark.parametrize("label,expected", [("A1", 2), ("A2", 6), ("B2", 8), ("G2", 12), ("F4", 1152),
                                            ("D4", 192), ("E6", 51840), ("E7", 2903040), ("E8", 696729600)])
def test_weyl_order_values(label, expected):
    assert weyl_group(build_root_system(label), check=False).order == expected


@pytest.mark.parametrize("label,count", [("A2", 3), ("A3", 5), ("B2", 4), ("G2", 4), ("D4", 11), ("F4", 12),
                                         ("E6", 17), ("E7", 32), ("E8", 41)])
def test_levi_class_counts(label, count):
    assert len(levi_classes(build_root_system(label))) == count


@pytest.mark.parametrize("label", ["A3", "B3", "C3", "D4", "G2", "F4", "A1xA1", "A1xG2", "A4", "B4"])
def test_levi_conjugacy_matches_brute_force(label):
    R = build_root_system(label)
    ours = {frozenset(frozenset(J) for J in L.members) for L in levi_classes(R)}
    assert ours == brute_force_classes(R)


def test_type_a_levi_classes_are_compositions():
    # classes of GL_n Levis correspond to partitions of n
    for n in range(2, 7):
        R = build_root_system(f"A{n - 1}")
        p = sum(1 for _ in _partitions(n))
        assert len(levi_classes(R)) == p


def _partitions(n, m=None):
    m = n if m is None else m
    if n == 0:
        yield ()
        return
    for k in range(min(n, m), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


@pytest.mark.parametrize("label,n", [("A3", 6), ("B3", 9), ("C3", 9), ("D4", 12), ("G2", 6), ("F4", 24), ("E6", 36)])
def test_positive_roots_and_dimension(label, n):
    R = build_root_system(label)
    assert len(R.positive_roots) == n
    assert R.dimension == 2 * n + R.rank


def test_levi_type_names():
    B3 = build_root_system("B3")
    assert roots.levi_type_name(B3, [1, 2]) == "B2"
    C3 = build_root_system("C3")
    assert roots.levi_type_name(C3, [1, 2]) == "B2"
    C4 = build_root_system("C4")
    assert roots.levi_type_name(C4, [1, 2, 3]) == "C3"
    B4 = build_root_system("B4")
    assert roots.levi_type_name(B4, [1, 2, 3]) == "B3"
    E6 = build_root_system("E6")
    assert roots.levi_type_name(E6, [0, 1, 2, 3, 4]) == "D5"
    assert roots.levi_type_name(E6, [0, 2, 3, 4, 5]) == "A5"
    assert roots.levi_type_name(E6, [0, 1, 3]) == "A1xA2"
    F4 = build_root_system("F4")
    assert roots.levi_type_name(F4, [0, 1, 2]) == "B3"
    assert roots.levi_type_name(F4, [1, 2, 3]) == "C3"


def test_torus_and_full():
    R = build_root_system("B2")
    cls = levi_classes(R)
    assert cls[0].is_torus and cls[-1].is_full
    assert cls[-1].semisimple_rank == 2


def test_twist_stability():
    A3 = build_root_system("A3", roots.standard_twist("A3", 2))
    assert all(L.twist_stable for L in levi_classes(A3))
    D4 = build_root_system("D4", roots.standard_twist("D4", 3))
    unstable = [L.conjugacy_id for L in levi_classes(D4) if not L.twist_stable]
    # triality permutes the three A1xA1 classes and the three A3 classes
    assert "{1,2}" not in unstable and "{1,3}" in unstable
    assert len(unstable) == 6


def test_stabilizer_orders():
    assert roots.torus_stabilizer_order(["a", "a", "a"]) == 6
    assert roots.stabilizer_order_of_profile((2, 1)) == 2
    assert roots.stabilizer_order_of_profile((1, 1, 1)) == 1
    with pytest.raises(ValueError):
        roots.torus_stabilizer_order([])


def test_gl_blocks_subset():
    assert roots.gl_blocks_subset(4, [2, 2]) == (0, 2)
    assert roots.gl_blocks_subset(5, [3, 1, 1]) == (0, 1)
    with pytest.raises(RootSystemError):
        roots.gl_blocks_subset(4, [2, 1])


@pytest.mark.parametrize("bad", ["A0", "B1", "D2", "G3", "F5", "E5", "E9", "X2", "A9"])
def test_invalid_types_rejected(bad):
    with pytest.raises(RootSystemError):
        build_root_system(bad)


def test_bad_twists_rejected():
    with pytest.raises(RootSystemError):
        build_root_system("B3", (2, 1, 0))
    with pytest.raises(RootSystemError):
        build_root_system("A3", (0, 0, 1))
    with pytest.raises(RootSystemError):
        roots.standard_twist("B3", 2)


def test_reflections_are_involutions():
    R = build_root_system("G2")
    for i in range(R.rank):
        s = R.reflection_perm(i)
        assert all(s[s[k]] == k for k in range(len(s)))
        simple = R.simple_roots[i]
        assert R.roots[s[simple]] == tuple(-c for c in R.roots[simple])


def test_rank_cap():
    with pytest.raises(RootSystemError):
        levi_classes(build_root_system("A5xA4"))


@pytest.mark.parametrize("label,long_nodes", [("B3", {0, 1}), ("C3", {2}), ("G2", {1}), ("F4", {0, 1})])
def test_long_roots_follow_bourbaki(label, long_nodes):
    a = build_root_system(label).cartan_matrix
    n = len(a)
    # a[i][j] / a[j][i] = |alpha_j|^2 / |alpha_i|^2 on an edge
    length = {0: 1.0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and a[i][j] and j not in length:
                length[j] = length[i] * a[i][j] / a[j][i]
                stack.append(j)
    top = max(length.values())
    assert {i for i, v in length.items() if v == top} == long_nodes
