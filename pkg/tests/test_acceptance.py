"""One test per acceptance criterion; the summary prints a PASS/FAIL line for each.

Pinned tolerances: rational equality for alpha, 1e-9 for G-set identities,
1e-6 for character-table rounding and the GL_2 restriction identity.
"""

import json
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np

from charbound import bounds, chartab, coset, gl2, perm, roots, unipotent
from charbound.bounds import Radical

import gset_identities
from centralizer_oracle import centralizer_counts, q_log
from gset_instances import instances
from reference_tables import reference_table
from test_bounds import compositions, gl_alpha_oracle

GSET_TOL = 1e-9
TABLE_TOL = 1e-6


def test_criterion_1_constant_ledger(acceptance):
    acceptance(1, "constants --rank 1 gives f1=4, f2'=32, f3=6, f=96*sqrt(2), f_ceil=136 exactly, < 1 s")
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "charbound.cli", "constants", "--rank", "1"], capture_output=True, text=True
    )
    elapsed = time.perf_counter() - start
    assert proc.returncode == 0, proc.stderr
    data = json.loads(proc.stdout)
    assert (data["f1"], data["f2_prime"], data["f3"], data["f_exact"], data["f_ceil"]) == (4, 32, "6", "96*sqrt(2)", 136)
    c = bounds.f_of_group("A1")
    W, D, B = c.weyl_order, c.D, c.B
    assert c.f1 == W**2
    assert c.f2_prime == B**4 * W
    assert c.f3 == Radical.half_power(3, D) * B
    assert c.f == Radical.half_power(3, D) * B**3 * Radical.half_power(W, 5) == Radical(96, 2)
    assert elapsed < 1.0, f"{elapsed:.2f} s"


def test_criterion_2_alpha_oracle(acceptance):
    acceptance(2, "alpha equals the partition-arithmetic oracle for every GL_n Levi, n <= 5, < 5 s")
    start = time.perf_counter()
    checked = 0
    for n in range(1, 6):
        if n == 1:
            continue  # GL_1 has no Levi other than itself
        R = roots.build_root_system(f"A{n - 1}")
        for L in roots.levi_classes(R):
            for J in L.members:
                blocks = [b for b in _blocks_of(J, n)]
                assert bounds.alpha(R, J).value == gl_alpha_oracle(blocks)
                checked += 1
    assert checked == sum(1 for n in range(2, 6) for _ in compositions(n))
    assert bounds.alpha(roots.build_root_system("A3"), (0, 2)).value == Fraction(1, 2)
    assert bounds.alpha(roots.build_root_system("A2"), (0,)).value == Fraction(1, 2)
    assert time.perf_counter() - start < 5.0


def _blocks_of(J, n):
    J = set(J)
    out, size = [], 1
    for i in range(n - 1):
        if i in J:
            size += 1
        else:
            out.append(size)
            size = 1
    out.append(size)
    return out


def test_criterion_3_classical_dimension_oracle(acceptance):
    acceptance(3, "class dims n^2 - sum(lambda'^2) match exhaustive GL_n(F_q) centralizers, n <= 4, q in {2,3}, < 60 s")
    start = time.perf_counter()
    failures = []
    for q in (2, 3):
        for n in range(1, 5):
            _, gl_order = centralizer_counts((1,) * n, q)
            assert gl_order == math.prod(q**n - q**k for k in range(n))
            ours = {u.partition: u.dim for u in unipotent.unipotent_classes(f"A{n - 1}")} if n > 1 else {(1,): 0}
            for lam in unipotent.partitions(n):
                commuting, cent = centralizer_counts(lam, q)
                d = q_log(commuting, q)
                # the centralizer is the unit group of the commutant algebra, which is
                # dense in it: its order has q-degree d, and the class has degree n^2 - d
                ok = d is not None and (1 - 1 / q) ** n * q**d <= cent <= q**d and gl_order % cent == 0
                conj = unipotent.conjugate_partition(lam)
                expected = n * n - sum(c * c for c in conj)
                if not ok or n * n - d != expected or ours[lam] != expected:
                    failures.append((q, lam, commuting, cent))
    elapsed = time.perf_counter() - start
    assert not failures, failures
    assert elapsed < 60.0


def test_criterion_4_gset_suite(acceptance):
    acceptance(4, "adjunction, pi-image, transitivity, reconstruction, orthogonality on >= 100 instances, dev < 1e-9, < 30 s")
    start = time.perf_counter()
    insts = instances(120)
    assert len(insts) >= 100
    assert all(inst.X.group.order <= 48 for inst in insts)
    worst = gset_identities.run_all(insts)
    assert {"adjunction", "pi_image", "transitivity", "reconstruction", "orthogonality"} <= set(worst)
    assert max(worst.values()) < GSET_TOL, worst
    assert time.perf_counter() - start < 30.0


def test_criterion_5_coset_suite(acceptance):
    acceptance(5, "multiplicity lemma and norm <= |G| over the corpus, equality for phi = id and g = 1, < 120 s")
    start = time.perf_counter()
    res = coset.run_coset_suite()
    assert res["lemma_instances"] > 0 and res["norm_instances"] > 0
    assert res["lemma_failures"] == 0
    assert res["norm_failures"] == 0
    assert res["equality_failures"] == 0
    assert time.perf_counter() - start < 120.0


def test_criterion_6_character_tables(acceptance):
    acceptance(6, "orthogonality and degree sums on the corpus, reference tables for S3, D8, Q8, A4, S4, < 30 s")
    start = time.perf_counter()
    for name in coset.CORPUS_GROUPS:
        G = perm.named_group(name)
        t = chartab.character_table(G)
        X = t.matrix
        sizes = np.asarray(G.classes.class_sizes, dtype=float)
        gram = (X * sizes) @ X.conj().T / G.order
        assert np.abs(gram - np.round(gram.real)).max() < TABLE_TOL
        assert (np.round(gram.real) == np.eye(len(sizes))).all()
        cols = X.conj().T @ X
        assert np.abs(cols - np.diag(G.order / sizes)).max() < TABLE_TOL * G.order
        degs = X[:, 0]
        assert np.abs(degs - np.round(degs.real)).max() < TABLE_TOL
        assert sum(int(round(d.real)) ** 2 for d in degs) == G.order
    for name in ["S3", "D8", "Q8", "A4", "S4"]:
        G = perm.named_group(name)
        ours = sorted(tuple(np.round(r.values, 6)) for r in chartab.character_table(G))
        ref = sorted(tuple(np.round(r, 6)) for r in reference_table(G))
        assert ours == ref, name
    assert time.perf_counter() - start < 30.0


def test_criterion_7_gl2_harness(acceptance):
    acceptance(7, "GL_2(q), q in {3,5,7}: table invariants, character bound, restriction identity, series bound, centralizer lemma, < 60 s")
    start = time.perf_counter()
    bound = bounds.f_of_rank(1).ceil
    assert bound == 136
    for q in (3, 5, 7):
        t = gl2.gl2_character_table(q)  # raises on any invariant failure
        gl2.validate_table(t)
        for levi in ("split", "nonsplit"):
            rep = gl2.check_character_bound(t, levi)
            assert rep.instances > 0 and rep.failures == 0
        rep = gl2.check_restriction_identity(t)
        assert rep.failures == 0 and rep.worst_margin < TABLE_TOL
        assert gl2.check_series_bound(t).failures == 0
        assert gl2.harish_chandra_norms(t).failures == 0
    lemma = gl2.check_centralizer_lemma((3, 5, 7))
    assert lemma.instances == 4 + 16 + 36 and lemma.failures == 0
    assert time.perf_counter() - start < 60.0


def test_criterion_8_weyl_data(acceptance):
    acceptance(8, "enumerated |W| equals the degree product for every type of rank <= 4; Levi counts A2/A3/B2 = 3/5/4, < 30 s")
    start = time.perf_counter()
    labels = ["x".join(ms) for ms in bounds.type_multisets(4)] + ["C2"]
    for label in labels:
        W = roots.weyl_group(roots.build_root_system(label), check=False)
        assert W.elements.order == W.order, label
    counts = [len(roots.levi_classes(roots.build_root_system(x))) for x in ("A2", "A3", "B2")]
    assert counts == [3, 5, 4]
    assert time.perf_counter() - start < 30.0
