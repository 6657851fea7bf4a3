import itertools
import random

import pytest

from cordsheaf.braid import BraidWord, MeridianWord, component_map, geometry
from cordsheaf.cordaug import (AugCandidate, DilationParam, apply_dilation,
                               canonical_form, check_relations,
                               degenerate_components, eval_broken_cord,
                               index_sets, is_generic, loop_matrix,
                               meridian_operator, passes_fast)
from cordsheaf.field import FieldSpec
from cordsheaf.linalg import Matrix

F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)
F5 = FieldSpec.prime(5)

UNLINK3 = BraidWord(3, [])
HOPF = BraidWord(2, [1, 1])


def unlink3_candidate(field, e12, e13, e32, e33):
    cm = component_map(UNLINK3)
    one = field.one()
    R = Matrix.from_rows(field, [[0, e12, e13], [0, 0, 0], [0, e32, e33]])
    mu3 = one - field.scalar(e33)
    return AugCandidate(field, cm, R, [one, one, one], [one, one, mu3])


GOLDEN = unlink3_candidate(F5, 1, 1, 1, 2)


def random_candidate(field, braid, rng, normalize=True):
    cm = component_map(braid)
    n = braid.n
    units = list(field.elements(nonzero=True))
    mu = [rng.choice(units) for _ in range(cm.r)]
    lam = [rng.choice(units) for _ in range(cm.r)]
    rows = [[field.scalar(rng.randrange(field.p)) for _ in range(n)] for _ in range(n)]
    if normalize:
        for i in range(n):
            rows[i][i] = field.one() - mu[cm.component(i + 1) - 1]
    return AugCandidate(field, cm, Matrix(field, rows), lam, mu)


def test_unit_constraints():
    cm = component_map(UNLINK3)
    with pytest.raises(ValueError):
        AugCandidate(F5, cm, Matrix.zeros(F5, 3, 3), [F5.zero()] * 3, [F5.one()] * 3)


def test_golden_candidate_passes():
    report = check_relations(GOLDEN, UNLINK3)
    assert report.ok, report.failures
    sets = index_sets(GOLDEN)
    assert sets.I_dprime == {2} and sets.J_dprime == {1}
    assert not is_generic(GOLDEN)
    assert degenerate_components(GOLDEN) == []


def test_normalization_failure_reported():
    bad = AugCandidate(F5, component_map(UNLINK3),
                       Matrix.from_rows(F5, [[3, 1, 1], [0, 0, 0], [0, 1, 2]]),
                       GOLDEN.lam, GOLDEN.mu)
    report = check_relations(bad, UNLINK3)
    assert not report.ok
    assert report.failures[0]["family"] == "normalization"


def test_unknot_relations():
    braid = BraidWord(1, [])
    cm = component_map(braid)
    seen = set()
    for lam in F3.elements(nonzero=True):
        for mu in F3.elements(nonzero=True):
            cand = AugCandidate(F3, cm, Matrix(F3, [[F3.one() - mu]]), [lam], [mu])
            if check_relations(cand, braid).ok:
                seen.add((lam.value, mu.value))
    # the longitude of the unknot is trivial, so (lambda - 1)(1 - mu) = 0
    assert seen == {(1, 1), (1, 2), (2, 1)}


def test_meridian_operator_inverse_property():
    rng = random.Random(0)
    for _ in range(400):
        cand = random_candidate(F5, UNLINK3, rng)
        for t in (1, 2, 3):
            n_pos = meridian_operator(cand, t, 1)
            n_neg = meridian_operator(cand, t, -1)
            assert (n_pos * n_neg).is_identity()
            assert loop_matrix(cand, MeridianWord.generator(t)) == n_pos


def test_meridian_operator_trivial_for_zero_column():
    assert meridian_operator(GOLDEN, 1, 1).is_identity()


def test_golden_subrep_matrix():
    # operator of the third meridian restricted to the span of columns 2, 3
    n3 = meridian_operator(GOLDEN, 3, 1)
    r2, r3 = GOLDEN.R.column_matrix(1), GOLDEN.R.column_matrix(2)
    assert n3 * r2 == r2 - r3  # eps_32 = 1
    assert n3 * r3 == r3.scaled(F5.one() - F5.scalar(2))


def test_loop_matrix_multiplicative():
    rng = random.Random(1)
    for _ in range(200):
        cand = random_candidate(F5, UNLINK3, rng)
        w1 = MeridianWord([(rng.randint(1, 3), rng.choice([1, -1])) for _ in range(3)])
        w2 = MeridianWord([(rng.randint(1, 3), rng.choice([1, -1])) for _ in range(3)])
        assert loop_matrix(cand, w1 * w2) == loop_matrix(cand, w1) * loop_matrix(cand, w2)
    assert loop_matrix(GOLDEN, MeridianWord.identity()).is_identity()
    w = MeridianWord.generator(2) * MeridianWord.generator(2).inverse()
    assert loop_matrix(GOLDEN, w).is_identity()


def test_eval_broken_cord_examples():
    assert eval_broken_cord(GOLDEN, 1, MeridianWord.identity(), 2) == GOLDEN.entry(1, 2)
    mu3 = GOLDEN.mu[2]
    got = eval_broken_cord(GOLDEN, 3, MeridianWord.generator(3), 3)
    assert got == mu3 * (F5.one() - mu3)
    # eps_12 - eps_13*eps_32 = 1 - 1 = 0
    assert eval_broken_cord(GOLDEN, 1, MeridianWord.generator(3), 2) == F5.zero()


def test_meridian_and_skein_families_are_identities():
    # with the diagonal forced from mu, the meridian and skein families hold
    # for arbitrary off-diagonal entries; this justifies the enumeration
    # fast path skipping them
    rng = random.Random(2)
    for _ in range(400):
        cand = random_candidate(F3, UNLINK3, rng)
        R = cand.R
        for t in (1, 2, 3):
            inserted = loop_matrix(cand, MeridianWord.generator(t)) * R
            for i in range(1, 4):
                for j in range(1, 4):
                    want = cand.entry(i, j)
                    got = inserted[i - 1, j - 1] + cand.entry(i, t) * cand.entry(t, j)
                    assert want == got
        for i in range(1, 4):
            row = loop_matrix(cand, MeridianWord.generator(i)) * R
            for j in range(1, 4):
                assert row[i - 1, j - 1] == cand.mu_of_strand(i) * cand.entry(i, j)
                assert row[j - 1, i - 1] == cand.entry(j, i) * cand.mu_of_strand(i)


def test_fast_path_equals_full_check():
    for braid, field in ((HOPF, F3), (BraidWord(2, []), F3),
                         (BraidWord(2, [1, 1, 1]), F3), (HOPF, F2)):
        cm = component_map(braid)
        geom = geometry(braid)
        units = list(field.elements(nonzero=True))
        everything = list(field.elements())
        n = braid.n
        fast_set, full_set = set(), set()
        for mu in itertools.product(units, repeat=cm.r):
            for lam in itertools.product(units, repeat=cm.r):
                off = [(i, j) for i in range(n) for j in range(n) if i != j]
                for vals in itertools.product(everything, repeat=len(off)):
                    rows = [[None] * n for _ in range(n)]
                    for i in range(n):
                        rows[i][i] = field.one() - mu[cm.component(i + 1) - 1]
                    for (i, j), v in zip(off, vals):
                        rows[i][j] = v
                    cand = AugCandidate(field, cm, Matrix(field, rows), lam, mu)
                    key = (cand.R, cand.lam, cand.mu)
                    if passes_fast(cand, geom):
                        fast_set.add(key)
                    if check_relations(cand, braid).ok:
                        full_set.add(key)
        assert fast_set == full_set


def test_dilation_action():
    d = DilationParam([F5.one(), F5.scalar(2), F5.scalar(3)])
    dilated = apply_dilation(GOLDEN, d)
    D = Matrix.from_rows(F5, [[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    assert dilated.R == D * GOLDEN.R * D.inverse()
    assert dilated.lam == GOLDEN.lam and dilated.mu == GOLDEN.mu
    assert check_relations(dilated, UNLINK3).ok
    # diagonal entries never move
    for i in range(1, 4):
        assert dilated.entry(i, i) == GOLDEN.entry(i, i)


def test_dilation_group_law():
    rng = random.Random(3)
    units = list(F5.elements(nonzero=True))
    for _ in range(300):
        cand = random_candidate(F5, UNLINK3, rng)
        d1 = DilationParam([rng.choice(units) for _ in range(3)])
        d2 = DilationParam([rng.choice(units) for _ in range(3)])
        lhs = apply_dilation(apply_dilation(cand, d1), d2)
        prod = DilationParam([a * b for a, b in zip(d1.d, d2.d)])
        assert lhs.R == apply_dilation(cand, prod).R


def test_canonical_form_idempotent_and_orbit_constant():
    units = list(F5.elements(nonzero=True))
    canon, witness = canonical_form(GOLDEN)
    assert witness.reduced
    again, _ = canonical_form(canon)
    assert again == canon
    # the whole reduced-dilation orbit lands on one representative
    reps = set()
    for d2 in units:
        for d3 in units:
            d = DilationParam([F5.one(), d2, d3])
            moved = apply_dilation(GOLDEN, d)
            rep, _ = canonical_form(moved)
            reps.add((rep.R, rep.lam, rep.mu))
    assert len(reps) == 1


def test_canonical_form_chain_linked_components():
    # orbit where component 2 touches only component 3, which touches 1:
    # the spanning-forest pinning must normalize both mixed entries
    cm = component_map(UNLINK3)
    one, zero = F3.one(), F3.zero()
    R = Matrix.from_rows(F3, [[0, 0, 0], [0, 0, 1], [1, 0, 0]])
    base = AugCandidate(F3, cm, R, [one] * 3, [one] * 3)
    assert check_relations(base, UNLINK3).ok
    reps = set()
    units = list(F3.elements(nonzero=True))
    for d2 in units:
        for d3 in units:
            moved = apply_dilation(base, DilationParam([one, d2, d3]))
            rep, _ = canonical_form(moved)
            reps.add((rep.R, rep.lam, rep.mu))
    assert len(reps) == 1


def test_row_column_vanishing_propagates_along_components():
    # on a knot braid every valid candidate has R = 0 as soon as one row
    # vanishes, matching the equivalences for cords of one component
    braid = BraidWord(2, [1, 1, 1])
    cm = component_map(braid)
    rng = random.Random(4)
    geom = geometry(braid)
    found = 0
    for _ in range(4000):
        cand = random_candidate(F3, braid, rng)
        if not passes_fast(cand, geom):
            continue
        found += 1
        rows_zero = [all(x.is_zero() for x in cand.R.row(i)) for i in range(2)]
        cols_zero = [all(x.is_zero() for x in cand.R.col(j)) for j in range(2)]
        assert rows_zero[0] == rows_zero[1]
        assert cols_zero[0] == cols_zero[1]
    assert found > 0


def test_degenerate_component_note():
    cm = component_map(UNLINK3)
    one = F3.one()
    cand = AugCandidate(F3, cm, Matrix.zeros(F3, 3, 3),
                        [F3.scalar(2), one, one], [one, one, one])
    report = check_relations(cand, UNLINK3)
    assert report.ok
    assert degenerate_components(cand) == [1, 2, 3]
    assert any("degenerate" in note for note in report.notes)


def test_candidate_json_roundtrip():
    data = GOLDEN.to_json()
    again = AugCandidate.from_json(data)
    assert again == GOLDEN
