import itertools
import random

from cordsheaf.braid import BraidWord, component_map
from cordsheaf.cordaug import AugCandidate
from cordsheaf.correspondence import aug_to_sheaf, extend_by_constant
from cordsheaf.field import FieldSpec
from cordsheaf.linalg import Matrix, Subspace
from cordsheaf.sheafmodel import (DegenerateSummand, SheafData, global_sections,
                                  is_reduced, is_stable, isomorphic,
                                  once_stabilized, stabilized_space, validate)

F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)
F5 = FieldSpec.prime(5)

UNLINK2 = BraidWord(2, [])
UNLINK3 = BraidWord(3, [])


def golden_sheaf(field=F5, e12=1, e13=1, e32=1, e33=2):
    cm = component_map(UNLINK3)
    one = field.one()
    R = Matrix.from_rows(field, [[0, e12, e13], [0, 0, 0], [0, e32, e33]])
    cand = AugCandidate(field, cm, R, [one] * 3,
                        [one, one, one - field.scalar(e33)])
    return cand, aug_to_sheaf(cand, UNLINK3)


def test_golden_sheaf_valid_and_matches_display():
    _, sheaf = golden_sheaf()
    assert validate(sheaf).ok
    assert sheaf.N == 3
    assert sheaf.M[0].is_identity()
    assert sheaf.M[1] == Matrix.from_rows(F5, [[1, 0, 0], [1, 1, 0], [0, 0, 1]])
    assert sheaf.M[2] == Matrix.from_rows(F5, [[1, 0, 0], [0, 1, 0], [0, -1, -1]])
    spans = [
        [[1, 0, 0], [0, -1, 1]],   # e12 = e13 = 1
        [[0, 1, 0], [0, 0, 1]],
        [[1, 0, 0], [0, -2, 1]],   # e33 = 2, e32 = 1
    ]
    for i, vectors in enumerate(spans):
        want = Subspace.from_vectors(F5, 3, [[F5.scalar(x) for x in v] for v in vectors])
        assert sheaf.W[i] == want


def test_corrupted_stalk_caught():
    _, sheaf = golden_sheaf()
    bad_w2 = Subspace.from_vectors(F5, 3, [
        [F5.one(), F5.zero(), F5.zero()],
        [F5.zero(), F5.one(), F5.zero()],
    ])
    bad = SheafData(F5, UNLINK3, 3, sheaf.M, (sheaf.W[0], bad_w2, sheaf.W[2]), ())
    report = validate(bad)
    assert not report.ok
    assert any(f["family"] == "meridian-triviality" for f in report.failures)


def test_global_sections_examples():
    _, sheaf = golden_sheaf()
    assert global_sections(sheaf).dim == 0
    # independent oracle: scan all 125 vectors of F_5^3
    count = 0
    for vec in itertools.product(F5.elements(), repeat=3):
        if all(w.contains(list(vec)) for w in sheaf.W):
            count += 1
    assert count == 1  # only the zero vector

    hyper = Subspace.from_vectors(F3, 2, [[F3.one(), F3.zero()]])
    same = SheafData(F3, UNLINK2, 2,
                     [Matrix.identity(F3, 2)] * 2, [hyper, hyper], ())
    assert global_sections(same) == hyper


def test_global_sections_fixed_by_meridians():
    rng = random.Random(0)
    checked = 0
    for _ in range(400):
        sheaf = _random_valid_sheaf(rng)
        gamma = global_sections(sheaf)
        for v in gamma.basis_columns():
            col = Matrix.column(sheaf.field, v)
            for m in sheaf.M:
                assert m * col == col
        checked += 1
    assert checked == 400


def _random_valid_sheaf(rng):
    """Valid objects drawn from the unlink enumerations plus constant fat."""
    from cordsheaf.moduli import enumerate_augs
    braid = rng.choice([UNLINK2, UNLINK3, BraidWord(2, [1, 1]), BraidWord(2, [1, 1, 1])])
    field = rng.choice([F2, F3])
    pool = _pool(braid, field)
    cand = rng.choice(pool)
    sheaf = aug_to_sheaf(cand, braid)
    if not validate(sheaf).ok:
        return _random_valid_sheaf(rng)
    if rng.random() < 0.3:
        sheaf = extend_by_constant(sheaf, rng.randint(1, 2))
    return sheaf


_POOLS = {}


def _pool(braid, field):
    from cordsheaf.moduli import enumerate_augs
    key = (braid, field)
    if key not in _POOLS:
        _POOLS[key] = enumerate_augs(braid, field)
    return _POOLS[key]


def test_once_stabilized_examples():
    _, sheaf = golden_sheaf()
    V0 = stabilized_space(sheaf)
    assert V0.dim == 2
    # images of Id - M2 and Id - M3 in the (R0, R2, R3) coordinates
    assert V0 == Subspace.from_vectors(F5, 3, [
        [F5.zero(), F5.one(), F5.zero()],
        [F5.zero(), F5.zero(), F5.one()],
    ])
    sub = once_stabilized(sheaf)
    assert sub.N == 2
    trivial = SheafData(F3, UNLINK2, 2, [Matrix.identity(F3, 2)] * 2,
                        [Subspace.from_vectors(F3, 2, [[F3.one(), F3.zero()]])] * 2, ())
    assert stabilized_space(trivial).dim == 0
    one_dim = SheafData(F3, BraidWord(1, []), 1, [Matrix.from_rows(F3, [[2]])],
                        [Subspace.zero(F3, 1)], ())
    assert stabilized_space(one_dim).dim == 1


def test_once_stabilized_not_idempotent_in_general():
    # applying the operation twice genuinely shrinks the worked example:
    # the zero-row strand acts unipotently through the extension direction
    # only, so its displacement image dies after the first restriction
    _, sheaf = golden_sheaf()
    first = once_stabilized(sheaf)
    second = once_stabilized(first)
    assert first.N == 2 and second.N == 1
    # on stable objects the operation is the identity on dimensions
    stable = SheafData(F3, BraidWord(1, []), 1, [Matrix.from_rows(F3, [[2]])],
                       [Subspace.zero(F3, 1)], ())
    assert is_stable(stable)
    assert once_stabilized(stable).N == 1


def test_stability_counterexample_from_two_unlink():
    # V_0 = V but nonzero global sections: not stable
    m1 = Matrix.from_rows(F3, [[1, 1], [0, 1]])
    m2 = Matrix.from_rows(F3, [[1, 0], [0, 2]])
    fixed1 = Subspace.from_vectors(F3, 2, [[F3.one(), F3.zero()]])
    sheaf = SheafData(F3, UNLINK2, 2, [m1, m2], [fixed1, fixed1], ())
    assert validate(sheaf).ok
    assert stabilized_space(sheaf).dim == 2
    assert global_sections(sheaf).dim == 1
    assert not is_stable(sheaf)


def test_all_identity_not_stable():
    hyper = Subspace.from_vectors(F3, 2, [[F3.one(), F3.zero()]])
    sheaf = SheafData(F3, UNLINK2, 2, [Matrix.identity(F3, 2)] * 2, [hyper, hyper], ())
    assert not is_stable(sheaf)


def test_smallest_sheaf_valid():
    # one-dimensional space, identity meridian, zero stalk: valid data (only
    # stalk dimensions are constrained), though nothing about it is reduced
    tiny = SheafData(F3, BraidWord(1, []), 1, [Matrix.identity(F3, 1)],
                     [Subspace.zero(F3, 1)], ())
    assert validate(tiny).ok


def test_reduced_examples():
    _, sheaf = golden_sheaf()
    assert is_reduced(sheaf)
    # extended-by-zero constant on the whole link: a split summand, not reduced
    j_shriek = SheafData(F3, BraidWord(1, []), 1, [Matrix.identity(F3, 1)],
                         [Subspace.zero(F3, 1)], ())
    assert not is_reduced(j_shriek)
    # stable implies reduced on a healthy example
    stable = SheafData(F3, BraidWord(1, []), 1, [Matrix.from_rows(F3, [[2]])],
                       [Subspace.zero(F3, 1)], ())
    assert is_stable(stable) and is_reduced(stable)


def test_stable_implies_reduced_sampled():
    rng = random.Random(1)
    stable_seen = 0
    for _ in range(600):
        sheaf = _random_valid_sheaf(rng)
        if is_stable(sheaf):
            stable_seen += 1
            assert is_reduced(sheaf)
    assert stable_seen > 30


def test_degenerate_objects_excluded_from_predicates():
    deg = DegenerateSummand(1, F3.scalar(2))
    sheaf = SheafData(F3, BraidWord(1, []), 0, [Matrix(F3, [])],
                      [Subspace.zero(F3, 0)], [deg])
    assert validate(sheaf).ok
    assert not is_stable(sheaf)
    assert not is_reduced(sheaf)


def test_isomorphic_examples():
    _, sheaf = golden_sheaf()
    P = isomorphic(sheaf, sheaf)
    assert P is not None and P.is_invertible()
    # conjugating by the diagonal dilation matrix gives an isomorphic object
    D = Matrix.from_rows(F5, [[1, 0, 0], [0, 2, 0], [0, 0, 2]])
    conj = SheafData(F5, UNLINK3, 3,
                     [D * m * D.inverse() for m in sheaf.M],
                     [w.apply(D) for w in sheaf.W], ())
    assert validate(conj).ok
    assert isomorphic(sheaf, conj) is not None
    # different meridian spectra can never be isomorphic
    other = SheafData(F5, BraidWord(1, []), 1, [Matrix.from_rows(F5, [[2]])],
                      [Subspace.zero(F5, 1)], ())
    other2 = SheafData(F5, BraidWord(1, []), 1, [Matrix.from_rows(F5, [[3]])],
                       [Subspace.zero(F5, 1)], ())
    assert isomorphic(other, other2) is None


def test_isomorphic_distinguishes_stalk_configurations():
    # same meridian matrices, stalk line moved to a non-invariant position
    m = Matrix.from_rows(F3, [[1, 0], [0, 2]])
    eye = Matrix.identity(F3, 2)
    w_a = Subspace.from_vectors(F3, 2, [[F3.one(), F3.zero()]])
    w_b = Subspace.from_vectors(F3, 2, [[F3.one(), F3.one()]])
    A = SheafData(F3, UNLINK2, 2, [eye, m], [w_a, w_a], ())
    B = SheafData(F3, UNLINK2, 2, [eye, m], [w_b, w_a], ())
    assert validate(A).ok
    got = isomorphic(A, B)
    assert got is None  # w_b is not fixed by m, so B is not even valid data


def test_sheaf_json_roundtrip():
    _, sheaf = golden_sheaf()
    again = SheafData.from_json(sheaf.to_json())
    assert again == sheaf
    deg = SheafData(F3, BraidWord(1, []), 0, [Matrix(F3, [])],
                    [Subspace.zero(F3, 0)], [DegenerateSummand(1, F3.scalar(2))])
    assert SheafData.from_json(deg.to_json()) == deg
