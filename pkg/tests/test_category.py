import itertools

import pytest

from qshape.category import (
    QuiverSpec, build_category, check_serre_naturality, find_serre, has_cycles,
    validate_setup, SerreFailure,
)
from qshape.exactlin import GF, QQ


def test_linear_hom_dims():
    cat = build_category(QuiverSpec.linear(), (-3, 3))
    for q in range(-3, 4):
        for p in range(-3, 4):
            assert cat.dim(q, p) == (1 if p in (q, q - 1) else 0)


def brute_force_linear_dim(N, q, p):
    # paths q -> p are unique; nonzero unless they contain N consecutive arrows
    return 1 if 0 <= q - p < N else 0


def test_nlinear_hom_dims():
    cat = build_category(QuiverSpec.nlinear(3), (-4, 4))
    for q in range(-4, 5):
        for p in range(-4, 5):
            assert cat.dim(q, p) == brute_force_linear_dim(3, q, p)


def test_cyclic_hom_dims():
    cat = build_category(QuiverSpec.cyclic(3))
    for q in range(3):
        assert cat.dim(q, q) == 1
        assert cat.dim(q, (q - 1) % 3) == 1
        assert cat.dim(q, (q + 1) % 3) == 0


def test_compose_examples():
    cat = build_category(QuiverSpec.linear(), (-3, 3))
    d2, d1 = cat.arrow("d2"), cat.arrow("d1")
    assert cat.compose(d1, d2).coeffs == ()
    assert cat.compose(cat.identity(1), d2) == d2
    n3 = build_category(QuiverSpec.nlinear(3), (-4, 4))
    e = n3.compose(n3.arrow("d1"), n3.arrow("d2"))
    assert (e.source, e.target) == (2, 0) and e.coeffs == (1,)
    assert n3.hom_basis(2, 0) == ((n3.arrow_index["d2"], n3.arrow_index["d1"]),)


def test_compose_endpoint_mismatch():
    cat = build_category(QuiverSpec.linear(), (-3, 3))
    with pytest.raises(ValueError):
        cat.compose(cat.arrow("d2"), cat.arrow("d2"))


def _assoc(cat):
    objs = cat.objects
    for p in objs:
        for q in cat.out_support(p):
            for r in cat.out_support(q):
                for s in cat.out_support(r):
                    for i, j, k in itertools.product(range(cat.dim(p, q)), range(cat.dim(q, r)), range(cat.dim(r, s))):
                        f = cat.zero(p, q)._replace(coeffs=tuple(1 if x == i else 0 for x in range(cat.dim(p, q))))
                        g = cat.zero(q, r)._replace(coeffs=tuple(1 if x == j else 0 for x in range(cat.dim(q, r))))
                        h = cat.zero(r, s)._replace(coeffs=tuple(1 if x == k else 0 for x in range(cat.dim(r, s))))
                        assert cat.compose(cat.compose(h, g), f) == cat.compose(h, cat.compose(g, f))


@pytest.mark.parametrize("spec,window", [
    (QuiverSpec.linear(), (-4, 4)),
    (QuiverSpec.nlinear(3), (-5, 5)),
    (QuiverSpec.cyclic(3), None),
    (QuiverSpec.za3(), (-4, 4)),
])
def test_associativity(spec, window):
    _assoc(build_category(spec, window))


def test_za3_mesh_dims():
    cat = build_category(QuiverSpec.za3(), (-6, 6))
    assert cat.nilpotency_degree == 3
    # hom from a middle vertex: itself, two neighbours, and the next middle vertex
    assert {q: cat.dim((-1, 0), q) for q in cat.out_support((-1, 0))} == {
        (-1, 0): 1, (0, 1): 1, (0, -1): 1, (1, 0): 1}
    # from an outer vertex: itself, the middle neighbour, the opposite outer vertex
    assert {q: cat.dim((0, 1), q) for q in cat.out_support((0, 1))} == {
        (0, 1): 1, (1, 0): 1, (2, -1): 1}


@pytest.mark.parametrize("spec,window,expected", [
    (QuiverSpec.linear(), (-8, 8), lambda q: q - 1),
    (QuiverSpec.nlinear(2), (-8, 8), lambda q: q - 1),
    (QuiverSpec.nlinear(3), (-10, 10), lambda q: q - 2),
    (QuiverSpec.nlinear(4), (-12, 12), lambda q: q - 3),
    (QuiverSpec.cyclic(1), None, lambda q: 0),
    (QuiverSpec.cyclic(2), None, lambda q: (q - 1) % 2),
    (QuiverSpec.cyclic(3), None, lambda q: (q - 1) % 3),
    (QuiverSpec.za3(), (-8, 8), lambda o: (o[0] + 2, -o[1])),
])
def test_setup_passes_with_expected_serre(spec, window, expected):
    cat = build_category(spec, window)
    rep = validate_setup(cat)
    assert rep.all_pass, rep.failures()
    assert rep.serre_data.object_map
    for p, y in rep.serre_data.object_map.items():
        assert y == expected(p)
    for p in rep.serre_data.object_map:
        for q in cat.out_support(p):
            assert rep.serre_data.pairing(p, q).is_invertible()
    assert check_serre_naturality(cat, rep.serre_data) == []


def test_nilpotence_failure_relation_free():
    cat = build_category(QuiverSpec.linear(None), (-4, 4))
    rep = validate_setup(cat)
    assert not rep.nilpotence.passed
    assert rep.nilpotence.witness["length"] == 8


def test_serre_failure_deleted_relation():
    cat = build_category(QuiverSpec.linear(2, omitted=[1]), (-6, 6))
    rep = validate_setup(cat)
    assert rep.nilpotence.passed
    assert not rep.serre.passed
    assert rep.serre.witness == 0


def test_one_object_no_arrows():
    cat = build_category(QuiverSpec.finite(["*"], []))
    data = find_serre(cat)
    assert data.object_map == {"*": "*"}
    assert data.pairing("*", "*").rows == ((1,),)


def test_has_cycles():
    assert not has_cycles(build_category(QuiverSpec.linear(), (-3, 3)))
    assert has_cycles(build_category(QuiverSpec.cyclic(3)))
    assert not has_cycles(build_category(QuiverSpec.za3(), (-4, 4)))


@pytest.mark.parametrize("spec,window", [
    (QuiverSpec.linear(), (-6, 6)),
    (QuiverSpec.nlinear(3), (-10, 10)),
    (QuiverSpec.cyclic(2), None),
    (QuiverSpec.za3(), (-8, 8)),
    (QuiverSpec.linear(None), (-4, 4)),
    (QuiverSpec.linear(2, omitted=[1]), (-6, 6)),
])
def test_duality_symmetry(spec, window):
    cat = build_category(spec, window)
    a, b = validate_setup(cat), validate_setup(cat.opposite())
    assert a.all_pass == b.all_pass
    assert a.nilpotence.passed == b.nilpotence.passed


def test_window_stability():
    small = build_category(QuiverSpec.nlinear(3), (-6, 6))
    big = build_category(QuiverSpec.nlinear(3), (-12, 12))
    for p in small.core():
        for q in small.objects:
            assert small.dim(p, q) == big.dim(p, q)
            assert small.hom_basis(p, q) != () or big.dim(p, q) == 0
    assert validate_setup(small).all_pass == validate_setup(big).all_pass


def test_finite_quiver_with_commutativity():
    # commutative square a;b = c;e, plus nothing else; not Serre (not self-injective)
    spec = QuiverSpec.finite(
        [1, 2, 3, 4],
        [("a", 1, 2), ("b", 2, 4), ("c", 1, 3), ("e", 3, 4)],
        [[(1, ("a", "b")), (-1, ("c", "e"))]],
    )
    cat = build_category(spec)
    assert cat.dim(1, 4) == 1
    assert isinstance(find_serre(cat), SerreFailure)


def test_prime_field_build():
    cat = build_category(QuiverSpec.za3(), (-6, 6), GF(2))
    assert validate_setup(cat).all_pass
