import pytest

from glie.errors import SpecError, TheoremViolation, UnsupportedField
from glie.fields import FieldSpec, find_nonsquare
from glie.gradings import (
    GradingDescriptor,
    associative_closure_ok,
    classify_up_to_iso,
    descriptor_to_algebra,
    enumerate_z2_gradings,
    lift_sl2_grading_to_gl2,
    m2_automorphisms,
    natural_characterization,
    natural_sl2_descriptor,
    reference_m2_descriptors,
    remark_boboc,
    sl2_automorphisms,
    unit_component_check,
)
from glie.linalg import MatrixGF, SubspaceBasis

GF5 = FieldSpec.prime(5)


def test_sl2_automorphism_count_and_closure():
    autos = sl2_automorphisms(GF5)
    assert len(autos) == 120  # |PGL2(F5)|, found by brute force
    # spot-check bracket compatibility on a few entries
    from glie.algebra import sl2

    L = sl2(GF5)
    for m in autos[:10]:
        phi = MatrixGF.from_rows(GF5, [[int(v) for v in row] for row in m])
        for i in range(3):
            for j in range(i + 1, 3):
                lhs = phi.matvec(L.bracket(L.basis_element(i), L.basis_element(j)).coeffs)
                left = L.element(phi.matvec(L.basis_element(i).coeffs))
                right = L.element(phi.matvec(L.basis_element(j).coeffs))
                assert list(lhs) == list(L.bracket(left, right).coeffs)


def test_m2_automorphism_count():
    assert len(m2_automorphisms(GF5)) == 120


def test_enumerate_m2_gradings():
    gradings = enumerate_z2_gradings("m2_assoc", GF5)
    assert len(gradings) == 26
    assert gradings[0].dims() == (4, 0)  # trivial included
    diagonal = SubspaceBasis.from_vectors(GF5, 4, [[1, 0, 0, 0], [0, 0, 0, 1]])
    assert any(d.even.rows == diagonal.rows for d in gradings)


def test_enumerate_sl2_gradings():
    gradings = enumerate_z2_gradings("sl2_lie", GF5)
    assert len(gradings) == 26
    natural = natural_sl2_descriptor(GF5)
    assert any(d.key() == natural.key() for d in gradings)
    # no grading has a zero even part
    assert all(d.even.dim > 0 for d in gradings)
    # nontrivial gradings all have a 1-dimensional even part
    assert {d.dims() for d in gradings} == {(3, 0), (1, 2)}


def test_enumeration_rejects_extension_fields():
    with pytest.raises(UnsupportedField):
        enumerate_z2_gradings("m2_assoc", FieldSpec.extension(5, 2))


def test_classify_m2_three_classes():
    gradings = enumerate_z2_gradings("m2_assoc", GF5)
    classes = classify_up_to_iso(gradings)
    assert len(classes) == 3
    assert sum(c.size for c in classes) == 26
    by_dims = {(c.even_dim, c.odd_dim) for c in classes}
    assert by_dims == {(4, 0), (2, 2)}


def test_classify_m2_representatives_match_displays():
    gradings = enumerate_z2_gradings("m2_assoc", GF5)
    classes = classify_up_to_iso(gradings)
    refs = reference_m2_descriptors(GF5)
    # each displayed grading falls into a distinct class: check via orbit
    # invariants (dims + the zyq separating certificate)
    from glie.identities import check_identity
    from glie.freelie import zyq_zy

    def certificate(d):
        alg = descriptor_to_algebra(d)
        return (d.even.dim, d.odd.dim,
                check_identity(zyq_zy(5), alg, graded=True).holds)

    ref_certs = {certificate(d) for d in refs}
    class_certs = {(c.even_dim, c.odd_dim, c.zyq_identity_holds) for c in classes}
    assert ref_certs == class_certs
    assert len(ref_certs) == 3


def test_classify_sl2_three_classes():
    gradings = enumerate_z2_gradings("sl2_lie", GF5)
    classes = classify_up_to_iso(gradings)
    assert len(classes) == 3
    certs = {(c.even_dim, c.odd_dim, c.zyq_identity_holds) for c in classes}
    assert certs == {(3, 0, True), (1, 2, True), (1, 2, False)}


def test_conjugated_natural_grading_same_class():
    # conjugating the natural grading by diag(1,2) must stay in its class
    from glie.algebra import sl2

    g = (GF5.from_int(1), GF5.zero(), GF5.zero(), GF5.from_int(2))
    # adjoint action of diag(1,2) on sl2 basis (h, e, f):
    # h -> h, e -> (1/2) e, f -> 2 f
    phi = MatrixGF.from_rows(GF5, [[1, 0, 0], [0, 3, 0], [0, 0, 2]])
    natural = natural_sl2_descriptor(GF5)
    conj = GradingDescriptor(
        "sl2", GF5,
        SubspaceBasis.from_vectors(GF5, 3, [phi.matvec(r) for r in natural.even.rows]),
        SubspaceBasis.from_vectors(GF5, 3, [phi.matvec(r) for r in natural.odd.rows]),
        "conjugated-natural")
    classes = classify_up_to_iso([natural, conj])
    assert len(classes) == 1
    assert classes[0].size == 2


def test_unit_component_criterion_both_directions():
    gradings = enumerate_z2_gradings("sl2_lie", GF5)
    for d in gradings:
        lifted_even = lift_sl2_grading_to_gl2(d, unit_in_even=True)
        assert unit_component_check(lifted_even) is True
        assert associative_closure_ok(lifted_even)
        lifted_odd = lift_sl2_grading_to_gl2(d, unit_in_even=False)
        assert unit_component_check(lifted_odd) is False
        assert not associative_closure_ok(lifted_odd)
    for d in enumerate_z2_gradings("m2_assoc", GF5):
        assert unit_component_check(d) is True


def test_descriptor_validation_rejects_bad_split():
    # even = span{e}, odd = span{h, f} is not a Lie grading of sl2
    with pytest.raises(SpecError):
        GradingDescriptor(
            "sl2", GF5,
            SubspaceBasis.from_vectors(GF5, 3, [[0, 1, 0]]),
            SubspaceBasis.from_vectors(GF5, 3, [[1, 0, 0], [0, 0, 1]]),
            "bad")


def test_natural_characterization_identity_map():
    verdict = natural_characterization(natural_sl2_descriptor(GF5))
    assert verdict.hypotheses_hold
    iso = verdict.isomorphism
    assert iso.entries == MatrixGF.identity(GF5, 3).entries


def test_natural_characterization_nonsquare_fails_qpower():
    gradings = enumerate_z2_gradings("sl2_lie", GF5)
    nonsquare = [d for d in gradings if d.dims() == (1, 2)
                 and not descriptor_zyq(d)]
    assert nonsquare
    verdict = natural_characterization(nonsquare[0])
    assert not verdict.hypotheses_hold
    assert verdict.failing == "q-power"
    assert verdict.witness


def descriptor_zyq(d):
    from glie.freelie import zyq_zy
    from glie.identities import check_identity

    return check_identity(zyq_zy(5), descriptor_to_algebra(d), graded=True).holds


def test_natural_characterization_trivial_fails_dims():
    gradings = enumerate_z2_gradings("sl2_lie", GF5)
    trivial = [d for d in gradings if d.dims() == (3, 0)][0]
    verdict = natural_characterization(trivial)
    assert not verdict.hypotheses_hold
    assert verdict.failing == "dim-even"


def test_natural_characterization_all_qualifying_gradings():
    # every enumerated grading satisfying the hypotheses maps to the natural
    # one; the theorem-violation path never fires
    gradings = enumerate_z2_gradings("sl2_lie", GF5)
    natural = natural_sl2_descriptor(GF5)
    qualified = 0
    for d in gradings:
        verdict = natural_characterization(d)
        if verdict.hypotheses_hold:
            qualified += 1
            phi = verdict.isomorphism
            image_even = SubspaceBasis.from_vectors(
                GF5, 3, [phi.matvec(r) for r in d.even.rows])
            image_odd = SubspaceBasis.from_vectors(
                GF5, 3, [phi.matvec(r) for r in d.odd.rows])
            assert image_even.rows == natural.even.rows
            assert image_odd.rows == natural.odd.rows
    assert qualified == 15  # the orbit of the natural grading


def test_remark_boboc_frozen_gf5():
    report = remark_boboc(GF5)
    assert report.bprime.code == 2
    assert report.lhs == (0, 2, 1, 0)   # 2 e12 + e21
    assert report.rhs == (0, 3, 4, 0)   # 3 e12 + 4 e21 = -2 lhs... scaled by (4b)^2 = 4
    assert report.differ
    assert report.control_equal


def test_remark_boboc_gf7():
    report = remark_boboc(FieldSpec.prime(7))
    assert report.bprime.code == 3
    assert report.lhs == (0, 2, 1, 0)
    assert report.rhs == (0, 5, 6, 0)   # (4b)^3 = 12^3 = -1: rhs = -lhs
    assert report.differ and report.control_equal
