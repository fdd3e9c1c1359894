import random

import pytest

from trackgamma.abelian import AbGroup, MMatrix
from trackgamma.cohomology import solve_pseudosection
from trackgamma.fixtures import table_fixtures
from trackgamma.gamma import (GammaFunctorPair, InterchangeStructure, PseudoHomotopy, StructureError,
                              additivity_track, canonical_gamma, closed_form_gamma,
                              corrupt_compositor, entry_family, equivalence_pair, find_gamma_violation,
                              general_gamma, grid_alphas, identity_transformation,
                              multiplication_track, perturbed_cogroup, reduce_pseudofunctor,
                              seeded_entry_map, self_track_generators, strict_cogroup,
                              structural_homs, transformations_equal, verify_homotopy,
                              verify_naturality, verify_property_gamma, verify_pseudofunctor,
                              verify_transformation, verify_trivial_tracks)
from trackgamma.nilgroup import (Nil2Hom, block_sum, hom_compose, identity_hom, inclusion_hom,
                                 parse_element, power_hom, product_hom, random_hom,
                                 retraction_hom)
from trackgamma.trackcat import split_model

M4 = AbGroup.cyclic(4)


@pytest.fixture(scope="module")
def model():
    return split_model(M4, 3)


@pytest.fixture(scope="module")
def structures(model):
    return perturbed_cogroup(model, 1, 11), perturbed_cogroup(model, 1, 12)


# pseudofunctors

def test_strict_structures_are_pseudofunctors(model):
    for rank in (1, 2):
        F = strict_cogroup(model, rank)
        assert verify_pseudofunctor(F).ok
        assert F.is_reduced()


def test_perturbed_structures_are_reduced_pseudofunctors(structures):
    for F in structures:
        assert F.is_reduced()
        assert verify_pseudofunctor(F).ok
        assert any(not F.compositor(power_hom(2), power_hom(3)).is_zero() for F in structures)


def test_corrupted_compositor_is_found_at_a_triple(structures):
    X, _ = structures
    bad = corrupt_compositor(X, power_hom(2), power_hom(3), MMatrix.unit(M4, 1, 1, 0, 0, (1,)))
    rep = verify_pseudofunctor(bad, samples=[power_hom(3)] + structural_homs(2))
    assoc = rep.statements["associativity of compositors"]
    assert assoc.failed and assoc.witnesses
    assert any("x1^2" in str(w) or "x1^3" in str(w) for w in assoc.witnesses)


@pytest.mark.parametrize("name", ["z2-trivial", "arrow-split", "rank1-split-mod4"])
def test_table_pseudosections_pass_exhaustively(name):
    s = solve_pseudosection(table_fixtures()[name])
    assert verify_pseudofunctor(s).ok


def test_split_pseudosection_is_a_pseudofunctor(model):
    assert verify_pseudofunctor(solve_pseudosection(model), samples=60).ok


def test_reduction_by_basepoints_changes_nothing(model):
    F = strict_cogroup(model, 1)
    G, t = reduce_pseudofunctor(F, lambda al: model.idtrack(F(al)))
    alphas = structural_homs(2)
    for be in alphas:
        for al in alphas:
            if be.source_rank == al.target_rank:
                assert G.compositor(be, al) == F.compositor(be, al)
    assert transformations_equal(t, identity_transformation(F), alphas)


def test_reduction_transformation_is_natural(model):
    F = strict_cogroup(model, 1)
    xi = entry_family(F, seeded_entry_map(M4, 1, 3))
    G, t = reduce_pseudofunctor(F, xi)
    rng = random.Random(0)
    pairs = [(random_hom(rng, 2, 1, 1), random_hom(rng, 1, 2, 1)) for _ in range(10)]
    assert verify_transformation(t, pairs).ok


def test_unreduced_structures_are_rejected(model):
    F = strict_cogroup(model, 1)
    shifted = F.__class__(model, 1, F._maps, F._comp, lambda n: MMatrix.unit(M4, n, n, 0, 0, (1,)) if n
                          else MMatrix.zeros(M4, 0, 0))
    with pytest.raises(StructureError, match="reduced"):
        InterchangeStructure(identity_hom(1), shifted, F)


# interchange tracks

def test_trivial_tracks(structures):
    X, Y = structures
    I = canonical_gamma(power_hom(2), X, Y)
    assert verify_trivial_tracks(I).ok
    assert additivity_track(I, 1).coords.is_zero()
    assert additivity_track(I, 0).coords.shape == (0, 1)


def test_boxbox_of_basepoints_is_a_basepoint(model):
    F = strict_cogroup(model, 1)
    I = canonical_gamma(power_hom(2), F, F)
    rng = random.Random(2)
    for _ in range(10):
        a = random_hom(rng, 1, 2, 1)
        b = random_hom(rng, 2, 2, 1)
        assert I.box(b, a, I.zeros(2, 2), I.zeros(2, 1)).is_zero()


def test_additivity_track_satisfies_its_restrictions(structures):
    X, Y = structures
    I = canonical_gamma(power_hom(2), X, Y)
    for n in (2, 3):
        a = product_hom(n)
        for g in range(1, n + 1):
            r = retraction_hom(n, g)
            assert I.boxbox(r, a) == I.gamma(hom_compose(r, a))
            assert I.gamma(hom_compose(r, a)).is_zero()


def test_negative_track_constraint(structures):
    X, Y = structures
    I = canonical_gamma(power_hom(2), X, Y)
    copair = Nil2Hom(2, 1, (parse_element("x1", 1), parse_element("x1^-1", 1)))
    # (1, xi_-1) o alpha_2 = xi_0 has a trivial track
    assert I.boxbox(copair, product_hom(2)).is_zero()
    assert I.box(power_hom(-1), power_hom(-1), I.mu(-1), I.mu(-1)).is_zero()
    assert multiplication_track(I, -1).coords == I.mu(-1)


def test_general_tracks_on_structural_maps(structures):
    X, Y = structures
    I = canonical_gamma(power_hom(3), X, Y)
    for n in (1, 2, 3):
        for e in range(1, n + 1):
            assert general_gamma(I, inclusion_hom(n, e)).coords.is_zero()
            assert general_gamma(I, retraction_hom(n, e)).coords.is_zero()
    for k in range(-4, 5):
        assert I.gamma(power_hom(k)) == I.mu(k)


def test_sum_formula(structures):
    X, Y = structures
    I = canonical_gamma(power_hom(2), X, Y)
    rng = random.Random(9)
    for _ in range(15):
        a, b = random_hom(rng, 1, 2, 1), random_hom(rng, rng.randint(1, 2), 1, 1)
        assert I.gamma(block_sum([a, b])) == MMatrix.block_diag(M4, [I.gamma(a), I.gamma(b)])


def test_identity_and_zero_maps_have_trivial_tracks(structures):
    X, _ = structures
    for f in (identity_hom(1), power_hom(0)):
        I = canonical_gamma(f, X, X)
        assert all(I.gamma(al).is_zero() for al in grid_alphas(2, 3))


def test_closed_form_for_perturbed_structures(model):
    F = strict_cogroup(model, 1)
    hX, hY = seeded_entry_map(M4, 1, 21), seeded_entry_map(M4, 1, 22)
    X, _ = reduce_pseudofunctor(F, entry_family(F, hX))
    Y, _ = reduce_pseudofunctor(F, entry_family(F, hY))
    I = canonical_gamma(power_hom(3), X, Y)
    dX = lambda al: entry_family(F, hX)(al).coords  # noqa: E731
    dY = lambda al: entry_family(F, hY)(al).coords  # noqa: E731
    for al in grid_alphas(2, 3):
        assert I.gamma(al) == closed_form_gamma(I, al, dX, dY)


def test_perturbed_track_is_detected(structures):
    X, Y = structures
    I = canonical_gamma(power_hom(2), X, Y)
    al = Nil2Hom(1, 2, (parse_element("x1^2 x2", 2),))
    J = I.with_overrides({al: I.gamma(al) + MMatrix.unit(M4, 2, 1, 1, 0, (2,))})
    assert find_gamma_violation(I, al) is None
    assert find_gamma_violation(J, al) is not None
    # tracks not overridden are shared with the original structure
    assert J.gamma(power_hom(2)) == I.gamma(power_hom(2))


def test_property_gamma_on_structural_pairs(structures):
    X, Y = structures
    I = canonical_gamma(power_hom(-1), X, Y)
    homs = structural_homs(3)
    pairs = [(b, a) for b in homs for a in homs if b.source_rank == a.target_rank]
    assert verify_property_gamma(I, pairs).ok


def test_certification(structures):
    X, Y = structures
    I = canonical_gamma(power_hom(2), X, Y, certify_on=[(power_hom(2), power_hom(3))])
    assert I.is_gamma_structure


# naturality

def test_naturality_degenerate_cases(structures):
    X, Y = structures
    I = canonical_gamma(power_hom(2), X, Y)
    Iid = canonical_gamma(identity_hom(1), Y, Y)
    alphas = grid_alphas(2, 2)
    assert verify_naturality(I, Ig=Iid, Igf=I, alphas=alphas).ok
    assert verify_naturality(I, psi=I.model.idtrack(power_hom(2)), Ipsi=I, alphas=alphas).ok


def test_naturality_for_a_composite(model, structures):
    X, Y = structures
    Z = perturbed_cogroup(model, 1, 13)
    If = canonical_gamma(power_hom(2), X, Y)
    Ig = canonical_gamma(power_hom(3), Y, Z)
    assert verify_naturality(If, Ig, alphas=[product_hom(2)] + grid_alphas(2, 2)).ok


def test_naturality_along_self_tracks(structures):
    X, Y = structures
    If = canonical_gamma(power_hom(2), X, Y)
    for psi in self_track_generators(If.model, power_hom(2)):
        assert verify_naturality(If, psi=psi, alphas=grid_alphas(2, 2)).ok


# equivalence

def test_unit_of_the_strict_structure_is_the_identity(model):
    E = GammaFunctorPair(model)
    F = E.T_object(1)
    u, _ = E.unit(F)
    assert transformations_equal(u, identity_transformation(F), structural_homs(2))


def test_unit_is_invertible_for_a_perturbed_structure(model):
    E = GammaFunctorPair(model)
    F = perturbed_cogroup(model, 2, 4)
    u, v = E.unit(F)
    alphas = structural_homs(2) + [random_hom(random.Random(1), 1, 2, 1)]
    assert transformations_equal(u.then(v), identity_transformation(F), alphas)


def test_images_of_tracks_are_homotopies(model):
    E = GammaFunctorPair(model)
    rng = random.Random(6)
    f = model.random_rebase(rng, power_hom(2))
    s = model.random_track(rng, f)
    H = E.T_track(s)
    assert isinstance(H, PseudoHomotopy)
    assert verify_homotopy(H, structural_homs(2)).ok
    assert model.track_eq(E.G_track(H), s)


def test_abelian_theory_needs_odd_coefficients():
    with pytest.raises(StructureError, match="2-torsion"):
        equivalence_pair(split_model(AbGroup.cyclic(4), 2), theory="nil1")
    assert equivalence_pair(split_model(AbGroup.cyclic(3), 2), theory="nil1").theory == "nil1"
